//! Line-oriented group definition language.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! group S3 = perm 3 gens (1 2), (1 2 3)
//! group C6 = cyclic 6
//! group D8 = dihedral 8
//! group P  = modular p=3 n=2
//! group G  = direct S3 C6
//! group F1 = semidirect C3 P action a->a, b->b*a^3
//! group EX = example primes=[3,5,7] exps=[2,3,4] N=3
//! ```
//!
//! Names must be unique and references resolve to previously defined names.
//! The parser never panics on malformed input; every error carries the line
//! and column it was detected at.

use std::fmt;

/// Upper bound on permutation degrees accepted by the parser; keeps a single
/// image array small regardless of input.
pub const MAX_PERM_DEGREE: u16 = 4096;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DefError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: duplicate group name `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: reference to undefined group `{name}`")]
    Unresolved { line: usize, name: String },
}

/// A generator word over named generators, e.g. `b*a^3` or `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(pub Vec<(String, i64)>);

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let terms: Vec<String> = self
            .0
            .iter()
            .map(|(name, e)| {
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", terms.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constructor {
    Perm {
        degree: u16,
        /// One entry per generator; each generator is a product of disjoint
        /// cycles over 1-based points.
        generators: Vec<Vec<Vec<u16>>>,
    },
    Cyclic(u64),
    Dihedral(u64),
    Modular {
        p: u64,
        n: u32,
    },
    Direct {
        left: String,
        right: String,
    },
    Semidirect {
        actor: String,
        base: String,
        action: Vec<(String, Word)>,
    },
    Example {
        primes: Vec<u64>,
        exps: Vec<u32>,
        truncation: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDefinition {
    pub name: String,
    pub ctor: Constructor,
    /// Source line, for diagnostics during building.
    pub line: usize,
}

impl fmt::Display for GroupDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group {} = ", self.name)?;
        match &self.ctor {
            Constructor::Perm { degree, generators } => {
                write!(f, "perm {degree} gens ")?;
                let gens: Vec<String> = generators
                    .iter()
                    .map(|cycles| {
                        if cycles.is_empty() {
                            "()".to_string()
                        } else {
                            cycles
                                .iter()
                                .map(|c| {
                                    let pts: Vec<String> =
                                        c.iter().map(|p| p.to_string()).collect();
                                    format!("({})", pts.join(" "))
                                })
                                .collect::<String>()
                        }
                    })
                    .collect();
                write!(f, "{}", gens.join(", "))
            }
            Constructor::Cyclic(m) => write!(f, "cyclic {m}"),
            Constructor::Dihedral(m) => write!(f, "dihedral {m}"),
            Constructor::Modular { p, n } => write!(f, "modular p={p} n={n}"),
            Constructor::Direct { left, right } => write!(f, "direct {left} {right}"),
            Constructor::Semidirect {
                actor,
                base,
                action,
            } => {
                let maps: Vec<String> = action.iter().map(|(g, w)| format!("{g}->{w}")).collect();
                write!(f, "semidirect {actor} {base} action {}", maps.join(", "))
            }
            Constructor::Example {
                primes,
                exps,
                truncation,
            } => {
                let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
                let es: Vec<String> = exps.iter().map(|e| e.to_string()).collect();
                write!(
                    f,
                    "example primes=[{}] exps=[{}] N={truncation}",
                    ps.join(","),
                    es.join(",")
                )
            }
        }
    }
}

/// Parse a standalone cycle list (the part after `gens`), e.g.
/// `(1 2)(3 4), (1 2 3)`. Used directly by tests and fuzzing; the file
/// parser goes through the same code path.
pub fn parse_cycle_list(text: &str, degree: u16) -> Result<Vec<Vec<Vec<u16>>>, DefError> {
    let mut p = LineParser::new(text, 1);
    let mut generators = Vec::new();
    loop {
        generators.push(p.parse_generator_cycles(degree)?);
        p.skip_ws();
        if !p.eat(',') {
            break;
        }
    }
    p.end_of_line()?;
    Ok(generators)
}

/// Parse a standalone generator word, e.g. `b*a^3`.
pub fn parse_word_text(text: &str) -> Result<Word, DefError> {
    let mut p = LineParser::new(text, 1);
    let w = p.parse_word()?;
    p.end_of_line()?;
    Ok(w)
}

/// Parse a full definition file.
pub fn parse_definitions(text: &str) -> Result<Vec<GroupDefinition>, DefError> {
    let mut out: Vec<GroupDefinition> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let def = LineParser::new(line, line_no).parse_statement()?;
        if out.iter().any(|d| d.name == def.name) {
            return Err(DefError::Duplicate {
                line: line_no,
                name: def.name,
            });
        }
        // direct/semidirect must reference previously defined names
        let refs: Vec<&String> = match &def.ctor {
            Constructor::Direct { left, right } => vec![left, right],
            Constructor::Semidirect { actor, base, .. } => vec![actor, base],
            _ => vec![],
        };
        for r in refs {
            if !out.iter().any(|d| &d.name == r) {
                return Err(DefError::Unresolved {
                    line: line_no,
                    name: r.clone(),
                });
            }
        }
        out.push(def);
    }
    Ok(out)
}

struct LineParser<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    src: &'a str,
}

impl<'a> LineParser<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        LineParser {
            chars: src.chars().collect(),
            pos: 0,
            line,
            src,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, DefError> {
        Err(DefError::Syntax {
            line: self.line,
            col: self.pos + 1,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DefError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn ident(&mut self) -> Result<String, DefError> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        if s.chars().next().is_some_and(|c| c.is_ascii_digit()) {
            self.pos = start;
            return self.err("identifiers must not start with a digit");
        }
        Ok(s)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DefError> {
        self.skip_ws();
        let start = self.pos;
        let got = self.ident()?;
        if got == kw {
            Ok(())
        } else {
            self.pos = start;
            self.err(format!("expected `{kw}`"))
        }
    }

    fn number_u64(&mut self) -> Result<u64, DefError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek() {
            let Some(d) = c.to_digit(10) else { break };
            any = true;
            value = match value.checked_mul(10).and_then(|v| v.checked_add(d as u64)) {
                Some(v) => v,
                None => {
                    self.pos = start;
                    return self.err("number is too large");
                }
            };
            self.pos += 1;
        }
        if !any {
            return self.err("expected a number");
        }
        Ok(value)
    }

    fn number_i64(&mut self) -> Result<i64, DefError> {
        self.skip_ws();
        let negative = self.eat('-');
        let v = self.number_u64()?;
        if negative {
            if v > i64::MAX as u64 {
                return self.err("number is too large");
            }
            Ok(-(v as i64))
        } else {
            if v > i64::MAX as u64 {
                return self.err("number is too large");
            }
            Ok(v as i64)
        }
    }

    fn end_of_line(&mut self) -> Result<(), DefError> {
        self.skip_ws();
        if self.pos < self.chars.len() {
            return self.err(format!(
                "trailing input: `{}`",
                &self.src[self.byte_pos()..]
            ));
        }
        Ok(())
    }

    fn byte_pos(&self) -> usize {
        self.chars[..self.pos].iter().map(|c| c.len_utf8()).sum()
    }

    fn parse_statement(mut self) -> Result<GroupDefinition, DefError> {
        self.keyword("group")?;
        let name = self.ident()?;
        self.skip_ws();
        self.expect('=')?;
        self.skip_ws();
        let kind_pos = self.pos;
        let kind = self.ident()?;
        let ctor = match kind.as_str() {
            "perm" => self.parse_perm()?,
            "cyclic" => Constructor::Cyclic(self.number_u64()?),
            "dihedral" => Constructor::Dihedral(self.number_u64()?),
            "modular" => self.parse_modular()?,
            "direct" => Constructor::Direct {
                left: self.ident()?,
                right: self.ident()?,
            },
            "semidirect" => self.parse_semidirect()?,
            "example" => self.parse_example()?,
            other => {
                self.pos = kind_pos;
                return self.err(format!("unknown constructor `{other}`"));
            }
        };
        self.end_of_line()?;
        Ok(GroupDefinition {
            name,
            ctor,
            line: self.line,
        })
    }

    fn parse_perm(&mut self) -> Result<Constructor, DefError> {
        let degree = self.number_u64()?;
        if degree == 0 || degree > MAX_PERM_DEGREE as u64 {
            return self.err(format!("degree must be in 1..={MAX_PERM_DEGREE}"));
        }
        let degree = degree as u16;
        self.keyword("gens")?;
        let mut generators = Vec::new();
        loop {
            generators.push(self.parse_generator_cycles(degree)?);
            self.skip_ws();
            if !self.eat(',') {
                break;
            }
        }
        Ok(Constructor::Perm { degree, generators })
    }

    fn parse_generator_cycles(&mut self, degree: u16) -> Result<Vec<Vec<u16>>, DefError> {
        self.skip_ws();
        let mut cycles: Vec<Vec<u16>> = Vec::new();
        let mut used = vec![false; degree as usize + 1];
        if self.peek() != Some('(') {
            return self.err("expected a cycle `(...)`");
        }
        while self.peek() == Some('(') {
            self.bump();
            let mut cycle = Vec::new();
            loop {
                self.skip_ws();
                if self.eat(')') {
                    break;
                }
                let point_pos = self.pos;
                let p = self.number_u64()?;
                if p == 0 || p > degree as u64 {
                    self.pos = point_pos;
                    return self.err(format!("point {p} exceeds degree {degree}"));
                }
                if used[p as usize] {
                    self.pos = point_pos;
                    return self.err(format!("cycles are not disjoint at point {p}"));
                }
                used[p as usize] = true;
                cycle.push(p as u16);
            }
            if cycle.len() == 1 {
                return self
                    .err("a cycle needs at least two points (or use `()` for the identity)");
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            self.skip_ws();
        }
        Ok(cycles)
    }

    fn parse_modular(&mut self) -> Result<Constructor, DefError> {
        self.keyword("p")?;
        self.expect('=')?;
        let p = self.number_u64()?;
        self.keyword("n")?;
        self.expect('=')?;
        let n = self.number_u64()?;
        if n > u32::MAX as u64 {
            return self.err("n is too large");
        }
        Ok(Constructor::Modular { p, n: n as u32 })
    }

    fn parse_semidirect(&mut self) -> Result<Constructor, DefError> {
        let actor = self.ident()?;
        let base = self.ident()?;
        self.keyword("action")?;
        let mut action = Vec::new();
        loop {
            let gen = self.ident()?;
            self.skip_ws();
            self.expect('-')?;
            self.expect('>')?;
            action.push((gen, self.parse_word()?));
            self.skip_ws();
            if !self.eat(',') {
                break;
            }
        }
        Ok(Constructor::Semidirect {
            actor,
            base,
            action,
        })
    }

    fn parse_word(&mut self) -> Result<Word, DefError> {
        self.skip_ws();
        if self.peek() == Some('1') {
            self.bump();
            return Ok(Word(Vec::new()));
        }
        let mut terms = Vec::new();
        loop {
            let name = self.ident()?;
            let exp = if self.eat('^') { self.number_i64()? } else { 1 };
            terms.push((name, exp));
            if !self.eat('*') {
                break;
            }
        }
        Ok(Word(terms))
    }

    fn parse_example(&mut self) -> Result<Constructor, DefError> {
        self.keyword("primes")?;
        self.expect('=')?;
        let primes = self.parse_int_list()?;
        self.keyword("exps")?;
        self.expect('=')?;
        let exps64 = self.parse_int_list()?;
        self.keyword("N")?;
        self.expect('=')?;
        let n = self.number_u64()?;
        let mut exps = Vec::with_capacity(exps64.len());
        for e in &exps64 {
            if *e > u32::MAX as u64 {
                return self.err("exponent is too large");
            }
            exps.push(*e as u32);
        }
        if primes.len() != exps.len() {
            return self.err(format!(
                "primes and exps must have the same length ({} vs {})",
                primes.len(),
                exps.len()
            ));
        }
        let n = n as usize;
        if n == 0 || n > primes.len() {
            return self.err(format!("N must be in 1..={}", primes.len()));
        }
        Ok(Constructor::Example {
            primes: primes[..n].to_vec(),
            exps: exps[..n].to_vec(),
            truncation: n,
        })
    }

    fn parse_int_list(&mut self) -> Result<Vec<u64>, DefError> {
        self.skip_ws();
        self.expect('[')?;
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            if self.eat(']') {
                break;
            }
            out.push(self.number_u64()?);
            self.skip_ws();
            if !self.eat(',') {
                self.skip_ws();
                self.expect(']')?;
                break;
            }
            if out.len() > 64 {
                return self.err("too many entries");
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_reference_file() {
        let text = "\
# the whole constructor zoo
group S3 = perm 3 gens (1 2), (1 2 3)
group C6 = cyclic 6
group D8 = dihedral 8
group P = modular p=3 n=2
group G = direct S3 C6
group F1 = semidirect C6 P action a->a, b->b*a^3
group EX = example primes=[3,5,7] exps=[2,3,4] N=3
";
        let defs = parse_definitions(text).unwrap();
        assert_eq!(defs.len(), 7);
        assert_eq!(defs[0].name, "S3");
        assert_eq!(
            defs[0].ctor,
            Constructor::Perm {
                degree: 3,
                generators: vec![vec![vec![1, 2]], vec![vec![1, 2, 3]]],
            }
        );
        assert_eq!(
            defs[6].ctor,
            Constructor::Example {
                primes: vec![3, 5, 7],
                exps: vec![2, 3, 4],
                truncation: 3,
            }
        );
    }

    #[test]
    fn point_exceeding_degree_is_located() {
        let err = parse_definitions("group X = perm 3 gens (1 4)").unwrap_err();
        match err {
            DefError::Syntax { line, col, msg } => {
                assert_eq!(line, 1);
                assert_eq!(col, 26);
                assert!(msg.contains("point 4 exceeds degree 3"), "{msg}");
            }
            other => panic!("wrong error: {other}"),
        }
    }

    #[test]
    fn duplicate_and_unresolved_names() {
        let err = parse_definitions("group A = cyclic 2\ngroup A = cyclic 3").unwrap_err();
        assert!(matches!(err, DefError::Duplicate { line: 2, .. }));
        let err = parse_definitions("group G = direct A B").unwrap_err();
        assert!(matches!(err, DefError::Unresolved { line: 1, .. }));
    }

    #[test]
    fn non_disjoint_cycles_rejected() {
        let err = parse_definitions("group X = perm 4 gens (1 2)(2 3)").unwrap_err();
        assert!(matches!(err, DefError::Syntax { .. }), "{err}");
    }

    #[test]
    fn rendering_round_trips() {
        let text = "\
group S4 = perm 4 gens (1 2), (1 2 3 4)
group V = perm 4 gens (1 2)(3 4), (1 3)(2 4)
group C8 = cyclic 8
group M = modular p=5 n=3
group D = direct S4 C8
group SD = semidirect C8 M action a->a^6, b->b
group EX = example primes=[3,5] exps=[2,4] N=2
";
        let defs = parse_definitions(text).unwrap();
        let rendered: String = defs.iter().map(|d| format!("{d}\n")).collect();
        let reparsed = parse_definitions(&rendered).unwrap();
        assert_eq!(reparsed.len(), defs.len());
        for (orig, back) in defs.iter().zip(&reparsed) {
            assert_eq!(back.name, orig.name);
            assert_eq!(back.ctor, orig.ctor, "{}", orig);
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let defs = parse_definitions("\n  # nothing\ngroup A = cyclic 5 # trailing\n\n").unwrap();
        assert_eq!(defs.len(), 1);
    }

    #[test]
    fn truncation_prefix_is_applied() {
        let defs = parse_definitions("group E = example primes=[3,5,7] exps=[2,3,4] N=2").unwrap();
        assert_eq!(
            defs[0].ctor,
            Constructor::Example {
                primes: vec![3, 5],
                exps: vec![2, 3],
                truncation: 2,
            }
        );
    }
}
