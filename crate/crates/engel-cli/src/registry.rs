//! Turn parsed definitions into live group objects, and resolve names
//! against either a definition file or the built-in catalog.

use engel_core::group::{Element, Group, GroupError};
use engel_core::{ExampleParams, HARD_CAP_CEILING};

use crate::defs::{Constructor, DefError, GroupDefinition, Word};

/// A built definition: a finite engine-backed group or the symbolic
/// (infinite) truncation parameters.
#[derive(Debug, Clone)]
pub enum Built {
    Finite(Group),
    Symbolic(ExampleParams),
}

#[derive(thiserror::Error, Debug)]
pub enum BuildError {
    #[error("{0}")]
    Parse(#[from] DefError),
    #[error("line {line} (`{name}`): {source}")]
    Construction {
        line: usize,
        name: String,
        source: GroupError,
    },
}

impl BuildError {
    pub fn group_error(&self) -> Option<&GroupError> {
        match self {
            BuildError::Construction { source, .. } => Some(source),
            BuildError::Parse(_) => None,
        }
    }
}

#[derive(Debug, Default)]
pub struct Registry {
    entries: Vec<(String, Built)>,
}

impl Registry {
    pub fn lookup(&self, name: &str) -> Option<&Built> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, b)| b)
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(n, _)| n.as_str()).collect()
    }
}

fn evaluate_word(
    group: &Group,
    word: &Word,
    line: usize,
    name: &str,
) -> Result<Element, BuildError> {
    let names = group.generator_names();
    let gens = group.generators();
    let mut acc = group.identity();
    for (gen_name, exp) in &word.0 {
        let Some(idx) = names.iter().position(|n| n == gen_name) else {
            return Err(BuildError::Construction {
                line,
                name: name.into(),
                source: GroupError::InvalidArgument(format!(
                    "unknown generator `{gen_name}` (base generators: {})",
                    names.join(", ")
                )),
            });
        };
        acc = group.mul(&acc, &group.pow(&gens[idx], *exp));
    }
    Ok(acc)
}

/// Build every definition in order. `max_order`, when given, overrides the
/// enumeration cap of each built group (clamped to the hard ceiling).
pub fn build(defs: &[GroupDefinition], max_order: Option<usize>) -> Result<Registry, BuildError> {
    let cap = max_order.map(|c| c.min(HARD_CAP_CEILING));
    let mut reg = Registry::default();
    for def in defs {
        let construction = |source: GroupError| BuildError::Construction {
            line: def.line,
            name: def.name.clone(),
            source,
        };
        let lookup_finite = |reg: &Registry, target: &str| -> Result<Group, BuildError> {
            match reg.lookup(target) {
                Some(Built::Finite(g)) => Ok(g.clone()),
                Some(Built::Symbolic(_)) => Err(construction(GroupError::InvalidArgument(
                    format!("`{target}` is the symbolic engine; products need finite groups"),
                ))),
                None => Err(construction(GroupError::InvalidArgument(format!(
                    "undefined group `{target}`"
                )))),
            }
        };
        let built = match &def.ctor {
            Constructor::Perm { degree, generators } => {
                let g = match cap {
                    Some(c) => Group::permutation_with_cap(*degree, generators, c),
                    None => Group::permutation(*degree, generators),
                }
                .map_err(construction)?;
                Built::Finite(g)
            }
            Constructor::Cyclic(m) => Built::Finite(Group::cyclic(*m).map_err(construction)?),
            Constructor::Dihedral(m) => Built::Finite(Group::dihedral(*m).map_err(construction)?),
            Constructor::Modular { p, n } => {
                Built::Finite(Group::modular(*p, *n).map_err(construction)?)
            }
            Constructor::Direct { left, right } => {
                let l = lookup_finite(&reg, left)?;
                let r = lookup_finite(&reg, right)?;
                Built::Finite(Group::direct_product(&l, &r))
            }
            Constructor::Semidirect {
                actor,
                base,
                action,
            } => {
                let actor_g = lookup_finite(&reg, actor)?;
                let base_g = lookup_finite(&reg, base)?;
                let names = base_g.generator_names();
                // every base generator mapped exactly once
                let mut images = Vec::with_capacity(names.len());
                for gen_name in &names {
                    let matches: Vec<&Word> = action
                        .iter()
                        .filter(|(n, _)| n == gen_name)
                        .map(|(_, w)| w)
                        .collect();
                    match matches.as_slice() {
                        [w] => images.push(evaluate_word(&base_g, w, def.line, &def.name)?),
                        [] => {
                            return Err(construction(GroupError::InvalidArgument(format!(
                                "action does not map base generator `{gen_name}`"
                            ))))
                        }
                        _ => {
                            return Err(construction(GroupError::InvalidArgument(format!(
                                "action maps base generator `{gen_name}` more than once"
                            ))))
                        }
                    }
                }
                for (n, _) in action {
                    if !names.contains(n) {
                        return Err(construction(GroupError::InvalidArgument(format!(
                            "`{n}` is not a generator of `{base}` (generators: {})",
                            names.join(", ")
                        ))));
                    }
                }
                Built::Finite(
                    Group::semidirect_product(&actor_g, &base_g, &images).map_err(construction)?,
                )
            }
            Constructor::Example { primes, exps, .. } => {
                let components: Vec<(u64, u32)> =
                    primes.iter().copied().zip(exps.iter().copied()).collect();
                Built::Symbolic(ExampleParams::new(components).map_err(construction)?)
            }
        };
        let built = match (&built, cap) {
            (Built::Finite(g), Some(c)) => Built::Finite(g.with_enumeration_cap(c)),
            _ => built,
        };
        reg.entries.push((def.name.clone(), built));
    }
    Ok(reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defs::parse_definitions;

    #[test]
    fn builds_the_zoo() {
        let text = "\
group S3 = perm 3 gens (1 2), (1 2 3)
group C3 = cyclic 3
group M = modular p=3 n=2
group G = direct S3 C3
group F1 = semidirect C3 M action a->a, b->b*a^3
group EX = example primes=[3,5] exps=[2,3] N=2
";
        let defs = parse_definitions(text).unwrap();
        let reg = build(&defs, None).unwrap();
        let Built::Finite(s3) = reg.lookup("S3").unwrap() else {
            panic!()
        };
        assert_eq!(s3.order(), 6);
        let Built::Finite(f1) = reg.lookup("F1").unwrap() else {
            panic!()
        };
        assert_eq!(f1.order(), 81);
        assert!(matches!(reg.lookup("EX"), Some(Built::Symbolic(_))));
        assert!(reg.lookup("NoSuch").is_none());
    }

    #[test]
    fn bad_action_is_a_construction_error() {
        let text = "\
group C3 = cyclic 3
group M = modular p=3 n=2
group F = semidirect C3 M action a->a, b->a
";
        let defs = parse_definitions(text).unwrap();
        let err = build(&defs, None).unwrap_err();
        assert!(matches!(
            err.group_error(),
            Some(GroupError::NotAutomorphism(_))
        ));
    }

    #[test]
    fn missing_generator_in_action() {
        let text = "\
group C3 = cyclic 3
group M = modular p=3 n=2
group F = semidirect C3 M action a->a
";
        let defs = parse_definitions(text).unwrap();
        assert!(build(&defs, None).is_err());
    }
}
