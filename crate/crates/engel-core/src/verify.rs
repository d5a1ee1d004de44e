//! Theorem harness: a deterministic catalog of finite groups and runnable
//! checks tying the Engel classification to the radical/series machinery.
//!
//! The two sides of every asserted equality are computed independently —
//! Engel sets by commutator iteration, radicals by closure tests — so a
//! passing run cross-validates both engines rather than restating either.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::engel;
use crate::example::{self, ExampleParams};
use crate::group::{Group, GroupError, Payload, DEFAULT_SET_ANALYSIS_CAP};
use crate::series::{self, Subnormality};
use crate::subgroup::Subgroup;

/// Outcome of one named check on one group. Failed checks always carry a
/// witness string reproducing the failure.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub check: String,
    pub group: String,
    pub passed: bool,
    pub details: Vec<String>,
    pub witness: Option<String>,
    pub elapsed: Duration,
}

impl CheckReport {
    fn new(check: &str, group: &str) -> CheckReport {
        CheckReport {
            check: check.into(),
            group: group.into(),
            passed: true,
            details: Vec::new(),
            witness: None,
            elapsed: Duration::ZERO,
        }
    }

    fn fail(&mut self, witness: String) {
        self.passed = false;
        if self.witness.is_none() {
            self.witness = Some(witness);
        }
    }
}

/// A named catalog entry together with the definition-language line that
/// reconstructs it.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub definition: String,
    pub group: Group,
}

/// Deterministic list of catalog groups (orders 1 through 3125): cyclic,
/// symmetric/alternating, dihedral, metacyclic p-groups, and direct and
/// semidirect combinations including the finite quotient of the first
/// component of the default symbolic truncation.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut add = |name: &str, definition: String, group: Group| {
        out.push(CatalogEntry {
            name: name.into(),
            definition,
            group,
        });
    };

    add(
        "C1",
        "group C1 = cyclic 1".into(),
        Group::cyclic(1).unwrap(),
    );
    add(
        "C6",
        "group C6 = cyclic 6".into(),
        Group::cyclic(6).unwrap(),
    );
    add(
        "C8",
        "group C8 = cyclic 8".into(),
        Group::cyclic(8).unwrap(),
    );
    add(
        "S3",
        "group S3 = perm 3 gens (1 2), (1 2 3)".into(),
        Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap(),
    );
    add(
        "S4",
        "group S4 = perm 4 gens (1 2), (1 2 3 4)".into(),
        Group::permutation(4, &[vec![vec![1, 2]], vec![vec![1, 2, 3, 4]]]).unwrap(),
    );
    add(
        "A4",
        "group A4 = perm 4 gens (1 2 3), (1 2)(3 4)".into(),
        Group::permutation(4, &[vec![vec![1, 2, 3]], vec![vec![1, 2], vec![3, 4]]]).unwrap(),
    );
    add(
        "D8",
        "group D8 = dihedral 8".into(),
        Group::dihedral(8).unwrap(),
    );
    add(
        "D12",
        "group D12 = dihedral 12".into(),
        Group::dihedral(12).unwrap(),
    );
    add(
        "M3_2",
        "group M3_2 = modular p=3 n=2".into(),
        Group::modular(3, 2).unwrap(),
    );
    add(
        "M5_3",
        "group M5_3 = modular p=5 n=3".into(),
        Group::modular(5, 3).unwrap(),
    );
    {
        let c2 = Group::cyclic(2).unwrap();
        let c3 = Group::cyclic(3).unwrap();
        add(
            "C2xC3",
            "group C2 = cyclic 2\ngroup C3 = cyclic 3\ngroup C2xC3 = direct C2 C3".into(),
            Group::direct_product(&c2, &c3),
        );
    }
    {
        let s3 = Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap();
        let c2 = Group::cyclic(2).unwrap();
        add(
            "S3xC2",
            "group S3 = perm 3 gens (1 2), (1 2 3)\ngroup C2 = cyclic 2\ngroup S3xC2 = direct S3 C2"
                .into(),
            Group::direct_product(&s3, &c2),
        );
    }
    {
        // Finite quotient of the first default symbolic component:
        // cyclic(3) acting on the metacyclic group of order 27 by
        // a -> a, b -> b a^3.
        let actor = Group::cyclic(3).unwrap();
        let base = Group::modular(3, 2).unwrap();
        let a_img = base.modular_element(0, 1).unwrap();
        let b_img = base.modular_element(1, 3).unwrap();
        add(
            "F1",
            "group C3 = cyclic 3\ngroup M = modular p=3 n=2\ngroup F1 = semidirect C3 M action a->a, b->b*a^3"
                .into(),
            Group::semidirect_product(&actor, &base, &[a_img, b_img]).unwrap(),
        );
    }
    out
}

fn sorted_payloads(set: &BTreeSet<crate::group::Element>) -> Vec<&Payload> {
    set.iter().map(|e| e.payload()).collect()
}

fn subgroup_payloads(s: &Subgroup) -> Vec<&Payload> {
    s.sorted_payloads().iter().collect()
}

fn render_set(group: &Group, payloads: &[&Payload]) -> String {
    let items: Vec<String> = payloads.iter().map(|p| group.render_payload(p)).collect();
    format!("{{{}}}", items.join(", "))
}

/// Equality of left/bounded-left Engel sets with the Fitting subgroup, and
/// of right/bounded-right with the hypercentre (which must be a stabilized
/// finite term of the upper central series).
pub fn check_baer(name: &str, group: &Group, set_cap: usize) -> Result<CheckReport, GroupError> {
    let cls = engel::classify(group, set_cap)?;
    check_baer_with(name, group, &cls, set_cap)
}

fn check_baer_with(
    name: &str,
    group: &Group,
    cls: &engel::EngelClassification,
    set_cap: usize,
) -> Result<CheckReport, GroupError> {
    let start = Instant::now();
    let mut report = CheckReport::new("baer", name);
    let fitting = series::fitting_subgroup(group, set_cap)?;
    let upper = series::upper_central_series(group, set_cap)?;
    let hyper = upper.hypercentre();

    let left = sorted_payloads(&cls.left);
    let bounded_left: Vec<&Payload> = cls.bounded_left.keys().map(|e| e.payload()).collect();
    let right = sorted_payloads(&cls.right);
    let bounded_right: Vec<&Payload> = cls.bounded_right.keys().map(|e| e.payload()).collect();

    if left != bounded_left {
        report.fail(format!(
            "left {} != bounded left {}",
            render_set(group, &left),
            render_set(group, &bounded_left)
        ));
    }
    if right != bounded_right {
        report.fail(format!(
            "right {} != bounded right {}",
            render_set(group, &right),
            render_set(group, &bounded_right)
        ));
    }
    if left != subgroup_payloads(&fitting) {
        report.fail(format!(
            "left Engel set {} != fitting subgroup {}",
            render_set(group, &left),
            render_set(group, &subgroup_payloads(&fitting))
        ));
    }
    if right != subgroup_payloads(hyper) {
        report.fail(format!(
            "right Engel set {} != hypercentre {}",
            render_set(group, &right),
            render_set(group, &subgroup_payloads(hyper))
        ));
    }
    report.details.push(format!(
        "left/fitting order {}, right/hypercentre order {}, hypercentral length {}",
        fitting.order(),
        hyper.order(),
        upper.length()
    ));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Inverse of every right Engel element is left Engel, and a bounded right
/// degree `n` bounds the left degree of the inverse by `n + 1`.
pub fn check_heineken(
    name: &str,
    group: &Group,
    set_cap: usize,
) -> Result<CheckReport, GroupError> {
    let cls = engel::classify(group, set_cap)?;
    check_heineken_with(name, group, &cls)
}

fn check_heineken_with(
    name: &str,
    group: &Group,
    cls: &engel::EngelClassification,
) -> Result<CheckReport, GroupError> {
    let start = Instant::now();
    let mut report = CheckReport::new("heineken", name);
    for a in &cls.right {
        let inv = group.inv(a);
        if !cls.left.contains(&inv) {
            report.fail(format!(
                "inverse of right Engel element {} is not left Engel",
                group.render(a)
            ));
        }
    }
    for (a, n) in &cls.bounded_right {
        let inv = group.inv(a);
        match cls.bounded_left.get(&inv) {
            Some(m) if *m <= n + 1 => {}
            Some(m) => report.fail(format!(
                "right degree {n} of {} gives left degree {m} > {} for the inverse",
                group.render(a),
                n + 1
            )),
            None => report.fail(format!(
                "inverse of bounded right Engel element {} is not bounded left",
                group.render(a)
            )),
        }
    }
    report
        .details
        .push(format!("right set order {}", cls.right.len()));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Chain of inclusions hypercentre <= rho <= right Engel set (and the
/// bounded variant); on finite groups all of them collapse to equalities
/// with the hypercentre, which is also asserted.
pub fn check_rho_chain(
    name: &str,
    group: &Group,
    set_cap: usize,
) -> Result<CheckReport, GroupError> {
    let cls = engel::classify(group, set_cap)?;
    check_rho_chain_with(name, group, &cls, set_cap)
}

fn check_rho_chain_with(
    name: &str,
    group: &Group,
    cls: &engel::EngelClassification,
    set_cap: usize,
) -> Result<CheckReport, GroupError> {
    let start = Instant::now();
    let mut report = CheckReport::new("rho_chain", name);
    let upper = series::upper_central_series(group, set_cap)?;
    let hyper = upper.hypercentre();
    let rho = series::rho_analysis(group, set_cap)?;

    let right = sorted_payloads(&cls.right);
    let bounded_right: Vec<&Payload> = cls.bounded_right.keys().map(|e| e.payload()).collect();
    let rho_p = subgroup_payloads(&rho.members);
    let hyper_p = subgroup_payloads(hyper);

    let is_subset = |small: &[&Payload], big: &[&Payload]| -> bool {
        let set: BTreeSet<&&Payload> = big.iter().collect();
        small.iter().all(|p| set.contains(p))
    };
    if !is_subset(&hyper_p, &rho_p) {
        report.fail("hypercentre not contained in rho".into());
    }
    if !is_subset(&rho_p, &right) {
        report.fail("rho not contained in the right Engel set".into());
    }
    if !is_subset(&rho_p, &bounded_right) {
        report.fail("rho-bar not contained in the bounded right Engel set".into());
    }
    if rho_p != hyper_p {
        report.fail(format!(
            "rho {} != hypercentre {} (finite groups collapse the chain)",
            render_set(group, &rho_p),
            render_set(group, &hyper_p)
        ));
    }
    report.details.push(format!(
        "rho order {}, max subnormality defect {}",
        rho.members.order(),
        rho.max_defect
    ));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Engine cross-check for metacyclic groups: the iterated commutator
/// `[a,_m b]` computed by collection arithmetic must equal the closed-form
/// power `a^(p^m)`, vanishing first at `m = n`.
pub fn check_modular_identities(name: &str, group: &Group) -> Result<CheckReport, GroupError> {
    let start = Instant::now();
    let mut report = CheckReport::new("modular_identities", name);
    let Some((p, n)) = group.modular_parameters() else {
        return Err(GroupError::InvalidArgument(
            "modular identity check requires a metacyclic engine".into(),
        ));
    };
    let a = group.modular_element(0, 1)?;
    let b = group.modular_element(1, 0)?;
    let mut pm: u128 = 1;
    let a_mod = {
        let mut m: u128 = 1;
        for _ in 0..n {
            m *= p as u128;
        }
        m
    };
    for m in 1..=n {
        pm *= p as u128;
        let computed = engel::iterated_commutator(group, &a, &b, m)?;
        let expected = group.modular_element(0, (pm % a_mod) as u64)?;
        if computed != expected {
            report.fail(format!(
                "[a,_{m} b] = {} but a^(p^{m}) = {}",
                group.render(&computed),
                group.render(&expected)
            ));
        }
        let should_vanish = m == n;
        if (computed == group.identity()) != should_vanish {
            report.fail(format!(
                "[a,_{m} b] vanishing pattern wrong at m = {m} (n = {n})"
            ));
        }
    }
    report
        .details
        .push(format!("checked m = 1..{n} for p = {p}"));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Full verification of the symbolic truncation: automorphism check,
/// commutator formulas against brute-force iteration, component nilpotency
/// classes, central heights in the finite quotients, unbounded right Engel
/// witnesses, structural checks, and the finite-quotient table comparison.
pub fn check_example(params: &ExampleParams, set_cap: usize) -> Result<CheckReport, GroupError> {
    let start = Instant::now();
    let mut report = CheckReport::new("example", "example");
    let group = example::ExampleGroup::new(params.clone());

    for (idx, &(p, n)) in params.components().iter().enumerate() {
        let i = idx + 1;
        // Exhaustive automorphism check where the component is small enough.
        let order_sq_ok = {
            let mp_order = {
                let mut o: u128 = 1;
                for _ in 0..(2 * n - 1) {
                    o *= p as u128;
                }
                o
            };
            mp_order <= set_cap as u128
        };
        if order_sq_ok {
            let alpha =
                example::verify_alpha_automorphism(p, n, DEFAULT_SET_ANALYSIS_CAP.max(set_cap))?;
            if !alpha.passed() {
                report.fail(format!(
                    "alpha is not an automorphism on component {i}: {:?}",
                    alpha.failure
                ));
            } else {
                report.details.push(format!(
                    "component {i}: alpha checked on {} pairs",
                    alpha.pairs_checked
                ));
            }
        }

        // Finite-engine commutator identities (independent of the symbolic
        // engine's closed form).
        let finite = Group::modular(p, n)?;
        let fin_report = check_modular_identities(&format!("component {i}"), &finite)?;
        if !fin_report.passed {
            report.fail(fin_report.witness.unwrap_or_default());
        }

        // Nilpotency class of the component is exactly n.
        let class = series::nilpotency_class(&finite, set_cap.max(DEFAULT_SET_ANALYSIS_CAP))?;
        if class != Some(n) {
            report.fail(format!(
                "component {i} has nilpotency class {class:?}, expected {n}"
            ));
        }

        // Symbolic formulas against brute-force iteration over a grid of
        // x-exponents r = t * p^e.
        let mut grid: Vec<i64> = Vec::new();
        for t in [-2i64, -1, 1, 2] {
            let mut pe: i64 = 1;
            for _ in 0..=n {
                grid.push(t * pe);
                pe = pe.saturating_mul(p as i64);
            }
        }
        grid.push(0);
        for &r in &grid {
            for m in 1..=n {
                let fc = example::engel_formula_check(&group, i, r, m)?;
                if !fc.matches || !fc.one_step_matches {
                    report.fail(format!(
                        "formula mismatch at component {i}, r = {r}, m = {m}"
                    ));
                }
                // [x^r,_m b_i] = a_i^(-r p^m) vanishes iff p^(n-m) | r.
                let divisor = (p as i64).pow(n - m);
                if fc.vanishes != (r % divisor == 0) {
                    report.fail(format!(
                        "vanishing criterion wrong at component {i}, r = {r}, m = {m}"
                    ));
                }
            }
        }

        // Central height of a_i in the finite quotient is exactly n_i.
        let height = example::central_height(&group, i)?;
        if height != n {
            report.fail(format!("central height of a_{i} is {height}, expected {n}"));
        }
    }

    // One witness per bound m below the largest exponent.
    let max_n = params.components().iter().map(|&(_, n)| n).max().unwrap();
    for m in 1..max_n {
        match example::bounded_right_engel_excludes_x(&group, m) {
            Ok(w) => report
                .details
                .push(format!("m = {m}: [x,_{m} b_{}] != 1", w.component)),
            Err(e) => report.fail(format!("missing witness for m = {m}: {e}")),
        }
    }

    // Structural checks: commutators land in the abelian base, torsion
    // generators have finite conjugacy closures of the expected size.
    let fc2 = example::verify_fc2_structure(&group, 40)?;
    if !fc2.passed() {
        report.fail("a sampled commutator escaped the abelian base".into());
    }
    for (idx, &(p, n)) in params.components().iter().enumerate() {
        let expected = (p as usize).pow(n - 1);
        for label in [format!("a{}", idx + 1), format!("b{}", idx + 1)] {
            let found = fc2
                .closure_sizes
                .iter()
                .find(|(l, _)| *l == label)
                .map(|(_, s)| *s);
            if found != Some(expected) {
                report.fail(format!(
                    "conjugacy closure of {label} has size {found:?}, expected {expected}"
                ));
            }
        }
    }

    // Table comparison between the product-engine quotient and the symbolic
    // engine on the first component (kept small by construction).
    if let Some(&(p, n)) = params.components().first() {
        let order = (p as u128).pow(2 * n - 1) * (p as u128).pow(n - 1);
        if order <= set_cap as u128 {
            if !example::quotient_matches_symbolic(&group, 1)? {
                report.fail("finite quotient disagrees with the symbolic engine".into());
            } else {
                report.details.push(format!(
                    "quotient table comparison passed ({order} elements)"
                ));
            }
        }
    }

    report.elapsed = start.elapsed();
    Ok(report)
}

/// Defect spot check for rho members: recomputing the subnormality chain of
/// a few `<x>` inside `<x, a^G>` must stay within the recorded bound `k(a)`.
pub fn spot_check_rho_defects(group: &Group, set_cap: usize) -> Result<bool, GroupError> {
    let rho = series::rho_analysis(group, set_cap)?;
    for (a, k) in rho.defects.iter().take(5) {
        let ncl = Subgroup::normal_closure(group, std::slice::from_ref(a))?;
        for x in group.elements()?.iter().take(10) {
            let mut seeds = vec![x.clone()];
            seeds.extend(ncl.generators());
            let joined = Subgroup::generated(group, &seeds)?;
            match series::is_subnormal(x, &joined)? {
                Subnormality::Defect(d) => {
                    if d > *k {
                        return Ok(false);
                    }
                }
                Subnormality::NotSubnormal => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// Which checks to run over the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Baer,
    Heineken,
    Rho,
    All,
}

/// Run the selected checks over every catalog group (or one named group),
/// in deterministic order.
pub fn run_catalog(
    kind: CheckKind,
    only: Option<&str>,
    set_cap: usize,
) -> Result<Vec<CheckReport>, GroupError> {
    let mut reports = Vec::new();
    for entry in catalog() {
        if let Some(name) = only {
            if entry.name != name {
                continue;
            }
        }
        run_checks_for_group(&entry.name, &entry.group, kind, set_cap, &mut reports)?;
    }
    Ok(reports)
}

pub fn run_checks_for_group(
    name: &str,
    group: &Group,
    kind: CheckKind,
    set_cap: usize,
    reports: &mut Vec<CheckReport>,
) -> Result<(), GroupError> {
    // The classification is the expensive shared input; compute it once and
    // let every selected check compare its own independently derived side
    // against it.
    let cls = engel::classify(group, set_cap)?;
    if matches!(kind, CheckKind::Baer | CheckKind::All) {
        reports.push(check_baer_with(name, group, &cls, set_cap)?);
    }
    if matches!(kind, CheckKind::Heineken | CheckKind::All) {
        reports.push(check_heineken_with(name, group, &cls)?);
    }
    if matches!(kind, CheckKind::Rho | CheckKind::All) {
        reports.push(check_rho_chain_with(name, group, &cls, set_cap)?);
    }
    if matches!(kind, CheckKind::All) && group.is_modular_engine() {
        reports.push(check_modular_identities(name, group)?);
    }
    Ok(())
}
