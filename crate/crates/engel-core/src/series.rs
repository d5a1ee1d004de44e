//! Canonical subgroup series and radicals of finite groups: upper and lower
//! central series, hypercentre, nilpotency class, Fitting subgroup, Baer
//! radical, subnormality defects, and the subgroups rho / rho-bar defined by
//! cyclic-subgroup subnormality inside `<x, a^G>`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::group::{Element, Group, GroupError, Payload};
use crate::subgroup::{close_under_mul, conjugation_orbit, reduce_generators, Subgroup};

/// Ascending central series `Z_0 = 1 <= Z_1 <= ... <= Z_k` with
/// `Z_k = Z_(k+1)` (stabilized). `Z_1` is the centre; `Z_(i+1)` collects the
/// elements whose commutators with every generator land in `Z_i`, which is
/// enough by normality of `Z_i` and the identity `[x, gh] = [x,h][x,g]^h`.
#[derive(Debug, Clone)]
pub struct CentralSeries {
    terms: Vec<Subgroup>,
}

impl CentralSeries {
    /// Stabilization index `k`: the hypercentral length.
    pub fn length(&self) -> u32 {
        (self.terms.len() - 1) as u32
    }

    /// Terminal term `Z_k`, the hypercentre.
    pub fn hypercentre(&self) -> &Subgroup {
        self.terms.last().unwrap()
    }

    pub fn terms(&self) -> &[Subgroup] {
        &self.terms
    }

    pub fn orders(&self) -> Vec<u128> {
        self.terms.iter().map(|t| t.order()).collect()
    }
}

pub fn upper_central_series(group: &Group, set_cap: usize) -> Result<CentralSeries, GroupError> {
    let order = group.order();
    if order > set_cap as u128 {
        return Err(GroupError::CapExceeded {
            op: "upper_central_series",
            order,
            cap: set_cap,
        });
    }
    let elems = group.element_payloads()?;
    let gens = group.generator_payloads();
    let id = group.identity_payload();

    let mut current: HashSet<Payload> = HashSet::new();
    current.insert(id);
    let mut terms = vec![subgroup_from_members(group, &current)];
    loop {
        let mut next = HashSet::new();
        for x in elems {
            if gens
                .iter()
                .all(|g| current.contains(&group.comm_payload(x, g)))
            {
                next.insert(x.clone());
            }
        }
        if next.len() == current.len() {
            break;
        }
        terms.push(subgroup_from_members(group, &next));
        current = next;
    }
    Ok(CentralSeries { terms })
}

fn subgroup_from_members(group: &Group, members: &HashSet<Payload>) -> Subgroup {
    let mut sorted: Vec<Payload> = members.iter().cloned().collect();
    sorted.sort();
    let (gens, _) = reduce_generators(group, &sorted)
        .expect("generator reduction of a materialized set cannot exceed the cap");
    Subgroup::from_set(group, gens, members.clone())
}

/// Conjugacy class of `x` together with the normal closure `<x^G>`, with
/// the closure memoized per class (all elements of a class share it).
fn class_and_closure(
    group: &Group,
    x: &Payload,
    memo: &mut HashMap<Vec<Payload>, Subgroup>,
) -> Result<Subgroup, GroupError> {
    let orbit = conjugation_orbit(
        group,
        std::slice::from_ref(x),
        &group.generator_payloads(),
        group.enumeration_cap(),
    )?;
    let mut key = orbit.clone();
    key.sort();
    if let Some(found) = memo.get(&key) {
        return Ok(found.clone());
    }
    let (_, set) = close_under_mul(group, &orbit, group.enumeration_cap())?;
    let closure = Subgroup::from_set(group, orbit, set);
    memo.insert(key, closure.clone());
    Ok(closure)
}

/// Descending series `gamma_1 = G >= gamma_2 >= ...` where
/// `gamma_(i+1) = [gamma_i, G]`, computed as the normal closure of the
/// commutators of the two generating sets. Only the terms from `gamma_2`
/// on are materialized, so the group itself never has to be enumerated.
#[derive(Debug, Clone)]
pub struct LowerCentralSeries {
    /// Orders of `gamma_1, gamma_2, ...` up to stabilization.
    pub orders: Vec<u128>,
    /// Materialized terms from `gamma_2` on.
    terms: Vec<Subgroup>,
    /// First `c` with `gamma_(c+1) = 1`, or `None` if the series stabilizes
    /// above the identity.
    pub class: Option<u32>,
}

impl LowerCentralSeries {
    /// Terms from `gamma_2` on.
    pub fn proper_terms(&self) -> &[Subgroup] {
        &self.terms
    }
}

pub fn lower_central_series(
    group: &Group,
    set_cap: usize,
) -> Result<LowerCentralSeries, GroupError> {
    let order = group.order();
    let gens = group.generator_payloads();
    let id = group.identity_payload();
    let mut orders = vec![order];
    let mut terms: Vec<Subgroup> = Vec::new();

    if order == 1 {
        return Ok(LowerCentralSeries {
            orders,
            terms,
            class: Some(0),
        });
    }

    let mut current_gens = gens.clone();
    loop {
        let mut seeds = Vec::new();
        for u in &current_gens {
            for g in &gens {
                let c = group.comm_payload(u, g);
                if c != id {
                    seeds.push(c);
                }
            }
        }
        let orbit = conjugation_orbit(group, &seeds, &gens, set_cap).map_err(|_| {
            GroupError::CapExceeded {
                op: "lower_central_series",
                order,
                cap: set_cap,
            }
        })?;
        let (_, set) = close_under_mul(group, &orbit, set_cap)?;
        let term = Subgroup::from_set(group, orbit.clone(), set);
        let size = term.order();
        if size == 1 {
            let class = orders.len() as u32;
            orders.push(1);
            terms.push(term);
            return Ok(LowerCentralSeries {
                orders,
                terms,
                class: Some(class),
            });
        }
        // Stabilized above the identity: gamma_(i+1) = gamma_i, so the
        // series never reaches 1.
        let stabilized = match terms.last() {
            None => size == order,
            Some(prev) => prev.order() == size && prev.payload_set() == term.payload_set(),
        };
        if stabilized {
            if terms.is_empty() {
                orders.push(size);
                terms.push(term);
            }
            return Ok(LowerCentralSeries {
                orders,
                terms,
                class: None,
            });
        }
        orders.push(size);
        current_gens = orbit;
        terms.push(term);
    }
}

/// Nilpotency class by lower-central-series stabilization.
pub fn nilpotency_class(group: &Group, set_cap: usize) -> Result<Option<u32>, GroupError> {
    Ok(lower_central_series(group, set_cap)?.class)
}

/// Fitting subgroup as the set of elements with nilpotent normal closure.
/// The resulting set is verified to be a subgroup, normal and nilpotent.
pub fn fitting_subgroup(group: &Group, set_cap: usize) -> Result<Subgroup, GroupError> {
    let order = group.order();
    if order > set_cap as u128 {
        return Err(GroupError::CapExceeded {
            op: "fitting_subgroup",
            order,
            cap: set_cap,
        });
    }
    let elems = group.element_payloads()?;
    let mut closures: HashMap<Vec<Payload>, Subgroup> = HashMap::new();
    let mut members: HashSet<Payload> = HashSet::new();
    for x in elems {
        let closure = class_and_closure(group, x, &mut closures)?;
        if closure.is_nilpotent() {
            members.insert(x.clone());
        }
    }
    let mut sorted: Vec<Payload> = members.iter().cloned().collect();
    sorted.sort();
    let (gens, closure) = reduce_generators(group, &sorted)?;
    assert_eq!(
        closure, members,
        "fitting member set is not multiplicatively closed"
    );
    let fitting = Subgroup::from_set(group, gens, members);
    assert!(fitting.is_normal(), "fitting subgroup is not normal");
    assert!(fitting.is_nilpotent(), "fitting subgroup is not nilpotent");
    Ok(fitting)
}

/// Maximality oracle for the Fitting subgroup: for every `x` outside,
/// `<F, x^G>` must fail to be nilpotent. Returns a violating element if one
/// exists. Independent of the element-wise closure test above.
pub fn fitting_maximality_witness(
    group: &Group,
    fitting: &Subgroup,
) -> Result<Option<Element>, GroupError> {
    let elems = group.element_payloads()?;
    let mut seen_closures: HashSet<Vec<Payload>> = HashSet::new();
    for x in elems {
        if fitting.contains_payload(x) {
            continue;
        }
        let orbit = conjugation_orbit(
            group,
            std::slice::from_ref(x),
            &group.generator_payloads(),
            group.enumeration_cap(),
        )?;
        let mut seeds: Vec<Payload> = fitting.generator_payloads().to_vec();
        seeds.extend(orbit);
        let (_, set) = close_under_mul(group, &seeds, group.enumeration_cap())?;
        let mut key: Vec<Payload> = set.iter().cloned().collect();
        key.sort();
        if !seen_closures.insert(key) {
            continue;
        }
        let extended = Subgroup::from_set(group, seeds, set);
        if extended.is_nilpotent() {
            return Ok(Some(group.element_from_payload(x.clone())?));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subnormality {
    /// Subnormal via the chain of successive normal closures, with the
    /// number of strict steps taken.
    Defect(u32),
    NotSubnormal,
}

impl Subnormality {
    pub fn is_subnormal(&self) -> bool {
        matches!(self, Subnormality::Defect(_))
    }
}

/// Subnormality of `<x>` in `H` by successive normal closures:
/// `K_0 = H`, `K_(i+1) =` normal closure of `x` in `K_i`. The chain
/// descends; it reaches `<x>` iff `<x>` is subnormal, and the number of
/// strict steps is the defect.
pub fn is_subnormal(x: &Element, h: &Subgroup) -> Result<Subnormality, GroupError> {
    let group = h.parent();
    assert!(h.contains(x), "subnormality test requires x in H");
    let cap = group.enumeration_cap();
    let (_, cyclic) = close_under_mul(group, std::slice::from_ref(x.payload()), cap)?;
    let mut current_set: HashSet<Payload> = h.payload_set().clone();
    let mut current_gens: Vec<Payload> = h.generator_payloads().to_vec();
    if current_set == cyclic {
        return Ok(Subnormality::Defect(0));
    }
    let mut defect = 0u32;
    loop {
        let orbit =
            conjugation_orbit(group, std::slice::from_ref(x.payload()), &current_gens, cap)?;
        let (_, next) = close_under_mul(group, &orbit, cap)?;
        debug_assert!(next.iter().all(|p| current_set.contains(p)));
        if next.len() == current_set.len() {
            return Ok(Subnormality::NotSubnormal);
        }
        defect += 1;
        if next == cyclic {
            return Ok(Subnormality::Defect(defect));
        }
        current_set = next;
        current_gens = orbit;
    }
}

/// Baer radical: the subgroup generated by all `x` with `<x>` subnormal in
/// the whole group.
pub fn baer_radical(group: &Group, set_cap: usize) -> Result<Subgroup, GroupError> {
    let order = group.order();
    if order > set_cap as u128 {
        return Err(GroupError::CapExceeded {
            op: "baer_radical",
            order,
            cap: set_cap,
        });
    }
    let whole = Subgroup::whole_group(group)?;
    let elems = group.element_payloads()?;
    let mut verdict_by_cyclic: HashMap<Vec<Payload>, bool> = HashMap::new();
    let mut gens: Vec<Payload> = Vec::new();
    let mut closure: HashSet<Payload> = HashSet::new();
    closure.insert(group.identity_payload());
    for x in elems {
        let (_, cyc) = close_under_mul(group, std::slice::from_ref(x), group.enumeration_cap())?;
        let mut key: Vec<Payload> = cyc.iter().cloned().collect();
        key.sort();
        let subnormal = match verdict_by_cyclic.get(&key) {
            Some(v) => *v,
            None => {
                let e = group.element_from_payload(x.clone())?;
                let v = is_subnormal(&e, &whole)?.is_subnormal();
                verdict_by_cyclic.insert(key, v);
                v
            }
        };
        if subnormal && !closure.contains(x) {
            gens.push(x.clone());
            let (_, set) = close_under_mul(group, &gens, group.enumeration_cap())?;
            closure = set;
        }
    }
    Ok(Subgroup::from_set(group, gens, closure))
}

/// Membership analysis behind rho and rho-bar: `a` belongs iff `<x>` is
/// subnormal in `<x, a^G>` for every `x`. In a finite group ascendant and
/// subnormal coincide, so the two subgroups have the same members and only
/// the recorded defects distinguish them.
#[derive(Debug, Clone)]
pub struct RhoAnalysis {
    pub members: Subgroup,
    /// Largest defect observed over all members and test elements.
    pub max_defect: u32,
    /// Per-member maximal defect `k(a)`.
    pub defects: BTreeMap<Element, u32>,
}

pub fn rho_analysis(group: &Group, set_cap: usize) -> Result<RhoAnalysis, GroupError> {
    let order = group.order();
    if order > set_cap as u128 {
        return Err(GroupError::CapExceeded {
            op: "rho",
            order,
            cap: set_cap,
        });
    }
    let elems = group.element_payloads()?;
    let cap = group.enumeration_cap();

    // Distinct cyclic subgroups, each with one representative generator:
    // the subnormality chain of <x> only depends on the subgroup.
    let mut cyclic_reps: Vec<Payload> = Vec::new();
    let mut seen_cyclic: HashSet<Vec<Payload>> = HashSet::new();
    for x in elems {
        let (_, cyc) = close_under_mul(group, std::slice::from_ref(x), cap)?;
        let mut key: Vec<Payload> = cyc.iter().cloned().collect();
        key.sort();
        if seen_cyclic.insert(key) {
            cyclic_reps.push(x.clone());
        }
    }

    // Membership of `a` depends only on the normal closure of `a`, so cache
    // verdicts per distinct closure.
    let mut closures: HashMap<Vec<Payload>, Subgroup> = HashMap::new();
    let mut closure_verdicts: HashMap<Vec<Payload>, Option<u32>> = HashMap::new();
    let mut members: HashSet<Payload> = HashSet::new();
    let mut defects: BTreeMap<Element, u32> = BTreeMap::new();
    let mut max_defect = 0u32;

    for a in elems {
        let ncl = class_and_closure(group, a, &mut closures)?;
        let key = ncl.sorted_payloads().to_vec();
        let verdict = match closure_verdicts.get(&key) {
            Some(v) => *v,
            None => {
                let v = rho_verdict_for_closure(group, &ncl, &cyclic_reps, cap)?;
                closure_verdicts.insert(key, v);
                v
            }
        };
        if let Some(defect) = verdict {
            members.insert(a.clone());
            defects.insert(group.element_from_payload(a.clone())?, defect);
            max_defect = max_defect.max(defect);
        }
    }

    let mut sorted: Vec<Payload> = members.iter().cloned().collect();
    sorted.sort();
    let (gens, closure) = reduce_generators(group, &sorted)?;
    assert_eq!(closure, members, "rho member set is not a subgroup");
    Ok(RhoAnalysis {
        members: Subgroup::from_set(group, gens, members),
        max_defect,
        defects,
    })
}

/// Members `a` with `<x>` ascendant in `<x, a^G>` for every `x`; in finite
/// groups ascendant coincides with subnormal, so this shares the membership
/// computation with [`rho_bar`].
pub fn rho(group: &Group, set_cap: usize) -> Result<Subgroup, GroupError> {
    Ok(rho_analysis(group, set_cap)?.members)
}

/// Members with bounded subnormality defect, together with the largest
/// observed per-member bound `k(a)`.
pub fn rho_bar(group: &Group, set_cap: usize) -> Result<(Subgroup, u32), GroupError> {
    let analysis = rho_analysis(group, set_cap)?;
    Ok((analysis.members, analysis.max_defect))
}

/// `Some(max defect)` if `<x>` is subnormal in `<x, N>` for every cyclic
/// representative `x`, where `N` is the normal closure of the candidate.
fn rho_verdict_for_closure(
    group: &Group,
    ncl: &Subgroup,
    cyclic_reps: &[Payload],
    cap: usize,
) -> Result<Option<u32>, GroupError> {
    let mut max_defect = 0u32;
    for x in cyclic_reps {
        let mut seeds: Vec<Payload> = vec![x.clone()];
        seeds.extend(ncl.generator_payloads().iter().cloned());
        let (_, set) = close_under_mul(group, &seeds, cap)?;
        let joined = Subgroup::from_set(group, seeds, set);
        let e = group.element_from_payload(x.clone())?;
        match is_subnormal(&e, &joined)? {
            Subnormality::Defect(d) => max_defect = max_defect.max(d),
            Subnormality::NotSubnormal => return Ok(None),
        }
    }
    Ok(Some(max_defect))
}

/// Central height of a single element: the least `m` with `a` in `Z_m(G)`,
/// computed without materializing the upper central series. The chain
/// `L_1 = [a, G]`, `L_(j+1) = [L_j, G]` (normal closures of generator
/// commutators) reaches the identity at step `m` exactly when `a` lies in
/// `Z_m`, so only the small normal subgroups `L_j` are ever materialized.
pub fn element_central_height(group: &Group, a: &Element) -> Result<Option<u32>, GroupError> {
    assert!(a.group_id() == group.id(), "element from a different group");
    let id = group.identity_payload();
    if *a.payload() == id {
        return Ok(Some(0));
    }
    let gens = group.generator_payloads();
    let cap = group.enumeration_cap();
    let seeds: Vec<Payload> = gens
        .iter()
        .map(|g| group.comm_payload(a.payload(), g))
        .filter(|c| *c != id)
        .collect();
    let mut current = Subgroup::normal_closure_payloads(group, &seeds)?;
    let mut height = 1u32;
    loop {
        if current.is_trivial() {
            return Ok(Some(height));
        }
        let mut next_seeds = Vec::new();
        for u in current.generator_payloads() {
            for g in &gens {
                let c = group.comm_payload(u, g);
                if c != id {
                    next_seeds.push(c);
                }
            }
        }
        let orbit = conjugation_orbit(group, &next_seeds, &gens, cap)?;
        let (_, set) = close_under_mul(group, &orbit, cap)?;
        debug_assert!(set.iter().all(|p| current.contains_payload(p)));
        if set.len() as u128 == current.order() {
            return Ok(None);
        }
        current = Subgroup::from_set(group, orbit, set);
        height += 1;
    }
}

/// Full series report for a finite group.
#[derive(Debug, Clone)]
pub struct SeriesReport {
    pub upper: CentralSeries,
    pub lower: LowerCentralSeries,
    pub nilpotency_class: Option<u32>,
    pub fitting: Subgroup,
    pub baer: Subgroup,
    pub rho: RhoAnalysis,
}

pub fn series_report(group: &Group, set_cap: usize) -> Result<SeriesReport, GroupError> {
    let upper = upper_central_series(group, set_cap)?;
    let lower = lower_central_series(group, set_cap)?;
    let nilpotency_class = lower.class;
    let fitting = fitting_subgroup(group, set_cap)?;
    let baer = baer_radical(group, set_cap)?;
    let rho = rho_analysis(group, set_cap)?;
    Ok(SeriesReport {
        upper,
        lower,
        nilpotency_class,
        fitting,
        baer,
        rho,
    })
}
