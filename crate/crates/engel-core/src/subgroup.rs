//! Subgroups of finite groups: generated closure, normal closure,
//! centralizer, and the normality/nilpotency predicates the series module
//! builds on. Element sets are always materialized (cap-guarded), so
//! membership and set comparison are cheap.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use crate::group::{Element, Group, GroupError, Payload};

struct SubgroupInner {
    parent: Group,
    gens: Vec<Payload>,
    set: HashSet<Payload>,
    sorted: OnceLock<Vec<Payload>>,
    normal: OnceLock<bool>,
    nilpotent: OnceLock<bool>,
}

/// A materialized subgroup of a finite parent group. Cheap to clone;
/// normality and nilpotency are computed once on demand.
#[derive(Clone)]
pub struct Subgroup {
    inner: Arc<SubgroupInner>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order={})", self.order())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.inner.parent == other.inner.parent && self.inner.set == other.inner.set
    }
}

impl Eq for Subgroup {}

/// Closure of a seed set under multiplication by itself (breadth-first).
/// The result contains the identity even for an empty seed list.
pub(crate) fn close_under_mul(
    parent: &Group,
    seeds: &[Payload],
    cap: usize,
) -> Result<(Vec<Payload>, HashSet<Payload>), GroupError> {
    let id = parent.identity_payload();
    let mut list = vec![id.clone()];
    let mut set = HashSet::new();
    set.insert(id);
    // Include inverses of the seeds so the closure is a subgroup even when
    // seed orders are unknown.
    let mut gens: Vec<Payload> = Vec::new();
    for s in seeds {
        if set.insert(s.clone()) {
            list.push(s.clone());
        }
        gens.push(s.clone());
        let inv = parent.inv_payload(s);
        if set.insert(inv.clone()) {
            list.push(inv.clone());
        }
        gens.push(inv);
    }
    let mut cursor = 0;
    while cursor < list.len() {
        let current = list[cursor].clone();
        for g in &gens {
            let next = parent.mul_payload(&current, g);
            if !set.contains(&next) {
                if list.len() >= cap {
                    return Err(GroupError::CapExceeded {
                        op: "subgroup closure",
                        order: parent.order(),
                        cap,
                    });
                }
                set.insert(next.clone());
                list.push(next);
            }
        }
        cursor += 1;
    }
    Ok((list, set))
}

/// Smallest set containing the seeds and closed under conjugation by the
/// given elements (and their inverses).
pub(crate) fn conjugation_orbit(
    parent: &Group,
    seeds: &[Payload],
    conj_by: &[Payload],
    cap: usize,
) -> Result<Vec<Payload>, GroupError> {
    let mut list: Vec<Payload> = Vec::new();
    let mut set = HashSet::new();
    for s in seeds {
        if set.insert(s.clone()) {
            list.push(s.clone());
        }
    }
    let inverses: Vec<Payload> = conj_by.iter().map(|g| parent.inv_payload(g)).collect();
    let mut cursor = 0;
    while cursor < list.len() {
        let current = list[cursor].clone();
        for g in conj_by.iter().chain(inverses.iter()) {
            let next = parent.conj_payload(&current, g);
            if !set.contains(&next) {
                if list.len() >= cap {
                    return Err(GroupError::ClosureDiverged { cap });
                }
                set.insert(next.clone());
                list.push(next);
            }
        }
        cursor += 1;
    }
    Ok(list)
}

/// Extract a small generating set from a member list by greedily adding
/// elements outside the closure so far; returns the generators and the
/// subgroup they generate (which contains every listed member).
pub(crate) fn reduce_generators(
    parent: &Group,
    sorted_members: &[Payload],
) -> Result<(Vec<Payload>, HashSet<Payload>), GroupError> {
    let mut gens: Vec<Payload> = Vec::new();
    let mut closure: HashSet<Payload> = HashSet::new();
    closure.insert(parent.identity_payload());
    for e in sorted_members {
        if !closure.contains(e) {
            gens.push(e.clone());
            let (_, set) = close_under_mul(parent, &gens, parent.enumeration_cap())?;
            closure = set;
        }
    }
    Ok((gens, closure))
}

impl Subgroup {
    fn from_parts(parent: Group, gens: Vec<Payload>, set: HashSet<Payload>) -> Subgroup {
        Subgroup {
            inner: Arc::new(SubgroupInner {
                parent,
                gens,
                set,
                sorted: OnceLock::new(),
                normal: OnceLock::new(),
                nilpotent: OnceLock::new(),
            }),
        }
    }

    /// `<S>`, the subgroup generated by the given elements.
    pub fn generated(parent: &Group, seeds: &[Element]) -> Result<Subgroup, GroupError> {
        let payloads: Vec<Payload> = seeds
            .iter()
            .map(|e| {
                assert!(e.group_id() == parent.id(), "seed from a different group");
                e.payload().clone()
            })
            .collect();
        Self::generated_payloads(parent, &payloads)
    }

    pub(crate) fn generated_payloads(
        parent: &Group,
        seeds: &[Payload],
    ) -> Result<Subgroup, GroupError> {
        let (_, set) = close_under_mul(parent, seeds, parent.enumeration_cap())?;
        Ok(Self::from_parts(parent.clone(), seeds.to_vec(), set))
    }

    /// Normal closure `<S^G>`: conjugation orbit of the seeds under the
    /// parent generators, then the subgroup generated by the orbit. The
    /// orbit is kept as the generator list of the result.
    pub fn normal_closure(parent: &Group, seeds: &[Element]) -> Result<Subgroup, GroupError> {
        let payloads: Vec<Payload> = seeds
            .iter()
            .map(|e| {
                assert!(e.group_id() == parent.id(), "seed from a different group");
                e.payload().clone()
            })
            .collect();
        Self::normal_closure_payloads(parent, &payloads)
    }

    pub(crate) fn normal_closure_payloads(
        parent: &Group,
        seeds: &[Payload],
    ) -> Result<Subgroup, GroupError> {
        let orbit = conjugation_orbit(
            parent,
            seeds,
            &parent.generator_payloads(),
            parent.enumeration_cap(),
        )?;
        let (_, set) = close_under_mul(parent, &orbit, parent.enumeration_cap())?;
        Ok(Self::from_parts(parent.clone(), orbit, set))
    }

    /// Centralizer `{g in G : gs = sg for all s in S}`. Requires the parent
    /// to be enumerable.
    pub fn centralizer(parent: &Group, seeds: &[Element]) -> Result<Subgroup, GroupError> {
        for e in seeds {
            assert!(e.group_id() == parent.id(), "seed from a different group");
        }
        let elems = parent.element_payloads()?;
        let mut set = HashSet::new();
        let mut gens = Vec::new();
        for g in elems {
            let commutes = seeds
                .iter()
                .all(|s| parent.mul_payload(g, s.payload()) == parent.mul_payload(s.payload(), g));
            if commutes {
                set.insert(g.clone());
                gens.push(g.clone());
            }
        }
        Ok(Self::from_parts(parent.clone(), gens, set))
    }

    /// The whole group as a subgroup of itself (requires enumerability).
    pub fn whole_group(parent: &Group) -> Result<Subgroup, GroupError> {
        let elems = parent.element_payloads()?;
        let set: HashSet<Payload> = elems.iter().cloned().collect();
        Ok(Self::from_parts(
            parent.clone(),
            parent.generator_payloads(),
            set,
        ))
    }

    /// Trivial subgroup.
    pub fn trivial(parent: &Group) -> Subgroup {
        let id = parent.identity_payload();
        let mut set = HashSet::new();
        set.insert(id);
        Self::from_parts(parent.clone(), Vec::new(), set)
    }

    pub(crate) fn from_set(parent: &Group, gens: Vec<Payload>, set: HashSet<Payload>) -> Subgroup {
        Self::from_parts(parent.clone(), gens, set)
    }

    pub fn parent(&self) -> &Group {
        &self.inner.parent
    }

    pub fn order(&self) -> u128 {
        self.inner.set.len() as u128
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.set.len() == 1
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.group_id() == self.inner.parent.id() && self.inner.set.contains(e.payload())
    }

    pub(crate) fn contains_payload(&self, p: &Payload) -> bool {
        self.inner.set.contains(p)
    }

    pub(crate) fn payload_set(&self) -> &HashSet<Payload> {
        &self.inner.set
    }

    pub(crate) fn generator_payloads(&self) -> &[Payload] {
        &self.inner.gens
    }

    pub fn generators(&self) -> Vec<Element> {
        self.inner
            .gens
            .iter()
            .map(|p| {
                self.inner
                    .parent
                    .element_from_payload(p.clone())
                    .expect("stored generator payload is valid")
            })
            .collect()
    }

    /// Elements in canonical sorted order.
    pub fn elements(&self) -> Vec<Element> {
        self.sorted_payloads()
            .iter()
            .map(|p| {
                self.inner
                    .parent
                    .element_from_payload(p.clone())
                    .expect("stored payload is valid")
            })
            .collect()
    }

    pub(crate) fn sorted_payloads(&self) -> &[Payload] {
        self.inner.sorted.get_or_init(|| {
            let mut v: Vec<Payload> = self.inner.set.iter().cloned().collect();
            v.sort();
            v
        })
    }

    pub fn set_eq(&self, other: &Subgroup) -> bool {
        self == other
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.inner.set.len() <= other.inner.set.len()
            && self.inner.set.iter().all(|p| other.inner.set.contains(p))
    }

    /// Closed under conjugation by every parent generator?
    pub fn is_normal(&self) -> bool {
        *self.inner.normal.get_or_init(|| {
            let gens = self.inner.parent.generator_payloads();
            self.inner.set.iter().all(|s| {
                gens.iter().all(|g| {
                    self.inner
                        .set
                        .contains(&self.inner.parent.conj_payload(s, g))
                })
            })
        })
    }

    /// Nilpotency via stabilization of the lower central series computed
    /// inside the subgroup.
    pub fn is_nilpotent(&self) -> bool {
        *self
            .inner
            .nilpotent
            .get_or_init(|| self.nilpotency_class().is_some())
    }

    /// Nilpotency class of the subgroup, `None` when the lower central
    /// series stabilizes above the identity. The trivial group has class 0.
    pub fn nilpotency_class(&self) -> Option<u32> {
        if self.is_trivial() {
            return Some(0);
        }
        let parent = &self.inner.parent;
        let cap = parent.enumeration_cap();
        let h_gens: Vec<Payload> = if self.inner.gens.is_empty() {
            self.sorted_payloads().to_vec()
        } else {
            self.inner.gens.clone()
        };
        // gamma_2 = [H, H], then gamma_{i+1} = [gamma_i, H]; each term is the
        // closure, inside H, of generator commutators under H-conjugation.
        let mut current_gens = h_gens.clone();
        let mut current_set: Option<HashSet<Payload>> = None; // None = the whole subgroup
        let mut class = 1u32;
        loop {
            let mut seeds = Vec::new();
            for u in &current_gens {
                for v in &h_gens {
                    let c = parent.comm_payload(u, v);
                    if c != parent.identity_payload() {
                        seeds.push(c);
                    }
                }
            }
            let orbit = conjugation_orbit(parent, &seeds, &h_gens, cap)
                .expect("orbit inside a materialized subgroup cannot diverge");
            let (_, set) = close_under_mul(parent, &orbit, cap)
                .expect("closure inside a materialized subgroup cannot exceed the cap");
            debug_assert!(set.iter().all(|p| self.inner.set.contains(p)));
            if set.len() == 1 {
                return Some(class);
            }
            match &current_set {
                None if set.len() == self.inner.set.len() => return None,
                Some(prev) if *prev == set => return None,
                _ => {}
            }
            current_gens = orbit;
            current_set = Some(set);
            class += 1;
        }
    }
}
