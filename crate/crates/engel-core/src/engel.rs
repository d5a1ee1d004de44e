//! Iterated commutator calculus and Engel element classification.
//!
//! The left-normed commutator is `[x,_1 y] = x^-1 x^y` and
//! `[x,_n y] = [[x,_(n-1) y], y]`. An element `a` is left Engel when for
//! every `g` some `[g,_n a]` vanishes; right Engel when the variable sits on
//! the right, `[a,_n g] = 1`. The bounded variants ask for one `n` that
//! works for every `g`.
//!
//! On finite groups the orbit `c -> [c, y]` is eventually periodic, so a
//! visited-set iteration gives exact verdicts: either the identity shows up
//! (degree found) or a repeat proves the pair is not Engel. On the symbolic
//! infinite engine the same iteration runs under a configurable cap and
//! reports `Unknown` when the cap is hit, never a guess.

use std::collections::{BTreeMap, BTreeSet};

use crate::group::{Element, Group, GroupError, GroupOps, Payload};

/// Default iteration budget for Engel degree searches on infinite engines.
pub const DEFAULT_SYMBOLIC_ITERATION_CAP: u32 = 64;

/// Outcome of an Engel degree search for a single pair of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngelDegree {
    /// Minimal `n >= 1` with the iterated commutator equal to the identity.
    Degree(u32),
    /// The commutator orbit is periodic and never reaches the identity.
    NotEngel,
    /// Iteration budget exhausted without a verdict (infinite engines only).
    Unknown { cap: u32 },
}

impl EngelDegree {
    pub fn is_engel(&self) -> bool {
        matches!(self, EngelDegree::Degree(_))
    }
}

/// The four Engel sets of a finite group, with exact degrees where bounded.
/// On finite groups the bounded sets coincide with the unbounded ones, so
/// the maps carry a degree for every member of the corresponding set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngelClassification {
    pub left: BTreeSet<Element>,
    pub bounded_left: BTreeMap<Element, u32>,
    pub right: BTreeSet<Element>,
    pub bounded_right: BTreeMap<Element, u32>,
}

/// Left-normed iterated commutator `[x,_n y]`. `n = 0` is rejected: the
/// recursion starts at `n = 1`.
pub fn iterated_commutator<G: GroupOps>(
    group: &G,
    x: &G::Elem,
    y: &G::Elem,
    n: u32,
) -> Result<G::Elem, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidArgument(
            "iterated commutator is defined from n = 1".into(),
        ));
    }
    let mut c = group.commutator(x, y);
    for _ in 1..n {
        c = group.commutator(&c, y);
    }
    Ok(c)
}

/// Shared orbit walk: start from `[start, by]` and keep commutating with
/// `by`, watching for the identity or a repeat.
fn engel_orbit<G: GroupOps>(group: &G, start: &G::Elem, by: &G::Elem, cap: u32) -> EngelDegree {
    let id = group.identity();
    let mut visited: Vec<G::Elem> = Vec::new();
    let mut c = group.commutator(start, by);
    let mut n = 1u32;
    loop {
        if c == id {
            return EngelDegree::Degree(n);
        }
        if visited.contains(&c) {
            return EngelDegree::NotEngel;
        }
        if n >= cap {
            return EngelDegree::Unknown { cap };
        }
        if let Some(order) = group.order() {
            // Pigeonhole: a finite orbit must repeat within |G| steps.
            debug_assert!((n as u128) <= order, "orbit exceeded the group order");
        }
        visited.push(c.clone());
        c = group.commutator(&c, by);
        n += 1;
    }
}

fn default_cap<G: GroupOps>(group: &G) -> u32 {
    match group.order() {
        Some(order) => u32::try_from(order.saturating_add(1).min(u32::MAX as u128)).unwrap(),
        None => DEFAULT_SYMBOLIC_ITERATION_CAP,
    }
}

/// Minimal `n` with `[g,_n a] = 1`: the degree of `a` as a left Engel
/// element against the test element `g`. Exact on finite groups.
pub fn left_engel_degree<G: GroupOps>(group: &G, a: &G::Elem, g: &G::Elem) -> EngelDegree {
    engel_orbit(group, g, a, default_cap(group))
}

pub fn left_engel_degree_capped<G: GroupOps>(
    group: &G,
    a: &G::Elem,
    g: &G::Elem,
    cap: u32,
) -> EngelDegree {
    engel_orbit(group, g, a, cap)
}

/// Minimal `n` with `[a,_n g] = 1`: the degree of `a` as a right Engel
/// element against the test element `g`.
pub fn right_engel_degree<G: GroupOps>(group: &G, a: &G::Elem, g: &G::Elem) -> EngelDegree {
    engel_orbit(group, a, g, default_cap(group))
}

pub fn right_engel_degree_capped<G: GroupOps>(
    group: &G,
    a: &G::Elem,
    g: &G::Elem,
    cap: u32,
) -> EngelDegree {
    engel_orbit(group, a, g, cap)
}

/// Exhaustive Engel classification of a finite group, by pairwise degree
/// computation over the full enumeration. The bounded degree of a member is
/// the maximum over all test elements of the minimal per-pair degree.
pub fn classify(group: &Group, set_cap: usize) -> Result<EngelClassification, GroupError> {
    let order = group.order();
    if order > set_cap as u128 {
        return Err(GroupError::CapExceeded {
            op: "classify",
            order,
            cap: set_cap,
        });
    }
    let elems = group.element_payloads()?;
    let id = group.identity_payload();
    let cap = u32::try_from((order + 1).min(u32::MAX as u128)).unwrap();

    let mut left = BTreeSet::new();
    let mut bounded_left = BTreeMap::new();
    let mut right = BTreeSet::new();
    let mut bounded_right = BTreeMap::new();

    for a in elems {
        let mut left_max = 0u32;
        let mut left_ok = true;
        let mut right_max = 0u32;
        let mut right_ok = true;
        for g in elems {
            if left_ok {
                match payload_orbit(group, g, a, &id, cap) {
                    Some(n) => left_max = left_max.max(n),
                    None => left_ok = false,
                }
            }
            if right_ok {
                match payload_orbit(group, a, g, &id, cap) {
                    Some(n) => right_max = right_max.max(n),
                    None => right_ok = false,
                }
            }
            if !left_ok && !right_ok {
                break;
            }
        }
        let elem = group
            .element_from_payload(a.clone())
            .expect("enumerated payload");
        if left_ok {
            left.insert(elem.clone());
            bounded_left.insert(elem.clone(), left_max);
        }
        if right_ok {
            right.insert(elem.clone());
            bounded_right.insert(elem, right_max);
        }
    }
    Ok(EngelClassification {
        left,
        bounded_left,
        right,
        bounded_right,
    })
}

/// Payload-level orbit walk used by the exhaustive classification; returns
/// the degree or `None` for a repeat. The linear scan beats a hash set here
/// because orbits in the catalog are short.
fn payload_orbit(
    group: &Group,
    start: &Payload,
    by: &Payload,
    id: &Payload,
    cap: u32,
) -> Option<u32> {
    let mut visited: Vec<Payload> = Vec::new();
    let mut c = group.comm_payload(start, by);
    let mut n = 1u32;
    loop {
        if c == *id {
            return Some(n);
        }
        if visited.contains(&c) {
            return None;
        }
        assert!(
            n < cap,
            "orbit exceeded the group order; arithmetic is broken"
        );
        visited.push(c.clone());
        c = group.comm_payload(&c, by);
        n += 1;
    }
}

impl EngelClassification {
    pub fn left_payload_set(&self) -> BTreeSet<&Payload> {
        self.left.iter().map(|e| e.payload()).collect()
    }

    pub fn right_payload_set(&self) -> BTreeSet<&Payload> {
        self.right.iter().map(|e| e.payload()).collect()
    }

    /// Largest bounded-left degree, if the set is nonempty.
    pub fn max_bounded_left_degree(&self) -> Option<u32> {
        self.bounded_left.values().copied().max()
    }

    pub fn max_bounded_right_degree(&self) -> Option<u32> {
        self.bounded_right.values().copied().max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap()
    }

    #[test]
    fn iterated_commutator_rejects_zero() {
        let g = s3();
        let e = g.identity();
        assert!(iterated_commutator(&g, &e, &e, 0).is_err());
    }

    #[test]
    fn commutator_with_identity_vanishes() {
        let g = s3();
        let t = g.perm_element(&[vec![1, 2]]).unwrap();
        assert_eq!(
            iterated_commutator(&g, &t, &g.identity(), 1).unwrap(),
            g.identity()
        );
        assert_eq!(iterated_commutator(&g, &t, &t, 1).unwrap(), g.identity());
    }

    #[test]
    fn modular_iterated_commutator_identities() {
        // [a,_m b] = a^(p^m) for 1 <= m <= n, vanishing first at m = n.
        for &(p, n) in &[(3u64, 2u32), (5, 3), (7, 4)] {
            let g = Group::modular(p, n).unwrap();
            let a = g.modular_element(0, 1).unwrap();
            let b = g.modular_element(1, 0).unwrap();
            let a_mod = p.pow(n);
            for m in 1..=n {
                let expected = g.modular_element(0, p.pow(m) % a_mod).unwrap();
                let got = iterated_commutator(&g, &a, &b, m).unwrap();
                assert_eq!(got, expected, "p={p} n={n} m={m}");
                assert_eq!(got == g.identity(), m == n);
            }
        }
    }

    #[test]
    fn modular_5_3_second_commutator() {
        let g = Group::modular(5, 3).unwrap();
        let a = g.modular_element(0, 1).unwrap();
        let b = g.modular_element(1, 0).unwrap();
        assert_eq!(
            iterated_commutator(&g, &a, &b, 2).unwrap(),
            g.modular_element(0, 25).unwrap()
        );
    }

    #[test]
    fn s3_degrees() {
        let g = s3();
        let t = g.perm_element(&[vec![1, 2]]).unwrap();
        let c = g.perm_element(&[vec![1, 2, 3]]).unwrap();
        // orbit of [c,_n t] cycles without reaching the identity
        assert_eq!(left_engel_degree(&g, &t, &c), EngelDegree::NotEngel);
        assert_eq!(right_engel_degree(&g, &c, &t), EngelDegree::NotEngel);
        // the identity is 1-Engel on both sides against everything
        for e in g.elements().unwrap() {
            assert_eq!(
                left_engel_degree(&g, &g.identity(), &e),
                EngelDegree::Degree(1)
            );
            assert_eq!(
                right_engel_degree(&g, &g.identity(), &e),
                EngelDegree::Degree(1)
            );
        }
    }

    #[test]
    fn modular_degree_of_b_is_two() {
        let g = Group::modular(3, 2).unwrap();
        let a = g.modular_element(0, 1).unwrap();
        let b = g.modular_element(1, 0).unwrap();
        // [a,_2 b] = 1 while [a,_1 b] = a^3 != 1
        assert_eq!(left_engel_degree(&g, &b, &a), EngelDegree::Degree(2));
    }

    #[test]
    fn classify_s3_ground_truth() {
        let g = s3();
        let cls = classify(&g, 100).unwrap();
        let left: Vec<String> = cls.left.iter().map(|e| g.render(e)).collect();
        assert_eq!(left, vec!["()", "(1 2 3)", "(1 3 2)"]);
        let right: Vec<String> = cls.right.iter().map(|e| g.render(e)).collect();
        assert_eq!(right, vec!["()"]);
        assert_eq!(cls.bounded_left.len(), 3);
        assert_eq!(cls.bounded_right.len(), 1);
    }

    #[test]
    fn classify_abelian_is_everything() {
        let g = Group::cyclic(6).unwrap();
        let cls = classify(&g, 100).unwrap();
        assert_eq!(cls.left.len(), 6);
        assert_eq!(cls.right.len(), 6);
        assert!(cls.bounded_left.values().all(|&n| n == 1));
    }

    #[test]
    fn classify_nilpotent_class_bounds_degree() {
        let g = Group::modular(3, 2).unwrap();
        let cls = classify(&g, 100).unwrap();
        assert_eq!(cls.left.len(), 27);
        assert_eq!(cls.right.len(), 27);
        assert!(cls.max_bounded_left_degree().unwrap() <= 2);
        assert!(cls.max_bounded_right_degree().unwrap() <= 2);
    }

    #[test]
    fn classify_cap_is_enforced() {
        let g = Group::modular(3, 2).unwrap();
        assert!(matches!(
            classify(&g, 10),
            Err(GroupError::CapExceeded { .. })
        ));
    }

    #[test]
    fn classification_commutes_with_relabeling() {
        // Relabel the points of S3 through the transposition (1 3) and check
        // that the classified sets are the relabeled sets.
        let g = s3();
        let h = Group::permutation(3, &[vec![vec![3, 2]], vec![vec![3, 2, 1]]]).unwrap();
        let cls_g = classify(&g, 100).unwrap();
        let cls_h = classify(&h, 100).unwrap();
        let relabel = |e: &Element| -> Vec<u16> {
            let Payload::Perm(img) = e.payload() else {
                unreachable!()
            };
            // conjugate the image array by the point swap 0 <-> 2
            let sigma = [2u16, 1, 0];
            let mut out = vec![0u16; 3];
            for i in 0..3 {
                out[sigma[i] as usize] = sigma[img[i] as usize];
            }
            out
        };
        let lhs: std::collections::BTreeSet<Vec<u16>> = cls_g.left.iter().map(relabel).collect();
        let rhs: std::collections::BTreeSet<Vec<u16>> = cls_h
            .left
            .iter()
            .map(|e| {
                let Payload::Perm(img) = e.payload() else {
                    unreachable!()
                };
                img.clone()
            })
            .collect();
        assert_eq!(lhs, rhs);
    }
}
