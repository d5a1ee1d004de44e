//! Concrete group engines behind one uniform interface.
//!
//! Three families of engines are provided: permutation groups acting on
//! points on the right, metacyclic p-groups `<a, b | a^(p^n) = b^(p^(n-1)) = 1,
//! a^b = a^(1+p)>` with closed-form collection arithmetic, and product
//! constructions (direct products and semidirect products by a cyclic actor).
//! Groups are immutable after construction and cheap to clone; elements are
//! value-semantic with a unique canonical payload, so equality is payload
//! equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::modmath::{self, ModularParams};

/// Default ceiling for full element enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 200_000;
/// Default ceiling for set-valued analyses (Engel sets, series); those are
/// quadratic in the group order, hence the stricter bound.
pub const DEFAULT_SET_ANALYSIS_CAP: usize = 5_000;
/// Hard ceiling that user-supplied cap overrides are clamped to.
pub const HARD_CAP_CEILING: usize = 2_000_000;

/// Automorphism actions larger than this are rejected when building a
/// semidirect product (the action power table is materialized per generator).
const ACTION_ORDER_CAP: u64 = 1_000_000;

/// Pair count threshold under which semidirect actions are validated by the
/// exhaustive homomorphism check; larger bases fall back to relation checks.
const EXHAUSTIVE_ACTION_CHECK_CAP: u128 = 5_000;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("operation `{op}` needs to enumerate {order} elements, above the cap of {cap}")]
    CapExceeded {
        op: &'static str,
        order: u128,
        cap: usize,
    },
    #[error("operation `{op}` is not supported on an infinite group")]
    Infinite { op: &'static str },
    #[error("invalid construction: {0}")]
    InvalidConstruction(String),
    #[error("action is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("closure did not stabilize within {cap} elements")]
    ClosureDiverged { cap: usize },
}

/// Identifier distinguishing group instances; elements remember the group
/// they belong to and mixing elements across groups is a caller bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u64);

fn next_group_id() -> GroupId {
    static COUNTER: AtomicU64 = AtomicU64::new(1);
    GroupId(COUNTER.fetch_add(1, Ordering::Relaxed))
}

/// Canonical element payload. Residues are always reduced into their
/// declared ranges and permutation images are total, so two elements are
/// equal iff their payloads are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    /// Image array of a permutation on 0-based points.
    Perm(Vec<u16>),
    /// `b^j a^k` in the metacyclic engine, `j` mod `p^(n-1)`, `k` mod `p^n`.
    Mod { j: u64, k: u64 },
    /// Exponent of the generator of a cyclic group, reduced mod the order.
    Cyc(u64),
    /// Component pair of a direct or semidirect product.
    Pair(Box<Payload>, Box<Payload>),
}

/// An element of a specific [`Group`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub(crate) group: GroupId,
    pub(crate) payload: Payload,
}

impl Element {
    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn group_id(&self) -> GroupId {
        self.group
    }
}

/// Generator-image action of a cyclic actor on a base group. The power
/// table holds the image of every base generator under each power of the
/// automorphism, so applying `phi^r` to an arbitrary element reduces to a
/// generator-word evaluation.
#[derive(Debug)]
pub(crate) struct Action {
    /// Multiplicative order of the automorphism.
    order: u64,
    /// `power_images[r][t]` = image of base generator `t` under `phi^r`.
    power_images: Vec<Vec<Payload>>,
}

#[derive(Debug)]
pub(crate) enum Engine {
    Perm {
        degree: u16,
        gens: Vec<Payload>,
    },
    Modular {
        params: ModularParams,
    },
    Cyclic {
        modulus: u64,
    },
    Direct {
        left: Group,
        right: Group,
    },
    Semidirect {
        actor_modulus: u64,
        base: Group,
        action: Action,
    },
}

struct Enumeration {
    list: Vec<Payload>,
    index: HashMap<Payload, u32>,
    /// BFS predecessor and generator index, for generator-word recovery.
    pred: Vec<u32>,
    via: Vec<u16>,
}

struct GroupInner {
    id: GroupId,
    engine: Engine,
    order: u128,
    enumeration_cap: usize,
    enumeration: OnceLock<Result<Enumeration, GroupError>>,
}

/// A finite group backed by one of the concrete engines. Cloning is cheap
/// (shared immutable state) and all operations are pure, so groups can be
/// used freely from multiple threads.
#[derive(Clone)]
pub struct Group {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Group(id={:?}, order={})",
            self.inner.id, self.inner.order
        )
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.inner.id == other.inner.id
    }
}

impl Eq for Group {}

impl Group {
    fn from_engine(engine: Engine, order: u128, cap: usize) -> Group {
        Group {
            inner: Arc::new(GroupInner {
                id: next_group_id(),
                engine,
                order,
                enumeration_cap: cap,
                enumeration: OnceLock::new(),
            }),
        }
    }

    /// Permutation group on `degree` points generated by the given cycles
    /// (1-based points, each generator a product of disjoint cycles). The
    /// closure is enumerated eagerly to determine the order.
    pub fn permutation(degree: u16, generators: &[Vec<Vec<u16>>]) -> Result<Group, GroupError> {
        Self::permutation_with_cap(degree, generators, DEFAULT_ENUMERATION_CAP)
    }

    pub fn permutation_with_cap(
        degree: u16,
        generators: &[Vec<Vec<u16>>],
        cap: usize,
    ) -> Result<Group, GroupError> {
        if degree == 0 {
            return Err(GroupError::InvalidConstruction(
                "permutation degree must be at least 1".into(),
            ));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for cycles in generators {
            gens.push(perm_from_cycles(degree, cycles)?);
        }
        let g = Group::from_engine(
            Engine::Perm { degree, gens },
            0, // patched below once the closure is known
            cap.min(HARD_CAP_CEILING),
        );
        // Determine the order by running the closure now; this also seeds the
        // enumeration cache.
        let order = g.enumeration()?.list.len() as u128;
        let inner = GroupInner {
            id: g.inner.id,
            engine: match &g.inner.engine {
                Engine::Perm { degree, gens } => Engine::Perm {
                    degree: *degree,
                    gens: gens.clone(),
                },
                _ => unreachable!(),
            },
            order,
            enumeration_cap: g.inner.enumeration_cap,
            enumeration: OnceLock::new(),
        };
        Ok(Group {
            inner: Arc::new(inner),
        })
    }

    /// Cyclic group of order `m`.
    pub fn cyclic(m: u64) -> Result<Group, GroupError> {
        if m == 0 {
            return Err(GroupError::InvalidConstruction(
                "cyclic group order must be positive".into(),
            ));
        }
        Ok(Group::from_engine(
            Engine::Cyclic { modulus: m },
            m as u128,
            DEFAULT_ENUMERATION_CAP,
        ))
    }

    /// Dihedral group of order `2m` (`m >= 3`), realized on `m` points.
    pub fn dihedral(order: u64) -> Result<Group, GroupError> {
        if order < 6 || !order.is_multiple_of(2) {
            return Err(GroupError::InvalidConstruction(format!(
                "dihedral order must be an even number >= 6, got {order}"
            )));
        }
        let m = (order / 2) as u16;
        let rotation: Vec<Vec<u16>> = vec![(1..=m).collect()];
        // reflection i -> m + 1 - i, written as disjoint transpositions
        let mut reflection = Vec::new();
        let mut lo = 1u16;
        let mut hi = m;
        while lo < hi {
            reflection.push(vec![lo, hi]);
            lo += 1;
            hi -= 1;
        }
        Group::permutation(m, &[rotation, reflection])
    }

    /// Metacyclic p-group of order `p^(2n-1)` with generators `a` of order
    /// `p^n` and `b` of order `p^(n-1)` subject to `a^b = a^(1+p)`.
    /// Multiplication is the closed-form collection rule
    /// `b^j1 a^k1 * b^j2 a^k2 = b^(j1+j2) a^(k1 (1+p)^j2 + k2)`.
    pub fn modular(p: u64, n: u32) -> Result<Group, GroupError> {
        Self::modular_inner(p, n, false)
    }

    /// Mutated collection arithmetic (deliberately wrong conjugation
    /// multiplier). Exists so the verification harness can prove it detects
    /// broken engines; never use outside tests.
    #[doc(hidden)]
    pub fn modular_collection_mutant(p: u64, n: u32) -> Result<Group, GroupError> {
        Self::modular_inner(p, n, true)
    }

    fn modular_inner(p: u64, n: u32, mutant: bool) -> Result<Group, GroupError> {
        let params = ModularParams::new(p, n, mutant)?;
        let order = params.group_order();
        Ok(Group::from_engine(
            Engine::Modular { params },
            order,
            DEFAULT_ENUMERATION_CAP,
        ))
    }

    /// Direct product with componentwise multiplication.
    pub fn direct_product(left: &Group, right: &Group) -> Group {
        let order = left.order() * right.order();
        let cap = left.inner.enumeration_cap.max(right.inner.enumeration_cap);
        Group::from_engine(
            Engine::Direct {
                left: left.clone(),
                right: right.clone(),
            },
            order,
            cap,
        )
    }

    /// Semidirect product `actor ⋉ base` where `actor` is cyclic and its
    /// generator acts by the automorphism sending base generator `t` to
    /// `images[t]`. The action is validated: homomorphism property
    /// (exhaustively when the base is small, via presentation relations for
    /// large metacyclic bases), and its order must divide the actor's order.
    pub fn semidirect_product(
        actor: &Group,
        base: &Group,
        images: &[Element],
    ) -> Result<Group, GroupError> {
        let actor_modulus = match &actor.inner.engine {
            Engine::Cyclic { modulus } => *modulus,
            _ => {
                return Err(GroupError::InvalidConstruction(
                    "semidirect actor must be a cyclic group".into(),
                ))
            }
        };
        let base_gens = base.generator_payloads();
        if images.len() != base_gens.len() {
            return Err(GroupError::InvalidConstruction(format!(
                "action must map every base generator: expected {} images, got {}",
                base_gens.len(),
                images.len()
            )));
        }
        for e in images {
            if e.group != base.id() {
                return Err(GroupError::InvalidConstruction(
                    "action images must be elements of the base group".into(),
                ));
            }
        }
        let image_payloads: Vec<Payload> = images.iter().map(|e| e.payload.clone()).collect();
        base.validate_action_homomorphism(&image_payloads)?;

        // Determine the automorphism's order by iterating generator images,
        // and record the power table along the way.
        let mut power_images = vec![base_gens.clone()];
        let mut order = None;
        for r in 1..=ACTION_ORDER_CAP {
            let prev = power_images.last().unwrap();
            let mut next = Vec::with_capacity(prev.len());
            for u in prev {
                next.push(base.apply_word_images(&image_payloads, u)?);
            }
            if next == base_gens {
                order = Some(r);
                break;
            }
            power_images.push(next);
        }
        let action_order = order.ok_or_else(|| {
            GroupError::NotAutomorphism(format!(
                "action order exceeds {ACTION_ORDER_CAP}; not invertible at this scale"
            ))
        })?;
        if actor_modulus % action_order != 0 {
            return Err(GroupError::NotAutomorphism(format!(
                "action order {action_order} does not divide the actor order {actor_modulus}"
            )));
        }
        let order = actor.order() * base.order();
        let cap = actor.inner.enumeration_cap.max(base.inner.enumeration_cap);
        Ok(Group::from_engine(
            Engine::Semidirect {
                actor_modulus,
                base: base.clone(),
                action: Action {
                    order: action_order,
                    power_images,
                },
            },
            order,
            cap,
        ))
    }

    /// Same group with a different enumeration cap. Resets the cached
    /// enumeration but keeps the identity of the group.
    pub fn with_enumeration_cap(&self, cap: usize) -> Group {
        let cap = cap.min(HARD_CAP_CEILING);
        let engine = self.clone_engine();
        Group {
            inner: Arc::new(GroupInner {
                id: self.inner.id,
                engine,
                order: self.inner.order,
                enumeration_cap: cap,
                enumeration: OnceLock::new(),
            }),
        }
    }

    fn clone_engine(&self) -> Engine {
        match &self.inner.engine {
            Engine::Perm { degree, gens } => Engine::Perm {
                degree: *degree,
                gens: gens.clone(),
            },
            Engine::Modular { params } => Engine::Modular { params: *params },
            Engine::Cyclic { modulus } => Engine::Cyclic { modulus: *modulus },
            Engine::Direct { left, right } => Engine::Direct {
                left: left.clone(),
                right: right.clone(),
            },
            Engine::Semidirect {
                actor_modulus,
                base,
                action,
            } => Engine::Semidirect {
                actor_modulus: *actor_modulus,
                base: base.clone(),
                action: Action {
                    order: action.order,
                    power_images: action.power_images.clone(),
                },
            },
        }
    }

    pub fn id(&self) -> GroupId {
        self.inner.id
    }

    pub fn order(&self) -> u128 {
        self.inner.order
    }

    pub fn enumeration_cap(&self) -> usize {
        self.inner.enumeration_cap
    }

    pub fn is_cyclic_engine(&self) -> bool {
        matches!(self.inner.engine, Engine::Cyclic { .. })
    }

    pub fn is_modular_engine(&self) -> bool {
        matches!(self.inner.engine, Engine::Modular { .. })
    }

    /// Modular engine parameters `(p, n)` if this is a metacyclic engine.
    pub fn modular_parameters(&self) -> Option<(u64, u32)> {
        match &self.inner.engine {
            Engine::Modular { params } => Some((params.p, params.n)),
            _ => None,
        }
    }

    fn wrap(&self, payload: Payload) -> Element {
        Element {
            group: self.inner.id,
            payload,
        }
    }

    fn check_member(&self, e: &Element, op: &str) {
        assert!(
            e.group == self.inner.id,
            "{op}: element belongs to group {:?}, not {:?}",
            e.group,
            self.inner.id
        );
    }

    pub fn identity(&self) -> Element {
        self.wrap(self.identity_payload())
    }

    pub(crate) fn identity_payload(&self) -> Payload {
        match &self.inner.engine {
            Engine::Perm { degree, .. } => Payload::Perm((0..*degree).collect()),
            Engine::Modular { .. } => Payload::Mod { j: 0, k: 0 },
            Engine::Cyclic { .. } => Payload::Cyc(0),
            Engine::Direct { left, right } => Payload::Pair(
                Box::new(left.identity_payload()),
                Box::new(right.identity_payload()),
            ),
            Engine::Semidirect { base, .. } => {
                Payload::Pair(Box::new(Payload::Cyc(0)), Box::new(base.identity_payload()))
            }
        }
    }

    pub fn generators(&self) -> Vec<Element> {
        self.generator_payloads()
            .into_iter()
            .map(|p| self.wrap(p))
            .collect()
    }

    pub(crate) fn generator_payloads(&self) -> Vec<Payload> {
        match &self.inner.engine {
            Engine::Perm { gens, .. } => gens.clone(),
            // a = (j = 0, k = 1), b = (j = 1, k = 0)
            Engine::Modular { .. } => {
                vec![Payload::Mod { j: 0, k: 1 }, Payload::Mod { j: 1, k: 0 }]
            }
            Engine::Cyclic { .. } => vec![Payload::Cyc(1)],
            Engine::Direct { left, right } => {
                let mut out = Vec::new();
                for g in left.generator_payloads() {
                    out.push(Payload::Pair(
                        Box::new(g),
                        Box::new(right.identity_payload()),
                    ));
                }
                for g in right.generator_payloads() {
                    out.push(Payload::Pair(
                        Box::new(left.identity_payload()),
                        Box::new(g),
                    ));
                }
                out
            }
            Engine::Semidirect { base, .. } => {
                let mut out = vec![Payload::Pair(
                    Box::new(Payload::Cyc(1)),
                    Box::new(base.identity_payload()),
                )];
                for g in base.generator_payloads() {
                    out.push(Payload::Pair(Box::new(Payload::Cyc(0)), Box::new(g)));
                }
                out
            }
        }
    }

    /// Names for the generators, used by the definition language when
    /// spelling out semidirect action maps.
    pub fn generator_names(&self) -> Vec<String> {
        match &self.inner.engine {
            Engine::Modular { .. } => vec!["a".into(), "b".into()],
            Engine::Cyclic { .. } => vec!["g".into()],
            _ => (1..=self.generator_payloads().len())
                .map(|i| format!("g{i}"))
                .collect(),
        }
    }

    /// Group product. Permutations compose left-to-right (points act on the
    /// right: `p^(gh) = (p^g)^h`); the metacyclic engine uses the collection
    /// rule; products twist by the recorded action.
    ///
    /// Panics if the operands belong to different groups.
    pub fn mul(&self, g: &Element, h: &Element) -> Element {
        self.check_member(g, "mul");
        self.check_member(h, "mul");
        self.wrap(self.mul_payload(&g.payload, &h.payload))
    }

    pub fn inv(&self, g: &Element) -> Element {
        self.check_member(g, "inv");
        self.wrap(self.inv_payload(&g.payload))
    }

    /// Conjugate `g^h = h^-1 g h`.
    pub fn conjugate(&self, g: &Element, h: &Element) -> Element {
        self.check_member(g, "conjugate");
        self.check_member(h, "conjugate");
        self.wrap(self.conj_payload(&g.payload, &h.payload))
    }

    /// Commutator `[g, h] = g^-1 h^-1 g h = g^-1 * g^h`.
    pub fn commutator(&self, g: &Element, h: &Element) -> Element {
        self.check_member(g, "commutator");
        self.check_member(h, "commutator");
        self.wrap(self.comm_payload(&g.payload, &h.payload))
    }

    pub fn pow(&self, g: &Element, e: i64) -> Element {
        self.check_member(g, "pow");
        self.wrap(self.pow_payload(&g.payload, e))
    }

    /// Order of an element, by repeated multiplication.
    pub fn element_order(&self, g: &Element) -> u128 {
        self.check_member(g, "element_order");
        let id = self.identity_payload();
        if g.payload == id {
            return 1;
        }
        let mut acc = g.payload.clone();
        let mut n: u128 = 1;
        while acc != id {
            acc = self.mul_payload(&acc, &g.payload);
            n += 1;
            assert!(
                n <= self.inner.order,
                "element order exceeded the group order; engine arithmetic is broken"
            );
        }
        n
    }

    pub(crate) fn mul_payload(&self, g: &Payload, h: &Payload) -> Payload {
        match (&self.inner.engine, g, h) {
            (Engine::Perm { .. }, Payload::Perm(a), Payload::Perm(b)) => {
                Payload::Perm(a.iter().map(|&i| b[i as usize]).collect())
            }
            (
                Engine::Modular { params },
                Payload::Mod { j: j1, k: k1 },
                Payload::Mod { j: j2, k: k2 },
            ) => {
                let (j, k) = params.mul((*j1, *k1), (*j2, *k2));
                Payload::Mod { j, k }
            }
            (Engine::Cyclic { modulus }, Payload::Cyc(a), Payload::Cyc(b)) => {
                Payload::Cyc(modmath::add_mod(*a, *b, *modulus))
            }
            (Engine::Direct { left, right }, Payload::Pair(g1, g2), Payload::Pair(h1, h2)) => {
                Payload::Pair(
                    Box::new(left.mul_payload(g1, h1)),
                    Box::new(right.mul_payload(g2, h2)),
                )
            }
            (
                Engine::Semidirect {
                    actor_modulus,
                    base,
                    action,
                },
                Payload::Pair(r1, u),
                Payload::Pair(r2, v),
            ) => {
                let (Payload::Cyc(i1), Payload::Cyc(i2)) = (r1.as_ref(), r2.as_ref()) else {
                    panic!("malformed semidirect payload");
                };
                let twisted = action.apply(base, *i2, u);
                Payload::Pair(
                    Box::new(Payload::Cyc(modmath::add_mod(*i1, *i2, *actor_modulus))),
                    Box::new(base.mul_payload(&twisted, v)),
                )
            }
            _ => panic!("payload shape does not match the group engine"),
        }
    }

    pub(crate) fn inv_payload(&self, g: &Payload) -> Payload {
        match (&self.inner.engine, g) {
            (Engine::Perm { degree, .. }, Payload::Perm(a)) => {
                let mut out = vec![0u16; *degree as usize];
                for (i, &img) in a.iter().enumerate() {
                    out[img as usize] = i as u16;
                }
                Payload::Perm(out)
            }
            (Engine::Modular { params }, Payload::Mod { j, k }) => {
                let (j, k) = params.inv((*j, *k));
                Payload::Mod { j, k }
            }
            (Engine::Cyclic { modulus }, Payload::Cyc(a)) => {
                Payload::Cyc(if *a == 0 { 0 } else { modulus - a })
            }
            (Engine::Direct { left, right }, Payload::Pair(g1, g2)) => Payload::Pair(
                Box::new(left.inv_payload(g1)),
                Box::new(right.inv_payload(g2)),
            ),
            (
                Engine::Semidirect {
                    actor_modulus,
                    base,
                    action,
                },
                Payload::Pair(r, u),
            ) => {
                let Payload::Cyc(i) = r.as_ref() else {
                    panic!("malformed semidirect payload");
                };
                let i_inv = if *i == 0 { 0 } else { actor_modulus - i };
                let u_inv = base.inv_payload(u);
                Payload::Pair(
                    Box::new(Payload::Cyc(i_inv)),
                    Box::new(action.apply(base, i_inv, &u_inv)),
                )
            }
            _ => panic!("payload shape does not match the group engine"),
        }
    }

    pub(crate) fn conj_payload(&self, g: &Payload, h: &Payload) -> Payload {
        let hi = self.inv_payload(h);
        self.mul_payload(&self.mul_payload(&hi, g), h)
    }

    pub(crate) fn comm_payload(&self, g: &Payload, h: &Payload) -> Payload {
        self.mul_payload(&self.inv_payload(g), &self.conj_payload(g, h))
    }

    pub(crate) fn pow_payload(&self, g: &Payload, e: i64) -> Payload {
        let (mut base, mut e) = if e < 0 {
            (self.inv_payload(g), e.unsigned_abs())
        } else {
            (g.clone(), e as u64)
        };
        let mut acc = self.identity_payload();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_payload(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_payload(&base, &base);
            }
        }
        acc
    }

    /// Full element enumeration by breadth-first closure from the identity.
    /// Deterministic order. Errors if the order exceeds the enumeration cap.
    pub fn elements(&self) -> Result<Vec<Element>, GroupError> {
        Ok(self
            .enumeration()?
            .list
            .iter()
            .map(|p| self.wrap(p.clone()))
            .collect())
    }

    pub(crate) fn element_payloads(&self) -> Result<&[Payload], GroupError> {
        Ok(&self.enumeration()?.list)
    }

    fn enumeration(&self) -> Result<&Enumeration, GroupError> {
        self.inner
            .enumeration
            .get_or_init(|| self.run_enumeration())
            .as_ref()
            .map_err(|e| e.clone())
    }

    fn run_enumeration(&self) -> Result<Enumeration, GroupError> {
        let cap = self.inner.enumeration_cap;
        if self.inner.order != 0 && self.inner.order > cap as u128 {
            return Err(GroupError::CapExceeded {
                op: "enumerate",
                order: self.inner.order,
                cap,
            });
        }
        let gens = self.generator_payloads();
        let id = self.identity_payload();
        let mut list = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut pred = vec![0u32];
        let mut via = vec![0u16];
        let mut cursor = 0usize;
        while cursor < list.len() {
            let current = list[cursor].clone();
            for (t, g) in gens.iter().enumerate() {
                let next = self.mul_payload(&current, g);
                if !index.contains_key(&next) {
                    if list.len() >= cap {
                        return Err(GroupError::CapExceeded {
                            op: "enumerate",
                            order: self.inner.order,
                            cap,
                        });
                    }
                    index.insert(next.clone(), list.len() as u32);
                    list.push(next);
                    pred.push(cursor as u32);
                    via.push(t as u16);
                }
            }
            cursor += 1;
        }
        if self.inner.order != 0 {
            assert_eq!(
                list.len() as u128,
                self.inner.order,
                "enumeration does not match the declared group order"
            );
        }
        Ok(Enumeration {
            list,
            index,
            pred,
            via,
        })
    }

    /// Decompose a payload into a generator word `[(gen index, exponent)]`
    /// whose left-to-right product is the element. Closed-form for the
    /// coordinate engines; falls back to BFS words (enumeration-capped) for
    /// permutation groups.
    pub(crate) fn decompose(&self, g: &Payload) -> Result<Vec<(usize, i64)>, GroupError> {
        match (&self.inner.engine, g) {
            (Engine::Modular { .. }, Payload::Mod { j, k }) => {
                // b^j a^k with generators [a, b]
                Ok(vec![(1, *j as i64), (0, *k as i64)])
            }
            (Engine::Cyclic { .. }, Payload::Cyc(r)) => Ok(vec![(0, *r as i64)]),
            (Engine::Direct { left, right }, Payload::Pair(l, r)) => {
                let mut word = left.decompose(l)?;
                let offset = left.generator_payloads().len();
                for (t, e) in right.decompose(r)? {
                    word.push((t + offset, e));
                }
                Ok(word)
            }
            (Engine::Semidirect { base, .. }, Payload::Pair(r, u)) => {
                let Payload::Cyc(i) = r.as_ref() else {
                    panic!("malformed semidirect payload");
                };
                let mut word = vec![(0usize, *i as i64)];
                for (t, e) in base.decompose(u)? {
                    word.push((t + 1, e));
                }
                Ok(word)
            }
            (Engine::Perm { .. }, _) => {
                let en = self.enumeration()?;
                let mut idx = *en.index.get(g).expect("element not in the group closure");
                let mut rev = Vec::new();
                while idx != 0 {
                    rev.push(en.via[idx as usize] as usize);
                    idx = en.pred[idx as usize];
                }
                rev.reverse();
                let mut word: Vec<(usize, i64)> = Vec::new();
                for t in rev {
                    match word.last_mut() {
                        Some((last, e)) if *last == t => *e += 1,
                        _ => word.push((t, 1)),
                    }
                }
                Ok(word)
            }
            _ => panic!("payload shape does not match the group engine"),
        }
    }

    /// Evaluate the word `decompose(u)` with base generators replaced by
    /// `images` — this is the application of a generator-image endomorphism.
    fn apply_word_images(&self, images: &[Payload], u: &Payload) -> Result<Payload, GroupError> {
        let mut acc = self.identity_payload();
        for (t, e) in self.decompose(u)? {
            let factor = self.pow_payload(&images[t], e);
            acc = self.mul_payload(&acc, &factor);
        }
        Ok(acc)
    }

    /// Check that generator images extend to a homomorphism: exhaustively
    /// over all pairs when the base is small; via the defining relations for
    /// metacyclic and cyclic engines otherwise.
    fn validate_action_homomorphism(&self, images: &[Payload]) -> Result<(), GroupError> {
        let order = self.order();
        if order * order <= EXHAUSTIVE_ACTION_CHECK_CAP * EXHAUSTIVE_ACTION_CHECK_CAP
            && order <= EXHAUSTIVE_ACTION_CHECK_CAP
        {
            let elems = self.element_payloads()?;
            let mut mapped: HashMap<&Payload, Payload> = HashMap::with_capacity(elems.len());
            for u in elems {
                mapped.insert(u, self.apply_word_images(images, u)?);
            }
            for u in elems {
                for v in elems {
                    let lhs = self.apply_word_images(images, &self.mul_payload(u, v))?;
                    let rhs = self.mul_payload(&mapped[u], &mapped[v]);
                    if lhs != rhs {
                        return Err(GroupError::NotAutomorphism(format!(
                            "homomorphism check failed on the pair ({u:?}, {v:?})"
                        )));
                    }
                }
            }
            // Bijectivity over the full element set.
            let image_set: std::collections::HashSet<&Payload> = mapped.values().collect();
            if image_set.len() != elems.len() {
                return Err(GroupError::NotAutomorphism(
                    "generator images do not induce a bijection".into(),
                ));
            }
            return Ok(());
        }
        match &self.inner.engine {
            Engine::Modular { params } => {
                // Presentation relations: a^(p^n) = 1, b^(p^(n-1)) = 1,
                // a^b = a^(1+p). A generator map extends to an endomorphism
                // iff the images satisfy them.
                let fa = &images[0];
                let fb = &images[1];
                let pn = params.a_modulus;
                let pn1 = params.b_modulus;
                if self.pow_payload(fa, pn as i64) != self.identity_payload() {
                    return Err(GroupError::NotAutomorphism(
                        "image of a violates a^(p^n) = 1".into(),
                    ));
                }
                if self.pow_payload(fb, pn1 as i64) != self.identity_payload() {
                    return Err(GroupError::NotAutomorphism(
                        "image of b violates b^(p^(n-1)) = 1".into(),
                    ));
                }
                let lhs = self.conj_payload(fa, fb);
                let rhs = self.pow_payload(fa, (1 + params.p) as i64);
                if lhs != rhs {
                    return Err(GroupError::NotAutomorphism(
                        "images violate the relation a^b = a^(1+p)".into(),
                    ));
                }
                Ok(())
            }
            Engine::Cyclic { modulus } => {
                let Payload::Cyc(r) = &images[0] else {
                    panic!("malformed cyclic payload");
                };
                if modmath::gcd(*r, *modulus) != 1 {
                    return Err(GroupError::NotAutomorphism(
                        "image of the cyclic generator does not generate".into(),
                    ));
                }
                Ok(())
            }
            _ => Err(GroupError::CapExceeded {
                op: "validate_action",
                order,
                cap: EXHAUSTIVE_ACTION_CHECK_CAP as usize,
            }),
        }
    }

    // ------------------------------------------------------------------
    // Element constructors
    // ------------------------------------------------------------------

    pub fn element_from_payload(&self, payload: Payload) -> Result<Element, GroupError> {
        self.validate_payload(&payload)?;
        Ok(self.wrap(payload))
    }

    fn validate_payload(&self, p: &Payload) -> Result<(), GroupError> {
        let ok = match (&self.inner.engine, p) {
            (Engine::Perm { degree, .. }, Payload::Perm(img)) => {
                img.len() == *degree as usize && {
                    let mut seen = vec![false; img.len()];
                    img.iter().all(|&i| {
                        let i = i as usize;
                        i < img.len() && !std::mem::replace(&mut seen[i], true)
                    })
                }
            }
            (Engine::Modular { params }, Payload::Mod { j, k }) => {
                *j < params.b_modulus && *k < params.a_modulus
            }
            (Engine::Cyclic { modulus }, Payload::Cyc(r)) => r < modulus,
            (Engine::Direct { left, right }, Payload::Pair(l, r)) => {
                left.validate_payload(l).is_ok() && right.validate_payload(r).is_ok()
            }
            (
                Engine::Semidirect {
                    actor_modulus,
                    base,
                    ..
                },
                Payload::Pair(l, r),
            ) => {
                matches!(l.as_ref(), Payload::Cyc(i) if i < actor_modulus)
                    && base.validate_payload(r).is_ok()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::InvalidArgument(
                "payload does not fit this group engine".into(),
            ))
        }
    }

    /// Permutation element from 1-based disjoint cycles.
    pub fn perm_element(&self, cycles: &[Vec<u16>]) -> Result<Element, GroupError> {
        match &self.inner.engine {
            Engine::Perm { degree, .. } => {
                let p = perm_from_cycles(*degree, &cycles.to_vec())?;
                Ok(self.wrap(p))
            }
            _ => Err(GroupError::InvalidArgument(
                "perm_element on a non-permutation group".into(),
            )),
        }
    }

    /// `b^j a^k` in a metacyclic engine.
    pub fn modular_element(&self, j: u64, k: u64) -> Result<Element, GroupError> {
        match &self.inner.engine {
            Engine::Modular { params } => Ok(self.wrap(Payload::Mod {
                j: j % params.b_modulus,
                k: k % params.a_modulus,
            })),
            _ => Err(GroupError::InvalidArgument(
                "modular_element on a non-metacyclic group".into(),
            )),
        }
    }

    pub fn cyclic_element(&self, r: u64) -> Result<Element, GroupError> {
        match &self.inner.engine {
            Engine::Cyclic { modulus } => Ok(self.wrap(Payload::Cyc(r % modulus))),
            _ => Err(GroupError::InvalidArgument(
                "cyclic_element on a non-cyclic group".into(),
            )),
        }
    }

    /// Pair element of a direct product from its two components.
    pub fn pair_element(&self, l: &Element, r: &Element) -> Result<Element, GroupError> {
        match &self.inner.engine {
            Engine::Direct { left, right } => {
                if l.group != left.id() || r.group != right.id() {
                    return Err(GroupError::InvalidArgument(
                        "pair components belong to the wrong groups".into(),
                    ));
                }
                Ok(self.wrap(Payload::Pair(
                    Box::new(l.payload.clone()),
                    Box::new(r.payload.clone()),
                )))
            }
            Engine::Semidirect {
                actor_modulus,
                base,
                ..
            } => {
                let Payload::Cyc(i) = &l.payload else {
                    return Err(GroupError::InvalidArgument(
                        "semidirect actor component must be cyclic".into(),
                    ));
                };
                if r.group != base.id() {
                    return Err(GroupError::InvalidArgument(
                        "pair base component belongs to the wrong group".into(),
                    ));
                }
                Ok(self.wrap(Payload::Pair(
                    Box::new(Payload::Cyc(i % actor_modulus)),
                    Box::new(r.payload.clone()),
                )))
            }
            _ => Err(GroupError::InvalidArgument(
                "pair_element on a non-product group".into(),
            )),
        }
    }

    /// Canonical engine description: kind, parameters, and generator data.
    /// Two groups with equal descriptors have identical arithmetic, so this
    /// is a (strict) isomorphism certificate for rebuilt definitions.
    pub fn descriptor(&self) -> String {
        match &self.inner.engine {
            Engine::Perm { degree, gens } => {
                let gs: Vec<String> = gens.iter().map(|g| self.render_payload(g)).collect();
                format!("perm[{degree}; {}]", gs.join(", "))
            }
            Engine::Modular { params } => format!("modular[p={}, n={}]", params.p, params.n),
            Engine::Cyclic { modulus } => format!("cyclic[{modulus}]"),
            Engine::Direct { left, right } => {
                format!("direct[{}, {}]", left.descriptor(), right.descriptor())
            }
            Engine::Semidirect {
                actor_modulus,
                base,
                action,
            } => {
                let images: Vec<String> = action.power_images[1 % action.power_images.len()]
                    .iter()
                    .map(|p| base.render_payload(p))
                    .collect();
                format!(
                    "semidirect[{actor_modulus}, {}; {}]",
                    base.descriptor(),
                    images.join(", ")
                )
            }
        }
    }

    /// Canonical rendering: permutations as disjoint cycles sorted by least
    /// point, metacyclic elements as `b^j a^k`, cyclic as `g^r`, products as
    /// component tuples.
    pub fn render(&self, e: &Element) -> String {
        self.check_member(e, "render");
        self.render_payload(&e.payload)
    }

    pub(crate) fn render_payload(&self, p: &Payload) -> String {
        match (&self.inner.engine, p) {
            (Engine::Perm { .. }, Payload::Perm(img)) => render_cycles(img),
            (Engine::Modular { .. }, Payload::Mod { j, k }) => {
                let mut parts = Vec::new();
                if *j > 0 {
                    parts.push(if *j == 1 {
                        "b".to_string()
                    } else {
                        format!("b^{j}")
                    });
                }
                if *k > 0 {
                    parts.push(if *k == 1 {
                        "a".to_string()
                    } else {
                        format!("a^{k}")
                    });
                }
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join(" ")
                }
            }
            (Engine::Cyclic { .. }, Payload::Cyc(r)) => match r {
                0 => "1".into(),
                1 => "g".into(),
                _ => format!("g^{r}"),
            },
            (Engine::Direct { left, right }, Payload::Pair(l, r)) => {
                format!("({}, {})", left.render_payload(l), right.render_payload(r))
            }
            (Engine::Semidirect { base, .. }, Payload::Pair(l, r)) => {
                let Payload::Cyc(i) = l.as_ref() else {
                    panic!("malformed semidirect payload");
                };
                let actor = match i {
                    0 => "1".to_string(),
                    1 => "t".to_string(),
                    _ => format!("t^{i}"),
                };
                format!("({}, {})", actor, base.render_payload(r))
            }
            _ => panic!("payload shape does not match the group engine"),
        }
    }
}

impl Action {
    /// Apply `phi^r` to an arbitrary base element by decomposing it into a
    /// generator word and substituting the precomputed power images.
    fn apply(&self, base: &Group, r: u64, u: &Payload) -> Payload {
        let r = (r % self.order) as usize;
        if r == 0 {
            return u.clone();
        }
        let images = &self.power_images[r];
        base.apply_word_images(images, u)
            .expect("action application failed on a validated engine")
    }
}

fn perm_from_cycles(degree: u16, cycles: &Vec<Vec<u16>>) -> Result<Payload, GroupError> {
    let mut img: Vec<u16> = (0..degree).collect();
    let mut touched = vec![false; degree as usize];
    for cycle in cycles {
        for window in 0..cycle.len() {
            let from = cycle[window];
            let to = cycle[(window + 1) % cycle.len()];
            if from == 0 || from > degree {
                return Err(GroupError::InvalidConstruction(format!(
                    "point {from} exceeds degree {degree}"
                )));
            }
            if to == 0 || to > degree {
                return Err(GroupError::InvalidConstruction(format!(
                    "point {to} exceeds degree {degree}"
                )));
            }
            let from = (from - 1) as usize;
            if touched[from] {
                return Err(GroupError::InvalidConstruction(format!(
                    "cycles are not disjoint at point {}",
                    from + 1
                )));
            }
            touched[from] = true;
            img[from] = to - 1;
        }
    }
    Ok(Payload::Perm(img))
}

/// Disjoint-cycle string for an image array, cycles sorted by least point.
fn render_cycles(img: &[u16]) -> String {
    let mut seen = vec![false; img.len()];
    let mut out = String::new();
    for start in 0..img.len() {
        if seen[start] || img[start] as usize == start {
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut next = img[start] as usize;
        while next != start {
            seen[next] = true;
            cycle.push(next);
            next = img[next] as usize;
        }
        out.push('(');
        let pts: Vec<String> = cycle.iter().map(|p| (p + 1).to_string()).collect();
        out.push_str(&pts.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Shared arithmetic interface for the finite engines and the symbolic
/// product engine; generic Engel iteration is written against this.
pub trait GroupOps {
    type Elem: Clone + Eq + std::hash::Hash;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` means infinite.
    fn order(&self) -> Option<u128>;

    fn conjugate(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        let hi = self.inv(h);
        self.mul(&self.mul(&hi, g), h)
    }

    fn commutator(&self, g: &Self::Elem, h: &Self::Elem) -> Self::Elem {
        self.mul(&self.inv(g), &self.conjugate(g, h))
    }
}

impl GroupOps for Group {
    type Elem = Element;

    fn identity(&self) -> Element {
        Group::identity(self)
    }

    fn mul(&self, a: &Element, b: &Element) -> Element {
        Group::mul(self, a, b)
    }

    fn inv(&self, a: &Element) -> Element {
        Group::inv(self, a)
    }

    fn order(&self) -> Option<u128> {
        Some(Group::order(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Group {
        Group::permutation(3, &[vec![vec![1, 2]], vec![vec![1, 2, 3]]]).unwrap()
    }

    fn m32() -> Group {
        Group::modular(3, 2).unwrap()
    }

    #[test]
    fn right_action_composition() {
        let g = s3();
        let c3 = g.perm_element(&[vec![1, 2, 3]]).unwrap();
        let t = g.perm_element(&[vec![1, 2]]).unwrap();
        // [(1 2 3), (1 2)] = (1 2 3) under right action
        assert_eq!(g.render(&g.commutator(&c3, &t)), "(1 2 3)");
        // (1 2)^(1 2 3) = (2 3)
        assert_eq!(g.render(&g.conjugate(&t, &c3)), "(2 3)");
        // cycle reversal
        assert_eq!(g.render(&g.inv(&c3)), "(1 3 2)");
        assert_eq!(g.render(&g.mul(&c3, &g.identity())), "(1 2 3)");
    }

    #[test]
    fn modular_engine_ground_truth() {
        let g = m32();
        let a = g.modular_element(0, 1).unwrap();
        let b = g.modular_element(1, 0).unwrap();
        // a b = b a^4
        assert_eq!(g.mul(&a, &b), g.modular_element(1, 4).unwrap());
        // a^b = a^(1+p) = a^4, so [a, b] = a^3
        assert_eq!(g.conjugate(&a, &b), g.modular_element(0, 4).unwrap());
        assert_eq!(g.commutator(&a, &b), g.modular_element(0, 3).unwrap());
        assert_eq!(g.order(), 27);
        assert_eq!(g.element_order(&a), 9);
        assert_eq!(g.element_order(&b), 3);
        assert_eq!(g.pow(&b, 3), g.identity());
        assert_eq!(g.render(&g.mul(&a, &b)), "b a^4");
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Group::cyclic(1).unwrap().elements().unwrap().len(), 1);
        assert_eq!(m32().elements().unwrap().len(), 27);
        assert_eq!(s3().elements().unwrap().len(), 6);
        assert_eq!(Group::dihedral(8).unwrap().order(), 8);
        assert_eq!(Group::dihedral(12).unwrap().order(), 12);
        assert_eq!(Group::modular(5, 3).unwrap().order(), 3125);
    }

    #[test]
    fn constructor_validation() {
        assert!(Group::modular(2, 2).is_err());
        assert!(Group::modular(9, 2).is_err());
        assert!(Group::modular(3, 1).is_err());
        assert!(Group::dihedral(7).is_err());
        assert!(Group::dihedral(4).is_err());
        assert!(Group::cyclic(0).is_err());
        // point out of range
        assert!(Group::permutation(3, &[vec![vec![1, 4]]]).is_err());
        // non-disjoint cycles within one generator
        assert!(Group::permutation(4, &[vec![vec![1, 2], vec![2, 3]]]).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = Group::permutation_with_cap(
            6,
            &[vec![(1..=6).collect::<Vec<u16>>()], vec![vec![1, 2]]],
            10,
        )
        .unwrap_err();
        assert!(matches!(err, GroupError::CapExceeded { .. }));
    }

    #[test]
    fn direct_product_componentwise() {
        let c2 = Group::cyclic(2).unwrap();
        let c3 = Group::cyclic(3).unwrap();
        let g = Group::direct_product(&c2, &c3);
        assert_eq!(g.order(), 6);
        let elems = g.elements().unwrap();
        for u in &elems {
            for v in &elems {
                assert_eq!(
                    g.mul(u, v),
                    g.mul(v, u),
                    "direct product of abelians is abelian"
                );
            }
        }
    }

    #[test]
    fn semidirect_product_builds_f1() {
        let actor = Group::cyclic(3).unwrap();
        let base = m32();
        let a_img = base.modular_element(0, 1).unwrap();
        let b_img = base.modular_element(1, 3).unwrap();
        let f1 = Group::semidirect_product(&actor, &base, &[a_img, b_img]).unwrap();
        assert_eq!(f1.order(), 81);
        assert_eq!(f1.elements().unwrap().len(), 81);
        // t^-1 b t = b a^3
        let gens = f1.generators();
        let t = &gens[0];
        let b = &gens[2];
        let expected = f1.mul(&gens[2], &f1.pow(&gens[1], 3));
        assert_eq!(f1.conjugate(b, t), expected);
    }

    #[test]
    fn semidirect_rejects_non_automorphism() {
        let actor = Group::cyclic(3).unwrap();
        let base = m32();
        // b -> a is not even a homomorphism target (order mismatch)
        let a_img = base.modular_element(0, 1).unwrap();
        let bad = base.modular_element(0, 1).unwrap();
        let err = Group::semidirect_product(&actor, &base, &[a_img, bad]).unwrap_err();
        assert!(matches!(err, GroupError::NotAutomorphism(_)));
    }

    #[test]
    fn semidirect_rejects_incompatible_actor_order() {
        // The action a -> a, b -> b a^3 has order 3, which does not divide 2.
        let actor = Group::cyclic(2).unwrap();
        let base = m32();
        let a_img = base.modular_element(0, 1).unwrap();
        let b_img = base.modular_element(1, 3).unwrap();
        let err = Group::semidirect_product(&actor, &base, &[a_img, b_img]).unwrap_err();
        assert!(matches!(err, GroupError::NotAutomorphism(_)));
    }

    #[test]
    #[should_panic(expected = "element belongs to group")]
    fn cross_group_operands_panic() {
        let g = s3();
        let h = s3();
        let e = h.identity();
        let _ = g.mul(&g.identity(), &e);
    }

    #[test]
    fn decompose_word_reconstructs_element() {
        let groups = [
            m32(),
            s3(),
            Group::cyclic(12).unwrap(),
            Group::direct_product(&s3(), &Group::cyclic(2).unwrap()),
        ];
        for g in &groups {
            let gens = g.generator_payloads();
            for e in g.element_payloads().unwrap() {
                let word = g.decompose(e).unwrap();
                let mut acc = g.identity_payload();
                for (t, exp) in word {
                    acc = g.mul_payload(&acc, &g.pow_payload(&gens[t], exp));
                }
                assert_eq!(&acc, e);
            }
        }
    }

    #[test]
    fn identity_rendering() {
        let g = s3();
        assert_eq!(g.render(&g.identity()), "()");
        let m = m32();
        assert_eq!(m.render(&m.identity()), "1");
        assert_eq!(m.render(&m.modular_element(2, 0).unwrap()), "b^2");
    }
}
