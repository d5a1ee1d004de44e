//! Exact modular arithmetic for the metacyclic engine and the symbolic
//! product engine. All residues live in `u64` with `u128` intermediates;
//! parameter validation keeps `p^(n+1)` well inside that range.

use crate::group::GroupError;

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        exp >>= 1;
        base = mul_mod(base, base, m);
    }
    acc
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Collection parameters of `<a, b | a^(p^n) = b^(p^(n-1)) = 1, a^b = a^(1+p)>`.
///
/// Elements are coordinates `(j, k)` for `b^j a^k`; the product is
/// `(j1, k1)(j2, k2) = (j1 + j2, k1 c^j2 + k2)` with `c = 1 + p`, obtained by
/// pushing `a`-powers to the right through `b`-powers one relation
/// application at a time.
#[derive(Debug, Clone, Copy)]
pub struct ModularParams {
    pub p: u64,
    pub n: u32,
    /// `p^(n-1)`, the modulus of the `b` coordinate.
    pub b_modulus: u64,
    /// `p^n`, the modulus of the `a` coordinate.
    pub a_modulus: u64,
    /// Conjugation multiplier, `1 + p` (a mutated value in test fixtures).
    pub conj: u64,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl ModularParams {
    pub(crate) fn new(p: u64, n: u32, mutant: bool) -> Result<ModularParams, GroupError> {
        if !is_odd_prime(p) {
            return Err(GroupError::InvalidConstruction(format!(
                "parameter p = {p} must be an odd prime"
            )));
        }
        if n < 2 {
            return Err(GroupError::InvalidConstruction(format!(
                "parameter n = {n} must be at least 2"
            )));
        }
        // p^(n+1) must fit comfortably in u64 for the geometric-sum helper.
        let mut pow: u128 = 1;
        for _ in 0..=n {
            pow = pow.checked_mul(p as u128).ok_or_else(|| {
                GroupError::InvalidConstruction(format!("p^(n+1) overflows for p={p}, n={n}"))
            })?;
        }
        if pow > (1u128 << 62) {
            return Err(GroupError::InvalidConstruction(format!(
                "parameters too large: p^(n+1) = {pow} exceeds 2^62"
            )));
        }
        let a_modulus = (pow / p as u128) as u64;
        let b_modulus = a_modulus / p;
        let conj = if mutant { 1 + 2 * p } else { 1 + p };
        Ok(ModularParams {
            p,
            n,
            b_modulus,
            a_modulus,
            conj,
        })
    }

    pub(crate) fn group_order(&self) -> u128 {
        self.b_modulus as u128 * self.a_modulus as u128
    }

    pub(crate) fn mul(&self, (j1, k1): (u64, u64), (j2, k2): (u64, u64)) -> (u64, u64) {
        let j = add_mod(j1, j2, self.b_modulus);
        let k = add_mod(
            mul_mod(k1, pow_mod(self.conj, j2, self.a_modulus), self.a_modulus),
            k2,
            self.a_modulus,
        );
        (j, k)
    }

    pub(crate) fn inv(&self, (j, k): (u64, u64)) -> (u64, u64) {
        let j_inv = if j == 0 { 0 } else { self.b_modulus - j };
        let shifted = mul_mod(k, pow_mod(self.conj, j_inv, self.a_modulus), self.a_modulus);
        let k_inv = if shifted == 0 {
            0
        } else {
            self.a_modulus - shifted
        };
        (j_inv, k_inv)
    }

    /// Geometric sum `s_j = 1 + c + ... + c^(j-1) mod p^n` for `c = conj`;
    /// for `c = 1 + p` this equals `((1+p)^j - 1) / p` computed exactly via
    /// arithmetic mod `p^(n+1)`.
    pub(crate) fn geometric_sum(&self, j: u64) -> u64 {
        let big = self.a_modulus * self.p; // p^(n+1), validated to fit
        let c_pow = pow_mod(self.conj, j, big);
        let diff = (c_pow + big - 1) % big;
        // (c^j - 1)/(c - 1) is exact over the integers; for c = 1+p dividing
        // mod p^(n+1) by p lands exactly in Z/p^n.
        if self.conj == self.p + 1 {
            debug_assert_eq!(diff % self.p, 0);
            (diff / self.p) % self.a_modulus
        } else {
            // Mutant fixtures use c = 1 + 2p; fall back to the direct sum.
            let mut acc: u64 = 0;
            let mut term: u64 = 1;
            for _ in 0..j {
                acc = add_mod(acc, term, self.a_modulus);
                term = mul_mod(term, self.conj, self.a_modulus);
            }
            acc
        }
    }

    /// Closed form for `(b a^c)^j = b^j a^(c * s_j)`.
    pub(crate) fn pow_b_a(&self, c: u64, j: u64) -> (u64, u64) {
        (
            j % self.b_modulus,
            mul_mod(c % self.a_modulus, self.geometric_sum(j), self.a_modulus),
        )
    }
}
