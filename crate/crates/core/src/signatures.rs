//! Signatures of diagonal automorphisms and the affine-permutation action
//! `sigma -> a * pi(sigma) + b * 1` that identifies signatures spanning
//! conjugate cyclic subgroups of `PGL(V)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::admissibility::{mult_order, Prime};
use crate::error::{Error, Result};

/// Exponent vector mod `p` of a diagonalized automorphism
/// `x_i -> xi^{sigma_i} x_i`, of length `n + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    p: Prime,
    values: Vec<u64>,
}

impl Signature {
    /// Builds a signature, reducing every entry mod `p`.
    pub fn new(p: Prime, values: &[i64]) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::LengthMismatch { expected: 2, got: values.len() });
        }
        Ok(Signature { p, values: values.iter().map(|&v| p.reduce(v)).collect() })
    }

    pub fn from_residues(p: Prime, values: Vec<u64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::LengthMismatch { expected: 2, got: values.len() });
        }
        let pv = p.get();
        Ok(Signature { p, values: values.into_iter().map(|v| v % pv).collect() })
    }

    pub fn zero(p: Prime, n: usize) -> Self {
        Signature { p, values: vec![0; n + 2] }
    }

    #[inline]
    pub fn p(&self) -> Prime {
        self.p
    }

    /// Dimension of the hypersurface: number of coordinates minus two.
    #[inline]
    pub fn n(&self) -> usize {
        self.values.len() - 2
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Occurrence count of each residue that appears.
    pub fn multiplicities(&self) -> BTreeMap<u64, usize> {
        let mut m = BTreeMap::new();
        for &v in &self.values {
            *m.entry(v).or_insert(0) += 1;
        }
        m
    }

    pub fn translate(&self, b: i64) -> Signature {
        let pv = self.p.get();
        let b = self.p.reduce(b);
        Signature { p: self.p, values: self.values.iter().map(|&v| (v + b) % pv).collect() }
    }

    pub fn scale(&self, a: i64) -> Signature {
        let pv = self.p.get();
        let a = self.p.reduce(a);
        Signature { p: self.p, values: self.values.iter().map(|&v| v * a % pv).collect() }
    }

    pub fn sorted(&self) -> Signature {
        let mut values = self.values.clone();
        values.sort_unstable();
        Signature { p: self.p, values }
    }

    fn check_compatible(&self, other: &Signature) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: other.len() });
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

/// The group element `sigma -> a * pi(sigma) + b * 1`.
///
/// `perm[j]` is the position that entry `j` is sent to, so entry `i` of the
/// image is `a * sigma[perm^-1(i)] + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePermAction {
    p: Prime,
    a: u64,
    b: u64,
    perm: Vec<usize>,
}

impl AffinePermAction {
    pub fn new(p: Prime, a: i64, b: i64, perm: Vec<usize>) -> Result<Self> {
        let a = p.reduce(a);
        if a == 0 {
            return Err(Error::InvalidAction("scaling factor a must be nonzero mod p".into()));
        }
        let mut seen = vec![false; perm.len()];
        for &t in &perm {
            if t >= perm.len() || seen[t] {
                return Err(Error::InvalidAction(format!("{perm:?} is not a permutation")));
            }
            seen[t] = true;
        }
        Ok(AffinePermAction { p, a, b: p.reduce(b), perm })
    }

    pub fn identity(p: Prime, len: usize) -> Self {
        AffinePermAction { p, a: 1, b: 0, perm: (0..len).collect() }
    }

    /// The permutation that sorts `sigma` into nondecreasing order (stable).
    pub fn sorting(sigma: &Signature) -> Self {
        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by_key(|&i| (sigma.values[i], i));
        // order[i] is the source of target slot i; invert it.
        let mut perm = vec![0; order.len()];
        for (target, &source) in order.iter().enumerate() {
            perm[source] = target;
        }
        AffinePermAction { p: sigma.p, a: 1, b: 0, perm }
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `self ∘ other`: acting by `other` first, then by `self`.
    pub fn compose(&self, other: &AffinePermAction) -> Result<AffinePermAction> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch(self.p.get(), other.p.get()));
        }
        if self.perm.len() != other.perm.len() {
            return Err(Error::LengthMismatch { expected: self.perm.len(), got: other.perm.len() });
        }
        let pv = self.p.get();
        Ok(AffinePermAction {
            p: self.p,
            a: self.a * other.a % pv,
            b: (self.a * other.b + self.b) % pv,
            perm: other.perm.iter().map(|&j| self.perm[j]).collect(),
        })
    }

    /// Image of an eigenweight: `F` with weight `w` under `sigma` has weight
    /// `a * w + 3 * b` under the transformed signature.
    pub fn act_on_weight(&self, w: u64) -> u64 {
        let pv = self.p.get();
        (self.a * (w % pv) + 3 * self.b) % pv
    }
}

pub fn act(sigma: &Signature, g: &AffinePermAction) -> Result<Signature> {
    if sigma.p != g.p {
        return Err(Error::ModulusMismatch(sigma.p.get(), g.p.get()));
    }
    if sigma.len() != g.perm.len() {
        return Err(Error::LengthMismatch { expected: sigma.len(), got: g.perm.len() });
    }
    let pv = sigma.p.get();
    let mut values = vec![0; sigma.len()];
    for (j, &v) in sigma.values.iter().enumerate() {
        values[g.perm[j]] = (g.a * v + g.b) % pv;
    }
    Ok(Signature { p: sigma.p, values })
}

/// Lexicographically least member of `{ sort(a*sigma + b) }`.
pub fn canonicalize(sigma: &Signature) -> Signature {
    let pv = sigma.p.get();
    let mut best: Option<Vec<u64>> = None;
    let mut buf = vec![0u64; sigma.len()];
    for a in 1..pv {
        let scaled: Vec<u64> = sigma.values.iter().map(|&v| v * a % pv).collect();
        let distinct: BTreeSet<u64> = scaled.iter().copied().collect();
        // The least candidate starts with 0, so b must send some value to 0.
        for v in distinct {
            let b = (pv - v) % pv;
            for (slot, &s) in buf.iter_mut().zip(&scaled) {
                *slot = (s + b) % pv;
            }
            buf.sort_unstable();
            if best.as_ref().is_none_or(|cur| buf < *cur) {
                best = Some(buf.clone());
            }
        }
    }
    Signature { p: sigma.p, values: best.unwrap_or_else(|| sigma.values.clone()) }
}

pub fn equivalent(sigma: &Signature, other: &Signature) -> Result<bool> {
    sigma.check_compatible(other)?;
    Ok(canonicalize(sigma) == canonicalize(other))
}

/// Translates `sigma` by `b` with `3b = -a (mod p)`, so that a form of
/// eigenweight `a` becomes invariant. Returns the new signature and `b`.
pub fn normalize_weight(sigma: &Signature, a: u64) -> Result<(Signature, u64)> {
    let p = sigma.p;
    let inv3 = p.inv(3).ok_or(Error::WeightNotNormalizable)?;
    let pv = p.get();
    let b = (pv - a % pv) % pv * inv3 % pv;
    Ok((sigma.translate(b as i64), b))
}

/// Canonical representative of the pair (signature, eigenweight) under the
/// joint action `(sigma, w) -> (a*pi(sigma) + b, a*w + 3b)`.
///
/// The key is lexicographic on `(weight, sorted signature)`. For `p != 3`
/// every pair can be moved to weight 0, so the result is the least weight-0
/// representative; for `p = 3` the weight is only rescaled, and weights 1
/// and 2 collapse to 1.
pub fn canonical_pair(sigma: &Signature, w: u64) -> (Signature, u64) {
    let p = sigma.p;
    let pv = p.get();
    let w = w % pv;
    if let Ok((tau, _)) = normalize_weight(sigma, w) {
        let mut best: Option<Vec<u64>> = None;
        for a in 1..pv {
            let mut cand: Vec<u64> = tau.values.iter().map(|&v| v * a % pv).collect();
            cand.sort_unstable();
            if best.as_ref().is_none_or(|cur| cand < *cur) {
                best = Some(cand);
            }
        }
        return (Signature { p, values: best.expect("p >= 2") }, 0);
    }
    let mut best: Option<(u64, Vec<u64>)> = None;
    for a in 1..pv {
        let w2 = a * w % pv;
        for b in 0..pv {
            let mut cand: Vec<u64> = sigma.values.iter().map(|&v| (v * a + b) % pv).collect();
            cand.sort_unstable();
            let key = (w2, cand);
            if best.as_ref().is_none_or(|cur| key < *cur) {
                best = Some(key);
            }
        }
    }
    let (w2, values) = best.expect("p >= 2");
    (Signature { p, values }, w2)
}

/// How [`enumerate_orbits`] covers the signature space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitStrategy {
    /// Every class; refuses when `p^(n+2)` exceeds `budget`.
    Exhaustive { budget: u128 },
    /// Only classes whose nonzero values form a union of full orbits of
    /// multiplication by `-2`. Requires `p > 3`.
    ChainPruned,
}

pub const DEFAULT_BUDGET: u128 = 100_000_000;

impl Default for OrbitStrategy {
    fn default() -> Self {
        OrbitStrategy::Exhaustive { budget: DEFAULT_BUDGET }
    }
}

/// Size of the raw signature space `p^(n+2)`, saturating.
pub fn search_space(p: Prime, n: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..n + 2 {
        acc = acc.saturating_mul(p.get() as u128);
    }
    acc
}

/// Canonical representatives of every nonzero class, sorted.
pub fn enumerate_orbits(p: Prime, n: usize, strategy: OrbitStrategy) -> Result<Vec<Signature>> {
    let candidates = match strategy {
        OrbitStrategy::Exhaustive { budget } => {
            let size = search_space(p, n);
            if size > budget {
                return Err(Error::BudgetExceeded { size, budget });
            }
            exhaustive_candidates(p, n + 2)
        }
        OrbitStrategy::ChainPruned => {
            if p.get() <= 3 {
                return Err(Error::ChainPrunedSmallPrime(p.get()));
            }
            chain_candidates(p, n + 2)
        }
    };
    let mut classes: Vec<Signature> = candidates
        .into_par_iter()
        .map(|values| canonicalize(&Signature { p, values }))
        .filter(|s| !s.is_zero())
        .collect();
    classes.sort_unstable();
    classes.dedup();
    Ok(classes)
}

/// Nondecreasing vectors starting at 0: every class has such a member.
fn exhaustive_candidates(p: Prime, len: usize) -> Vec<Vec<u64>> {
    let pv = p.get();
    let mut out = Vec::new();
    let mut cur = vec![0u64; len];
    loop {
        out.push(cur.clone());
        // advance the odometer over positions 1..len, keeping it nondecreasing
        let mut i = len - 1;
        loop {
            if i == 0 {
                return out;
            }
            if cur[i] + 1 < pv {
                let v = cur[i] + 1;
                for slot in cur.iter_mut().skip(i) {
                    *slot = v;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Orbits of multiplication by `-2` on the nonzero residues, the orbit of 1
/// first.
pub fn minus_two_orbits(p: Prime) -> Vec<Vec<u64>> {
    let pv = p.get();
    let minus_two = p.reduce(-2);
    let mut seen = vec![false; pv as usize];
    let mut orbits = Vec::new();
    for start in 1..pv {
        if seen[start as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut x = start;
        while !seen[x as usize] {
            seen[x as usize] = true;
            orbit.push(x);
            x = x * minus_two % pv;
        }
        orbits.push(orbit);
    }
    orbits
}

fn chain_candidates(p: Prime, len: usize) -> Vec<Vec<u64>> {
    let orbit_len = mult_order(-2, p).expect("p > 3") as usize;
    let orbits = minus_two_orbits(p);
    let others = &orbits[1..];
    let max_extra = (len / orbit_len).saturating_sub(1);
    let mut out = Vec::new();
    for k in 0..=max_extra.min(others.len()) {
        for chosen in itertools::Itertools::combinations(0..others.len(), k) {
            let mut values: Vec<u64> = orbits[0].clone();
            for &c in &chosen {
                values.extend_from_slice(&others[c]);
            }
            values.sort_unstable();
            let spare = len - values.len();
            // symbols for the spare slots: 0 and every chosen value
            let mut symbols = vec![0u64];
            symbols.extend_from_slice(&values);
            for extra in itertools::Itertools::combinations_with_replacement(symbols.iter(), spare) {
                let mut v = values.clone();
                v.extend(extra.into_iter().copied());
                v.sort_unstable();
                out.push(v);
            }
        }
    }
    out
}
