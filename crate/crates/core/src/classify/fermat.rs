//! Prime-order elements of the automorphism group of the Fermat cubic.
//!
//! The group is generated by coordinate permutations and cube-root scalings
//! of single coordinates, taken modulo global scalars. An element
//! `x_i -> w^{e_i} x_{pi(i)}` (with `w` a primitive cube root of unity)
//! restricted to a cycle of length `L` and exponent sum `s` has eigenvalues
//! `exp(2 pi i (s + 3k) / (3L))`, `k = 0..L`. Angles are kept as integers
//! modulo `N = 3 * lcm(cycle lengths)`, so everything is exact.

use std::collections::BTreeSet;

use crate::admissibility::{is_prime, Prime};
use crate::error::{Error, Result};
use crate::signatures::{canonicalize, Signature};

use super::FamilyRecord;

/// `x_i -> w^{exponents[i]} x_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FermatGroupElement {
    pub perm: Vec<usize>,
    pub exponents: Vec<u8>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FermatGroupElement {
    pub fn new(perm: Vec<usize>, exponents: Vec<u8>) -> Result<Self> {
        let len = perm.len();
        if exponents.len() != len {
            return Err(Error::LengthMismatch { expected: len, got: exponents.len() });
        }
        let mut seen = vec![false; len];
        for &j in &perm {
            if j >= len || std::mem::replace(&mut seen[j], true) {
                return Err(Error::InvalidAction(format!("{perm:?} is not a permutation")));
            }
        }
        if exponents.iter().any(|&e| e > 2) {
            return Err(Error::InvalidAction("cube-root exponents must lie in {0, 1, 2}".into()));
        }
        Ok(FermatGroupElement { perm, exponents })
    }

    /// Cycle lengths with exponent sums mod 3.
    pub fn cycles(&self) -> Vec<(usize, u8)> {
        let mut seen = vec![false; self.perm.len()];
        let mut out = Vec::new();
        for start in 0..self.perm.len() {
            let (mut len, mut sum, mut i) = (0, 0u8, start);
            while !seen[i] {
                seen[i] = true;
                len += 1;
                sum = (sum + self.exponents[i]) % 3;
                i = self.perm[i];
            }
            if len > 0 {
                out.push((len, sum));
            }
        }
        out
    }

    /// `(N, angles)`: the eigenvalues are `exp(2 pi i angle / N)`.
    pub fn eigen_angles(&self) -> (u64, Vec<u64>) {
        let cycles = self.cycles();
        let lcm = cycles.iter().fold(1u64, |acc, &(l, _)| acc / gcd(acc, l as u64) * l as u64);
        let big_n = 3 * lcm;
        let mut angles = Vec::with_capacity(self.perm.len());
        for (l, s) in cycles {
            let unit = big_n / (3 * l as u64);
            for k in 0..l as u64 {
                angles.push((s as u64 + 3 * k) * unit % big_n);
            }
        }
        (big_n, angles)
    }

    /// Order in `PGL`: the least `m` making every eigenvalue ratio trivial.
    pub fn projective_order(&self) -> u64 {
        let (big_n, angles) = self.eigen_angles();
        let g = angles.iter().fold(big_n, |acc, &x| gcd(acc, (x + big_n - angles[0]) % big_n));
        big_n / g
    }

    /// The diagonalized signature of a prime-order element, relative to its
    /// first eigenvalue.
    pub fn signature(&self) -> Option<Signature> {
        let order = self.projective_order();
        if !is_prime(order) {
            return None;
        }
        let (big_n, angles) = self.eigen_angles();
        let step = big_n / order;
        let values: Vec<u64> = angles.iter().map(|&x| (x + big_n - angles[0]) % big_n / step).collect();
        Signature::from_residues(Prime::new(order).ok()?, values).ok()
    }
}

fn partitions(total: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max_part.min(total)).rev() {
        prefix.push(part);
        partitions(total - part, part, prefix, out);
        prefix.pop();
    }
}

/// One element per (cycle type, per-cycle exponent sum); conjugation by
/// diagonal scalings reduces every element to one of these.
pub fn fermat_group_representatives(nvars: usize) -> Vec<FermatGroupElement> {
    let mut parts = Vec::new();
    partitions(nvars, nvars, &mut Vec::new(), &mut parts);
    let mut out = Vec::new();
    for cycle_type in parts {
        let mut perm = Vec::with_capacity(nvars);
        let mut starts = Vec::with_capacity(cycle_type.len());
        for &l in &cycle_type {
            let base = perm.len();
            starts.push(base);
            perm.extend((0..l).map(|k| base + (k + 1) % l));
        }
        let combos = 3usize.pow(cycle_type.len() as u32);
        for code in 0..combos {
            let mut exponents = vec![0u8; nvars];
            let mut c = code;
            for &s in &starts {
                exponents[s] = (c % 3) as u8;
                c /= 3;
            }
            out.push(FermatGroupElement { perm: perm.clone(), exponents });
        }
    }
    out
}

/// Canonical signature classes of prime-order automorphisms of the Fermat
/// cubic in `nvars` variables.
pub fn fermat_automorphism_classes(nvars: usize) -> BTreeSet<Signature> {
    fermat_group_representatives(nvars).iter().filter_map(|g| g.signature()).map(|s| canonicalize(&s)).collect()
}

/// Whether the Fermat cubic lies in `family`: some prime-order automorphism
/// has the family's signature class, and the family has weight 0 (the
/// Fermat form is invariant under its whole group).
pub fn fermat_membership(n: usize, family: &FamilyRecord) -> Result<bool> {
    if n != 3 && n != 4 {
        return Err(Error::UnsupportedDimension(n));
    }
    if family.sigma.len() != n + 2 {
        return Err(Error::LengthMismatch { expected: n + 2, got: family.sigma.len() });
    }
    if family.weight != 0 {
        return Ok(false);
    }
    Ok(fermat_automorphism_classes(n + 2).contains(&canonicalize(&family.sigma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn el(perm: &[usize], e: &[u8]) -> FermatGroupElement {
        FermatGroupElement::new(perm.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(el(&[0, 1, 2, 3, 4], &[0; 5]).projective_order(), 1);
        assert_eq!(el(&[1, 0, 2, 3, 4], &[0; 5]).projective_order(), 2);
        assert_eq!(el(&[0, 1, 2, 3, 4], &[0, 0, 0, 0, 1]).projective_order(), 3);
        // a global scalar is trivial
        assert_eq!(el(&[0, 1, 2, 3, 4], &[1; 5]).projective_order(), 1);
        assert_eq!(el(&[1, 2, 3, 4, 0], &[0; 5]).projective_order(), 5);
        assert_eq!(el(&[1, 2, 0, 3, 4], &[0, 0, 1, 0, 0]).projective_order(), 9);
        assert_eq!(el(&[1, 2, 0, 4, 5, 3], &[1, 0, 0, 1, 0, 0]).projective_order(), 3);
    }

    #[test]
    fn signatures() {
        let s = el(&[1, 2, 3, 4, 0], &[0; 5]).signature().unwrap();
        assert_eq!(canonicalize(&s).values(), &[0, 1, 2, 3, 4]);
        let s = el(&[1, 0, 2, 3, 4], &[0; 5]).signature().unwrap();
        assert_eq!(canonicalize(&s).values(), &[0, 0, 0, 0, 1]);
        assert_eq!(el(&[1, 2, 0, 3, 4], &[0, 0, 1, 0, 0]).signature(), None);
    }

    #[test]
    fn rejects_bad_elements() {
        assert!(FermatGroupElement::new(vec![0, 0], vec![0, 0]).is_err());
        assert!(FermatGroupElement::new(vec![0, 1], vec![0, 3]).is_err());
        assert!(FermatGroupElement::new(vec![0, 1], vec![0]).is_err());
    }

    /// Oracle: walk every permutation and exponent vector with e_0 = 0.
    fn brute_classes(nvars: usize) -> BTreeSet<Signature> {
        let mut out = BTreeSet::new();
        for perm in (0..nvars).permutations(nvars) {
            for code in 0..3usize.pow(nvars as u32 - 1) {
                let mut e = vec![0u8; nvars];
                let mut c = code;
                for slot in e.iter_mut().skip(1) {
                    *slot = (c % 3) as u8;
                    c /= 3;
                }
                if let Some(s) = el(&perm, &e).signature() {
                    out.insert(canonicalize(&s));
                }
            }
        }
        out
    }

    #[test]
    fn representatives_cover_the_group() {
        assert_eq!(fermat_automorphism_classes(5), brute_classes(5));
    }

    #[test]
    fn no_order_seven_or_eleven() {
        let primes: BTreeSet<u64> = fermat_automorphism_classes(6).iter().map(|s| s.p().get()).collect();
        assert_eq!(primes, [2, 3, 5].into());
    }
}
