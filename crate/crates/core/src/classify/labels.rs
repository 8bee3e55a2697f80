//! Conventional names of the threefold (`T`) and fourfold (`F`) families.

use crate::admissibility::Prime;
use crate::signatures::{canonical_pair, Signature};

/// A named family: dimension, prime, listed signature, eigenweight, name and
/// expected family dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabelledFamily {
    pub n: usize,
    pub p: u64,
    pub sigma: &'static [i64],
    pub weight: u64,
    pub label: &'static str,
    pub d: i64,
}

const fn fam(n: usize, p: u64, sigma: &'static [i64], weight: u64, label: &'static str, d: i64) -> LabelledFamily {
    LabelledFamily { n, p, sigma, weight, label, d }
}

pub const LABELLED_FAMILIES: [LabelledFamily; 22] = [
    fam(3, 2, &[0, 0, 0, 0, 1], 0, "T_2^1", 7),
    fam(3, 2, &[0, 0, 0, 1, 1], 0, "T_2^2", 6),
    fam(3, 3, &[0, 0, 0, 0, 1], 0, "T_3^1", 4),
    fam(3, 3, &[0, 0, 0, 1, 1], 0, "T_3^2", 1),
    fam(3, 3, &[0, 0, 0, 1, 2], 0, "T_3^3", 4),
    fam(3, 3, &[0, 0, 1, 1, 2], 0, "T_3^4", 2),
    fam(3, 5, &[0, 1, 2, 3, 4], 0, "T_5^1", 2),
    fam(3, 11, &[1, 3, 4, 5, 9], 0, "T_11^1", 0),
    fam(4, 2, &[0, 0, 0, 0, 0, 1], 0, "F_2^1", 14),
    fam(4, 2, &[0, 0, 0, 0, 1, 1], 0, "F_2^2", 12),
    fam(4, 2, &[0, 0, 0, 1, 1, 1], 0, "F_2^3", 10),
    fam(4, 3, &[0, 0, 0, 0, 0, 1], 0, "F_3^1", 10),
    fam(4, 3, &[0, 0, 0, 0, 1, 1], 0, "F_3^2", 4),
    fam(4, 3, &[0, 0, 0, 0, 1, 2], 0, "F_3^3", 8),
    fam(4, 3, &[0, 0, 0, 1, 1, 1], 0, "F_3^4", 2),
    fam(4, 3, &[0, 0, 0, 1, 1, 2], 0, "F_3^5", 7),
    fam(4, 3, &[0, 0, 1, 1, 2, 2], 0, "F_3^6", 8),
    // x_2 L_2(x_0, x_1) has weight 1
    fam(4, 3, &[0, 0, 1, 1, 2, 2], 1, "F_3^7", 6),
    fam(4, 5, &[0, 0, 1, 2, 3, 4], 0, "F_5^1", 4),
    fam(4, 5, &[1, 1, 2, 2, 3, 4], 0, "F_5^2", 2),
    fam(4, 7, &[1, 2, 3, 4, 5, 6], 0, "F_7^1", 2),
    fam(4, 11, &[0, 1, 3, 4, 5, 9], 0, "F_11^1", 0),
];

impl LabelledFamily {
    pub fn signature(&self) -> Signature {
        Signature::new(Prime::new(self.p).expect("table primes"), self.sigma).expect("table signatures")
    }

    /// The `canonical_pair` of the listed signature and weight.
    pub fn canonical(&self) -> (Signature, u64) {
        canonical_pair(&self.signature(), self.weight)
    }
}

/// Name of the family `(sigma, weight)` in dimension `n`, if it has one.
pub fn family_label(n: usize, sigma: &Signature, weight: u64) -> Option<&'static str> {
    let key = canonical_pair(sigma, weight);
    LABELLED_FAMILIES
        .iter()
        .filter(|f| f.n == n && f.p == sigma.p().get() && f.sigma.len() == sigma.len())
        .find(|f| f.canonical() == key)
        .map(|f| f.label)
}
