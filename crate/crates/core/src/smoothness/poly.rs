//! Sparse multivariate polynomials over a prime field, degrevlex ordered.

use std::cmp::Ordering;
use std::fmt;

use crate::admissibility::{mul_mod, pow_mod};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 16;

/// Exponent vector with cached total degree. Ordered by degrevlex.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Mono {
    pub fn one() -> Self {
        Mono { exps: [0; MAX_VARS], deg: 0 }
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Self> {
        if exps.len() > MAX_VARS {
            return Err(Error::InvalidForm(format!("at most {MAX_VARS} variables supported")));
        }
        let mut m = Mono::one();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u8::try_from(e).map_err(|_| Error::Overflow)?;
            m.deg += e as u16;
        }
        Ok(m)
    }

    pub fn var(i: usize, e: u8) -> Self {
        let mut m = Mono::one();
        m.exps[i] = e;
        m.deg = e as u16;
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn mul(&self, other: &Mono) -> Mono {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(&other.exps) {
            *a += b;
        }
        Mono { exps, deg: self.deg + other.deg }
    }

    #[inline]
    pub fn divides(&self, other: &Mono) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    #[inline]
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        let mut exps = other.exps;
        for (a, b) in exps.iter_mut().zip(&self.exps) {
            *a -= b;
        }
        Mono { exps, deg: other.deg - self.deg }
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let mut exps = [0u8; MAX_VARS];
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].max(other.exps[i]);
            deg += exps[i] as u16;
        }
        Mono { exps, deg }
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `Some((i, d))` when the monomial is `x_i^d` with `d >= 1`.
    pub fn pure_power(&self) -> Option<(usize, u32)> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e as u32));
            }
        }
        found
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.deg.cmp(&other.deg) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for i in (0..MAX_VARS).rev() {
            match self.exps[i].cmp(&other.exps[i]) {
                Ordering::Equal => continue,
                // a smaller exponent in the last differing variable wins
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
}

/// A polynomial over `F_q`. Terms are stored by decreasing monomial with
/// coefficients in `[1, q)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyModQ {
    modulus: u64,
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Mono, u64)>,
}

impl PolyModQ {
    pub fn zero(modulus: u64, nvars: usize) -> Self {
        PolyModQ { modulus, nvars, order: MonomialOrder::DegRevLex, terms: Vec::new() }
    }

    /// Collects `(exponents, coefficient)` pairs, merging repeats.
    pub fn new<'a>(
        modulus: u64,
        nvars: usize,
        terms: impl IntoIterator<Item = (&'a [u32], i64)>,
    ) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::InvalidForm(format!("at most {MAX_VARS} variables supported")));
        }
        let mut raw = Vec::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::LengthMismatch { expected: nvars, got: exps.len() });
            }
            raw.push((Mono::from_exponents(exps)?, c.rem_euclid(modulus as i64) as u64));
        }
        Ok(Self::from_raw(modulus, nvars, raw))
    }

    fn from_raw(modulus: u64, nvars: usize, mut raw: Vec<(Mono, u64)>) -> Self {
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(Mono, u64)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some(last) if last.0 == m => last.1 = (last.1 + c) % modulus,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|t| t.1 != 0);
        PolyModQ { modulus, nvars, order: MonomialOrder::DegRevLex, terms }
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Mono, u64)] {
        &self.terms
    }

    #[inline]
    pub fn leading_monomial(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    #[inline]
    pub fn leading_coefficient(&self) -> Option<u64> {
        self.terms.first().map(|t| t.1)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn make_monic(&mut self) {
        if let Some(lc) = self.leading_coefficient() {
            if lc != 1 {
                let inv = pow_mod(lc, self.modulus - 2, self.modulus);
                for t in &mut self.terms {
                    t.1 = mul_mod(t.1, inv, self.modulus);
                }
            }
        }
    }

    pub fn evaluate(&self, point: &[u64]) -> u64 {
        let q = self.modulus;
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, &x) in point.iter().enumerate().take(self.nvars) {
                v = mul_mod(v, pow_mod(x % q, m.exponent(i) as u64, q), q);
            }
            acc = (acc + v) % q;
        }
        acc
    }

    /// `self - c * m * other`.
    pub(crate) fn sub_scaled(&self, c: u64, m: &Mono, other: &PolyModQ) -> PolyModQ {
        let terms = sub_scaled_terms(&self.terms, c, m, other, self.modulus);
        PolyModQ { modulus: self.modulus, nvars: self.nvars, order: self.order, terms }
    }

    pub(crate) fn set_terms(&mut self, terms: Vec<(Mono, u64)>) {
        self.terms = terms;
    }

    pub(crate) fn mul_term(&self, c: u64, m: &Mono) -> PolyModQ {
        let q = self.modulus;
        let terms = self.terms.iter().map(|(om, oc)| (om.mul(m), mul_mod(*oc, c, q))).collect();
        PolyModQ { modulus: q, nvars: self.nvars, order: self.order, terms }
    }
}

/// Merges `a - c * m * other` for strictly decreasing term lists.
pub(crate) fn sub_scaled_terms(a: &[(Mono, u64)], c: u64, m: &Mono, other: &PolyModQ, q: u64) -> Vec<(Mono, u64)> {
    let neg = (q - c % q) % q;
    let mut out = Vec::with_capacity(a.len() + other.terms.len());
    let mut a = a.iter().peekable();
    let mut b = other.terms.iter().map(|(om, oc)| (om.mul(m), mul_mod(*oc, neg, q))).peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(*a.next().unwrap()),
            (None, Some(_)) => out.push(b.next().unwrap()),
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Greater => out.push(*a.next().unwrap()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let s = (x.1 + y.1) % q;
                    if s != 0 {
                        out.push((x.0, s));
                    }
                    a.next();
                    b.next();
                }
            },
        }
    }
    out
}

impl fmt::Debug for PolyModQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (mod {})", self.modulus);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        write!(f, " (mod {})", self.modulus)
    }
}
