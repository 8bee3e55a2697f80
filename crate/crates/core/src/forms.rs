//! Cubic monomials and forms, eigenspaces of diagonal automorphisms acting
//! on `S^3(V)`, and the coordinate-point singularity filter.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::admissibility::{admissible_primes, mult_order, Prime};
use crate::error::{Error, Result};
use crate::signatures::Signature;

/// `x_i x_j x_k` with `i <= j <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial([usize; 3]);

impl Monomial {
    /// Sorts the indices.
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        let mut idx = [i, j, k];
        idx.sort_unstable();
        Monomial(idx)
    }

    /// Rejects triples that are not already nondecreasing.
    pub fn from_sorted(idx: [usize; 3]) -> Result<Self> {
        if idx[0] <= idx[1] && idx[1] <= idx[2] {
            Ok(Monomial(idx))
        } else {
            Err(Error::InvalidForm(format!("monomial indices {idx:?} are not sorted")))
        }
    }

    #[inline]
    pub fn indices(&self) -> [usize; 3] {
        self.0
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.0.iter().filter(|&&i| i == var).count()
    }

    /// `sigma_i + sigma_j + sigma_k mod p`.
    pub fn weight(&self, sigma: &Signature) -> u64 {
        let [i, j, k] = self.0;
        (sigma.get(i) + sigma.get(j) + sigma.get(k)) % sigma.p().get()
    }

    /// Exponent vector over `nvars` variables.
    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        let mut e = vec![0; nvars];
        for &i in &self.0 {
            e[i] += 1;
        }
        e
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < 3 {
            let v = self.0[i];
            let d = self.degree_in(v);
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if d == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{d}")?;
            }
            i += d;
        }
        Ok(())
    }
}

/// All cubic monomials in `nvars` variables, lexicographic.
pub fn monomials(nvars: usize) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(nvars * (nvars + 1) * (nvars + 2) / 6);
    for i in 0..nvars {
        for j in i..nvars {
            for k in j..nvars {
                out.push(Monomial([i, j, k]));
            }
        }
    }
    out
}

/// `dim S^3(V) = C(n+4, 3)`.
pub fn s3_dimension(n: usize) -> usize {
    let m = n + 4;
    m * (m - 1) * (m - 2) / 6
}

/// A sparse integer cubic form in `n + 2` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubicForm {
    n: usize,
    terms: BTreeMap<Monomial, i64>,
}

impl CubicForm {
    pub fn zero(n: usize) -> Self {
        CubicForm { n, terms: BTreeMap::new() }
    }

    /// Builds a form from distinct monomials; zero coefficients are dropped.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Result<Self> {
        let mut form = CubicForm::zero(n);
        for (m, c) in terms {
            if m.0[2] >= n + 2 {
                return Err(Error::InvalidForm(format!("monomial {m} uses a variable beyond x{}", n + 1)));
            }
            if form.terms.contains_key(&m) {
                return Err(Error::InvalidForm(format!("duplicate monomial {m}")));
            }
            if c != 0 {
                form.terms.insert(m, c);
            }
        }
        Ok(form)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.n + 2
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> i64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest power of `x_var` occurring in any term.
    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|m| m.degree_in(var)).max().unwrap_or(0)
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn relabel(&self, perm: &[usize]) -> CubicForm {
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let [i, j, k] = m.0;
                (Monomial::new(perm[i], perm[j], perm[k]), c)
            })
            .collect();
        CubicForm { n: self.n, terms }
    }

    /// Multiplies every coefficient by `k`.
    pub fn scaled(&self, k: i64) -> Result<CubicForm> {
        let mut terms = BTreeMap::new();
        for (&m, &c) in &self.terms {
            let v = c.checked_mul(k).ok_or(Error::Overflow)?;
            if v != 0 {
                terms.insert(m, v);
            }
        }
        Ok(CubicForm { n: self.n, terms })
    }

    /// Value at an integer point, reduced mod `q`.
    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        let mut acc = 0u64;
        for (m, &c) in &self.terms {
            let c = c.rem_euclid(q as i64) as u64;
            let [i, j, k] = m.0;
            let v = c * (point[i] % q) % q * (point[j] % q) % q * (point[k] % q) % q;
            acc = (acc + v) % q;
        }
        acc
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: FormFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidForm(e.to_string()))?;
        let terms = file
            .terms
            .into_iter()
            .map(|t| Monomial::from_sorted(t.m).map(|m| (m, t.c)))
            .collect::<Result<Vec<_>>>()?;
        CubicForm::from_terms(file.n, terms)
    }

    pub fn to_json(&self) -> String {
        let file = FormFile {
            n: self.n,
            terms: self.terms.iter().map(|(m, &c)| FormTerm { c, m: m.0 }).collect(),
        };
        serde_json::to_string(&file).expect("form serializes")
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, &c)) in self.terms.iter().enumerate() {
            match (idx, c) {
                (0, 1) => write!(f, "{m}")?,
                (0, -1) => write!(f, "-{m}")?,
                (0, _) => write!(f, "{c}*{m}")?,
                (_, 1) => write!(f, " + {m}")?,
                (_, -1) => write!(f, " - {m}")?,
                (_, c) if c < 0 => write!(f, " - {}*{m}", -c)?,
                (_, c) => write!(f, " + {c}*{m}")?,
            }
        }
        Ok(())
    }
}

/// On-disk form: `{"n": int, "terms": [{"c": int, "m": [i, j, k]}, ...]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormFile {
    n: usize,
    terms: Vec<FormTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormTerm {
    c: i64,
    m: [usize; 3],
}

/// A quadratic form, the partial derivative of a cubic. Keys are sorted
/// index pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadric {
    nvars: usize,
    terms: BTreeMap<[usize; 2], i64>,
}

impl Quadric {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = ([usize; 2], i64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn coefficient(&self, i: usize, j: usize) -> i64 {
        let key = if i <= j { [i, j] } else { [j, i] };
        self.terms.get(&key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval_mod(&self, point: &[u64], q: u64) -> u64 {
        let mut acc = 0u64;
        for (&[i, j], &c) in &self.terms {
            let c = c.rem_euclid(q as i64) as u64;
            acc = (acc + c * (point[i] % q) % q * (point[j] % q)) % q;
        }
        acc
    }

    /// Weight `sigma_i + sigma_j` shared by every term, if any.
    pub fn weight_of(&self, sigma: &Signature) -> Option<u64> {
        let pv = sigma.p().get();
        let mut weights = self.terms.keys().map(|&[i, j]| (sigma.get(i) + sigma.get(j)) % pv);
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }
}

/// Exact partial derivatives `dF/dx_0, ..., dF/dx_{n+1}`.
pub fn partials(form: &CubicForm) -> Result<Vec<Quadric>> {
    let nvars = form.nvars();
    let mut out: Vec<Quadric> = (0..nvars).map(|_| Quadric { nvars, terms: BTreeMap::new() }).collect();
    for (m, c) in form.terms() {
        let [i, j, k] = m.indices();
        // differentiate each distinct variable once, scaled by its exponent
        for (pos, &v) in [i, j, k].iter().enumerate() {
            if pos > 0 && m.0[pos - 1] == v {
                continue;
            }
            let d = m.degree_in(v) as i64;
            let mut rest: Vec<usize> = m.0.to_vec();
            rest.remove(pos);
            let key = [rest[0], rest[1]];
            let coeff = c.checked_mul(d).ok_or(Error::Overflow)?;
            let entry = out[v].terms.entry(key).or_insert(0);
            *entry = entry.checked_add(coeff).ok_or(Error::Overflow)?;
            if *entry == 0 {
                out[v].terms.remove(&key);
            }
        }
    }
    Ok(out)
}

/// Monomials spanning the weight-`a` eigenspace of `diag(sigma)` on cubics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenspaceBasis {
    pub sigma: Signature,
    pub weight: u64,
    pub monomials: Vec<Monomial>,
}

impl EigenspaceBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    /// The member with the given coefficients, one per basis monomial.
    pub fn form(&self, coeffs: &[i64]) -> Result<CubicForm> {
        if coeffs.len() != self.monomials.len() {
            return Err(Error::LengthMismatch { expected: self.monomials.len(), got: coeffs.len() });
        }
        CubicForm::from_terms(self.sigma.n(), self.monomials.iter().copied().zip(coeffs.iter().copied()))
    }
}

pub fn eigenspace_basis(sigma: &Signature, a: u64) -> EigenspaceBasis {
    let a = a % sigma.p().get();
    let monomials = monomials(sigma.len()).into_iter().filter(|m| m.weight(sigma) == a).collect();
    EigenspaceBasis { sigma: sigma.clone(), weight: a, monomials }
}

/// Whether every variable can occur squared in some weight-`a` monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// Every member of the eigenspace has degree < 2 in this variable, so its
    /// coordinate point is singular on every member.
    Infeasible { variable: usize },
}

impl Feasibility {
    pub fn is_feasible(self) -> bool {
        self == Feasibility::Feasible
    }
}

pub fn lemma_base_feasible(sigma: &Signature, a: u64) -> Feasibility {
    let pv = sigma.p().get();
    let a = a % pv;
    let present: Vec<bool> = {
        let mut v = vec![false; pv as usize];
        for &s in sigma.values() {
            v[s as usize] = true;
        }
        v
    };
    for (i, &s) in sigma.values().iter().enumerate() {
        // need some j with 2*s + sigma_j = a
        let need = (a + 2 * pv - 2 * s % pv) % pv;
        if !present[need as usize] {
            return Feasibility::Infeasible { variable: i };
        }
    }
    Feasibility::Feasible
}

/// `x_0^3 + ... + x_{n+1}^3`.
pub fn fermat(n: usize) -> CubicForm {
    let terms = (0..n + 2).map(|i| (Monomial([i, i, i]), 1)).collect();
    CubicForm { n, terms }
}

/// `x_0^2 x_1 + x_1^2 x_2 + ... + x_{n+1}^2 x_0`.
pub fn klein(n: usize) -> CubicForm {
    let m = n + 2;
    let terms = (0..m).map(|i| (Monomial::new(i, i, (i + 1) % m), 1)).collect();
    CubicForm { n, terms }
}

/// The largest prime `p` in which `-2` has order exactly `n + 2`, with the
/// signature `((-2)^0, ..., (-2)^(n+1)) mod p` under which the Klein form is
/// invariant. When the maximal admissible prime qualifies, it is this one.
pub fn klein_signature(n: usize) -> Result<(Prime, Signature)> {
    let order = n as u64 + 2;
    let p = admissible_primes(n)?
        .into_iter()
        .rev()
        .find(|&p| p.get() > 2 && mult_order(-2, p) == Some(order))
        .ok_or(Error::NoKleinPrime { n, order: n + 2 })?;
    let mut values = Vec::with_capacity(n + 2);
    let mut x: i64 = 1;
    for _ in 0..n + 2 {
        values.push(x);
        x = (x * -2).rem_euclid(p.get() as i64);
    }
    Ok((p, Signature::new(p, &values)?))
}

/// A permutation `perm` with `form.relabel(perm) == klein(n)`, if one exists.
pub fn klein_relabeling(form: &CubicForm) -> Option<Vec<usize>> {
    let m = form.nvars();
    let mut next = vec![None; m];
    for (mono, c) in form.terms() {
        let [i, j, k] = mono.indices();
        let (sq, other) = match (i == j, j == k) {
            (true, false) => (i, k),
            (false, true) => (j, i),
            _ => return None,
        };
        if c != 1 || next[sq].replace(other).is_some() {
            return None;
        }
    }
    let mut perm = vec![usize::MAX; m];
    let mut v = 0;
    for k in 0..m {
        if perm[v] != usize::MAX {
            return None;
        }
        perm[v] = k;
        v = next[v]?;
    }
    let relabelled = form.relabel(&perm);
    (v == 0 && relabelled == klein(form.n())).then_some(perm)
}

/// Common weight of all terms under `sigma`, or `None` when the terms
/// disagree (or the form is zero).
pub fn weight_of(form: &CubicForm, sigma: &Signature) -> Option<u64> {
    let mut weights = form.terms.keys().map(|m| m.weight(sigma));
    let first = weights.next()?;
    weights.all(|w| w == first).then_some(first)
}
