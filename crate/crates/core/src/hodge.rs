//! Characters of a diagonal automorphism on graded pieces of the Jacobian
//! ring `S / (dF/dx_0, ..., dF/dx_{n+1})`.
//!
//! The degree-`d` piece of the ring has the weight multiset of all
//! degree-`d` monomials minus that of the ideal's degree-`d` piece. The
//! ideal piece is spanned by products of degree-`(d-2)` monomials with
//! partials; each product is a weight vector, so its rank is taken one
//! weight at a time by Gaussian elimination over `F_q`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::admissibility::{mul_mod, pow_mod, Prime};
use crate::error::{Error, Result};
use crate::forms::{klein, klein_signature, partials, weight_of, CubicForm};
use crate::signatures::Signature;
use crate::smoothness::default_moduli;

/// Which of a set and its negation matched the reference spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Raw,
    Negated,
}

/// A multiset of residues mod `p`, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumSet {
    pub p: Prime,
    pub exponents: Vec<u64>,
    pub matched_convention: Option<Convention>,
}

impl SpectrumSet {
    pub fn new(p: Prime, mut exponents: Vec<u64>) -> Self {
        for e in &mut exponents {
            *e %= p.get();
        }
        exponents.sort_unstable();
        SpectrumSet { p, exponents, matched_convention: None }
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.exponents.windows(2).all(|w| w[0] != w[1])
    }

    /// `{-e mod p}`.
    pub fn negated(&self) -> SpectrumSet {
        let pv = self.p.get();
        SpectrumSet::new(self.p, self.exponents.iter().map(|&e| (pv - e) % pv).collect())
    }

    /// `{m e mod p}`.
    pub fn scaled(&self, m: u64) -> SpectrumSet {
        let pv = self.p.get();
        SpectrumSet::new(self.p, self.exponents.iter().map(|&e| mul_mod(e, m % pv, pv)).collect())
    }

    /// Same multiset, ignoring the convention tag.
    pub fn same_exponents(&self, other: &SpectrumSet) -> bool {
        self.p == other.p && self.exponents == other.exponents
    }
}

/// True iff multiplication by `m` permutes the multiset.
pub fn is_stable_under(set: &SpectrumSet, m: i64) -> Result<bool> {
    let r = set.p.reduce(m);
    if r == 0 {
        return Err(Error::NotAUnit { value: m, p: set.p.get() });
    }
    Ok(set.scaled(r).exponents == set.exponents)
}

/// Exponent vectors of all monomials of degree `d` in `nvars` variables.
fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Vec<u32>> {
    fn go(i: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left as u32;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u32;
            go(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        go(0, d, &mut vec![0; nvars], &mut out);
    }
    out
}

fn weight(exps: &[u32], sigma: &Signature) -> u64 {
    let pv = sigma.p().get();
    exps.iter().enumerate().map(|(i, &e)| e as u64 * sigma.get(i) % pv).sum::<u64>() % pv
}

/// Rank of a dense matrix over `F_q`.
fn rank_mod(mut rows: Vec<Vec<u64>>, q: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][col], q - 2, q);
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv, q);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = (*v + q - mul_mod(f, pv, q)) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Character on the degree-`d` piece of the Jacobian ring, ranks taken over
/// `F_q`. Returns the exponent multiset; its size is the dimension of the
/// piece.
pub fn jacobian_ring_character_mod_q(form: &CubicForm, sigma: &Signature, d: usize, q: Prime) -> Result<SpectrumSet> {
    if sigma.len() != form.nvars() {
        return Err(Error::LengthMismatch { expected: form.nvars(), got: sigma.len() });
    }
    let qv = q.get();
    if qv <= 3 {
        return Err(Error::InvalidModulus(qv));
    }
    let a = weight_of(form, sigma).ok_or(Error::MixedWeight)?;
    let pv = sigma.p().get();
    let nvars = form.nvars();

    let top = monomials_of_degree(nvars, d);
    let mut by_weight: BTreeMap<u64, Vec<&Vec<u32>>> = BTreeMap::new();
    for m in &top {
        by_weight.entry(weight(m, sigma)).or_default().push(m);
    }

    let mut rows_by_weight: BTreeMap<u64, Vec<BTreeMap<Vec<u32>, u64>>> = BTreeMap::new();
    if d >= 2 {
        let ds = partials(form)?;
        for low in monomials_of_degree(nvars, d - 2) {
            for (i, di) in ds.iter().enumerate() {
                if di.is_zero() {
                    continue;
                }
                let mut row: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
                for ([j, k], c) in di.terms() {
                    let mut e = low.clone();
                    e[j] += 1;
                    e[k] += 1;
                    let slot = row.entry(e).or_insert(0);
                    *slot = (*slot + q.reduce(c)) % qv;
                }
                row.retain(|_, c| *c != 0);
                if row.is_empty() {
                    continue;
                }
                let w = (weight(&low, sigma) + a + pv - sigma.get(i)) % pv;
                rows_by_weight.entry(w).or_default().push(row);
            }
        }
    }

    let mut exponents = Vec::new();
    for (w, monos) in &by_weight {
        let rank = match rows_by_weight.remove(w) {
            Some(rows) => {
                let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(k, m)| (*m, k)).collect();
                let dense: Vec<Vec<u64>> = rows
                    .iter()
                    .map(|row| {
                        let mut v = vec![0u64; monos.len()];
                        for (m, c) in row {
                            v[index[m]] = *c;
                        }
                        v
                    })
                    .collect();
                rank_mod(dense, qv)
            }
            None => 0,
        };
        exponents.extend(std::iter::repeat_n(*w, monos.len() - rank));
    }
    Ok(SpectrumSet::new(sigma.p(), exponents))
}

/// [`jacobian_ring_character_mod_q`] at the first two moduli where `form`
/// does not vanish; the two results must agree.
pub fn jacobian_ring_character(
    form: &CubicForm,
    sigma: &Signature,
    d: usize,
    moduli: &[Prime],
) -> Result<SpectrumSet> {
    if moduli.is_empty() {
        return Err(Error::EmptyModuli);
    }
    let usable: Vec<Prime> = moduli
        .iter()
        .copied()
        .filter(|q| form.terms().any(|(_, c)| q.reduce(c) != 0))
        .take(2)
        .collect();
    let Some(&first) = usable.first() else {
        return Err(Error::ZeroModQ(moduli[0].get()));
    };
    let spectrum = jacobian_ring_character_mod_q(form, sigma, d, first)?;
    if let Some(&second) = usable.get(1) {
        let other = jacobian_ring_character_mod_q(form, sigma, d, second)?;
        if other != spectrum {
            return Err(Error::ModuliDisagree(first.get(), second.get()));
        }
    }
    Ok(spectrum)
}

/// Reference exponents of the five-fold Klein tangent spectrum mod 43.
pub const KLEIN_FIVEFOLD_SPECTRUM: [u64; 21] =
    [2, 3, 5, 8, 9, 12, 13, 14, 15, 17, 19, 20, 22, 25, 27, 32, 33, 36, 37, 39, 42];

/// Both conventions for the Klein tangent spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KleinSpectrum {
    pub raw: SpectrumSet,
    pub negated: SpectrumSet,
    pub matched_convention: Option<Convention>,
}

impl KleinSpectrum {
    /// The set in the matched convention, raw when there is no reference.
    pub fn matched(&self) -> SpectrumSet {
        let mut out = match self.matched_convention {
            Some(Convention::Negated) => self.negated.clone(),
            _ => self.raw.clone(),
        };
        out.matched_convention = self.matched_convention;
        out
    }
}

/// Character of the Klein automorphism on the Jacobian-ring piece carrying
/// the tangent space of the intermediate jacobian: degree 1 for `n = 3`,
/// degree 2 for `n = 5`.
pub fn klein_tangent_spectrum(n: usize) -> Result<KleinSpectrum> {
    let d = match n {
        3 => 1,
        5 => 2,
        _ => return Err(Error::UnsupportedDimension(n)),
    };
    let (p, sigma) = klein_signature(n)?;
    let raw = jacobian_ring_character(&klein(n), &sigma, d, &default_moduli())?;
    let negated = raw.negated();
    let matched_convention = if n == 5 {
        let reference = SpectrumSet::new(p, KLEIN_FIVEFOLD_SPECTRUM.to_vec());
        if raw.same_exponents(&reference) {
            Some(Convention::Raw)
        } else if negated.same_exponents(&reference) {
            Some(Convention::Negated)
        } else {
            None
        }
    } else {
        None
    };
    Ok(KleinSpectrum { raw, negated, matched_convention })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{fermat, Monomial};

    fn prime(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn degree_counts() {
        assert_eq!(monomials_of_degree(8, 2).len(), 36);
        assert_eq!(monomials_of_degree(7, 2).len(), 28);
        assert_eq!(monomials_of_degree(5, 0), vec![vec![0; 5]]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod(vec![vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_mod(vec![vec![1, 2], vec![3, 4]], 7), 2);
        assert_eq!(rank_mod(vec![vec![1, 2], vec![3, 4]], 2), 1);
        assert_eq!(rank_mod(vec![], 7), 0);
    }

    #[test]
    fn klein_fivefold() {
        let s = klein_tangent_spectrum(5).unwrap();
        assert_eq!(s.raw.len(), 21);
        assert!(s.raw.is_multiplicity_free());
        assert_eq!(s.matched_convention, Some(Convention::Raw));
        assert_eq!(s.matched().exponents, KLEIN_FIVEFOLD_SPECTRUM.to_vec());
        assert!(is_stable_under(&s.raw, 11).unwrap());
        assert!(is_stable_under(&s.negated, 11).unwrap());
    }

    #[test]
    fn klein_threefold() {
        let s = klein_tangent_spectrum(3).unwrap();
        assert_eq!(s.raw.exponents, vec![1, 3, 4, 5, 9]);
        assert_eq!(s.matched_convention, None);
        assert!(matches!(klein_tangent_spectrum(4), Err(Error::UnsupportedDimension(4))));
    }

    #[test]
    fn stability_examples() {
        let s = SpectrumSet::new(prime(43), KLEIN_FIVEFOLD_SPECTRUM.to_vec());
        assert!(is_stable_under(&s, 11).unwrap());
        assert!(is_stable_under(&s, 1).unwrap());
        assert!(!is_stable_under(&s, -1).unwrap());
        assert!(is_stable_under(&s, 43).is_err());
    }

    #[test]
    fn constants_and_mixed_forms() {
        let (_, sigma) = klein_signature(3).unwrap();
        let s = jacobian_ring_character(&klein(3), &sigma, 0, &default_moduli()).unwrap();
        assert_eq!(s.exponents, vec![0]);
        let mixed = CubicForm::from_terms(3, [(Monomial::new(0, 0, 0), 1), (Monomial::new(1, 1, 1), 1)]).unwrap();
        assert_eq!(jacobian_ring_character(&mixed, &sigma, 2, &default_moduli()), Err(Error::MixedWeight));
    }

    #[test]
    fn fermat_degree_two() {
        // S/J for the Fermat cubic is spanned by squarefree monomials
        let sigma = Signature::zero(prime(5), 3);
        let s = jacobian_ring_character(&fermat(3), &sigma, 2, &default_moduli()).unwrap();
        assert_eq!(s.len(), 10);
        let s = jacobian_ring_character(&fermat(3), &sigma, 3, &default_moduli()).unwrap();
        assert_eq!(s.len(), 10);
    }

    fn arb_invariant_form() -> impl proptest::strategy::Strategy<Value = (CubicForm, Signature)> {
        use proptest::prelude::*;
        (prop::sample::select(vec![(2usize, 5u64, vec![0i64, 1, 2, 3]), (3, 5, vec![0, 1, 2, 3, 4]), (3, 11, vec![1, 9, 4, 3, 5])]))
            .prop_flat_map(|(n, p, vals)| {
                let sigma = Signature::new(prime(p), &vals).unwrap();
                let basis = crate::forms::eigenspace_basis(&sigma, 0);
                (prop::collection::vec(1i64..=30, basis.dim()), Just(basis), Just(n))
            })
            .prop_map(|(coeffs, basis, _n)| (basis.form(&coeffs).unwrap(), basis.sigma.clone()))
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn two_moduli_agree((form, sigma) in arb_invariant_form(), d in 0usize..4) {
            let a = jacobian_ring_character_mod_q(&form, &sigma, d, prime(10007)).unwrap();
            let b = jacobian_ring_character_mod_q(&form, &sigma, d, prime(30011)).unwrap();
            proptest::prop_assert_eq!(a, b);
        }

        #[test]
        fn quadratic_piece_size((form, sigma) in arb_invariant_form()) {
            // independent partials leave C(n+3, 2) - (n+2) quadrics
            let nvars = form.nvars();
            let s = jacobian_ring_character(&form, &sigma, 2, &default_moduli()).unwrap();
            let rows: Vec<Vec<u64>> = partials(&form).unwrap().iter().map(|d| {
                monomials_of_degree(nvars, 2).iter().map(|e| {
                    let idx: Vec<usize> = (0..nvars).flat_map(|i| std::iter::repeat_n(i, e[i] as usize)).collect();
                    prime(10007).reduce(d.coefficient(idx[0], idx[1]))
                }).collect()
            }).collect();
            let independent = rank_mod(rows, 10007) == nvars;
            if independent {
                proptest::prop_assert_eq!(s.len(), nvars * (nvars + 1) / 2 - nvars);
            }
        }

        #[test]
        fn monomial_character_is_permutation_invariant(
            perm in proptest::strategy::Strategy::prop_shuffle(proptest::strategy::Just((0..5usize).collect::<Vec<_>>()))
        ) {
            use proptest::prelude::*;
            let sigma = Signature::new(prime(11), &[1, 9, 4, 3, 5]).unwrap();
            let permuted: Vec<i64> = perm.iter().map(|&i| sigma.get(i) as i64).collect();
            let tau = Signature::new(prime(11), &permuted).unwrap();
            let count = |s: &Signature| {
                let mut w: Vec<u64> = monomials_of_degree(5, 3).iter().map(|e| weight(e, s)).collect();
                w.sort_unstable();
                w
            };
            prop_assert_eq!(count(&sigma), count(&tau));
        }
    }
}
