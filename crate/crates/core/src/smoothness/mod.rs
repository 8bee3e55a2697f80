//! Certified smoothness of cubic hypersurfaces.
//!
//! `V(F)` is smooth exactly when the partial derivatives of `F` have no
//! common projective zero. Modulo a prime `q` this is decided by a reduced
//! Gröbner basis of the Jacobian ideal: the zero set is empty iff for every
//! variable some basis element has a pure power of that variable as leading
//! monomial. A smooth reduction at one prime (with `F` not vanishing there)
//! forces a smooth hypersurface over the rationals; a failure proves nothing,
//! so singularity is only ever reported through the coordinate-point
//! witness.

pub mod groebner;
pub mod poly;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::admissibility::{is_prime, Prime};
use crate::error::{Error, Result};
use crate::forms::{eigenspace_basis, lemma_base_feasible, partials, CubicForm, Feasibility};
use crate::signatures::Signature;

pub use groebner::{groebner_basis, reduce};
pub use poly::{Mono, MonomialOrder, PolyModQ, MAX_VARS};

/// Working moduli tried in order by [`certify_smooth_over_q`].
pub const DEFAULT_MODULI: [u64; 4] = [10007, 30011, 65537, 104729];

/// Largest random coefficient used by [`find_smooth_member`].
pub const MAX_RANDOM_COEFFICIENT: i64 = 50;

pub fn default_moduli() -> Vec<Prime> {
    DEFAULT_MODULI.iter().map(|&q| Prime::new(q).expect("default moduli are prime")).collect()
}

/// Proof that the Jacobian ideal is primary to the irrelevant ideal mod `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub modulus: u64,
    /// `pure_powers[i] = d` where `x_i^d` leads some basis element.
    pub pure_powers: Vec<u32>,
    pub basis_size: usize,
}

/// A projective point at which every partial derivative vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    pub point: Vec<i64>,
}

impl SingularWitness {
    /// Exact substitution into every partial.
    pub fn verify(&self, form: &CubicForm) -> Result<bool> {
        if self.point.len() != form.nvars() || self.point.iter().all(|&x| x == 0) {
            return Ok(false);
        }
        for d in partials(form)? {
            let mut acc: i128 = 0;
            for ([i, j], c) in d.terms() {
                acc += c as i128 * self.point[i] as i128 * self.point[j] as i128;
            }
            if acc != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_modulus(q: u64) -> Result<()> {
    if q == 2 || q == 3 || !is_prime(q) {
        Err(Error::InvalidModulus(q))
    } else {
        Ok(())
    }
}

/// Reduces a cubic form mod `q`.
pub fn to_poly_mod_q(form: &CubicForm, q: u64) -> Result<PolyModQ> {
    let nvars = form.nvars();
    let exps: Vec<(Vec<u32>, i64)> = form.terms().map(|(m, c)| (m.exponents(nvars), c)).collect();
    PolyModQ::new(q, nvars, exps.iter().map(|(e, c)| (e.as_slice(), *c)))
}

/// The partial derivatives of `form`, reduced mod `q`.
pub fn jacobian_generators(form: &CubicForm, q: u64) -> Result<Vec<PolyModQ>> {
    let nvars = form.nvars();
    partials(form)?
        .iter()
        .map(|d| {
            let exps: Vec<(Vec<u32>, i64)> = d
                .terms()
                .map(|([i, j], c)| {
                    let mut e = vec![0u32; nvars];
                    e[i] += 1;
                    e[j] += 1;
                    (e, c)
                })
                .collect();
            PolyModQ::new(q, nvars, exps.iter().map(|(e, c)| (e.as_slice(), *c)))
        })
        .collect()
}

/// Decides smoothness of the reduction of `form` mod `q`. `Ok(None)` means
/// the reduction is singular over the algebraic closure of `F_q`.
pub fn is_smooth_mod_q(form: &CubicForm, q: u64) -> Result<Option<SmoothnessCertificate>> {
    check_modulus(q)?;
    if form.nvars() > MAX_VARS {
        return Err(Error::UnsupportedDimension(form.n()));
    }
    if to_poly_mod_q(form, q)?.is_zero() {
        return Err(Error::ZeroModQ(q));
    }
    let gens: Vec<PolyModQ> = jacobian_generators(form, q)?.into_iter().filter(|g| !g.is_zero()).collect();
    let basis = groebner_basis(&gens)?;
    let mut pure_powers: Vec<Option<u32>> = vec![None; form.nvars()];
    for g in &basis {
        if let Some((i, d)) = g.leading_monomial().and_then(Mono::pure_power) {
            let slot = &mut pure_powers[i];
            *slot = Some(slot.map_or(d, |old| old.min(d)));
        }
    }
    if pure_powers.iter().all(Option::is_some) {
        Ok(Some(SmoothnessCertificate {
            modulus: q,
            pure_powers: pure_powers.into_iter().map(Option::unwrap).collect(),
            basis_size: basis.len(),
        }))
    } else {
        Ok(None)
    }
}

/// Tries each modulus in turn; the first certificate proves smoothness over
/// the rationals. Moduli at which `form` vanishes are skipped. `Ok(None)` is
/// inconclusive, never a claim of singularity.
pub fn certify_smooth_over_q(form: &CubicForm, moduli: &[Prime]) -> Result<Option<SmoothnessCertificate>> {
    if moduli.is_empty() {
        return Err(Error::EmptyModuli);
    }
    for q in moduli {
        match is_smooth_mod_q(form, q.get()) {
            Ok(Some(cert)) => return Ok(Some(cert)),
            Ok(None) | Err(Error::ZeroModQ(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// If `form` has degree < 2 in some variable, the lowest such coordinate
/// point is singular.
pub fn singular_point_from_lemma_base(form: &CubicForm) -> Option<SingularWitness> {
    (0..form.nvars()).find(|&i| form.degree_in(i) < 2).map(|i| {
        let mut point = vec![0; form.nvars()];
        point[i] = 1;
        SingularWitness { point }
    })
}

/// A certified smooth member of an eigenspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothMember {
    /// One coefficient per eigenspace basis monomial.
    pub coeffs: Vec<i64>,
    pub certificate: SmoothnessCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberSearch {
    Found(SmoothMember),
    /// Every member is singular at this coordinate point.
    LemmaBase { variable: usize },
    /// Not a proof that the eigenspace has no smooth member.
    TrialsExhausted { trials: usize },
}

/// Searches the weight-`a` eigenspace of `sigma` for a member certified
/// smooth, trying all-ones coefficients first and then seeded uniform
/// coefficients in `[1, 50]`.
pub fn find_smooth_member(sigma: &Signature, a: u64, trials: usize, seed: u64) -> Result<MemberSearch> {
    find_smooth_member_with(sigma, a, trials, seed, &default_moduli())
}

pub fn find_smooth_member_with(
    sigma: &Signature,
    a: u64,
    trials: usize,
    seed: u64,
    moduli: &[Prime],
) -> Result<MemberSearch> {
    if trials == 0 {
        return Err(Error::InvalidAction("trials must be at least 1".into()));
    }
    if let Feasibility::Infeasible { variable } = lemma_base_feasible(sigma, a) {
        return Ok(MemberSearch::LemmaBase { variable });
    }
    let basis = eigenspace_basis(sigma, a);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let coeffs: Vec<i64> = if trial == 0 {
            vec![1; basis.dim()]
        } else {
            (0..basis.dim()).map(|_| rng.gen_range(1..=MAX_RANDOM_COEFFICIENT)).collect()
        };
        let form = basis.form(&coeffs)?;
        if let Some(certificate) = certify_smooth_over_q(&form, moduli)? {
            return Ok(MemberSearch::Found(SmoothMember { coeffs, certificate }));
        }
    }
    Ok(MemberSearch::TrialsExhausted { trials })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{fermat, klein, klein_signature, Monomial};
    use proptest::prelude::*;

    fn m(i: usize, j: usize, k: usize) -> Monomial {
        Monomial::new(i, j, k)
    }

    fn sig(pv: u64, vals: &[i64]) -> Signature {
        Signature::new(Prime::new(pv).unwrap(), vals).unwrap()
    }

    #[test]
    fn fermat_partials_basis() {
        let gens = jacobian_generators(&fermat(2), 10007).unwrap();
        let gb = groebner_basis(&gens).unwrap();
        assert_eq!(gb.len(), 4);
        let mut lms: Vec<_> = gb.iter().map(|g| g.leading_monomial().unwrap().pure_power().unwrap()).collect();
        lms.sort();
        assert_eq!(lms, vec![(0, 2), (1, 2), (2, 2), (3, 2)]);
        assert!(gb.iter().all(|g| g.len() == 1));
    }

    #[test]
    fn fermat_and_klein_certificates() {
        let cert = is_smooth_mod_q(&fermat(3), 10007).unwrap().unwrap();
        assert_eq!(cert.pure_powers, vec![2; 5]);
        assert_eq!(cert.modulus, 10007);
        assert!(is_smooth_mod_q(&klein(5), 10007).unwrap().is_some());
    }

    #[test]
    fn triangle_of_lines_is_not_certified() {
        let f = CubicForm::from_terms(1, [(m(0, 0, 0), 1), (m(1, 1, 1), 1), (m(2, 2, 2), 1), (m(0, 1, 2), -3)]).unwrap();
        assert_eq!(is_smooth_mod_q(&f, 10007).unwrap(), None);
        let w = SingularWitness { point: vec![1, 1, 1] };
        assert!(w.verify(&f).unwrap());
    }

    #[test]
    fn invalid_moduli_and_zero_forms() {
        assert_eq!(is_smooth_mod_q(&fermat(2), 3), Err(Error::InvalidModulus(3)));
        assert_eq!(is_smooth_mod_q(&fermat(2), 2), Err(Error::InvalidModulus(2)));
        assert_eq!(is_smooth_mod_q(&fermat(2), 15), Err(Error::InvalidModulus(15)));
        let f = fermat(2).scaled(10007).unwrap();
        assert_eq!(is_smooth_mod_q(&f, 10007), Err(Error::ZeroModQ(10007)));
        assert_eq!(certify_smooth_over_q(&fermat(2), &[]), Err(Error::EmptyModuli));
        // vanishing at the first modulus falls through to the next one
        let cert = certify_smooth_over_q(&f, &default_moduli()).unwrap().unwrap();
        assert_eq!(cert.modulus, 30011);
    }

    #[test]
    fn over_q_examples() {
        assert!(certify_smooth_over_q(&klein(3), &default_moduli()).unwrap().is_some());
        assert!(certify_smooth_over_q(&fermat(4), &default_moduli()).unwrap().is_some());
        // a cubic in x0..x3 only, viewed in five variables
        let l3 = CubicForm::from_terms(
            3,
            [(m(0, 0, 0), 1), (m(1, 1, 1), 1), (m(2, 2, 2), 1), (m(3, 3, 3), 1), (m(0, 1, 2), 2)],
        )
        .unwrap();
        assert_eq!(certify_smooth_over_q(&l3, &default_moduli()).unwrap(), None);
        let w = singular_point_from_lemma_base(&l3).unwrap();
        assert_eq!(w.point, vec![0, 0, 0, 0, 1]);
        assert!(w.verify(&l3).unwrap());
    }

    #[test]
    fn lemma_base_witnesses() {
        // x0^2 x1 + x2^3 in P^3: both x1 and x3 have degree < 2; the lowest
        // index is returned and the other is also a witness
        let f = CubicForm::from_terms(2, [(m(0, 0, 1), 1), (m(2, 2, 2), 1)]).unwrap();
        let w = singular_point_from_lemma_base(&f).unwrap();
        assert_eq!(w.point, vec![0, 1, 0, 0]);
        assert!(w.verify(&f).unwrap());
        assert!(SingularWitness { point: vec![0, 0, 0, 1] }.verify(&f).unwrap());
        assert_eq!(singular_point_from_lemma_base(&klein(4)), None);
        let g = CubicForm::from_terms(1, [(m(0, 1, 2), 1)]).unwrap();
        assert_eq!(singular_point_from_lemma_base(&g).unwrap().point, vec![1, 0, 0]);
    }

    #[test]
    fn smooth_member_examples() {
        match find_smooth_member(&sig(5, &[0, 1, 2, 3, 4]), 0, 20, 0).unwrap() {
            MemberSearch::Found(mem) => assert!(mem.coeffs.iter().all(|&c| c == 1)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            find_smooth_member(&sig(5, &[0, 0, 1, 2, 3]), 0, 20, 0).unwrap(),
            MemberSearch::LemmaBase { variable: 4 }
        );
        let (_, s) = klein_signature(5).unwrap();
        match find_smooth_member(&s, 0, 20, 0).unwrap() {
            MemberSearch::Found(mem) => {
                let form = eigenspace_basis(&s, 0).form(&mem.coeffs).unwrap();
                assert_eq!(form, klein(5));
            }
            other => panic!("{other:?}"),
        }
        assert!(find_smooth_member(&sig(5, &[0, 1, 2, 3, 4]), 0, 0, 0).is_err());
    }

    #[test]
    fn singular_family_exhausts_trials() {
        // p = 2, sigma = (0,1,1,1,1): every invariant cubic is x0^3 + x0*Q
        // and is singular along x0 = Q = 0
        let s = sig(2, &[0, 1, 1, 1, 1]);
        assert!(lemma_base_feasible(&s, 0).is_feasible());
        assert_eq!(find_smooth_member(&s, 0, 3, 7).unwrap(), MemberSearch::TrialsExhausted { trials: 3 });
    }

    #[test]
    fn determinism() {
        let s = sig(2, &[0, 0, 0, 1, 1]);
        let a = find_smooth_member(&s, 0, 20, 99).unwrap();
        let b = find_smooth_member(&s, 0, 20, 99).unwrap();
        assert_eq!(a, b);
    }

    /// Oracle: search all F_q-points of P^{nvars-1} for a common zero of
    /// the partials.
    fn has_rational_singular_point(form: &CubicForm, q: u64) -> bool {
        let nvars = form.nvars();
        let ds = partials(form).unwrap();
        let total = q.pow(nvars as u32);
        for code in 1..total {
            let mut c = code;
            let pt: Vec<u64> = (0..nvars).map(|_| { let d = c % q; c /= q; d }).collect();
            // normalize: first nonzero coordinate equal to 1
            if pt.iter().find(|&&x| x != 0) != Some(&1) {
                continue;
            }
            if ds.iter().all(|d| d.eval_mod(&pt, q) == 0) {
                return true;
            }
        }
        false
    }

    fn arb_small_form() -> impl Strategy<Value = (CubicForm, u64)> {
        (1usize..=2, prop::sample::select(vec![5u64, 7, 11, 13])).prop_flat_map(|(n, q)| {
            let monos = crate::forms::monomials(n + 2);
            let k = monos.len();
            (prop::collection::vec(-3i64..=3, k), Just(q)).prop_map(move |(coeffs, q)| {
                (CubicForm::from_terms(n, monos.iter().copied().zip(coeffs)).unwrap(), q)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn certificates_are_sound((form, q) in arb_small_form()) {
            prop_assume!(!to_poly_mod_q(&form, q).unwrap().is_zero());
            let cert = is_smooth_mod_q(&form, q).unwrap();
            if cert.is_some() {
                prop_assert!(!has_rational_singular_point(&form, q));
            }
            if has_rational_singular_point(&form, q) {
                prop_assert!(cert.is_none());
            }
        }

        #[test]
        fn lemma_witness_zeroes_partials((form, _q) in arb_small_form()) {
            if let Some(w) = singular_point_from_lemma_base(&form) {
                prop_assert!(w.verify(&form).unwrap());
            }
        }
    }
}
