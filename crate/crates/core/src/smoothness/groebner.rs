//! Buchberger's algorithm over `F_q` in degrevlex, with the coprime and
//! chain criteria and the normal selection strategy.

use std::collections::{BTreeSet, HashSet};

use super::poly::{sub_scaled_terms, Mono, PolyModQ};
use crate::admissibility::{mul_mod, pow_mod};
use crate::error::{Error, Result};

/// Fully reduces `f` modulo `basis`.
pub fn reduce(f: &PolyModQ, basis: &[PolyModQ]) -> PolyModQ {
    let q = f.modulus();
    let mut work: Vec<(Mono, u64)> = f.terms().to_vec();
    let mut pos = 0;
    let mut remainder: Vec<(Mono, u64)> = Vec::new();
    while pos < work.len() {
        let (lm, lc) = work[pos];
        match basis.iter().find(|g| g.leading_monomial().is_some_and(|gm| gm.divides(&lm))) {
            Some(g) => {
                let gm = g.leading_monomial().expect("nonzero");
                let factor = mul_mod(lc, pow_mod(g.leading_coefficient().unwrap(), q - 2, q), q);
                work = sub_scaled_terms(&work[pos..], factor, &gm.quotient_of(&lm), g, q);
                pos = 0;
            }
            None => {
                remainder.push((lm, lc));
                pos += 1;
            }
        }
    }
    PolyModQ::from_terms_unchecked(f, remainder)
}

impl PolyModQ {
    /// Reuses modulus and variable count from `like`; `terms` must already
    /// be strictly decreasing with nonzero coefficients.
    pub(crate) fn from_terms_unchecked(like: &PolyModQ, terms: Vec<(Mono, u64)>) -> PolyModQ {
        let mut out = PolyModQ::zero(like.modulus(), like.nvars());
        out.set_terms(terms);
        out
    }
}

fn s_polynomial(f: &PolyModQ, g: &PolyModQ) -> PolyModQ {
    let fm = f.leading_monomial().expect("nonzero");
    let gm = g.leading_monomial().expect("nonzero");
    let lcm = fm.lcm(gm);
    // both monic
    let lhs = f.mul_term(1, &fm.quotient_of(&lcm));
    lhs.sub_scaled(1, &gm.quotient_of(&lcm), g)
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and sorted
/// by increasing leading monomial. Deterministic for a fixed input order.
pub fn groebner_basis(gens: &[PolyModQ]) -> Result<Vec<PolyModQ>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let (q, nvars) = (first.modulus(), first.nvars());
    for g in gens {
        if g.modulus() != q {
            return Err(Error::ModulusMismatch(q, g.modulus()));
        }
        if g.nvars() != nvars {
            return Err(Error::LengthMismatch { expected: nvars, got: g.nvars() });
        }
    }

    let mut basis: Vec<PolyModQ> = Vec::new();
    // (lcm, j, i) with i < j: ordered by lcm first (normal strategy)
    let mut queue: BTreeSet<(Mono, usize, usize)> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();

    let push = |basis: &mut Vec<PolyModQ>,
                    queue: &mut BTreeSet<(Mono, usize, usize)>,
                    pending: &mut HashSet<(usize, usize)>,
                    mut h: PolyModQ| {
        h.make_monic();
        let k = basis.len();
        let hm = *h.leading_monomial().expect("nonzero");
        for (i, g) in basis.iter().enumerate() {
            let lcm = g.leading_monomial().unwrap().lcm(&hm);
            queue.insert((lcm, k, i));
            pending.insert((i, k));
        }
        basis.push(h);
    };

    for g in gens {
        let r = reduce(g, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut queue, &mut pending, r);
        }
    }

    while let Some((lcm, j, i)) = queue.pop_first() {
        pending.remove(&(i, j));
        let (mi, mj) = (*basis[i].leading_monomial().unwrap(), *basis[j].leading_monomial().unwrap());
        if mi.coprime(&mj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().unwrap().divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce(&s, &basis);
        if !r.is_zero() {
            push(&mut basis, &mut queue, &mut pending, r);
        }
    }

    // minimalize: keep the first element for each leading monomial not
    // divisible by another's
    let lms: Vec<Mono> = basis.iter().map(|g| *g.leading_monomial().unwrap()).collect();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| {
            !(0..basis.len()).any(|k| k != i && lms[k].divides(&lms[i]) && (lms[k] != lms[i] || k < i))
        })
        .collect();
    let mut minimal: Vec<PolyModQ> = keep.iter().map(|&i| basis[i].clone()).collect();
    minimal.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));

    // tail-reduce each element by the others
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<PolyModQ> =
            minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, g)| g.clone()).collect();
        let g = &minimal[i];
        let lead = g.terms()[0];
        let tail = PolyModQ::from_terms_unchecked(g, g.terms()[1..].to_vec());
        let tail = reduce(&tail, &others);
        let mut terms = vec![lead];
        terms.extend_from_slice(tail.terms());
        reduced.push(PolyModQ::from_terms_unchecked(g, terms));
    }
    Ok(reduced)
}
