//! Classification of prime-order diagonal automorphisms of smooth cubics.
//!
//! For each prime `p` and dimension `n` the pipeline enumerates signature
//! classes, pairs each with every eigenweight, drops pairs whose eigenspace
//! is singular at a coordinate point, and searches the rest for a member
//! certified smooth. Each surviving pair is a family; its dimension is the
//! eigenspace dimension minus that of the normalizer of the cyclic group.

mod fermat;
mod labels;

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::admissibility::{admissible_primes, is_admissible, Prime};
use crate::error::{Error, Result};
use crate::forms::{eigenspace_basis, EigenspaceBasis};
use crate::signatures::{canonical_pair, enumerate_orbits, search_space, OrbitStrategy, Signature, DEFAULT_BUDGET};
use crate::smoothness::{default_moduli, find_smooth_member_with, MemberSearch, SmoothMember};

pub use fermat::{fermat_automorphism_classes, fermat_group_representatives, fermat_membership, FermatGroupElement};
pub use labels::{family_label, LabelledFamily, LABELLED_FAMILIES};

/// How signature classes are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrategyChoice {
    /// Exhaustive while `p^(n+2)` fits in the budget, chain-pruned beyond.
    #[default]
    Auto,
    Exhaustive,
    ChainPruned,
}

impl StrategyChoice {
    /// The concrete strategy for `(p, n)`.
    pub fn resolve(self, p: Prime, n: usize, budget: u128) -> OrbitStrategy {
        match self {
            StrategyChoice::Exhaustive => OrbitStrategy::Exhaustive { budget },
            StrategyChoice::ChainPruned => OrbitStrategy::ChainPruned,
            StrategyChoice::Auto if search_space(p, n) > budget && p.get() > 3 => OrbitStrategy::ChainPruned,
            StrategyChoice::Auto => OrbitStrategy::Exhaustive { budget },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub strategy: StrategyChoice,
    /// Coefficient draws per candidate, the all-ones draw included.
    pub trials: usize,
    pub seed: u64,
    pub moduli: Vec<Prime>,
    pub budget: u128,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            strategy: StrategyChoice::Auto,
            trials: 20,
            seed: 0,
            moduli: default_moduli(),
            budget: DEFAULT_BUDGET,
        }
    }
}

/// One (signature class, eigenweight) pair, accepted or rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRecord {
    pub p: Prime,
    pub n: usize,
    /// Canonical representative; together with `weight` it is
    /// `canonical_pair`-minimal.
    pub sigma: Signature,
    /// Always 0 unless `p = 3`.
    pub weight: u64,
    pub basis: EigenspaceBasis,
    pub dim_e: usize,
    pub dim_norm: usize,
    pub d: i64,
    /// Present iff the family is accepted.
    pub witness: Option<SmoothMember>,
    pub rejected_reason: Option<String>,
    pub label: Option<&'static str>,
}

impl FamilyRecord {
    pub fn is_accepted(&self) -> bool {
        self.witness.is_some()
    }
}

impl Serialize for FamilyRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let basis: Vec<[usize; 3]> = self.basis.monomials.iter().map(|m| m.indices()).collect();
        let mut s = serializer.serialize_struct("FamilyRecord", 10)?;
        s.serialize_field("p", &self.p)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("sigma", &self.sigma)?;
        s.serialize_field("weight", &self.weight)?;
        s.serialize_field("dim_E", &self.dim_e)?;
        s.serialize_field("dim_norm", &self.dim_norm)?;
        s.serialize_field("D", &self.d)?;
        s.serialize_field("basis", &basis)?;
        s.serialize_field("witness", &self.witness)?;
        s.serialize_field("rejected_reason", &self.rejected_reason)?;
        s.end()
    }
}

/// Result of classifying one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub p: Prime,
    pub n: usize,
    pub accepted: Vec<FamilyRecord>,
    pub rejected: Vec<FamilyRecord>,
    /// False when the enumeration was cut short.
    pub complete: bool,
    pub note: Option<String>,
}

impl Classification {
    fn empty(p: Prime, n: usize, complete: bool, note: String) -> Self {
        Classification { p, n, accepted: Vec::new(), rejected: Vec::new(), complete, note: Some(note) }
    }
}

/// `sum_j n_j^2`, where `n_j` counts the entries of `sigma` equal to `j`.
pub fn normalizer_dim(sigma: &Signature) -> usize {
    sigma.multiplicities().values().map(|&c| c * c).sum()
}

/// `dim E_{sigma,a} - normalizer_dim(sigma)`.
pub fn family_dimension(sigma: &Signature, a: u64) -> i64 {
    eigenspace_basis(sigma, a).dim() as i64 - normalizer_dim(sigma) as i64
}

/// 64-bit FNV-1a, stable across platforms and releases.
fn fnv1a(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

fn candidate_seed(seed: u64, sigma: &Signature, weight: u64) -> u64 {
    let words = std::iter::once(sigma.p().get()).chain(sigma.values().iter().copied()).chain([weight]);
    seed.wrapping_add(fnv1a(words))
}

/// Every canonical `(signature, weight)` pair over the given classes.
fn candidate_pairs(classes: &[Signature]) -> Vec<(Signature, u64)> {
    let mut set: BTreeSet<(Signature, u64)> = BTreeSet::new();
    for sigma in classes {
        let pv = sigma.p().get();
        for w in 0..pv {
            set.insert(canonical_pair(sigma, w));
        }
    }
    set.into_iter().collect()
}

fn examine(n: usize, sigma: Signature, weight: u64, config: &ClassifyConfig) -> Result<FamilyRecord> {
    let basis = eigenspace_basis(&sigma, weight);
    let dim_e = basis.dim();
    let dim_norm = normalizer_dim(&sigma);
    let seed = candidate_seed(config.seed, &sigma, weight);
    let search = find_smooth_member_with(&sigma, weight, config.trials, seed, &config.moduli)?;
    let (witness, rejected_reason) = match search {
        MemberSearch::Found(member) => (Some(member), None),
        MemberSearch::LemmaBase { variable } => {
            (None, Some(format!("lemma_base: every member is singular at the coordinate point of x_{variable}")))
        }
        MemberSearch::TrialsExhausted { trials } => (None, Some(format!("no smooth member after {trials} trials"))),
    };
    let label = family_label(n, &sigma, weight);
    Ok(FamilyRecord {
        p: sigma.p(),
        n,
        sigma,
        weight,
        basis,
        dim_e,
        dim_norm,
        d: dim_e as i64 - dim_norm as i64,
        witness,
        rejected_reason,
        label,
    })
}

/// Families with an automorphism of order `p` in dimension `n`.
pub fn classify(n: usize, p: Prime, config: &ClassifyConfig) -> Result<Classification> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    if config.trials == 0 {
        return Err(Error::InvalidAction("trials must be at least 1".into()));
    }
    if config.moduli.is_empty() {
        return Err(Error::EmptyModuli);
    }
    if !is_admissible(p, n)? {
        return Ok(Classification::empty(p, n, true, format!("{p} not admissible in dimension {n}")));
    }
    let strategy = config.strategy.resolve(p, n, config.budget);
    let classes = match enumerate_orbits(p, n, strategy) {
        Ok(c) => c,
        Err(e @ Error::BudgetExceeded { .. }) => return Ok(Classification::empty(p, n, false, e.to_string())),
        Err(e) => return Err(e),
    };
    let mut records: Vec<FamilyRecord> = candidate_pairs(&classes)
        .into_par_iter()
        .map(|(sigma, weight)| examine(n, sigma, weight, config))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| (&a.sigma, a.weight).cmp(&(&b.sigma, b.weight)));
    let (accepted, rejected) = records.into_iter().partition(FamilyRecord::is_accepted);
    let note = matches!(strategy, OrbitStrategy::ChainPruned)
        .then(|| "chain_pruned: only signatures compatible with an invariant smooth member were enumerated".to_string());
    Ok(Classification { p, n, accepted, rejected, complete: true, note })
}

/// [`classify`] over every admissible prime, in increasing order.
pub fn classify_all(n: usize, config: &ClassifyConfig) -> Result<Vec<Classification>> {
    admissible_primes(n)?.into_iter().map(|p| classify(n, p, config)).collect()
}
