//! The exponent `d(ρ)`: the largest `dim ρ(L) − dim(ρ(L) ∩ Ann(I_1/J_1) ∩ …
//! ∩ Ann(I_r/J_r))` over sequences of chain factors whose `G`-invariant
//! complements can be multiplied to a nonzero product through elements of
//! `A ∪ {1}`.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::{Envelope, FactorKind};
use crate::error::{Error, Result};
use crate::exactalg::{self, Rat, RatMatrix, Subspace};
use crate::liestruct::{LeviData, LinearRep};

/// Default bound on the number of search states.
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// One factor `B_k / B_{k+1}` with a `G`-invariant complement `T_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorChoice {
    pub k: usize,
    pub kind: FactorKind,
    pub complement: Subspace,
    /// `ρ(L) ∩ Ann(B_k / B_{k+1})`.
    pub ann: Subspace,
}

/// A `G`-invariant complement of `B_{k+1}` in `B_k` together with the
/// `G`-equivariant maps `B_k → B_{k+1}` vanishing on `B_{k+1}` (in
/// `B_{k+1}`-coordinates), which parametrise all other invariant complements.
#[derive(Clone, Debug)]
pub struct Complement {
    pub canonical: Subspace,
    homogeneous: Vec<RatMatrix>,
    upper: Subspace,
    lower: Subspace,
}

impl Complement {
    /// True when the invariant complement is not unique.
    pub fn has_alternatives(&self) -> bool {
        !self.homogeneous.is_empty()
    }

    /// The complement `{c − H(c) : c ∈ canonical}` for `H = Σ r_i H_i`.
    pub fn alternative(&self, coeffs: &[Rat]) -> Subspace {
        let m = self.upper.dim();
        let k = self.lower.dim();
        let h = self
            .homogeneous
            .iter()
            .zip(coeffs)
            .fold(RatMatrix::zeros(k, m), |acc, (hm, c)| acc.add(&hm.scale(c)));
        let lower_local = Subspace::from_vectors(
            m,
            self.lower
                .vectors()
                .iter()
                .map(|v| self.upper.coords(v).expect("lower ⊆ upper")),
        );
        Subspace::from_vectors(
            self.upper.ambient_dim(),
            self.canonical.vectors().iter().map(|c| {
                let local = self.upper.coords(c).expect("complement ⊆ upper");
                let hc = h.mul_vec(&local);
                let shift = lower_local.combine(&hc);
                let diff: Vec<Rat> = local.iter().zip(&shift).map(|(a, b)| a - b).collect();
                self.upper.combine(&diff)
            }),
        )
    }
}

/// `G`-invariant complement of `B_{k+1}` in `B_k` under left multiplication,
/// taken from the canonical solution of the projection equations.
pub fn invariant_complement(env: &Envelope, levi: &LeviData, k: usize) -> Result<Complement> {
    if k >= env.theta() {
        return Err(Error::IndexOutOfRange {
            index: k,
            limit: env.theta(),
        });
    }
    let n = env.dim_v();
    let upper = env.chain()[k].clone();
    let lower = env.chain()[k + 1].clone();
    let ops: Vec<RatMatrix> = levi
        .g
        .basis_matrices(n)
        .iter()
        .map(|g| {
            let m = upper.dim();
            let mut x = RatMatrix::zeros(m, m);
            for (j, b) in upper.basis_matrices(n).iter().enumerate() {
                let c = upper
                    .coords(g.mul(b).entries())
                    .expect("chain members are left ideals");
                for (i, v) in c.into_iter().enumerate() {
                    x.set(i, j, v);
                }
            }
            x
        })
        .collect();
    let lower_local = Subspace::from_vectors(
        upper.dim(),
        lower
            .vectors()
            .iter()
            .map(|v| upper.coords(v).expect("lower ⊆ upper")),
    );
    let (local, homogeneous) =
        exactalg::invariant_complement(&lower_local, &ops).ok_or_else(|| {
            Error::Internal(format!("no G-invariant complement of B_{} in B_{k}", k + 1))
        })?;
    let canonical = Subspace::from_vectors(n * n, local.vectors().iter().map(|c| upper.combine(c)));
    Ok(Complement {
        canonical,
        homogeneous,
        upper,
        lower,
    })
}

/// `Σ_{q ∈ basis(A) ∪ {1}} span(W·q·T)`.
fn extend(n: usize, w: &Subspace, qs: &[RatMatrix], t: &[RatMatrix]) -> Subspace {
    let mut vectors = Vec::new();
    for x in w.basis_matrices(n) {
        for q in qs {
            let xq = x.mul(q);
            if xq.is_zero() {
                continue;
            }
            for y in t {
                vectors.push(xq.mul(y).into_entries());
            }
        }
    }
    Subspace::from_vectors(n * n, vectors)
}

fn multipliers(env: &Envelope) -> Vec<RatMatrix> {
    let mut qs = env.basis_matrices();
    qs.push(RatMatrix::identity(env.dim_v()));
    qs
}

fn reachable_with(env: &Envelope, complements: &[&Subspace]) -> bool {
    let n = env.dim_v();
    let qs = multipliers(env);
    let Some((first, rest)) = complements.split_first() else {
        return false;
    };
    let mut w = (*first).clone();
    for t in rest {
        if w.is_zero() {
            return false;
        }
        w = extend(n, &w, &qs, &t.basis_matrices(n));
    }
    !w.is_zero()
}

/// True when `T_1 q_1 T_2 ⋯ q_{r-1} T_r ≠ 0` for some `q_i ∈ A ∪ {1}`.
pub fn condition2_reachable(env: &Envelope, choices: &[FactorChoice]) -> bool {
    let complements: Vec<&Subspace> = choices.iter().map(|c| &c.complement).collect();
    reachable_with(env, &complements)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentResult {
    pub d: usize,
    pub witness: Vec<FactorChoice>,
    pub final_ann: Subspace,
    pub visited: usize,
    /// Set when the state cap stopped the search, making `d` a lower bound.
    pub lower_bound: bool,
    /// Disagreements found when re-testing the witness with other
    /// invariant complements.
    pub warnings: Vec<String>,
}

impl ExponentResult {
    pub fn witness_indices(&self) -> Vec<usize> {
        self.witness.iter().map(|c| c.k).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentOptions {
    pub state_cap: usize,
    /// Seed for the alternative complements used to re-test the witness.
    pub seed: u64,
}

impl Default for ExponentOptions {
    fn default() -> Self {
        ExponentOptions {
            state_cap: DEFAULT_STATE_CAP,
            seed: 0,
        }
    }
}

/// Breadth-first search over states `(W, N)` with `W` the span of the
/// admissible products so far and `N` the intersected annihilators.
pub fn pi_exponent(
    rep: &LinearRep,
    env: &Envelope,
    levi: &LeviData,
    opts: &ExponentOptions,
) -> Result<ExponentResult> {
    let n = env.dim_v();
    let dim_l = rep.dim_l();
    let theta = env.theta();
    let mut complements = Vec::with_capacity(theta);
    let mut choices = Vec::with_capacity(theta);
    for k in 0..theta {
        let c = invariant_complement(env, levi, k)?;
        choices.push(FactorChoice {
            k,
            kind: env.factor_kinds()[k],
            complement: c.canonical.clone(),
            ann: env.annihilator_in_rho(rep, k)?,
        });
        complements.push(c);
    }
    let t_mats: Vec<Vec<RatMatrix>> = choices
        .iter()
        .map(|c| c.complement.basis_matrices(n))
        .collect();
    let qs = multipliers(env);

    let mut seen: HashSet<(Subspace, Subspace)> = HashSet::new();
    let mut queue: VecDeque<(Subspace, Subspace, Vec<usize>)> = VecDeque::new();
    let mut best: Option<(usize, Vec<usize>, Subspace)> = None;
    let mut lower_bound = false;
    let consider =
        |n_sub: &Subspace, path: &Vec<usize>, best: &mut Option<(usize, Vec<usize>, Subspace)>| {
            let value = dim_l - n_sub.dim();
            if best.as_ref().is_none_or(|b| value > b.0) {
                *best = Some((value, path.clone(), n_sub.clone()));
            }
        };
    for (k, c) in choices.iter().enumerate() {
        let state = (c.complement.clone(), c.ann.clone());
        if seen.insert(state.clone()) {
            consider(&state.1, &vec![k], &mut best);
            queue.push_back((state.0, state.1, vec![k]));
        }
    }
    while let Some((w, ann, path)) = queue.pop_front() {
        if best.as_ref().is_some_and(|b| b.0 == dim_l) {
            break;
        }
        for (k, choice) in choices.iter().enumerate() {
            let w2 = extend(n, &w, &qs, &t_mats[k]);
            if w2.is_zero() {
                continue;
            }
            let ann2 = ann.intersect(&choice.ann);
            let state = (w2, ann2);
            if seen.contains(&state) {
                continue;
            }
            if seen.len() >= opts.state_cap {
                lower_bound = true;
                break;
            }
            seen.insert(state.clone());
            let mut p = path.clone();
            p.push(k);
            consider(&state.1, &p, &mut best);
            queue.push_back((state.0, state.1, p));
        }
        if lower_bound {
            break;
        }
    }

    let Some((d, path, final_ann)) = best else {
        return Ok(ExponentResult {
            d: 0,
            witness: Vec::new(),
            final_ann: rep.span(),
            visited: seen.len(),
            lower_bound,
            warnings: Vec::new(),
        });
    };
    let witness: Vec<FactorChoice> = path.iter().map(|&k| choices[k].clone()).collect();

    let mut warnings = Vec::new();
    if path.iter().any(|&k| complements[k].has_alternatives()) {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xc0_4e11);
        for trial in 0..3 {
            let alternatives: Vec<Subspace> = path
                .iter()
                .map(|&k| {
                    let c = &complements[k];
                    let coeffs: Vec<Rat> = (0..c.homogeneous.len())
                        .map(|_| Rat::from_integer(rng.gen_range(-3i64..=3).into()))
                        .collect();
                    c.alternative(&coeffs)
                })
                .collect();
            let refs: Vec<&Subspace> = alternatives.iter().collect();
            if !reachable_with(env, &refs) {
                warnings.push(format!(
                    "witness {path:?} fails Condition 2 with alternative complement set {trial}"
                ));
            }
        }
    }

    Ok(ExponentResult {
        d,
        witness,
        final_ann,
        visited: seen.len(),
        lower_bound,
        warnings,
    })
}
