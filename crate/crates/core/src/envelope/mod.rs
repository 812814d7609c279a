//! The associative envelope `A ⊆ End(V)` of a linear Lie algebra, its
//! Jacobson radical, and a fixed composition chain of left ideals.

pub(crate) mod split;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{nullspace, QuotientFrame, Rat, RatMatrix, Subspace};
use crate::liestruct::LinearRep;

/// How a composition factor `B_k / B_{k+1}` looks as an `A`-module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Simple module with nonzero action.
    Irreducible,
    /// One-dimensional with zero action.
    OneDimensional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    dim_v: usize,
    basis: Subspace,
    radical: Subspace,
    p: usize,
    chain: Vec<Subspace>,
    factor_kinds: Vec<FactorKind>,
    seed: u64,
}

pub(crate) fn as_matrix(dim_v: usize, v: &[Rat]) -> RatMatrix {
    RatMatrix::from_flat(dim_v, dim_v, v.to_vec()).expect("square")
}

/// `span{x·y : x ∈ left, y ∈ right}` inside `End(V)`.
pub fn span_products(dim_v: usize, left: &Subspace, right: &Subspace) -> Subspace {
    let rights: Vec<RatMatrix> = right.basis_matrices(dim_v);
    Subspace::from_vectors(
        dim_v * dim_v,
        left.basis_matrices(dim_v)
            .iter()
            .flat_map(|x| rights.iter().map(move |y| x.mul(y).into_entries()))
            .collect::<Vec<_>>(),
    )
}

/// Smallest subspace of `End(V)` closed under products that contains the
/// given matrices (no unit is adjoined).
pub fn generate_algebra(dim_v: usize, generators: &Subspace) -> Subspace {
    let gens = generators.basis_matrices(dim_v);
    let mut current = generators.clone();
    loop {
        let products = current
            .basis_matrices(dim_v)
            .iter()
            .flat_map(|y| gens.iter().map(move |g| g.mul(y).into_entries()))
            .collect::<Vec<_>>();
        let next = current.sum(&Subspace::from_vectors(dim_v * dim_v, products));
        if next.dim() == current.dim() {
            return current;
        }
        current = next;
    }
}

/// Associative subalgebra of `End(V)` generated by `ρ(L)`.
pub fn generate_envelope(rep: &LinearRep) -> Subspace {
    generate_algebra(rep.dim_v(), &rep.span())
}

/// Radical of a matrix algebra via the trace form, and its nilpotency index.
pub fn jacobson_radical(dim_v: usize, algebra: &Subspace) -> (Subspace, usize) {
    let mats = algebra.basis_matrices(dim_v);
    let rows: Vec<Vec<Rat>> = mats
        .iter()
        .map(|y| mats.iter().map(|x| x.trace_product(y)).collect())
        .collect();
    let coeffs = nullspace(rows, mats.len());
    let radical = Subspace::from_vectors(
        dim_v * dim_v,
        coeffs
            .iter()
            .map(|c| algebra.combine(c))
            .collect::<Vec<_>>(),
    );
    let mut p = 1;
    let mut power = radical.clone();
    while !power.is_zero() {
        power = span_products(dim_v, &power, &radical);
        p += 1;
    }
    (radical, p)
}

/// Strictly decreasing powers `A ⊋ J ⊋ J² ⊋ … ⊋ 0`.
fn radical_filtration(dim_v: usize, algebra: &Subspace, radical: &Subspace) -> Vec<Subspace> {
    let mut layers = vec![algebra.clone()];
    let mut power = radical.clone();
    loop {
        if power.dim() < layers.last().unwrap().dim() {
            layers.push(power.clone());
        }
        if power.is_zero() {
            return layers;
        }
        power = span_products(dim_v, &power, radical);
    }
}

/// A maximal chain of left ideals refining the radical filtration, with the
/// kind of each factor. The semisimple layers are split with a generator
/// seeded from `seed`.
pub fn composition_chain(
    dim_v: usize,
    algebra: &Subspace,
    radical: &Subspace,
    seed: u64,
) -> Result<(Vec<Subspace>, Vec<FactorKind>)> {
    let mats = algebra.basis_matrices(dim_v);
    let mut chain = vec![algebra.clone()];
    let mut kinds = Vec::new();
    let layers = radical_filtration(dim_v, algebra, radical);
    for (index, pair) in layers.windows(2).enumerate() {
        let (upper, lower) = (&pair[0], &pair[1]);
        let frame = QuotientFrame::new(upper, lower);
        let m = frame.dim();
        let ops: Vec<RatMatrix> = mats
            .iter()
            .map(|a| frame.induced(|v| a.mul(&as_matrix(dim_v, v)).into_entries()))
            .collect();
        let trivial = split::common_kernel(m, &ops);
        let active = split::joint_image(m, &ops);
        if trivial.dim() + active.dim() != m || !trivial.intersect(&active).is_zero() {
            return Err(Error::Internal(format!(
                "radical layer {index} is not semisimple"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((index as u64 + 1) << 32));
        let simple = split::decompose_semisimple(&active, &ops, &mut rng).map_err(|e| match e {
            Error::NonSplitInput(msg) => {
                Error::NonSplitInput(format!("radical layer {index}: {msg}"))
            }
            other => other,
        })?;
        let mut pieces: Vec<(Subspace, FactorKind)> = simple
            .into_iter()
            .map(|s| (s, FactorKind::Irreducible))
            .collect();
        pieces.extend(trivial.vectors().iter().map(|v| {
            (
                Subspace::from_vectors(m, [v.clone()]),
                FactorKind::OneDimensional,
            )
        }));
        for i in 0..pieces.len() {
            let rest = pieces[i + 1..]
                .iter()
                .fold(Subspace::zero(m), |acc, (s, _)| acc.sum(s));
            chain.push(frame.preimage(&rest));
            kinds.push(pieces[i].1);
        }
    }
    Ok((chain, kinds))
}

impl Envelope {
    /// Builds the envelope of `rep` with radical, nilpotency index and a
    /// composition chain whose semisimple layers are split using `seed`.
    pub fn build(rep: &LinearRep, seed: u64) -> Result<Envelope> {
        let dim_v = rep.dim_v();
        let basis = generate_envelope(rep);
        let (radical, p) = jacobson_radical(dim_v, &basis);
        let (chain, factor_kinds) = composition_chain(dim_v, &basis, &radical, seed)?;
        Ok(Envelope {
            dim_v,
            basis,
            radical,
            p,
            chain,
            factor_kinds,
            seed,
        })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_a(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &Subspace {
        &self.basis
    }

    pub fn basis_matrices(&self) -> Vec<RatMatrix> {
        self.basis.basis_matrices(self.dim_v)
    }

    pub fn radical(&self) -> &Subspace {
        &self.radical
    }

    /// Least `p` with `J(A)^p = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.p
    }

    /// `B_0 = A ⊋ B_1 ⊋ … ⊋ B_θ = 0`.
    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn theta(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn factor_kinds(&self) -> &[FactorKind] {
        &self.factor_kinds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Dimensions of the factors `B_k / B_{k+1}`.
    pub fn factor_dims(&self) -> Vec<usize> {
        self.chain
            .windows(2)
            .map(|w| w[0].dim() - w[1].dim())
            .collect()
    }

    pub fn contains(&self, a: &RatMatrix) -> bool {
        self.basis.contains_matrix(a)
    }

    /// Largest `k` with `a ∈ B_k`; the zero matrix has height `θ`.
    pub fn height(&self, a: &RatMatrix) -> Result<usize> {
        if a.rows() != self.dim_v || a.cols() != self.dim_v {
            return Err(Error::DimensionMismatch(
                "matrix size differs from dim V".into(),
            ));
        }
        if !self.contains(a) {
            return Err(Error::NotInEnvelope);
        }
        Ok((0..=self.theta())
            .rev()
            .find(|&k| self.chain[k].contains_matrix(a))
            .unwrap_or(0))
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.theta() {
            return Err(Error::IndexOutOfRange {
                index: k,
                limit: self.theta(),
            });
        }
        Ok(())
    }

    /// `{x ∈ ρ(L) : x·B_k ⊆ B_{k+1}}`, the annihilator in `ρ(L)` of factor `k`.
    pub fn annihilator_in_rho(&self, rep: &LinearRep, k: usize) -> Result<Subspace> {
        self.check_index(k)?;
        let n = self.dim_v;
        let functionals = self.chain[k + 1].orthogonal();
        let lbasis = rep.basis();
        let upper = self.chain[k].basis_matrices(n);
        let mut rows = Vec::new();
        for f in functionals.vectors() {
            for b in &upper {
                let products: Vec<RatMatrix> = lbasis.iter().map(|l| l.mul(b)).collect();
                rows.push(
                    products
                        .iter()
                        .map(|p| {
                            p.entries()
                                .iter()
                                .zip(f)
                                .fold(Rat::default(), |acc, (x, y)| acc + x * y)
                        })
                        .collect::<Vec<_>>(),
                );
            }
        }
        let coeffs = nullspace(rows, lbasis.len());
        Ok(Subspace::from_vectors(
            n * n,
            coeffs
                .iter()
                .map(|c| {
                    lbasis
                        .iter()
                        .zip(c)
                        .fold(RatMatrix::zeros(n, n), |acc, (l, x)| acc.add(&l.scale(x)))
                        .into_entries()
                })
                .collect::<Vec<_>>(),
        ))
    }

    /// Matrices of left multiplication by each of `ops` on factor `k`, in
    /// quotient coordinates.
    pub fn factor_action(&self, k: usize, ops: &[RatMatrix]) -> Result<Vec<RatMatrix>> {
        self.check_index(k)?;
        let frame = QuotientFrame::new(&self.chain[k], &self.chain[k + 1]);
        let n = self.dim_v;
        Ok(ops
            .iter()
            .map(|a| frame.induced(|v| a.mul(&as_matrix(n, v)).into_entries()))
            .collect())
    }
}
