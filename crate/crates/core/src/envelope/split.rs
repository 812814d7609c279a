//! Splitting semisimple modules into simple summands.
//!
//! A module is given by the matrices of a spanning set of the acting
//! algebra (column convention). A summand is found from the centraliser
//! `E = End_A(W)`: when `dim E = 1` the module is simple (and absolutely
//! so); otherwise an element of `E` with a rational eigenvalue `μ` has
//! `ker(φ − μ)` as a proper submodule, and an invariant complement of it
//! gives the other half.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::{
    centralizer, invariant_complement, min_poly, nullspace, rat, Rat, RatMatrix, Subspace,
};

const ATTEMPTS: usize = 96;

/// Restriction of `ops` to the invariant subspace `sub`, in its coordinates.
pub(crate) fn restrict(ops: &[RatMatrix], sub: &Subspace) -> Vec<RatMatrix> {
    let k = sub.dim();
    ops.iter()
        .map(|x| {
            let mut r = RatMatrix::zeros(k, k);
            for (j, u) in sub.vectors().iter().enumerate() {
                let c = sub
                    .coords(&x.mul_vec(u))
                    .expect("subspace is not invariant");
                for (i, v) in c.into_iter().enumerate() {
                    r.set(i, j, v);
                }
            }
            r
        })
        .collect()
}

fn embed(sub: &Subspace, inner: &Subspace) -> Subspace {
    Subspace::from_vectors(
        sub.ambient_dim(),
        inner.vectors().iter().map(|c| sub.combine(c)),
    )
}

fn is_scalar(m: &RatMatrix) -> bool {
    *m == RatMatrix::identity(m.rows()).scale(m.get(0, 0))
}

fn commutes(a: &RatMatrix, b: &RatMatrix) -> bool {
    a.mul(b) == b.mul(a)
}

/// Vectors annihilated by every operator.
pub(crate) fn common_kernel(dim: usize, ops: &[RatMatrix]) -> Subspace {
    let rows: Vec<Vec<Rat>> = ops.iter().flat_map(|x| x.row_vecs()).collect();
    Subspace::from_vectors(dim, nullspace(rows, dim))
}

/// Span of the images of all operators.
pub(crate) fn joint_image(dim: usize, ops: &[RatMatrix]) -> Subspace {
    Subspace::from_vectors(
        dim,
        ops.iter().flat_map(|x| (0..dim).map(move |j| x.column(j))),
    )
}

/// Proper nonzero submodule of a module with centraliser `ends` (dim > 1).
fn proper_submodule(dim: usize, ends: &[RatMatrix], rng: &mut ChaCha8Rng) -> Result<Subspace> {
    let commutative = ends
        .iter()
        .enumerate()
        .all(|(i, a)| ends[i + 1..].iter().all(|b| commutes(a, b)));
    let mut tried_irreducible = false;
    for attempt in 0..ATTEMPTS {
        let phi = if attempt < ends.len() {
            ends[attempt].clone()
        } else {
            ends.iter().fold(RatMatrix::zeros(dim, dim), |acc, e| {
                acc.add(&e.scale(&rat(rng.gen_range(-4..=4))))
            })
        };
        if is_scalar(&phi) {
            continue;
        }
        let roots = min_poly(&phi).rational_roots();
        match roots.first() {
            Some(mu) => {
                let shifted = phi.sub(&RatMatrix::identity(dim).scale(mu));
                return Ok(Subspace::from_vectors(
                    dim,
                    nullspace(shifted.row_vecs(), dim),
                ));
            }
            None => {
                // In a commutative split centraliser every element has a
                // rational eigenvalue.
                if commutative {
                    return Err(Error::NonSplitInput(format!(
                        "commutative endomorphism algebra of dimension {} contains an element \
                         without rational eigenvalues",
                        ends.len()
                    )));
                }
                tried_irreducible = true;
            }
        }
    }
    Err(Error::NonSplitInput(format!(
        "no endomorphism with a rational eigenvalue found in {ATTEMPTS} attempts \
         (endomorphism algebra of dimension {}{})",
        ends.len(),
        if tried_irreducible {
            ", only irreducible minimal polynomials seen"
        } else {
            ""
        }
    )))
}

/// Decomposes the invariant subspace `w` of `Q^dim`, on which the algebra
/// spanned by `ops` acts semisimply with `ops·w = w`, into simple
/// submodules. The summands are returned in a deterministic order for a
/// given generator state.
pub(crate) fn decompose_semisimple(
    w: &Subspace,
    ops: &[RatMatrix],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Subspace>> {
    if w.is_zero() {
        return Ok(Vec::new());
    }
    let local = restrict(ops, w);
    let k = w.dim();
    let ends = centralizer(k, &local);
    if ends.len() == 1 {
        return Ok(vec![w.clone()]);
    }
    if ends.is_empty() {
        return Err(Error::Internal("empty centraliser".into()));
    }
    let u = proper_submodule(k, &ends, rng)?;
    let (complement, _) = invariant_complement(&u, &local).ok_or_else(|| {
        Error::Internal("module is not semisimple: no invariant complement exists".into())
    })?;
    let mut out = Vec::new();
    for part in [u, complement] {
        let part = embed(w, &part);
        out.extend(decompose_semisimple(&part, ops, rng)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn unit(n: usize, i: usize, j: usize) -> RatMatrix {
        RatMatrix::unit(n, i, j)
    }

    /// Left multiplication by the matrix units of M_2 on M_2 (4-dim).
    fn left_regular_m2() -> Vec<RatMatrix> {
        let basis: Vec<RatMatrix> = (0..4).map(|k| unit(2, k / 2, k % 2)).collect();
        basis
            .iter()
            .map(|a| {
                let mut x = RatMatrix::zeros(4, 4);
                for (j, b) in basis.iter().enumerate() {
                    for (i, v) in a.mul(b).entries().iter().enumerate() {
                        x.set(i, j, v.clone());
                    }
                }
                x
            })
            .collect()
    }

    #[test]
    fn m2_regular_module_splits_into_two_columns() {
        let ops = left_regular_m2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let parts = decompose_semisimple(&Subspace::full(4), &ops, &mut rng).unwrap();
        assert_eq!(
            parts.iter().map(Subspace::dim).collect::<Vec<_>>(),
            vec![2, 2]
        );
        assert_eq!(parts[0].sum(&parts[1]), Subspace::full(4));
        for p in &parts {
            for x in &ops {
                assert!(p.vectors().iter().all(|v| p.contains(&x.mul_vec(v))));
            }
        }
    }

    #[test]
    fn gaussian_integers_are_rejected() {
        // Q(i) acting on Q^2 by rotations: the centraliser is a quadratic field.
        let ops = vec![
            RatMatrix::identity(2),
            RatMatrix::from_i64(&[&[0, -1], &[1, 0]]),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = decompose_semisimple(&Subspace::full(2), &ops, &mut rng).unwrap_err();
        assert!(matches!(err, Error::NonSplitInput(_)));
    }

    #[test]
    fn kernels_and_images() {
        let ops = vec![unit(3, 0, 1)];
        assert_eq!(common_kernel(3, &ops).dim(), 2);
        assert_eq!(joint_image(3, &ops).dim(), 1);
    }
}
