//! Linear Lie algebras `ρ(L) ⊆ gl(V)`: bracket closure, the Levi-type
//! decomposition `ρ(L) = G ⊕ R`, `R = S ⊕ (ρ(L) ∩ J(A))`, the splitting
//! of elements of `S` into nilpotent and diagonalizable parts, and exact
//! checks of the structure lemmas on concrete inputs.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envelope::{as_matrix, generate_algebra, jacobson_radical, split, Envelope, FactorKind};
use crate::error::{Error, Result};
use crate::exactalg::{
    invariant_complement, min_poly, nullspace, solve_system, BasisCoords, QuotientFrame, Rat,
    RatMatrix, Subspace,
};

/// A bracket-closed subspace of `gl(V)` with a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearRep {
    dim_v: usize,
    basis: Vec<RatMatrix>,
    #[serde(skip)]
    span: Subspace,
}

fn check_square(mats: &[RatMatrix], dim_v: usize) -> Result<()> {
    for (i, m) in mats.iter().enumerate() {
        if m.rows() != dim_v || m.cols() != dim_v {
            return Err(Error::DimensionMismatch(format!(
                "generator {i} is {}x{}, expected {dim_v}x{dim_v}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

/// Span of all commutators `[x, y]` with `x` from `a` and `y` from `b`.
pub fn bracket_span(dim_v: usize, a: &Subspace, b: &Subspace) -> Subspace {
    let bs = b.basis_matrices(dim_v);
    Subspace::from_vectors(
        dim_v * dim_v,
        a.basis_matrices(dim_v)
            .iter()
            .flat_map(|x| bs.iter().map(move |y| x.commutator(y).into_entries()))
            .collect::<Vec<_>>(),
    )
}

/// Smallest bracket-closed subspace containing the generators, with its
/// canonical echelon basis.
pub fn close_under_bracket(generators: &[RatMatrix], dim_v: usize) -> Result<LinearRep> {
    check_square(generators, dim_v)?;
    let mut span = Subspace::from_matrices(dim_v, generators);
    loop {
        let next = span.sum(&bracket_span(dim_v, &span, &span));
        if next.dim() == span.dim() {
            break;
        }
        span = next;
    }
    Ok(LinearRep {
        dim_v,
        basis: span.basis_matrices(dim_v),
        span,
    })
}

impl LinearRep {
    /// Uses `basis` as given; fails unless it is linearly independent and
    /// its span is closed under the bracket.
    pub fn with_basis(dim_v: usize, basis: Vec<RatMatrix>) -> Result<LinearRep> {
        check_square(&basis, dim_v)?;
        let span = Subspace::from_matrices(dim_v, &basis);
        if span.dim() != basis.len() {
            return Err(Error::Input("basis matrices are linearly dependent".into()));
        }
        if !bracket_span(dim_v, &span, &span).is_subspace_of(&span) {
            return Err(Error::Input(
                "span of the basis is not closed under the bracket".into(),
            ));
        }
        Ok(LinearRep { dim_v, basis, span })
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_l(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatMatrix] {
        &self.basis
    }

    pub fn span(&self) -> Subspace {
        self.span.clone()
    }

    /// Same subspace, basis matrices replaced by `g·b·g⁻¹` given `g` and `g⁻¹`.
    pub fn conjugate(&self, g: &RatMatrix, g_inv: &RatMatrix) -> Result<LinearRep> {
        if g.mul(g_inv) != RatMatrix::identity(self.dim_v) {
            return Err(Error::Input(
                "conjugating matrices are not mutually inverse".into(),
            ));
        }
        LinearRep::with_basis(
            self.dim_v,
            self.basis.iter().map(|b| g.mul(b).mul(g_inv)).collect(),
        )
    }
}

/// `ρ(L) = G ⊕ R` and `R = S ⊕ (ρ(L) ∩ J(A))`, all as subspaces of `End(V)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviData {
    pub g: Subspace,
    pub r: Subspace,
    pub s: Subspace,
    pub l_cap_j: Subspace,
}

/// Solvable radical as the trace-form orthogonal of `[L, L]` inside `L`.
pub fn solvable_radical(rep: &LinearRep) -> Subspace {
    let n = rep.dim_v();
    let l = rep.span();
    let derived = bracket_span(n, &l, &l).basis_matrices(n);
    let rows: Vec<Vec<Rat>> = derived
        .iter()
        .map(|y| rep.basis().iter().map(|x| x.trace_product(y)).collect())
        .collect();
    let coeffs = nullspace(rows, rep.dim_l());
    Subspace::from_vectors(
        n * n,
        coeffs
            .iter()
            .map(|c| combine(rep.basis(), c, n).into_entries()),
    )
}

fn combine(mats: &[RatMatrix], coeffs: &[Rat], n: usize) -> RatMatrix {
    mats.iter()
        .zip(coeffs)
        .fold(RatMatrix::zeros(n, n), |acc, (m, c)| {
            if c.is_zero() {
                acc
            } else {
                acc.add(&m.scale(c))
            }
        })
}

fn derived_series(n: usize, r: &Subspace) -> Vec<Subspace> {
    let mut series = vec![r.clone()];
    loop {
        let last = series.last().unwrap();
        let next = bracket_span(n, last, last);
        if next.dim() == last.dim() {
            return series;
        }
        let done = next.is_zero();
        series.push(next);
        if done {
            return series;
        }
    }
}

/// Lifts a complement of `R` in `L` through the derived series of `R` until
/// it is closed under the bracket.
fn levi_subalgebra(rep: &LinearRep, r: &Subspace, series: &[Subspace]) -> Result<Subspace> {
    let n = rep.dim_v();
    let nn = n * n;
    let mut xs: Vec<Vec<Rat>> = r.complement_in(&rep.span());
    let s = xs.len();
    if s == 0 {
        return Ok(Subspace::zero(nn));
    }
    for t in 0..series.len() - 1 {
        let (upper, lower) = (&series[t], &series[t + 1]);
        let mut frame_basis = xs.clone();
        frame_basis.extend(r.vectors().iter().cloned());
        let coords = BasisCoords::new(nn, &frame_basis)?;
        let frame = QuotientFrame::new(upper, lower);
        let q = frame.dim();
        let mats: Vec<RatMatrix> = xs.iter().map(|v| as_matrix(n, v)).collect();
        let quotient_basis: Vec<RatMatrix> = (0..q)
            .map(|i| as_matrix(n, &frame.lift(&unit_vec(q, i))))
            .collect();
        // Unknown u_j = Σ_i y[j*q + i] · quotient_basis[i].
        let nvars = s * q;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for j in 0..s {
            for k in j + 1..s {
                let bracket = mats[j].commutator(&mats[k]);
                let c = coords.coords(bracket.entries()).ok_or_else(|| {
                    Error::Unsupported("Lie algebra is not closed under the bracket".into())
                })?;
                let structure = &c[..s];
                let residue = combine(&r.basis_matrices(n), &c[s..], n);
                let target = frame.coords(residue.entries());
                // residue + [x_j,u_k] − [x_k,u_j] − Σ_l c_jkl u_l ≡ 0 mod lower
                let mut block = vec![vec![Rat::zero(); nvars]; q];
                for (i, ub) in quotient_basis.iter().enumerate() {
                    let add = |block: &mut Vec<Vec<Rat>>, var: usize, v: Vec<Rat>, sign: bool| {
                        for (row, x) in block.iter_mut().zip(v) {
                            if sign {
                                row[var] += x;
                            } else {
                                row[var] -= x;
                            }
                        }
                    };
                    add(
                        &mut block,
                        k * q + i,
                        frame.coords(mats[j].commutator(ub).entries()),
                        true,
                    );
                    add(
                        &mut block,
                        j * q + i,
                        frame.coords(mats[k].commutator(ub).entries()),
                        false,
                    );
                    for (l, cl) in structure.iter().enumerate() {
                        if !cl.is_zero() {
                            block[i][l * q + i] -= cl;
                        }
                    }
                }
                for (row, tgt) in block.into_iter().zip(target) {
                    rows.push(row);
                    rhs.push(-tgt);
                }
            }
        }
        let y = solve_system(&rows, &rhs, nvars).ok_or_else(|| {
            Error::Unsupported("no Levi complement found while lifting through the radical".into())
        })?;
        for (j, x) in xs.iter_mut().enumerate() {
            let u = combine(&quotient_basis, &y[j * q..(j + 1) * q], n);
            for (a, b) in x.iter_mut().zip(u.entries()) {
                *a += b;
            }
        }
    }
    Ok(Subspace::from_vectors(nn, xs))
}

fn unit_vec(len: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); len];
    v[i] = Rat::one();
    v
}

/// Matrices of `ad g` (`y ↦ [g, y]`) on the invariant subspace `sub`, in its
/// canonical coordinates.
fn ad_on(n: usize, gs: &[RatMatrix], sub: &Subspace) -> Result<Vec<RatMatrix>> {
    let k = sub.dim();
    gs.iter()
        .map(|g| {
            let mut m = RatMatrix::zeros(k, k);
            for (j, y) in sub.basis_matrices(n).iter().enumerate() {
                let c = sub.coords(g.commutator(y).entries()).ok_or_else(|| {
                    Error::Unsupported("radical is not invariant under the Levi subalgebra".into())
                })?;
                for (i, v) in c.into_iter().enumerate() {
                    m.set(i, j, v);
                }
            }
            Ok(m)
        })
        .collect()
}

/// Computes `G`, `R`, `S` and `ρ(L) ∩ J(A)`.
pub fn levi_decompose(rep: &LinearRep, env: &Envelope) -> Result<LeviData> {
    let n = rep.dim_v();
    if env.dim_v() != n {
        return Err(Error::DimensionMismatch(
            "envelope and representation differ in dim V".into(),
        ));
    }
    let l = rep.span();
    let r = solvable_radical(rep);
    if !bracket_span(n, &l, &r).is_subspace_of(&r) {
        return Err(Error::Unsupported(
            "trace-form radical is not an ideal".into(),
        ));
    }
    let series = derived_series(n, &r);
    if !series.last().unwrap().is_zero() {
        return Err(Error::Unsupported(
            "trace-form radical is not solvable".into(),
        ));
    }
    let g = levi_subalgebra(rep, &r, &series)?;
    if !bracket_span(n, &g, &g).is_subspace_of(&g) {
        return Err(Error::Unsupported(
            "computed Levi subalgebra is not bracket-closed".into(),
        ));
    }
    if g.dim() + r.dim() != l.dim() || g.sum(&r) != l {
        return Err(Error::Unsupported(
            "G and R do not span ρ(L) as a direct sum".into(),
        ));
    }
    let l_cap_j = l.intersect(env.radical());
    if !l_cap_j.is_subspace_of(&r) {
        return Err(Error::Unsupported(
            "ρ(L) ∩ J(A) is not contained in R".into(),
        ));
    }
    let ops = ad_on(n, &g.basis_matrices(n), &r)?;
    let k_local = Subspace::from_vectors(
        r.dim(),
        l_cap_j
            .vectors()
            .iter()
            .map(|v| r.coords(v).expect("contained in R")),
    );
    let (complement, _) = invariant_complement(&k_local, &ops).ok_or_else(|| {
        Error::Internal("no ad G-invariant complement of ρ(L) ∩ J(A) in R".into())
    })?;
    let s = Subspace::from_vectors(n * n, complement.vectors().iter().map(|c| r.combine(c)));
    Ok(LeviData { g, r, s, l_cap_j })
}

/// `a_i = b_i + c_i` with `b_i ∈ J(A)` and the `c_i` commuting and
/// diagonalizable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WmSplit {
    pub inputs: Vec<RatMatrix>,
    pub nilpotent_parts: Vec<RatMatrix>,
    pub semisimple_parts: Vec<RatMatrix>,
}

/// True when the minimal polynomial of `m` has no repeated factor.
pub fn is_diagonalizable(m: &RatMatrix) -> bool {
    min_poly(m).is_squarefree()
}

fn is_idempotent(m: &RatMatrix) -> bool {
    m.mul(m) == *m
}

/// Splits elements of `S` through orthogonal idempotents lifted from the
/// semisimple quotient of the algebra they generate.
pub fn wm_split(env: &Envelope, elements: &[RatMatrix]) -> Result<WmSplit> {
    let n = env.dim_v();
    check_square(elements, n)?;
    if elements.iter().any(|a| !env.contains(a)) {
        return Err(Error::NotInEnvelope);
    }
    let gens = Subspace::from_matrices(n, elements);
    let a1 = generate_algebra(n, &gens);
    let (j1, _) = jacobson_radical(n, &a1);
    let frame = QuotientFrame::new(&a1, &j1);
    let t = frame.dim();
    let a1_mats = a1.basis_matrices(n);
    let ops: Vec<RatMatrix> = a1_mats
        .iter()
        .map(|a| frame.induced(|v| a.mul(&as_matrix(n, v)).into_entries()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed() ^ 0x5eed_0f1d);
    let pieces = split::decompose_semisimple(&Subspace::full(t), &ops, &mut rng)?;
    let limit = env.dim_a().max(1);
    let mut idempotents: Vec<RatMatrix> = Vec::new();
    let mut acc = RatMatrix::zeros(n, n);
    for piece in &pieces {
        if piece.dim() != 1 {
            return Err(Error::Unsupported(
                "elements do not commute modulo the radical of the algebra they generate".into(),
            ));
        }
        let v = as_matrix(n, &frame.lift(&piece.vectors()[0]));
        let sq = frame.coords(v.mul(&v).entries());
        let own = frame.coords(v.entries());
        let pos = own
            .iter()
            .position(|x| !x.is_zero())
            .expect("nonzero class");
        let c = &sq[pos] / &own[pos];
        if c.is_zero() {
            return Err(Error::Internal(
                "nilpotent class in a semisimple quotient".into(),
            ));
        }
        let x = v.scale(&(Rat::one() / c));
        // Move into the corner orthogonal to the idempotents found so far.
        let mut y = x
            .sub(&acc.mul(&x))
            .sub(&x.mul(&acc))
            .add(&acc.mul(&x).mul(&acc));
        let mut steps = 0;
        while !is_idempotent(&y) {
            if steps == limit {
                return Err(Error::Internal(format!(
                    "idempotent lifting did not converge in {limit} iterations"
                )));
            }
            let y2 = y.mul(&y);
            y = y2
                .scale(&Rat::from_integer(3.into()))
                .sub(&y2.mul(&y).scale(&Rat::from_integer(2.into())));
            steps += 1;
        }
        acc = acc.add(&y);
        idempotents.push(y);
    }
    let mut basis: Vec<Vec<Rat>> = idempotents.iter().map(|f| f.entries().to_vec()).collect();
    basis.extend(j1.vectors().iter().cloned());
    let coords = BasisCoords::new(n * n, &basis)?;
    let mut nilpotent_parts = Vec::new();
    let mut semisimple_parts = Vec::new();
    for a in elements {
        let lambda = coords
            .coords(a.entries())
            .ok_or_else(|| Error::Internal("element outside its generated algebra".into()))?;
        let c = combine(&idempotents, &lambda[..idempotents.len()], n);
        nilpotent_parts.push(a.sub(&c));
        semisimple_parts.push(c);
    }
    Ok(WmSplit {
        inputs: elements.to_vec(),
        nilpotent_parts,
        semisimple_parts,
    })
}

impl WmSplit {
    /// Checks `a_i = b_i + c_i`, `b_i ∈ J(A)`, `[c_i, c_j] = 0` and that each
    /// `c_i` is diagonalizable; returns the first violation.
    pub fn check(&self, env: &Envelope) -> std::result::Result<(), String> {
        for (i, ((a, b), c)) in self
            .inputs
            .iter()
            .zip(&self.nilpotent_parts)
            .zip(&self.semisimple_parts)
            .enumerate()
        {
            if b.add(c) != *a {
                return Err(format!("a_{i} != b_{i} + c_{i}"));
            }
            if !env.radical().contains_matrix(b) {
                return Err(format!("b_{i} is not in J(A)"));
            }
            if !is_diagonalizable(c) {
                return Err(format!("c_{i} is not diagonalizable"));
            }
            for (j, d) in self.semisimple_parts.iter().enumerate().skip(i + 1) {
                if c.mul(d) != d.mul(c) {
                    return Err(format!("c_{i} and c_{j} do not commute"));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&LemmaCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn outcome(name: &str, failures: Vec<String>, ok: &str) -> LemmaCheck {
    LemmaCheck {
        name: name.into(),
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            ok.into()
        } else {
            failures.join("; ")
        },
    }
}

fn is_scalar(m: &RatMatrix) -> bool {
    m.rows() == 0 || *m == RatMatrix::identity(m.rows()).scale(m.get(0, 0))
}

/// Exact checks of the structure lemmas on the given triple.
///
/// * `LR`: `[x, y] ∈ J(A)` for `x ∈ ρ(L)`, `y ∈ R`.
/// * `RS`: `ρ(L) = G ⊕ R`, `R = S ⊕ (ρ(L) ∩ J(A))`, `[G, S] = 0`, `[G, G] ⊆ G`.
/// * `Irr`: on every chain factor killed by `J(A)`, each element of `S` acts
///   as a scalar, and a factor with nonzero action is one-dimensional or
///   absolutely irreducible under `G`.
/// * `AnnGS`: the annihilator in `ρ(L)` of each such factor is the sum of
///   its annihilators in `G` and `S` and `ρ(L) ∩ J(A)`.
pub fn verify_lemmas(rep: &LinearRep, env: &Envelope, levi: &LeviData) -> Result<LemmaReport> {
    let n = rep.dim_v();
    let l = rep.span();
    let radical = env.radical();
    let g_mats = levi.g.basis_matrices(n);
    let s_mats = levi.s.basis_matrices(n);
    let j_mats = radical.basis_matrices(n);

    let mut lr = Vec::new();
    for (i, x) in rep.basis().iter().enumerate() {
        for (j, y) in levi.r.basis_matrices(n).iter().enumerate() {
            if !radical.contains_matrix(&x.commutator(y)) {
                lr.push(format!("[L_{i}, R_{j}] not in J(A)"));
            }
        }
    }

    let mut rs = Vec::new();
    if levi.g.dim() + levi.r.dim() != l.dim() || levi.g.sum(&levi.r) != l {
        rs.push("ρ(L) != G ⊕ R".to_string());
    }
    if levi.s.dim() + levi.l_cap_j.dim() != levi.r.dim() || levi.s.sum(&levi.l_cap_j) != levi.r {
        rs.push("R != S ⊕ (ρ(L) ∩ J(A))".to_string());
    }
    if levi.l_cap_j != l.intersect(radical) {
        rs.push("stored ρ(L) ∩ J(A) differs from the intersection".to_string());
    }
    for (i, g) in g_mats.iter().enumerate() {
        for (j, s) in s_mats.iter().enumerate() {
            if !g.commutator(s).is_zero() {
                rs.push(format!("[G_{i}, S_{j}] != 0"));
            }
        }
    }
    if !bracket_span(n, &levi.g, &levi.g).is_subspace_of(&levi.g) {
        rs.push("[G, G] not in G".to_string());
    }

    let mut irr = Vec::new();
    let mut ann = Vec::new();
    for k in 0..env.theta() {
        if !env
            .factor_action(k, &j_mats)?
            .iter()
            .all(RatMatrix::is_zero)
        {
            continue;
        }
        for (i, m) in env.factor_action(k, &s_mats)?.iter().enumerate() {
            if !is_scalar(m) {
                irr.push(format!("S_{i} is not scalar on factor {k}"));
            }
        }
        let dim = env.chain()[k].dim() - env.chain()[k + 1].dim();
        if env.factor_kinds()[k] == FactorKind::Irreducible && dim > 1 {
            let local = env.factor_action(k, &g_mats)?;
            let mut unital = local.clone();
            unital.push(RatMatrix::identity(dim));
            let span = Subspace::from_matrices(dim, &unital);
            let generated = generate_algebra(dim, &span);
            if generated.dim() != dim * dim {
                irr.push(format!(
                    "factor {k} of dimension {dim} is not irreducible under G"
                ));
            }
        }
        let ann_l = env.annihilator_in_rho(rep, k)?;
        let rebuilt = ann_l
            .intersect(&levi.g)
            .sum(&ann_l.intersect(&levi.s))
            .sum(&levi.l_cap_j);
        if rebuilt != ann_l {
            ann.push(format!(
                "factor {k}: Ann_L has dim {}, Ann_G + Ann_S + (ρ(L) ∩ J(A)) has dim {}",
                ann_l.dim(),
                rebuilt.dim()
            ));
        }
    }

    Ok(LemmaReport {
        checks: vec![
            outcome("LR", lr, "[ρ(L), R] ⊆ J(A)"),
            outcome("RS", rs, "R = S ⊕ (ρ(L) ∩ J(A)) and [G, S] = 0"),
            outcome("Irr", irr, "S acts by scalars on every factor"),
            outcome("AnnGS", ann, "annihilators split over G, S and ρ(L) ∩ J(A)"),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, ratio};

    fn e(i: usize, j: usize) -> RatMatrix {
        RatMatrix::unit(2, i, j)
    }

    fn env_of(rep: &LinearRep) -> Envelope {
        Envelope::build(rep, 11).unwrap()
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            close_under_bracket(&[e(0, 0), e(0, 1)], 2).unwrap().dim_l(),
            2
        );
        let sl2 = close_under_bracket(&[e(0, 1), e(1, 0)], 2).unwrap();
        assert_eq!(sl2.dim_l(), 3);
        assert!(sl2.span().contains_matrix(&e(0, 0).sub(&e(1, 1))));
        assert_eq!(close_under_bracket(&[], 2).unwrap().dim_l(), 0);
        assert!(matches!(
            close_under_bracket(&[RatMatrix::zeros(2, 3)], 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn closure_is_idempotent() {
        let sl2 = close_under_bracket(&[e(0, 1), e(1, 0)], 2).unwrap();
        let again = close_under_bracket(sl2.basis(), 2).unwrap();
        assert_eq!(sl2, again);
    }

    #[test]
    fn with_basis_rejects_unclosed_spans() {
        assert!(LinearRep::with_basis(2, vec![e(0, 1), e(1, 0)]).is_err());
        assert!(LinearRep::with_basis(2, vec![e(0, 1), e(0, 1)]).is_err());
        assert!(LinearRep::with_basis(2, vec![e(0, 0), e(0, 1)]).is_ok());
    }

    #[test]
    fn levi_sl2() {
        let rep = close_under_bracket(&[e(0, 1), e(1, 0)], 2).unwrap();
        let levi = levi_decompose(&rep, &env_of(&rep)).unwrap();
        assert_eq!(levi.g, rep.span());
        assert!(levi.r.is_zero() && levi.s.is_zero() && levi.l_cap_j.is_zero());
    }

    #[test]
    fn levi_upper_triangular() {
        let rep = close_under_bracket(&[e(0, 0), e(0, 1)], 2).unwrap();
        let levi = levi_decompose(&rep, &env_of(&rep)).unwrap();
        assert!(levi.g.is_zero());
        assert_eq!(levi.r, rep.span());
        assert_eq!(levi.l_cap_j, Subspace::from_matrices(2, [&e(0, 1)]));
        // G = 0 imposes nothing: the canonical complement of span{E12}.
        assert_eq!(levi.s, Subspace::from_matrices(2, [&e(0, 0)]));
    }

    #[test]
    fn levi_gl2() {
        let rep = close_under_bracket(&[e(0, 0), e(0, 1), e(1, 0), e(1, 1)], 2).unwrap();
        let levi = levi_decompose(&rep, &env_of(&rep)).unwrap();
        let sl2 = Subspace::from_matrices(2, [&e(0, 1), &e(1, 0), &e(0, 0).sub(&e(1, 1))]);
        assert_eq!(levi.g, sl2);
        let centre = Subspace::from_matrices(2, [&RatMatrix::identity(2)]);
        assert_eq!(levi.r, centre);
        assert_eq!(levi.s, centre);
        assert!(levi.l_cap_j.is_zero());
    }

    /// sl_2 on V_1 ⊕ trivial plus the maps trivial → V_1, conjugated so that
    /// the echelon complement of R is not a subalgebra and has to be lifted.
    #[test]
    fn levi_lifts_complement() {
        let n = 3;
        let m = |r: &[&[i64]]| RatMatrix::from_i64(r);
        let ex = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let fx = m(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let n1 = m(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        let g = m(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]);
        let g_inv = m(&[&[1, 0, 0], &[0, 1, 0], &[-1, -1, 1]]);
        let plain = close_under_bracket(&[ex, fx, n1], n).unwrap();
        assert_eq!(plain.dim_l(), 5);
        let rep = close_under_bracket(plain.conjugate(&g, &g_inv).unwrap().basis(), n).unwrap();
        let r = solvable_radical(&rep);
        let naive = Subspace::from_vectors(n * n, r.complement_in(&rep.span()));
        assert!(!bracket_span(n, &naive, &naive).is_subspace_of(&naive));

        let env = Envelope::build(&rep, 2).unwrap();
        let levi = levi_decompose(&rep, &env).unwrap();
        assert_eq!(levi.g.dim(), 3);
        assert_eq!(levi.r, r);
        assert_eq!(levi.r.dim(), 2);
        assert!(bracket_span(n, &levi.g, &levi.g).is_subspace_of(&levi.g));
        assert!(verify_lemmas(&rep, &env, &levi).unwrap().all_passed());
    }

    #[test]
    fn wm_split_examples() {
        let rep = close_under_bracket(&[e(0, 0), e(0, 1)], 2).unwrap();
        let env = env_of(&rep);

        let scalar = RatMatrix::identity(2).scale(&ratio(3, 2));
        let gl = close_under_bracket(&[e(0, 0), e(1, 1)], 2).unwrap();
        let genv = env_of(&gl);
        let split = wm_split(&genv, std::slice::from_ref(&scalar)).unwrap();
        assert!(split.nilpotent_parts[0].is_zero());
        assert_eq!(split.semisimple_parts[0], scalar);

        let x = e(0, 0).add(&e(0, 1));
        let split = wm_split(&env, std::slice::from_ref(&x)).unwrap();
        split.check(&env).unwrap();
        // E11 + E12 is itself idempotent, so its generated algebra is
        // semisimple and the nilpotent part vanishes.
        assert!(split.nilpotent_parts[0].is_zero());
        assert_eq!(split.semisimple_parts[0], x);

        let y = e(0, 0).scale(&rat(2)).add(&e(0, 1));
        let z = e(0, 1).scale(&rat(5));
        let split = wm_split(&env, &[y, z]).unwrap();
        split.check(&env).unwrap();
        assert_eq!(split.nilpotent_parts[1], e(0, 1).scale(&rat(5)));

        let empty = wm_split(&env, &[]).unwrap();
        assert!(empty.inputs.is_empty() && empty.semisimple_parts.is_empty());

        assert!(matches!(
            wm_split(&env, &[e(1, 1)]),
            Err(Error::NotInEnvelope)
        ));
    }

    /// With two eigenvalues on the diagonal and a nilpotent tail the split
    /// is unique: c must be the diagonal part in the eigenbasis.
    #[test]
    fn wm_split_unique_jordan_part() {
        let m = |r: &[&[i64]]| RatMatrix::from_i64(r);
        let a = m(&[&[2, 1, 0], &[0, 2, 0], &[0, 0, 5]]);
        let rep =
            close_under_bracket(&[a.clone(), m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]])], 3).unwrap();
        let env = Envelope::build(&rep, 0).unwrap();
        let split = wm_split(&env, &[a]).unwrap();
        split.check(&env).unwrap();
        assert_eq!(
            split.semisimple_parts[0],
            m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 5]])
        );
    }

    #[test]
    fn lemmas_hold_on_small_examples() {
        for gens in [
            vec![e(0, 1), e(1, 0)],
            vec![e(0, 0), e(0, 1)],
            vec![e(0, 0), e(0, 1), e(1, 0), e(1, 1)],
            vec![e(0, 1)],
        ] {
            let rep = close_under_bracket(&gens, 2).unwrap();
            let env = env_of(&rep);
            let levi = levi_decompose(&rep, &env).unwrap();
            let report = verify_lemmas(&rep, &env, &levi).unwrap();
            assert!(report.all_passed(), "{report:?}");
            assert_eq!(report.checks.len(), 4);
        }
    }

    #[test]
    fn lemma_checks_detect_a_bad_complement() {
        let rep = close_under_bracket(&[e(0, 0), e(0, 1), e(1, 0), e(1, 1)], 2).unwrap();
        let env = env_of(&rep);
        let mut levi = levi_decompose(&rep, &env).unwrap();
        // Replace S by a non-central complement: breaks [G, S] = 0.
        levi.s = Subspace::from_matrices(2, [&e(0, 0)]);
        levi.r = levi.s.clone();
        levi.g = Subspace::from_matrices(2, [&e(0, 1), &e(1, 0), &e(1, 1)]);
        let report = verify_lemmas(&rep, &env, &levi).unwrap();
        assert!(!report.get("RS").unwrap().passed);
    }
}
