//! Evaluation of multilinear polynomials on a linear Lie algebra:
//! codimensions, identity tests and cocharacter multiplicities.
//!
//! By multilinearity it suffices to substitute basis elements. The basis is
//! first rescaled to integer matrices (this does not change its span), and
//! the product of every word of length `n` in the basis is tabulated once by
//! extending shorter words, so each evaluation row is assembled by lookups.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{
    bareiss_rank, rank_modular_rows, rank_modular_rows_with_pivots, ModularRows, PrimeField,
};
use crate::liestruct::LinearRep;
use crate::symcomb::{
    hook_dimension, partitions_of, young_symmetrizer_star, GroupAlgebraElement, Partition, Perm,
    Tableau,
};

/// Default number of matrix cells the evaluation matrix may have.
pub const DEFAULT_CELL_BUDGET: u128 = 200_000_000;
/// Above this many cells the automatic method switches to modular rank.
pub const AUTO_MODULAR_CELLS: u128 = 1_000_000;
/// Default largest degree for cocharacter computations.
pub const DEFAULT_MAX_COCHAR_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Modular,
    /// Modular for `n ≥ 5` or more than [`AUTO_MODULAR_CELLS`] cells, exact otherwise.
    Auto,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "exact" => Ok(Method::Exact),
            "modular" => Ok(Method::Modular),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Input(format!("unknown method {other:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact => "exact",
            Method::Modular => "modular",
            Method::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub method: Method,
    pub primes: usize,
    pub seed: u64,
    pub cell_budget: u128,
    pub force: bool,
    /// Largest `n` accepted by the cocharacter computation.
    pub max_cochar_n: usize,
    /// Compute ranks for shapes with more rows than `dim ρ(L)` instead of
    /// reporting zero.
    pub all_shapes: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            method: Method::Auto,
            primes: 2,
            seed: 0,
            cell_budget: DEFAULT_CELL_BUDGET,
            force: false,
            max_cochar_n: DEFAULT_MAX_COCHAR_N,
            all_shapes: false,
        }
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Products of all words of length `n` in an integer-scaled basis of `ρ(L)`.
#[derive(Clone, Debug)]
pub struct EvalTable {
    n: usize,
    dim_l: usize,
    dim_v: usize,
    /// `words[w]` is the flattened product for the word whose letters are
    /// the base-`dim_l` digits of `w`, most significant first.
    words: Vec<Vec<BigInt>>,
}

/// Basis matrices multiplied by the lcm of their denominators.
pub fn integer_basis(rep: &LinearRep) -> Vec<Vec<BigInt>> {
    rep.basis()
        .iter()
        .map(|m| {
            let l = m.denominator_lcm();
            m.entries()
                .iter()
                .map(|x| (x * crate::exactalg::Rat::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                let y = &b[k * n + j];
                if !y.is_zero() {
                    out[i * n + j] += x * y;
                }
            }
        }
    }
    out
}

impl EvalTable {
    pub fn new(rep: &LinearRep, n: usize) -> Result<EvalTable> {
        if n == 0 {
            return Err(Error::Input("degree must be at least 1".into()));
        }
        let dim_l = rep.dim_l();
        let dim_v = rep.dim_v();
        let basis = integer_basis(rep);
        // words of length 1, then extend on the right by one letter
        let mut words: Vec<Vec<BigInt>> = basis.clone();
        for _ in 1..n {
            words = words
                .par_iter()
                .flat_map_iter(|w| basis.iter().map(move |b| mat_mul(w, b, dim_v)))
                .collect();
        }
        Ok(EvalTable {
            n,
            dim_l,
            dim_v,
            words,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of substitution tuples, `dim_l^n`.
    pub fn tuples(&self) -> usize {
        self.words.len()
    }

    /// Row width `dim_l^n · dim_v²`.
    pub fn width(&self) -> usize {
        self.words.len() * self.dim_v * self.dim_v
    }

    /// Word index of `(t_{π(0)}, …, t_{π(n-1)})` for every tuple `t`.
    fn word_indices(&self, pi: &Perm) -> Vec<usize> {
        let n = self.n;
        let l = self.dim_l;
        let mut weights = vec![1usize; n];
        for j in (0..n.saturating_sub(1)).rev() {
            weights[j] = weights[j + 1] * l;
        }
        // digit i of the tuple lands at position π⁻¹(i) of the word
        let inv = pi.inverse();
        let moved: Vec<usize> = (0..n).map(|i| weights[inv.image(i)]).collect();
        let mut out = Vec::with_capacity(self.tuples());
        let mut digits = vec![0usize; n];
        let mut index = 0usize;
        for _ in 0..self.tuples() {
            out.push(index);
            // increment tuple digits (least significant last)
            for i in (0..n).rev() {
                digits[i] += 1;
                index += moved[i];
                if digits[i] < l {
                    break;
                }
                index -= moved[i] * l;
                digits[i] = 0;
            }
        }
        out
    }

    /// Values of the monomial `x_{π(0)}⋯x_{π(n-1)}` on every tuple.
    pub fn row(&self, pi: &Perm) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.width());
        for w in self.word_indices(pi) {
            out.extend(self.words[w].iter().cloned());
        }
        out
    }

    /// Values of a multilinear polynomial with integer coefficients.
    pub fn element_row(&self, terms: &[(Perm, BigInt)]) -> Vec<BigInt> {
        let dv2 = self.dim_v * self.dim_v;
        let mut out = vec![BigInt::zero(); self.width()];
        for (p, c) in terms {
            for (t, w) in self.word_indices(p).into_iter().enumerate() {
                for (o, x) in out[t * dv2..(t + 1) * dv2].iter_mut().zip(&self.words[w]) {
                    if !x.is_zero() {
                        *o += c * x;
                    }
                }
            }
        }
        out
    }

    fn words_mod(&self, field: &PrimeField) -> Vec<u64> {
        self.words
            .iter()
            .flatten()
            .map(|x| field.from_bigint(x))
            .collect()
    }
}

/// Integer multiples of the coefficients of `f` (scaled by a positive
/// common denominator, which does not affect vanishing or ranks).
fn integer_terms(f: &GroupAlgebraElement) -> Vec<(Perm, BigInt)> {
    let l = f
        .terms()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    f.terms()
        .map(|(p, c)| {
            (
                p.clone(),
                (c * crate::exactalg::Rat::from_integer(l.clone())).to_integer(),
            )
        })
        .collect()
}

/// Rows `Σ_τ c_τ · row(τ∘σ)` for a list of integer polynomials, produced
/// modulo a prime on demand.
struct ModularSource<'a> {
    table: &'a EvalTable,
    elements: Vec<Vec<(Perm, BigInt)>>,
    cache: Mutex<HashMap<u64, Arc<Vec<u64>>>>,
}

impl<'a> ModularSource<'a> {
    fn new(table: &'a EvalTable, elements: Vec<Vec<(Perm, BigInt)>>) -> Self {
        ModularSource {
            table,
            elements,
            cache: Mutex::new(HashMap::new()),
        }
    }

    fn reduced(&self, field: &PrimeField) -> Arc<Vec<u64>> {
        let mut cache = self.cache.lock().expect("cache lock");
        cache
            .entry(field.modulus())
            .or_insert_with(|| Arc::new(self.table.words_mod(field)))
            .clone()
    }
}

impl ModularRows for ModularSource<'_> {
    fn width(&self) -> usize {
        self.table.width()
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn write_row(&self, index: usize, field: &PrimeField, out: &mut [u64]) {
        let words = self.reduced(field);
        let dv2 = self.table.dim_v * self.table.dim_v;
        out.iter_mut().for_each(|x| *x = 0);
        for (p, c) in &self.elements[index] {
            let cm = field.from_bigint(c);
            let unit = cm == field.one();
            for (t, w) in self.table.word_indices(p).into_iter().enumerate() {
                let src = &words[w * dv2..(w + 1) * dv2];
                for (o, &x) in out[t * dv2..(t + 1) * dv2].iter_mut().zip(src) {
                    if x != 0 {
                        *o = field.add(*o, if unit { x } else { field.mul(cm, x) });
                    }
                }
            }
        }
    }
}

/// Which rank routine produced a number, with the primes used if modular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankInfo {
    pub method: Method,
    pub seed: u64,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Codimension {
    pub n: usize,
    pub c_n: usize,
    pub rank: RankInfo,
    /// Permutations whose monomials form a basis modulo identities (only
    /// recorded by the modular path).
    #[serde(skip)]
    pub basis_rows: Option<Vec<Perm>>,
}

fn resolve_method(opts: &EvalOptions, n: usize, cells: u128) -> Method {
    match opts.method {
        Method::Auto if n >= 5 || cells > AUTO_MODULAR_CELLS => Method::Modular,
        Method::Auto => Method::Exact,
        m => m,
    }
}

fn guard(rep: &LinearRep, n: usize, rows: u128, opts: &EvalOptions) -> Result<u128> {
    let width = (rep.dim_l() as u128)
        .checked_pow(n as u32)
        .and_then(|w| w.checked_mul((rep.dim_v() * rep.dim_v()) as u128))
        .unwrap_or(u128::MAX);
    let cells = rows.saturating_mul(width);
    if cells > opts.cell_budget && !opts.force {
        return Err(Error::ResourceGuard {
            cells,
            budget: opts.cell_budget,
        });
    }
    Ok(cells)
}

/// Number of cells of the degree-`n` evaluation matrix, or the resource-guard
/// error when it exceeds the budget.
pub fn check_budget(rep: &LinearRep, n: usize, opts: &EvalOptions) -> Result<u128> {
    guard(rep, n, factorial(n), opts)
}

fn exact_rank(table: &EvalTable, elements: &[Vec<(Perm, BigInt)>]) -> usize {
    let rows: Vec<Vec<BigInt>> = elements.par_iter().map(|e| table.element_row(e)).collect();
    bareiss_rank(rows)
}

/// `c_n(ρ)`, the rank of the `n! × (dim_l^n · dim_v²)` evaluation matrix.
pub fn codimension(rep: &LinearRep, n: usize, opts: &EvalOptions) -> Result<Codimension> {
    if n == 0 {
        return Err(Error::Input("degree must be at least 1".into()));
    }
    let cells = guard(rep, n, factorial(n), opts)?;
    let method = resolve_method(opts, n, cells);
    let table = EvalTable::new(rep, n)?;
    let perms = Perm::all(n);
    let elements: Vec<Vec<(Perm, BigInt)>> = perms
        .iter()
        .map(|p| vec![(p.clone(), BigInt::one())])
        .collect();
    match method {
        Method::Exact => {
            let c_n = exact_rank(&table, &elements);
            Ok(Codimension {
                n,
                c_n,
                rank: RankInfo {
                    method,
                    seed: opts.seed,
                    primes: Vec::new(),
                },
                basis_rows: None,
            })
        }
        _ => {
            let source = ModularSource::new(&table, elements);
            let (rank, kept) = rank_modular_rows_with_pivots(&source, opts.primes, opts.seed);
            Ok(Codimension {
                n,
                c_n: rank.rank,
                rank: RankInfo {
                    method: Method::Modular,
                    seed: opts.seed,
                    primes: rank.primes,
                },
                basis_rows: Some(kept.into_iter().map(|i| perms[i].clone()).collect()),
            })
        }
    }
}

/// `c_1, …, c_max_n`.
pub fn codimension_sequence(
    rep: &LinearRep,
    max_n: usize,
    opts: &EvalOptions,
) -> Result<Vec<Codimension>> {
    if max_n > 0 {
        check_budget(rep, max_n, opts)?;
    }
    (1..=max_n).map(|n| codimension(rep, n, opts)).collect()
}

/// True when `f` vanishes on every substitution of basis elements.
pub fn is_identity(f: &GroupAlgebraElement, rep: &LinearRep) -> Result<bool> {
    let table = EvalTable::new(rep, f.degree())?;
    Ok(table
        .element_row(&integer_terms(f))
        .iter()
        .all(Zero::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocharRow {
    pub lambda: Partition,
    pub m: usize,
    pub dim: u64,
    /// False when the multiplicity was set to zero because `λ` has more
    /// rows than `dim ρ(L)`.
    pub computed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocharTable {
    pub n: usize,
    pub rows: Vec<CocharRow>,
    pub c_n: usize,
    pub rank: RankInfo,
}

impl CocharTable {
    /// `Σ m(λ)·dim M(λ)`.
    pub fn weighted_sum(&self) -> u128 {
        self.rows.iter().map(|r| r.m as u128 * r.dim as u128).sum()
    }

    pub fn is_consistent(&self) -> bool {
        self.weighted_sum() == self.c_n as u128
    }

    pub fn multiplicity(&self, lambda: &Partition) -> Option<usize> {
        self.rows.iter().find(|r| &r.lambda == lambda).map(|r| r.m)
    }
}

/// Multiplicities `m(ρ, λ)` in the `n`-th cocharacter, each computed as the
/// rank of the evaluations of `e*_{T_λ}·x_σ` with `T_λ` the row-major
/// tableau.
pub fn cocharacter_multiplicities(
    rep: &LinearRep,
    n: usize,
    opts: &EvalOptions,
) -> Result<CocharTable> {
    if n == 0 {
        return Err(Error::Input("degree must be at least 1".into()));
    }
    if n > opts.max_cochar_n && !opts.force {
        return Err(Error::Input(format!(
            "cocharacter degree {n} exceeds the configured maximum {}",
            opts.max_cochar_n
        )));
    }
    let codim = codimension(rep, n, opts)?;
    let method = codim.rank.method;
    let table = EvalTable::new(rep, n)?;
    let sigmas: Vec<Perm> = codim.basis_rows.clone().unwrap_or_else(|| Perm::all(n));
    let mut rows = Vec::new();
    for lambda in partitions_of(n) {
        let dim = hook_dimension(&lambda)
            .to_u64()
            .expect("dimension fits in u64");
        if lambda.rows() > rep.dim_l() && !opts.all_shapes {
            rows.push(CocharRow {
                lambda,
                m: 0,
                dim,
                computed: false,
            });
            continue;
        }
        let e = integer_terms(&young_symmetrizer_star(&Tableau::canonical(&lambda)));
        let elements: Vec<Vec<(Perm, BigInt)>> = sigmas
            .iter()
            .map(|s| e.iter().map(|(t, c)| (t.compose(s), c.clone())).collect())
            .collect();
        let m = match method {
            Method::Exact => exact_rank(&table, &elements),
            _ => {
                rank_modular_rows(
                    &ModularSource::new(&table, elements),
                    opts.primes,
                    opts.seed,
                )
                .rank
            }
        };
        rows.push(CocharRow {
            lambda,
            m,
            dim,
            computed: true,
        });
    }
    Ok(CocharTable {
        n,
        rows,
        c_n: codim.c_n,
        rank: codim.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, RatMatrix};
    use crate::liestruct::close_under_bracket;

    fn e(i: usize, j: usize) -> RatMatrix {
        RatMatrix::unit(2, i, j)
    }

    fn sl2() -> LinearRep {
        close_under_bracket(&[e(0, 1), e(1, 0)], 2).unwrap()
    }

    fn scalar() -> LinearRep {
        close_under_bracket(&[RatMatrix::identity(1)], 1).unwrap()
    }

    fn exact() -> EvalOptions {
        EvalOptions {
            method: Method::Exact,
            ..EvalOptions::default()
        }
    }

    fn modular() -> EvalOptions {
        EvalOptions {
            method: Method::Modular,
            ..EvalOptions::default()
        }
    }

    /// Direct evaluation of a monomial on a tuple, as an oracle for rows.
    fn direct(rep: &LinearRep, word: &[usize]) -> RatMatrix {
        word.iter()
            .fold(RatMatrix::identity(rep.dim_v()), |acc, &i| {
                acc.mul(&rep.basis()[i])
            })
    }

    #[test]
    fn rows_match_direct_products() {
        let rep = close_under_bracket(&[e(0, 1).scale(&crate::exactalg::ratio(1, 2)), e(1, 0)], 2)
            .unwrap();
        let table = EvalTable::new(&rep, 3).unwrap();
        let pi = Perm::from_images(&[2, 0, 1]).unwrap();
        let row = table.row(&pi);
        let scales: Vec<crate::exactalg::Rat> = rep
            .basis()
            .iter()
            .map(|m| crate::exactalg::Rat::from_integer(m.denominator_lcm()))
            .collect();
        let mut t = 0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let tuple = [a, b, c];
                    let word: Vec<usize> = (0..3).map(|j| tuple[pi.image(j)]).collect();
                    let scale = word.iter().fold(rat(1), |acc, &i| acc * &scales[i]);
                    let expected = direct(&rep, &word).scale(&scale);
                    let got: Vec<crate::exactalg::Rat> = row[t * 4..(t + 1) * 4]
                        .iter()
                        .cloned()
                        .map(crate::exactalg::Rat::from_integer)
                        .collect();
                    assert_eq!(got, expected.entries());
                    t += 1;
                }
            }
        }
    }

    #[test]
    fn trivial_codimensions() {
        let zero = close_under_bracket(&[], 2).unwrap();
        for n in 1..=4 {
            assert_eq!(codimension(&zero, n, &exact()).unwrap().c_n, 0);
            assert_eq!(codimension(&scalar(), n, &exact()).unwrap().c_n, 1);
        }
    }

    /// n = 2 by hand: rows are (b_i b_j) and (b_j b_i) over all 9 tuples;
    /// E·F ≠ F·E, so the two rows are independent.
    #[test]
    fn sl2_degree_two() {
        assert_eq!(codimension(&sl2(), 2, &exact()).unwrap().c_n, 2);
        assert_eq!(codimension(&sl2(), 2, &modular()).unwrap().c_n, 2);
    }

    #[test]
    fn identities() {
        let comm = GroupAlgebraElement::monomial(&[0, 1])
            .unwrap()
            .sub(&GroupAlgebraElement::monomial(&[1, 0]).unwrap());
        assert!(is_identity(&comm, &scalar()).unwrap());
        assert!(!is_identity(&comm, &sl2()).unwrap());
        let square = GroupAlgebraElement::monomial(&[0, 1]).unwrap();
        let nil = close_under_bracket(&[e(0, 1)], 2).unwrap();
        assert!(is_identity(&square, &nil).unwrap());
    }

    #[test]
    fn resource_guard() {
        let opts = EvalOptions {
            cell_budget: 10,
            ..EvalOptions::default()
        };
        assert!(matches!(
            codimension(&sl2(), 3, &opts),
            Err(Error::ResourceGuard { .. })
        ));
        let forced = EvalOptions {
            force: true,
            ..opts
        };
        assert!(codimension(&sl2(), 3, &forced).is_ok());
    }

    #[test]
    fn scalar_cocharacter() {
        let table = cocharacter_multiplicities(&scalar(), 3, &exact()).unwrap();
        let part = |p: &[usize]| Partition::new(p.to_vec()).unwrap();
        assert_eq!(table.multiplicity(&part(&[3])), Some(1));
        assert_eq!(table.multiplicity(&part(&[2, 1])), Some(0));
        assert_eq!(table.multiplicity(&part(&[1, 1, 1])), Some(0));
        assert!(table.is_consistent());
    }

    #[test]
    fn sl2_cocharacter_sums_to_codimension() {
        for opts in [exact(), modular()] {
            for n in 1..=4 {
                let table = cocharacter_multiplicities(&sl2(), n, &opts).unwrap();
                assert!(table.is_consistent(), "n = {n}: {table:?}");
            }
        }
    }

    #[test]
    fn all_shapes_mode_computes_tall_shapes() {
        let nil = close_under_bracket(&[e(0, 1)], 2).unwrap();
        let opts = EvalOptions {
            all_shapes: true,
            ..exact()
        };
        let table = cocharacter_multiplicities(&nil, 2, &opts).unwrap();
        assert!(table.rows.iter().all(|r| r.computed && r.m == 0));
        let table = cocharacter_multiplicities(&nil, 1, &opts).unwrap();
        assert_eq!(table.c_n, 1);
        assert!(table.is_consistent());
    }
}
