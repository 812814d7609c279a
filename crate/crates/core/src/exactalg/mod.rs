//! Exact rational and multi-prime modular linear algebra.
//!
//! Everything above this module speaks in terms of [`RatMatrix`] and
//! [`Subspace`]. Subspaces are always stored in reduced row-echelon form, so
//! two subspaces are equal exactly when their bases are bit-identical.

mod poly;
mod rank;

pub use poly::{min_poly, Poly};
pub use rank::{
    bareiss_rank, is_prime_u64, random_primes, rank_exact, rank_modular, rank_modular_rows,
    rank_modular_rows_with_pivots, ModularRank, ModularRows, PrimeField,
};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses an exact rational written as `p`, `-p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    fn int(s: &str) -> Option<BigInt> {
        let digits = s
            .strip_prefix('-')
            .or_else(|| s.strip_prefix('+'))
            .unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
    match s.split_once('/') {
        None => int(s).map(Rat::from_integer),
        Some((p, q)) => {
            if q.starts_with(['-', '+']) {
                return None;
            }
            let q = int(q)?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(int(p)?, q))
        }
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    /// Matrix unit with a single one at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.entries[i * n + j] = Rat::one();
        m
    }

    pub fn from_flat(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let n = rows.len();
        Ok(RatMatrix {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rat> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, s: &Rat) -> RatMatrix {
        let entries = self.entries.iter().map(|a| a * s).collect();
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &RatMatrix) -> RatMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rat {
        (0..self.rows.min(self.cols)).fold(Rat::zero(), |acc, i| acc + self.get(i, i))
    }

    /// `trace(self·other)` without forming the product.
    pub fn trace_product(&self, other: &RatMatrix) -> Rat {
        assert_eq!((self.cols, self.rows), (other.rows, other.cols));
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, i);
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
        }
        acc
    }

    pub fn pow(&self, e: u32) -> RatMatrix {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    /// Integer entries of `self` scaled by the lcm of its denominators.
    pub fn to_integer_scaled(&self) -> Vec<BigInt> {
        let l = Rat::from_integer(self.denominator_lcm());
        self.entries.iter().map(|x| (x * &l).to_integer()).collect()
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct RatMatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for RatMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatMatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = RatMatrixRepr::deserialize(d)?;
        let entries = repr
            .entries
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        RatMatrix::from_flat(repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}

/// Row-reduces `rows` (each of length `ncols`) in place to reduced echelon
/// form, drops zero rows and returns the pivot column of each surviving row.
pub fn rref(rows: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : rows·x = 0}`.
pub fn nullspace(mut rows: Vec<Vec<Rat>>, ncols: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rat::zero(); ncols];
            v[free] = Rat::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Solves `rows·x = rhs`. Returns one particular solution (free variables
/// set to zero) or `None` when the system is inconsistent.
pub fn solve_system(rows: &[Vec<Rat>], rhs: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Particular solution plus kernel for `a·x = rhs`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Option<RatMatrix>,
    pub kernel: Subspace,
}

/// Solves `a·x = rhs` column by column; `particular` is absent as soon as
/// one column of `rhs` is inconsistent.
pub fn solve_linear(a: &RatMatrix, rhs: &RatMatrix) -> Result<LinearSolution> {
    if a.rows() != rhs.rows() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient matrix has {} rows, right-hand side has {}",
            a.rows(),
            rhs.rows()
        )));
    }
    let n = a.cols();
    let k = rhs.cols();
    let mut aug: Vec<Vec<Rat>> = (0..a.rows())
        .map(|i| a.row(i).iter().chain(rhs.row(i)).cloned().collect())
        .collect();
    let pivots = rref(&mut aug, n + k);
    let consistent = pivots.iter().all(|&p| p < n);
    let particular = consistent.then(|| {
        let mut x = RatMatrix::zeros(n, k);
        for (row, &p) in aug.iter().zip(&pivots) {
            for j in 0..k {
                x.set(p, j, row[n + j].clone());
            }
        }
        x
    });
    let kernel = Subspace::from_vectors(n, nullspace(a.row_vecs(), n));
    Ok(LinearSolution { particular, kernel })
}

pub fn rank_of_rows(rows: Vec<Vec<Rat>>, ncols: usize) -> usize {
    let mut rows = rows;
    rref(&mut rows, ncols).len()
}

/// A subspace of `Q^n` held in canonical reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![Rat::zero(); ambient];
                v[i] = Rat::one();
                v
            })
            .collect();
        Subspace {
            ambient,
            basis,
            pivots: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary (possibly dependent) vectors of length `ambient`.
    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<Rat>>,
    {
        let mut rows: Vec<Vec<Rat>> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let pivots = rref(&mut rows, ambient);
        Subspace {
            ambient,
            basis: rows,
            pivots,
        }
    }

    /// Span of square matrices, flattened row-major.
    pub fn from_matrices<'a, I>(n: usize, mats: I) -> Self
    where
        I: IntoIterator<Item = &'a RatMatrix>,
    {
        Self::from_vectors(n * n, mats.into_iter().map(|m| m.entries().to_vec()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_flat(
            self.dim(),
            self.ambient,
            self.basis.iter().flatten().cloned().collect(),
        )
        .expect("consistent basis")
    }

    /// Basis vectors reshaped as `n×n` matrices (requires `ambient = n²`).
    pub fn basis_matrices(&self, n: usize) -> Vec<RatMatrix> {
        assert_eq!(n * n, self.ambient);
        self.basis
            .iter()
            .map(|v| RatMatrix::from_flat(n, n, v.clone()).expect("square"))
            .collect()
    }

    /// Remainder of `v` after eliminating the pivot columns.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut r = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        r
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(
            v.len(),
            self.ambient,
            "vector length does not match ambient space"
        );
        self.reduce(v).iter().all(Zero::is_zero)
    }

    pub fn contains_matrix(&self, m: &RatMatrix) -> bool {
        self.contains(m.entries())
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[Rat]) -> Vec<Rat> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![Rat::zero(); self.ambient];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Self::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// `{w : ⟨v, w⟩ = 0 for every v in self}`.
    pub fn orthogonal(&self) -> Subspace {
        Self::from_vectors(self.ambient, nullspace(self.basis.clone(), self.ambient))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        self.orthogonal().sum(&other.orthogonal()).orthogonal()
    }

    /// Extends the basis of `self` by canonical vectors of `outer` to a basis
    /// of `outer` and returns the added vectors (a complement of `self` in
    /// `outer`).
    pub fn complement_in(&self, outer: &Subspace) -> Vec<Vec<Rat>> {
        let mut acc = self.clone();
        let mut out = Vec::new();
        for v in outer.vectors() {
            if !acc.contains(v) {
                acc = acc.sum(&Subspace::from_vectors(self.ambient, [v.clone()]));
                out.push(v.clone());
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient: self.ambient,
            basis: self
                .basis
                .iter()
                .map(|v| v.iter().map(ToString::to_string).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SubspaceRepr::deserialize(d)?;
        let mut vectors = Vec::with_capacity(repr.basis.len());
        for v in &repr.basis {
            if v.len() != repr.ambient {
                return Err(D::Error::custom("basis vector length differs from ambient"));
            }
            vectors.push(
                v.iter()
                    .map(|s| {
                        parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
                    })
                    .collect::<std::result::Result<Vec<_>, _>>()?,
            );
        }
        Ok(Subspace::from_vectors(repr.ambient, vectors))
    }
}

/// Coordinates with respect to an arbitrary (not echelonised) list of
/// linearly independent vectors.
#[derive(Clone, Debug)]
pub struct BasisCoords {
    span: Subspace,
    /// `transform[j]` expresses the j-th echelon row in terms of the basis.
    transform: Vec<Vec<Rat>>,
}

impl BasisCoords {
    /// Fails when `basis` is linearly dependent.
    pub fn new(ambient: usize, basis: &[Vec<Rat>]) -> Result<Self> {
        let k = basis.len();
        let mut rows: Vec<Vec<Rat>> = basis
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let mut r = b.clone();
                r.extend((0..k).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut rows, ambient + k);
        if pivots.iter().take_while(|&&p| p < ambient).count() != k {
            return Err(Error::Input("basis vectors are linearly dependent".into()));
        }
        let span = Subspace::from_vectors(ambient, rows.iter().map(|r| r[..ambient].to_vec()));
        let transform = rows.into_iter().map(|r| r[ambient..].to_vec()).collect();
        Ok(BasisCoords { span, transform })
    }

    pub fn len(&self) -> usize {
        self.transform.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transform.is_empty()
    }

    pub fn span(&self) -> &Subspace {
        &self.span
    }

    pub fn coords(&self, v: &[Rat]) -> Option<Vec<Rat>> {
        let echelon = self.span.coords(v)?;
        let mut out = vec![Rat::zero(); self.len()];
        for (c, t) in echelon.iter().zip(&self.transform) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(t) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        Some(out)
    }
}

/// Coordinates on a subquotient `upper / lower` of `Q^n`.
///
/// The quotient is identified with the span of the reduced representatives
/// of `upper` modulo `lower`, which is itself kept in echelon form, so
/// coordinates are read off at its pivot columns.
#[derive(Clone, Debug)]
pub struct QuotientFrame {
    lower: Subspace,
    image: Subspace,
}

impl QuotientFrame {
    pub fn new(upper: &Subspace, lower: &Subspace) -> Self {
        let image = Subspace::from_vectors(
            upper.ambient_dim(),
            upper.vectors().iter().map(|v| lower.reduce(v)),
        );
        QuotientFrame {
            lower: lower.clone(),
            image,
        }
    }

    pub fn dim(&self) -> usize {
        self.image.dim()
    }

    /// Quotient coordinates of `v` (which must lie in `upper`).
    pub fn coords(&self, v: &[Rat]) -> Vec<Rat> {
        let r = self.lower.reduce(v);
        self.image.pivots().iter().map(|&p| r[p].clone()).collect()
    }

    /// A representative in `upper` of the class with coordinates `c`.
    pub fn lift(&self, c: &[Rat]) -> Vec<Rat> {
        self.image.combine(c)
    }

    /// Preimage in `upper` of a subspace given in quotient coordinates.
    pub fn preimage(&self, sub: &Subspace) -> Subspace {
        self.lower.sum(&Subspace::from_vectors(
            self.image.ambient_dim(),
            sub.vectors().iter().map(|c| self.lift(c)),
        ))
    }

    /// Matrix of the linear map induced by `op` on the quotient, acting on
    /// column coordinate vectors.
    pub fn induced<F>(&self, op: F) -> RatMatrix
    where
        F: Fn(&[Rat]) -> Vec<Rat>,
    {
        let d = self.dim();
        let mut m = RatMatrix::zeros(d, d);
        for (j, b) in self.image.vectors().iter().enumerate() {
            for (i, c) in self.coords(&op(b)).into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }
}

/// Solves for a linear map `Q: F^m → sub` (in `sub`'s canonical
/// coordinates) with `Q|_sub = id` and `Q·X = X|_sub·Q` for every operator
/// `X` in `ops` (column convention, `sub` must be invariant under each).
///
/// Returns the kernel of the particular solution (an invariant complement
/// of `sub`) together with a basis of the homogeneous solutions, i.e. the
/// equivariant maps `F^m → sub` vanishing on `sub`. `None` means the system
/// is inconsistent.
pub fn invariant_complement(
    sub: &Subspace,
    ops: &[RatMatrix],
) -> Option<(Subspace, Vec<RatMatrix>)> {
    let m = sub.ambient_dim();
    let k = sub.dim();
    if k == 0 {
        return Some((Subspace::full(m), Vec::new()));
    }
    if k == m {
        return Some((Subspace::zero(m), Vec::new()));
    }
    // Unknown Q is k×m, variable index q*m + j for entry (q, j).
    let nvars = k * m;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (jb, u) in sub.vectors().iter().enumerate() {
        for q in 0..k {
            let mut row = vec![Rat::zero(); nvars];
            for (j, x) in u.iter().enumerate() {
                row[q * m + j] = x.clone();
            }
            rows.push(row);
            rhs.push(if q == jb { Rat::one() } else { Rat::zero() });
        }
    }
    for x in ops {
        // restricted action of X on sub in its coordinates: X u_j = Σ r_ij u_i
        let restricted: Vec<Vec<Rat>> = sub
            .vectors()
            .iter()
            .map(|u| {
                sub.coords(&x.mul_vec(u))
                    .expect("sub must be invariant under ops")
            })
            .collect();
        // (Q X)_{q,i} = Σ_j Q_{q,j} X_{j,i};  (X_sub Q)_{q,i} = Σ_t R_{q,t} Q_{t,i}
        for i in 0..m {
            for q in 0..k {
                let mut row = vec![Rat::zero(); nvars];
                for j in 0..m {
                    let xji = x.get(j, i);
                    if !xji.is_zero() {
                        row[q * m + j] += xji;
                    }
                }
                for (t, col) in restricted.iter().enumerate() {
                    let r_qt = &col[q];
                    if !r_qt.is_zero() {
                        row[t * m + i] -= r_qt;
                    }
                }
                rows.push(row);
                rhs.push(Rat::zero());
            }
        }
    }
    let x = solve_system(&rows, &rhs, nvars)?;
    let to_matrix = |v: &[Rat]| RatMatrix::from_flat(k, m, v.to_vec()).expect("k×m");
    let q = to_matrix(&x);
    let complement = Subspace::from_vectors(m, nullspace(q.row_vecs(), m));
    let homogeneous = nullspace(rows, nvars)
        .iter()
        .map(|v| to_matrix(v))
        .collect();
    Some((complement, homogeneous))
}

/// `{x : x·b = b·x}` for all `b` in `ops` (square, same size).
pub fn centralizer(n: usize, ops: &[RatMatrix]) -> Vec<RatMatrix> {
    let nvars = n * n;
    let mut rows = Vec::new();
    for b in ops {
        for i in 0..n {
            for j in 0..n {
                // (XB - BX)_{ij} = Σ_t X_it B_tj − B_it X_tj
                let mut row = vec![Rat::zero(); nvars];
                for t in 0..n {
                    let btj = b.get(t, j);
                    if !btj.is_zero() {
                        row[i * n + t] += btj;
                    }
                    let bit = b.get(i, t);
                    if !bit.is_zero() {
                        row[t * n + j] -= bit;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    nullspace(rows, nvars)
        .into_iter()
        .map(|v| RatMatrix::from_flat(n, n, v).expect("n×n"))
        .collect()
}

pub fn is_integer_vector(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn abs_max(v: &[Rat]) -> Rat {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_i64(rows)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_exact(&RatMatrix::identity(3)), 3);
        assert_eq!(rank_exact(&RatMatrix::zeros(4, 6)), 0);
        assert_eq!(rank_exact(&m(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn solve_identity() {
        let v = m(&[&[3], &[-1], &[7]]);
        let s = solve_linear(&RatMatrix::identity(3), &v).unwrap();
        assert_eq!(s.particular.unwrap(), v);
        assert!(s.kernel.is_zero());
    }

    #[test]
    fn solve_inconsistent() {
        let s = solve_linear(&RatMatrix::zeros(2, 2), &m(&[&[1], &[0]])).unwrap();
        assert!(s.particular.is_none());
        assert_eq!(s.kernel.dim(), 2);
    }

    #[test]
    fn solve_one_equation() {
        let s = solve_linear(&m(&[&[1, 1]]), &m(&[&[2]])).unwrap();
        assert_eq!(s.particular.unwrap(), m(&[&[2], &[0]]));
        assert_eq!(s.kernel, Subspace::from_vectors(2, [vec![rat(1), rat(-1)]]));
    }

    #[test]
    fn solve_dimension_mismatch() {
        assert!(matches!(
            solve_linear(&RatMatrix::identity(2), &RatMatrix::zeros(3, 1)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rat("1/3"), Some(ratio(1, 3)));
        assert_eq!(parse_rat("-4/6"), Some(ratio(-2, 3)));
        assert_eq!(parse_rat("12"), Some(rat(12)));
        assert_eq!(parse_rat("1/3").unwrap().to_string(), "1/3");
        for bad in ["1.5", "", "1/0", "a", "1/-2", "1 / 2", "--1", "/3"] {
            assert_eq!(parse_rat(bad), None, "{bad}");
        }
    }

    #[test]
    fn intersection_and_sum() {
        let u = Subspace::from_vectors(
            3,
            [vec![rat(1), rat(0), rat(0)], vec![rat(0), rat(1), rat(0)]],
        );
        let w = Subspace::from_vectors(
            3,
            [vec![rat(0), rat(1), rat(0)], vec![rat(0), rat(0), rat(1)]],
        );
        assert_eq!(
            u.intersect(&w),
            Subspace::from_vectors(3, [vec![rat(0), rat(1), rat(0)]])
        );
        assert_eq!(u.sum(&w), Subspace::full(3));
        assert_eq!(u.intersect(&Subspace::zero(3)), Subspace::zero(3));
    }

    #[test]
    fn quotient_frame_coordinates() {
        let upper = Subspace::full(3);
        let lower = Subspace::from_vectors(3, [vec![rat(1), rat(1), rat(0)]]);
        let q = QuotientFrame::new(&upper, &lower);
        assert_eq!(q.dim(), 2);
        let v = vec![rat(2), rat(5), rat(-1)];
        let back = q.lift(&q.coords(&v));
        assert!(lower.contains(&v.iter().zip(&back).map(|(a, b)| a - b).collect::<Vec<_>>()));
    }

    #[test]
    fn basis_coords_in_skewed_basis() {
        let b = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let bc = BasisCoords::new(2, &b).unwrap();
        assert_eq!(bc.coords(&[rat(3), rat(1)]), Some(vec![rat(2), rat(1)]));
        assert!(BasisCoords::new(2, &[b[0].clone(), b[0].clone()]).is_err());
        let line = BasisCoords::new(2, &b[..1]).unwrap();
        assert_eq!(line.coords(&[rat(1), rat(0)]), None);
    }

    #[test]
    fn invariant_complement_of_line() {
        // X = diag(1, 2) preserves the x-axis; its unique invariant complement is the y-axis.
        let x = m(&[&[1, 0], &[0, 2]]);
        let sub = Subspace::from_vectors(2, [vec![rat(1), rat(0)]]);
        let (c, hom) = invariant_complement(&sub, &[x]).unwrap();
        assert_eq!(c, Subspace::from_vectors(2, [vec![rat(0), rat(1)]]));
        assert!(hom.is_empty());
        // No operators: every complement is invariant.
        let (_, hom) = invariant_complement(&sub, &[]).unwrap();
        assert_eq!(hom.len(), 1);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            RatMatrix::from_flat(rows, cols, v.into_iter().map(rat).collect()).unwrap()
        })
    }

    fn rational_vectors(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
        proptest::collection::vec(
            proptest::collection::vec((-4i64..=4, 1i64..=3).prop_map(|(a, b)| ratio(a, b)), n),
            k,
        )
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(a in small_matrix(4, 6)) {
            prop_assert_eq!(rank_exact(&a), rank_exact(&a.transpose()));
        }

        #[test]
        fn canonical_form_is_spanning_set_independent(
            vs in rational_vectors(5, 3),
            mix in proptest::collection::vec(-3i64..=3, 9),
        ) {
            let u = Subspace::from_vectors(5, vs.clone());
            // Recombine with a unimodular-ish upper-triangular mix plus extra redundant vectors.
            let mut other = Vec::new();
            for i in 0..3 {
                let mut v = vs[i].clone();
                for j in (i + 1)..3 {
                    for (x, y) in v.iter_mut().zip(&vs[j]) {
                        *x += rat(mix[i * 3 + j]) * y;
                    }
                }
                other.push(v.iter().map(|x| x * rat(2)).collect::<Vec<_>>());
            }
            other.push(vs[0].iter().zip(&vs[1]).map(|(a, b)| a * rat(mix[0]) + b).collect());
            other.reverse();
            prop_assert_eq!(u, Subspace::from_vectors(5, other));
        }

        #[test]
        fn solve_linear_checks_by_multiplication(a in small_matrix(3, 5), x in small_matrix(5, 1)) {
            let rhs = a.mul(&x);
            let s = solve_linear(&a, &rhs).unwrap();
            let p = s.particular.expect("consistent by construction");
            prop_assert_eq!(a.mul(&p), rhs);
            for v in s.kernel.vectors() {
                prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(s.kernel.dim() + rank_exact(&a), 5);
        }
    }
}
