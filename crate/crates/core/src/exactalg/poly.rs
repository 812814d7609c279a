//! Univariate rational polynomials: minimal polynomials of matrices,
//! squarefree tests and exact rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{nullspace, Rat, RatMatrix};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly(Vec::new()), Poly::new(r));
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        let lead = d.lead();
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (i, di) in d.0.iter().enumerate() {
                    r[k + i] -= &c * di;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the polynomial has no repeated factor.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.monic()
        } else {
            self.div_rem(&g).0.monic()
        }
    }

    /// Integer polynomial with the same roots (content removed, positive lead).
    fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().is_some_and(|c| c.is_negative()) {
            -1
        } else {
            1
        };
        ints.into_iter().map(|c| c / &g * sign).collect()
    }

    /// All distinct rational roots, ascending.
    ///
    /// Real roots of the squarefree part are isolated with a Sturm sequence;
    /// a rational root `p/q` in lowest terms has `q` dividing the leading
    /// coefficient `a` of the primitive integer form, so once an isolating
    /// interval is shorter than `1/(2a)` its only candidate is `round(a·x)/a`,
    /// which is checked exactly.
    pub fn rational_roots(&self) -> Vec<Rat> {
        let Some(deg) = self.degree() else {
            return Vec::new();
        };
        if deg == 0 {
            return Vec::new();
        }
        let f = self.squarefree_part();
        let a = Rat::from_integer(
            Poly::new(f.0.clone())
                .primitive_integer()
                .last()
                .cloned()
                .unwrap(),
        );
        let sturm = sturm_sequence(&f);
        // Cauchy bound on |roots|.
        let bound = Rat::one()
            + f.0[..f.0.len() - 1]
                .iter()
                .map(|c| c.abs())
                .max()
                .unwrap_or_else(Rat::zero);
        let target = Rat::one() / (Rat::from_integer(BigInt::from(2)) * &a);
        let mut out = Vec::new();
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let count = sign_changes(&sturm, &lo) - sign_changes(&sturm, &hi);
            if count == 0 {
                continue;
            }
            if count == 1 && &hi - &lo < target {
                // unique root in (lo, hi]; try the single candidate with denominator a
                for cand in [(&lo * &a).ceil(), (&hi * &a).floor()] {
                    let x = cand / &a;
                    if x > lo && x <= hi && f.eval(&x).is_zero() && !out.contains(&x) {
                        out.push(x);
                    }
                }
                continue;
            }
            let mid = (&lo + &hi) / Rat::from_integer(BigInt::from(2));
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort();
        out
    }
}

fn sturm_sequence(f: &Poly) -> Vec<Poly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(Poly(r.0.into_iter().map(|c| -c).collect()));
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rat) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Minimal polynomial of a square matrix (monic), found as the first linear
/// dependency among `I, M, M², …`.
pub fn min_poly(m: &RatMatrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return Poly::new(vec![Rat::one()]);
    }
    let mut powers = vec![RatMatrix::identity(n)];
    loop {
        let k = powers.len();
        let next = powers[k - 1].mul(m);
        powers.push(next);
        // columns = powers; find kernel of the n²×(k+1) system
        let rows: Vec<Vec<Rat>> = (0..n * n)
            .map(|e| powers.iter().map(|p| p.entries()[e].clone()).collect())
            .collect();
        let ker = nullspace(rows, k + 1);
        if let Some(v) = ker.into_iter().find(|v| !v[k].is_zero()) {
            return Poly::new(v).monic();
        }
    }
}
