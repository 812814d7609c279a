use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RatMatrix;
use crate::error::{Error, Result};

/// Rank over the rationals.
pub fn rank_exact(m: &RatMatrix) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let row = RatMatrix::from_flat(1, m.cols(), m.row(i).to_vec()).expect("row");
            row.to_integer_scaled()
        })
        .collect();
    bareiss_rank(rows)
}

/// Fraction-free (Bareiss) elimination rank of an integer matrix.
pub fn bareiss_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        tail.par_iter_mut().for_each(|row| {
            let f = row[c].clone();
            for j in c..ncols {
                let mut v = &row[j] * pivot;
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    v -= &f * &pivot_row[j];
                }
                // exact division by the previous pivot
                row[j] = if prev_is_one(&prev) { v } else { v / &prev };
            }
        });
        prev = rows[r][c].clone();
        r += 1;
    }
    r
}

fn prev_is_one(x: &BigInt) -> bool {
    x.magnitude().bits() == 1 && x.sign() == Sign::Plus
}

/// Arithmetic modulo an odd prime below 2^62 in Montgomery form.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
    /// -p^{-1} mod 2^64
    neg_inv: u64,
    /// 2^128 mod p
    r2: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(
            p % 2 == 1 && p < (1 << 62),
            "modulus must be odd and below 2^62"
        );
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        PrimeField {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Product of two values in Montgomery form.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    /// Montgomery form of `x mod p`.
    #[inline]
    pub fn from_u64(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let v = self.from_u64(x.unsigned_abs());
        if x < 0 {
            self.sub(0, v)
        } else {
            v
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        if let Some(v) = x.to_i64() {
            return self.from_i64(v);
        }
        let r = (x % BigInt::from(self.p)).to_i64().expect("residue fits");
        self.from_i64(r)
    }

    pub fn to_u64(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn one(&self) -> u64 {
        self.from_u64(1)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `count` distinct primes in (2^60, 2^62) drawn from a seeded generator.
pub fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.gen_range((1u64 << 60) + 1..(1u64 << 62)) | 1;
        if is_prime_u64(candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Result of a multi-prime rank computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularRank {
    pub rank: usize,
    pub primes: Vec<u64>,
    pub per_prime: Vec<usize>,
}

/// Incremental echelon basis modulo one prime.
struct ModEchelon {
    field: PrimeField,
    width: usize,
    /// (pivot column, row normalised to 1 at the pivot)
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    fn new(field: PrimeField, width: usize) -> Self {
        ModEchelon {
            field,
            width,
            rows: Vec::new(),
        }
    }

    /// Reduces `row` (Montgomery form) against the basis and keeps it if it
    /// is independent. Returns whether the rank grew.
    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        if self.rows.len() == self.width {
            return false;
        }
        let f = self.field;
        for (pc, prow) in &self.rows {
            let factor = row[*pc];
            if factor == 0 {
                continue;
            }
            for j in *pc..self.width {
                let b = prow[j];
                if b != 0 {
                    row[j] = f.sub(row[j], f.mul(factor, b));
                }
            }
        }
        let Some(pc) = row.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(row[pc]);
        for x in row[pc..].iter_mut() {
            if *x != 0 {
                *x = f.mul(*x, inv);
            }
        }
        self.rows.push((pc, row));
        true
    }
}

/// Rows that can be produced directly modulo a prime, so large evaluation
/// matrices never have to be materialised over the integers.
pub trait ModularRows: Sync {
    fn width(&self) -> usize;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    /// Writes row `index` reduced modulo `field` (Montgomery form) into `out`.
    fn write_row(&self, index: usize, field: &PrimeField, out: &mut [u64]);
}

/// Rank of `source` modulo each of `primes` random primes; the maximum over
/// primes is a lower bound on the rational rank.
pub fn rank_modular_rows(source: &dyn ModularRows, primes: usize, seed: u64) -> ModularRank {
    rank_modular_rows_with_pivots(source, primes, seed).0
}

/// Like [`rank_modular_rows`], also returning the indices of the rows that
/// formed the echelon basis for the prime attaining the maximum.
pub fn rank_modular_rows_with_pivots(
    source: &dyn ModularRows,
    primes: usize,
    seed: u64,
) -> (ModularRank, Vec<usize>) {
    let ps = random_primes(primes.max(1), seed);
    let width = source.width();
    let results: Vec<(usize, Vec<usize>)> = ps
        .par_iter()
        .map(|&p| {
            let field = PrimeField::new(p);
            let mut ech = ModEchelon::new(field, width);
            let mut kept = Vec::new();
            let mut buf = vec![0u64; width];
            for i in 0..source.len() {
                source.write_row(i, &field, &mut buf);
                if ech.insert(buf.clone()) {
                    kept.push(i);
                }
            }
            (ech.rows.len(), kept)
        })
        .collect();
    let per_prime: Vec<usize> = results.iter().map(|r| r.0).collect();
    let best = (0..results.len())
        .max_by_key(|&i| (results[i].0, std::cmp::Reverse(i)))
        .unwrap();
    let rank = per_prime[best];
    (
        ModularRank {
            rank,
            primes: ps,
            per_prime,
        },
        results[best].1.clone(),
    )
}

/// Multi-prime rank of a stream of integer rows. Every row is reduced
/// modulo all primes as it arrives; rows are not retained.
pub fn rank_modular<I>(rows: I, primes: usize, seed: u64) -> Result<ModularRank>
where
    I: IntoIterator<Item = Vec<BigInt>>,
{
    let ps = random_primes(primes.max(1), seed);
    let mut width: Option<usize> = None;
    let mut echelons: Vec<ModEchelon> = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        match width {
            None => {
                width = Some(row.len());
                echelons = ps
                    .iter()
                    .map(|&p| ModEchelon::new(PrimeField::new(p), row.len()))
                    .collect();
            }
            Some(w) if w != row.len() => {
                return Err(Error::WidthMismatch {
                    row: i,
                    expected: w,
                    found: row.len(),
                })
            }
            Some(_) => {}
        }
        echelons.par_iter_mut().for_each(|e| {
            let reduced = row.iter().map(|x| e.field.from_bigint(x)).collect();
            e.insert(reduced);
        });
    }
    let per_prime: Vec<usize> = if echelons.is_empty() {
        vec![0; ps.len()]
    } else {
        echelons.iter().map(|e| e.rows.len()).collect()
    };
    let rank = per_prime.iter().copied().max().unwrap_or(0);
    Ok(ModularRank {
        rank,
        primes: ps,
        per_prime,
    })
}
