//! Permutations, partitions, Young tableaux and the rational group algebra
//! of the symmetric group.
//!
//! Points are numbered from 0. A multilinear monomial `x_{σ(0)}⋯x_{σ(n-1)}`
//! is identified with the permutation `σ`; renaming variables by `τ` sends it
//! to the monomial of `τ∘σ`, so the symmetric group acts by left
//! multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::Rat;

/// A permutation of `{0, …, n-1}` stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        assert!(
            n <= 256,
            "permutations of more than 256 points are not supported"
        );
        Perm((0..n).map(|i| i as u8).collect())
    }

    /// Fails unless `images` is a bijection of `{0, …, len-1}`.
    pub fn from_images(images: &[usize]) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in images {
            if i >= n || seen[i] {
                return Err(Error::Input(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Perm(images.iter().map(|&i| i as u8).collect()))
    }

    /// Exchanges `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Perm {
        let mut p = Perm::identity(n);
        p.0.swap(i, j);
        p
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.0.iter().map(|&i| i as usize).collect()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p as usize] = i as u8;
        }
        Perm(inv)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.0.len()];
        let mut transpositions = 0;
        for start in 0..self.0.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        if transpositions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position of the permutation in the lexicographic order of all images.
    pub fn lex_index(&self) -> usize {
        let n = self.0.len();
        let mut index = 0;
        for i in 0..n {
            let smaller = self.0[i + 1..].iter().filter(|&&x| x < self.0[i]).count();
            index = index * (n - i) + smaller;
        }
        index
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<u8> = (0..n as u16).map(|i| i as u8).collect();
        loop {
            out.push(Perm(cur.clone()));
            // next permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// A partition `λ_1 ≥ λ_2 ≥ … > 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Partition> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input(format!("{parts:?} is not a partition")));
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.0.len()
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.0.first().copied().unwrap_or(0);
        Partition(
            (0..cols)
                .map(|j| self.0.iter().filter(|&&p| p > j).count())
                .collect(),
        )
    }

    /// Hook length of every cell, row by row.
    pub fn hooks(&self) -> Vec<Vec<usize>> {
        let conj = self.conjugate();
        self.0
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                (0..len)
                    .map(|j| (len - j - 1) + (conj.0[j] - i - 1) + 1)
                    .collect()
            })
            .collect()
    }

    /// Partitions obtained by removing one corner cell.
    pub fn remove_one_box(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        for i in 0..self.0.len() {
            if i + 1 == self.0.len() || self.0[i + 1] < self.0[i] {
                let mut p = self.0.clone();
                p[i] -= 1;
                if p[i] == 0 {
                    p.pop();
                }
                out.push(Partition(p));
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n` in reverse-lexicographic order, `(n)` first.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=max.min(rest)).rev() {
            prefix.push(part);
            rec(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Dimension of the irreducible `S_n`-module of shape `λ` by the hook formula.
pub fn hook_dimension(lambda: &Partition) -> BigUint {
    let factorial = (1..=lambda.n()).fold(BigUint::one(), |acc, k| acc * BigUint::from(k));
    let product = lambda
        .hooks()
        .iter()
        .flatten()
        .fold(BigUint::one(), |acc, &h| acc * BigUint::from(h));
    assert!(
        (&factorial % &product).is_zero(),
        "hook product does not divide n!"
    );
    factorial / product
}

/// A filling of a Young diagram with `0, …, n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tableau {
    shape: Partition,
    fill: Vec<Vec<usize>>,
}

impl Tableau {
    /// Row-major filling: the first row holds `0, …, λ_1 - 1`, and so on.
    pub fn canonical(shape: &Partition) -> Tableau {
        let mut next = 0;
        let fill = shape
            .parts()
            .iter()
            .map(|&len| {
                let row: Vec<usize> = (next..next + len).collect();
                next += len;
                row
            })
            .collect();
        Tableau {
            shape: shape.clone(),
            fill,
        }
    }

    pub fn new(shape: &Partition, fill: Vec<Vec<usize>>) -> Result<Tableau> {
        let n = shape.n();
        let shape_ok = fill.len() == shape.rows()
            && fill
                .iter()
                .zip(shape.parts())
                .all(|(row, &len)| row.len() == len);
        let mut seen = vec![false; n];
        let bijective = fill
            .iter()
            .flatten()
            .all(|&x| x < n && !std::mem::replace(&mut seen[x], true));
        if !shape_ok || !bijective {
            return Err(Error::Input(
                "filling does not match the shape bijectively".into(),
            ));
        }
        Ok(Tableau {
            shape: shape.clone(),
            fill,
        })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn fill(&self) -> &[Vec<usize>] {
        &self.fill
    }

    fn columns(&self) -> Vec<Vec<usize>> {
        let width = self.shape.parts().first().copied().unwrap_or(0);
        (0..width)
            .map(|j| {
                self.fill
                    .iter()
                    .filter_map(|row| row.get(j).copied())
                    .collect()
            })
            .collect()
    }

    /// `a_T`: sum of the row stabiliser.
    pub fn row_symmetrizer(&self) -> GroupAlgebraElement {
        block_sum(self.shape.n(), &self.fill, false)
    }

    /// `b_T`: signed sum of the column stabiliser.
    pub fn column_antisymmetrizer(&self) -> GroupAlgebraElement {
        block_sum(self.shape.n(), &self.columns(), true)
    }
}

/// Sum (signed when `signed`) over the product of the symmetric groups of
/// the given disjoint blocks.
fn block_sum(n: usize, blocks: &[Vec<usize>], signed: bool) -> GroupAlgebraElement {
    let mut acc = GroupAlgebraElement::identity(n);
    for block in blocks.iter().filter(|b| b.len() > 1) {
        let mut part = GroupAlgebraElement::zero(n);
        for local in Perm::all(block.len()) {
            let mut images: Vec<usize> = (0..n).collect();
            for (k, &point) in block.iter().enumerate() {
                images[point] = block[local.image(k)];
            }
            let p = Perm::from_images(&images).expect("block permutation");
            let c = if signed {
                Rat::from_integer(local.sign().into())
            } else {
                Rat::one()
            };
            part.add_term(p, c);
        }
        acc = acc.mul(&part);
    }
    acc
}

/// Sparse element of the rational group algebra `Q[S_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    n: usize,
    terms: BTreeMap<Perm, Rat>,
}

impl GroupAlgebraElement {
    pub fn zero(n: usize) -> Self {
        GroupAlgebraElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_perm(Perm::identity(n))
    }

    pub fn from_perm(p: Perm) -> Self {
        let n = p.degree();
        let mut terms = BTreeMap::new();
        terms.insert(p, Rat::one());
        GroupAlgebraElement { n, terms }
    }

    /// The multilinear monomial `x_{i_0} x_{i_1} ⋯`, `word` a permutation of
    /// `0..n`.
    pub fn monomial(word: &[usize]) -> Result<Self> {
        Ok(Self::from_perm(Perm::from_images(word)?))
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Perm, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &Perm) -> Rat {
        self.terms.get(p).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, p: Perm, c: Rat) {
        assert_eq!(p.degree(), self.n);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(p);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        GroupAlgebraElement {
            n: self.n,
            terms: self.terms.iter().map(|(p, c)| (p.clone(), c * s)).collect(),
        }
    }

    /// Product `self · other`, extending `σ·τ = σ∘τ` bilinearly.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut acc: std::collections::HashMap<Perm, Rat> = std::collections::HashMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &other.terms {
                *acc.entry(p.compose(q)).or_insert_with(Rat::zero) += a * b;
            }
        }
        GroupAlgebraElement {
            n: self.n,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// `c` with `self² = c·self`, if such a scalar exists.
    pub fn quasi_idempotent_constant(&self) -> Option<Rat> {
        let sq = self.mul(self);
        let (p, c) = self.terms.iter().next()?;
        let k = sq.coefficient(p) / c;
        (sq == self.scale(&k)).then_some(k)
    }
}

/// `e*_T = b_T · a_T`.
pub fn young_symmetrizer_star(t: &Tableau) -> GroupAlgebraElement {
    t.column_antisymmetrizer().mul(&t.row_symmetrizer())
}

/// `e_T = a_T · b_T`.
pub fn young_symmetrizer(t: &Tableau) -> GroupAlgebraElement {
    t.row_symmetrizer().mul(&t.column_antisymmetrizer())
}

/// Alternation over the variables `vars` (0-based):
/// `Σ_τ sign(τ)·τ·f`, with `τ` running over permutations of `vars`.
pub fn alternate(f: &GroupAlgebraElement, vars: &[usize]) -> Result<GroupAlgebraElement> {
    let n = f.degree();
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != vars.len() {
        return Err(Error::Input("alternated variables must be distinct".into()));
    }
    if let Some(&bad) = vars.iter().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            limit: n,
        });
    }
    Ok(block_sum(n, &[vars.to_vec()], true).mul(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    /// Number of partitions of `n` into parts of size at most `k`.
    fn count(n: usize, k: usize) -> usize {
        if n == 0 {
            return 1;
        }
        if k == 0 {
            return 0;
        }
        count(n, k - 1) + if k <= n { count(n - k, k) } else { 0 }
    }

    /// Standard Young tableaux counted by removing the cell holding `n`.
    fn standard_tableaux(p: &Partition) -> usize {
        if p.n() == 0 {
            return 1;
        }
        p.remove_one_box().iter().map(standard_tableaux).sum()
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions_of(0), vec![part(&[])]);
        assert_eq!(
            partitions_of(3),
            vec![part(&[3]), part(&[2, 1]), part(&[1, 1, 1])]
        );
        assert_eq!(partitions_of(8).len(), count(8, 8));
        assert_eq!(partitions_of(8).len(), 22);
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(hook_dimension(&part(&[5])), BigUint::from(1u32));
        assert_eq!(hook_dimension(&part(&[1, 1, 1])), BigUint::from(1u32));
        assert_eq!(
            hook_dimension(&part(&[2, 2])),
            BigUint::from(standard_tableaux(&part(&[2, 2])))
        );
        assert_eq!(hook_dimension(&part(&[2, 2])), BigUint::from(2u32));
        for n in 0..=8 {
            for p in partitions_of(n) {
                assert_eq!(
                    hook_dimension(&p),
                    BigUint::from(standard_tableaux(&p)),
                    "{p}"
                );
            }
        }
    }

    #[test]
    fn permutation_basics() {
        let a = Perm::from_images(&[1, 2, 0]).unwrap();
        let b = Perm::transposition(3, 0, 1);
        assert_eq!(a.compose(&b).images(), vec![2, 1, 0]);
        assert_eq!(a.compose(&a.inverse()), Perm::identity(3));
        assert_eq!(a.sign(), 1);
        assert_eq!(b.sign(), -1);
        let all = Perm::all(4);
        assert_eq!(all.len(), 24);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(p.lex_index(), i);
        }
        assert!(Perm::from_images(&[0, 0]).is_err());
    }

    #[test]
    fn symmetrizers_of_one_row_and_one_column() {
        let row = young_symmetrizer_star(&Tableau::canonical(&part(&[4])));
        assert_eq!(row.len(), 24);
        assert!(row.terms().all(|(_, c)| *c == rat(1)));
        let col = young_symmetrizer_star(&Tableau::canonical(&part(&[1, 1, 1, 1])));
        assert_eq!(col.len(), 24);
        assert!(col.terms().all(|(p, c)| *c == rat(p.sign() as i64)));
    }

    /// (2,1) with rows {0,1} and columns {0,2}: (1 − (02))(1 + (01)).
    #[test]
    fn symmetrizer_two_one() {
        let t = Tableau::canonical(&part(&[2, 1]));
        let e = young_symmetrizer_star(&t);
        let id = Perm::identity(3);
        let s01 = Perm::transposition(3, 0, 1);
        let s02 = Perm::transposition(3, 0, 2);
        let mut expected = GroupAlgebraElement::zero(3);
        expected.add_term(id.clone(), rat(1));
        expected.add_term(s01.clone(), rat(1));
        expected.add_term(s02.clone(), rat(-1));
        expected.add_term(s02.compose(&s01), rat(-1));
        assert_eq!(e, expected);
        assert_eq!(e.len(), 4);
        assert_eq!(e.quasi_idempotent_constant(), Some(rat(3)));
    }

    #[test]
    fn quasi_idempotence_small() {
        for n in 1..=4 {
            for p in partitions_of(n) {
                let c = young_symmetrizer_star(&Tableau::canonical(&p)).quasi_idempotent_constant();
                assert!(c.is_some_and(|c| !c.is_zero()), "{p}");
            }
        }
    }

    #[test]
    fn alternation() {
        let f = GroupAlgebraElement::monomial(&[0, 1]).unwrap();
        let alt = alternate(&f, &[0, 1]).unwrap();
        let expected = f.sub(&GroupAlgebraElement::monomial(&[1, 0]).unwrap());
        assert_eq!(alt, expected);
        let g = GroupAlgebraElement::monomial(&[2, 0, 1]).unwrap();
        assert_eq!(alternate(&g, &[1]).unwrap(), g);
        let once = alternate(&g, &[0, 2]).unwrap();
        assert_eq!(alternate(&once, &[0, 2]).unwrap(), once.scale(&rat(2)));
        assert!(alternate(&g, &[3]).is_err());
    }

    proptest! {
        #[test]
        fn composition_is_associative(
            a in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
            b in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        ) {
            let p = Perm::from_images(&a).unwrap();
            let q = Perm::from_images(&b).unwrap();
            let r = p.compose(&q);
            prop_assert_eq!(r.compose(&p).compose(&q), r.compose(&p.compose(&q)));
            prop_assert_eq!(r.sign(), p.sign() * q.sign());
        }
    }
}
