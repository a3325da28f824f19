//! Exact arithmetic substrate: half-integers, permutations, and rational
//! matrices with exact rank computation.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An element of ½ℤ, stored as twice its value so that all arithmetic and
/// serialization stay in the integers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger { twice: 0 };

    pub fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    /// True iff the value lies in ℤ.
    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// The integer value, if the element lies in ℤ.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn abs(self) -> Self {
        HalfInteger {
            twice: self.twice.abs(),
        }
    }

    pub fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: Self) -> Self {
        HalfInteger {
            twice: self.twice + rhs.twice,
        }
    }
}

impl AddAssign for HalfInteger {
    fn add_assign(&mut self, rhs: Self) {
        self.twice += rhs.twice;
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: Self) -> Self {
        HalfInteger {
            twice: self.twice - rhs.twice,
        }
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> Self {
        HalfInteger { twice: -self.twice }
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A permutation of {1..n}, stored as the array of images. Index
/// conventions are 1-based throughout.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img == 0 || img > n {
                return Err(Error::Invalid(format!(
                    "permutation image {img} out of range 1..={n}"
                )));
            }
            if seen[img - 1] {
                return Err(Error::Invalid(format!("permutation repeats image {img}")));
            }
            seen[img - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    /// The transposition (i j) in S_n.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::Invalid(format!(
                "bad transposition ({i} {j}) in S_{n}"
            )));
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images[i - 1] = j;
        images[j - 1] = i;
        Ok(Permutation { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// (p∘q)(i) = p(q(i)).
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        if self.n() != q.n() {
            return Err(Error::SizeMismatch(self.n(), q.n()));
        }
        let images = (1..=self.n()).map(|i| self.apply(q.apply(i))).collect();
        Ok(Permutation { images })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.n()];
        for i in 1..=self.n() {
            images[self.apply(i) - 1] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &img)| img == k + 1)
    }

    pub fn is_involution(&self) -> bool {
        (1..=self.n()).all(|i| self.apply(self.apply(i)) == i)
    }

    pub fn is_fixed_point_free(&self) -> bool {
        (1..=self.n()).all(|i| self.apply(i) != i)
    }

    /// The permutation matrix Ṗ with Ṗ[i, p(i)] = 1.
    pub fn matrix(&self) -> RationalMatrix {
        let n = self.n();
        let mut m = RationalMatrix::zeros(n, n);
        for i in 1..=n {
            m.set(i - 1, self.apply(i) - 1, BigRational::one());
        }
        m
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

/// Enumerate all permutations of the given 1-based index set, as full
/// permutations of {1..n} fixing everything outside the set.
pub fn permutations_of_subset(n: usize, subset: &[usize]) -> Vec<Permutation> {
    let mut result = Vec::new();
    let mut current: Vec<usize> = subset.to_vec();
    heap_permutations(&mut current, subset.len(), &mut |arrangement| {
        let mut images: Vec<usize> = (1..=n).collect();
        for (slot, &img) in subset.iter().zip(arrangement.iter()) {
            images[slot - 1] = img;
        }
        result.push(Permutation { images });
    });
    result
}

fn heap_permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(v);
        return;
    }
    for i in 0..k {
        heap_permutations(v, k - 1, f);
        if k.is_multiple_of(2) {
            v.swap(i, k - 1);
        } else {
            v.swap(0, k - 1);
        }
    }
}

/// A dense matrix over ℚ with exact entries.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigRational::from(BigInt::from(x)));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> RationalMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e = -e.clone();
        }
        out
    }

    /// Top-left `rows` x `cols` block.
    pub fn leading_block(&self, rows: usize, cols: usize) -> RationalMatrix {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_skew_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if *self.get(i, j) != -self.get(j, i).clone() {
                    return false;
                }
            }
        }
        true
    }

    /// Rank over ℚ by fraction-free (Bareiss) elimination. Rows are first
    /// scaled to integer entries; scaling does not change the rank.
    pub fn exact_rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    let d = self.get(i, j).denom().clone();
                    lcm = num::integer::lcm(lcm, d);
                }
                (0..self.cols)
                    .map(|j| {
                        let e = self.get(i, j);
                        e.numer() * (&lcm / e.denom())
                    })
                    .collect()
            })
            .collect();

        let mut rank = 0;
        let mut prev_pivot = BigInt::one();
        let mut col = 0;
        while rank < self.rows && col < self.cols {
            let pivot_row = (rank..self.rows).find(|&i| !m[i][col].is_zero());
            let Some(pr) = pivot_row else {
                col += 1;
                continue;
            };
            m.swap(rank, pr);
            for i in rank + 1..self.rows {
                for j in col + 1..self.cols {
                    let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                    m[i][j] = num / &prev_pivot;
                }
                m[i][col] = BigInt::zero();
            }
            prev_pivot = m[rank][col].clone();
            rank += 1;
            col += 1;
        }
        rank
    }

    /// Rank via minor expansion: the largest k with a nonzero k×k minor.
    /// Exponential; intended as an independent oracle for small matrices.
    pub fn rank_by_minors(&self) -> usize {
        let max_k = self.rows.min(self.cols);
        for k in (1..=max_k).rev() {
            let row_sets = combinations(self.rows, k);
            let col_sets = combinations(self.cols, k);
            for rs in &row_sets {
                for cs in &col_sets {
                    if !self.minor(rs, cs).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn minor(&self, rows: &[usize], cols: &[usize]) -> BigRational {
        let k = rows.len();
        if k == 0 {
            return BigRational::one();
        }
        let mut det = BigRational::zero();
        for (idx, &r) in rows.iter().enumerate() {
            let entry = self.get(r, cols[0]);
            if entry.is_zero() {
                continue;
            }
            let sub_rows: Vec<usize> = rows
                .iter()
                .enumerate()
                .filter(|(m, _)| *m != idx)
                .map(|(_, &x)| x)
                .collect();
            let term = entry * self.minor(&sub_rows, &cols[1..]);
            if idx % 2 == 0 {
                det += term;
            } else {
                det -= term;
            }
        }
        det
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// The signed skew-symmetric lift ṡ of a fixed-point-free involution s:
/// ṡ[i, s(i)] = +1 for i < s(i) and −1 for i > s(i). Then ᵗṡ = −ṡ and
/// ṡ² = −I.
pub fn signed_skew_lift(s: &Permutation) -> Result<RationalMatrix> {
    if !s.is_involution() {
        return Err(Error::Invalid("skew lift requires an involution".into()));
    }
    if !s.is_fixed_point_free() {
        return Err(Error::Invalid(
            "skew lift requires a fixed-point-free involution".into(),
        ));
    }
    let n = s.n();
    let mut m = RationalMatrix::zeros(n, n);
    for i in 1..=n {
        let j = s.apply(i);
        let sign = if i < j {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        m.set(i - 1, j - 1, sign);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hi(twice: i64) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    #[test]
    fn half_integer_basics() {
        assert!(hi(3) > hi(2));
        assert_eq!(hi(3) + hi(1), hi(4));
        assert_eq!(-hi(3), hi(-3));
        assert!(hi(4).is_integer());
        assert!(!hi(3).is_integer());
        assert_eq!(hi(3).to_string(), "3/2");
        assert_eq!(hi(4).to_string(), "2");
    }

    #[test]
    fn compose_examples() {
        let t12 = Permutation::transposition(2, 1, 2).unwrap();
        assert!(t12.compose(&t12).unwrap().is_identity());

        let t12 = Permutation::transposition(3, 1, 2).unwrap();
        let t23 = Permutation::transposition(3, 2, 3).unwrap();
        // (12)∘(23): 1→2, 2→3→... (p∘q)(i) = p(q(i)): q=(23), p=(12):
        // 1↦p(1)=2, 2↦p(3)=3, 3↦p(2)=1: the 3-cycle 1→2→3→1.
        let c = t12.compose(&t23).unwrap();
        assert_eq!(c.images(), &[2, 3, 1]);

        let p = Permutation::new(vec![3, 1, 2]).unwrap();
        assert_eq!(Permutation::identity(3).compose(&p).unwrap(), p);
    }

    #[test]
    fn involution_examples() {
        assert!(Permutation::identity(3).is_involution());
        assert!(Permutation::transposition(3, 1, 2).unwrap().is_involution());
        let three_cycle = Permutation::new(vec![2, 3, 1]).unwrap();
        assert!(!three_cycle.is_involution());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(3).exact_rank(), 3);
        assert_eq!(RationalMatrix::zeros(3, 3).exact_rank(), 0);
        let p = Permutation::transposition(3, 1, 3).unwrap();
        assert_eq!(p.matrix().exact_rank(), 3);
    }

    #[test]
    fn rank_handles_rationals() {
        let mut m = RationalMatrix::zeros(2, 2);
        m.set(0, 0, BigRational::new(BigInt::from(1), BigInt::from(2)));
        m.set(0, 1, BigRational::new(BigInt::from(1), BigInt::from(3)));
        m.set(1, 0, BigRational::new(BigInt::from(3), BigInt::from(2)));
        m.set(1, 1, BigRational::new(BigInt::from(1), BigInt::from(1)));
        assert_eq!(m.exact_rank(), 1);
        assert_eq!(m.rank_by_minors(), 1);
    }

    #[test]
    fn skew_lift_examples() {
        let t12 = Permutation::transposition(2, 1, 2).unwrap();
        let m = signed_skew_lift(&t12).unwrap();
        assert_eq!(m, RationalMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 0]]));

        let s = Permutation::new(vec![4, 3, 2, 1]).unwrap(); // (14)(23)
        let m = signed_skew_lift(&s).unwrap();
        let expected = RationalMatrix::from_i64_rows(&[
            vec![0, 0, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, -1, 0, 0],
            vec![-1, 0, 0, 0],
        ]);
        assert_eq!(m, expected);
        assert!(m.is_skew_symmetric());

        assert!(signed_skew_lift(&Permutation::identity(2)).is_err());
    }

    #[test]
    fn skew_lift_squares_to_minus_identity() {
        let s = Permutation::new(vec![2, 1, 4, 3]).unwrap();
        let m = signed_skew_lift(&s).unwrap();
        let sq = m.mul(&m).unwrap();
        assert_eq!(sq, RationalMatrix::identity(4).neg());
    }
}
