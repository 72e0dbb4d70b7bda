//! Exact rational matrices: fraction-free rank and determinant, solving,
//! nullspaces and integer Hermite normal form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rat = BigRational;

/// Rational from an integer pair, `den != 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// A dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Input("matrix rows have unequal lengths".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Clears denominators row by row, returning an integer matrix with the
    /// same rank (and determinant up to the returned factor product).
    fn cleared(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut out = Vec::with_capacity(self.rows);
        let mut factors = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut lcm = BigInt::one();
            for j in 0..self.cols {
                lcm = lcm.lcm(self[(i, j)].denom());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|j| {
                    let e = &self[(i, j)];
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            out.push(row);
            factors.push(lcm);
        }
        (out, factors)
    }

    /// Exact rank over the rationals via fraction-free (Bareiss) elimination
    /// on the denominator-cleared integer matrix.
    pub fn rank(&self) -> usize {
        let (mut m, _) = self.cleared();
        bareiss_rank(&mut m)
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        if self.rows == 0 {
            return Rat::one();
        }
        let (mut m, factors) = self.cleared();
        let d = bareiss_det(&mut m);
        let mut denom = BigInt::one();
        for f in factors {
            denom *= f;
        }
        Rat::new(d, denom)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`. Returns `None`
    /// when the matrix is singular.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(rhs.len(), self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            a.swap_rows(col, pivot);
            b.swap(col, pivot);
            let p = a[(col, col)].clone();
            for j in col..n {
                a[(col, j)] /= &p;
            }
            b[col] /= &p;
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)].clone();
                    for j in col..n {
                        let sub = &f * &a[(col, j)];
                        a[(r, j)] -= sub;
                    }
                    let sub = &f * &b[col];
                    b[r] -= sub;
                }
            }
        }
        Some(b)
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].clone();
            for j in c..self.cols {
                self[(r, j)] /= &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let sub = &f * &self[(r, j)];
                        self[(i, j)] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of the right nullspace `{x : self x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Rat::zero(); self.cols];
            vec[free] = Rat::one();
            for (col, &pr) in pivot_set.iter().enumerate() {
                if let Some(row) = pr {
                    vec[col] = -m[(row, free)].clone();
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Any nonzero rational vector `y` with `yᵀ · self = 0`, if one exists.
    pub fn left_kernel_vector(&self) -> Option<Vec<Rat>> {
        self.transpose().nullspace().into_iter().next()
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank of an integer matrix by Bareiss elimination. The matrix is consumed
/// as scratch space; no fractions appear at any point.
fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col].clone();
        for r in row + 1..rows {
            for c in col + 1..cols {
                let t = &pivot * &m[r][c] - &m[r][col] * &m[row][c];
                m[r][c] = &t / &prev; // exact by Bareiss
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        row += 1;
    }
    rank
}

/// Determinant of a square integer matrix by Bareiss elimination.
fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if p != col {
            m.swap(col, p);
            sign = -sign;
        }
        let pivot = m[col][col].clone();
        for r in col + 1..n {
            for c in col + 1..n {
                let t = &pivot * &m[r][c] - &m[r][col] * &m[col][c];
                m[r][c] = &t / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Row-style Hermite normal form of an integer matrix: returns `H` with the
/// same row lattice, rows echelonized with positive pivots and entries above
/// each pivot reduced. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut pivot_row = 0;
    for col in 0..cols {
        // gcd out the column below pivot_row
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if !m[r][col].is_zero() {
                    let better = match best {
                        None => true,
                        Some(b) => m[r][col].abs() < m[b][col].abs(),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            let pivot = m[pivot_row][col].clone();
            for r in pivot_row + 1..m.len() {
                if !m[r][col].is_zero() {
                    let q = div_round(&m[r][col], &pivot);
                    if !q.is_zero() {
                        for c in 0..cols {
                            let sub = &q * &m[pivot_row][c];
                            m[r][c] -= sub;
                        }
                    }
                    if !m[r][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m.len() && !m[pivot_row][col].is_zero() {
            if m[pivot_row][col].is_negative() {
                for c in 0..cols {
                    m[pivot_row][c] = -m[pivot_row][c].clone();
                }
            }
            // reduce entries above the pivot
            let pivot = m[pivot_row][col].clone();
            for r in 0..pivot_row {
                let q = m[r][col].div_floor(&pivot);
                if !q.is_zero() {
                    for c in 0..cols {
                        let sub = &q * &m[pivot_row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    m
}

/// Rounded division for HNF reduction steps.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = a.div_rem(b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + BigInt::one()
        } else {
            q - BigInt::one()
        }
    } else {
        q
    }
}

/// Divides an integer vector by the gcd of its entries, preserving signs.
/// A zero vector is returned unchanged.
pub fn gcd_reduce(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for e in v {
        g = g.gcd(e);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    v.iter().map(|e| e / &g).collect()
}

/// As [`gcd_reduce`] but additionally makes the first nonzero entry
/// positive, giving a canonical representative of the line through `v`.
pub fn primitive_integer_vector(v: &[BigInt]) -> Vec<BigInt> {
    let mut out = gcd_reduce(v);
    if let Some(first) = out.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut out {
                *e = -e.clone();
            }
        }
    }
    out
}

/// Clears denominators of a rational vector into a gcd-reduced integer
/// vector pointing in the same direction.
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for e in v {
        lcm = lcm.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|e| e.numer() * (&lcm / e.denom())).collect();
    gcd_reduce(&ints)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_identity() {
        assert_eq!(m(&[&[1, 0], &[0, 1]]).rank(), 2);
    }

    #[test]
    fn rank_proportional_rows() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn det_small() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), rat_int(-1));
        assert_eq!(
            m(&[&[-1, -1, -1], &[3, 3, 1], &[3, 0, 3]]).det(),
            rat_int(6)
        );
    }

    #[test]
    fn solve_roundtrip() {
        let a = m(&[&[1, -1], &[0, 5]]);
        let x = a.solve(&[rat_int(4), rat_int(5)]).unwrap();
        assert_eq!(x, vec![rat_int(5), rat_int(1)]);
        assert!(m(&[&[1, 2], &[2, 4]]).solve(&[rat_int(1), rat_int(1)]).is_none());
    }

    #[test]
    fn nullspace_checks() {
        let a = m(&[&[1, 2, 3]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s: Rat = (0..3).map(|j| &a[(0, j)] * &v[j]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn hnf_lattice() {
        // l1 + l2 even: lattice spanned by (1,1),(0,2)
        let rows = vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(2)],
        ];
        let h = hermite_normal_form(&rows);
        assert_eq!(
            h,
            vec![
                vec![BigInt::from(1), BigInt::from(1)],
                vec![BigInt::from(0), BigInt::from(2)]
            ]
        );
    }

    #[test]
    fn primitive_vector() {
        let v = vec![BigInt::from(-4), BigInt::from(6)];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(2), BigInt::from(-3)]
        );
        // sign normalization makes the leading entry positive
        let w = vec![BigInt::from(-2), BigInt::from(4)];
        let p = primitive_integer_vector(&w);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-2)]);
    }
}
