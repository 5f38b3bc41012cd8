//! Smith normal form over the integers, with the unimodular transforms, and
//! the lattice questions built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
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

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = &self[(i, k)];
                if x.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += x * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        (0..self.cols).map(|j| v.iter().enumerate().map(|(i, x)| x * &self[(i, j)]).sum()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let x = &self[(src, j)] * k;
            self[(dst, j)] += x;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let x = &self[(i, src)] * k;
            self[(i, dst)] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `u * a * v = d` with `u`, `v` unimodular and `d` diagonal, each diagonal
/// entry dividing the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let Some((pi, pj)) = smallest_entry(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut clean = true;
            for i in (t + 1)..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in (t + 1)..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                // fold in any entry the pivot does not divide
                let bad = ((t + 1)..m).find(|&i| ((t + 1)..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                }
            }
            // move the smallest nonzero entry of row t / column t to the pivot
            let mut best = (t, t);
            for i in t..m {
                if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                    best = (t, j);
                }
            }
            d.swap_rows(t, best.0);
            u.swap_rows(t, best.0);
            d.swap_cols(t, best.1);
            v.swap_cols(t, best.1);
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith { u, d, v, rank: t }
}

fn smallest_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            if d[(i, j)].is_zero() {
                continue;
            }
            if best.is_none_or(|b| d[(i, j)].abs() < d[b].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Basis of the integer solutions of `a x = 0`, as vectors.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a);
    (s.rank..a.cols).map(|j| s.v.column(j)).collect()
}

/// Whether `x` is an integer combination of the rows of `a`.
pub fn in_row_lattice(a: &IntMatrix, x: &[BigInt]) -> bool {
    RowLattice::new(a).contains(x)
}

/// The row lattice of a matrix, factored once for repeated membership tests.
#[derive(Debug, Clone)]
pub struct RowLattice {
    cols: usize,
    smith: Option<Smith>,
}

impl RowLattice {
    pub fn new(a: &IntMatrix) -> Self {
        let smith = (a.rows > 0).then(|| smith_normal_form(a));
        RowLattice { cols: a.cols, smith }
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        let Some(s) = &self.smith else {
            return x.iter().all(Zero::is_zero);
        };
        // x = y a  <=>  x v = (y u^-1) d
        let w = s.v.left_apply(x);
        w.iter().enumerate().all(|(i, wi)| if i < s.rank { wi.is_multiple_of(&s.d[(i, i)]) } else { wi.is_zero() })
    }
}

/// Free rank and torsion coefficients (entries > 1) of the cokernel of the
/// row space of `a`, i.e. of `Z^cols / rows(a)`.
pub fn cokernel(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let s = smith_normal_form(a);
    let torsion = s.diagonal().into_iter().filter(|x| !x.is_one()).collect();
    (a.cols - s.rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_unimodular(m: &IntMatrix) -> bool {
        // determinant by fraction-free elimination
        let n = m.rows();
        let mut a = m.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else { return false };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let x = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = x;
                }
            }
            prev = a[(k, k)].clone();
        }
        (sign * prev).abs().is_one()
    }

    #[test]
    fn known_forms() {
        let a = IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);

        let relation = IntMatrix::from_rows(&[vec![0i64, 0, 1, 1, 1, 0]]);
        assert_eq!(cokernel(&relation), (5, vec![]));
        assert!(in_row_lattice(&relation, &big(&[0, 0, 2, 2, 2, 0])));
        assert!(!in_row_lattice(&relation, &big(&[0, 0, 2, 2, 2, 1])));
        assert!(!in_row_lattice(&relation, &big(&[0, 0, 1, 2, 2, 0])));
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = IntMatrix::from_rows(&[vec![2i64, 2, -2], vec![1, 1, -1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(a
                .mul(&IntMatrix::from_rows(&x.iter().map(|v| vec![v.clone()]).collect::<Vec<_>>()))
                .row(0)
                .iter()
                .all(Zero::is_zero));
        }
    }

    proptest! {
        #[test]
        fn transforms_reproduce_diagonal(rows in 1usize..4, cols in 1usize..5, seed in prop::collection::vec(-9i64..10, 20)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * cols + j]).collect()).collect();
            let a = IntMatrix::from_rows(&data);
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).mul(&s.v), s.d.clone());
            prop_assert!(is_unimodular(&s.u));
            prop_assert!(is_unimodular(&s.v));
            let diag = s.diagonal();
            for w in diag.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            for i in 0..rows {
                for j in 0..cols {
                    if i != j || i >= s.rank {
                        prop_assert!(s.d[(i, j)].is_zero());
                    }
                }
            }
            // every row of a lies in its own row lattice
            for i in 0..rows {
                prop_assert!(in_row_lattice(&a, a.row(i)));
            }
        }
    }
}
