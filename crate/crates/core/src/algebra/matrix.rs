//! Dense matrices over a commutative ring, determinants and minors.

use super::mpoly::{MPoly, Vars};
use super::series::Ring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    entries: Vec<C>,
}

/// A matrix of polynomials, e.g. a Jacobian.
pub type QMatrix = Matrix<MPoly>;

impl<C: Ring> Matrix<C> {
    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidData("matrix rows differ in length".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Matrix<D> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<D: Ring>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Matrix<D>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.iter().any(|&i| i >= self.rows) || cols.iter().any(|&j| j >= self.cols) {
            return Err(Error::OutOfRange("minor index outside the matrix".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Ok(Matrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidData("matrix shapes do not compose".into()));
        }
        let zero = self.entries.first().or(other.entries.first()).map(|c| c.zero_like());
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = match &zero {
                    Some(z) => z.clone(),
                    None => unreachable!("nonempty product has entries"),
                };
                for k in 0..self.cols {
                    acc = acc.plus(&self.get(i, k).times(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Determinant by cofactor expansion along the sparsest row.
    pub fn det(&self) -> Result<C> {
        if self.rows != self.cols {
            return Err(Error::InvalidData("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Err(Error::InvalidData("determinant of an empty matrix".into()));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_rec(&idx, &idx))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> C {
        if rows.len() == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        if rows.len() == 2 {
            let (a, b) = (self.get(rows[0], cols[0]), self.get(rows[0], cols[1]));
            let (c, d) = (self.get(rows[1], cols[0]), self.get(rows[1], cols[1]));
            return a.times(d).minus(&b.times(c));
        }
        let pivot = (0..rows.len())
            .max_by_key(|&r| {
                let zeros = cols
                    .iter()
                    .filter(|&&c| self.get(rows[r], c).is_zero_elem())
                    .count();
                (zeros, usize::MAX - r)
            })
            .unwrap();
        let rest: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != pivot)
            .map(|(_, &r)| r)
            .collect();
        let mut acc = self.get(rows[0], cols[0]).zero_like();
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(rows[pivot], c);
            if a.is_zero_elem() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.times(&self.det_rec(&rest, &sub_cols));
            acc = if (pivot + k) % 2 == 0 {
                acc.plus(&term)
            } else {
                acc.minus(&term)
            };
        }
        acc
    }

    /// The adjugate, so that `adj(M) · M = det(M) · I`.
    pub fn adjugate(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols || n == 0 {
            return Err(Error::InvalidData("adjugate of a non-square matrix".into()));
        }
        if n == 1 {
            return Matrix::from_rows(vec![vec![self.get(0, 0).one_like()]]);
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                let minor = self.det_rec(&rows, &cols);
                entries.push(if (i + j) % 2 == 0 { minor } else { minor.negate() });
            }
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            entries,
        })
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C]) -> Result<Vec<C>> {
        if v.len() != self.cols || self.cols == 0 {
            return Err(Error::InvalidData("vector length does not match the matrix".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).times(&v[0]);
                for (j, x) in v.iter().enumerate().skip(1) {
                    acc = acc.plus(&self.get(i, j).times(x));
                }
                acc
            })
            .collect())
    }

    /// All `m x m` minors, ordered lexicographically by (row set, column set).
    pub fn minors(&self, m: usize) -> Result<Vec<C>> {
        if m == 0 || m > self.rows.min(self.cols) {
            return Err(Error::OutOfRange(format!(
                "minor size {m} outside 1..={}",
                self.rows.min(self.cols)
            )));
        }
        let row_sets = combinations(self.rows, m);
        let col_sets = combinations(self.cols, m);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for r in &row_sets {
            for c in &col_sets {
                out.push(self.det_rec(r, c));
            }
        }
        Ok(out)
    }
}

impl QMatrix {
    /// The Jacobian `(∂f_i/∂x_j)` of polynomials over a common ring.
    pub fn jacobian(polys: &[MPoly], vars: &Vars) -> Result<QMatrix> {
        let rows = polys
            .iter()
            .map(|f| {
                let f = f.to_ring(vars)?;
                Ok((0..vars.len()).map(|j| f.derivative(j)).collect())
            })
            .collect::<Result<Vec<Vec<MPoly>>>>()?;
        if rows.is_empty() {
            return Err(Error::InvalidData("jacobian of an empty list".into()));
        }
        Matrix::from_rows(rows)
    }
}

/// The `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::rational::int;
    use crate::algebra::Rational;
    use proptest::prelude::*;

    fn polys(src: &[&str], v: &Vars) -> Vec<MPoly> {
        src.iter().map(|s| parse_poly(s, v).unwrap()).collect()
    }

    #[test]
    fn gradient_row_minors() {
        let v = Vars::new(["x", "y", "z"]);
        let f = parse_poly("x^2 - z*y^2", &v).unwrap();
        let j = QMatrix::jacobian(&[f], &v).unwrap();
        assert_eq!(j.minors(1).unwrap(), polys(&["2*x", "-2*y*z", "-y^2"], &v));
    }

    #[test]
    fn identity_and_blowup_minors() {
        let v = Vars::new(["u", "v"]);
        let id = Matrix::from_rows(vec![polys(&["1", "0"], &v), polys(&["0", "1"], &v)]).unwrap();
        assert_eq!(id.minors(2).unwrap(), polys(&["1"], &v));
        let j = QMatrix::jacobian(&polys(&["u", "u*v"], &v), &v).unwrap();
        assert_eq!(j, Matrix::from_rows(vec![polys(&["1", "0"], &v), polys(&["v", "u"], &v)]).unwrap());
        assert_eq!(j.minors(2).unwrap(), polys(&["u"], &v));
    }

    #[test]
    fn minor_size_out_of_range() {
        let m = Matrix::from_rows(vec![vec![int(1), int(2)]]).unwrap();
        assert!(matches!(m.minors(2), Err(Error::OutOfRange(_))));
        assert!(matches!(m.minors(0), Err(Error::OutOfRange(_))));
        assert!(m.submatrix(&[1], &[0]).is_err());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert!(combinations(2, 3).is_empty());
    }

    // Leibniz formula as an independent determinant oracle.
    fn leibniz(m: &Matrix<Rational>) -> Rational {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.rows();
        let mut acc = int(0);
        for p in perms(n) {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut prod = int(1);
            for (i, &pi) in p.iter().enumerate() {
                prod *= m.get(i, pi);
            }
            if inversions % 2 == 0 {
                acc += prod;
            } else {
                acc -= prod;
            }
        }
        acc
    }

    fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix<Rational>> {
        prop::collection::vec(-4i64..5, r * c).prop_map(move |v| {
            Matrix::from_rows(v.chunks(c).map(|row| row.iter().map(|&x| int(x)).collect()).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_matches_leibniz(m in (1usize..5).prop_flat_map(|n| arb_matrix(n, n))) {
            prop_assert_eq!(m.det().unwrap(), leibniz(&m));
        }

        #[test]
        fn minors_invariant_under_row_permutation_up_to_sign(
            m in arb_matrix(3, 3), k in 1usize..4, perm in Just(vec![0usize, 1, 2]).prop_shuffle()
        ) {
            let rows: Vec<Vec<Rational>> = perm.iter().map(|&i| m.row(i).to_vec()).collect();
            let p = Matrix::from_rows(rows).unwrap();
            let norm = |v: Vec<Rational>| {
                let mut v: Vec<Rational> = v.into_iter().map(|x| if x < int(0) { -x } else { x }).collect();
                v.sort();
                v
            };
            prop_assert_eq!(norm(m.minors(k).unwrap()), norm(p.minors(k).unwrap()));
        }

        #[test]
        fn adjugate_inverts_up_to_det(m in (1usize..5).prop_flat_map(|n| arb_matrix(n, n))) {
            let n = m.rows();
            let prod = m.adjugate().unwrap().mul(&m).unwrap();
            let det = m.det().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = if i == j { det.clone() } else { int(0) };
                    prop_assert_eq!(prod.get(i, j), &want);
                }
            }
        }

        #[test]
        fn det_is_multiplicative(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
            prop_assert_eq!(a.mul(&b).unwrap().det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }
}
