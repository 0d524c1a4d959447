use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ival::Ival;
use super::rat::{lcm_denoms, primitive_part, sqrt_bounds, Int, Rat};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Ring operations shared by the exact and the interval scalar levels.
pub trait Scalar: Clone + std::fmt::Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn pow(&self, k: u32) -> Self;
}

impl Scalar for Rat {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, k: u32) -> Self {
        num_traits::pow(self.clone(), k as usize)
    }
}

impl Scalar for Ival {
    fn zero_elem() -> Self {
        Ival::zero()
    }
    fn one_elem() -> Self {
        Ival::one()
    }
    fn from_rat(r: &Rat) -> Self {
        Ival::point(r.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn pow(&self, k: u32) -> Self {
        self.powi(k)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix with {} entries",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Principal submatrix on the given index set.
    pub fn principal(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                T::one_elem()
            } else {
                T::zero_elem()
            }
        })
    }

    pub fn matmul(&self, o: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(Matrix::from_fn(self.rows, o.cols, |i, j| {
            (0..self.cols).fold(T::zero_elem(), |acc, k| {
                acc.add(&self[(i, k)].mul(&o[(k, j)]))
            })
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero_elem(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Fraction-free two-step (Bareiss) determinant of an integer matrix given
/// as rows. Consumes the rows.
pub fn bareiss_det(mut a: Vec<Vec<Int>>) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Int::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Fraction-free Gauss-Jordan on `[a | I]`. Returns `(d, X)` with
/// `a X = d I` and `d = +-det(a)`, or `None` when `a` is singular.
pub fn adjugate_integer(a: &[Vec<Int>]) -> Option<(Int, Vec<Vec<Int>>)> {
    let n = a.len();
    let mut m: Vec<Vec<Int>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let mut prev = Int::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let r = (k + 1..n).find(|&r| !m[r][k].is_zero())?;
            m.swap(k, r);
        }
        let (head, rest) = m.split_at_mut(k);
        let (pivot, tail) = rest.split_first_mut().unwrap();
        for row in head.iter_mut().chain(tail.iter_mut()) {
            let f = row[k].clone();
            for (x, p) in row.iter_mut().zip(pivot.iter()) {
                *x = (&*x * &pivot[k] - &f * p) / &prev;
            }
        }
        prev = pivot[k].clone();
    }
    let x = m.into_iter().map(|r| r[n..].to_vec()).collect();
    Some((prev, x))
}

/// Scales each row to integers; returns the rows and the product of the
/// per-row scale factors.
fn clear_rows(m: &Matrix<Rat>) -> (Vec<Vec<Int>>, Int) {
    let mut scale = Int::one();
    let rows = (0..m.rows())
        .map(|i| {
            let l = lcm_denoms(m.row(i));
            scale *= &l;
            let lr = Rat::from_integer(l);
            m.row(i).iter().map(|r| (r * &lr).to_integer()).collect()
        })
        .collect();
    (rows, scale)
}

/// Exact determinant via fraction-free elimination on the row-cleared
/// integer matrix.
pub fn det_exact(m: &Matrix<Rat>) -> Result<Rat> {
    m.require_square()?;
    let (rows, scale) = clear_rows(m);
    Ok(Rat::new(bareiss_det(rows), scale))
}

/// Reduced row echelon form with leftmost-column, smallest-row pivoting.
/// Returns the reduced matrix and the pivot columns.
pub fn rref(m: &Matrix<Rat>) -> (Matrix<Rat>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..a.cols() {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = t;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..a.cols() {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows() {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..a.cols() {
                    let v = &a[(r, j)] * &f;
                    a[(i, j)] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank_exact(m: &Matrix<Rat>) -> usize {
    rref(m).1.len()
}

/// Sign convention for integer directions: first nonzero entry positive.
pub fn sign_normalize(mut v: Vec<Int>) -> Vec<Int> {
    if v.iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        for x in &mut v {
            *x = -x.clone();
        }
    }
    v
}

/// Integer basis of the right nullspace, one vector per free column in
/// ascending column order.
pub fn nullspace_integer(m: &Matrix<Rat>) -> Vec<Vec<Int>> {
    let (r, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); m.cols()];
            v[f] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, f)].clone();
            }
            sign_normalize(primitive_part(&v))
        })
        .collect()
}

/// Solves `m x = b` for square nonsingular `m`; `None` when singular.
pub fn solve_exact(m: &Matrix<Rat>, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = m.rows();
    let aug = Matrix::from_fn(n, n + 1, |i, j| {
        if j < n {
            m[(i, j)].clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(&aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some((0..n).map(|i| r[(i, n)].clone()).collect())
}

/// Default significand precision for interval elimination.
pub const DET_INTERVAL_BITS: u32 = 320;

/// Enclosure of the determinant of every real matrix inside `m`.
pub fn det_interval(m: &Matrix<Ival>) -> Result<Ival> {
    det_interval_prec(m, DET_INTERVAL_BITS)
}

pub fn det_interval_prec(m: &Matrix<Ival>, bits: u32) -> Result<Ival> {
    m.require_square()?;
    let n = m.rows();
    let elim = eliminate_interval(m, bits);
    if n <= 4 {
        let cof = cofactor_det(m);
        return Ok(match elim.and_then(|e| e.intersect(&cof)) {
            Some(t) => t,
            None => cof,
        });
    }
    Ok(elim.unwrap_or_else(|| hadamard_bound(m)))
}

fn eliminate_interval(m: &Matrix<Ival>, bits: u32) -> Option<Ival> {
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Ival::one();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].mig().cmp(&a[(j, k)].mig()))?;
        if a[(p, k)].contains_zero() {
            return None;
        }
        if p != k {
            for j in 0..n {
                let t = a[(p, j)].clone();
                a[(p, j)] = a[(k, j)].clone();
                a[(k, j)] = t;
            }
            det = -det;
        }
        let piv = a[(k, k)].clone();
        det = (&det * &piv).round_out(bits);
        let inv = piv.recip()?.round_out(bits);
        for i in k + 1..n {
            let f = (&a[(i, k)] * &inv).round_out(bits);
            for j in k + 1..n {
                a[(i, j)] = (&a[(i, j)] - &(&f * &a[(k, j)])).round_out(bits);
            }
        }
    }
    Some(det)
}

fn cofactor_det(m: &Matrix<Ival>) -> Ival {
    let n = m.rows();
    let cols: Vec<usize> = (0..n).collect();
    cofactor_rec(m, 0, &cols)
}

fn cofactor_rec(m: &Matrix<Ival>, row: usize, cols: &[usize]) -> Ival {
    if cols.len() == 1 {
        return m[(row, cols[0])].clone();
    }
    let mut acc = Ival::zero();
    for (k, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = &m[(row, c)] * &cofactor_rec(m, row + 1, &rest);
        acc = if k % 2 == 0 {
            &acc + &term
        } else {
            &acc - &term
        };
    }
    acc
}

/// |det| <= product of row 2-norms.
fn hadamard_bound(m: &Matrix<Ival>) -> Ival {
    let mut b = Rat::one();
    for i in 0..m.rows() {
        let s: Rat = m.row(i).iter().map(|x| x.mag() * x.mag()).sum();
        b *= sqrt_bounds(&s, 64).1;
    }
    Ival::new(-b.clone(), b)
}

/// Berkowitz characteristic polynomial of an integer matrix, coefficients
/// ascending, monic of degree n.
pub fn berkowitz(a: &[Vec<Int>]) -> Vec<Int> {
    let n = a.len();
    // p holds the characteristic polynomial of the leading k x k block,
    // descending coefficients, p[0] = 1.
    let mut p: Vec<Int> = vec![Int::one()];
    for k in 0..n {
        // Block [[B, C], [R, a]] with B the leading k x k part.
        let akk = &a[k][k];
        let col: Vec<Int> = (0..k).map(|i| a[i][k].clone()).collect();
        let row: Vec<Int> = (0..k).map(|j| a[k][j].clone()).collect();
        // w[t] = R B^t C for t < k.
        let mut w = Vec::with_capacity(k);
        let mut v = col;
        for _ in 0..k {
            w.push(row.iter().zip(&v).map(|(x, y)| x * y).sum::<Int>());
            v = (0..k)
                .map(|i| (0..k).map(|j| &a[i][j] * &v[j]).sum())
                .collect();
        }
        // q(l) = (l - a) p(l) - sum_j l^{k-1-j} sum_{i<=j} p_i w_{j-i}
        let mut q = vec![Int::zero(); k + 2];
        for (i, c) in p.iter().enumerate() {
            q[i] += c;
            q[i + 1] -= c * akk;
        }
        for j in 0..k {
            let s: Int = (0..=j).map(|i| &p[i] * &w[j - i]).sum();
            // coefficient of l^{k-1-j} sits at descending index (k+1) - (k-1-j) = j + 2
            q[j + 2] -= s;
        }
        p = q;
    }
    p.reverse();
    p
}

/// Exact characteristic polynomial det(lI - s).
pub fn char_poly(s: &Matrix<Rat>) -> Result<UniPoly> {
    s.require_square()?;
    let n = s.rows();
    let d = lcm_denoms(s.data.iter());
    let dr = Rat::from_integer(d.clone());
    let ints: Vec<Vec<Int>> = (0..n)
        .map(|i| s.row(i).iter().map(|x| (x * &dr).to_integer()).collect())
        .collect();
    // det(lI - S/d) = d^{-n} chi_S(d l)
    let chi = berkowitz(&ints);
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut dk = Int::one();
    for c in chi.iter() {
        coeffs.push(Rat::from_integer(c * &dk));
        dk *= &d;
    }
    let dn = Rat::from_integer(num_traits::pow(d, n));
    Ok(UniPoly::new(coeffs.into_iter().map(|c| c / &dn).collect()))
}

/// Integer content of a vector.
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |acc, x| acc.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat::{rat, ri};

    fn mr(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ri(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn adjugate_inverts() {
        let a: Vec<Vec<Int>> = [[0i64, 2, -1, 3], [4, 1, 0, -2], [1, -3, 5, 1], [2, 2, 2, 7]]
            .iter()
            .map(|r| r.iter().map(|&x| Int::from(x)).collect())
            .collect();
        let (d, x) = adjugate_integer(&a).unwrap();
        assert_eq!(d.abs(), bareiss_det(a.clone()).abs());
        for (i, row) in a.iter().enumerate() {
            for j in 0..4 {
                let v: Int = row.iter().zip(&x).map(|(aik, xk)| aik * &xk[j]).sum();
                assert_eq!(v, if i == j { d.clone() } else { Int::zero() });
            }
        }
        let sing = vec![
            vec![Int::from(1), Int::from(2)],
            vec![Int::from(2), Int::from(4)],
        ];
        assert!(adjugate_integer(&sing).is_none());
    }

    fn cofactor_rat(m: &Matrix<Rat>) -> Rat {
        let n = m.rows();
        if n == 0 {
            return Rat::one();
        }
        let mut acc = Rat::zero();
        for c in 0..n {
            let minor = Matrix::from_fn(n - 1, n - 1, |i, j| {
                m[(i + 1, if j < c { j } else { j + 1 })].clone()
            });
            let t = &m[(0, c)] * cofactor_rat(&minor);
            if c % 2 == 0 {
                acc += t
            } else {
                acc -= t
            }
        }
        acc
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det_exact(&Matrix::identity(3)).unwrap(), ri(1));
        assert_eq!(det_exact(&mr(&[&[1, 2], &[3, 4]])).unwrap(), ri(-2));
        let hilbert = Matrix::from_fn(3, 3, |i, j| rat(1, (i + j + 1) as i64));
        assert_eq!(cofactor_rat(&hilbert), rat(1, 2160));
        assert_eq!(det_exact(&hilbert).unwrap(), rat(1, 2160));
        assert!(matches!(
            det_exact(&mr(&[&[1, 2]])),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn det_needs_pivoting() {
        assert_eq!(det_exact(&mr(&[&[0, 1], &[1, 0]])).unwrap(), ri(-1));
        assert_eq!(det_exact(&mr(&[&[0, 0], &[1, 0]])).unwrap(), ri(0));
    }

    #[test]
    fn nullspace_convention() {
        let ns = nullspace_integer(&mr(&[&[1, 2, 3]]));
        let want = vec![
            vec![Int::from(2), Int::from(-1), Int::from(0)],
            vec![Int::from(3), Int::from(0), Int::from(-1)],
        ];
        assert_eq!(ns, want);
        assert!(nullspace_integer(&Matrix::<Rat>::identity(3)).is_empty());
    }

    #[test]
    fn char_poly_examples() {
        let p = char_poly(&mr(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(p, UniPoly::new(vec![ri(6), ri(-5), ri(1)]));
        let z = char_poly(&mr(&[&[0, 0], &[0, 0]])).unwrap();
        assert_eq!(z, UniPoly::new(vec![ri(0), ri(0), ri(1)]));
        let s = char_poly(&mr(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(s, UniPoly::new(vec![ri(-1), ri(0), ri(1)]));
    }

    #[test]
    fn char_poly_matches_det_at_points() {
        let m = Matrix::from_fn(4, 4, |i, j| {
            rat((3 * i + 5 * j) as i64 % 7 - 3, (i + j + 1) as i64)
        });
        let p = char_poly(&m).unwrap();
        for t in [-2i64, 0, 1, 5] {
            let shifted = Matrix::from_fn(4, 4, |i, j| {
                let d = if i == j { ri(t) } else { ri(0) };
                d - &m[(i, j)]
            });
            assert_eq!(p.eval(&ri(t)), det_exact(&shifted).unwrap());
        }
    }

    #[test]
    fn interval_det_degenerate_and_wide() {
        let m = mr(&[&[1, 2], &[3, 4]]).map(|r| Ival::point(r.clone()));
        assert_eq!(det_interval(&m).unwrap(), Ival::point(ri(-2)));
        let u = Ival::new(ri(0), ri(1));
        let w = Matrix::from_fn(2, 2, |_, _| u.clone());
        assert!(det_interval(&w).unwrap().contains_zero());
    }

    #[test]
    fn interval_det_large_encloses_exact() {
        let m = Matrix::from_fn(6, 6, |i, j| {
            rat(
                ((i * 7 + j * 3) % 11) as i64 + if i == j { 9 } else { 0 },
                3,
            )
        });
        let exact = det_exact(&m).unwrap();
        let e = det_interval(&m.map(|r| Ival::point(r.clone()))).unwrap();
        assert!(e.contains(&exact));
    }

    #[test]
    fn solve_exact_roundtrip() {
        let m = mr(&[&[2, 1], &[1, 3]]);
        let x = solve_exact(&m, &[ri(3), ri(5)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![ri(3), ri(5)]);
        assert!(solve_exact(&mr(&[&[1, 1], &[1, 1]]), &[ri(1), ri(2)]).is_none());
    }
}
