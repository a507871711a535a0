//! Dense exact matrices over Q(i), Gauss-Jordan elimination and subspaces.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{GaussianInteger, GaussianRational};
use crate::unipoly::UniPoly;

type Q = GaussianRational;

/// A dense `rows x cols` matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Q::zero(); rows * cols])
    }

    pub fn zero(n: usize) -> Self {
        Self::zeros(n, n)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for k in 0..n {
            m[(k, k)] = Q::one();
        }
        m
    }

    /// The matrix unit with a single 1 at `(i, j)` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m[(i, j)] = Q::one();
        m
    }

    pub fn diag(entries: &[Q]) -> Self {
        let mut m = Self::zero(entries.len());
        for (k, e) in entries.iter().enumerate() {
            m[(k, k)] = e.clone();
        }
        m
    }

    pub fn diag_ints(entries: &[i64]) -> Self {
        Self::diag(&entries.iter().map(|&e| Q::integer(e)).collect::<Vec<_>>())
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Q::integer(x)).collect()).collect())
    }

    /// Block-diagonal sum of square blocks.
    pub fn block_diag(blocks: &[Matrix]) -> Self {
        let n = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// The `n x n` Jordan block with eigenvalue `lambda`, ones on the superdiagonal.
    pub fn jordan_block(lambda: &Q, n: usize) -> Self {
        let mut m = Self::diag(&vec![lambda.clone(); n]);
        for k in 1..n {
            m[(k - 1, k)] = Q::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length; panics for non-square matrices.
    pub fn n(&self) -> usize {
        assert!(self.is_square(), "matrix is not square");
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major entries, the coordinates used for spans of matrices.
    pub fn as_vector(&self) -> &[Q] {
        &self.data
    }

    pub fn from_vector(n: usize, v: &[Q]) -> Self {
        Self::new(n, n, v.to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|x| x * c).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn trace(&self) -> Q {
        let mut t = Q::zero();
        for k in 0..self.n() {
            t += &self[(k, k)];
        }
        t
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn commutator(&self, o: &Self) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self * o == o * self
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    /// `p * self * p_inv`.
    pub fn conjugate(&self, p: &Self, p_inv: &Self) -> Self {
        &(p * self) * p_inv
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.to_rows();
        rref(&mut rows, self.cols).len()
    }

    /// `{ v : self * v = 0 }`.
    pub fn kernel(&self) -> Subspace {
        let mut rows = self.to_rows();
        let pivots = rref(&mut rows, self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -&rows[r][free];
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.cols, basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.rows, self.transpose().to_rows())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n();
        let mut rows: Vec<Vec<Q>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        let pivots = rref(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Singular);
        }
        Ok(Self::from_rows(rows.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    /// Solutions of `self * x = b` as a particular solution plus the kernel.
    pub fn solve(&self, b: &[Q]) -> Option<(Vec<Q>, Subspace)> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut rows: Vec<Vec<Q>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let pivots = rref(&mut rows, self.cols + 1);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = rows[r][self.cols].clone();
        }
        Some((x, self.kernel()))
    }

    /// Characteristic polynomial `det(y - self)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> UniPoly {
        let n = self.n();
        let mut c = vec![Q::zero(); n + 1];
        c[n] = Q::one();
        let mut m = Self::zero(n);
        for k in 1..=n {
            m = &(self * &m) + &Self::identity(n).scale(&c[n + 1 - k]);
            let am = self * &m;
            c[n - k] = -(am.trace() / Q::integer(k as i64));
        }
        UniPoly::from_coeffs(c)
    }

    /// Monic minimal polynomial.
    pub fn min_poly(&self) -> UniPoly {
        min_poly_relative(self, &Self::identity(self.n()))
    }
}

/// Least-degree monic `p` with `p(m) = 0` inside an algebra whose identity is
/// `unit` (the constant term of `p` acts as a multiple of `unit`).
pub fn min_poly_relative(m: &Matrix, unit: &Matrix) -> UniPoly {
    let mut ech = Echelon::new(m.rows * m.cols);
    let mut power = unit.clone();
    loop {
        match ech.insert(power.as_vector().to_vec()) {
            Ok(()) => power = &power * m,
            Err(mut combo) => {
                combo.push(Q::one());
                return UniPoly::from_coeffs(combo);
            }
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Entries scaled to Gaussian integers by one common denominator.
struct IntegralForm {
    re: Vec<BigInt>,
    /// `None` when every entry is real.
    im: Option<Vec<BigInt>>,
    den: BigInt,
}

impl IntegralForm {
    fn new(data: &[Q]) -> Self {
        let mut den = BigInt::one();
        for x in data {
            for d in [x.re().denom(), x.im().denom()] {
                if !d.is_one() {
                    den = den.lcm(d);
                }
            }
        }
        let scale = |r: &BigRational| {
            if r.denom().is_one() {
                r.numer() * &den
            } else {
                r.numer() * (&den / r.denom())
            }
        };
        let re = data.iter().map(|x| scale(x.re())).collect();
        let im = data.iter().any(|x| !x.is_real()).then(|| data.iter().map(|x| scale(x.im())).collect());
        Self { re, im, den }
    }
}

fn ratio(num: BigInt, den: &BigInt) -> BigRational {
    if num.is_zero() {
        BigRational::zero()
    } else if den.is_one() {
        BigRational::from_integer(num)
    } else {
        BigRational::new(num, den.clone())
    }
}

/// Products are accumulated over Z[i] and reduced once per entry.
impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let (a, b) = (IntegralForm::new(&self.data), IntegralForm::new(&o.data));
        let (rows, inner, cols) = (self.rows, self.cols, o.cols);
        let zero = BigInt::zero();
        let mut re = vec![BigInt::zero(); rows * cols];
        let mut im = vec![BigInt::zero(); rows * cols];
        let complex = a.im.is_some() || b.im.is_some();
        for i in 0..rows {
            for k in 0..inner {
                let ar = &a.re[i * inner + k];
                let ai = a.im.as_ref().map_or(&zero, |v| &v[i * inner + k]);
                if ar.is_zero() && ai.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let br = &b.re[k * cols + j];
                    let bi = b.im.as_ref().map_or(&zero, |v| &v[k * cols + j]);
                    let slot = i * cols + j;
                    if !complex {
                        if !br.is_zero() {
                            re[slot] += ar * br;
                        }
                        continue;
                    }
                    if !br.is_zero() {
                        if !ar.is_zero() {
                            re[slot] += ar * br;
                        }
                        if !ai.is_zero() {
                            im[slot] += ai * br;
                        }
                    }
                    if !bi.is_zero() {
                        if !ai.is_zero() {
                            re[slot] -= ai * bi;
                        }
                        if !ar.is_zero() {
                            im[slot] += ar * bi;
                        }
                    }
                }
            }
        }
        let den = &a.den * &b.den;
        let data = re.into_iter().zip(im).map(|(r, i)| Q::new(ratio(r, &den), ratio(i, &den))).collect();
        Matrix::new(rows, cols, data)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix sum dimension mismatch");
        Matrix::new(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix difference dimension mismatch");
        Matrix::new(self.rows, self.cols, self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::new(self.rows, self.cols, self.data.iter().map(|a| -a).collect())
    }
}

macro_rules! owned_matrix_op {
    ($tr:ident, $m:ident) => {
        impl $tr<Matrix> for Matrix {
            type Output = Matrix;
            fn $m(self, o: Matrix) -> Matrix {
                (&self).$m(&o)
            }
        }
    };
}
owned_matrix_op!(Add, add);
owned_matrix_op!(Sub, sub);
owned_matrix_op!(Mul, mul);

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns, in place.
/// Returns pivot columns; zero rows are dropped, pivots are scaled to 1.
///
/// Rows are cleared of denominators and reduced fraction-free over Z[i]
/// (every intermediate entry is a minor of the input), with one division
/// by the final pivot at the end.
pub fn rref(rows: &mut Vec<Vec<Q>>, ncols: usize) -> Vec<usize> {
    let mut ints: Vec<Vec<GaussianInteger>> = rows.iter().map(|r| to_integral(r)).collect();
    let mut pivots = Vec::new();
    let mut prev = GaussianInteger::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == ints.len() {
            break;
        }
        let Some(p) = (r..ints.len()).find(|&k| !ints[k][c].is_zero()) else { continue };
        ints.swap(r, p);
        let pivot_row = ints[r].clone();
        let piv = &pivot_row[c];
        for (k, row) in ints.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if x.is_zero() && (f.is_zero() || y.is_zero()) {
                    continue;
                }
                let mut v = zmul(piv, x);
                if !f.is_zero() && !y.is_zero() {
                    v = zsub(&v, &zmul(&f, y));
                }
                *x = zdiv_exact(&v, &prev);
            }
        }
        prev = piv.clone();
        pivots.push(c);
        r += 1;
    }
    // x / d = x conj(d) / |d|^2
    let (conj, norm) = if prev.im.is_zero() {
        (None, prev.re.clone())
    } else {
        (Some(GaussianInteger::new(prev.re.clone(), -&prev.im)), prev.norm())
    };
    *rows = ints
        .into_iter()
        .take(r)
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let x = match &conj {
                        Some(c) if !x.is_zero() => zmul(&x, c),
                        _ => x,
                    };
                    Q::new(ratio(x.re, &norm), ratio(x.im, &norm))
                })
                .collect()
        })
        .collect();
    pivots
}

fn to_integral(row: &[Q]) -> Vec<GaussianInteger> {
    let form = IntegralForm::new(row);
    let im = form.im.unwrap_or_else(|| vec![BigInt::zero(); row.len()]);
    form.re.into_iter().zip(im).map(|(re, im)| GaussianInteger::new(re, im)).collect()
}

fn zmul(a: &GaussianInteger, b: &GaussianInteger) -> GaussianInteger {
    if a.im.is_zero() && b.im.is_zero() {
        GaussianInteger::new(&a.re * &b.re, Zero::zero())
    } else {
        a.mul(b)
    }
}

fn zsub(a: &GaussianInteger, b: &GaussianInteger) -> GaussianInteger {
    GaussianInteger::new(&a.re - &b.re, &a.im - &b.im)
}

fn zdiv_exact(a: &GaussianInteger, d: &GaussianInteger) -> GaussianInteger {
    if d.im.is_zero() {
        if d.re.is_one() {
            return a.clone();
        }
        GaussianInteger::new(&a.re / &d.re, &a.im / &d.re)
    } else {
        a.div_exact(d).expect("fraction-free elimination divides exactly")
    }
}

/// A subspace of Q(i)^ambient in reduced row echelon form.
///
/// The form is canonical, so equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Q>>) -> Self {
        let mut rows = vectors;
        assert!(rows.iter().all(|v| v.len() == ambient), "vector length mismatch");
        let pivots = rref(&mut rows, ambient);
        Self { ambient, basis: rows, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_vectors(ambient, Matrix::identity(ambient).to_rows())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (r, x) in residual.iter_mut().zip(b) {
                if !x.is_zero() {
                    *r -= &(c * x);
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Self::from_vectors(self.ambient, self.basis.iter().chain(&other.basis).cloned().collect())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve sum a_k u_k - sum b_l w_l = 0 and map the a-part back.
        let du = self.dim();
        let mut cols: Vec<Vec<Q>> = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| -x).collect::<Vec<_>>()));
        if cols.is_empty() {
            return Self::zero(self.ambient);
        }
        let m = Matrix::from_rows(cols).transpose();
        let ker = m.kernel();
        let vecs = ker
            .basis
            .iter()
            .map(|k| {
                let mut v = vec![Q::zero(); self.ambient];
                for (a, u) in k[..du].iter().zip(&self.basis) {
                    for (x, y) in v.iter_mut().zip(u) {
                        *x += &(a * y);
                    }
                }
                v
            })
            .collect();
        Self::from_vectors(self.ambient, vecs)
    }
}

/// Incremental echelon form that remembers how each stored row was formed,
/// so a dependency among inserted vectors can be reported.
pub(crate) struct Echelon {
    ambient: usize,
    rows: Vec<(Vec<Q>, usize, Vec<Q>)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(ambient: usize) -> Self {
        Self { ambient, rows: Vec::new(), inserted: 0 }
    }

    /// Adds `v` if it is independent. Otherwise returns `c` with
    /// `v + sum c_k v_k = 0` over the previously inserted vectors.
    pub fn insert(&mut self, mut v: Vec<Q>) -> std::result::Result<(), Vec<Q>> {
        assert_eq!(v.len(), self.ambient);
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = vec![Q::zero(); idx + 1];
        combo[idx] = Q::one();
        for (row, pivot, rc) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let f = v[*pivot].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            for (x, y) in combo.iter_mut().zip(rc) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let inv = v[p].inv().expect("nonzero");
                let v = v.iter().map(|x| x * &inv).collect();
                let combo = combo.iter().map(|x| x * &inv).collect();
                self.rows.push((v, p, combo));
                Ok(())
            }
            None => {
                self.inserted -= 1;
                combo.pop();
                Err(combo)
            }
        }
    }
}
