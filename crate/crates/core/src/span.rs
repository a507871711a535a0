//! Multiplicatively closed spans of matrices, centralizers and cyclicity.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Subspace};
use crate::poly::Poly;
use crate::scalar::GaussianRational;

type Q = GaussianRational;

/// A subalgebra of M_n, possibly with an idempotent `e != 1` as identity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixSpan {
    n: usize,
    space: Subspace,
    basis: Vec<Matrix>,
    generators: Vec<Matrix>,
    identity: Matrix,
}

impl MatrixSpan {
    /// The algebra generated by `generators` with unit `identity`.
    pub fn closure(generators: &[Matrix], identity: &Matrix) -> Result<Self> {
        let n = identity.n();
        for g in generators {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: g.rows() });
            }
        }
        if &(identity * identity) != identity {
            return Err(Error::NotRingSubset("identity element is not idempotent".into()));
        }
        for (k, g) in generators.iter().enumerate() {
            if &(identity * g) != g || &(g * identity) != g {
                return Err(Error::NotRingSubset(format!("identity does not act as unit on generator {k}")));
            }
        }
        let mut vectors: Vec<Vec<Q>> = vec![identity.as_vector().to_vec()];
        vectors.extend(generators.iter().map(|g| g.as_vector().to_vec()));
        let mut space = Subspace::from_vectors(n * n, vectors);
        loop {
            let mut vectors = space.basis().to_vec();
            for b in space.basis() {
                let b = Matrix::from_vector(n, b);
                vectors.extend(generators.iter().map(|g| (&b * g).as_vector().to_vec()));
            }
            let grown = Subspace::from_vectors(n * n, vectors);
            if grown.dim() == space.dim() {
                break;
            }
            space = grown;
        }
        let span = Self::from_space(n, space, generators.to_vec(), identity.clone());
        if span.basis.iter().any(|b| &(identity * b) != b || &(b * identity) != b) {
            return Err(Error::NotRingSubset("identity does not act as unit on the closure".into()));
        }
        Ok(span)
    }

    /// Wraps a subspace already known to be a subalgebra with unit `identity`.
    pub fn from_space(n: usize, space: Subspace, generators: Vec<Matrix>, identity: Matrix) -> Self {
        let basis = space.basis().iter().map(|v| Matrix::from_vector(n, v)).collect();
        Self { n, space, basis, generators, identity }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn identity(&self) -> &Matrix {
        &self.identity
    }

    /// Whether the unit is the identity matrix rather than a proper idempotent.
    pub fn contains_identity(&self) -> bool {
        self.identity.is_identity()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.space.contains(m.as_vector())
    }

    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Q>> {
        self.space.coordinates(m.as_vector())
    }

    pub fn element(&self, coords: &[Q]) -> Matrix {
        let mut acc = Matrix::zero(self.n);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = &acc + &b.scale(c);
            }
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        self.basis.iter().enumerate().all(|(i, a)| self.basis[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Matrix of `x -> z x` on the algebra in its canonical basis.
    pub fn left_multiplication(&self, z: &Matrix) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for (j, b) in self.basis.iter().enumerate() {
            let c = self.coordinates(&(z * b)).expect("algebra is closed under multiplication");
            for (i, x) in c.into_iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    /// `{ r in R : x r = 0 }` as a subspace of the algebra.
    pub fn annihilator(&self, x: &Matrix) -> Subspace {
        let nn = self.n * self.n;
        if self.basis.is_empty() {
            return Subspace::zero(nn);
        }
        let cols: Vec<Vec<Q>> = self.basis.iter().map(|b| (x * b).as_vector().to_vec()).collect();
        let m = Matrix::from_rows(cols).transpose();
        let ker = m.kernel();
        Subspace::from_vectors(nn, ker.basis().iter().map(|c| self.element(c).as_vector().to_vec()).collect())
    }

    /// The ideal of R generated by `gens` (which must lie in R).
    pub fn ideal(&self, gens: &[Matrix]) -> Subspace {
        let vecs = gens.iter().flat_map(|g| self.basis.iter().map(move |b| (g * b).as_vector().to_vec())).collect();
        Subspace::from_vectors(self.n * self.n, vecs)
    }
}

/// `{ X : [X, s] = 0 for all s }`, a unital subalgebra of M_n.
pub fn centralizer(n: usize, s: &[Matrix]) -> MatrixSpan {
    let nn = n * n;
    let mut rows = Vec::new();
    for m in s {
        for i in 0..n {
            for j in 0..n {
                // (X m - m X)_{ij} = sum_k X_ik m_kj - m_ik X_kj
                let mut row = vec![Q::zero(); nn];
                for k in 0..n {
                    row[i * n + k] += &m[(k, j)];
                    row[k * n + j] -= &m[(i, k)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let space = if rows.is_empty() { Subspace::full(nn) } else { Matrix::from_rows(rows).kernel() };
    let basis: Vec<Matrix> = space.basis().iter().map(|v| Matrix::from_vector(n, v)).collect();
    MatrixSpan::from_space(n, space, basis, Matrix::identity(n))
}

/// Generic value of `dim(R v)` and a vector attaining it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitRank {
    pub rank: usize,
    pub witness: Option<Vec<Q>>,
}

pub fn orbit_dim(algebra: &MatrixSpan, v: &[Q]) -> usize {
    Subspace::from_vectors(algebra.n(), algebra.basis().iter().map(|b| b.mul_vec(v)).collect()).dim()
}

fn trial_vectors(n: usize, seed: u64, count: usize, range: i64) -> Vec<Vec<Q>> {
    let mut out: Vec<Vec<Q>> =
        (0..n).map(|k| (0..n).map(|j| if j == k { Q::one() } else { Q::zero() }).collect()).collect();
    out.push(vec![Q::one(); n]);
    out.push((1..=n as i64).map(Q::integer).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        out.push((0..n).map(|_| Q::integer(rng.gen_range(-range..=range))).collect());
    }
    out
}

/// Rank over the polynomial ring by fraction-free elimination with full pivoting.
fn symbolic_rank(mut a: Vec<Vec<Poly>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let Some(one_vars) = a.first().and_then(|r| r.first()).map(|p| p.vars().to_vec()) else { return 0 };
    let mut prev = Poly::one(&one_vars);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, p) in row.iter().enumerate().skip(k) {
                if !p.is_zero() && best.is_none_or(|b| p.num_terms() < b.2) {
                    best = Some((i, j, p.num_terms()));
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("fraction-free elimination divides exactly");
            }
            a[i][k] = Poly::zero(&one_vars);
        }
        prev = a[k][k].clone();
        rank += 1;
    }
    rank
}

/// `max_v dim(R v)`: structured and seeded random trials first, then an exact
/// symbolic rank with `v` a vector of indeterminates.
pub fn generic_orbit_rank(algebra: &MatrixSpan) -> OrbitRank {
    let n = algebra.n();
    let bound = n.min(algebra.dim()).min(algebra.identity().rank());
    let mut best = (0, None);
    for v in trial_vectors(n, 0x0D0, 24, 3) {
        let r = orbit_dim(algebra, &v);
        if r > best.0 {
            best = (r, Some(v));
        }
        if r == bound {
            return OrbitRank { rank: r, witness: best.1 };
        }
    }
    let vars = Poly::var_names("v", 1, n);
    let symbolic: Vec<Vec<Poly>> = algebra
        .basis()
        .iter()
        .map(|b| {
            (0..n)
                .map(|i| (0..n).fold(Poly::zero(&vars), |acc, j| &acc + &Poly::var(&vars, j).scale(&b[(i, j)])))
                .collect()
        })
        .collect();
    let rank = symbolic_rank(symbolic);
    if best.0 == rank {
        return OrbitRank { rank, witness: best.1 };
    }
    let witness = trial_vectors(n, 0x0D1, 200, 50).into_iter().find(|v| orbit_dim(algebra, v) == rank);
    OrbitRank { rank, witness }
}
