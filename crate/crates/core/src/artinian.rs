//! Structure of finite-dimensional commutative subalgebras of M_n:
//! primitive idempotents, radical, central localization, Peirce
//! decomposition and the associated quiver.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{min_poly_relative, Matrix, Subspace};
use crate::scalar::GaussianRational;
use crate::span::MatrixSpan;
use crate::unipoly::{gq_roots, UniPoly};

type Q = GaussianRational;

/// Polynomials `p_i` with `p_i = delta_ij` modulo `(y - lambda_j)^{d_j}`.
///
/// `p_i = q_i * g / (y - lambda_i)^{d_i}` where `g = prod (y - lambda_j)^{d_j}`
/// and `q_i` inverts `g / (y - lambda_i)^{d_i}` modulo `(y - lambda_i)^{d_i}`;
/// the inverse comes from the Taylor expansion at `lambda_i`.
pub fn interp_idempotents(factors: &[(Q, usize)]) -> Result<Vec<UniPoly>> {
    for (k, (l, _)) in factors.iter().enumerate() {
        if factors[..k].iter().any(|(m, _)| m == l) {
            return Err(Error::DuplicateEigenvalue(l.to_string()));
        }
    }
    if let Some((l, _)) = factors.iter().find(|(_, d)| *d == 0) {
        return Err(Error::Invalid(format!("zero multiplicity for eigenvalue {l}")));
    }
    let g = UniPoly::from_roots(factors);
    let mut out = Vec::with_capacity(factors.len());
    for (lambda, d) in factors {
        let local = UniPoly::from_roots(&[(lambda.clone(), *d)]);
        let h = g.div_exact(&local).expect("factor divides the product");
        let a = h.shift(lambda).truncate(*d);
        let a0_inv = a.coeff(0).inv().expect("eigenvalues are distinct");
        let mut b = vec![a0_inv.clone()];
        for k in 1..*d {
            let mut s = Q::zero();
            for j in 1..=k {
                s += &(&a.coeff(j) * &b[k - j]);
            }
            b.push(-(&s * &a0_inv));
        }
        let inv = UniPoly::from_coeffs(b).shift(&-lambda);
        out.push((&inv * &h).rem(&g)?);
    }
    Ok(out)
}

/// Orthogonal primitive idempotents of a commutative algebra, each tagged
/// with the joint eigenvalues of the generators on its block.
#[derive(Clone, Debug)]
pub struct IdempotentDecomposition {
    pub algebra: MatrixSpan,
    pub idempotents: Vec<Matrix>,
    pub tags: Vec<Vec<Q>>,
}

impl IdempotentDecomposition {
    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.algebra.n();
        let sum = self.idempotents.iter().fold(Matrix::zero(n), |acc, e| &acc + e);
        &sum == self.algebra.identity()
    }

    pub fn is_orthogonal(&self) -> bool {
        let es = &self.idempotents;
        es.iter()
            .enumerate()
            .all(|(i, a)| &(a * a) == a && es.iter().enumerate().all(|(j, b)| i == j || (a * b).is_zero()))
    }

    /// Each block `e R` is local: its radical has codimension 1.
    pub fn is_primitive(&self) -> bool {
        self.idempotents.iter().all(|e| {
            let block = block_algebra(&self.algebra, e);
            jacobson_radical(&block).map(|j| j.dim() + 1 == block.dim()).unwrap_or(false)
        })
    }

    /// Block dimension `rank(e_i)`, the length of the summand `e_i C^n`.
    pub fn block_dims(&self) -> Vec<usize> {
        self.idempotents.iter().map(Matrix::rank).collect()
    }
}

/// `e R` as an algebra with unit `e`, for an idempotent `e` of R.
pub fn block_algebra(algebra: &MatrixSpan, e: &Matrix) -> MatrixSpan {
    let n = algebra.n();
    let space = Subspace::from_vectors(n * n, algebra.basis().iter().map(|b| (e * b).as_vector().to_vec()).collect());
    let gens = algebra.generators().iter().map(|g| e * g).collect();
    MatrixSpan::from_space(n, space, gens, e.clone())
}

fn check_commutative(algebra: &MatrixSpan, generators: &[Matrix]) -> Result<()> {
    let gens_commute =
        generators.iter().enumerate().all(|(i, a)| generators[i + 1..].iter().all(|b| a.commutes_with(b)));
    if gens_commute && algebra.is_commutative() {
        Ok(())
    } else {
        Err(Error::NotCommutative)
    }
}

/// Refines the unit of `algebra` generator by generator using the
/// interpolation idempotents of each restricted minimal polynomial.
pub fn primitive_idempotents(algebra: &MatrixSpan, generators: &[Matrix]) -> Result<IdempotentDecomposition> {
    check_commutative(algebra, generators)?;
    let mut blocks: Vec<(Matrix, Vec<Q>)> = Vec::new();
    if !algebra.identity().is_zero() {
        blocks.push((algebra.identity().clone(), Vec::new()));
    }
    for g in generators {
        let mut next = Vec::new();
        for (e, tag) in blocks {
            let ge = g * &e;
            let mu = min_poly_relative(&ge, &e);
            let roots = gq_roots(&mu)?.require_split()?;
            let ps = interp_idempotents(&roots)?;
            for ((lambda, _), p) in roots.iter().zip(ps) {
                let mut t = tag.clone();
                t.push(lambda.clone());
                next.push((p.eval_matrix(&ge, &e), t));
            }
        }
        blocks = next;
    }
    blocks.sort_by(|a, b| a.1.cmp(&b.1));
    let (idempotents, tags) = blocks.into_iter().unzip();
    Ok(IdempotentDecomposition { algebra: algebra.clone(), idempotents, tags })
}

/// The radical as the kernel of the trace form `T(x, y) = tr(L_{xy})`.
pub fn jacobson_radical(algebra: &MatrixSpan) -> Result<Subspace> {
    if !algebra.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let n = algebra.n();
    let d = algebra.dim();
    if d == 0 {
        return Ok(Subspace::zero(n * n));
    }
    let traces: Vec<Q> = algebra.basis().iter().map(|b| algebra.left_multiplication(b).trace()).collect();
    let mut gram = Matrix::zeros(d, d);
    for a in 0..d {
        for b in a..d {
            let c = algebra.coordinates(&(&algebra.basis()[a] * &algebra.basis()[b])).expect("closed");
            let mut t = Q::zero();
            for (x, y) in c.iter().zip(&traces) {
                t += &(x * y);
            }
            gram[(a, b)] = t.clone();
            gram[(b, a)] = t;
        }
    }
    let ker = gram.kernel();
    Ok(Subspace::from_vectors(n * n, ker.basis().iter().map(|c| algebra.element(c).as_vector().to_vec()).collect()))
}

/// `R[S^-1]` realized as `e_S R`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub projection: Matrix,
    pub quotient: MatrixSpan,
    /// Every element of S became invertible in the quotient.
    pub units_verified: bool,
}

/// Central localization `R / sum_i Ann(s_i^{n0})` with `n0 = dim R`.
pub fn central_localize(algebra: &MatrixSpan, s: &[Matrix]) -> Result<Localization> {
    let n = algebra.n();
    let nn = n * n;
    if let Some(k) = s.iter().position(|x| !algebra.contains(x)) {
        return Err(Error::Invalid(format!("element {k} of S is not in the algebra")));
    }
    let unit = algebra.identity();
    let n0 = algebra.dim();
    let mut kernel = Subspace::zero(nn);
    for x in s {
        let power = (0..n0).fold(unit.clone(), |acc, _| &acc * x);
        kernel = kernel.sum(&algebra.annihilator(&power));
    }
    // The ideal is f R for an idempotent f, the unit of the ideal.
    let ks: Vec<Matrix> = kernel.basis().iter().map(|v| Matrix::from_vector(n, v)).collect();
    let f = if ks.is_empty() {
        Matrix::zero(n)
    } else {
        let mut cols = Vec::new();
        for a in &ks {
            cols.push(ks.iter().flat_map(|kj| (a * kj).as_vector().to_vec()).collect::<Vec<_>>());
        }
        let rhs: Vec<Q> = ks.iter().flat_map(|kj| kj.as_vector().to_vec()).collect();
        let m = Matrix::from_rows(cols).transpose();
        let (c, _) = m.solve(&rhs).ok_or_else(|| Error::Invalid("annihilator ideal has no unit".into()))?;
        ks.iter().zip(&c).fold(Matrix::zero(n), |acc, (k, x)| &acc + &k.scale(x))
    };
    let projection = unit - &f;
    let quotient = block_algebra(algebra, &projection);
    let units_verified = s.iter().all(|x| is_unit_in(&quotient, &(&projection * x)));
    Ok(Localization { projection, quotient, units_verified })
}

/// Whether `x` has an inverse inside `algebra`.
pub fn is_unit_in(algebra: &MatrixSpan, x: &Matrix) -> bool {
    if algebra.dim() == 0 {
        return true;
    }
    let cols: Vec<Vec<Q>> = algebra.basis().iter().map(|b| (x * b).as_vector().to_vec()).collect();
    let m = Matrix::from_rows(cols).transpose();
    m.solve(algebra.identity().as_vector()).is_some()
}

/// The summands `e_i C^n`.
pub fn peirce(decomp: &IdempotentDecomposition) -> Vec<Subspace> {
    decomp.idempotents.iter().map(Matrix::image).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverVertex {
    pub tag: Vec<Q>,
    pub block_dim: usize,
}

/// Vertices are primitive idempotents; `arrows[(i, j)]` is
/// `dim e_i (J/J^2) e_j`, with zero counts omitted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    pub vertices: Vec<QuiverVertex>,
    pub arrows: BTreeMap<(usize, usize), usize>,
}

pub fn format_tag(tag: &[Q]) -> String {
    match tag {
        [single] => single.to_string(),
        _ => format!("({})", tag.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
    }
}

impl Quiver {
    pub fn loops(&self, v: usize) -> usize {
        self.arrows.get(&(v, v)).copied().unwrap_or(0)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph quiver {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{k} [label=\"λ={} (n={})\"];", format_tag(&v.tag), v.block_dim);
        }
        for (&(i, j), &count) in &self.arrows {
            for _ in 0..count {
                let _ = writeln!(out, "  v{i} -> v{j};");
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn quiver(algebra: &MatrixSpan) -> Result<Quiver> {
    let decomp = primitive_idempotents(algebra, algebra.generators())?;
    let n = algebra.n();
    let nn = n * n;
    let rad = jacobson_radical(algebra)?;
    let j: Vec<Matrix> = rad.basis().iter().map(|v| Matrix::from_vector(n, v)).collect();
    let j2: Vec<Matrix> = j.iter().flat_map(|a| j.iter().map(move |b| a * b)).collect();
    let sandwich = |es: &Matrix, et: &Matrix, xs: &[Matrix]| {
        Subspace::from_vectors(nn, xs.iter().map(|x| (&(es * x) * et).as_vector().to_vec()).collect()).dim()
    };
    let mut arrows = BTreeMap::new();
    for (a, ea) in decomp.idempotents.iter().enumerate() {
        for (b, eb) in decomp.idempotents.iter().enumerate() {
            let count = sandwich(ea, eb, &j) - sandwich(ea, eb, &j2);
            if count > 0 {
                arrows.insert((a, b), count);
            }
        }
    }
    let vertices = decomp
        .tags
        .iter()
        .zip(decomp.block_dims())
        .map(|(tag, block_dim)| QuiverVertex { tag: tag.clone(), block_dim })
        .collect();
    Ok(Quiver { vertices, arrows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn alg(gens: &[Matrix]) -> MatrixSpan {
        MatrixSpan::closure(gens, &Matrix::identity(gens.first().map_or(2, Matrix::n))).unwrap()
    }

    fn j2_plus_5() -> Matrix {
        Matrix::block_diag(&[Matrix::jordan_block(&Q::zero(), 2), Matrix::diag_ints(&[5])])
    }

    /// Checks `sum p_i = 1` and `p_i p_j = delta_ij p_i` modulo g.
    fn check_interpolation(factors: &[(Q, usize)], ps: &[UniPoly]) {
        let g = UniPoly::from_roots(factors);
        let sum = ps.iter().fold(UniPoly::zero(), |acc, p| &acc + p);
        assert_eq!(sum.rem(&g).unwrap(), UniPoly::one());
        for (i, a) in ps.iter().enumerate() {
            for (j, b) in ps.iter().enumerate() {
                let prod = (a * b).rem(&g).unwrap();
                let expect = if i == j { a.rem(&g).unwrap() } else { UniPoly::zero() };
                assert_eq!(prod, expect);
            }
        }
    }

    #[test]
    fn known_interpolation() {
        let f = [(q("1"), 1), (q("2"), 1)];
        let ps = interp_idempotents(&f).unwrap();
        assert_eq!(ps, vec![UniPoly::from_ints(&[2, -1]), UniPoly::from_ints(&[-1, 1])]);
        assert_eq!(interp_idempotents(&[(q("0"), 1)]).unwrap(), vec![UniPoly::one()]);

        let f = [(q("0"), 2), (q("1"), 1)];
        let ps = interp_idempotents(&f).unwrap();
        assert!(ps.iter().all(|p| p.degree().unwrap() <= 2));
        // p_1 = 1 - y^2 and p_2 = y^2 by hand
        assert_eq!(ps[0], UniPoly::from_ints(&[1, 0, -1]));
        assert_eq!(ps[1], UniPoly::from_ints(&[0, 0, 1]));
        check_interpolation(&f, &ps);

        let f = [(q("i"), 3), (q("-1/2"), 2), (q("3"), 1)];
        check_interpolation(&f, &interp_idempotents(&f).unwrap());
        assert!(matches!(interp_idempotents(&[(q("1"), 1), (q("1"), 2)]), Err(Error::DuplicateEigenvalue(_))));
    }

    #[test]
    fn known_primitive_idempotents() {
        let m = Matrix::diag_ints(&[1, 1, 2]);
        let d = primitive_idempotents(&alg(std::slice::from_ref(&m)), &[m]).unwrap();
        assert_eq!(d.idempotents, vec![Matrix::diag_ints(&[1, 1, 0]), Matrix::diag_ints(&[0, 0, 1])]);
        assert_eq!(d.tags, vec![vec![q("1")], vec![q("2")]]);

        let one = MatrixSpan::closure(&[], &Matrix::identity(2)).unwrap();
        let d = primitive_idempotents(&one, &[]).unwrap();
        assert_eq!(d.idempotents, vec![Matrix::identity(2)]);

        let gens = [Matrix::diag_ints(&[1, 2]), Matrix::diag_ints(&[3, 3])];
        let d = primitive_idempotents(&alg(&gens), &gens).unwrap();
        assert_eq!(d.idempotents, vec![Matrix::unit(2, 0, 0), Matrix::unit(2, 1, 1)]);
        assert_eq!(d.tags, vec![vec![q("1"), q("3")], vec![q("2"), q("3")]]);
        assert!(d.is_complete() && d.is_orthogonal() && d.is_primitive());
    }

    #[test]
    fn not_split_and_not_commutative() {
        let rot = Matrix::from_ints(&[&[0, 2], &[1, 0]]);
        assert!(matches!(primitive_idempotents(&alg(std::slice::from_ref(&rot)), &[rot]), Err(Error::NotSplit(_))));
        let gens = [Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)];
        let a = alg(&gens);
        assert!(matches!(primitive_idempotents(&a, &gens), Err(Error::NotCommutative)));
        assert!(matches!(jacobson_radical(&a), Err(Error::NotCommutative)));
    }

    #[test]
    fn known_radicals() {
        let j = Matrix::jordan_block(&Q::zero(), 2);
        let r = jacobson_radical(&alg(std::slice::from_ref(&j))).unwrap();
        assert_eq!(r, Subspace::from_vectors(4, vec![j.as_vector().to_vec()]));
        assert_eq!(jacobson_radical(&alg(&[Matrix::diag_ints(&[1, 2])])).unwrap().dim(), 0);
        let r = jacobson_radical(&alg(&[j2_plus_5()])).unwrap();
        let expect = Matrix::block_diag(&[j, Matrix::zero(1)]);
        assert_eq!(r, Subspace::from_vectors(9, vec![expect.as_vector().to_vec()]));
    }

    #[test]
    fn known_localizations() {
        let m = j2_plus_5();
        let a = alg(std::slice::from_ref(&m));
        let e2 = Matrix::diag_ints(&[0, 0, 1]);
        let loc = central_localize(&a, std::slice::from_ref(&e2)).unwrap();
        assert_eq!(loc.projection, e2);
        assert_eq!(loc.quotient.dim(), 1);
        assert!(loc.units_verified);

        let loc = central_localize(&a, &[Matrix::identity(3)]).unwrap();
        assert!(loc.projection.is_identity());
        assert_eq!(loc.quotient.space(), a.space());

        let j = Matrix::jordan_block(&Q::zero(), 2);
        let loc = central_localize(&alg(std::slice::from_ref(&j)), &[j]).unwrap();
        assert!(loc.projection.is_zero());
        assert_eq!(loc.quotient.dim(), 0);

        // inverting m itself kills the nilpotent block
        let loc = central_localize(&a, &[m]).unwrap();
        assert_eq!(loc.projection, e2);
    }

    #[test]
    fn known_peirce() {
        let m = Matrix::diag_ints(&[1, 1, 2]);
        let d = primitive_idempotents(&alg(std::slice::from_ref(&m)), &[m]).unwrap();
        let p = peirce(&d);
        assert_eq!(p[0], Subspace::from_vectors(3, Matrix::identity(3).to_rows()[..2].to_vec()));
        assert_eq!(p[1], Subspace::from_vectors(3, Matrix::identity(3).to_rows()[2..].to_vec()));

        let one = MatrixSpan::closure(&[], &Matrix::identity(3)).unwrap();
        assert_eq!(peirce(&primitive_idempotents(&one, &[]).unwrap()), vec![Subspace::full(3)]);

        let m = j2_plus_5();
        let d = primitive_idempotents(&alg(std::slice::from_ref(&m)), &[m]).unwrap();
        assert_eq!(peirce(&d).iter().map(Subspace::dim).collect::<Vec<_>>(), vec![2, 1]);
    }

    #[test]
    fn known_quivers() {
        let qv = quiver(&alg(&[j2_plus_5()])).unwrap();
        assert_eq!(qv.vertices.len(), 2);
        assert_eq!((qv.loops(0), qv.loops(1)), (1, 0));
        assert_eq!(qv.vertices[0], QuiverVertex { tag: vec![q("0")], block_dim: 2 });
        assert_eq!(
            qv.to_dot(),
            "digraph quiver {\n  v0 [label=\"λ=0 (n=2)\"];\n  v1 [label=\"λ=5 (n=1)\"];\n  v0 -> v0;\n}\n"
        );

        let qv = quiver(&alg(&[Matrix::diag_ints(&[1, 2, 3])])).unwrap();
        assert_eq!(qv.vertices.len(), 3);
        assert!(qv.arrows.is_empty());

        let qv = quiver(&alg(&[Matrix::jordan_block(&Q::zero(), 3)])).unwrap();
        assert_eq!(qv.vertices.len(), 1);
        assert_eq!(qv.loops(0), 1);
    }

    #[test]
    fn two_generator_quiver_has_two_loops() {
        let gens = [Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2)];
        let qv = quiver(&alg(&gens)).unwrap();
        assert_eq!(qv.vertices[0].tag, vec![q("0"), q("0")]);
        assert_eq!(qv.loops(0), 2);
    }
}
