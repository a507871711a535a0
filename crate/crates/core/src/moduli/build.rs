//! Points built from ideals, point configurations and Jordan data.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, quotient_basis, MonomialOrder};
use crate::matrix::Matrix;
use crate::poly::Poly;

use super::{Chart, MorphismPoint, Target, Q};

/// Multiplication by each variable on `C[y] / I` in the standard monomial
/// basis; the class of 1 is a cyclic vector.
pub fn phi_hilb(ideal: &[Poly], order: &MonomialOrder) -> Result<MorphismPoint> {
    let vars = ideal.first().ok_or_else(|| Error::Invalid("empty ideal".into()))?.vars().to_vec();
    let gb = buchberger(ideal, order);
    let basis = quotient_basis(&gb)?;
    if basis.is_empty() {
        return Err(Error::Invalid("the unit ideal has an empty quotient".into()));
    }
    let n = basis.len();
    let mut coords = Vec::with_capacity(vars.len());
    for k in 0..vars.len() {
        let mut m = Matrix::zero(n);
        for (j, b) in basis.iter().enumerate() {
            let mut mono = b.clone();
            mono[k] += 1;
            let nf = normal_form(&Poly::monomial(&vars, mono, Q::one()), &gb);
            for (row, s) in basis.iter().enumerate() {
                m[(row, j)] = nf.coeff(s);
            }
        }
        coords.push(m);
    }
    Ok(MorphismPoint::affine(coords))
}

/// Diagonal matrices listing the points in sorted order.
pub fn phi_chow(points: &[Vec<Q>]) -> Result<MorphismPoint> {
    let r = points.first().map(Vec::len).ok_or_else(|| Error::Invalid("no points".into()))?;
    if let Some(bad) = points.iter().find(|p| p.len() != r) {
        return Err(Error::DimensionMismatch { expected: r, found: bad.len() });
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    let coords = (0..r).map(|k| Matrix::diag(&sorted.iter().map(|p| p[k].clone()).collect::<Vec<_>>())).collect();
    Ok(MorphismPoint::affine(coords))
}

/// Diagonal point of `P^r` from homogeneous coordinates.
pub fn phi_chow_projective(points: &[Vec<Q>]) -> Result<MorphismPoint> {
    let len = points.first().map(Vec::len).ok_or_else(|| Error::Invalid("no points".into()))?;
    if len < 2 {
        return Err(Error::Invalid("homogeneous coordinates need at least two entries".into()));
    }
    for p in points {
        if p.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: p.len() });
        }
        if p.iter().all(Zero::is_zero) {
            return Err(Error::Invalid("the zero vector is not a projective point".into()));
        }
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    let charts = (0..len)
        .map(|i| {
            let ratio = |p: &Vec<Q>, c: usize| if p[i].is_zero() { Q::zero() } else { &p[c] / &p[i] };
            let coords: Vec<Matrix> =
                (0..len).map(|c| Matrix::diag(&sorted.iter().map(|p| ratio(p, c)).collect::<Vec<_>>())).collect();
            Chart { e: coords[i].clone(), coords }
        })
        .collect();
    Ok(MorphismPoint { n: points.len(), target: Target::Projective { r: len - 1 }, charts })
}

/// A point of `P^1` with Jordan blocks `J(lambda)` in chart 0 for the
/// finite eigenvalues and nilpotent blocks at infinity; on the overlap the
/// chart-`inf` coordinate is the inverse of the chart-0 one.
pub fn p1_from_jordan(finite: &[(Q, Vec<usize>)], infinite: &[usize]) -> Result<MorphismPoint> {
    for (k, (l, _)) in finite.iter().enumerate() {
        if finite[..k].iter().any(|(m, _)| m == l) {
            return Err(Error::DuplicateEigenvalue(l.to_string()));
        }
    }
    if finite.iter().flat_map(|(_, d)| d).chain(infinite).any(|&d| d == 0) {
        return Err(Error::Invalid("block sizes must be positive".into()));
    }
    let (mut e0, mut m0, mut e_inf, mut m_inf) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (lambda, parts) in finite {
        for &d in parts {
            let j = Matrix::jordan_block(lambda, d);
            e0.push(Matrix::identity(d));
            if lambda.is_zero() {
                e_inf.push(Matrix::zero(d));
                m_inf.push(Matrix::zero(d));
            } else {
                e_inf.push(Matrix::identity(d));
                m_inf.push(j.inverse()?);
            }
            m0.push(j);
        }
    }
    for &d in infinite {
        e0.push(Matrix::zero(d));
        m0.push(Matrix::zero(d));
        e_inf.push(Matrix::identity(d));
        m_inf.push(Matrix::jordan_block(&Q::zero(), d));
    }
    if e0.is_empty() {
        return Err(Error::Invalid("no blocks".into()));
    }
    let bd = |v: Vec<Matrix>| Matrix::block_diag(&v);
    Ok(MorphismPoint::p1(bd(e0), bd(m0), bd(e_inf), bd(m_inf)))
}
