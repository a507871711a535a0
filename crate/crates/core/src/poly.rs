//! Sparse commutative polynomials in named variables over Q(i).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Builder};
use crate::groebner::MonomialOrder;
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::unipoly::{push_term, UniPoly};

type Q = GaussianRational;

/// An exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

pub fn monomial_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn monomial_lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn monomial_degree(a: &[u32]) -> u32 {
    a.iter().sum()
}

/// Renders a monomial such as `y1^2*y2`; the empty product is `1`.
pub fn monomial_to_string(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(m)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Self { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Q) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Q::one())
    }

    /// The `k`-th variable.
    pub fn var(vars: &[String], k: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[k] = 1;
        Self::monomial(vars, e, Q::one())
    }

    pub fn monomial(vars: &[String], exps: Monomial, c: Q) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(vars);
        p.add_term(exps, c);
        p
    }

    /// Variable names `prefix{start}`, ..., e.g. `y1, y2`.
    pub fn var_names(prefix: &str, start: usize, count: usize) -> Vec<String> {
        (start..start + count).map(|k| format!("{prefix}{k}")).collect()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| monomial_degree(m)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| monomial_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Monomial, &Q)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Option<Monomial> {
        self.leading_term(order).map(|(m, _)| m.clone())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_term(&self, mono: &[u32], c: &Q) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, a) in &self.terms {
            p.add_term(m.iter().zip(mono).map(|(x, y)| x + y).collect(), a * c);
        }
        p
    }

    pub fn monic(&self, order: &MonomialOrder) -> Self {
        match self.leading_term(order) {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                t = &t * &x.pow(e);
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes commuting matrices for the variables; the empty monomial
    /// becomes `unit` (an idempotent acting as identity on the matrices).
    pub fn eval_matrices(&self, mats: &[Matrix], unit: &Matrix) -> Result<Matrix> {
        if mats.len() != self.nvars() {
            return Err(Error::DimensionMismatch { expected: self.nvars(), found: mats.len() });
        }
        let n = unit.n();
        if let Some(bad) = mats.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.rows() });
        }
        let mut powers: Vec<Vec<Matrix>> = mats.iter().map(|m| vec![unit.clone(), m.clone()]).collect();
        let mut acc = Matrix::zero(n);
        for (mono, c) in &self.terms {
            let mut t = unit.clone();
            for (k, &e) in mono.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = &powers[k][powers[k].len() - 1] * &mats[k];
                    powers[k].push(next);
                }
                if e > 0 {
                    t = &t * &powers[k][e as usize];
                }
            }
            acc = &acc + &t.scale(c);
        }
        Ok(acc)
    }

    /// Sets variable `k` to 1.
    pub fn dehomogenize(&self, k: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut m = m.clone();
            m[k] = 0;
            p.add_term(m, c.clone());
        }
        p
    }

    /// Exact quotient `self / d`, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let order = MonomialOrder::default();
        let (lm, lc) = d.leading_term(&order)?;
        let (lm, lc_inv) = (lm.clone(), lc.inv().ok()?);
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term(&order) {
            if !monomial_divides(&lm, m) {
                return None;
            }
            let shift: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let f = c * &lc_inv;
            rem = &rem - &d.mul_term(&shift, &f);
            quot.add_term(shift, f);
        }
        Some(quot)
    }

    /// The polynomial as univariate in its only variable.
    pub fn to_univariate(&self) -> Option<UniPoly> {
        if self.nvars() != 1 {
            return None;
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut c = vec![Q::zero(); deg + 1];
        for (m, a) in &self.terms {
            c[m[0] as usize] = a.clone();
        }
        Some(UniPoly::from_coeffs(c))
    }

    pub fn from_univariate(p: &UniPoly, var: &str) -> Self {
        let vars = vec![var.to_string()];
        let mut out = Self::zero(&vars);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(vec![k as u32], c.clone());
        }
        out
    }

    pub fn parse(vars: &[String], text: &str) -> Result<Self> {
        expr::parse_with(&PolyBuilder { vars }, text)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let order = MonomialOrder::default();
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (m, c) in terms {
            let mono = if m.iter().all(|&e| e == 0) { String::new() } else { monomial_to_string(&self.vars, m) };
            push_term(&mut out, c, &mono);
        }
        write!(f, "{out}")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.vars, o.vars, "polynomials over different variables");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.vars, o.vars, "polynomials over different variables");
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.vars, o.vars, "polynomials over different variables");
        let mut p = Poly::zero(&self.vars);
        for (m, c) in &o.terms {
            for (n, d) in &self.terms {
                p.add_term(m.iter().zip(n).map(|(a, b)| a + b).collect(), c * d);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

struct PolyBuilder<'a> {
    vars: &'a [String],
}

impl Builder for PolyBuilder<'_> {
    type Value = Poly;
    fn scalar(&self, c: Q) -> Poly {
        Poly::constant(self.vars, c)
    }
    fn variable(&self, name: &str) -> Option<Poly> {
        self.vars.iter().position(|v| v == name).map(|k| Poly::var(self.vars, k))
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a + b
    }
    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a * b
    }
    fn as_scalar(&self, a: &Poly) -> Option<Q> {
        a.as_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(n: usize) -> Vec<String> {
        Poly::var_names("y", 1, n)
    }

    #[test]
    fn parse_print_round_trip() {
        let v = vars(2);
        let p = Poly::parse(&v, "y1^2*y2 - 3/2*y1 + (1+i) + y2^2").unwrap();
        assert_eq!(p.to_string(), "y1^2*y2 + y2^2 - 3/2*y1 + (1+i)");
        assert_eq!(Poly::parse(&v, &p.to_string()).unwrap(), p);
        assert!(Poly::parse(&v, "y3").is_err());
        assert_eq!(Poly::parse(&v, "(y1 - y1)").unwrap().to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let v = vars(3);
        let a = Poly::parse(&v, "y1 + 2*y2 - y3").unwrap();
        let b = Poly::parse(&v, "y1*y3 - i*y2^2 + 1").unwrap();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn homogeneity_and_dehomogenization() {
        let v = Poly::var_names("y", 0, 3);
        let conic = Poly::parse(&v, "y0*y2 - y1^2").unwrap();
        assert!(conic.is_homogeneous());
        assert_eq!(conic.dehomogenize(0).to_string(), "-y1^2 + y2");
        let pt: Vec<Q> = [1, 1, 2].iter().map(|&x| Q::integer(x)).collect();
        assert_eq!(conic.eval(&pt), Q::one());
    }

    #[test]
    fn matrix_evaluation_uses_unit_for_constants() {
        let v = vars(1);
        let p = Poly::parse(&v, "y1^2 + 2").unwrap();
        let e = Matrix::diag_ints(&[1, 0]);
        let m = Matrix::diag_ints(&[3, 0]);
        assert_eq!(p.eval_matrices(&[m], &e).unwrap(), Matrix::diag_ints(&[11, 0]));
    }
}
