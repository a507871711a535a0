//! Dense univariate polynomials over Q(i) and exact root extraction.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Builder};
use crate::matrix::Matrix;
use crate::scalar::{gauss_divisors, GaussianInteger, GaussianRational};

type Q = GaussianRational;

/// Coefficients are stored lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Q::integer(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `y`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![Q::zero(), Q::one()])
    }

    /// `y - root`.
    pub fn linear(root: &Q) -> Self {
        Self::from_coeffs(vec![-root, Q::one()])
    }

    /// `Π (y - λ)^d`.
    pub fn from_roots(roots: &[(Q, usize)]) -> Self {
        let mut p = Self::one();
        for (r, d) in roots {
            for _ in 0..*d {
                p = &p * &Self::linear(r);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().inv().expect("nonzero leading coefficient"))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &Q::integer(k as i64)).collect())
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluates at a matrix, sending the constant term to `c * unit`.
    pub fn eval_matrix(&self, m: &Matrix, unit: &Matrix) -> Matrix {
        let mut acc = unit.scale(&Q::zero());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * m) + &unit.scale(c);
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![Q::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    r[k + j] -= &t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Self::from_coeffs(q), Self::from_coeffs(r)))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// The Taylor shift `p(y + a)`.
    pub fn shift(&self, a: &Q) -> Self {
        let mut acc = Self::zero();
        let lin = Self::from_coeffs(vec![a.clone(), Q::one()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(len).cloned().collect())
    }

    /// Coefficient-wise real and imaginary parts.
    pub fn split_re_im(&self) -> (Self, Self) {
        let re = self.coeffs.iter().map(|c| Q::real(c.re().clone())).collect();
        let im = self.coeffs.iter().map(|c| Q::real(c.im().clone())).collect();
        (Self::from_coeffs(re), Self::from_coeffs(im))
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            push_term(&mut out, c, &mono);
        }
        out
    }

    pub fn parse(text: &str, var: &str) -> Result<Self> {
        expr::parse_with(&UniBuilder { var }, text)
    }
}

/// Appends `c*mono` to a sum being printed, handling signs and parentheses.
pub(crate) fn push_term(out: &mut String, c: &Q, mono: &str) {
    let negative_real = c.is_real() && c.re() < &BigRational::zero();
    let mag = if negative_real { -c } else { c.clone() };
    let first = out.is_empty();
    if !first {
        out.push_str(if negative_real { " - " } else { " + " });
    } else if negative_real {
        out.push('-');
    }
    let coef = if mag.is_real() { mag.to_string() } else { format!("({mag})") };
    if mono.is_empty() {
        out.push_str(&coef);
    } else if mag.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&coef);
        out.push('*');
        out.push_str(mono);
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_in("y"))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UniPoly::from_coeffs(c)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

struct UniBuilder<'a> {
    var: &'a str,
}

impl Builder for UniBuilder<'_> {
    type Value = UniPoly;
    fn scalar(&self, c: Q) -> UniPoly {
        UniPoly::constant(c)
    }
    fn variable(&self, name: &str) -> Option<UniPoly> {
        (name == self.var).then(UniPoly::x)
    }
    fn add(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a + b
    }
    fn mul(&self, a: &UniPoly, b: &UniPoly) -> UniPoly {
        a * b
    }
    fn as_scalar(&self, a: &UniPoly) -> Option<Q> {
        (a.degree().unwrap_or(0) == 0).then(|| a.coeff(0))
    }
}

/// Roots of a polynomial that lie in Q(i), with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    /// Distinct roots in canonical order.
    pub roots: Vec<(Q, usize)>,
    /// Whether the multiplicities account for the full degree.
    pub splits: bool,
    poly: UniPoly,
}

impl RootSet {
    /// The roots, or `NotSplit` if some factor has no root in Q(i).
    pub fn require_split(self) -> Result<Vec<(Q, usize)>> {
        if self.splits {
            Ok(self.roots)
        } else {
            Err(Error::NotSplit(self.poly.to_string()))
        }
    }
}

/// Rescales to Gaussian-integer coefficients.
fn clear_denominators(p: &UniPoly) -> Vec<GaussianInteger> {
    let l = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()));
    let s = Q::real(BigRational::from_integer(l));
    p.coeffs.iter().map(|c| (c * &s).to_gaussian_integer().expect("denominators cleared")).collect()
}

/// All roots of `p` lying in Q(i).
///
/// Candidates are `u * a / b` with `a` dividing the lowest nonzero
/// coefficient and `b` the leading coefficient in Z[i], `u` a unit.
pub fn gq_roots(p: &UniPoly) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    let deg = p.degree().unwrap();
    let mut found: Vec<(Q, usize)> = Vec::new();

    let zero_mult = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        found.push((Q::zero(), zero_mult));
    }
    let rest = UniPoly::from_coeffs(p.coeffs[zero_mult..].to_vec());
    if rest.degree().unwrap_or(0) > 0 {
        let mut sf = rest.squarefree_part();
        let ints = clear_denominators(&sf);
        let lowest = gauss_divisors(&ints[0])?;
        let leading = gauss_divisors(ints.last().unwrap())?;
        let mut candidates = BTreeSet::new();
        for a in &lowest {
            for unit in a.associates() {
                for b in &leading {
                    candidates.insert(Q::from(&unit) / Q::from(b));
                }
            }
        }
        let mut simple = Vec::new();
        for c in candidates {
            if sf.degree() == Some(0) {
                break;
            }
            if sf.eval(&c).is_zero() {
                sf = sf.div_exact(&UniPoly::linear(&c)).expect("root divides");
                simple.push(c);
            }
        }
        for r in simple {
            let lin = UniPoly::linear(&r);
            let mut q = rest.clone();
            let mut mult = 0;
            while let Some(next) = q.div_exact(&lin) {
                q = next;
                mult += 1;
            }
            found.push((r, mult));
        }
    }
    found.sort();
    let total: usize = found.iter().map(|(_, m)| m).sum();
    Ok(RootSet { roots: found, splits: total == deg, poly: p.clone() })
}
