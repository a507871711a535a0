//! Noncommutative polynomials in generator symbols `g0, g1, ..., gl`.
//!
//! `g0` is the redundant identity generator of a chart presentation. The
//! empty word also denotes it, so scalars evaluate to multiples of whatever
//! matrix is assigned to `g0` (possibly an idempotent rather than 1).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Builder};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::unipoly::push_term;

type Q = GaussianRational;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct NcPoly {
    terms: BTreeMap<Vec<usize>, Q>,
}

impl NcPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: Q) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn one() -> Self {
        Self::scalar(Q::one())
    }

    pub fn generator(k: usize) -> Self {
        Self::word(vec![k])
    }

    pub fn word(w: Vec<usize>) -> Self {
        Self::term(w, Q::one())
    }

    pub fn term(w: Vec<usize>, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    fn add_term(&mut self, w: Vec<usize>, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(Q::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest generator index that occurs.
    pub fn max_generator(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut p = Self::zero();
        for (w, a) in &self.terms {
            p.add_term(w.clone(), a * c);
        }
        p
    }

    /// Evaluates with `g_k -> assignment[k]`; the empty word maps to `assignment[0]`.
    pub fn eval(&self, assignment: &[Matrix]) -> Result<Matrix> {
        let unit = assignment.first().ok_or(Error::UnboundGenerator(0))?;
        let n = unit.rows();
        if let Some(bad) = assignment.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.rows() });
        }
        if let Some(k) = self.max_generator().filter(|&k| k >= assignment.len()) {
            return Err(Error::UnboundGenerator(k));
        }
        let mut acc = Matrix::zero(n);
        for (w, c) in &self.terms {
            let mut t = match w.split_first() {
                None => unit.clone(),
                Some((&first, rest)) => rest.iter().fold(assignment[first].clone(), |t, &g| &t * &assignment[g]),
            };
            if !c.is_one() {
                t = t.scale(c);
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        expr::parse_with(&NcBuilder, text)
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(b.0)));
        let mut out = String::new();
        for (w, c) in terms {
            let mono: Vec<String> = w.iter().map(|g| format!("g{g}")).collect();
            push_term(&mut out, c, &mono.join("*"));
        }
        write!(f, "{out}")
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn add(self, o: &NcPoly) -> NcPoly {
        let mut p = self.clone();
        for (w, c) in &o.terms {
            p.add_term(w.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn sub(self, o: &NcPoly) -> NcPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;
    fn mul(self, o: &NcPoly) -> NcPoly {
        let mut p = NcPoly::zero();
        for (w, c) in &self.terms {
            for (v, d) in &o.terms {
                let mut word = w.clone();
                word.extend_from_slice(v);
                p.add_term(word, c * d);
            }
        }
        p
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        self.scale(&-Q::one())
    }
}

struct NcBuilder;

impl Builder for NcBuilder {
    type Value = NcPoly;
    fn scalar(&self, c: Q) -> NcPoly {
        NcPoly::scalar(c)
    }
    fn variable(&self, name: &str) -> Option<NcPoly> {
        name.strip_prefix('g')?.parse().ok().map(NcPoly::generator)
    }
    fn add(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        a + b
    }
    fn mul(&self, a: &NcPoly, b: &NcPoly) -> NcPoly {
        a * b
    }
    fn as_scalar(&self, a: &NcPoly) -> Option<Q> {
        match a.terms.len() {
            0 => Some(Q::zero()),
            1 => a.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }
}
