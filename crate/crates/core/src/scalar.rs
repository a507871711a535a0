//! The scalar field Q(i) and the Gaussian integers Z[i].
//!
//! Every matrix entry, eigenvalue and coordinate in the crate is a
//! [`GaussianRational`]. Values are always kept in reduced form, so the
//! derived equality and hashing are exact.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `re + im*i` of Q(i).
///
/// The derived ordering is lexicographic on `(re, im)`; it is the canonical
/// order used for every sorted output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn integer(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    /// `num/den` as a real scalar. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// The Gaussian integer `self * k`, if it is one.
    pub fn to_gaussian_integer(&self) -> Option<GaussianInteger> {
        if self.re.is_integer() && self.im.is_integer() {
            Some(GaussianInteger::new(self.re.to_integer(), self.im.to_integer()))
        } else {
            None
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

impl From<&GaussianInteger> for GaussianRational {
    fn from(z: &GaussianInteger) -> Self {
        Self::new(BigRational::from_integer(z.re.clone()), BigRational::from_integer(z.im.clone()))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

/// Panics on division by zero; use [`GaussianRational::checked_div`] otherwise.
impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let imag = if self.im.is_one() {
            "i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}*i", fmt_rational(&self.im))
        };
        if self.re.is_zero() {
            write!(f, "{imag}")
        } else if self.im.is_positive() {
            write!(f, "{}+{imag}", fmt_rational(&self.re))
        } else {
            write!(f, "{}{imag}", fmt_rational(&self.re))
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::expr::parse_scalar(s)
    }
}

/// An element of Z[i].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GaussianInteger {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(re.into(), im.into())
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }

    /// `self / d` when the quotient lies in Z[i].
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let re = &self.re * &d.re + &self.im * &d.im;
        let im = &self.im * &d.re - &self.re * &d.im;
        let (qr, rr) = re.div_rem(&n);
        let (qi, ri) = im.div_rem(&n);
        (rr.is_zero() && ri.is_zero()).then(|| Self::new(qr, qi))
    }

    pub fn divides(&self, z: &Self) -> bool {
        z.div_exact(self).is_some()
    }

    /// The four unit multiples `u * self`.
    pub fn associates(&self) -> [Self; 4] {
        let (a, b) = (self.re.clone(), self.im.clone());
        [
            Self::new(a.clone(), b.clone()),
            Self::new(-b.clone(), a.clone()),
            Self::new(-a.clone(), -b.clone()),
            Self::new(b, -a),
        ]
    }

    /// The associate with `re > 0` and `-re < im <= re`.
    pub fn normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.associates()
            .into_iter()
            .find(|z| z.re.is_positive() && -&z.re < z.im && z.im <= z.re)
            .expect("exactly one associate lies in the fundamental sector")
    }
}

impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", GaussianRational::from(self))
    }
}

fn factor_integer(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut primes = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n && p < BigInt::from(1000) {
        while (&n % &p).is_zero() {
            n /= &p;
            primes.push(p.clone());
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        split_large(n, &mut primes);
    }
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for q in primes {
        match out.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => out.push((q, 1)),
        }
    }
    out
}

/// Prime factors of `n`, which has no factor below 1000.
fn split_large(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if n < BigInt::from(1_000_000) || is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(&n);
    split_large(&n / &d, out);
    split_large(d, out);
}

fn is_probable_prime(n: &BigInt) -> bool {
    let one = BigInt::one();
    let m = n - &one;
    let s = m.trailing_zeros().unwrap_or(0);
    let d = &m >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == m {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == m {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A nontrivial divisor of the odd composite `n` (Brent's variant).
fn pollard_rho(n: &BigInt) -> BigInt {
    let mut c = BigInt::one();
    loop {
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigInt::from(2), BigInt::from(2), BigInt::one());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
        c += 1;
    }
}

/// Writes a prime `p = 1 mod 4` as `a^2 + b^2`: take a square root of -1
/// modulo `p` and run Euclid until the remainder drops below `sqrt(p)`.
fn two_squares(p: &BigInt) -> (BigInt, BigInt) {
    let m = p - BigInt::one();
    let e = &m >> 2u32;
    let mut a = BigInt::from(2);
    let root = loop {
        let x = a.modpow(&e, p);
        if (&x * &x) % p == m {
            break x;
        }
        a += 1;
    };
    let limit = p.sqrt();
    let (mut r0, mut r1) = (p.clone(), root);
    while r1 > limit {
        let r2 = &r0 % &r1;
        r0 = r1;
        r1 = r2;
    }
    let b = (p - &r1 * &r1).sqrt();
    debug_assert_eq!(&r1 * &r1 + &b * &b, *p);
    (r1, b)
}

/// One representative per associate class of the Gaussian primes dividing `z`,
/// with multiplicity.
fn gaussian_factorization(z: &GaussianInteger) -> Vec<(GaussianInteger, u32)> {
    let mut rest = z.clone();
    let mut out = Vec::new();
    for (p, _) in factor_integer(&z.norm()) {
        let primes = if p == BigInt::from(2) {
            vec![GaussianInteger::from_ints(1, 1)]
        } else if (&p % 4u32).to_u32() == Some(3) {
            vec![GaussianInteger::new(p.clone(), BigInt::zero())]
        } else {
            let (a, b) = two_squares(&p);
            vec![GaussianInteger::new(a.clone(), b.clone()), GaussianInteger::new(a, -b)]
        };
        for pi in primes {
            let mut e = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.push((pi.normalized(), e));
            }
        }
    }
    out
}

/// All divisors of `z`, one normalized representative per associate class,
/// sorted by norm and then canonically.
pub fn gauss_divisors(z: &GaussianInteger) -> Result<Vec<GaussianInteger>> {
    if z.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut divisors = vec![GaussianInteger::one()];
    for (pi, e) in gaussian_factorization(z) {
        let mut next = Vec::with_capacity(divisors.len() * (e as usize + 1));
        for d in &divisors {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&pi);
                next.push(cur.clone());
            }
        }
        divisors = next;
    }
    let mut out: Vec<GaussianInteger> = divisors.iter().map(GaussianInteger::normalized).collect();
    out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    #[test]
    fn large_factorizations() {
        let p = BigInt::from(1_000_000_007i64);
        let q = BigInt::from(998_244_353i64);
        let n = &p * &q * &q * BigInt::from(12);
        let f = factor_integer(&n);
        assert_eq!(f, vec![(BigInt::from(2), 2), (BigInt::from(3), 1), (q.clone(), 2), (p.clone(), 1)]);
        for prime in [p, q, BigInt::from(5), BigInt::from(13), BigInt::from(1_000_000_009i64)] {
            if (&prime % 4u32).to_u32() == Some(1) {
                let (a, b) = two_squares(&prime);
                assert_eq!(&a * &a + &b * &b, prime);
            }
        }
    }

    #[test]
    fn known_arithmetic() {
        assert_eq!(GaussianRational::i().inv().unwrap(), q("-i"));
        assert_eq!(q("1/2+i") * q("1/2-i"), q("5/4"));
        assert_eq!(q("2/3") + q("1/3"), GaussianRational::one());
        assert_eq!(GaussianRational::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "3/2+1/2*i", "-i", "i", "1-i", "-7/3*i", "5", "-2/5-3*i"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q(" 3 / 2 + 1/2 * i ").to_string(), "3/2+1/2*i");
    }

    #[test]
    fn canonical_order_is_lexicographic() {
        let mut v = vec![q("1"), q("-i"), q("0"), q("i"), q("1/2+5*i")];
        v.sort();
        assert_eq!(v, vec![q("-i"), q("0"), q("i"), q("1/2+5*i"), q("1")]);
    }

    fn gi(a: i64, b: i64) -> GaussianInteger {
        GaussianInteger::from_ints(a, b)
    }

    #[test]
    fn divisors_of_small_integers() {
        assert_eq!(gauss_divisors(&gi(1, 0)).unwrap(), vec![gi(1, 0)]);
        assert_eq!(gauss_divisors(&gi(2, 0)).unwrap(), vec![gi(1, 0), gi(1, 1), gi(2, 0)]);
        let five = gauss_divisors(&gi(5, 0)).unwrap();
        assert_eq!(five.len(), 4);
        for d in [gi(1, 0), gi(2, 1), gi(2, -1), gi(5, 0)] {
            assert!(five.contains(&d.normalized()), "{d}");
        }
        assert_eq!(gauss_divisors(&gi(0, 0)), Err(Error::ZeroInput));
    }

    /// Brute-force oracle: every element of the fundamental sector whose norm
    /// divides norm(z) and which divides z.
    fn brute_divisors(z: &GaussianInteger) -> Vec<GaussianInteger> {
        let n = z.norm().to_i64().unwrap();
        let mut out = Vec::new();
        let bound = (n as f64).sqrt() as i64 + 1;
        for a in 1..=bound {
            for b in (-a + 1)..=a {
                let d = gi(a, b);
                let dn = d.norm().to_i64().unwrap();
                if dn <= n && n % dn == 0 && d.divides(z) {
                    out.push(d);
                }
            }
        }
        out.sort_by(|a, b| a.norm().cmp(&b.norm()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn divisors_match_enumeration_oracle() {
        for a in -12..=12 {
            for b in -12..=12 {
                let z = gi(a, b);
                if z.is_zero() {
                    continue;
                }
                assert_eq!(gauss_divisors(&z).unwrap(), brute_divisors(&z), "z = {z}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn scalar() -> impl Strategy<Value = GaussianRational> {
            (-20i64..20, 1i64..9, -20i64..20, 1i64..9).prop_map(|(a, b, c, d)| {
                GaussianRational::new(BigRational::new(a.into(), b.into()), BigRational::new(c.into(), d.into()))
            })
        }

        proptest! {
            #[test]
            fn field_laws(a in scalar(), b in scalar(), c in scalar()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                if !a.is_zero() {
                    prop_assert_eq!(&a * &a.inv().unwrap(), GaussianRational::one());
                }
            }

            #[test]
            fn display_parses_back(a in scalar()) {
                prop_assert_eq!(a.to_string().parse::<GaussianRational>().unwrap(), a);
            }
        }
    }
}
