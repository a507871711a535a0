//! Polynomial deformation paths of morphism points and the merge/split
//! events of their image components.
//!
//! Candidate event times are the real roots of a collision polynomial in
//! `t`: the first non-vanishing principal subresultant coefficient of the
//! characteristic polynomial of a weighted sum of chart coordinates and its
//! derivative. Rational roots are found exactly; other real roots are
//! isolated by Sturm sequences and reported as intervals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::moduli::{check_admissible, components, gauge_algebra, Chart, MorphismPoint, Target};
use crate::scalar::GaussianRational;
use crate::unipoly::{gq_roots, UniPoly};

type Q = GaussianRational;

/// A matrix whose entries are polynomials in `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<UniPoly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<UniPoly>>) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn constant(m: &Matrix) -> Self {
        Self { n: m.n(), entries: m.as_vector().iter().map(|c| UniPoly::constant(c.clone())).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &UniPoly {
        &self.entries[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<UniPoly>> {
        self.entries.chunks(self.n.max(1)).map(<[UniPoly]>::to_vec).collect()
    }

    pub fn eval(&self, t: &Q) -> Matrix {
        Matrix::new(self.n, self.n, self.entries.iter().map(|p| p.eval(t)).collect())
    }

    /// `p(t) -> p(-t)` entrywise.
    pub fn reflect(&self) -> Self {
        let entries = self.entries.iter().map(reflect).collect();
        Self { n: self.n, entries }
    }

    fn identity(n: usize) -> Self {
        let mut entries = vec![UniPoly::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = UniPoly::one();
        }
        Self { n, entries }
    }

    fn combine(&self, o: &Self, f: impl Fn(&UniPoly, &UniPoly) -> UniPoly) -> Self {
        Self { n: self.n, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect() }
    }

    fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut entries = vec![UniPoly::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = &entries[i * n + j] + &(a * o.entry(k, j));
                }
            }
        }
        Self { n, entries }
    }

    fn scale(&self, c: &Q) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|p| p.scale(c)).collect() }
    }

    fn trace(&self) -> UniPoly {
        (0..self.n).fold(UniPoly::zero(), |acc, i| &acc + self.entry(i, i))
    }

    /// Coefficients (low to high in `y`) of `det(y - self)`, by
    /// Faddeev-LeVerrier over `Q(i)[t]`.
    fn char_poly(&self) -> Vec<UniPoly> {
        let n = self.n;
        let mut c = vec![UniPoly::zero(); n + 1];
        c[n] = UniPoly::one();
        let mut m = Self { n, entries: vec![UniPoly::zero(); n * n] };
        for k in 1..=n {
            let shifted = Self::identity(n).combine(&Self::identity(n), |a, _| a * &c[n - k + 1]);
            m = self.mul(&m).combine(&shifted, |a, b| a + b);
            let tr = self.mul(&m).trace();
            c[n - k] = tr.scale(&-Q::ratio(1, k as i64));
        }
        c
    }
}

fn reflect(p: &UniPoly) -> UniPoly {
    UniPoly::from_coeffs(p.coeffs().iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect())
}

/// Chart data with polynomial entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathChart {
    pub e: PolyMatrix,
    pub coords: Vec<PolyMatrix>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeformationPath {
    pub target: Target,
    pub n: usize,
    pub charts: Vec<PathChart>,
    /// Increasing sample parameters.
    pub samples: Vec<Q>,
}

impl DeformationPath {
    /// An affine path with identity chart idempotent.
    pub fn affine(coords: Vec<PolyMatrix>, samples: Vec<Q>) -> Self {
        let n = coords.first().map_or(0, PolyMatrix::n);
        let e = PolyMatrix::constant(&Matrix::identity(n));
        Self { target: Target::Affine { r: coords.len() }, n, charts: vec![PathChart { e, coords }], samples }
    }

    /// The same family traversed backwards: `t -> -t`.
    pub fn reversed(&self) -> Self {
        let charts = self
            .charts
            .iter()
            .map(|c| PathChart { e: c.e.reflect(), coords: c.coords.iter().map(PolyMatrix::reflect).collect() })
            .collect();
        let samples = self.samples.iter().rev().map(|s| -s).collect();
        Self { target: self.target.clone(), n: self.n, charts, samples }
    }
}

/// The point at parameter `t`, which must be admissible.
pub fn eval_path(path: &DeformationPath, t: &Q) -> Result<MorphismPoint> {
    let charts = path
        .charts
        .iter()
        .map(|c| Chart { e: c.e.eval(t), coords: c.coords.iter().map(|m| m.eval(t)).collect() })
        .collect();
    let p = MorphismPoint { n: path.n, target: path.target.clone(), charts };
    let diags = check_admissible(&p);
    if diags.is_empty() {
        Ok(p)
    } else {
        let text: Vec<String> = diags.iter().map(ToString::to_string).collect();
        Err(Error::Invalid(format!("path is not admissible at t = {t}: {}", text.join("; "))))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EventKind {
    Merge,
    Split,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Merge => "merge",
            Self::Split => "split",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EventTime {
    Exact(Q),
    /// An irrational collision time isolated in `(lo, hi)`.
    Unresolved(Q, Q),
}

/// Components, gauge dimension and Chan-Paton lengths at one parameter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PathState {
    pub components: usize,
    pub gauge: usize,
    pub lengths: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HiggsEvent {
    pub t: EventTime,
    pub kind: EventKind,
    /// `None` on the collision side of an unresolved event.
    pub before: Option<PathState>,
    pub after: Option<PathState>,
}

impl HiggsEvent {
    /// One JSON object, with parameters as exact strings.
    pub fn to_json(&self) -> serde_json::Value {
        let (b, a) = (self.before.as_ref(), self.after.as_ref());
        let mut v = json!({
            "t": match &self.t {
                EventTime::Exact(t) => t.to_string(),
                EventTime::Unresolved(..) => "unresolved".to_string(),
            },
            "kind": self.kind.to_string(),
            "components": [b.map(|s| s.components), a.map(|s| s.components)],
            "gauge": [b.map(|s| s.gauge), a.map(|s| s.gauge)],
            "lengths": [b.map(|s| &s.lengths), a.map(|s| &s.lengths)],
        });
        if let EventTime::Unresolved(lo, hi) = &self.t {
            v["interval"] = json!([lo.to_string(), hi.to_string()]);
        }
        v
    }
}

pub fn state_at(path: &DeformationPath, t: &Q) -> Result<PathState> {
    let p = eval_path(path, t)?;
    let comps = components(&p)?;
    let gauge = gauge_algebra(&p)?.total;
    Ok(PathState { components: comps.len(), gauge, lengths: comps.iter().map(|c| c.length).collect() })
}

/// `1/1024` unless `D0_RESOLUTION` holds a positive scalar.
pub fn default_resolution() -> Q {
    std::env::var("D0_RESOLUTION")
        .ok()
        .and_then(|s| s.parse::<Q>().ok())
        .filter(|r| r.is_real() && *r > Q::zero())
        .unwrap_or_else(|| Q::ratio(1, 1024))
}

/// Determinant by fraction-free elimination over `Q(i)[t]`.
fn det(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else { return UniPoly::zero() };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 { UniPoly::one() } else { m[n - 1][n - 1].clone() };
    if sign {
        -&d
    } else {
        d
    }
}

/// `psc_j(a, b)` for polynomials in `y` given as coefficient lists (low to
/// high) with entries in `Q(i)[t]`.
fn principal_subresultant(a: &[UniPoly], b: &[UniPoly], j: usize) -> UniPoly {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db - 2 * j;
    let mut rows = Vec::with_capacity(size);
    for (p, dp, count) in [(a, da, db - j), (b, db, da - j)] {
        for shift in 0..count {
            let mut row = vec![UniPoly::zero(); size];
            for (k, c) in p.iter().rev().enumerate() {
                if shift + k < size {
                    row[shift + k] = c.clone();
                }
            }
            debug_assert!(dp + 1 + shift <= size + 2 * j);
            rows.push(row);
        }
    }
    det(rows)
}

/// Rational critical parameters, and isolating intervals of the
/// irrational ones.
pub type CriticalPoints = (Vec<Q>, Vec<(Q, Q)>);

/// A polynomial in `t` vanishing at every parameter where two eigenvalues
/// of a weighted combination of the chart coordinates collide.
pub fn collision_polynomial(path: &DeformationPath) -> UniPoly {
    weighted_collision_polynomial(path, |k| k as i64 + 2)
}

fn weighted_collision_polynomial(path: &DeformationPath, weight: impl Fn(usize) -> i64) -> UniPoly {
    let mut out = UniPoly::one();
    for (i, chart) in path.charts.iter().enumerate() {
        let gens: Vec<&PolyMatrix> = chart
            .coords
            .iter()
            .enumerate()
            .filter(|(c, _)| !path.target.is_projective() || *c != i)
            .map(|(_, m)| m)
            .collect();
        let mut l = chart.e.clone();
        for (k, g) in gens.iter().enumerate() {
            l = l.combine(&g.scale(&Q::integer(weight(k))), |a, b| a + b);
        }
        let chi = l.char_poly();
        if chi.len() < 3 {
            continue;
        }
        let dchi: Vec<UniPoly> = chi.iter().enumerate().skip(1).map(|(k, c)| c.scale(&Q::integer(k as i64))).collect();
        // j = n - 1 gives the leading coefficient of chi', a nonzero constant
        let d = (0..chi.len() - 1)
            .map(|j| principal_subresultant(&chi, &dchi, j))
            .find(|p| !p.is_zero())
            .expect("the top subresultant coefficient is a nonzero constant");
        out = &out * &d;
    }
    out
}

fn sign_changes(seq: &[UniPoly], x: &Q) -> usize {
    let signs: Vec<bool> = seq.iter().map(|p| p.eval(x)).filter(|v| !v.is_zero()).map(|v| v > Q::zero()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sturm_sequence(p: &UniPoly) -> Vec<UniPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let k = seq.len();
        let r = seq[k - 2].rem(&seq[k - 1]).expect("nonzero divisor");
        seq.push(-&r);
    }
    seq.pop();
    seq
}

/// Isolating intervals of width at most `res` for the real roots of the
/// squarefree real polynomial `p` in `(lo, hi]`.
fn isolate(p: &UniPoly, lo: &Q, hi: &Q, res: &Q) -> Vec<(Q, Q)> {
    let seq = sturm_sequence(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&seq, &a) - sign_changes(&seq, &b);
        if count == 0 {
            continue;
        }
        if count == 1 && &b - &a <= *res {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) * Q::ratio(1, 2);
        stack.push((mid.clone(), b));
        stack.push((a, mid));
    }
    out.sort();
    out
}

/// Exact and isolated real roots of the collision polynomial in `[lo, hi]`.
pub fn critical_points(path: &DeformationPath, lo: &Q, hi: &Q, res: &Q) -> Result<CriticalPoints> {
    let d = collision_polynomial(path);
    let (re, im) = d.split_re_im();
    let g = re.gcd(&im);
    if g.is_zero() {
        return Err(Error::Invalid("collision polynomial vanishes identically".into()));
    }
    let roots = gq_roots(&g)?;
    let exact: Vec<Q> =
        roots.roots.iter().map(|(r, _)| r.clone()).filter(|r| r.is_real() && r >= lo && r <= hi).collect();
    let mut rest = g.squarefree_part();
    for (r, _) in &roots.roots {
        rest = rest.div_exact(&UniPoly::linear(r)).unwrap_or(rest);
    }
    let mut intervals = Vec::new();
    if rest.degree().unwrap_or(0) > 0 {
        // a root that is not also a collision for a second weighting only
        // records two distinct points with equal weighted sums
        let (re2, im2) = weighted_collision_polynomial(path, |k| (k as i64 + 2).pow(2) + 1).split_re_im();
        let genuine = rest.gcd(&re2.gcd(&im2));
        if genuine.degree().unwrap_or(0) == 0 {
            return Ok((exact, intervals));
        }
        let seq = sturm_sequence(&rest);
        let genuine_seq = sturm_sequence(&genuine);
        for (mut a, mut b) in isolate(&rest, lo, hi, res) {
            if sign_changes(&genuine_seq, &a) == sign_changes(&genuine_seq, &b) {
                continue;
            }
            // keep exact points outside the isolating interval
            while exact.iter().any(|x| *x > a && *x < b) {
                let mid = (&a + &b) * Q::ratio(1, 2);
                if sign_changes(&seq, &a) - sign_changes(&seq, &mid) == 1 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            intervals.push((a, b));
        }
    }
    Ok((exact, intervals))
}

/// The rational of least denominator in the open interval `(x, y)`,
/// nearest to zero among those; keeps the exact arithmetic at gap samples
/// small.
fn simplest_between(x: &BigRational, y: Option<&BigRational>) -> BigRational {
    let zero = BigRational::zero();
    if let Some(y) = y {
        if *x < zero && *y > zero {
            return zero;
        }
        if *y <= zero {
            return -simplest_between(&-y, Some(&-x));
        }
    }
    let n = x.floor();
    let next = &n + BigRational::one();
    if y.is_none_or(|y| next < *y) {
        return next;
    }
    let y = y.expect("bounded here");
    let hi = if *x == n { None } else { Some((x - &n).recip()) };
    n + simplest_between(&(y - x.floor()).recip(), hi.as_ref()).recip()
}

enum Marker {
    Exact(Q),
    Unresolved(Q, Q),
}

impl Marker {
    fn lo(&self) -> &Q {
        match self {
            Self::Exact(t) | Self::Unresolved(t, _) => t,
        }
    }

    fn hi(&self) -> &Q {
        match self {
            Self::Exact(t) | Self::Unresolved(_, t) => t,
        }
    }
}

/// Merge and split events along the path, in parameter order. A point where
/// components coincide is compared with the open intervals on either side,
/// so a crossing shows up as a merge followed by a split at the same `t`.
/// Irrational collisions give the same pair over an isolating interval,
/// without the state at the collision.
pub fn detect_events(path: &DeformationPath, res: &Q) -> Result<Vec<HiggsEvent>> {
    if path.samples.windows(2).any(|w| w[0] >= w[1]) || path.samples.iter().any(|s| !s.is_real()) {
        return Err(Error::Invalid("samples must be real and strictly increasing".into()));
    }
    let (Some(lo), Some(hi)) = (path.samples.first(), path.samples.last()) else { return Ok(vec![]) };
    let (exact, intervals) = critical_points(path, lo, hi, res)?;
    let mut points: Vec<Q> = path.samples.iter().cloned().chain(exact).collect();
    points.sort();
    points.dedup();
    let mut markers: Vec<Marker> = points.into_iter().map(Marker::Exact).collect();
    markers.extend(intervals.into_iter().map(|(a, b)| Marker::Unresolved(a, b)));
    markers.sort_by(|a, b| a.lo().cmp(b.lo()));

    let mut events = Vec::new();
    let mut gap_before: Option<PathState> = None;
    for (k, marker) in markers.iter().enumerate() {
        let gap_after = match markers.get(k + 1) {
            Some(next) => {
                let t = simplest_between(marker.hi().re(), Some(next.lo().re()));
                Some(state_at(path, &Q::real(t))?)
            }
            None => None,
        };
        match marker {
            Marker::Exact(t) => {
                let here = state_at(path, t)?;
                if let Some(before) = &gap_before {
                    if here.components < before.components {
                        events.push(HiggsEvent {
                            t: EventTime::Exact(t.clone()),
                            kind: EventKind::Merge,
                            before: Some(before.clone()),
                            after: Some(here.clone()),
                        });
                    }
                }
                if let Some(after) = &gap_after {
                    if after.components > here.components {
                        events.push(HiggsEvent {
                            t: EventTime::Exact(t.clone()),
                            kind: EventKind::Split,
                            before: Some(here.clone()),
                            after: Some(after.clone()),
                        });
                    }
                }
            }
            Marker::Unresolved(a, b) => {
                let t = EventTime::Unresolved(a.clone(), b.clone());
                if gap_before.is_some() {
                    events.push(HiggsEvent {
                        t: t.clone(),
                        kind: EventKind::Merge,
                        before: gap_before.clone(),
                        after: None,
                    });
                }
                if gap_after.is_some() {
                    events.push(HiggsEvent { t, kind: EventKind::Split, before: None, after: gap_after.clone() });
                }
            }
        }
        gap_before = gap_after;
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn t_poly(s: &str) -> UniPoly {
        UniPoly::parse(s, "t").unwrap()
    }

    fn diag(entries: &[&str]) -> PolyMatrix {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { t_poly(entries[i]) } else { UniPoly::zero() }).collect())
            .collect();
        PolyMatrix::from_rows(rows).unwrap()
    }

    fn counts(e: &HiggsEvent) -> (usize, usize) {
        (e.before.as_ref().unwrap().components, e.after.as_ref().unwrap().components)
    }

    fn gauges(e: &HiggsEvent) -> (usize, usize) {
        (e.before.as_ref().unwrap().gauge, e.after.as_ref().unwrap().gauge)
    }

    fn crossing(samples: &[&str]) -> DeformationPath {
        DeformationPath::affine(vec![diag(&["t", "-t"])], samples.iter().map(|s| q(s)).collect())
    }

    #[test]
    fn simplest_rationals() {
        let r = |s: &str| q(s).re().clone();
        let cases = [
            ("0", "1", "1/2"),
            ("-1/3", "3", "0"),
            ("1449/1024", "2", "3/2"),
            ("-2", "-1/3", "-1"),
            ("1/3", "1/2", "2/5"),
            ("3", "5", "4"),
            ("-7/2", "-3", "-10/3"),
        ];
        for (x, y, want) in cases {
            assert_eq!(simplest_between(&r(x), Some(&r(y))), r(want), "({x}, {y})");
        }
        assert_eq!(simplest_between(&r("5/2"), None), r("3"));
        // brute force: no smaller denominator fits
        for (a, b) in [(3i64, 7i64), (-10, -9), (13, 14), (-1, 40)] {
            let (x, y) = (BigRational::new(a.into(), 11.into()), BigRational::new(b.into(), 11.into()));
            let s = simplest_between(&x, Some(&y));
            assert!(x < s && s < y);
            for den in 1..*s.denom().to_u64_digits().1.first().unwrap() as i64 {
                let d = BigRational::from_integer(den.into());
                assert!((&x * &d).floor() + BigRational::one() >= &y * &d, "{a}/11 {b}/11 den {den}");
            }
        }
    }

    #[test]
    fn known_eval_path() {
        let p = crossing(&["-1", "1"]);
        assert_eq!(eval_path(&p, &q("1")).unwrap().charts[0].coords[0], Matrix::diag_ints(&[1, -1]));
        assert!(eval_path(&p, &q("0")).unwrap().charts[0].coords[0].is_zero());
        let pair = DeformationPath::affine(vec![diag(&["t", "0"]), diag(&["0", "t"])], vec![]);
        let pt = eval_path(&pair, &q("2")).unwrap();
        assert_eq!(pt.charts[0].coords, vec![Matrix::diag_ints(&[2, 0]), Matrix::diag_ints(&[0, 2])]);
    }

    #[test]
    fn coincident_eigenvalues_have_no_events() {
        let path = DeformationPath::affine(vec![diag(&["t", "t"])], vec![q("-1"), q("0"), q("1")]);
        assert!(collision_polynomial(&path).degree() == Some(0));
        assert!(detect_events(&path, &Q::ratio(1, 64)).unwrap().is_empty());
    }

    #[test]
    fn crossing_merges_then_splits() {
        let res = Q::ratio(1, 1024);
        let ev = detect_events(&crossing(&["-1", "0"]), &res).unwrap();
        assert_eq!(ev.len(), 1);
        assert_eq!(ev[0].t, EventTime::Exact(q("0")));
        assert_eq!(ev[0].kind, EventKind::Merge);
        assert_eq!(counts(&ev[0]), (2, 1));
        assert_eq!(gauges(&ev[0]), (2, 4));
        assert_eq!(
            ev[0].to_json().to_string(),
            r#"{"components":[2,1],"gauge":[2,4],"kind":"merge","lengths":[[1,1],[2]],"t":"0"}"#
        );

        let ev = detect_events(&crossing(&["-1", "1"]), &res).unwrap();
        let kinds: Vec<EventKind> = ev.iter().map(|e| e.kind).collect();
        assert_eq!(kinds, vec![EventKind::Merge, EventKind::Split]);
        assert!(ev.iter().all(|e| e.t == EventTime::Exact(q("0"))));
    }

    #[test]
    fn reversal_swaps_kinds() {
        let res = Q::ratio(1, 1024);
        let path = crossing(&["-1", "0"]);
        let back = detect_events(&path.reversed(), &res).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].kind, EventKind::Split);
        assert_eq!(gauges(&back[0]), (4, 2));

        let path = DeformationPath::affine(vec![diag(&["t^2 - 1/4", "0", "t"])], vec![q("-2"), q("-1/3"), q("3")]);
        let fwd = detect_events(&path, &res).unwrap();
        let mut mirrored: Vec<(EventTime, EventKind)> = detect_events(&path.reversed(), &res)
            .unwrap()
            .into_iter()
            .rev()
            .map(|e| {
                let t = match e.t {
                    EventTime::Exact(t) => EventTime::Exact(-&t),
                    EventTime::Unresolved(a, b) => EventTime::Unresolved(-&b, -&a),
                };
                let kind = if e.kind == EventKind::Merge { EventKind::Split } else { EventKind::Merge };
                (t, kind)
            })
            .collect();
        mirrored.sort_by(|a, b| match (&a.0, &b.0) {
            (EventTime::Exact(x), EventTime::Exact(y)) => x.cmp(y),
            _ => std::cmp::Ordering::Equal,
        });
        let fwd: Vec<(EventTime, EventKind)> = fwd.into_iter().map(|e| (e.t, e.kind)).collect();
        assert_eq!(fwd, mirrored);
    }

    #[test]
    fn constant_path_and_plane_collision() {
        let res = Q::ratio(1, 1024);
        let c = DeformationPath::affine(vec![PolyMatrix::constant(&Matrix::diag_ints(&[1, 2]))], vec![q("-1"), q("1")]);
        assert_eq!(detect_events(&c, &res).unwrap(), vec![]);

        let plane = DeformationPath::affine(vec![diag(&["t", "0"]), diag(&["0", "0"])], vec![q("-1"), q("1")]);
        let ev = detect_events(&plane, &res).unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].t, EventTime::Exact(q("0")));
        assert_eq!(ev[0].kind, EventKind::Merge);
    }

    #[test]
    fn irrational_collisions_are_isolated() {
        let res = Q::ratio(1, 1024);
        // eigenvalues t^2 and 2 collide at t = +-sqrt(2)
        let path = DeformationPath::affine(vec![diag(&["t^2", "2"])], vec![q("0"), q("2")]);
        let ev = detect_events(&path, &res).unwrap();
        assert_eq!(ev.len(), 2);
        let EventTime::Unresolved(a, b) = &ev[0].t else { panic!("expected an interval") };
        assert!(&b.clone() - a <= res);
        assert!(a * a < q("2") && b * b > q("2"));
        assert_eq!(ev[0].kind, EventKind::Merge);
        assert_eq!(ev[1].kind, EventKind::Split);
        assert_eq!(ev[0].before.as_ref().unwrap().components, 2);
        assert_eq!(ev[1].before, None);
        let j = ev[0].to_json();
        assert_eq!(j["components"], json!([2, null]));
        assert!(j["interval"].is_array());

        // the points (t^2 - 2, 0) and (0, 2) never meet, though their weighted
        // sums agree at t = sqrt(5)
        let path = DeformationPath::affine(vec![diag(&["t^2 - 2", "0"]), diag(&["0", "2"])], vec![q("0"), q("3")]);
        assert_eq!(detect_events(&path, &res).unwrap(), vec![]);
    }

    #[test]
    fn chan_paton_total_is_constant() {
        let path = DeformationPath::affine(vec![diag(&["t", "-t", "t^2"])], vec![q("-2"), q("2")]);
        for e in detect_events(&path, &Q::ratio(1, 64)).unwrap() {
            let (b, a) = (e.before.unwrap(), e.after.unwrap());
            assert_eq!(b.lengths.iter().sum::<usize>(), 3);
            assert_eq!(a.lengths.iter().sum::<usize>(), 3);
            let (small, big) = if e.kind == EventKind::Merge { (b, a) } else { (a, b) };
            assert!(big.components < small.components);
            assert!(big.gauge >= small.gauge + 2);
        }
    }

    #[test]
    fn collision_polynomial_of_a_crossing() {
        let d = collision_polynomial(&crossing(&[]));
        let roots = gq_roots(&d).unwrap();
        assert_eq!(roots.roots.iter().map(|r| r.0.clone()).collect::<Vec<_>>(), vec![q("0")]);
    }
}
