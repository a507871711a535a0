//! Admissibility: ring-set conditions per chart and the gluing conditions
//! across charts.

use std::collections::BTreeMap;

use crate::matrix::{Matrix, Subspace};
use crate::ncword::NcPoly;
use crate::poly::Poly;
use crate::span::MatrixSpan;

use super::{Diagnostic, MorphismPoint, Target};

/// Checks that `1 -> e, y_j -> m_j` defines a ring-set homomorphism from a
/// polynomial ring: `e` idempotent, a unit for each `m_j`, all commuting.
pub fn check_ringset(e: &Matrix, m: &[Matrix]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if &(e * e) != e {
        out.push(Diagnostic::new("ring-set:idempotent", "e*e != e"));
    }
    for (j, mj) in m.iter().enumerate() {
        if &(e * mj) != mj {
            out.push(Diagnostic::new("ring-set:unit", format!("e*m{j} != m{j}")));
        }
        if &(mj * e) != mj {
            out.push(Diagnostic::new("ring-set:unit", format!("m{j}*e != m{j}")));
        }
    }
    for (j, a) in m.iter().enumerate() {
        for (k, b) in m.iter().enumerate().skip(j + 1) {
            if !a.commutes_with(b) {
                out.push(Diagnostic::new("commuting", format!("m{j}*m{k} != m{k}*m{j}")));
            }
        }
    }
    out
}

/// Presentation `<g0, .., gl> / (relators)` of one chart ring, where `g0`
/// is the redundant unit generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartPresentation {
    pub generators: usize,
    pub relators: Vec<NcPoly>,
}

impl ChartPresentation {
    /// Adds the unit relators `g0 gi - gi` and `gi g0 - gi` to `relators`.
    pub fn new(generators: usize, mut relators: Vec<NcPoly>) -> Self {
        let g0 = NcPoly::generator(0);
        for i in 0..generators {
            let gi = NcPoly::generator(i);
            for r in [&(&g0 * &gi) - &gi, &(&gi * &g0) - &gi] {
                if !relators.contains(&r) {
                    relators.push(r);
                }
            }
        }
        Self { generators, relators }
    }

    /// Polynomial ring on `l` commuting generators.
    pub fn commutative(l: usize) -> Self {
        let mut rels = Vec::new();
        for i in 1..=l {
            for j in i + 1..=l {
                let (a, b) = (NcPoly::generator(i), NcPoly::generator(j));
                rels.push(&(&a * &b) - &(&b * &a));
            }
        }
        Self::new(l + 1, rels)
    }
}

/// A fraction `numerator / denominator` of words in another chart.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Transition {
    pub numerator: NcPoly,
    pub denominator: NcPoly,
}

impl Transition {
    pub fn new(numerator: NcPoly, denominator: NcPoly) -> Self {
        Self { numerator, denominator }
    }
}

/// Fixed presentation data of a gluing system of chart rings. For an
/// ordered pair `(a, b)` of charts, `localizations` lifts the set inverted
/// on the overlap as words in chart `a`; `generator_transitions` gives, for
/// each generator of chart `a`, its image on the overlap as a fraction in
/// chart `b`; `localization_transitions` does the same for `1 / s`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PresentedChartSystem {
    pub charts: Vec<ChartPresentation>,
    pub localizations: BTreeMap<(usize, usize), Vec<NcPoly>>,
    pub generator_transitions: BTreeMap<(usize, usize), Vec<Transition>>,
    pub localization_transitions: BTreeMap<(usize, usize), Vec<Transition>>,
}

fn w(k: usize) -> NcPoly {
    NcPoly::generator(k)
}

impl PresentedChartSystem {
    /// The single chart `C[y1..yr]`.
    pub fn affine(r: usize) -> Self {
        let mut s = Self { charts: vec![ChartPresentation::commutative(r)], ..Self::default() };
        s.localizations.insert((0, 0), vec![w(0)]);
        s.generator_transitions.insert((0, 0), (0..=r).map(|k| Transition::new(w(k), w(0))).collect());
        s.localization_transitions.insert((0, 0), vec![Transition::new(w(0), w(0))]);
        s
    }

    /// Generator index of `y_c / y_i` in chart `i` of `P^r`; `y_i / y_i` is `g0`.
    pub fn projective_generator(i: usize, c: usize) -> usize {
        match c.cmp(&i) {
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Less => c + 1,
            std::cmp::Ordering::Greater => c,
        }
    }

    /// The standard charts `C[y0/yi, .., yr/yi]` of `P^r`, glued along
    /// `y_c/y_i = (y_c/y_j) / (y_i/y_j)`.
    pub fn projective(r: usize) -> Self {
        let gen = Self::projective_generator;
        let mut s = Self { charts: (0..=r).map(|_| ChartPresentation::commutative(r)).collect(), ..Self::default() };
        for i in 0..=r {
            for j in 0..=r {
                s.localizations.insert((i, j), vec![w(gen(i, j))]);
                let mut gens = vec![Transition::new(w(0), w(0)); r + 1];
                for c in (0..=r).filter(|&c| c != i) {
                    gens[gen(i, c)] = Transition::new(w(gen(j, c)), w(gen(j, i)));
                }
                s.generator_transitions.insert((i, j), gens);
                s.localization_transitions.insert((i, j), vec![Transition::new(w(gen(j, i)), w(0))]);
            }
        }
        s
    }

    /// Evaluates every admissibility condition on `assignment[a] =
    /// [M_a0, M_a1, ..]`; an empty result means admissible.
    pub fn check(&self, assignment: &[Vec<Matrix>]) -> Vec<Diagnostic> {
        self.check_labeled(assignment, &|a| a.to_string())
    }

    pub(crate) fn check_labeled(&self, asg: &[Vec<Matrix>], label: &dyn Fn(usize) -> String) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if let Some(d) = self.shape(asg) {
            return vec![d];
        }
        let n = asg[0][0].n();
        let units: Vec<&Matrix> = asg.iter().map(|a| &a[0]).collect();

        for (a, pres) in self.charts.iter().enumerate() {
            for r in &pres.relators {
                match r.eval(&asg[a]) {
                    Ok(m) if m.is_zero() => {}
                    Ok(_) => out.push(Diagnostic::new("relator", format!("chart {}: {r} != 0", label(a)))),
                    Err(e) => out.push(Diagnostic::new("relator", format!("chart {}: {e}", label(a)))),
                }
            }
        }
        for (a1, e1) in units.iter().enumerate() {
            for (a2, ms) in asg.iter().enumerate().filter(|(a2, _)| *a2 != a1) {
                for (i, m) in ms.iter().enumerate() {
                    if !e1.commutes_with(m) {
                        let msg =
                            format!("e({}) does not commute with generator g{i} of chart {}", label(a1), label(a2));
                        out.push(Diagnostic::new("cross-commute", msg));
                    }
                }
            }
        }
        if inclusion_exclusion(&units, n) != Matrix::identity(n) {
            out.push(Diagnostic::new("partition-of-unity", "the chart idempotents do not cover the identity"));
        }

        if asg.len() < 2 {
            // Everything below compares two charts.
            return out;
        }
        let algebras: Vec<Option<MatrixSpan>> = asg.iter().map(|a| MatrixSpan::closure(&a[1..], &a[0]).ok()).collect();
        let Some(algebras) = algebras.into_iter().collect::<Option<Vec<_>>>() else {
            return out;
        };
        let translate = |e: &Matrix, alg: &MatrixSpan| {
            Subspace::from_vectors(n * n, alg.basis().iter().map(|b| (e * b).as_vector().to_vec()).collect())
        };
        for a1 in 0..asg.len() {
            for a2 in a1 + 1..asg.len() {
                if translate(units[a1], &algebras[a2]) != translate(units[a2], &algebras[a1]) {
                    let msg = format!("e({}) Im({}) != e({}) Im({})", label(a1), label(a2), label(a2), label(a1));
                    out.push(Diagnostic::new("subalgebra-compat", msg));
                }
            }
        }
        for a1 in 0..asg.len() {
            for a2 in (0..asg.len()).filter(|&a2| a2 != a1) {
                if !algebras[a1].contains(&(units[a1] * units[a2])) {
                    let msg = format!("e({}) e({}) is not in Im({})", label(a1), label(a2), label(a1));
                    out.push(Diagnostic::new("overlap-membership", msg));
                }
            }
        }

        for (&(a1, a2), lifts) in &self.localizations {
            for s in lifts {
                let Ok(x) = s.eval(&asg[a1]) else { continue };
                let power = (0..n).fold(units[a1].clone(), |acc, _| &acc * &x);
                let ann = algebras[a1].annihilator(&power);
                if ann.basis().iter().any(|y| !(units[a2] * &Matrix::from_vector(n, y)).is_zero()) {
                    let msg = format!("e({}) does not kill the annihilator of {s} in chart {}", label(a2), label(a1));
                    out.push(Diagnostic::new("localization", msg));
                }
            }
        }

        let eval = |p: &NcPoly, a: usize| p.eval(&asg[a]).ok();
        for (&(a1, a2), ts) in &self.generator_transitions {
            for (i, t) in ts.iter().enumerate().take(asg[a1].len()) {
                let (Some(g), Some(s)) = (eval(&t.numerator, a2), eval(&t.denominator, a2)) else { continue };
                let lhs = &(units[a2] * &asg[a1][i]) * &(units[a1] * &s);
                if lhs != units[a1] * &g {
                    let msg = format!("generator g{i} of chart {} does not glue to chart {}", label(a1), label(a2));
                    out.push(Diagnostic::new("transition", msg));
                }
            }
        }
        for (&(a1, a2), ts) in &self.localization_transitions {
            let lifts = self.localizations.get(&(a1, a2)).map_or(&[][..], Vec::as_slice);
            for (s_tilde, t) in lifts.iter().zip(ts) {
                let (Some(g), Some(s), Some(x)) = (eval(&t.numerator, a2), eval(&t.denominator, a2), eval(s_tilde, a1))
                else {
                    continue;
                };
                let e12 = units[a2] * units[a1];
                let lhs = &e12 * &(units[a1] * &s);
                let rhs = &(units[a1] * &g) * &(units[a2] * &x);
                if lhs != rhs {
                    let msg =
                        format!("inverse of {s_tilde} from chart {} does not glue to chart {}", label(a1), label(a2));
                    out.push(Diagnostic::new("transition", msg));
                }
            }
        }
        out
    }

    fn shape(&self, asg: &[Vec<Matrix>]) -> Option<Diagnostic> {
        if asg.len() != self.charts.len() {
            return Some(Diagnostic::new(
                "shape",
                format!("expected {} charts, found {}", self.charts.len(), asg.len()),
            ));
        }
        let n = asg.first().and_then(|a| a.first()).map_or(0, Matrix::rows);
        for (a, (ms, pres)) in asg.iter().zip(&self.charts).enumerate() {
            if ms.len() != pres.generators {
                let msg = format!("chart {a}: expected {} generators, found {}", pres.generators, ms.len());
                return Some(Diagnostic::new("shape", msg));
            }
            if ms.iter().any(|m| m.rows() != n || m.cols() != n) {
                return Some(Diagnostic::new("shape", format!("chart {a}: matrices must all be {n}x{n}")));
            }
        }
        None
    }
}

/// `sum e_a - sum e_a e_b + ...` over nonempty sets of charts.
fn inclusion_exclusion(units: &[&Matrix], n: usize) -> Matrix {
    let mut acc = Matrix::zero(n);
    for mask in 1u32..(1 << units.len()) {
        let mut prod = Matrix::identity(n);
        for (a, e) in units.iter().enumerate() {
            if mask & (1 << a) != 0 {
                prod = &prod * *e;
            }
        }
        acc = if mask.count_ones() % 2 == 1 { &acc + &prod } else { &acc - &prod };
    }
    acc
}

/// All conditions for `p` to be a morphism into its target.
pub fn check_admissible(p: &MorphismPoint) -> Vec<Diagnostic> {
    let t = &p.target;
    let label = |i: usize| t.chart_label(i);
    if p.charts.len() != t.num_charts() {
        let msg = format!("{t} needs {} charts, found {}", t.num_charts(), p.charts.len());
        return vec![Diagnostic::new("shape", msg)];
    }
    for (i, c) in p.charts.iter().enumerate() {
        if c.coords.len() != t.coords_per_chart() {
            let msg =
                format!("chart {}: expected {} coordinates, found {}", label(i), t.coords_per_chart(), c.coords.len());
            return vec![Diagnostic::new("shape", msg)];
        }
        if std::iter::once(&c.e).chain(&c.coords).any(|m| m.rows() != p.n || m.cols() != p.n) {
            return vec![Diagnostic::new("shape", format!("chart {}: matrices must all be {}x{}", label(i), p.n, p.n))];
        }
    }

    let mut out = Vec::new();
    for (i, c) in p.charts.iter().enumerate() {
        for d in check_ringset(&c.e, &p.chart_generators(i)) {
            out.push(Diagnostic::new(d.code, format!("chart {}: {}", label(i), d.message)));
        }
        if t.is_projective() && c.coords[i] != c.e {
            let msg = format!("chart {}: coordinate y{i}/y{i} must equal e", label(i));
            out.push(Diagnostic::new("chart-normalization", msg));
        }
    }
    if !out.is_empty() {
        return out;
    }

    let system =
        if t.is_projective() { PresentedChartSystem::projective(t.r()) } else { PresentedChartSystem::affine(t.r()) };
    let asg: Vec<Vec<Matrix>> = (0..p.charts.len())
        .map(|i| std::iter::once(p.charts[i].e.clone()).chain(p.chart_generators(i)).collect())
        .collect();
    out.extend(system.check_labeled(&asg, &label));

    if t.is_projective() {
        out.extend(projective_identities(p));
    }
    if let Target::Subvariety { incidence, exclusion, .. } = t {
        out.extend(check_variety_conditions(p, incidence, exclusion));
    }
    out
}

/// The overlap identities of `P^r` stated directly on chart coordinates:
/// `(e_j m_(i),j)(e_j m_(j),i) = e_i e_j` and
/// `e_j m_(i),c = m_(j),c (e_j m_(i),j)`.
fn projective_identities(p: &MorphismPoint) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let r = p.target.r();
    let label = |i: usize| p.target.chart_label(i);
    for i in 0..=r {
        for j in (0..=r).filter(|&j| j != i) {
            let (ci, cj) = (&p.charts[i], &p.charts[j]);
            let ej_mij = &cj.e * &ci.coords[j];
            if &ej_mij * &(&cj.e * &cj.coords[i]) != &ci.e * &cj.e {
                let msg = format!(
                    "charts {} and {}: y{j}/y{i} and y{i}/y{j} are not inverse on the overlap",
                    label(i),
                    label(j)
                );
                out.push(Diagnostic::new("overlap-inverse", msg));
            }
            for c in 0..=r {
                if &cj.e * &ci.coords[c] != &cj.coords[c] * &ej_mij {
                    let msg = format!("charts {} and {}: y{c}/y{i} != (y{c}/y{j})(y{j}/y{i})", label(i), label(j));
                    out.push(Diagnostic::new("coordinate-transition", msg));
                }
            }
        }
    }
    out
}

/// Incidence with `V(incidence)` and avoidance of `V(exclusion)`, chart by
/// chart. An empty exclusion list excludes nothing. Evaluating a homogeneous polynomial on the chart coordinates with
/// `y_i -> e` is evaluating its dehomogenization.
pub fn check_variety_conditions(p: &MorphismPoint, incidence: &[Poly], exclusion: &[Poly]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let label = |i: usize| p.target.chart_label(i);
    for (i, c) in p.charts.iter().enumerate() {
        for f in incidence {
            match f.eval_matrices(&c.coords, &c.e) {
                Ok(m) if m.is_zero() => {}
                Ok(_) => out.push(Diagnostic::new("incidence", format!("chart {}: {f} does not vanish", label(i)))),
                Err(e) => out.push(Diagnostic::new("incidence", format!("chart {}: {e}", label(i)))),
            }
        }
        if exclusion.is_empty() {
            continue;
        }
        let evals: Result<Vec<Matrix>, _> = exclusion.iter().map(|f| f.eval_matrices(&c.coords, &c.e)).collect();
        let evals = match evals {
            Ok(v) => v,
            Err(e) => {
                out.push(Diagnostic::new("exclusion", format!("chart {}: {e}", label(i))));
                continue;
            }
        };
        let Ok(alg) = MatrixSpan::closure(&p.chart_generators(i), &c.e) else { continue };
        if !alg.ideal(&evals).contains(c.e.as_vector()) {
            let msg = format!("chart {}: e is not in the ideal generated by the excluded equations", label(i));
            out.push(Diagnostic::new("exclusion", msg));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn codes(d: &[Diagnostic]) -> Vec<&'static str> {
        d.iter().map(|x| x.code).collect()
    }

    #[test]
    fn known_ringset() {
        assert!(check_ringset(&Matrix::identity(2), &[Matrix::diag_ints(&[1, 2])]).is_empty());
        let e11 = Matrix::unit(2, 0, 0);
        assert!(check_ringset(&e11, &[e11.scale(&q("3"))]).is_empty());
        let d = check_ringset(&e11, &[Matrix::unit(2, 0, 1)]);
        assert_eq!(codes(&d), vec!["ring-set:unit"]);
        assert_eq!(d[0].message, "m0*e != m0");
        let d = check_ringset(&Matrix::identity(2), &[Matrix::unit(2, 0, 1), Matrix::unit(2, 1, 0)]);
        assert_eq!(codes(&d), vec!["commuting"]);
    }

    #[test]
    fn known_p1_admissibility() {
        let one = Matrix::identity(1);
        let p = MorphismPoint::p1(one.clone(), Matrix::diag_ints(&[3]), one.clone(), Matrix::diag(&[q("1/3")]));
        assert_eq!(check_admissible(&p), vec![]);

        let e11 = Matrix::unit(2, 0, 0);
        let good =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/3"), q("0")]));
        assert_eq!(check_admissible(&good), vec![]);

        let bad =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/2"), q("0")]));
        let d = check_admissible(&bad);
        assert!(codes(&d).contains(&"overlap-inverse"));
        assert!(codes(&d).contains(&"transition"));
    }

    #[test]
    fn partition_of_unity_and_shape() {
        let e11 = Matrix::unit(2, 0, 0);
        let p = MorphismPoint::p1(e11.clone(), e11.clone(), e11.clone(), e11.clone());
        assert!(codes(&check_admissible(&p)).contains(&"partition-of-unity"));
        let mut p = MorphismPoint::affine(vec![Matrix::zero(2)]);
        p.charts[0].coords.push(Matrix::zero(2));
        assert_eq!(codes(&check_admissible(&p)), vec!["shape"]);
    }

    #[test]
    fn known_variety_conditions() {
        let vars = Poly::var_names("y", 0, 3);
        let conic = Poly::parse(&vars, "y0*y2 - y1^2").unwrap();
        let one = Matrix::identity(1);
        let point = |c: [i64; 3]| {
            let charts = (0..3)
                .map(|i| {
                    let coords = (0..3).map(|k| Matrix::diag(&[Q::integer(c[k]) / Q::integer(c[i])])).collect();
                    super::super::Chart { e: one.clone(), coords }
                })
                .collect();
            MorphismPoint { n: 1, target: Target::Projective { r: 2 }, charts }
        };
        let p = point([1, 1, 1]);
        assert_eq!(check_admissible(&p), vec![]);
        assert_eq!(check_variety_conditions(&p, std::slice::from_ref(&conic), &[]), vec![]);
        let d = check_variety_conditions(&point([1, 1, 2]), &[conic], &[]);
        assert_eq!(codes(&d), vec!["incidence"; 3]);

        // Y2 = V(y0): the point [1:1:1] avoids it in every chart
        let y0 = Poly::var(&vars, 0);
        assert_eq!(check_variety_conditions(&p, &[], std::slice::from_ref(&y0)), vec![]);
        // but [0:1:1] lies on it
        let e0 = Matrix::zero(1);
        let q_point = MorphismPoint {
            n: 1,
            target: Target::Projective { r: 2 },
            charts: vec![
                super::super::Chart { e: e0.clone(), coords: vec![e0.clone(); 3] },
                super::super::Chart { e: one.clone(), coords: vec![e0.clone(), one.clone(), one.clone()] },
                super::super::Chart { e: one.clone(), coords: vec![e0.clone(), one.clone(), one.clone()] },
            ],
        };
        assert_eq!(check_admissible(&q_point), vec![]);
        assert_eq!(codes(&check_variety_conditions(&q_point, &[], &[y0])), vec!["exclusion", "exclusion"]);
    }

    #[test]
    fn general_system_matches_builtin_on_affine_points() {
        let sys = PresentedChartSystem::affine(2);
        let a = Matrix::diag_ints(&[1, 2]);
        let b = Matrix::diag_ints(&[3, 4]);
        assert_eq!(sys.check(&[vec![Matrix::identity(2), a.clone(), b]]), vec![]);
        let d = sys.check(&[vec![Matrix::identity(2), a, Matrix::unit(2, 0, 1)]]);
        assert_eq!(codes(&d), vec!["relator"]);
    }

    #[test]
    fn localization_condition_detects_leaking_annihilator() {
        // chart 0 inverts g1 on the overlap with chart 1, but g1 is nilpotent
        // on a summand that chart 1 still sees
        let mut sys = PresentedChartSystem {
            charts: vec![ChartPresentation::commutative(1), ChartPresentation::commutative(0)],
            ..PresentedChartSystem::default()
        };
        sys.localizations.insert((0, 1), vec![NcPoly::generator(1)]);
        let asg = vec![vec![Matrix::identity(2), Matrix::diag_ints(&[1, 0])], vec![Matrix::identity(2)]];
        assert!(codes(&sys.check(&asg)).contains(&"localization"));
        let asg = vec![vec![Matrix::identity(2), Matrix::diag_ints(&[1, 0])], vec![Matrix::unit(2, 0, 0)]];
        assert!(!codes(&sys.check(&asg)).contains(&"localization"));
    }
}
