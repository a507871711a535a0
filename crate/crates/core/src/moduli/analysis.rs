//! Image schemes, Chan-Paton modules, gauge algebras and the Hilbert/Chow
//! classification of admissible points.

use num_traits::{One, Zero};
use serde::Serialize;

use std::collections::BTreeMap;

use crate::artinian::{primitive_idempotents, quiver, Quiver, QuiverVertex};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, normal_form, GroebnerBasis, MonomialOrder};
use crate::jordan::partition_from_ranks;
use crate::matrix::{min_poly_relative, Echelon, Matrix, Subspace};
use crate::poly::{monomial_divides, Monomial, Poly};
use crate::span::{centralizer, generic_orbit_rank, MatrixSpan};
use crate::unipoly::gq_roots;

use super::{check_admissible, phi_chow, MorphismPoint, Target, Q};

/// The image of chart `i`: the algebra generated by its coordinates with
/// unit `e_(i)`.
pub fn chart_algebra(p: &MorphismPoint, i: usize) -> Result<MatrixSpan> {
    MatrixSpan::closure(&p.chart_generators(i), &p.charts[i].e)
}

/// A point of the image scheme together with its Chan-Paton summand.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Component {
    /// First chart containing the point.
    pub chart: usize,
    /// Affine coordinates, or homogeneous coordinates scaled so that the
    /// first nonzero one is 1.
    pub point: Vec<Q>,
    pub idempotent: Matrix,
    /// Length of the Chan-Paton summand, `rank(idempotent)`.
    pub length: usize,
    /// Length of the image subscheme at the point.
    pub scheme_length: usize,
    /// Jordan partition of each chart generator on the summand.
    pub sublengths: Vec<Vec<usize>>,
}

fn normalize_homogeneous(mut v: Vec<Q>) -> (usize, Vec<Q>) {
    let lead = v.iter().position(|x| !x.is_zero()).expect("a chart coordinate is 1");
    let inv = v[lead].inv().expect("nonzero");
    for x in &mut v {
        *x = &*x * &inv;
    }
    (lead, v)
}

/// Components of the image scheme, each attributed to the first chart in
/// which it lies.
pub fn components(p: &MorphismPoint) -> Result<Vec<Component>> {
    Ok(components_in(p, &chart_algebras(p)?)?.0)
}

fn chart_algebras(p: &MorphismPoint) -> Result<Vec<MatrixSpan>> {
    (0..p.charts.len()).map(|i| chart_algebra(p, i)).collect()
}

/// The components, and whether every chart generator is diagonalizable on
/// its chart.
fn components_in(p: &MorphismPoint, algebras: &[MatrixSpan]) -> Result<(Vec<Component>, bool)> {
    let mut out = Vec::new();
    let mut diagonalizable = true;
    for (i, alg) in algebras.iter().enumerate() {
        let e = &p.charts[i].e;
        let gens = p.chart_generators(i);
        let decomp = primitive_idempotents(alg, &gens)?;
        for (f, tag) in decomp.idempotents.iter().zip(&decomp.tags) {
            let nilpotent: Vec<Matrix> = gens.iter().zip(tag).map(|(g, lambda)| &(g - &e.scale(lambda)) * f).collect();
            diagonalizable &= nilpotent.iter().all(Matrix::is_zero);
            let point = if p.target.is_projective() {
                let mut full = tag.clone();
                full.insert(i, Q::one());
                let (lead, v) = normalize_homogeneous(full);
                if lead != i {
                    continue;
                }
                v
            } else {
                tag.clone()
            };
            let sublengths = nilpotent
                .iter()
                .map(|nil| {
                    let mut ranks = vec![f.rank()];
                    let mut power = f.clone();
                    while *ranks.last().unwrap() > 0 {
                        power = &power * nil;
                        ranks.push(power.rank());
                    }
                    partition_from_ranks(&ranks)
                })
                .collect();
            let scheme_length =
                Subspace::from_vectors(p.n * p.n, alg.basis().iter().map(|b| (f * b).as_vector().to_vec()).collect())
                    .dim();
            out.push(Component { chart: i, point, idempotent: f.clone(), length: f.rank(), scheme_length, sublengths });
        }
    }
    Ok((out, diagonalizable))
}

/// The associated quiver of the whole image: one vertex per component,
/// with arrows computed in the chart the component is attributed to.
/// Vertex tags are the component points.
pub fn image_quiver(p: &MorphismPoint) -> Result<Quiver> {
    let mut out = Quiver { vertices: Vec::new(), arrows: BTreeMap::new() };
    for i in 0..p.charts.len() {
        let q = quiver(&chart_algebra(p, i)?)?;
        let mut index = BTreeMap::new();
        for (k, v) in q.vertices.iter().enumerate() {
            let tag = if p.target.is_projective() {
                let mut full = v.tag.clone();
                full.insert(i, Q::one());
                let (lead, w) = normalize_homogeneous(full);
                if lead != i {
                    continue;
                }
                w
            } else {
                v.tag.clone()
            };
            index.insert(k, out.vertices.len());
            out.vertices.push(QuiverVertex { tag, block_dim: v.block_dim });
        }
        for (&(a, b), &count) in &q.arrows {
            if let (Some(&a), Some(&b)) = (index.get(&a), index.get(&b)) {
                out.arrows.insert((a, b), count);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaugeReport {
    pub total: usize,
    /// `dim f C f` for each component idempotent `f` and the commutant `C`.
    pub per_component: Vec<usize>,
}

/// The commutant of the image, decomposed along the components.
pub fn gauge_algebra(p: &MorphismPoint) -> Result<GaugeReport> {
    let comps = components(p)?;
    Ok(gauge_for(p, &comps))
}

fn gauge_for(p: &MorphismPoint, comps: &[Component]) -> GaugeReport {
    let gens = p.all_matrices();
    let sum = comps.iter().fold(Matrix::zero(p.n), |acc, k| &acc + &k.idempotent);
    let blockwise = sum.is_identity() && comps.iter().all(|k| gens.iter().all(|m| m.commutes_with(&k.idempotent)));
    if blockwise {
        // The idempotents lie in the commutant of the centralizer, which
        // therefore splits as the sum of the blocks f C f.
        let per_component: Vec<usize> = comps.iter().map(|k| block_centralizer_dim(&gens, &k.idempotent)).collect();
        return GaugeReport { total: per_component.iter().sum(), per_component };
    }
    let c = centralizer(p.n, &gens);
    let per_component = comps
        .iter()
        .map(|k| {
            let f = &k.idempotent;
            Subspace::from_vectors(p.n * p.n, c.basis().iter().map(|x| (&(f * x) * f).as_vector().to_vec()).collect())
                .dim()
        })
        .collect();
    GaugeReport { total: c.dim(), per_component }
}

/// Dimension of the centralizer of `gens` restricted to the invariant
/// subspace `im f`.
fn block_centralizer_dim(gens: &[Matrix], f: &Matrix) -> usize {
    let image = f.image();
    let d = image.dim();
    let restricted: Vec<Matrix> = gens
        .iter()
        .map(|m| {
            let cols: Vec<Vec<Q>> =
                image.basis().iter().map(|v| image.coordinates(&m.mul_vec(v)).expect("invariant subspace")).collect();
            Matrix::from_rows(cols).transpose()
        })
        .collect();
    centralizer(d, &restricted).dim()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Classification {
    /// The Chan-Paton module is cyclic in every chart: a point of the
    /// Hilbert scheme.
    pub hilbert: bool,
    /// Every coordinate is diagonalizable: a point of the symmetric product.
    pub chow: bool,
    #[serde(skip)]
    pub cyclic_vector: Option<Vec<Q>>,
}

pub fn classify_point(p: &MorphismPoint) -> Result<Classification> {
    Ok(classify_in(p, &chart_algebras(p)?, None))
}

/// `diagonalizable` short-cuts the Chow test when the decomposition is known.
fn classify_in(p: &MorphismPoint, algebras: &[MatrixSpan], diagonalizable: Option<bool>) -> Classification {
    let mut hilbert = true;
    let mut chow = diagonalizable.unwrap_or(true);
    let mut cyclic_vector = None;
    for (i, alg) in algebras.iter().enumerate() {
        let e = &p.charts[i].e;
        let rank = e.rank();
        let orbit = generic_orbit_rank(alg);
        if alg.dim() != rank || orbit.rank != rank {
            hilbert = false;
        } else if cyclic_vector.is_none() && rank == p.n {
            cyclic_vector = orbit.witness;
        }
        if diagonalizable.is_none() {
            chow &= p.chart_generators(i).iter().all(|g| min_poly_relative(g, e).is_squarefree());
        }
    }
    Classification { hilbert, chow, cyclic_vector: cyclic_vector.filter(|_| hilbert) }
}

/// The Chow cycle `sum n_i [p_i]`, sorted by point.
pub fn pi_chow(p: &MorphismPoint) -> Result<Vec<(Vec<Q>, usize)>> {
    Ok(cycle_of(&components(p)?))
}

fn cycle_of(comps: &[Component]) -> Vec<(Vec<Q>, usize)> {
    let mut cycle: Vec<(Vec<Q>, usize)> = comps.iter().map(|c| (c.point.clone(), c.length)).collect();
    cycle.sort();
    cycle.dedup_by(|b, a| {
        if a.0 == b.0 {
            a.1 += b.1;
            true
        } else {
            false
        }
    });
    cycle
}

/// Kernel of `C[vars] -> M_n`, `vars[k] -> mats[k]`, `1 -> unit`, by
/// enumerating monomials in increasing degree-reverse-lexicographic order
/// and recording the first linear dependency above each staircase corner.
pub fn kernel_ideal(mats: &[Matrix], unit: &Matrix, vars: &[String]) -> GroebnerBasis {
    let order = MonomialOrder::degrevlex();
    let nv = mats.len();
    let mut ech = Echelon::new(unit.rows() * unit.cols());
    let mut standard: Vec<Monomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut relations = Vec::new();
    let mut candidates: Vec<(Monomial, Matrix)> = vec![(vec![0; nv], unit.clone())];
    while !candidates.is_empty() {
        let idx =
            (0..candidates.len()).min_by(|&a, &b| order.cmp(&candidates[a].0, &candidates[b].0)).expect("nonempty");
        let (mono, mat) = candidates.swap_remove(idx);
        if leads.iter().any(|l| monomial_divides(l, &mono)) {
            continue;
        }
        match ech.insert(mat.as_vector().to_vec()) {
            Ok(()) => {
                for k in 0..nv {
                    let mut next = mono.clone();
                    next[k] += 1;
                    if !candidates.iter().any(|(m, _)| *m == next) && !standard.contains(&next) {
                        candidates.push((next, &mat * &mats[k]));
                    }
                }
                standard.push(mono);
            }
            Err(combo) => {
                let mut rel = Poly::monomial(vars, mono.clone(), Q::one());
                for (c, s) in combo.iter().zip(&standard) {
                    rel = &rel + &Poly::monomial(vars, s.clone(), c.clone());
                }
                relations.push(rel);
                leads.push(mono);
            }
        }
    }
    buchberger(&relations, &order)
}

/// Per-chart image algebra and kernel ideal, with the image components.
#[derive(Clone, Debug)]
pub struct ImageScheme {
    pub charts: Vec<ChartImage>,
    pub components: Vec<Component>,
}

#[derive(Clone, Debug)]
pub struct ChartImage {
    pub chart: usize,
    pub algebra_dim: usize,
    /// Reduced Groebner basis of the kernel in the chart coordinates; for a
    /// single generator this is the minimal polynomial.
    pub kernel: GroebnerBasis,
}

pub fn image_scheme(p: &MorphismPoint) -> Result<ImageScheme> {
    let mut charts = Vec::new();
    for i in 0..p.charts.len() {
        let vars: Vec<String> = if p.target.is_projective() {
            (0..=p.target.r()).filter(|&c| c != i).map(|c| format!("y{c}/y{i}")).collect()
        } else {
            p.target.vars()
        };
        let kernel = kernel_ideal(&p.chart_generators(i), &p.charts[i].e, &vars);
        charts.push(ChartImage { chart: i, algebra_dim: chart_algebra(p, i)?.dim(), kernel });
    }
    Ok(ImageScheme { charts, components: components(p)? })
}

/// For an affine point: `I^n` is contained in the kernel, which is contained
/// in `I`, where `I` is the ideal of the reduced support.
pub fn sandwich_holds(p: &MorphismPoint) -> Result<bool> {
    if !matches!(p.target, Target::Affine { .. }) {
        return Err(Error::Invalid("the containment check is for affine points".into()));
    }
    let vars = p.target.vars();
    let e = &p.charts[0].e;
    let ker = kernel_ideal(&p.charts[0].coords, e, &vars);
    let support: Vec<Vec<Q>> = pi_chow(p)?.into_iter().map(|(pt, _)| pt).collect();
    let reduced = phi_chow(&support)?;
    let ideal = kernel_ideal(&reduced.charts[0].coords, &reduced.charts[0].e, &vars);
    if !ker.polys.iter().all(|f| ideal.contains(f)) {
        return Ok(false);
    }
    // products of n generators of I, as multisets of generator indices
    let gens = &ideal.polys;
    let mut stack: Vec<(usize, usize, Poly)> = vec![(0, 0, Poly::one(&vars))];
    while let Some((start, used, prod)) = stack.pop() {
        if used == p.n {
            if !normal_form(&prod, &ker).is_zero() {
                return Ok(false);
            }
            continue;
        }
        for (k, g) in gens.iter().enumerate().skip(start) {
            stack.push((k, used + 1, &prod * g));
        }
    }
    Ok(true)
}

/// Dimension of the kernel of `(x1, x2) -> [x1, m2] + [m1, x2]`, the
/// Zariski tangent space of the commuting variety at `(m1, m2)`.
pub fn commuting_tangent_dim(m1: &Matrix, m2: &Matrix) -> usize {
    let n = m1.n();
    let nn = n * n;
    let zero = Q::zero();
    let mut rows = Vec::with_capacity(nn);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![zero.clone(); 2 * nn];
            for k in 0..n {
                // [x1, m2]_ij = x1_ik m2_kj - m2_ik x1_kj
                row[i * n + k] += &m2[(k, j)];
                row[k * n + j] -= &m2[(i, k)];
                // [m1, x2]_ij = m1_ik x2_kj - x2_ik m1_kj
                row[nn + k * n + j] += &m1[(i, k)];
                row[nn + i * n + k] -= &m1[(k, j)];
            }
            rows.push(row);
        }
    }
    Matrix::from_rows(rows).kernel().dim()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EigenSpace {
    pub eigenvalue: Q,
    pub multiplicity: usize,
    pub space: Subspace,
}

/// Eigenspace decomposition of a semisimple endomorphism.
pub fn spectral_cover(phi: &Matrix) -> Result<Vec<EigenSpace>> {
    if !phi.min_poly().is_squarefree() {
        return Err(Error::NotSemisimple);
    }
    let n = phi.n();
    let roots = gq_roots(&phi.char_poly())?.require_split()?;
    Ok(roots
        .into_iter()
        .map(|(eigenvalue, multiplicity)| {
            let space = (phi - &Matrix::identity(n).scale(&eigenvalue)).kernel();
            EigenSpace { eigenvalue, multiplicity, space }
        })
        .collect())
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ComponentReport {
    pub chart: String,
    pub eigenvalue_tag: Vec<String>,
    pub length: usize,
    pub sublengths: Vec<Vec<usize>>,
    pub gauge_dim: usize,
}

/// Full analysis of a point, serialized with a fixed field order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Report {
    pub admissible: bool,
    pub diagnostics: Vec<String>,
    pub components: Vec<ComponentReport>,
    pub classification: Classification,
    pub chow_cycle: Vec<serde_json::Value>,
}

pub fn analyze(p: &MorphismPoint) -> Result<Report> {
    let diagnostics: Vec<String> = check_admissible(p).iter().map(ToString::to_string).collect();
    if !diagnostics.is_empty() {
        let classification = Classification { hilbert: false, chow: false, cyclic_vector: None };
        return Ok(Report { admissible: false, diagnostics, components: vec![], classification, chow_cycle: vec![] });
    }
    let algebras = chart_algebras(p)?;
    let (comps, diagonalizable) = components_in(p, &algebras)?;
    let gauge = gauge_for(p, &comps);
    let components = comps
        .iter()
        .zip(&gauge.per_component)
        .map(|(c, &gauge_dim)| ComponentReport {
            chart: p.target.chart_label(c.chart),
            eigenvalue_tag: c.point.iter().map(ToString::to_string).collect(),
            length: c.length,
            sublengths: c.sublengths.clone(),
            gauge_dim,
        })
        .collect();
    let chow_cycle = cycle_of(&comps)
        .into_iter()
        .map(|(pt, mult)| {
            let mut v: Vec<serde_json::Value> = pt.iter().map(|x| x.to_string().into()).collect();
            v.push(mult.into());
            serde_json::Value::Array(v)
        })
        .collect();
    Ok(Report {
        admissible: true,
        diagnostics,
        components,
        classification: classify_in(p, &algebras, Some(diagonalizable)),
        chow_cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::quotient_basis;
    use crate::jordan::{jordan_type, stab_dim};
    use crate::moduli::{phi_hilb, Chart};

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    fn ideal(vars: usize, gens: &[&str]) -> Vec<Poly> {
        let v = Poly::var_names("y", 1, vars);
        gens.iter().map(|g| Poly::parse(&v, g).unwrap()).collect()
    }

    fn j2_plus(x: i64) -> Matrix {
        Matrix::block_diag(&[Matrix::jordan_block(&Q::zero(), 2), Matrix::diag_ints(&[x])])
    }

    #[test]
    fn known_image_schemes() {
        let p = MorphismPoint::affine(vec![j2_plus(5)]);
        let im = image_scheme(&p).unwrap();
        assert_eq!(im.charts[0].kernel.polys[0].to_string(), "y1^3 - 5*y1^2");
        let comps: Vec<(Vec<Q>, usize)> = im.components.iter().map(|c| (c.point.clone(), c.scheme_length)).collect();
        assert_eq!(comps, vec![(vec![q("0")], 2), (vec![q("5")], 1)]);

        let p = MorphismPoint::affine(vec![Matrix::zero(2)]);
        let im = image_scheme(&p).unwrap();
        assert_eq!(im.charts[0].kernel.polys[0].to_string(), "y1");
        assert_eq!(im.components.len(), 1);
        assert_eq!((im.components[0].length, im.components[0].scheme_length), (2, 1));

        let p = phi_hilb(&ideal(2, &["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::degrevlex()).unwrap();
        let im = image_scheme(&p).unwrap();
        assert_eq!(im.components.len(), 1);
        assert_eq!(im.components[0].point, vec![q("0"), q("0")]);
        assert_eq!(im.components[0].scheme_length, 3);
    }

    #[test]
    fn kernel_regenerates_hilbert_ideals() {
        let order = MonomialOrder::degrevlex();
        for gens in [&["y1^2", "y2"][..], &["y1^2", "y1*y2", "y2^2"], &["y1^2 - y1", "y2 - y1"], &["y1^3", "y2 - y1^2"]]
        {
            let i = ideal(2, gens);
            let p = phi_hilb(&i, &order).unwrap();
            let ker = kernel_ideal(&p.charts[0].coords, &p.charts[0].e, &p.target.vars());
            assert_eq!(ker, buchberger(&i, &order), "{gens:?}");
            assert_eq!(quotient_basis(&ker).unwrap().len(), p.n);
        }
    }

    #[test]
    fn known_chan_paton() {
        let p =
            MorphismPoint::affine(vec![Matrix::block_diag(&[Matrix::jordan_block(&Q::zero(), 2), Matrix::zero(1)])]);
        let c = components(&p).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].length, c[0].sublengths.clone()), (3, vec![vec![2, 1]]));

        let c = components(&MorphismPoint::affine(vec![Matrix::diag_ints(&[1, 2])])).unwrap();
        assert_eq!(c.iter().map(|x| x.length).collect::<Vec<_>>(), vec![1, 1]);

        let e11 = Matrix::unit(2, 0, 0);
        let p =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/3"), q("0")]));
        let c = components(&p).unwrap();
        let got: Vec<(String, Vec<Q>, usize)> =
            c.iter().map(|x| (p.target.chart_label(x.chart), x.point.clone(), x.length)).collect();
        assert_eq!(got, vec![("0".into(), vec![q("1"), q("3")], 1), ("inf".into(), vec![q("0"), q("1")], 1)]);
    }

    #[test]
    fn known_gauge() {
        let g = gauge_algebra(&MorphismPoint::affine(vec![Matrix::diag_ints(&[1, 2])])).unwrap();
        assert_eq!((g.total, g.per_component), (2, vec![1, 1]));
        assert_eq!(gauge_algebra(&MorphismPoint::affine(vec![Matrix::zero(2)])).unwrap().total, 4);
        let m = Matrix::block_diag(&[Matrix::jordan_block(&q("7"), 2), Matrix::diag_ints(&[7])]);
        let g = gauge_algebra(&MorphismPoint::affine(vec![m.clone()])).unwrap();
        assert_eq!(g.total, 5);
        assert_eq!(g.total, stab_dim(&jordan_type(&m).unwrap()).0);
    }

    #[test]
    fn known_classification() {
        let p = phi_hilb(&ideal(2, &["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::degrevlex()).unwrap();
        let c = classify_point(&p).unwrap();
        assert!(c.hilbert && !c.chow);
        assert!(c.cyclic_vector.is_some());

        let p = MorphismPoint::affine(vec![Matrix::diag_ints(&[1, 3]), Matrix::diag_ints(&[2, 4])]);
        let c = classify_point(&p).unwrap();
        assert!(c.hilbert && c.chow);

        let p = MorphismPoint::affine(vec![Matrix::unit(3, 0, 1), Matrix::unit(3, 0, 2)]);
        let c = classify_point(&p).unwrap();
        assert!(!c.hilbert && !c.chow);
    }

    #[test]
    fn known_pi_chow() {
        let p = phi_hilb(&ideal(2, &["y1^2", "y2"]), &MonomialOrder::degrevlex()).unwrap();
        assert_eq!(pi_chow(&p).unwrap(), vec![(vec![q("0"), q("0")], 2)]);
        let p = MorphismPoint::affine(vec![Matrix::diag_ints(&[1, 3]), Matrix::diag_ints(&[2, 4])]);
        assert_eq!(pi_chow(&p).unwrap(), vec![(vec![q("1"), q("2")], 1), (vec![q("3"), q("4")], 1)]);
        let pts = vec![vec![q("i"), q("0")], vec![q("0"), q("i")]];
        let mut expect: Vec<(Vec<Q>, usize)> = pts.iter().map(|x| (x.clone(), 1)).collect();
        expect.sort();
        assert_eq!(pi_chow(&phi_chow(&pts).unwrap()).unwrap(), expect);
    }

    #[test]
    fn known_spectral_cover() {
        let s = spectral_cover(&Matrix::diag_ints(&[1, 1, 2])).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].eigenvalue.clone(), s[0].multiplicity), (q("1"), 2));
        assert_eq!(s[0].space, Subspace::from_vectors(3, Matrix::identity(3).to_rows()[..2].to_vec()));
        assert_eq!(s[1].space, Subspace::from_vectors(3, Matrix::identity(3).to_rows()[2..].to_vec()));
        let s = spectral_cover(&Matrix::zero(3)).unwrap();
        assert_eq!((s.len(), s[0].multiplicity, s[0].space.dim()), (1, 3, 3));
        assert_eq!(spectral_cover(&Matrix::jordan_block(&Q::zero(), 2)), Err(Error::NotSemisimple));
    }

    #[test]
    fn sandwich_and_tangent() {
        let p = MorphismPoint::affine(vec![j2_plus(5)]);
        assert!(sandwich_holds(&p).unwrap());
        let p = phi_hilb(&ideal(2, &["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::degrevlex()).unwrap();
        assert!(sandwich_holds(&p).unwrap());
        for n in 2..=4i64 {
            let a = Matrix::diag_ints(&(1..=n).collect::<Vec<_>>());
            let b = Matrix::diag_ints(&(n + 1..=2 * n).collect::<Vec<_>>());
            let n = n as usize;
            assert_eq!(commuting_tangent_dim(&a, &b), n * n + n);
        }
        // at the origin the tangent space is everything
        assert_eq!(commuting_tangent_dim(&Matrix::zero(2), &Matrix::zero(2)), 8);
    }

    #[test]
    fn report_schema_and_rejection() {
        let e11 = Matrix::unit(2, 0, 0);
        let p =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/3"), q("0")]));
        let json = serde_json::to_string(&analyze(&p).unwrap()).unwrap();
        assert_eq!(
            json,
            r#"{"admissible":true,"diagnostics":[],"components":[{"chart":"0","eigenvalue_tag":["1","3"],"length":1,"sublengths":[[1]],"gauge_dim":1},{"chart":"inf","eigenvalue_tag":["0","1"],"length":1,"sublengths":[[1]],"gauge_dim":1}],"classification":{"hilbert":true,"chow":true},"chow_cycle":[["0","1",1],["1","3",1]]}"#
        );
        let bad = MorphismPoint {
            charts: vec![Chart { e: e11.clone(), coords: vec![Matrix::unit(2, 0, 1)] }],
            ..MorphismPoint::affine(vec![e11])
        };
        let r = analyze(&bad).unwrap();
        assert!(!r.admissible);
        assert!(!r.diagnostics.is_empty());
    }

    #[test]
    fn shortcuts_match_direct_computations() {
        use crate::moduli::p1_from_jordan;
        let points = vec![
            phi_hilb(&ideal(2, &["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::degrevlex()).unwrap(),
            MorphismPoint::affine(vec![j2_plus(5), Matrix::diag_ints(&[1, 1, 2])]),
            MorphismPoint::affine(vec![Matrix::diag_ints(&[1, 3, 3]), Matrix::diag_ints(&[2, 4, 4])]),
            p1_from_jordan(&[(q("2"), vec![2, 1]), (q("0"), vec![1])], &[2]).unwrap(),
            p1_from_jordan(&[(q("1/2"), vec![1, 1])], &[1]).unwrap(),
        ];
        for p in &points {
            let report = analyze(p).unwrap();
            let direct = classify_point(p).unwrap();
            assert_eq!((report.classification.hilbert, report.classification.chow), (direct.hilbert, direct.chow));

            let c = centralizer(p.n, &p.all_matrices());
            let comps = components(p).unwrap();
            let gauge = gauge_for(p, &comps);
            assert_eq!(gauge.total, c.dim());
            for (k, &d) in comps.iter().zip(&gauge.per_component) {
                let f = &k.idempotent;
                let block = c.basis().iter().map(|x| (&(f * x) * f).as_vector().to_vec()).collect();
                assert_eq!(Subspace::from_vectors(p.n * p.n, block).dim(), d);
            }
        }
    }

    #[test]
    fn image_quiver_has_one_vertex_per_component() {
        let e11 = Matrix::unit(2, 0, 0);
        let p =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/3"), q("0")]));
        let qv = image_quiver(&p).unwrap();
        let tags: Vec<Vec<Q>> = qv.vertices.iter().map(|v| v.tag.clone()).collect();
        assert_eq!(tags, vec![vec![q("1"), q("3")], vec![q("0"), q("1")]]);
        assert!(qv.arrows.is_empty());

        let qv = image_quiver(&MorphismPoint::affine(vec![j2_plus(5)])).unwrap();
        assert_eq!(qv.vertices.len(), 2);
        assert_eq!(qv.arrows.values().sum::<usize>(), 1);
        assert_eq!(qv.loops(0) + qv.loops(1), 1);
    }
}
