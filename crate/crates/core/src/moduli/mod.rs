//! Morphisms from the matrix point into affine space, projective space and
//! quasi-projective subvarieties, given chart by chart as tuples of
//! commuting matrices.

mod analysis;
mod build;
mod glue;

use std::fmt;

use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::GaussianRational;

pub use analysis::{
    analyze, chart_algebra, classify_point, commuting_tangent_dim, components, gauge_algebra, image_quiver,
    image_scheme, kernel_ideal, pi_chow, sandwich_holds, spectral_cover, ChartImage, Classification, Component,
    ComponentReport, EigenSpace, GaugeReport, ImageScheme, Report,
};
pub use build::{p1_from_jordan, phi_chow, phi_chow_projective, phi_hilb};
pub use glue::{
    check_admissible, check_ringset, check_variety_conditions, ChartPresentation, PresentedChartSystem, Transition,
};

type Q = GaussianRational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Target {
    Affine {
        r: usize,
    },
    Projective {
        r: usize,
    },
    /// `V(incidence) - V(exclusion)` inside `P^r`, both given by
    /// homogeneous polynomials in `y0..yr`.
    Subvariety {
        r: usize,
        incidence: Vec<Poly>,
        exclusion: Vec<Poly>,
    },
}

impl Target {
    pub fn r(&self) -> usize {
        match self {
            Self::Affine { r } | Self::Projective { r } | Self::Subvariety { r, .. } => *r,
        }
    }

    pub fn is_projective(&self) -> bool {
        !matches!(self, Self::Affine { .. })
    }

    pub fn num_charts(&self) -> usize {
        if self.is_projective() {
            self.r() + 1
        } else {
            1
        }
    }

    /// Number of coordinate matrices per chart. Projective charts carry all
    /// `r + 1` ratios `y_c / y_i`, with the `i`-th equal to the idempotent.
    pub fn coords_per_chart(&self) -> usize {
        if self.is_projective() {
            self.r() + 1
        } else {
            self.r()
        }
    }

    /// Polynomial ring variables: `y1..yr` for affine, `y0..yr` for projective.
    pub fn vars(&self) -> Vec<String> {
        if self.is_projective() {
            Poly::var_names("y", 0, self.r() + 1)
        } else {
            Poly::var_names("y", 1, self.r())
        }
    }

    /// `P^1` charts are called `0` and `inf`.
    pub fn chart_label(&self, i: usize) -> String {
        if self.is_projective() && self.r() == 1 && i == 1 {
            "inf".into()
        } else {
            i.to_string()
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Affine { r } => write!(f, "A^{r}"),
            Self::Projective { r } => write!(f, "P^{r}"),
            Self::Subvariety { r, .. } => write!(f, "subvariety of P^{r}"),
        }
    }
}

/// Chart data `(e, m_1, ..)`: an idempotent and the images of the chart
/// coordinates, all acting on `e C^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Chart {
    pub e: Matrix,
    pub coords: Vec<Matrix>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MorphismPoint {
    pub n: usize,
    pub target: Target,
    pub charts: Vec<Chart>,
}

impl MorphismPoint {
    /// A point of `A^r` given by commuting matrices.
    pub fn affine(coords: Vec<Matrix>) -> Self {
        let n = coords.first().map_or(0, Matrix::n);
        let target = Target::Affine { r: coords.len() };
        Self { n, target, charts: vec![Chart { e: Matrix::identity(n), coords }] }
    }

    /// A point of `P^1` from the two charts `(e_0, m_0)` and `(e_inf, m_inf)`.
    pub fn p1(e0: Matrix, m0: Matrix, e_inf: Matrix, m_inf: Matrix) -> Self {
        let n = e0.n();
        let charts =
            vec![Chart { coords: vec![e0.clone(), m0], e: e0 }, Chart { coords: vec![m_inf, e_inf.clone()], e: e_inf }];
        Self { n, target: Target::Projective { r: 1 }, charts }
    }

    /// The generators of chart `i`: the coordinates other than the
    /// redundant `y_i / y_i`.
    pub fn chart_generators(&self, i: usize) -> Vec<Matrix> {
        let chart = &self.charts[i];
        if self.target.is_projective() {
            chart.coords.iter().enumerate().filter(|(c, _)| *c != i).map(|(_, m)| m.clone()).collect()
        } else {
            chart.coords.clone()
        }
    }

    /// Every matrix of every chart.
    pub fn all_matrices(&self) -> Vec<Matrix> {
        self.charts.iter().flat_map(|c| std::iter::once(c.e.clone()).chain(c.coords.iter().cloned())).collect()
    }

    /// `P X P^-1` applied to every matrix.
    pub fn conjugate(&self, p: &Matrix, p_inv: &Matrix) -> Self {
        let charts = self
            .charts
            .iter()
            .map(|c| Chart {
                e: c.e.conjugate(p, p_inv),
                coords: c.coords.iter().map(|m| m.conjugate(p, p_inv)).collect(),
            })
            .collect();
        Self { n: self.n, target: self.target.clone(), charts }
    }
}

/// One violated identity, with a short code naming the condition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub code: &'static str,
    pub message: String,
}

impl Diagnostic {
    pub(crate) fn new(code: &'static str, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}
