//! Scene files: a target, the matrix size `n`, and named points, paths and
//! an optional chart presentation.
//!
//! ```text
//! # two points on P^1
//! target P1; n 2;
//! point p {
//!   chart 0 { e = [[1,0],[0,0]]; m = [[3,0],[0,0]] }
//!   chart inf { e = [[1,0],[0,1]]; m = [[1/3,0],[0,0]] }
//! }
//! path crossing { m0 = [[t,0],[0,-t]]; samples = [-1, 0] }
//! ```
//!
//! Affine coordinates are `m0 .. m(r-1)` (or `m` when `r = 1`) with an
//! optional `e`. In chart `i` of `P^r`, `mc` is `y_c / y_i`; `m` names the
//! other coordinate on `P^1`. Matrix entries are scalars, or polynomials in
//! `t` inside a path.

use std::fmt::{self, Write as _};

use d0moduli::higgsing::{DeformationPath, PathChart, PolyMatrix};
use d0moduli::moduli::{Chart, ChartPresentation, MorphismPoint, PresentedChartSystem, Target, Transition};
use d0moduli::ncword::NcPoly;
use d0moduli::poly::Poly;
use d0moduli::{GaussianRational as Q, Matrix, UniPoly};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("line {line}, column {col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("line {line}, column {col}: unknown target `{name}`")]
    UnknownTarget { line: usize, col: usize, name: String },
    #[error("{what}: expected a {n}x{n} matrix, found {rows}x{cols}")]
    DimensionMismatch { what: String, n: usize, rows: usize, cols: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, SceneError>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scene {
    pub target: Target,
    pub n: usize,
    pub points: Vec<(String, MorphismPoint)>,
    pub paths: Vec<(String, DeformationPath)>,
    pub presentation: Option<PresentedChartSystem>,
}

impl Scene {
    pub fn point(&self, name: &str) -> Option<&MorphismPoint> {
        self.points.iter().find(|(k, _)| k == name).map(|(_, p)| p)
    }

    pub fn path(&self, name: &str) -> Option<&DeformationPath> {
        self.paths.iter().find(|(k, _)| k == name).map(|(_, p)| p)
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

struct Cursor {
    chars: Vec<char>,
    at: usize,
    line: usize,
    col: usize,
}

impl Cursor {
    fn new(text: &str) -> Self {
        Self { chars: text.chars().collect(), at: 0, line: 1, col: 1 }
    }

    /// Position of the next token.
    fn here(&mut self) -> Pos {
        self.skip_ws();
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = *self.chars.get(self.at)?;
        self.at += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(&c) = self.chars.get(self.at) {
            if c == '#' {
                while self.chars.get(self.at).is_some_and(|&c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn fail<T>(&mut self, expected: &str) -> Result<T> {
        self.skip_ws();
        Err(SceneError::Syntax { line: self.line, col: self.col, expected: expected.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn ident(&mut self) -> Option<String> {
        let c = self.peek()?;
        if !(c.is_alphabetic() || c == '_') {
            return None;
        }
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.at) {
            if c.is_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Some(s)
    }

    fn expect_ident(&mut self, what: &str) -> Result<String> {
        match self.ident() {
            Some(s) => Ok(s),
            None => self.fail(what),
        }
    }

    fn int(&mut self) -> Option<usize> {
        self.peek().filter(char::is_ascii_digit)?;
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.at).filter(|c| c.is_ascii_digit()) {
            s.push(c);
            self.bump();
        }
        s.parse().ok()
    }

    fn expect_int(&mut self) -> Result<usize> {
        match self.int() {
            Some(k) => Ok(k),
            None => self.fail("an integer"),
        }
    }

    /// Raw expression text up to the first of `stops` outside parentheses.
    fn expr_text(&mut self, stops: &[char]) -> Result<(String, Pos)> {
        let start = self.here();
        let mut depth = 0usize;
        let mut s = String::new();
        while let Some(&c) = self.chars.get(self.at) {
            if depth == 0 && stops.contains(&c) || c == '#' {
                break;
            }
            match c {
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                '{' | '}' | '[' | ']' | ';' if depth == 0 => break,
                _ => {}
            }
            s.push(c);
            self.bump();
        }
        if s.trim().is_empty() {
            return self.fail("an expression");
        }
        Ok((s.trim().to_string(), start))
    }
}

fn expr_error(at: Pos, what: &str, err: impl fmt::Display) -> SceneError {
    SceneError::Syntax { line: at.line, col: at.col, expected: format!("{what} ({err})") }
}

fn parse_entry(text: &str, at: Pos) -> Result<UniPoly> {
    UniPoly::parse(text, "t").map_err(|e| expr_error(at, "a scalar or a polynomial in t", e))
}

fn parse_scalar(text: &str, at: Pos) -> Result<Q> {
    text.parse::<Q>().map_err(|e| expr_error(at, "a scalar", e))
}

/// A bracketed list `[a, b, ..]` of raw expressions.
fn expr_list(cur: &mut Cursor) -> Result<Vec<(String, Pos)>> {
    cur.expect('[')?;
    let mut out = Vec::new();
    if cur.eat(']') {
        return Ok(out);
    }
    loop {
        out.push(cur.expr_text(&[',', ']'])?);
        if cur.eat(']') {
            return Ok(out);
        }
        cur.expect(',')?;
    }
}

/// `[[a, b], [c, d]]`, with entries polynomial in `t`.
fn matrix(cur: &mut Cursor) -> Result<(Vec<Vec<UniPoly>>, Pos)> {
    let at = cur.here();
    cur.expect('[')?;
    let mut rows = Vec::new();
    loop {
        if cur.peek() != Some('[') {
            return cur.fail("a matrix row `[..]`");
        }
        let row = expr_list(cur)?.into_iter().map(|(s, p)| parse_entry(&s, p)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
        if cur.eat(']') {
            break;
        }
        cur.expect(',')?;
    }
    Ok((rows, at))
}

enum Value {
    Matrix(Vec<Vec<UniPoly>>),
    List(Vec<(String, Pos)>),
    Int(usize),
}

struct Assign {
    name: String,
    at: Pos,
    value: Value,
}

/// `name = value` items separated by optional `;`, up to the closing `}`.
fn assignments(cur: &mut Cursor, nested_charts: bool) -> Result<(Vec<Assign>, Vec<ChartBlock>)> {
    let mut flat = Vec::new();
    let mut charts = Vec::new();
    loop {
        while cur.eat(';') {}
        if cur.eat('}') {
            return Ok((flat, charts));
        }
        let at = cur.here();
        let name = cur.expect_ident("a name or `}`")?;
        if nested_charts && name == "chart" {
            let label_at = cur.here();
            let label = match cur.int() {
                Some(k) => k.to_string(),
                None => cur.expect_ident("a chart label")?,
            };
            cur.expect('{')?;
            let (inner, _) = assignments(cur, false)?;
            charts.push((label, label_at, inner));
            continue;
        }
        cur.expect('=')?;
        let value = match cur.peek() {
            Some('[') => {
                // A matrix starts with `[[`; anything else is a flat list.
                let save = (cur.at, cur.line, cur.col);
                cur.bump();
                let nested = cur.peek() == Some('[');
                (cur.at, cur.line, cur.col) = save;
                if nested {
                    Value::Matrix(matrix(cur)?.0)
                } else {
                    Value::List(expr_list(cur)?)
                }
            }
            Some(c) if c.is_ascii_digit() => Value::Int(cur.expect_int()?),
            _ => return cur.fail("a matrix, a list or an integer"),
        };
        flat.push(Assign { name, at, value });
    }
}

/// `chart LABEL { .. }`
type ChartBlock = (String, Pos, Vec<Assign>);

/// `localize a b = [..]` and friends.
type MapItem = (String, Pos, usize, usize, Vec<(String, Pos)>);

struct RawBody {
    kind: &'static str,
    name: String,
    at: Pos,
    flat: Vec<Assign>,
    charts: Vec<ChartBlock>,
}

struct RawPresentation {
    charts: Vec<ChartBlock>,
    maps: Vec<MapItem>,
}

fn parse_presentation(cur: &mut Cursor) -> Result<RawPresentation> {
    cur.expect('{')?;
    let mut out = RawPresentation { charts: Vec::new(), maps: Vec::new() };
    loop {
        while cur.eat(';') {}
        if cur.eat('}') {
            return Ok(out);
        }
        let at = cur.here();
        let kw = cur.expect_ident("`chart`, `localize`, `transition`, `inverse` or `}`")?;
        match kw.as_str() {
            "chart" => {
                let label_at = cur.here();
                let label = cur.expect_int()?.to_string();
                cur.expect('{')?;
                let (inner, _) = assignments(cur, false)?;
                out.charts.push((label, label_at, inner));
            }
            "localize" | "transition" | "inverse" => {
                let a = cur.expect_int()?;
                let b = cur.expect_int()?;
                cur.expect('=')?;
                let items = expr_list(cur)?;
                out.maps.push((kw, at, a, b, items));
            }
            _ => return Err(SceneError::Syntax { line: at.line, col: at.col, expected: "a presentation item".into() }),
        }
    }
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let mut cur = Cursor::new(text);
    let mut target: Option<(Target, Pos)> = None;
    let mut n: Option<usize> = None;
    let mut bodies = Vec::new();
    let mut presentation = None;
    while !cur.at_end() {
        let at = cur.here();
        let kw = cur.expect_ident("`target`, `n`, `point`, `path` or `presentation`")?;
        match kw.as_str() {
            "target" => {
                if target.is_some() {
                    return Err(SceneError::Invalid(format!("line {}: the target is declared twice", at.line)));
                }
                target = Some((parse_target(&mut cur)?, at));
            }
            "n" => {
                if n.is_some() {
                    return Err(SceneError::Invalid(format!("line {}: n is declared twice", at.line)));
                }
                let k = cur.expect_int()?;
                if k == 0 {
                    return Err(SceneError::Invalid(format!("line {}: n must be positive", at.line)));
                }
                n = Some(k);
            }
            "point" | "path" => {
                let name = cur.expect_ident("a name")?;
                cur.expect('{')?;
                let (flat, charts) = assignments(&mut cur, true)?;
                let kind = if kw == "point" { "point" } else { "path" };
                bodies.push(RawBody { kind, name, at, flat, charts });
            }
            "presentation" => {
                if presentation.is_some() {
                    return Err(SceneError::Invalid(format!("line {}: a second presentation", at.line)));
                }
                presentation = Some(parse_presentation(&mut cur)?);
            }
            _ => {
                return Err(SceneError::Syntax {
                    line: at.line,
                    col: at.col,
                    expected: "`target`, `n`, `point`, `path` or `presentation`".into(),
                })
            }
        }
        while cur.eat(';') {}
    }

    let (target, _) = target.ok_or_else(|| SceneError::Invalid("missing `target` declaration".into()))?;
    let n = n.ok_or_else(|| SceneError::Invalid("missing `n` declaration".into()))?;
    let mut scene = Scene { target, n, points: Vec::new(), paths: Vec::new(), presentation: None };
    for body in bodies {
        if scene.points.iter().map(|p| &p.0).chain(scene.paths.iter().map(|p| &p.0)).any(|k| *k == body.name) {
            return Err(SceneError::Invalid(format!("line {}: the name `{}` is used twice", body.at.line, body.name)));
        }
        let (charts, samples) = resolve_body(&scene.target, n, &body)?;
        if body.kind == "point" {
            if samples.is_some() {
                return Err(SceneError::Invalid(format!("point {}: `samples` only belongs in a path", body.name)));
            }
            let charts = charts
                .into_iter()
                .map(|c| {
                    Ok(Chart {
                        e: constant(&c.e, &body.name)?,
                        coords: c.coords.iter().map(|m| constant(m, &body.name)).collect::<Result<_>>()?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            scene.points.push((body.name, MorphismPoint { n, target: scene.target.clone(), charts }));
        } else {
            let samples =
                samples.ok_or_else(|| SceneError::Invalid(format!("path {}: missing `samples`", body.name)))?;
            scene.paths.push((body.name, DeformationPath { target: scene.target.clone(), n, charts, samples }));
        }
    }
    if let Some(raw) = presentation {
        scene.presentation = Some(resolve_presentation(raw)?);
    }
    Ok(scene)
}

fn parse_target(cur: &mut Cursor) -> Result<Target> {
    let at = cur.here();
    let word = cur.expect_ident("`A` or `P`")?;
    let (head, digits) = word.split_at(1);
    let r = if digits.is_empty() {
        cur.expect_int()?
    } else {
        digits.parse().map_err(|_| SceneError::UnknownTarget { line: at.line, col: at.col, name: word.clone() })?
    };
    let target = match head {
        "A" if r >= 1 => Target::Affine { r },
        "P" if r >= 1 => Target::Projective { r },
        _ => return Err(SceneError::UnknownTarget { line: at.line, col: at.col, name: format!("{head} {r}") }),
    };
    if !cur.eat('{') {
        return Ok(target);
    }
    if head != "P" {
        return cur.fail("`;` (only projective targets take equations)");
    }
    let (items, _) = assignments(cur, false)?;
    let vars = target.vars();
    let (mut incidence, mut exclusion) = (Vec::new(), Vec::new());
    for a in items {
        let Value::List(list) = a.value else {
            return Err(expr_error(a.at, "a list of polynomials", "found something else"));
        };
        let polys = list
            .iter()
            .map(|(s, p)| Poly::parse(&vars, s).map_err(|e| expr_error(*p, "a polynomial in y0..yr", e)))
            .collect::<Result<Vec<_>>>()?;
        match a.name.as_str() {
            "incidence" => incidence = polys,
            "exclusion" => exclusion = polys,
            _ => {
                return Err(SceneError::Syntax {
                    line: a.at.line,
                    col: a.at.col,
                    expected: "`incidence` or `exclusion`".into(),
                })
            }
        }
    }
    Ok(Target::Subvariety { r, incidence, exclusion })
}

fn constant(m: &PolyMatrix, owner: &str) -> Result<Matrix> {
    let rows = m.to_rows();
    if rows.iter().flatten().any(|p| p.degree().is_some_and(|d| d > 0)) {
        return Err(SceneError::Invalid(format!("point {owner}: entries must be constants, not polynomials in t")));
    }
    Ok(Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.coeff(0)).collect()).collect()))
}

fn to_matrix(rows: &[Vec<UniPoly>], n: usize, what: String) -> Result<PolyMatrix> {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(SceneError::DimensionMismatch { what, n, rows: rows.len(), cols });
    }
    PolyMatrix::from_rows(rows.to_vec()).map_err(|e| SceneError::Invalid(format!("{what}: {e}")))
}

type Resolved = (Vec<PathChart>, Option<Vec<Q>>);

fn resolve_body(target: &Target, n: usize, body: &RawBody) -> Result<Resolved> {
    let owner = format!("{} {}", body.kind, body.name);
    let mut samples = None;
    let mut top = Vec::new();
    for a in &body.flat {
        if a.name == "samples" {
            let Value::List(list) = &a.value else {
                return Err(expr_error(a.at, "a list of samples", "found a matrix"));
            };
            samples = Some(list.iter().map(|(s, p)| parse_scalar(s, *p)).collect::<Result<Vec<_>>>()?);
        } else {
            top.push(a);
        }
    }
    let charts = if target.is_projective() {
        if let Some(a) = top.first() {
            return Err(SceneError::Invalid(format!("{owner}: `{}` must sit inside a `chart` block", a.name)));
        }
        let r = target.r();
        let mut slots: Vec<Option<PathChart>> = vec![None; r + 1];
        for (label, at, items) in &body.charts {
            let i = match label.as_str() {
                "inf" if r == 1 => 1,
                l => l.parse::<usize>().ok().filter(|&i| i <= r).ok_or_else(|| {
                    SceneError::Invalid(format!("{owner}, line {}: no chart `{label}` on P^{r}", at.line))
                })?,
            };
            if slots[i].is_some() {
                return Err(SceneError::Invalid(format!("{owner}: chart {} is given twice", target.chart_label(i))));
            }
            let where_ = format!("{owner}, chart {}", target.chart_label(i));
            let name_of = |c: usize| format!("m{c}");
            let mut e = None;
            let mut coords: Vec<Option<PolyMatrix>> = vec![None; r + 1];
            for a in items {
                let Value::Matrix(rows) = &a.value else {
                    return Err(expr_error(a.at, "a matrix", format!("`{}` is not a matrix", a.name)));
                };
                let m = to_matrix(rows, n, format!("{where_}, {}", a.name))?;
                let slot = match a.name.as_str() {
                    "e" => &mut e,
                    "m" if r == 1 => &mut coords[1 - i],
                    k => match (0..=r).find(|&c| name_of(c) == k) {
                        Some(c) => &mut coords[c],
                        None => return Err(SceneError::Invalid(format!("{where_}: unknown coordinate `{k}`"))),
                    },
                };
                if slot.replace(m).is_some() {
                    return Err(SceneError::Invalid(format!("{where_}: `{}` is assigned twice", a.name)));
                }
            }
            let e = e.ok_or_else(|| SceneError::Invalid(format!("{where_}: missing `e`")))?;
            let coords = coords
                .into_iter()
                .enumerate()
                .map(|(c, m)| match m {
                    Some(m) => Ok(m),
                    None if c == i => Ok(e.clone()),
                    None => Err(SceneError::Invalid(format!("{where_}: missing `{}`", name_of(c)))),
                })
                .collect::<Result<Vec<_>>>()?;
            slots[i] = Some(PathChart { e, coords });
        }
        slots
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| SceneError::Invalid(format!("{owner}: missing chart {}", target.chart_label(i))))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        if !body.charts.is_empty() {
            return Err(SceneError::Invalid(format!("{owner}: affine targets have no `chart` blocks")));
        }
        let r = target.r();
        let mut e = None;
        let mut coords: Vec<Option<PolyMatrix>> = vec![None; r];
        for a in top {
            let Value::Matrix(rows) = &a.value else {
                return Err(expr_error(a.at, "a matrix", format!("`{}` is not a matrix", a.name)));
            };
            let m = to_matrix(rows, n, format!("{owner}, {}", a.name))?;
            let slot = match a.name.as_str() {
                "e" => &mut e,
                "m" if r == 1 => &mut coords[0],
                k => match (0..r).find(|&c| format!("m{c}") == k) {
                    Some(c) => &mut coords[c],
                    None => return Err(SceneError::Invalid(format!("{owner}: unknown coordinate `{k}`"))),
                },
            };
            if slot.replace(m).is_some() {
                return Err(SceneError::Invalid(format!("{owner}: `{}` is assigned twice", a.name)));
            }
        }
        let e = e.unwrap_or_else(|| PolyMatrix::constant(&Matrix::identity(n)));
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(c, m)| m.ok_or_else(|| SceneError::Invalid(format!("{owner}: missing `m{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        vec![PathChart { e, coords }]
    };
    Ok((charts, samples))
}

fn nc_list(items: &[(String, Pos)]) -> Result<Vec<NcPoly>> {
    items
        .iter()
        .map(|(s, p)| NcPoly::parse(s).map_err(|e| expr_error(*p, "a noncommutative polynomial in g0, g1, ..", e)))
        .collect()
}

fn fractions(items: &[(String, Pos)]) -> Result<Vec<Transition>> {
    items
        .iter()
        .map(|(s, p)| {
            let (num, den) = s.split_once('|').ok_or_else(|| expr_error(*p, "`numerator | denominator`", "no `|`"))?;
            let parse = |x: &str| NcPoly::parse(x.trim()).map_err(|e| expr_error(*p, "a noncommutative polynomial", e));
            Ok(Transition::new(parse(num)?, parse(den)?))
        })
        .collect()
}

fn resolve_presentation(raw: RawPresentation) -> Result<PresentedChartSystem> {
    let mut sys = PresentedChartSystem::default();
    let mut slots: Vec<Option<ChartPresentation>> = Vec::new();
    for (label, at, items) in &raw.charts {
        let i: usize = label.parse().expect("numeric label");
        let (mut generators, mut relators) = (None, Vec::new());
        for a in items {
            match (a.name.as_str(), &a.value) {
                ("generators", Value::Int(k)) => generators = Some(*k),
                ("relators", Value::List(list)) => relators = nc_list(list)?,
                _ => return Err(expr_error(a.at, "`generators = INT` or `relators = [..]`", format!("`{}`", a.name))),
            }
        }
        let g = generators.ok_or_else(|| {
            SceneError::Invalid(format!("presentation chart {i}, line {}: missing `generators`", at.line))
        })?;
        if slots.len() <= i {
            slots.resize(i + 1, None);
        }
        if slots[i].replace(ChartPresentation::new(g, relators)).is_some() {
            return Err(SceneError::Invalid(format!("presentation chart {i} is given twice")));
        }
    }
    sys.charts = slots
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| SceneError::Invalid(format!("presentation: missing chart {i}"))))
        .collect::<Result<_>>()?;
    for (kind, at, a, b, items) in &raw.maps {
        if *a >= sys.charts.len() || *b >= sys.charts.len() {
            return Err(SceneError::Invalid(format!("line {}: no chart pair ({a}, {b})", at.line)));
        }
        let fresh = match kind.as_str() {
            "localize" => sys.localizations.insert((*a, *b), nc_list(items)?).is_none(),
            "transition" => sys.generator_transitions.insert((*a, *b), fractions(items)?).is_none(),
            _ => sys.localization_transitions.insert((*a, *b), fractions(items)?).is_none(),
        };
        if !fresh {
            return Err(SceneError::Invalid(format!("line {}: `{kind} {a} {b}` is given twice", at.line)));
        }
    }
    Ok(sys)
}

fn join<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    items.iter().map(f).collect::<Vec<_>>().join(", ")
}

fn print_rows(rows: &[Vec<String>]) -> String {
    format!("[{}]", join(rows, |r| format!("[{}]", r.join(", "))))
}

fn print_matrix(m: &Matrix) -> String {
    print_rows(&m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect::<Vec<_>>())
}

fn print_poly_matrix(m: &PolyMatrix) -> String {
    print_rows(&m.to_rows().iter().map(|r| r.iter().map(|p| p.display_in("t")).collect()).collect::<Vec<_>>())
}

/// Assignments for one chart, skipping the redundant `y_i / y_i`.
fn chart_lines<M>(target: &Target, i: usize, e: &M, coords: &[M], show: &dyn Fn(&M) -> String) -> Vec<String> {
    let mut out = vec![format!("e = {}", show(e))];
    for (c, m) in coords.iter().enumerate() {
        if target.is_projective() && c == i && show(m) == show(e) {
            continue;
        }
        out.push(format!("m{c} = {}", show(m)));
    }
    out
}

fn print_body<M>(out: &mut String, target: &Target, charts: &[(&M, &[M])], show: &dyn Fn(&M) -> String) {
    for (i, (e, coords)) in charts.iter().enumerate() {
        let lines = chart_lines(target, i, *e, coords, show);
        if target.is_projective() {
            let _ = writeln!(out, "  chart {} {{ {} }}", target.chart_label(i), lines.join("; "));
        } else {
            for l in lines {
                let _ = writeln!(out, "  {l};");
            }
        }
    }
}

/// The canonical text of a scene; parsing it gives the scene back.
pub fn print_scene(scene: &Scene) -> String {
    let mut out = String::new();
    match &scene.target {
        Target::Affine { r } => {
            let _ = writeln!(out, "target A {r};");
        }
        Target::Projective { r } => {
            let _ = writeln!(out, "target P {r};");
        }
        Target::Subvariety { r, incidence, exclusion } => {
            let _ = writeln!(
                out,
                "target P {r} {{ incidence = [{}]; exclusion = [{}] }};",
                join(incidence, ToString::to_string),
                join(exclusion, ToString::to_string)
            );
        }
    }
    let _ = writeln!(out, "n {};", scene.n);
    for (name, p) in &scene.points {
        let _ = writeln!(out, "\npoint {name} {{");
        let charts: Vec<(&Matrix, &[Matrix])> = p.charts.iter().map(|c| (&c.e, c.coords.as_slice())).collect();
        print_body(&mut out, &scene.target, &charts, &print_matrix);
        out.push_str("}\n");
    }
    for (name, path) in &scene.paths {
        let _ = writeln!(out, "\npath {name} {{");
        let charts: Vec<(&PolyMatrix, &[PolyMatrix])> =
            path.charts.iter().map(|c| (&c.e, c.coords.as_slice())).collect();
        print_body(&mut out, &scene.target, &charts, &print_poly_matrix);
        let _ = writeln!(out, "  samples = [{}];", join(&path.samples, ToString::to_string));
        out.push_str("}\n");
    }
    if let Some(sys) = &scene.presentation {
        out.push_str("\npresentation {\n");
        for (i, c) in sys.charts.iter().enumerate() {
            let _ = writeln!(
                out,
                "  chart {i} {{ generators = {}; relators = [{}] }}",
                c.generators,
                join(&c.relators, ToString::to_string)
            );
        }
        let frac = |t: &Transition| format!("{} | {}", t.numerator, t.denominator);
        for ((a, b), v) in &sys.localizations {
            let _ = writeln!(out, "  localize {a} {b} = [{}]", join(v, ToString::to_string));
        }
        for ((a, b), v) in &sys.generator_transitions {
            let _ = writeln!(out, "  transition {a} {b} = [{}]", join(v, frac));
        }
        for ((a, b), v) in &sys.localization_transitions {
            let _ = writeln!(out, "  inverse {a} {b} = [{}]", join(v, frac));
        }
        out.push_str("}\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    const TWO_POINTS: &str = "target P1; n 2; point p { chart 0 { e=[[1,0],[0,0]]; m=[[3,0],[0,0]] } chart inf { e=[[1,0],[0,1]]; m=[[1/3,0],[0,0]] } }";

    #[test]
    fn known_scenes() {
        let s = parse_scene(TWO_POINTS).unwrap();
        assert_eq!(s.target, Target::Projective { r: 1 });
        let e11 = Matrix::unit(2, 0, 0);
        let want =
            MorphismPoint::p1(e11.clone(), e11.scale(&q("3")), Matrix::identity(2), Matrix::diag(&[q("1/3"), q("0")]));
        assert_eq!(s.point("p"), Some(&want));

        let s = parse_scene("target A 1; n 1; point q { m0 = [[0]] }").unwrap();
        assert_eq!(s.point("q"), Some(&MorphismPoint::affine(vec![Matrix::zero(1)])));

        // em != m is a semantic problem, not a syntax error
        let bad = "target P1; n 2; point bad { chart 0 { e=[[1,0],[0,0]]; m=[[3,0],[0,1]] } chart inf { e=[[1,0],[0,1]]; m=[[1/3,0],[0,0]] } }";
        assert!(parse_scene(bad).is_ok());
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_scene("target A 1;\nn 1;\npoint q { m0 = [[0]\n").unwrap_err();
        assert!(matches!(err, SceneError::Syntax { line: 4, .. }), "{err}");
        let err = parse_scene("target A 1; n 1; point q { m0 = [[1/]] }").unwrap_err();
        assert!(matches!(err, SceneError::Syntax { line: 1, col: 35, .. }), "{err}");
        let err = parse_scene("target B 2; n 1").unwrap_err();
        assert!(matches!(err, SceneError::UnknownTarget { line: 1, col: 8, .. }), "{err}");
        let err = parse_scene("target A 1; n 2; point q { m0 = [[1, 2]] }").unwrap_err();
        assert!(matches!(err, SceneError::DimensionMismatch { n: 2, rows: 1, cols: 2, .. }), "{err}");
        assert!(parse_scene("target A 1; n 1; point q { m0 = [[t]] }").is_err());
        assert!(parse_scene("target A 1; n 1; point q { m0 = [[0]] } point q { m0 = [[1]] }").is_err());
        assert!(parse_scene("target A 2; n 1; point q { m0 = [[0]] }").is_err());
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = "# a comment\ntarget P 2 { incidence = [y0*y2 - y1^2]; exclusion = [] }\nn 1\n\
                    point a { chart 0 { e = [[1]]; m1 = [[2]]; m2 = [[4]] } chart 1 { e = [[1]]; m0 = [[1/2]]; m2 = [[2]] }\n\
                    chart 2 { e = [[1]]; m0 = [[1/4]]; m1 = [[1/2]] } }\n\
                    path b { chart 0 { e = [[1]]; m1 = [[t + 1]]; m2 = [[t^2 + 2*t + 1]] } chart 1 { e=[[0]]; m0=[[0]]; m2=[[0]] } chart 2 { e=[[0]]; m0=[[0]]; m1=[[0]] } samples = [0, 1/2] }\n\
                    presentation { chart 0 { generators = 2; relators = [g1*g1] } localize 0 0 = [g0] transition 0 0 = [g0 | g0, g1 | g0] }";
        let s = parse_scene(text).unwrap();
        let printed = print_scene(&s);
        assert_eq!(parse_scene(&printed).unwrap(), s, "{printed}");
        assert_eq!(print_scene(&parse_scene(&printed).unwrap()), printed);
    }
}
