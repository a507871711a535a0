//! The subcommands, each returning the text to print on success.

use std::fmt::Write as _;

use d0moduli::groebner::MonomialOrder;
use d0moduli::higgsing::{default_resolution, detect_events};
use d0moduli::jordan::{decay_chain, orbit_leq, JordanType};
use d0moduli::moduli::{
    analyze, check_admissible, classify_point, image_quiver, phi_chow, phi_chow_projective, phi_hilb, MorphismPoint,
    Report, Target,
};
use d0moduli::poly::Poly;
use d0moduli::GaussianRational as Q;
use serde::Serialize;
use thiserror::Error;

use crate::scene::{parse_scene, print_scene, Scene, SceneError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Core(#[from] d0moduli::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

/// The named point, or every point in declaration order.
fn selected<'a>(scene: &'a Scene, name: Option<&'a str>) -> Result<Vec<(&'a str, &'a MorphismPoint)>> {
    match name {
        Some(k) => match scene.point(k) {
            Some(p) => Ok(vec![(k, p)]),
            None => usage(format!("no point named `{k}`")),
        },
        None if scene.points.is_empty() => usage("the scene declares no points"),
        None => Ok(scene.points.iter().map(|(k, p)| (k.as_str(), p)).collect()),
    }
}

/// One JSON value for a single selected point, else an array of
/// `{"point": name, ..}` entries.
fn json_per_point<T: Serialize>(items: Vec<(&str, T)>, single: bool) -> String {
    if single {
        return serde_json::to_string(&items[0].1).expect("serializable");
    }
    #[derive(Serialize)]
    struct Named<'a, T> {
        point: &'a str,
        #[serde(flatten)]
        value: T,
    }
    let named: Vec<Named<T>> = items.into_iter().map(|(point, value)| Named { point, value }).collect();
    serde_json::to_string(&named).expect("serializable")
}

fn format_point(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn report_text(name: &str, r: &Report) -> String {
    let mut out = String::new();
    if !r.admissible {
        let _ = writeln!(out, "point {name}: not admissible");
        for d in &r.diagnostics {
            let _ = writeln!(out, "  {d}");
        }
        return out;
    }
    let _ = writeln!(out, "point {name}: admissible, {} component(s)", r.components.len());
    for c in &r.components {
        let _ = writeln!(
            out,
            "  chart {} at {}: length {}, sublengths {:?}, gauge {}",
            c.chart,
            format_point(&c.eigenvalue_tag),
            c.length,
            c.sublengths,
            c.gauge_dim
        );
    }
    let _ = writeln!(out, "  hilbert: {}, chow: {}", r.classification.hilbert, r.classification.chow);
    let cycle: Vec<String> = r
        .chow_cycle
        .iter()
        .map(|v| {
            let items = v.as_array().expect("cycle entries are arrays");
            let (mult, pt) = items.split_last().expect("nonempty");
            let pt: Vec<String> = pt.iter().map(|x| x.as_str().unwrap_or_default().to_string()).collect();
            format!("{mult}*{}", format_point(&pt))
        })
        .collect();
    let _ = writeln!(out, "  chow cycle: {}", cycle.join(" + "));
    out
}

pub fn analyze_cmd(text: &str, point: Option<&str>, json: bool) -> Result<String> {
    let scene = parse_scene(text)?;
    let reports =
        selected(&scene, point)?.into_iter().map(|(k, p)| Ok((k, analyze(p)?))).collect::<Result<Vec<_>>>()?;
    if json {
        return Ok(json_per_point(reports, point.is_some()) + "\n");
    }
    Ok(reports.iter().map(|(k, r)| report_text(k, r)).collect())
}

#[derive(Serialize)]
struct GlueReport {
    admissible: bool,
    diagnostics: Vec<String>,
}

/// Diagnostics of the built-in gluing conditions, plus those of the
/// scene's own presentation when it declares one.
pub fn glue_check_cmd(text: &str, point: Option<&str>, json: bool) -> Result<String> {
    let scene = parse_scene(text)?;
    let mut items = Vec::new();
    for (k, p) in selected(&scene, point)? {
        let mut diagnostics: Vec<String> = check_admissible(p).iter().map(ToString::to_string).collect();
        if let Some(sys) = &scene.presentation {
            let asg: Vec<_> = (0..p.charts.len())
                .map(|i| std::iter::once(p.charts[i].e.clone()).chain(p.chart_generators(i)).collect())
                .collect();
            diagnostics.extend(sys.check(&asg).iter().map(|d| format!("presentation: {d}")));
        }
        items.push((k, GlueReport { admissible: diagnostics.is_empty(), diagnostics }));
    }
    if json {
        return Ok(json_per_point(items, point.is_some()) + "\n");
    }
    let mut out = String::new();
    for (k, r) in items {
        if r.admissible {
            let _ = writeln!(out, "point {k}: admissible");
        } else {
            let _ = writeln!(out, "point {k}: {} violation(s)", r.diagnostics.len());
            for d in r.diagnostics {
                let _ = writeln!(out, "  {d}");
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct Flags {
    hilbert: bool,
    chow: bool,
}

pub fn classify_cmd(text: &str, point: Option<&str>, json: bool) -> Result<String> {
    let scene = parse_scene(text)?;
    let mut items = Vec::new();
    for (k, p) in selected(&scene, point)? {
        let diags = check_admissible(p);
        if let Some(d) = diags.first() {
            return usage(format!("point {k} is not admissible: {d}"));
        }
        let c = classify_point(p)?;
        items.push((k, Flags { hilbert: c.hilbert, chow: c.chow }));
    }
    if json {
        return Ok(json_per_point(items, point.is_some()) + "\n");
    }
    Ok(items.iter().map(|(k, f)| format!("point {k}: hilbert {}, chow {}\n", f.hilbert, f.chow)).collect())
}

pub fn quiver_cmd(text: &str, point: Option<&str>, dot: bool) -> Result<String> {
    let scene = parse_scene(text)?;
    let mut out = String::new();
    for (k, p) in selected(&scene, point)? {
        if let Some(d) = check_admissible(p).first() {
            return usage(format!("point {k} is not admissible: {d}"));
        }
        let q = image_quiver(p)?;
        if dot {
            out.push_str(&q.to_dot());
            continue;
        }
        let _ = writeln!(out, "point {k}: {} vertices", q.vertices.len());
        for (i, v) in q.vertices.iter().enumerate() {
            let tag: Vec<String> = v.tag.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  v{i} at {} (n={})", format_point(&tag), v.block_dim);
        }
        for (&(a, b), &count) in &q.arrows {
            let _ = writeln!(out, "  v{a} -> v{b} x{count}");
        }
    }
    Ok(out)
}

/// One JSON line per event.
pub fn deform_cmd(text: &str, path: &str, resolution: Option<&str>, reverse: bool) -> Result<String> {
    let scene = parse_scene(text)?;
    let Some(p) = scene.path(path) else { return usage(format!("no path named `{path}`")) };
    let res = match resolution {
        Some(s) => {
            let r: Q = s.parse()?;
            if !r.is_real() || r <= Q::from_ints(0, 0) {
                return usage("the resolution must be a positive rational");
            }
            r
        }
        None => default_resolution(),
    };
    let p = if reverse { p.reversed() } else { p.clone() };
    let events = detect_events(&p, &res)?;
    Ok(events.iter().map(|e| e.to_json().to_string() + "\n").collect())
}

#[derive(Serialize)]
struct OrbitComparison {
    leq: bool,
    /// Block splits `[from, [a, b]]` taking the right type to the left one.
    decay: Option<Vec<(usize, (usize, usize))>>,
    decay_eigenvalues: Option<Vec<String>>,
}

pub fn orbit_compare_cmd(left: &str, right: &str) -> Result<String> {
    let l: JordanType = left.parse()?;
    let r: JordanType = right.parse()?;
    let chain = decay_chain(&l, &r);
    let cmp = OrbitComparison {
        leq: orbit_leq(&l, &r),
        decay: chain.as_ref().map(|c| c.iter().map(|s| (s.from, s.into)).collect()),
        decay_eigenvalues: chain.map(|c| c.iter().map(|s| s.eigenvalue.to_string()).collect()),
    };
    Ok(serde_json::to_string(&cmp).expect("serializable") + "\n")
}

/// Splits on top-level commas or semicolons.
fn split_top(text: &str, seps: &[char]) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut depth = 0i32;
    for c in text.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&c) {
            out.push(String::new());
        } else {
            out.last_mut().expect("nonempty").push(c);
        }
    }
    out.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

fn scene_with(target: Target, name: &str, p: MorphismPoint) -> String {
    print_scene(&Scene { target, n: p.n, points: vec![(name.into(), p)], paths: vec![], presentation: None })
}

/// `Phi_Hilb` of the ideal, printed as a scene. The ring is `C[y1..yr]`
/// with `r` the largest variable index used.
pub fn hilb_cmd(ideal: &str, lex: bool) -> Result<String> {
    let gens = split_top(ideal, &[',', ';']);
    if gens.is_empty() {
        return usage("the ideal needs at least one generator");
    }
    let mut r = 0;
    for g in &gens {
        let mut chars = g.chars().peekable();
        while let Some(c) = chars.next() {
            if c == 'y' {
                let digits: String = std::iter::from_fn(|| chars.next_if(char::is_ascii_digit)).collect();
                match digits.parse::<usize>() {
                    Ok(0) => return usage("affine variables are y1, y2, ..; y0 is not one of them"),
                    Ok(k) => r = r.max(k),
                    Err(_) => {}
                }
            }
        }
    }
    let vars = Poly::var_names("y", 1, r.max(1));
    let polys = gens.iter().map(|g| Poly::parse(&vars, g)).collect::<d0moduli::Result<Vec<_>>>()?;
    let order = if lex { MonomialOrder::lex() } else { MonomialOrder::degrevlex() };
    let p = phi_hilb(&polys, &order)?;
    Ok(scene_with(p.target.clone(), "hilb", p))
}

/// `Phi_Chow` of a multiset of points `(a, b); (c, d)`, printed as a scene.
pub fn chow_cmd(points: &str, projective: bool) -> Result<String> {
    let pts = split_top(points, &[';', ','])
        .iter()
        .map(|item| {
            let inner = item.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(item);
            split_top(inner, &[',']).iter().map(|x| x.parse::<Q>()).collect::<d0moduli::Result<Vec<_>>>()
        })
        .collect::<d0moduli::Result<Vec<_>>>()?;
    let p = if projective { phi_chow_projective(&pts)? } else { phi_chow(&pts)? };
    Ok(scene_with(p.target.clone(), "chow", p))
}

/// The canonical form of a scene.
pub fn print_cmd(text: &str) -> Result<String> {
    Ok(print_scene(&parse_scene(text)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_respects_brackets() {
        assert_eq!(split_top("(1, 2); (3, 4)", &[';', ',']), vec!["(1, 2)", "(3, 4)"]);
        assert_eq!(split_top("y1^2, y1*(y2 + 1)", &[',']), vec!["y1^2", "y1*(y2 + 1)"]);
    }

    #[test]
    fn known_orbit_compare() {
        assert_eq!(
            orbit_compare_cmd("0:[1,1]", "0:[2]").unwrap(),
            "{\"leq\":true,\"decay\":[[2,[1,1]]],\"decay_eigenvalues\":[\"0\"]}\n"
        );
        assert_eq!(
            orbit_compare_cmd("0:[2]", "0:[1,1]").unwrap(),
            "{\"leq\":false,\"decay\":null,\"decay_eigenvalues\":null}\n"
        );
    }
}
