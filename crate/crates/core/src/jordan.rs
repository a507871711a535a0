//! Jordan types as double partitions, the orbit order, isotopic decays and
//! stabilizer dimensions.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::unipoly::gq_roots;

type Q = GaussianRational;

/// `{(lambda_i, [d_i1 >= d_i2 >= ...])}` in canonical order, so that equality
/// of types is equality of values.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct JordanType {
    entries: Vec<(Q, Vec<usize>)>,
}

impl JordanType {
    pub fn new(mut entries: Vec<(Q, Vec<usize>)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateEigenvalue(w[0].0.to_string()));
            }
        }
        for (l, d) in &mut entries {
            if d.is_empty() || d.contains(&0) {
                return Err(Error::Invalid(format!("partition for {l} must be nonempty and positive")));
            }
            d.sort_unstable_by(|a, b| b.cmp(a));
        }
        Ok(Self { entries })
    }

    /// A single eigenvalue with the given partition.
    pub fn single(lambda: Q, partition: Vec<usize>) -> Result<Self> {
        Self::new(vec![(lambda, partition)])
    }

    pub fn entries(&self) -> &[(Q, Vec<usize>)] {
        &self.entries
    }

    pub fn n(&self) -> usize {
        self.entries.iter().map(|(_, d)| d.iter().sum::<usize>()).sum()
    }

    pub fn partition(&self, lambda: &Q) -> Option<&[usize]> {
        self.entries.iter().find(|(l, _)| l == lambda).map(|(_, d)| d.as_slice())
    }

    /// Eigenvalues with algebraic multiplicities, the invariant of the
    /// equivalence generated by the orbit order.
    pub fn spectrum(&self) -> Vec<(Q, usize)> {
        self.entries.iter().map(|(l, d)| (l.clone(), d.iter().sum())).collect()
    }

    /// Block diagonal Jordan matrix of this type.
    pub fn matrix(&self) -> Matrix {
        let blocks: Vec<Matrix> =
            self.entries.iter().flat_map(|(l, d)| d.iter().map(move |&k| Matrix::jordan_block(l, k))).collect();
        Matrix::block_diag(&blocks)
    }
}

impl fmt::Display for JordanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(l, d)| {
                let ds: Vec<String> = d.iter().map(ToString::to_string).collect();
                format!("{l}:[{}]", ds.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// Parses the compact form `lambda:[d1,d2];lambda':[d3]`.
impl FromStr for JordanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for item in s.split(';').map(str::trim).filter(|x| !x.is_empty()) {
            let (l, d) = item
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `eigenvalue:[sizes]` in `{item}`")))?;
            let lambda: Q = l.trim().parse()?;
            let d = d.trim();
            let inner = d
                .strip_prefix('[')
                .and_then(|x| x.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected a bracketed partition in `{item}`")))?;
            let sizes = inner
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("block size `{x}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            entries.push((lambda, sizes));
        }
        if entries.is_empty() {
            return Err(Error::Parse("empty Jordan type".into()));
        }
        Self::new(entries)
    }
}

/// Partition whose `j`-th conjugate part is `counts[j - 1]`, the number of
/// blocks of size at least `j`.
pub(crate) fn partition_from_counts(counts: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for (j, &c) in counts.iter().enumerate() {
        let next = counts.get(j + 1).copied().unwrap_or(0);
        out.extend(std::iter::repeat_n(j + 1, c - next));
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// Partition of a nilpotent operator from its rank sequence
/// `ranks[j] = rank(N^j)`, starting at `ranks[0] = dimension` and ending at 0.
pub(crate) fn partition_from_ranks(ranks: &[usize]) -> Vec<usize> {
    let counts: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    partition_from_counts(&counts)
}

pub fn jordan_type(m: &Matrix) -> Result<JordanType> {
    let n = m.n();
    let roots = gq_roots(&m.char_poly())?.require_split()?;
    let mut entries = Vec::new();
    for (lambda, mult) in roots {
        let a = m - &Matrix::identity(n).scale(&lambda);
        let mut ranks = vec![n];
        let mut power = Matrix::identity(n);
        while *ranks.last().unwrap() > n - mult {
            power = &power * &a;
            ranks.push(power.rank());
        }
        let shifted: Vec<usize> = ranks.iter().map(|r| r - (n - mult)).collect();
        entries.push((lambda, partition_from_ranks(&shifted)));
    }
    JordanType::new(entries)
}

/// `rank(N^j)` for a nilpotent of partition `d`.
pub fn nilpotent_rank(d: &[usize], j: usize) -> usize {
    d.iter().map(|&k| k.saturating_sub(j)).sum()
}

/// The orbit order: `t1 <= t2` iff the orbit of `t1` lies in the closure
/// of the orbit of `t2`.
pub fn orbit_leq(t1: &JordanType, t2: &JordanType) -> bool {
    if t1.spectrum() != t2.spectrum() {
        return false;
    }
    t1.entries.iter().zip(&t2.entries).all(|((_, d1), (_, d2))| {
        let top = d1[0].max(d2[0]);
        (1..=top).all(|j| nilpotent_rank(d1, j) <= nilpotent_rank(d2, j))
    })
}

/// Same eigenvalues with the same multiplicities.
pub fn same_class(t1: &JordanType, t2: &JordanType) -> bool {
    t1.spectrum() == t2.spectrum()
}

/// One isotopic decay: a block of size `from` splits into `into.0 + into.1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecayStep {
    pub eigenvalue: Q,
    pub from: usize,
    pub into: (usize, usize),
}

/// Splits taking `t2` to `t1`, if `t1` is reachable by isotopic decay.
pub fn decay_chain(t1: &JordanType, t2: &JordanType) -> Option<Vec<DecayStep>> {
    if t1.spectrum() != t2.spectrum() {
        return None;
    }
    let mut steps = Vec::new();
    for ((lambda, target), (_, start)) in t1.entries.iter().zip(&t2.entries) {
        let mut failed = HashSet::new();
        let mut path = Vec::new();
        if !refine(start.clone(), target, &mut failed, &mut path) {
            return None;
        }
        steps.extend(path.into_iter().map(|(from, into)| DecayStep { eigenvalue: lambda.clone(), from, into }));
    }
    Some(steps)
}

fn refine(
    current: Vec<usize>,
    target: &[usize],
    failed: &mut HashSet<Vec<usize>>,
    path: &mut Vec<(usize, (usize, usize))>,
) -> bool {
    if current == target {
        return true;
    }
    if current.len() >= target.len() || failed.contains(&current) {
        return false;
    }
    let mut sizes = current.clone();
    sizes.dedup();
    for &j in sizes.iter().filter(|&&j| j >= 2) {
        for j2 in 1..=j / 2 {
            let j1 = j - j2;
            let mut next = current.clone();
            let pos = next.iter().position(|&x| x == j).unwrap();
            next.remove(pos);
            next.push(j1);
            next.push(j2);
            next.sort_unstable_by(|a, b| b.cmp(a));
            path.push((j, (j1, j2)));
            if refine(next, target, failed, path) {
                return true;
            }
            path.pop();
        }
    }
    failed.insert(current);
    false
}

/// Stabilizer and orbit dimension of the conjugation orbit of a type.
pub fn stab_dim(t: &JordanType) -> (usize, usize) {
    let mut stab = 0;
    for (_, d) in &t.entries {
        stab += d.iter().sum::<usize>();
        for l in 1..d.len() {
            stab += 2 * d[l..].iter().sum::<usize>();
        }
    }
    let n = t.n();
    (stab, n * n - stab)
}

/// Partitions of `n` in decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// All Jordan types of size `n` up to relabelling eigenvalues, realized
/// with eigenvalues `0, 1, 2, ...`.
pub fn jordan_types(n: usize) -> Vec<JordanType> {
    let mut out = Vec::new();
    for mults in partitions(n) {
        let choices: Vec<Vec<Vec<usize>>> = mults.iter().map(|&m| partitions(m)).collect();
        let mut pick = vec![0usize; mults.len()];
        loop {
            // equal multiplicities are interchangeable, so keep the choice
            // indices non-decreasing across them
            let canonical = (1..mults.len()).all(|k| mults[k] != mults[k - 1] || pick[k] >= pick[k - 1]);
            if canonical {
                let entries = mults
                    .iter()
                    .enumerate()
                    .map(|(k, _)| (Q::integer(k as i64), choices[k][pick[k]].clone()))
                    .collect();
                out.push(JordanType::new(entries).expect("distinct eigenvalues"));
            }
            // odometer step over the choices
            let Some(k) = (0..mults.len()).find(|&k| pick[k] + 1 < choices[k].len()) else { break };
            pick[k] += 1;
            pick[..k].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}
