//! Buchberger's algorithm, normal forms and standard monomials.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::poly::{monomial_degree, monomial_divides, monomial_lcm, Monomial, Poly};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum OrderKind {
    Lex,
    DegRevLex,
}

/// A monomial order. `variables[0]` is the largest variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    variables: Option<Vec<usize>>,
}

impl Default for MonomialOrder {
    /// Degree reverse lexicographic with `y1 > y2 > y3`.
    fn default() -> Self {
        Self::degrevlex()
    }
}

impl MonomialOrder {
    pub fn lex() -> Self {
        Self { kind: OrderKind::Lex, variables: None }
    }

    pub fn degrevlex() -> Self {
        Self { kind: OrderKind::DegRevLex, variables: None }
    }

    /// Uses `variables` (a permutation of variable indices, largest first).
    pub fn with_variable_order(mut self, variables: Vec<usize>) -> Self {
        self.variables = Some(variables);
        self
    }

    fn exponent(&self, m: &[u32], rank: usize) -> u32 {
        match &self.variables {
            Some(v) => m[v[rank]],
            None => m[rank],
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        let n = a.len();
        match self.kind {
            OrderKind::Lex => (0..n)
                .map(|r| self.exponent(a, r).cmp(&self.exponent(b, r)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal),
            OrderKind::DegRevLex => monomial_degree(a).cmp(&monomial_degree(b)).then_with(|| {
                (0..n)
                    .rev()
                    .map(|r| self.exponent(b, r).cmp(&self.exponent(a, r)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }
}

/// A reduced Gröbner basis: monic, inter-reduced, sorted by leading monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroebnerBasis {
    pub order: MonomialOrder,
    pub polys: Vec<Poly>,
    vars: Vec<String>,
}

impl GroebnerBasis {
    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys.iter().map(|p| p.leading_monomial(&self.order).expect("nonzero")).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.polys.iter().any(|p| p.as_constant().is_some_and(|c| !num_traits::Zero::is_zero(&c)))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        normal_form(p, self).is_zero()
    }
}

fn reduce(p: &Poly, divisors: &[Poly], order: &MonomialOrder) -> Poly {
    let leads: Vec<_> = divisors
        .iter()
        .map(|d| {
            let (m, c) = d.leading_term(order).expect("nonzero divisor");
            (m.clone(), c.inv().expect("nonzero"))
        })
        .collect();
    let mut rem = p.clone();
    let mut out = Poly::zero(p.vars());
    while let Some((m, c)) = rem.leading_term(order) {
        let (m, c) = (m.clone(), c.clone());
        match leads.iter().position(|(lm, _)| monomial_divides(lm, &m)) {
            Some(k) => {
                let shift: Monomial = m.iter().zip(&leads[k].0).map(|(a, b)| a - b).collect();
                rem = &rem - &divisors[k].mul_term(&shift, &(&c * &leads[k].1));
            }
            None => {
                let t = Poly::monomial(p.vars(), m.clone(), c.clone());
                out = &out + &t;
                rem = &rem - &t;
            }
        }
    }
    out
}

fn s_poly(f: &Poly, g: &Poly, order: &MonomialOrder) -> Poly {
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let l = monomial_lcm(fm, gm);
    let sf: Monomial = l.iter().zip(fm).map(|(a, b)| a - b).collect();
    let sg: Monomial = l.iter().zip(gm).map(|(a, b)| a - b).collect();
    &f.mul_term(&sf, &fc.inv().unwrap()) - &g.mul_term(&sg, &gc.inv().unwrap())
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn buchberger(gens: &[Poly], order: &MonomialOrder) -> GroebnerBasis {
    let vars = gens.first().map(|g| g.vars().to_vec()).unwrap_or_default();
    let mut basis: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic(order)).collect();
    let mut pairs: VecDeque<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop_front() {
        let a = basis[i].leading_monomial(order).unwrap();
        let b = basis[j].leading_monomial(order).unwrap();
        if a.iter().zip(&b).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j], order), &basis, order);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic(order));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimalize
    let mut minimal: Vec<Poly> = Vec::new();
    for (k, p) in basis.iter().enumerate() {
        let lm = p.leading_monomial(order).unwrap();
        let redundant = basis.iter().enumerate().any(|(j, q)| {
            let lq = q.leading_monomial(order).unwrap();
            j != k && monomial_divides(&lq, &lm) && (lq != lm || j < k)
        });
        if !redundant {
            minimal.push(p.clone());
        }
    }
    // inter-reduce
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Poly> = minimal.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, p)| p.clone()).collect();
        let lm = minimal[k].leading_monomial(order).unwrap();
        let lead = Poly::monomial(&vars, lm, num_traits::One::one());
        let tail = &minimal[k] - &lead;
        let tail = if others.is_empty() { tail } else { reduce(&tail, &others, order) };
        reduced.push(&lead + &tail);
    }
    reduced.sort_by(|p, q| order.cmp(&q.leading_monomial(order).unwrap(), &p.leading_monomial(order).unwrap()));
    GroebnerBasis { order: order.clone(), polys: reduced, vars }
}

/// Remainder of `p` modulo the basis; no term is divisible by a leading monomial.
pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Poly {
    if gb.polys.is_empty() {
        return p.clone();
    }
    reduce(p, &gb.polys, &gb.order)
}

/// Standard monomials, by increasing degree and, within a degree, from the
/// largest monomial down.
pub fn quotient_basis(gb: &GroebnerBasis) -> Result<Vec<Monomial>> {
    let nv = gb.vars.len();
    let leads = gb.leading_monomials();
    if leads.iter().any(|m| m.iter().all(|&e| e == 0)) {
        return Ok(Vec::new());
    }
    for v in 0..nv {
        let bounded = leads.iter().any(|m| m[v] > 0 && m.iter().enumerate().all(|(k, &e)| k == v || e == 0));
        if !bounded {
            return Err(Error::InfiniteQuotient);
        }
    }
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([vec![0u32; nv]]);
    while let Some(m) = queue.pop_front() {
        if !seen.insert(m.clone()) {
            continue;
        }
        for v in 0..nv {
            let mut next = m.clone();
            next[v] += 1;
            if !leads.iter().any(|l| monomial_divides(l, &next)) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Monomial> = seen.into_iter().collect();
    out.sort_by(|a, b| monomial_degree(a).cmp(&monomial_degree(b)).then_with(|| gb.order.cmp(b, a)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        Poly::var_names("y", 1, 2)
    }

    fn polys(src: &[&str]) -> Vec<Poly> {
        src.iter().map(|s| Poly::parse(&vars(), s).unwrap()).collect()
    }

    #[test]
    fn known_bases() {
        let g = polys(&["y1^2", "y1*y2", "y2^2"]);
        let gb = buchberger(&g, &MonomialOrder::default());
        assert_eq!(gb.polys, g);

        let g = polys(&["y1 - 1"]);
        assert_eq!(buchberger(&g, &MonomialOrder::default()).polys, g);

        let lex = MonomialOrder::lex().with_variable_order(vec![1, 0]);
        let g = polys(&["y2 - y1", "y1^2"]);
        assert_eq!(buchberger(&g, &lex).polys, g);
    }

    #[test]
    fn known_normal_forms() {
        let gb = buchberger(&polys(&["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::default());
        assert!(normal_form(&polys(&["y1^2*y2"])[0], &gb).is_zero());
        assert_eq!(normal_form(&polys(&["7"])[0], &gb), polys(&["7"])[0]);

        let lex = MonomialOrder::lex().with_variable_order(vec![1, 0]);
        let gb = buchberger(&polys(&["y2 - y1", "y1^2"]), &lex);
        assert_eq!(normal_form(&polys(&["y1*y2 + y1"])[0], &gb), polys(&["y1"])[0]);
    }

    #[test]
    fn known_quotient_bases() {
        let gb = buchberger(&polys(&["y1^2", "y1*y2", "y2^2"]), &MonomialOrder::default());
        assert_eq!(quotient_basis(&gb).unwrap(), vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
        let gb = buchberger(&polys(&["y1", "y2"]), &MonomialOrder::default());
        assert_eq!(quotient_basis(&gb).unwrap(), vec![vec![0, 0]]);
        let gb = buchberger(&polys(&["y1"]), &MonomialOrder::default());
        assert_eq!(quotient_basis(&gb), Err(Error::InfiniteQuotient));
    }

    #[test]
    fn nontrivial_basis_and_unit_ideal() {
        // Two points (0,0) and (1,1): ideal (y1 - y2, y2^2 - y2).
        let gb = buchberger(&polys(&["y1^2 - y1", "y1 - y2"]), &MonomialOrder::default());
        assert_eq!(gb.polys, polys(&["y2^2 - y2", "y1 - y2"]));
        assert_eq!(quotient_basis(&gb).unwrap().len(), 2);
        let gb = buchberger(&polys(&["y1", "y1 - 1"]), &MonomialOrder::default());
        assert!(gb.is_unit_ideal());
        assert!(quotient_basis(&gb).unwrap().is_empty());
    }

    #[test]
    fn order_comparisons() {
        let drl = MonomialOrder::degrevlex();
        assert_eq!(drl.cmp(&[1, 0], &[0, 1]), Ordering::Greater);
        assert_eq!(drl.cmp(&[0, 2], &[1, 0]), Ordering::Greater);
        // y1*y3 < y2^2 in degrevlex
        assert_eq!(drl.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(MonomialOrder::lex().cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Greater);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = Poly> {
            proptest::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..4).prop_map(|ts| {
                let v = Poly::var_names("y", 1, 2);
                ts.into_iter().fold(Poly::zero(&v), |acc, ((a, b), c)| {
                    &acc + &Poly::monomial(&v, vec![a, b], crate::scalar::GaussianRational::integer(c))
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]
            #[test]
            fn generators_reduce_to_zero_and_nf_is_linear(
                gens in proptest::collection::vec(poly(), 1..3), p in poly(), q in poly()
            ) {
                let gb = buchberger(&gens, &MonomialOrder::default());
                for g in &gens {
                    prop_assert!(normal_form(g, &gb).is_zero());
                }
                let lhs = normal_form(&(&p + &q), &gb);
                let rhs = &normal_form(&p, &gb) + &normal_form(&q, &gb);
                prop_assert_eq!(&lhs, &rhs);
                prop_assert_eq!(normal_form(&lhs, &gb), lhs);
            }
        }
    }
}
