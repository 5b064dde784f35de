use std::collections::BTreeSet;

use super::{Prenex, Quantifier};
use crate::poly::{Polynomial, Var};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderingHeuristic {
    /// Greedily place the variable in which most constraints become
    /// univariate.
    #[default]
    MaxUnivariate,
    /// Ascending (max degree, max total degree of terms with the variable,
    /// number of terms with the variable).
    Features,
}

/// A variable ordering: parameters first, then each quantifier block of the
/// prefix, each block reordered internally by the heuristic.
pub fn variable_order(p: &Prenex, heuristic: OrderingHeuristic) -> Vec<Var> {
    let mut blocks: Vec<Vec<Var>> = vec![p.params()];
    let mut last: Option<Quantifier> = None;
    for (q, v) in &p.prefix {
        if last != Some(*q) {
            blocks.push(Vec::new());
            last = Some(*q);
        }
        blocks.last_mut().unwrap().push(*v);
    }
    let polys: Vec<&Polynomial> = p.matrix.polynomials();
    let mut placed: Vec<Var> = Vec::new();
    for block in blocks {
        match heuristic {
            OrderingHeuristic::MaxUnivariate => max_univariate(&block, &polys, &mut placed),
            OrderingHeuristic::Features => {
                let mut keyed: Vec<(Features, usize, Var)> = block
                    .iter()
                    .enumerate()
                    .map(|(k, v)| (features(*v, &polys), k, *v))
                    .collect();
                keyed.sort();
                placed.extend(keyed.into_iter().map(|(_, _, v)| v));
            }
        }
    }
    placed
}

fn max_univariate(block: &[Var], polys: &[&Polynomial], placed: &mut Vec<Var>) {
    let var_sets: Vec<BTreeSet<Var>> = polys.iter().map(|p| p.vars().into_iter().collect()).collect();
    let mut remaining: Vec<Var> = block.to_vec();
    while !remaining.is_empty() {
        let done: BTreeSet<Var> = placed.iter().copied().collect();
        let score = |v: Var| {
            var_sets
                .iter()
                .filter(|vs| {
                    let open: Vec<&Var> = vs.iter().filter(|w| !done.contains(w)).collect();
                    open.len() == 1 && *open[0] == v
                })
                .count()
        };
        let (best, _) = remaining
            .iter()
            .enumerate()
            .map(|(k, v)| (k, score(*v)))
            .fold((0, 0), |acc, (k, s)| if s > acc.1 { (k, s) } else { acc });
        placed.push(remaining.remove(best));
    }
}

type Features = (u32, u32, usize);

fn features(v: Var, polys: &[&Polynomial]) -> Features {
    let mut max_deg = 0;
    let mut max_tdeg = 0;
    let mut terms = 0;
    for p in polys {
        max_deg = max_deg.max(p.degree(v));
        for (m, _) in p.terms() {
            if m.exponent(v) > 0 {
                max_tdeg = max_tdeg.max(m.total_degree());
                terms += 1;
            }
        }
    }
    (max_deg, max_tdeg, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula, Rel};
    use crate::poly::testing::{c, x};

    fn exists(vars: &[u32], m: Formula) -> Prenex {
        Prenex {
            prefix: vars.iter().map(|v| (Quantifier::Exists, Var(*v))).collect(),
            matrix: m,
        }
    }

    #[test]
    fn univariate_constraint_goes_first() {
        // y = x1, x = x2: {x < 0, x*y > 1}
        let m = Formula::and([
            Formula::constraint(x(2), Rel::Lt),
            Formula::constraint(&(&x(1) * &x(2)) - &c(1), Rel::Gt),
        ]);
        let p = exists(&[1, 2], m);
        assert_eq!(variable_order(&p, OrderingHeuristic::MaxUnivariate), vec![Var(2), Var(1)]);
    }

    #[test]
    fn blocks_are_kept() {
        let m = Formula::and([
            Formula::constraint(x(2), Rel::Lt),
            Formula::constraint(&(&x(1) * &x(2)) - &c(1), Rel::Gt),
        ]);
        let p = Prenex {
            prefix: vec![(Quantifier::Forall, Var(1)), (Quantifier::Exists, Var(2))],
            matrix: m,
        };
        for h in [OrderingHeuristic::MaxUnivariate, OrderingHeuristic::Features] {
            assert_eq!(variable_order(&p, h), vec![Var(1), Var(2)]);
        }
    }

    #[test]
    fn features_prefer_low_degree() {
        let m = Formula::constraint(&(&(&x(1) * &x(1)) * &x(1)) + &x(2), Rel::Gt);
        let p = exists(&[1, 2], m);
        assert_eq!(variable_order(&p, OrderingHeuristic::Features), vec![Var(2), Var(1)]);
        let single = exists(&[1], Formula::constraint(x(1), Rel::Gt));
        assert_eq!(variable_order(&single, OrderingHeuristic::Features), vec![Var(1)]);
    }
}
