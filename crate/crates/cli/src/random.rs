//! Seeded random sentences and QE instances for property checks.

use calc_core::formula::{Formula, Rel};
use calc_core::poly::{Monomial, Polynomial, Rational, Var};
use rand::seq::SliceRandom;
use rand::Rng;

/// Size limits of a random formula.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_atoms: usize,
    pub max_degree: u32,
    /// Coefficients are drawn from `[-coeff, coeff]`.
    pub coeff: i64,
    pub max_terms: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_atoms: 4,
            max_degree: 2,
            coeff: 5,
            max_terms: 4,
        }
    }
}

const RELS: [Rel; 6] = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Ge, Rel::Gt];

/// A non-constant polynomial in `vars` with total degree at most
/// `shape.max_degree`.
pub fn polynomial(rng: &mut impl Rng, vars: &[Var], shape: &Shape) -> Polynomial {
    loop {
        let terms = rng.gen_range(1..=shape.max_terms);
        let p = Polynomial::from_terms((0..terms).map(|_| {
            let mut exps = vec![0u32; vars.iter().map(|v| v.index()).max().unwrap_or(0)];
            let degree = rng.gen_range(0..=shape.max_degree);
            for _ in 0..degree {
                let v = vars.choose(rng).unwrap();
                exps[v.index() - 1] += 1;
            }
            let c = rng.gen_range(-shape.coeff..=shape.coeff);
            (Monomial::from_exponents(exps), Rational::from_integer(c.into()))
        }));
        if !p.is_constant() {
            return p;
        }
    }
}

/// A quantifier-free formula over `vars` with up to `shape.max_atoms` atoms
/// combined by random conjunctions, disjunctions and negations.
pub fn matrix(rng: &mut impl Rng, vars: &[Var], shape: &Shape) -> Formula {
    let atoms = rng.gen_range(1..=shape.max_atoms);
    let mut parts: Vec<Formula> = (0..atoms)
        .map(|_| {
            let f = Formula::constraint(polynomial(rng, vars, shape), *RELS.choose(rng).unwrap());
            if rng.gen_bool(0.15) {
                Formula::not(f)
            } else {
                f
            }
        })
        .collect();
    while parts.len() > 1 {
        let a = parts.swap_remove(rng.gen_range(0..parts.len()));
        let b = parts.swap_remove(rng.gen_range(0..parts.len()));
        let f = if rng.gen_bool(0.5) {
            Formula::and([a, b])
        } else {
            Formula::or([a, b])
        };
        parts.push(if rng.gen_bool(0.1) { Formula::not(f) } else { f });
    }
    parts.pop().unwrap()
}

fn quantify(rng: &mut impl Rng, vars: &[Var], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |f, v| {
        if rng.gen_bool(0.5) {
            Formula::Exists(*v, Box::new(f))
        } else {
            Formula::Forall(*v, Box::new(f))
        }
    })
}

/// A sentence in 1 to `max_vars` variables with a random quantifier prefix
/// in a random order.
pub fn sentence(rng: &mut impl Rng, max_vars: usize, shape: &Shape) -> Formula {
    let n = rng.gen_range(1..=max_vars) as u32;
    let mut vars: Vec<Var> = (1..=n).map(Var).collect();
    let m = matrix(rng, &vars, shape);
    vars.shuffle(rng);
    quantify(rng, &vars, m)
}

/// A formula with the single parameter `x1` and 1 to `max_quantified`
/// quantified variables; `x1` occurs in the matrix.
pub fn qe_instance(rng: &mut impl Rng, max_quantified: usize, shape: &Shape) -> Formula {
    let n = rng.gen_range(1..=max_quantified) as u32;
    let vars: Vec<Var> = (1..=n + 1).map(Var).collect();
    let m = loop {
        let m = matrix(rng, &vars, shape);
        if m.vars().contains(&Var(1)) {
            break m;
        }
    };
    let mut bound = vars[1..].to_vec();
    bound.shuffle(rng);
    quantify(rng, &bound, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes_are_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = Shape::default();
        for _ in 0..200 {
            let f = sentence(&mut rng, 3, &shape);
            assert!(f.free_vars().is_empty());
            assert!(f.atom_count() <= 4);
            assert!(f.polynomials().iter().all(|p| p.total_degree() <= 2 && p.level() <= 3));
            let g = qe_instance(&mut rng, 2, &shape);
            assert_eq!(g.free_vars().into_iter().collect::<Vec<_>>(), vec![Var(1)]);
        }
    }

    #[test]
    fn seeds_reproduce() {
        let draw = |seed| sentence(&mut ChaCha8Rng::seed_from_u64(seed), 3, &Shape::default());
        assert_eq!(draw(3), draw(3));
    }
}
