//! Implicit cells and the single-cell projection of the covering method.

mod cover;

use std::fmt;

use thiserror::Error;

use crate::formula::{ExtendedAtom, Formula, IndexedRoot, Rel, TruthValue3};
use crate::implicants::{decide_and_explain, Implicant, ImplicantConfig};
use crate::poly::{discriminant, gcd, refine_basis, resultant, Polynomial, Sign, Var};
use crate::ralg::{isolate_roots_at, sign_at, Bound, Interval, RealAlgebraic, RootsAt, SamplePoint};

pub use cover::{covers_real_line, gaps, interval_subset, Gap};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CellError {
    #[error("{poly} is nullified over {sample}")]
    Nullified { poly: Polynomial, sample: SamplePoint },
    #[error("intervals do not cover the real line")]
    NotCovering,
}

/// Which coefficients of a projected polynomial enter the projection set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CoefficientPolicy {
    /// From the leading coefficient down to the first one not vanishing at
    /// the sample.
    #[default]
    Required,
    All,
}

/// Projection settings and work counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Projection {
    pub coefficients: CoefficientPolicy,
    pub resultants_computed: u64,
    pub cells_characterized: u64,
}

impl Projection {
    pub fn new(coefficients: CoefficientPolicy) -> Self {
        Projection {
            coefficients,
            ..Default::default()
        }
    }
}

/// A cell given by a polynomial basis `polys`, a sample of level `i` and the
/// interval of `x_i` around the sample delimited by the roots of the
/// level-`i` members.
#[derive(Clone, Debug)]
pub struct ImplicitCell {
    pub polys: Vec<Polynomial>,
    pub sample: SamplePoint,
    pub interval: Interval,
    roots: Vec<(Polynomial, Vec<RealAlgebraic>)>,
}

impl ImplicitCell {
    /// Builds the cell around `sample`; the interval is as computed by
    /// [`compute_cell`]. A level-0 sample yields the placeholder cell.
    pub fn new(polys: Vec<Polynomial>, sample: SamplePoint) -> Result<Self, CellError> {
        let i = sample.level();
        if i == 0 {
            return Ok(ImplicitCell {
                polys,
                sample,
                interval: Interval::whole(),
                roots: Vec::new(),
            });
        }
        let prefix = &sample[..i - 1];
        let si = &sample[i - 1];
        let mut roots = Vec::new();
        for p in polys.iter().filter(|p| p.level() == i) {
            match isolate_roots_at(p, prefix) {
                RootsAt::Roots(r) => roots.push((p.clone(), r)),
                RootsAt::Nullified => {
                    return Err(CellError::Nullified {
                        poly: p.clone(),
                        sample: sample.prefix(i - 1),
                    })
                }
            }
        }
        let mut lower = Bound::NegInfinity;
        let mut upper = Bound::PosInfinity;
        let mut section = false;
        for r in roots.iter().flat_map(|(_, rs)| rs) {
            match r.compare(si) {
                std::cmp::Ordering::Equal => section = true,
                std::cmp::Ordering::Less => {
                    if lower.cmp_value(r) == std::cmp::Ordering::Less {
                        lower = Bound::Value(r.clone());
                    }
                }
                std::cmp::Ordering::Greater => {
                    if upper.cmp_value(r) == std::cmp::Ordering::Greater {
                        upper = Bound::Value(r.clone());
                    }
                }
            }
        }
        let interval = if section {
            Interval::Section(si.clone())
        } else {
            Interval::sector(lower, upper)
        };
        Ok(ImplicitCell {
            polys,
            sample,
            interval,
            roots,
        })
    }

    pub fn level(&self) -> usize {
        self.sample.level()
    }

    /// The level-0 placeholder returned when projecting level-1 cells.
    pub fn is_placeholder(&self) -> bool {
        self.level() == 0
    }

    /// Level-`i` members with their real roots over the sample prefix.
    pub fn top_roots(&self) -> &[(Polynomial, Vec<RealAlgebraic>)] {
        &self.roots
    }

    pub fn sotd(&self) -> u64 {
        self.polys.iter().map(|p| p.sum_of_total_degrees()).sum()
    }

    /// Indices into [`Self::top_roots`] of members vanishing at `b`.
    fn vanishing_at(&self, b: &Bound) -> Vec<usize> {
        let Some(v) = b.value() else {
            return Vec::new();
        };
        (0..self.roots.len())
            .filter(|&k| self.roots[k].1.iter().any(|r| r == v))
            .collect()
    }

    /// Members with a root at or below `b`, or at or above it when `below`
    /// is false.
    fn with_root(&self, b: &Bound, below: bool) -> Vec<usize> {
        let Some(v) = b.value() else {
            return Vec::new();
        };
        (0..self.roots.len())
            .filter(|&k| {
                self.roots[k].1.iter().any(|r| {
                    let o = r.compare(v);
                    o == std::cmp::Ordering::Equal || (o == std::cmp::Ordering::Less) == below
                })
            })
            .collect()
    }
}

impl fmt::Display for ImplicitCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{")?;
        for (k, p) in self.polys.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}, {}, {})", self.sample, self.interval)
    }
}

/// The maximal interval around the last sample coordinate on which the
/// level-`i` members of `polys` are sign-invariant.
pub fn compute_cell(s: &SamplePoint, polys: &[Polynomial]) -> Result<Interval, CellError> {
    ImplicitCell::new(polys.to_vec(), s.clone()).map(|c| c.interval)
}

/// A truth-invariant cell around a sample where the matrix is decided.
#[derive(Clone, Debug)]
pub struct EnclosingCell {
    pub value: bool,
    pub cell: ImplicitCell,
    pub implicant: Implicant,
    /// Number of candidate implicants found.
    pub candidates: usize,
}

/// Generalizes the sample `s` to a cell on which `matrix` keeps its truth
/// value; `None` if the implicant search cannot decide the matrix at `s`.
pub fn get_enclosing_cell(
    matrix: &Formula,
    s: &SamplePoint,
    cfg: &ImplicantConfig,
) -> Result<Option<EnclosingCell>, CellError> {
    let e = decide_and_explain(matrix, s, cfg);
    let (value, implicant) = match (e.value, e.implicant) {
        (TruthValue3::Undef, _) | (_, None) => return Ok(None),
        (v, Some(imp)) => (v == TruthValue3::True, imp),
    };
    let polys = refine_basis(implicant.polynomials().iter());
    let cell = ImplicitCell::new(polys, s.clone())?;
    Ok(Some(EnclosingCell {
        value,
        cell,
        implicant,
        candidates: e.candidates,
    }))
}

fn resultant_into(out: &mut Vec<Polynomial>, p: &Polynomial, q: &Polynomial, x: Var, projection: &mut Projection) {
    if p == q {
        return;
    }
    projection.resultants_computed += 1;
    out.push(resultant(p, q, x).expect("both polynomials have main variable x"));
}

/// The unrefined projection set of a cell of level `i + 1`.
fn projection_set(c: &ImplicitCell, projection: &mut Projection) -> Vec<Polynomial> {
    let i1 = c.level();
    let x = Var(i1 as u32);
    let mut out: Vec<Polynomial> = c.polys.iter().filter(|p| p.level() < i1).cloned().collect();
    for (p, _) in &c.roots {
        if p.degree(x) >= 2 {
            out.push(discriminant(p, x).expect("level-i polynomial"));
        }
        match projection.coefficients {
            CoefficientPolicy::All => out.extend(p.coefficients(x)),
            CoefficientPolicy::Required => {
                let below = &c.sample[..i1 - 1];
                for coeff in p.coefficients(x) {
                    let vanishes = sign_at(&coeff, below) == Sign::Zero;
                    out.push(coeff);
                    if !vanishes {
                        break;
                    }
                }
            }
        }
    }
    let lower = c.interval.lower();
    let upper = c.interval.upper();
    let at_lower = c.vanishing_at(&lower);
    let at_upper = c.vanishing_at(&upper);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for &p in &at_lower {
        pairs.extend(c.with_root(&lower, true).into_iter().map(|q| (p, q)));
        pairs.extend(at_upper.iter().map(|&q| (p, q)));
    }
    for &p in &at_upper {
        pairs.extend(c.with_root(&upper, false).into_iter().map(|q| (p, q)));
    }
    let mut pairs: Vec<(usize, usize)> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    pairs.sort();
    pairs.dedup();
    for (a, b) in pairs {
        resultant_into(&mut out, &c.roots[a].0, &c.roots[b].0, x, projection);
    }
    out
}

/// Projects a cell of level `i + 1` to a cell of level `i` over the sample
/// prefix; the matrix stays truth-invariant over the cylinder of the result
/// restricted to the original cell.
pub fn characterize_cell(c: &ImplicitCell, projection: &mut Projection) -> Result<ImplicitCell, CellError> {
    projection.cells_characterized += 1;
    let proj = projection_set(c, projection);
    let i = c.level() - 1;
    ImplicitCell::new(refine_basis(proj.iter()), c.sample.prefix(i))
}

/// Cells sorted by lower bound, none contained in another, jointly
/// covering the real line.
#[derive(Clone, Debug)]
pub struct CoveringSequence {
    pub cells: Vec<ImplicitCell>,
}

/// Drops redundant cells and sorts the rest; among cells with identical
/// intervals the one with the smallest sum of total degrees is kept.
pub fn compute_cover(cells: Vec<ImplicitCell>) -> Result<CoveringSequence, CellError> {
    let order = cover_indices(&cells)?;
    let mut slots: Vec<Option<ImplicitCell>> = cells.into_iter().map(Some).collect();
    Ok(CoveringSequence {
        cells: order.into_iter().map(|k| slots[k].take().unwrap()).collect(),
    })
}

/// Indices of the cells [`compute_cover`] keeps, in covering order.
pub fn cover_indices(cells: &[ImplicitCell]) -> Result<Vec<usize>, CellError> {
    let n = cells.len();
    let mut keep = vec![true; n];
    for k in 0..n {
        let redundant = (0..n).any(|j| {
            if j == k || !keep[j] || !interval_subset(&cells[k].interval, &cells[j].interval) {
                return false;
            }
            if !interval_subset(&cells[j].interval, &cells[k].interval) {
                return true;
            }
            (cells[j].sotd(), j) < (cells[k].sotd(), k)
        });
        if redundant {
            keep[k] = false;
        }
    }
    let mut kept: Vec<usize> = (0..n).filter(|&k| keep[k]).collect();
    kept.sort_by(|&a, &b| cover::cmp_intervals(&cells[a].interval, &cells[b].interval));
    if !covers_real_line(kept.iter().map(|&k| &cells[k].interval)) {
        return Err(CellError::NotCovering);
    }
    Ok(kept)
}

/// Re-expresses the level-`i + 1` members of all cells over one common
/// coprime basis so that resultants between cells are well defined.
fn common_basis(cells: Vec<ImplicitCell>) -> Result<Vec<ImplicitCell>, CellError> {
    let top: Vec<Polynomial> = cells
        .iter()
        .flat_map(|c| c.roots.iter().map(|(p, _)| p.clone()))
        .collect();
    let basis = refine_basis(top.iter());
    if top.iter().all(|p| basis.contains(p)) {
        return Ok(cells);
    }
    cells
        .into_iter()
        .map(|c| {
            let i1 = c.level();
            let mut polys: Vec<Polynomial> = c.polys.iter().filter(|p| p.level() < i1).cloned().collect();
            polys.extend(
                basis
                    .iter()
                    .filter(|b| c.roots.iter().any(|(p, _)| !gcd(b, p).is_constant()))
                    .cloned(),
            );
            ImplicitCell::new(polys, c.sample)
        })
        .collect()
}

/// Projects a covering of the cylinder over a sample of level `i` to a cell
/// of level `i`.
pub fn characterize_covering(
    cells: Vec<ImplicitCell>,
    projection: &mut Projection,
) -> Result<ImplicitCell, CellError> {
    let Some(first) = cells.first() else {
        return Err(CellError::NotCovering);
    };
    let i1 = first.level();
    let s = first.sample.prefix(i1 - 1);
    let seq = compute_cover(cells)?;
    let seq = common_basis(seq.cells)?;
    let x = Var(i1 as u32);
    let mut proj = Vec::new();
    for c in &seq {
        projection.cells_characterized += 1;
        proj.extend(projection_set(c, projection));
    }
    for w in seq.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        for p in a.vanishing_at(&a.interval.upper()) {
            for q in b.vanishing_at(&b.interval.lower()) {
                resultant_into(&mut proj, &a.roots[p].0, &b.roots[q].0, x, projection);
            }
        }
    }
    ImplicitCell::new(refine_basis(proj.iter()), s)
}

/// Describes the cell's interval by extended atoms over its basis: `ξ < x_i`
/// for the lower bound, `x_i < ξ` for the upper bound and `x_i = ξ` for a
/// section.
pub fn indexed_root_formula(c: &ImplicitCell) -> Formula {
    let x = Var(c.level() as u32);
    let atoms_at = |b: &Bound, rel: Rel| -> Vec<Formula> {
        let Some(v) = b.value() else {
            return Vec::new();
        };
        c.roots
            .iter()
            .filter_map(|(p, rs)| {
                rs.iter().position(|r| r == v).map(|k| {
                    Formula::Root(ExtendedAtom {
                        var: x,
                        rel,
                        root: IndexedRoot {
                            poly: p.clone(),
                            index: k + 1,
                        },
                    })
                })
            })
            .collect()
    };
    match &c.interval {
        Interval::Section(v) => Formula::and(atoms_at(&Bound::Value(v.clone()), Rel::Eq)),
        Interval::Sector { lower, upper } => {
            let mut parts = atoms_at(lower, Rel::Gt);
            parts.extend(atoms_at(upper, Rel::Lt));
            Formula::and(parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::evaluate_partial;
    use crate::poly::testing::{c, x};
    use crate::poly::Rational;

    fn int(n: i64) -> RealAlgebraic {
        RealAlgebraic::from_int(n)
    }

    fn sample(v: &[i64]) -> SamplePoint {
        v.iter().map(|n| int(*n)).collect::<Vec<_>>().into()
    }

    fn sqrt2() -> RealAlgebraic {
        crate::ralg::isolate_real_roots(&(&(&x(1) * &x(1)) - &c(2))).unwrap()[1].clone()
    }

    fn circle() -> Polynomial {
        &(&(&x(1) * &x(1)) + &(&x(2) * &x(2))) - &c(2)
    }

    #[test]
    fn paper_cell() {
        let p = vec![&x(2) + &c(1), circle(), &x(1) - &c(1)];
        let cell = ImplicitCell::new(p, sample(&[0, 0])).unwrap();
        assert_eq!(
            cell.interval,
            Interval::sector(Bound::Value(int(-1)), Bound::Value(sqrt2()))
        );
        assert_eq!(
            indexed_root_formula(&cell).to_string(),
            "root(x2 + 1, 1) < x2 ∧ x2 < root(x2^2 + x1^2 - 2, 2)"
        );
        assert_eq!(evaluate_partial(&indexed_root_formula(&cell), &sample(&[0, 0])), TruthValue3::True);
        assert_eq!(evaluate_partial(&indexed_root_formula(&cell), &sample(&[0, 2])), TruthValue3::False);
    }

    #[test]
    fn trivial_cells() {
        assert_eq!(compute_cell(&sample(&[0]), &[]).unwrap(), Interval::whole());
        let s: SamplePoint = vec![sqrt2()].into();
        let sec = compute_cell(&s, &[&(&x(1) * &x(1)) - &c(2)]).unwrap();
        assert_eq!(sec, Interval::Section(sqrt2()));
        let cell = ImplicitCell::new(vec![&(&x(1) * &x(1)) - &c(2)], s).unwrap();
        assert_eq!(indexed_root_formula(&cell).to_string(), "x1 = root(x1^2 - 2, 2)");
        assert!(matches!(
            compute_cell(&sample(&[0, 1]), &[&x(1) * &x(2)]),
            Err(CellError::Nullified { .. })
        ));
        let whole = ImplicitCell::new(vec![], sample(&[3])).unwrap();
        assert_eq!(indexed_root_formula(&whole), Formula::True);
    }

    #[test]
    fn enclosing_cells() {
        let cfg = ImplicantConfig::default();
        let m = Formula::and([
            Formula::constraint(&x(1) * &x(1), Rel::Gt),
            Formula::or([
                Formula::constraint(&x(1) - &c(2), Rel::Lt),
                Formula::constraint(&x(1) - &c(4), Rel::Gt),
            ]),
        ]);
        let e = get_enclosing_cell(&m, &sample(&[1]), &cfg).unwrap().unwrap();
        assert!(e.value);
        assert!(e.cell.polys.contains(&x(1)) && e.cell.polys.contains(&(&x(1) - &c(2))));
        assert_eq!(e.cell.interval, Interval::sector(Bound::Value(int(0)), Bound::Value(int(2))));
        let f = Formula::constraint(&x(1) * &x(1), Rel::Le);
        let e = get_enclosing_cell(&f, &sample(&[1]), &cfg).unwrap().unwrap();
        assert!(!e.value);
        assert_eq!(e.cell.polys, vec![x(1)]);
        assert_eq!(e.cell.interval, Interval::sector(Bound::Value(int(0)), Bound::PosInfinity));
        let undecided = Formula::constraint(x(2), Rel::Gt);
        assert!(get_enclosing_cell(&undecided, &sample(&[1]), &cfg).unwrap().is_none());
    }

    #[test]
    fn characterize_circle_cell() {
        let cell = ImplicitCell::new(vec![circle()], sample(&[0, 0])).unwrap();
        let mut st = Projection::default();
        let down = characterize_cell(&cell, &mut st).unwrap();
        assert_eq!(down.polys, vec![&(&x(1) * &x(1)) - &c(2)]);
        let neg = sqrt2().neg();
        assert_eq!(down.interval, Interval::sector(Bound::Value(neg), Bound::Value(sqrt2())));
        assert_eq!(st.cells_characterized, 1);

        let low = ImplicitCell::new(vec![&x(1) - &c(1)], sample(&[0, 0])).unwrap();
        let down = characterize_cell(&low, &mut st).unwrap();
        assert_eq!(down.polys, vec![&x(1) - &c(1)]);
        assert_eq!(down.interval, Interval::sector(Bound::NegInfinity, Bound::Value(int(1))));
    }

    fn cell_with(bounds: (Bound, Bound)) -> ImplicitCell {
        ImplicitCell {
            polys: Vec::new(),
            sample: sample(&[0]),
            interval: Interval::sector(bounds.0, bounds.1),
            roots: Vec::new(),
        }
    }

    #[test]
    fn cover_drops_contained_cells() {
        let q = |n: i64, d: i64| Bound::Value(RealAlgebraic::Rational(Rational::new(n.into(), d.into())));
        let cells = vec![
            cell_with((Bound::NegInfinity, q(1, 1))),
            cell_with((q(0, 1), q(2, 1))),
            cell_with((q(1, 2), q(3, 2))),
            cell_with((q(3, 2), Bound::PosInfinity)),
        ];
        let seq = compute_cover(cells).unwrap();
        let ivs: Vec<Interval> = seq.cells.iter().map(|c| c.interval.clone()).collect();
        assert_eq!(
            ivs,
            vec![
                Interval::sector(Bound::NegInfinity, q(1, 1)),
                Interval::sector(q(0, 1), q(2, 1)),
                Interval::sector(q(3, 2), Bound::PosInfinity),
            ]
        );
        assert_eq!(compute_cover(vec![cell_with((Bound::NegInfinity, Bound::PosInfinity))]).unwrap().cells.len(), 1);
        assert!(matches!(
            compute_cover(vec![cell_with((Bound::NegInfinity, q(0, 1)))]),
            Err(CellError::NotCovering)
        ));
    }

    #[test]
    fn boundary_resultant_of_coprime_linears_is_constant() {
        let below = ImplicitCell::new(vec![x(2)], sample(&[0, -3])).unwrap();
        let above = ImplicitCell::new(vec![&x(2) + &c(1)], sample(&[0, 5])).unwrap();
        let sec = ImplicitCell::new(vec![x(2)], sample(&[0, 0])).unwrap();
        let mut st = Projection::default();
        let top = characterize_covering(vec![below, sec, above], &mut st).unwrap();
        assert_eq!(st.resultants_computed, 1);
        assert!(top.polys.is_empty());
        assert_eq!(top.interval, Interval::whole());
        let whole = ImplicitCell::new(vec![], sample(&[0, 7])).unwrap();
        let top = characterize_covering(vec![whole], &mut st).unwrap();
        assert!(top.polys.is_empty());
        assert_eq!(top.interval, Interval::whole());
    }
}
