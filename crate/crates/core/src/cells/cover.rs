use std::cmp::Ordering;

use crate::ralg::{Bound, Interval, RealAlgebraic};

/// A maximal piece of the real line not covered by a set of intervals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gap {
    Point(RealAlgebraic),
    /// The open interval between the bounds.
    Open(Bound, Bound),
}

impl Gap {
    pub fn contains(&self, v: &RealAlgebraic) -> bool {
        match self {
            Gap::Point(p) => p == v,
            Gap::Open(l, u) => l.cmp_value(v) == Ordering::Less && u.cmp_value(v) == Ordering::Greater,
        }
    }
}

/// Sort order of covering sequences: by lower bound, sections before
/// sectors sharing their lower bound.
pub(crate) fn cmp_intervals(a: &Interval, b: &Interval) -> Ordering {
    a.lower()
        .cmp(&b.lower())
        .then(b.is_section().cmp(&a.is_section()))
        .then(a.upper().cmp(&b.upper()))
}

/// Whether `a ⊆ b`.
pub fn interval_subset(a: &Interval, b: &Interval) -> bool {
    match (a, b) {
        (Interval::Section(v), _) => b.contains(v),
        (Interval::Sector { .. }, Interval::Section(_)) => false,
        (Interval::Sector { lower: l1, upper: u1 }, Interval::Sector { lower: l2, upper: u2 }) => {
            l2 <= l1 && u1 <= u2
        }
    }
}

/// The uncovered parts of the real line, in increasing order.
pub fn gaps<'a>(intervals: impl IntoIterator<Item = &'a Interval>) -> Vec<Gap> {
    let mut sorted: Vec<&Interval> = intervals.into_iter().collect();
    sorted.sort_by(|a, b| cmp_intervals(a, b));
    let mut out = Vec::new();
    // everything below `reach` is covered; `closed` tells whether `reach` is
    let mut reach = Bound::NegInfinity;
    let mut closed = true;
    for iv in sorted {
        if reach == Bound::PosInfinity {
            break;
        }
        match iv {
            Interval::Section(v) => match reach.cmp_value(v) {
                Ordering::Less => {
                    if !closed {
                        out.push(Gap::Point(reach.value().unwrap().clone()));
                    }
                    out.push(Gap::Open(reach.clone(), Bound::Value(v.clone())));
                    reach = Bound::Value(v.clone());
                    closed = true;
                }
                Ordering::Equal => closed = true,
                Ordering::Greater => {}
            },
            Interval::Sector { lower, upper } => {
                match lower.cmp(&reach) {
                    Ordering::Greater => {
                        if !closed {
                            out.push(Gap::Point(reach.value().unwrap().clone()));
                        }
                        out.push(Gap::Open(reach.clone(), lower.clone()));
                        out.push(Gap::Point(lower.value().unwrap().clone()));
                    }
                    Ordering::Equal if !closed => out.push(Gap::Point(lower.value().unwrap().clone())),
                    _ => {}
                }
                if *upper > reach {
                    reach = upper.clone();
                    closed = false;
                }
            }
        }
    }
    if reach != Bound::PosInfinity {
        if !closed {
            out.push(Gap::Point(reach.value().unwrap().clone()));
        }
        out.push(Gap::Open(reach, Bound::PosInfinity));
    }
    out
}

pub fn covers_real_line<'a>(intervals: impl IntoIterator<Item = &'a Interval>) -> bool {
    gaps(intervals).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: i64) -> Bound {
        Bound::Value(RealAlgebraic::from_int(n))
    }

    fn sec(n: i64) -> Interval {
        Interval::Section(RealAlgebraic::from_int(n))
    }

    #[test]
    fn gaps_of_simple_sets() {
        assert_eq!(gaps([]), vec![Gap::Open(Bound::NegInfinity, Bound::PosInfinity)]);
        let split = [
            Interval::sector(Bound::NegInfinity, v(0)),
            Interval::sector(v(0), Bound::PosInfinity),
        ];
        assert_eq!(gaps(&split), vec![Gap::Point(RealAlgebraic::zero())]);
        let closed = [split[0].clone(), split[1].clone(), sec(0)];
        assert!(covers_real_line(&closed));
        let mid = [Interval::sector(v(-1), v(2))];
        assert_eq!(
            gaps(&mid),
            vec![
                Gap::Open(Bound::NegInfinity, v(-1)),
                Gap::Point(RealAlgebraic::from_int(-1)),
                Gap::Point(RealAlgebraic::from_int(2)),
                Gap::Open(v(2), Bound::PosInfinity),
            ]
        );
    }

    #[test]
    fn overlapping_sectors_cover() {
        let set = [
            Interval::sector(Bound::NegInfinity, v(1)),
            Interval::sector(v(0), v(3)),
            Interval::sector(v(2), Bound::PosInfinity),
        ];
        assert!(covers_real_line(&set));
        let holes = [
            Interval::sector(Bound::NegInfinity, v(1)),
            Interval::sector(v(1), v(3)),
            sec(3),
            Interval::sector(v(4), Bound::PosInfinity),
        ];
        assert_eq!(
            gaps(&holes),
            vec![
                Gap::Point(RealAlgebraic::from_int(1)),
                Gap::Open(v(3), v(4)),
                Gap::Point(RealAlgebraic::from_int(4)),
            ]
        );
    }

    #[test]
    fn subset_relation() {
        assert!(interval_subset(&sec(1), &Interval::sector(v(0), v(2))));
        assert!(!interval_subset(&sec(0), &Interval::sector(v(0), v(2))));
        assert!(interval_subset(&Interval::sector(v(0), v(1)), &Interval::whole()));
        assert!(!interval_subset(&Interval::whole(), &sec(0)));
    }
}
