use std::fmt;

use crate::cells::ImplicitCell;
use crate::formula::{ExtendedAtom, Formula, IndexedRoot, Rel};
use crate::poly::Var;
use crate::ralg::{Bound, Interval};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    Leaf(bool),
    Inner(Vec<CoveringTree>),
}

/// A node of the parameter-space covering: an interval described by
/// extended atoms, and either a truth value or the covering above it.
///
/// Lower bounds are stored as `ξ < x` (sector) or `ξ <= x` (section), upper
/// bounds as `x < ξ` or `x <= ξ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringTree {
    pub lower: Vec<ExtendedAtom>,
    pub upper: Vec<ExtendedAtom>,
    pub label: Label,
}

impl CoveringTree {
    pub fn leaf(value: bool) -> Self {
        CoveringTree {
            lower: Vec::new(),
            upper: Vec::new(),
            label: Label::Leaf(value),
        }
    }

    pub fn inner(children: Vec<CoveringTree>) -> Self {
        CoveringTree {
            lower: Vec::new(),
            upper: Vec::new(),
            label: Label::Inner(children),
        }
    }

    /// A node whose interval is that of `cell`.
    pub fn for_cell(cell: &ImplicitCell, label: Label) -> Self {
        let x = Var(cell.level() as u32);
        let atoms = |b: &Bound, rel: Rel| -> Vec<ExtendedAtom> {
            let Some(v) = b.value() else {
                return Vec::new();
            };
            cell.top_roots()
                .iter()
                .filter_map(|(p, rs)| {
                    rs.iter().position(|r| r == v).map(|k| ExtendedAtom {
                        var: x,
                        rel,
                        root: IndexedRoot {
                            poly: p.clone(),
                            index: k + 1,
                        },
                    })
                })
                .collect()
        };
        let (lower, upper) = match &cell.interval {
            Interval::Section(v) => {
                let b = Bound::Value(v.clone());
                (atoms(&b, Rel::Ge), atoms(&b, Rel::Le))
            }
            Interval::Sector { lower, upper } => (atoms(lower, Rel::Gt), atoms(upper, Rel::Lt)),
        };
        CoveringTree { lower, upper, label }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.label, Label::Leaf(_))
    }

    /// The conjunction of the bounds; a matching pair of non-strict bounds
    /// prints as an equation.
    pub fn interval_formula(&self) -> Formula {
        let mut parts = Vec::new();
        let mut used = vec![false; self.upper.len()];
        for a in &self.lower {
            let twin = (a.rel == Rel::Ge)
                .then(|| {
                    self.upper
                        .iter()
                        .position(|b| b.rel == Rel::Le && b.root == a.root)
                })
                .flatten();
            match twin {
                Some(k) if !used[k] => {
                    used[k] = true;
                    parts.push(Formula::Root(ExtendedAtom {
                        rel: Rel::Eq,
                        ..a.clone()
                    }));
                }
                _ => parts.push(Formula::Root(a.clone())),
            }
        }
        for (b, u) in self.upper.iter().zip(used) {
            if !u {
                parts.push(Formula::Root(b.clone()));
            }
        }
        Formula::and(parts)
    }

    pub fn rename(&self, map: &dyn Fn(Var) -> Var) -> CoveringTree {
        let atoms = |v: &[ExtendedAtom]| -> Vec<ExtendedAtom> {
            v.iter()
                .map(|a| ExtendedAtom {
                    var: map(a.var),
                    rel: a.rel,
                    root: IndexedRoot {
                        poly: a.root.poly.rename(map),
                        index: a.root.index,
                    },
                })
                .collect()
        };
        CoveringTree {
            lower: atoms(&self.lower),
            upper: atoms(&self.upper),
            label: match &self.label {
                Label::Leaf(b) => Label::Leaf(*b),
                Label::Inner(cs) => Label::Inner(cs.iter().map(|c| c.rename(map)).collect()),
            },
        }
    }

    /// Number of leaves.
    pub fn leaves(&self) -> usize {
        match &self.label {
            Label::Leaf(_) => 1,
            Label::Inner(cs) => cs.iter().map(CoveringTree::leaves).sum(),
        }
    }
}

/// Merges neighbouring leaves with equal labels and lifts single leaf
/// children, bottom-up, until neither rule applies.
pub fn simplify_tree(t: &CoveringTree) -> CoveringTree {
    let Label::Inner(children) = &t.label else {
        return t.clone();
    };
    let mut out: Vec<CoveringTree> = Vec::new();
    for c in children.iter().map(simplify_tree) {
        match (out.last_mut(), &c.label) {
            (Some(prev), Label::Leaf(b)) if prev.label == Label::Leaf(*b) => {
                prev.upper = c.upper;
            }
            _ => out.push(c),
        }
    }
    if out.len() == 1 && out[0].is_leaf() {
        return CoveringTree {
            lower: t.lower.clone(),
            upper: t.upper.clone(),
            label: out.pop().unwrap().label,
        };
    }
    CoveringTree {
        lower: t.lower.clone(),
        upper: t.upper.clone(),
        label: Label::Inner(out),
    }
}

/// The set of points inside `t`'s interval where the tree's value is
/// `!negate`, encoding at every node whichever leaf side is smaller.
pub fn encode_tree(t: &CoveringTree, negate: bool) -> Formula {
    let want = !negate;
    let body = match &t.label {
        Label::Leaf(b) => {
            if *b == want {
                Formula::True
            } else {
                Formula::False
            }
        }
        Label::Inner(children) => {
            let count = |v: bool| children.iter().filter(|c| c.label == Label::Leaf(v)).count();
            let side = count(want) <= count(!want);
            let target = if side { want } else { !want };
            let parts = children.iter().filter_map(|c| match &c.label {
                Label::Leaf(b) if *b == target => Some(c.interval_formula()),
                Label::Leaf(_) => None,
                Label::Inner(_) => Some(encode_tree(c, !target)),
            });
            let d = Formula::or(parts.collect::<Vec<_>>());
            if side {
                d
            } else {
                Formula::not(d)
            }
        }
    };
    Formula::and([t.interval_formula(), body])
}

impl fmt::Display for CoveringTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &CoveringTree, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{:width$}{}", "", t.interval_formula(), width = 2 * depth)?;
            match &t.label {
                Label::Leaf(b) => writeln!(f, " : {b}"),
                Label::Inner(cs) => {
                    writeln!(f)?;
                    cs.iter().try_for_each(|c| go(c, depth + 1, f))
                }
            }
        }
        go(self, 0, f)
    }
}
