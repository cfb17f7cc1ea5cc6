//! Lifting problems
//!
//! ```text
//!   A --top--> X
//!   |          |
//!   m          f
//!   v          v
//!   B -bottom> Y
//! ```
//!
//! solved by searching for a diagonal `d: B -> X` whose values over each
//! `b` lie in the fibre of `f` over `bottom(b)` and which extends `top`.

use std::fmt;

use crate::error::{Error, Result};
use crate::presheaf::NatTrans;
use crate::search::{Components, MapSearch};

#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: NatTrans,
    pub right: NatTrans,
    pub top: NatTrans,
    pub bottom: NatTrans,
}

impl LiftingProblem {
    pub fn new(left: NatTrans, right: NatTrans, top: NatTrans, bottom: NatTrans) -> Result<Self> {
        if top.src() != left.src()
            || bottom.src() != left.dst()
            || top.dst() != right.src()
            || bottom.dst() != right.dst()
        {
            return Err(Error::Invalid("lifting square has mismatched corners".into()));
        }
        if !left.is_mono() {
            return Err(Error::Invalid("left side of a lifting problem must be mono".into()));
        }
        let p = LiftingProblem { left, right, top, bottom };
        if let Some((o, a)) = p.commutation_failure() {
            return Err(Error::NotCommuting { object: o, element: a });
        }
        Ok(p)
    }

    fn commutation_failure(&self) -> Option<(usize, usize)> {
        let a = self.left.src();
        (0..a.site().num_objects()).find_map(|o| {
            (0..a.size(o))
                .find(|&x| {
                    self.right.apply(o, self.top.apply(o, x))
                        != self.bottom.apply(o, self.left.apply(o, x))
                })
                .map(|x| (o, x))
        })
    }

    /// Does `d` solve the problem?
    pub fn is_solution(&self, d: &NatTrans) -> bool {
        d.check_naturality().is_ok()
            && d.src() == self.left.dst()
            && d.dst() == self.right.src()
            && self.left.then(d).is_ok_and(|c| c.components() == self.top.components())
            && d.then(&self.right).is_ok_and(|c| c.components() == self.bottom.components())
    }
}

#[derive(Clone, Debug)]
pub enum LiftOutcome {
    Found(NatTrans),
    /// Exhaustive search found no diagonal; `searched` counts tried values.
    NoLift { searched: u64 },
}

impl LiftOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, LiftOutcome::Found(_))
    }
}

/// `fibres[o][y]`: elements of `f.src()(o)` over `y`.
pub(crate) fn fibres(f: &NatTrans) -> Vec<Vec<Vec<usize>>> {
    let x = f.src();
    let y = f.dst();
    (0..x.site().num_objects())
        .map(|o| {
            let mut fib = vec![Vec::new(); y.size(o)];
            for e in 0..x.size(o) {
                fib[f.apply(o, e)].push(e);
            }
            fib
        })
        .collect()
}

pub fn solve_lifting(p: &LiftingProblem, budget: u64) -> Result<LiftOutcome> {
    solve_with_fibres(p, &fibres(&p.right), budget)
}

pub(crate) fn solve_with_fibres(
    p: &LiftingProblem,
    fib: &[Vec<Vec<usize>>],
    budget: u64,
) -> Result<LiftOutcome> {
    let b = p.left.dst();
    let mut search = MapSearch::new(b, p.right.src(), budget)?;
    for o in 0..b.site().num_objects() {
        for e in 0..b.size(o) {
            search.restrict(o, e, fib[o][p.bottom.apply(o, e)].clone());
        }
        for a in 0..p.left.src().size(o) {
            search.fix(o, p.left.apply(o, a), p.top.apply(o, a));
        }
    }
    let (found, nodes) = search.find_first()?;
    match found {
        None => Ok(LiftOutcome::NoLift { searched: nodes }),
        Some(comps) => {
            let d = NatTrans::from_parts(b.clone(), p.right.src().clone(), comps);
            if !p.is_solution(&d) {
                return Err(Error::Invalid("solver returned a diagonal that is not a lift".into()));
            }
            Ok(LiftOutcome::Found(d))
        }
    }
}

/// Components as `v,v,..|v,..`, one block per object.
pub fn dump_components(c: &Components) -> String {
    c.iter()
        .map(|lvl| lvl.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

/// A lifting verdict ready for serialisation.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub id: String,
    pub outcome: LiftOutcome,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            LiftOutcome::Found(d) => {
                write!(f, "lift {} found {}", self.id, dump_components(&d.components().to_vec()))
            }
            LiftOutcome::NoLift { searched } => {
                write!(f, "lift {} none searched={}", self.id, searched)
            }
        }
    }
}
