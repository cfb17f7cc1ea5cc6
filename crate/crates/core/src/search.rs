//! Backtracking search for natural transformations.
//!
//! Variables are the elements `(o, x)` of the source presheaf; a value is an
//! element of the target at the same object. Assigning `(b, x) := v` forces
//! `(a, X(f) x) := Y(f) v` for every generating map `f: a -> b`, and the
//! forced values are propagated transitively. Naturality along generators
//! implies naturality along their composites, so a full assignment that
//! survives propagation is natural. Per-variable allowed sets express lifting and
//! endpoint constraints.
//!
//! Branching order: objects by decreasing size, then height, then index;
//! elements in canonical order. Larger objects carry the generating
//! elements, so one branch usually fixes many restrictions at once.

use crate::error::{Error, Result};
use crate::presheaf::{same_site, NatTrans, Presheaf};
use crate::site::ObjId;

pub const DEFAULT_SOLVER_BUDGET: u64 = 1_000_000;

const NONE: usize = usize::MAX;

/// Components of a natural transformation, `[object][element]`.
pub type Components = Vec<Vec<usize>>;

pub struct MapSearch<'a> {
    src: &'a Presheaf,
    dst: &'a Presheaf,
    /// Sorted allowed values per variable; `None` means unrestricted.
    allowed: Vec<Vec<Option<Vec<usize>>>>,
    order: Vec<(ObjId, usize)>,
    budget: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub solutions: Vec<Components>,
    /// Candidate values that agreed with their assigned neighbours and were
    /// propagated.
    pub nodes: u64,
}

impl<'a> MapSearch<'a> {
    pub fn new(src: &'a Presheaf, dst: &'a Presheaf, budget: u64) -> Result<Self> {
        if !same_site(src.site(), dst.site()) {
            return Err(Error::SiteMismatch);
        }
        let site = src.site();
        let mut objs: Vec<ObjId> = (0..site.num_objects()).collect();
        objs.sort_by_key(|&o| {
            let l = site.object(o);
            (std::cmp::Reverse(l.size()), std::cmp::Reverse(l.height()), o)
        });
        let order = objs
            .iter()
            .flat_map(|&o| (0..src.size(o)).map(move |x| (o, x)))
            .collect();
        let allowed = (0..site.num_objects()).map(|o| vec![None; src.size(o)]).collect();
        Ok(MapSearch { src, dst, allowed, order, budget })
    }

    /// Restricts the values of `(o, x)` to `values` (intersecting with any
    /// earlier restriction).
    pub fn restrict(&mut self, o: ObjId, x: usize, mut values: Vec<usize>) {
        values.sort_unstable();
        values.dedup();
        let slot = &mut self.allowed[o][x];
        *slot = Some(match slot.take() {
            None => values,
            Some(prev) => prev.into_iter().filter(|v| values.binary_search(v).is_ok()).collect(),
        });
    }

    pub fn fix(&mut self, o: ObjId, x: usize, v: usize) {
        self.restrict(o, x, vec![v]);
    }

    pub fn find_first(&self) -> Result<(Option<Components>, u64)> {
        let mut out = self.run(Some(1))?;
        Ok((out.solutions.pop(), out.nodes))
    }

    /// Every solution, sorted lexicographically by components.
    pub fn enumerate(&self) -> Result<SearchOutcome> {
        let mut out = self.run(None)?;
        out.solutions.sort();
        Ok(out)
    }

    fn run(&self, limit: Option<usize>) -> Result<SearchOutcome> {
        let site = self.src.site();
        let mut st = State {
            val: (0..site.num_objects()).map(|o| vec![NONE; self.src.size(o)]).collect(),
            trail: Vec::new(),
            nodes: 0,
            solutions: Vec::new(),
        };
        if self.allowed.iter().flatten().any(|a| matches!(a, Some(v) if v.is_empty())) {
            return Ok(SearchOutcome { solutions: Vec::new(), nodes: 0 });
        }
        // Singleton restrictions are applied up front.
        for (o, row) in self.allowed.iter().enumerate() {
            for (x, a) in row.iter().enumerate() {
                if let Some(v) = a {
                    if v.len() == 1 && !self.assign(&mut st, o, x, v[0]) {
                        return Ok(SearchOutcome { solutions: Vec::new(), nodes: 0 });
                    }
                }
            }
        }
        self.dfs(&mut st, 0, limit)?;
        Ok(SearchOutcome { solutions: st.solutions, nodes: st.nodes })
    }

    fn dfs(&self, st: &mut State, mut pos: usize, limit: Option<usize>) -> Result<bool> {
        while pos < self.order.len() && st.val[self.order[pos].0][self.order[pos].1] != NONE {
            pos += 1;
        }
        if pos == self.order.len() {
            st.solutions.push(st.val.clone());
            return Ok(limit.is_some_and(|l| st.solutions.len() >= l));
        }
        let (o, x) = self.order[pos];
        let candidates: Box<dyn Iterator<Item = usize>> = match &self.allowed[o][x] {
            Some(v) => Box::new(v.clone().into_iter()),
            None => Box::new(0..self.dst.size(o)),
        };
        for v in candidates {
            if !self.locally_consistent(st, o, x, v) {
                continue;
            }
            st.nodes += 1;
            if st.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    what: "searching natural transformations",
                    budget: self.budget,
                });
            }
            let mark = st.trail.len();
            if self.assign(st, o, x, v) && self.dfs(st, pos + 1, limit)? {
                return Ok(true);
            }
            st.undo(mark);
        }
        Ok(false)
    }

    /// Agreement with already assigned restrictions along generators.
    fn locally_consistent(&self, st: &State, o: ObjId, x: usize, v: usize) -> bool {
        let site = self.src.site();
        site.generators_into(o).iter().all(|&f| {
            let a = site.map(f).src;
            let cur = st.val[a][self.src.act(f, x)];
            cur == NONE || cur == self.dst.act(f, v)
        })
    }

    fn allowed_value(&self, o: ObjId, x: usize, v: usize) -> bool {
        match &self.allowed[o][x] {
            None => true,
            Some(vals) => vals.binary_search(&v).is_ok(),
        }
    }

    fn assign(&self, st: &mut State, o: ObjId, x: usize, v: usize) -> bool {
        let site = self.src.site();
        let mut stack = vec![(o, x, v)];
        while let Some((o, x, v)) = stack.pop() {
            let cur = st.val[o][x];
            if cur != NONE {
                if cur != v {
                    return false;
                }
                continue;
            }
            if !self.allowed_value(o, x, v) {
                return false;
            }
            st.val[o][x] = v;
            st.trail.push((o, x));
            for &f in site.generators_into(o) {
                let a = site.map(f).src;
                stack.push((a, self.src.act(f, x), self.dst.act(f, v)));
            }
        }
        true
    }
}

struct State {
    val: Components,
    trail: Vec<(ObjId, usize)>,
    nodes: u64,
    solutions: Vec<Components>,
}

impl State {
    fn undo(&mut self, mark: usize) {
        for (o, x) in self.trail.drain(mark..) {
            self.val[o][x] = NONE;
        }
    }
}

/// Every natural transformation `x -> y`, in canonical (lexicographic) order.
pub fn nat_trans_enumerate(x: &Presheaf, y: &Presheaf, budget: u64) -> Result<Vec<NatTrans>> {
    Ok(nat_trans_components(x, y, budget)?
        .into_iter()
        .map(|c| NatTrans::from_parts(x.clone(), y.clone(), c))
        .collect())
}

pub fn nat_trans_components(x: &Presheaf, y: &Presheaf, budget: u64) -> Result<Vec<Components>> {
    Ok(MapSearch::new(x, y, budget)?.enumerate()?.solutions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{cube, ordinal};
    use crate::presheaf::{nerve, simp_representable, simplex_site};
    use crate::site::Site;
    use std::sync::Arc;

    #[test]
    fn maps_out_of_initial() {
        let s = simplex_site(2).unwrap();
        let init = Presheaf::initial(&s);
        let d1 = simp_representable(&s, 1).unwrap();
        assert_eq!(nat_trans_enumerate(&init, &d1, 1000).unwrap().len(), 1);
        assert_eq!(nat_trans_enumerate(&d1, &init, 1000).unwrap().len(), 0);
    }

    #[test]
    fn vertices_of_interval_nerve() {
        let s = simplex_site(3).unwrap();
        let d0 = simp_representable(&s, 0).unwrap();
        let ni = nerve(&ordinal(1), &s).unwrap();
        assert_eq!(nat_trans_enumerate(&d0, &ni, 1000).unwrap().len(), 2);
    }

    #[test]
    fn nerve_is_full_and_faithful_on_small_lattices() {
        let s = simplex_site(3).unwrap();
        let ni = nerve(&ordinal(1), &s).unwrap();
        let n2 = nerve(&cube(2), &s).unwrap();
        assert_eq!(nat_trans_enumerate(&ni, &n2, 100_000).unwrap().len(), 9);
        assert_eq!(nat_trans_enumerate(&n2, &n2, 100_000).unwrap().len(), 36);
    }

    #[test]
    fn yoneda_counts_on_window() {
        let w = Arc::new(Site::default_window().unwrap());
        let i2 = w.find_object(&cube(2)).unwrap();
        let x = Presheaf::representable(&w, i2);
        for o in 0..w.num_objects() {
            let y = Presheaf::representable(&w, o);
            let maps = nat_trans_enumerate(&y, &x, 1_000_000).unwrap();
            assert_eq!(maps.len(), x.size(o));
            for m in &maps {
                m.check_naturality().unwrap();
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = simplex_site(3).unwrap();
        let n2 = nerve(&cube(2), &s).unwrap();
        let err = nat_trans_enumerate(&n2, &n2, 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
