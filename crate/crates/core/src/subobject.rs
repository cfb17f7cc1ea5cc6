//! Sub-presheaves: levelwise subsets closed under restriction.

use crate::error::{Error, Result};
use crate::presheaf::{NatTrans, Presheaf};
use crate::site::ObjId;

pub const DEFAULT_SUBOBJECT_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subobject {
    parent: Presheaf,
    members: Vec<Vec<bool>>,
}

impl Subobject {
    pub fn new(parent: &Presheaf, members: Vec<Vec<bool>>) -> Result<Self> {
        let s = Subobject { parent: parent.clone(), members };
        if s.members.len() != parent.site().num_objects()
            || s.members.iter().enumerate().any(|(o, m)| m.len() != parent.size(o))
        {
            return Err(Error::Invalid("subobject shape mismatch".into()));
        }
        let site = parent.site();
        for f in 0..site.num_maps() {
            let m = site.map(f);
            for x in 0..parent.size(m.dst) {
                if s.members[m.dst][x] && !s.members[m.src][parent.act(f, x)] {
                    return Err(Error::Invalid(format!(
                        "subset not closed under map {f} at element {x}"
                    )));
                }
            }
        }
        Ok(s)
    }

    pub fn empty(parent: &Presheaf) -> Self {
        let members = parent.sizes().iter().map(|&n| vec![false; n]).collect();
        Subobject { parent: parent.clone(), members }
    }

    pub fn full(parent: &Presheaf) -> Self {
        let members = parent.sizes().iter().map(|&n| vec![true; n]).collect();
        Subobject { parent: parent.clone(), members }
    }

    /// The smallest subobject containing the given elements.
    pub fn generated(parent: &Presheaf, gens: &[(ObjId, usize)]) -> Self {
        let mut s = Self::empty(parent);
        let site = parent.site();
        for &(o, x) in gens {
            s.members[o][x] = true;
            for a in 0..site.num_objects() {
                for &f in site.hom(a, o) {
                    s.members[a][parent.act(f, x)] = true;
                }
            }
        }
        s
    }

    /// Image of a natural transformation.
    pub fn image(t: &NatTrans) -> Self {
        let mut s = Self::empty(t.dst());
        for (o, c) in t.components().iter().enumerate() {
            for &v in c {
                s.members[o][v] = true;
            }
        }
        s
    }

    pub fn parent(&self) -> &Presheaf {
        &self.parent
    }

    pub fn contains(&self, o: ObjId, x: usize) -> bool {
        self.members[o][x]
    }

    pub fn members(&self) -> &[Vec<bool>] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.members.iter().flatten().filter(|&&b| b).count()
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().flatten().all(|&b| b)
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().flatten().all(|&b| !b)
    }

    pub fn is_subset_of(&self, other: &Subobject) -> bool {
        self.members
            .iter()
            .flatten()
            .zip(other.members.iter().flatten())
            .all(|(&a, &b)| !a || b)
    }

    fn zip_with(&self, other: &Subobject, f: impl Fn(bool, bool) -> bool) -> Result<Subobject> {
        if self.parent != other.parent {
            return Err(Error::Invalid("subobjects of different presheaves".into()));
        }
        let members = self
            .members
            .iter()
            .zip(&other.members)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Ok(Subobject { parent: self.parent.clone(), members })
    }

    pub fn union(&self, other: &Subobject) -> Result<Subobject> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Subobject) -> Result<Subobject> {
        self.zip_with(other, |a, b| a && b)
    }

    /// The subobject as a presheaf in its own right (elements renumbered in
    /// ascending parent order) with its inclusion.
    pub fn to_presheaf(&self) -> (Presheaf, NatTrans) {
        let site = self.parent.site();
        let elems: Vec<Vec<usize>> = self
            .members
            .iter()
            .map(|m| m.iter().enumerate().filter(|(_, &b)| b).map(|(x, _)| x).collect())
            .collect();
        let mut index: Vec<Vec<usize>> =
            self.parent.sizes().iter().map(|&n| vec![usize::MAX; n]).collect();
        for (o, es) in elems.iter().enumerate() {
            for (i, &x) in es.iter().enumerate() {
                index[o][x] = i;
            }
        }
        let action = (0..site.num_maps())
            .map(|f| {
                let m = site.map(f);
                elems[m.dst].iter().map(|&x| index[m.src][self.parent.act(f, x)]).collect()
            })
            .collect();
        let sizes = elems.iter().map(Vec::len).collect();
        let sub = Presheaf::from_parts(site.clone(), sizes, action)
            .with_skeletal(self.parent.is_skeletal());
        let incl = NatTrans::from_parts(sub.clone(), self.parent.clone(), elems);
        (sub, incl)
    }

    /// Inverse image along `t: X -> self.parent`.
    pub fn pullback_along(&self, t: &NatTrans) -> Result<Subobject> {
        if *t.dst() != self.parent {
            return Err(Error::Invalid("pullback target mismatch".into()));
        }
        let members = t
            .components()
            .iter()
            .enumerate()
            .map(|(o, c)| c.iter().map(|&v| self.members[o][v]).collect())
            .collect();
        Ok(Subobject { parent: t.src().clone(), members })
    }
}

/// Flat indexing of all elements of a presheaf.
struct Flat {
    offsets: Vec<usize>,
    down: Vec<Vec<usize>>,
    up: Vec<Vec<usize>>,
}

impl Flat {
    fn new(x: &Presheaf) -> Self {
        let site = x.site();
        let mut offsets = Vec::with_capacity(site.num_objects());
        let mut total = 0;
        for o in 0..site.num_objects() {
            offsets.push(total);
            total += x.size(o);
        }
        let mut down = vec![Vec::new(); total];
        for o in 0..site.num_objects() {
            for e in 0..x.size(o) {
                let mut d: Vec<usize> = (0..site.num_objects())
                    .flat_map(|a| site.hom(a, o).iter().map(move |&f| (a, f)))
                    .map(|(a, f)| offsets[a] + x.act(f, e))
                    .collect();
                d.sort_unstable();
                d.dedup();
                down[offsets[o] + e] = d;
            }
        }
        let mut up = vec![Vec::new(); total];
        for (i, d) in down.iter().enumerate() {
            for &j in d {
                up[j].push(i);
            }
        }
        Flat { offsets, down, up }
    }
}

/// Every subobject of `x`, starting from the empty one, in a fixed order.
/// Fails with `BudgetExceeded` once more than `cap` are found.
pub fn subobject_enumerate(x: &Presheaf, cap: usize) -> Result<Vec<Subobject>> {
    let (subs, complete) = subobject_enumerate_bounded(x, cap)?;
    if complete {
        Ok(subs)
    } else {
        Err(Error::BudgetExceeded { what: "enumerating subobjects", budget: cap as u64 })
    }
}

/// Like [`subobject_enumerate`] but returns the first `cap` subobjects and a
/// completeness flag instead of failing.
pub fn subobject_enumerate_bounded(x: &Presheaf, cap: usize) -> Result<(Vec<Subobject>, bool)> {
    let flat = Flat::new(x);
    let total = flat.down.len();
    // 0 unknown, 1 out, 2 in
    let mut state = vec![0u8; total];
    let mut out = Vec::new();
    let complete = enumerate_downsets(&flat, &mut state, 0, x, cap, &mut out);
    Ok((out, complete))
}

fn enumerate_downsets(
    flat: &Flat,
    state: &mut Vec<u8>,
    from: usize,
    x: &Presheaf,
    cap: usize,
    out: &mut Vec<Subobject>,
) -> bool {
    let Some(i) = (from..state.len()).find(|&i| state[i] == 0) else {
        if out.len() >= cap {
            return false;
        }
        let members = x
            .sizes()
            .iter()
            .enumerate()
            .map(|(o, &n)| (0..n).map(|e| state[flat.offsets[o] + e] == 2).collect())
            .collect();
        out.push(Subobject { parent: x.clone(), members });
        return true;
    };
    // Both branches are always consistent: an undecided element has no
    // excluded restriction and no included extension.
    for (mark, closure) in [(1u8, &flat.up[i]), (2u8, &flat.down[i])] {
        let changed: Vec<usize> = closure.iter().copied().filter(|&j| state[j] == 0).collect();
        for &j in &changed {
            state[j] = mark;
        }
        let ok = enumerate_downsets(flat, state, i + 1, x, cap, out);
        for &j in &changed {
            state[j] = 0;
        }
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{simp_representable, simplex_site};

    /// Independent count: filter every levelwise subset for closure.
    fn brute_force_count(x: &Presheaf) -> usize {
        let total = x.total_size();
        assert!(total <= 20);
        let site = x.site();
        let offsets: Vec<usize> = (0..site.num_objects())
            .scan(0, |acc, o| {
                let v = *acc;
                *acc += x.size(o);
                Some(v)
            })
            .collect();
        (0u32..1 << total)
            .filter(|mask| {
                site.maps().iter().enumerate().all(|(f, m)| {
                    (0..x.size(m.dst)).all(|e| {
                        mask >> (offsets[m.dst] + e) & 1 == 0
                            || mask >> (offsets[m.src] + x.act(f, e)) & 1 == 1
                    })
                })
            })
            .count()
    }

    #[test]
    fn terminal_has_two_subobjects() {
        let s = simplex_site(1).unwrap();
        let t = Presheaf::terminal(&s);
        assert_eq!(subobject_enumerate(&t, 100).unwrap().len(), 2);
    }

    #[test]
    fn subobjects_of_delta1() {
        let s = simplex_site(1).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let subs = subobject_enumerate(&d1, 100).unwrap();
        assert_eq!(subs.len(), brute_force_count(&d1));
        // empty, {0}, {1}, {0,1}, whole
        assert_eq!(subs.len(), 5);
        assert!(subs[0].is_empty());
    }

    #[test]
    fn counts_agree_with_brute_force() {
        let s = simplex_site(1).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let (p, _, _) = Presheaf::product(&d1, &d1).unwrap();
        // 4 + 9 elements at D = 1
        assert_eq!(subobject_enumerate(&p, 10_000).unwrap().len(), brute_force_count(&p));
    }

    #[test]
    fn union_of_vertices_is_boundary() {
        let s = simplex_site(2).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let v0 = Subobject::generated(&d1, &[(0, 0)]);
        let v1 = Subobject::generated(&d1, &[(0, 1)]);
        let b = v0.union(&v1).unwrap();
        let (bp, incl) = b.to_presheaf();
        assert_eq!(bp.size(0), 2);
        assert!(bp.nondegenerate(1).is_empty());
        assert!(incl.is_mono());
        incl.check_naturality().unwrap();
        assert!(v0.intersection(&v1).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let s = simplex_site(2).unwrap();
        let d2 = simp_representable(&s, 2).unwrap();
        assert!(matches!(subobject_enumerate(&d2, 3), Err(Error::BudgetExceeded { .. })));
        let (first, complete) = subobject_enumerate_bounded(&d2, 3).unwrap();
        assert_eq!(first.len(), 3);
        assert!(!complete);
    }
}
