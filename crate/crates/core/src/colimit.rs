//! Finite limits and colimits of presheaf diagrams, computed levelwise.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::presheaf::{same_site, NatTrans, Presheaf};
use crate::site::SiteRef;

/// Union-find whose class representative is always the least member.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class index of every member, classes numbered by ascending
    /// representative; also returns the representatives.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut reps = Vec::new();
        let mut class_of_root = vec![usize::MAX; n];
        let mut class = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = reps.len();
                reps.push(r);
            }
            class[x] = class_of_root[r];
        }
        (class, reps)
    }
}

/// A finite diagram of presheaves on one site.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub site: SiteRef,
    pub nodes: Vec<Presheaf>,
    pub arrows: Vec<(usize, usize, NatTrans)>,
}

impl Diagram {
    pub fn new(site: &SiteRef) -> Self {
        Diagram { site: site.clone(), nodes: Vec::new(), arrows: Vec::new() }
    }

    pub fn node(&mut self, p: &Presheaf) -> usize {
        self.nodes.push(p.clone());
        self.nodes.len() - 1
    }

    pub fn arrow(&mut self, from: usize, to: usize, t: &NatTrans) -> Result<()> {
        if *t.src() != self.nodes[from] || *t.dst() != self.nodes[to] {
            return Err(Error::Invalid("arrow endpoints do not match diagram nodes".into()));
        }
        self.arrows.push((from, to, t.clone()));
        Ok(())
    }

    fn check(&self) -> Result<()> {
        if self.nodes.iter().any(|p| !same_site(p.site(), &self.site)) {
            return Err(Error::SiteMismatch);
        }
        Ok(())
    }
}

/// Apex with one leg per diagram node.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Presheaf,
    pub legs: Vec<NatTrans>,
}

/// Levelwise quotient of the coproduct by the arrows' relations. Classes are
/// numbered by their least member in coproduct order.
pub fn finite_colimit(d: &Diagram) -> Result<Cone> {
    d.check()?;
    let site = &d.site;
    let n = site.num_objects();
    let mut offsets = vec![vec![0; n]; d.nodes.len()];
    let mut totals = vec![0; n];
    for (i, p) in d.nodes.iter().enumerate() {
        for o in 0..n {
            offsets[i][o] = totals[o];
            totals[o] += p.size(o);
        }
    }
    let mut class = Vec::with_capacity(n);
    let mut reps = Vec::with_capacity(n);
    for o in 0..n {
        let mut uf = UnionFind::new(totals[o]);
        for (i, j, t) in &d.arrows {
            for x in 0..d.nodes[*i].size(o) {
                uf.union(offsets[*i][o] + x, offsets[*j][o] + t.apply(o, x));
            }
        }
        let (c, r) = uf.classes();
        class.push(c);
        reps.push(r);
    }
    // Which node owns a coproduct position.
    let locate = |o: usize, pos: usize| -> (usize, usize) {
        let i = (0..d.nodes.len()).rev().find(|&i| offsets[i][o] <= pos && d.nodes[i].size(o) > pos - offsets[i][o]).unwrap();
        (i, pos - offsets[i][o])
    };
    let action = (0..site.num_maps())
        .map(|f| {
            let m = site.map(f);
            reps[m.dst]
                .iter()
                .map(|&r| {
                    let (i, x) = locate(m.dst, r);
                    class[m.src][offsets[i][m.src] + d.nodes[i].act(f, x)]
                })
                .collect()
        })
        .collect();
    let sizes = reps.iter().map(Vec::len).collect();
    let skeletal = d.nodes.iter().all(|p| p.is_skeletal());
    let apex = Presheaf::from_parts(site.clone(), sizes, action).with_skeletal(skeletal);
    let legs = d
        .nodes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let comps = (0..n)
                .map(|o| (0..p.size(o)).map(|x| class[o][offsets[i][o] + x]).collect())
                .collect();
            NatTrans::from_parts(p.clone(), apex.clone(), comps)
        })
        .collect();
    Ok(Cone { apex, legs })
}

/// Levelwise compatible tuples, in lexicographic order.
pub fn finite_limit(d: &Diagram) -> Result<Cone> {
    d.check()?;
    let site = &d.site;
    let n = site.num_objects();
    let k = d.nodes.len();
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
    for o in 0..n {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        limit_tuples(d, o, &mut cur, &mut out);
        tuples.push(out);
    }
    let index: Vec<HashMap<&[usize], usize>> = tuples
        .iter()
        .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
        .collect();
    let action = (0..site.num_maps())
        .map(|f| {
            let m = site.map(f);
            tuples[m.dst]
                .iter()
                .map(|t| {
                    let r: Vec<usize> = t.iter().enumerate().map(|(i, &x)| d.nodes[i].act(f, x)).collect();
                    index[m.src][r.as_slice()]
                })
                .collect()
        })
        .collect();
    let sizes = tuples.iter().map(Vec::len).collect();
    let apex = Presheaf::from_parts(site.clone(), sizes, action);
    let legs = d
        .nodes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let comps = (0..n).map(|o| tuples[o].iter().map(|t| t[i]).collect()).collect();
            NatTrans::from_parts(apex.clone(), p.clone(), comps)
        })
        .collect();
    Ok(Cone { apex, legs })
}

fn limit_tuples(d: &Diagram, o: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let i = cur.len();
    if i == d.nodes.len() {
        out.push(cur.clone());
        return;
    }
    for x in 0..d.nodes[i].size(o) {
        cur.push(x);
        let ok = d.arrows.iter().all(|(a, b, t)| {
            let (a, b) = (*a, *b);
            a.max(b) != i || t.apply(o, cur[a]) == cur[b]
        });
        if ok {
            limit_tuples(d, o, cur, out);
        }
        cur.pop();
    }
}

/// Pullback of `f: X -> Z` and `g: Y -> Z`; legs to `X` and `Y`.
pub fn pullback(f: &NatTrans, g: &NatTrans) -> Result<(Presheaf, NatTrans, NatTrans)> {
    if f.dst() != g.dst() {
        return Err(Error::Invalid("pullback legs need a common target".into()));
    }
    let mut d = Diagram::new(f.src().site());
    let x = d.node(f.src());
    let y = d.node(g.src());
    let z = d.node(f.dst());
    d.arrow(x, z, f)?;
    d.arrow(y, z, g)?;
    let mut cone = finite_limit(&d)?;
    cone.legs.truncate(2);
    let q = cone.legs.pop().unwrap();
    let p = cone.legs.pop().unwrap();
    Ok((cone.apex, p, q))
}

/// Coequalizer of `f, g: X -> Y` with its quotient map.
pub fn coequalizer(f: &NatTrans, g: &NatTrans) -> Result<(Presheaf, NatTrans)> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(Error::Invalid("coequalizer needs parallel maps".into()));
    }
    let mut d = Diagram::new(f.src().site());
    let x = d.node(f.src());
    let y = d.node(f.dst());
    d.arrow(x, y, f)?;
    d.arrow(x, y, g)?;
    let cone = finite_colimit(&d)?;
    Ok((cone.apex, cone.legs[1].clone()))
}

/// Pushout of `f: X -> Y` and `g: X -> Z`; legs from `Y` and `Z`.
pub fn pushout(f: &NatTrans, g: &NatTrans) -> Result<(Presheaf, NatTrans, NatTrans)> {
    if f.src() != g.src() {
        return Err(Error::Invalid("pushout legs need a common source".into()));
    }
    let mut d = Diagram::new(f.src().site());
    let x = d.node(f.src());
    let y = d.node(f.dst());
    let z = d.node(g.dst());
    d.arrow(x, y, f)?;
    d.arrow(x, z, g)?;
    let cone = finite_colimit(&d)?;
    Ok((cone.apex, cone.legs[1].clone(), cone.legs[2].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::{simp_representable, simplex_site};

    fn vertex(s: &SiteRef, target: &Presheaf, v: usize) -> NatTrans {
        NatTrans::yoneda(s, 0, target, v)
    }

    #[test]
    fn empty_colimit_is_initial() {
        let s = simplex_site(2).unwrap();
        let cone = finite_colimit(&Diagram::new(&s)).unwrap();
        assert!(cone.apex.is_empty());
        let lim = finite_limit(&Diagram::new(&s)).unwrap();
        assert!(lim.apex.sizes().iter().all(|&k| k == 1));
    }

    #[test]
    fn coequalizing_endpoints_of_an_edge() {
        let s = simplex_site(2).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let v0 = vertex(&s, &d1, 0);
        let v1 = vertex(&s, &d1, 1);
        let (circle, q) = coequalizer(&v0, &v1).unwrap();
        circle.audit_functoriality().unwrap();
        q.check_naturality().unwrap();
        assert_eq!(circle.size(0), 1);
        assert_eq!(circle.nondegenerate(1).len(), 1);
    }

    #[test]
    fn pullback_along_identity() {
        let s = simplex_site(2).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let f = NatTrans::to_terminal(&d1);
        let id = NatTrans::identity(f.dst());
        let (p, l, r) = pullback(&f, &id).unwrap();
        p.audit_functoriality().unwrap();
        assert!(l.is_iso());
        assert_eq!(p.sizes(), d1.sizes());
        r.check_naturality().unwrap();
    }

    #[test]
    fn pushout_glues_two_edges() {
        let s = simplex_site(2).unwrap();
        let d0 = simp_representable(&s, 0).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let end = NatTrans::yoneda(&s, 0, &d1, 1);
        let start = NatTrans::yoneda(&s, 0, &d1, 0);
        assert_eq!(*end.src(), d0);
        let (p, a, b) = pushout(&end, &start).unwrap();
        p.audit_functoriality().unwrap();
        assert_eq!(p.size(0), 3);
        assert_eq!(p.nondegenerate(1).len(), 2);
        assert!(a.is_mono() && b.is_mono());
    }

    #[test]
    fn union_find_keeps_least_representative() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(3, 4);
        uf.union(1, 4);
        let (class, reps) = uf.classes();
        assert_eq!(reps, vec![0, 1, 2]);
        assert_eq!(class, vec![0, 1, 2, 1, 1, 1]);
    }
}
