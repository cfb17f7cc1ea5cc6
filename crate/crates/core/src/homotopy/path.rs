//! Path objects `Y^I`, one-step homotopies and homotopy equalizers.
//!
//! `Y^I(L) = Nat(y(L) × y(I), Y)`, which is the exponential in the presheaf
//! category. Where the window holds a designated `L × I` this agrees with
//! `Y(L × I)`.

use std::collections::HashMap;

use crate::colimit::pullback;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::presheaf::{NatTrans, Presheaf};
use crate::search::{nat_trans_components, nat_trans_enumerate, Components, MapSearch};
use crate::site::ObjId;

#[derive(Clone, Debug)]
pub struct PathObject {
    pub presheaf: Presheaf,
    pub source: Presheaf,
    pub ev0: NatTrans,
    pub ev1: NatTrans,
    /// Constant paths `Y -> Y^I`.
    pub konst: NatTrans,
    elems: Vec<Vec<Components>>,
    index: Vec<HashMap<Components, usize>>,
}

impl PathObject {
    /// The map `y(L) × y(I) -> Y` behind an element of level `L`.
    pub fn element(&self, l: ObjId, e: usize) -> &Components {
        &self.elems[l][e]
    }

    pub fn lookup(&self, l: ObjId, comps: &Components) -> Option<usize> {
        self.index[l].get(comps).copied()
    }
}

pub fn path_object(y: &Presheaf, budget: u64, exec: Exec) -> Result<PathObject> {
    let site = y.site();
    let i = site.interval()?;
    let yi = Presheaf::representable(site, i);
    let n = site.num_objects();
    let levels: Vec<Result<Vec<Components>>> = exec.map_range(n, |l| {
        let (p, _, _) = Presheaf::product(&Presheaf::representable(site, l), &yi)?;
        nat_trans_components(&p, y, budget)
    });
    let elems: Vec<Vec<Components>> = levels.into_iter().collect::<Result<_>>()?;
    let index: Vec<HashMap<Components, usize>> = elems
        .iter()
        .map(|lvl| lvl.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect())
        .collect();
    // h: K -> L acts by precomposition with y(h) × id.
    let action = (0..site.num_maps())
        .map(|h| {
            let hm = site.map(h);
            elems[hm.dst]
                .iter()
                .map(|phi| {
                    let pulled: Components = (0..n)
                        .map(|m| {
                            let w = yi.size(m);
                            site.hom(m, hm.src)
                                .iter()
                                .flat_map(|&g| {
                                    let gh = site.hom_position(site.compose(g, h));
                                    (0..w).map(move |c| phi[m][gh * w + c])
                                })
                                .collect()
                        })
                        .collect();
                    index[hm.src][&pulled]
                })
                .collect()
        })
        .collect();
    let sizes = elems.iter().map(Vec::len).collect();
    let yp = Presheaf::from_parts(site.clone(), sizes, action);
    let ev = |eps: usize| {
        let comps = (0..n)
            .map(|l| {
                let w = yi.size(l);
                let at = site.hom_position(site.identity(l)) * w
                    + site.hom_position(site.constant(l, i, eps));
                elems[l].iter().map(|phi| phi[l][at]).collect()
            })
            .collect();
        NatTrans::from_parts(yp.clone(), y.clone(), comps)
    };
    let (ev0, ev1) = (ev(0), ev(1));
    let konst_comps = (0..n)
        .map(|l| {
            (0..y.size(l))
                .map(|a| {
                    let phi: Components = (0..n)
                        .map(|m| {
                            let w = yi.size(m);
                            site.hom(m, l)
                                .iter()
                                .flat_map(|&g| std::iter::repeat(y.act(g, a)).take(w))
                                .collect()
                        })
                        .collect();
                    index[l][&phi]
                })
                .collect()
        })
        .collect();
    let konst = NatTrans::from_parts(y.clone(), yp.clone(), konst_comps);
    Ok(PathObject { presheaf: yp, source: y.clone(), ev0, ev1, konst, elems, index })
}

/// `witness: X -> Y^I` with `ev0 ∘ witness = f` and `ev1 ∘ witness = g`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub f: NatTrans,
    pub g: NatTrans,
    pub witness: NatTrans,
}

impl Homotopy {
    pub fn verify(&self, path: &PathObject) -> bool {
        self.witness.dst() == &path.presheaf
            && self.witness.then(&path.ev0).is_ok_and(|c| c.components() == self.f.components())
            && self.witness.then(&path.ev1).is_ok_and(|c| c.components() == self.g.components())
    }
}

fn endpoint_table(path: &PathObject, l: ObjId) -> HashMap<(usize, usize), Vec<usize>> {
    let mut t: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for phi in 0..path.presheaf.size(l) {
        t.entry((path.ev0.apply(l, phi), path.ev1.apply(l, phi))).or_default().push(phi);
    }
    t
}

/// A one-step homotopy from `f` to `g`, if any exists.
pub fn find_homotopy(
    f: &NatTrans,
    g: &NatTrans,
    path: &PathObject,
    budget: u64,
) -> Result<Option<Homotopy>> {
    if f.src() != g.src() || f.dst() != g.dst() || *f.dst() != path.source {
        return Err(Error::Invalid("homotopy needs parallel maps into the path source".into()));
    }
    let x = f.src();
    let mut search = MapSearch::new(x, &path.presheaf, budget)?;
    for l in 0..x.site().num_objects() {
        let t = endpoint_table(path, l);
        for e in 0..x.size(l) {
            let key = (f.apply(l, e), g.apply(l, e));
            search.restrict(l, e, t.get(&key).cloned().unwrap_or_default());
        }
    }
    let (found, _) = search.find_first()?;
    Ok(found.map(|c| Homotopy {
        f: f.clone(),
        g: g.clone(),
        witness: NatTrans::from_parts(x.clone(), path.presheaf.clone(), c),
    }))
}

/// A homotopy in either direction between `f` and `g`.
fn find_homotopy_either(
    f: &NatTrans,
    g: &NatTrans,
    path: &PathObject,
    budget: u64,
) -> Result<Option<Homotopy>> {
    match find_homotopy(f, g, path, budget)? {
        Some(h) => Ok(Some(h)),
        None => find_homotopy(g, f, path, budget),
    }
}

#[derive(Clone, Debug)]
pub enum EquivOutcome {
    Equivalence { inverse: NatTrans, source_homotopy: Homotopy, target_homotopy: Homotopy },
    /// No candidate inverse works with one-step homotopies.
    NotFound { candidates: usize },
    /// The search ran out of budget.
    Inconclusive { reason: String },
}

/// Searches for `g` with `g ∘ f ~ id` and `f ∘ g ~ id`, each by a one-step
/// homotopy in either direction.
pub fn is_homotopy_equivalence_bounded(
    f: &NatTrans,
    budget: u64,
    exec: Exec,
) -> Result<EquivOutcome> {
    let run = || -> Result<EquivOutcome> {
        let (x, y) = (f.src(), f.dst());
        let px = path_object(x, budget, exec)?;
        let py = path_object(y, budget, exec)?;
        let candidates = nat_trans_enumerate(y, x, budget)?;
        let n = candidates.len();
        for g in candidates {
            let gf = f.then(&g)?;
            let Some(h1) = find_homotopy_either(&gf, &NatTrans::identity(x), &px, budget)? else {
                continue;
            };
            let fg = g.then(f)?;
            if let Some(h2) = find_homotopy_either(&fg, &NatTrans::identity(y), &py, budget)? {
                return Ok(EquivOutcome::Equivalence {
                    inverse: g,
                    source_homotopy: h1,
                    target_homotopy: h2,
                });
            }
        }
        Ok(EquivOutcome::NotFound { candidates: n })
    };
    match run() {
        Err(e @ Error::BudgetExceeded { .. }) => Ok(EquivOutcome::Inconclusive { reason: e.to_string() }),
        other => other,
    }
}

/// `E = X ×_{Y×Y} Y^I` along `(f, g)` and `(ev0, ev1)`.
#[derive(Clone, Debug)]
pub struct HomotopyEqualizer {
    pub object: Presheaf,
    pub q: NatTrans,
    /// Homotopy from `f ∘ q` to `g ∘ q`.
    pub homotopy: Homotopy,
    pub f: NatTrans,
    pub g: NatTrans,
}

pub fn homotopy_equalizer(
    f: &NatTrans,
    g: &NatTrans,
    path: &PathObject,
) -> Result<HomotopyEqualizer> {
    if f.src() != g.src() || f.dst() != g.dst() || *f.dst() != path.source {
        return Err(Error::Invalid("homotopy equalizer needs parallel maps into the path source".into()));
    }
    let y = f.dst();
    let (yy, _, _) = Presheaf::product(y, y)?;
    let fg = NatTrans::pair(f, g, &yy)?;
    let ends = NatTrans::pair(&path.ev0, &path.ev1, &yy)?;
    let (e, q, w) = pullback(&fg, &ends)?;
    let homotopy = Homotopy { f: q.then(f)?, g: q.then(g)?, witness: w };
    if !homotopy.verify(path) {
        return Err(Error::Invalid("homotopy equalizer leg is not endpoint-correct".into()));
    }
    Ok(HomotopyEqualizer { object: e, q, homotopy, f: f.clone(), g: g.clone() })
}

impl HomotopyEqualizer {
    /// The unique `Z -> E` induced by `c: Z -> X` and `w: Z -> Y^I` with
    /// `ev0 ∘ w = f ∘ c` and `ev1 ∘ w = g ∘ c`.
    pub fn factor(&self, c: &NatTrans, w: &NatTrans, path: &PathObject) -> Result<NatTrans> {
        let z = c.src();
        if w.src() != z || c.dst() != self.q.dst() || *w.dst() != path.presheaf {
            return Err(Error::Invalid("cone legs do not match the equalizer".into()));
        }
        let fc = c.then(&self.f)?;
        let gc = c.then(&self.g)?;
        if w.then(&path.ev0)?.components() != fc.components()
            || w.then(&path.ev1)?.components() != gc.components()
        {
            return Err(Error::Invalid("cone does not commute".into()));
        }
        let site = z.site();
        let comps = (0..site.num_objects())
            .map(|l| {
                let at: HashMap<(usize, usize), usize> = (0..self.object.size(l))
                    .map(|e| ((self.q.apply(l, e), self.homotopy.witness.apply(l, e)), e))
                    .collect();
                (0..z.size(l)).map(|x| at[&(c.apply(l, x), w.apply(l, x))]).collect()
            })
            .collect();
        Ok(NatTrans::from_parts(z.clone(), self.object.clone(), comps))
    }

    /// For `f = g`, the section of `q` through constant paths.
    pub fn constant_section(&self, path: &PathObject) -> Result<NatTrans> {
        if self.f.components() != self.g.components() {
            return Err(Error::Invalid("constant section needs f = g".into()));
        }
        let x = self.q.dst();
        let w = self.f.then(&path.konst)?;
        self.factor(&NatTrans::identity(x), &w, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::cube;
    use crate::site::Site;
    use std::sync::Arc;

    fn window() -> crate::site::SiteRef {
        Arc::new(Site::default_window().unwrap())
    }

    fn vertex(w: &crate::site::SiteRef, target: &Presheaf, eps: usize) -> NatTrans {
        let pt = w.point().unwrap();
        let i = w.interval().unwrap();
        let v = w.hom_position(w.constant(pt, i, eps));
        NatTrans::yoneda(w, pt, target, v)
    }

    #[test]
    fn path_object_of_terminal_and_interval() {
        let w = window();
        let t = Presheaf::terminal(&w);
        let pt_path = path_object(&t, 100_000, Exec::default()).unwrap();
        assert_eq!(pt_path.presheaf.sizes(), t.sizes());
        let yi = Presheaf::representable(&w, w.interval().unwrap());
        let p = path_object(&yi, 100_000, Exec::default()).unwrap();
        assert_eq!(p.presheaf.size(w.point().unwrap()), 3);
        p.presheaf.audit_functoriality().unwrap();
        for ev in [&p.ev0, &p.ev1] {
            ev.check_naturality().unwrap();
            let c = p.konst.then(ev).unwrap();
            assert_eq!(c.components(), NatTrans::identity(&yi).components());
        }
    }

    #[test]
    fn designated_products_match() {
        let w = window();
        let sq = w.find_object(&cube(2)).unwrap();
        let y = Presheaf::representable(&w, sq);
        let p = path_object(&y, 1_000_000, Exec::default()).unwrap();
        for l in 0..w.num_objects() {
            if let Some(li) = w.product_with_interval(l) {
                assert_eq!(p.presheaf.size(l), y.size(li));
            }
        }
    }

    #[test]
    fn endpoints_of_the_interval_are_homotopic() {
        let w = window();
        let yi = Presheaf::representable(&w, w.interval().unwrap());
        let t = Presheaf::terminal(&w);
        let p = path_object(&yi, 100_000, Exec::default()).unwrap();
        let (v0, v1) = (vertex(&w, &yi, 0), vertex(&w, &yi, 1));
        let v0 = NatTrans::from_parts(t.clone(), yi.clone(), v0.components().to_vec());
        let v1 = NatTrans::from_parts(t.clone(), yi.clone(), v1.components().to_vec());
        let h = find_homotopy(&v0, &v1, &p, 100_000).unwrap().unwrap();
        assert!(h.verify(&p));
        assert!(find_homotopy(&v1, &v0, &p, 100_000).unwrap().is_none());
        let same = find_homotopy(&v0, &v0, &p, 100_000).unwrap().unwrap();
        assert!(same.verify(&p));

        let e = homotopy_equalizer(&v0, &v1, &p).unwrap();
        assert_eq!(e.object.size(w.point().unwrap()), 1);
        let ee = homotopy_equalizer(&v0, &v0, &p).unwrap();
        let s = ee.constant_section(&p).unwrap();
        assert!(s.then(&ee.q).unwrap().components() == NatTrans::identity(&t).components());
    }

    #[test]
    fn free_loops_on_the_interval_are_constant() {
        let w = window();
        let yi = Presheaf::representable(&w, w.interval().unwrap());
        let p = path_object(&yi, 100_000, Exec::default()).unwrap();
        let id = NatTrans::identity(&yi);
        let e = homotopy_equalizer(&id, &id, &p).unwrap();
        assert!(e.q.is_iso());
    }

    #[test]
    fn identity_and_contraction() {
        let w = window();
        let yi = Presheaf::representable(&w, w.interval().unwrap());
        let id = NatTrans::identity(&yi);
        assert!(matches!(
            is_homotopy_equivalence_bounded(&id, 100_000, Exec::default()).unwrap(),
            EquivOutcome::Equivalence { .. }
        ));
        let to_pt = NatTrans::to_terminal(&yi);
        assert!(matches!(
            is_homotopy_equivalence_bounded(&to_pt, 100_000, Exec::default()).unwrap(),
            EquivOutcome::Equivalence { .. }
        ));
    }
}
