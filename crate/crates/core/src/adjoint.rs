//! The adjoint triple `i_! ⊣ i^* ⊣ i_*` induced by the inclusion of the
//! truncated simplex category `Δ≤D` into a lattice window `W`.
//!
//! * `i^*` restricts a window presheaf to the ordinals.
//! * `i_*(X)(L)` is the set of simplicial maps `N(L) -> X`, where
//!   `N(L) = i^* y(L)` is the truncated nerve.
//! * `i_!(X)(L)` is the coend `∫^n hom(L, [n]) × X_n`: pairs `(x, g)` with
//!   `x ∈ X_n` and `g: L -> [n]`, glued along `(X(α) x, g) ~ (x, α ∘ g)`.
//!
//! Since the inclusion is full, these are an exact adjoint triple between
//! the finite presheaf categories, and `i_!`, `i_*` are fully faithful. They
//! agree with the genuine functors between simplicial and cubical sets as
//! long as every nerve `N(L)` is captured by the truncation, i.e.
//! `height(L) <= D` for all window objects; `i_*` enforces this.
//!
//! Sheaves for the chain topology are the presheaves whose unit
//! `X -> i_* i^* X` is invertible; sheafification is `i_* i^*`.

use std::collections::HashMap;

use crate::colimit::UnionFind;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::presheaf::{same_site, NatTrans, Presheaf};
use crate::search::{nat_trans_components, Components, MapSearch};
use crate::sieve::least_cover;
use crate::site::{MapId, ObjId, SiteRef};

/// The pair of sites and the embedding of one into the other.
#[derive(Clone, Debug)]
pub struct Geometric {
    simp: SiteRef,
    window: SiteRef,
    /// Window object of each ordinal `[n]`, `n <= D`.
    ord: Vec<ObjId>,
    /// Window map of each simplex-site map.
    emb: Vec<MapId>,
    budget: u64,
    exec: Exec,
}

/// `i_* X` together with the maps `N(L) -> X` that make up its levels.
#[derive(Clone, Debug)]
pub struct RightKan {
    pub presheaf: Presheaf,
    pub source: Presheaf,
    elems: Vec<Vec<Components>>,
    index: Vec<HashMap<Components, usize>>,
}

impl RightKan {
    /// The simplicial map `N(L) -> X` behind an element of level `L`.
    pub fn element(&self, l: ObjId, e: usize) -> &Components {
        &self.elems[l][e]
    }

    pub fn lookup(&self, l: ObjId, comps: &Components) -> Option<usize> {
        self.index[l].get(comps).copied()
    }
}

/// `i_! X` with the coend bookkeeping needed for units and functoriality.
#[derive(Clone, Debug)]
pub struct LeftKan {
    pub presheaf: Presheaf,
    pub source: Presheaf,
    /// `offsets[L][n]`: first pair index of dimension `n` at level `L`.
    offsets: Vec<Vec<usize>>,
    /// `class[L][pair]`: element of `i_! X (L)` containing the pair.
    class: Vec<Vec<usize>>,
    /// Least pair of each class, as `(n, x, position of g in hom(L, [n]))`.
    reps: Vec<Vec<(usize, usize, usize)>>,
}

impl LeftKan {
    fn pair_index(&self, g: &Geometric, l: ObjId, n: usize, x: usize, gpos: usize) -> usize {
        let w = g.window.hom(l, g.ord[n]).len();
        self.offsets[l][n] + x * w + gpos
    }

    /// Class of `(x ∈ X_n, g: L -> [n])`.
    pub fn class_of(&self, geo: &Geometric, l: ObjId, n: usize, x: usize, gpos: usize) -> usize {
        self.class[l][self.pair_index(geo, l, n, x, gpos)]
    }

    pub fn representative(&self, l: ObjId, e: usize) -> (usize, usize, usize) {
        self.reps[l][e]
    }
}

/// Results of the four triangle identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleReport {
    pub name: &'static str,
    pub holds: bool,
    /// First `(object, element)` where the composite is not the identity.
    pub witness: Option<(ObjId, usize)>,
}

fn first_difference(t: &NatTrans) -> Option<(ObjId, usize)> {
    t.components()
        .iter()
        .enumerate()
        .find_map(|(o, c)| c.iter().enumerate().find(|(x, &v)| *x != v).map(|(x, _)| (o, x)))
}

fn triangle(name: &'static str, composite: NatTrans) -> TriangleReport {
    let witness = first_difference(&composite);
    TriangleReport { name, holds: witness.is_none() && composite.src() == composite.dst(), witness }
}

/// A yes/no verdict with the first offending location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<(ObjId, usize)>,
}

/// Outcome of the family-of-sheaves test: the pullback of the unit square
/// and the comparison map from the domain into it.
#[derive(Clone, Debug)]
pub struct FamilyVerdict {
    pub holds: bool,
    pub pullback: Presheaf,
    pub comparison: NatTrans,
    pub witness: Option<(ObjId, usize)>,
}

impl Geometric {
    /// Uses the largest `D` for which the window holds `[0..=D]`.
    pub fn new(window: &SiteRef, budget: u64) -> Result<Self> {
        let d = window.max_ordinal().ok_or(Error::MissingOrdinal(0))?;
        Self::with_dim(window, d, budget)
    }

    pub fn with_dim(window: &SiteRef, d: usize, budget: u64) -> Result<Self> {
        if window.is_simplicial() {
            return Err(Error::Invalid("the cubical side must be a lattice window".into()));
        }
        let simp = crate::presheaf::simplex_site(d)?;
        let ord = (0..=d).map(|n| window.ordinal(n)).collect::<Result<Vec<_>>>()?;
        let emb = window.embedding_of(&simp)?;
        Ok(Geometric { simp, window: window.clone(), ord, emb, budget, exec: Exec::default() })
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn simp(&self) -> &SiteRef {
        &self.simp
    }

    pub fn window(&self) -> &SiteRef {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.ord.len() - 1
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn ordinal_object(&self, n: usize) -> ObjId {
        self.ord[n]
    }

    fn expect_window(&self, x: &Presheaf) -> Result<()> {
        if same_site(x.site(), &self.window) {
            Ok(())
        } else {
            Err(Error::SiteMismatch)
        }
    }

    fn expect_simp(&self, x: &Presheaf) -> Result<()> {
        if same_site(x.site(), &self.simp) {
            Ok(())
        } else {
            Err(Error::SiteMismatch)
        }
    }

    /// Smallest truncation for which every window nerve is complete.
    pub fn required_dim(&self) -> usize {
        self.window.objects().iter().map(|l| l.height()).max().unwrap_or(0)
    }

    pub fn i_upper_star(&self, x: &Presheaf) -> Result<Presheaf> {
        self.expect_window(x)?;
        let sizes = self.ord.iter().map(|&o| x.size(o)).collect();
        let action = self.emb.iter().map(|&f| x.action_table(f).to_vec()).collect();
        Ok(Presheaf::from_parts(self.simp.clone(), sizes, action))
    }

    pub fn i_upper_star_map(&self, t: &NatTrans) -> Result<NatTrans> {
        let src = self.i_upper_star(t.src())?;
        let dst = self.i_upper_star(t.dst())?;
        let comps = self.ord.iter().map(|&o| t.component(o).to_vec()).collect();
        Ok(NatTrans::from_parts(src, dst, comps))
    }

    /// `N(L) = i^* y(L)`; level `n` is `hom([n], L)` in window order.
    pub fn nerve_of(&self, l: ObjId) -> Presheaf {
        self.i_upper_star(&Presheaf::representable(&self.window, l))
            .expect("representable lives on the window")
            .with_skeletal(self.window.object(l).height() <= self.dim())
    }

    pub fn i_lower_star(&self, x: &Presheaf) -> Result<RightKan> {
        self.expect_simp(x)?;
        let need = self.required_dim();
        if need > self.dim() {
            return Err(Error::InsufficientTruncation {
                what: "i_* on this window".into(),
                have: self.dim(),
                need,
            });
        }
        let w = &self.window;
        let levels: Vec<Result<Vec<Components>>> = self.exec.map_range(w.num_objects(), |l| {
            nat_trans_components(&self.nerve_of(l), x, self.budget)
        });
        let elems: Vec<Vec<Components>> = levels.into_iter().collect::<Result<_>>()?;
        let index: Vec<HashMap<Components, usize>> = elems
            .iter()
            .map(|lvl| lvl.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
            .collect();
        // h: K -> L acts by φ ↦ φ ∘ N(h), i.e. c ↦ φ(h ∘ c).
        let action = (0..w.num_maps())
            .map(|h| {
                let m = w.map(h);
                elems[m.dst]
                    .iter()
                    .map(|phi| {
                        let pulled = self.precompose_nerve(phi, h);
                        index[m.src][&pulled]
                    })
                    .collect()
            })
            .collect();
        let sizes = elems.iter().map(Vec::len).collect();
        Ok(RightKan {
            presheaf: Presheaf::from_parts(w.clone(), sizes, action),
            source: x.clone(),
            elems,
            index,
        })
    }

    /// `φ ∘ N(h)` for `φ: N(L) -> X` and `h: K -> L`.
    fn precompose_nerve(&self, phi: &Components, h: MapId) -> Components {
        let w = &self.window;
        let k = w.map(h).src;
        (0..=self.dim())
            .map(|n| {
                w.hom(self.ord[n], k)
                    .iter()
                    .map(|&c| phi[n][w.hom_position(w.compose(c, h))])
                    .collect()
            })
            .collect()
    }

    /// `i_* t: i_* X -> i_* Y`, `ψ ↦ t ∘ ψ`.
    pub fn i_lower_star_map(&self, t: &NatTrans, rx: &RightKan, ry: &RightKan) -> Result<NatTrans> {
        if *t.src() != rx.source || *t.dst() != ry.source {
            return Err(Error::Invalid("i_* of a map needs matching right Kan data".into()));
        }
        let comps = (0..self.window.num_objects())
            .map(|l| {
                rx.elems[l]
                    .iter()
                    .map(|psi| {
                        let composed: Components = psi
                            .iter()
                            .enumerate()
                            .map(|(n, c)| c.iter().map(|&v| t.apply(n, v)).collect())
                            .collect();
                        ry.index[l][&composed]
                    })
                    .collect()
            })
            .collect();
        Ok(NatTrans::from_parts(rx.presheaf.clone(), ry.presheaf.clone(), comps))
    }

    pub fn i_lower_shriek(&self, x: &Presheaf) -> Result<LeftKan> {
        self.expect_simp(x)?;
        let w = &self.window;
        let s = &self.simp;
        let d = self.dim();
        let per_level: Vec<(Vec<usize>, Vec<usize>, Vec<(usize, usize, usize)>)> =
            self.exec.map_range(w.num_objects(), |l| {
                let mut offsets = Vec::with_capacity(d + 1);
                let mut total = 0;
                for n in 0..=d {
                    offsets.push(total);
                    total += x.size(n) * w.hom(l, self.ord[n]).len();
                }
                let idx = |n: usize, xe: usize, gpos: usize| {
                    offsets[n] + xe * w.hom(l, self.ord[n]).len() + gpos
                };
                let mut uf = UnionFind::new(total);
                for (alpha, am) in s.maps().iter().enumerate() {
                    if s.is_identity(alpha) {
                        continue;
                    }
                    // alpha: [n] -> [m]
                    let (n, m) = (am.src, am.dst);
                    let walpha = self.emb[alpha];
                    for (gpos, &g) in w.hom(l, self.ord[n]).iter().enumerate() {
                        let ag = w.hom_position(w.compose(g, walpha));
                        for xm in 0..x.size(m) {
                            uf.union(idx(n, x.act(alpha, xm), gpos), idx(m, xm, ag));
                        }
                    }
                }
                let (class, rep_idx) = uf.classes();
                let reps = rep_idx
                    .into_iter()
                    .map(|r| {
                        let n = (0..=d).rev().find(|&n| offsets[n] <= r && x.size(n) > 0 && r < offsets[n] + x.size(n) * w.hom(l, self.ord[n]).len()).unwrap();
                        let width = w.hom(l, self.ord[n]).len();
                        let rel = r - offsets[n];
                        (n, rel / width, rel % width)
                    })
                    .collect();
                (offsets, class, reps)
            });
        let mut offsets = Vec::new();
        let mut class = Vec::new();
        let mut reps = Vec::new();
        for (o, c, r) in per_level {
            offsets.push(o);
            class.push(c);
            reps.push(r);
        }
        let mut lk = LeftKan {
            presheaf: Presheaf::initial(w),
            source: x.clone(),
            offsets,
            class,
            reps,
        };
        // h: K -> L sends [(x, g)] to [(x, g ∘ h)].
        let action = (0..w.num_maps())
            .map(|h| {
                let hm = w.map(h);
                lk.reps[hm.dst]
                    .iter()
                    .map(|&(n, xe, gpos)| {
                        let g = w.hom(hm.dst, self.ord[n])[gpos];
                        let gh = w.hom_position(w.compose(h, g));
                        lk.class_of(self, hm.src, n, xe, gh)
                    })
                    .collect()
            })
            .collect();
        let sizes = lk.reps.iter().map(Vec::len).collect();
        lk.presheaf = Presheaf::from_parts(w.clone(), sizes, action);
        Ok(lk)
    }

    /// `i_! t`, `[(x, g)] ↦ [(t x, g)]`.
    pub fn i_lower_shriek_map(&self, t: &NatTrans, lx: &LeftKan, ly: &LeftKan) -> Result<NatTrans> {
        if *t.src() != lx.source || *t.dst() != ly.source {
            return Err(Error::Invalid("i_! of a map needs matching left Kan data".into()));
        }
        let comps = (0..self.window.num_objects())
            .map(|l| {
                lx.reps[l]
                    .iter()
                    .map(|&(n, xe, gpos)| ly.class_of(self, l, n, t.apply(n, xe), gpos))
                    .collect()
            })
            .collect();
        Ok(NatTrans::from_parts(lx.presheaf.clone(), ly.presheaf.clone(), comps))
    }

    /// Unit of `i^* ⊣ i_*`: `a ∈ X(L)` goes to the family `c ↦ X(c)(a)`.
    pub fn eta_unit(&self, x: &Presheaf, r: &RightKan) -> Result<NatTrans> {
        self.expect_window(x)?;
        let w = &self.window;
        let comps = (0..w.num_objects())
            .map(|l| {
                (0..x.size(l))
                    .map(|a| {
                        let fam: Components = (0..=self.dim())
                            .map(|n| w.hom(self.ord[n], l).iter().map(|&c| x.act(c, a)).collect())
                            .collect();
                        r.lookup(l, &fam).ok_or_else(|| {
                            Error::Invalid("unit family missing from i_* i^* X".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans::from_parts(x.clone(), r.presheaf.clone(), comps))
    }

    /// Counit of `i^* ⊣ i_*`: `i^* i_* Y -> Y`, `φ ↦ φ_n(id)`.
    pub fn eps_counit_star(&self, r: &RightKan) -> Result<NatTrans> {
        let w = &self.window;
        let src = self.i_upper_star(&r.presheaf)?;
        let comps = (0..=self.dim())
            .map(|n| {
                let l = self.ord[n];
                let idpos = w.hom_position(w.identity(l));
                r.elems[l].iter().map(|phi| phi[n][idpos]).collect()
            })
            .collect();
        Ok(NatTrans::from_parts(src, r.source.clone(), comps))
    }

    /// Unit of `i_! ⊣ i^*`: `X -> i^* i_! X`, `x ↦ [(x, id)]`.
    pub fn eta_unit_shriek(&self, lk: &LeftKan) -> Result<NatTrans> {
        let w = &self.window;
        let dst = self.i_upper_star(&lk.presheaf)?;
        let x = &lk.source;
        let comps = (0..=self.dim())
            .map(|n| {
                let l = self.ord[n];
                let idpos = w.hom_position(w.identity(l));
                (0..x.size(n)).map(|xe| lk.class_of(self, l, n, xe, idpos)).collect()
            })
            .collect();
        Ok(NatTrans::from_parts(x.clone(), dst, comps))
    }

    /// Counit of `i_! ⊣ i^*`: `i_! i^* Y -> Y`, `[(y, g)] ↦ Y(g)(y)`. `lk`
    /// must be `i_!` of `i^* y`.
    pub fn eps_counit(&self, y: &Presheaf, lk: &LeftKan) -> Result<NatTrans> {
        self.expect_window(y)?;
        if lk.source != self.i_upper_star(y)? {
            return Err(Error::Invalid("counit needs i_! of i^* Y".into()));
        }
        let w = &self.window;
        let comps = (0..w.num_objects())
            .map(|l| {
                lk.reps[l]
                    .iter()
                    .map(|&(n, ye, gpos)| y.act(w.hom(l, self.ord[n])[gpos], ye))
                    .collect()
            })
            .collect();
        Ok(NatTrans::from_parts(lk.presheaf.clone(), y.clone(), comps))
    }

    /// Triangle identities for a simplicial presheaf:
    /// `ε_{i_!X} ∘ i_!(η'_X) = id` and `i_*(ε'_X) ∘ η_{i_*X} = id`.
    pub fn triangles_simp(&self, x: &Presheaf) -> Result<Vec<TriangleReport>> {
        self.expect_simp(x)?;
        let lx = self.i_lower_shriek(x)?;
        let eta_x = self.eta_unit_shriek(&lx)?;
        let l2 = self.i_lower_shriek(eta_x.dst())?;
        let shriek_eta = self.i_lower_shriek_map(&eta_x, &lx, &l2)?;
        let eps = self.eps_counit(&lx.presheaf, &l2)?;
        let t1 = triangle("shriek-counit-unit", shriek_eta.then(&eps)?);

        let rx = self.i_lower_star(x)?;
        let r2 = self.i_lower_star(&self.i_upper_star(&rx.presheaf)?)?;
        let eta = self.eta_unit(&rx.presheaf, &r2)?;
        let eps_star = self.eps_counit_star(&rx)?;
        let star_eps = self.i_lower_star_map(&eps_star, &r2, &rx)?;
        let t2 = triangle("star-unit-counit", eta.then(&star_eps)?);
        Ok(vec![t1, t2])
    }

    /// Triangle identities for a window presheaf:
    /// `i^*(ε_Y) ∘ η'_{i^*Y} = id` and `ε'_{i^*Y} ∘ i^*(η_Y) = id`.
    pub fn triangles_cub(&self, y: &Presheaf) -> Result<Vec<TriangleReport>> {
        self.expect_window(y)?;
        let iy = self.i_upper_star(y)?;
        let l = self.i_lower_shriek(&iy)?;
        let eta_shriek = self.eta_unit_shriek(&l)?;
        let eps = self.eps_counit(y, &l)?;
        let t1 = triangle("shriek-unit-counit", eta_shriek.then(&self.i_upper_star_map(&eps)?)?);

        let r = self.i_lower_star(&iy)?;
        let eta = self.eta_unit(y, &r)?;
        let eps_star = self.eps_counit_star(&r)?;
        let t2 = triangle("star-counit-unit", self.i_upper_star_map(&eta)?.then(&eps_star)?);
        Ok(vec![t1, t2])
    }

    /// `i^* i_! ≅ id` and `i^* i_* ≅ id` on a simplicial presheaf, witnessed
    /// by the unit of `i_! ⊣ i^*` and the counit of `i^* ⊣ i_*`.
    pub fn full_faithfulness(&self, x: &Presheaf) -> Result<(Verdict, Verdict)> {
        let lx = self.i_lower_shriek(x)?;
        let unit = self.eta_unit_shriek(&lx)?;
        let rx = self.i_lower_star(x)?;
        let counit = self.eps_counit_star(&rx)?;
        let v = |t: &NatTrans| {
            let w = t.iso_failure();
            Verdict { holds: w.is_none(), witness: w }
        };
        Ok((v(&unit), v(&counit)))
    }

    /// `i_* i^* X` with the unit.
    pub fn sheafify(&self, x: &Presheaf) -> Result<(RightKan, NatTrans)> {
        let r = self.i_lower_star(&self.i_upper_star(x)?)?;
        let eta = self.eta_unit(x, &r)?;
        Ok((r, eta))
    }

    pub fn is_sheaf(&self, x: &Presheaf) -> Result<Verdict> {
        let (_, eta) = self.sheafify(x)?;
        let w = eta.iso_failure();
        Ok(Verdict { holds: w.is_none(), witness: w })
    }

    /// Is the unit naturality square of `a: A -> B` a pullback?
    pub fn is_sheaf_family(&self, a: &NatTrans) -> Result<FamilyVerdict> {
        let (ra, eta_a) = self.sheafify(a.src())?;
        let (rb, eta_b) = self.sheafify(a.dst())?;
        let ia = self.i_upper_star_map(a)?;
        let ria = self.i_lower_star_map(&ia, &ra, &rb)?;
        let (p, to_b, to_ra) = crate::colimit::pullback(&eta_b, &ria)?;
        // comparison A -> P, x ↦ (a x, η_A x)
        let w = &self.window;
        let mut lookup: Vec<HashMap<(usize, usize), usize>> = vec![HashMap::new(); w.num_objects()];
        for (l, table) in lookup.iter_mut().enumerate() {
            for e in 0..p.size(l) {
                table.insert((to_b.apply(l, e), to_ra.apply(l, e)), e);
            }
        }
        let comps = (0..w.num_objects())
            .map(|l| {
                (0..a.src().size(l))
                    .map(|x| lookup[l][&(a.apply(l, x), eta_a.apply(l, x))])
                    .collect()
            })
            .collect();
        let comparison = NatTrans::from_parts(a.src().clone(), p.clone(), comps);
        let witness = comparison.iso_failure();
        Ok(FamilyVerdict { holds: witness.is_none(), pullback: p, comparison, witness })
    }

    /// Descent against the least covering sieve of every window object:
    /// restriction `X(L) -> Nat(S_L, X)` must be bijective. A witness names
    /// either a doubly hit element or, for a missed family, its index.
    pub fn satisfies_least_cover_descent(&self, x: &Presheaf) -> Result<Verdict> {
        self.expect_window(x)?;
        let w = &self.window;
        for l in 0..w.num_objects() {
            let (s, incl) = least_cover(w, l).to_presheaf();
            let families = MapSearch::new(&s, x, self.budget)?.enumerate()?.solutions;
            let mut hit = vec![0usize; families.len()];
            let index: HashMap<&Components, usize> =
                families.iter().enumerate().map(|(i, c)| (c, i)).collect();
            for a in 0..x.size(l) {
                let restricted = incl.then(&NatTrans::yoneda(w, l, x, a))?;
                let i = index[&restricted.components().to_vec()];
                hit[i] += 1;
                if hit[i] > 1 {
                    return Ok(Verdict { holds: false, witness: Some((l, a)) });
                }
            }
            if let Some(i) = hit.iter().position(|&h| h == 0) {
                return Ok(Verdict { holds: false, witness: Some((l, i)) });
            }
        }
        Ok(Verdict { holds: true, witness: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::cube;
    use crate::presheaf::{nerve, simp_representable};
    use crate::site::Site;
    use crate::subobject::Subobject;
    use std::sync::Arc;

    fn geo() -> Geometric {
        let w = Arc::new(Site::default_window().unwrap());
        Geometric::new(&w, 1_000_000).unwrap()
    }

    #[test]
    fn restriction_of_representables_is_the_nerve() {
        let g = geo();
        for l in 0..g.window().num_objects() {
            let y = Presheaf::representable(g.window(), l);
            let n = nerve(g.window().object(l), g.simp()).unwrap();
            assert_eq!(g.i_upper_star(&y).unwrap(), n);
        }
    }

    #[test]
    fn right_kan_of_boundary_at_interval() {
        let g = geo();
        let d1 = simp_representable(g.simp(), 1).unwrap();
        let b = Subobject::generated(&d1, &[(0, 0), (0, 1)]).to_presheaf().0;
        let r = g.i_lower_star(&b).unwrap();
        r.presheaf.audit_functoriality().unwrap();
        assert_eq!(r.presheaf.size(g.window().interval().unwrap()), 2);
    }

    #[test]
    fn right_kan_of_nerves_is_representable_sized() {
        let g = geo();
        let sq = g.window().find_object(&cube(2)).unwrap();
        let n = nerve(&cube(2), g.simp()).unwrap();
        let r = g.i_lower_star(&n).unwrap();
        for l in 0..g.window().num_objects() {
            assert_eq!(r.presheaf.size(l), g.window().hom(l, sq).len());
        }
    }

    #[test]
    fn left_kan_of_boundary_at_interval() {
        let g = geo();
        let d1 = simp_representable(g.simp(), 1).unwrap();
        let b = Subobject::generated(&d1, &[(0, 0), (0, 1)]).to_presheaf().0;
        let lk = g.i_lower_shriek(&b).unwrap();
        lk.presheaf.audit_functoriality().unwrap();
        assert_eq!(lk.presheaf.size(g.window().interval().unwrap()), 2);
    }

    #[test]
    fn left_kan_of_simplices_is_representable() {
        let g = geo();
        for n in 0..=2 {
            let dn = simp_representable(g.simp(), n).unwrap();
            let lk = g.i_lower_shriek(&dn).unwrap();
            let y = Presheaf::representable(g.window(), g.ordinal_object(n));
            assert_eq!(lk.presheaf.sizes(), y.sizes());
        }
    }

    #[test]
    fn triangles_on_small_objects() {
        let g = geo();
        let d1 = simp_representable(g.simp(), 1).unwrap();
        for t in g.triangles_simp(&d1).unwrap() {
            assert!(t.holds, "{t:?}");
        }
        let y = Presheaf::representable(g.window(), g.window().interval().unwrap());
        for t in g.triangles_cub(&y).unwrap() {
            assert!(t.holds, "{t:?}");
        }
    }

    #[test]
    fn representables_are_sheaves_least_cover_is_not() {
        let g = geo();
        let w = g.window().clone();
        for l in 0..w.num_objects() {
            assert!(g.is_sheaf(&Presheaf::representable(&w, l)).unwrap().holds);
        }
        let sq = w.find_object(&cube(2)).unwrap();
        let (s, _) = least_cover(&w, sq).to_presheaf();
        let v = g.is_sheaf(&s).unwrap();
        assert!(!v.holds);
        assert_eq!(v.witness.map(|(o, _)| o), Some(sq));
    }

    #[test]
    fn sheafifying_the_least_cover_gives_the_square() {
        let g = geo();
        let w = g.window().clone();
        let sq = w.find_object(&cube(2)).unwrap();
        let (s, incl) = least_cover(&w, sq).to_presheaf();
        let (r, eta) = g.sheafify(&s).unwrap();
        assert!(eta.is_mono());
        assert_eq!(r.presheaf.sizes(), Presheaf::representable(&w, sq).sizes());
        assert!(g.is_sheaf(&r.presheaf).unwrap().holds);
        let fam = g.is_sheaf_family(&incl).unwrap();
        assert!(!fam.holds);
        assert!(g.is_sheaf_family(&NatTrans::to_terminal(&r.presheaf)).unwrap().holds);
    }

    #[test]
    fn descent_agrees_with_the_unit() {
        let g = geo();
        let w = g.window().clone();
        let sq = w.find_object(&cube(2)).unwrap();
        let (s, _) = least_cover(&w, sq).to_presheaf();
        for x in [Presheaf::representable(&w, sq), s, Presheaf::terminal(&w)] {
            assert_eq!(
                g.is_sheaf(&x).unwrap().holds,
                g.satisfies_least_cover_descent(&x).unwrap().holds
            );
        }
    }

    #[test]
    fn full_faithfulness_on_the_boundary() {
        let g = geo();
        let d1 = simp_representable(g.simp(), 1).unwrap();
        let b = Subobject::generated(&d1, &[(0, 0), (0, 1)]).to_presheaf().0;
        let (a, c) = g.full_faithfulness(&b).unwrap();
        assert!(a.holds && c.holds);
    }

    #[test]
    fn insufficient_truncation_is_reported() {
        let w = Arc::new(Site::named_window("ord1+I2").unwrap());
        let g = Geometric::new(&w, 1000).unwrap();
        let t = Presheaf::terminal(g.simp());
        assert_eq!(
            g.i_lower_star(&t).unwrap_err(),
            Error::InsufficientTruncation { what: "i_* on this window".into(), have: 1, need: 2 }
        );
    }
}
