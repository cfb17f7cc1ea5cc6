//! Finite presheaves on a [`Site`] and natural transformations between them.
//!
//! A presheaf stores, for every object, the size of its level and, for every
//! map `f: a -> b` of the site, the restriction table `X(f): X(b) -> X(a)`.
//! On a simplex site this is a truncated simplicial set; on a lattice window
//! it is a windowed cubical set.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{hom_tables, FinLattice, DEFAULT_HOM_CAP};
use crate::site::{MapId, ObjId, Site, SiteRef};

#[derive(Debug)]
struct Data {
    site: SiteRef,
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
    skeletal: bool,
}

/// Cheaply clonable handle to an immutable presheaf.
#[derive(Clone)]
pub struct Presheaf(Arc<Data>);

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presheaf")
            .field("site", &self.0.site.describe())
            .field("sizes", &self.0.sizes)
            .finish()
    }
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (same_site(&self.0.site, &other.0.site)
                && self.0.sizes == other.0.sizes
                && self.0.action == other.0.action)
    }
}

impl Eq for Presheaf {}

pub fn same_site(a: &SiteRef, b: &SiteRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Presheaf {
    /// Validates table shapes and functoriality.
    pub fn new(site: SiteRef, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::from_parts(site, sizes, action);
        p.check_shapes()?;
        p.audit_functoriality()?;
        Ok(p)
    }

    pub(crate) fn from_parts(site: SiteRef, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        Presheaf(Arc::new(Data { site, sizes, action, skeletal: false }))
    }

    /// Marks a simplicial presheaf as a complete description of a simplicial
    /// set: nothing nondegenerate lives above the truncation.
    pub fn with_skeletal(self, skeletal: bool) -> Self {
        let d = &self.0;
        Presheaf(Arc::new(Data {
            site: d.site.clone(),
            sizes: d.sizes.clone(),
            action: d.action.clone(),
            skeletal: skeletal && d.site.is_simplicial(),
        }))
    }

    fn check_shapes(&self) -> Result<()> {
        let site = self.site();
        if self.0.sizes.len() != site.num_objects() || self.0.action.len() != site.num_maps() {
            return Err(Error::Invalid("presheaf shape does not match its site".into()));
        }
        for (f, m) in site.maps().iter().enumerate() {
            let t = &self.0.action[f];
            if t.len() != self.size(m.dst) || t.iter().any(|&v| v >= self.size(m.src)) {
                return Err(Error::Invalid(format!("restriction table for map {f} is malformed")));
            }
        }
        Ok(())
    }

    /// Identities act trivially and `X(g ∘ f) = X(f) ∘ X(g)` for every
    /// composable pair.
    pub fn audit_functoriality(&self) -> Result<()> {
        let site = self.site();
        for a in 0..site.num_objects() {
            let id = site.identity(a);
            if let Some(x) = (0..self.size(a)).find(|&x| self.act(id, x) != x) {
                return Err(Error::NotFunctorial { f: id, g: id, element: x });
            }
        }
        for f in 0..site.num_maps() {
            let b = site.map(f).dst;
            for c in 0..site.num_objects() {
                for &g in site.hom(b, c) {
                    let gf = site.compose(f, g);
                    for z in 0..self.size(c) {
                        if self.act(gf, z) != self.act(f, self.act(g, z)) {
                            return Err(Error::NotFunctorial { f, g, element: z });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn site(&self) -> &SiteRef {
        &self.0.site
    }

    pub fn size(&self, o: ObjId) -> usize {
        self.0.sizes[o]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    pub fn total_size(&self) -> usize {
        self.0.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    /// `X(f)(x)` for `f: a -> b` and `x ∈ X(b)`.
    pub fn act(&self, f: MapId, x: usize) -> usize {
        self.0.action[f][x]
    }

    pub fn action_table(&self, f: MapId) -> &[usize] {
        &self.0.action[f]
    }

    pub fn is_skeletal(&self) -> bool {
        self.0.skeletal
    }

    pub fn ptr_eq(&self, other: &Presheaf) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Elements of a simplicial level hit by some degeneracy.
    pub fn degenerate(&self, n: usize) -> Vec<bool> {
        let site = self.site();
        let mut deg = vec![false; self.size(n)];
        if n == 0 {
            return deg;
        }
        for i in 0..n {
            if let Ok(s) = site.codegeneracy(n - 1, i) {
                for y in 0..self.size(n - 1) {
                    deg[self.act(s, y)] = true;
                }
            }
        }
        deg
    }

    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        self.degenerate(n)
            .into_iter()
            .enumerate()
            .filter(|(_, d)| !d)
            .map(|(x, _)| x)
            .collect()
    }

    /// Highest dimension holding a nondegenerate simplex (simplicial only).
    pub fn top_nondegenerate_dim(&self) -> Option<usize> {
        let d = self.site().simplex_dim()?;
        (0..=d).rev().find(|&n| !self.nondegenerate(n).is_empty())
    }

    pub fn terminal(site: &SiteRef) -> Self {
        let sizes = vec![1; site.num_objects()];
        let action = site.maps().iter().map(|_| vec![0]).collect();
        Self::from_parts(site.clone(), sizes, action).with_skeletal(true)
    }

    pub fn initial(site: &SiteRef) -> Self {
        let sizes = vec![0; site.num_objects()];
        let action = site.maps().iter().map(|_| Vec::new()).collect();
        Self::from_parts(site.clone(), sizes, action).with_skeletal(true)
    }

    /// `y(o)(M) = hom(M, o)`, elements numbered by position in the hom list.
    pub fn representable(site: &SiteRef, o: ObjId) -> Self {
        let sizes: Vec<usize> = (0..site.num_objects()).map(|m| site.hom(m, o).len()).collect();
        let action = (0..site.num_maps())
            .map(|f| {
                let b = site.map(f).dst;
                site.hom(b, o)
                    .iter()
                    .map(|&g| site.hom_position(site.compose(f, g)))
                    .collect()
            })
            .collect();
        let skeletal = site.object(o).height() <= site.simplex_dim().unwrap_or(0);
        Self::from_parts(site.clone(), sizes, action).with_skeletal(skeletal)
    }

    /// Disjoint union; elements of earlier summands come first.
    pub fn coproduct(parts: &[Presheaf]) -> Result<(Presheaf, Vec<NatTrans>)> {
        let site = parts.first().map(|p| p.site().clone()).ok_or_else(|| {
            Error::Invalid("coproduct of no presheaves needs an explicit site".into())
        })?;
        if parts.iter().any(|p| !same_site(p.site(), &site)) {
            return Err(Error::SiteMismatch);
        }
        let n = site.num_objects();
        let mut offsets = vec![vec![0; n]; parts.len()];
        let mut sizes = vec![0; n];
        for (i, p) in parts.iter().enumerate() {
            for o in 0..n {
                offsets[i][o] = sizes[o];
                sizes[o] += p.size(o);
            }
        }
        let action = (0..site.num_maps())
            .map(|f| {
                let m = site.map(f);
                let mut t = Vec::with_capacity(sizes[m.dst]);
                for (i, p) in parts.iter().enumerate() {
                    t.extend(p.action_table(f).iter().map(|&v| v + offsets[i][m.src]));
                }
                t
            })
            .collect();
        let skeletal = parts.iter().all(|p| p.is_skeletal());
        let sum = Self::from_parts(site.clone(), sizes, action).with_skeletal(skeletal);
        let injections = parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let comps = (0..n).map(|o| (0..p.size(o)).map(|x| x + offsets[i][o]).collect()).collect();
                NatTrans::from_parts(p.clone(), sum.clone(), comps)
            })
            .collect();
        Ok((sum, injections))
    }

    /// Binary product; the pair `(x, y)` is numbered `x * |Y(o)| + y`.
    pub fn product(x: &Presheaf, y: &Presheaf) -> Result<(Presheaf, NatTrans, NatTrans)> {
        if !same_site(x.site(), y.site()) {
            return Err(Error::SiteMismatch);
        }
        let site = x.site().clone();
        let n = site.num_objects();
        let sizes: Vec<usize> = (0..n).map(|o| x.size(o) * y.size(o)).collect();
        let action = (0..site.num_maps())
            .map(|f| {
                let m = site.map(f);
                let (bx, by) = (x.size(m.dst), y.size(m.dst));
                let ay = y.size(m.src);
                (0..bx * by)
                    .map(|k| x.act(f, k / by) * ay + y.act(f, k % by))
                    .collect()
            })
            .collect();
        let p = Self::from_parts(site, sizes, action);
        let p0 = (0..n)
            .map(|o| (0..p.size(o)).map(|k| k / y.size(o)).collect())
            .collect();
        let p1 = (0..n)
            .map(|o| (0..p.size(o)).map(|k| k % y.size(o)).collect())
            .collect();
        let pr0 = NatTrans::from_parts(p.clone(), x.clone(), p0);
        let pr1 = NatTrans::from_parts(p.clone(), y.clone(), p1);
        Ok((p, pr0, pr1))
    }
}

/// The nerve of `l` truncated at the dimension of the simplex site `simp`:
/// level `n` is the sorted list of monotone maps `[n] -> l`, acting by
/// precomposition. Built directly from chain tables, independently of the
/// representable construction.
pub fn nerve(l: &FinLattice, simp: &SiteRef) -> Result<Presheaf> {
    let d = simp.simplex_dim().ok_or(Error::SiteMismatch)?;
    let levels: Vec<Vec<Vec<usize>>> = (0..=d)
        .map(|n| hom_tables(simp.object(n).poset(), l.poset(), DEFAULT_HOM_CAP))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<&[usize], usize>> = levels
        .iter()
        .map(|lvl| lvl.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect())
        .collect();
    let action = simp
        .maps()
        .iter()
        .map(|m| {
            levels[m.dst]
                .iter()
                .map(|c| {
                    let pre: Vec<usize> = m.table.iter().map(|&k| c[k]).collect();
                    index[m.src][pre.as_slice()]
                })
                .collect()
        })
        .collect();
    let sizes = levels.iter().map(Vec::len).collect();
    Ok(Presheaf::from_parts(simp.clone(), sizes, action).with_skeletal(l.height() <= d))
}

/// `Δ[n]` on the simplex site.
pub fn simp_representable(simp: &SiteRef, n: usize) -> Result<Presheaf> {
    let o = simp.ordinal(n)?;
    Ok(Presheaf::representable(simp, o))
}

pub fn simplex_site(d: usize) -> Result<SiteRef> {
    Ok(Arc::new(Site::simplex(d)?))
}

/// A morphism of presheaves on the same site; `comps[o][x]` is the image of
/// `x ∈ src(o)`.
#[derive(Clone)]
pub struct NatTrans {
    src: Presheaf,
    dst: Presheaf,
    comps: Vec<Vec<usize>>,
}

impl fmt::Debug for NatTrans {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NatTrans").field("comps", &self.comps).finish()
    }
}

impl PartialEq for NatTrans {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.dst == other.dst && self.comps == other.comps
    }
}

impl Eq for NatTrans {}

impl NatTrans {
    pub fn new(src: Presheaf, dst: Presheaf, comps: Vec<Vec<usize>>) -> Result<Self> {
        if !same_site(src.site(), dst.site()) {
            return Err(Error::SiteMismatch);
        }
        let n = src.site().num_objects();
        if comps.len() != n
            || (0..n).any(|o| {
                comps[o].len() != src.size(o) || comps[o].iter().any(|&v| v >= dst.size(o))
            })
        {
            return Err(Error::Invalid("component shapes do not match".into()));
        }
        let t = Self::from_parts(src, dst, comps);
        t.check_naturality()?;
        Ok(t)
    }

    pub(crate) fn from_parts(src: Presheaf, dst: Presheaf, comps: Vec<Vec<usize>>) -> Self {
        NatTrans { src, dst, comps }
    }

    pub fn check_naturality(&self) -> Result<()> {
        let site = self.src.site();
        for f in 0..site.num_maps() {
            let m = site.map(f);
            for x in 0..self.src.size(m.dst) {
                let lhs = self.comps[m.src][self.src.act(f, x)];
                let rhs = self.dst.act(f, self.comps[m.dst][x]);
                if lhs != rhs {
                    return Err(Error::NotNatural { map: f, element: x });
                }
            }
        }
        Ok(())
    }

    pub fn identity(x: &Presheaf) -> Self {
        let comps = (0..x.site().num_objects()).map(|o| (0..x.size(o)).collect()).collect();
        Self::from_parts(x.clone(), x.clone(), comps)
    }

    /// The unique map out of the initial presheaf / into the terminal one.
    pub fn to_terminal(x: &Presheaf) -> Self {
        let t = Presheaf::terminal(x.site());
        let comps = (0..x.site().num_objects()).map(|o| vec![0; x.size(o)]).collect();
        Self::from_parts(x.clone(), t, comps)
    }

    pub fn src(&self) -> &Presheaf {
        &self.src
    }

    pub fn dst(&self) -> &Presheaf {
        &self.dst
    }

    pub fn component(&self, o: ObjId) -> &[usize] {
        &self.comps[o]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    pub fn apply(&self, o: ObjId, x: usize) -> usize {
        self.comps[o][x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans> {
        if self.dst != other.src {
            return Err(Error::Invalid("natural transformations are not composable".into()));
        }
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(o, c)| c.iter().map(|&x| other.comps[o][x]).collect())
            .collect();
        Ok(Self::from_parts(self.src.clone(), other.dst.clone(), comps))
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().enumerate().all(|(o, c)| {
            let mut seen = vec![false; self.dst.size(o)];
            c.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().enumerate().all(|(o, c)| {
            let mut seen = vec![false; self.dst.size(o)];
            c.iter().for_each(|&v| seen[v] = true);
            seen.into_iter().all(|s| s)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// First `(object, element)` where bijectivity fails, if any.
    pub fn iso_failure(&self) -> Option<(ObjId, usize)> {
        for (o, c) in self.comps.iter().enumerate() {
            let mut hits = vec![0usize; self.dst.size(o)];
            c.iter().for_each(|&v| hits[v] += 1);
            if let Some(y) = hits.iter().position(|&h| h != 1) {
                return Some((o, y));
            }
        }
        None
    }

    pub fn inverse(&self) -> Option<NatTrans> {
        if !self.is_iso() {
            return None;
        }
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(o, c)| {
                let mut inv = vec![0; self.dst.size(o)];
                c.iter().enumerate().for_each(|(x, &v)| inv[v] = x);
                inv
            })
            .collect();
        Some(Self::from_parts(self.dst.clone(), self.src.clone(), comps))
    }

    /// Same components, reinterpreted between equal presheaves.
    pub fn retarget(&self, src: &Presheaf, dst: &Presheaf) -> Result<NatTrans> {
        if *src != self.src || *dst != self.dst {
            return Err(Error::Invalid("retarget needs equal presheaves".into()));
        }
        Ok(Self::from_parts(src.clone(), dst.clone(), self.comps.clone()))
    }

    /// Pairing into a product built by [`Presheaf::product`].
    pub fn pair(f: &NatTrans, g: &NatTrans, product: &Presheaf) -> Result<NatTrans> {
        if f.src != g.src {
            return Err(Error::Invalid("pairing needs a common source".into()));
        }
        let comps = (0..f.comps.len())
            .map(|o| {
                let w = g.dst.size(o);
                (0..f.src.size(o)).map(|x| f.comps[o][x] * w + g.comps[o][x]).collect()
            })
            .collect();
        Ok(Self::from_parts(f.src.clone(), product.clone(), comps))
    }

    /// The map `y(o) -> X` picking `x ∈ X(o)` (Yoneda).
    pub fn yoneda(site: &SiteRef, o: ObjId, x: &Presheaf, elem: usize) -> NatTrans {
        let y = Presheaf::representable(site, o);
        let comps = (0..site.num_objects())
            .map(|m| site.hom(m, o).iter().map(|&g| x.act(g, elem)).collect())
            .collect();
        Self::from_parts(y, x.clone(), comps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{cube, ordinal, terminal};

    fn window() -> SiteRef {
        Arc::new(Site::default_window().unwrap())
    }

    #[test]
    fn representables_are_functorial() {
        let w = window();
        for o in 0..w.num_objects() {
            Presheaf::representable(&w, o).audit_functoriality().unwrap();
        }
        let t = Presheaf::representable(&w, w.point().unwrap());
        assert!(t.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn representable_interval_at_square() {
        let w = window();
        let i2 = w.find_object(&cube(2)).unwrap();
        let y = Presheaf::representable(&w, w.interval().unwrap());
        // monotone maps I^2 -> I: the six up-sets of I^2
        assert_eq!(y.size(i2), 6);
    }

    #[test]
    fn nerves() {
        let s = simplex_site(3).unwrap();
        let nt = nerve(&terminal(), &s).unwrap();
        assert!(nt.sizes().iter().all(|&k| k == 1));
        let ni = nerve(&ordinal(1), &s).unwrap();
        assert_eq!(&ni.sizes()[..2], &[2, 3]);
        assert_eq!(ni.nondegenerate(1).len(), 1);
        let n2 = nerve(&cube(2), &s).unwrap();
        n2.audit_functoriality().unwrap();
        assert_eq!(&n2.sizes()[..3], &[4, 9, 16]);
        assert_eq!(n2.nondegenerate(1).len(), 5);
        assert_eq!(n2.nondegenerate(2).len(), 2);
        assert_eq!(n2.nondegenerate(3).len(), 0);
        assert_eq!(n2.top_nondegenerate_dim(), Some(2));
        assert!(n2.is_skeletal());
    }

    #[test]
    fn products_and_coproducts() {
        let s = simplex_site(2).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let (p, pr0, pr1) = Presheaf::product(&d1, &d1).unwrap();
        p.audit_functoriality().unwrap();
        pr0.check_naturality().unwrap();
        pr1.check_naturality().unwrap();
        // Δ1 x Δ1 has two nondegenerate triangles
        assert_eq!(p.nondegenerate(2).len(), 2);
        let (c, inj) = Presheaf::coproduct(&[d1.clone(), d1.clone()]).unwrap();
        c.audit_functoriality().unwrap();
        assert_eq!(c.size(0), 4);
        assert!(inj.iter().all(|i| i.is_mono() && i.check_naturality().is_ok()));
    }

    #[test]
    fn functoriality_violation_is_reported() {
        let s = simplex_site(1).unwrap();
        let d1 = simp_representable(&s, 1).unwrap();
        let mut action: Vec<Vec<usize>> =
            (0..s.num_maps()).map(|f| d1.action_table(f).to_vec()).collect();
        // break a face map
        let d0 = s.coface(1, 0).unwrap();
        action[d0][2] = 1 - action[d0][2];
        let err = Presheaf::new(s.clone(), d1.sizes().to_vec(), action).unwrap_err();
        assert!(matches!(err, Error::NotFunctorial { .. }));
    }

    #[test]
    fn yoneda_maps_are_natural() {
        let w = window();
        let y = Presheaf::representable(&w, w.interval().unwrap());
        for o in 0..w.num_objects() {
            for e in 0..y.size(o) {
                NatTrans::yoneda(&w, o, &y, e).check_naturality().unwrap();
            }
        }
    }
}
