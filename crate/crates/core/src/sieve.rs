//! Sieves on window objects and the chain topology.
//!
//! A sieve on `L` covers iff it contains every chain `[n] -> L`. Chains
//! through ordinals longer than the height of `L` factor through shorter
//! ones, so only `n <= height(L)` is tested.

use crate::error::{Error, Result};
use crate::order::maximal_chains;
use crate::presheaf::{NatTrans, Presheaf};
use crate::site::{MapId, ObjId, SiteRef};
use crate::subobject::{subobject_enumerate_bounded, Subobject};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sieve {
    base: ObjId,
    sub: Subobject,
}

/// Outcome of a covering test; `missing` names the first absent chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverVerdict {
    pub covering: bool,
    pub missing: Option<MapId>,
}

impl Sieve {
    pub fn from_subobject(base: ObjId, sub: Subobject) -> Result<Self> {
        let site = sub.parent().site();
        if *sub.parent() != Presheaf::representable(site, base) {
            return Err(Error::Invalid("a sieve is a subobject of a representable".into()));
        }
        Ok(Sieve { base, sub })
    }

    /// Sieve given by membership of maps `M -> base`.
    pub fn from_maps(site: &SiteRef, base: ObjId, keep: impl Fn(MapId) -> bool) -> Result<Self> {
        let y = Presheaf::representable(site, base);
        let members = (0..site.num_objects())
            .map(|m| site.hom(m, base).iter().map(|&g| keep(g)).collect())
            .collect();
        Self::from_subobject(base, Subobject::new(&y, members)?)
    }

    pub fn maximal(site: &SiteRef, base: ObjId) -> Self {
        let y = Presheaf::representable(site, base);
        Sieve { base, sub: Subobject::full(&y) }
    }

    pub fn empty(site: &SiteRef, base: ObjId) -> Self {
        let y = Presheaf::representable(site, base);
        Sieve { base, sub: Subobject::empty(&y) }
    }

    pub fn base(&self) -> ObjId {
        self.base
    }

    pub fn site(&self) -> &SiteRef {
        self.sub.parent().site()
    }

    pub fn subobject(&self) -> &Subobject {
        &self.sub
    }

    pub fn contains(&self, g: MapId) -> bool {
        self.sub.contains(self.site().map(g).src, self.site().hom_position(g))
    }

    pub fn is_subset_of(&self, other: &Sieve) -> bool {
        self.base == other.base && self.sub.is_subset_of(&other.sub)
    }

    /// The sieve as a presheaf with its inclusion into the representable.
    pub fn to_presheaf(&self) -> (Presheaf, NatTrans) {
        self.sub.to_presheaf()
    }

    pub fn is_covering(&self) -> Result<CoverVerdict> {
        let site = self.site();
        let h = site.object(self.base).height();
        for n in 0..=h {
            let ord = site.ordinal(n)?;
            if let Some(&c) = site.hom(ord, self.base).iter().find(|&&c| !self.contains(c)) {
                return Ok(CoverVerdict { covering: false, missing: Some(c) });
            }
        }
        Ok(CoverVerdict { covering: true, missing: None })
    }

    /// The idempotent form of the covering condition: each maximal chain of
    /// the base is the image of some idempotent endomap in the sieve.
    pub fn covers_by_idempotents(&self) -> bool {
        let site = self.site();
        let b = self.base;
        let endo = site.hom(b, b);
        maximal_chains(site.object(b)).iter().all(|chain| {
            endo.iter().any(|&r| {
                let t = &site.map(r).table;
                self.contains(r)
                    && t.iter().all(|&y| t[y] == y)
                    && {
                        let mut img = t.clone();
                        img.sort_unstable();
                        img.dedup();
                        img == *chain
                    }
            })
        })
    }
}

/// Maps into `base` whose image lies in a maximal chain, i.e. is totally
/// ordered.
pub fn least_cover(site: &SiteRef, base: ObjId) -> Sieve {
    let l = site.object(base).poset().clone();
    Sieve::from_maps(site, base, |g| {
        let mut img = site.map(g).table.clone();
        img.sort_unstable();
        img.dedup();
        l.is_chain_subset(&img)
    })
    .expect("image-in-a-chain maps are closed under precomposition")
}

/// Sieves on `base` in enumeration order, at most `cap`; the flag reports
/// whether the list is complete.
pub fn sieve_enumerate(site: &SiteRef, base: ObjId, cap: usize) -> Result<(Vec<Sieve>, bool)> {
    let y = Presheaf::representable(site, base);
    let (subs, complete) = subobject_enumerate_bounded(&y, cap)?;
    Ok((subs.into_iter().map(|sub| Sieve { base, sub }).collect(), complete))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::cube;
    use crate::site::Site;
    use std::sync::Arc;

    fn window() -> SiteRef {
        Arc::new(Site::default_window().unwrap())
    }

    #[test]
    fn maximal_and_empty() {
        let w = window();
        let i = w.interval().unwrap();
        assert!(Sieve::maximal(&w, i).is_covering().unwrap().covering);
        let v = Sieve::empty(&w, i).is_covering().unwrap();
        assert!(!v.covering);
        assert!(v.missing.is_some());
    }

    #[test]
    fn least_cover_of_interval_is_maximal() {
        let w = window();
        let i = w.interval().unwrap();
        assert_eq!(least_cover(&w, i), Sieve::maximal(&w, i));
    }

    #[test]
    fn least_cover_of_square() {
        let w = window();
        let sq = w.find_object(&cube(2)).unwrap();
        let lc = least_cover(&w, sq);
        assert!(lc.is_covering().unwrap().covering);
        assert!(lc.covers_by_idempotents());
        let pt = w.point().unwrap();
        assert!(w.hom(pt, sq).iter().all(|&g| lc.contains(g)));
        assert!(!lc.contains(w.identity(sq)));
    }

    #[test]
    fn dropping_a_chain_breaks_the_cover() {
        let w = window();
        let sq = w.find_object(&cube(2)).unwrap();
        let two = w.ordinal(2).unwrap();
        // The maximal chain 0 < 1 < 3 as a map [2] -> I^2.
        let chain = w.map_id(two, sq, &[0, 1, 3]).unwrap();
        let lc = least_cover(&w, sq);
        // Largest subsieve of the least cover avoiding that chain: drop
        // every member through which the chain factors.
        let smaller = Sieve::from_maps(&w, sq, |g| {
            lc.contains(g) && !w.hom(two, w.map(g).src).iter().any(|&h| w.compose(h, g) == chain)
        })
        .unwrap();
        let v = smaller.is_covering().unwrap();
        assert!(!v.covering);
        assert!(!smaller.covers_by_idempotents());
    }

    #[test]
    fn chain_and_idempotent_covers_agree() {
        let w = window();
        for base in 0..w.num_objects() {
            let (sieves, complete) = sieve_enumerate(&w, base, 4096).unwrap();
            assert!(complete);
            for s in &sieves {
                assert_eq!(s.is_covering().unwrap().covering, s.covers_by_idempotents(), "{}", w.name(base));
            }
        }
    }

    #[test]
    fn missing_ordinals_are_reported() {
        let w = Arc::new(Site::named_window("ord1+I2").unwrap());
        let sq = w.find_object(&cube(2)).unwrap();
        assert_eq!(Sieve::maximal(&w, sq).is_covering(), Err(Error::MissingOrdinal(2)));
    }
}
