//! Finite full subcategories of the category of finite lattices.
//!
//! A [`Site`] is either the truncated simplex category `Δ≤D` (objects the
//! ordinals `[0..=D]`) or a lattice window: a finite list of lattices with
//! every monotone map between them. Both are full subcategories, so hom-sets
//! are plain [`hom_tables`] results and composition is table composition.
//!
//! Maps are numbered globally: for each source `a` ascending, each target
//! `b` ascending, the lexicographically sorted tables of `hom(a, b)`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::order::{self, hom_tables, FinLattice, DEFAULT_HOM_CAP};

pub type ObjId = usize;
pub type MapId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SiteKind {
    /// `Δ≤D`.
    Simplex(usize),
    /// A named lattice window.
    Window(String),
}

#[derive(Debug, Clone)]
pub struct SiteMap {
    pub src: ObjId,
    pub dst: ObjId,
    pub table: Vec<usize>,
}

#[derive(Debug)]
pub struct Site {
    kind: SiteKind,
    objects: Vec<FinLattice>,
    names: Vec<String>,
    maps: Vec<SiteMap>,
    hom: Vec<Vec<Vec<MapId>>>,
    lookup: Vec<Vec<HashMap<Vec<usize>, MapId>>>,
    identities: Vec<MapId>,
    /// Non-identity maps into each object.
    maps_into: Vec<Vec<MapId>>,
    /// A generating subset of `maps_into`: every map is a composite of these.
    generators_into: Vec<Vec<MapId>>,
    /// First map id with source `b`; maps are sorted by source.
    out_start: Vec<usize>,
    /// `comp[f][g - out_start[dst f]] = g ∘ f`.
    comp: Vec<Vec<MapId>>,
    /// `ordinals[n]` is the object equal to `[n]`, if present.
    ordinals: Vec<ObjId>,
    products_with_interval: Vec<Option<ObjId>>,
}

impl PartialEq for Site {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.objects == other.objects
    }
}

impl Eq for Site {}

/// Lattice names used by the default window and the command line.
pub fn named_lattice(name: &str) -> Option<FinLattice> {
    let name = name.trim();
    if name == "I" {
        return Some(order::ordinal(1));
    }
    if name == "pt" || name == "terminal" {
        return Some(order::terminal());
    }
    if let Some(n) = name.strip_prefix('I').and_then(|r| r.parse::<usize>().ok()) {
        return order::cube_capped(n, 256).ok();
    }
    if let Some(n) = name
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .or_else(|| name.strip_prefix("ord"))
        .and_then(|r| r.parse::<usize>().ok())
    {
        return Some(order::ordinal(n));
    }
    None
}

impl Site {
    pub fn simplex(dim: usize) -> Result<Self> {
        let objects = (0..=dim).map(order::ordinal).collect();
        let names = (0..=dim).map(|n| format!("[{n}]")).collect();
        Self::build(SiteKind::Simplex(dim), objects, names)
    }

    pub fn window(name: &str, objects: Vec<(String, FinLattice)>) -> Result<Self> {
        let (names, objects) = objects.into_iter().unzip();
        Self::build(SiteKind::Window(name.to_string()), objects, names)
    }

    /// Sublattice representatives of `I^2` (`[0]`, `[1]`, `[2]`, `I^2`) and
    /// the ordinals up to `[3]`.
    pub fn default_window() -> Result<Self> {
        Self::named_window("default")
    }

    /// `default`, `ord<N>` (ordinals `[0..=N]`), or `ord<N>+<lattice>,...`.
    pub fn named_window(name: &str) -> Result<Self> {
        let (base, extra) = match name.split_once('+') {
            Some((b, e)) => (b, e.split(',').collect::<Vec<_>>()),
            None => (name, Vec::new()),
        };
        let mut objs: Vec<(String, FinLattice)> = match base {
            "default" => ["[0]", "[1]", "[2]", "[3]", "I2"]
                .iter()
                .map(|n| (n.to_string(), named_lattice(n).unwrap()))
                .collect(),
            _ => {
                let n = base
                    .strip_prefix("ord")
                    .and_then(|r| r.parse::<usize>().ok())
                    .ok_or_else(|| Error::Invalid(format!("unknown window {name}")))?;
                (0..=n).map(|k| (format!("[{k}]"), order::ordinal(k))).collect()
            }
        };
        for e in extra {
            let l = named_lattice(e).ok_or_else(|| Error::Invalid(format!("unknown lattice {e}")))?;
            if !objs.iter().any(|(_, o)| *o == l) {
                objs.push((e.to_string(), l));
            }
        }
        Self::window(name, objs)
    }

    fn build(kind: SiteKind, objects: Vec<FinLattice>, names: Vec<String>) -> Result<Self> {
        let n = objects.len();
        let mut maps = Vec::new();
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut lookup = vec![vec![HashMap::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                for table in hom_tables(objects[a].poset(), objects[b].poset(), DEFAULT_HOM_CAP)? {
                    let id = maps.len();
                    lookup[a][b].insert(table.clone(), id);
                    hom[a][b].push(id);
                    maps.push(SiteMap { src: a, dst: b, table });
                }
            }
        }
        let identities: Vec<MapId> = (0..n)
            .map(|a| lookup[a][a][&(0..objects[a].size()).collect::<Vec<_>>()])
            .collect();
        let mut maps_into = vec![Vec::new(); n];
        for (id, m) in maps.iter().enumerate() {
            if identities[m.dst] != id {
                maps_into[m.dst].push(id);
            }
        }
        let mut out_start = vec![maps.len(); n + 1];
        for (id, m) in maps.iter().enumerate().rev() {
            out_start[m.src] = id;
        }
        for b in (0..n).rev() {
            out_start[b] = out_start[b].min(out_start[b + 1]);
        }
        let comp: Vec<Vec<MapId>> = maps
            .iter()
            .map(|mf| {
                maps[out_start[mf.dst]..out_start[mf.dst + 1]]
                    .iter()
                    .map(|mg| {
                        let table: Vec<usize> = mf.table.iter().map(|&x| mg.table[x]).collect();
                        lookup[mf.src][mg.dst][&table]
                    })
                    .collect()
            })
            .collect();
        let generators_into = generating_maps(&maps, &identities, &out_start, &comp, n);
        let mut ordinals = Vec::new();
        while let Some(pos) = objects.iter().position(|o| *o == order::ordinal(ordinals.len())) {
            ordinals.push(pos);
        }
        let mut site = Site {
            kind,
            objects,
            names,
            maps,
            hom,
            lookup,
            identities,
            maps_into,
            generators_into,
            out_start,
            comp,
            ordinals,
            products_with_interval: Vec::new(),
        };
        site.products_with_interval = (0..n)
            .map(|a| {
                let p = order::product(&site.objects[a], &order::ordinal(1)).ok()?;
                site.objects
                    .iter()
                    .position(|o| order::find_isomorphism(o.poset(), p.poset()).is_some())
            })
            .collect();
        Ok(site)
    }

    pub fn kind(&self) -> &SiteKind {
        &self.kind
    }

    /// Truncation dimension of a simplex site.
    pub fn simplex_dim(&self) -> Option<usize> {
        match self.kind {
            SiteKind::Simplex(d) => Some(d),
            SiteKind::Window(_) => None,
        }
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplex_dim().is_some()
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            SiteKind::Simplex(d) => format!("simp D={d}"),
            SiteKind::Window(name) => format!("window {name} [{}]", self.names.join(" ")),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, o: ObjId) -> &FinLattice {
        &self.objects[o]
    }

    pub fn objects(&self) -> &[FinLattice] {
        &self.objects
    }

    pub fn name(&self, o: ObjId) -> &str {
        &self.names[o]
    }

    pub fn find_object(&self, l: &FinLattice) -> Option<ObjId> {
        self.objects.iter().position(|o| o == l)
    }

    pub fn num_maps(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, f: MapId) -> &SiteMap {
        &self.maps[f]
    }

    pub fn maps(&self) -> &[SiteMap] {
        &self.maps
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MapId] {
        &self.hom[a][b]
    }

    pub fn map_id(&self, a: ObjId, b: ObjId, table: &[usize]) -> Option<MapId> {
        self.lookup[a][b].get(table).copied()
    }

    /// Position of `f` inside `hom(src f, dst f)`.
    pub fn hom_position(&self, f: MapId) -> usize {
        let m = &self.maps[f];
        f - self.hom[m.src][m.dst][0]
    }

    pub fn identity(&self, a: ObjId) -> MapId {
        self.identities[a]
    }

    pub fn is_identity(&self, f: MapId) -> bool {
        self.identities[self.maps[f].src] == f
    }

    pub fn maps_into(&self, b: ObjId) -> &[MapId] {
        &self.maps_into[b]
    }

    /// Non-identity maps into `b` from which every map into `b` is a
    /// composite.
    pub fn generators_into(&self, b: ObjId) -> &[MapId] {
        &self.generators_into[b]
    }

    /// `g ∘ f` for `f: a -> b`, `g: b -> c`.
    pub fn compose(&self, f: MapId, g: MapId) -> MapId {
        let b = self.maps[f].dst;
        debug_assert_eq!(b, self.maps[g].src);
        self.comp[f][g - self.out_start[b]]
    }

    /// The constant map `a -> b` with value `v`.
    pub fn constant(&self, a: ObjId, b: ObjId, v: usize) -> MapId {
        let table = vec![v; self.objects[a].size()];
        self.lookup[a][b][&table]
    }

    /// Object equal to the ordinal `[n]`.
    pub fn ordinal(&self, n: usize) -> Result<ObjId> {
        self.ordinals.get(n).copied().ok_or(Error::MissingOrdinal(n))
    }

    /// Largest `D` with `[0..=D]` all present.
    pub fn max_ordinal(&self) -> Option<usize> {
        self.ordinals.len().checked_sub(1)
    }

    pub fn point(&self) -> Result<ObjId> {
        self.ordinal(0)
    }

    pub fn interval(&self) -> Result<ObjId> {
        self.ordinal(1)
    }

    /// The designated object isomorphic to `L x I`, when present.
    pub fn product_with_interval(&self, a: ObjId) -> Option<ObjId> {
        self.products_with_interval[a]
    }

    /// Window map ids corresponding to the maps of `simp` (whose ordinals
    /// must be present here with identical numbering).
    pub fn embedding_of(&self, simp: &Site) -> Result<Vec<MapId>> {
        let d = simp.simplex_dim().ok_or(Error::SiteMismatch)?;
        let objs: Vec<ObjId> = (0..=d).map(|n| self.ordinal(n)).collect::<Result<_>>()?;
        Ok(simp
            .maps
            .iter()
            .map(|m| self.lookup[objs[m.src]][objs[m.dst]][&m.table])
            .collect())
    }

    /// Simplicial coface `d^i: [n-1] -> [n]` (skips `i`).
    pub fn coface(&self, n: usize, i: usize) -> Result<MapId> {
        let table: Vec<usize> = (0..n).map(|k| if k < i { k } else { k + 1 }).collect();
        Ok(self.lookup[self.ordinal(n - 1)?][self.ordinal(n)?][&table])
    }

    /// Simplicial codegeneracy `s^i: [n+1] -> [n]` (repeats `i`).
    pub fn codegeneracy(&self, n: usize, i: usize) -> Result<MapId> {
        let table: Vec<usize> = (0..n + 2).map(|k| if k <= i { k } else { k - 1 }).collect();
        Ok(self.lookup[self.ordinal(n + 1)?][self.ordinal(n)?][&table])
    }

    /// Cofaces and codegeneracies of a simplex site, in a fixed order.
    pub fn simplicial_generators(&self) -> Vec<MapId> {
        let Some(d) = self.max_ordinal() else { return Vec::new() };
        let mut out = Vec::new();
        for n in 1..=d {
            for i in 0..=n {
                out.push(self.coface(n, i).unwrap());
            }
        }
        for n in 0..d {
            for i in 0..=n {
                out.push(self.codegeneracy(n, i).unwrap());
            }
        }
        out
    }
}

/// Greedy generating set: maps are visited by how far their image falls
/// short of the smaller side, then by how much they change the size of the
/// object, and kept when not already a composite of kept maps.
fn generating_maps(
    maps: &[SiteMap],
    identities: &[MapId],
    out_start: &[usize],
    comp: &[Vec<MapId>],
    n: usize,
) -> Vec<Vec<MapId>> {
    let size = |o: ObjId| maps[identities[o]].table.len();
    let mut order: Vec<MapId> = (0..maps.len()).filter(|&f| identities[maps[f].src] != f).collect();
    let deficiency = |f: MapId| {
        let mut img = maps[f].table.clone();
        img.sort_unstable();
        img.dedup();
        size(maps[f].src).min(size(maps[f].dst)) - img.len()
    };
    order.sort_by_key(|&f| (deficiency(f), size(maps[f].src).abs_diff(size(maps[f].dst)), f));
    let mut closed = vec![false; maps.len()];
    for &i in identities {
        closed[i] = true;
    }
    // Closed maps grouped by target, to extend composites on the left.
    let mut closed_into: Vec<Vec<MapId>> = vec![Vec::new(); n];
    for (o, &i) in identities.iter().enumerate() {
        closed_into[o].push(i);
    }
    let mut gens = vec![Vec::new(); n];
    for f in order {
        if closed[f] {
            continue;
        }
        gens[maps[f].dst].push(f);
        closed[f] = true;
        closed_into[maps[f].dst].push(f);
        let mut queue = vec![f];
        while let Some(m) = queue.pop() {
            let (a, b) = (maps[m].src, maps[m].dst);
            let mut fresh: Vec<MapId> = closed_into[a]
                .iter()
                .map(|&c| comp[c][m - out_start[a]])
                .filter(|&cm| !closed[cm])
                .collect();
            fresh.extend(
                comp[m]
                    .iter()
                    .enumerate()
                    .filter(|&(k, &gm)| closed[out_start[b] + k] && !closed[gm])
                    .map(|(_, &gm)| gm),
            );
            for x in fresh {
                if !closed[x] {
                    closed[x] = true;
                    closed_into[maps[x].dst].push(x);
                    queue.push(x);
                }
            }
        }
    }
    for g in &mut gens {
        g.sort_unstable();
    }
    gens
}

pub type SiteRef = Arc<Site>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_generate() {
        for site in [Site::simplex(3).unwrap(), Site::default_window().unwrap()] {
            let mut reached: Vec<bool> = (0..site.num_maps()).map(|f| site.is_identity(f)).collect();
            let mut frontier: Vec<MapId> = (0..site.num_maps()).filter(|&f| reached[f]).collect();
            while let Some(m) = frontier.pop() {
                let a = site.map(m).src;
                for &g in site.generators_into(a) {
                    let gm = site.compose(g, m);
                    if !reached[gm] {
                        reached[gm] = true;
                        frontier.push(gm);
                    }
                }
            }
            assert!(reached.iter().all(|&r| r));
        }
        let s = Site::simplex(3).unwrap();
        let total: usize = (0..4).map(|b| s.generators_into(b).len()).sum();
        // cofaces and codegeneracies
        assert_eq!(total, 9 + 6);
    }

    #[test]
    fn composition_table_matches_tables() {
        let s = Site::default_window().unwrap();
        for f in 0..s.num_maps() {
            let b = s.map(f).dst;
            for b2 in 0..s.num_objects() {
                for &g in s.hom(b, b2) {
                    let t: Vec<usize> = s.map(f).table.iter().map(|&x| s.map(g).table[x]).collect();
                    assert_eq!(s.map(s.compose(f, g)).table, t);
                }
            }
        }
    }

    #[test]
    fn simplex_site_hom_counts() {
        let s = Site::simplex(3).unwrap();
        // |hom([m],[n])| = C(m+n+1, m+1)
        let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
        for m in 0..=3 {
            for n in 0..=3 {
                assert_eq!(s.hom(m, n).len(), binom(m + n + 1, m + 1));
            }
        }
        assert_eq!(s.max_ordinal(), Some(3));
        assert_eq!(s.simplicial_generators().len(), (2 + 3 + 4) + (1 + 2 + 3));
    }

    #[test]
    fn composition_and_identities() {
        let w = Site::default_window().unwrap();
        for f in 0..w.num_maps() {
            let m = w.map(f);
            assert_eq!(w.compose(w.identity(m.src), f), f);
            assert_eq!(w.compose(f, w.identity(m.dst)), f);
        }
    }

    #[test]
    fn default_window_shape() {
        let w = Site::default_window().unwrap();
        assert_eq!(w.num_objects(), 5);
        assert_eq!(w.max_ordinal(), Some(3));
        let i2 = w.find_object(&order::cube(2)).unwrap();
        assert_eq!(w.product_with_interval(w.interval().unwrap()), Some(i2));
        assert_eq!(w.product_with_interval(w.point().unwrap()), w.interval().ok());
        assert_eq!(w.product_with_interval(i2), None);
        let simp = Site::simplex(3).unwrap();
        let emb = w.embedding_of(&simp).unwrap();
        assert_eq!(emb.len(), simp.num_maps());
    }

    #[test]
    fn lattice_names() {
        assert_eq!(named_lattice("I2").unwrap(), order::cube(2));
        assert_eq!(named_lattice("[2]").unwrap(), order::ordinal(2));
        assert_eq!(named_lattice("ord3").unwrap(), order::ordinal(3));
        assert!(named_lattice("Q").is_none());
    }
}
