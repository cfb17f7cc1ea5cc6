//! Finite posets, finite lattices and monotone maps.
//!
//! Elements are positions `0..size`. Nothing here identifies objects up to
//! isomorphism implicitly; [`find_isomorphism`] is the explicit search.
//!
//! Numbering conventions:
//! * the ordinal `[n]` has elements `0 < 1 < ... < n`;
//! * the cube `I^n` numbers a vector by its binary encoding, bit `i` holding
//!   coordinate `i`;
//! * a product `L x M` numbers the pair `(a, b)` as `a * |M| + b`.

use std::sync::Arc;

use crate::error::{Error, MissingBound, Result};

/// Default cap on candidate extensions explored by [`hom_tables`].
pub const DEFAULT_HOM_CAP: u64 = 1_000_000;
/// Default cap on the number of elements of a constructed lattice.
pub const DEFAULT_SIZE_CAP: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinPoset {
    size: usize,
    leq: Vec<bool>,
}

impl FinPoset {
    /// Builds a poset from a full `size x size` truth table (`leq[x * size + y]`
    /// is `x <= y`).
    pub fn from_table(size: usize, leq: Vec<bool>) -> Result<Self> {
        Self::from_table_with(size, leq, false)
    }

    pub fn from_table_with(size: usize, leq: Vec<bool>, allow_empty: bool) -> Result<Self> {
        if size == 0 && !allow_empty {
            return Err(Error::EmptyPoset);
        }
        if leq.len() != size * size {
            return Err(Error::NotAPoset(format!(
                "table has {} entries, expected {}",
                leq.len(),
                size * size
            )));
        }
        let p = FinPoset { size, leq };
        for x in 0..size {
            if !p.leq(x, x) {
                return Err(Error::NotAPoset(format!("{x} <= {x} fails")));
            }
            for y in 0..size {
                if x != y && p.leq(x, y) && p.leq(y, x) {
                    return Err(Error::NotAPoset(format!("antisymmetry fails for {x} and {y}")));
                }
                for z in 0..size {
                    if p.leq(x, y) && p.leq(y, z) && !p.leq(x, z) {
                        return Err(Error::NotAPoset(format!(
                            "transitivity fails for {x} <= {y} <= {z}"
                        )));
                    }
                }
            }
        }
        Ok(p)
    }

    /// Reflexive-transitive closure of the generating pairs `x <= y`.
    pub fn from_generators(size: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::from_generators_with(size, pairs, false)
    }

    pub fn from_generators_with(
        size: usize,
        pairs: &[(usize, usize)],
        allow_empty: bool,
    ) -> Result<Self> {
        let mut leq = vec![false; size * size];
        for x in 0..size {
            leq[x * size + x] = true;
        }
        for &(x, y) in pairs {
            if x >= size || y >= size {
                return Err(Error::NotAPoset(format!("pair ({x}, {y}) out of range")));
            }
            leq[x * size + y] = true;
        }
        // Warshall
        for k in 0..size {
            for i in 0..size {
                if leq[i * size + k] {
                    for j in 0..size {
                        if leq[k * size + j] {
                            leq[i * size + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_table_with(size, leq, allow_empty)
    }

    /// The ordinal `[n]`, a chain on `n + 1` elements.
    pub fn ordinal(n: usize) -> Self {
        let size = n + 1;
        let leq = (0..size * size).map(|k| k / size <= k % size).collect();
        FinPoset { size, leq }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.size + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    pub fn is_total(&self) -> bool {
        (0..self.size).all(|x| (0..self.size).all(|y| self.comparable(x, y)))
    }

    /// Is the subset totally ordered?
    pub fn is_chain_subset(&self, elems: &[usize]) -> bool {
        elems
            .iter()
            .all(|&x| elems.iter().all(|&y| self.comparable(x, y)))
    }

    pub fn incomparable_pairs(&self) -> usize {
        let mut n = 0;
        for x in 0..self.size {
            for y in x + 1..self.size {
                if !self.comparable(x, y) {
                    n += 1;
                }
            }
        }
        n
    }

    /// Elements sorted so that `x < y` implies `x` comes first; ties by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        let below = |x: usize| (0..self.size).filter(|&y| self.lt(y, x)).count();
        order.sort_by_key(|&x| (below(x), x));
        order
    }

    /// Length of the longest strict chain minus one; the top dimension of
    /// the nerve's nondegenerate simplices.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut depth = vec![0usize; self.size];
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[..i] {
                if self.lt(y, x) {
                    depth[x] = depth[x].max(depth[y] + 1);
                }
            }
        }
        depth.into_iter().max().unwrap_or(0)
    }

    /// `y` covers `x`: `x < y` with nothing strictly between.
    pub fn covers(&self, x: usize, y: usize) -> bool {
        self.lt(x, y) && !(0..self.size).any(|z| self.lt(x, z) && self.lt(z, y))
    }

    /// The subposet on `elems`, numbered in the given order.
    pub fn induced(&self, elems: &[usize]) -> Result<Self> {
        let k = elems.len();
        let leq = (0..k * k)
            .map(|i| self.leq(elems[i / k], elems[i % k]))
            .collect();
        Self::from_table(k, leq)
    }

    pub fn pairs_leq(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in 0..self.size {
                if self.leq(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinLattice {
    poset: Arc<FinPoset>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bot: usize,
    top: usize,
}

/// Computes meets, joins, bottom and top, or names a pair lacking a bound.
pub fn validate_lattice(p: &FinPoset) -> Result<FinLattice> {
    let n = p.size();
    if n == 0 {
        return Err(Error::EmptyPoset);
    }
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            let lower: Vec<usize> = (0..n).filter(|&z| p.leq(z, x) && p.leq(z, y)).collect();
            match lower.iter().find(|&&g| lower.iter().all(|&z| p.leq(z, g))) {
                Some(&g) => meet[x * n + y] = g,
                None => {
                    return Err(Error::NotALattice { x, y, missing: MissingBound::Meet });
                }
            }
            let upper: Vec<usize> = (0..n).filter(|&z| p.leq(x, z) && p.leq(y, z)).collect();
            match upper.iter().find(|&&l| upper.iter().all(|&z| p.leq(l, z))) {
                Some(&l) => join[x * n + y] = l,
                None => {
                    return Err(Error::NotALattice { x, y, missing: MissingBound::Join });
                }
            }
        }
    }
    // A finite poset with all binary meets and joins is nonempty-bounded.
    let bot = (0..n).fold(0, |acc, x| meet[acc * n + x]);
    let top = (0..n).fold(0, |acc, x| join[acc * n + x]);
    Ok(FinLattice { poset: Arc::new(p.clone()), meet, join, bot, top })
}

impl FinLattice {
    pub fn poset(&self) -> &FinPoset {
        &self.poset
    }

    pub fn poset_arc(&self) -> Arc<FinPoset> {
        self.poset.clone()
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size() + y]
    }

    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size() + y]
    }

    pub fn bot(&self) -> usize {
        self.bot
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn height(&self) -> usize {
        self.poset.height()
    }

    pub fn join_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }
}

pub fn terminal() -> FinLattice {
    ordinal(0)
}

pub fn ordinal(n: usize) -> FinLattice {
    validate_lattice(&FinPoset::ordinal(n)).expect("ordinals are lattices")
}

/// The cube `I^n` with binary numbering.
pub fn cube(n: usize) -> FinLattice {
    cube_capped(n, DEFAULT_SIZE_CAP).expect("cube within default size cap")
}

pub fn cube_capped(n: usize, cap: usize) -> Result<FinLattice> {
    let size = 1usize
        .checked_shl(n as u32)
        .filter(|&s| s <= cap)
        .ok_or(Error::SizeCap { what: "cube", size: usize::MAX, cap })?;
    let leq = (0..size * size)
        .map(|k| {
            let (x, y) = (k / size, k % size);
            x & !y == 0
        })
        .collect();
    let poset = FinPoset { size, leq };
    let meet = (0..size * size).map(|k| (k / size) & (k % size)).collect();
    let join = (0..size * size).map(|k| (k / size) | (k % size)).collect();
    Ok(FinLattice { poset: Arc::new(poset), meet, join, bot: 0, top: size - 1 })
}

pub fn product(l: &FinLattice, m: &FinLattice) -> Result<FinLattice> {
    product_capped(l, m, DEFAULT_SIZE_CAP)
}

pub fn product_capped(l: &FinLattice, m: &FinLattice, cap: usize) -> Result<FinLattice> {
    let (a, b) = (l.size(), m.size());
    let size = a * b;
    if size > cap {
        return Err(Error::SizeCap { what: "product", size, cap });
    }
    let split = |k: usize| (k / b, k % b);
    let mut leq = vec![false; size * size];
    let mut meet = vec![0; size * size];
    let mut join = vec![0; size * size];
    for x in 0..size {
        let (x0, x1) = split(x);
        for y in 0..size {
            let (y0, y1) = split(y);
            leq[x * size + y] = l.leq(x0, y0) && m.leq(x1, y1);
            meet[x * size + y] = l.meet(x0, y0) * b + m.meet(x1, y1);
            join[x * size + y] = l.join(x0, y0) * b + m.join(x1, y1);
        }
    }
    Ok(FinLattice {
        poset: Arc::new(FinPoset { size, leq }),
        meet,
        join,
        bot: l.bot() * b + m.bot(),
        top: l.top() * b + m.top(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    src: Arc<FinPoset>,
    dst: Arc<FinPoset>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(src: Arc<FinPoset>, dst: Arc<FinPoset>, table: Vec<usize>) -> Result<Self> {
        if table.len() != src.size() {
            return Err(Error::Invalid(format!(
                "map table has {} entries for a source of size {}",
                table.len(),
                src.size()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= dst.size()) {
            return Err(Error::Invalid(format!("image {bad} outside target")));
        }
        for (x, y) in src.pairs_leq() {
            if !dst.leq(table[x], table[y]) {
                return Err(Error::NotMonotone { x, y, fx: table[x], fy: table[y] });
            }
        }
        Ok(MonotoneMap { src, dst, table })
    }

    pub(crate) fn new_unchecked(src: Arc<FinPoset>, dst: Arc<FinPoset>, table: Vec<usize>) -> Self {
        MonotoneMap { src, dst, table }
    }

    pub fn identity(p: Arc<FinPoset>) -> Self {
        let table = (0..p.size()).collect();
        MonotoneMap { src: p.clone(), dst: p, table }
    }

    pub fn src(&self) -> &FinPoset {
        &self.src
    }

    pub fn dst(&self) -> &FinPoset {
        &self.dst
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> Result<MonotoneMap> {
        if *self.dst != *other.src {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        let table = self.table.iter().map(|&x| other.table[x]).collect();
        Ok(MonotoneMap { src: self.src.clone(), dst: other.dst.clone(), table })
    }

    pub fn is_idempotent(&self) -> bool {
        *self.src == *self.dst && self.table.iter().all(|&y| self.table[y] == y)
    }

    /// Sorted, deduplicated image.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.table.len()
    }
}

/// A monotone map out of an ordinal `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain(MonotoneMap);

impl Chain {
    pub fn new(map: MonotoneMap) -> Result<Self> {
        if !map.src().is_total() {
            return Err(Error::Invalid("chain source is not linearly ordered".into()));
        }
        Ok(Chain(map))
    }

    /// `n` for a chain `[n] -> L`.
    pub fn length(&self) -> usize {
        self.0.src().size() - 1
    }

    pub fn map(&self) -> &MonotoneMap {
        &self.0
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.0.is_injective()
    }
}

/// All monotone tables `p -> q`, lexicographically ordered.
///
/// Backtracks along a linear extension of `p`, pruning on monotonicity.
/// `cap` bounds the number of candidate extensions tried.
pub fn hom_tables(p: &FinPoset, q: &FinPoset, cap: u64) -> Result<Vec<Vec<usize>>> {
    let n = p.size();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    if q.size() == 0 {
        return Ok(Vec::new());
    }
    let order = p.linear_extension();
    // Earlier elements of the extension lying below each position.
    let preds: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &x)| order[..i].iter().copied().filter(|&y| p.lt(y, x)).collect())
        .collect();
    let mut table = vec![usize::MAX; n];
    let mut out = Vec::new();
    let mut tried = 0u64;
    // Explicit stack of next candidate value per depth.
    let mut next = vec![0usize; n];
    let mut depth = 0usize;
    loop {
        let x = order[depth];
        let mut placed = false;
        while next[depth] < q.size() {
            let v = next[depth];
            next[depth] += 1;
            tried += 1;
            if tried > cap {
                return Err(Error::BudgetExceeded { what: "enumerating monotone maps", budget: cap });
            }
            if preds[depth].iter().all(|&y| q.leq(table[y], v)) {
                table[x] = v;
                placed = true;
                break;
            }
        }
        if placed {
            if depth + 1 == n {
                out.push(table.clone());
            } else {
                depth += 1;
                next[depth] = 0;
            }
        } else {
            table[x] = usize::MAX;
            if depth == 0 {
                break;
            }
            depth -= 1;
        }
    }
    out.sort();
    Ok(out)
}

pub fn hom_enumerate(p: &Arc<FinPoset>, q: &Arc<FinPoset>) -> Result<Vec<MonotoneMap>> {
    hom_enumerate_capped(p, q, DEFAULT_HOM_CAP)
}

pub fn hom_enumerate_capped(
    p: &Arc<FinPoset>,
    q: &Arc<FinPoset>,
    cap: u64,
) -> Result<Vec<MonotoneMap>> {
    Ok(hom_tables(p, q, cap)?
        .into_iter()
        .map(|t| MonotoneMap::new_unchecked(p.clone(), q.clone(), t))
        .collect())
}

/// All monotone maps `[n] -> l`.
pub fn chains_enumerate(l: &FinLattice, n: usize) -> Result<Vec<Chain>> {
    let src = Arc::new(FinPoset::ordinal(n));
    Ok(hom_enumerate(&src, &l.poset_arc())?.into_iter().map(Chain).collect())
}

/// All maximal totally ordered subsets, each sorted ascending by the order,
/// the list sorted lexicographically.
///
/// In a finite lattice these are the saturated paths from bottom to top.
pub fn maximal_chains(l: &FinLattice) -> Vec<Vec<usize>> {
    let p = l.poset();
    let mut out = Vec::new();
    let mut path = vec![l.bot()];
    fn walk(p: &FinPoset, top: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == top {
            out.push(path.clone());
            return;
        }
        for y in 0..p.size() {
            if p.covers(last, y) {
                path.push(y);
                walk(p, top, path, out);
                path.pop();
            }
        }
    }
    walk(p, l.top(), &mut path, &mut out);
    out.sort();
    out
}

/// Embeds `l` into the cube on `|l|` coordinates and retracts back.
///
/// `e(x)` has coordinate `a` set iff `a <= x`; `r(v)` is the join of the
/// coordinates set in `v`.
pub fn embed_retract(l: &FinLattice) -> Result<(MonotoneMap, MonotoneMap)> {
    let n = l.size();
    let c = cube_capped(n, DEFAULT_SIZE_CAP)?;
    let e_table: Vec<usize> = (0..n)
        .map(|x| (0..n).filter(|&a| l.leq(a, x)).fold(0usize, |acc, a| acc | (1 << a)))
        .collect();
    let r_table: Vec<usize> = (0..c.size())
        .map(|v| l.join_all((0..n).filter(|&a| v >> a & 1 == 1)))
        .collect();
    let e = MonotoneMap::new(l.poset_arc(), c.poset_arc(), e_table)?;
    let r = MonotoneMap::new(c.poset_arc(), l.poset_arc(), r_table)?;
    Ok((e, r))
}

/// The image of an idempotent with its section/retraction pair.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub lattice: FinLattice,
    /// Inclusion of the image.
    pub section: MonotoneMap,
    /// Corestriction of the idempotent onto its image.
    pub retraction: MonotoneMap,
}

pub fn split_idempotent(f: &MonotoneMap) -> Result<Splitting> {
    if *f.src != *f.dst {
        return Err(Error::Invalid("idempotent must be an endomap".into()));
    }
    if let Some(x) = (0..f.table.len()).find(|&x| f.table[f.table[x]] != f.table[x]) {
        return Err(Error::NotIdempotent(x));
    }
    let image = f.image();
    let sub = f.src.induced(&image)?;
    let lattice = validate_lattice(&sub)?;
    let pos = |v: usize| image.binary_search(&v).expect("value in image");
    let section = MonotoneMap::new(lattice.poset_arc(), f.src.clone(), image.clone())?;
    let retraction = MonotoneMap::new(
        f.src.clone(),
        lattice.poset_arc(),
        f.table.iter().map(|&v| pos(v)).collect(),
    )?;
    Ok(Splitting { lattice, section, retraction })
}

/// An order isomorphism `p -> q` as a table, if one exists.
pub fn find_isomorphism(p: &FinPoset, q: &FinPoset) -> Option<Vec<usize>> {
    let n = p.size();
    if n != q.size() {
        return None;
    }
    let sig = |r: &FinPoset, x: usize| {
        let up = (0..r.size()).filter(|&y| r.leq(x, y)).count();
        let down = (0..r.size()).filter(|&y| r.leq(y, x)).count();
        (up, down)
    };
    let mut table = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        p: &FinPoset,
        q: &FinPoset,
        table: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sig: &dyn Fn(&FinPoset, usize) -> (usize, usize),
    ) -> bool {
        if k == p.size() {
            return true;
        }
        for v in 0..q.size() {
            if used[v] || sig(p, k) != sig(q, v) {
                continue;
            }
            let ok = (0..k).all(|j| {
                p.leq(j, k) == q.leq(table[j], v) && p.leq(k, j) == q.leq(v, table[j])
            });
            if ok {
                table[k] = v;
                used[v] = true;
                if go(k + 1, p, q, table, used, sig) {
                    return true;
                }
                used[v] = false;
            }
        }
        table[k] = usize::MAX;
        false
    }
    if go(0, p, q, &mut table, &mut used, &sig) {
        Some(table)
    } else {
        None
    }
}
