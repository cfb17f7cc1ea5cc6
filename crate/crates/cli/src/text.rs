//! Line-oriented text formats for posets, monotone maps and presheaves.
//!
//! ```text
//! poset 3          map a.poset b.poset      simp 2 | cub default
//! le 0 1           to 0 0                   skeletal
//! le 1 2           to 1 1                   lvl 0 3
//!                                           act 4 0 1
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Presheaves list
//! the action of the site's generating maps only; the rest is recovered by
//! composition.

use std::collections::VecDeque;
use std::fmt::Write;
use std::sync::Arc;

use simpcube::order::{FinPoset, MonotoneMap};
use simpcube::presheaf::Presheaf;
use simpcube::site::{Site, SiteKind, SiteRef};
use simpcube::{Error, Result};

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let mut tokens = Vec::new();
        let mut start = None;
        for (c, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(c),
                (true, Some(s)) => {
                    tokens.push((s + 1, &raw[s..c]));
                    start = None;
                }
                _ => {}
            }
        }
        if tokens.is_empty() || tokens[0].1.starts_with('#') {
            None
        } else {
            Some(Line { number: i + 1, tokens })
        }
    })
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

impl Line<'_> {
    fn expect(&self, keyword: &str, arity: usize) -> Result<()> {
        let (c, k) = self.tokens[0];
        if k != keyword {
            return Err(err(self.number, c, format!("expected `{keyword}`, found `{k}`")));
        }
        if self.tokens.len() != arity + 1 {
            let c = self.tokens.get(arity + 1).map_or(c, |t| t.0);
            return Err(err(
                self.number,
                c,
                format!("`{keyword}` takes {arity} argument(s), found {}", self.tokens.len() - 1),
            ));
        }
        Ok(())
    }

    fn word(&self, i: usize) -> &str {
        self.tokens[i].1
    }

    fn number(&self, i: usize) -> Result<usize> {
        let (c, t) = self.tokens[i];
        t.parse().map_err(|_| err(self.number, c, format!("expected a number, found `{t}`")))
    }

    fn index(&self, i: usize, bound: usize, what: &str) -> Result<usize> {
        let v = self.number(i)?;
        if v >= bound {
            return Err(err(self.number, self.tokens[i].0, format!("{what} {v} out of range (< {bound})")));
        }
        Ok(v)
    }

    fn column(&self, i: usize) -> usize {
        self.tokens[i].0
    }
}

fn header<'a>(it: &mut impl Iterator<Item = Line<'a>>) -> Result<Line<'a>> {
    it.next().ok_or_else(|| err(1, 1, "empty input"))
}

/// Header keyword of a document, if any.
pub fn kind_of(text: &str) -> Option<String> {
    lines(text).next().map(|l| l.word(0).to_string())
}

/// Covering pairs only, in lexicographic order.
pub fn serialize_poset(p: &FinPoset) -> String {
    let mut out = format!("poset {}\n", p.size());
    for i in 0..p.size() {
        for j in 0..p.size() {
            if p.covers(i, j) {
                writeln!(out, "le {i} {j}").unwrap();
            }
        }
    }
    out
}

pub fn parse_poset(text: &str) -> Result<FinPoset> {
    let mut it = lines(text);
    let h = header(&mut it)?;
    h.expect("poset", 1)?;
    let n = h.number(1)?;
    let mut pairs = Vec::new();
    for l in it {
        l.expect("le", 2)?;
        pairs.push((l.index(1, n, "element")?, l.index(2, n, "element")?));
    }
    FinPoset::from_generators(n, &pairs)
}

pub fn serialize_map(m: &MonotoneMap, src_name: &str, dst_name: &str) -> String {
    let mut out = format!("map {src_name} {dst_name}\n");
    for (i, j) in m.table().iter().enumerate() {
        writeln!(out, "to {i} {j}").unwrap();
    }
    out
}

/// `resolve` turns the file names in the header into posets.
pub fn parse_map(
    text: &str,
    resolve: impl Fn(&str) -> Result<Arc<FinPoset>>,
) -> Result<MonotoneMap> {
    let mut it = lines(text);
    let h = header(&mut it)?;
    h.expect("map", 2)?;
    let src = resolve(h.word(1))?;
    let dst = resolve(h.word(2))?;
    let mut table = vec![None; src.size()];
    let mut last = h.number;
    for l in it {
        l.expect("to", 2)?;
        let i = l.index(1, src.size(), "source element")?;
        let j = l.index(2, dst.size(), "target element")?;
        if table[i].replace(j).is_some_and(|prev| prev != j) {
            return Err(err(l.number, l.column(1), format!("element {i} mapped twice")));
        }
        last = l.number;
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| err(last, 1, format!("element {i} has no image"))))
        .collect::<Result<Vec<_>>>()?;
    MonotoneMap::new(src, dst, table)
}

fn site_header(site: &Site) -> String {
    match site.kind() {
        SiteKind::Simplex(d) => format!("simp {d}"),
        SiteKind::Window(name) => format!("cub {name}"),
    }
}

/// Canonical text: header, `skeletal` flag, levels, then the action of the
/// generating maps in map order.
pub fn serialize_presheaf(x: &Presheaf) -> String {
    let site = x.site();
    let mut out = site_header(site);
    out.push('\n');
    if x.is_skeletal() {
        out.push_str("skeletal\n");
    }
    for o in 0..site.num_objects() {
        writeln!(out, "lvl {o} {}", x.size(o)).unwrap();
    }
    let mut gens: Vec<usize> = (0..site.num_objects()).flat_map(|o| site.generators_into(o).to_vec()).collect();
    gens.sort_unstable();
    for f in gens {
        for (i, j) in x.action_table(f).iter().enumerate() {
            writeln!(out, "act {f} {i} {j}").unwrap();
        }
    }
    out
}

pub fn parse_site(kind: &str, arg: &str) -> Result<SiteRef> {
    Ok(Arc::new(match kind {
        "simp" => Site::simplex(arg.parse().map_err(|_| Error::Invalid(format!("bad dimension {arg}")))?)?,
        "cub" => Site::named_window(arg)?,
        _ => return Err(Error::Invalid(format!("unknown site kind {kind}"))),
    }))
}

/// Parses a presheaf, recovering the action of every map by composition
/// and validating functoriality.
pub fn parse_presheaf(text: &str) -> Result<Presheaf> {
    let mut it = lines(text).peekable();
    let h = header(&mut it)?;
    if h.tokens.len() != 2 || !matches!(h.word(0), "simp" | "cub") {
        return Err(err(h.number, 1, "expected `simp <D>` or `cub <window>`"));
    }
    let site = parse_site(h.word(0), h.word(1)).map_err(|e| err(h.number, h.column(1), e.to_string()))?;
    let n = site.num_objects();
    let mut skeletal = false;
    let mut sizes: Vec<Option<usize>> = vec![None; n];
    let mut action: Vec<Option<Vec<Option<usize>>>> = vec![None; site.num_maps()];
    for l in it {
        match l.word(0) {
            "skeletal" => {
                l.expect("skeletal", 0)?;
                skeletal = true;
            }
            "lvl" => {
                l.expect("lvl", 2)?;
                let o = l.index(1, n, "object")?;
                if sizes[o].replace(l.number(2)?).is_some() {
                    return Err(err(l.number, l.column(1), format!("level {o} given twice")));
                }
            }
            "act" => {
                l.expect("act", 3)?;
                let f = l.index(1, site.num_maps(), "map")?;
                let m = site.map(f);
                let (Some(bs), Some(as_)) = (sizes[m.dst], sizes[m.src]) else {
                    return Err(err(l.number, l.column(1), format!("map {f} used before its levels")));
                };
                let i = l.index(2, bs, "element")?;
                let j = l.index(3, as_, "element")?;
                let row = action[f].get_or_insert_with(|| vec![None; bs]);
                if row[i].replace(j).is_some_and(|p| p != j) {
                    return Err(err(l.number, l.column(2), format!("element {i} of map {f} given twice")));
                }
            }
            other => return Err(err(l.number, 1, format!("unknown keyword `{other}`"))),
        }
    }
    let sizes: Vec<usize> = sizes
        .into_iter()
        .enumerate()
        .map(|(o, s)| s.ok_or_else(|| Error::Invalid(format!("level {o} missing"))))
        .collect::<Result<_>>()?;
    let mut known: Vec<Option<Vec<usize>>> = vec![None; site.num_maps()];
    for o in 0..n {
        known[site.identity(o)] = Some((0..sizes[o]).collect());
    }
    for f in 0..site.num_maps() {
        if sizes[site.map(f).dst] == 0 {
            known[f] = Some(Vec::new());
        }
    }
    for (f, row) in action.into_iter().enumerate() {
        if let Some(row) = row {
            let full = row
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.ok_or_else(|| Error::Invalid(format!("map {f} misses element {i}"))))
                .collect::<Result<Vec<_>>>()?;
            if known[f].as_ref().is_some_and(|k| *k != full) {
                return Err(Error::Invalid(format!("identity map {f} acts non-trivially")));
            }
            known[f] = Some(full);
        }
    }
    complete_by_composition(&site, &mut known)?;
    let action = known
        .into_iter()
        .enumerate()
        .map(|(f, a)| a.ok_or_else(|| Error::Invalid(format!("action of map {f} is not determined"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Presheaf::new(site, sizes, action)?.with_skeletal(skeletal))
}

/// Fills `X(g ∘ f) = X(f) ∘ X(g)` until nothing changes; a disagreement
/// with an already known action is a functoriality failure.
fn complete_by_composition(site: &Site, known: &mut [Option<Vec<usize>>]) -> Result<()> {
    let mut queue: VecDeque<usize> = (0..known.len()).filter(|&f| known[f].is_some()).collect();
    let mut known_from: Vec<Vec<usize>> = vec![Vec::new(); site.num_objects()];
    let mut known_into: Vec<Vec<usize>> = vec![Vec::new(); site.num_objects()];
    for f in 0..known.len() {
        if known[f].is_some() {
            known_from[site.map(f).src].push(f);
            known_into[site.map(f).dst].push(f);
        }
    }
    while let Some(m) = queue.pop_front() {
        let (a, b) = (site.map(m).src, site.map(m).dst);
        let pairs: Vec<(usize, usize)> = known_into[a]
            .iter()
            .map(|&c| (c, m))
            .chain(known_from[b].iter().map(|&g| (m, g)))
            .collect();
        for (f, g) in pairs {
            let xf = known[f].as_ref().unwrap();
            let xg = known[g].as_ref().unwrap();
            let composite: Vec<usize> = xg.iter().map(|&y| xf[y]).collect();
            let gf = site.compose(f, g);
            match &known[gf] {
                Some(k) => {
                    if let Some(element) = (0..k.len()).find(|&e| k[e] != composite[e]) {
                        return Err(Error::NotFunctorial { f, g, element });
                    }
                }
                None => {
                    known[gf] = Some(composite);
                    known_from[site.map(gf).src].push(gf);
                    known_into[site.map(gf).dst].push(gf);
                    queue.push_back(gf);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use simpcube::order::{ordinal, terminal};
    use simpcube::presheaf::{nerve, simplex_site};

    #[test]
    fn terminal_lattice_round_trip() {
        let p = terminal().poset().clone();
        let text = serialize_poset(&p);
        assert_eq!(text, "poset 1\n");
        assert_eq!(parse_poset(&text).unwrap(), p);
    }

    #[test]
    fn closure_and_antisymmetry() {
        let p = parse_poset("poset 3\nle 0 1\nle 1 2\n").unwrap();
        assert!(p.leq(0, 2));
        assert!(matches!(parse_poset("poset 2\nle 0 1\nle 1 0\n"), Err(Error::NotAPoset(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(
            parse_poset("poset 2\n\nle 0 x\n").unwrap_err(),
            Error::Parse { line: 3, column: 6, message: "expected a number, found `x`".into() }
        );
        assert!(matches!(parse_poset("poset 2\nle 0 5\n"), Err(Error::Parse { line: 2, column: 6, .. })));
    }

    #[test]
    fn nerve_round_trip() {
        let s = simplex_site(2).unwrap();
        let n = nerve(&ordinal(1), &s).unwrap();
        let text = serialize_presheaf(&n);
        let back = parse_presheaf(&text).unwrap();
        assert_eq!(back, n);
        assert_eq!(back.is_skeletal(), n.is_skeletal());
        assert_eq!(serialize_presheaf(&back), text);
    }

    #[test]
    fn non_functorial_action_is_rejected() {
        let s = simplex_site(1).unwrap();
        let n = nerve(&ordinal(1), &s).unwrap();
        // Swap the endpoints of one degenerate edge: breaks d ∘ s = id.
        let text = serialize_presheaf(&n);
        let face = s.coface(1, 0).unwrap();
        let bad = text.replacen(&format!("act {face} 0 0"), &format!("act {face} 0 1"), 1);
        assert_ne!(bad, text);
        assert!(matches!(parse_presheaf(&bad), Err(Error::NotFunctorial { .. })));
    }

    #[test]
    fn map_round_trip() {
        let a = Arc::new(ordinal(1).poset().clone());
        let b = Arc::new(ordinal(2).poset().clone());
        let m = MonotoneMap::new(a.clone(), b.clone(), vec![0, 2]).unwrap();
        let text = serialize_map(&m, "a", "b");
        let back = parse_map(&text, |n| Ok(if n == "a" { a.clone() } else { b.clone() })).unwrap();
        assert_eq!(back.table(), m.table());
    }
}
