use std::sync::Arc;

use proptest::prelude::*;
use simpcube::order::{find_isomorphism, hom_tables, validate_lattice, FinPoset};
use simpcube::presheaf::{simp_representable, simplex_site, NatTrans, Presheaf};
use simpcube::search::nat_trans_components;
use simpcube::site::Site;
use simpcube::subobject::subobject_enumerate;

/// Lattice test by a different route: a nonempty finite poset is a lattice
/// iff it has a top and every pair has a greatest lower bound.
fn lattice_oracle(p: &FinPoset) -> bool {
    let n = p.size();
    if n == 0 {
        return false;
    }
    let has_top = (0..n).any(|t| (0..n).all(|x| p.leq(x, t)));
    let meets = (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).any(|g| {
                p.leq(g, x) && p.leq(g, y) && (0..n).all(|z| !(p.leq(z, x) && p.leq(z, y)) || p.leq(z, g))
            })
        })
    });
    has_top && meets
}

/// Every function between level sets, filtered for naturality.
fn brute_force_maps(x: &Presheaf, y: &Presheaf) -> usize {
    let site = x.site();
    let vars: Vec<(usize, usize)> =
        (0..site.num_objects()).flat_map(|o| (0..x.size(o)).map(move |e| (o, e))).collect();
    let mut val: Vec<Vec<usize>> = (0..site.num_objects()).map(|o| vec![0; x.size(o)]).collect();
    let mut count = 0;
    fn go(
        k: usize,
        vars: &[(usize, usize)],
        val: &mut Vec<Vec<usize>>,
        x: &Presheaf,
        y: &Presheaf,
        count: &mut usize,
    ) {
        if k == vars.len() {
            let site = x.site();
            let natural = site.maps().iter().enumerate().all(|(f, m)| {
                (0..x.size(m.dst)).all(|e| val[m.src][x.act(f, e)] == y.act(f, val[m.dst][e]))
            });
            *count += natural as usize;
            return;
        }
        let (o, e) = vars[k];
        for v in 0..y.size(o) {
            val[o][e] = v;
            go(k + 1, vars, val, x, y, count);
        }
    }
    go(0, &vars, &mut val, x, y, &mut count);
    count
}

fn random_poset() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=6).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..10)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn lattice_validation_matches_oracle((n, pairs) in random_poset()) {
        let pairs: Vec<_> = pairs.into_iter().filter(|(a, b)| a < b).collect();
        let p = FinPoset::from_generators(n, &pairs).unwrap();
        prop_assert_eq!(validate_lattice(&p).is_ok(), lattice_oracle(&p));
    }

    #[test]
    fn window_homs_closed_under_composition(a in 0usize..5, b in 0usize..5, c in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let w = Site::default_window().unwrap();
        let (fs, gs) = (w.hom(a, b), w.hom(b, c));
        prop_assume!(!fs.is_empty() && !gs.is_empty());
        let (f, g) = (fs[i % fs.len()], gs[j % gs.len()]);
        let h = w.compose(f, g);
        prop_assert!(w.hom(a, c).contains(&h));
        let tf = &w.map(f).table;
        let tg = &w.map(g).table;
        let expect: Vec<usize> = tf.iter().map(|&x| tg[x]).collect();
        prop_assert_eq!(&w.map(h).table, &expect);
    }

    #[test]
    fn hom_tables_are_all_monotone_maps((n, pairs) in random_poset(), (m, qpairs) in random_poset()) {
        let p = FinPoset::from_generators(n, &pairs.into_iter().filter(|(a, b)| a < b).collect::<Vec<_>>()).unwrap();
        let q = FinPoset::from_generators(m, &qpairs.into_iter().filter(|(a, b)| a < b).collect::<Vec<_>>()).unwrap();
        let tables = hom_tables(&p, &q, 1 << 20).unwrap();
        let brute = (0..m.pow(n as u32))
            .filter(|&code| {
                let t: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                (0..n).all(|x| (0..n).all(|y| !p.leq(x, y) || q.leq(t[x], t[y])))
            })
            .count();
        prop_assert_eq!(tables.len(), brute);
    }

    #[test]
    fn isomorphism_search_finds_relabelings((n, pairs) in random_poset(), seed in any::<u64>()) {
        let pairs: Vec<_> = pairs.into_iter().filter(|(a, b)| a < b).collect();
        let p = FinPoset::from_generators(n, &pairs).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let relabeled: Vec<_> = p.pairs_leq().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        let q = FinPoset::from_generators(n, &relabeled).unwrap();
        let iso = find_isomorphism(&p, &q);
        prop_assert!(iso.is_some());
        let t = iso.unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(p.leq(x, y), q.leq(t[x], t[y]));
            }
        }
    }
}

#[test]
fn nat_trans_counts_match_brute_force() {
    let s = simplex_site(1).unwrap();
    let d0 = simp_representable(&s, 0).unwrap();
    let d1 = simp_representable(&s, 1).unwrap();
    let subs = subobject_enumerate(&d1, 100).unwrap();
    let mut objects = vec![d0, d1, Presheaf::terminal(&s)];
    objects.extend(subs.iter().map(|sub| sub.to_presheaf().0));
    for x in &objects {
        for y in &objects {
            let found = nat_trans_components(x, y, 1_000_000).unwrap();
            assert_eq!(found.len(), brute_force_maps(x, y));
            for c in found {
                NatTrans::new(x.clone(), y.clone(), c).unwrap();
            }
        }
    }
}

#[test]
fn window_representables_satisfy_yoneda() {
    let w = Arc::new(Site::default_window().unwrap());
    for o in 0..w.num_objects() {
        let y = Presheaf::representable(&w, o);
        y.audit_functoriality().unwrap();
        for a in 0..w.num_objects() {
            assert_eq!(y.size(a), w.hom(a, o).len());
        }
    }
}
