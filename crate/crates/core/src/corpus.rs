//! Named presheaves and maps used by the checks and the command line.

use crate::colimit::coequalizer;
use crate::error::{Error, Result};
use crate::order::ordinal;
use crate::presheaf::{nerve, simp_representable, NatTrans, Presheaf};
use crate::search::nat_trans_enumerate;
use crate::sieve::least_cover;
use crate::site::{named_lattice, SiteRef};
use crate::subobject::Subobject;

/// Names accepted by [`simp_object`].
pub const SIMP_OBJECTS: &[&str] = &[
    "empty", "delta0", "delta1", "delta2", "boundary1", "two-points", "boundary2", "horn2-0",
    "horn2-1", "nerve-I", "nerve-I2", "circle",
];

/// Names accepted by [`simp_map`].
pub const SIMP_MAPS: &[&str] = &[
    "nerve-I->pt", "boundary1->pt", "vertex0", "id-delta1", "empty->pt", "nerve-I2->pt",
    "circle->pt", "collapse-delta2", "boundary1-incl", "delta1->pt", "horn2-1-incl",
    "two-points->pt",
];

fn boundary(simp: &SiteRef, n: usize) -> Result<Subobject> {
    let dn = simp_representable(simp, n)?;
    let faces: Vec<(usize, usize)> = (0..=n)
        .map(|i| Ok((n - 1, simp.hom_position(simp.coface(n, i)?))))
        .collect::<Result<_>>()?;
    Ok(Subobject::generated(&dn, &faces))
}

fn horn(simp: &SiteRef, n: usize, k: usize) -> Result<Subobject> {
    let dn = simp_representable(simp, n)?;
    let faces: Vec<(usize, usize)> = (0..=n)
        .filter(|&i| i != k)
        .map(|i| Ok((n - 1, simp.hom_position(simp.coface(n, i)?))))
        .collect::<Result<_>>()?;
    Ok(Subobject::generated(&dn, &faces))
}

pub fn simp_object(simp: &SiteRef, name: &str) -> Result<Presheaf> {
    Ok(match name {
        "empty" => Presheaf::initial(simp),
        "delta0" => simp_representable(simp, 0)?,
        "delta1" => simp_representable(simp, 1)?,
        "delta2" => simp_representable(simp, 2)?,
        "boundary1" => boundary(simp, 1)?.to_presheaf().0,
        "two-points" => {
            let d0 = simp_representable(simp, 0)?;
            Presheaf::coproduct(&[d0.clone(), d0])?.0
        }
        "boundary2" => boundary(simp, 2)?.to_presheaf().0,
        "horn2-0" => horn(simp, 2, 0)?.to_presheaf().0,
        "horn2-1" => horn(simp, 2, 1)?.to_presheaf().0,
        "nerve-I" => nerve(&ordinal(1), simp)?,
        "nerve-I2" => nerve(&named_lattice("I2").expect("I2 is a named lattice"), simp)?,
        "circle" => {
            let d1 = simp_representable(simp, 1)?;
            let v0 = NatTrans::yoneda(simp, 0, &d1, 0);
            let v1 = NatTrans::yoneda(simp, 0, &d1, 1);
            coequalizer(&v0, &v1)?.0
        }
        _ => return Err(Error::Invalid(format!("unknown simplicial object {name}"))),
    })
}

pub fn simp_map(simp: &SiteRef, name: &str) -> Result<NatTrans> {
    let to_pt = |obj: &str| -> Result<NatTrans> { Ok(NatTrans::to_terminal(&simp_object(simp, obj)?)) };
    Ok(match name {
        "nerve-I->pt" => to_pt("nerve-I")?,
        "boundary1->pt" => to_pt("boundary1")?,
        "empty->pt" => to_pt("empty")?,
        "nerve-I2->pt" => to_pt("nerve-I2")?,
        "circle->pt" => to_pt("circle")?,
        "delta1->pt" => to_pt("delta1")?,
        "two-points->pt" => to_pt("two-points")?,
        "vertex0" => {
            let d1 = simp_representable(simp, 1)?;
            NatTrans::yoneda(simp, 0, &d1, 0)
        }
        "id-delta1" => NatTrans::identity(&simp_representable(simp, 1)?),
        "collapse-delta2" => {
            // Δ[2] -> Δ[1] induced by the codegeneracy [2] -> [1] repeating 0.
            let d1 = simp_representable(simp, 1)?;
            let s0 = simp.codegeneracy(1, 0)?;
            NatTrans::yoneda(simp, 2, &d1, simp.hom_position(s0))
        }
        "boundary1-incl" => boundary(simp, 1)?.to_presheaf().1,
        "horn2-1-incl" => horn(simp, 2, 1)?.to_presheaf().1,
        _ => return Err(Error::Invalid(format!("unknown simplicial map {name}"))),
    })
}

/// Representables of the window followed by `terminal` and `least-cover`
/// (the least covering sieve of the largest object).
pub fn cub_object_names(window: &SiteRef) -> Vec<String> {
    let mut v: Vec<String> = (0..window.num_objects()).map(|o| format!("y{}", window.name(o))).collect();
    v.push("terminal".into());
    v.push("least-cover".into());
    v
}

/// Object of largest size, ties broken towards the later index.
pub fn largest_object(window: &SiteRef) -> usize {
    (0..window.num_objects())
        .max_by_key(|&o| (window.object(o).size(), o))
        .unwrap_or(0)
}

pub fn cub_object(window: &SiteRef, name: &str) -> Result<Presheaf> {
    if name == "terminal" {
        return Ok(Presheaf::terminal(window));
    }
    if name == "least-cover" {
        return Ok(least_cover(window, largest_object(window)).to_presheaf().0);
    }
    if let Some(lname) = name.strip_prefix('y') {
        if let Some(o) = (0..window.num_objects()).find(|&o| window.name(o) == lname) {
            return Ok(Presheaf::representable(window, o));
        }
    }
    Err(Error::Invalid(format!("unknown cubical object {name}")))
}

/// Names accepted by [`cub_map`].
pub const CUB_MAPS: &[&str] =
    &["v0", "v1", "id-yI", "yI->pt", "const0", "const1", "least-cover-incl", "id-least-cover"];

/// Pairs of parallel maps used for homotopy equalizers.
pub const HOEQ_PAIRS: &[(&str, &str)] = &[
    ("v0", "v0"),
    ("v0", "v1"),
    ("v1", "v0"),
    ("id-yI", "id-yI"),
    ("id-yI", "const0"),
    ("const0", "const1"),
    ("id-least-cover", "id-least-cover"),
];

fn endpoint(window: &SiteRef, eps: usize) -> Result<NatTrans> {
    let pt = window.point()?;
    let i = window.interval()?;
    let yi = Presheaf::representable(window, i);
    let v = window.hom_position(window.constant(pt, i, eps));
    NatTrans::yoneda(window, pt, &yi, v).retarget(&Presheaf::terminal(window), &yi)
}

pub fn cub_map(window: &SiteRef, name: &str) -> Result<NatTrans> {
    let yi = Presheaf::representable(window, window.interval()?);
    Ok(match name {
        "v0" => endpoint(window, 0)?,
        "v1" => endpoint(window, 1)?,
        "id-yI" => NatTrans::identity(&yi),
        "yI->pt" => NatTrans::to_terminal(&yi),
        "const0" => NatTrans::to_terminal(&yi).then(&endpoint(window, 0)?)?,
        "const1" => NatTrans::to_terminal(&yi).then(&endpoint(window, 1)?)?,
        "least-cover-incl" => least_cover(window, largest_object(window)).to_presheaf().1,
        "id-least-cover" => NatTrans::identity(&cub_object(window, "least-cover")?),
        _ => return Err(Error::Invalid(format!("unknown cubical map {name}"))),
    })
}

/// Every map between two named presheaves, in canonical order.
pub fn all_maps(x: &Presheaf, y: &Presheaf, budget: u64) -> Result<Vec<NatTrans>> {
    nat_trans_enumerate(x, y, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::simplex_site;
    use crate::site::Site;
    use std::sync::Arc;

    #[test]
    fn every_name_resolves() {
        let s = simplex_site(3).unwrap();
        for n in SIMP_OBJECTS {
            simp_object(&s, n).unwrap().audit_functoriality().unwrap();
        }
        for n in SIMP_MAPS {
            simp_map(&s, n).unwrap().check_naturality().unwrap();
        }
        let w = Arc::new(Site::default_window().unwrap());
        for n in cub_object_names(&w) {
            cub_object(&w, &n).unwrap();
        }
        for n in CUB_MAPS {
            cub_map(&w, n).unwrap().check_naturality().unwrap();
        }
    }

    #[test]
    fn shapes() {
        let s = simplex_site(3).unwrap();
        let c = simp_object(&s, "circle").unwrap();
        assert_eq!((c.size(0), c.nondegenerate(1).len()), (1, 1));
        let b = simp_object(&s, "boundary2").unwrap();
        assert_eq!((b.size(0), b.nondegenerate(1).len(), b.nondegenerate(2).len()), (3, 3, 0));
        let h = simp_object(&s, "horn2-1").unwrap();
        assert_eq!((h.size(0), h.nondegenerate(1).len()), (3, 2));
        let col = simp_map(&s, "collapse-delta2").unwrap();
        assert_eq!(col.component(0), [0, 0, 1]);
    }
}
