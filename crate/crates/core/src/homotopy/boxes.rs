//! Generating inclusions: open boxes `({ε} × X) ∪ (I × Y) ↪ I × X` over
//! representables `X`, and simplicial horns `Λ^n_k ↪ Δ[n]`.

use crate::error::Result;
use crate::presheaf::{simp_representable, NatTrans, Presheaf};
use crate::site::{ObjId, SiteRef};
use crate::subobject::{subobject_enumerate, Subobject};

/// A named monomorphism used as a lifting generator.
#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub inclusion: NatTrans,
}

#[derive(Clone, Debug)]
pub struct OpenBox {
    /// `X = y(base)`.
    pub base: ObjId,
    pub epsilon: usize,
    pub y_sub: Subobject,
    /// `I × X`, pairs numbered `(i, x) ↦ i * |X| + x`.
    pub ambient: Presheaf,
    /// The box as a subobject of the ambient presheaf.
    pub sub: Subobject,
    pub inclusion: NatTrans,
}

impl OpenBox {
    pub fn new(site: &SiteRef, base: ObjId, epsilon: usize, y_sub: Subobject) -> Result<Self> {
        let i = site.interval()?;
        let pt = site.point()?;
        let yi = Presheaf::representable(site, i);
        let x = Presheaf::representable(site, base);
        let (ambient, pr0, pr1) = Presheaf::product(&yi, &x)?;
        let vertex_map = site.map_id(pt, i, &[epsilon]).expect("endpoint of the interval");
        let vertex = Subobject::generated(&yi, &[(pt, site.hom_position(vertex_map))]);
        let end = vertex.pullback_along(&pr0)?;
        let side = y_sub.pullback_along(&pr1)?;
        let sub = end.union(&side)?;
        let (_, inclusion) = sub.to_presheaf();
        Ok(OpenBox { base, epsilon, y_sub, ambient, sub, inclusion })
    }

    pub fn name(&self, y_index: usize) -> String {
        let site = self.ambient.site();
        format!("box[X={},Y={},e={}]", site.name(self.base), y_index, self.epsilon)
    }

    /// Box equal to its ambient presheaf.
    pub fn is_degenerate(&self) -> bool {
        self.sub.is_full()
    }
}

/// Largest height of a representable whose boxes stay within the
/// truncation: one less than the top ordinal of the site.
pub fn box_height_bound(site: &SiteRef) -> usize {
    site.max_ordinal().unwrap_or(0).saturating_sub(1)
}

/// Non-degenerate open boxes over every representable of height at most
/// `max_height`, for every subobject and both endpoints, in the order
/// (object, subobject, ε).
pub fn generate_open_boxes(
    site: &SiteRef,
    max_height: usize,
    subobject_cap: usize,
) -> Result<Vec<(String, OpenBox)>> {
    let mut out = Vec::new();
    for base in 0..site.num_objects() {
        if site.object(base).height() > max_height {
            continue;
        }
        let x = Presheaf::representable(site, base);
        for (yi, y) in subobject_enumerate(&x, subobject_cap)?.into_iter().enumerate() {
            if y.is_full() {
                continue;
            }
            for eps in 0..2 {
                let b = OpenBox::new(site, base, eps, y.clone())?;
                if !b.is_degenerate() {
                    out.push((b.name(yi), b));
                }
            }
        }
    }
    Ok(out)
}

pub fn boxes_as_generators(boxes: Vec<(String, OpenBox)>) -> Vec<Generator> {
    boxes.into_iter().map(|(name, b)| Generator { name, inclusion: b.inclusion }).collect()
}

#[derive(Clone, Debug)]
pub struct Horn {
    pub n: usize,
    pub k: usize,
    pub inclusion: NatTrans,
}

impl Horn {
    pub fn name(&self) -> String {
        format!("horn[{},{}]", self.n, self.k)
    }
}

/// `Λ^n_k ↪ Δ[n]` for `1 <= n <= D`, ordered by `(n, k)`.
pub fn generate_horns(simp: &SiteRef) -> Result<Vec<Horn>> {
    let d = simp.max_ordinal().unwrap_or(0);
    let mut out = Vec::new();
    for n in 1..=d {
        let dn = simp_representable(simp, n)?;
        for k in 0..=n {
            let faces: Vec<(ObjId, usize)> = (0..=n)
                .filter(|&i| i != k)
                .map(|i| Ok((n - 1, simp.hom_position(simp.coface(n, i)?))))
                .collect::<Result<_>>()?;
            let (_, inclusion) = Subobject::generated(&dn, &faces).to_presheaf();
            out.push(Horn { n, k, inclusion });
        }
    }
    Ok(out)
}

pub fn horns_as_generators(horns: Vec<Horn>) -> Vec<Generator> {
    horns.into_iter().map(|h| Generator { name: h.name(), inclusion: h.inclusion }).collect()
}
