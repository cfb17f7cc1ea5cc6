//! Probing whether the counit `i_! i^* X -> X` is a weak equivalence, by a
//! bounded search for a homotopy inverse. Outcomes are evidence only.

use crate::adjoint::Geometric;
use crate::error::Result;
use crate::exec::Exec;
use crate::presheaf::{NatTrans, Presheaf};

use super::path::{is_homotopy_equivalence_bounded, EquivOutcome};

#[derive(Clone, Debug)]
pub struct EpsProbe {
    pub counit: NatTrans,
    pub is_iso: bool,
    pub outcome: EquivOutcome,
}

pub fn eps_we_probe(geo: &Geometric, x: &Presheaf, exec: Exec) -> Result<EpsProbe> {
    let lk = geo.i_lower_shriek(&geo.i_upper_star(x)?)?;
    let counit = geo.eps_counit(x, &lk)?;
    let is_iso = counit.is_iso();
    let outcome = is_homotopy_equivalence_bounded(&counit, geo.budget(), exec)?;
    Ok(EpsProbe { counit, is_iso, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::least_cover;
    use crate::site::Site;
    use std::sync::Arc;

    #[test]
    fn counit_on_representables_is_invertible() {
        let w = Arc::new(Site::default_window().unwrap());
        let g = Geometric::new(&w, 1_000_000).unwrap();
        let y = Presheaf::representable(&w, w.interval().unwrap());
        let p = eps_we_probe(&g, &y, Exec::default()).unwrap();
        assert!(p.is_iso);
        assert!(matches!(p.outcome, EquivOutcome::Equivalence { .. }));
    }

    #[test]
    fn counit_on_the_least_cover() {
        let w = Arc::new(Site::default_window().unwrap());
        let g = Geometric::new(&w, 1_000_000).unwrap();
        let sq = w.find_object(&crate::order::cube(2)).unwrap();
        let (s, _) = least_cover(&w, sq).to_presheaf();
        let p = eps_we_probe(&g, &s, Exec::default()).unwrap();
        p.counit.check_naturality().unwrap();
    }
}
