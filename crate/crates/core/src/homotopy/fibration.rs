//! Bounded fibration checks: right lifting against a finite generator list.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::presheaf::{same_site, NatTrans};
use crate::search::{nat_trans_components, MapSearch};

use super::boxes::Generator;
use super::lifting::{fibres, solve_with_fibres, Certificate, LiftOutcome, LiftingProblem};

#[derive(Clone, Debug)]
pub struct FailingSquare {
    pub generator: usize,
    pub name: String,
    pub square: usize,
    pub problem: LiftingProblem,
    pub searched: u64,
}

#[derive(Clone, Debug)]
pub struct FibrationReport {
    pub holds: bool,
    /// Names of the generators the verdict is relative to.
    pub generators: Vec<String>,
    pub squares: usize,
    pub failure: Option<FailingSquare>,
    pub certificates: Vec<Certificate>,
}

/// Every commuting square from `m: A -> B` to `f: X -> Y`, as `(top,
/// bottom)`, ordered by bottom then top.
pub fn lifting_squares(m: &NatTrans, f: &NatTrans, budget: u64) -> Result<Vec<(NatTrans, NatTrans)>> {
    squares_with_fibres(m, f, &fibres(f), budget)
}

fn squares_with_fibres(
    m: &NatTrans,
    f: &NatTrans,
    fib: &[Vec<Vec<usize>>],
    budget: u64,
) -> Result<Vec<(NatTrans, NatTrans)>> {
    let (a, b) = (m.src(), m.dst());
    let mut out = Vec::new();
    for bottom in nat_trans_components(b, f.dst(), budget)? {
        let mut search = MapSearch::new(a, f.src(), budget)?;
        for o in 0..a.site().num_objects() {
            for e in 0..a.size(o) {
                search.restrict(o, e, fib[o][bottom[o][m.apply(o, e)]].clone());
            }
        }
        let bottom = NatTrans::from_parts(b.clone(), f.dst().clone(), bottom);
        for top in search.enumerate()?.solutions {
            out.push((NatTrans::from_parts(a.clone(), f.src().clone(), top), bottom.clone()));
        }
    }
    Ok(out)
}

/// Does `f` have the right lifting property against every generator?
/// Generators are processed in order; squares of one generator are solved
/// with `exec`, and checking stops after the first generator with a failing
/// square, which is reported.
pub fn is_fibration_bounded(
    f: &NatTrans,
    generators: &[Generator],
    budget: u64,
    exec: Exec,
) -> Result<FibrationReport> {
    let fib = fibres(f);
    let mut report = FibrationReport {
        holds: true,
        generators: generators.iter().map(|g| g.name.clone()).collect(),
        squares: 0,
        failure: None,
        certificates: Vec::new(),
    };
    for (gi, g) in generators.iter().enumerate() {
        if !same_site(g.inclusion.src().site(), f.src().site()) {
            return Err(Error::SiteMismatch);
        }
        let squares = squares_with_fibres(&g.inclusion, f, &fib, budget)?;
        let outcomes: Vec<Result<(LiftingProblem, LiftOutcome)>> = exec.map(&squares, |(top, bottom)| {
            let p = LiftingProblem::new(g.inclusion.clone(), f.clone(), top.clone(), bottom.clone())?;
            let o = solve_with_fibres(&p, &fib, budget)?;
            Ok((p, o))
        });
        for (si, r) in outcomes.into_iter().enumerate() {
            let (problem, outcome) = r?;
            report.squares += 1;
            let id = format!("{}#{}", g.name, si);
            if let (LiftOutcome::NoLift { searched }, None) = (&outcome, &report.failure) {
                report.holds = false;
                report.failure = Some(FailingSquare {
                    generator: gi,
                    name: g.name.clone(),
                    square: si,
                    problem,
                    searched: *searched,
                });
            }
            report.certificates.push(Certificate { id, outcome });
        }
        if !report.holds {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::boxes::{
        box_height_bound, boxes_as_generators, generate_horns, generate_open_boxes,
        horns_as_generators,
    };
    use crate::order::ordinal;
    use crate::presheaf::{nerve, simplex_site, Presheaf};

    #[test]
    fn identities_are_fibrations() {
        let s = simplex_site(2).unwrap();
        let n1 = nerve(&ordinal(1), &s).unwrap();
        let gens = horns_as_generators(generate_horns(&s).unwrap());
        let r = is_fibration_bounded(&NatTrans::identity(&n1), &gens, 100_000, Exec::default()).unwrap();
        assert!(r.holds);
        assert!(r.squares > 0);
        assert!(r.certificates.iter().all(|c| c.outcome.is_found()));
    }

    #[test]
    fn initial_to_terminal() {
        let s = simplex_site(2).unwrap();
        let init = Presheaf::initial(&s);
        let gens = horns_as_generators(generate_horns(&s).unwrap());
        let r = is_fibration_bounded(&NatTrans::to_terminal(&init), &gens, 1000, Exec::default()).unwrap();
        // Horns are nonempty, so no square exists and the check is vacuous.
        assert!(r.holds);
        assert_eq!(r.squares, 0);
    }

    #[test]
    fn interval_nerve_fails_with_both_generator_kinds() {
        let s = simplex_site(2).unwrap();
        let n1 = nerve(&ordinal(1), &s).unwrap();
        let f = NatTrans::to_terminal(&n1);
        let horns = horns_as_generators(generate_horns(&s).unwrap());
        let boxes = boxes_as_generators(generate_open_boxes(&s, box_height_bound(&s), 4096).unwrap());
        for gens in [horns, boxes] {
            for exec in [Exec::Sequential, Exec::Parallel] {
                let r = is_fibration_bounded(&f, &gens, 100_000, exec).unwrap();
                assert!(!r.holds);
                let fail = r.failure.unwrap();
                assert!(solve_lifting_is_none(&fail.problem));
            }
        }
    }

    fn solve_lifting_is_none(p: &LiftingProblem) -> bool {
        matches!(
            crate::homotopy::lifting::solve_lifting(p, 100_000).unwrap(),
            LiftOutcome::NoLift { .. }
        )
    }
}
