//! Open boxes, horns, lifting problems, bounded fibration checks, path
//! objects and homotopies.

pub mod boxes;
pub mod experiment;
pub mod fibration;
pub mod lifting;
pub mod path;

pub use boxes::{box_height_bound, generate_horns, generate_open_boxes, Generator, Horn, OpenBox};
pub use experiment::{eps_we_probe, EpsProbe};
pub use fibration::{is_fibration_bounded, lifting_squares, FailingSquare, FibrationReport};
pub use lifting::{dump_components, solve_lifting, Certificate, LiftOutcome, LiftingProblem};
pub use path::{
    find_homotopy, homotopy_equalizer, is_homotopy_equivalence_bounded, path_object,
    EquivOutcome, Homotopy, HomotopyEqualizer, PathObject,
};
