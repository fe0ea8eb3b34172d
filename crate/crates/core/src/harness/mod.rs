//! Norms, the conserved energy, and refinement studies.

mod norms;
mod study;

pub use norms::{discrete_energy, inner_product, lemma2_gap, EnergyTrace, NormKind, NormOperators};
pub use study::{
    error_space_refinement, error_time_refinement, parse_list, parse_schemes, parse_step,
    refinement_error, rows_to_csv, run_study, Axis, AxisKind, StudyRow, StudySpec, TablePreset,
    CSV_HEADER,
};
