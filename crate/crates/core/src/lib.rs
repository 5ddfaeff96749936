//! Exact arithmetic for pencils of quadrics over the discrete valuation ring
//! `R = k[[t]]`: Plücker coordinates, weighted multiplicities, the
//! discriminant valuation, destabilizer search and semistable reduction.

#![allow(clippy::needless_range_loop)]

pub mod diagnose;
pub mod disc;
pub mod error;
pub mod file;
pub mod linalg;
pub mod pencil;
pub mod ring;
pub mod sample;
pub mod stability;

pub use diagnose::{contains_plane, diagnose_point, min_rank_in_pencil, CentralFibre, PointDiagnosis};
pub use disc::{binary_discriminant, check_scaling_identity, disc_valuation, pencil_determinant, BinaryForm};
pub use error::{Error, Result};
pub use file::PencilFile;
pub use pencil::{
    act, mult, plucker, saturate, val_rho, CoordinateChange, Pencil, PluckerVector, QuadraticForm, WeightSystem,
};
pub use ring::{parse_literal, FieldElem, FieldSpec, LaurentScalar, Valuation};
pub use stability::{
    check, destabilization_step, search_destabilizer, semistable_reduce, ReductionTrace, SearchBudget,
    StabilityVerdict, Witness,
};
