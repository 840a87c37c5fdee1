//! Exact computer algebra for the simply laced root families A, D, E:
//! root system enumeration, Coxeter spectral data over cyclotomic fields,
//! the vertex-operator coefficient tables g_i, and symbolic generation and
//! evaluation of the associated bilinear integrable hierarchies.
//!
//! All arithmetic is exact. Scalars live in Q(zeta_h) for the relevant
//! Coxeter number h, represented on the power basis of the cyclotomic
//! polynomial; floating-point appears only in explicitly named embedding
//! helpers, which themselves round exact rational enclosures.

pub mod coeffs;
pub mod cyclo;
pub mod error;
pub mod golden;
pub mod hirota;
pub mod linalg;
pub mod rational;
pub mod roots;
pub mod spectral;
pub mod verify;

pub use coeffs::{closed_form_reference, coeff_ratio, dedekind_check, representatives, CoeffTable};
pub use cyclo::CycloNum;
pub use error::{CoreError, Result};
pub use golden::GoldenTable;
pub use hirota::{
    apply, generate, kw_kernel, kw_kernel_for_root, to_q_variables, variables, DiffPoly,
    HirotaSystem, HVar, Kernel, KernelTerm, Monomial, QEntry, Residual, TauSeries, Term,
};
pub use rational::Rational;
pub use roots::{AdeType, RootSystem};
pub use spectral::{CoxeterData, Slot};
pub use verify::{all_passed, run_checks, CheckOutcome, GoldenSource};
