//! Numeric verification: exact and Monte Carlo integration of product
//! kernels, and the Fubini–Study density of state-vector charts.

mod fubini;
mod integrate;
pub mod quadrature;

pub use fubini::{fs_check, fubini_study_density, ChartKind, FsCheckReport, StateVectorChart, DEFAULT_STEP};
pub use integrate::{
    integrate_factorized, integrate_monte_carlo, integrate_separable, v_table, IntegrationMethod, IntegrationResult,
    MIN_MC_SAMPLES,
};
