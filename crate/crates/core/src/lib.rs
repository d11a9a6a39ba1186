//! Computable function theory on the Hardy space of the complex unit ball:
//! exact spherical monomial calculus, Szegő-kernel Gram constructions,
//! compressed multiplication operators on finite-dimensional quotient
//! modules, and quantitative interpolation/lifting feasibility tests.

pub mod config;
pub mod error;
pub mod hardy;
pub mod interpolation;
pub mod lifting;
pub mod multiindex;
pub mod points;
pub mod poly;
pub mod quotient;
pub mod sphere;

mod minimax;

pub use config::Config;
pub use error::{Error, Result};
pub use hardy::{
    eval_kernel_combo, h2_inner, kernel_gram, szego_kernel, szego_series_coeff, HermitianMatrix,
    KernelCombo, KernelGram,
};
pub use interpolation::{
    pick_constant, pick_feasible, pick_matrix, schur_interpolant, solve_psi, InterpolationData,
    RationalFn1D,
};
pub use lifting::{
    distance_report, lift_necessary_check, min_supnorm_upper, perturbation_check,
    unit_l2_lift_test, Analytic, LiftReport, NecessaryCheck, SupNormBound, UnitLiftOutcome,
    UnitLiftVerdict, UpperBoundKind, Verdict,
};
pub use multiindex::{indices_up_to_degree, MultiIndex};
pub use points::{BallPoint, SpherePoint};
pub use poly::ComplexPoly;
pub use quotient::{
    build_qm, build_qz, compress_on_qm, compress_on_qz, gram_operator_norm, module_map,
    project_qm, project_qz, CompressedOp, KernelSpan, PolySpace, QuotientModuleRep,
};
pub use sphere::{
    monomial_integral, monomial_integral_exact, pairwise_sum, poisson_kernel, poly_sphere_norm,
    sample_sphere, sphere_grid, sphere_mean, sphere_point_at, Estimate, Method, NormOrder,
};
