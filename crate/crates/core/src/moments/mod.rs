//! Moment ratios `M_p(F)/M_p(1)`: sample estimators, a quadrature oracle for
//! small `n`, closed forms, and the thin-shell pipelines.

mod closed_form;
mod estimate;
mod functional;
mod pipelines;
mod quadrature;

pub use closed_form::{closed_form_moment, closed_form_moment_inf, cube_moments, CubeMoments};
pub use estimate::{
    estimate_joint, estimate_moment, joint_means, JointMeans, Method, MomentEstimate, LOW_ESS,
};
pub use functional::Functional;
pub use pipelines::{
    sample_gas, sigma_from_gas, sigma_pipeline, var_from_batch, var_functionals, var_mp_pipeline, GasSampler,
    SigmaEstimate, SigmaSampler, VarMpEstimate,
};
pub use quadrature::{
    gauss_legendre, quadrature_face_moments, quadrature_log_mass, quadrature_moment,
    quadrature_moments,
    QuadratureReport,
};
