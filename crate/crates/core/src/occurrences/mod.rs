//! Three generative settings in which the hyperbolic-secant law appears,
//! each pairing a forward simulator with its analytic target law.

pub mod iv;
pub mod jeffreys;
pub mod twin;

pub use iv::{gap_scale, log_gap_target, IvBatch, IvScenario, IvSimulationMode};
pub use jeffreys::{
    dirichlet_jeffreys_draw, gamma_half_draw, jeffreys_binomial_draw, jeffreys_multinomial_draw,
    jeffreys_target, log_odds_ratio, marginal_prior_check, marginal_prior_draws, ContingencyScheme,
    MarginalPriorReport,
};
pub use twin::{fisher_z_log_form, icc, TwinModel};
