//! Bayesian and classical analysis of balanced one-way random-effects designs.
//!
//! The model is `Y_ij = α_i + ε_ij` with `α_i ~ N(α₀, σ²_α / τ_α)` and
//! `ε_ij ~ N(0, σ²_ε)`. Under the default conjugate prior the joint posterior
//! of `(σ²_ε, σ²_α, α)` is sampled exactly, with a point mass at `σ²_α = 0`.
//!
//! ```
//! use banova::{banova_table, default_hyperparameters, posterior_update, rail, sample};
//!
//! let data = rail();
//! let post = posterior_update(&default_hyperparameters(&data), &data).unwrap();
//! let draws = sample(&post, 5_000, 1).unwrap();
//! let table = banova_table(&draws, 0.95).unwrap();
//! assert!(table.pr_null() < 0.01);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod classical;
pub mod dataset;
pub mod error;
pub mod region;
pub mod sampler;
pub mod sim;
pub mod specfun;
pub mod summary;

pub use bayes::{
    default_hyperparameters, nig_density, nig_update, posterior_update, HyperOverrides, Hyperparameters,
    InvGammaParams, NigParams, OneWayPosterior, PriorPreset,
};
pub use classical::{
    decompose, fixed_effects_table, fixed_effects_table_labeled, loglik, ml_varcomp, mom_varcomp,
    relative_likelihood_grid, relative_likelihood_on_axes, ClassicalTable, SumsOfSquares, VarCompEstimate,
    VarCompMethod,
};
pub use dataset::{rail, BalancedOneWayData, GroupSummary};
pub use error::{Error, Result};
pub use region::{ContourLevel, GridSpec, RegionGrid, RegionKind};
pub use sampler::{draw_at, draw_range, sample, PosteriorDraw, PosteriorSample, PredictTarget};
pub use sim::{generate, replicate_study, SimSpec, StudyCases, StudyReport};
pub use specfun::RngStream;
pub use summary::{banova_table, hpd_region_grid, pr_null, BanovaTable, ParamKind};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/data.md")]
    mod data {}
    #[doc = include_str!("../../../book/src/classical.md")]
    mod classical {}
    #[doc = include_str!("../../../book/src/priors.md")]
    mod priors {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/summaries.md")]
    mod summaries {}
    #[doc = include_str!("../../../book/src/regions.md")]
    mod regions {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
