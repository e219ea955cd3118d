//! Differentially private top-K link prediction.
//!
//! The crate scores non-neighbors of a query node with a triad heuristic
//! (common neighbors, Jaccard, Adamic-Adar or an external score table), then
//! releases a K-list through the DPLP sampler or one of the baseline
//! mechanisms. Supporting modules cover exact privacy auditing on small
//! graphs, a latent geometric graph model, ranking-loss bounds and a held-out
//! evaluation harness.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the `*F64` and
//! `*F32` aliases below fix the scalar.

// negated comparisons are how parameter checks reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod audit;
pub mod error;
pub mod eval;
pub mod graph;
pub mod heuristics;
pub mod latent;
pub mod mechanisms;
pub mod metrics;
pub mod rng;
pub mod scalar;

pub use audit::{
    audit_exact, audit_exact_with_sampler, audit_random_suite, ordered_list_count, random_graph,
    AuditReport, AuditWitness, BoundKind, ENUMERATION_LIMIT, LOG_RATIO_TOLERANCE,
};
pub use error::{Error, Result};
pub use eval::{
    average_precision, evaluate, select_queries, split_for_query, sweep, EvalReport, EvalRow,
    QuerySplit, SplitSpec,
};
pub use graph::{EdgePerturbation, Graph, LoadReport, NodeId, PerturbationKind};
pub use heuristics::{
    load_external_scores, score_aa, score_cn, score_jc, Heuristic, ScoreFunction, ScoredCandidates,
};
pub use latent::{
    generate, omega, radius_for_omega, unit_ball_radius, unit_radius_volume, LatentModel,
};
pub use mechanisms::{
    dplp_sample, dplp_sigma, exact_output_probability, exponential_topk, gaussian_std,
    gaussian_topk, laplace_scale, laplace_topk, nonprivate_topk, recommend, DpConfig, Mechanism,
    Recommendation, SequentialSampler, DEFAULT_DELTA_P,
};
pub use metrics::{
    concentration_epsilon, gamma_bar_empirical, latent_rank_loss, privacy_utility_tradeoff,
    rank_loss_bound, ranking_loss, score_gap, surrogate_loss, trivial_rank_loss_max,
    utility_loss_bound, BoundParams, BoundReport, LatentLossSummary, RankLossInput, Tradeoff,
};
pub use rng::{task_rng, Purpose, TaskRng};
pub use scalar::{log_sum_exp, Real};

pub type ScoreFunctionF64 = ScoreFunction<f64>;
pub type ScoredCandidatesF64 = ScoredCandidates<f64>;
pub type DpConfigF64 = DpConfig<f64>;
pub type RecommendationF64 = Recommendation<f64>;
pub type SequentialSamplerF64 = SequentialSampler<f64>;
pub type AuditReportF64 = AuditReport<f64>;
pub type LatentModelF64 = LatentModel<f64>;
pub type BoundParamsF64 = BoundParams<f64>;
pub type BoundReportF64 = BoundReport<f64>;
pub type LatentLossSummaryF64 = LatentLossSummary<f64>;
pub type EvalRowF64 = EvalRow<f64>;
pub type EvalReportF64 = EvalReport<f64>;

pub type ScoreFunctionF32 = ScoreFunction<f32>;
pub type ScoredCandidatesF32 = ScoredCandidates<f32>;
pub type DpConfigF32 = DpConfig<f32>;
pub type RecommendationF32 = Recommendation<f32>;
pub type SequentialSamplerF32 = SequentialSampler<f32>;
pub type AuditReportF32 = AuditReport<f32>;
pub type LatentModelF32 = LatentModel<f32>;
pub type BoundParamsF32 = BoundParams<f32>;
pub type BoundReportF32 = BoundReport<f32>;
pub type LatentLossSummaryF32 = LatentLossSummary<f32>;
pub type EvalRowF32 = EvalRow<f32>;
pub type EvalReportF32 = EvalReport<f32>;
