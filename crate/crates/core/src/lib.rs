//! Deciding whether a complete weighted graph has a Hamilton cycle at least
//! `k` below the average cycle weight.

pub mod cli;
pub mod error;
pub mod fourcycle;
pub mod hamcycle;
pub mod instance;
pub mod kernel;
pub mod oracle;
pub mod reduction;
mod scoring;

pub use cli::{generate, Generator, InstanceFile, ResultRecord};
pub use error::{Error, Result};
pub use fourcycle::{
    balance, crossing, embedding_status, expected_q, four_cycle_norm, improve, light_hamilton,
    noncrossing_selection, q_value, EmbedStatus, FourCycle, LightCycleExpectation, Selection,
};
pub use hamcycle::{
    derandomize, edge_prob, expected_weight, extension_count, min_avg_cycle,
    ConditionalExpectation, FnExpectation, HamCycle, PartialHamCycle, Scores, WeightExpectation,
};
pub use instance::{
    CertificateCheck, DensityRatio, Edge, SupportSplit, TransformLedger, Weighting,
};
pub use kernel::{
    build_x, candidate_sets, dirac_extend, maximal_negative_matching, min_hamilton_with_structure,
    min_x_partial, solve, CandidateSets, Route, SolveReport, Verdict, XPartialHC,
};
pub use oracle::{
    brute_min_x_partial, enumerate_hamiltons, equivalence_check, exact_min_hamilton,
    verdict_oracle, EnumerationBudget,
};
pub use reduction::{
    compress, dichotomy, largest_component, removal_set, sparsify, ConstantsProfile,
    DichotomyResult, ProfileKind,
};
