//! Finite-word languages Σ(t, n), their certificates, and the cut calculus.

pub(crate) mod bounds;
pub mod cuts;
pub mod enumerate;
pub mod membership;
pub mod patterns;
pub mod threshold;

pub use cuts::{
    classify_cut, classify_cut_with_depth, compare_bad_cuts, push_cut, Class, CompareReport, Cut,
    CutClass, CutTemplate,
};
pub use enumerate::{sigma3_factors, sigma_enumerate, LanguageSet};
pub use membership::{
    markov_at_most, markov_periods, membership, Budget, MembershipCertificate, Verdict,
    WitnessIndex,
};
pub use patterns::{
    confirm_forbidden, connecting_sequence, forbidden_pattern_check, ConnectKind, PatternHit,
    PatternReport, PatternRule,
};
pub use threshold::{parse_exact, Threshold};
