//! Strategic network formation with platform recommendations.
//!
//! Nodes belong to a privileged green group or a blue group and receive
//! exogenous opportunities from their group's distribution. Surplus
//! opportunities flow to neighbors. Organic links cost `γ` per endpoint;
//! recommended links are free. The crate decides and enumerates
//! defection-free pairwise Nash (DFPN) networks, builds recommendation sets,
//! and bounds utilities over equilibria.

pub mod bounds;
pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod model;
pub mod recsets;
pub mod scalar;

pub use bounds::{
    feasible_degree_set, feasible_pairs, reciprocity_constant, ur_envelope, utility_envelope_asymptotic,
    utility_envelope_finite, welfare_envelope, Assumptions, DegreeEnvelope, DegreePair, EnvelopeMode, Interval,
    PairSet, UtilityEnvelope, WelfareEnvelope,
};
pub use equilibrium::{
    best_defection_for_add, construct_symmetric_equilibrium, enumerate_equilibria, is_dfpn, is_dfpn_with,
    reciprocity_audit, AuditReport, DefectionKind, DefectionWitness, EnumerateOptions, Enumeration, PairScoring,
    SymmetricEquilibrium, Verdict,
};
pub use error::{Error, Result};
pub use model::{
    utilities, utility, utility_ratio, welfare_exogenous, welfare_rawlsian, welfare_utilitarian, Group,
    Instance, Network, OpportunityDistribution, ParamPoint, PassTable, Population,
};
pub use scalar::{parse_rational, Rational, Scalar};
pub use recsets::{construct_recommendations, validate_recommendations, RecViolation, RecommendationSet};
