//! Exhaustive and closed-form checks of the counting lemmas behind the rate region.

mod asymptotics;
mod bc_oracle;
mod bounds;
mod counting;
mod suite;

pub use asymptotics::{
    cm_count_asymptote, cm_count_finite, multinomial_asymptotics, thinning_identity, IdentityCheck, MultinomialCase,
    MultinomialReport,
};
pub use bc_oracle::{bc_definition_oracle, BallCount, MAX_MARKED_ENUMERATION, MAX_MARKED_ENUMERATION_N};
pub use bounds::{cond_bound_a2_er, cond_bound_cm, typical_bound_a1, A2Terms, CondBoundCm};
pub use counting::{enumerate_with_degrees, is_graphic, MAX_DEGREE_ENUMERATION_N};
pub(crate) use counting::check_degree_input;
pub use suite::{run_suite, CheckResult, Suite, VerifyReport};
