//! BC entropies, Shannon-entropy asymptotics, thinning statistics and the rate region.
//!
//! All entropies are in nats.

mod bc;
mod numerics;
mod region;
mod thinning;

pub use bc::{bc_entropy, bc_entropy_cm, bc_entropy_er, exact_shannon_er, BcSummary, Ensemble};
pub use numerics::{
    binary_entropy, ln_binomial, ln_factorial, ln_factorial_ratio, log_multinomial, s_func, shannon,
};
pub(crate) use numerics::{entropy_unchecked, s_unchecked};
pub use region::{lex_succ, lex_succeq, rate_region_contains, ConstraintCheck, RateTuple, RegionVerdict};
pub use thinning::{
    expected_log_factorial, mean, thinned_marginal, thinning_law, thinning_stats, ThinningStats,
};
