//! Freeness certificates: staircase bases, chain builders, the independent
//! checker and the multi-prime composer.

mod certificate;
mod chain;
mod check;
mod compose;
mod staircase;

pub use certificate::{assemble, free_from_bounded_torsion, in_span, ChainStep, FreenessCertificate, StepPlan};
pub use chain::{
    build_chain_limit, build_chain_successor, cofinal_sequence, label_staircases, limit_families, plan_chain_limit,
    plan_chain_successor, ChainPlan, LimitFamilyMember,
};
pub use check::{smooth_chain_check, CheckFailure, CheckSite};
pub use compose::{multi_prime_compose, ComposeOptions};
pub use staircase::{
    construct_staircase, verify_staircase, AxiomOutcome, StaircaseAxiom, StaircaseBase, StaircaseReport, Violation,
};
