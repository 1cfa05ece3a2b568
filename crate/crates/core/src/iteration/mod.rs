//! Brake iteration, concatenation and time shift of symplectic paths, and
//! runtime verification of the iteration formulas and index identities.

mod construct;
mod corpus;
mod verify;

pub use construct::{brake_double_end, brake_iterate, concat, tilde_shift};
pub use corpus::{corpus_matrizant, corpus_path, describe, CorpusParams, CORPUS_STEPS};
pub use verify::{
    perturbed_matrizant, verify_bott, verify_hormander, verify_identities, verify_inequalities,
    with_retry, Claim, ClaimKind, VerificationReport, RETRY_EPSILON,
};
