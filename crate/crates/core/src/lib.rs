//! Word problems and distances in the space of two-generated marked groups.
//!
//! Deciders are provided for the Baumslag–Solitar groups `BS(m,n)`, the
//! free group `F₂` and the wreath product `ℤ ≀ ℤ`. On top of them sit exact
//! girth computations, first-disagreement searches (the marked-group
//! distance), the congruence test words that separate members of a family
//! `BS(m, n)`, and truncated `m`-adic integers to describe limits of such
//! families.

pub mod bs;
pub mod congruence;
pub mod madic;
pub mod space;
pub mod word;
pub mod wreath;

pub use bs::{
    girth_bruteforce, girth_formula, girth_witnesses, hnn_girth_bounds, word_polynomial, AffineMapQ, BsError,
    BsGroup, Extended, Girth, GirthResult, HnnBoundInputs, SearchMode, SyllableForm, WordPolynomial,
};
pub use congruence::{
    congruence_predicate, congruence_witness_word, continuity_modulus, division_chain, CongruenceError,
    CongruenceModulus, DivisionChain,
};
pub use madic::{limit_of_sequence, madic_distance, MadicError, MadicInt, MadicValue, SequenceSpec};
pub use space::{
    distance_exponent, first_disagreement, make_oracle, relations_up_to, stabilization_check, DisagreementResult,
    DistanceExponent, Free, MarkedGroup, MarkedGroupOracle, StabilizationReport,
};
pub use word::{cyclic_reduce, enumerate_reduced, free_reduce, syllables, Generator, Letter, SyllableDecomposition, Word};
pub use wreath::{eval_wreath, wreath_is_identity, Wreath, WreathElement};
