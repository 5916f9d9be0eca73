//! Choice-theoretic machinery at desk scale: choice functions as explicit
//! tables, consistency axioms with reproducible counterexample witnesses,
//! stable sets and self-stability, a zoo of voting rules, and an exact
//! rational solver for maximal lotteries.
//!
//! Everything is exact and deterministic. Feasible sets are bitsets over a
//! universe of at most 16 alternatives; enumeration order is always
//! (size, member sequence), so serialized output is byte-stable.

pub mod axioms;
pub mod choice;
pub mod enumerate;
pub mod fixtures;
pub mod lp;
pub mod prefs;
pub mod scf;
pub mod universe;

pub use axioms::{
    check_axiom, check_rationalizable, check_scf_condition, check_self_stable,
    search_counterexample, set_rationalize, stable_sets, AxiomId, ConditionVerdict, GeneratorSpec,
    RationalizabilityReport, ScfCondition, StableSetReport, Verdict, Witness,
};
pub use choice::{
    base_relation_alts, base_relation_sets, maximal_sets, revealed_relation_alts,
    revealed_relation_sets, AltRelation, ChoiceTable, SetRelation,
};
pub use lp::{
    essential_support, maximal_lottery, simplex_solve, LinearProgram, Lottery, LpOutcome, Rational,
};
pub use prefs::{
    margins, may_pairwise, parse_profile, parse_profile_with, weak_condorcet_winners, MarginMatrix,
    Profile, WeakOrder,
};
pub use scf::{induce_table, RunoffPolicy, Scf, ScfError, ScoreFamily, ScoreVector};
pub use universe::{FeasibleSet, Universe};
