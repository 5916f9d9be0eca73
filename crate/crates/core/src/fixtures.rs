//! Bundled example data used by the `repro` command and the test suites.
//!
//! The two profiles are classics: a three-voter majority cycle and a six-voter
//! profile on which every scoring rule and every weak Condorcet extension
//! picks `{a}` from the full set but `{a,b}` from the pair. The three choice
//! tables are small hand-picked functions that separate the consistency
//! axioms from one another.

use crate::choice::ChoiceTable;
use crate::prefs::{parse_profile, Profile};

/// Three voters whose majority relation cycles: a beats b beats c beats a.
pub const TABLE1_PROF: &str = "\
# three-voter majority cycle
1: a > b > c
1: c > a > b
1: b > c > a
";

/// Six voters; a ties b pairwise, beats c, and wins every scoring rule.
pub const TABLE2_PROF: &str = "\
# six voters, three alternatives
3: a > c > b
2: b > a > c
1: c > b > a
";

/// Majority choice on pairs of the cycle profile, everything on the triple.
/// Satisfies the set-level axioms but not the alternative-level ones.
pub const FIG1_CT: &str = "\
{a} -> {a}
{b} -> {b}
{c} -> {c}
{a,b} -> {a}
{a,c} -> {c}
{b,c} -> {b}
{a,b,c} -> {a,b,c}
";

/// Rationalizable table (a over c over b, a tied with b) that still fails
/// set-contraction consistency.
pub const FIG2_CT: &str = "\
{a} -> {a}
{b} -> {b}
{c} -> {c}
{a,b} -> {a,b}
{a,c} -> {a}
{b,c} -> {c}
{a,b,c} -> {a}
";

/// Satisfies expansion consistency for alternatives but not for sets.
pub const GAMMA_CT: &str = "\
{a} -> {a}
{b} -> {b}
{c} -> {c}
{a,b} -> {a}
{a,c} -> {a}
{b,c} -> {b}
{a,b,c} -> {a,b,c}
";

pub fn table1_profile() -> Profile {
    parse_profile(TABLE1_PROF).expect("bundled profile parses")
}

pub fn table2_profile() -> Profile {
    parse_profile(TABLE2_PROF).expect("bundled profile parses")
}

pub fn fig1_table() -> ChoiceTable {
    ChoiceTable::parse(FIG1_CT).expect("bundled table parses")
}

pub fn fig2_table() -> ChoiceTable {
    ChoiceTable::parse(FIG2_CT).expect("bundled table parses")
}

pub fn gamma_table() -> ChoiceTable {
    ChoiceTable::parse(GAMMA_CT).expect("bundled table parses")
}
