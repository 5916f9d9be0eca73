//! Concrete social choice functions: scoring rules, runoff rules, and
//! majority-based tournament solutions, plus induction of explicit choice
//! tables from a rule and a profile.
//!
//! Rules that only depend on pairwise majorities are implemented on
//! [`MarginMatrix`] directly, so synthetic tournaments can be fed to them
//! without inventing a realizing profile.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use thiserror::Error;

use crate::choice::ChoiceTable;
use crate::lp::{essential_support, rat, Rational};
use crate::prefs::{margins, weak_condorcet_winners, MarginMatrix, PrefsError, Profile};
use crate::universe::{FeasibleSet, Universe};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScfError {
    #[error("not a tournament: {a},{b} tied")]
    NotATournament { a: String, b: String },
    #[error("rule requires linear preferences on the feasible set")]
    NonLinearRestriction,
    #[error("no score vector defined for feasible sets of size {0}")]
    UndefinedScoreLength(usize),
    #[error("score vector must be nonincreasing with its first entry above its last")]
    InvalidScoreVector,
    #[error("feasible set is not within the profile's universe")]
    NotInUniverse,
    #[error("unknown rule token {0:?}")]
    UnknownToken(String),
}

impl From<PrefsError> for ScfError {
    fn from(_: PrefsError) -> Self {
        ScfError::NotInUniverse
    }
}

/// A tied pair (by universe indices) where a strict tournament was required.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TournamentTie {
    pub a: usize,
    pub b: usize,
}

fn tie_error(universe: &Universe, tie: TournamentTie) -> ScfError {
    ScfError::NotATournament {
        a: universe.name(tie.a).to_string(),
        b: universe.name(tie.b).to_string(),
    }
}

/// Positional scores `s1 >= s2 >= ... >= sk` with `s1 > sk`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector(Vec<Rational>);

impl ScoreVector {
    pub fn new(scores: Vec<Rational>) -> Result<Self, ScfError> {
        if scores.len() < 2
            || scores.windows(2).any(|w| w[0] < w[1])
            || scores.first() == scores.last()
        {
            return Err(ScfError::InvalidScoreVector);
        }
        Ok(ScoreVector(scores))
    }

    pub fn scores(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least two entries by construction
    }
}

/// Produces one score vector per feasible-set size. The sizes are
/// deliberately independent of each other; nothing ties the length-2 vector
/// to the length-3 vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreFamily {
    /// `(1, 0, ..., 0)`
    Plurality,
    /// `(k-1, k-2, ..., 0)`
    Borda,
    /// `(1, ..., 1, 0)`
    Antiplurality,
    /// Explicit vectors per size; sizes not present are undefined.
    Custom(BTreeMap<usize, ScoreVector>),
}

impl ScoreFamily {
    /// The score vector for feasible sets of `k >= 2` alternatives.
    pub fn vector(&self, k: usize) -> Result<ScoreVector, ScfError> {
        if k < 2 {
            return Err(ScfError::UndefinedScoreLength(k));
        }
        match self {
            ScoreFamily::Plurality => {
                let mut v = vec![Rational::zero(); k];
                v[0] = rat(1);
                ScoreVector::new(v)
            }
            ScoreFamily::Borda => ScoreVector::new((0..k).rev().map(|i| rat(i as i64)).collect()),
            ScoreFamily::Antiplurality => {
                let mut v = vec![rat(1); k];
                v[k - 1] = Rational::zero();
                ScoreVector::new(v)
            }
            ScoreFamily::Custom(map) => map
                .get(&k)
                .cloned()
                .ok_or(ScfError::UndefinedScoreLength(k)),
        }
    }
}

/// Elimination criterion for runoff rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunoffPolicy {
    /// Drop all alternatives with minimal plurality score each round.
    PluralityLoser,
    /// Drop all alternatives with Borda score strictly below the round's
    /// mean.
    BelowAverageBorda,
}

/// Identifier of a concrete social choice function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scf {
    Scoring(ScoreFamily),
    Runoff(RunoffPolicy),
    Minimax,
    TopCycle,
    Gocha,
    UncoveredSet,
    IteratedUc,
    MinimalCovering,
    EssentialSet,
    Omninomination,
    /// Weak Condorcet winners when they exist, the whole feasible set
    /// otherwise; the minimal rule that extends pairwise majority choice.
    MayExtension,
}

impl Scf {
    pub fn plurality() -> Self {
        Scf::Scoring(ScoreFamily::Plurality)
    }

    pub fn borda() -> Self {
        Scf::Scoring(ScoreFamily::Borda)
    }

    pub fn antiplurality() -> Self {
        Scf::Scoring(ScoreFamily::Antiplurality)
    }

    pub fn stv() -> Self {
        Scf::Runoff(RunoffPolicy::PluralityLoser)
    }

    pub fn nanson() -> Self {
        Scf::Runoff(RunoffPolicy::BelowAverageBorda)
    }

    /// The stable command-line tokens.
    pub const TOKENS: [&'static str; 13] = [
        "plurality",
        "borda",
        "antiplurality",
        "stv",
        "nanson",
        "minimax",
        "tc",
        "gocha",
        "uc",
        "iuc",
        "mc",
        "es",
        "omni",
    ];

    pub fn from_token(token: &str) -> Result<Self, ScfError> {
        Ok(match token {
            "plurality" => Scf::plurality(),
            "borda" => Scf::borda(),
            "antiplurality" => Scf::antiplurality(),
            "stv" => Scf::stv(),
            "nanson" => Scf::nanson(),
            "minimax" => Scf::Minimax,
            "tc" => Scf::TopCycle,
            "gocha" => Scf::Gocha,
            "uc" => Scf::UncoveredSet,
            "iuc" => Scf::IteratedUc,
            "mc" => Scf::MinimalCovering,
            "es" => Scf::EssentialSet,
            "omni" => Scf::Omninomination,
            other => return Err(ScfError::UnknownToken(other.to_string())),
        })
    }

    pub fn token(&self) -> &'static str {
        match self {
            Scf::Scoring(ScoreFamily::Plurality) => "plurality",
            Scf::Scoring(ScoreFamily::Borda) => "borda",
            Scf::Scoring(ScoreFamily::Antiplurality) => "antiplurality",
            Scf::Scoring(ScoreFamily::Custom(_)) => "scoring",
            Scf::Runoff(RunoffPolicy::PluralityLoser) => "stv",
            Scf::Runoff(RunoffPolicy::BelowAverageBorda) => "nanson",
            Scf::Minimax => "minimax",
            Scf::TopCycle => "tc",
            Scf::Gocha => "gocha",
            Scf::UncoveredSet => "uc",
            Scf::IteratedUc => "iuc",
            Scf::MinimalCovering => "mc",
            Scf::EssentialSet => "es",
            Scf::Omninomination => "omni",
            Scf::MayExtension => "may",
        }
    }

    /// Rules that are undefined when some pairwise majority ties.
    pub fn tournament_only(&self) -> bool {
        matches!(
            self,
            Scf::UncoveredSet | Scf::IteratedUc | Scf::MinimalCovering
        )
    }

    /// Rules that need linear ballots on the feasible set.
    pub fn linear_only(&self) -> bool {
        matches!(self, Scf::Scoring(_) | Scf::Runoff(_) | Scf::Omninomination)
    }

    /// Evaluates the rule on a profile and feasible set.
    pub fn choose(
        &self,
        profile: &Profile,
        feasible: FeasibleSet,
    ) -> Result<FeasibleSet, ScfError> {
        let universe = profile.universe();
        if !feasible.is_subset_of(universe.full_set()) {
            return Err(ScfError::NotInUniverse);
        }
        match self {
            Scf::Scoring(family) => scoring_choice(profile, feasible, family),
            Scf::Runoff(policy) => runoff_choice(profile, feasible, *policy),
            Scf::Minimax => minimax(profile, feasible),
            Scf::TopCycle => top_cycle(profile, feasible),
            Scf::Gocha => gocha(profile, feasible),
            Scf::UncoveredSet => uncovered_set(profile, feasible),
            Scf::IteratedUc => iterated_uc(profile, feasible),
            Scf::MinimalCovering => minimal_covering(profile, feasible),
            Scf::EssentialSet => essential_set(profile, feasible),
            Scf::Omninomination => omninomination(profile, feasible),
            Scf::MayExtension => Ok(weak_condorcet_winners(profile, feasible)?.unwrap_or(feasible)),
        }
    }
}

impl fmt::Display for Scf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

fn check_linear_on(profile: &Profile, feasible: FeasibleSet) -> Result<(), ScfError> {
    if profile
        .entries()
        .iter()
        .all(|(_, o)| o.is_linear_on(feasible))
    {
        Ok(())
    } else {
        Err(ScfError::NonLinearRestriction)
    }
}

/// Cumulative positional scores of every member of `feasible`, in member
/// order.
pub fn scoring_scores(
    profile: &Profile,
    feasible: FeasibleSet,
    family: &ScoreFamily,
) -> Result<Vec<(usize, Rational)>, ScfError> {
    check_linear_on(profile, feasible)?;
    let vector = family.vector(feasible.len())?;
    let s = vector.scores();
    let mut out: Vec<(usize, Rational)> = feasible
        .members()
        .map(|alt| (alt, Rational::zero()))
        .collect();
    for (mult, order) in profile.entries() {
        let w = rat(*mult as i64);
        for (alt, score) in out.iter_mut() {
            let rank = order.rank_within(*alt, feasible);
            *score += w.clone() * &s[rank];
        }
    }
    Ok(out)
}

/// Alternatives with the highest cumulative score; exact rational
/// comparison.
pub fn scoring_choice(
    profile: &Profile,
    feasible: FeasibleSet,
    family: &ScoreFamily,
) -> Result<FeasibleSet, ScfError> {
    if feasible.len() == 1 {
        check_linear_on(profile, feasible)?;
        return Ok(feasible);
    }
    let scores = scoring_scores(profile, feasible, family)?;
    let best = scores
        .iter()
        .map(|(_, s)| s)
        .max()
        .expect("feasible sets are nonempty")
        .clone();
    let mask = scores
        .iter()
        .filter(|(_, s)| *s == best)
        .fold(0u32, |m, (alt, _)| m | (1 << alt));
    Ok(FeasibleSet::from_mask(mask).expect("some alternative attains the maximum"))
}

/// Iterated elimination. A round that would eliminate every remaining
/// alternative instead terminates and returns the survivors.
pub fn runoff_choice(
    profile: &Profile,
    feasible: FeasibleSet,
    policy: RunoffPolicy,
) -> Result<FeasibleSet, ScfError> {
    check_linear_on(profile, feasible)?;
    let mut current = feasible;
    loop {
        if current.len() == 1 {
            return Ok(current);
        }
        let eliminated: u32 = match policy {
            RunoffPolicy::PluralityLoser => {
                let scores: Vec<(usize, u64)> = current
                    .members()
                    .map(|alt| {
                        let tops = profile
                            .entries()
                            .iter()
                            .filter(|(_, o)| o.rank_within(alt, current) == 0)
                            .map(|(m, _)| *m as u64)
                            .sum();
                        (alt, tops)
                    })
                    .collect();
                let min = scores.iter().map(|(_, s)| *s).min().unwrap();
                scores
                    .iter()
                    .filter(|(_, s)| *s == min)
                    .fold(0u32, |m, (alt, _)| m | (1 << alt))
            }
            RunoffPolicy::BelowAverageBorda => {
                let scores = scoring_scores(profile, current, &ScoreFamily::Borda)?;
                let total: Rational = scores.iter().map(|(_, s)| s.clone()).sum();
                let k = rat(current.len() as i64);
                // s < total/k, kept exact as k*s < total
                scores
                    .iter()
                    .filter(|(_, s)| s.clone() * &k < total)
                    .fold(0u32, |m, (alt, _)| m | (1 << alt))
            }
        };
        if eliminated == 0 || eliminated == current.mask() {
            return Ok(current);
        }
        current = FeasibleSet::from_mask(current.mask() & !eliminated)
            .expect("not every alternative was eliminated");
    }
}

/// Argmin of the worst pairwise margin against each alternative; a weak
/// Condorcet extension.
pub fn minimax_of(m: &MarginMatrix) -> FeasibleSet {
    let k = m.len();
    let worst: Vec<i64> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .map(|j| m.margin_at(j, i))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let best = *worst.iter().min().expect("nonempty");
    let mask = (0..k)
        .filter(|&i| worst[i] == best)
        .fold(0u32, |acc, i| acc | (1 << m.members()[i]));
    FeasibleSet::from_mask(mask).expect("argmin is nonempty")
}

pub fn minimax(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    Ok(minimax_of(&margins(profile, feasible)?))
}

/// Reflexive-transitive reachability over positions, one row bitmask each.
fn closure(mut reach: Vec<u32>) -> Vec<u32> {
    let k = reach.len();
    for (i, row) in reach.iter_mut().enumerate() {
        *row |= 1 << i;
    }
    loop {
        let mut changed = false;
        for i in 0..k {
            let mut grown = reach[i];
            let mut rest = reach[i];
            while rest != 0 {
                let j = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                grown |= reach[j];
            }
            if grown != reach[i] {
                reach[i] = grown;
                changed = true;
            }
        }
        if !changed {
            return reach;
        }
    }
}

fn positions_to_set(m: &MarginMatrix, positions: u32) -> FeasibleSet {
    let mask = (0..m.len())
        .filter(|&i| positions & (1 << i) != 0)
        .fold(0u32, |acc, i| acc | (1 << m.members()[i]));
    FeasibleSet::from_mask(mask).expect("positions nonempty")
}

/// Smallest set whose members strictly beat every outsider (top cycle /
/// Smith set). Computed as the top component of reachability under
/// "beats or ties".
pub fn top_cycle_of(m: &MarginMatrix) -> FeasibleSet {
    let k = m.len();
    let reach = closure(
        (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| j != i && m.margin_at(i, j) >= 0)
                    .fold(0u32, |acc, j| acc | (1 << j))
            })
            .collect(),
    );
    let all = (1u32 << k) - 1;
    let top = (0..k)
        .filter(|&i| reach[i] == all)
        .fold(0u32, |acc, i| acc | (1 << i));
    positions_to_set(m, top)
}

pub fn top_cycle(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    Ok(top_cycle_of(&margins(profile, feasible)?))
}

/// Union of minimal sets undominated under strict majority (GOCHA / Schwartz
/// set): the source components of the strict-majority digraph.
pub fn gocha_of(m: &MarginMatrix) -> FeasibleSet {
    let k = m.len();
    let strict: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| m.margin_at(i, j) > 0)
                .fold(0u32, |acc, j| acc | (1 << j))
        })
        .collect();
    let reach = closure(strict.clone());
    let mut result = 0u32;
    for i in 0..k {
        let component = (0..k)
            .filter(|&j| reach[i] & (1 << j) != 0 && reach[j] & (1 << i) != 0)
            .fold(0u32, |acc, j| acc | (1 << j));
        // source component: no strict edge enters it from outside
        let dominated = (0..k).any(|y| component & (1 << y) == 0 && strict[y] & component != 0);
        if !dominated {
            result |= component;
        }
    }
    positions_to_set(m, result)
}

pub fn gocha(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    Ok(gocha_of(&margins(profile, feasible)?))
}

/// Alternatives covered by nobody. `x` covers `y` when `x` beats `y` and
/// beats everything `y` beats. Strict tournaments only.
pub fn uncovered_of(m: &MarginMatrix) -> Result<FeasibleSet, TournamentTie> {
    m.tournament_check()
        .map_err(|(a, b)| TournamentTie { a, b })?;
    let k = m.len();
    let beats: Vec<u32> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| m.margin_at(i, j) > 0)
                .fold(0u32, |acc, j| acc | (1 << j))
        })
        .collect();
    let uncovered = (0..k)
        .filter(|&y| !(0..k).any(|x| beats[x] & (1 << y) != 0 && beats[y] & !beats[x] == 0))
        .fold(0u32, |acc, y| acc | (1 << y));
    Ok(positions_to_set(m, uncovered))
}

pub fn uncovered_set(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    let m = margins(profile, feasible)?;
    uncovered_of(&m).map_err(|tie| tie_error(profile.universe(), tie))
}

/// Fixed point of repeated uncovered-set application.
pub fn iterated_uc_of(m: &MarginMatrix) -> Result<FeasibleSet, TournamentTie> {
    let mut current = m.feasible();
    loop {
        let next = uncovered_of(&m.restrict(current))?;
        if next == current {
            return Ok(current);
        }
        current = next;
    }
}

pub fn iterated_uc(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    let m = margins(profile, feasible)?;
    iterated_uc_of(&m).map_err(|tie| tie_error(profile.universe(), tie))
}

/// Sets `X ⊆ feasible` that are fixed points of
/// `X ↦ {a : a ∈ S(X ∪ {a})}` for a choice rule `S` over subsets of the
/// matrix's feasible set; canonical order.
pub(crate) fn stable_sets_by<E>(
    feasible: FeasibleSet,
    mut rule: impl FnMut(FeasibleSet) -> Result<FeasibleSet, E>,
) -> Result<Vec<FeasibleSet>, E> {
    let mut stable = Vec::new();
    for x in feasible.subsets() {
        let inside = rule(x)?;
        let mut image = inside.mask() & x.mask();
        if image == x.mask() {
            // internal stability holds; test each outside alternative
            for a in feasible.members() {
                if !x.contains(a) && rule(x.with(a))?.contains(a) {
                    image |= 1 << a;
                }
            }
        }
        if image == x.mask() {
            stable.push(x);
        }
    }
    Ok(stable)
}

pub(crate) fn inclusion_minimal(sets: &[FeasibleSet]) -> Vec<FeasibleSet> {
    sets.iter()
        .copied()
        .filter(|&x| sets.iter().all(|&y| y == x || !y.is_subset_of(x)))
        .collect()
}

/// The unique minimal set that is stable with respect to the uncovered set.
/// Uniqueness is a theorem for tournaments; its failure here would be a bug.
pub fn minimal_covering_of(m: &MarginMatrix) -> Result<FeasibleSet, TournamentTie> {
    m.tournament_check()
        .map_err(|(a, b)| TournamentTie { a, b })?;
    let stable = stable_sets_by(m.feasible(), |set| uncovered_of(&m.restrict(set)))?;
    let minimal = inclusion_minimal(&stable);
    assert_eq!(
        minimal.len(),
        1,
        "internal error: minimal covering set must be unique in a tournament"
    );
    Ok(minimal[0])
}

pub fn minimal_covering(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    let m = margins(profile, feasible)?;
    minimal_covering_of(&m).map_err(|tie| tie_error(profile.universe(), tie))
}

/// Alternatives with positive probability in some maximal lottery of the
/// margin game. Ties and weak orders are fine.
pub fn essential_set_of(m: &MarginMatrix) -> FeasibleSet {
    essential_support(m)
}

pub fn essential_set(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    Ok(essential_set_of(&margins(profile, feasible)?))
}

/// Everything ranked first by at least one voter within `feasible`.
pub fn omninomination(profile: &Profile, feasible: FeasibleSet) -> Result<FeasibleSet, ScfError> {
    check_linear_on(profile, feasible)?;
    let mask = profile
        .entries()
        .iter()
        .fold(0u32, |m, (_, o)| m | o.top_within(feasible).mask());
    Ok(FeasibleSet::from_mask(mask).expect("every ballot has a top"))
}

/// The explicit choice table a rule induces on a profile: one entry per
/// nonempty subset of `universe`, each computed on the restriction.
pub fn induce_table(
    scf: &Scf,
    profile: &Profile,
    universe: &Universe,
) -> Result<ChoiceTable, ScfError> {
    let restricted;
    let profile = if universe == profile.universe() {
        profile
    } else {
        let mut mask = 0u32;
        for name in universe.names() {
            let alt = profile
                .universe()
                .index_of(name)
                .ok_or(ScfError::NotInUniverse)?;
            mask |= 1 << alt;
        }
        let feasible = FeasibleSet::from_mask(mask).expect("universe is nonempty");
        restricted = profile.restrict(feasible)?;
        &restricted
    };
    let result = ChoiceTable::try_from_fn(universe.clone(), |set| scf.choose(profile, set))?;
    Ok(result.expect("rules return subsets of their feasible set"))
}

/// Margin matrices of all labelled tournaments on `k` alternatives, each
/// margin `±1`; deterministic order.
pub fn all_tournaments(universe: &Universe) -> Vec<MarginMatrix> {
    let k = universe.len();
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| ((i + 1)..k).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::with_capacity(1 << pairs.len());
    for bits in 0u64..(1u64 << pairs.len()) {
        let mut profile_free = vec![0i64; k * k];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let sign = if bits & (1 << p) != 0 { 1 } else { -1 };
            profile_free[i * k + j] = sign;
            profile_free[j * k + i] = -sign;
        }
        out.push(MarginMatrix::from_raw((0..k).collect(), profile_free));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lp::ratio;

    fn u3() -> Universe {
        Universe::new(["a", "b", "c"]).unwrap()
    }

    fn set(u: &Universe, names: &[&str]) -> FeasibleSet {
        u.set_of(names.iter().copied()).unwrap()
    }

    #[test]
    fn scoring_on_the_six_voter_profile() {
        let p = fixtures::table2_profile();
        let u = u3();
        let full = u.full_set();

        // normalized Borda (1, 1/2, 0): scores 4, 5/2, 5/2
        let mut map = BTreeMap::new();
        map.insert(
            3,
            ScoreVector::new(vec![rat(1), ratio(1, 2), rat(0)]).unwrap(),
        );
        map.insert(2, ScoreVector::new(vec![rat(1), rat(0)]).unwrap());
        let family = ScoreFamily::Custom(map);
        let scores = scoring_scores(&p, full, &family).unwrap();
        assert_eq!(scores[0].1, rat(4));
        assert_eq!(scores[1].1, ratio(5, 2));
        assert_eq!(scores[2].1, ratio(5, 2));
        assert_eq!(scoring_choice(&p, full, &family).unwrap(), set(&u, &["a"]));

        // plurality: 3, 2, 1
        let scores = scoring_scores(&p, full, &ScoreFamily::Plurality).unwrap();
        assert_eq!(scores[0].1, rat(3));
        assert_eq!(scores[1].1, rat(2));
        assert_eq!(scores[2].1, rat(1));
        assert_eq!(
            scoring_choice(&p, full, &ScoreFamily::Plurality).unwrap(),
            set(&u, &["a"])
        );

        // any family ties the pair 3-3
        let ab = set(&u, &["a", "b"]);
        for family in [
            ScoreFamily::Plurality,
            ScoreFamily::Borda,
            ScoreFamily::Antiplurality,
        ] {
            assert_eq!(scoring_choice(&p, ab, &family).unwrap(), ab);
        }

        // singletons need no vector at all
        assert_eq!(
            scoring_choice(&p, set(&u, &["c"]), &ScoreFamily::Plurality).unwrap(),
            set(&u, &["c"])
        );
    }

    #[test]
    fn scoring_argmax_is_affine_invariant() {
        let p = fixtures::table2_profile();
        let u = u3();
        // 5*borda + 7 on every length
        let mut map = BTreeMap::new();
        map.insert(3, ScoreVector::new(vec![rat(17), rat(12), rat(7)]).unwrap());
        map.insert(2, ScoreVector::new(vec![rat(12), rat(7)]).unwrap());
        let scaled = ScoreFamily::Custom(map);
        for feasible in u.feasible_sets() {
            assert_eq!(
                scoring_choice(&p, feasible, &scaled).unwrap(),
                scoring_choice(&p, feasible, &ScoreFamily::Borda).unwrap()
            );
        }
    }

    #[test]
    fn scoring_rejects_bad_inputs() {
        assert_eq!(
            ScoreVector::new(vec![rat(0), rat(1)]),
            Err(ScfError::InvalidScoreVector)
        );
        assert_eq!(
            ScoreVector::new(vec![rat(1), rat(1)]),
            Err(ScfError::InvalidScoreVector)
        );
        assert_eq!(
            ScoreVector::new(vec![rat(1)]),
            Err(ScfError::InvalidScoreVector)
        );

        let tie = crate::prefs::parse_profile("1: a ~ b > c").unwrap();
        let u = u3();
        assert_eq!(
            scoring_choice(&tie, u.full_set(), &ScoreFamily::Borda),
            Err(ScfError::NonLinearRestriction)
        );
        // the tie is outside the feasible set, so this one is fine
        assert!(scoring_choice(&tie, set(&u, &["a", "c"]), &ScoreFamily::Borda).is_ok());

        let p = fixtures::table2_profile();
        let custom = ScoreFamily::Custom(BTreeMap::new());
        assert_eq!(
            scoring_choice(&p, u.full_set(), &custom),
            Err(ScfError::UndefinedScoreLength(3))
        );
    }

    #[test]
    fn runoff_traces() {
        let p = fixtures::table2_profile();
        let u = u3();
        let full = u.full_set();
        // Borda 4, 5/2, 5/2 against mean 3: b and c drop
        assert_eq!(
            runoff_choice(&p, full, RunoffPolicy::BelowAverageBorda).unwrap(),
            set(&u, &["a"])
        );
        // plurality drops c, then a and b tie at 3-3
        assert_eq!(
            runoff_choice(&p, full, RunoffPolicy::PluralityLoser).unwrap(),
            set(&u, &["a", "b"])
        );

        let unanimous = crate::prefs::parse_profile("2: a > b > c").unwrap();
        for policy in [
            RunoffPolicy::PluralityLoser,
            RunoffPolicy::BelowAverageBorda,
        ] {
            assert_eq!(
                runoff_choice(&unanimous, full, policy).unwrap(),
                set(&u, &["a"])
            );
        }
    }

    #[test]
    fn minimax_returns_weak_condorcet_winners_when_they_exist() {
        // enumerated over all 3-alternative profiles with one or two ballots
        // (weak orders allowed)
        let u = u3();
        let mut profiles: Vec<_> = crate::enumerate::exhaustive_profiles(&u, 1, false).collect();
        profiles.extend(crate::enumerate::exhaustive_profiles(&u, 2, false));
        assert_eq!(profiles.len(), 13 + 91);
        for p in &profiles {
            for feasible in u.feasible_sets() {
                if let Some(wc) = crate::prefs::weak_condorcet_winners(p, feasible).unwrap() {
                    assert_eq!(minimax(p, feasible).unwrap(), wc);
                }
            }
        }
    }

    #[test]
    fn every_rule_is_neutral_and_anonymous() {
        use crate::axioms::{check_scf_condition, ScfCondition};
        // a linear profile whose majority relation is a strict tournament,
        // so every rule is defined
        let family = vec![fixtures::table1_profile()];
        let mut rules: Vec<Scf> = Scf::TOKENS
            .iter()
            .map(|t| Scf::from_token(t).unwrap())
            .collect();
        rules.push(Scf::MayExtension);
        for scf in rules {
            for condition in [ScfCondition::Neutrality, ScfCondition::Anonymity] {
                let verdict = check_scf_condition(&scf, condition, &family).unwrap();
                assert!(verdict.holds, "{scf} fails {}", condition.token());
            }
        }
    }

    #[test]
    fn minimax_picks_smallest_worst_margin() {
        let u = u3();
        let p2 = fixtures::table2_profile();
        assert_eq!(minimax(&p2, u.full_set()).unwrap(), set(&u, &["a"]));

        let p1 = fixtures::table1_profile();
        assert_eq!(minimax(&p1, u.full_set()).unwrap(), u.full_set());

        // on pairs minimax is majority rule
        for pair in [["a", "b"], ["a", "c"], ["b", "c"]] {
            let fs = set(&u, &pair);
            assert_eq!(
                minimax(&p1, fs).unwrap(),
                crate::prefs::may_pairwise(&p1, fs).unwrap()
            );
        }
    }

    #[test]
    fn top_cycle_and_gocha() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        assert_eq!(top_cycle(&p1, u.full_set()).unwrap(), u.full_set());
        assert_eq!(gocha(&p1, u.full_set()).unwrap(), u.full_set());

        let p2 = fixtures::table2_profile();
        // a ties b, c beats b: neither {a} nor {a,b} dominates
        assert_eq!(top_cycle(&p2, u.full_set()).unwrap(), u.full_set());
        // but a alone is undominated under strict majority
        assert_eq!(gocha(&p2, u.full_set()).unwrap(), set(&u, &["a"]));
        assert_eq!(
            gocha(&p2, set(&u, &["a", "b"])).unwrap(),
            set(&u, &["a", "b"])
        );

        let unanimous = crate::prefs::parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            top_cycle(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );
        assert_eq!(gocha(&unanimous, u.full_set()).unwrap(), set(&u, &["a"]));

        // the two coincide when no majority tie exists
        let m = margins(&p1, u.full_set()).unwrap();
        assert!(m.tournament_check().is_ok());
        assert_eq!(
            top_cycle(&p1, u.full_set()).unwrap(),
            gocha(&p1, u.full_set()).unwrap()
        );
    }

    #[test]
    fn uncovered_set_requires_tournaments() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        // no covering in a 3-cycle
        assert_eq!(uncovered_set(&p1, u.full_set()).unwrap(), u.full_set());

        let unanimous = crate::prefs::parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            uncovered_set(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );

        let p2 = fixtures::table2_profile();
        assert_eq!(
            uncovered_set(&p2, u.full_set()),
            Err(ScfError::NotATournament {
                a: "a".into(),
                b: "b".into()
            })
        );
    }

    #[test]
    fn iterated_uc_reaches_a_fixed_point() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        assert_eq!(iterated_uc(&p1, u.full_set()).unwrap(), u.full_set());

        let unanimous = crate::prefs::parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            iterated_uc(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );
    }

    #[test]
    fn uncovered_set_can_shrink_twice_on_five_alternatives() {
        // enumerating the labelled 5-tournaments turns up matrices where a
        // second application of the uncovered set strictly shrinks the first
        let u5 = Universe::of_size(5).unwrap();
        let mut found = 0usize;
        for m in all_tournaments(&u5) {
            let uc1 = uncovered_of(&m).unwrap();
            if uc1 == m.feasible() {
                continue;
            }
            let uc2 = uncovered_of(&m.restrict(uc1)).unwrap();
            if uc2 != uc1 {
                found += 1;
                let iuc = iterated_uc_of(&m).unwrap();
                assert!(iuc.is_subset_of(uc1) && iuc != uc1);
            }
        }
        assert_eq!(found, 120);
    }

    #[test]
    fn minimal_covering_basics() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        assert_eq!(minimal_covering(&p1, u.full_set()).unwrap(), u.full_set());

        let unanimous = crate::prefs::parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            minimal_covering(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );

        // containment inside the uncovered set on a few tournaments
        for m in all_tournaments(&Universe::of_size(4).unwrap()) {
            let mc = minimal_covering_of(&m).unwrap();
            let uc = uncovered_of(&m).unwrap();
            assert!(mc.is_subset_of(uc));
        }
    }

    #[test]
    fn essential_set_examples() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        assert_eq!(essential_set(&p1, u.full_set()).unwrap(), u.full_set());

        let p2 = fixtures::table2_profile();
        assert_eq!(
            essential_set(&p2, u.full_set()).unwrap(),
            set(&u, &["a", "b"])
        );

        let unanimous = crate::prefs::parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            essential_set(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );
    }

    #[test]
    fn omninomination_reads_tops() {
        let u = u3();
        let p2 = fixtures::table2_profile();
        assert_eq!(omninomination(&p2, u.full_set()).unwrap(), u.full_set());
        // restricted to {b,c} the tops are b (twice) and c (four times)
        assert_eq!(
            omninomination(&p2, set(&u, &["b", "c"])).unwrap(),
            set(&u, &["b", "c"])
        );

        let unanimous = crate::prefs::parse_profile("2: a > b > c").unwrap();
        assert_eq!(
            omninomination(&unanimous, u.full_set()).unwrap(),
            set(&u, &["a"])
        );

        let tie = crate::prefs::parse_profile("1: a ~ b > c").unwrap();
        assert_eq!(
            omninomination(&tie, u.full_set()),
            Err(ScfError::NonLinearRestriction)
        );
    }

    #[test]
    fn may_extension_defaults_to_everything() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        let induced = induce_table(&Scf::MayExtension, &p1, &u).unwrap();
        assert_eq!(induced, crate::fixtures::fig1_table());
    }

    #[test]
    fn induced_tables_match_the_bundled_ones() {
        let u = u3();
        let p1 = fixtures::table1_profile();
        let fig1 = fixtures::fig1_table();
        assert_eq!(induce_table(&Scf::Minimax, &p1, &u).unwrap(), fig1);

        let p2 = fixtures::table2_profile();
        let fig2 = fixtures::fig2_table();
        assert_eq!(induce_table(&Scf::borda(), &p2, &u).unwrap(), fig2);

        // tournament-only rules propagate their precondition
        assert_eq!(
            induce_table(&Scf::UncoveredSet, &p2, &u),
            Err(ScfError::NotATournament {
                a: "a".into(),
                b: "b".into()
            })
        );

        // inducing over a sub-universe restricts the profile first
        let sub = Universe::new(["a"]).unwrap();
        let t = induce_table(&Scf::borda(), &p2, &sub).unwrap();
        assert_eq!(t.get(sub.full_set()), sub.full_set());
    }

    #[test]
    fn scf_tokens_round_trip() {
        for token in Scf::TOKENS {
            assert_eq!(Scf::from_token(token).unwrap().token(), token);
        }
        assert_eq!(
            Scf::from_token("approval"),
            Err(ScfError::UnknownToken("approval".into()))
        );
    }

    #[test]
    fn condorcet_winners_are_chosen_alone() {
        // every Condorcet-consistent rule returns {a} when a beats everything
        let u = u3();
        let p = crate::prefs::parse_profile("3: a > b > c\n1: b > c > a").unwrap();
        let m = margins(&p, u.full_set()).unwrap();
        assert!(m.margin(0, 1) > 0 && m.margin(0, 2) > 0);
        let a = set(&u, &["a"]);
        for scf in [
            Scf::Minimax,
            Scf::TopCycle,
            Scf::Gocha,
            Scf::UncoveredSet,
            Scf::IteratedUc,
            Scf::MinimalCovering,
            Scf::EssentialSet,
            Scf::MayExtension,
        ] {
            assert_eq!(scf.choose(&p, u.full_set()).unwrap(), a, "{scf}");
        }
    }
}
