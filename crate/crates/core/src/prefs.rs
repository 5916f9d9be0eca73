//! Preference profiles: weak orders as ordered partitions, the `.prof` text
//! format, restriction, and pairwise majority margins.
//!
//! A weak order is stored as its list of indifference classes from best to
//! worst, so completeness and transitivity hold by construction. Profiles keep
//! one entry per distinct ballot with a multiplicity; nothing ever expands to
//! individual voters.

use std::fmt;

use thiserror::Error;

use crate::universe::{FeasibleSet, Universe, UniverseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefsError {
    #[error("classes must partition the universe exactly")]
    NotAPartition,
    #[error("pairwise choice needs a two-element set, got {0} members")]
    PairSizeNot2(usize),
    #[error("feasible set is not within the profile's universe")]
    NotInUniverse,
    #[error("profile must contain at least one voter")]
    EmptyProfile,
}

/// Syntax and semantic errors raised while reading the `.prof` format.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProfileParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: multiplicity must be positive")]
    NonPositiveMultiplicity { line: usize },
    #[error("line {line}: unknown alternative {name:?}")]
    UnknownAlternative { line: usize, name: String },
    #[error("line {line}: alternative {name:?} repeated within one order")]
    RepeatedAlternative { line: usize, name: String },
    #[error("line {line}: order is missing alternative {name:?} of the universe")]
    MissingAlternative { line: usize, name: String },
    #[error("profile contains no ballots")]
    Empty,
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

/// A complete transitive preference relation, stored as indifference classes
/// from most to least preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakOrder {
    classes: Vec<FeasibleSet>,
    rank: Vec<u8>, // rank[alt] = index of the class containing alt
}

impl WeakOrder {
    /// Builds an order over a universe of `size` alternatives. The classes
    /// must be disjoint, nonempty, and cover all indices `0..size`.
    pub fn new(classes: Vec<FeasibleSet>, size: usize) -> Result<Self, PrefsError> {
        let full = (1u32 << size) - 1;
        let mut seen = 0u32;
        for class in &classes {
            if class.mask() & !full != 0 || class.mask() & seen != 0 {
                return Err(PrefsError::NotAPartition);
            }
            seen |= class.mask();
        }
        if seen != full {
            return Err(PrefsError::NotAPartition);
        }
        let mut rank = vec![0u8; size];
        for (i, class) in classes.iter().enumerate() {
            for alt in class.members() {
                rank[alt] = i as u8;
            }
        }
        Ok(WeakOrder { classes, rank })
    }

    /// Linear order from a permutation of `0..len` (best first).
    pub fn linear(perm: &[usize]) -> Self {
        let classes = perm
            .iter()
            .map(|&alt| FeasibleSet::from_mask(1 << alt).unwrap())
            .collect();
        WeakOrder::new(classes, perm.len()).expect("permutation partitions the universe")
    }

    pub fn classes(&self) -> &[FeasibleSet] {
        &self.classes
    }

    pub fn universe_size(&self) -> usize {
        self.rank.len()
    }

    /// True iff every indifference class is a singleton.
    pub fn is_linear(&self) -> bool {
        self.classes.len() == self.rank.len()
    }

    /// True iff no two members of `feasible` share a class.
    pub fn is_linear_on(&self, feasible: FeasibleSet) -> bool {
        self.classes
            .iter()
            .all(|c| (c.mask() & feasible.mask()).count_ones() <= 1)
    }

    /// Strict preference: `a` in a strictly better class than `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn weakly_prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] <= self.rank[b]
    }

    pub fn indifferent(&self, a: usize, b: usize) -> bool {
        self.rank[a] == self.rank[b]
    }

    /// Most preferred members of `feasible` (the whole best class hit).
    pub fn top_within(&self, feasible: FeasibleSet) -> FeasibleSet {
        for class in &self.classes {
            if let Some(hit) = class.intersection(feasible) {
                return hit;
            }
        }
        unreachable!("feasible is nonempty and classes cover the universe")
    }

    /// Number of members of `feasible` strictly preferred to `alt`.
    pub fn rank_within(&self, alt: usize, feasible: FeasibleSet) -> usize {
        feasible.members().filter(|&b| self.prefers(b, alt)).count()
    }

    /// Drops all alternatives outside `feasible` and reindexes the survivors
    /// by their position within it. Relative ranking is unchanged; restricting
    /// twice equals restricting once.
    pub fn restrict(&self, feasible: FeasibleSet) -> WeakOrder {
        let members: Vec<usize> = feasible.members().collect();
        let classes: Vec<FeasibleSet> = self
            .classes
            .iter()
            .filter_map(|class| {
                let mut mask = 0u32;
                for (new, &old) in members.iter().enumerate() {
                    if class.contains(old) {
                        mask |= 1 << new;
                    }
                }
                FeasibleSet::from_mask(mask)
            })
            .collect();
        WeakOrder::new(classes, members.len()).expect("restriction keeps a partition")
    }

    /// Renders like `a ~ b > c` using the universe's names.
    pub fn format(&self, universe: &Universe) -> String {
        let mut out = String::new();
        for (i, class) in self.classes.iter().enumerate() {
            if i > 0 {
                out.push_str(" > ");
            }
            for (j, alt) in class.members().enumerate() {
                if j > 0 {
                    out.push_str(" ~ ");
                }
                out.push_str(universe.name(alt));
            }
        }
        out
    }
}

/// A multiset of weak orders over one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    universe: Universe,
    entries: Vec<(u32, WeakOrder)>,
}

impl Profile {
    pub fn new(universe: Universe, entries: Vec<(u32, WeakOrder)>) -> Result<Self, PrefsError> {
        if entries.is_empty() || entries.iter().all(|(m, _)| *m == 0) {
            return Err(PrefsError::EmptyProfile);
        }
        for (mult, order) in &entries {
            if *mult == 0 {
                return Err(PrefsError::EmptyProfile);
            }
            if order.universe_size() != universe.len() {
                return Err(PrefsError::NotAPartition);
            }
        }
        Ok(Profile { universe, entries })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Ballot entries in file order: (multiplicity, order).
    pub fn entries(&self) -> &[(u32, WeakOrder)] {
        &self.entries
    }

    /// Total number of voters.
    pub fn voters(&self) -> u64 {
        self.entries.iter().map(|(m, _)| *m as u64).sum()
    }

    pub fn is_linear(&self) -> bool {
        self.entries.iter().all(|(_, o)| o.is_linear())
    }

    /// Profile over the sub-universe given by `feasible`, with every ballot
    /// restricted.
    pub fn restrict(&self, feasible: FeasibleSet) -> Result<Profile, PrefsError> {
        if !feasible.is_subset_of(self.universe.full_set()) {
            return Err(PrefsError::NotInUniverse);
        }
        let names = feasible.members().map(|alt| self.universe.name(alt));
        let universe = Universe::new(names).expect("nonempty subset of a valid universe");
        let entries = self
            .entries
            .iter()
            .map(|(m, o)| (*m, o.restrict(feasible)))
            .collect();
        Profile::new(universe, entries)
    }

    /// Renders in the `.prof` format, one line per entry in stored order.
    pub fn format(&self) -> String {
        let mut out = String::new();
        for (mult, order) in &self.entries {
            out.push_str(&format!("{}: {}\n", mult, order.format(&self.universe)));
        }
        out
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

/// Parses the `.prof` format, inferring the universe from the alternatives
/// that occur in the text.
pub fn parse_profile(text: &str) -> Result<Profile, ProfileParseError> {
    let mut names: Vec<&str> = Vec::new();
    for (line_no, line) in logical_lines(text) {
        let (_, rest) = split_multiplicity(line_no, line)?;
        for token in rest.split(['>', '~']) {
            let token = token.trim();
            if !token.is_empty() {
                names.push(token);
            }
        }
    }
    names.sort_unstable();
    names.dedup();
    if names.is_empty() {
        return Err(ProfileParseError::Empty);
    }
    let universe = Universe::new(names)?;
    parse_profile_with(text, &universe)
}

/// Parses the `.prof` format against an explicitly supplied universe. Every
/// ballot must rank exactly the universe's alternatives.
pub fn parse_profile_with(text: &str, universe: &Universe) -> Result<Profile, ProfileParseError> {
    let mut entries: Vec<(u32, WeakOrder)> = Vec::new();
    for (line_no, line) in logical_lines(text) {
        let (mult, rest) = split_multiplicity(line_no, line)?;
        let mut seen = 0u32;
        let mut classes: Vec<FeasibleSet> = Vec::new();
        for class_text in rest.split('>') {
            let mut mask = 0u32;
            for token in class_text.split('~') {
                let name = token.trim();
                if name.is_empty() {
                    let col = offset_of(line, token) + 1;
                    return Err(ProfileParseError::Syntax {
                        line: line_no,
                        col,
                        msg: "expected an alternative id".into(),
                    });
                }
                let alt = universe.index_of(name).ok_or_else(|| {
                    ProfileParseError::UnknownAlternative {
                        line: line_no,
                        name: name.to_string(),
                    }
                })?;
                if seen & (1 << alt) != 0 {
                    return Err(ProfileParseError::RepeatedAlternative {
                        line: line_no,
                        name: name.to_string(),
                    });
                }
                seen |= 1 << alt;
                mask |= 1 << alt;
            }
            classes.push(FeasibleSet::from_mask(mask).expect("class has a member"));
        }
        if seen != universe.full_set().mask() {
            let missing = universe
                .full_set()
                .members()
                .find(|alt| seen & (1 << alt) == 0)
                .expect("some alternative is missing");
            return Err(ProfileParseError::MissingAlternative {
                line: line_no,
                name: universe.name(missing).to_string(),
            });
        }
        let order = WeakOrder::new(classes, universe.len()).expect("validated partition");
        entries.push((mult, order));
    }
    if entries.is_empty() {
        return Err(ProfileParseError::Empty);
    }
    Ok(Profile::new(universe.clone(), entries).expect("entries validated"))
}

/// Strips comments and blanks; yields (1-based line number, content).
fn logical_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        (!trimmed.is_empty()).then_some((i + 1, content))
    })
}

fn offset_of(line: &str, token: &str) -> usize {
    let line_ptr = line.as_ptr() as usize;
    let tok_ptr = token.as_ptr() as usize;
    tok_ptr.saturating_sub(line_ptr)
}

fn split_multiplicity(line_no: usize, line: &str) -> Result<(u32, &str), ProfileParseError> {
    let colon = line.find(':').ok_or(ProfileParseError::Syntax {
        line: line_no,
        col: line.len() + 1,
        msg: "expected ':' after the multiplicity".into(),
    })?;
    let head = line[..colon].trim();
    let mult: i64 = head.parse().map_err(|_| ProfileParseError::Syntax {
        line: line_no,
        col: 1,
        msg: format!("invalid multiplicity {head:?}"),
    })?;
    if mult <= 0 {
        return Err(ProfileParseError::NonPositiveMultiplicity { line: line_no });
    }
    Ok((mult as u32, &line[colon + 1..]))
}

/// Skew-symmetric matrix of net pairwise majority margins over a feasible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginMatrix {
    members: Vec<usize>, // universe indices, ascending
    m: Vec<i64>,         // row-major k x k
}

impl MarginMatrix {
    /// Builds a matrix from explicit entries; panics unless they are
    /// skew-symmetric with a zero diagonal.
    pub fn from_raw(members: Vec<usize>, m: Vec<i64>) -> MarginMatrix {
        let k = members.len();
        assert_eq!(m.len(), k * k, "margin matrix must be square");
        for i in 0..k {
            for j in 0..k {
                assert_eq!(
                    m[i * k + j],
                    -m[j * k + i],
                    "margins must be skew-symmetric"
                );
            }
        }
        MarginMatrix { members, m }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn feasible(&self) -> FeasibleSet {
        let mask = self.members.iter().fold(0u32, |m, &alt| m | (1 << alt));
        FeasibleSet::from_mask(mask).expect("margin matrix covers a nonempty set")
    }

    fn pos(&self, alt: usize) -> usize {
        self.members
            .iter()
            .position(|&a| a == alt)
            .expect("alternative not in this margin matrix")
    }

    /// Net voters preferring `a` to `b`, by universe indices.
    pub fn margin(&self, a: usize, b: usize) -> i64 {
        self.m[self.pos(a) * self.len() + self.pos(b)]
    }

    /// Margin by positions within `members()`.
    pub fn margin_at(&self, i: usize, j: usize) -> i64 {
        self.m[i * self.len() + j]
    }

    /// Submatrix over a subset of this matrix's feasible set.
    pub fn restrict(&self, feasible: FeasibleSet) -> MarginMatrix {
        debug_assert!(feasible.is_subset_of(self.feasible()));
        let members: Vec<usize> = feasible.members().collect();
        let k = members.len();
        let mut m = vec![0i64; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                m[i * k + j] = self.margin(a, b);
            }
        }
        MarginMatrix { members, m }
    }

    /// The underlying tournament structure: every margin collapsed to its
    /// sign.
    pub fn signs(&self) -> MarginMatrix {
        MarginMatrix {
            members: self.members.clone(),
            m: self.m.iter().map(|&x| x.signum()).collect(),
        }
    }

    /// `Ok(())` when no distinct pair ties; otherwise the first tied pair in
    /// member order.
    pub fn tournament_check(&self) -> Result<(), (usize, usize)> {
        let k = self.len();
        for i in 0..k {
            for j in (i + 1)..k {
                if self.m[i * k + j] == 0 {
                    return Err((self.members[i], self.members[j]));
                }
            }
        }
        Ok(())
    }
}

/// Net pairwise margins of `profile` over `feasible`:
/// `m[a][b] = #{i : a P_i b} - #{i : b P_i a}`, weighted by multiplicities.
pub fn margins(profile: &Profile, feasible: FeasibleSet) -> Result<MarginMatrix, PrefsError> {
    if !feasible.is_subset_of(profile.universe().full_set()) {
        return Err(PrefsError::NotInUniverse);
    }
    let members: Vec<usize> = feasible.members().collect();
    let k = members.len();
    let mut m = vec![0i64; k * k];
    for (mult, order) in profile.entries() {
        let w = *mult as i64;
        for i in 0..k {
            for j in (i + 1)..k {
                let (a, b) = (members[i], members[j]);
                if order.prefers(a, b) {
                    m[i * k + j] += w;
                    m[j * k + i] -= w;
                } else if order.prefers(b, a) {
                    m[i * k + j] -= w;
                    m[j * k + i] += w;
                }
            }
        }
    }
    Ok(MarginMatrix { members, m })
}

/// Majority choice between the two members of `pair`: the strict winner, or
/// both on a tie.
pub fn may_pairwise(profile: &Profile, pair: FeasibleSet) -> Result<FeasibleSet, PrefsError> {
    if pair.len() != 2 {
        return Err(PrefsError::PairSizeNot2(pair.len()));
    }
    let m = margins(profile, pair)?;
    let (a, b) = (m.members()[0], m.members()[1]);
    let result = match m.margin(a, b) {
        d if d > 0 => profile.universe().singleton(a),
        d if d < 0 => profile.universe().singleton(b),
        _ => pair,
    };
    Ok(result)
}

/// All members of `feasible` that beat or tie every other member; may be
/// empty (the Condorcet paradox).
pub fn weak_condorcet_winners(
    profile: &Profile,
    feasible: FeasibleSet,
) -> Result<Option<FeasibleSet>, PrefsError> {
    let m = margins(profile, feasible)?;
    let k = m.len();
    let mut mask = 0u32;
    for i in 0..k {
        if (0..k).all(|j| m.margin_at(j, i) <= 0) {
            mask |= 1 << m.members()[i];
        }
    }
    Ok(FeasibleSet::from_mask(mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> Profile {
        parse_profile("1: a > b > c\n1: c > a > b\n1: b > c > a").unwrap()
    }

    fn table2() -> Profile {
        parse_profile("3: a > c > b\n2: b > a > c\n1: c > b > a").unwrap()
    }

    #[test]
    fn parses_multiplicities_and_ties() {
        let p = table2();
        assert_eq!(p.entries().len(), 3);
        assert_eq!(p.voters(), 6);
        assert!(p.is_linear());

        let tie = parse_profile("1: a ~ b").unwrap();
        assert_eq!(tie.entries().len(), 1);
        assert_eq!(tie.entries()[0].1.classes().len(), 1);
        assert_eq!(tie.entries()[0].1.classes()[0].len(), 2);

        assert_eq!(
            parse_profile("2: a > b\n0: b > a"),
            Err(ProfileParseError::NonPositiveMultiplicity { line: 2 })
        );
    }

    #[test]
    fn parse_reports_positions_and_bad_names() {
        let err = parse_profile("1: a >\n").unwrap_err();
        assert!(matches!(err, ProfileParseError::Syntax { line: 1, .. }));

        let u = Universe::new(["a", "b"]).unwrap();
        assert_eq!(
            parse_profile_with("1: a > z", &u),
            Err(ProfileParseError::UnknownAlternative {
                line: 1,
                name: "z".into()
            })
        );
        assert_eq!(
            parse_profile_with("1: a > a > b", &u),
            Err(ProfileParseError::RepeatedAlternative {
                line: 1,
                name: "a".into()
            })
        );
        assert_eq!(
            parse_profile_with("1: a", &u),
            Err(ProfileParseError::MissingAlternative {
                line: 1,
                name: "b".into()
            })
        );
        assert_eq!(
            parse_profile("# only a comment\n"),
            Err(ProfileParseError::Empty)
        );
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let p = parse_profile("# header\n\n2: a > b # trailing\n1: b > a\n").unwrap();
        assert_eq!(p.voters(), 3);
    }

    #[test]
    fn format_round_trips() {
        let p = parse_profile("3: a > c > b\n2: b ~ a > c\n1: c > b > a").unwrap();
        let text = p.format();
        let q = parse_profile(&text).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn restriction_keeps_relative_order() {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let p = parse_profile_with("1: a > c > b", &u).unwrap();
        let ab = u.set_of(["a", "b"]).unwrap();
        let r = p.restrict(ab).unwrap();
        assert_eq!(r.entries()[0].1.format(r.universe()), "a > b");

        let tie = parse_profile_with("1: a ~ b > c", &u).unwrap();
        let r = tie.restrict(ab).unwrap();
        assert_eq!(r.entries()[0].1.format(r.universe()), "a ~ b");

        // identity restriction
        let r = p.restrict(u.full_set()).unwrap();
        assert_eq!(r.entries()[0].1.format(r.universe()), "a > c > b");
    }

    #[test]
    fn margins_match_hand_counts() {
        let p = table2();
        let u = p.universe().clone();
        let m = margins(&p, u.full_set()).unwrap();
        let (a, b, c) = (0, 1, 2);
        assert_eq!(m.margin(a, b), 0);
        assert_eq!(m.margin(a, c), 4);
        assert_eq!(m.margin(b, c), -2);

        let cycle = margins(&table1(), table1().universe().full_set()).unwrap();
        assert_eq!(cycle.margin(0, 1), 1);
        assert_eq!(cycle.margin(1, 2), 1);
        assert_eq!(cycle.margin(2, 0), 1);
    }

    #[test]
    fn margins_skew_symmetric_and_additive() {
        let p = table2();
        let u = p.universe().clone();
        let m = margins(&p, u.full_set()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.margin_at(i, j) + m.margin_at(j, i), 0);
            }
        }

        // additivity over disjoint unions of entries
        let p1 = parse_profile_with("3: a > c > b", &u).unwrap();
        let p2 = parse_profile_with("2: b > a > c\n1: c > b > a", &u).unwrap();
        let m1 = margins(&p1, u.full_set()).unwrap();
        let m2 = margins(&p2, u.full_set()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.margin_at(i, j), m1.margin_at(i, j) + m2.margin_at(i, j));
            }
        }
    }

    #[test]
    fn pairwise_majority() {
        let p = table1();
        let u = p.universe().clone();
        let ab = u.set_of(["a", "b"]).unwrap();
        assert_eq!(may_pairwise(&p, ab).unwrap(), u.set_of(["a"]).unwrap());

        let p2 = table2();
        assert_eq!(may_pairwise(&p2, ab).unwrap(), ab); // 3-3 tie

        let single = parse_profile("1: a > b").unwrap();
        let su = single.universe().clone();
        assert_eq!(
            may_pairwise(&single, su.full_set()).unwrap(),
            su.set_of(["a"]).unwrap()
        );

        assert_eq!(
            may_pairwise(&p, u.full_set()),
            Err(PrefsError::PairSizeNot2(3))
        );
    }

    #[test]
    fn weak_condorcet_winner_sets() {
        let p2 = table2();
        let u = p2.universe().clone();
        assert_eq!(
            weak_condorcet_winners(&p2, u.full_set()).unwrap(),
            Some(u.set_of(["a"]).unwrap())
        );

        let p1 = table1();
        assert_eq!(weak_condorcet_winners(&p1, u.full_set()).unwrap(), None);

        let single = parse_profile("1: a > b > c").unwrap();
        assert_eq!(
            weak_condorcet_winners(&single, u.full_set()).unwrap(),
            Some(u.set_of(["a"]).unwrap())
        );
    }

    #[test]
    fn tournament_check_finds_first_tie() {
        let p = table2();
        let u = p.universe().clone();
        let m = margins(&p, u.full_set()).unwrap();
        assert_eq!(m.tournament_check(), Err((0, 1)));
        assert_eq!(
            margins(&table1(), u.full_set()).unwrap().tournament_check(),
            Ok(())
        );
    }
}
