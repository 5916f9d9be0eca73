//! Choice functions as explicit tables over every nonempty subset of the
//! universe, the base and revealed preference relations they induce (on
//! alternatives and on sets), maximality queries, the `.ct` text format, and
//! DOT export.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::universe::{FeasibleSet, Universe, UniverseError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("choice for {set} is not one of its subsets")]
    ChoiceNotSubset { set: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableParseError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: duplicate entry for {set}")]
    DuplicateEntry { line: usize, set: String },
    #[error("incomplete table: missing entry for {set}")]
    Incomplete { set: String },
    #[error("line {line}: choice not a subset of the feasible set")]
    ChoiceNotSubset { line: usize },
    #[error("line {line}: chosen set may not be empty")]
    EmptyChoice { line: usize },
    #[error(transparent)]
    Universe(#[from] UniverseError),
}

/// A total choice function: every nonempty subset of the universe maps to a
/// nonempty subset of itself. Totality is what makes all the axiom checks
/// exhaustive and exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceTable {
    universe: Universe,
    choice: Vec<u32>, // indexed by mask; entry 0 unused
}

impl ChoiceTable {
    /// Builds a table by evaluating `f` on every feasible set in canonical
    /// order. Validates `f(A) ⊆ A`; nonemptiness is guaranteed by the
    /// [`FeasibleSet`] type.
    pub fn from_fn(
        universe: Universe,
        mut f: impl FnMut(FeasibleSet) -> FeasibleSet,
    ) -> Result<Self, TableError> {
        match Self::try_from_fn(universe, |set| Ok::<_, std::convert::Infallible>(f(set))) {
            Ok(result) => result,
            Err(never) => match never {},
        }
    }

    /// Like [`ChoiceTable::from_fn`] for fallible choice rules; the first
    /// error aborts construction.
    pub fn try_from_fn<E>(
        universe: Universe,
        mut f: impl FnMut(FeasibleSet) -> Result<FeasibleSet, E>,
    ) -> Result<Result<Self, TableError>, E> {
        let mut choice = vec![0u32; 1 << universe.len()];
        for set in universe.feasible_sets() {
            let chosen = f(set)?;
            if !chosen.is_subset_of(set) {
                return Ok(Err(TableError::ChoiceNotSubset {
                    set: set.format(&universe),
                }));
            }
            choice[set.mask() as usize] = chosen.mask();
        }
        Ok(Ok(ChoiceTable { universe, choice }))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// The chosen subset of `set`.
    pub fn get(&self, set: FeasibleSet) -> FeasibleSet {
        FeasibleSet::from_mask(self.choice[set.mask() as usize])
            .expect("table is total and chosen sets are nonempty")
    }

    /// (feasible set, chosen set) pairs in canonical order.
    pub fn entries(&self) -> impl Iterator<Item = (FeasibleSet, FeasibleSet)> + '_ {
        self.universe
            .feasible_sets()
            .into_iter()
            .map(move |set| (set, self.get(set)))
    }

    /// Parses the `.ct` format. The universe is the union of all left-hand
    /// sets; every nonempty subset of it must appear exactly once.
    pub fn parse(text: &str) -> Result<Self, TableParseError> {
        let mut names: Vec<&str> = Vec::new();
        for (line_no, line) in logical_lines(text) {
            let (lhs, _) = split_arrow(line_no, line)?;
            names.extend(set_literal_names(line_no, lhs)?);
        }
        names.sort_unstable();
        names.dedup();
        if names.is_empty() {
            return Err(TableParseError::Syntax {
                line: 1,
                col: 1,
                msg: "table is empty".into(),
            });
        }
        let universe = Universe::new(names)?;

        let mut choice = vec![0u32; 1 << universe.len()];
        let mut seen = vec![false; 1 << universe.len()];
        for (line_no, line) in logical_lines(text) {
            let (lhs, rhs) = split_arrow(line_no, line)?;
            let set = parse_set(line_no, lhs, &universe)?
                .ok_or(TableParseError::EmptyChoice { line: line_no })?;
            let chosen = match parse_set(line_no, rhs, &universe)? {
                Some(chosen) => chosen,
                None => return Err(TableParseError::EmptyChoice { line: line_no }),
            };
            if seen[set.mask() as usize] {
                return Err(TableParseError::DuplicateEntry {
                    line: line_no,
                    set: set.format(&universe),
                });
            }
            if !chosen.is_subset_of(set) {
                return Err(TableParseError::ChoiceNotSubset { line: line_no });
            }
            seen[set.mask() as usize] = true;
            choice[set.mask() as usize] = chosen.mask();
        }
        for set in universe.feasible_sets() {
            if !seen[set.mask() as usize] {
                return Err(TableParseError::Incomplete {
                    set: set.format(&universe),
                });
            }
        }
        Ok(ChoiceTable { universe, choice })
    }

    /// Serializes to the `.ct` format, subsets in canonical order.
    /// `parse(serialize(t)) == t`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (set, chosen) in self.entries() {
            let _ = writeln!(
                out,
                "{} -> {}",
                set.format(&self.universe),
                chosen.format(&self.universe)
            );
        }
        out
    }
}

fn logical_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        (!trimmed.is_empty()).then_some((i + 1, trimmed))
    })
}

fn split_arrow(line_no: usize, line: &str) -> Result<(&str, &str), TableParseError> {
    line.split_once("->")
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| TableParseError::Syntax {
            line: line_no,
            col: line.len() + 1,
            msg: "expected '->' between the feasible and chosen sets".into(),
        })
}

fn set_literal_names(line_no: usize, text: &str) -> Result<Vec<&str>, TableParseError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| TableParseError::Syntax {
            line: line_no,
            col: 1,
            msg: format!("expected a set literal like {{a,b}}, got {text:?}"),
        })?;
    Ok(inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect())
}

fn parse_set(
    line_no: usize,
    text: &str,
    universe: &Universe,
) -> Result<Option<FeasibleSet>, TableParseError> {
    let mut mask = 0u32;
    for name in set_literal_names(line_no, text)? {
        let alt = universe
            .index_of(name)
            .ok_or_else(|| TableParseError::Syntax {
                line: line_no,
                col: 1,
                msg: format!("unknown alternative {name:?}"),
            })?;
        mask |= 1 << alt;
    }
    Ok(FeasibleSet::from_mask(mask))
}

/// A binary relation over alternatives, as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltRelation {
    rows: Vec<u32>, // rows[a] = mask of b with a R b
}

impl AltRelation {
    pub fn empty(n: usize) -> Self {
        AltRelation { rows: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.rows[a] |= 1 << b;
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a] & (1 << b) != 0
    }

    /// `a P b`: related one way but not the other.
    pub fn strict(&self, a: usize, b: usize) -> bool {
        self.contains(a, b) && !self.contains(b, a)
    }

    /// Ordered pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |a| {
            (0..n)
                .filter(move |&b| self.contains(a, b))
                .map(move |b| (a, b))
        })
    }

    pub fn is_complete(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| self.contains(a, b) || self.contains(b, a)))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                !self.contains(a, b) || (0..n).all(|c| !self.contains(b, c) || self.contains(a, c))
            })
        })
    }

    /// Transitivity of the strict part (quasi-transitivity of the relation).
    pub fn strict_part_transitive(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| {
            (0..n).all(|b| {
                !self.strict(a, b) || (0..n).all(|c| !self.strict(b, c) || self.strict(a, c))
            })
        })
    }

    /// No cycle in the strict part.
    pub fn strict_part_acyclic(&self) -> bool {
        // reachability closure over strict edges; a cycle puts some vertex in
        // its own reachable set
        let n = self.len();
        let mut reach: Vec<u32> = (0..n)
            .map(|a| {
                (0..n)
                    .filter(|&b| self.strict(a, b))
                    .fold(0u32, |m, b| m | (1 << b))
            })
            .collect();
        for _ in 0..n {
            for a in 0..n {
                let mut grown = reach[a];
                let mut rest = reach[a];
                while rest != 0 {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    grown |= reach[b];
                }
                reach[a] = grown;
            }
        }
        (0..n).all(|a| reach[a] & (1 << a) == 0)
    }

    /// Members of `feasible` not strictly dominated within it; `None` when
    /// every member is dominated (possible for cyclic strict parts).
    pub fn maximal_in(&self, feasible: FeasibleSet) -> Option<FeasibleSet> {
        let mask = feasible
            .members()
            .filter(|&a| feasible.members().all(|b| !self.strict(b, a)))
            .fold(0u32, |m, a| m | (1 << a));
        FeasibleSet::from_mask(mask)
    }

    /// DOT digraph with one node per alternative; byte-stable.
    pub fn to_dot(&self, universe: &Universe) -> String {
        let mut out = String::from("digraph relation {\n");
        for alt in 0..self.len() {
            let _ = writeln!(out, "  \"{}\";", universe.name(alt));
        }
        for (a, b) in self.pairs() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                universe.name(a),
                universe.name(b)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// A binary relation over feasible sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRelation {
    universe_size: usize,
    pairs: BTreeSet<(u32, u32)>,
}

impl SetRelation {
    pub fn empty(universe_size: usize) -> Self {
        SetRelation {
            universe_size,
            pairs: BTreeSet::new(),
        }
    }

    pub fn insert(&mut self, a: FeasibleSet, b: FeasibleSet) {
        self.pairs.insert((a.mask(), b.mask()));
    }

    pub fn contains(&self, a: FeasibleSet, b: FeasibleSet) -> bool {
        self.pairs.contains(&(a.mask(), b.mask()))
    }

    pub fn strict(&self, a: FeasibleSet, b: FeasibleSet) -> bool {
        self.contains(a, b) && !self.contains(b, a)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in canonical order.
    pub fn pairs(&self) -> Vec<(FeasibleSet, FeasibleSet)> {
        let mut out: Vec<(FeasibleSet, FeasibleSet)> = self
            .pairs
            .iter()
            .map(|&(a, b)| {
                (
                    FeasibleSet::from_mask(a).expect("stored sets are nonempty"),
                    FeasibleSet::from_mask(b).expect("stored sets are nonempty"),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// `X R̄ Y` and `Y R̄ X` only when `X = Y`.
    pub fn is_antisymmetric(&self) -> bool {
        self.pairs
            .iter()
            .all(|&(a, b)| a == b || !self.pairs.contains(&(b, a)))
    }

    /// Some pair of distinct feasible sets is unrelated both ways.
    pub fn is_incomplete_on(&self, universe: &Universe) -> bool {
        let sets = universe.feasible_sets();
        sets.iter().any(|&x| {
            sets.iter()
                .any(|&y| x != y && !self.contains(x, y) && !self.contains(y, x))
        })
    }

    /// Closure under intersection of overlapping related sets:
    /// `X R Y` and `X R Z` with `Y ∩ Z ≠ ∅` imply `X R (Y ∩ Z)`.
    pub fn closed_under_intersection(&self) -> bool {
        self.pairs().iter().all(|&(x, y)| {
            self.pairs()
                .iter()
                .filter(|&&(x2, _)| x2 == x)
                .all(|&(_, z)| match y.intersection(z) {
                    Some(meet) => self.contains(x, meet),
                    None => true,
                })
        })
    }

    /// Closure under union: `X R Y` and `X R Z` imply `X R (Y ∪ Z)`.
    pub fn closed_under_union(&self) -> bool {
        self.pairs().iter().all(|&(x, y)| {
            self.pairs()
                .iter()
                .filter(|&&(x2, _)| x2 == x)
                .all(|&(_, z)| self.contains(x, y.union(z)))
        })
    }

    /// DOT digraph with one node per feasible set of the universe, labelled
    /// `{a,b}`; nodes and edges in canonical order, byte-stable.
    pub fn to_dot(&self, universe: &Universe) -> String {
        let mut out = String::from("digraph relation {\n");
        for set in universe.feasible_sets() {
            let _ = writeln!(out, "  \"{}\";", set.format(universe));
        }
        for (a, b) in self.pairs() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\";",
                a.format(universe),
                b.format(universe)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Base relation on alternatives: `a R̄ b` iff `a ∈ S({a,b})`. Reflexive
/// pairs are included.
pub fn base_relation_alts(table: &ChoiceTable) -> AltRelation {
    let n = table.universe().len();
    let mut rel = AltRelation::empty(n);
    for a in 0..n {
        rel.insert(a, a);
        for b in (a + 1)..n {
            let pair = table.universe().singleton(a).with(b);
            let chosen = table.get(pair);
            if chosen.contains(a) {
                rel.insert(a, b);
            }
            if chosen.contains(b) {
                rel.insert(b, a);
            }
        }
    }
    rel
}

/// Revealed preference on alternatives: `a R b` iff `a ∈ S(X)` for some `X`
/// containing `b`.
pub fn revealed_relation_alts(table: &ChoiceTable) -> AltRelation {
    let n = table.universe().len();
    let mut rel = AltRelation::empty(n);
    for set in table.universe().feasible_sets() {
        let chosen = table.get(set);
        for a in chosen.members() {
            for b in set.members() {
                rel.insert(a, b);
            }
        }
    }
    rel
}

/// Base relation on sets: `A R̄ B` iff `A = S(A ∪ B)`.
pub fn base_relation_sets(table: &ChoiceTable) -> SetRelation {
    let sets = table.universe().feasible_sets();
    let mut rel = SetRelation::empty(table.universe().len());
    for &a in &sets {
        for &b in &sets {
            if table.get(a.union(b)) == a {
                rel.insert(a, b);
            }
        }
    }
    rel
}

/// Revealed preference on sets: `A R̂ B` iff `A = S(X)` for some `X ⊇ B`.
pub fn revealed_relation_sets(table: &ChoiceTable) -> SetRelation {
    let mut rel = SetRelation::empty(table.universe().len());
    for set in table.universe().feasible_sets() {
        let chosen = table.get(set);
        for sub in set.subsets() {
            rel.insert(chosen, sub);
        }
    }
    rel
}

/// All nonempty `Y ⊆ feasible` with no nonempty `Z ⊆ feasible` strictly
/// above them in `rel`; canonical order.
pub fn maximal_sets(rel: &SetRelation, feasible: FeasibleSet) -> Vec<FeasibleSet> {
    let subs = feasible.subsets();
    subs.iter()
        .copied()
        .filter(|&y| subs.iter().all(|&z| !rel.strict(z, y)))
        .collect()
}
