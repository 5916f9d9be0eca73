//! The ground set of alternatives and bitset-backed feasible sets.
//!
//! A [`Universe`] holds the alternatives in lexicographic order, which fixes a
//! canonical enumeration for everything downstream: feasible sets compare by
//! (size, member sequence), so witnesses, serialized tables, and DOT output are
//! byte-stable across runs.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Largest universe the library materializes tables and relations for.
///
/// Every axiom check quantifies over all nonempty subsets, so anything past
/// this is unusable at desk scale anyway.
pub const MAX_UNIVERSE: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UniverseError {
    #[error("universe must contain at least one alternative")]
    Empty,
    #[error("universe has {0} alternatives, limit is {MAX_UNIVERSE}")]
    TooLarge(usize),
    #[error("invalid alternative id {0:?}: must match [a-z0-9_]+")]
    InvalidName(String),
    #[error("duplicate alternative {0:?}")]
    DuplicateName(String),
    #[error("unknown alternative {0:?}")]
    UnknownName(String),
    #[error("feasible set may not be empty")]
    EmptySet,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

/// An ordered set of alternative ids. Alternatives are referred to by their
/// index into this ordering everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    names: Vec<String>,
}

impl Universe {
    /// Builds a universe from ids, sorting them lexicographically and
    /// rejecting duplicates, invalid ids, and sizes outside 1..=16.
    pub fn new<I, S>(names: I) -> Result<Self, UniverseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names: Vec<String> = names.into_iter().map(Into::into).collect();
        names.sort();
        if names.is_empty() {
            return Err(UniverseError::Empty);
        }
        if names.len() > MAX_UNIVERSE {
            return Err(UniverseError::TooLarge(names.len()));
        }
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                return Err(UniverseError::DuplicateName(pair[0].clone()));
            }
        }
        for name in &names {
            if !valid_name(name) {
                return Err(UniverseError::InvalidName(name.clone()));
            }
        }
        Ok(Universe { names })
    }

    /// Universe `a, b, c, ...` of the given size; handy for generated inputs.
    pub fn of_size(k: usize) -> Result<Self, UniverseError> {
        if k > MAX_UNIVERSE {
            return Err(UniverseError::TooLarge(k));
        }
        Universe::new((0..k).map(|i| {
            char::from_u32('a' as u32 + i as u32)
                .expect("k <= 16")
                .to_string()
        }))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false // size >= 1 by construction
    }

    pub fn name(&self, alt: usize) -> &str {
        &self.names[alt]
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    /// The feasible set containing every alternative.
    pub fn full_set(&self) -> FeasibleSet {
        FeasibleSet {
            mask: (1u32 << self.len()) - 1,
        }
    }

    pub fn singleton(&self, alt: usize) -> FeasibleSet {
        debug_assert!(alt < self.len());
        FeasibleSet { mask: 1 << alt }
    }

    /// Builds a feasible set from alternative ids.
    pub fn set_of<'a, I>(&self, names: I) -> Result<FeasibleSet, UniverseError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut mask = 0u32;
        for name in names {
            let alt = self
                .index_of(name)
                .ok_or_else(|| UniverseError::UnknownName(name.to_string()))?;
            mask |= 1 << alt;
        }
        FeasibleSet::from_mask(mask).ok_or(UniverseError::EmptySet)
    }

    /// Parses a set literal such as `{a,b}` or a bare list `a,b`.
    pub fn parse_set(&self, text: &str) -> Result<FeasibleSet, UniverseError> {
        let inner = text
            .trim()
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .unwrap_or(text.trim());
        self.set_of(inner.split(',').map(str::trim).filter(|s| !s.is_empty()))
    }

    /// All nonempty subsets in canonical (size, member-sequence) order.
    pub fn feasible_sets(&self) -> Vec<FeasibleSet> {
        let mut sets: Vec<FeasibleSet> = (1..(1u32 << self.len()))
            .map(|mask| FeasibleSet { mask })
            .collect();
        sets.sort();
        sets
    }
}

/// A nonempty subset of a universe, stored as a bitmask over alternative
/// indices. Ordering is canonical: smaller sets first, equal sizes by the
/// lexicographic order of their member sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FeasibleSet {
    mask: u32,
}

impl FeasibleSet {
    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0).then_some(FeasibleSet { mask })
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        false // nonempty by construction
    }

    pub fn contains(self, alt: usize) -> bool {
        self.mask & (1 << alt) != 0
    }

    /// Member indices in ascending order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut mask = self.mask;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let alt = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(alt)
            }
        })
    }

    pub fn min_member(self) -> usize {
        self.mask.trailing_zeros() as usize
    }

    pub fn is_subset_of(self, other: FeasibleSet) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn union(self, other: FeasibleSet) -> FeasibleSet {
        FeasibleSet {
            mask: self.mask | other.mask,
        }
    }

    /// Intersection, `None` when disjoint.
    pub fn intersection(self, other: FeasibleSet) -> Option<FeasibleSet> {
        FeasibleSet::from_mask(self.mask & other.mask)
    }

    pub fn with(self, alt: usize) -> FeasibleSet {
        FeasibleSet {
            mask: self.mask | (1 << alt),
        }
    }

    /// Set difference, `None` when everything is removed.
    pub fn without(self, other: FeasibleSet) -> Option<FeasibleSet> {
        FeasibleSet::from_mask(self.mask & !other.mask)
    }

    /// All nonempty subsets of `self`, canonical order.
    pub fn subsets(self) -> Vec<FeasibleSet> {
        let mut out = Vec::with_capacity((1usize << self.len()) - 1);
        // standard submask walk, then canonical sort
        let mut sub = self.mask;
        loop {
            if sub != 0 {
                out.push(FeasibleSet { mask: sub });
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.mask;
        }
        out.sort();
        out
    }

    /// Renders as `{a,b}` using the universe's names.
    pub fn format(self, universe: &Universe) -> String {
        let mut s = String::from("{");
        for (i, alt) in self.members().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str(universe.name(alt));
        }
        s.push('}');
        s
    }
}

impl PartialOrd for FeasibleSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FeasibleSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            let mut a = self.members();
            let mut b = other.members();
            loop {
                match (a.next(), b.next()) {
                    (Some(x), Some(y)) => match x.cmp(&y) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    },
                    (None, None) => return Ordering::Equal,
                    // equal popcount means the sequences end together
                    (None, Some(_)) | (Some(_), None) => unreachable!(),
                }
            }
        })
    }
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeasibleSet({:#b})", self.mask)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universe_sorts_and_validates() {
        let u = Universe::new(["c", "a", "b"]).unwrap();
        assert_eq!(u.names().collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(u.index_of("b"), Some(1));
        assert_eq!(u.index_of("z"), None);

        assert_eq!(
            Universe::new(["a", "a"]),
            Err(UniverseError::DuplicateName("a".into()))
        );
        assert_eq!(
            Universe::new(["A"]),
            Err(UniverseError::InvalidName("A".into()))
        );
        assert_eq!(
            Universe::new(Vec::<String>::new()),
            Err(UniverseError::Empty)
        );
        assert!(matches!(
            Universe::new((0..17).map(|i| format!("x{i}"))),
            Err(UniverseError::TooLarge(17))
        ));
        // sizes 1 and 2 are allowed even though the theory assumes >= 3
        assert!(Universe::new(["a"]).is_ok());
        assert!(Universe::new(["a", "b"]).is_ok());
    }

    #[test]
    fn canonical_order_is_size_then_sequence() {
        let u = Universe::new(["a", "b", "c", "d"]).unwrap();
        let ad = u.set_of(["a", "d"]).unwrap();
        let bc = u.set_of(["b", "c"]).unwrap();
        // {a,d} precedes {b,c}: sequences (0,3) < (1,2)
        assert!(ad < bc);
        let a = u.set_of(["a"]).unwrap();
        assert!(a < ad);

        let sets = u.feasible_sets();
        assert_eq!(sets.len(), 15);
        let rendered: Vec<String> = sets.iter().map(|s| s.format(&u)).collect();
        assert_eq!(
            rendered[..7],
            ["{a}", "{b}", "{c}", "{d}", "{a,b}", "{a,c}", "{a,d}"]
        );
        assert_eq!(rendered[7], "{b,c}");
    }

    #[test]
    fn set_operations() {
        let u = Universe::new(["a", "b", "c"]).unwrap();
        let ab = u.set_of(["a", "b"]).unwrap();
        let bc = u.set_of(["b", "c"]).unwrap();
        assert_eq!(ab.union(bc), u.full_set());
        assert_eq!(ab.intersection(bc), Some(u.set_of(["b"]).unwrap()));
        assert_eq!(
            u.set_of(["a"])
                .unwrap()
                .intersection(u.set_of(["c"]).unwrap()),
            None
        );
        assert!(u.set_of(["a"]).unwrap().is_subset_of(ab));
        assert!(!ab.is_subset_of(bc));
        assert_eq!(ab.without(bc), Some(u.set_of(["a"]).unwrap()));
        assert_eq!(ab.without(ab), None);
        assert_eq!(ab.subsets().len(), 3);
        assert_eq!(u.parse_set("{a, b}").unwrap(), ab);
        assert_eq!(u.parse_set("a,b").unwrap(), ab);
        assert_eq!(
            u.parse_set("{a,z}"),
            Err(UniverseError::UnknownName("z".into()))
        );
    }
}
