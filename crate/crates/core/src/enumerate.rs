//! Deterministic generators: all weak or linear orders over a small
//! universe, exhaustive and seeded-random profile families, and every choice
//! table over a universe.
//!
//! Exhaustive profile generation walks multisets of ballots (ballots with
//! multiplicity), not labeled voters: all the implemented rules are
//! anonymous, and the multiset space is exponentially smaller.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::choice::ChoiceTable;
use crate::prefs::{Profile, WeakOrder};
use crate::universe::{FeasibleSet, Universe};

/// All linear orders over `k` alternatives, permutations in lexicographic
/// order.
pub fn all_linear_orders(k: usize) -> Vec<WeakOrder> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    let mut used = vec![false; k];
    fn rec(k: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<WeakOrder>) {
        if current.len() == k {
            out.push(WeakOrder::linear(current));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(k, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(k, &mut current, &mut used, &mut out);
    out
}

/// All weak orders (ordered partitions into indifference classes) over `k`
/// alternatives; deterministic order, first class chosen canonically.
pub fn all_weak_orders(k: usize) -> Vec<WeakOrder> {
    let full = (1u32 << k) - 1;
    let mut out = Vec::new();
    let mut classes: Vec<FeasibleSet> = Vec::new();
    fn rec(remaining: u32, k: usize, classes: &mut Vec<FeasibleSet>, out: &mut Vec<WeakOrder>) {
        let Some(rest) = FeasibleSet::from_mask(remaining) else {
            out.push(WeakOrder::new(classes.clone(), k).expect("classes partition the universe"));
            return;
        };
        for first in rest.subsets() {
            classes.push(first);
            rec(remaining & !first.mask(), k, classes, out);
            classes.pop();
        }
    }
    rec(full, k, &mut classes, &mut out);
    out
}

fn ballots(k: usize, linear: bool) -> Vec<WeakOrder> {
    if linear {
        all_linear_orders(k)
    } else {
        all_weak_orders(k)
    }
}

fn profile_from_sorted_indices(
    universe: &Universe,
    orders: &[WeakOrder],
    indices: &[usize],
) -> Profile {
    let mut entries: Vec<(u32, WeakOrder)> = Vec::new();
    for &idx in indices {
        match entries.last_mut() {
            Some((mult, order)) if *order == orders[idx] => *mult += 1,
            _ => entries.push((1, orders[idx].clone())),
        }
    }
    Profile::new(universe.clone(), entries).expect("at least one voter")
}

/// Every profile of `voters` ballots over the universe, as a deterministic
/// stream of ballot multisets (non-decreasing index sequences).
pub fn exhaustive_profiles(
    universe: &Universe,
    voters: u32,
    linear: bool,
) -> impl Iterator<Item = Profile> {
    assert!(voters >= 1, "profiles need at least one voter");
    let universe = universe.clone();
    let orders = ballots(universe.len(), linear);
    let mut indices: Option<Vec<usize>> = Some(vec![0; voters as usize]);
    std::iter::from_fn(move || {
        let current = indices.take()?;
        let profile = profile_from_sorted_indices(&universe, &orders, &current);
        // successor: bump the rightmost index that can still grow, then
        // level everything after it
        let mut next = current;
        let mut pos = next.len();
        loop {
            if pos == 0 {
                break; // exhausted
            }
            pos -= 1;
            if next[pos] + 1 < orders.len() {
                let v = next[pos] + 1;
                for slot in next.iter_mut().skip(pos) {
                    *slot = v;
                }
                indices = Some(next);
                break;
            }
        }
        Some(profile)
    })
}

/// `count` seeded uniform profiles of `voters` ballots; the same seed always
/// yields the same sequence.
pub fn random_profiles(
    universe: &Universe,
    voters: u32,
    linear: bool,
    count: u32,
    seed: u64,
) -> Vec<Profile> {
    assert!(voters >= 1, "profiles need at least one voter");
    let orders = ballots(universe.len(), linear);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut indices: Vec<usize> = (0..voters)
                .map(|_| rng.random_range(0..orders.len()))
                .collect();
            indices.sort_unstable();
            profile_from_sorted_indices(universe, &orders, &indices)
        })
        .collect()
}

/// Every choice function over the universe, one table at a time: the
/// cartesian product of all nonempty subsets per feasible set. Three
/// alternatives give 189 tables.
pub fn all_choice_tables(universe: &Universe) -> impl Iterator<Item = ChoiceTable> {
    let universe = universe.clone();
    let sets = universe.feasible_sets();
    let options: Vec<Vec<FeasibleSet>> = sets.iter().map(|s| s.subsets()).collect();
    let mut counters: Option<Vec<usize>> = Some(vec![0; sets.len()]);
    std::iter::from_fn(move || {
        let current = counters.take()?;
        let table = {
            let sets = &sets;
            let options = &options;
            let current = &current;
            ChoiceTable::from_fn(universe.clone(), |set| {
                let slot = sets.iter().position(|&s| s == set).expect("set enumerated");
                options[slot][current[slot]]
            })
            .expect("chosen sets are subsets by construction")
        };
        // mixed-radix increment
        let mut next = current;
        for slot in (0..next.len()).rev() {
            next[slot] += 1;
            if next[slot] < options[slot].len() {
                counters = Some(next);
                break;
            }
            next[slot] = 0;
        }
        Some(table)
    })
}
