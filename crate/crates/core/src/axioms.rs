//! Consistency axioms, rationalizability in both flavors, stable sets and
//! self-stability, social-choice condition testers, and counterexample
//! search.
//!
//! Every checker scans feasible sets in canonical order and reports the
//! first violation it meets, so witnesses are reproducible across runs. Every
//! witness re-validates: plugging its sets back into the axiom's definition
//! exhibits the violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::choice::{
    base_relation_alts, revealed_relation_sets, AltRelation, ChoiceTable, SetRelation,
};
use crate::enumerate::{all_weak_orders, exhaustive_profiles, random_profiles};
use crate::prefs::{Profile, WeakOrder};
use crate::scf::{inclusion_minimal, induce_table, stable_sets_by, Scf, ScfError};
use crate::universe::{FeasibleSet, Universe};

/// The consistency conditions the checker knows about.
///
/// `alpha`/`gamma` quantify over individual alternatives, the hatted forms
/// over whole choice sets. `alpha_hat_ssp` is the strong-superset-property
/// form of `alpha_hat`; the two are equivalent and both are exposed so the
/// equivalence itself can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomId {
    Alpha,
    Gamma,
    AlphaHat,
    AlphaHatSsp,
    GammaHat,
    Warp,
    PathIndependence,
    Aizerman,
    GeneralizedCondorcet,
}

impl AxiomId {
    pub const ALL: [AxiomId; 9] = [
        AxiomId::Alpha,
        AxiomId::Gamma,
        AxiomId::AlphaHat,
        AxiomId::AlphaHatSsp,
        AxiomId::GammaHat,
        AxiomId::Warp,
        AxiomId::PathIndependence,
        AxiomId::Aizerman,
        AxiomId::GeneralizedCondorcet,
    ];

    pub fn token(self) -> &'static str {
        match self {
            AxiomId::Alpha => "alpha",
            AxiomId::Gamma => "gamma",
            AxiomId::AlphaHat => "alpha_hat",
            AxiomId::AlphaHatSsp => "alpha_hat_ssp",
            AxiomId::GammaHat => "gamma_hat",
            AxiomId::Warp => "warp",
            AxiomId::PathIndependence => "path_independence",
            AxiomId::Aizerman => "aizerman",
            AxiomId::GeneralizedCondorcet => "generalized_condorcet",
        }
    }

    pub fn from_token(token: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.token() == token)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessPart {
    Set(FeasibleSet),
    Alt(usize),
}

/// A concrete instantiation of a violated axiom, lexicographically first
/// under the module's enumeration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub axiom: AxiomId,
    pub parts: Vec<(&'static str, WitnessPart)>,
}

impl Witness {
    fn sets(axiom: AxiomId, parts: &[(&'static str, FeasibleSet)]) -> Self {
        Witness {
            axiom,
            parts: parts
                .iter()
                .map(|&(label, set)| (label, WitnessPart::Set(set)))
                .collect(),
        }
    }

    pub fn part(&self, label: &str) -> Option<WitnessPart> {
        self.parts
            .iter()
            .find(|(l, _)| *l == label)
            .map(|(_, p)| *p)
    }

    fn set_part(&self, label: &str) -> Option<FeasibleSet> {
        match self.part(label) {
            Some(WitnessPart::Set(s)) => Some(s),
            _ => None,
        }
    }

    fn alt_part(&self, label: &str) -> Option<usize> {
        match self.part(label) {
            Some(WitnessPart::Alt(a)) => Some(a),
            _ => None,
        }
    }

    /// Renders like `A={a,b,c} B={a,b}`.
    pub fn describe(&self, universe: &Universe) -> String {
        self.parts
            .iter()
            .map(|(label, part)| match part {
                WitnessPart::Set(s) => format!("{label}={}", s.format(universe)),
                WitnessPart::Alt(a) => format!("{label}={}", universe.name(*a)),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// JSON object with the parts in enumeration order.
    pub fn to_json(&self, universe: &Universe) -> String {
        let mut out = String::from("{");
        for (i, (label, part)) in self.parts.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let value = match part {
                WitnessPart::Set(s) => s.format(universe),
                WitnessPart::Alt(a) => universe.name(*a).to_string(),
            };
            let _ = write!(out, "\"{label}\":\"{value}\"");
        }
        out.push('}');
        out
    }
}

/// Outcome of an axiom check: either the condition holds everywhere, or a
/// witness shows where it breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn passed() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn violated(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }

    /// `HOLDS` or `VIOLATED A={a,b,c} B={a,b}`.
    pub fn describe(&self, universe: &Universe) -> String {
        match &self.witness {
            None => "HOLDS".to_string(),
            Some(w) => format!("VIOLATED {}", w.describe(universe)),
        }
    }

    pub fn to_json(&self, universe: &Universe) -> String {
        match &self.witness {
            None => "{\"holds\":true}".to_string(),
            Some(w) => format!("{{\"holds\":false,\"witness\":{}}}", w.to_json(universe)),
        }
    }
}

/// Checks one axiom against a full choice table.
pub fn check_axiom(table: &ChoiceTable, axiom: AxiomId) -> Verdict {
    match axiom {
        AxiomId::Alpha => check_alpha(table),
        AxiomId::Gamma => check_gamma(table),
        // the strong-superset form is the primary algorithm for alpha_hat;
        // far fewer pairs to scan, and equivalent
        AxiomId::AlphaHat | AxiomId::AlphaHatSsp => check_superset_consistency(table, axiom),
        AxiomId::GammaHat => check_gamma_hat(table),
        AxiomId::Warp => check_warp(table),
        AxiomId::PathIndependence => check_path_independence(table),
        AxiomId::Aizerman => check_aizerman(table),
        AxiomId::GeneralizedCondorcet => check_generalized_condorcet(table),
    }
}

fn check_alpha(table: &ChoiceTable) -> Verdict {
    let sets = table.universe().feasible_sets();
    for &a in &sets {
        let chosen_a = table.get(a);
        for &b in &sets {
            let union_choice = table.get(a.union(b));
            let Some(common) = a.intersection(b) else {
                continue;
            };
            for x in common.members() {
                if union_choice.contains(x) && (!chosen_a.contains(x) || !table.get(b).contains(x))
                {
                    return Verdict::violated(Witness {
                        axiom: AxiomId::Alpha,
                        parts: vec![
                            ("A", WitnessPart::Set(a)),
                            ("B", WitnessPart::Set(b)),
                            ("x", WitnessPart::Alt(x)),
                        ],
                    });
                }
            }
        }
    }
    Verdict::passed()
}

fn check_gamma(table: &ChoiceTable) -> Verdict {
    let sets = table.universe().feasible_sets();
    for &a in &sets {
        let chosen_a = table.get(a);
        for &b in &sets {
            let union_choice = table.get(a.union(b));
            let chosen_b = table.get(b);
            let Some(both) = chosen_a.intersection(chosen_b) else {
                continue;
            };
            for x in both.members() {
                if !union_choice.contains(x) {
                    return Verdict::violated(Witness {
                        axiom: AxiomId::Gamma,
                        parts: vec![
                            ("A", WitnessPart::Set(a)),
                            ("B", WitnessPart::Set(b)),
                            ("x", WitnessPart::Alt(x)),
                        ],
                    });
                }
            }
        }
    }
    Verdict::passed()
}

/// `S(A) ⊆ B ⊆ A` must give `S(A) = S(B)`.
fn check_superset_consistency(table: &ChoiceTable, axiom: AxiomId) -> Verdict {
    for a in table.universe().feasible_sets() {
        let chosen = table.get(a);
        for b in a.subsets() {
            if chosen.is_subset_of(b) && table.get(b) != chosen {
                return Verdict::violated(Witness::sets(axiom, &[("A", a), ("B", b)]));
            }
        }
    }
    Verdict::passed()
}

/// The definitional three-set form of `alpha_hat`, used to cross-validate
/// the strong-superset algorithm: `X = S(A ∪ B)` with `X ⊆ A ∩ B` forces
/// `X = S(A) = S(B)`.
pub fn alpha_hat_via_definition(table: &ChoiceTable) -> Verdict {
    let sets = table.universe().feasible_sets();
    for &a in &sets {
        for &b in &sets {
            let x = table.get(a.union(b));
            let within = a
                .intersection(b)
                .is_some_and(|common| x.is_subset_of(common));
            if within && (table.get(a) != x || table.get(b) != x) {
                return Verdict::violated(Witness::sets(
                    AxiomId::AlphaHat,
                    &[("A", a), ("B", b), ("X", x)],
                ));
            }
        }
    }
    Verdict::passed()
}

fn check_gamma_hat(table: &ChoiceTable) -> Verdict {
    let sets = table.universe().feasible_sets();
    for &a in &sets {
        let x = table.get(a);
        for &b in &sets {
            if table.get(b) == x && table.get(a.union(b)) != x {
                return Verdict::violated(Witness::sets(
                    AxiomId::GammaHat,
                    &[("A", a), ("B", b), ("X", x)],
                ));
            }
        }
    }
    Verdict::passed()
}

fn check_warp(table: &ChoiceTable) -> Verdict {
    for a in table.universe().feasible_sets() {
        let chosen = table.get(a);
        for b in a.subsets() {
            let Some(common) = chosen.intersection(b) else {
                continue;
            };
            if table.get(b) != common {
                return Verdict::violated(Witness::sets(AxiomId::Warp, &[("A", a), ("B", b)]));
            }
        }
    }
    Verdict::passed()
}

fn check_path_independence(table: &ChoiceTable) -> Verdict {
    let sets = table.universe().feasible_sets();
    for &a in &sets {
        for &b in &sets {
            let direct = table.get(a.union(b));
            let two_step = table.get(table.get(a).union(table.get(b)));
            if direct != two_step {
                return Verdict::violated(Witness::sets(
                    AxiomId::PathIndependence,
                    &[("A", a), ("B", b)],
                ));
            }
        }
    }
    Verdict::passed()
}

fn check_aizerman(table: &ChoiceTable) -> Verdict {
    for a in table.universe().feasible_sets() {
        let chosen = table.get(a);
        for b in a.subsets() {
            if chosen.is_subset_of(b) && !table.get(b).is_subset_of(chosen) {
                return Verdict::violated(Witness::sets(AxiomId::Aizerman, &[("A", a), ("B", b)]));
            }
        }
    }
    Verdict::passed()
}

fn check_generalized_condorcet(table: &ChoiceTable) -> Verdict {
    let universe = table.universe();
    for a in universe.feasible_sets() {
        for winner in a.members() {
            let beats_all = a.members().all(|b| {
                b == winner
                    || table.get(universe.singleton(winner).with(b)) == universe.singleton(winner)
            });
            if beats_all && table.get(a) != universe.singleton(winner) {
                return Verdict::violated(Witness {
                    axiom: AxiomId::GeneralizedCondorcet,
                    parts: vec![("A", WitnessPart::Set(a)), ("a", WitnessPart::Alt(winner))],
                });
            }
        }
    }
    Verdict::passed()
}

/// Re-evaluates a witness against the axiom's definition; `true` means it
/// exhibits a genuine violation.
pub fn recheck_witness(table: &ChoiceTable, witness: &Witness) -> bool {
    let universe = table.universe();
    let set = |label| witness.set_part(label);
    match witness.axiom {
        AxiomId::Alpha => match (set("A"), set("B"), witness.alt_part("x")) {
            (Some(a), Some(b), Some(x)) => {
                a.contains(x)
                    && b.contains(x)
                    && table.get(a.union(b)).contains(x)
                    && (!table.get(a).contains(x) || !table.get(b).contains(x))
            }
            _ => false,
        },
        AxiomId::Gamma => match (set("A"), set("B"), witness.alt_part("x")) {
            (Some(a), Some(b), Some(x)) => {
                table.get(a).contains(x)
                    && table.get(b).contains(x)
                    && !table.get(a.union(b)).contains(x)
            }
            _ => false,
        },
        AxiomId::AlphaHat | AxiomId::AlphaHatSsp => match (set("A"), set("B")) {
            (Some(a), Some(b)) => {
                // accept either the strong-superset pair form or the
                // definitional triple form
                match set("X") {
                    None => {
                        table.get(a).is_subset_of(b)
                            && b.is_subset_of(a)
                            && table.get(b) != table.get(a)
                    }
                    Some(x) => {
                        table.get(a.union(b)) == x
                            && a.intersection(b).is_some_and(|c| x.is_subset_of(c))
                            && (table.get(a) != x || table.get(b) != x)
                    }
                }
            }
            _ => false,
        },
        AxiomId::GammaHat => match (set("A"), set("B"), set("X")) {
            (Some(a), Some(b), Some(x)) => {
                table.get(a) == x && table.get(b) == x && table.get(a.union(b)) != x
            }
            _ => false,
        },
        AxiomId::Warp => match (set("A"), set("B")) {
            (Some(a), Some(b)) => {
                b.is_subset_of(a)
                    && match table.get(a).intersection(b) {
                        Some(common) => table.get(b) != common,
                        None => false,
                    }
            }
            _ => false,
        },
        AxiomId::PathIndependence => match (set("A"), set("B")) {
            (Some(a), Some(b)) => {
                table.get(a.union(b)) != table.get(table.get(a).union(table.get(b)))
            }
            _ => false,
        },
        AxiomId::Aizerman => match (set("A"), set("B")) {
            (Some(a), Some(b)) => {
                table.get(a).is_subset_of(b)
                    && b.is_subset_of(a)
                    && !table.get(b).is_subset_of(table.get(a))
            }
            _ => false,
        },
        AxiomId::GeneralizedCondorcet => match (set("A"), witness.alt_part("a")) {
            (Some(a), Some(winner)) => {
                a.contains(winner)
                    && a.members().all(|b| {
                        b == winner
                            || table.get(universe.singleton(winner).with(b))
                                == universe.singleton(winner)
                    })
                    && table.get(a) != universe.singleton(winner)
            }
            _ => false,
        },
    }
}

/// Result of testing whether a table is rationalizable by a relation on
/// alternatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalizabilityReport {
    pub holds: bool,
    /// The base relation, which rationalizes the table whenever anything
    /// does; present iff `holds`.
    pub relation: Option<AltRelation>,
    /// First feasible set where choice differs from base-relation
    /// maximization; present iff `!holds`.
    pub failing_set: Option<FeasibleSet>,
}

/// A table is rationalizable iff its base relation rationalizes it: choice
/// must equal the undominated members of every feasible set. The outcome is
/// cross-checked against the alpha-and-gamma characterization.
pub fn check_rationalizable(table: &ChoiceTable) -> RationalizabilityReport {
    let base = base_relation_alts(table);
    let mut failing = None;
    for set in table.universe().feasible_sets() {
        if base.maximal_in(set) != Some(table.get(set)) {
            failing = Some(set);
            break;
        }
    }
    let holds = failing.is_none();
    let by_axioms =
        check_axiom(table, AxiomId::Alpha).holds && check_axiom(table, AxiomId::Gamma).holds;
    assert_eq!(
        holds, by_axioms,
        "internal error: base-relation maximization disagrees with alpha+gamma"
    );
    RationalizabilityReport {
        holds,
        relation: holds.then_some(base),
        failing_set: failing,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("not set-rationalizable: {detail}")]
pub struct NotSetRationalizable {
    pub witness: Witness,
    detail: String,
}

/// Returns the revealed preference relation on sets, which set-rationalizes
/// the table whenever set-contraction consistency holds; otherwise reports
/// the consistency witness.
///
/// On success, for every feasible `A` the chosen `S(A)` is the unique
/// maximal subset of `A` and in fact the maximum: `S(A) R̂ Y` for every
/// nonempty `Y ⊆ A`.
pub fn set_rationalize(table: &ChoiceTable) -> Result<SetRelation, NotSetRationalizable> {
    let verdict = check_axiom(table, AxiomId::AlphaHat);
    if let Some(witness) = verdict.witness {
        let detail = format!("alpha_hat fails at {}", witness.describe(table.universe()));
        return Err(NotSetRationalizable { witness, detail });
    }
    Ok(revealed_relation_sets(table))
}

/// Stable sets of a choice table within one feasible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSetReport {
    pub feasible: FeasibleSet,
    /// All stable `X ⊆ feasible`, canonical order.
    pub stable: Vec<FeasibleSet>,
    /// The inclusion-minimal stable sets.
    pub minimal: Vec<FeasibleSet>,
}

/// Enumerates the fixed points of `X ↦ {a ∈ feasible : a ∈ S(X ∪ {a})}` —
/// equivalently the internally and externally stable subsets.
pub fn stable_sets(table: &ChoiceTable, feasible: FeasibleSet) -> StableSetReport {
    let stable = match stable_sets_by(feasible, |set| {
        Ok::<_, std::convert::Infallible>(table.get(set))
    }) {
        Ok(stable) => stable,
        Err(never) => match never {},
    };
    let minimal = inclusion_minimal(&stable);
    StableSetReport {
        feasible,
        stable,
        minimal,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no unique minimal stable set in {detail}")]
pub struct NotWellDefined {
    pub set: FeasibleSet,
    detail: String,
}

/// The derived choice function returning the unique minimal stable set of
/// every feasible set, when that is well-defined everywhere.
pub fn s_hat(table: &ChoiceTable) -> Result<ChoiceTable, NotWellDefined> {
    let result = ChoiceTable::try_from_fn(table.universe().clone(), |set| {
        let report = stable_sets(table, set);
        match report.minimal.as_slice() {
            [unique] => Ok(*unique),
            _ => Err(NotWellDefined {
                set,
                detail: set.format(table.universe()),
            }),
        }
    })?;
    Ok(result.expect("stable sets are subsets of their feasible set"))
}

/// Self-stability: the minimal-stable-set function is well-defined and equal
/// to the table itself. The verdict is cross-checked against the
/// alpha_hat-and-gamma_hat characterization; on failure the witness of the
/// failing axiom is reported.
pub fn check_self_stable(table: &ChoiceTable) -> Verdict {
    let stable = match s_hat(table) {
        Ok(derived) => derived == *table,
        Err(_) => false,
    };
    let alpha_hat = check_axiom(table, AxiomId::AlphaHat);
    let gamma_hat = check_axiom(table, AxiomId::GammaHat);
    assert_eq!(
        stable,
        alpha_hat.holds && gamma_hat.holds,
        "internal error: self-stability disagrees with alpha_hat+gamma_hat"
    );
    if stable {
        Verdict::passed()
    } else {
        Verdict::violated(
            alpha_hat
                .witness
                .or(gamma_hat.witness)
                .expect("a failing axiom carries a witness"),
        )
    }
}

/// Conditions on social choice functions, checked over an explicit finite
/// profile family. A `HOLDS` verdict certifies only the supplied family;
/// universally quantified conditions cannot be proved this way, merely
/// refuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScfCondition {
    /// Nothing unanimously beaten is chosen from the pair.
    Pareto,
    /// Renaming alternatives renames the choice.
    Neutrality,
    /// Reordering and regrouping ballots changes nothing.
    Anonymity,
    /// Extra support turns a pairwise win-or-tie into a sole win.
    PositiveResponsiveness,
    /// Choice from a set depends only on preferences over that set.
    Iia,
    /// Voter `i` (0-based) always gets their strict pairwise preference
    /// chosen. Holding across the family is evidence of a vetoer; profiles
    /// with at most `i` voters are skipped.
    WeakDictator(usize),
}

impl ScfCondition {
    pub fn token(self) -> String {
        match self {
            ScfCondition::Pareto => "pareto".into(),
            ScfCondition::Neutrality => "neutrality".into(),
            ScfCondition::Anonymity => "anonymity".into(),
            ScfCondition::PositiveResponsiveness => "positive_responsiveness".into(),
            ScfCondition::Iia => "iia".into(),
            ScfCondition::WeakDictator(i) => format!("weak_dictator({i})"),
        }
    }
}

/// Violation evidence: the instantiating profiles plus a description.
#[derive(Debug, Clone)]
pub struct ConditionWitness {
    pub profiles: Vec<Profile>,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub witness: Option<ConditionWitness>,
}

impl ConditionVerdict {
    fn passed() -> Self {
        ConditionVerdict {
            holds: true,
            witness: None,
        }
    }

    fn violated(profiles: Vec<Profile>, detail: String) -> Self {
        ConditionVerdict {
            holds: false,
            witness: Some(ConditionWitness { profiles, detail }),
        }
    }
}

/// Checks one SCF condition over every profile in `family` (and every pair,
/// permutation, or single-voter deviation the condition quantifies over).
pub fn check_scf_condition(
    scf: &Scf,
    condition: ScfCondition,
    family: &[Profile],
) -> Result<ConditionVerdict, ScfError> {
    match condition {
        ScfCondition::Pareto => check_pareto(scf, family),
        ScfCondition::Neutrality => check_neutrality(scf, family),
        ScfCondition::Anonymity => check_anonymity(scf, family),
        ScfCondition::PositiveResponsiveness => check_positive_responsiveness(scf, family),
        ScfCondition::Iia => check_iia(scf, family),
        ScfCondition::WeakDictator(i) => check_weak_dictator(scf, i, family),
    }
}

fn ordered_pairs(universe: &Universe) -> Vec<(usize, usize)> {
    let n = universe.len();
    (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect()
}

fn check_pareto(scf: &Scf, family: &[Profile]) -> Result<ConditionVerdict, ScfError> {
    for profile in family {
        let universe = profile.universe();
        for (a, b) in ordered_pairs(universe) {
            let unanimous = profile.entries().iter().all(|(_, o)| o.prefers(b, a));
            if !unanimous {
                continue;
            }
            let pair = universe.singleton(a).with(b);
            if scf.choose(profile, pair)?.contains(a) {
                return Ok(ConditionVerdict::violated(
                    vec![profile.clone()],
                    format!(
                        "every voter prefers {} to {}, yet {} is chosen from {}",
                        universe.name(b),
                        universe.name(a),
                        universe.name(a),
                        pair.format(universe)
                    ),
                ));
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// `a R' b` iff `perm(a) R perm(b)`: every class mask is pulled back along
/// the permutation.
fn relabel_order(order: &WeakOrder, perm: &[usize]) -> WeakOrder {
    let n = perm.len();
    let classes = order
        .classes()
        .iter()
        .map(|class| {
            let mask = (0..n)
                .filter(|&x| class.contains(perm[x]))
                .fold(0u32, |m, x| m | (1 << x));
            FeasibleSet::from_mask(mask).expect("classes stay nonempty under relabelling")
        })
        .collect();
    WeakOrder::new(classes, n).expect("relabelling keeps a partition")
}

fn preimage(set: FeasibleSet, perm: &[usize]) -> FeasibleSet {
    let mask = (0..perm.len())
        .filter(|&x| set.contains(perm[x]))
        .fold(0u32, |m, x| m | (1 << x));
    FeasibleSet::from_mask(mask).expect("preimage of a nonempty set is nonempty")
}

fn check_neutrality(scf: &Scf, family: &[Profile]) -> Result<ConditionVerdict, ScfError> {
    for profile in family {
        let universe = profile.universe();
        for perm in permutations(universe.len()) {
            let entries = profile
                .entries()
                .iter()
                .map(|(m, o)| (*m, relabel_order(o, &perm)))
                .collect();
            let relabeled =
                Profile::new(universe.clone(), entries).expect("relabelling keeps validity");
            for feasible in universe.feasible_sets() {
                let expected = preimage(scf.choose(profile, feasible)?, &perm);
                let got = scf.choose(&relabeled, preimage(feasible, &perm))?;
                if got != expected {
                    return Ok(ConditionVerdict::violated(
                        vec![profile.clone(), relabeled],
                        format!(
                            "renaming alternatives maps choice from {} to {}, rule returned {}",
                            feasible.format(universe),
                            expected.format(universe),
                            got.format(universe)
                        ),
                    ));
                }
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

fn check_anonymity(scf: &Scf, family: &[Profile]) -> Result<ConditionVerdict, ScfError> {
    for profile in family {
        let universe = profile.universe();
        // reorder the entries and split multiplicities into unit ballots;
        // both must be invisible to the rule
        let mut reversed: Vec<(u32, WeakOrder)> = profile.entries().to_vec();
        reversed.reverse();
        let reversed = Profile::new(universe.clone(), reversed).expect("same ballots");
        let split: Vec<(u32, WeakOrder)> = profile
            .entries()
            .iter()
            .flat_map(|(m, o)| (0..*m).map(move |_| (1u32, o.clone())))
            .collect();
        let split = Profile::new(universe.clone(), split).expect("same ballots");
        for feasible in universe.feasible_sets() {
            let original = scf.choose(profile, feasible)?;
            for variant in [&reversed, &split] {
                let got = scf.choose(variant, feasible)?;
                if got != original {
                    return Ok(ConditionVerdict::violated(
                        vec![profile.clone(), variant.clone()],
                        format!(
                            "regrouping ballots changed the choice from {} on {}",
                            original.format(universe),
                            feasible.format(universe)
                        ),
                    ));
                }
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

/// Profiles reachable from `profile` by changing a single voter's ballot to
/// `order`, one per entry.
fn single_voter_deviations(profile: &Profile, order: &WeakOrder) -> Vec<(usize, Profile)> {
    let mut out = Vec::new();
    for (idx, (mult, _)) in profile.entries().iter().enumerate() {
        let mut entries: Vec<(u32, WeakOrder)> = profile.entries().to_vec();
        if *mult == 1 {
            entries[idx].1 = order.clone();
        } else {
            entries[idx].0 -= 1;
            entries.push((1, order.clone()));
        }
        let deviated =
            Profile::new(profile.universe().clone(), entries).expect("voter count is unchanged");
        out.push((idx, deviated));
    }
    out
}

fn check_positive_responsiveness(
    scf: &Scf,
    family: &[Profile],
) -> Result<ConditionVerdict, ScfError> {
    for profile in family {
        let universe = profile.universe();
        let replacements = all_weak_orders(universe.len());
        for (a, b) in ordered_pairs(universe) {
            let pair = universe.singleton(a).with(b);
            let before = scf.choose(profile, pair)?;
            if !before.contains(a) {
                continue;
            }
            for replacement in &replacements {
                for (idx, deviated) in single_voter_deviations(profile, replacement) {
                    let old = &profile.entries()[idx].1;
                    let upgraded = (old.indifferent(a, b) && replacement.prefers(a, b))
                        || (old.prefers(b, a) && replacement.weakly_prefers(a, b));
                    if !upgraded {
                        continue;
                    }
                    let after = scf.choose(&deviated, pair)?;
                    if after != universe.singleton(a) {
                        return Ok(ConditionVerdict::violated(
                            vec![profile.clone(), deviated],
                            format!(
                                "support for {} rose but the choice from {} became {}",
                                universe.name(a),
                                pair.format(universe),
                                after.format(universe)
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

/// Multiset view of a profile's ballots, for restriction comparisons.
fn ballot_multiset(profile: &Profile) -> BTreeMap<Vec<u32>, u64> {
    let mut map: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for (mult, order) in profile.entries() {
        let key: Vec<u32> = order.classes().iter().map(|c| c.mask()).collect();
        *map.entry(key).or_default() += *mult as u64;
    }
    map
}

fn check_iia(scf: &Scf, family: &[Profile]) -> Result<ConditionVerdict, ScfError> {
    for (i, p) in family.iter().enumerate() {
        for q in &family[i + 1..] {
            if p.universe() != q.universe() {
                continue;
            }
            for feasible in p.universe().feasible_sets() {
                let p_restricted = p.restrict(feasible).expect("subset of own universe");
                let q_restricted = q.restrict(feasible).expect("subset of own universe");
                if ballot_multiset(&p_restricted) != ballot_multiset(&q_restricted) {
                    continue;
                }
                let choice_p = scf.choose(p, feasible)?;
                let choice_q = scf.choose(q, feasible)?;
                if choice_p != choice_q {
                    return Ok(ConditionVerdict::violated(
                        vec![p.clone(), q.clone()],
                        format!(
                            "profiles agree on {} but choices differ: {} vs {}",
                            feasible.format(p.universe()),
                            choice_p.format(p.universe()),
                            choice_q.format(p.universe())
                        ),
                    ));
                }
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

fn check_weak_dictator(
    scf: &Scf,
    voter: usize,
    family: &[Profile],
) -> Result<ConditionVerdict, ScfError> {
    for profile in family {
        if (voter as u64) >= profile.voters() {
            continue;
        }
        let universe = profile.universe();
        // locate the voter's ballot through the cumulative multiplicities
        let mut remaining = voter as u64;
        let order = profile
            .entries()
            .iter()
            .find_map(|(mult, order)| {
                if remaining < *mult as u64 {
                    Some(order)
                } else {
                    remaining -= *mult as u64;
                    None
                }
            })
            .expect("voter index is within the total count");
        for (a, b) in ordered_pairs(universe) {
            if !order.prefers(a, b) {
                continue;
            }
            let pair = universe.singleton(a).with(b);
            if !scf.choose(profile, pair)?.contains(a) {
                return Ok(ConditionVerdict::violated(
                    vec![profile.clone()],
                    format!(
                        "voter {voter} prefers {} to {} but {} is chosen",
                        universe.name(a),
                        universe.name(b),
                        scf.choose(profile, pair)?.format(universe)
                    ),
                ));
            }
        }
    }
    Ok(ConditionVerdict::passed())
}

/// How to generate candidate profiles for counterexample search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorSpec {
    /// Every multiset of ballots with the given voter count, in a fixed
    /// deterministic order.
    Exhaustive {
        voters: u32,
        alts: usize,
        linear: bool,
    },
    /// Seeded uniform samples; reproducible across runs.
    Random {
        count: u32,
        seed: u64,
        voters: u32,
        alts: usize,
        linear: bool,
    },
}

impl GeneratorSpec {
    fn universe(&self) -> Universe {
        let alts = match self {
            GeneratorSpec::Exhaustive { alts, .. } => *alts,
            GeneratorSpec::Random { alts, .. } => *alts,
        };
        Universe::of_size(alts).expect("generator needs 1..=16 alternatives")
    }

    fn profiles(&self) -> Box<dyn Iterator<Item = Profile>> {
        let universe = self.universe();
        match *self {
            GeneratorSpec::Exhaustive { voters, linear, .. } => {
                Box::new(exhaustive_profiles(&universe, voters, linear))
            }
            GeneratorSpec::Random {
                count,
                seed,
                voters,
                linear,
                ..
            } => Box::new(random_profiles(&universe, voters, linear, count, seed).into_iter()),
        }
    }
}

/// Scans generated profiles for one whose induced choice table violates the
/// axiom. Returns the first hit in generation order together with its
/// witness, or `None` when the space is exhausted.
///
/// Profiles on which a tournament-only rule is undefined are skipped; any
/// other rule error aborts the search.
pub fn search_counterexample(
    scf: &Scf,
    axiom: AxiomId,
    spec: &GeneratorSpec,
) -> Result<Option<(Profile, Witness)>, ScfError> {
    let universe = spec.universe();
    for profile in spec.profiles() {
        match induce_table(scf, &profile, &universe) {
            Ok(table) => {
                if let Some(witness) = check_axiom(&table, axiom).witness {
                    debug_assert!(recheck_witness(&table, &witness));
                    return Ok(Some((profile, witness)));
                }
            }
            Err(ScfError::NotATournament { .. }) if scf.tournament_only() => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
