//! Command-line frontend: evaluate rules, induce tables, check axioms,
//! enumerate stable sets, hunt counterexamples, re-run the bundled worked
//! examples, and export relations as DOT.
//!
//! Exit codes: 0 success / all checks hold, 1 a violation was found (with a
//! witness), 2 usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use setchoice::axioms::{
    check_axiom, check_rationalizable, check_self_stable, search_counterexample, stable_sets,
    AxiomId, GeneratorSpec,
};
use setchoice::choice::{
    base_relation_alts, base_relation_sets, maximal_sets, revealed_relation_alts,
    revealed_relation_sets,
};
use setchoice::lp::{maximal_lottery, rat, ratio};
use setchoice::prefs::{margins, may_pairwise, parse_profile, weak_condorcet_winners};
use setchoice::scf::{induce_table, scoring_scores, Scf, ScoreFamily, ScoreVector};
use setchoice::universe::FeasibleSet;
use setchoice::{fixtures, ChoiceTable, Profile, Universe};

#[derive(Parser)]
#[command(
    name = "setchoice",
    version,
    about = "Choice functions, consistency axioms, voting rules, and exact maximal lotteries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rule on a profile and print the chosen set
    Eval {
        /// Rule token: plurality, borda, antiplurality, stv, nanson,
        /// minimax, tc, gocha, uc, iuc, mc, es, omni
        #[arg(long)]
        scf: String,
        /// Profile file in the .prof format
        #[arg(long)]
        profile: PathBuf,
        /// Feasible set such as a,b,c; defaults to the whole universe
        #[arg(long)]
        set: Option<String>,
    },
    /// Induce a rule's full choice table on a profile and print it
    Table {
        #[arg(long)]
        scf: String,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Check consistency axioms on a choice table
    Axioms {
        /// Comma-separated axiom list, e.g. alpha,alpha_hat,gamma_hat
        #[arg(long)]
        check: String,
        /// Choice table file in the .ct format
        #[arg(long, conflicts_with_all = ["scf", "profile"], required_unless_present = "scf")]
        input: Option<PathBuf>,
        /// Rule whose induced table is checked (needs --profile)
        #[arg(long, requires = "profile")]
        scf: Option<String>,
        #[arg(long, requires = "scf")]
        profile: Option<PathBuf>,
        /// Emit a machine-readable report instead of lines
        #[arg(long)]
        json: bool,
    },
    /// Enumerate the stable sets of a choice table within a feasible set
    Stable {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        set: Option<String>,
    },
    /// Search generated profiles for an axiom violation
    Search {
        #[arg(long)]
        scf: String,
        #[arg(long)]
        axiom: String,
        #[arg(long)]
        voters: u32,
        #[arg(long)]
        alts: usize,
        /// Restrict ballots to linear orders
        #[arg(long)]
        linear: bool,
        #[arg(long, value_enum, default_value_t = SearchMode::Exhaustive)]
        mode: SearchMode,
        /// Number of samples (random mode)
        #[arg(long)]
        count: Option<u32>,
        /// RNG seed (random mode; required, never defaulted silently)
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Write a bundled example to disk and re-run its checks
    Repro {
        #[arg(value_enum)]
        name: ReproName,
        /// Directory the example files are written to
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Export a relation of a choice table as a DOT digraph
    Dot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        relation: RelationKind,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum SearchMode {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReproName {
    Table1,
    Table2,
    Fig1,
    Fig2,
    #[value(name = "gamma_table")]
    GammaTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationKind {
    RevealedSets,
    BaseSets,
    RevealedAlts,
    BaseAlts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Eval { scf, profile, set } => cmd_eval(&scf, &profile, set.as_deref()),
        Command::Table { scf, profile } => cmd_table(&scf, &profile),
        Command::Axioms {
            check,
            input,
            scf,
            profile,
            json,
        } => cmd_axioms(
            &check,
            input.as_deref(),
            scf.as_deref(),
            profile.as_deref(),
            json,
        ),
        Command::Stable { input, set } => cmd_stable(&input, set.as_deref()),
        Command::Search {
            scf,
            axiom,
            voters,
            alts,
            linear,
            mode,
            count,
            seed,
        } => cmd_search(&scf, &axiom, voters, alts, linear, mode, count, seed),
        Command::Repro { name, out_dir } => cmd_repro(name, &out_dir),
        Command::Dot {
            input,
            relation,
            out,
        } => cmd_dot(&input, relation, out.as_deref()),
    }
}

fn load_profile(path: &Path) -> Result<Profile> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read profile file {}", path.display()))?;
    parse_profile(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn load_table(path: &Path) -> Result<ChoiceTable> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read table file {}", path.display()))?;
    ChoiceTable::parse(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn parse_feasible(universe: &Universe, set: Option<&str>) -> Result<FeasibleSet> {
    match set {
        None => Ok(universe.full_set()),
        Some(text) => universe
            .parse_set(text)
            .map_err(|e| anyhow!("invalid --set: {e}")),
    }
}

fn cmd_eval(scf: &str, profile: &Path, set: Option<&str>) -> Result<ExitCode> {
    let scf = Scf::from_token(scf)?;
    let profile = load_profile(profile)?;
    let feasible = parse_feasible(profile.universe(), set)?;
    let chosen = scf.choose(&profile, feasible)?;
    println!("{}", chosen.format(profile.universe()));
    Ok(ExitCode::SUCCESS)
}

fn cmd_table(scf: &str, profile: &Path) -> Result<ExitCode> {
    let scf = Scf::from_token(scf)?;
    let profile = load_profile(profile)?;
    let table = induce_table(&scf, &profile, profile.universe())?;
    print!("{}", table.serialize());
    Ok(ExitCode::SUCCESS)
}

fn cmd_axioms(
    check: &str,
    input: Option<&Path>,
    scf: Option<&str>,
    profile: Option<&Path>,
    json: bool,
) -> Result<ExitCode> {
    let axioms: Vec<AxiomId> = check
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| AxiomId::from_token(t).ok_or_else(|| anyhow!("unknown axiom {t:?}")))
        .collect::<Result<_>>()?;
    if axioms.is_empty() {
        bail!("--check needs at least one axiom");
    }

    let table = match (input, scf) {
        (Some(path), None) => load_table(path)?,
        (None, Some(token)) => {
            let scf = Scf::from_token(token)?;
            let profile = load_profile(profile.expect("clap enforces --profile with --scf"))?;
            induce_table(&scf, &profile, profile.universe())?
        }
        _ => unreachable!("clap enforces exactly one input source"),
    };

    let universe = table.universe().clone();
    let mut any_violated = false;
    let mut json_items = Vec::new();
    for axiom in axioms {
        let verdict = check_axiom(&table, axiom);
        any_violated |= !verdict.holds;
        if json {
            let body = verdict.to_json(&universe);
            json_items.push(format!(
                "{{\"axiom\":\"{}\",{}",
                axiom.token(),
                &body[1..] // splice the verdict fields after the axiom key
            ));
        } else {
            println!("{}: {}", axiom.token(), verdict.describe(&universe));
        }
    }
    if json {
        println!("{{\"axioms\":[{}]}}", json_items.join(","));
    }
    Ok(if any_violated {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn format_sets(sets: &[FeasibleSet], universe: &Universe) -> String {
    sets.iter()
        .map(|s| s.format(universe))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_stable(input: &Path, set: Option<&str>) -> Result<ExitCode> {
    let table = load_table(input)?;
    let feasible = parse_feasible(table.universe(), set)?;
    let report = stable_sets(&table, feasible);
    println!(
        "stable: {}; minimal: {}",
        format_sets(&report.stable, table.universe()),
        format_sets(&report.minimal, table.universe())
    );
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    scf: &str,
    axiom: &str,
    voters: u32,
    alts: usize,
    linear: bool,
    mode: SearchMode,
    count: Option<u32>,
    seed: Option<u64>,
) -> Result<ExitCode> {
    let scf = Scf::from_token(scf)?;
    let axiom = AxiomId::from_token(axiom).ok_or_else(|| anyhow!("unknown axiom {axiom:?}"))?;
    if voters == 0 || alts == 0 {
        bail!("--voters and --alts must be positive");
    }
    let spec = match mode {
        SearchMode::Exhaustive => {
            if alts > 5 || voters > 8 {
                bail!("exhaustive mode is limited to --alts <= 5 and --voters <= 8");
            }
            GeneratorSpec::Exhaustive {
                voters,
                alts,
                linear,
            }
        }
        SearchMode::Random => {
            let count = count.ok_or_else(|| anyhow!("random mode requires --count"))?;
            let seed = seed.ok_or_else(|| anyhow!("random mode requires --seed"))?;
            GeneratorSpec::Random {
                count,
                seed,
                voters,
                alts,
                linear,
            }
        }
    };
    match search_counterexample(&scf, axiom, &spec)? {
        None => {
            println!("no counterexample in space");
            Ok(ExitCode::SUCCESS)
        }
        Some((profile, witness)) => {
            print!("{}", profile.format());
            println!(
                "{}: VIOLATED {}",
                witness.axiom.token(),
                witness.describe(profile.universe())
            );
            Ok(ExitCode::from(1))
        }
    }
}

/// Collects PASS/FAIL lines and the overall outcome.
struct Checks {
    all_pass: bool,
}

impl Checks {
    fn new() -> Self {
        Checks { all_pass: true }
    }

    fn check(&mut self, description: &str, ok: bool) {
        println!("{description}: {}", if ok { "PASS" } else { "FAIL" });
        self.all_pass &= ok;
    }

    fn into_exit(self) -> ExitCode {
        if self.all_pass {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        }
    }
}

fn write_fixture(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create directory {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

fn witness_is(
    verdict: &setchoice::Verdict,
    universe: &Universe,
    expected: &[(&str, &str)],
) -> bool {
    match &verdict.witness {
        None => false,
        Some(w) => {
            let rendered: Vec<(String, String)> = w
                .parts
                .iter()
                .map(|(label, part)| {
                    let value = match part {
                        setchoice::axioms::WitnessPart::Set(s) => s.format(universe),
                        setchoice::axioms::WitnessPart::Alt(a) => universe.name(*a).to_string(),
                    };
                    (label.to_string(), value)
                })
                .collect();
            rendered
                == expected
                    .iter()
                    .map(|(l, v)| (l.to_string(), v.to_string()))
                    .collect::<Vec<_>>()
        }
    }
}

fn cmd_repro(name: ReproName, out_dir: &Path) -> Result<ExitCode> {
    let mut checks = Checks::new();
    match name {
        ReproName::Fig1 => {
            let path = write_fixture(out_dir, "fig1.ct", fixtures::FIG1_CT)?;
            let table = load_table(&path)?;
            checks.check(
                "alpha_hat HOLDS",
                check_axiom(&table, AxiomId::AlphaHat).holds,
            );
            checks.check(
                "gamma_hat HOLDS",
                check_axiom(&table, AxiomId::GammaHat).holds,
            );
            checks.check("alpha VIOLATED", !check_axiom(&table, AxiomId::Alpha).holds);
            checks.check("self-stable HOLDS", check_self_stable(&table).holds);
        }
        ReproName::Fig2 => {
            let path = write_fixture(out_dir, "fig2.ct", fixtures::FIG2_CT)?;
            let table = load_table(&path)?;
            let u = table.universe().clone();
            checks.check("rationalizable HOLDS", check_rationalizable(&table).holds);
            let verdict = check_axiom(&table, AxiomId::AlphaHat);
            checks.check(
                "alpha_hat VIOLATED with witness A={a,b,c} B={a,b}",
                witness_is(&verdict, &u, &[("A", "{a,b,c}"), ("B", "{a,b}")]),
            );
            let revealed = revealed_relation_sets(&table);
            let ab = u.parse_set("{a,b}")?;
            let expected = vec![u.parse_set("{a}")?, ab];
            checks.check(
                "both {a} and {a,b} maximal in {a,b}",
                maximal_sets(&revealed, ab) == expected,
            );
        }
        ReproName::GammaTable => {
            let path = write_fixture(out_dir, "gamma_table.ct", fixtures::GAMMA_CT)?;
            let table = load_table(&path)?;
            let u = table.universe().clone();
            checks.check("gamma HOLDS", check_axiom(&table, AxiomId::Gamma).holds);
            let verdict = check_axiom(&table, AxiomId::GammaHat);
            checks.check(
                "gamma_hat VIOLATED with witness A={a,b} B={a,c} X={a}",
                witness_is(
                    &verdict,
                    &u,
                    &[("A", "{a,b}"), ("B", "{a,c}"), ("X", "{a}")],
                ),
            );
        }
        ReproName::Table1 => {
            let path = write_fixture(out_dir, "table1.prof", fixtures::TABLE1_PROF)?;
            let profile = load_profile(&path)?;
            let u = profile.universe().clone();
            let fig1 = ChoiceTable::parse(fixtures::FIG1_CT)?;
            for (pair, winner) in [("{a,b}", "{a}"), ("{b,c}", "{b}"), ("{a,c}", "{c}")] {
                let chosen = may_pairwise(&profile, u.parse_set(pair)?)?;
                checks.check(
                    &format!("majority choice on {pair} is {winner}"),
                    chosen.format(&u) == winner,
                );
            }
            checks.check(
                "no weak Condorcet winner",
                weak_condorcet_winners(&profile, u.full_set())?.is_none(),
            );
            for scf in [
                Scf::Minimax,
                Scf::TopCycle,
                Scf::MinimalCovering,
                Scf::EssentialSet,
            ] {
                let table = induce_table(&scf, &profile, &u)?;
                checks.check(&format!("{scf} induces the fig1 table"), table == fig1);
            }
            let lottery = maximal_lottery(&margins(&profile, u.full_set())?);
            checks.check(
                "maximal lottery is p(a)=1/3 p(b)=1/3 p(c)=1/3",
                lottery.probs() == [ratio(1, 3), ratio(1, 3), ratio(1, 3)],
            );
        }
        ReproName::Table2 => {
            let path = write_fixture(out_dir, "table2.prof", fixtures::TABLE2_PROF)?;
            let profile = load_profile(&path)?;
            let u = profile.universe().clone();
            let full = u.full_set();
            let ab = u.parse_set("{a,b}")?;
            for scf in [
                Scf::Minimax,
                Scf::nanson(),
                Scf::borda(),
                Scf::plurality(),
                Scf::antiplurality(),
            ] {
                let on_full = scf.choose(&profile, full)?;
                let on_pair = scf.choose(&profile, ab)?;
                let verdict = check_axiom(&induce_table(&scf, &profile, &u)?, AxiomId::AlphaHat);
                checks.check(
                    &format!("{scf}: {{a}} from the triple, {{a,b}} from the pair, alpha_hat witness (A={{a,b,c}} B={{a,b}})"),
                    on_full.format(&u) == "{a}"
                        && on_pair == ab
                        && witness_is(&verdict, &u, &[("A", "{a,b,c}"), ("B", "{a,b}")]),
                );
            }
            for (s2_name, s2) in [("0", rat(0)), ("1/2", ratio(1, 2)), ("1", rat(1))] {
                let mut vectors = std::collections::BTreeMap::new();
                vectors.insert(3, ScoreVector::new(vec![rat(1), s2.clone(), rat(0)])?);
                let scores = scoring_scores(&profile, full, &ScoreFamily::Custom(vectors))?;
                let ok = scores[0].1 == rat(3) + rat(2) * s2.clone()
                    && scores[1].1 == rat(2) + s2.clone()
                    && scores[2].1 == rat(1) + rat(3) * s2.clone();
                checks.check(
                    &format!("scores at s2={s2_name} follow 3+2*s2, 2+s2, 1+3*s2"),
                    ok,
                );
            }
            checks.check(
                "gocha picks {a} from the triple but {a,b} from the pair",
                Scf::Gocha.choose(&profile, full)?.format(&u) == "{a}"
                    && Scf::Gocha.choose(&profile, ab)? == ab,
            );
            checks.check(
                "essential set is {a,b}",
                Scf::EssentialSet.choose(&profile, full)?.format(&u) == "{a,b}",
            );
        }
    }
    Ok(checks.into_exit())
}

fn cmd_dot(input: &Path, relation: RelationKind, out: Option<&Path>) -> Result<ExitCode> {
    let table = load_table(input)?;
    let universe = table.universe();
    let dot = match relation {
        RelationKind::RevealedSets => revealed_relation_sets(&table).to_dot(universe),
        RelationKind::BaseSets => base_relation_sets(&table).to_dot(universe),
        RelationKind::RevealedAlts => revealed_relation_alts(&table).to_dot(universe),
        RelationKind::BaseAlts => base_relation_alts(&table).to_dot(universe),
    };
    match out {
        None => print!("{dot}"),
        Some(path) => {
            fs::write(path, dot).with_context(|| format!("cannot write {}", path.display()))?
        }
    }
    Ok(ExitCode::SUCCESS)
}
