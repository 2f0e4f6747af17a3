//! Command line front end. Each subcommand is a thin wrapper over the
//! library: load a file, run one operation, print a text or JSON
//! report. Exit codes: 0 success, 1 usage or input problems, 2 a
//! verification that ran to completion and found deviations over the
//! tolerance.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::Error;
use crate::junction::{CostModel, JunctionTree};
use crate::linkage::{DSepset, LinkageTree};
use crate::potential::Scope;
use crate::propagation::{open_session, CostReport, PairSession};
use crate::tour::{
    brute_force_min_numbering_with_limit, heaviest_terminal_chain, leaf_distances,
    min_weight_open_tour,
};
use crate::workbench::files::{self, ReportFile};
use crate::workbench::{fixtures, gen};

struct Failure(String);

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        Failure(err.to_string())
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure(message.into())
}

type CliResult<T> = std::result::Result<T, Failure>;

#[derive(Parser)]
#[command(
    name = "linkprop",
    version,
    about = "Belief propagation between junction trees through linkage trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Ub1,
    Ub2,
    Ub3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CostModelArg {
    Unit,
    Statespace,
}

impl CostModelArg {
    fn model(self) -> CostModel {
        match self {
            CostModelArg::Unit => CostModel::Unit,
            CostModelArg::Statespace => CostModel::StateSpace,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Plan a minimum weight open tour over a weighted tree file.
    Tour {
        /// Tree document to read.
        tree: PathBuf,
        /// Also run the exhaustive oracle and report whether it agrees.
        #[arg(long)]
        oracle: bool,
        /// Node limit for the oracle.
        #[arg(long, default_value_t = 9)]
        oracle_limit: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run one update variant over a pair file and report its cost.
    Propagate {
        /// Pair document to read.
        pair: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Comma separated one-based linkage order, or "optimal".
        #[arg(long)]
        order: Option<String>,
        /// Edge weighting used when planning the optimal order.
        #[arg(long, value_enum, default_value_t = CostModelArg::Unit)]
        cost_model: CostModelArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run every variant and compare against the exact posterior.
    Verify {
        /// Pair document to read.
        pair: PathBuf,
        /// Largest acceptable absolute deviation.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Also run three seeded random consistent orders per variant.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the cost of every variant on one pair file.
    Bench {
        /// Pair document to read.
        pair: PathBuf,
        /// Edge weighting used when planning the optimal order.
        #[arg(long, value_enum, default_value_t = CostModelArg::Unit)]
        cost_model: CostModelArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Write freshly generated structures to files.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// List or export the built-in fixtures.
    Fixtures {
        #[command(subcommand)]
        what: FixturesCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Random junction tree pair over binary variables.
    Pair {
        #[arg(long, default_value_t = 3)]
        shared: usize,
        #[arg(long, default_value_t = 2)]
        private_a: usize,
        #[arg(long, default_value_t = 2)]
        private_b: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// File to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random weighted tree.
    Tree {
        #[arg(long, default_value_t = 6)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        min_weight: u32,
        #[arg(long, default_value_t = 9)]
        max_weight: u32,
        /// File to write.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum FixturesCommand {
    /// Print the available fixture names.
    List,
    /// Write one built-in fixture to a file.
    Export {
        /// Fixture name, as printed by `fixtures list`.
        name: String,
        /// File to write. Defaults to `<name>.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub(crate) fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            1
        }
    }
}

fn run(command: Command) -> CliResult<i32> {
    match command {
        Command::Tour {
            tree,
            oracle,
            oracle_limit,
            format,
        } => run_tour(&tree, oracle, oracle_limit, format),
        Command::Propagate {
            pair,
            variant,
            order,
            cost_model,
            format,
        } => run_propagate(&pair, variant, order.as_deref(), cost_model.model(), format),
        Command::Verify {
            pair,
            tol,
            seed,
            format,
        } => run_verify(&pair, tol, seed, format),
        Command::Bench {
            pair,
            cost_model,
            format,
        } => run_bench(&pair, cost_model.model(), format),
        Command::Gen { what } => run_gen(what),
        Command::Fixtures { what } => run_fixtures(what),
    }
}

/// Renders whole numbers without a trailing ".0".
fn fmt_num(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

fn fmt_order(order: &[usize]) -> String {
    order
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report values serialize")
    );
}

fn run_tour(path: &Path, oracle: bool, oracle_limit: usize, format: Format) -> CliResult<i32> {
    let tree = files::load_tree(path)?;
    let distances = leaf_distances(&tree);
    let chain = heaviest_terminal_chain(&tree)?;
    let tour = min_weight_open_tour(&tree)?;
    let leaf_rows: Vec<(String, f64)> = distances
        .leaves()
        .iter()
        .map(|leaf| {
            let m = distances.max_distance(leaf).expect("listed leaf");
            (leaf.to_string(), m)
        })
        .collect();
    let oracle_row = if oracle {
        let (_, weight) = brute_force_min_numbering_with_limit(&tree, oracle_limit)?;
        Some((weight, (weight - tour.weight).abs() < 1e-9))
    } else {
        None
    };

    match format {
        Format::Text => {
            println!(
                "tree: {} nodes, {} edges, total weight {}",
                tree.len(),
                tree.edges().len(),
                fmt_num(tree.total_weight())
            );
            let cells: Vec<String> = leaf_rows
                .iter()
                .map(|(leaf, m)| format!("{leaf}={}", fmt_num(*m)))
                .collect();
            println!("leaf max distances: {}", cells.join(" "));
            println!(
                "heaviest terminal chain: {} (weight {})",
                chain.path.join(" "),
                fmt_num(chain.weight)
            );
            println!("open tour: {}", tour.walk.join(" "));
            println!("numbering: {}", tour.numbering.join(" "));
            println!("tour weight: {}", fmt_num(tour.weight));
            if let Some((weight, matches)) = oracle_row {
                let verdict = if matches { "match" } else { "MISMATCH" };
                println!("brute force minimum: {} ({verdict})", fmt_num(weight));
            }
        }
        Format::Json => {
            let mut doc = json!({
                "nodes": tree.len(),
                "total_weight": tree.total_weight(),
                "leaf_max_distances": leaf_rows
                    .iter()
                    .map(|(leaf, m)| (leaf.clone(), json!(m)))
                    .collect::<serde_json::Map<_, _>>(),
                "chain": chain.path,
                "chain_weight": chain.weight,
                "tour": tour.walk,
                "numbering": tour.numbering,
                "weight": tour.weight,
            });
            if let Some((weight, matches)) = oracle_row {
                doc["oracle"] = json!({ "weight": weight, "matches": matches });
            }
            print_json(&doc);
        }
    }
    Ok(0)
}

fn parse_order(text: &str, count: usize) -> CliResult<Vec<usize>> {
    let mut order = Vec::new();
    for part in text.split(',') {
        let trimmed = part.trim();
        let value: usize = trimmed
            .parse()
            .map_err(|_| fail(format!("bad order entry {trimmed:?}, expected an integer")))?;
        if value == 0 || value > count {
            return Err(fail(format!(
                "order entry {value} out of range 1..={count}"
            )));
        }
        order.push(value - 1);
    }
    Ok(order)
}

fn resolve_order(
    session: &PairSession,
    text: Option<&str>,
    model: CostModel,
) -> CliResult<Vec<usize>> {
    match text {
        None => Ok(session.default_order()),
        Some("optimal") => Ok(session.optimal_linkage_order(model)?),
        Some(list) => parse_order(list, session.linkage_count()),
    }
}

fn run_variant(
    session: &mut PairSession,
    variant: VariantArg,
    order: &[usize],
) -> CliResult<CostReport> {
    let report = match variant {
        VariantArg::Ub1 => session.update_belief(order)?,
        VariantArg::Ub2 => session.update_belief2(order)?,
        VariantArg::Ub3 => session.update_belief3(order)?,
    };
    Ok(report)
}

/// Per-variable posterior marginals of the shared variables, read off
/// the calibrated receiving tree.
fn interface_marginals(
    tree: &JunctionTree,
    interface: &DSepset,
) -> CliResult<Vec<(String, Vec<f64>)>> {
    let mut rows = Vec::new();
    for var in interface.vars().vars() {
        let clique = tree
            .clique_ids()
            .find(|id| {
                tree.scope_of(id)
                    .map(|scope| scope.contains(var.id()))
                    .unwrap_or(false)
            })
            .map(str::to_string)
            .ok_or_else(|| fail(format!("no clique carries {}", var.id())))?;
        let single = Scope::new([var.clone()])?;
        let marginal = tree.belief(&clique)?.marginalize(&single)?.normalize()?;
        rows.push((var.id().to_string(), marginal.values().to_vec()));
    }
    Ok(rows)
}

fn run_propagate(
    path: &Path,
    variant: VariantArg,
    order: Option<&str>,
    model: CostModel,
    format: Format,
) -> CliResult<i32> {
    let (a, b, interface) = files::load_pair(path)?;
    let mut session = open_session(a, b, interface)?;
    let order = resolve_order(&session, order, model)?;
    let report = run_variant(&mut session, variant, &order)?;
    let marginals = interface_marginals(session.tree_a(), session.interface())?;
    let row = ReportFile::new(&report, None);

    match format {
        Format::Text => {
            println!("variant: {}", row.variant);
            println!("order: {}", fmt_order(&report.order));
            println!("coordination passes: {}", row.coordination_passes);
            println!("finalization passes: {}", row.finalization_passes);
            println!("payload entries: {}", row.payload_entries);
            println!("weighted cost: {}", fmt_num(row.weighted_cost));
            println!("interface marginals:");
            for (id, values) in &marginals {
                let cells: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
                println!("  {id}: {}", cells.join(" "));
            }
        }
        Format::Json => {
            let mut doc = serde_json::to_value(&row).expect("report rows serialize");
            doc["marginals"] = marginals
                .iter()
                .map(|(id, values)| (id.clone(), json!(values)))
                .collect::<serde_json::Map<_, _>>()
                .into();
            print_json(&doc);
        }
    }
    Ok(0)
}

/// A random order that always absorbs next to an already absorbed
/// linkage, drawn from the linkage tree.
fn random_consistent_order(links: &LinkageTree, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let count = links.count();
    let mut order = vec![rng.gen_range(0..count)];
    let mut placed: BTreeSet<usize> = order.iter().copied().collect();
    while order.len() < count {
        let frontier: Vec<usize> = (0..count)
            .filter(|i| {
                !placed.contains(i)
                    && links
                        .neighbors_of(*i)
                        .expect("index in range")
                        .iter()
                        .any(|n| placed.contains(n))
            })
            .collect();
        let pick = frontier[rng.gen_range(0..frontier.len())];
        order.push(pick);
        placed.insert(pick);
    }
    order
}

fn run_verify(path: &Path, tol: f64, seed: Option<u64>, format: Format) -> CliResult<i32> {
    let (a, b, interface) = files::load_pair(path)?;
    let base = open_session(a, b, interface)?;
    let expected = base.expected_posterior()?;

    let mut orders: Vec<Vec<usize>> = vec![
        base.default_order(),
        base.optimal_linkage_order(CostModel::Unit)?,
    ];
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..3 {
            orders.push(random_consistent_order(base.linkage_tree(), &mut rng));
        }
    }
    orders.dedup();

    let mut rows: Vec<(String, Vec<usize>, f64)> = Vec::new();
    let mut max_deviation = 0.0f64;
    for order in &orders {
        for variant in [VariantArg::Ub1, VariantArg::Ub2, VariantArg::Ub3] {
            let mut session = base.clone();
            let report = run_variant(&mut session, variant, order)?;
            let posterior = session.tree_a().joint_table()?.normalize()?;
            let mut deviation = posterior.max_abs_diff(&expected)?;
            let check = session.tree_a().consistency_check(tol)?;
            deviation = deviation.max(check.max_discrepancy);
            max_deviation = max_deviation.max(deviation);
            rows.push((report.variant.clone(), report.order.clone(), deviation));
        }
    }
    let passed = max_deviation <= tol;

    match format {
        Format::Text => {
            for (variant, order, deviation) in &rows {
                println!("{variant} order {}: deviation {deviation:.3e}", fmt_order(order));
            }
            println!("max deviation: {max_deviation:.3e} (tol {tol:e})");
            println!(
                "{}",
                if passed {
                    "verification passed"
                } else {
                    "verification FAILED"
                }
            );
        }
        Format::Json => {
            let doc = json!({
                "runs": rows
                    .iter()
                    .map(|(variant, order, deviation)| {
                        json!({
                            "variant": variant,
                            "order": order.iter().map(|i| i + 1).collect::<Vec<_>>(),
                            "deviation": deviation,
                        })
                    })
                    .collect::<Vec<_>>(),
                "max_deviation": max_deviation,
                "tol": tol,
                "passed": passed,
            });
            print_json(&doc);
        }
    }
    Ok(if passed { 0 } else { 2 })
}

fn run_bench(path: &Path, model: CostModel, format: Format) -> CliResult<i32> {
    let (a, b, interface) = files::load_pair(path)?;
    let base = open_session(a, b, interface)?;
    let default = base.default_order();
    let optimal = base.optimal_linkage_order(model)?;

    let mut rows: Vec<(ReportFile, bool)> = Vec::new();
    let runs: [(VariantArg, &Vec<usize>, bool); 4] = [
        (VariantArg::Ub1, &default, false),
        (VariantArg::Ub2, &default, false),
        (VariantArg::Ub3, &default, false),
        (VariantArg::Ub3, &optimal, true),
    ];
    for (variant, order, planned) in runs {
        let mut session = base.clone();
        let report = run_variant(&mut session, variant, order)?;
        rows.push((ReportFile::new(&report, None), planned));
    }

    match format {
        Format::Text => {
            println!(
                "{:<8} {:<18} {:>12} {:>12} {:>8} {:>10}",
                "variant", "order", "coordination", "finalization", "payload", "weighted"
            );
            for (row, planned) in &rows {
                let order = row
                    .order
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let order = if *planned {
                    format!("{order} (planned)")
                } else {
                    order
                };
                println!(
                    "{:<8} {:<18} {:>12} {:>12} {:>8} {:>10}",
                    row.variant,
                    order,
                    row.coordination_passes,
                    row.finalization_passes,
                    row.payload_entries,
                    fmt_num(row.weighted_cost)
                );
            }
        }
        Format::Json => {
            let doc = rows
                .iter()
                .map(|(row, _)| serde_json::to_value(row).expect("report rows serialize"))
                .collect::<Vec<_>>();
            print_json(&json!(doc));
        }
    }
    Ok(0)
}

fn run_gen(what: GenCommand) -> CliResult<i32> {
    match what {
        GenCommand::Pair {
            shared,
            private_a,
            private_b,
            seed,
            out,
        } => {
            let (a, b, interface) = gen::gen_pair(shared, private_a, private_b, seed)?;
            files::save_pair(&out, &a, &b, &interface)?;
            println!("wrote {}", out.display());
        }
        GenCommand::Tree {
            nodes,
            seed,
            min_weight,
            max_weight,
            out,
        } => {
            let tree = gen::gen_tree(nodes, seed, min_weight..=max_weight)?;
            files::save_tree(&out, &tree)?;
            println!("wrote {}", out.display());
        }
    }
    Ok(0)
}

fn run_fixtures(what: FixturesCommand) -> CliResult<i32> {
    match what {
        FixturesCommand::List => {
            println!("trees: {}", fixtures::TREE_FIXTURES.join(" "));
            println!("pairs: {}", fixtures::PAIR_FIXTURES.join(" "));
            Ok(0)
        }
        FixturesCommand::Export { name, out } => {
            let out = out.unwrap_or_else(|| PathBuf::from(format!("{name}.json")));
            if let Some(tree) = fixtures::tree_fixture(&name) {
                files::save_tree(&out, &tree)?;
            } else if let Some((a, b, interface)) = fixtures::pair_fixture(&name) {
                files::save_pair(&out, &a, &b, &interface)?;
            } else {
                return Err(fail(format!(
                    "unknown fixture {name:?}; run `linkprop fixtures list` for the names"
                )));
            }
            println!("wrote {}", out.display());
            Ok(0)
        }
    }
}
