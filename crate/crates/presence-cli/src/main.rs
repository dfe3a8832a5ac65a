//! `presence` — load a scenario file and run one engine command over it.
//!
//! ```text
//! presence SCENARIO validate
//! presence SCENARIO check validity|coherence|faithfulness|completeness|s-completeness
//! presence SCENARIO navigate FROM TO
//! presence SCENARIO explicitate FRAGMENT [--budget N]
//! presence SCENARIO project UNIT [--region X,Y,W,H]
//! ```
//!
//! Exit status: 0 when the verdict passes, 1 when it fails (the report
//! then carries at least one witness), 2 on usage or parse errors.
//! Reports go to stdout as text or, with `--report json`, as a JSON
//! document with fixed key order; identical inputs produce byte-identical
//! reports. `PRESENCE_BUDGET` overrides the default explicitation budget;
//! `--budget` overrides both. Setting `PRESENCE_TIMING` appends a timing
//! field (and thereby gives up byte-identity).

mod report;
mod scenario;

use clap::{Parser, Subcommand, ValueEnum};
use presence_core::extension::{
    explicitate, find_path, project, ExplicitationOutcome, ExplicitationTarget, IncoherenceKind,
    IncoherenceReport, IncoherenceWitness, ProvenanceSource, DEFAULT_BUDGET,
};
use presence_core::geom::Rect;
use presence_core::logic::{
    check_coherence_all, check_completeness, check_faithfulness, check_law_of_inference,
    check_s_completeness, PropertyReport, PropertyWitness,
};
use presence_core::presence::{Display as Unfolded, Patch};
use presence_core::universe::Universe;
use report::{Format, Report, Witness};
use scenario::Scenario;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "presence",
    version,
    about = "Run representational-system scenarios: validate, audit, navigate, and unfold them."
)]
struct Cli {
    /// Scenario file to load.
    scenario: PathBuf,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    report: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the scenario and report what it declares.
    Validate,
    /// Audit one property of the loaded system.
    Check {
        #[arg(value_enum)]
        property: CheckKind,
    },
    /// Find the shortest chain of links between two situations.
    Navigate { from: String, to: String },
    /// Unfold a patch until no symbol token remains.
    Explicitate {
        /// Patch id declared in the scenario.
        fragment: String,
        /// Substitution budget; overrides PRESENCE_BUDGET and the default.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Display the images stored under a unit.
    Project {
        unit: String,
        /// Evaluation region X,Y,W,H, required for rule-bearing entries.
        #[arg(long)]
        region: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Validity,
    Coherence,
    Faithfulness,
    Completeness,
    SCompleteness,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&cli.scenario)
        .map_err(|e| format!("cannot read {}: {e}", cli.scenario.display()))?;
    let scenario = scenario::parse_scenario(&text).map_err(|d| d.to_string())?;
    let started = Instant::now();
    let (mut report, failed) = execute(&cli.command, &scenario)?;
    if std::env::var_os("PRESENCE_TIMING").is_some() {
        report.timing_ms = Some(started.elapsed().as_millis());
    }
    print!("{}", report.render(cli.report));
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn execute(command: &Command, scenario: &Scenario) -> Result<(Report, bool), String> {
    match command {
        Command::Validate => Ok(validate(scenario)),
        Command::Check { property } => check(*property, scenario),
        Command::Navigate { from, to } => navigate(scenario, from, to),
        Command::Explicitate { fragment, budget } => unfold(scenario, fragment, *budget),
        Command::Project { unit, region } => project_images(scenario, unit, region.as_deref()),
    }
}

fn validate(scenario: &Scenario) -> (Report, bool) {
    let mut report = Report::new("validate", "valid");
    let system = &scenario.system;
    let worlds = scenario
        .universe
        .as_ref()
        .map_or(0, |u| u.worlds().count());
    report.detail(format!("worlds: {worlds}"));
    report.detail(format!(
        "window: {}x{}",
        system.window().width(),
        system.window().height()
    ));
    report.detail(format!("units: {}", system.units().count()));
    report.detail(format!("patches: {}", scenario.patches.len()));
    report.detail(format!("links: {}", system.links().count()));
    report.detail(format!("situations: {}", system.situations().count()));
    report.detail(format!("objects: {}", system.objects().count()));
    report.detail(format!("laws: {}", system.laws().count()));
    report.detail(format!("queries: {}", scenario.queries.len()));
    (report, false)
}

fn check(kind: CheckKind, scenario: &Scenario) -> Result<(Report, bool), String> {
    let system = &scenario.system;
    match kind {
        CheckKind::Validity => Ok(check_validity(scenario)),
        CheckKind::Coherence => {
            let budget = resolve_budget(None)?;
            let checked = check_coherence_all(system, budget).map_err(|e| e.to_string())?;
            Ok(property_outcome("check coherence", checked, "coherent", "incoherent"))
        }
        CheckKind::Faithfulness => {
            let universe = require_universe(scenario)?;
            let checked = check_faithfulness(system, universe).map_err(|e| e.to_string())?;
            Ok(property_outcome("check faithfulness", checked, "faithful", "unfaithful"))
        }
        CheckKind::Completeness => {
            let universe = require_universe(scenario)?;
            let checked = check_completeness(system, universe).map_err(|e| e.to_string())?;
            Ok(property_outcome("check completeness", checked, "complete", "incomplete"))
        }
        CheckKind::SCompleteness => {
            let universe = require_universe(scenario)?;
            let checked = check_s_completeness(system, universe).map_err(|e| e.to_string())?;
            Ok(property_outcome(
                "check s-completeness",
                checked,
                "symbolically complete",
                "symbolically incomplete",
            ))
        }
    }
}

fn require_universe(scenario: &Scenario) -> Result<&Universe, String> {
    scenario
        .universe
        .as_ref()
        .ok_or_else(|| "this check needs a WORLD section to compare against".to_string())
}

fn check_validity(scenario: &Scenario) -> (Report, bool) {
    let mut report = Report::new("check validity", "valid");
    if scenario.queries.is_empty() {
        report.detail("no queries declared; vacuously valid");
        return (report, false);
    }
    let mut failed = false;
    for (id, form) in &scenario.queries {
        let verdict = check_law_of_inference(&form.premises, &form.conclusion);
        match verdict.counterexample() {
            None => report.detail(format!("{id}: valid")),
            Some(valuation) => {
                failed = true;
                report.witness(
                    Witness::new(format!("{id} fails under a valuation")).with_detail(
                        valuation
                            .iter()
                            .map(|(variable, value)| format!("{variable} = {value}"))
                            .collect(),
                    ),
                );
            }
        }
    }
    if failed {
        report.verdict = "invalid".into();
    }
    (report, failed)
}

fn navigate(scenario: &Scenario, from: &str, to: &str) -> Result<(Report, bool), String> {
    let command = format!("navigate {from} {to}");
    let path = find_path(&scenario.system, &from.into(), &to.into()).map_err(|e| e.to_string())?;
    match path {
        Some(path) => {
            let mut report = Report::new(command, "path found");
            report.detail(format!("route: {}", join(&path.situations, " -> ")));
            report.detail(format!("links: {}", join(&path.links, ", ")));
            for link in &path.ungrounded_links {
                report.detail(format!("ungrounded link: {link} (artificial, no alignment)"));
            }
            Ok((report, false))
        }
        None => {
            let mut report = Report::new(command, "no path");
            report.witness(Witness::new(format!(
                "no chain of links connects `{from}` to `{to}`"
            )));
            Ok((report, true))
        }
    }
}

fn unfold(
    scenario: &Scenario,
    fragment: &str,
    budget_flag: Option<usize>,
) -> Result<(Report, bool), String> {
    let patch = scenario
        .patches
        .get(fragment)
        .ok_or_else(|| format!("unknown patch `{fragment}`"))?;
    let budget = resolve_budget(budget_flag)?;
    let outcome = explicitate(&scenario.system, ExplicitationTarget::Fragment(patch), budget)
        .map_err(|e| e.to_string())?;
    let command = format!("explicitate {fragment}");
    match outcome {
        ExplicitationOutcome::Unfolds(unfolds) => {
            let mut report = Report::new(command, "unfolds");
            report.detail(format!("budget: {budget}"));
            for unfolded in &unfolds {
                for line in display_lines(&unfolded.display) {
                    report.detail(line);
                }
            }
            Ok((report, false))
        }
        ExplicitationOutcome::Incoherent(incoherence) => {
            let mut report = Report::new(command, "incoherent");
            report.detail(format!("budget: {budget}"));
            report.witness(incoherence_witness(fragment, &incoherence));
            Ok((report, true))
        }
    }
}

fn project_images(
    scenario: &Scenario,
    unit: &str,
    region: Option<&str>,
) -> Result<(Report, bool), String> {
    let command = match region {
        Some(region) => format!("project {unit} region={region}"),
        None => format!("project {unit}"),
    };
    let region = region.map(parse_region).transpose()?;
    let images = project(&scenario.system, &unit.into(), region).map_err(|e| e.to_string())?;
    let mut report = Report::new(command, "projected");
    report.detail(format!("images: {}", images.len()));
    for (index, image) in images.iter().enumerate() {
        report.detail(format!("image {}: {}", index + 1, patch_header(image)));
        for line in patch_lines(image) {
            report.detail(line);
        }
    }
    Ok((report, false))
}

fn resolve_budget(flag: Option<usize>) -> Result<usize, String> {
    if let Some(budget) = flag {
        return Ok(budget);
    }
    match std::env::var("PRESENCE_BUDGET") {
        Ok(value) => value
            .trim()
            .parse()
            .map_err(|_| format!("PRESENCE_BUDGET must be a number, got `{value}`")),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_BUDGET),
        Err(e) => Err(format!("PRESENCE_BUDGET: {e}")),
    }
}

fn parse_region(text: &str) -> Result<Rect, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let [x, y, w, h] = parts[..] else {
        return Err(format!("region is X,Y,W,H, got `{text}`"));
    };
    let number = |word: &str| -> Result<i64, String> {
        word.trim()
            .parse()
            .map_err(|_| format!("region is X,Y,W,H, got `{text}`"))
    };
    let (w, h) = (number(w)?, number(h)?);
    if w < 0 || h < 0 {
        return Err(format!("region size cannot be negative in `{text}`"));
    }
    Ok(Rect::new(
        number(x)? as i32,
        number(y)? as i32,
        w as u32,
        h as u32,
    ))
}

fn join<T: std::fmt::Display>(items: &[T], separator: &str) -> String {
    items
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(separator)
}

// --- rendering of engine structures into report lines ---

fn property_outcome(
    command: &str,
    checked: PropertyReport,
    pass: &str,
    fail: &str,
) -> (Report, bool) {
    let mut report = Report::new(command, if checked.passed { pass } else { fail });
    for witness in &checked.witnesses {
        report.witness(property_witness(witness));
    }
    report.skipped = checked.skipped;
    let failed = !checked.passed;
    (report, failed)
}

fn property_witness(witness: &PropertyWitness) -> Witness {
    match witness {
        PropertyWitness::MissingRegion(missing) => Witness::new(format!(
            "region {} of world {} is not reconstructible",
            missing.region, missing.world
        ))
        .with_detail(
            missing
                .missing
                .iter()
                .map(|a| format!("{} {}={} unaccounted for", a.coord, a.attribute, a.value))
                .collect(),
        ),
        PropertyWitness::Unfaithful(unfaithful) => {
            let mut lines = Vec::new();
            if let Some(world) = &unfaithful.world {
                lines.push(format!("world: {world}"));
            }
            for source in &unfaithful.sources {
                lines.push(format!("source: {source}"));
            }
            for cell in &unfaithful.cells {
                lines.push(format!(
                    "{}: stored {}={}, ground {}={}",
                    cell.coord, cell.attribute, cell.stored, cell.attribute, cell.ground
                ));
            }
            lines.push(unfaithful.detail.clone());
            Witness::new(unfaithful.class.to_string()).with_detail(lines)
        }
        PropertyWitness::Incoherence { target, report } => incoherence_witness(target, report),
    }
}

fn incoherence_witness(target: &str, report: &IncoherenceReport) -> Witness {
    let kind = match report.kind {
        IncoherenceKind::Intrinsic => "intrinsic",
        IncoherenceKind::Extrinsic => "extrinsic",
    };
    let mut lines = Vec::new();
    match &report.witness {
        IncoherenceWitness::Cycle { units } => {
            lines.push(format!("substitution cycle: {}", join(units, " -> ")));
        }
        IncoherenceWitness::BudgetExhausted { budget, pending_tokens } => {
            lines.push(format!(
                "budget {budget} exhausted with {pending_tokens} token(s) pending"
            ));
        }
        IncoherenceWitness::Conflict { cells } => {
            for cell in cells {
                lines.push(format!(
                    "[{}] {}: {} vs {}",
                    cell.world, cell.coord, cell.left, cell.right
                ));
            }
        }
        IncoherenceWitness::MissingContent { unit } => {
            lines.push(format!("unit `{unit}` has no semantic content"));
        }
    }
    if !report.cause.is_empty() {
        let causes: Vec<String> = report.cause.iter().map(provenance_label).collect();
        lines.push(format!("implicated: {}", causes.join(", ")));
    }
    Witness::new(format!("{kind} incoherence of {target}")).with_detail(lines)
}

fn provenance_label(source: &ProvenanceSource) -> String {
    match source {
        ProvenanceSource::Input => "the input fragment".to_string(),
        ProvenanceSource::Code(code) => format!("stored code {code}"),
        ProvenanceSource::Rule { unit, rule } => format!("rule {rule} of {unit}"),
    }
}

fn display_lines(display: &Unfolded) -> Vec<String> {
    let mut lines = Vec::new();
    for (tag, cells) in display.branches() {
        lines.push(format!("branch [{tag}]: {} cell(s)", cells.len()));
        for (coord, cell) in cells {
            for (attribute, value) in &cell.content {
                lines.push(format!("  {coord} {attribute}={value}"));
            }
            if let Some(token) = &cell.token {
                lines.push(format!("  {coord} token={token}"));
            }
        }
    }
    lines
}

fn patch_header(patch: &Patch) -> String {
    match patch.anchor() {
        Some(anchor) => format!(
            "{}x{} anchored at {}:{},{}",
            patch.width(),
            patch.height(),
            anchor.world,
            anchor.offset.dx,
            anchor.offset.dy
        ),
        None => format!("{}x{}", patch.width(), patch.height()),
    }
}

fn patch_lines(patch: &Patch) -> Vec<String> {
    let mut lines = Vec::new();
    for (coord, cell) in patch.occupied_cells() {
        for (attribute, value) in &cell.content {
            lines.push(format!("  {coord} {attribute}={value}"));
        }
        if let Some(token) = &cell.token {
            lines.push(format!("  {coord} token={token}"));
        }
    }
    lines
}
