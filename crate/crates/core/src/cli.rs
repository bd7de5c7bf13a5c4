//! The command layer behind the `qtl` binary.
//!
//! [`run`] parses arguments, executes one subcommand and returns the exit
//! code together with everything destined for stdout and stderr, so the
//! binary stays a thin wrapper and tests can drive commands in-process.
//!
//! | command    | exit codes |
//! |------------|------------|
//! | `eval`     | 0 satisfied, 1 not satisfied, 2 input error, 3 support error |
//! | `decide`   | 0 valid, 1 satisfiable-not-valid, 2 unsatisfiable, 3 input error, 4 resource cap, 5 internal error |
//! | `table`    | 0 ok, 2 input error or cover not dominated |
//! | `team`     | 0 ok, 2 input error |
//! | `classify` | 0 ok, 2 input error |
//! | `bell`     | 0 ok, 2 input error |
//!
//! Usage errors exit 2, or 3 for `decide`. Every number is printed as an
//! exact `p/q`. `--json` replaces the text report by one JSON object with
//! the same fields.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::contextuality::{self, ContextualityError};
use crate::decide::{self, DecideError, Limits, Logic};
use crate::logic::{self, parse_formula_file, parse_prop_list, LogicError, QtlFormula};
use crate::team::{team_from_table, Cover, ProbabilityTable, QuantumTeam, TeamError};
use crate::Rational;

#[derive(Parser, Debug)]
#[command(name = "qtl", version, about = "Quantum and probabilistic team logic")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a formula on a team.
    Eval {
        team: PathBuf,
        formula: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide validity and satisfiability of a formula.
    Decide {
        formula: PathBuf,
        #[arg(long, default_value = "qtl")]
        logic: Logic,
        /// Write a team satisfying the formula here.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Write a team satisfying the negated formula here.
        #[arg(long)]
        counter_witness: Option<PathBuf>,
        #[arg(long)]
        max_atoms: Option<usize>,
        #[arg(long)]
        max_fm_rows: Option<usize>,
        #[arg(long)]
        max_team_rows: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Associated probability table of a team for a cover.
    Table {
        team: PathBuf,
        /// `{p0,p1};{p0,p3}` or a file holding it.
        cover: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// A quantum team whose associated table is the given one.
    Team {
        table: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Non-contextual, contextual or strongly contextual.
    Classify {
        table: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Logical Bell inequality of a formula list and its violation by a table.
    Bell {
        formulas: PathBuf,
        table: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// What a command run produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

enum Field {
    Text(String),
    Block(String),
    Values(Vec<(String, Rational)>),
}

/// Ordered report fields, rendered as `key: value` text or a JSON object.
#[derive(Default)]
struct Report(Vec<(&'static str, Field)>);

impl Report {
    fn text(&mut self, key: &'static str, value: impl ToString) {
        self.0.push((key, Field::Text(value.to_string())));
    }

    fn block(&mut self, key: &'static str, value: impl ToString) {
        self.0.push((key, Field::Block(value.to_string())));
    }

    fn values(&mut self, key: &'static str, values: Vec<(String, Rational)>) {
        self.0.push((key, Field::Values(values)));
    }

    fn render(&self, json: bool) -> String {
        if json {
            let mut out = serde_json::to_string_pretty(self).expect("report serializes");
            out.push('\n');
            return out;
        }
        let mut out = String::new();
        for (key, field) in &self.0 {
            match field {
                Field::Text(v) => writeln!(out, "{key}: {v}").unwrap(),
                Field::Block(v) => {
                    writeln!(out, "{key}:").unwrap();
                    for line in v.lines() {
                        writeln!(out, "  {line}").unwrap();
                    }
                }
                Field::Values(vs) => {
                    writeln!(out, "{key}:").unwrap();
                    for (name, v) in vs {
                        writeln!(out, "  {name} = {v}").unwrap();
                    }
                }
            }
        }
        out
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (key, field) in &self.0 {
            match field {
                Field::Text(v) | Field::Block(v) => map.serialize_entry(key, v)?,
                Field::Values(vs) => {
                    let entries: Vec<serde_json::Value> = vs
                        .iter()
                        .map(|(name, v)| serde_json::json!({ "name": name, "value": v.to_string() }))
                        .collect();
                    map.serialize_entry(key, &entries)?;
                }
            }
        }
        map.end()
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_team(path: &Path) -> Result<QuantumTeam, String> {
    read(path)?
        .parse()
        .map_err(|e: TeamError| format!("{}: {e}", path.display()))
}

fn read_table(path: &Path) -> Result<ProbabilityTable, String> {
    read(path)?
        .parse()
        .map_err(|e: TeamError| format!("{}: {e}", path.display()))
}

fn read_formula(path: &Path) -> Result<QtlFormula, String> {
    parse_formula_file(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn component_table(team: &QuantumTeam, formula: &QtlFormula) -> Result<Vec<(String, Rational)>, LogicError> {
    Ok(logic::component_values(team, formula)?
        .into_iter()
        .map(|(c, v)| (c.to_string(), v))
        .collect())
}

/// Runs one command line, `args[0]` being the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let parsed = match Args::try_parse_from(&args) {
        Ok(a) => a,
        Err(e) => {
            let text = e.render().to_string();
            if !e.use_stderr() {
                return Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                };
            }
            let code = if args.get(1).is_some_and(|a| a == "decide") { 3 } else { 2 };
            return Outcome {
                code,
                stdout: String::new(),
                stderr: text,
            };
        }
    };
    match parsed.command {
        Command::Eval { team, formula, json } => eval(&team, &formula, json),
        Command::Decide {
            formula,
            logic,
            witness,
            counter_witness,
            max_atoms,
            max_fm_rows,
            max_team_rows,
            json,
        } => {
            let defaults = Limits::default();
            let limits = Limits {
                max_atoms: max_atoms.unwrap_or(defaults.max_atoms),
                max_fm_rows: max_fm_rows.unwrap_or(defaults.max_fm_rows),
                max_team_rows: max_team_rows.unwrap_or(defaults.max_team_rows),
                ..defaults
            };
            run_decide(
                &formula,
                logic,
                &limits,
                witness.as_deref(),
                counter_witness.as_deref(),
                json,
            )
        }
        Command::Table {
            team,
            cover,
            output,
            json,
        } => table(&team, &cover, output.as_deref(), json),
        Command::Team { table, output, json } => team(&table, output.as_deref(), json),
        Command::Classify { table, json } => classify(&table, json),
        Command::Bell { formulas, table, json } => bell(&formulas, &table, json),
    }
}

fn eval(team_path: &Path, formula_path: &Path, json: bool) -> Outcome {
    let loaded = read_team(team_path).and_then(|t| Ok((t, read_formula(formula_path)?)));
    let (team, formula) = match loaded {
        Ok(x) => x,
        Err(e) => return Outcome::failure(2, e),
    };
    let verdict = match logic::satisfies(&team, &formula) {
        Ok(v) => v,
        Err(e @ LogicError::SupportNotDominated(_)) => return Outcome::failure(3, e),
        Err(e) => return Outcome::failure(2, e),
    };
    let values = match component_table(&team, &formula) {
        Ok(v) => v,
        Err(e) => return Outcome::failure(2, e),
    };
    let mut report = Report::default();
    report.text("formula", &formula);
    report.text("verdict", if verdict { "satisfied" } else { "not-satisfied" });
    report.values("components", values);
    Outcome {
        code: if verdict { 0 } else { 1 },
        stdout: report.render(json),
        stderr: String::new(),
    }
}

fn run_decide(
    formula_path: &Path,
    logic: Logic,
    limits: &Limits,
    witness_path: Option<&Path>,
    counter_path: Option<&Path>,
    json: bool,
) -> Outcome {
    let formula = match read_formula(formula_path) {
        Ok(f) => f,
        Err(e) => return Outcome::failure(3, e),
    };
    let decision = match decide::decide(&formula, logic, limits) {
        Ok(d) => d,
        Err(e @ DecideError::ResourceCap { .. }) => return Outcome::failure(4, e),
        Err(e @ DecideError::Logic(_)) => return Outcome::failure(3, e),
        Err(e @ DecideError::InternalInvariant(_)) => return Outcome::failure(5, e),
    };
    let negated = formula.clone().not();
    let mut report = Report::default();
    report.text("logic", if logic == Logic::Ptl { "ptl" } else { "qtl" });
    report.text("formula", &formula);
    report.text("verdict", decision.verdict);
    report.text("assignments_tried", decision.stats.assignments_tried);
    report.text("fm_eliminations", decision.stats.fm_eliminations);
    let sides = [
        ("witness", "witness_components", &decision.witness, &formula, witness_path),
        (
            "counter_witness",
            "counter_witness_components",
            &decision.counter_witness,
            &negated,
            counter_path,
        ),
    ];
    for (key, values_key, team, target, path) in sides {
        let Some(team) = team else { continue };
        let text = team.to_string();
        if let Some(path) = path {
            if let Err(e) = write(path, &text) {
                return Outcome::failure(3, e);
            }
        }
        report.block(key, &text);
        match component_table(team, target) {
            Ok(v) => report.values(values_key, v),
            Err(e) => return Outcome::failure(5, e),
        }
    }
    let code = match decision.verdict {
        decide::Verdict::Valid => 0,
        decide::Verdict::Satisfiable => 1,
        decide::Verdict::Unsatisfiable => 2,
    };
    Outcome {
        code,
        stdout: report.render(json),
        stderr: String::new(),
    }
}

fn parse_cover(spec: &str) -> Result<Cover, String> {
    let path = Path::new(spec);
    let text = if path.is_file() { read(path)? } else { spec.to_string() };
    text.parse().map_err(|e: TeamError| format!("cover: {e}"))
}

fn emit(key: &'static str, text: String, output: Option<&Path>, json: bool) -> Outcome {
    if let Some(path) = output {
        if let Err(e) = write(path, &text) {
            return Outcome::failure(2, e);
        }
    }
    let stdout = if json {
        let mut report = Report::default();
        report.block(key, &text);
        report.render(true)
    } else if output.is_some() {
        String::new()
    } else {
        text
    };
    Outcome {
        code: 0,
        stdout,
        stderr: String::new(),
    }
}

fn table(team_path: &Path, cover_spec: &str, output: Option<&Path>, json: bool) -> Outcome {
    let result = read_team(team_path).and_then(|team| {
        let cover = parse_cover(cover_spec)?;
        team.associated_table(&cover.base(), &cover).map_err(|e| e.to_string())
    });
    match result {
        Ok(t) => emit("table", t.to_string(), output, json),
        Err(e) => Outcome::failure(2, e),
    }
}

fn team(table_path: &Path, output: Option<&Path>, json: bool) -> Outcome {
    match read_table(table_path) {
        Ok(t) => emit("team", team_from_table(&t).to_string(), output, json),
        Err(e) => Outcome::failure(2, e),
    }
}

fn classification_report(table: &ProbabilityTable) -> Result<Report, ContextualityError> {
    let c = contextuality::classify(table)?;
    let mut report = Report::default();
    report.text("class", c.class);
    if let Some(section) = c.global_section {
        let values = section
            .positive()
            .map(|(s, p)| (s.to_string(), p.clone()))
            .collect();
        report.values("global_section", values);
    }
    Ok(report)
}

fn classify(table_path: &Path, json: bool) -> Outcome {
    let result = read_table(table_path)
        .and_then(|t| classification_report(&t).map_err(|e| e.to_string()));
    match result {
        Ok(report) => Outcome {
            code: 0,
            stdout: report.render(json),
            stderr: String::new(),
        },
        Err(e) => Outcome::failure(2, e),
    }
}

fn bell(formulas_path: &Path, table_path: &Path, json: bool) -> Outcome {
    let result = (|| -> Result<Report, String> {
        let formulas = parse_prop_list(&read(formulas_path)?)
            .map_err(|e| format!("{}: {e}", formulas_path.display()))?;
        let table = read_table(table_path)?;
        let inequality = contextuality::derive_bell(&formulas).map_err(|e| e.to_string())?;
        let mut expectations = Vec::new();
        for f in &formulas {
            let v = contextuality::table_expectation(&table, f).map_err(|e| e.to_string())?;
            expectations.push((f.to_string(), v));
        }
        let violation = contextuality::violation(&table, &formulas).map_err(|e| e.to_string())?;
        let mut report = classification_report(&table).map_err(|e| e.to_string())?;
        report.text("inequality", inequality);
        report.values("expectations", expectations);
        report.text("violation", violation);
        Ok(report)
    })();
    match result {
        Ok(report) => Outcome {
            code: 0,
            stdout: report.render(json),
            stderr: String::new(),
        },
        Err(e) => Outcome::failure(2, e),
    }
}
