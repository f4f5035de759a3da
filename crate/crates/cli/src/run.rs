use std::fs;
use std::io::Read;
use std::path::Path;
use std::time::Instant;

use sha2::{Digest, Sha256};
use spapprox::certify::{verify_measure, verify_verdict};
use spapprox::constraint::Constraint;
use spapprox::error::Error;
use spapprox::gen::{fixture, random_table, GenSpec, FIXTURE_NAMES, RNG_ALGORITHM};
use spapprox::keysystem::max_g3_decision;
use spapprox::measure::{parse_rational, Measure, MeasureResult, Rational, SearchLimits};
use spapprox::ops::{check, measure, MeasureKind};
use spapprox::oracle::{oracle_check, oracle_g3_with_set, oracle_g5, OracleConfig, OracleG5};
use spapprox::table::{parse_table, Delimited, Table};

use crate::grammar::{parse_constraint, parse_key_system};
use crate::report::{CertificateReport, Report, Status, World};
use crate::{exit, Cli, Command, Input};

/// What a command produced: the report, the text for standard output and
/// the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub stdout: String,
    pub exit: i32,
}

enum Fail {
    Exhausted(String),
    Error(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Exhausted { .. } | Error::SizeGuard { .. } => Fail::Exhausted(e.to_string()),
            _ => Fail::Error(e.to_string()),
        }
    }
}

type Run<T> = Result<T, Fail>;

pub fn execute(cli: &Cli) -> Outcome {
    let started = Instant::now();
    let limits = SearchLimits {
        node_cap: cli.node_cap,
    };
    let (name, result) = match &cli.command {
        Command::Check { input, constraint } => (
            "check",
            Ctx::new(input, "check").and_then(|mut c| {
                let code = c.check(constraint, limits);
                c.finish(code)
            }),
        ),
        Command::Measure {
            input,
            constraint,
            kind,
            bound,
        } => (
            "measure",
            Ctx::new(input, "measure").and_then(|mut c| {
                let code = c.measure(constraint, kind, bound.as_deref(), limits);
                c.finish(code)
            }),
        ),
        Command::Maxg3 { input, keys } => (
            "maxg3",
            Ctx::new(input, "maxg3").and_then(|mut c| {
                let code = c.maxg3(keys, limits);
                c.finish(code)
            }),
        ),
        Command::Oracle {
            input,
            constraint,
            kind,
            bound,
        } => (
            "oracle",
            Ctx::new(input, "oracle").and_then(|mut c| {
                let mut config = OracleConfig::default();
                if let Some(cap) = cli.node_cap {
                    config.node_cap = cap;
                }
                let code = c.oracle(constraint, kind.as_deref(), bound.as_deref(), &config);
                c.finish(code)
            }),
        ),
        Command::Gen {
            seed,
            rows,
            columns,
            symbols,
            null_rate,
            duplicate_rate,
            fixture: name,
            null_token,
            delimiter,
        } => {
            let spec = GenSpec {
                seed: *seed,
                rows: *rows,
                columns: *columns,
                symbols: *symbols,
                null_rate: *null_rate,
                duplicate_rate: *duplicate_rate,
            };
            ("gen", gen(&spec, name.as_deref(), null_token, *delimiter))
        }
    };
    let mut outcome = result.unwrap_or_else(|failed| {
        let (mut report, fail) = *failed;
        let (status, code, msg) = match fail {
            Fail::Exhausted(m) => (Status::Exhausted, exit::EXHAUSTED, m),
            Fail::Error(m) => (Status::Error, exit::ERROR, m),
        };
        report.status = status;
        report.message = Some(msg);
        report.command = name.to_string();
        Outcome {
            stdout: String::new(),
            report,
            exit: code,
        }
    });
    outcome.report.elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    if outcome.stdout.is_empty() {
        outcome.stdout = outcome.report.render();
    }
    outcome
}

/// A failed command keeps the report built so far.
type Done = Result<Outcome, Box<(Report, Fail)>>;

struct Ctx {
    report: Report,
    table: Table,
}

fn read_input(path: &Path) -> std::io::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        fs::read(path)
    }
}

fn parse_bound(text: Option<&str>) -> Run<Option<Rational>> {
    text.map(|b| {
        parse_rational(b).ok_or_else(|| Fail::Error(format!("bound `{b}` is not of the form p/q")))
    })
    .transpose()
}

impl Ctx {
    fn new(input: &Input, command: &str) -> Result<Self, Box<(Report, Fail)>> {
        let mut report = Report::new(command);
        let bytes = match read_input(&input.input) {
            Ok(b) => b,
            Err(e) => {
                let msg = format!("cannot read {}: {e}", input.input.display());
                return Err(Box::new((report, Fail::Error(msg))));
            }
        };
        report.input_digest = Some(format!("sha256:{}", hex::encode(Sha256::digest(&bytes))));
        let parsed = String::from_utf8(bytes)
            .map_err(|e| Fail::Error(format!("input is not UTF-8: {e}")))
            .and_then(|text| {
                let opts = Delimited {
                    delimiter: input.delimiter,
                    null_token: input.null_token.clone(),
                    has_header: !input.no_header,
                };
                parse_table(&text, &opts).map_err(Fail::from)
            });
        match parsed {
            Ok(table) => Ok(Ctx { report, table }),
            Err(f) => Err(Box::new((report, f))),
        }
    }

    fn finish(self, code: Run<i32>) -> Done {
        match code {
            Ok(exit) => Ok(Outcome {
                report: self.report,
                stdout: String::new(),
                exit,
            }),
            Err(f) => Err(Box::new((self.report, f))),
        }
    }

    fn constraint(&mut self, text: &str) -> Run<Constraint> {
        let c = parse_constraint(self.table.schema(), text)?;
        self.report.constraint = Some(c.describe(self.table.schema()));
        Ok(c)
    }

    fn check(&mut self, text: &str, limits: SearchLimits) -> Run<i32> {
        let c = self.constraint(text)?;
        let verdict = check(&self.table, &c, limits)?;
        verify_verdict(&self.table, &c, &verdict)?;
        self.report.holds = Some(verdict.holds);
        self.report.certificate = verdict.witness.as_ref().map(|w| CertificateReport::World {
            world: World::new(self.table.schema(), w),
        });
        self.report.warnings = verdict.warnings.iter().map(ToString::to_string).collect();
        Ok(if verdict.holds { exit::YES } else { exit::NO })
    }

    /// Records the value and, with a bound, the decision; returns the exit code.
    fn conclude(&mut self, value: &Measure, bound: Option<Rational>) -> i32 {
        match value {
            Measure::Exact(v) => self.report.value = Some((*v).into()),
            Measure::Undefined => self.report.status = Status::Undefined,
        }
        match bound {
            Some(b) => {
                let within = value.within(&b);
                self.report.bound = Some(b.into());
                self.report.within_bound = Some(within);
                if within {
                    exit::YES
                } else {
                    exit::NO
                }
            }
            None if value.exact().is_some() => exit::YES,
            None => exit::NO,
        }
    }

    fn measure(
        &mut self,
        text: &str,
        kind: &str,
        bound: Option<&str>,
        limits: SearchLimits,
    ) -> Run<i32> {
        let c = self.constraint(text)?;
        let kind: MeasureKind = kind.parse()?;
        self.report.measure = Some(kind.to_string());
        let bound = parse_bound(bound)?;
        let result = measure(&self.table, &c, kind, limits)?;
        verify_measure(&self.table, &c, kind, &result)?;
        self.record(&result);
        Ok(self.conclude(&result.value, bound))
    }

    fn record(&mut self, result: &MeasureResult) {
        self.report.certificate =
            CertificateReport::from_certificate(self.table.schema(), &result.certificate);
        self.report.warnings = result.warnings.iter().map(ToString::to_string).collect();
    }

    fn maxg3(&mut self, keys: &str, limits: SearchLimits) -> Run<i32> {
        let system = parse_key_system(self.table.schema(), keys)?;
        let c = Constraint::Keys(system.clone());
        self.report.constraint = Some(c.describe(self.table.schema()));
        self.report.measure = Some(MeasureKind::G3.to_string());
        let d = max_g3_decision(&self.table, &system, limits)?;
        verify_measure(&self.table, &c, MeasureKind::G3, &d.system)?;
        self.record(&d.system);
        self.conclude(&d.system.value, None);
        self.report.per_key = d.per_key.iter().map(|&g| g.into()).collect();
        self.report.holds = Some(d.holds);
        Ok(if d.holds { exit::YES } else { exit::NO })
    }

    fn oracle(
        &mut self,
        text: &str,
        kind: Option<&str>,
        bound: Option<&str>,
        config: &OracleConfig,
    ) -> Run<i32> {
        let c = self.constraint(text)?;
        let bound = parse_bound(bound)?;
        let Some(kind) = kind else {
            let holds = oracle_check(&self.table, &c, config)?;
            self.report.holds = Some(holds);
            return Ok(if holds { exit::YES } else { exit::NO });
        };
        let kind: MeasureKind = kind.parse()?;
        self.report.measure = Some(kind.to_string());
        let value = match kind {
            MeasureKind::G3 => {
                let (v, removed) = oracle_g3_with_set(&self.table, &c, config)?;
                self.report.certificate = Some(CertificateReport::Removal { removed, world: None });
                Measure::Exact(v)
            }
            MeasureKind::G5 => match oracle_g5(&self.table, &c, config)? {
                OracleG5::Exact(v) => Measure::Exact(v),
                OracleG5::Undefined { searched_to } => {
                    self.report.notes.push(format!(
                        "no addition of up to {searched_to} rows works, and two rows clash in every extension"
                    ));
                    Measure::Undefined
                }
                OracleG5::Inconclusive { no_solution_below } => {
                    return Err(Fail::Exhausted(format!(
                        "candidate additions outgrew the cap; none of fewer than {no_solution_below} rows works"
                    )))
                }
                OracleG5::Unrepaired { bound } => {
                    return Err(Fail::Error(format!(
                        "no addition of up to {bound} rows works, yet no pair of rows is forced to clash"
                    )))
                }
            },
        };
        Ok(self.conclude(&value, bound))
    }
}

fn gen(spec: &GenSpec, name: Option<&str>, null_token: &str, delimiter: u8) -> Done {
    let mut report = Report::new("gen");
    let table = match name {
        Some(n) => fixture(n).ok_or_else(|| {
            Fail::Error(format!(
                "unknown example `{n}`; choose one of {}",
                FIXTURE_NAMES.join(", ")
            ))
        }),
        None => {
            report.notes.push(format!("rng: {RNG_ALGORITHM}"));
            report.notes.push(format!("spec: {spec:?}"));
            random_table(spec).map_err(Fail::from)
        }
    };
    let opts = Delimited {
        delimiter,
        null_token: null_token.to_string(),
        has_header: true,
    };
    match table.and_then(|t| t.to_delimited(&opts).map_err(Fail::from)) {
        Ok(text) => Ok(Outcome {
            report,
            stdout: text,
            exit: exit::YES,
        }),
        Err(f) => Err(Box::new((report, f))),
    }
}
