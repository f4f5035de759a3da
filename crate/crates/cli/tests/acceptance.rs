//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria are red by analysis rather than by bug and are listed in
//! `EXPECTED_RED` with the reason. The run fails on any other red line, and
//! says so when an expected-red criterion turns green.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use clap::Parser;
use spapprox::certify::{verify_measure, verify_verdict};
use spapprox::constraint::{Constraint, FdConstraint, KeySystem};
use spapprox::gen::{fixture, random_table, sweep_instance, GenSpec};
use spapprox::keysystem::{g3_spkey_system, max_g3_decision};
use spapprox::matching::max_matching;
use spapprox::measure::{format_rational, ratio, Certificate, Measure, Rational, SearchLimits};
use spapprox::ops::{check, measure, MeasureKind};
use spapprox::oracle::{oracle_check, oracle_g3, oracle_g5, OracleConfig, OracleG5};
use spapprox::spkey::{analyze, build_full_graph, check_spkey, g3_spkey};
use spapprox::table::{AttrSet, Delimited, Table};
use spapprox_cli::{execute, exit, Cli};

const SWEEP_SEEDS: u64 = 540;
const BOUNDS: [(u64, u64); 4] = [(0, 1), (1, 4), (1, 2), (3, 4)];
const LIM: SearchLimits = SearchLimits { node_cap: None };

const EXPECTED_RED: [(u32, &str); 2] = [
    (
        1,
        "the Cars FD needs only one removal: dropping the V8 (or V6) row lets the remaining \
         Ford row take DoorNo = 4 doors, so g3 = 1/4, not 1/2",
    ),
    (
        4,
        "g3 >= g5 fails on degenerate tables: a lone (NULL,NULL) row has no world, so g3 = 1, \
         while a key needs two fresh tuples before that row can be imputed, so g5 = 2",
    ),
];

#[derive(Default)]
struct Line {
    failures: Vec<String>,
    checked: usize,
    note: String,
}

impl Line {
    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn key(t: &Table, names: &[&str]) -> AttrSet {
    t.schema().attr_set(names).unwrap()
}

fn value(t: &Table, c: &Constraint, kind: MeasureKind) -> Measure {
    measure(t, c, kind, LIM).unwrap().value
}

fn exact(r: Rational) -> Measure {
    Measure::Exact(r)
}

fn timed<T>(line: &mut Line, label: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    line.expect(took < Duration::from_secs(1), || {
        format!("{label} took {took:?}")
    });
    out
}

fn criterion_golden() -> Line {
    let mut line = Line::default();
    let t2 = fixture("table2").unwrap();
    let k = Constraint::Key(key(&t2, &["X1", "X2"]));
    let g3 = timed(&mut line, "table2 g3", || value(&t2, &k, MeasureKind::G3));
    line.expect(g3 == exact(ratio(1, 2)), || format!("table2 g3 = {g3}"));
    let g5 = timed(&mut line, "table2 g5", || {
        measure(&t2, &k, MeasureKind::G5, LIM).unwrap()
    });
    line.expect(g5.value == exact(ratio(1, 4)), || {
        format!("table2 g5 = {}", g5.value)
    });
    line.expect(!check(&t2, &k, LIM).unwrap().holds, || {
        "table2 satisfies the key".into()
    });
    if let Certificate::Addition { added, .. } = &g5.certificate {
        let extended = t2.with_appended(added).unwrap();
        line.expect(check(&extended, &k, LIM).unwrap().holds, || {
            "table2 plus one fresh row fails".into()
        });
    }
    let t4 = fixture("table4").unwrap();
    line.expect(check(&t4, &k, LIM).unwrap().holds, || {
        "table4 violates the key".into()
    });

    let cars = fixture("cars").unwrap();
    let ck = Constraint::Key(key(&cars, &["Car_Model", "DoorNo"]));
    for (kind, want) in [
        (MeasureKind::G3, ratio(1, 2)),
        (MeasureKind::G5, ratio(1, 4)),
    ] {
        let got = timed(&mut line, "cars key", || value(&cars, &ck, kind));
        line.expect(got == exact(want), || format!("cars key {kind} = {got}"));
    }
    let fd = Constraint::Fd(
        FdConstraint::parse(cars.schema(), &["Car_Model", "DoorNo"], &["Engine_Type"]).unwrap(),
    );
    line.expect(!check(&cars, &fd, LIM).unwrap().holds, || {
        "cars satisfies the FD".into()
    });
    for (kind, want) in [
        (MeasureKind::G3, ratio(1, 2)),
        (MeasureKind::G5, ratio(1, 4)),
    ] {
        let got = timed(&mut line, "cars FD", || value(&cars, &fd, kind));
        line.expect(got == exact(want), || {
            format!("cars FD {kind} = {got}, stated {}", format_rational(&want))
        });
    }

    let ks = fixture("keysystem").unwrap();
    let k1 = key(&ks, &["A1", "A2"]);
    let k2 = key(&ks, &["A2", "A3"]);
    for k in [&k1, &k2] {
        let got = timed(&mut line, "keysystem key", || {
            g3_spkey(&ks, k).unwrap().value
        });
        line.expect(got == exact(ratio(1, 4)), || {
            format!("keysystem key g3 = {got}")
        });
    }
    let system = KeySystem::new(vec![k1, k2]).unwrap();
    let sys = timed(&mut line, "system g3", || {
        g3_spkey_system(&ks, &system, LIM).unwrap().value
    });
    let oracle = oracle_g3(
        &ks,
        &Constraint::Keys(system.clone()),
        &OracleConfig::default(),
    )
    .unwrap();
    line.expect(sys == exact(ratio(1, 2)) && sys == exact(oracle), || {
        format!("system g3 = {sys}, oracle {}", format_rational(&oracle))
    });
    let d = timed(&mut line, "max-g3", || {
        max_g3_decision(&ks, &system, LIM).unwrap()
    });
    line.expect(!d.holds, || "max-g3 decision holds".into());
    line
}

/// A table with its key and FD constraints and their exact g3 and g5.
type Decided = (Table, Vec<(Constraint, Measure, Measure)>);

/// Everything the sweep criteria need from one instance.
struct Sweep {
    agreement: Line,
    pruning: Line,
    inequality: Line,
    certificates: Line,
    elapsed: Duration,
    decided: Vec<Decided>,
}

fn agree_g5(oracle: OracleG5, fast: &Measure) -> Result<(), String> {
    match (oracle, fast) {
        (OracleG5::Exact(a), Measure::Exact(b)) if a == *b => Ok(()),
        (OracleG5::Undefined { .. }, Measure::Undefined) => Ok(()),
        (o, f) => Err(format!("oracle {o:?}, fast {f}")),
    }
}

fn certified(line: &mut Line, t: &Table, c: &Constraint, kind: MeasureKind, what: &str) -> Measure {
    let r = measure(t, c, kind, LIM).unwrap();
    let ok = verify_measure(t, c, kind, &r).is_ok()
        && match &r.certificate {
            Certificate::Addition { added, .. } => {
                check(&t.with_appended(added).unwrap(), c, LIM)
                    .unwrap()
                    .holds
            }
            _ => true,
        };
    line.expect(ok, || format!("{what} {kind}: certificate rejected"));
    r.value
}

fn sweep() -> Sweep {
    let config = OracleConfig::default();
    let mut s = Sweep {
        agreement: Line::default(),
        pruning: Line::default(),
        inequality: Line::default(),
        certificates: Line::default(),
        elapsed: Duration::ZERO,
        decided: Vec::new(),
    };
    let mut nondegenerate = 0;
    let start = Instant::now();
    for seed in 0..SWEEP_SEEDS {
        let inst = sweep_instance(seed);
        let t = inst.table;
        let mut decided = Vec::new();
        let singles = inst
            .keys
            .iter()
            .cloned()
            .map(Constraint::Key)
            .chain(inst.fds.iter().cloned().map(Constraint::Fd));
        for c in singles {
            let what = format!("seed {seed} {}", c.describe(t.schema()));
            let verdict = check(&t, &c, LIM).unwrap();
            s.certificates
                .expect(verify_verdict(&t, &c, &verdict).is_ok(), || {
                    format!("{what}: witness rejected")
                });
            let g3 = certified(&mut s.certificates, &t, &c, MeasureKind::G3, &what);
            let g5 = certified(&mut s.certificates, &t, &c, MeasureKind::G5, &what);

            let a = &mut s.agreement;
            let oc = oracle_check(&t, &c, &config).unwrap();
            a.expect(oc == verdict.holds, || {
                format!("{what}: check {} vs oracle {oc}", verdict.holds)
            });
            let o3 = oracle_g3(&t, &c, &config).unwrap();
            a.expect(g3 == exact(o3), || {
                format!("{what}: g3 {g3} vs oracle {}", format_rational(&o3))
            });
            let o5 = agree_g5(oracle_g5(&t, &c, &config).unwrap(), &g5);
            a.expect(o5.is_ok(), || format!("{what}: g5 {}", o5.unwrap_err()));

            let strict = match &c {
                Constraint::Key(k) => k.len() >= 2,
                _ => true,
            };
            if let (true, Measure::Exact(a3), Measure::Exact(a5)) = (strict, &g3, &g5) {
                s.inequality.expect(a3 >= a5, || {
                    format!(
                        "{what}: g3 {} < g5 {}\n{t}",
                        format_rational(a3),
                        format_rational(a5)
                    )
                });
                let empty_domain = c
                    .attrs()
                    .iter()
                    .any(|p| t.tuples().iter().all(|r| r.get(p).is_null()));
                if a3 < a5 && !empty_domain {
                    nondegenerate += 1;
                }
            }

            if let Constraint::Key(k) = &c {
                let an = analyze(&t, k).unwrap();
                let full = max_matching(&build_full_graph(&t, k, 1 << 20).unwrap()).size;
                let pruned = an.nu_pruned + (an.rows - an.cut);
                s.pruning.expect(pruned == full, || {
                    format!("{what}: pruned {pruned}, full {full}")
                });
                s.agreement
                    .expect(verdict.holds == check_spkey(&t, k).unwrap().holds, || {
                        format!("{what}: dispatch and direct check differ")
                    });
            }
            decided.push((c, g3, g5));
        }
        for system in &inst.systems {
            let c = Constraint::Keys(system.clone());
            let what = format!("seed {seed} {}", c.describe(t.schema()));
            let verdict = check(&t, &c, LIM).unwrap();
            s.certificates
                .expect(verify_verdict(&t, &c, &verdict).is_ok(), || {
                    format!("{what}: witness rejected")
                });
            let oc = oracle_check(&t, &c, &config).unwrap();
            s.agreement.expect(oc == verdict.holds, || {
                format!("{what}: check {} vs oracle {oc}", verdict.holds)
            });
            let g3 = certified(&mut s.certificates, &t, &c, MeasureKind::G3, &what);
            let o3 = oracle_g3(&t, &c, &config).unwrap();
            s.agreement.expect(g3 == exact(o3), || {
                format!("{what}: g3 {g3} vs oracle {}", format_rational(&o3))
            });
            let top = system
                .keys()
                .iter()
                .map(|k| g3_spkey(&t, k).unwrap().value.exact().unwrap())
                .max()
                .unwrap();
            s.inequality
                .expect(!matches!(g3, Measure::Exact(v) if v < top), || {
                    format!(
                        "{what}: g3 {g3} below a single key's {}",
                        format_rational(&top)
                    )
                });
        }
        s.decided.push((t, decided));
    }
    s.elapsed = start.elapsed();
    s.agreement
        .expect(s.elapsed < Duration::from_secs(300), || {
            format!("sweep took {:?}", s.elapsed)
        });
    s.inequality.note =
        format!("{nondegenerate} violations with every constraint attribute non-NULL somewhere");
    s.agreement.note = format!("{SWEEP_SEEDS} tables in {:.1}s", s.elapsed.as_secs_f64());
    s
}

fn criterion_scale() -> Line {
    let mut line = Line::default();
    let spec = GenSpec {
        seed: 2024,
        rows: 100_000,
        columns: 6,
        symbols: 10,
        null_rate: 0.2,
        duplicate_rate: 0.0,
    };
    let t = random_table(&spec).unwrap();
    let k = t.schema().all();
    let start = Instant::now();
    let g3 = g3_spkey(&t, &k).unwrap();
    let an = analyze(&t, &k).unwrap();
    let took = start.elapsed();
    let j = an.cut as u128;
    line.expect(took < Duration::from_secs(60), || format!("took {took:?}"));
    line.expect((an.realized_right as u128) <= j * j, || {
        format!("{} right vertices for j = {j}", an.realized_right)
    });
    line.note = format!(
        "g3 = {}, j = {j}, {} right vertices, {:.1}s",
        g3.value,
        an.realized_right,
        took.as_secs_f64()
    );
    line
}

fn write_csv(dir: &Path, name: &str, t: &Table) -> String {
    let path = dir.join(format!("{name}.csv"));
    std::fs::write(&path, t.to_delimited(&Delimited::default()).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn spec_text(t: &Table, c: &Constraint) -> String {
    let list = |a: &AttrSet| {
        a.iter()
            .map(|p| (p + 1).to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    match c {
        Constraint::Key(k) => format!("key={}", list(k)),
        Constraint::Fd(fd) => format!("fd={}->{}", list(fd.lhs()), list(fd.rhs())),
        Constraint::Keys(_) => unreachable!("{}", c.describe(t.schema())),
    }
}

fn criterion_bounds(decided: &[Decided]) -> Line {
    let mut line = Line::default();
    let dir = tempfile::TempDir::new().unwrap();
    let mut golden: Vec<Decided> = Vec::new();
    for (name, keys, fds) in [
        ("table2", vec![vec!["X1", "X2"]], vec![]),
        (
            "cars",
            vec![vec!["Car_Model", "DoorNo"]],
            vec![(vec!["Car_Model", "DoorNo"], vec!["Engine_Type"])],
        ),
        (
            "keysystem",
            vec![vec!["A1", "A2"], vec!["A2", "A3"]],
            vec![],
        ),
    ] {
        let t = fixture(name).unwrap();
        let cs =
            keys.iter()
                .map(|k| Constraint::Key(key(&t, k)))
                .chain(fds.iter().map(|(l, r)| {
                    Constraint::Fd(FdConstraint::new(key(&t, l), key(&t, r)).unwrap())
                }))
                .map(|c| {
                    let (g3, g5) = (
                        value(&t, &c, MeasureKind::G3),
                        value(&t, &c, MeasureKind::G5),
                    );
                    (c, g3, g5)
                })
                .collect();
        golden.push((t, cs));
    }
    for (i, (t, cs)) in golden.iter().chain(decided).enumerate() {
        let path = write_csv(dir.path(), &i.to_string(), t);
        for (c, g3, g5) in cs {
            let spec = spec_text(t, c);
            for (kind, m) in [("g3", g3), ("g5", g5)] {
                for (p, q) in BOUNDS {
                    let bound = format!("{p}/{q}");
                    let cli = Cli::try_parse_from([
                        "spapprox", "measure", &path, &spec, kind, "--bound", &bound,
                    ])
                    .unwrap();
                    let out = execute(&cli);
                    let want = m.within(&ratio(p, q));
                    let code = if want { exit::YES } else { exit::NO };
                    line.expect(
                        out.report.within_bound == Some(want) && out.exit == code,
                        || {
                            format!(
                                "{spec} {kind} <= {bound}: cli said {:?}, exit {}, measure {m}",
                                out.report.within_bound, out.exit
                            )
                        },
                    );
                }
            }
        }
    }
    line.note = format!("{} decisions", line.checked);
    line
}

fn main() {
    let mut lines: BTreeMap<u32, (&str, Line)> = BTreeMap::new();
    lines.insert(1, ("golden values", criterion_golden()));
    let sweep = sweep();
    lines.insert(2, ("oracle agreement", sweep.agreement));
    lines.insert(3, ("pruned matching equals full matching", sweep.pruning));
    lines.insert(4, ("g3 >= g5 and system g3 >= key g3", sweep.inequality));
    lines.insert(5, ("polynomial path at 100k rows", criterion_scale()));
    lines.insert(6, ("certificates re-validate", sweep.certificates));
    lines.insert(
        7,
        (
            "bound decisions match measures",
            criterion_bounds(&sweep.decided),
        ),
    );

    let mut unexpected = Vec::new();
    let mut out = String::new();
    for (n, (title, line)) in &lines {
        let expected_red = EXPECTED_RED
            .iter()
            .find(|(m, _)| m == n)
            .map(|(_, why)| *why);
        let pass = line.failures.is_empty();
        let verdict = if pass { "PASS" } else { "FAIL" };
        let _ = write!(
            out,
            "criterion {n}: {verdict} {title} ({} checks",
            line.checked
        );
        if !line.failures.is_empty() {
            let _ = write!(out, ", {} failed", line.failures.len());
        }
        if !line.note.is_empty() {
            let _ = write!(out, "; {}", line.note);
        }
        out.push(')');
        match (pass, expected_red) {
            (false, Some(why)) => {
                let _ = write!(out, " [expected: {why}]");
            }
            (false, None) => unexpected.push(*n),
            (true, Some(_)) => out.push_str(" [was expected to fail]"),
            (true, None) => {}
        }
        out.push('\n');
        for f in line.failures.iter().take(3) {
            let _ = writeln!(out, "    {}", f.replace('\n', "\n    "));
        }
    }
    print!("{out}");
    if !unexpected.is_empty() {
        eprintln!("unexpected failures in criteria {unexpected:?}");
        std::process::exit(1);
    }
}
