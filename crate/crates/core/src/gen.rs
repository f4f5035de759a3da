//! Seeded random tables and the hand-transcribed fixtures.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a spec
//! reproduces the same table on every platform.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::constraint::{FdConstraint, KeySystem};
use crate::error::{Error, Result};
use crate::table::{AttrSet, Schema, Table, Tuple, Value};

/// Name of the pseudo-random algorithm, recorded in reports.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub rows: usize,
    pub columns: usize,
    /// Size of each column's symbol pool, named `1`..`symbols`.
    pub symbols: usize,
    /// Probability that a cell is NULL.
    pub null_rate: f64,
    /// Probability that a row (after the first) copies an earlier row.
    pub duplicate_rate: f64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            seed: 0,
            rows: 8,
            columns: 3,
            symbols: 3,
            null_rate: 0.3,
            duplicate_rate: 0.0,
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn below(rng: &mut ChaCha8Rng, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// A reproducible table. Columns are named `A1`..`An`. With an empty symbol
/// pool every cell is NULL.
pub fn random_table(spec: &GenSpec) -> Result<Table> {
    for (name, rate) in [
        ("null rate", spec.null_rate),
        ("duplicate rate", spec.duplicate_rate),
    ] {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidSpec(format!(
                "{name} {rate} is outside [0, 1]"
            )));
        }
    }
    if spec.columns == 0 {
        return Err(Error::InvalidSpec(
            "a table needs at least one column".into(),
        ));
    }
    let pool: Vec<Value> = (1..=spec.symbols)
        .map(|s| Value::sym(&s.to_string()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut tuples: Vec<Tuple> = Vec::with_capacity(spec.rows);
    for r in 0..spec.rows {
        if r > 0 && unit(&mut rng) < spec.duplicate_rate {
            let src = below(&mut rng, r);
            tuples.push(tuples[src].clone());
            continue;
        }
        let values = (0..spec.columns)
            .map(|_| {
                if pool.is_empty() || unit(&mut rng) < spec.null_rate {
                    Value::Null
                } else {
                    pool[below(&mut rng, pool.len())].clone()
                }
            })
            .collect();
        tuples.push(Tuple::new(values));
    }
    Table::new(Schema::positional(spec.columns), tuples)
}

pub const SWEEP_NULL_RATES: [f64; 3] = [0.1, 0.3, 0.6];

/// A tiny table with constraints over it, for agreement sweeps.
#[derive(Clone, Debug)]
pub struct SweepInstance {
    pub spec: GenSpec,
    pub table: Table,
    /// Every nonempty attribute set.
    pub keys: Vec<AttrSet>,
    pub fds: Vec<FdConstraint>,
    pub systems: Vec<KeySystem>,
}

fn random_subset(rng: &mut ChaCha8Rng, schema: &Schema) -> AttrSet {
    let n = schema.len();
    let mask = 1 + below(rng, (1 << n) - 1);
    AttrSet::from_positions(schema, (0..n).filter(|p| mask & (1 << p) != 0))
        .expect("positions are in range")
}

/// Up to 6 rows, 2 to 4 columns, 1 to 3 symbols per column; the null rate
/// cycles through [`SWEEP_NULL_RATES`].
pub fn sweep_instance(seed: u64) -> SweepInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed);
    let spec = GenSpec {
        seed,
        rows: 1 + below(&mut rng, 6),
        columns: 2 + below(&mut rng, 3),
        symbols: 1 + below(&mut rng, 3),
        null_rate: SWEEP_NULL_RATES[(seed % 3) as usize],
        duplicate_rate: 0.15,
    };
    let table = random_table(&spec).expect("sweep specs are valid");
    let schema = table.schema().clone();
    let n = schema.len();
    let keys = (1..1usize << n)
        .map(|mask| {
            AttrSet::from_positions(&schema, (0..n).filter(|p| mask & (1 << p) != 0)).unwrap()
        })
        .collect();
    let fds = (0..3)
        .map(|_| {
            let lhs = random_subset(&mut rng, &schema);
            let rhs = random_subset(&mut rng, &schema);
            FdConstraint::new(lhs, rhs).expect("subsets are nonempty")
        })
        .collect();
    let systems = (0..2)
        .map(|_| {
            let size = 2 + below(&mut rng, 2);
            let mut members: Vec<AttrSet> = Vec::new();
            while members.len() < size {
                let k = random_subset(&mut rng, &schema);
                if !members.contains(&k) {
                    members.push(k);
                }
            }
            KeySystem::new(members).expect("members are distinct and nonempty")
        })
        .collect();
    SweepInstance {
        spec,
        table,
        keys,
        fds,
        systems,
    }
}

pub const FIXTURE_NAMES: [&str; 5] = ["cars", "table2", "table3", "table4", "keysystem"];

/// One of the worked examples by name.
pub fn fixture(name: &str) -> Option<Table> {
    let n = None;
    let s = Some;
    let table = match name {
        "cars" => Table::from_rows(
            ["Car_Model", "DoorNo", "Engine_Type"],
            &[
                &[s("BMW I3"), s("4 doors"), n],
                &[s("BMW I3"), n, s("electric")],
                &[s("Ford explorer"), n, s("V8")],
                &[s("Ford explorer"), n, s("V6")],
            ],
        ),
        "table2" => Table::from_rows(
            ["X1", "X2"],
            &[&[n, s("1")], &[s("2"), n], &[s("2"), n], &[s("2"), s("2")]],
        ),
        "table3" => Table::from_rows(["X1", "X2"], &[&[n, s("1")], &[s("2"), s("2")]]),
        "table4" => Table::from_rows(
            ["X1", "X2"],
            &[
                &[n, s("1")],
                &[s("2"), n],
                &[s("2"), n],
                &[s("2"), s("2")],
                &[s("3"), s("3")],
            ],
        ),
        "keysystem" => Table::from_rows(
            ["A1", "A2", "A3"],
            &[
                &[s("1"), n, s("1")],
                &[s("1"), s("2"), s("2")],
                &[s("2"), s("1"), s("1")],
                &[s("2"), s("1"), s("1")],
            ],
        ),
        _ => return None,
    };
    Some(table.expect("fixtures are rectangular"))
}

/// All fixtures, in a fixed order.
pub fn fixtures() -> Vec<(&'static str, Table)> {
    FIXTURE_NAMES
        .iter()
        .map(|&name| (name, fixture(name).expect("every listed fixture exists")))
        .collect()
}
