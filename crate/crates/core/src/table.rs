//! Incomplete tables: schema, values with NULL, bag of tuples, delimited
//! text ingestion and serialization, and the two similarity predicates.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// An opaque domain value. Two symbols are equal iff their tokens are equal;
/// no numeric or whitespace normalization is applied.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(token: &str) -> Self {
        Symbol(Arc::from(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(token: &str) -> Self {
        Symbol::new(token)
    }
}

/// A cell: either missing information or a symbol.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Value {
    Null,
    Sym(Symbol),
}

impl Value {
    pub fn sym(token: &str) -> Self {
        Value::Sym(Symbol::new(token))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn symbol(&self) -> Option<&Symbol> {
        match self {
            Value::Null => None,
            Value::Sym(s) => Some(s),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("⊥"),
            Value::Sym(s) => f.write_str(s.as_str()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tuple(Vec<Value>);

impl Tuple {
    pub fn new(values: Vec<Value>) -> Self {
        Tuple(values)
    }

    /// Builds a tuple from optional tokens, `None` meaning NULL.
    pub fn from_cells<'a>(cells: impl IntoIterator<Item = Option<&'a str>>) -> Self {
        Tuple(
            cells
                .into_iter()
                .map(|c| c.map_or(Value::Null, Value::sym))
                .collect(),
        )
    }

    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, pos: usize) -> &Value {
        &self.0[pos]
    }

    /// True if the tuple has no NULL on any attribute of `attrs`.
    pub fn is_total_on(&self, attrs: &AttrSet) -> bool {
        attrs.iter().all(|p| !self.0[p].is_null())
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

/// Ordered, duplicate-free attribute names.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Schema {
    attributes: Vec<String>,
    index: HashMap<String, usize>,
}

impl Schema {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let attributes: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(attributes.len());
        for (pos, name) in attributes.iter().enumerate() {
            if index.insert(name.clone(), pos).is_some() {
                return Err(Error::DuplicateAttribute(name.clone()));
            }
        }
        Ok(Schema { attributes, index })
    }

    /// Attributes named `A1..An`, used for headerless input.
    pub fn positional(n: usize) -> Self {
        Schema::new((1..=n).map(|i| format!("A{i}"))).expect("positional names are distinct")
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.attributes
    }

    pub fn name(&self, pos: usize) -> &str {
        &self.attributes[pos]
    }

    /// Resolves an attribute reference: an exact name first, otherwise a
    /// 1-based column position.
    pub fn resolve(&self, reference: &str) -> Result<usize> {
        if let Some(&pos) = self.index.get(reference) {
            return Ok(pos);
        }
        match reference.trim().parse::<usize>() {
            Ok(n) if n >= 1 && n <= self.len() => Ok(n - 1),
            _ => Err(Error::UnknownAttribute(reference.to_string())),
        }
    }

    pub fn attr_set<S: AsRef<str>>(&self, references: &[S]) -> Result<AttrSet> {
        let positions = references
            .iter()
            .map(|r| self.resolve(r.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(AttrSet::from_unchecked(positions))
    }

    pub fn all(&self) -> AttrSet {
        AttrSet::from_unchecked((0..self.len()).collect())
    }

    /// Renders an attribute set as `{A,B}` using this schema's names.
    pub fn describe(&self, attrs: &AttrSet) -> String {
        let names: Vec<&str> = attrs.iter().map(|p| self.name(p)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// A set of attribute positions, kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct AttrSet(Vec<usize>);

impl AttrSet {
    /// Builds a set from positions, checking them against `schema`.
    pub fn from_positions(
        schema: &Schema,
        positions: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let positions: Vec<usize> = positions.into_iter().collect();
        if let Some(&bad) = positions.iter().find(|&&p| p >= schema.len()) {
            return Err(Error::UnknownAttribute(format!("#{}", bad + 1)));
        }
        Ok(AttrSet::from_unchecked(positions))
    }

    pub(crate) fn from_unchecked(mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        AttrSet(positions)
    }

    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.0.binary_search(&pos).is_ok()
    }

    pub fn union(&self, other: &AttrSet) -> AttrSet {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        AttrSet::from_unchecked(v)
    }

    /// Index of `pos` within this set, if present.
    pub fn rank(&self, pos: usize) -> Option<usize> {
        self.0.binary_search(&pos).ok()
    }

    pub(crate) fn check(&self, arity: usize) -> Result<()> {
        match self.0.last() {
            Some(&p) if p >= arity => Err(Error::UnknownAttribute(format!("#{}", p + 1))),
            _ => Ok(()),
        }
    }
}

/// A bag of tuples over a schema. Duplicates are kept; a tuple is identified
/// by its index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Table {
    schema: Arc<Schema>,
    tuples: Vec<Tuple>,
}

impl Table {
    pub fn new(schema: Schema, tuples: Vec<Tuple>) -> Result<Self> {
        let mut table = Table::empty(schema);
        for t in tuples {
            table.push(t)?;
        }
        Ok(table)
    }

    pub fn empty(schema: Schema) -> Self {
        Table {
            schema: Arc::new(schema),
            tuples: Vec::new(),
        }
    }

    /// Convenience constructor from string cells, `None` meaning NULL.
    pub fn from_rows<S: Into<String>>(
        attributes: impl IntoIterator<Item = S>,
        rows: &[&[Option<&str>]],
    ) -> Result<Self> {
        let schema = Schema::new(attributes)?;
        let tuples = rows
            .iter()
            .map(|r| Tuple::from_cells(r.iter().copied()))
            .collect();
        Table::new(schema, tuples)
    }

    pub fn push(&mut self, tuple: Tuple) -> Result<()> {
        if tuple.len() != self.schema.len() {
            return Err(Error::ArityMismatch {
                found: tuple.len(),
                expected: self.schema.len(),
            });
        }
        self.tuples.push(tuple);
        Ok(())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn tuple(&self, index: usize) -> Result<&Tuple> {
        self.tuples.get(index).ok_or(Error::BadIndex {
            index,
            len: self.tuples.len(),
        })
    }

    /// The sub-bag made of the listed tuple indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Table> {
        let tuples = indices
            .iter()
            .map(|&i| self.tuple(i).cloned())
            .collect::<Result<Vec<_>>>()?;
        Ok(Table {
            schema: Arc::clone(&self.schema),
            tuples,
        })
    }

    /// This table followed by `extra`.
    pub fn with_appended(&self, extra: &[Tuple]) -> Result<Table> {
        let mut t = self.clone();
        for tuple in extra {
            t.push(tuple.clone())?;
        }
        Ok(t)
    }

    /// Every distinct token appearing anywhere in the table.
    pub fn symbol_universe(&self) -> std::collections::HashSet<&str> {
        self.tuples
            .iter()
            .flat_map(|t| {
                t.values()
                    .iter()
                    .filter_map(|v| v.symbol().map(Symbol::as_str))
            })
            .collect()
    }

    /// Serializes to delimited text; NULL is written as the configured token.
    pub fn to_delimited(&self, opts: &Delimited) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .delimiter(opts.delimiter)
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Malformed(e.to_string());
        if opts.has_header {
            w.write_record(self.schema.names()).map_err(io)?;
        }
        for t in &self.tuples {
            w.write_record(t.values().iter().map(|v| match v {
                Value::Null => opts.null_token.as_str(),
                Value::Sym(s) => s.as_str(),
            }))
            .map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Malformed(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Malformed(e.to_string()))
    }
}

/// Header line, then one tuple per line.
impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.schema.names().join(","))?;
        for t in &self.tuples {
            write!(f, "\n{t}")?;
        }
        Ok(())
    }
}

/// Delimited-text settings shared by the parser and the serializer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delimited {
    pub delimiter: u8,
    pub null_token: String,
    pub has_header: bool,
}

impl Default for Delimited {
    fn default() -> Self {
        Delimited {
            delimiter: b',',
            null_token: String::new(),
            has_header: true,
        }
    }
}

/// Parses delimited text into a table. Cells equal to the NULL token become
/// [`Value::Null`]; every other cell becomes an interned symbol.
pub fn parse_table(text: &str, opts: &Delimited) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(opts.delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let mut interned: HashMap<String, Symbol> = HashMap::new();
    let malformed = |e: csv::Error| Error::Malformed(e.to_string());

    let mut pending = None;
    let schema = if opts.has_header {
        match records.next() {
            Some(rec) => Schema::new(rec.map_err(malformed)?.iter())?,
            None => return Err(Error::EmptyInput),
        }
    } else {
        match records.next() {
            Some(rec) => {
                let rec = rec.map_err(malformed)?;
                let schema = Schema::positional(rec.len());
                pending = Some(rec);
                schema
            }
            None => return Err(Error::EmptyInput),
        }
    };
    if schema.is_empty() {
        return Err(Error::EmptyInput);
    }

    let mut table = Table::empty(schema);
    let first_data_row = if opts.has_header { 2 } else { 1 };
    for (n, rec) in pending.into_iter().map(Ok).chain(records).enumerate() {
        let rec = rec.map_err(malformed)?;
        if rec.len() != table.schema().len() {
            return Err(Error::RaggedRow {
                row: n + first_data_row,
                found: rec.len(),
                expected: table.schema().len(),
            });
        }
        let values = rec
            .iter()
            .map(|cell| {
                if cell == opts.null_token {
                    Value::Null
                } else {
                    let sym = interned
                        .entry(cell.to_string())
                        .or_insert_with(|| Symbol::new(cell))
                        .clone();
                    Value::Sym(sym)
                }
            })
            .collect();
        table.tuples.push(Tuple(values));
    }
    Ok(table)
}

/// `t1[A] = t2[A]` or either side is NULL, for every `A` in `attrs`.
pub fn weakly_similar(t1: &Tuple, t2: &Tuple, attrs: &AttrSet) -> Result<bool> {
    attrs.check(t1.len().min(t2.len()))?;
    Ok(attrs.iter().all(|p| match (t1.get(p), t2.get(p)) {
        (Value::Null, _) | (_, Value::Null) => true,
        (a, b) => a == b,
    }))
}

/// `t1[A] = t2[A] ≠ NULL` for every `A` in `attrs`.
pub fn strongly_similar(t1: &Tuple, t2: &Tuple, attrs: &AttrSet) -> Result<bool> {
    attrs.check(t1.len().min(t2.len()))?;
    Ok(attrs.iter().all(|p| match (t1.get(p), t2.get(p)) {
        (Value::Sym(a), Value::Sym(b)) => a == b,
        _ => false,
    }))
}
