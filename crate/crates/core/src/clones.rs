//! Finitely generated clones on finite sets, stored as operation tables.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::term::Term;

/// An operation `{0..base}^arity → {0..base}` as a row-major table
/// (the first argument is the most significant digit).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableOp {
    base: usize,
    arity: usize,
    table: Vec<usize>,
}

impl TableOp {
    pub fn new(base: usize, arity: usize, table: Vec<usize>) -> Result<TableOp> {
        if base == 0 || arity == 0 {
            return Err(Error::Arity("table operations need positive base and arity".into()));
        }
        let expected = table_len(base, arity)?;
        if table.len() != expected {
            return Err(Error::Arity(format!(
                "table has {} entries, expected {expected}",
                table.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= base) {
            return Err(Error::Arity(format!("table value {v} outside base {base}")));
        }
        Ok(TableOp { base, arity, table })
    }

    pub fn from_fn(base: usize, arity: usize, f: impl Fn(&[usize]) -> usize) -> Result<TableOp> {
        let len = table_len(base, arity)?;
        let mut args = vec![0; arity];
        let mut table = Vec::with_capacity(len);
        for code in 0..len {
            decode_into(code, base, &mut args);
            table.push(f(&args));
        }
        TableOp::new(base, arity, table)
    }

    /// The selector `π^arity_i` (0-based `i`).
    pub fn selector(base: usize, arity: usize, i: usize) -> TableOp {
        assert!(i < arity);
        TableOp::from_fn(base, arity, |args| args[i]).expect("selector fits")
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn eval(&self, args: &[usize]) -> usize {
        let code = args.iter().fold(0usize, |acc, &a| acc * self.base + a);
        self.table[code]
    }

    /// `self(gs[0], .., gs[n-1])`, pointwise.
    pub fn compose(&self, gs: &[&TableOp]) -> Result<TableOp> {
        if gs.len() != self.arity {
            return Err(Error::Arity(format!(
                "{}-ary operation composed with {} operations",
                self.arity,
                gs.len()
            )));
        }
        let first = gs
            .first()
            .ok_or_else(|| Error::Arity("nothing to compose".into()))?;
        let (base, arity) = (first.base, first.arity);
        if base != self.base || gs.iter().any(|g| g.base != base || g.arity != arity) {
            return Err(Error::Arity("inner operations must share base and arity".into()));
        }
        let len = first.table.len();
        let mut table = Vec::with_capacity(len);
        for code in 0..len {
            let outer = gs.iter().fold(0usize, |acc, g| acc * base + g.table[code]);
            table.push(self.table[outer]);
        }
        Ok(TableOp { base, arity, table })
    }

    /// Is this the selector of some coordinate?
    pub fn as_selector(&self) -> Option<usize> {
        (0..self.arity).find(|&i| *self == TableOp::selector(self.base, self.arity, i))
    }

    pub fn render_table(&self) -> String {
        self.table
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub(crate) fn table_len(base: usize, arity: usize) -> Result<usize> {
    (base as u128)
        .checked_pow(arity as u32)
        .filter(|&n| n <= 1 << 26)
        .map(|n| n as usize)
        .ok_or_else(|| Error::cap("table size base^arity", u128::MAX, 1 << 26))
}

pub(crate) fn decode_into(mut code: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
}

/// Limits on clone generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CloneCaps {
    pub max_arity: usize,
    pub max_depth: usize,
    pub max_catalog: usize,
}

impl Default for CloneCaps {
    fn default() -> Self {
        CloneCaps {
            max_arity: 6,
            max_depth: 4,
            max_catalog: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub op: TableOp,
    /// First witnessing term found; symbols index the clone's generators.
    pub term: Term,
    pub depth: usize,
}

/// Two terms of the same arity evaluating to the same table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub arity: usize,
    pub entry: usize,
    pub term: Term,
}

/// The `arity`-ary part of a generated clone.
#[derive(Clone, Debug)]
pub struct ArityCatalog {
    pub arity: usize,
    pub entries: Vec<CatalogEntry>,
    /// Closed under composition with the generators.
    pub saturated: bool,
    pub collisions: Vec<Collision>,
    index: HashMap<Vec<usize>, usize>,
}

impl ArityCatalog {
    pub fn lookup(&self, table: &[usize]) -> Option<&CatalogEntry> {
        self.index.get(table).map(|&i| &self.entries[i])
    }
}

/// The closure of a set of generators under composition, up to caps.
#[derive(Clone, Debug)]
pub struct FiniteClone {
    base: usize,
    generators: Vec<(String, TableOp)>,
    caps: CloneCaps,
    catalogs: Vec<ArityCatalog>,
}

impl FiniteClone {
    pub fn base(&self) -> usize {
        self.base
    }

    pub fn caps(&self) -> CloneCaps {
        self.caps
    }

    pub fn generators(&self) -> &[(String, TableOp)] {
        &self.generators
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    /// The catalog for `arity`, if within the arity cap.
    pub fn catalog(&self, arity: usize) -> Option<&ArityCatalog> {
        arity.checked_sub(1).and_then(|i| self.catalogs.get(i))
    }

    pub fn catalogs(&self) -> &[ArityCatalog] {
        &self.catalogs
    }

    pub fn is_saturated(&self) -> bool {
        self.catalogs.iter().all(|c| c.saturated)
    }

    pub fn lookup_by_table(&self, op: &TableOp) -> Option<&Term> {
        if op.base != self.base {
            return None;
        }
        self.catalog(op.arity)?.lookup(&op.table).map(|e| &e.term)
    }

    /// Evaluates a term over the generators as an `arity`-ary operation.
    pub fn evaluate(&self, term: &Term, arity: usize) -> Result<TableOp> {
        let ops: Vec<&TableOp> = self.generators.iter().map(|(_, op)| op).collect();
        evaluate_term(term, &ops, self.base, arity)
    }

    /// One line per catalog entry: `arity <n> table <outputs> term <witness>`.
    pub fn dump(&self) -> String {
        let names = self.generator_names();
        let mut out = String::new();
        for cat in &self.catalogs {
            for e in &cat.entries {
                writeln!(
                    out,
                    "arity {} table {} term {}",
                    cat.arity,
                    e.op.render_table(),
                    e.term.display(&names)
                )
                .unwrap();
            }
        }
        out
    }
}

/// Evaluates `term` with symbol `i` interpreted as `ops[i]`.
pub fn evaluate_term(term: &Term, ops: &[&TableOp], base: usize, arity: usize) -> Result<TableOp> {
    match term {
        Term::Var(i) if *i < arity => Ok(TableOp::selector(base, arity, *i)),
        Term::Var(i) => Err(Error::Arity(format!("variable x{} in a {arity}-ary term", i + 1))),
        Term::App(f, args) => {
            let op = ops
                .get(*f)
                .ok_or_else(|| Error::Arity(format!("no interpretation for symbol #{f}")))?;
            let inner = args
                .iter()
                .map(|a| evaluate_term(a, ops, base, arity))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&TableOp> = inner.iter().collect();
            op.compose(&refs)
        }
    }
}

/// Breadth-first closure of `generators` under composition, arity by arity.
///
/// Catalog order: depth, then generator index, then argument tuple order.
/// Every composition that reproduces an existing table is kept as a
/// [`Collision`].
pub fn generate(base: usize, generators: Vec<(String, TableOp)>, caps: CloneCaps) -> Result<FiniteClone> {
    if base == 0 {
        return Err(Error::Arity("clone base must be nonempty".into()));
    }
    if let Some((name, _)) = generators.iter().find(|(_, op)| op.base != base) {
        return Err(Error::Arity(format!("generator `{name}` lives on a different base")));
    }
    let mut catalogs = Vec::with_capacity(caps.max_arity);
    for arity in 1..=caps.max_arity {
        catalogs.push(generate_arity(base, &generators, arity, caps)?);
    }
    Ok(FiniteClone {
        base,
        generators,
        caps,
        catalogs,
    })
}

fn generate_arity(
    base: usize,
    generators: &[(String, TableOp)],
    arity: usize,
    caps: CloneCaps,
) -> Result<ArityCatalog> {
    let mut entries: Vec<CatalogEntry> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut collisions = Vec::new();
    for i in 0..arity {
        let op = TableOp::selector(base, arity, i);
        index.insert(op.table.clone(), entries.len());
        entries.push(CatalogEntry {
            op,
            term: Term::Var(i),
            depth: 0,
        });
    }
    // entries [frontier_start, len) were created at the previous depth
    let mut frontier_start = 0;
    let mut saturated = generators.is_empty();
    let mut truncated = false;
    'depth: for depth in 1..=caps.max_depth {
        let level_end = entries.len();
        let mut added = 0usize;
        for (g_idx, (_, g)) in generators.iter().enumerate() {
            let r = g.arity;
            let mut choice = vec![0usize; r];
            loop {
                // semi-naive: at least one argument must be new at the previous depth
                if choice.iter().any(|&c| c >= frontier_start) {
                    let args: Vec<&TableOp> = choice.iter().map(|&c| &entries[c].op).collect();
                    let op = g.compose(&args)?;
                    let term = Term::App(g_idx, choice.iter().map(|&c| entries[c].term.clone()).collect());
                    match index.get(&op.table) {
                        Some(&existing) => collisions.push(Collision {
                            arity,
                            entry: existing,
                            term,
                        }),
                        None => {
                            if entries.len() >= caps.max_catalog {
                                truncated = true;
                                break 'depth;
                            }
                            index.insert(op.table.clone(), entries.len());
                            entries.push(CatalogEntry { op, term, depth });
                            added += 1;
                        }
                    }
                }
                if !advance(&mut choice, level_end) {
                    break;
                }
            }
        }
        if added == 0 {
            saturated = true;
            break;
        }
        frontier_start = level_end;
    }
    Ok(ArityCatalog {
        arity,
        entries,
        saturated: saturated && !truncated,
        collisions,
        index,
    })
}

/// Next tuple in lexicographic order over `0..bound`; false when exhausted.
pub(crate) fn advance(choice: &mut [usize], bound: usize) -> bool {
    for slot in choice.iter_mut().rev() {
        *slot += 1;
        if *slot < bound {
            return true;
        }
        *slot = 0;
    }
    false
}
