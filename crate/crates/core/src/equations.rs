//! Finite equation systems and their satisfiability in clones.

use std::fmt;

use crate::clones::{evaluate_term, FiniteClone, TableOp};
use crate::error::{Error, Result};
use crate::term::{parse_raw, Term};

/// Largest number of coordinate assignments tried by the projection searches.
pub const MAX_PROJECTION_ASSIGNMENTS: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

/// Σ over a signature of named symbols; `arity` is the common variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSystem {
    pub names: Vec<String>,
    pub arities: Vec<usize>,
    pub equations: Vec<Equation>,
    pub arity: usize,
}

impl EquationSystem {
    /// Validates arities and pads to the common arity.
    pub fn new(symbols: Vec<(String, usize)>, equations: Vec<(Term, Term)>) -> Result<EquationSystem> {
        let (names, arities): (Vec<String>, Vec<usize>) = symbols.into_iter().unzip();
        for (name, &r) in names.iter().zip(&arities) {
            if r == 0 {
                return Err(Error::Arity(format!("symbol `{name}` must have positive arity")));
            }
        }
        let equations = equations
            .into_iter()
            .map(|(lhs, rhs)| {
                lhs.check_arities(&arities)?;
                rhs.check_arities(&arities)?;
                Ok(Equation { lhs, rhs })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(pad_to_common_arity(EquationSystem {
            names,
            arities,
            equations,
            arity: 0,
        }))
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// The system restricted to the equations at `keep` (same signature).
    pub fn subsystem(&self, keep: &[usize]) -> EquationSystem {
        pad_to_common_arity(EquationSystem {
            names: self.names.clone(),
            arities: self.arities.clone(),
            equations: keep.iter().map(|&i| self.equations[i].clone()).collect(),
            arity: 0,
        })
    }

    pub fn display_equation(&self, i: usize) -> String {
        let e = &self.equations[i];
        format!("{} = {}", e.lhs.display(&self.names), e.rhs.display(&self.names))
    }

    fn symbol_arity_product(&self) -> u128 {
        self.arities
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX)
    }
}

impl fmt::Display for EquationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, r) in self.names.iter().zip(&self.arities) {
            writeln!(f, "sig {name} {r}")?;
        }
        for i in 0..self.equations.len() {
            writeln!(f, "eq {}", self.display_equation(i))?;
        }
        Ok(())
    }
}

/// Parses `sig <name> <arity>` and `eq <term> = <term>` lines; `#` starts a comment.
pub fn parse_equations(text: &str) -> Result<EquationSystem> {
    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("sig ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [name, arity] = parts[..] else {
                return Err(Error::syntax(line_no, "expected `sig <name> <arity>`"));
            };
            let arity: usize = arity
                .parse()
                .map_err(|_| Error::syntax(line_no, format!("bad arity `{arity}`")))?;
            if arity == 0 {
                return Err(Error::syntax(line_no, format!("symbol `{name}` must have positive arity")));
            }
            if symbols.iter().any(|(n, _)| n == name) {
                return Err(Error::syntax(line_no, format!("symbol `{name}` declared twice")));
            }
            symbols.push((name.to_string(), arity));
        } else if let Some(rest) = line.strip_prefix("eq ") {
            let (l, r) = rest
                .split_once('=')
                .ok_or_else(|| Error::syntax(line_no, "expected `eq <term> = <term>`"))?;
            let with_line = |e: Error| match e {
                Error::Syntax { message, .. } => Error::syntax(line_no, message),
                other => other,
            };
            raw.push((line_no, parse_raw(l).map_err(with_line)?, parse_raw(r).map_err(with_line)?));
        } else {
            return Err(Error::syntax(line_no, format!("unrecognized line `{line}`")));
        }
    }
    let lookup = |name: &str| {
        symbols
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (i, symbols[i].1))
    };
    let equations = raw
        .into_iter()
        .map(|(line_no, l, r)| {
            let resolve = |t: &crate::term::RawTerm| {
                t.resolve(&lookup).map_err(|e| Error::syntax(line_no, e.to_string()))
            };
            Ok((resolve(&l)?, resolve(&r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    EquationSystem::new(symbols, equations)
}

/// Sets the common arity to the largest variable index used (at least 1).
/// Terms are unchanged: unused variables are dummies.
pub fn pad_to_common_arity(mut sys: EquationSystem) -> EquationSystem {
    sys.arity = sys
        .equations
        .iter()
        .flat_map(|e| [e.lhs.var_bound(), e.rhs.var_bound()])
        .max()
        .unwrap_or(0)
        .max(1);
    sys
}

/// For each equation, whether both sides collapse to the same variable under
/// `sigma` (symbol ↦ 0-based coordinate).
pub fn collapse_in_projections(sys: &EquationSystem, sigma: &[usize]) -> Vec<bool> {
    sys.equations
        .iter()
        .map(|e| e.lhs.collapse(sigma) == e.rhs.collapse(sigma))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionVerdict {
    /// Lexicographically first satisfying coordinate assignment (0-based).
    Satisfiable(Vec<usize>),
    /// For every assignment, in lexicographic order, the first failing equation.
    Unsatisfiable(Vec<(Vec<usize>, usize)>),
}

impl ProjectionVerdict {
    pub fn is_satisfiable(&self) -> bool {
        matches!(self, ProjectionVerdict::Satisfiable(_))
    }
}

fn for_each_sigma(arities: &[usize], mut visit: impl FnMut(&[usize]) -> bool) {
    let mut sigma = vec![0usize; arities.len()];
    loop {
        if !visit(&sigma) {
            return;
        }
        let mut done = true;
        for (slot, &r) in sigma.iter_mut().zip(arities).rev() {
            *slot += 1;
            if *slot < r {
                done = false;
                break;
            }
            *slot = 0;
        }
        if done {
            return;
        }
    }
}

/// Exhaustive search for a homomorphism to the projection clone.
pub fn satisfiable_in_projections(sys: &EquationSystem) -> Result<ProjectionVerdict> {
    let total = sys.symbol_arity_product();
    if total > MAX_PROJECTION_ASSIGNMENTS {
        return Err(Error::cap("coordinate assignments", total, MAX_PROJECTION_ASSIGNMENTS));
    }
    let mut failures = Vec::new();
    let mut found = None;
    for_each_sigma(&sys.arities, |sigma| {
        match collapse_in_projections(sys, sigma).iter().position(|ok| !ok) {
            None => {
                found = Some(sigma.to_vec());
                false
            }
            Some(eq) => {
                failures.push((sigma.to_vec(), eq));
                true
            }
        }
    });
    Ok(match found {
        Some(sigma) => ProjectionVerdict::Satisfiable(sigma),
        None => ProjectionVerdict::Unsatisfiable(failures),
    })
}

/// Symbol ↦ catalog entry of the matching arity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloneAssignment {
    /// Index into the catalog of the symbol's arity.
    pub entries: Vec<usize>,
    pub ops: Vec<TableOp>,
    pub terms: Vec<Term>,
    /// Per equation, indices of (β_s, β_t) in the outside set; empty for plain satisfiability.
    pub outside: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CloneVerdict {
    Satisfiable(CloneAssignment),
    /// No assignment among the generated catalog entries. When `saturated`,
    /// every catalog used is the full clone part, so Σ is unsatisfiable.
    NotFound { saturated: bool },
}

impl CloneVerdict {
    pub fn assignment(&self) -> Option<&CloneAssignment> {
        match self {
            CloneVerdict::Satisfiable(a) => Some(a),
            CloneVerdict::NotFound { .. } => None,
        }
    }
}

/// Backtracking over symbol assignments, symbols in declaration order and
/// catalog entries in catalog order. `check(eq, ops)` decides one equation
/// once every symbol it mentions is assigned and may return a witness.
type WitnessCheck<'a, W> = dyn Fn(usize, &[TableOp]) -> Result<Option<W>> + 'a;

fn search<W: Clone>(
    sys: &EquationSystem,
    clone: &FiniteClone,
    check: &WitnessCheck<W>,
) -> Result<Option<(Vec<usize>, Vec<W>)>> {
    for (name, &r) in sys.names.iter().zip(&sys.arities) {
        if clone.catalog(r).is_none() {
            return Err(Error::Arity(format!(
                "symbol `{name}` has arity {r}, above the clone's arity cap {}",
                clone.caps().max_arity
            )));
        }
    }
    // equation i is checked right after symbol ready[i] - 1 is assigned
    let ready: Vec<usize> = sys
        .equations
        .iter()
        .map(|e| {
            e.lhs
                .symbols()
                .union(&e.rhs.symbols())
                .max()
                .map_or(0, |&s| s + 1)
        })
        .collect();
    let placeholder = TableOp::selector(clone.base(), 1, 0);
    let mut ops = vec![placeholder; sys.names.len()];
    let mut witnesses: Vec<Option<W>> = vec![None; sys.equations.len()];
    for (i, _) in ready.iter().enumerate().filter(|(_, &r)| r == 0) {
        match check(i, &ops)? {
            Some(w) => witnesses[i] = Some(w),
            None => return Ok(None),
        }
    }
    let mut choice = Vec::new();
    if assign(sys, clone, check, &ready, 0, &mut ops, &mut choice, &mut witnesses)? {
        Ok(Some((choice, witnesses.into_iter().map(Option::unwrap).collect())))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn assign<W: Clone>(
    sys: &EquationSystem,
    clone: &FiniteClone,
    check: &WitnessCheck<W>,
    ready: &[usize],
    symbol: usize,
    ops: &mut Vec<TableOp>,
    choice: &mut Vec<usize>,
    witnesses: &mut Vec<Option<W>>,
) -> Result<bool> {
    if symbol == sys.names.len() {
        return Ok(true);
    }
    let cat = clone.catalog(sys.arities[symbol]).unwrap();
    'entries: for (idx, entry) in cat.entries.iter().enumerate() {
        ops[symbol] = entry.op.clone();
        for eq in (0..ready.len()).filter(|&i| ready[i] == symbol + 1) {
            match check(eq, ops)? {
                Some(w) => witnesses[eq] = Some(w),
                None => continue 'entries,
            }
        }
        choice.push(idx);
        if assign(sys, clone, check, ready, symbol + 1, ops, choice, witnesses)? {
            return Ok(true);
        }
        choice.pop();
    }
    Ok(false)
}

fn used_catalogs_saturated(sys: &EquationSystem, clone: &FiniteClone) -> bool {
    sys.arities
        .iter()
        .all(|&r| clone.catalog(r).is_some_and(|c| c.saturated))
}

fn sides(sys: &EquationSystem, eq: usize, ops: &[TableOp], base: usize) -> Result<(TableOp, TableOp)> {
    let refs: Vec<&TableOp> = ops.iter().collect();
    let e = &sys.equations[eq];
    Ok((
        evaluate_term(&e.lhs, &refs, base, sys.arity)?,
        evaluate_term(&e.rhs, &refs, base, sys.arity)?,
    ))
}

fn build_assignment(
    sys: &EquationSystem,
    clone: &FiniteClone,
    entries: Vec<usize>,
    outside: Vec<(usize, usize)>,
) -> CloneAssignment {
    let (ops, terms) = entries
        .iter()
        .zip(&sys.arities)
        .map(|(&i, &r)| {
            let e = &clone.catalog(r).unwrap().entries[i];
            (e.op.clone(), e.term.clone())
        })
        .unzip();
    CloneAssignment {
        entries,
        ops,
        terms,
        outside,
    }
}

/// Whether `assignment` satisfies Σ in the clone, by fresh evaluation.
pub fn verify_in_clone(sys: &EquationSystem, ops: &[TableOp], base: usize) -> Result<bool> {
    for eq in 0..sys.equations.len() {
        let (l, r) = sides(sys, eq, ops, base)?;
        if l.table() != r.table() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for a clone homomorphism from the term clone of Σ into `clone`.
pub fn satisfiable_in_clone(sys: &EquationSystem, clone: &FiniteClone) -> Result<CloneVerdict> {
    let base = clone.base();
    let check = |eq: usize, ops: &[TableOp]| -> Result<Option<()>> {
        let (l, r) = sides(sys, eq, ops, base)?;
        Ok((l.table() == r.table()).then_some(()))
    };
    match search(sys, clone, &check)? {
        Some((entries, _)) => {
            let a = build_assignment(sys, clone, entries, Vec::new());
            if !verify_in_clone(sys, &a.ops, base)? {
                return Err(Error::Internal("assignment failed re-verification".into()));
            }
            Ok(CloneVerdict::Satisfiable(a))
        }
        None => Ok(CloneVerdict::NotFound {
            saturated: used_catalogs_saturated(sys, clone),
        }),
    }
}

/// Whether some (β_s, β_t) from `outside` equalizes every equation.
pub fn verify_modulo_outside(
    sys: &EquationSystem,
    ops: &[TableOp],
    outside: &[TableOp],
    witnesses: &[(usize, usize)],
    base: usize,
) -> Result<bool> {
    if witnesses.len() != sys.equations.len() {
        return Ok(false);
    }
    for (eq, &(bs, bt)) in witnesses.iter().enumerate() {
        let (l, r) = sides(sys, eq, ops, base)?;
        let (Some(bs), Some(bt)) = (outside.get(bs), outside.get(bt)) else {
            return Ok(false);
        };
        if bs.compose(&[&l])?.table() != bt.compose(&[&r])?.table() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Satisfiability where each equation need only hold after composing its
/// sides with some unary maps from `outside`.
pub fn satisfiable_modulo_outside(
    sys: &EquationSystem,
    clone: &FiniteClone,
    outside: &[TableOp],
) -> Result<CloneVerdict> {
    let base = clone.base();
    if outside.is_empty() {
        return Err(Error::Arity("the outside set must be nonempty".into()));
    }
    if let Some(b) = outside.iter().find(|b| b.arity() != 1 || b.base() != base) {
        return Err(Error::Arity(format!(
            "outside maps must be unary on {base} elements (got arity {} on {})",
            b.arity(),
            b.base()
        )));
    }
    let check = |eq: usize, ops: &[TableOp]| -> Result<Option<(usize, usize)>> {
        let (l, r) = sides(sys, eq, ops, base)?;
        let images_l = outside
            .iter()
            .map(|b| b.compose(&[&l]))
            .collect::<Result<Vec<_>>>()?;
        for (bt, beta_t) in outside.iter().enumerate() {
            let right = beta_t.compose(&[&r])?;
            if let Some(bs) = images_l.iter().position(|x| x.table() == right.table()) {
                return Ok(Some((bs, bt)));
            }
        }
        Ok(None)
    };
    match search(sys, clone, &check)? {
        Some((entries, witnesses)) => {
            let a = build_assignment(sys, clone, entries, witnesses);
            if !verify_modulo_outside(sys, &a.ops, outside, &a.outside, base)? {
                return Err(Error::Internal("assignment failed re-verification".into()));
            }
            Ok(CloneVerdict::Satisfiable(a))
        }
        None => Ok(CloneVerdict::NotFound {
            saturated: used_catalogs_saturated(sys, clone),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjHomOutcome {
    /// `sigma` (generator ↦ 0-based coordinate) respects every generated
    /// collision. Only a proof when `saturated`; otherwise verified up to caps.
    Found {
        sigma: Vec<usize>,
        survivors: usize,
        saturated: bool,
    },
    /// No coordinate assignment survives; `witness` is satisfiable in the
    /// clone and not in the projection clone.
    Refuted { witness: EquationSystem },
}

/// Searches for a homomorphism from the clone to the projection clone.
///
/// A homomorphism is determined by the coordinates of the generators, and
/// must identify the collapses of any two terms with equal tables.
pub fn has_projective_homomorphism(clone: &FiniteClone) -> Result<ProjHomOutcome> {
    let names = clone.generator_names();
    let arities: Vec<usize> = clone.generators().iter().map(|(_, g)| g.arity()).collect();
    let symbols: Vec<(String, usize)> = names.iter().cloned().zip(arities.iter().copied()).collect();
    let mut pairs: Vec<(Term, Term)> = Vec::new();
    if clone.base() == 1 && clone.catalogs().len() >= 2 {
        // on one element all binary selectors coincide
        pairs.push((Term::Var(0), Term::Var(1)));
    }
    for cat in clone.catalogs() {
        for c in &cat.collisions {
            pairs.push((cat.entries[c.entry].term.clone(), c.term.clone()));
        }
    }
    let all = EquationSystem::new(symbols, pairs)?;
    match satisfiable_in_projections(&all)? {
        ProjectionVerdict::Satisfiable(sigma) => {
            let mut survivors = 0usize;
            for_each_sigma(&all.arities, |s| {
                if collapse_in_projections(&all, s).iter().all(|&ok| ok) {
                    survivors += 1;
                }
                true
            });
            Ok(ProjHomOutcome::Found {
                sigma,
                survivors,
                saturated: clone.is_saturated(),
            })
        }
        ProjectionVerdict::Unsatisfiable(failures) => {
            let mut keep: Vec<usize> = failures.iter().map(|&(_, eq)| eq).collect();
            keep.sort_unstable();
            keep.dedup();
            // greedy minimization
            let mut i = 0;
            while i < keep.len() {
                let mut trial = keep.clone();
                trial.remove(i);
                if !satisfiable_in_projections(&all.subsystem(&trial))?.is_satisfiable() {
                    keep = trial;
                } else {
                    i += 1;
                }
            }
            Ok(ProjHomOutcome::Refuted {
                witness: all.subsystem(&keep),
            })
        }
    }
}
