//! Lifting type-clone solutions back to concrete operations.
//!
//! A solution of Σ in the type clone is realized by generator terms over
//! growing finite sets `A_j`. On each `A_j` both sides of every equation
//! have the same pattern, so automorphisms `α_s, α_t` equalize them there.
//! The sequence of witnesses is then searched for a stable joint pattern,
//! the finite shadow of an accumulation point.

use std::collections::{BTreeSet, HashMap};

use crate::canonical::{order_term_of, xi_infty, CanonCaps};
use crate::clones::{evaluate_term, generate, CloneCaps, FiniteClone, TableOp};
use crate::equations::{
    has_projective_homomorphism, satisfiable_in_clone, verify_in_clone, CloneVerdict, EquationSystem,
    ProjHomOutcome,
};
use crate::error::{Error, Result};
use crate::operation::{LexRealizer, Operation, OrderTerm, TypeOperation};
use crate::rational::{self, Rational};
use crate::structures::{
    pattern_of, witness_partial_automorphism, Pattern, Structure, SymbolicStructure, SymmetryMap,
};
use crate::term::Term;

/// Largest argument matrix (`|A|^n` columns).
pub const MAX_COLUMNS: u128 = 1_000_000;

/// `A_j = {0, 1, …, j}` for `j = 1..=depth`.
pub fn default_sets(depth: usize) -> Vec<Vec<Rational>> {
    (1..=depth)
        .map(|j| (0..=j as i64).map(rational::int).collect())
        .collect()
}

/// `n` rows whose columns list `A^n` once each, in lexicographic order.
pub fn enumerate_argument_matrix(set: &[Rational], n: usize) -> Result<Vec<Vec<Rational>>> {
    if set.is_empty() {
        return Err(Error::Arity("the argument set must be nonempty".into()));
    }
    let total = (set.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_COLUMNS {
        return Err(Error::cap("argument columns |A|^n", total, MAX_COLUMNS));
    }
    let mut rows = vec![Vec::with_capacity(total as usize); n];
    let mut choice = vec![0usize; n];
    loop {
        for (row, &c) in rows.iter_mut().zip(&choice) {
            row.push(set[c].clone());
        }
        if !crate::clones::advance(&mut choice, set.len()) {
            break;
        }
    }
    Ok(rows)
}

fn columns(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let len = rows.first().map_or(1, Vec::len);
    (0..len)
        .map(|c| rows.iter().map(|r| r[c].clone()).collect())
        .collect()
}

/// Sends both value tuples onto their common rank tuple, if the patterns agree.
pub fn find_equalizers(
    s_val: &[Rational],
    t_val: &[Rational],
    kind: SymbolicStructure,
) -> Option<(SymmetryMap, SymmetryMap)> {
    let p = pattern_of(kind, s_val);
    if p != pattern_of(kind, t_val) {
        return None;
    }
    let ranks: Vec<Rational> = p.labels.iter().map(|&l| rational::int(l as i64)).collect();
    Some((
        witness_partial_automorphism(kind, s_val, &ranks)?,
        witness_partial_automorphism(kind, t_val, &ranks)?,
    ))
}

/// A solution of Σ in the type clone, realized by generator terms.
#[derive(Clone, Debug)]
pub struct LiftInstance {
    pub kind: SymbolicStructure,
    pub generators: Vec<Operation>,
    pub system: EquationSystem,
    /// Per symbol of Σ, a term over the generators of the symbol's arity.
    pub assignment: Vec<Term>,
}

impl LiftInstance {
    /// The concrete operations `ξ′(f)` for the symbols of Σ.
    pub fn concrete_symbols(&self) -> Result<Vec<OrderTerm>> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                g.as_term()
                    .ok_or_else(|| Error::Unsupported(format!("generator `{}` is not an order term", g.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        if self.assignment.len() != self.system.arities.len() {
            return Err(Error::Arity("one generator term per symbol of Σ is required".into()));
        }
        self.assignment
            .iter()
            .map(|t| order_term_of(t, &gens))
            .collect()
    }

    /// The type-clone solution `ξ = ξ_∞ ∘ ξ′`, as tables on `m`-types.
    pub fn type_solution(&self, caps: &CanonCaps) -> Result<Vec<TableOp>> {
        let s = Structure::Symbolic(self.kind);
        let images = xi_infty(&self.generators, &s, caps)?;
        let refs: Vec<&TableOp> = images.iter().map(|(_, t)| &t.op).collect();
        let base = s.type_space(s.stable_arity(), &caps.structure)?.len();
        self.assignment
            .iter()
            .zip(&self.system.arities)
            .map(|(t, &r)| evaluate_term(t, &refs, base, r))
            .collect()
    }
}

/// `(α_s, α_t)` for every equation, certified on `set`.
#[derive(Clone, Debug)]
pub struct WitnessTuple {
    pub set: Vec<Rational>,
    pub maps: Vec<(SymmetryMap, SymmetryMap)>,
    pub columns: usize,
}

/// Lifts after checking that the instance solves Σ in the type clone.
pub fn lift(
    instance: &LiftInstance,
    sets: &[Vec<Rational>],
    caps: &CanonCaps,
) -> Result<Vec<WitnessTuple>> {
    let tables = instance.type_solution(caps)?;
    let s = Structure::Symbolic(instance.kind);
    let base = s.type_space(s.stable_arity(), &caps.structure)?.len();
    if !verify_in_clone(&instance.system, &tables, base)? {
        return Err(Error::Hypothesis(
            "the assignment does not satisfy Σ in the type clone".into(),
        ));
    }
    lift_unchecked(instance, sets)
}

/// Lifts without the type-clone check; equalizer failures are reported.
pub fn lift_unchecked(instance: &LiftInstance, sets: &[Vec<Rational>]) -> Result<Vec<WitnessTuple>> {
    let symbols = instance.concrete_symbols()?;
    let sides: Vec<(OrderTerm, OrderTerm)> = instance
        .system
        .equations
        .iter()
        .map(|e| Ok((order_term_of(&e.lhs, &symbols.iter().collect::<Vec<_>>())?, order_term_of(&e.rhs, &symbols.iter().collect::<Vec<_>>())?)))
        .collect::<Result<_>>()?;
    let n = instance.system.arity;
    let kind = instance.kind;
    let mut out = Vec::with_capacity(sets.len());
    for set in sets {
        let points = columns(&enumerate_argument_matrix(set, n)?);
        let mut session = LexRealizer::default();
        let mut maps = Vec::with_capacity(sides.len());
        for (eq, (s, t)) in sides.iter().enumerate() {
            let s_val = s.eval_batch(&points, &mut session);
            let t_val = t.eval_batch(&points, &mut session);
            let Some((alpha_s, alpha_t)) = find_equalizers(&s_val, &t_val, kind) else {
                return Err(Error::Equalizer(violation(&instance.system, eq, &points, &s_val, &t_val, kind)));
            };
            for (x, y) in s_val.iter().zip(&t_val) {
                if alpha_s.apply(x) != alpha_t.apply(y) {
                    return Err(Error::Internal("equalizers disagree on a column".into()));
                }
            }
            maps.push((alpha_s, alpha_t));
        }
        out.push(WitnessTuple {
            set: set.clone(),
            maps,
            columns: points.len(),
        });
    }
    Ok(out)
}

fn violation(
    sys: &EquationSystem,
    eq: usize,
    points: &[Vec<Rational>],
    s_val: &[Rational],
    t_val: &[Rational],
    kind: SymbolicStructure,
) -> String {
    for a in 0..s_val.len() {
        for b in a + 1..s_val.len() {
            let ps = pattern_of(kind, &[&s_val[a], &s_val[b]]);
            let pt = pattern_of(kind, &[&t_val[a], &t_val[b]]);
            if ps != pt {
                return format!(
                    "equation `{}` on columns ({}) and ({}): left side has type {ps}, right side {pt}",
                    sys.display_equation(eq),
                    rational::render_all(&points[a]),
                    rational::render_all(&points[b]),
                );
            }
        }
    }
    format!("equation `{}`: patterns differ", sys.display_equation(eq))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccumulationReport {
    pub depth: usize,
    pub points: Vec<Rational>,
    pub pattern: Pattern,
    /// Indices into the witness list of the stable subsequence.
    pub indices: Vec<usize>,
    pub eligible: usize,
}

/// The joint pattern of every witness map on `points`, concatenated.
pub fn joint_pattern(w: &WitnessTuple, points: &[Rational], kind: SymbolicStructure) -> Pattern {
    let values: Vec<Rational> = w
        .maps
        .iter()
        .flat_map(|(a, b)| a.apply_all(points).into_iter().chain(b.apply_all(points)))
        .collect();
    pattern_of(kind, &values)
}

/// Finds a subsequence of witnesses whose joint pattern on the first `depth`
/// universe points is constant. Witnesses whose set has fewer than `depth`
/// points are skipped.
pub fn approximate_accumulation(
    witnesses: &[WitnessTuple],
    depth: usize,
    kind: SymbolicStructure,
) -> Result<AccumulationReport> {
    let mut seen = BTreeSet::new();
    let mut universe = Vec::new();
    for w in witnesses {
        for x in &w.set {
            if seen.insert(x.clone()) {
                universe.push(x.clone());
            }
        }
    }
    let eligible: Vec<usize> = (0..witnesses.len())
        .filter(|&i| witnesses[i].set.len() >= depth)
        .collect();
    if eligible.len() < 2 || universe.len() < depth {
        return Err(Error::Hypothesis(format!(
            "need at least 2 witnesses on {depth} points, have {}",
            eligible.len()
        )));
    }
    let points: Vec<Rational> = universe[..depth].to_vec();
    let mut groups: HashMap<Pattern, Vec<usize>> = HashMap::new();
    for &i in &eligible {
        groups
            .entry(joint_pattern(&witnesses[i], &points, kind))
            .or_default()
            .push(i);
    }
    // most frequent; ties go to the pattern seen last
    let (pattern, indices) = groups
        .into_iter()
        .max_by_key(|(_, idx)| (idx.len(), *idx.last().unwrap()))
        .unwrap();
    Ok(AccumulationReport {
        depth,
        points,
        pattern,
        indices,
        eligible: eligible.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferConfig {
    pub canon: CanonCaps,
    pub clone: CloneCaps,
    /// Number of sets `A_1..A_J` to lift over.
    pub lift_depth: usize,
    /// Points used by the accumulation step.
    pub accumulation_depth: usize,
}

impl Default for TransferConfig {
    fn default() -> Self {
        TransferConfig {
            canon: CanonCaps::default(),
            clone: CloneCaps {
                max_arity: 3,
                max_depth: 4,
                max_catalog: 100_000,
            },
            lift_depth: 3,
            accumulation_depth: 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub instance: LiftInstance,
    pub witnesses: Vec<WitnessTuple>,
    pub accumulation: Option<AccumulationReport>,
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    pub images: Vec<(String, TypeOperation)>,
    pub clone: FiniteClone,
    pub outcome: ProjHomOutcome,
    pub lifted: Option<LiftReport>,
}

/// Type images, projective-homomorphism analysis of the type clone, and,
/// on refutation over a symbolic structure, the lifted witnesses.
pub fn analyze_transfer(
    s: &Structure,
    generators: &[Operation],
    config: &TransferConfig,
) -> Result<TransferReport> {
    let images = xi_infty(generators, s, &config.canon)?;
    let base = s.type_space(s.stable_arity(), &config.canon.structure)?.len();
    let clone = generate(
        base,
        images.iter().map(|(n, t)| (n.clone(), t.op.clone())).collect(),
        config.clone,
    )?;
    let outcome = has_projective_homomorphism(&clone)?;
    let lifted = match (&outcome, s) {
        (ProjHomOutcome::Refuted { witness }, Structure::Symbolic(kind)) => {
            let CloneVerdict::Satisfiable(a) = satisfiable_in_clone(witness, &clone)? else {
                return Err(Error::Internal("refutation witness is not satisfiable in the clone".into()));
            };
            let instance = LiftInstance {
                kind: *kind,
                generators: generators.to_vec(),
                system: witness.clone(),
                assignment: a.terms,
            };
            let witnesses = lift(&instance, &default_sets(config.lift_depth), &config.canon)?;
            let accumulation = approximate_accumulation(&witnesses, config.accumulation_depth, *kind).ok();
            Some(LiftReport {
                instance,
                witnesses,
                accumulation,
            })
        }
        _ => None,
    };
    Ok(TransferReport {
        images,
        clone,
        outcome,
        lifted,
    })
}
