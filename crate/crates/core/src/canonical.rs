//! Canonicity of operations and their images on type spaces.
//!
//! An operation is canonical when the type of its componentwise image
//! depends only on the types of its arguments. For canonical operations,
//! `ξ_k` records that dependence as an operation on the `k`-types.

use std::collections::HashMap;
use std::fmt;

use crate::clones::{evaluate_term, generate, CloneCaps, TableOp};
use crate::error::{Error, Result};
use crate::operation::{Operation, OperationBody, OrderTerm, TypeOperation};
use crate::rational::{self, Rational};
use crate::structures::{
    automorphisms, for_each_pattern, orbits_with, pattern_count, pattern_of,
    witness_partial_automorphism, FiniteStructure, Pattern, Permutation, Structure,
    StructureCaps, SymbolicStructure, SymmetryMap, TypeSpace,
};
use crate::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonCaps {
    /// `None` selects `max(m, 3)`.
    pub k_max: Option<usize>,
    pub structure: StructureCaps,
    /// Largest number of joint patterns enumerated by the symbolic check.
    pub max_joint_patterns: u128,
}

impl Default for CanonCaps {
    fn default() -> Self {
        CanonCaps {
            k_max: None,
            structure: StructureCaps::default(),
            max_joint_patterns: 1_000_000,
        }
    }
}

impl CanonCaps {
    pub fn k_max_for(&self, s: &Structure) -> usize {
        self.k_max.unwrap_or_else(|| s.stable_arity().max(3))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<C> {
    Canonical,
    NotCanonical(C),
}

impl<C> Verdict<C> {
    pub fn is_canonical(&self) -> bool {
        matches!(self, Verdict::Canonical)
    }
}

/// Two argument lists with equal argument orbits and different image orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCounterexample {
    pub k: usize,
    pub first: Vec<Vec<usize>>,
    pub second: Vec<Vec<usize>>,
    /// `alphas[i]` maps `first[i]` onto `second[i]`.
    pub alphas: Vec<Permutation>,
    pub first_image: Vec<usize>,
    pub second_image: Vec<usize>,
}

/// Two realizations with equal per-argument patterns and different image patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicCounterexample {
    pub k: usize,
    pub first: Vec<Vec<Rational>>,
    pub second: Vec<Vec<Rational>>,
    pub alphas: Vec<SymmetryMap>,
    pub first_image: Pattern,
    pub second_image: Pattern,
}

impl fmt::Display for FiniteCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={}: arguments {:?} give {:?}, arguments {:?} give {:?}",
            self.k, self.first, self.first_image, self.second, self.second_image
        )
    }
}

impl fmt::Display for SymbolicCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |args: &[Vec<Rational>]| {
            args.iter()
                .map(|a| format!("({})", rational::render_all(a).replace(' ', ",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "k={}: arguments {} give {}, arguments {} give {}",
            self.k,
            show(&self.first),
            self.first_image,
            show(&self.second),
            self.second_image
        )
    }
}

fn apply_table(f: &TableOp, args: &[Vec<usize>]) -> Vec<usize> {
    let k = args[0].len();
    let mut point = vec![0; args.len()];
    (0..k)
        .map(|j| {
            for (slot, a) in point.iter_mut().zip(args) {
                *slot = a[j];
            }
            f.eval(&point)
        })
        .collect()
}

/// Exhaustive canonicity check of a table over a finite structure, `k = 1..=k_max`.
pub fn is_canonical_finite(
    f: &TableOp,
    s: &FiniteStructure,
    k_max: usize,
    caps: &StructureCaps,
) -> Result<Verdict<FiniteCounterexample>> {
    if f.base() != s.domain_size() {
        return Err(Error::Arity(format!(
            "table on {} elements, structure on {}",
            f.base(),
            s.domain_size()
        )));
    }
    let autos = automorphisms(s);
    let n = f.arity();
    let d = s.domain_size() as u128;
    for k in 1..=k_max {
        let types = orbits_with(s, k, caps, &autos)?;
        let per_arg = d.pow(k as u32);
        let total = per_arg.checked_pow(n as u32).unwrap_or(u128::MAX);
        if total > caps.max_tuples {
            return Err(Error::cap("argument lists (domain_size^k)^arity", total, caps.max_tuples));
        }
        let per_arg = per_arg as usize;
        let decode = |mut code: usize| {
            let mut t = vec![0; k];
            for slot in t.iter_mut().rev() {
                *slot = code % s.domain_size();
                code /= s.domain_size();
            }
            t
        };
        let mut seen: HashMap<Vec<usize>, (usize, Vec<usize>)> = HashMap::new();
        let mut choice = vec![0usize; n];
        loop {
            let args: Vec<Vec<usize>> = choice.iter().map(|&c| decode(c)).collect();
            let key: Vec<usize> = args.iter().map(|a| types.classify(a).unwrap().0).collect();
            let image = apply_table(f, &args);
            let image_type = types.classify(&image).unwrap().0;
            match seen.get(&key) {
                None => {
                    seen.insert(key, (image_type, choice.clone()));
                }
                Some((t, _)) if *t == image_type => {}
                Some((_, witness)) => {
                    let first: Vec<Vec<usize>> = witness.iter().map(|&c| decode(c)).collect();
                    let alphas = first
                        .iter()
                        .zip(&args)
                        .map(|(a, b)| {
                            autos
                                .iter()
                                .find(|g| g.apply_tuple(a) == *b)
                                .cloned()
                                .ok_or_else(|| Error::Internal("orbit without automorphism".into()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let first_image = apply_table(f, &first);
                    return Ok(Verdict::NotCanonical(FiniteCounterexample {
                        k,
                        first,
                        second: args,
                        alphas,
                        first_image,
                        second_image: image,
                    }));
                }
            }
            if !crate::clones::advance(&mut choice, per_arg) {
                break;
            }
        }
    }
    Ok(Verdict::Canonical)
}

/// Exact canonicity check of an order term over a symbolic structure.
///
/// Quantifies over every joint pattern of the `arity·k` argument entries;
/// order terms are pattern-determined, so each joint pattern needs one
/// evaluation.
pub fn is_canonical_symbolic(
    f: &OrderTerm,
    arity: usize,
    kind: SymbolicStructure,
    k_max: usize,
    caps: &CanonCaps,
) -> Result<Verdict<SymbolicCounterexample>> {
    if f.var_bound() > arity {
        return Err(Error::Arity(format!("term uses x{} but arity is {arity}", f.var_bound())));
    }
    for k in 1..=k_max {
        let count = pattern_count(kind, arity * k);
        if count > caps.max_joint_patterns {
            return Err(Error::cap("joint patterns", count, caps.max_joint_patterns));
        }
        let mut seen: HashMap<Vec<Vec<usize>>, (Pattern, Vec<usize>)> = HashMap::new();
        let mut found: Option<SymbolicCounterexample> = None;
        for_each_pattern(kind, arity * k, &mut |joint| {
            if found.is_some() {
                return;
            }
            let args = split_joint(joint, arity, k);
            let key: Vec<Vec<usize>> = args.iter().map(|a| pattern_of(kind, a).labels).collect();
            let image = pattern_of(kind, &f.eval_tuples(&args));
            match seen.get(&key) {
                None => {
                    seen.insert(key, (image, joint.to_vec()));
                }
                Some((p, _)) if *p == image => {}
                Some((p, witness)) => {
                    let first = split_joint(witness, arity, k);
                    let alphas = first
                        .iter()
                        .zip(&args)
                        .map(|(a, b)| witness_partial_automorphism(kind, a, b).unwrap())
                        .collect();
                    found = Some(SymbolicCounterexample {
                        k,
                        first,
                        second: args,
                        alphas,
                        first_image: p.clone(),
                        second_image: image,
                    });
                }
            }
        });
        if let Some(c) = found {
            return Ok(Verdict::NotCanonical(c));
        }
    }
    Ok(Verdict::Canonical)
}

fn split_joint(joint: &[usize], arity: usize, k: usize) -> Vec<Vec<Rational>> {
    (0..arity)
        .map(|i| {
            joint[i * k..(i + 1) * k]
                .iter()
                .map(|&v| rational::int(v as i64))
                .collect()
        })
        .collect()
}

/// Canonicity of any supported operation/structure pairing up to `k_max`;
/// `Err(NotCanonical)` carries the counterexample text.
pub fn require_canonical(op: &Operation, s: &Structure, k_max: usize, caps: &CanonCaps) -> Result<()> {
    let detail = match (&op.body, s) {
        (OperationBody::Concrete(t), Structure::Finite(fs)) => {
            match is_canonical_finite(t, fs, k_max, &caps.structure)? {
                Verdict::Canonical => return Ok(()),
                Verdict::NotCanonical(c) => c.to_string(),
            }
        }
        (OperationBody::Term(t), Structure::Symbolic(kind)) => {
            match is_canonical_symbolic(t, op.arity, *kind, k_max, caps)? {
                Verdict::Canonical => return Ok(()),
                Verdict::NotCanonical(c) => c.to_string(),
            }
        }
        (OperationBody::Types(_), _) => {
            return Err(Error::Unsupported("canonicity of a type table".into()))
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "operation `{}` does not act on {}",
                op.name,
                s.describe()
            )))
        }
    };
    Err(Error::NotCanonical {
        name: op.name.clone(),
        detail,
    })
}

/// The table of `ξ_k(f)`, evaluated on canonical representatives, without
/// re-checking canonicity.
pub fn type_table(op: &Operation, types: &TypeSpace) -> Result<TableOp> {
    let n = op.arity;
    let size = types.len();
    let k = types.k();
    let mut table = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let out = match &op.body {
            OperationBody::Concrete(t) => {
                let args: Vec<Vec<usize>> = choice
                    .iter()
                    .map(|&c| types.representative(crate::structures::TypeId(c)).to_vec())
                    .collect();
                types.classify(&apply_table(t, &args))
            }
            OperationBody::Term(t) => {
                let args: Vec<Vec<Rational>> = choice
                    .iter()
                    .map(|&c| types.representative_rationals(crate::structures::TypeId(c)))
                    .collect();
                types.classify_rationals(&t.eval_tuples(&args))
            }
            OperationBody::Types(t) if t.k == k && t.op.base() == size => {
                Some(crate::structures::TypeId(t.op.eval(&choice)))
            }
            OperationBody::Types(_) => None,
        }
        .ok_or_else(|| {
            Error::Unsupported(format!("operation `{}` does not act on these types", op.name))
        })?;
        table.push(out.0);
        if !crate::clones::advance(&mut choice, size) {
            break;
        }
    }
    TableOp::new(size, n, table)
}

/// `ξ_k(f)`; checks canonicity up to `k` first.
pub fn type_image(op: &Operation, s: &Structure, k: usize, caps: &CanonCaps) -> Result<TypeOperation> {
    let types = s.type_space(k, &caps.structure)?;
    if !matches!(op.body, OperationBody::Types(_)) {
        require_canonical(op, s, k, caps)?;
    }
    Ok(TypeOperation {
        k,
        op: type_table(op, &types)?,
    })
}

/// `ξ_∞` of every generator: canonicity is required up to the configured
/// `k_max`, images are taken at `k = m`.
pub fn xi_infty(
    generators: &[Operation],
    s: &Structure,
    caps: &CanonCaps,
) -> Result<Vec<(String, TypeOperation)>> {
    let m = s.stable_arity();
    let k_max = caps.k_max_for(s).max(m);
    let types = s.type_space(m, &caps.structure)?;
    generators
        .iter()
        .map(|g| {
            require_canonical(g, s, k_max, caps)?;
            Ok((
                g.name.clone(),
                TypeOperation {
                    k: m,
                    op: type_table(g, &types)?,
                },
            ))
        })
        .collect()
}

/// Builds the operation denoted by `term` over `generators` (symbol `i` = generator `i`).
pub fn instantiate(term: &Term, generators: &[Operation], arity: usize, name: &str) -> Result<Operation> {
    if generators.iter().all(|g| g.as_term().is_some()) {
        let terms: Vec<&OrderTerm> = generators.iter().map(|g| g.as_term().unwrap()).collect();
        let body = order_term_of(term, &terms)?;
        if body.var_bound() > arity {
            return Err(Error::Arity(format!("term needs {} variables", body.var_bound())));
        }
        return Ok(Operation::term(name, arity, body));
    }
    let tables: Vec<&TableOp> = generators
        .iter()
        .map(|g| {
            g.as_table()
                .ok_or_else(|| Error::Unsupported("cannot mix order terms and tables".into()))
        })
        .collect::<Result<_>>()?;
    let base = tables.first().map(|t| t.base()).ok_or_else(|| {
        Error::Unsupported("a table term needs at least one generator for its base".into())
    })?;
    let op = evaluate_term(term, &tables, base, arity)?;
    Ok(match generators[0].body {
        OperationBody::Types(ref t) => Operation {
            name: name.to_string(),
            arity,
            body: OperationBody::Types(TypeOperation { k: t.k, op }),
        },
        _ => Operation::concrete(name, op),
    })
}

/// Substitutes generator order terms into a term over generator symbols.
pub fn order_term_of(term: &Term, generators: &[&OrderTerm]) -> Result<OrderTerm> {
    match term {
        Term::Var(i) => Ok(OrderTerm::Var(*i)),
        Term::App(f, args) => {
            let g = generators
                .get(*f)
                .ok_or_else(|| Error::Arity(format!("no generator #{f}")))?;
            let args = args
                .iter()
                .map(|a| order_term_of(a, generators))
                .collect::<Result<Vec<_>>>()?;
            if g.var_bound() > args.len() {
                return Err(Error::Arity(format!("generator #{f} applied to too few arguments")));
            }
            Ok(g.substitute(&args))
        }
    }
}

/// All terms of `arity` variables over symbols with the given arities, of depth ≤ `depth`.
pub fn enumerate_terms(symbol_arities: &[usize], arity: usize, depth: usize) -> Vec<Term> {
    let mut level: Vec<Term> = (0..arity).map(Term::Var).collect();
    for _ in 0..depth {
        let mut next: Vec<Term> = (0..arity).map(Term::Var).collect();
        for (f, &r) in symbol_arities.iter().enumerate() {
            if level.is_empty() {
                break;
            }
            let mut choice = vec![0usize; r];
            loop {
                next.push(Term::App(f, choice.iter().map(|&c| level[c].clone()).collect()));
                if !crate::clones::advance(&mut choice, level.len()) {
                    break;
                }
            }
        }
        level = next;
    }
    level
}

/// Outcome of checking that `ξ_k` commutes with composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomomorphismReport {
    pub terms_checked: usize,
    /// A term whose image differs from the composed images, if any.
    pub mismatch: Option<Term>,
}

/// For every term up to `depth`: `ξ_k(term over generators)` equals the term
/// evaluated over the `ξ_k` images, table for table.
pub fn check_homomorphism_law(
    generators: &[Operation],
    s: &Structure,
    k: usize,
    arity: usize,
    depth: usize,
    caps: &CanonCaps,
) -> Result<HomomorphismReport> {
    let images = generators
        .iter()
        .map(|g| type_image(g, s, k, caps).map(|t| t.op))
        .collect::<Result<Vec<_>>>()?;
    let refs: Vec<&TableOp> = images.iter().collect();
    let base = s.type_space(k, &caps.structure)?.len();
    let arities: Vec<usize> = generators.iter().map(|g| g.arity).collect();
    let terms = enumerate_terms(&arities, arity, depth);
    for term in &terms {
        let composed = instantiate(term, generators, arity, "composite")?;
        let direct = type_image(&composed, s, k, caps)?.op;
        let via_images = evaluate_term(term, &refs, base, arity)?;
        if direct != via_images {
            return Ok(HomomorphismReport {
                terms_checked: terms.len(),
                mismatch: Some(term.clone()),
            });
        }
    }
    Ok(HomomorphismReport {
        terms_checked: terms.len(),
        mismatch: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorViolation {
    /// A generated pair whose low table is not the restriction of its high table.
    RestrictionMismatch { term: Term, arity: usize, index_map: Vec<usize> },
    /// Two terms agree on `k'`-types but differ on `k`-types.
    NotWellDefined { first: Term, second: Term, arity: usize },
    /// Two terms agree on `k`-types but differ on `k'`-types.
    NotInjective { first: Term, second: Term, arity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport {
    pub k: usize,
    pub k_high: usize,
    pub entries_checked: usize,
    pub saturated: bool,
    pub violation: Option<FactorViolation>,
}

impl FactorReport {
    pub fn is_consistent(&self) -> bool {
        self.violation.is_none()
    }
}

/// Spot-checks that `ξ_{k'}(f) ↦ ξ_k(f)` is a well-defined bijection on the
/// generated operations, for `m ≤ k < k'`.
pub fn check_factor_isomorphism(
    generators: &[Operation],
    s: &Structure,
    k: usize,
    k_high: usize,
    caps: &CanonCaps,
    clone_caps: CloneCaps,
) -> Result<FactorReport> {
    if !(s.stable_arity() <= k && k < k_high) {
        return Err(Error::Arity(format!(
            "need m <= k < k' (m = {}, k = {k}, k' = {k_high})",
            s.stable_arity()
        )));
    }
    let low_space = s.type_space(k, &caps.structure)?;
    let high_space = s.type_space(k_high, &caps.structure)?;
    let low = generators
        .iter()
        .map(|g| type_image(g, s, k, caps).map(|t| t.op))
        .collect::<Result<Vec<_>>>()?;
    let high = generators
        .iter()
        .map(|g| type_image(g, s, k_high, caps).map(|t| t.op))
        .collect::<Result<Vec<_>>>()?;
    compare_factor_tables(&low_space, &high_space, &low, &high, clone_caps)
}

/// The table-level core of [`check_factor_isomorphism`]; generator `i` has
/// image `low[i]` on `k`-types and `high[i]` on `k'`-types.
pub fn compare_factor_tables(
    low_space: &TypeSpace,
    high_space: &TypeSpace,
    low: &[TableOp],
    high: &[TableOp],
    clone_caps: CloneCaps,
) -> Result<FactorReport> {
    let (k, k_high) = (low_space.k(), high_space.k());
    let (nl, nh) = (low_space.len(), high_space.len());
    if low.len() != high.len() {
        return Err(Error::Arity("generator lists differ in length".into()));
    }
    // product algebra: element (l, h) encoded as l * nh + h
    let pbase = nl * nh;
    let mut gens = Vec::with_capacity(low.len());
    for (i, (l, h)) in low.iter().zip(high).enumerate() {
        if l.arity() != h.arity() || l.base() != nl || h.base() != nh {
            return Err(Error::Arity(format!("generator #{i} tables do not match the type spaces")));
        }
        let op = TableOp::from_fn(pbase, l.arity(), |args| {
            let ls: Vec<usize> = args.iter().map(|a| a / nh).collect();
            let hs: Vec<usize> = args.iter().map(|a| a % nh).collect();
            l.eval(&ls) * nh + h.eval(&hs)
        })?;
        gens.push((format!("g{}", i + 1), op));
    }
    let clone = generate(pbase, gens, clone_caps)?;

    let index_maps: Vec<Vec<usize>> = {
        let mut maps = Vec::new();
        let mut u = vec![0usize; k];
        loop {
            maps.push(u.clone());
            if !crate::clones::advance(&mut u, k_high) {
                break;
            }
        }
        maps
    };
    let restrictions: Vec<Vec<usize>> = index_maps
        .iter()
        .map(|u| {
            high_space
                .ids()
                .map(|t| high_space.restrict(t, u, low_space).map(|r| r.0))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut checked = 0;
    for cat in clone.catalogs() {
        let n = cat.arity;
        let mut by_high: HashMap<Vec<usize>, (Vec<usize>, usize)> = HashMap::new();
        let mut by_low: HashMap<Vec<usize>, (Vec<usize>, usize)> = HashMap::new();
        for (idx, entry) in cat.entries.iter().enumerate() {
            checked += 1;
            let low_t = TableOp::from_fn(nl, n, |args| {
                let enc: Vec<usize> = args.iter().map(|a| a * nh).collect();
                entry.op.eval(&enc) / nh
            })?;
            let high_t = TableOp::from_fn(nh, n, |args| entry.op.eval(args) % nh)?;
            for (u, restrict) in index_maps.iter().zip(&restrictions) {
                let mut choice = vec![0usize; n];
                loop {
                    let lows: Vec<usize> = choice.iter().map(|&h| restrict[h]).collect();
                    if low_t.eval(&lows) != restrict[high_t.eval(&choice)] {
                        return Ok(FactorReport {
                            k,
                            k_high,
                            entries_checked: checked,
                            saturated: clone.is_saturated(),
                            violation: Some(FactorViolation::RestrictionMismatch {
                                term: entry.term.clone(),
                                arity: n,
                                index_map: u.clone(),
                            }),
                        });
                    }
                    if !crate::clones::advance(&mut choice, nh) {
                        break;
                    }
                }
            }
            let violation = match by_high.get(high_t.table()) {
                Some((l, other)) if *l != low_t.table() => Some(FactorViolation::NotWellDefined {
                    first: cat.entries[*other].term.clone(),
                    second: entry.term.clone(),
                    arity: n,
                }),
                _ => match by_low.get(low_t.table()) {
                    Some((h, other)) if *h != high_t.table() => Some(FactorViolation::NotInjective {
                        first: cat.entries[*other].term.clone(),
                        second: entry.term.clone(),
                        arity: n,
                    }),
                    _ => None,
                },
            };
            if violation.is_some() {
                return Ok(FactorReport {
                    k,
                    k_high,
                    entries_checked: checked,
                    saturated: clone.is_saturated(),
                    violation,
                });
            }
            by_high.insert(high_t.table().to_vec(), (low_t.table().to_vec(), idx));
            by_low.insert(low_t.table().to_vec(), (high_t.table().to_vec(), idx));
        }
    }
    Ok(FactorReport {
        k,
        k_high,
        entries_checked: checked,
        saturated: clone.is_saturated(),
        violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::structures::{enumerate_patterns, parse_structure};

    const DLO: SymbolicStructure = SymbolicStructure::DenseLinearOrder;

    fn cycle3() -> FiniteStructure {
        parse_structure("domain 3\nrelation E 2\n0 1\n1 2\n2 0\n").unwrap()
    }

    /// Literal definition: for all argument lists and automorphisms α_i
    /// there is β with f(α(a)) = β(f(a)).
    fn canonical_by_definition(f: &TableOp, s: &FiniteStructure, k_max: usize) -> bool {
        let autos = automorphisms(s);
        let d = s.domain_size();
        let n = f.arity();
        for k in 1..=k_max {
            let per_arg = d.pow(k as u32);
            let mut choice = vec![0usize; n];
            loop {
                let args: Vec<Vec<usize>> = choice
                    .iter()
                    .map(|&c| {
                        let mut t = vec![0; k];
                        let mut c = c;
                        for slot in t.iter_mut().rev() {
                            *slot = c % d;
                            c /= d;
                        }
                        t
                    })
                    .collect();
                let image = apply_table(f, &args);
                let mut alpha_choice = vec![0usize; n];
                loop {
                    let moved: Vec<Vec<usize>> = args
                        .iter()
                        .zip(&alpha_choice)
                        .map(|(a, &g)| autos[g].apply_tuple(a))
                        .collect();
                    let moved_image = apply_table(f, &moved);
                    if !autos.iter().any(|b| b.apply_tuple(&image) == moved_image) {
                        return false;
                    }
                    if !crate::clones::advance(&mut alpha_choice, autos.len()) {
                        break;
                    }
                }
                if !crate::clones::advance(&mut choice, per_arg) {
                    break;
                }
            }
        }
        true
    }

    #[test]
    fn finite_canonicity_matches_definition() {
        let s = cycle3();
        let caps = StructureCaps::default();
        let plus = TableOp::from_fn(3, 2, |a| (a[0] + a[1]) % 3).unwrap();
        let proj = TableOp::selector(3, 2, 1);
        let rot = TableOp::from_fn(3, 1, |a| (a[0] + 1) % 3).unwrap();
        let maxop = TableOp::from_fn(3, 2, |a| a[0].max(a[1])).unwrap();
        let sq = TableOp::from_fn(3, 1, |a| (a[0] * a[0]) % 3).unwrap();
        for f in [&plus, &proj, &rot, &maxop, &sq] {
            let fast = is_canonical_finite(f, &s, 2, &caps).unwrap().is_canonical();
            assert_eq!(fast, canonical_by_definition(f, &s, 2), "{f:?}");
        }
        assert!(is_canonical_finite(&plus, &s, 2, &caps).unwrap().is_canonical());
        assert!(is_canonical_finite(&proj, &s, 3, &caps).unwrap().is_canonical());
        assert!(is_canonical_finite(&rot, &s, 3, &caps).unwrap().is_canonical());
    }

    #[test]
    fn finite_counterexample_is_checkable() {
        let s = cycle3();
        let caps = StructureCaps::default();
        let maxop = TableOp::from_fn(3, 2, |a| a[0].max(a[1])).unwrap();
        let Verdict::NotCanonical(c) = is_canonical_finite(&maxop, &s, 2, &caps).unwrap() else {
            panic!("max is not canonical on the 3-cycle");
        };
        let types = orbits_with(&s, c.k, &caps, &automorphisms(&s)).unwrap();
        for ((a, b), alpha) in c.first.iter().zip(&c.second).zip(&c.alphas) {
            assert_eq!(alpha.apply_tuple(a), *b);
            assert!(s.is_automorphism(alpha));
        }
        assert_ne!(
            types.classify(&apply_table(&maxop, &c.first)),
            types.classify(&apply_table(&maxop, &c.second))
        );
    }

    #[test]
    fn lex_is_canonical_and_min_is_not() {
        let caps = CanonCaps::default();
        let lex = Operation::lex();
        let t = lex.as_term().unwrap();
        assert!(is_canonical_symbolic(t, 2, DLO, 3, &caps).unwrap().is_canonical());
        assert!(is_canonical_symbolic(t, 2, SymbolicStructure::PureSet, 3, &caps)
            .unwrap()
            .is_canonical());
        let min = Operation::min();
        let Verdict::NotCanonical(c) =
            is_canonical_symbolic(min.as_term().unwrap(), 2, DLO, 2, &caps).unwrap()
        else {
            panic!("min is not canonical");
        };
        for (a, b) in c.first.iter().zip(&c.second) {
            assert_eq!(pattern_of(DLO, a), pattern_of(DLO, b));
        }
        let m = min.as_term().unwrap();
        assert_eq!(pattern_of(DLO, &m.eval_tuples(&c.first)), c.first_image);
        assert_eq!(pattern_of(DLO, &m.eval_tuples(&c.second)), c.second_image);
        assert_ne!(c.first_image, c.second_image);
    }

    #[test]
    fn min_counterexample_from_direct_evaluation() {
        let m = Operation::min();
        let m = m.as_term().unwrap();
        let first = m.eval_tuples(&[vec![int(0), int(1)], vec![int(1), int(0)]]);
        let second = m.eval_tuples(&[vec![int(0), int(3)], vec![int(2), int(1)]]);
        assert_eq!(pattern_of(DLO, &first).labels, vec![0, 0]);
        assert_eq!(pattern_of(DLO, &second).labels, vec![0, 1]);
    }

    #[test]
    fn maps_are_canonical() {
        let caps = CanonCaps::default();
        let alpha = crate::plmap::PLMap::interpolate(&[(int(0), int(5)), (int(1), int(100))]).unwrap();
        let t = OrderTerm::map("alpha", alpha, OrderTerm::Var(0));
        assert!(is_canonical_symbolic(&t, 1, DLO, 4, &caps).unwrap().is_canonical());
    }

    #[test]
    fn lex_type_image() {
        let caps = CanonCaps::default();
        let s = Structure::Symbolic(DLO);
        let img = type_image(&Operation::lex(), &s, 2, &caps).unwrap();
        let types = enumerate_patterns(DLO, 2, &caps.structure).unwrap();
        let eq = types.classify(&[0, 0]).unwrap().0;
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == eq { b } else { a };
                assert_eq!(img.op.eval(&[a, b]), expected);
            }
        }
        let sel = type_image(&Operation::selector(3, 1), &s, 2, &caps).unwrap();
        assert_eq!(sel.op, TableOp::selector(3, 3, 1));
        assert!(matches!(
            type_image(&Operation::min(), &s, 2, &caps),
            Err(Error::NotCanonical { .. })
        ));
        // single 1-type of the pure set
        let up = OrderTerm::map("up", crate::plmap::PLMap::translation(int(1)), OrderTerm::Var(0));
        let img = type_image(&Operation::term("up", 1, up), &Structure::Symbolic(SymbolicStructure::PureSet), 1, &caps).unwrap();
        assert_eq!(img.op, TableOp::selector(1, 1, 0));
    }

    #[test]
    fn xi_infty_examples() {
        let caps = CanonCaps::default();
        let s = Structure::Symbolic(DLO);
        assert!(xi_infty(&[], &s, &caps).unwrap().is_empty());
        let alpha = OrderTerm::map("alpha", crate::plmap::PLMap::translation(int(3)), OrderTerm::Var(0));
        let imgs = xi_infty(&[Operation::lex(), Operation::term("alpha", 1, alpha)], &s, &caps).unwrap();
        assert_eq!(imgs[0].1, type_image(&Operation::lex(), &s, 2, &caps).unwrap());
        assert_eq!(imgs[1].1.op, TableOp::selector(3, 1, 0));
    }

    #[test]
    fn factor_isomorphism_for_lex() {
        let caps = CanonCaps::default();
        let s = Structure::Symbolic(DLO);
        let clone_caps = CloneCaps { max_arity: 2, max_depth: 3, max_catalog: 10_000 };
        let r = check_factor_isomorphism(&[Operation::lex()], &s, 2, 3, &caps, clone_caps).unwrap();
        assert!(r.is_consistent(), "{r:?}");
        let r = check_factor_isomorphism(&[], &s, 2, 3, &caps, clone_caps).unwrap();
        assert!(r.is_consistent());
        assert!(r.saturated);
    }

    #[test]
    fn corrupted_type_table_is_reported() {
        let caps = CanonCaps::default();
        let s = Structure::Symbolic(DLO);
        let low_space = s.type_space(2, &caps.structure).unwrap();
        let high_space = s.type_space(3, &caps.structure).unwrap();
        let low = type_image(&Operation::lex(), &s, 2, &caps).unwrap().op;
        let high = type_image(&Operation::lex(), &s, 3, &caps).unwrap().op;
        let mut bad = high.table().to_vec();
        bad[7] = (bad[7] + 1) % high_space.len();
        let bad = TableOp::new(high_space.len(), 2, bad).unwrap();
        let clone_caps = CloneCaps { max_arity: 2, max_depth: 2, max_catalog: 10_000 };
        let r = compare_factor_tables(&low_space, &high_space, &[low], &[bad], clone_caps).unwrap();
        assert!(!r.is_consistent());
    }

    #[test]
    fn homomorphism_law_small() {
        let caps = CanonCaps::default();
        let s = Structure::Symbolic(DLO);
        let r = check_homomorphism_law(&[Operation::lex()], &s, 2, 2, 2, &caps).unwrap();
        assert_eq!(r.terms_checked, 38);
        assert!(r.mismatch.is_none());
    }

    #[test]
    fn term_enumeration_counts() {
        // T_d = 2 + T_{d-1}^2 for one binary symbol and two variables
        let counts: Vec<usize> = (0..=3).map(|d| enumerate_terms(&[2], 2, d).len()).collect();
        assert_eq!(counts, vec![2, 6, 38, 1446]);
    }
}
