//! Relational structures, their automorphisms, and type spaces.
//!
//! Finite structures get explicit orbit partitions of `k`-tuples. The two
//! homogeneous structures on ℚ (the pure set and the dense linear order)
//! are handled symbolically: the orbit of a tuple is its equality pattern,
//! respectively its order pattern.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::{self, Rational};

/// Resource limits for orbit and pattern enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureCaps {
    /// Largest number of tuples (`domain_size^k`) materialized at once.
    pub max_tuples: u128,
    /// Largest tuple length for symbolic pattern enumeration.
    pub max_k: usize,
}

impl Default for StructureCaps {
    fn default() -> Self {
        StructureCaps {
            max_tuples: 1_000_000,
            max_k: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: BTreeSet<Vec<usize>>,
}

/// A relational structure on `{0, .., domain_size - 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    domain_size: usize,
    relations: Vec<Relation>,
}

impl FiniteStructure {
    pub fn new(domain_size: usize) -> Result<FiniteStructure> {
        if domain_size == 0 {
            return Err(Error::syntax(0, "domain must be positive"));
        }
        Ok(FiniteStructure {
            domain_size,
            relations: Vec::new(),
        })
    }

    pub fn with_relation<I>(mut self, name: &str, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        self.add_relation(name, arity, tuples)?;
        Ok(self)
    }

    pub fn add_relation<I>(&mut self, name: &str, arity: usize, tuples: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if arity == 0 {
            return Err(Error::Arity(format!("relation {name} has arity 0")));
        }
        if self.relations.iter().any(|r| r.name == name) {
            return Err(Error::syntax(0, format!("duplicate relation name `{name}`")));
        }
        let mut set = BTreeSet::new();
        for tuple in tuples {
            self.check_tuple(name, arity, &tuple, 0)?;
            set.insert(tuple);
        }
        self.relations.push(Relation {
            name: name.to_string(),
            arity,
            tuples: set,
        });
        Ok(())
    }

    fn check_tuple(&self, name: &str, arity: usize, tuple: &[usize], line: usize) -> Result<()> {
        if tuple.len() != arity {
            return Err(Error::Arity(format!(
                "line {line}: relation {name} has arity {arity}, tuple has {} entries",
                tuple.len()
            )));
        }
        if let Some(&value) = tuple.iter().find(|&&v| v >= self.domain_size) {
            return Err(Error::OutOfRange {
                line,
                value,
                domain_size: self.domain_size,
            });
        }
        Ok(())
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The maximal relation arity, at least 1.
    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.arity).max().unwrap_or(1).max(1)
    }

    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.len() == self.domain_size
            && self.relations.iter().all(|r| {
                r.tuples
                    .iter()
                    .all(|t| r.tuples.contains(&p.apply_tuple(t)))
            })
    }
}

/// Parses the line-oriented structure format.
pub fn parse_structure(text: &str) -> Result<FiniteStructure> {
    let mut structure: Option<FiniteStructure> = None;
    let mut current: Option<(String, usize, BTreeSet<Vec<usize>>)> = None;
    let mut finished: Vec<(String, usize, BTreeSet<Vec<usize>>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "domain" => {
                if structure.is_some() {
                    return Err(Error::syntax(line_no, "duplicate `domain` line"));
                }
                let n = match words.as_slice() {
                    [_, n] => n
                        .parse::<usize>()
                        .map_err(|_| Error::syntax(line_no, format!("bad domain size `{n}`")))?,
                    _ => return Err(Error::syntax(line_no, "expected `domain <n>`")),
                };
                if n == 0 {
                    return Err(Error::syntax(line_no, "domain must be positive"));
                }
                structure = Some(FiniteStructure::new(n)?);
            }
            "relation" => {
                if structure.is_none() {
                    return Err(Error::syntax(line_no, "`relation` before `domain`"));
                }
                let (name, arity) = match words.as_slice() {
                    [_, name, arity] => (
                        name.to_string(),
                        arity.parse::<usize>().map_err(|_| {
                            Error::syntax(line_no, format!("bad arity `{arity}`"))
                        })?,
                    ),
                    _ => return Err(Error::syntax(line_no, "expected `relation <name> <arity>`")),
                };
                if arity == 0 {
                    return Err(Error::syntax(line_no, "relation arity must be positive"));
                }
                let taken = finished.iter().any(|(n, _, _)| *n == name)
                    || current.as_ref().is_some_and(|(n, _, _)| *n == name);
                if taken {
                    return Err(Error::syntax(line_no, format!("duplicate relation `{name}`")));
                }
                if let Some(done) = current.take() {
                    finished.push(done);
                }
                current = Some((name, arity, BTreeSet::new()));
            }
            _ => {
                let s = structure
                    .as_ref()
                    .ok_or_else(|| Error::syntax(line_no, "tuple before `domain`"))?;
                let (name, arity, tuples) = current
                    .as_mut()
                    .ok_or_else(|| Error::syntax(line_no, "tuple outside a relation block"))?;
                let tuple = words
                    .iter()
                    .map(|w| {
                        w.parse::<usize>()
                            .map_err(|_| Error::syntax(line_no, format!("bad element `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                s.check_tuple(name, *arity, &tuple, line_no)?;
                tuples.insert(tuple);
            }
        }
    }
    let mut structure = structure.ok_or_else(|| Error::syntax(0, "missing `domain` line"))?;
    finished.extend(current);
    for (name, arity, tuples) in finished {
        structure.relations.push(Relation {
            name,
            arity,
            tuples,
        });
    }
    Ok(structure)
}

impl FromStr for FiniteStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_structure(s)
    }
}

/// A bijection of `{0, .., n - 1}` given by its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Option<Permutation> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v >= images.len() || std::mem::replace(&mut seen[v], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&x| self.0[x]).collect()
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }
}

/// All automorphisms, in lexicographic order of their image sequences.
pub fn automorphisms(s: &FiniteStructure) -> Vec<Permutation> {
    let n = s.domain_size;
    // tuples grouped by their largest element: checked once that element is placed
    let mut checks: Vec<Vec<(usize, &Vec<usize>)>> = vec![Vec::new(); n];
    let sets: Vec<HashSet<&Vec<usize>>> = s
        .relations
        .iter()
        .map(|r| r.tuples.iter().collect())
        .collect();
    for (ri, r) in s.relations.iter().enumerate() {
        for t in &r.tuples {
            let top = *t.iter().max().unwrap();
            checks[top].push((ri, t));
        }
    }

    fn search(
        v: usize,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        checks: &[Vec<(usize, &Vec<usize>)>],
        sets: &[HashSet<&Vec<usize>>],
        out: &mut Vec<Permutation>,
    ) {
        let n = used.len();
        if v == n {
            out.push(Permutation(images.clone()));
            return;
        }
        for candidate in 0..n {
            if used[candidate] {
                continue;
            }
            images.push(candidate);
            let consistent = checks[v].iter().all(|(ri, t)| {
                let mapped: Vec<usize> = t.iter().map(|&x| images[x]).collect();
                sets[*ri].contains(&mapped)
            });
            if consistent {
                used[candidate] = true;
                search(v + 1, images, used, checks, sets, out);
                used[candidate] = false;
            }
            images.pop();
        }
    }

    let mut out = Vec::new();
    search(
        0,
        &mut Vec::with_capacity(n),
        &mut vec![false; n],
        &checks,
        &sets,
        &mut out,
    );
    out
}

/// The two homogeneous structures on ℚ handled symbolically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolicStructure {
    PureSet,
    DenseLinearOrder,
}

impl SymbolicStructure {
    /// The arity at which the type clone stabilizes.
    pub fn stable_arity(self) -> usize {
        2
    }

    pub fn name(self) -> &'static str {
        match self {
            SymbolicStructure::PureSet => "pureset",
            SymbolicStructure::DenseLinearOrder => "dlo",
        }
    }
}

/// An equality pattern (restricted growth labels) or an order pattern (rank vector).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub kind: SymbolicStructure,
    pub labels: Vec<usize>,
}

impl Pattern {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of distinct values.
    pub fn classes(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SymbolicStructure::DenseLinearOrder => {
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for (i, &r) in self.labels.iter().enumerate() {
                    groups.entry(r).or_default().push(i + 1);
                }
                let parts: Vec<String> = groups
                    .values()
                    .map(|g| {
                        g.iter()
                            .map(|i| format!("x{i}"))
                            .collect::<Vec<_>>()
                            .join(" = ")
                    })
                    .collect();
                write!(f, "{}", parts.join(" < "))
            }
            SymbolicStructure::PureSet => {
                let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for (i, &r) in self.labels.iter().enumerate() {
                    groups.entry(r).or_default().push(i + 1);
                }
                for g in groups.values() {
                    let inner: Vec<String> = g.iter().map(|i| i.to_string()).collect();
                    write!(f, "{{{}}}", inner.join(","))?;
                }
                Ok(())
            }
        }
    }
}

fn rank_vector<T: Ord>(values: &[T]) -> Vec<usize> {
    let distinct: BTreeSet<&T> = values.iter().collect();
    let ranks: BTreeMap<&T, usize> = distinct.into_iter().enumerate().map(|(i, v)| (v, i)).collect();
    values.iter().map(|v| ranks[v]).collect()
}

fn growth_labels<T: Ord>(values: &[T]) -> Vec<usize> {
    let mut seen: BTreeMap<&T, usize> = BTreeMap::new();
    values
        .iter()
        .map(|v| {
            let next = seen.len();
            *seen.entry(v).or_insert(next)
        })
        .collect()
}

/// The type of a tuple over a symbolic structure.
pub fn pattern_of<T: Ord>(kind: SymbolicStructure, tuple: &[T]) -> Pattern {
    let labels = match kind {
        SymbolicStructure::DenseLinearOrder => rank_vector(tuple),
        SymbolicStructure::PureSet => growth_labels(tuple),
    };
    Pattern { kind, labels }
}

/// Number of `k`-types: ordered Bell (DLO) or Bell (pure set) numbers.
pub fn pattern_count(kind: SymbolicStructure, k: usize) -> u128 {
    match kind {
        SymbolicStructure::DenseLinearOrder => {
            // a(k) = sum_{i=1..k} C(k,i) a(k-i)
            let mut a = vec![1u128];
            for m in 1..=k {
                let mut total = 0u128;
                let mut binom = 1u128;
                for i in 1..=m {
                    binom = binom * (m - i + 1) as u128 / i as u128;
                    total += binom * a[m - i];
                }
                a.push(total);
            }
            a[k]
        }
        SymbolicStructure::PureSet => {
            // Bell triangle
            let mut row = vec![1u128];
            for _ in 0..k {
                let mut next = vec![*row.last().unwrap()];
                for v in &row {
                    let last = *next.last().unwrap();
                    next.push(last + v);
                }
                row = next;
            }
            row[0]
        }
    }
}

/// Visits all patterns of length `k` in lexicographic order of their labels.
pub(crate) fn for_each_pattern(kind: SymbolicStructure, k: usize, visit: &mut dyn FnMut(&[usize])) {
    // `counts[v]` = occurrences of label v in the prefix
    fn rec(
        kind: SymbolicStructure,
        k: usize,
        prefix: &mut Vec<usize>,
        counts: &mut Vec<usize>,
        distinct: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let top = counts.iter().rposition(|&c| c > 0).map_or(0, |m| m + 1);
        if prefix.len() == k {
            // rank vectors must use every rank below the maximum
            if kind == SymbolicStructure::PureSet || distinct == top {
                visit(prefix);
            }
            return;
        }
        let remaining = k - prefix.len();
        let limit = match kind {
            SymbolicStructure::PureSet => top,
            SymbolicStructure::DenseLinearOrder => k - 1,
        };
        for v in 0..=limit {
            let fresh = counts[v] == 0;
            let new_top = top.max(v + 1);
            let new_distinct = distinct + usize::from(fresh);
            if kind == SymbolicStructure::DenseLinearOrder && new_top - new_distinct > remaining - 1 {
                continue;
            }
            counts[v] += 1;
            prefix.push(v);
            rec(kind, k, prefix, counts, new_distinct, visit);
            prefix.pop();
            counts[v] -= 1;
        }
    }
    rec(
        kind,
        k,
        &mut Vec::with_capacity(k),
        &mut vec![0; k.max(1)],
        0,
        visit,
    );
}

/// Either kind of structure the type machinery understands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Finite(FiniteStructure),
    Symbolic(SymbolicStructure),
}

impl Structure {
    /// `m`, the arity at which the type clone stabilizes.
    pub fn stable_arity(&self) -> usize {
        match self {
            Structure::Finite(s) => s.max_arity(),
            Structure::Symbolic(k) => k.stable_arity(),
        }
    }

    pub fn type_space(&self, k: usize, caps: &StructureCaps) -> Result<TypeSpace> {
        match self {
            Structure::Finite(s) => orbits(s, k, caps),
            Structure::Symbolic(kind) => enumerate_patterns(*kind, k, caps),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Structure::Finite(s) => format!(
                "finite structure on {} elements, {} relation(s)",
                s.domain_size(),
                s.relations().len()
            ),
            Structure::Symbolic(SymbolicStructure::DenseLinearOrder) => "(Q,<)".to_string(),
            Structure::Symbolic(SymbolicStructure::PureSet) => "(Q,=)".to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeId(pub usize);

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Universe {
    Finite { domain_size: usize },
    Symbolic(SymbolicStructure),
}

/// The set 𝒯_k of `k`-types with a canonical representative for each.
#[derive(Clone, Debug)]
pub struct TypeSpace {
    k: usize,
    universe: Universe,
    reps: Vec<Vec<usize>>,
    rep_index: HashMap<Vec<usize>, TypeId>,
    // finite universes only: the type of every tuple, indexed by its base-n encoding
    tuple_types: Vec<TypeId>,
}

impl PartialEq for TypeSpace {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k && self.universe == other.universe && self.reps == other.reps
    }
}

impl TypeSpace {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = TypeId> {
        (0..self.reps.len()).map(TypeId)
    }

    pub fn representative(&self, t: TypeId) -> &[usize] {
        &self.reps[t.0]
    }

    pub fn representative_rationals(&self, t: TypeId) -> Vec<Rational> {
        self.reps[t.0].iter().map(|&v| rational::int(v as i64)).collect()
    }

    /// The type of a tuple of domain elements (finite) or of naturals (symbolic).
    pub fn classify(&self, tuple: &[usize]) -> Option<TypeId> {
        if tuple.len() != self.k {
            return None;
        }
        match self.universe {
            Universe::Finite { domain_size } => {
                let mut code = 0usize;
                for &v in tuple {
                    if v >= domain_size {
                        return None;
                    }
                    code = code * domain_size + v;
                }
                Some(self.tuple_types[code])
            }
            Universe::Symbolic(kind) => self.rep_index.get(&pattern_of(kind, tuple).labels).copied(),
        }
    }

    /// The type of a rational tuple over a symbolic structure.
    pub fn classify_rationals(&self, tuple: &[Rational]) -> Option<TypeId> {
        match self.universe {
            Universe::Symbolic(kind) if tuple.len() == self.k => {
                self.rep_index.get(&pattern_of(kind, tuple).labels).copied()
            }
            _ => None,
        }
    }

    /// Type of `(a_{u(1)}, .., a_{u(l)})` for a representative `a` of `t`,
    /// classified in `target` (which must have `k = u.len()`). Indices are 0-based.
    pub fn restrict(&self, t: TypeId, u: &[usize], target: &TypeSpace) -> Result<TypeId> {
        if t.0 >= self.len() {
            return Err(Error::Arity(format!("type {t} not in this space")));
        }
        if let Some(&bad) = u.iter().find(|&&i| i >= self.k) {
            return Err(Error::Arity(format!(
                "index {} out of range for {}-types",
                bad + 1,
                self.k
            )));
        }
        if target.universe != self.universe || target.k != u.len() {
            return Err(Error::Arity("restriction target does not match".into()));
        }
        let rep = &self.reps[t.0];
        let selected: Vec<usize> = u.iter().map(|&i| rep[i]).collect();
        target
            .classify(&selected)
            .ok_or_else(|| Error::Internal("restricted tuple has no type".into()))
    }

    pub fn label(&self, t: TypeId) -> String {
        match self.universe {
            Universe::Finite { .. } => format!(
                "({})",
                self.reps[t.0]
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            Universe::Symbolic(kind) => Pattern {
                kind,
                labels: self.reps[t.0].clone(),
            }
            .to_string(),
        }
    }
}

/// Orbits of `Aut(s)` on `k`-tuples; each represented by its lexicographically least tuple.
pub fn orbits(s: &FiniteStructure, k: usize, caps: &StructureCaps) -> Result<TypeSpace> {
    let autos = automorphisms(s);
    orbits_with(s, k, caps, &autos)
}

pub(crate) fn orbits_with(
    s: &FiniteStructure,
    k: usize,
    caps: &StructureCaps,
    autos: &[Permutation],
) -> Result<TypeSpace> {
    if k == 0 {
        return Err(Error::Arity("k must be at least 1".into()));
    }
    let n = s.domain_size;
    let total = (n as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if total > caps.max_tuples {
        return Err(Error::cap("domain_size^k", total, caps.max_tuples));
    }
    let total = total as usize;
    let decode = |mut code: usize| -> Vec<usize> {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    };
    let encode = |t: &[usize]| t.iter().fold(0usize, |acc, &v| acc * n + v);

    let unassigned = TypeId(usize::MAX);
    let mut tuple_types = vec![unassigned; total];
    let mut reps = Vec::new();
    let mut rep_index = HashMap::new();
    for code in 0..total {
        if tuple_types[code] != unassigned {
            continue;
        }
        let id = TypeId(reps.len());
        let rep = decode(code);
        for g in autos {
            tuple_types[encode(&g.apply_tuple(&rep))] = id;
        }
        tuple_types[code] = id;
        rep_index.insert(rep.clone(), id);
        reps.push(rep);
    }
    Ok(TypeSpace {
        k,
        universe: Universe::Finite { domain_size: n },
        reps,
        rep_index,
        tuple_types,
    })
}

/// All `k`-patterns of a symbolic structure.
pub fn enumerate_patterns(
    kind: SymbolicStructure,
    k: usize,
    caps: &StructureCaps,
) -> Result<TypeSpace> {
    if k == 0 {
        return Err(Error::Arity("k must be at least 1".into()));
    }
    if k > caps.max_k {
        return Err(Error::cap("pattern length k", k as u128, caps.max_k as u128));
    }
    let mut reps = Vec::new();
    for_each_pattern(kind, k, &mut |p| reps.push(p.to_vec()));
    let rep_index = reps
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), TypeId(i)))
        .collect();
    Ok(TypeSpace {
        k,
        universe: Universe::Symbolic(kind),
        reps,
        rep_index,
        tuple_types: Vec::new(),
    })
}

/// A bijection of ℚ that moves finitely many points and fixes the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinitePermutation {
    moves: BTreeMap<Rational, Rational>,
}

impl FinitePermutation {
    /// Extends a finite injection `pairs` to a bijection of ℚ.
    pub fn extending(pairs: &[(Rational, Rational)]) -> Result<FinitePermutation> {
        let mut forward: BTreeMap<Rational, Rational> = BTreeMap::new();
        let mut targets: BTreeSet<Rational> = BTreeSet::new();
        for (x, y) in pairs {
            match forward.get(x) {
                Some(prev) if prev != y => {
                    return Err(Error::Inconsistent(format!(
                        "{} sent to two values",
                        rational::render(x)
                    )))
                }
                Some(_) => continue,
                None => {}
            }
            if !targets.insert(y.clone()) {
                return Err(Error::Inconsistent(format!(
                    "{} hit twice",
                    rational::render(y)
                )));
            }
            forward.insert(x.clone(), y.clone());
        }
        // close up: points of the image outside the domain go to the domain points outside the image
        let free_sources: Vec<Rational> = targets
            .iter()
            .filter(|y| !forward.contains_key(*y))
            .cloned()
            .collect();
        let free_targets: Vec<Rational> = forward
            .keys()
            .filter(|x| !targets.contains(*x))
            .cloned()
            .collect();
        for (x, y) in free_sources.into_iter().zip(free_targets) {
            forward.insert(x, y);
        }
        forward.retain(|x, y| x != y);
        Ok(FinitePermutation { moves: forward })
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        self.moves.get(x).cloned().unwrap_or_else(|| x.clone())
    }

    pub fn moves(&self) -> &BTreeMap<Rational, Rational> {
        &self.moves
    }
}

/// An automorphism (or elementary self-embedding) of a symbolic structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryMap {
    /// Increasing map: automorphism or self-embedding of (ℚ,<).
    Increasing(PLMap),
    /// Bijection of ℚ: automorphism of the pure set.
    Permutation(FinitePermutation),
}

impl SymmetryMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        match self {
            SymmetryMap::Increasing(m) => m.eval(x),
            SymmetryMap::Permutation(p) => p.apply(x),
        }
    }

    pub fn apply_all(&self, xs: &[Rational]) -> Vec<Rational> {
        xs.iter().map(|x| self.apply(x)).collect()
    }

    /// Text description: breakpoint pieces or moved points.
    pub fn to_lines(&self) -> Vec<String> {
        match self {
            SymmetryMap::Increasing(m) => m.to_lines(),
            SymmetryMap::Permutation(p) => {
                if p.moves.is_empty() {
                    return vec!["identity".to_string()];
                }
                p.moves
                    .iter()
                    .map(|(x, y)| format!("move {} {}", rational::render(x), rational::render(y)))
                    .collect()
            }
        }
    }
}

/// An automorphism of `kind` sending `a_i ↦ b_i`, if the patterns agree.
pub fn witness_partial_automorphism(
    kind: SymbolicStructure,
    a: &[Rational],
    b: &[Rational],
) -> Option<SymmetryMap> {
    if a.len() != b.len() || pattern_of(kind, a) != pattern_of(kind, b) {
        return None;
    }
    let pairs: BTreeMap<&Rational, &Rational> = a.iter().zip(b).collect();
    let pairs: Vec<(Rational, Rational)> = pairs
        .into_iter()
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    match kind {
        SymbolicStructure::DenseLinearOrder => {
            PLMap::interpolate(&pairs).ok().map(SymmetryMap::Increasing)
        }
        SymbolicStructure::PureSet => FinitePermutation::extending(&pairs)
            .ok()
            .map(SymmetryMap::Permutation),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn cycle3() -> FiniteStructure {
        parse_structure("domain 3\nrelation E 2\n0 1\n1 2\n2 0\n").unwrap()
    }

    #[test]
    fn parses_directed_cycle() {
        let s = cycle3();
        assert_eq!(s.domain_size(), 3);
        assert_eq!(s.relations()[0].tuples.len(), 3);
    }

    #[test]
    fn parses_bare_domain_with_comments() {
        let s = parse_structure("# one point\n\ndomain 1\n").unwrap();
        assert_eq!(s.domain_size(), 1);
        assert!(s.relations().is_empty());
    }

    #[test]
    fn parse_errors() {
        let out = parse_structure("domain 3\nrelation E 2\n0 5\n").unwrap_err();
        assert!(out.to_string().contains("element out of range"), "{out}");
        assert!(matches!(
            parse_structure("domain 3\nrelation E 2\n0 1 2\n"),
            Err(Error::Arity(_))
        ));
        assert!(matches!(
            parse_structure("domain 3\nfoo 1\n"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(parse_structure("relation E 2\n").is_err());
        assert!(parse_structure("domain 2\nrelation E 1\nrelation E 1\n").is_err());
        assert!(parse_structure("").is_err());
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphisms(&cycle3()).len(), 3);
        let empty = FiniteStructure::new(3).unwrap();
        let all = automorphisms(&empty);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let order = FiniteStructure::new(3)
            .unwrap()
            .with_relation("<", 2, vec![vec![0, 1], vec![0, 2], vec![1, 2]])
            .unwrap();
        assert_eq!(automorphisms(&order), vec![Permutation::identity(3)]);
    }

    #[test]
    fn orbit_examples() {
        let caps = StructureCaps::default();
        let ts = orbits(&cycle3(), 2, &caps).unwrap();
        assert_eq!(ts.len(), 3);
        assert_eq!(ts.representative(TypeId(0)), &[0, 0]);
        assert_eq!(ts.representative(TypeId(1)), &[0, 1]);
        assert_eq!(ts.representative(TypeId(2)), &[0, 2]);
        let plain = FiniteStructure::new(3).unwrap();
        assert_eq!(orbits(&plain, 2, &caps).unwrap().len(), 2);
        assert_eq!(orbits(&cycle3(), 1, &caps).unwrap().len(), 1);
        let tight = StructureCaps {
            max_tuples: 8,
            max_k: 6,
        };
        assert!(matches!(
            orbits(&plain, 2, &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn pattern_examples() {
        let dlo = SymbolicStructure::DenseLinearOrder;
        let p = pattern_of(dlo, &[frac(7, 2), frac(6, 5), frac(7, 2)]);
        assert_eq!(p.labels, vec![1, 0, 1]);
        assert_eq!(p.to_string(), "x2 < x1 = x3");
        let q = pattern_of(SymbolicStructure::PureSet, &[int(7), int(7), int(9)]);
        assert_eq!(q.labels, vec![0, 0, 1]);
        assert_eq!(q.to_string(), "{1,2}{3}");
        assert_eq!(
            pattern_of(dlo, &[int(0), int(1)]),
            pattern_of(dlo, &[int(-5), int(100)])
        );
    }

    #[test]
    fn pattern_counts() {
        let caps = StructureCaps::default();
        let dlo = SymbolicStructure::DenseLinearOrder;
        let set = SymbolicStructure::PureSet;
        let counts: Vec<usize> = (1..=4)
            .map(|k| enumerate_patterns(dlo, k, &caps).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 13, 75]);
        let counts: Vec<usize> = (1..=4)
            .map(|k| enumerate_patterns(set, k, &caps).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 15]);
        for k in 0..=6 {
            let mut c = 0u128;
            for_each_pattern(dlo, k, &mut |_| c += 1);
            assert_eq!(c, pattern_count(dlo, k));
            let mut c = 0u128;
            for_each_pattern(set, k, &mut |_| c += 1);
            assert_eq!(c, pattern_count(set, k));
        }
        assert!(enumerate_patterns(dlo, 7, &caps).is_err());
    }

    #[test]
    fn restriction_examples() {
        let caps = StructureCaps::default();
        let dlo = SymbolicStructure::DenseLinearOrder;
        let t3 = enumerate_patterns(dlo, 3, &caps).unwrap();
        let t2 = enumerate_patterns(dlo, 2, &caps).unwrap();
        let t = t3.classify(&[1, 0, 1]).unwrap();
        let r = t3.restrict(t, &[0, 1], &t2).unwrap();
        assert_eq!(t2.representative(r), &[1, 0]);
        assert_eq!(t3.restrict(t, &[0, 1, 2], &t3).unwrap(), t);
        assert!(t3.restrict(t, &[0, 3], &t2).is_err());

        let o2 = orbits(&cycle3(), 2, &caps).unwrap();
        let edge = o2.classify(&[0, 1]).unwrap();
        let reversed = o2.restrict(edge, &[1, 0], &o2).unwrap();
        assert_eq!(reversed, o2.classify(&[1, 0]).unwrap());
        assert_ne!(reversed, edge);
    }

    #[test]
    fn partial_automorphism_examples() {
        let dlo = SymbolicStructure::DenseLinearOrder;
        let m = witness_partial_automorphism(dlo, &[int(0), int(1)], &[int(10), int(20)]).unwrap();
        assert_eq!(m.apply(&int(0)), int(10));
        assert_eq!(m.apply(&int(1)), int(20));
        assert!(witness_partial_automorphism(dlo, &[int(0), int(1)], &[int(1), int(0)]).is_none());
        let m = witness_partial_automorphism(
            dlo,
            &[int(2), int(2), int(5)],
            &[int(0), int(0), int(1)],
        )
        .unwrap();
        assert_eq!(m.apply(&int(2)), int(0));
        assert_eq!(m.apply(&int(5)), int(1));

        let set = SymbolicStructure::PureSet;
        let a = [int(3), int(1), int(3)];
        let b = [int(1), int(7), int(1)];
        let p = witness_partial_automorphism(set, &a, &b).unwrap();
        assert_eq!(p.apply_all(&a), b.to_vec());
    }

    #[test]
    fn finite_permutation_is_a_bijection() {
        let p = FinitePermutation::extending(&[(int(0), int(1)), (int(1), int(2)), (int(5), int(0))])
            .unwrap();
        let pts: Vec<Rational> = (-2..=8).map(int).collect();
        let imgs: BTreeSet<Rational> = pts.iter().map(|x| p.apply(x)).collect();
        assert_eq!(imgs.len(), pts.len());
        assert_eq!(imgs, pts.iter().cloned().collect());
    }
}
