//! Finitary operations: concrete tables, order terms over ℚ, and type tables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num::One;

use crate::clones::{decode_into, table_len, TableOp};
use crate::error::{Error, Result};
use crate::plmap::PLMap;
use crate::rational::{self, Rational};
use crate::term::{parse_raw, RawTerm};

/// An increasing map used inside order terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NamedMap {
    pub name: String,
    pub map: PLMap,
}

/// An operation on ℚ built from selectors, `min`, `max`, the lexicographic
/// embedding `lex: ℚ² → ℚ`, and applications of increasing maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderTerm {
    Var(usize),
    Min(Box<OrderTerm>, Box<OrderTerm>),
    Max(Box<OrderTerm>, Box<OrderTerm>),
    Lex(Box<OrderTerm>, Box<OrderTerm>),
    Map(Arc<NamedMap>, Box<OrderTerm>),
}

impl OrderTerm {
    pub fn var(i: usize) -> OrderTerm {
        OrderTerm::Var(i)
    }

    pub fn min(a: OrderTerm, b: OrderTerm) -> OrderTerm {
        OrderTerm::Min(Box::new(a), Box::new(b))
    }

    pub fn max(a: OrderTerm, b: OrderTerm) -> OrderTerm {
        OrderTerm::Max(Box::new(a), Box::new(b))
    }

    pub fn lex(a: OrderTerm, b: OrderTerm) -> OrderTerm {
        OrderTerm::Lex(Box::new(a), Box::new(b))
    }

    pub fn map(name: &str, map: PLMap, arg: OrderTerm) -> OrderTerm {
        OrderTerm::Map(
            Arc::new(NamedMap {
                name: name.to_string(),
                map,
            }),
            Box::new(arg),
        )
    }

    pub fn var_bound(&self) -> usize {
        match self {
            OrderTerm::Var(i) => i + 1,
            OrderTerm::Min(a, b) | OrderTerm::Max(a, b) | OrderTerm::Lex(a, b) => {
                a.var_bound().max(b.var_bound())
            }
            OrderTerm::Map(_, a) => a.var_bound(),
        }
    }

    /// Replaces `x_i` by `args[i]`.
    pub fn substitute(&self, args: &[OrderTerm]) -> OrderTerm {
        match self {
            OrderTerm::Var(i) => args[*i].clone(),
            OrderTerm::Min(a, b) => OrderTerm::min(a.substitute(args), b.substitute(args)),
            OrderTerm::Max(a, b) => OrderTerm::max(a.substitute(args), b.substitute(args)),
            OrderTerm::Lex(a, b) => OrderTerm::lex(a.substitute(args), b.substitute(args)),
            OrderTerm::Map(m, a) => OrderTerm::Map(m.clone(), Box::new(a.substitute(args))),
        }
    }

    /// Evaluates on every point of `points`. All `lex` applications share
    /// the embedding held by `session`.
    pub fn eval_batch(&self, points: &[Vec<Rational>], session: &mut LexRealizer) -> Vec<Rational> {
        match self {
            OrderTerm::Var(i) => points.iter().map(|p| p[*i].clone()).collect(),
            OrderTerm::Min(a, b) => {
                let (xs, ys) = (a.eval_batch(points, session), b.eval_batch(points, session));
                xs.into_iter().zip(ys).map(|(x, y)| x.min(y)).collect()
            }
            OrderTerm::Max(a, b) => {
                let (xs, ys) = (a.eval_batch(points, session), b.eval_batch(points, session));
                xs.into_iter().zip(ys).map(|(x, y)| x.max(y)).collect()
            }
            OrderTerm::Lex(a, b) => {
                let (xs, ys) = (a.eval_batch(points, session), b.eval_batch(points, session));
                let pairs: Vec<(Rational, Rational)> = xs.into_iter().zip(ys).collect();
                session.realize(&pairs)
            }
            OrderTerm::Map(m, a) => a
                .eval_batch(points, session)
                .iter()
                .map(|x| m.map.eval(x))
                .collect(),
        }
    }

    /// Evaluates componentwise on `args` (one `k`-tuple per argument) in a fresh session.
    pub fn eval_tuples(&self, args: &[Vec<Rational>]) -> Vec<Rational> {
        let k = args.first().map_or(0, Vec::len);
        let points: Vec<Vec<Rational>> = (0..k)
            .map(|j| args.iter().map(|a| a[j].clone()).collect())
            .collect();
        self.eval_batch(&points, &mut LexRealizer::default())
    }

    fn uses_lex(&self) -> bool {
        match self {
            OrderTerm::Var(_) => false,
            OrderTerm::Lex(..) => true,
            OrderTerm::Min(a, b) | OrderTerm::Max(a, b) => a.uses_lex() || b.uses_lex(),
            OrderTerm::Map(_, a) => a.uses_lex(),
        }
    }

    /// Evaluates at one point; only defined for terms without `lex`.
    pub fn eval_point(&self, point: &[Rational]) -> Option<Rational> {
        if self.uses_lex() {
            return None;
        }
        Some(
            self.eval_batch(&[point.to_vec()], &mut LexRealizer::default())
                .pop()
                .unwrap(),
        )
    }
}

impl fmt::Display for OrderTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderTerm::Var(i) => write!(f, "x{}", i + 1),
            OrderTerm::Min(a, b) => write!(f, "min({a}, {b})"),
            OrderTerm::Max(a, b) => write!(f, "max({a}, {b})"),
            OrderTerm::Lex(a, b) => write!(f, "lex({a}, {b})"),
            OrderTerm::Map(m, a) => write!(f, "{}({a})", m.name),
        }
    }
}

/// A finite piece of an order embedding `(ℚ², lex) → (ℚ,<)`, grown on demand.
///
/// Each new batch of pairs is sorted and inserted one by one between its
/// already-realized neighbours, so every realized prefix extends to a
/// genuine lexicographic embedding of ℚ² into ℚ.
#[derive(Clone, Debug, Default)]
pub struct LexRealizer {
    values: BTreeMap<(Rational, Rational), Rational>,
}

impl LexRealizer {
    pub fn realize(&mut self, pairs: &[(Rational, Rational)]) -> Vec<Rational> {
        let fresh: BTreeSet<&(Rational, Rational)> =
            pairs.iter().filter(|p| !self.values.contains_key(*p)).collect();
        for pair in fresh {
            let below = self.values.range(..pair.clone()).next_back().map(|(_, v)| v.clone());
            let above = self.values.range(pair.clone()..).next().map(|(_, v)| v.clone());
            let value = match (below, above) {
                (None, None) => Rational::from_integer(0.into()),
                (Some(lo), None) => lo + Rational::one(),
                (None, Some(hi)) => hi - Rational::one(),
                (Some(lo), Some(hi)) => (lo + hi) / rational::int(2),
            };
            self.values.insert(pair.clone(), value);
        }
        pairs.iter().map(|p| self.values[p].clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `ξ_k(f)`: an operation on the `k`-types of a structure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeOperation {
    pub k: usize,
    pub op: TableOp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperationBody {
    /// Full table on a finite domain.
    Concrete(TableOp),
    /// Order term evaluated over ℚ.
    Term(OrderTerm),
    /// Full table on a type space.
    Types(TypeOperation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Operation {
    pub name: String,
    pub arity: usize,
    pub body: OperationBody,
}

impl Operation {
    pub fn concrete(name: &str, op: TableOp) -> Operation {
        Operation {
            name: name.to_string(),
            arity: op.arity(),
            body: OperationBody::Concrete(op),
        }
    }

    /// Panics if `arity` is smaller than the term's variable bound.
    pub fn term(name: &str, arity: usize, term: OrderTerm) -> Operation {
        assert!(arity >= 1 && arity >= term.var_bound());
        Operation {
            name: name.to_string(),
            arity,
            body: OperationBody::Term(term),
        }
    }

    pub fn selector(arity: usize, i: usize) -> Operation {
        Operation::term(&format!("pi{}_{}", arity, i + 1), arity, OrderTerm::Var(i))
    }

    pub fn lex() -> Operation {
        Operation::term("lex", 2, OrderTerm::lex(OrderTerm::Var(0), OrderTerm::Var(1)))
    }

    pub fn min() -> Operation {
        Operation::term("min", 2, OrderTerm::min(OrderTerm::Var(0), OrderTerm::Var(1)))
    }

    pub fn as_term(&self) -> Option<&OrderTerm> {
        match &self.body {
            OperationBody::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_table(&self) -> Option<&TableOp> {
        match &self.body {
            OperationBody::Concrete(t) => Some(t),
            OperationBody::Types(t) => Some(&t.op),
            OperationBody::Term(_) => None,
        }
    }
}

/// Contents of an operation file.
#[derive(Clone, Debug, Default)]
pub struct OperationFile {
    pub maps: Vec<NamedMap>,
    pub operations: Vec<Operation>,
}

enum Block {
    None,
    Map(String, usize, Vec<String>),
    Table(String, usize, usize, BTreeMap<Vec<usize>, usize>),
}

/// Parses an operation file. `domain` is required for `concrete` tables.
///
/// ```text
/// plmap shift
/// piece -inf inf affine 1 3
/// op lex 2 term lex(x1, x2)
/// op s 2 concrete
/// 0 0 -> 0
/// ...
/// ```
pub fn parse_operations(text: &str, domain: Option<usize>) -> Result<OperationFile> {
    let mut file = OperationFile::default();
    let mut block = Block::None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        match words[0] {
            "plmap" | "op" => {
                close_block(std::mem::replace(&mut block, Block::None), &mut file, domain)?;
                if words[0] == "plmap" {
                    match words.as_slice() {
                        [_, name] => block = Block::Map(name.to_string(), line_no + 1, Vec::new()),
                        _ => return Err(Error::syntax(line_no, "expected `plmap <name>`")),
                    }
                    continue;
                }
                if words.len() < 4 {
                    return Err(Error::syntax(line_no, "expected `op <name> <arity> concrete|term ...`"));
                }
                let name = words[1].to_string();
                if file.operations.iter().any(|o| o.name == name) {
                    return Err(Error::syntax(line_no, format!("duplicate operation `{name}`")));
                }
                let arity: usize = words[2]
                    .parse()
                    .ok()
                    .filter(|&a| a >= 1)
                    .ok_or_else(|| Error::syntax(line_no, format!("bad arity `{}`", words[2])))?;
                match words[3] {
                    "concrete" => {
                        if domain.is_none() {
                            return Err(Error::syntax(
                                line_no,
                                "concrete tables need a finite structure for their domain",
                            ));
                        }
                        block = Block::Table(name, arity, line_no, BTreeMap::new());
                    }
                    "term" => {
                        let body = line
                            .split_once("term")
                            .map(|(_, rest)| rest.trim())
                            .unwrap_or_default();
                        let term = parse_order_term(body, &file.maps)
                            .map_err(|e| Error::syntax(line_no, e.to_string()))?;
                        if term.var_bound() > arity {
                            return Err(Error::syntax(
                                line_no,
                                format!("term uses x{} but arity is {arity}", term.var_bound()),
                            ));
                        }
                        file.operations.push(Operation::term(&name, arity, term));
                    }
                    other => {
                        return Err(Error::syntax(line_no, format!("unknown body kind `{other}`")))
                    }
                }
            }
            _ => match &mut block {
                Block::Map(_, _, lines) => lines.push(line.to_string()),
                Block::Table(name, arity, _, rows) => {
                    let (lhs, rhs) = line
                        .split_once("->")
                        .ok_or_else(|| Error::syntax(line_no, "expected `<in_1> .. <in_n> -> <out>`"))?;
                    let parse_elem = |w: &str| -> Result<usize> {
                        let v: usize = w
                            .parse()
                            .map_err(|_| Error::syntax(line_no, format!("bad element `{w}`")))?;
                        let d = domain.unwrap();
                        if v >= d {
                            return Err(Error::OutOfRange {
                                line: line_no,
                                value: v,
                                domain_size: d,
                            });
                        }
                        Ok(v)
                    };
                    let inputs = lhs
                        .split_whitespace()
                        .map(parse_elem)
                        .collect::<Result<Vec<_>>>()?;
                    if inputs.len() != *arity {
                        return Err(Error::Arity(format!(
                            "line {line_no}: `{name}` has arity {arity}, row has {} inputs",
                            inputs.len()
                        )));
                    }
                    let outs: Vec<&str> = rhs.split_whitespace().collect();
                    let out = match outs.as_slice() {
                        [w] => parse_elem(w)?,
                        _ => return Err(Error::syntax(line_no, "expected one output")),
                    };
                    if rows.insert(inputs, out).is_some() {
                        return Err(Error::syntax(line_no, format!("duplicate row in `{name}`")));
                    }
                }
                Block::None => {
                    return Err(Error::syntax(line_no, "row outside an `op` or `plmap` block"))
                }
            },
        }
    }
    close_block(block, &mut file, domain)?;
    Ok(file)
}

fn close_block(block: Block, file: &mut OperationFile, domain: Option<usize>) -> Result<()> {
    match block {
        Block::None => Ok(()),
        Block::Map(name, first_line, lines) => {
            let map = PLMap::from_lines(lines.iter().map(String::as_str), first_line)?;
            file.maps.push(NamedMap { name, map });
            Ok(())
        }
        Block::Table(name, arity, line_no, rows) => {
            let base = domain.expect("checked when the block opened");
            let len = table_len(base, arity)?;
            if rows.len() != len {
                return Err(Error::syntax(
                    line_no,
                    format!("`{name}` has {} rows, a total table needs {len}", rows.len()),
                ));
            }
            let mut args = vec![0; arity];
            let mut table = Vec::with_capacity(len);
            for code in 0..len {
                decode_into(code, base, &mut args);
                table.push(rows[&args]);
            }
            file.operations
                .push(Operation::concrete(&name, TableOp::new(base, arity, table)?));
            Ok(())
        }
    }
}

/// Parses prefix order-term syntax; `min`, `max`, `lex` fold over several
/// arguments, any other name must be a unary map from `maps`.
pub fn parse_order_term(text: &str, maps: &[NamedMap]) -> Result<OrderTerm> {
    let by_name: HashMap<&str, &NamedMap> = maps.iter().map(|m| (m.name.as_str(), m)).collect();
    convert(&parse_raw(text)?, &by_name)
}

fn convert(raw: &RawTerm, maps: &HashMap<&str, &NamedMap>) -> Result<OrderTerm> {
    match raw {
        RawTerm::Var(i) => Ok(OrderTerm::Var(*i)),
        RawTerm::App(name, args) => {
            let args = args
                .iter()
                .map(|a| convert(a, maps))
                .collect::<Result<Vec<_>>>()?;
            let fold = |ctor: fn(OrderTerm, OrderTerm) -> OrderTerm| -> Result<OrderTerm> {
                if args.len() < 2 {
                    return Err(Error::Arity(format!("`{name}` needs at least two arguments")));
                }
                let mut it = args.clone().into_iter().rev();
                let last = it.next().unwrap();
                Ok(it.fold(last, |acc, a| ctor(a, acc)))
            };
            match name.as_str() {
                "min" => fold(OrderTerm::min),
                "max" => fold(OrderTerm::max),
                "lex" => fold(OrderTerm::lex),
                other => {
                    let m = maps
                        .get(other)
                        .ok_or_else(|| Error::Arity(format!("unknown function `{other}`")))?;
                    match args.as_slice() {
                        [a] => Ok(OrderTerm::Map(Arc::new((*m).clone()), Box::new(a.clone()))),
                        _ => Err(Error::Arity(format!("map `{other}` is unary"))),
                    }
                }
            }
        }
    }
}
