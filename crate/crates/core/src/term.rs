//! Terms over a functional signature, with a prefix-syntax parser.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A term whose function symbols are indices into some signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// `x_{i+1}`; variables are 0-based internally.
    Var(usize),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(symbol: usize, args: Vec<Term>) -> Term {
        Term::App(symbol, args)
    }

    /// `symbol(x1, .., xn)`.
    pub fn basic(symbol: usize, arity: usize) -> Term {
        Term::App(symbol, (0..arity).map(Term::Var).collect())
    }

    /// Number of variables needed to evaluate: one more than the largest index.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn symbols(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<usize>) {
        if let Term::App(f, args) = self {
            out.insert(*f);
            for a in args {
                a.collect_symbols(out);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces `x_i` by `args[i]`.
    pub fn substitute(&self, args: &[Term]) -> Term {
        match self {
            Term::Var(i) => args[*i].clone(),
            Term::App(f, children) => {
                Term::App(*f, children.iter().map(|c| c.substitute(args)).collect())
            }
        }
    }

    /// Image under the homomorphism to the projection clone sending symbol
    /// `f` to the selector of coordinate `sigma[f]` (0-based): the variable
    /// reached by following the selected argument down the term.
    pub fn collapse(&self, sigma: &[usize]) -> usize {
        let mut t = self;
        loop {
            match t {
                Term::Var(i) => return *i,
                Term::App(f, args) => t = &args[sigma[*f]],
            }
        }
    }

    pub fn check_arities(&self, arities: &[usize]) -> Result<()> {
        if let Term::App(f, args) = self {
            let expected = *arities
                .get(*f)
                .ok_or_else(|| Error::Arity(format!("unknown symbol #{f}")))?;
            if expected != args.len() {
                return Err(Error::Arity(format!(
                    "symbol #{f} has arity {expected}, applied to {} arguments",
                    args.len()
                )));
            }
            for a in args {
                a.check_arities(arities)?;
            }
        }
        Ok(())
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> TermDisplay<'a, S> {
        TermDisplay { term: self, names }
    }
}

pub struct TermDisplay<'a, S> {
    term: &'a Term,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for TermDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(i) => write!(f, "x{}", i + 1),
            Term::App(s, args) => {
                write!(f, "{}(", self.names[*s].as_ref())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", a.display(self.names))?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Parse tree with symbol names still unresolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTerm {
    Var(usize),
    App(String, Vec<RawTerm>),
}

impl RawTerm {
    /// Resolves names through `lookup`, which returns a symbol index and arity.
    pub fn resolve(&self, lookup: &dyn Fn(&str) -> Option<(usize, usize)>) -> Result<Term> {
        match self {
            RawTerm::Var(i) => Ok(Term::Var(*i)),
            RawTerm::App(name, args) => {
                let (idx, arity) =
                    lookup(name).ok_or_else(|| Error::Arity(format!("unknown symbol `{name}`")))?;
                if arity != args.len() {
                    return Err(Error::Arity(format!(
                        "`{name}` has arity {arity}, applied to {} arguments",
                        args.len()
                    )));
                }
                let args = args
                    .iter()
                    .map(|a| a.resolve(lookup))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::App(idx, args))
            }
        }
    }
}

fn variable_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let i: usize = digits.parse().ok()?;
    (i >= 1).then(|| i - 1)
}

/// Parses prefix syntax like `f(x1, g(x2, x3))`; variables are `x1`, `x2`, ...
pub fn parse_raw(text: &str) -> Result<RawTerm> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let term = parser.term()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(Error::syntax(0, format!("trailing input in term `{text}`")));
    }
    Ok(term)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(0, format!("expected a name at offset {start}")));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let name = self.ident()?;
        if !self.eat(b'(') {
            return variable_index(&name)
                .map(RawTerm::Var)
                .ok_or_else(|| Error::syntax(0, format!("`{name}` is not a variable (use x1, x2, ...)")));
        }
        let mut args = Vec::new();
        if !self.eat(b')') {
            loop {
                args.push(self.term()?);
                if self.eat(b')') {
                    break;
                }
                if !self.eat(b',') {
                    return Err(Error::syntax(0, format!("expected `,` or `)` at offset {}", self.pos)));
                }
            }
        }
        Ok(RawTerm::App(name, args))
    }
}
