//! A clone of polymorphisms of (ℚ,<) whose projective homomorphism is not continuous.
//!
//! Members are operations `f` with a coordinate `i`, a threshold `a` and an
//! automorphism `α` such that `f(u) = α(u_i)` whenever every `u_j > a`.
//! Sending `f` to `π_i` is a clone homomorphism to the projection clone, and
//! any finite restriction of a member extends to members with every
//! eventual coordinate.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::plmap::{Mobius, PLMap};
use crate::rational::{self, squash_unit, Rational};

/// Strictly increasing extension of finite data, bounded above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneExtension {
    points: Vec<(Vec<Rational>, Rational)>,
    offset: Rational,
    epsilon: Rational,
    squash: PLMap,
}

fn strictly_below(u: &[Rational], v: &[Rational]) -> bool {
    u.iter().zip(v).all(|(x, y)| x < y)
}

fn min_gap(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(x, y)| y - x).min().unwrap()
}

/// Checks that `u < v` in every coordinate forces `P(u) < P(v)`, and that
/// no point carries two values. Returns the deduplicated data.
pub fn check_consistent(data: &[(Vec<Rational>, Rational)]) -> Result<Vec<(Vec<Rational>, Rational)>> {
    let mut unique: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for (p, y) in data {
        if let Some(prev) = unique.insert(p.clone(), y.clone()) {
            if prev != *y {
                return Err(Error::Inconsistent(format!(
                    "point ({}) has values {} and {}",
                    rational::render_all(p),
                    rational::render(&prev),
                    rational::render(y)
                )));
            }
        }
    }
    let points: Vec<(Vec<Rational>, Rational)> = unique.into_iter().collect();
    for (p, y) in &points {
        for (q, z) in &points {
            if strictly_below(p, q) && y >= z {
                return Err(Error::Inconsistent(format!(
                    "({}) < ({}) but {} >= {}",
                    rational::render_all(p),
                    rational::render_all(q),
                    rational::render(y),
                    rational::render(z)
                )));
            }
        }
    }
    Ok(points)
}

impl MonotoneExtension {
    /// Extends consistent data; every value must lie below `bound`.
    ///
    /// `δ(u) = S(max(b(u), max_l y_l + ε·min_j(u_j − p_lj)))`, the inner max
    /// over data points `p_l` with `u = p_l` or `u > p_l` in every
    /// coordinate, where `b` is a bounded increasing floor below all data
    /// and `S` squashes the range under `bound` while fixing every value.
    pub fn new(n: usize, data: &[(Vec<Rational>, Rational)], bound: &Rational) -> Result<Self> {
        if let Some((p, _)) = data.iter().find(|(p, _)| p.len() != n) {
            return Err(Error::Arity(format!("data point of length {} for arity {n}", p.len())));
        }
        let points = check_consistent(data)?;
        if let Some((_, y)) = points.iter().find(|(_, y)| y >= bound) {
            return Err(Error::Inconsistent(format!(
                "value {} is not below {}",
                rational::render(y),
                rational::render(bound)
            )));
        }
        let n_q = rational::int(n as i64);
        let offset = match points.iter().map(|(_, y)| y).min() {
            Some(lowest) => &n_q - lowest,
            None => n_q,
        };
        let mut epsilon = Rational::one();
        for (p, y) in &points {
            for (q, z) in &points {
                if strictly_below(p, q) {
                    let e = (z - y) / min_gap(p, q);
                    if e < epsilon {
                        epsilon = e;
                    }
                }
            }
        }
        let knee = points
            .iter()
            .map(|(_, y)| y.clone())
            .max()
            .unwrap_or_else(|| bound - Rational::one());
        let squash = PLMap::squash_above(knee, bound.clone())?;
        Ok(MonotoneExtension {
            points,
            offset,
            epsilon,
            squash,
        })
    }

    pub fn points(&self) -> &[(Vec<Rational>, Rational)] {
        &self.points
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        let mut best = u.iter().map(squash_unit).fold(-&self.offset, |acc, x| acc + x);
        for (p, y) in &self.points {
            let candidate = if p.as_slice() == u {
                y.clone()
            } else if strictly_below(p, u) {
                y + &self.epsilon * min_gap(p, u)
            } else {
                continue;
            };
            if candidate > best {
                best = candidate;
            }
        }
        self.squash.eval(&best)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Body {
    Selector,
    /// A unary increasing map, eventually an automorphism.
    Map(PLMap),
    Primitive(MonotoneExtension),
    Composition(QFunction, Vec<QFunction>),
}

/// A member of the clone: an operation that is eventually `α(u_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFunction {
    pub name: String,
    arity: usize,
    coordinate: usize,
    threshold: Rational,
    eventual: PLMap,
    body: Arc<Body>,
}

impl QFunction {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Eventual coordinate, 0-based.
    pub fn coordinate(&self) -> usize {
        self.coordinate
    }

    pub fn threshold(&self) -> &Rational {
        &self.threshold
    }

    pub fn eventual_map(&self) -> &PLMap {
        &self.eventual
    }

    pub fn is_primitive(&self) -> bool {
        matches!(*self.body, Body::Primitive(_))
    }

    pub fn selector(n: usize, i: usize) -> Result<QFunction> {
        if i >= n {
            return Err(Error::Arity(format!("coordinate {} of arity {n}", i + 1)));
        }
        Ok(QFunction {
            name: format!("pi{}_{}", n, i + 1),
            arity: n,
            coordinate: i,
            threshold: Rational::zero(),
            eventual: PLMap::identity(),
            body: Arc::new(Body::Selector),
        })
    }

    /// A unary member given by an increasing map whose last piece is affine.
    pub fn unary(name: &str, map: PLMap) -> Result<QFunction> {
        let last = map.pieces().last().unwrap();
        let Some((slope, offset)) = last.map.affine_parts() else {
            return Err(Error::InvalidMap(format!("`{name}` is not eventually affine")));
        };
        let threshold = last.lo.clone().unwrap_or_else(Rational::zero);
        Ok(QFunction {
            name: name.to_string(),
            arity: 1,
            coordinate: 0,
            threshold,
            eventual: PLMap::affine(slope, offset),
            body: Arc::new(Body::Map(map)),
        })
    }

    pub fn eval(&self, u: &[Rational]) -> Rational {
        match &*self.body {
            Body::Selector => u[self.coordinate].clone(),
            Body::Map(m) => m.eval(&u[0]),
            Body::Primitive(ext) => {
                if u.iter().all(|x| *x > self.threshold) {
                    self.eventual.eval(&u[self.coordinate])
                } else {
                    ext.eval(u)
                }
            }
            Body::Composition(f, gs) => {
                let inner: Vec<Rational> = gs.iter().map(|g| g.eval(u)).collect();
                f.eval(&inner)
            }
        }
    }

    /// The coordinate read off the provenance term.
    pub fn symbolic_coordinate(&self) -> usize {
        match &*self.body {
            Body::Composition(f, gs) => gs[f.symbolic_coordinate()].symbolic_coordinate(),
            _ => self.coordinate,
        }
    }

    /// A point above the threshold with pairwise distinct coordinates.
    pub fn eventual_sample(&self) -> Vec<Rational> {
        (0..self.arity)
            .map(|j| &self.threshold + rational::int(j as i64 + 1))
            .collect()
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "qfunction {} {}\neventual {} {}",
            self.name,
            self.arity,
            self.coordinate + 1,
            rational::render(&self.threshold)
        )
        .unwrap();
        for line in self.eventual.to_lines() {
            writeln!(out, "  {line}").unwrap();
        }
        match &*self.body {
            Body::Selector => writeln!(out, "selector").unwrap(),
            Body::Map(m) => {
                writeln!(out, "map").unwrap();
                for line in m.to_lines() {
                    writeln!(out, "  {line}").unwrap();
                }
            }
            Body::Primitive(ext) => {
                for (p, y) in ext.points() {
                    writeln!(out, "row {} -> {}", rational::render_all(p), rational::render(y)).unwrap();
                }
            }
            Body::Composition(f, gs) => {
                let names: Vec<&str> = gs.iter().map(|g| g.name.as_str()).collect();
                writeln!(out, "compose {} {}", f.name, names.join(" ")).unwrap();
            }
        }
        out
    }
}

/// A primitive member: `α(u_i)` above `a`, a monotone extension of `data` below.
pub fn make_member(
    name: &str,
    n: usize,
    i: usize,
    a: Rational,
    alpha: PLMap,
    data: &[(Vec<Rational>, Rational)],
) -> Result<QFunction> {
    if n == 0 || i >= n {
        return Err(Error::Arity(format!("coordinate {} of arity {n}", i + 1)));
    }
    if !alpha.is_automorphism() {
        return Err(Error::InvalidMap("the eventual map must be an automorphism".into()));
    }
    if let Some((p, _)) = data.iter().find(|(p, _)| p.len() == n && p.iter().all(|x| *x > a)) {
        return Err(Error::Inconsistent(format!(
            "data point ({}) lies above the threshold",
            rational::render_all(p)
        )));
    }
    let bound = alpha.eval(&a);
    let ext = MonotoneExtension::new(n, data, &bound)?;
    Ok(QFunction {
        name: name.to_string(),
        arity: n,
        coordinate: i,
        threshold: a,
        eventual: alpha,
        body: Arc::new(Body::Primitive(ext)),
    })
}

/// `f ∘ (g_1, …, g_m)`, with the eventual regime computed exactly.
pub fn compose_members(f: &QFunction, gs: &[QFunction]) -> Result<QFunction> {
    if gs.len() != f.arity {
        return Err(Error::Arity(format!(
            "`{}` has arity {}, composed with {} functions",
            f.name,
            f.arity,
            gs.len()
        )));
    }
    let n = gs.first().map_or(0, |g| g.arity);
    if n == 0 || gs.iter().any(|g| g.arity != n) {
        return Err(Error::Arity("inner functions must share a positive arity".into()));
    }
    // above T every g_j is eventual and its output exceeds f's threshold
    let mut threshold = f.threshold.clone();
    for g in gs {
        let pre = g
            .eventual
            .preimage(&f.threshold)
            .ok_or_else(|| Error::Internal("eventual map is not onto".into()))?;
        for t in [&g.threshold, &pre] {
            if *t > threshold {
                threshold = t.clone();
            }
        }
    }
    let chosen = &gs[f.coordinate];
    let names: Vec<&str> = gs.iter().map(|g| g.name.as_str()).collect();
    Ok(QFunction {
        name: format!("{}({})", f.name, names.join(",")),
        arity: n,
        coordinate: chosen.coordinate,
        threshold,
        eventual: f.eventual.compose(&chosen.eventual),
        body: Arc::new(Body::Composition(f.clone(), gs.to_vec())),
    })
}

/// The image of `f` under the homomorphism to the projection clone, 0-based.
/// The symbolic coordinate is cross-checked by evaluation above the threshold.
pub fn xi(f: &QFunction) -> Result<usize> {
    let i = f.symbolic_coordinate();
    if i != f.coordinate {
        return Err(Error::Internal(format!("`{}`: stored and symbolic coordinates differ", f.name)));
    }
    let u = f.eventual_sample();
    let value = f.eval(&u);
    if value != f.eventual.eval(&u[i]) {
        return Err(Error::Internal(format!("`{}` is not eventual at its sample", f.name)));
    }
    for j in 0..f.arity {
        let mut v = u.clone();
        v[j] += Rational::one();
        let moved = f.eval(&v) != value;
        if moved != (j == i) {
            return Err(Error::Internal(format!(
                "`{}` does not depend on coordinate {} alone",
                f.name,
                i + 1
            )));
        }
    }
    Ok(i)
}

/// A member with eventual coordinate `target` agreeing with `P` on its points.
pub fn extend_restriction(
    points: &[(Vec<Rational>, Rational)],
    target: usize,
    n: usize,
) -> Result<QFunction> {
    let a = points
        .iter()
        .flat_map(|(p, _)| p.iter())
        .max()
        .map_or_else(Rational::zero, |m| m + Rational::one());
    let top = points.iter().map(|(_, y)| y).max();
    let alpha = match top {
        Some(y) => PLMap::translation(y + Rational::one() - &a),
        None => PLMap::identity(),
    };
    make_member(&format!("ext{}", target + 1), n, target, a, alpha, points)
}

/// `g(x) = a + 1 + x` for `x ≥ 0` and `a + 1/(1 − x)` below; range `(a, ∞)`.
pub fn lift_above(a: &Rational) -> Result<QFunction> {
    let one = Rational::one();
    let below = Mobius::new(-a, a + &one, -&one, one.clone())?;
    let above = Mobius::affine(one.clone(), a + &one);
    let map = PLMap::new(vec![
        crate::plmap::Piece {
            lo: None,
            hi: Some(Rational::zero()),
            map: below,
        },
        crate::plmap::Piece {
            lo: Some(Rational::zero()),
            hi: None,
            map: above,
        },
    ])?;
    QFunction::unary("g", map)
}

#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub witnesses: Vec<QFunction>,
    /// The infimum of each witness range, from the piece descriptions.
    pub range_floors: Vec<Rational>,
    pub range_ok: bool,
    pub grid_points: usize,
    pub grid_ok: bool,
}

/// Unary members `g_j` with ranges above the threshold of `f`, so that
/// `f(g_1(x_1), …, g_n(x_n)) = α(g_i(x_i))` depends only on `x_i`.
pub fn uniqueness_witnesses(f: &QFunction, grid: &[Rational]) -> Result<UniquenessReport> {
    let g = lift_above(f.threshold())?;
    let floor = g
        .body_map()
        .and_then(PLMap::lower_limit)
        .ok_or_else(|| Error::Internal("witness is unbounded below".into()))?;
    let range_ok = floor >= *f.threshold();
    let n = f.arity;
    let i = f.coordinate;
    let mut grid_ok = true;
    let mut count = 0usize;
    let mut choice = vec![0usize; n];
    if !grid.is_empty() {
        loop {
            let x: Vec<Rational> = choice.iter().map(|&c| grid[c].clone()).collect();
            let lifted: Vec<Rational> = x.iter().map(|v| g.eval(std::slice::from_ref(v))).collect();
            count += 1;
            if lifted.iter().any(|v| v <= f.threshold())
                || f.eval(&lifted) != f.eventual.eval(&lifted[i])
            {
                grid_ok = false;
            }
            if !crate::clones::advance(&mut choice, grid.len()) {
                break;
            }
        }
    }
    Ok(UniquenessReport {
        witnesses: vec![g; n],
        range_floors: vec![floor; n],
        range_ok,
        grid_points: count,
        grid_ok,
    })
}

impl QFunction {
    fn body_map(&self) -> Option<&PLMap> {
        match &*self.body {
            Body::Map(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NonContinuityReport {
    pub base: QFunction,
    pub restriction: Vec<(Vec<Rational>, Rational)>,
    pub extensions: Vec<QFunction>,
    /// Every extension agrees with the restriction on every point.
    pub agreement: bool,
    /// `xi` of the extensions, 0-based.
    pub coordinates: Vec<usize>,
}

/// Random rationals with small numerators and denominators.
pub fn random_rational(rng: &mut impl Rng, range: i64) -> Rational {
    let den = rng.gen_range(1..=4i64);
    rational::frac(rng.gen_range(-range * den..=range * den), den)
}

/// A member with coordinate 1, restricted to `samples` random points, and
/// extensions of that restriction with every coordinate.
pub fn noncontinuity_demo(n: usize, samples: usize, seed: u64) -> Result<NonContinuityReport> {
    if n < 2 {
        return Err(Error::Arity("the demonstration needs arity at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<(Vec<Rational>, Rational)> = (0..4)
        .map(|j| {
            let p: Vec<Rational> = (0..n).map(|c| rational::int(j - (c as i64) - 2)).collect();
            let y = rational::int(j - 10);
            (p, y)
        })
        .collect();
    let base = make_member("f", n, 0, Rational::zero(), PLMap::identity(), &data)?;
    let mut restriction = Vec::with_capacity(samples);
    while restriction.len() < samples {
        let p: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, 5)).collect();
        if restriction.iter().any(|(q, _)| *q == p) {
            continue;
        }
        let y = base.eval(&p);
        restriction.push((p, y));
    }
    let extensions = (0..n)
        .map(|t| extend_restriction(&restriction, t, n))
        .collect::<Result<Vec<_>>>()?;
    let agreement = extensions
        .iter()
        .all(|e| restriction.iter().all(|(p, y)| e.eval(p) == *y));
    let coordinates = extensions.iter().map(xi).collect::<Result<Vec<_>>>()?;
    Ok(NonContinuityReport {
        base,
        restriction,
        extensions,
        agreement,
        coordinates,
    })
}

/// Parses `plmap` blocks and `qfunction` blocks:
///
/// ```text
/// plmap shift
/// piece -inf inf affine 1 3
/// qfunction f 2
/// eventual 1 0 shift
/// row 0 1 -> 5/2
/// ```
pub fn parse_qfunctions(text: &str) -> Result<Vec<QFunction>> {
    struct Pending {
        name: String,
        n: usize,
        line: usize,
        eventual: Option<(usize, Rational, String)>,
        rows: Vec<(Vec<Rational>, Rational)>,
    }
    let mut maps: BTreeMap<String, PLMap> = BTreeMap::new();
    let mut out = Vec::new();
    let mut map_block: Option<(String, usize, Vec<String>)> = None;
    let mut pending: Option<Pending> = None;

    let finish_map = |block: Option<(String, usize, Vec<String>)>, maps: &mut BTreeMap<String, PLMap>| -> Result<()> {
        if let Some((name, first, lines)) = block {
            let map = PLMap::from_lines(lines.iter().map(String::as_str), first)?;
            maps.insert(name, map);
        }
        Ok(())
    };
    let finish_fn = |p: Option<Pending>, maps: &BTreeMap<String, PLMap>, out: &mut Vec<QFunction>| -> Result<()> {
        let Some(p) = p else { return Ok(()) };
        let (i, a, map) = p
            .eventual
            .ok_or_else(|| Error::syntax(p.line, format!("`{}` has no `eventual` line", p.name)))?;
        let alpha = maps
            .get(&map)
            .cloned()
            .ok_or_else(|| Error::syntax(p.line, format!("unknown map `{map}`")))?;
        out.push(make_member(&p.name, p.n, i, a, alpha, &p.rows)?);
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |w: &str| {
            rational::parse(w).ok_or_else(|| Error::syntax(line_no, format!("bad rational `{w}`")))
        };
        match words.as_slice() {
            ["plmap", name] => {
                finish_map(map_block.take(), &mut maps)?;
                finish_fn(pending.take(), &maps, &mut out)?;
                map_block = Some((name.to_string(), line_no + 1, Vec::new()));
            }
            ["qfunction", name, n] => {
                finish_map(map_block.take(), &mut maps)?;
                finish_fn(pending.take(), &maps, &mut out)?;
                let n: usize = n
                    .parse()
                    .ok()
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| Error::syntax(line_no, format!("bad arity `{n}`")))?;
                pending = Some(Pending {
                    name: name.to_string(),
                    n,
                    line: line_no,
                    eventual: None,
                    rows: Vec::new(),
                });
            }
            ["piece", ..] if map_block.is_some() => {
                map_block.as_mut().unwrap().2.push(line.to_string());
            }
            ["eventual", i, a, map] if pending.is_some() => {
                let p = pending.as_mut().unwrap();
                let i: usize = i
                    .parse()
                    .ok()
                    .filter(|&i| i >= 1 && i <= p.n)
                    .ok_or_else(|| Error::syntax(line_no, format!("bad coordinate `{i}`")))?;
                p.eventual = Some((i - 1, num(a)?, map.to_string()));
            }
            ["row", rest @ ..] if pending.is_some() => {
                let p = pending.as_mut().unwrap();
                let arrow = rest
                    .iter()
                    .position(|w| *w == "->")
                    .ok_or_else(|| Error::syntax(line_no, "expected `row <u_1> .. <u_n> -> <value>`"))?;
                if arrow != p.n || rest.len() != p.n + 2 {
                    return Err(Error::syntax(line_no, format!("row needs {} inputs and one value", p.n)));
                }
                let point = rest[..arrow].iter().map(|w| num(w)).collect::<Result<Vec<_>>>()?;
                p.rows.push((point, num(rest[arrow + 1])?));
            }
            _ => return Err(Error::syntax(line_no, format!("unrecognized line `{line}`"))),
        }
    }
    finish_map(map_block.take(), &mut maps)?;
    finish_fn(pending.take(), &maps, &mut out)?;
    Ok(out)
}
