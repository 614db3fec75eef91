//! Strictly increasing piecewise maps on the rationals.
//!
//! A [`PLMap`] covers all of ℚ with finitely many closed intervals. On each
//! interval it acts by a linear fractional (Möbius) map with rational
//! coefficients; affine maps are the Möbius maps with `c = 0`. These model
//! automorphisms of (ℚ,<) (affine tails at both ends) and proper
//! self-embeddings with bounded range (a Möbius tail).

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `x ↦ (a·x + b) / (c·x + d)`, stored normalized so that equal maps compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mobius {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Mobius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Mobius> {
        if c.is_zero() && d.is_zero() {
            return Err(Error::InvalidMap("degenerate denominator".into()));
        }
        Ok(Mobius { a, b, c, d }.normalized())
    }

    pub fn affine(slope: Rational, offset: Rational) -> Mobius {
        Mobius {
            a: slope,
            b: offset,
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    pub fn identity() -> Mobius {
        Mobius::affine(Rational::one(), Rational::zero())
    }

    fn normalized(self) -> Mobius {
        let scale = if self.c.is_zero() {
            self.d.clone()
        } else {
            self.c.clone()
        };
        Mobius {
            a: self.a / &scale,
            b: self.b / &scale,
            c: self.c / &scale,
            d: self.d / &scale,
        }
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    /// Slope and offset when affine.
    pub fn affine_parts(&self) -> Option<(Rational, Rational)> {
        self.is_affine()
            .then(|| (self.a.clone() / &self.d, self.b.clone() / &self.d))
    }

    pub fn coefficients(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    fn determinant(&self) -> Rational {
        &self.a * &self.d - &self.b * &self.c
    }

    fn pole(&self) -> Option<Rational> {
        (!self.c.is_zero()).then(|| -(&self.d / &self.c))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        (&self.a * x + &self.b) / (&self.c * x + &self.d)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &inner.a + &self.b * &inner.c,
            b: &self.a * &inner.b + &self.b * &inner.d,
            c: &self.c * &inner.a + &self.d * &inner.c,
            d: &self.c * &inner.b + &self.d * &inner.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
        .normalized()
    }

    fn increasing_on(&self, lo: Option<&Rational>, hi: Option<&Rational>) -> bool {
        if !self.determinant().is_positive() {
            return false;
        }
        match self.pole() {
            None => true,
            Some(p) => {
                let left_of = hi.is_some_and(|h| p > *h);
                let right_of = lo.is_some_and(|l| p < *l);
                left_of || right_of
            }
        }
    }

    /// Limit as x → +∞ (`None` means +∞ for an increasing affine map).
    fn limit_at_infinity(&self) -> Option<Rational> {
        self.pole().map(|_| &self.a / &self.c)
    }
}

/// One interval `[lo, hi]` of a [`PLMap`]; `None` endpoints are infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: Option<Rational>,
    pub hi: Option<Rational>,
    pub map: Mobius,
}

impl Piece {
    fn contains(&self, x: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|l| l <= x) && self.hi.as_ref().is_none_or(|h| x <= h)
    }

    fn sample(&self) -> Rational {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => (l + h) / rational::int(2),
            (Some(l), None) => l + Rational::one(),
            (None, Some(h)) => h - Rational::one(),
            (None, None) => Rational::zero(),
        }
    }
}

/// A strictly increasing map ℚ → ℚ given by finitely many Möbius pieces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PLMap {
    pieces: Vec<Piece>,
}

impl PLMap {
    /// Validates coverage, contiguity, continuity and strict monotonicity.
    pub fn new(pieces: Vec<Piece>) -> Result<PLMap> {
        let (first, last) = match (pieces.first(), pieces.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Err(Error::InvalidMap("no pieces".into())),
        };
        if first.lo.is_some() || last.hi.is_some() {
            return Err(Error::InvalidMap("pieces must cover all of Q".into()));
        }
        for (idx, piece) in pieces.iter().enumerate() {
            if let (Some(l), Some(h)) = (&piece.lo, &piece.hi) {
                if l >= h {
                    return Err(Error::InvalidMap(format!("piece {idx} is empty")));
                }
            }
            if !piece.map.increasing_on(piece.lo.as_ref(), piece.hi.as_ref()) {
                return Err(Error::InvalidMap(format!(
                    "piece {idx} is not strictly increasing on its interval"
                )));
            }
        }
        for (idx, pair) in pieces.windows(2).enumerate() {
            let (left, right) = (&pair[0], &pair[1]);
            match (&left.hi, &right.lo) {
                (Some(h), Some(l)) if h == l => {
                    if left.map.eval(h) != right.map.eval(h) {
                        return Err(Error::InvalidMap(format!(
                            "discontinuity between pieces {idx} and {}",
                            idx + 1
                        )));
                    }
                }
                _ => {
                    return Err(Error::InvalidMap(format!(
                        "pieces {idx} and {} are not adjacent",
                        idx + 1
                    )))
                }
            }
        }
        Ok(PLMap { pieces }.merged())
    }

    pub fn identity() -> PLMap {
        PLMap::affine(Rational::one(), Rational::zero())
    }

    pub fn translation(shift: Rational) -> PLMap {
        PLMap::affine(Rational::one(), shift)
    }

    /// Panics if `slope` is not positive.
    pub fn affine(slope: Rational, offset: Rational) -> PLMap {
        assert!(slope.is_positive(), "affine automorphism needs a positive slope");
        PLMap {
            pieces: vec![Piece {
                lo: None,
                hi: None,
                map: Mobius::affine(slope, offset),
            }],
        }
    }

    /// Piecewise-affine interpolation through `points`, slope-one tails.
    /// The points must be strictly increasing in both coordinates.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Result<PLMap> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(Error::InvalidMap(
                    "interpolation points are not strictly increasing".into(),
                ));
            }
        }
        let (first, last) = match (points.first(), points.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => return Ok(PLMap::identity()),
        };
        let mut pieces = vec![Piece {
            lo: None,
            hi: Some(first.0.clone()),
            map: Mobius::affine(Rational::one(), &first.1 - &first.0),
        }];
        for w in points.windows(2) {
            let ((x0, y0), (x1, y1)) = (&w[0], &w[1]);
            let slope = (y1 - y0) / (x1 - x0);
            let offset = y0 - &slope * x0;
            pieces.push(Piece {
                lo: Some(x0.clone()),
                hi: Some(x1.clone()),
                map: Mobius::affine(slope, offset),
            });
        }
        pieces.push(Piece {
            lo: Some(last.0.clone()),
            hi: None,
            map: Mobius::affine(Rational::one(), &last.1 - &last.0),
        });
        PLMap::new(pieces)
    }

    /// Identity up to `knee`, then a Möbius squash onto `[knee, bound)`.
    pub fn squash_above(knee: Rational, bound: Rational) -> Result<PLMap> {
        if bound <= knee {
            return Err(Error::InvalidMap("squash bound must exceed the knee".into()));
        }
        let gap = &bound - &knee;
        // M + gap·(x − M)/(x − M + gap)
        let tail = Mobius::new(
            &gap + &knee,
            -(&knee * &knee),
            Rational::one(),
            &gap - &knee,
        )?;
        PLMap::new(vec![
            Piece {
                lo: None,
                hi: Some(knee.clone()),
                map: Mobius::identity(),
            },
            Piece {
                lo: Some(knee),
                hi: None,
                map: tail,
            },
        ])
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_for(&self, x: &Rational) -> &Piece {
        self.pieces
            .iter()
            .find(|p| p.hi.as_ref().is_none_or(|h| x <= h))
            .expect("pieces cover Q")
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.piece_for(x).map.eval(x)
    }

    pub fn eval_all(&self, xs: &[Rational]) -> Vec<Rational> {
        xs.iter().map(|x| self.eval(x)).collect()
    }

    /// Infimum of the range; `None` is -∞.
    pub fn lower_limit(&self) -> Option<Rational> {
        // as x → -∞, (a x + b)/(c x + d) → a/c as well
        self.pieces[0].map.limit_at_infinity()
    }

    /// Supremum of the range; `None` is +∞.
    pub fn upper_limit(&self) -> Option<Rational> {
        self.pieces.last().unwrap().map.limit_at_infinity()
    }

    /// Surjective onto ℚ, i.e. an automorphism of (ℚ,<).
    pub fn is_automorphism(&self) -> bool {
        self.lower_limit().is_none() && self.upper_limit().is_none()
    }

    /// Interior breakpoints with their images.
    pub fn breakpoints(&self) -> Vec<(Rational, Rational)> {
        self.pieces[..self.pieces.len() - 1]
            .iter()
            .map(|p| {
                let x = p.hi.clone().unwrap();
                let y = p.map.eval(&x);
                (x, y)
            })
            .collect()
    }

    /// The unique x with `self(x) = y`, when y is in the range.
    pub fn preimage(&self, y: &Rational) -> Option<Rational> {
        for piece in &self.pieces {
            let x = piece.map.inverse().eval(y);
            if piece.contains(&x) && piece.map.eval(&x) == *y {
                return Some(x);
            }
        }
        None
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        let mut cuts: Vec<Rational> = inner.breakpoints().into_iter().map(|(x, _)| x).collect();
        for (y, _) in self.breakpoints() {
            if let Some(x) = inner.preimage(&y) {
                cuts.push(x);
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut bounds: Vec<Option<Rational>> = vec![None];
        bounds.extend(cuts.into_iter().map(Some));
        bounds.push(None);
        let pieces = bounds
            .windows(2)
            .map(|w| {
                let mut piece = Piece {
                    lo: w[0].clone(),
                    hi: w[1].clone(),
                    map: Mobius::identity(),
                };
                let x = piece.sample();
                let inner_piece = inner.piece_for(&x);
                let outer_piece = self.piece_for(&inner_piece.map.eval(&x));
                piece.map = outer_piece.map.after(&inner_piece.map);
                piece
            })
            .collect();
        PLMap { pieces }.merged()
    }

    /// Inverse of an automorphism.
    pub fn inverse(&self) -> Result<PLMap> {
        if !self.is_automorphism() {
            return Err(Error::InvalidMap(
                "only automorphisms have inverses in this representation".into(),
            ));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece {
                lo: p.lo.as_ref().map(|l| p.map.eval(l)),
                hi: p.hi.as_ref().map(|h| p.map.eval(h)),
                map: p.map.inverse(),
            })
            .collect();
        PLMap::new(pieces)
    }

    fn merged(self) -> PLMap {
        let mut pieces: Vec<Piece> = Vec::with_capacity(self.pieces.len());
        for piece in self.pieces {
            match pieces.last_mut() {
                Some(prev) if prev.map == piece.map => prev.hi = piece.hi,
                _ => pieces.push(piece),
            }
        }
        PLMap { pieces }
    }

    /// Serialized `piece` lines.
    pub fn to_lines(&self) -> Vec<String> {
        self.pieces
            .iter()
            .map(|p| {
                let lo = p.lo.as_ref().map_or("-inf".to_string(), rational::render);
                let hi = p.hi.as_ref().map_or("inf".to_string(), rational::render);
                match p.map.affine_parts() {
                    Some((slope, offset)) => format!(
                        "piece {lo} {hi} affine {} {}",
                        rational::render(&slope),
                        rational::render(&offset)
                    ),
                    None => {
                        let [a, b, c, d] = p.map.coefficients();
                        format!(
                            "piece {lo} {hi} mobius {} {} {} {}",
                            rational::render(a),
                            rational::render(b),
                            rational::render(c),
                            rational::render(d)
                        )
                    }
                }
            })
            .collect()
    }

    /// Parses `piece` lines (`first_line` is used for error positions).
    pub fn from_lines<'a>(
        lines: impl IntoIterator<Item = &'a str>,
        first_line: usize,
    ) -> Result<PLMap> {
        let mut pieces = Vec::new();
        for (offset, line) in lines.into_iter().enumerate() {
            let line_no = first_line + offset;
            pieces.push(parse_piece(line, line_no)?);
        }
        PLMap::new(pieces).map_err(|e| Error::syntax(first_line, e.to_string()))
    }
}

pub(crate) fn parse_piece(line: &str, line_no: usize) -> Result<Piece> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let bound = |w: &str, infinite: &str| -> Result<Option<Rational>> {
        if w == infinite {
            Ok(None)
        } else {
            rational::parse(w)
                .map(Some)
                .ok_or_else(|| Error::syntax(line_no, format!("bad rational `{w}`")))
        }
    };
    let num = |w: &str| -> Result<Rational> {
        rational::parse(w).ok_or_else(|| Error::syntax(line_no, format!("bad rational `{w}`")))
    };
    match words.as_slice() {
        ["piece", lo, hi, "affine", p, q] => Ok(Piece {
            lo: bound(lo, "-inf")?,
            hi: bound(hi, "inf")?,
            map: Mobius::affine(num(p)?, num(q)?),
        }),
        ["piece", lo, hi, "mobius", a, b, c, d] => Ok(Piece {
            lo: bound(lo, "-inf")?,
            hi: bound(hi, "inf")?,
            map: Mobius::new(num(a)?, num(b)?, num(c)?, num(d)?)
                .map_err(|e| Error::syntax(line_no, e.to_string()))?,
        }),
        _ => Err(Error::syntax(line_no, "expected `piece <lo> <hi> affine|mobius ...`")),
    }
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.to_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}
