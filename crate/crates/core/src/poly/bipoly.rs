use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rat::{denom_lcm, Rat};

/// Exponent pair `(i1, i2)` of the monomial `x^i1 y^i2`.
pub type Exp = (u32, u32);

/// Sparse bivariate polynomial over the rationals.
///
/// Terms are kept in a `BTreeMap` keyed by `(i1, i2)`; zero coefficients are
/// never stored, so the zero polynomial is the empty map.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BiPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, (0, 0))
    }

    pub fn x() -> Self {
        Self::monomial(Rat::one(), (1, 0))
    }

    pub fn y() -> Self {
        Self::monomial(Rat::one(), (0, 1))
    }

    pub fn monomial(c: Rat, e: Exp) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Builds a polynomial from possibly repeated terms; repeats are summed.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exp, Rat)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from small integer coefficients.
    pub fn from_ints(terms: &[((u32, u32), i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (e, Rat::from_integer(c.into()))))
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn bidegree(&self) -> (u32, u32) {
        (self.deg_x(), self.deg_y())
    }

    pub fn coeff(&self, e: Exp) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exp, &Rat)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under lex order with `x` before `y`.
    pub fn leading(&self) -> Option<(Exp, &Rat)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        // Horner in x over rows of fixed i1.
        let mut acc = Rat::zero();
        let dx = self.deg_x();
        for i1 in (0..=dx).rev() {
            let mut row = Rat::zero();
            for i2 in (0..=self.deg_y()).rev() {
                row = row * y + self.coeff((i1, i2));
            }
            acc = acc * x + row;
        }
        acc
    }

    pub fn derivative_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.0 > 0)
                .map(|(e, c)| ((e.0 - 1, e.1), c * Rat::from_integer(e.0.into()))),
        )
    }

    pub fn derivative_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.1 > 0)
                .map(|(e, c)| ((e.0, e.1 - 1), c * Rat::from_integer(e.1.into()))),
        )
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| ((e.1, e.0), c.clone())).collect(),
        }
    }

    /// Expansion at `(p, q)`: returns `g` with `g(t1, t2) = f(t1 + p, t2 + q)`.
    pub fn shift(&self, p: &Rat, q: &Rat) -> Self {
        // Binomial expansion done one variable at a time keeps this O(d1 d2 (d1 + d2)).
        let sx = shift_axis(&self.terms, p, |e| e.0, |e, k| (k, e.1));
        let sxy = shift_axis(&sx, q, |e| e.1, |e, k| (e.0, k));
        Self { terms: sxy }
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Max absolute coefficient.
    pub fn height(&self) -> Rat {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
    }

    /// Scales to integer coefficients with gcd 1 and positive leading coefficient.
    /// Returns the scaled polynomial and the factor `c` with `self = c * result`.
    pub fn primitive_normalized(&self) -> (Rat, Self) {
        if self.is_zero() {
            return (Rat::zero(), Self::zero());
        }
        let l = denom_lcm(self.terms.values());
        let g = self
            .terms
            .values()
            .map(|c| (c * Rat::from_integer(l.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| num_integer::Integer::gcd(&acc, &n));
        let mut factor = Rat::new(g, l);
        if self.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        let inv = factor.recip();
        (factor, self.scale(&inv))
    }
}

fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k as usize] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

fn shift_axis(
    terms: &BTreeMap<Exp, Rat>,
    a: &Rat,
    pick: impl Fn(Exp) -> u32,
    place: impl Fn(Exp, u32) -> Exp,
) -> BTreeMap<Exp, Rat> {
    let mut out: BTreeMap<Exp, Rat> = BTreeMap::new();
    if a.is_zero() {
        return terms.clone();
    }
    let max_deg = terms.keys().map(|&e| pick(e)).max().unwrap_or(0);
    let powers: Vec<Rat> = std::iter::successors(Some(Rat::one()), |p| Some(p * a))
        .take(max_deg as usize + 1)
        .collect();
    for (&e, c) in terms {
        let n = pick(e);
        let binom = binomial_row(n);
        // (t + a)^n = sum_k C(n,k) a^(n-k) t^k
        for k in 0..=n {
            let contrib = c * &powers[(n - k) as usize] * Rat::from_integer(binom[k as usize].clone());
            let slot = out.entry(place(e, k)).or_insert_with(Rat::zero);
            *slot += contrib;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match *e {
                (0, 0) => String::new(),
                (a, 0) => pow_str("x", a),
                (0, b) => pow_str("y", b),
                (a, b) => format!("{}*{}", pow_str("x", a), pow_str("y", b)),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn pow_str(v: &str, k: u32) -> String {
    if k == 1 {
        v.to_string()
    } else {
        format!("{v}^{k}")
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut acc: BTreeMap<Exp, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let slot = acc.entry((ea.0 + eb.0, ea.1 + eb.1)).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        BiPoly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BiPoly {
            type Output = BiPoly;
            fn $m(self, rhs: BiPoly) -> BiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}
