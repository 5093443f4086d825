//! Dense univariate polynomials over the rationals, used for contents and
//! fiber components.

use num_traits::{One, Zero};

use crate::rat::Rat;

/// Coefficients low to high; no trailing zeros, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self(coeffs)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, t: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as u64).into()))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Rat::zero);
                    let b = rhs.0.get(i).cloned().unwrap_or_else(Rat::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rat::one()))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dl = d.lead().recip();
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &dl;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's squarefree decomposition: monic pairwise coprime `(g_k, k)` with
    /// `self = lead * prod g_k^k`. Constants yield an empty list.
    pub fn squarefree(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let c = df.div_exact(&a0).expect("gcd divides derivative");
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a).expect("Yun step divides b");
            let c = d.div_exact(&a).expect("Yun step divides d");
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Multiplicity of `t` as a root.
    pub fn root_order(&self, t: &Rat) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = UniPoly::new(vec![-t.clone(), Rat::one()]);
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        k
    }
}
