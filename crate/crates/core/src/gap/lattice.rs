use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ldl_pivots;
use crate::rat::{rat, Rat};

/// Sign of an inner product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(q: &Rat) -> Self {
        if q.is_positive() {
            Sign::Positive
        } else if q.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// A real Mordell-Weil space `R^r` with a positive definite Gram matrix and
/// labelled points given in coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MWLattice {
    gram: Vec<Vec<Rat>>,
    labels: Vec<String>,
    coords: Vec<Vec<Rat>>,
}

impl MWLattice {
    /// Validates symmetry and positive definiteness (all LDL pivots positive).
    pub fn new(gram: Vec<Vec<Rat>>, points: Vec<(String, Vec<Rat>)>) -> Result<Self> {
        let r = gram.len();
        if gram.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension("gram matrix must be square".into()));
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        for (k, p) in ldl_pivots(&gram).into_iter().enumerate() {
            if !p.is_positive() {
                return Err(Error::NotPositiveDefinite(k, p.to_string()));
            }
        }
        let mut labels = Vec::with_capacity(points.len());
        let mut coords = Vec::with_capacity(points.len());
        for (label, c) in points {
            if c.len() != r {
                return Err(Error::Dimension(format!(
                    "point {label:?} has {} coordinates, rank is {r}",
                    c.len()
                )));
            }
            labels.push(label);
            coords.push(c);
        }
        Ok(Self {
            gram,
            labels,
            coords,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[Vec<Rat>] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Same lattice with the Gram matrix multiplied by `c > 0`.
    pub fn scaled(&self, c: &Rat) -> Self {
        Self {
            gram: self
                .gram
                .iter()
                .map(|row| row.iter().map(|g| g * c).collect())
                .collect(),
            ..self.clone()
        }
    }

    /// `u^T G v`.
    pub fn inner(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc += ui * &self.gram[i][j] * vj;
            }
        }
        acc
    }

    pub fn pairing(&self, p: usize, q: usize) -> Rat {
        self.inner(&self.coords[p], &self.coords[q])
    }

    pub fn norm_sq(&self, p: usize) -> Rat {
        self.pairing(p, p)
    }

    /// Sign of `<P,Q>` and `<P,Q>^2 / (|P|^2 |Q|^2)`, without square roots.
    pub fn cos_sq_signed(&self, p: usize, q: usize) -> Result<(Sign, Rat)> {
        cos_sq_signed_with(|a, b| self.inner(a, b), &self.coords[p], &self.coords[q])
    }

    /// `<P,Q> <= (3/4) |P| |Q|`, decided exactly on squares.
    pub fn vojta_predicate(&self, p: usize, q: usize) -> Result<bool> {
        let (sign, c2) = self.cos_sq_signed(p, q)?;
        Ok(vojta_from_cos_sq(sign, &c2))
    }
}

pub(crate) fn cos_sq_signed_with(
    ip: impl Fn(&[Rat], &[Rat]) -> Rat,
    u: &[Rat],
    v: &[Rat],
) -> Result<(Sign, Rat)> {
    let nu = ip(u, u);
    let nv = ip(v, v);
    if nu.is_zero() || nv.is_zero() {
        return Err(Error::ZeroVector);
    }
    let uv = ip(u, v);
    Ok((Sign::of(&uv), &uv * &uv / (nu * nv)))
}

pub(crate) fn vojta_from_cos_sq(sign: Sign, cos_sq: &Rat) -> bool {
    sign != Sign::Positive || *cos_sq <= rat(9, 16)
}
