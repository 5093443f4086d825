use num_traits::Zero;
use serde::Serialize;

use super::sqfree::squarefree_parts;
use super::BiPoly;
use crate::error::{Error, Result};
use crate::rat::Rat;

/// One squarefree component of a divisor together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub factor: BiPoly,
    pub multiplicity: u32,
    /// Union of fibers `{x = c}` of the first projection.
    pub is_fiber_of_p1: bool,
    /// Union of fibers `{y = c}` of the second projection.
    pub is_fiber_of_p2: bool,
}

impl Component {
    pub fn is_fiber(&self) -> bool {
        self.is_fiber_of_p1 || self.is_fiber_of_p2
    }
}

/// An effective divisor on P1 x P1 given by an affine equation, carried in
/// the line bundle of bidegree `designated_bidegree`.
///
/// Intersection numbers come from the bidegree `(d1, d2)`:
/// `D.F2 = d1`, `D.F1 = d2`, `D.D = 2 d1 d2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    pub poly: BiPoly,
    pub designated_bidegree: (u32, u32),
    pub constant: Rat,
    pub components: Vec<Component>,
    pub e_of_d: u32,
}

/// Squarefree analysis of `f` as a divisor of bidegree `designated`.
pub fn analyze_divisor(f: &BiPoly, designated: (u32, u32)) -> Result<DivisorData> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let (ax, ay) = f.bidegree();
    if designated.0 < ax || designated.1 < ay {
        return Err(Error::BidegreeTooSmall(designated.0, designated.1, ax, ay));
    }
    let parts = squarefree_parts(f)?;
    let mut components: Vec<Component> = Vec::new();
    let push = |list: &[(BiPoly, u32)], p1: bool, p2: bool, out: &mut Vec<Component>| {
        for (g, k) in list {
            out.push(Component {
                factor: g.clone(),
                multiplicity: *k,
                is_fiber_of_p1: p1,
                is_fiber_of_p2: p2,
            });
        }
    };
    push(&parts.x_fibers, true, false, &mut components);
    push(&parts.y_fibers, false, true, &mut components);
    push(&parts.mixed, false, false, &mut components);
    components.sort_by_key(|c| c.multiplicity);
    let e_of_d = parts.mixed.iter().map(|(_, k)| *k).max().unwrap_or(0);
    Ok(DivisorData {
        poly: f.clone(),
        designated_bidegree: designated,
        constant: parts.constant,
        components,
        e_of_d,
    })
}

impl DivisorData {
    /// `D.F2`, the degree in `x`.
    pub fn dot_f2(&self) -> u32 {
        self.designated_bidegree.0
    }

    /// `D.F1`, the degree in `y`.
    pub fn dot_f1(&self) -> u32 {
        self.designated_bidegree.1
    }

    pub fn self_intersection(&self) -> u64 {
        2 * self.designated_bidegree.0 as u64 * self.designated_bidegree.1 as u64
    }

    pub fn has_fibers(&self) -> bool {
        self.components.iter().any(Component::is_fiber)
    }

    /// Multiplicity of the fiber `{x = p}` in the divisor.
    pub fn fiber_multiplicity_x(&self, p: &Rat) -> u32 {
        self.components
            .iter()
            .filter(|c| c.is_fiber_of_p1 && c.factor.eval(p, &Rat::zero()).is_zero())
            .map(|c| c.multiplicity)
            .sum()
    }

    /// Multiplicity of the fiber `{y = q}` in the divisor.
    pub fn fiber_multiplicity_y(&self, q: &Rat) -> u32 {
        self.components
            .iter()
            .filter(|c| c.is_fiber_of_p2 && c.factor.eval(&Rat::zero(), q).is_zero())
            .map(|c| c.multiplicity)
            .sum()
    }

    /// The divisor with every fiber component removed; the designated bidegree
    /// drops by the removed fiber degrees so the padding is preserved.
    pub fn without_fibers(&self) -> DivisorData {
        let mut poly = BiPoly::constant(self.constant.clone());
        let (mut dx, mut dy) = self.designated_bidegree;
        let mut kept = Vec::new();
        for c in &self.components {
            if c.is_fiber() {
                let (fx, fy) = c.factor.bidegree();
                dx -= fx * c.multiplicity;
                dy -= fy * c.multiplicity;
            } else {
                poly = &poly * &c.factor.pow(c.multiplicity);
                kept.push(c.clone());
            }
        }
        DivisorData {
            poly,
            designated_bidegree: (dx, dy),
            constant: self.constant.clone(),
            components: kept,
            e_of_d: self.e_of_d,
        }
    }

    /// Expands the components back into a polynomial.
    pub fn reconstruct(&self) -> BiPoly {
        self.components
            .iter()
            .fold(BiPoly::constant(self.constant.clone()), |acc, c| {
                &acc * &c.factor.pow(c.multiplicity)
            })
    }
}

/// Serializable view used in reports.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentSummary {
    pub factor: String,
    pub multiplicity: u32,
    pub is_fiber_of_p1: bool,
    pub is_fiber_of_p2: bool,
}

impl From<&Component> for ComponentSummary {
    fn from(c: &Component) -> Self {
        Self {
            factor: c.factor.to_string(),
            multiplicity: c.multiplicity,
            is_fiber_of_p1: c.is_fiber_of_p1,
            is_fiber_of_p2: c.is_fiber_of_p2,
        }
    }
}
