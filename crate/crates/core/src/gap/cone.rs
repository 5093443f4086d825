//! Greedy covering of directions by angular cones, and the per-cone
//! finiteness bookkeeping built on it.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::lattice::{cos_sq_signed_with, vojta_from_cos_sq, MWLattice, Sign};
use crate::error::{Error, Result};
use crate::rat::{int, rat, serde_rat, Rat};

/// Certified lower bound for `cos^2(20°) ≈ 0.88302`. Cones use it, so a member
/// is within about 20.7° of its center. The value is chosen so that
/// `2 * 7/8 - 1 = 3/4`: two members of one cone have cosine above `3/4`.
pub fn cos_sq_20_lower() -> Rat {
    rat(7, 8)
}

/// Certified upper bound for `cos^2(20°)`.
pub fn cos_sq_20_upper() -> Rat {
    rat(53, 60)
}

/// `cos^2(40°) ≈ 0.5868` exceeds `9/16`, so an angle below 40° has cosine above `3/4`.
pub fn cos_sq_40_lower() -> Rat {
    rat(9, 16)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeCover {
    /// Indices of the directions promoted to centers, in promotion order.
    pub centers: Vec<usize>,
    /// For each input direction, its slot in `centers`.
    pub assignment: Vec<usize>,
    /// For each input direction, `cos^2` of its angle to its center.
    #[serde(with = "crate::rat::serde_rat::vec")]
    pub certificates: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub half_angle_cos_sq: Rat,
}

/// `<x,c> > 0` and `<x,c>^2 > h |x|^2 |c|^2`, i.e. strictly inside the cone of
/// half-angle `arccos(sqrt h)` around `c`.
fn within(ip: &impl Fn(&[Rat], &[Rat]) -> Rat, x: &[Rat], c: &[Rat], h: &Rat) -> Result<Option<Rat>> {
    let (sign, c2) = cos_sq_signed_with(ip, x, c)?;
    Ok((sign == Sign::Positive && c2 > *h).then_some(c2))
}

/// Greedy cover under an arbitrary inner product: each direction joins the first
/// existing center whose cone contains it, otherwise it becomes a new center.
pub fn cone_cover_with(
    ip: impl Fn(&[Rat], &[Rat]) -> Rat,
    half_angle_cos_sq: &Rat,
    directions: &[Vec<Rat>],
) -> Result<ConeCover> {
    let mut centers: Vec<usize> = Vec::new();
    let mut assignment = Vec::with_capacity(directions.len());
    let mut certificates = Vec::with_capacity(directions.len());
    for (i, d) in directions.iter().enumerate() {
        let mut placed = None;
        for (slot, &c) in centers.iter().enumerate() {
            if let Some(c2) = within(&ip, d, &directions[c], half_angle_cos_sq)? {
                placed = Some((slot, c2));
                break;
            }
        }
        let (slot, c2) = match placed {
            Some(p) => p,
            None => {
                // the cosine test also rejects zero vectors
                cos_sq_signed_with(&ip, d, d)?;
                centers.push(i);
                (centers.len() - 1, Rat::one())
            }
        };
        assignment.push(slot);
        certificates.push(c2);
    }
    Ok(ConeCover {
        centers,
        assignment,
        certificates,
        half_angle_cos_sq: half_angle_cos_sq.clone(),
    })
}

pub fn euclidean(u: &[Rat], v: &[Rat]) -> Rat {
    u.iter().zip(v).map(|(a, b)| a * b).fold(Rat::zero(), |a, b| a + b)
}

/// Greedy cover of `directions` in Euclidean `R^r`.
pub fn cone_cover(r: usize, half_angle_cos_sq: &Rat, directions: &[Vec<Rat>]) -> Result<ConeCover> {
    if let Some(d) = directions.iter().find(|d| d.len() != r) {
        return Err(Error::Dimension(format!("direction of length {} in R^{r}", d.len())));
    }
    cone_cover_with(euclidean, half_angle_cos_sq, directions)
}

impl ConeCover {
    /// Re-derives every membership certificate from scratch.
    pub fn verify(&self, ip: impl Fn(&[Rat], &[Rat]) -> Rat, directions: &[Vec<Rat>]) -> bool {
        directions.iter().enumerate().all(|(i, d)| {
            let c = &directions[self.centers[self.assignment[i]]];
            if self.centers[self.assignment[i]] == i {
                return true;
            }
            matches!(within(&ip, d, c, &self.half_angle_cos_sq), Ok(Some(_)))
        })
    }

    /// Checks that any two members of one cone are closer than twice the
    /// half-angle, via `cos(2θ) = 2 cos^2 θ - 1`. Needs `h >= 1/2`.
    pub fn verify_pairs(&self, ip: impl Fn(&[Rat], &[Rat]) -> Rat, directions: &[Vec<Rat>]) -> bool {
        let floor = int(2) * &self.half_angle_cos_sq - Rat::one();
        if floor.is_negative() {
            return false;
        }
        let floor_sq = &floor * &floor;
        for i in 0..directions.len() {
            for j in i + 1..directions.len() {
                if self.assignment[i] != self.assignment[j] {
                    continue;
                }
                let Ok((sign, c2)) = cos_sq_signed_with(&ip, &directions[i], &directions[j]) else {
                    return false;
                };
                if sign != Sign::Positive || c2 <= floor_sq {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairViolation {
    pub anchor: String,
    pub other: String,
    #[serde(with = "serde_rat")]
    pub other_norm_sq: Rat,
    /// `A2^2 |P*|^2`, exceeded by `other_norm_sq`.
    #[serde(with = "serde_rat")]
    pub allowed_norm_sq: Rat,
    #[serde(with = "serde_rat")]
    pub cos_sq: Rat,
    /// Vojta predicate on the pair; false means the pair is closer than the
    /// gap principle allows.
    pub vojta_predicate: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ConeVerdict {
    /// Every member has `|P|^2 <= A1^2`.
    SmallHeight,
    /// Every member satisfies `|P'|^2 <= A2^2 |P*|^2`.
    Bounded { anchor: String },
    /// Members too large relative to the anchor; each is a counterexample
    /// certificate against the gap hypotheses for this data.
    Violations {
        anchor: String,
        pairs: Vec<PairViolation>,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConeReport {
    pub center: String,
    pub members: Vec<String>,
    pub verdict: ConeVerdict,
    /// Every pair of members fails the Vojta predicate (cosine above 3/4).
    pub pairs_closer_than_gap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    #[serde(with = "serde_rat")]
    pub half_angle_cos_sq: Rat,
    pub cones: Vec<ConeReport>,
}

impl PartitionReport {
    pub fn has_violations(&self) -> bool {
        self.cones
            .iter()
            .any(|c| matches!(c.verdict, ConeVerdict::Violations { .. }))
    }
}

/// Splits the lattice points into 20° cones and checks, cone by cone, that
/// beyond the first point of height above `A1` nothing exceeds `A2` times it.
pub fn finiteness_partition(l: &MWLattice, a1: &Rat, a2: &Rat) -> Result<PartitionReport> {
    let h = cos_sq_20_lower();
    let cover = cone_cover_with(|u, v| l.inner(u, v), &h, l.coords())?;
    let a1_sq = a1 * a1;
    let a2_sq = a2 * a2;
    let norms: Vec<Rat> = (0..l.len()).map(|i| l.norm_sq(i)).collect();
    let mut cones = Vec::with_capacity(cover.centers.len());
    for (slot, &center) in cover.centers.iter().enumerate() {
        let members: Vec<usize> = (0..l.len()).filter(|&i| cover.assignment[i] == slot).collect();
        // smallest large point, ties by input order
        let anchor = members
            .iter()
            .copied()
            .filter(|&i| norms[i] > a1_sq)
            .min_by(|&a, &b| norms[a].cmp(&norms[b]).then(a.cmp(&b)));
        let verdict = match anchor {
            None => ConeVerdict::SmallHeight,
            Some(p) => {
                let allowed = &a2_sq * &norms[p];
                let mut pairs = Vec::new();
                for &q in &members {
                    if norms[q] > allowed {
                        let (sign, c2) = l.cos_sq_signed(p, q)?;
                        pairs.push(PairViolation {
                            anchor: l.labels()[p].clone(),
                            other: l.labels()[q].clone(),
                            other_norm_sq: norms[q].clone(),
                            allowed_norm_sq: allowed.clone(),
                            vojta_predicate: vojta_from_cos_sq(sign, &c2),
                            cos_sq: c2,
                        });
                    }
                }
                let anchor = l.labels()[p].clone();
                if pairs.is_empty() {
                    ConeVerdict::Bounded { anchor }
                } else {
                    ConeVerdict::Violations { anchor, pairs }
                }
            }
        };
        let mut close = true;
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                close &= !l.vojta_predicate(i, j)?;
            }
        }
        cones.push(ConeReport {
            center: l.labels()[center].clone(),
            members: members.iter().map(|&i| l.labels()[i].clone()).collect(),
            verdict,
            pairs_closer_than_gap: close,
        });
    }
    Ok(PartitionReport {
        half_angle_cos_sq: h,
        cones,
    })
}
