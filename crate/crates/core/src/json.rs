//! JSON schemas shared by the library and the command line.
//!
//! Rationals are always `"num/den"` strings on output; integers are also
//! accepted on input.

use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gap::MWLattice;
use crate::poly::BiPoly;
use crate::rat::{fmt_rat, parse_rat, serde_rat, Rat};

pub const SCHEMA: &str = "dyson-gap/1";

/// A rational that (de)serializes as a `"num/den"` string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R(pub Rat);

impl Serialize for R {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rat::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for R {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rat::deserialize(d).map(R)
    }
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub i: [u32; 2],
    pub n: String,
    pub d: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bidegree: Option<[u32; 2]>,
}

impl PolyJson {
    pub fn from_poly(f: &BiPoly, bidegree: Option<(u32, u32)>) -> Self {
        let terms = f
            .terms()
            .map(|((a, b), c)| TermJson {
                i: [a, b],
                n: c.numer().to_string(),
                d: c.denom().to_string(),
            })
            .collect();
        Self {
            terms,
            bidegree: bidegree.map(|(a, b)| [a, b]),
        }
    }

    /// The polynomial and its designated bidegree (the actual one if absent).
    pub fn to_poly(&self) -> Result<(BiPoly, (u32, u32))> {
        let mut f = BiPoly::zero();
        for t in &self.terms {
            let c = parse_rat(&format!("{}/{}", t.n, t.d))?;
            f.add_term((t.i[0], t.i[1]), c);
        }
        let bd = self.bidegree.map_or(f.bidegree(), |[a, b]| (a, b));
        Ok((f, bd))
    }
}

pub fn parse_poly(text: &str) -> Result<(BiPoly, (u32, u32))> {
    from_str::<PolyJson>(text)?.to_poly()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson(pub R, pub R);

#[derive(Deserialize)]
#[serde(untagged)]
enum PointsFile {
    Bare(Vec<PointJson>),
    Wrapped { points: Vec<PointJson> },
}

/// Accepts `[["p","q"], ...]` or `{"points": [["p","q"], ...]}`.
pub fn parse_points(text: &str) -> Result<Vec<(Rat, Rat)>> {
    // parse as a value first so syntax errors keep their position
    let v: serde_json::Value = from_str(text)?;
    let pf: PointsFile = serde_json::from_value(v)
        .map_err(|_| Error::Parse("expected [[p,q],...] or {\"points\":[[p,q],...]}".into()))?;
    let pts = match pf {
        PointsFile::Bare(p) | PointsFile::Wrapped { points: p } => p,
    };
    Ok(pts.into_iter().map(|PointJson(R(a), R(b))| (a, b)).collect())
}

pub fn points_json(points: &[(Rat, Rat)]) -> Vec<[String; 2]> {
    points.iter().map(|(a, b)| [fmt_rat(a), fmt_rat(b)]).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub gram: Vec<Vec<R>>,
    #[serde(default)]
    pub points: IndexMap<String, Vec<R>>,
}

impl LatticeJson {
    pub fn from_lattice(l: &MWLattice) -> Self {
        Self {
            gram: l
                .gram()
                .iter()
                .map(|row| row.iter().cloned().map(R).collect())
                .collect(),
            points: l
                .labels()
                .iter()
                .zip(l.coords())
                .map(|(k, c)| (k.clone(), c.iter().cloned().map(R).collect()))
                .collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<MWLattice> {
        let gram = self
            .gram
            .iter()
            .map(|row| row.iter().map(|r| r.0.clone()).collect())
            .collect();
        let points = self
            .points
            .iter()
            .map(|(k, c)| (k.clone(), c.iter().map(|r| r.0.clone()).collect()))
            .collect();
        MWLattice::new(gram, points)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GramFile {
    Lattice(LatticeJson),
    Matrix(Vec<Vec<R>>),
}

/// Builds a lattice from a Gram file (either a full lattice object or a bare
/// matrix) and an optional points file `{"label": [coords...]}`, which
/// replaces any points in the Gram file.
pub fn parse_lattice(gram_text: &str, points_text: Option<&str>) -> Result<MWLattice> {
    let v: serde_json::Value = from_str(gram_text)?;
    let mut lj = match serde_json::from_value::<GramFile>(v)
        .map_err(|_| Error::Parse("expected a gram matrix or {\"gram\":...,\"points\":...}".into()))?
    {
        GramFile::Lattice(l) => l,
        GramFile::Matrix(gram) => LatticeJson {
            gram,
            points: IndexMap::new(),
        },
    };
    if let Some(pt) = points_text {
        let v: serde_json::Value = from_str(pt)?;
        let map = match v {
            serde_json::Value::Object(mut o) if o.contains_key("points") && o.len() == 1 => {
                o.remove("points").unwrap_or_default()
            }
            other => other,
        };
        lj.points = serde_json::from_value(map).map_err(|e| Error::Parse(e.to_string()))?;
    }
    lj.to_lattice()
}
