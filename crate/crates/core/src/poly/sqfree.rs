//! Bivariate gcd and squarefree decomposition.
//!
//! Polynomials are viewed recursively as elements of `Q[y][x]`. Contents with
//! respect to each variable are split off first (they are the fiber parts),
//! then Yun's gcd cascade runs on the doubly primitive remainder using a
//! primitive pseudo-remainder sequence for gcds.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{BiPoly, UniPoly};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Coefficient of `x^i` (as a polynomial in `y`) at index `i`.
type Rec = Vec<UniPoly>;

fn to_rec(f: &BiPoly) -> Rec {
    if f.is_zero() {
        return Vec::new();
    }
    let mut rows = vec![vec![Rat::zero(); f.deg_y() as usize + 1]; f.deg_x() as usize + 1];
    for ((i, j), c) in f.terms() {
        rows[i as usize][j as usize] = c.clone();
    }
    rows.into_iter().map(UniPoly::new).collect()
}

fn from_rec(r: &[UniPoly]) -> BiPoly {
    BiPoly::from_terms(r.iter().enumerate().flat_map(|(i, row)| {
        row.coeffs()
            .iter()
            .enumerate()
            .map(move |(j, c)| ((i as u32, j as u32), c.clone()))
    }))
}

fn trim(mut r: Rec) -> Rec {
    while r.last().is_some_and(|c| c.is_zero()) {
        r.pop();
    }
    r
}

fn content(r: &[UniPoly]) -> UniPoly {
    r.iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c))
}

fn div_by_uni(r: &[UniPoly], c: &UniPoly) -> Rec {
    r.iter()
        .map(|a| a.div_exact(c).expect("content divides every coefficient"))
        .collect()
}

fn primitive_part(r: Rec) -> Rec {
    let r = trim(r);
    if r.is_empty() {
        return r;
    }
    let c = content(&r);
    div_by_uni(&r, &c)
}

/// Pseudo-remainder of `a` by `b` in `x`; a `Q[y]` multiple of the true remainder.
fn prem(a: &[UniPoly], b: &[UniPoly]) -> Rec {
    let lb = b.last().expect("nonzero divisor").clone();
    let db = b.len() - 1;
    let mut r: Rec = trim(a.to_vec());
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let s = r.len() - 1 - db;
        let mut next: Rec = r.iter().map(|c| c.mul(&lb)).collect();
        for (j, bc) in b.iter().enumerate() {
            next[s + j] = next[s + j].sub(&bc.mul(&lr));
        }
        r = trim(next);
    }
    r
}

/// Gcd of two bivariate polynomials, normalized to a primitive integer
/// polynomial with positive lex-leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(f: &BiPoly, g: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return g.primitive_normalized().1;
    }
    if g.is_zero() {
        return f.primitive_normalized().1;
    }
    let (rf, rg) = (to_rec(f), to_rec(g));
    let cont = content(&rf).gcd(&content(&rg));
    let (mut a, mut b) = (primitive_part(rf), primitive_part(rg));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    let pp_gcd = loop {
        if b.len() == 1 {
            // nonzero and free of x: primitive parts are coprime
            break vec![UniPoly::one()];
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            break b;
        }
        a = b;
        b = primitive_part(r);
    };
    let g = from_rec(&pp_gcd.iter().map(|c| c.mul(&cont)).collect::<Vec<_>>());
    g.primitive_normalized().1
}

/// Exact quotient `f / g`, or `None` if `g` does not divide `f`.
pub fn div_exact(f: &BiPoly, g: &BiPoly) -> Option<BiPoly> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let b = to_rec(g);
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    let mut r = to_rec(f);
    let mut q: Rec = vec![UniPoly::zero(); r.len().saturating_sub(db).max(1)];
    while !r.is_empty() && r.len() > db {
        let s = r.len() - 1 - db;
        let t = r.last().unwrap().div_exact(&lb)?;
        for (j, bc) in b.iter().enumerate() {
            r[s + j] = r[s + j].sub(&bc.mul(&t));
        }
        q[s] = t;
        r = trim(r);
    }
    r.is_empty().then(|| from_rec(&q))
}

/// Squarefree data of a nonzero polynomial split by fiber type.
#[derive(Clone, Debug)]
pub struct SquarefreeParts {
    pub constant: Rat,
    /// Factors in `x` only: fibers `{x = c}` of the first projection.
    pub x_fibers: Vec<(BiPoly, u32)>,
    /// Factors in `y` only.
    pub y_fibers: Vec<(BiPoly, u32)>,
    /// Factors involving both variables, squarefree by multiplicity.
    pub mixed: Vec<(BiPoly, u32)>,
}

impl SquarefreeParts {
    pub fn all(&self) -> impl Iterator<Item = &(BiPoly, u32)> {
        self.x_fibers.iter().chain(&self.y_fibers).chain(&self.mixed)
    }
}

fn uni_in_x(u: &UniPoly) -> BiPoly {
    BiPoly::from_terms(u.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
}

fn normalize_list(parts: Vec<(BiPoly, u32)>) -> Vec<(BiPoly, u32)> {
    parts
        .into_iter()
        .map(|(g, k)| (g.primitive_normalized().1, k))
        .collect()
}

/// Yun's algorithm in `x` for a polynomial primitive in both variables.
fn yun_x(f: &BiPoly) -> Vec<(BiPoly, u32)> {
    let mut out = Vec::new();
    if f.deg_x() == 0 {
        return out;
    }
    let df = f.derivative_x();
    let a0 = gcd(f, &df);
    let mut b = div_exact(f, &a0).expect("gcd divides f");
    let c = div_exact(&df, &a0).expect("gcd divides f_x");
    let mut d = &c - &b.derivative_x();
    let mut k = 1;
    while b.deg_x() > 0 {
        let a = gcd(&b, &d);
        if a.deg_x() > 0 {
            out.push((a.clone(), k));
        }
        b = div_exact(&b, &a).expect("Yun: a divides b");
        let c = div_exact(&d, &a).expect("Yun: a divides d");
        d = &c - &b.derivative_x();
        k += 1;
    }
    out
}

pub fn squarefree_parts(f: &BiPoly) -> Result<SquarefreeParts> {
    if f.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    // content in Q[x] of f seen as a polynomial in y
    let swapped = to_rec(&f.swap_vars());
    let cx = content(&swapped);
    let f1 = from_rec(&div_by_uni(&swapped, &cx)).swap_vars();
    let r1 = to_rec(&f1);
    let cy = content(&r1);
    let f2 = from_rec(&div_by_uni(&r1, &cy));

    let x_fibers = normalize_list(cx.squarefree().iter().map(|(g, k)| (uni_in_x(g), *k)).collect());
    let y_fibers = normalize_list(
        cy.squarefree()
            .iter()
            .map(|(g, k)| (uni_in_x(g).swap_vars(), *k))
            .collect(),
    );
    let mixed = normalize_list(yun_x(&f2));

    let mut product = BiPoly::one();
    for (g, k) in x_fibers.iter().chain(&y_fibers).chain(&mixed) {
        product = &product * &g.pow(*k);
    }
    let constant = f.leading().unwrap().1 / product.leading().unwrap().1;
    Ok(SquarefreeParts {
        constant,
        x_fibers,
        y_fibers,
        mixed,
    })
}

/// `f = constant * prod g_k^k` with `g_k` squarefree, pairwise coprime, primitive
/// over the integers and with positive lex-leading coefficient; sorted by `k`.
pub fn squarefree_decompose(f: &BiPoly) -> Result<(Rat, Vec<(BiPoly, u32)>)> {
    let parts = squarefree_parts(f)?;
    let mut by_mult: BTreeMap<u32, BiPoly> = BTreeMap::new();
    for (g, k) in parts.all() {
        let slot = by_mult.entry(*k).or_insert_with(BiPoly::one);
        *slot = &*slot * g;
    }
    let list = by_mult
        .into_iter()
        .map(|(k, g)| (g.primitive_normalized().1, k))
        .collect::<Vec<_>>();
    // products of normalized factors stay normalized up to sign, which is positive
    let mut product = BiPoly::one();
    for (g, k) in &list {
        product = &product * &g.pow(*k);
    }
    let constant = f.leading().unwrap().1 / product.leading().unwrap().1;
    debug_assert!(constant.is_one() || !constant.is_zero());
    Ok((constant, list))
}
