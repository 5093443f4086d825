//! Exact linear algebra: rank with dependent-row detection, fraction-free
//! Gauss-Jordan elimination, integer kernels, and pairwise size reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{denom_lcm, Rat};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Scales a rational row by the lcm of its denominators.
pub fn clear_denominators(row: &[Rat]) -> Vec<BigInt> {
    let l = denom_lcm(row);
    row.iter()
        .map(|q| (q * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

/// Splits row indices into a maximal independent prefix-greedy set and the
/// rows that depend on earlier ones.
pub fn independent_rows(rows: &[Vec<Rat>]) -> (Vec<usize>, Vec<usize>) {
    // echelon basis kept as (pivot column, row with leading 1 at pivot)
    let mut basis: Vec<(usize, Vec<Rat>)> = Vec::new();
    let (mut kept, mut dropped) = (Vec::new(), Vec::new());
    for (idx, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (pc, b) in &basis {
            if !r[*pc].is_zero() {
                let f = r[*pc].clone();
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        match r.iter().position(|x| !x.is_zero()) {
            Some(pc) => {
                let inv = r[pc].recip();
                for x in r.iter_mut() {
                    *x *= &inv;
                }
                // keep the basis fully reduced at its pivots
                for (_, b) in basis.iter_mut() {
                    if !b[pc].is_zero() {
                        let f = b[pc].clone();
                        for (x, y) in b.iter_mut().zip(&r) {
                            *x -= &f * y;
                        }
                    }
                }
                basis.push((pc, r));
                kept.push(idx);
            }
            None => dropped.push(idx),
        }
    }
    (kept, dropped)
}

/// Fraction-free Gauss-Jordan elimination in place. Returns the pivot columns.
///
/// After the call every pivot entry equals the same value (the determinant of
/// the pivot minor up to sign) and pivot columns are zero off the pivot row.
pub fn fraction_free_gauss_jordan(m: &mut IntMatrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c].clone();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let a = m[i][c].clone();
            for j in 0..cols {
                let v = &piv * &m[i][j] - &a * &m[r][j];
                let (q, rem) = v.div_rem(&prev);
                assert!(rem.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Integer kernel basis of an integer matrix, one primitive vector per free column.
pub fn integer_kernel(m: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let mut a = m.clone();
    let pivots = fraction_free_gauss_jordan(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![BigInt::zero(); cols];
            if pivots.is_empty() {
                v[fc] = BigInt::one();
                return v;
            }
            // every pivot entry equals d, so x_fc = d and x_pc = -a[r][fc] solves row r
            let d = a[pivots.len() - 1][pivots[pivots.len() - 1]].clone();
            v[fc] = d;
            for (r, &pc) in pivots.iter().enumerate() {
                debug_assert_eq!(a[r][pc], v[fc]);
                v[pc] = -a[r][fc].clone();
            }
            make_primitive(v)
        })
        .collect()
}

pub fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    // first nonzero entry positive
    if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sup_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

pub fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Nearest integer to `n / d` for `d > 0`, halves rounded toward zero.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = n.div_mod_floor(d);
    if &r * &two > *d {
        q + 1
    } else {
        q
    }
}

/// Iterated pairwise size reduction: replace `v_j` by `v_j - k v_i` whenever
/// that strictly shortens it in the Euclidean norm. Stops when a full pass
/// changes nothing or after `n^2` passes. Returns the number of passes.
pub fn pairwise_size_reduce(basis: &mut [Vec<BigInt>]) -> usize {
    let n = basis.len();
    let max_passes = (n * n).max(1);
    for pass in 1..=max_passes {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let nii = dot(&basis[i], &basis[i]);
                if nii.is_zero() {
                    continue;
                }
                let k = round_div(&dot(&basis[j], &basis[i]), &nii);
                if k.is_zero() {
                    continue;
                }
                let cand: Vec<BigInt> = basis[j]
                    .iter()
                    .zip(&basis[i])
                    .map(|(a, b)| a - &k * b)
                    .collect();
                if dot(&cand, &cand) < dot(&basis[j], &basis[j]) {
                    basis[j] = cand;
                    changed = true;
                }
            }
        }
        if !changed {
            return pass;
        }
    }
    max_passes
}

/// Basis of the full integer kernel `{x in Z^n : m x = 0}` of a matrix with
/// independent rows, read off a unimodular column transform `m U = [L | 0]`.
pub fn saturated_kernel(m: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    // work on columns: a[c] is column c of m, u[c] is column c of U
    let mut a: Vec<Vec<BigInt>> = (0..cols).map(|c| m.iter().map(|row| row[c].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> = (0..cols)
        .map(|c| (0..cols).map(|i| if i == c { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut r = 0;
    for row in 0..rows {
        if r == cols {
            break;
        }
        loop {
            let piv = (r..cols)
                .filter(|&c| !a[c][row].is_zero())
                .min_by(|&x, &y| a[x][row].abs().cmp(&a[y][row].abs()));
            let Some(p) = piv else { break };
            a.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for c in r + 1..cols {
                if a[c][row].is_zero() {
                    continue;
                }
                let q = a[c][row].div_floor(&a[r][row]);
                for i in 0..rows {
                    let t = &q * &a[r][i];
                    a[c][i] -= t;
                }
                for i in 0..cols {
                    let t = &q * &u[r][i];
                    u[c][i] -= t;
                }
                done &= a[c][row].is_zero();
            }
            if done {
                break;
            }
        }
        if !a[r][row].is_zero() {
            r += 1;
        }
    }
    u.split_off(r)
}

/// Exact integral LLL reduction (parameter 99/100) of linearly independent
/// integer vectors, in place.
pub fn lll_reduce(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    // d[i] = Gram determinant of b[0..i]; lam[k][j] = d[j+1] * mu[k][j]
    let mut d = vec![BigInt::one(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    let gs_row = |b: &[Vec<BigInt>], d: &[BigInt], lam: &mut Vec<Vec<BigInt>>, k: usize| -> BigInt {
        let mut dk = BigInt::zero();
        for j in 0..=k {
            let mut u = dot(&b[k], &b[j]);
            for i in 0..j {
                u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
            }
            if j < k {
                lam[k][j] = u;
            } else {
                dk = u;
            }
        }
        dk
    };
    d[1] = dot(&b[0], &b[0]);
    let mut kmax = 0;
    let mut k = 1;
    let red = |b: &mut [Vec<BigInt>], lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
        let two = BigInt::from(2);
        if (&lam[k][l] * &two).abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };
    while k < n {
        if k > kmax {
            kmax = k;
            d[k + 1] = gs_row(b, &d, &mut lam, k);
        }
        red(b, &mut lam, &d, k, k - 1);
        let l = lam[k][k - 1].clone();
        let lhs = BigInt::from(100) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(99) * &d[k] * &d[k] - BigInt::from(100) * &l * &l;
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
            }
            let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                red(b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
}

/// Depth-first Schnorr-Euchner enumeration over the lattice spanned by `b`
/// (ideally LLL-reduced) for a nonzero vector of sup norm at most `bound`.
/// Gram-Schmidt data is floating point and only steers the search; the
/// returned vector is checked exactly. Gives up after `budget` nodes.
pub fn search_sup_bounded(b: &[Vec<BigInt>], bound: &BigInt, budget: usize) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let n = b.len();
    if n == 0 {
        return None;
    }
    let dim = b[0].len();
    let bf: Vec<Vec<f64>> = b
        .iter()
        .map(|v| v.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect())
        .collect();
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0f64; n]; n];
    let mut bn = vec![0.0f64; n];
    for i in 0..n {
        let mut v = bf[i].clone();
        for j in 0..i {
            let m = bf[i].iter().zip(&bstar[j]).map(|(x, y)| x * y).sum::<f64>() / bn[j];
            mu[i][j] = m;
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= m * y;
            }
        }
        bn[i] = v.iter().map(|x| x * x).sum();
        bstar.push(v);
    }
    let bf_ = bound.to_f64()?;
    let radius = dim as f64 * bf_ * bf_ * (1.0 + 1e-9) + 1e-9;
    let mut x = vec![0i64; n];
    let mut c = vec![0.0f64; n];
    let mut l = vec![0.0f64; n + 1];
    let mut step = vec![0i64; n];
    let mut nodes = 0usize;
    let center = |x: &[i64], mu: &[Vec<f64>], i: usize| -> f64 {
        -(i + 1..n).map(|j| x[j] as f64 * mu[j][i]).sum::<f64>()
    };
    let mut i = n - 1;
    c[i] = 0.0;
    x[i] = 0;
    step[i] = 0;
    loop {
        nodes += 1;
        if nodes > budget {
            return None;
        }
        let diff = x[i] as f64 - c[i];
        let li = l[i + 1] + diff * diff * bn[i];
        if li <= radius {
            if i == 0 {
                if x.iter().any(|&t| t != 0) {
                    let v: Vec<BigInt> = (0..dim)
                        .map(|k| (0..n).map(|j| BigInt::from(x[j]) * &b[j][k]).sum())
                        .collect();
                    if sup_norm(&v) <= *bound {
                        return Some(make_primitive(v));
                    }
                }
            } else {
                l[i] = li;
                i -= 1;
                c[i] = center(&x, &mu, i);
                x[i] = c[i].round() as i64;
                step[i] = 0;
                continue;
            }
        } else {
            if i == n - 1 {
                return None;
            }
            i += 1;
        }
        // zig-zag around the center; the top level only needs one sign
        step[i] += 1;
        let base = c[i].round() as i64;
        let s = step[i];
        x[i] = if i == n - 1 {
            base + s
        } else if s % 2 == 1 {
            if (c[i] - base as f64) >= 0.0 { base + (s + 1) / 2 } else { base - (s + 1) / 2 }
        } else if (c[i] - base as f64) >= 0.0 {
            base - s / 2
        } else {
            base + s / 2
        };
    }
}

/// Leading principal pivots of a symmetric rational matrix via elimination
/// without pivoting; all positive iff the matrix is positive definite.
pub fn ldl_pivots(m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        out.push(p.clone());
        if p.is_zero() {
            break;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    out
}
