//! Exact integer spectra of adjacency matrices.
//!
//! The characteristic polynomial is computed modulo a prime `p > 2k + 1` by
//! Hessenberg reduction, and its roots are found by trial over `[-k, k]`
//! with repeated synthetic division. The candidate eigenvalues are then
//! certified over the integers: `∏ (A - λI) = 0` is checked modulo enough
//! primes that their product exceeds a bound on the entries of the product.
//! Since `A` is symmetric this proves the spectrum is supported on the
//! candidates, and the multiplicities mod `p` are the true ones because the
//! candidates stay distinct mod `p`.

use crate::arith::{is_prime, mod_inv};
use crate::error::{Error, Result};
use crate::oracle::graph::GraphInstance;
use crate::spectrum::Spectrum;

/// Primes just below `2^25`, largest first. Small enough that sums of `2^14`
/// products fit in a `u64` without reduction.
fn primes() -> impl Iterator<Item = u64> {
    (1u64..(1 << 25)).rev().filter(|&x| is_prime(x))
}

fn reduce(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

/// Characteristic polynomial `det(xI - A)` mod `p`, coefficients lowest degree first.
pub fn charpoly_mod(matrix: &[Vec<u64>], p: u64) -> Vec<u64> {
    let n = matrix.len();
    let mut h: Vec<Vec<u64>> = matrix.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    // Similarity reduction to upper Hessenberg form.
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = mod_inv(h[m][m - 1], p);
        for i in m + 1..n {
            let u = h[i][m - 1] * inv % p;
            if u == 0 {
                continue;
            }
            // row_i -= u * row_m
            let (head, tail) = h.split_at_mut(i);
            let rm = &head[m];
            for (x, &y) in tail[0].iter_mut().zip(rm.iter()) {
                *x = (*x + p - u * y % p) % p;
            }
            // col_m += u * col_i
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p;
            }
        }
    }
    // Recurrence on leading principal blocks.
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let diag = h[m - 1][m - 1];
        let mut cur = vec![0u64; m + 1];
        for (j, &c) in prev.iter().enumerate() {
            cur[j + 1] = (cur[j + 1] + c) % p;
            cur[j] = (cur[j] + p - diag * c % p) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = t * h[m - i][m - i - 1] % p;
            let coef = t * h[m - i - 1][m - 1] % p;
            if coef == 0 {
                continue;
            }
            for (j, &c) in polys[m - i - 1].iter().enumerate() {
                cur[j] = (cur[j] + p - coef * c % p) % p;
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap()
}

/// Divides by `(x - root)` if it is a root; returns whether it was.
fn deflate(poly: &mut Vec<u64>, root: u64, p: u64) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    let mut q = vec![0u64; deg];
    let mut carry = 0u64;
    for j in (0..=deg).rev() {
        let v = (poly[j] + carry) % p;
        if j == 0 {
            if v != 0 {
                return false;
            }
        } else {
            q[j - 1] = v;
            carry = v * root % p;
        }
    }
    *poly = q;
    true
}

/// Integer roots in `[-bound, bound]` with multiplicities, mod `p`.
pub fn integer_roots_mod(mut poly: Vec<u64>, bound: i128, p: u64) -> (Vec<(i128, u128)>, usize) {
    let mut out = Vec::new();
    for lambda in -bound..=bound {
        let r = reduce(lambda, p);
        let mut mult = 0u128;
        while deflate(&mut poly, r, p) {
            mult += 1;
        }
        if mult > 0 {
            out.push((lambda, mult));
        }
    }
    let leftover = poly.len() - 1;
    (out, leftover)
}

/// Checks `∏_{λ} (A - λI) ≡ 0 (mod p)` using row additions only.
fn annihilates_mod(g: &GraphInstance, roots: &[i128], p: u64) -> bool {
    let n = g.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|u| g.neighbors(u).collect()).collect();
    // M = I initially.
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut r = vec![0u64; n];
            r[i] = 1;
            r
        })
        .collect();
    for &lambda in roots {
        let l = reduce(lambda, p);
        let mut next = vec![vec![0u64; n]; n];
        for (i, row) in next.iter_mut().enumerate() {
            for &j in &adj[i] {
                for (x, &y) in row.iter_mut().zip(&m[j]) {
                    *x += y;
                }
            }
            for (x, &y) in row.iter_mut().zip(&m[i]) {
                *x = (*x % p + p - l * y % p) % p;
            }
        }
        m = next;
    }
    m.iter().all(|r| r.iter().all(|&x| x == 0))
}

/// Exact integer spectrum of a regular graph.
///
/// Fails with [`Error::NonIntegral`] if the characteristic polynomial has a
/// non-integer root.
pub fn integer_spectrum_from_adjacency(g: &GraphInstance) -> Result<Spectrum> {
    let n = g.n();
    let k = g
        .regular_degree()
        .ok_or_else(|| Error::Domain(format!("{} is not regular", g.label())))?;
    if n > (1 << 14) {
        return Err(Error::TooLarge { order: n as u128, bound: 1 << 14 });
    }
    let mut prime_iter = primes();
    let p = prime_iter.next().unwrap();
    let matrix: Vec<Vec<u64>> = g
        .adjacency()
        .into_iter()
        .map(|r| r.into_iter().map(u64::from).collect())
        .collect();
    let poly = charpoly_mod(&matrix, p);
    let (roots, leftover) = integer_roots_mod(poly, k as i128, p);
    if leftover > 0 {
        return Err(Error::NonIntegral(format!(
            "{}: {leftover} eigenvalues are not integers in [-{k}, {k}]",
            g.label()
        )));
    }
    let distinct: Vec<i128> = roots.iter().map(|&(l, _)| l).collect();
    // Row sums of |A - λI| are at most k + |λ| + 1, which bounds the product entries.
    let needed_bits: f64 = distinct
        .iter()
        .map(|&l| ((k as i128 + l.abs() + 1) as f64).log2())
        .sum::<f64>()
        + 2.0;
    let mut bits = 0.0;
    for q in std::iter::once(p).chain(prime_iter) {
        if !annihilates_mod(g, &distinct, q) {
            return Err(Error::NonIntegral(format!(
                "{}: candidate eigenvalues do not annihilate the adjacency matrix",
                g.label()
            )));
        }
        bits += (q as f64).log2();
        if bits > needed_bits {
            break;
        }
    }
    Spectrum::new(n as u128, k as i128, roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::graph::Mode;

    fn graph(rows: &[&[u8]]) -> GraphInstance {
        let m: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        GraphInstance::from_matrix(&m, Mode::Difference, "test").unwrap()
    }

    #[test]
    fn charpoly_of_small_matrices() {
        let p = 1_000_003;
        // K_3: (x - 2)(x + 1)^2 = x^3 - 3x - 2
        let k3 = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
        assert_eq!(charpoly_mod(&k3, p), vec![p - 2, p - 3, 0, 1]);
        // A matrix that needs a pivot swap during reduction.
        let m = vec![vec![1, 0, 2], vec![0, 0, 1], vec![3, 1, 0]];
        // det(xI - M) = x^3 - x^2 - 7x + 1
        assert_eq!(charpoly_mod(&m, p), vec![1, p - 7, p - 1, 1]);
    }

    #[test]
    fn k2_tensor_k2() {
        let g = graph(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        let s = integer_spectrum_from_adjacency(&g).unwrap();
        assert_eq!(s, Spectrum::new(4, 1, [(1, 2), (-1, 2)]).unwrap());
    }

    #[test]
    fn five_cycle_is_not_integral() {
        let mut rows = vec![vec![0u8; 5]; 5];
        for i in 0..5 {
            rows[i][(i + 1) % 5] = 1;
            rows[(i + 1) % 5][i] = 1;
        }
        let g = GraphInstance::from_matrix(&rows, Mode::Difference, "C5").unwrap();
        assert!(matches!(integer_spectrum_from_adjacency(&g), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn loops_are_allowed() {
        // Path on 3 vertices with loops at both ends.
        let g = graph(&[&[0, 1, 1], &[1, 1, 0], &[1, 0, 1]]);
        let s = integer_spectrum_from_adjacency(&g).unwrap();
        assert_eq!(s, Spectrum::new(3, 2, [(2, 1), (1, 1), (-1, 1)]).unwrap());
    }
}
