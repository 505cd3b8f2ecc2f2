//! Element-level construction of rings described by a [`RingSpec`].
//!
//! Every supported local factor is `Z_{p^s}[x]/(f)[y]/(y^k)` for a monic `f`
//! of degree `t` that is irreducible mod `p`:
//!
//! | family            | s | t | k |
//! |-------------------|---|---|---|
//! | `F_{p^t}`         | 1 | t | 1 |
//! | `Z_{p^s}`         | s | 1 | 1 |
//! | `GR(p^s, t)`      | s | t | 1 |
//! | `F_{p^t}[x]/(x^2)`| 1 | t | 2 |
//! | `F_{p^t}[x]/(x^3)`| 1 | t | 3 |

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::oracle::group::AbelianGroup;
use crate::ring_model::{Family, LocalShape, RingSpec};

pub const DEFAULT_BOUND: usize = 5000;

/// One local factor with its multiplication and unit set.
#[derive(Clone, Debug)]
struct LocalRing {
    modulus: u64,
    t: usize,
    k: usize,
    /// `f = x^t + Σ f[j] x^j`.
    f: Vec<u64>,
    size: usize,
    units: Vec<bool>,
}

impl LocalRing {
    fn build(shape: &LocalShape) -> Result<Self> {
        let (p, e) = prime_power(shape.r()).expect("validated shape");
        let (s, t, k) = match shape.family() {
            Family::Field => (1, e, 1),
            Family::ZModPk => (e, 1, 1),
            Family::GaloisRing { s, t } => (s, t, 1),
            Family::FieldModX2 => (1, e / 2, 2),
            Family::FieldModX3 => (1, e / 3, 3),
            Family::Shape => return Err(Error::NoWitness(shape.to_string())),
        };
        let t = t as usize;
        let f = smallest_irreducible(p, t);
        let mut ring = LocalRing {
            modulus: p.pow(s),
            t,
            k,
            f,
            size: shape.r() as usize,
            units: Vec::new(),
        };
        ring.units = ring.find_units();
        Ok(ring)
    }

    fn coords(&self) -> usize {
        self.t * self.k
    }

    fn decode(&self, mut x: usize) -> Vec<u64> {
        let mut c = vec![0u64; self.coords()];
        for slot in c.iter_mut().rev() {
            *slot = (x % self.modulus as usize) as u64;
            x /= self.modulus as usize;
        }
        c
    }

    fn encode(&self, c: &[u64]) -> usize {
        c.iter().fold(0usize, |acc, &d| acc * self.modulus as usize + d as usize)
    }

    /// Product in `Z_{p^s}[x]/(f)` of two length-`t` coefficient vectors.
    fn mul_base(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.modulus;
        let t = self.t;
        let mut prod = vec![0u64; 2 * t - 1];
        for (i, &ai) in a.iter().enumerate() {
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % n;
            }
        }
        for d in (t..2 * t - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &fj) in self.f.iter().enumerate() {
                let sub = c * fj % n;
                prod[d - t + j] = (prod[d - t + j] + n - sub) % n;
            }
        }
        prod.truncate(t);
        prod
    }

    /// Product in the truncated polynomial ring over the base, on flat coordinates.
    fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (t, k, n) = (self.t, self.k, self.modulus);
        let mut out = vec![0u64; t * k];
        for i in 0..k {
            for j in 0..k - i {
                let p = self.mul_base(&a[i * t..(i + 1) * t], &b[j * t..(j + 1) * t]);
                for (o, v) in out[(i + j) * t..(i + j + 1) * t].iter_mut().zip(p) {
                    *o = (*o + v) % n;
                }
            }
        }
        out
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.encode(&self.mul_coords(&self.decode(x), &self.decode(y)))
    }

    fn one(&self) -> usize {
        let mut c = vec![0u64; self.coords()];
        c[0] = 1;
        self.encode(&c)
    }

    /// Exhaustive inverse search.
    fn find_units(&self) -> Vec<bool> {
        let one = self.one();
        let decoded: Vec<Vec<u64>> = (0..self.size).map(|x| self.decode(x)).collect();
        (0..self.size)
            .map(|u| {
                (0..self.size).any(|v| self.encode(&self.mul_coords(&decoded[u], &decoded[v])) == one)
            })
            .collect()
    }
}

/// Lexicographically smallest monic irreducible of degree `t` over `Z_p`,
/// comparing `(c_0, c_1, ..., c_{t-1})` with `c_0` most significant.
/// Returned as the low coefficients `c_0..c_{t-1}`.
pub fn smallest_irreducible(p: u64, t: usize) -> Vec<u64> {
    let mut c = vec![0u64; t];
    loop {
        if is_irreducible(p, &c) {
            return c;
        }
        // Increment with c_{t-1} as the least significant digit.
        let mut j = t;
        loop {
            j -= 1;
            c[j] += 1;
            if c[j] < p {
                break;
            }
            c[j] = 0;
            assert!(j > 0, "an irreducible of every degree exists");
        }
    }
}

/// Irreducibility over `Z_p` of the monic polynomial with low coefficients `c`,
/// by trial division by every monic polynomial of degree at most half.
pub fn is_irreducible(p: u64, c: &[u64]) -> bool {
    let t = c.len();
    let mut f: Vec<u64> = c.to_vec();
    f.push(1);
    for d in 1..=t / 2 {
        let total = p.pow(d as u32);
        for code in 0..total {
            let mut g = Vec::with_capacity(d + 1);
            let mut x = code;
            for _ in 0..d {
                g.push(x % p);
                x /= p;
            }
            g.push(1);
            if poly_rem_is_zero(&f, &g, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for (j, &gj) in g.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - lead * gj % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&x| x == 0)
}

/// A finite commutative ring built element by element.
///
/// Elements are indices into the additive group `∏ Z_{p^s}`, one block of
/// coordinates per local factor in factor order.
#[derive(Clone, Debug)]
pub struct ConcreteRing {
    spec: RingSpec,
    group: AbelianGroup,
    locals: Vec<LocalRing>,
    /// Index stride of each factor's block.
    strides: Vec<usize>,
    units: Vec<bool>,
    one: usize,
}

impl ConcreteRing {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        self.group.add(x, y)
    }

    pub fn neg(&self, x: usize) -> usize {
        self.group.neg(x)
    }

    fn split(&self, mut x: usize) -> Vec<usize> {
        let mut parts = vec![0; self.locals.len()];
        for (i, (&s, l)) in self.strides.iter().zip(&self.locals).enumerate() {
            parts[i] = (x / s) % l.size;
            x %= s;
        }
        parts
    }

    fn join(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.strides).map(|(&p, &s)| p * s).sum()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (a, b) = (self.split(x), self.split(y));
        let prod: Vec<usize> = self
            .locals
            .iter()
            .zip(a.iter().zip(&b))
            .map(|(l, (&u, &v))| l.mul(u, v))
            .collect();
        self.join(&prod)
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.units[x]
    }

    /// Unit indices, ascending.
    pub fn units(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.units[x]).collect()
    }

    /// Nonzero non-units, ascending.
    pub fn nonzero_nonunits(&self) -> Vec<usize> {
        (1..self.size()).filter(|&x| !self.units[x]).collect()
    }

    /// Coordinates of an element in the additive group.
    pub fn coordinates(&self, x: usize) -> Vec<u64> {
        self.group.decode(x)
    }
}

/// Builds the ring element by element. Refuses shape-only factors and rings
/// with more than `bound` elements.
pub fn build_concrete_ring(spec: &RingSpec, bound: usize) -> Result<ConcreteRing> {
    let order = spec.order();
    if order > bound as u128 {
        return Err(Error::TooLarge { order, bound });
    }
    let locals: Vec<LocalRing> = spec.factors().iter().map(LocalRing::build).collect::<Result<_>>()?;
    let orders: Vec<u64> = locals
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.modulus, l.coords()))
        .collect();
    let group = AbelianGroup::new(orders)?;
    let mut strides = vec![0usize; locals.len()];
    let mut acc = 1usize;
    for (i, l) in locals.iter().enumerate().rev() {
        strides[i] = acc;
        acc *= l.size;
    }
    let mut ring = ConcreteRing {
        spec: spec.clone(),
        group,
        locals,
        strides,
        units: Vec::new(),
        one: 0,
    };
    let ones: Vec<usize> = ring.locals.iter().map(LocalRing::one).collect();
    ring.one = ring.join(&ones);
    ring.units = (0..ring.size())
        .map(|x| {
            ring.split(x)
                .iter()
                .zip(&ring.locals)
                .all(|(&p, l)| l.units[p])
        })
        .collect();
    Ok(ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_model::parse_ring_spec;

    fn ring(s: &str) -> ConcreteRing {
        build_concrete_ring(&parse_ring_spec(s).unwrap(), DEFAULT_BOUND).unwrap()
    }

    fn check_axioms(r: &ConcreteRing) {
        let n = r.size();
        assert_ne!(r.one(), r.zero());
        for x in 0..n {
            assert_eq!(r.mul(x, r.one()), x);
            assert_eq!(r.mul(x, r.zero()), 0);
            for y in 0..n {
                assert_eq!(r.mul(x, y), r.mul(y, x));
                for z in 0..n {
                    assert_eq!(r.mul(r.mul(x, y), z), r.mul(x, r.mul(y, z)));
                    assert_eq!(r.mul(x, r.add(y, z)), r.add(r.mul(x, y), r.mul(x, z)));
                }
            }
        }
    }

    #[test]
    fn ring_axioms_on_small_witnesses() {
        for s in ["F4", "F8", "Z9", "F2[x]/(x^2)", "F3[x]/(x^2)", "F2[x]/(x^3)", "F2xZ4", "F9"] {
            check_axioms(&ring(s));
        }
    }

    #[test]
    fn axioms_on_galois_ring_sampled() {
        let r = ring("GR(4,2)");
        assert_eq!(r.size(), 16);
        check_axioms(&r);
    }

    #[test]
    fn unit_counts_and_symmetry() {
        for s in ["F4", "Z9", "F3[x]/(x^2)", "GR(9,2)", "F3xF4", "Z12", "F4[x]/(x^3)", "F2xF2xF3"] {
            let r = ring(s);
            assert_eq!(r.units().len() as u128, r.spec().units_count(), "{s}");
            for u in r.units() {
                assert!(r.is_unit(r.neg(u)));
            }
        }
        assert_eq!(ring("Z9").units(), vec![1, 2, 4, 5, 7, 8]);
    }

    #[test]
    fn truncated_ring_non_units_are_multiples_of_x() {
        let r = ring("F3[x]/(x^2)");
        // Index a*3 + b encodes a + b·x; the non-units are exactly a = 0.
        assert_eq!(r.units().len(), 6);
        for x in 0..9 {
            assert_eq!(r.is_unit(x), x / 3 != 0);
        }
    }

    #[test]
    fn irreducible_choice() {
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1]);
        assert_eq!(smallest_irreducible(2, 3), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0]);
        assert_eq!(smallest_irreducible(5, 1), vec![0]);
        assert!(!is_irreducible(2, &[1, 0]));
        assert!(is_irreducible(3, &[1, 0]));
    }

    #[test]
    fn refusals() {
        let shape = parse_ring_spec("L(16,4)").unwrap();
        assert!(matches!(build_concrete_ring(&shape, DEFAULT_BOUND), Err(Error::NoWitness(_))));
        let big = parse_ring_spec("F101xF101").unwrap();
        assert!(matches!(build_concrete_ring(&big, DEFAULT_BOUND), Err(Error::TooLarge { .. })));
    }
}
