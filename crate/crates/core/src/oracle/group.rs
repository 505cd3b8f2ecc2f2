//! Finite abelian groups `Z_{d1} x ... x Z_{dk}` with elements as mixed-radix indices.

use crate::error::{Error, Result};

/// Elements are indices `0..size`; coordinate `j` is `(index / stride_j) % d_j`,
/// with the last coordinate varying fastest. Index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    orders: Vec<u64>,
    strides: Vec<usize>,
    size: usize,
}

impl AbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() || orders.iter().any(|&d| d < 1) {
            return Err(Error::Domain("cyclic orders must be positive".into()));
        }
        let mut strides = vec![0usize; orders.len()];
        let mut size = 1usize;
        for (j, &d) in orders.iter().enumerate().rev() {
            strides[j] = size;
            size = usize::try_from(d)
                .ok()
                .and_then(|d| size.checked_mul(d))
                .ok_or(Error::Overflow("group order"))?;
        }
        Ok(AbelianGroup { orders, strides, size })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn coord(&self, x: usize, j: usize) -> u64 {
        ((x / self.strides[j]) as u64) % self.orders[j]
    }

    pub fn decode(&self, x: usize) -> Vec<u64> {
        (0..self.rank()).map(|j| self.coord(x, j)).collect()
    }

    pub fn encode(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&c, &d), &s)| (c % d) as usize * s)
            .sum()
    }

    pub fn add(&self, x: usize, y: usize) -> usize {
        (0..self.rank())
            .map(|j| ((self.coord(x, j) + self.coord(y, j)) % self.orders[j]) as usize * self.strides[j])
            .sum()
    }

    pub fn neg(&self, x: usize) -> usize {
        (0..self.rank())
            .map(|j| {
                let d = self.orders[j];
                ((d - self.coord(x, j)) % d) as usize * self.strides[j]
            })
            .sum()
    }

    /// `x - y`.
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }

    /// Additive table of negatives, indexed by element.
    pub fn neg_table(&self) -> Vec<usize> {
        (0..self.size).map(|x| self.neg(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_laws_small() {
        let g = AbelianGroup::new(vec![2, 4, 3]).unwrap();
        assert_eq!(g.size(), 24);
        for x in 0..24 {
            assert_eq!(g.encode(&g.decode(x)), x);
            assert_eq!(g.add(x, g.neg(x)), 0);
            assert_eq!(g.add(x, 0), x);
            for y in 0..24 {
                assert_eq!(g.add(x, y), g.add(y, x));
                assert_eq!(g.add(g.sub(x, y), y), x);
            }
        }
    }

    #[test]
    fn cyclic_is_mod_n() {
        let g = AbelianGroup::cyclic(7).unwrap();
        assert_eq!(g.add(5, 4), 2);
        assert_eq!(g.neg(3), 4);
    }
}
