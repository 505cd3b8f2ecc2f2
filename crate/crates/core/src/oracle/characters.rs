//! Character sums `e_χ = Σ_{s∈S} χ(s)` and the multiplicity algebra of
//! difference and sum graphs on abelian groups.
//!
//! Characters of `Z_{d1} x ... x Z_{dk}` are indexed like group elements:
//! the index with coordinates `a` is `χ_a(x) = exp(2πi Σ a_j x_j / d_j)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::graph::connection_indicator;
use crate::oracle::group::AbelianGroup;
use crate::spectrum::Spectrum;

/// Values closer than this are one eigenvalue class.
pub const CLASS_TOL: f64 = 1e-9;
/// Largest imaginary part accepted in a character sum.
pub const IMAG_TOL: f64 = 1e-9;
/// Largest distance to an integer accepted when rounding.
pub const ROUND_TOL: f64 = 1e-6;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Phases {
    lcm: u64,
    scale: Vec<u64>,
    roots: Vec<Complex64>,
}

impl Phases {
    fn new(group: &AbelianGroup) -> Self {
        let lcm = group.orders().iter().fold(1u64, |l, &d| l / gcd(l, d) * d);
        let scale = group.orders().iter().map(|&d| lcm / d).collect();
        let roots = (0..lcm)
            .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / lcm as f64))
            .collect();
        Phases { lcm, scale, roots }
    }

    /// `χ_a(x)`.
    fn value(&self, group: &AbelianGroup, a: usize, x: usize) -> Complex64 {
        let mut phase = 0u64;
        for j in 0..group.rank() {
            phase = (phase + group.coord(a, j) * group.coord(x, j) % self.lcm * self.scale[j]) % self.lcm;
        }
        self.roots[phase as usize]
    }
}

/// `χ_a` equals its inverse, i.e. `2a = 0`.
pub fn character_is_real(group: &AbelianGroup, a: usize) -> bool {
    group.add(a, a) == 0
}

/// Complex character sums for every character, in character-index order.
pub fn char_sums(group: &AbelianGroup, s_set: &[usize]) -> Vec<Complex64> {
    let ph = Phases::new(group);
    (0..group.size())
        .map(|a| s_set.iter().map(|&s| ph.value(group, a, s)).sum())
        .collect()
}

/// Real character sums for a symmetric connection set.
///
/// Fails if some sum has an imaginary part of at least [`IMAG_TOL`].
pub fn char_sum_eigenvalues(group: &AbelianGroup, s_set: &[usize]) -> Result<Vec<f64>> {
    connection_indicator(group, s_set)?;
    char_sums(group, s_set)
        .into_iter()
        .enumerate()
        .map(|(index, z)| {
            if z.im.abs() >= IMAG_TOL {
                Err(Error::NonReal { index, imag: z.im })
            } else {
                Ok(z.re)
            }
        })
        .collect()
}

/// One class of characters sharing an eigenvalue.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterClass {
    pub value: f64,
    /// Character indices in the class, ascending.
    pub members: Vec<usize>,
    /// Members that equal their inverse.
    pub real: usize,
    /// Members that differ from their inverse.
    pub nonreal: usize,
}

/// Characters grouped by eigenvalue, with the real/non-real refinement.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterClassData {
    pub values: Vec<f64>,
    pub is_real: Vec<bool>,
    /// Classes in ascending order of value.
    pub classes: Vec<CharacterClass>,
    /// Class index of every character.
    pub class_of: Vec<usize>,
}

impl CharacterClassData {
    pub fn new(group: &AbelianGroup, values: Vec<f64>) -> Self {
        let is_real: Vec<bool> = (0..values.len()).map(|a| character_is_real(group, a)).collect();
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut classes: Vec<CharacterClass> = Vec::new();
        let mut class_of = vec![0; values.len()];
        for a in order {
            let v = values[a];
            let start_new = classes
                .last()
                .is_none_or(|c| (v - values[*c.members.last().unwrap()]).abs() > CLASS_TOL);
            if start_new {
                classes.push(CharacterClass { value: v, members: Vec::new(), real: 0, nonreal: 0 });
            }
            let c = classes.last_mut().unwrap();
            c.members.push(a);
            if is_real[a] {
                c.real += 1;
            } else {
                c.nonreal += 1;
            }
            class_of[a] = classes.len() - 1;
        }
        for c in &mut classes {
            c.members.sort_unstable();
            c.value = c.members.iter().map(|&a| values[a]).sum::<f64>() / c.members.len() as f64;
        }
        CharacterClassData { values, is_real, classes, class_of }
    }

    /// Class whose value is `-v`, if any.
    pub fn opposite(&self, class: usize) -> Option<usize> {
        let target = -self.classes[class].value;
        self.classes.iter().position(|c| (c.value - target).abs() <= CLASS_TOL)
    }

    /// Eigenvalues of the difference graph with multiplicities.
    pub fn difference_multiplicities(&self) -> RealMultiplicities {
        RealMultiplicities {
            entries: self.classes.iter().map(|c| (c.value, 2 * c.members.len() as u64)).collect(),
        }
    }

    /// Eigenvalues of the sum graph: a real character keeps its value, and each
    /// non-real one gives half a copy of its value and half of the negative.
    pub fn sum_multiplicities(&self) -> RealMultiplicities {
        let mut entries: Vec<(f64, u64)> = Vec::new();
        for (i, c) in self.classes.iter().enumerate() {
            let opposite_nonreal = self.opposite(i).map_or(0, |j| self.classes[j].nonreal);
            let twice = 2 * c.real as u64 + c.nonreal as u64 + opposite_nonreal as u64;
            if twice > 0 {
                entries.push((c.value, twice));
            }
        }
        // Values that occur only as negatives of non-real classes.
        for (i, c) in self.classes.iter().enumerate() {
            if c.nonreal > 0 && self.opposite(i).is_none() {
                entries.push((-c.value, c.nonreal as u64));
            }
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        RealMultiplicities { entries }
    }
}

/// Real eigenvalues with multiplicities stored doubled, so that half-integer
/// contributions stay exact.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealMultiplicities {
    pub entries: Vec<(f64, u64)>,
}

impl RealMultiplicities {
    /// Multiplicity of the class containing `v`, doubled.
    pub fn twice_multiplicity(&self, v: f64) -> u64 {
        self.entries
            .iter()
            .filter(|(x, _)| (x - v).abs() <= CLASS_TOL)
            .map(|&(_, m)| m)
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, m)| m).sum::<u64>() / 2
    }

    pub fn energy(&self) -> f64 {
        self.entries.iter().map(|&(v, m)| v.abs() * m as f64 / 2.0).sum()
    }

    /// Rounds to an integer spectrum; every value must be within
    /// [`ROUND_TOL`] of an integer and every multiplicity whole.
    pub fn to_spectrum(&self, degree: i128) -> Result<Spectrum> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for &(v, twice) in &self.entries {
            let r = v.round();
            if (v - r).abs() > ROUND_TOL {
                return Err(Error::NonIntegral(format!("eigenvalue {v} is not an integer")));
            }
            if twice % 2 != 0 {
                return Err(Error::NonIntegral(format!("eigenvalue {v} has multiplicity {}/2", twice)));
            }
            entries.push((r as i128, (twice / 2) as u128));
        }
        Spectrum::new(self.total() as u128, degree, entries)
    }
}

/// Sum-graph eigenvalue multiplicities of `X⁺(G, S)` from character sums.
pub fn sum_multiplicities(group: &AbelianGroup, s_set: &[usize]) -> Result<RealMultiplicities> {
    let values = char_sum_eigenvalues(group, s_set)?;
    Ok(CharacterClassData::new(group, values).sum_multiplicities())
}

/// Difference-graph eigenvalue multiplicities of `X(G, S)` from character sums.
pub fn difference_multiplicities(group: &AbelianGroup, s_set: &[usize]) -> Result<RealMultiplicities> {
    let values = char_sum_eigenvalues(group, s_set)?;
    Ok(CharacterClassData::new(group, values).difference_multiplicities())
}

/// For a character with `e_χ != 0`, the largest coordinate of
/// `A⁺V ∓ |e_χ|V` over `V = |e_χ| v_χ ± e_χ v_{χ⁻¹}`.
pub fn sum_eigenvector_residual(group: &AbelianGroup, s_set: &[usize], chi: usize) -> Result<f64> {
    let in_set = connection_indicator(group, s_set)?;
    let ph = Phases::new(group);
    let n = group.size();
    let e = s_set.iter().map(|&s| ph.value(group, chi, s)).sum::<Complex64>().re;
    let inv = group.neg(chi);
    let mut worst = 0.0f64;
    for sign in [1.0, -1.0] {
        let v: Vec<Complex64> = (0..n)
            .map(|x| e.abs() * ph.value(group, chi, x) + sign * e * ph.value(group, inv, x))
            .collect();
        for x in 0..n {
            let av: Complex64 = (0..n).filter(|&y| in_set[group.add(x, y)]).map(|y| v[y]).sum();
            worst = worst.max((av - sign * e.abs() * v[x]).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ring::{build_concrete_ring, DEFAULT_BOUND};
    use crate::ring_model::parse_ring_spec;

    #[test]
    fn z9_sum_multiplicities() {
        let r = build_concrete_ring(&parse_ring_spec("Z9").unwrap(), DEFAULT_BOUND).unwrap();
        let m = sum_multiplicities(r.group(), &r.units()).unwrap();
        let s = m.to_spectrum(6).unwrap();
        assert_eq!(s, Spectrum::new(9, 6, [(6, 1), (3, 1), (0, 6), (-3, 1)]).unwrap());
    }

    #[test]
    fn cycle_values() {
        let z5 = AbelianGroup::cyclic(5).unwrap();
        let e = char_sum_eigenvalues(&z5, &[1, 4]).unwrap();
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((e[0] - 2.0).abs() < 1e-12);
        assert!((e[1] - golden).abs() < 1e-12);
        assert!((e[1] - e[4]).abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_sets_rejected() {
        let z5 = AbelianGroup::cyclic(5).unwrap();
        assert!(matches!(char_sum_eigenvalues(&z5, &[1]), Err(Error::ConnectionSet(_))));
        // The raw sums really are non-real.
        assert!(char_sums(&z5, &[1])[1].im.abs() > 0.5);
    }

    #[test]
    fn eigenvectors_of_sum_graph() {
        let g = AbelianGroup::new(vec![3, 4]).unwrap();
        let s = [1, 3, 4, 8, 11];
        let s: Vec<usize> = s.iter().flat_map(|&x| [x, g.neg(x)]).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        for chi in 0..g.size() {
            assert!(sum_eigenvector_residual(&g, &s, chi).unwrap() < 1e-8);
        }
    }
}
