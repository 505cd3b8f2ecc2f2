//! Seeded sweeps over random symmetric connection sets in cyclic groups.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::characters::{char_sums, CharacterClassData, CLASS_TOL};
use crate::oracle::graph::{general_cayley_graph, structural_probe, Mode};
use crate::oracle::group::AbelianGroup;
use crate::par::Execution;

/// A random symmetric subset of `Z_n \ {0}`, nonempty, ascending.
pub fn random_symmetric_set(n: u64, rng: &mut impl Rng) -> Vec<usize> {
    let group = AbelianGroup::cyclic(n).expect("n >= 1");
    loop {
        let mut chosen = vec![false; n as usize];
        for x in 1..=(n / 2) as usize {
            if rng.gen_bool(0.5) {
                chosen[x] = true;
                chosen[group.neg(x)] = true;
            }
        }
        let s: Vec<usize> = (1..n as usize).filter(|&x| chosen[x]).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Checks on one symmetric pair `(Z_n, S)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCheck {
    pub n: u64,
    pub s_set: Vec<usize>,
    pub difference_energy: f64,
    pub sum_energy: f64,
    /// Largest `|e_χ - e_{χ⁻¹}|`.
    pub inverse_gap: f64,
    /// Largest `|Im e_χ|`.
    pub max_imag: f64,
    /// Eigenvalue pairs `{v, -v}` checked for `m(v)+m(-v) = m⁺(v)+m⁺(-v)`.
    pub pair_classes: usize,
    /// Connected and not bipartite, where a loop counts as an odd cycle.
    pub difference_connected_nonbipartite: bool,
    pub sum_connected_nonbipartite: bool,
}

/// Energy equality, the pairwise multiplicity relation, inverse-character
/// symmetry and the connectivity correspondence for one pair.
pub fn check_symmetric_pair(n: u64, s_set: &[usize]) -> Result<PairCheck> {
    let group = AbelianGroup::cyclic(n)?;
    let sums = char_sums(&group, s_set);
    let max_imag = sums.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if max_imag >= crate::oracle::characters::IMAG_TOL {
        return Err(Error::NonReal { index: 0, imag: max_imag });
    }
    let values: Vec<f64> = sums.iter().map(|z| z.re).collect();
    let inverse_gap = (0..values.len())
        .map(|a| (values[a] - values[group.neg(a)]).abs())
        .fold(0.0, f64::max);
    let classes = CharacterClassData::new(&group, values);
    let diff = classes.difference_multiplicities();
    let sum = classes.sum_multiplicities();
    let difference_energy = diff.energy();
    let sum_energy = sum.energy();
    let mut magnitudes: Vec<f64> = classes.classes.iter().map(|c| c.value.abs()).collect();
    magnitudes.sort_by(f64::total_cmp);
    magnitudes.dedup_by(|a, b| (*a - *b).abs() <= CLASS_TOL);
    for &v in &magnitudes {
        let both = |m: &crate::oracle::RealMultiplicities| {
            m.twice_multiplicity(v) + if v > CLASS_TOL { m.twice_multiplicity(-v) } else { 0 }
        };
        let (lhs, rhs) = (both(&diff), both(&sum));
        if lhs != rhs {
            return Err(Error::mismatch(
                format!("m(v)+m(-v) vs m+(v)+m+(-v) at v={v} for Z{n}, S={s_set:?}"),
                lhs as f64 / 2.0,
                rhs as f64 / 2.0,
            ));
        }
    }
    let pair_classes = magnitudes.len();
    let dg = structural_probe(&general_cayley_graph(&group, s_set, Mode::Difference)?);
    let sg = structural_probe(&general_cayley_graph(&group, s_set, Mode::Sum)?);
    Ok(PairCheck {
        n,
        s_set: s_set.to_vec(),
        difference_energy,
        sum_energy,
        inverse_gap,
        max_imag,
        pair_classes,
        difference_connected_nonbipartite: dg.connected && !dg.two_colorable(),
        sum_connected_nonbipartite: sg.connected && !sg.two_colorable(),
    })
}

/// `count` random pairs with `n` uniform in `n_range`, reproducible from `seed`.
pub fn random_pairs(seed: u64, count: usize, n_range: std::ops::RangeInclusive<u64>) -> Vec<(u64, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(n_range.clone());
            (n, random_symmetric_set(n, &mut rng))
        })
        .collect()
}

/// Runs [`check_symmetric_pair`] over a seeded batch.
pub fn random_pair_sweep(
    seed: u64,
    count: usize,
    n_range: std::ops::RangeInclusive<u64>,
    exec: Execution,
) -> Result<Vec<PairCheck>> {
    let pairs = random_pairs(seed, count, n_range);
    exec.try_map(&pairs, |(n, s)| check_symmetric_pair(*n, s))
}
