//! Closed-form spectra and energies of unitary Cayley graphs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{add_u, mul_i, mul_u, to_i128};
use crate::error::{Error, Result};
use crate::ring_model::{LocalShape, RingSpec};
use crate::spectrum::Spectrum;

/// Which graph over a ring is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Difference graph on the units.
    Gr,
    /// Sum graph on the units.
    GrPlus,
    /// Complement of the difference graph.
    GrBar,
    /// Sum graph on the nonzero non-units.
    GrMinus,
}

impl Role {
    pub const ALL: [Role; 4] = [Role::Gr, Role::GrPlus, Role::GrBar, Role::GrMinus];

    pub fn name(self) -> &'static str {
        match self {
            Role::Gr => "gr",
            Role::GrPlus => "grplus",
            Role::GrBar => "grbar",
            Role::GrMinus => "grminus",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Role::ALL
            .into_iter()
            .find(|r| r.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Domain(format!("unknown role {s:?}")))
    }
}

/// Spectrum of the difference graph of a single local ring.
pub fn local_unitary_spectrum(f: &LocalShape) -> Result<Spectrum> {
    let (r, m, q) = (f.r() as i128, f.m() as i128, f.q() as u128);
    Spectrum::new(
        r as u128,
        r - m,
        [(r - m, 1), (0, (r - r / m) as u128), (-m, q - 1)],
    )
}

/// Spectrum of the sum graph of a single local ring.
pub fn local_sum_spectrum(f: &LocalShape) -> Result<Spectrum> {
    if f.is_even() {
        return local_unitary_spectrum(f);
    }
    let (r, m) = (f.r() as i128, f.m() as i128);
    let half = ((r - m) / (2 * m)) as u128;
    Spectrum::new(
        r as u128,
        r - m,
        [(r - m, 1), (m, half), (0, (r - r / m) as u128), (-m, half)],
    )
}

/// Spectrum of the unitary Cayley graph, by summing over subsets of factors.
///
/// Each subset `C` gives `(-1)^|C| ∏_{C} m_j ∏_{not C} |R_i*|` with
/// multiplicity `∏_{C} |R_j*|/m_j`; everything else is zero.
pub fn unitary_spectrum(spec: &RingSpec) -> Result<Spectrum> {
    let mut acc: BTreeMap<i128, u128> = BTreeMap::from([(1, 1)]);
    for f in spec.factors() {
        let units = f.units() as i128;
        let m = f.m() as i128;
        let branch = (f.units() / f.m()) as u128;
        let mut next = BTreeMap::new();
        for (&l, &mult) in &acc {
            for (factor, k) in [(units, 1u128), (-m, branch)] {
                let slot = next.entry(mul_i(l, factor)?).or_insert(0u128);
                *slot = add_u(*slot, mul_u(mult, k)?)?;
            }
        }
        acc = next;
    }
    let nonzero = acc.values().try_fold(0u128, |a, &m| add_u(a, m))?;
    let n = spec.order();
    let zero = n.checked_sub(nonzero).ok_or(Error::Overflow("zero multiplicity"))?;
    let degree = to_i128(spec.units_count())?;
    let mut entries: Vec<_> = acc.into_iter().collect();
    entries.push((0, zero));
    Spectrum::new(n, degree, entries)
}

/// Spectrum of the unitary Cayley sum graph: the Kronecker product of local sum spectra.
pub fn unitary_sum_spectrum(spec: &RingSpec) -> Result<Spectrum> {
    spec.factors()
        .iter()
        .try_fold(Spectrum::unit(), |acc, f| acc.kron(&local_sum_spectrum(f)?))
}

pub fn complement_spectrum(s: &Spectrum) -> Result<Spectrum> {
    s.complement()
}

pub fn kron_spectrum(a: &Spectrum, b: &Spectrum) -> Result<Spectrum> {
    a.kron(b)
}

pub fn energy(s: &Spectrum) -> Result<u128> {
    s.energy()
}

/// Closed-form spectrum for one of the roles that has one.
pub fn closed_form_spectrum(spec: &RingSpec, role: Role) -> Result<Spectrum> {
    match role {
        Role::Gr => unitary_spectrum(spec),
        Role::GrPlus => unitary_sum_spectrum(spec),
        Role::GrBar => unitary_spectrum(spec)?.complement(),
        Role::GrMinus => Err(Error::Domain(
            "the non-unit sum graph has no closed form; use the oracle".into(),
        )),
    }
}

/// `(E(G_R), E(complement of G_R))` from the ring parameters alone:
/// `2^s |R*|` and `2(|R|-1) + (2^s-2)|R*| - ∏q_i + ∏(2-q_i)` with `q_i = r_i/m_i`.
pub fn closed_form_energies(spec: &RingSpec) -> Result<(u128, u128)> {
    let s = u32::try_from(spec.len()).map_err(|_| Error::Overflow("factor count"))?;
    let two_s = 1i128.checked_shl(s).filter(|_| s < 126).ok_or(Error::Overflow("2^s"))?;
    let n = to_i128(spec.order())?;
    let k = to_i128(spec.units_count())?;
    let mut prod_q = 1i128;
    let mut prod_two_minus_q = 1i128;
    for q in spec.q_ratios() {
        prod_q = mul_i(prod_q, q as i128)?;
        prod_two_minus_q = mul_i(prod_two_minus_q, 2 - q as i128)?;
    }
    let e_g = mul_i(two_s, k)?;
    let e_bar = mul_i(2, n - 1)?
        .checked_add(mul_i(two_s - 2, k)?)
        .and_then(|v| v.checked_sub(prod_q))
        .and_then(|v| v.checked_add(prod_two_minus_q))
        .ok_or(Error::Overflow("complement energy"))?;
    let to_u = |v: i128| u128::try_from(v).map_err(|_| Error::Overflow("negative energy"));
    Ok((to_u(e_g)?, to_u(e_bar)?))
}

/// Edge counts `(k r / 2, k ⌊(r+1)/2⌋)` of the difference and sum graphs,
/// loops counted once.
pub fn edge_counts(spec: &RingSpec) -> Result<(u128, u128)> {
    let r = spec.order();
    let k = spec.units_count();
    Ok((mul_u(k, r)? / 2, mul_u(k, r.div_ceil(2))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_model::parse_ring_spec;
    use proptest::prelude::*;

    fn spec(s: &str) -> RingSpec {
        parse_ring_spec(s).unwrap()
    }

    fn sp(n: u128, k: i128, e: &[(i128, u128)]) -> Spectrum {
        Spectrum::new(n, k, e.iter().copied()).unwrap()
    }

    #[test]
    fn z9_family() {
        let g = unitary_spectrum(&spec("Z9")).unwrap();
        assert_eq!(g, sp(9, 6, &[(6, 1), (0, 6), (-3, 2)]));
        let plus = unitary_sum_spectrum(&spec("Z9")).unwrap();
        assert_eq!(plus, sp(9, 6, &[(6, 1), (3, 1), (0, 6), (-3, 1)]));
        assert_eq!(g.complement().unwrap(), sp(9, 2, &[(2, 3), (-1, 6)]));
        assert_eq!(g.energy().unwrap(), 12);
        assert_eq!(plus.energy().unwrap(), 12);
        assert_eq!(g.complement().unwrap().energy().unwrap(), 12);
    }

    #[test]
    fn f3_f4_family() {
        let g = unitary_spectrum(&spec("F3xF4")).unwrap();
        assert_eq!(g, sp(12, 6, &[(6, 1), (1, 6), (-2, 3), (-3, 2)]));
        let plus = unitary_sum_spectrum(&spec("F3xF4")).unwrap();
        assert_eq!(plus, sp(12, 6, &[(6, 1), (3, 1), (1, 3), (-1, 3), (-2, 3), (-3, 1)]));
        assert_eq!(g.complement().unwrap(), sp(12, 5, &[(5, 1), (2, 2), (1, 3), (-2, 6)]));
        assert_eq!(g.energy().unwrap(), 24);
    }

    #[test]
    fn small_fields() {
        assert_eq!(unitary_sum_spectrum(&spec("F3")).unwrap(), sp(3, 2, &[(2, 1), (1, 1), (-1, 1)]));
        assert_eq!(unitary_spectrum(&spec("F3")).unwrap(), sp(3, 2, &[(2, 1), (-1, 2)]));
        let f3 = unitary_spectrum(&spec("F3")).unwrap();
        let f4 = unitary_spectrum(&spec("F4")).unwrap();
        assert_eq!(f3.kron(&f4).unwrap(), unitary_spectrum(&spec("F3xF4")).unwrap());
        assert_eq!(f3.kron(&f3).unwrap(), sp(9, 4, &[(4, 1), (1, 4), (-2, 4)]));
    }

    #[test]
    fn energies_from_ring_parameters() {
        assert_eq!(closed_form_energies(&spec("F9")).unwrap().0, 16);
        assert_eq!(closed_form_energies(&spec("F3xF3")).unwrap().0, 16);
        assert_eq!(closed_form_energies(&spec("F3xF4xF5xF7")).unwrap().0, 2304);
    }

    #[test]
    fn edge_count_examples() {
        assert_eq!(edge_counts(&spec("Z9")).unwrap(), (27, 30));
        assert_eq!(edge_counts(&spec("F4")).unwrap(), (6, 6));
        assert_eq!(edge_counts(&spec("F3")).unwrap(), (3, 4));
    }

    #[test]
    fn role_names_round_trip() {
        for r in Role::ALL {
            assert_eq!(r.name().parse::<Role>().unwrap(), r);
        }
        assert!("gx".parse::<Role>().is_err());
    }

    fn local_strategy() -> impl Strategy<Value = LocalShape> {
        prop::sample::select(vec![
            (2u64, 1u64), (3, 1), (4, 1), (5, 1), (7, 1), (8, 1), (9, 1), (11, 1), (13, 1),
            (16, 1), (25, 1), (27, 1), (32, 1), (4, 2), (8, 4), (9, 3), (16, 8), (16, 4),
            (25, 5), (27, 9), (49, 7), (64, 8), (81, 9), (81, 27), (121, 11), (125, 25),
        ])
        .prop_map(|(r, m)| LocalShape::shape(r, m).unwrap())
    }

    fn ring_strategy() -> impl Strategy<Value = RingSpec> {
        prop::collection::vec(local_strategy(), 1..=6)
            .prop_filter_map("order bound", |v| {
                let r = RingSpec::new(v).ok()?;
                (r.order() <= 1_000_000).then_some(r)
            })
    }

    proptest! {
        #[test]
        fn subset_sum_matches_kronecker(r in ring_strategy()) {
            let kron = r.factors().iter().try_fold(Spectrum::unit(), |acc, f| {
                acc.kron(&local_unitary_spectrum(f)?)
            }).unwrap();
            prop_assert_eq!(unitary_spectrum(&r).unwrap(), kron);
        }

        #[test]
        fn sizes_degrees_energies(r in ring_strategy()) {
            let g = unitary_spectrum(&r).unwrap();
            let plus = unitary_sum_spectrum(&r).unwrap();
            let bar = g.complement().unwrap();
            let n = r.order();
            let k = r.units_count();
            prop_assert_eq!((g.n(), plus.n(), bar.n()), (n, n, n));
            prop_assert_eq!(g.degree() as u128, k);
            prop_assert_eq!(plus.degree() as u128, k);
            prop_assert_eq!(bar.degree() as u128, n - k - 1);
            let (eg, ebar) = closed_form_energies(&r).unwrap();
            prop_assert_eq!(g.energy().unwrap(), eg);
            prop_assert_eq!(eg, (1u128 << r.len()) * k);
            prop_assert_eq!(bar.energy().unwrap(), ebar);
            prop_assert_eq!(plus.energy().unwrap(), eg);
        }

        #[test]
        fn traces_count_loops(r in ring_strategy()) {
            prop_assert_eq!(unitary_spectrum(&r).unwrap().trace().unwrap(), 0);
            let t = unitary_sum_spectrum(&r).unwrap().trace().unwrap();
            let expected = if r.order() % 2 == 1 { r.units_count() as i128 } else { 0 };
            prop_assert_eq!(t, expected);
        }

        #[test]
        fn odd_type_rings_are_not_isospectral(r in ring_strategy()) {
            if r.is_odd_type() {
                prop_assert_ne!(unitary_spectrum(&r).unwrap(), unitary_sum_spectrum(&r).unwrap());
            }
        }

        #[test]
        fn odd_order_sum_spectrum_is_strongly_almost_symmetric(r in ring_strategy()) {
            if r.order() % 2 == 1 {
                let s = unitary_sum_spectrum(&r).unwrap();
                let k = s.degree();
                prop_assert_eq!(s.multiplicity(k) as i128 - s.multiplicity(-k) as i128, 1);
                for (l, m) in s.iter() {
                    if l.abs() != k {
                        prop_assert_eq!(m, s.multiplicity(-l));
                    }
                }
            }
        }

        #[test]
        fn kron_algebra(a in ring_strategy(), b in ring_strategy(), c in ring_strategy()) {
            let (sa, sb, sc) = (
                unitary_sum_spectrum(&a).unwrap(),
                unitary_spectrum(&b).unwrap(),
                unitary_spectrum(&c).unwrap().complement().unwrap(),
            );
            if let (Ok(ab), Ok(ba)) = (sa.kron(&sb), sb.kron(&sa)) {
                prop_assert_eq!(&ab, &ba);
                prop_assert_eq!(ab.energy().unwrap(), sa.energy().unwrap() * sb.energy().unwrap());
                if let (Ok(l), Ok(r)) = (ab.kron(&sc), sa.kron(&sb.kron(&sc).unwrap())) {
                    prop_assert_eq!(l, r);
                }
            }
        }
    }
}
