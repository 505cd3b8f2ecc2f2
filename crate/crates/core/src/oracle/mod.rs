//! Brute-force verification from ring elements.
//!
//! Everything here rebuilds graphs explicitly and recomputes spectra without
//! using the closed forms, so it can be compared against them.

pub mod characters;
pub mod charpoly;
pub mod graph;
pub mod group;
pub mod ring;
pub mod sweep;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring_model::RingSpec;
use crate::spectra::{closed_form_energies, closed_form_spectrum, edge_counts, Role};
use crate::spectrum::Spectrum;

pub use characters::{
    char_sum_eigenvalues, character_is_real, sum_multiplicities, CharacterClassData, RealMultiplicities,
};
pub use charpoly::integer_spectrum_from_adjacency;
pub use graph::{cayley_graph, general_cayley_graph, structural_probe, GraphInstance, Mode, StructuralProbe};
pub use group::AbelianGroup;
pub use ring::{build_concrete_ring, ConcreteRing, DEFAULT_BOUND};

/// Connection set and adjacency rule of each role.
fn role_parts(ring: &ConcreteRing, role: Role) -> (Vec<usize>, Mode) {
    match role {
        Role::Gr => (ring.units(), Mode::Difference),
        Role::GrPlus => (ring.units(), Mode::Sum),
        Role::GrBar => (ring.nonzero_nonunits(), Mode::Difference),
        Role::GrMinus => (ring.nonzero_nonunits(), Mode::Sum),
    }
}

/// Explicit graph of a role over a concrete ring.
pub fn role_graph(ring: &ConcreteRing, role: Role) -> GraphInstance {
    match role {
        Role::Gr => cayley_graph(ring, Mode::Difference),
        Role::GrPlus => cayley_graph(ring, Mode::Sum),
        _ => {
            let (s, mode) = role_parts(ring, role);
            general_cayley_graph(ring.group(), &s, mode).expect("non-units form a symmetric set")
        }
    }
}

/// Spectrum of a role from the adjacency matrix.
pub fn adjacency_spectrum(ring: &ConcreteRing, role: Role) -> Result<Spectrum> {
    integer_spectrum_from_adjacency(&role_graph(ring, role))
}

/// Spectrum of a role from character sums, rounded to integers.
pub fn character_spectrum(ring: &ConcreteRing, role: Role) -> Result<Spectrum> {
    let (s, mode) = role_parts(ring, role);
    let values = char_sum_eigenvalues(ring.group(), &s)?;
    let classes = CharacterClassData::new(ring.group(), values);
    let mult = match mode {
        Mode::Difference => classes.difference_multiplicities(),
        Mode::Sum => classes.sum_multiplicities(),
    };
    mult.to_spectrum(s.len() as i128)
}

/// Spectrum of any role, using the oracle where no closed form exists.
pub fn role_spectrum(spec: &RingSpec, role: Role, bound: usize) -> Result<Spectrum> {
    match role {
        Role::GrMinus => {
            let ring = build_concrete_ring(spec, bound)?;
            let s = character_spectrum(&ring, Role::GrMinus)?;
            // Equal energy with the complement is a theorem; check it.
            let bar = closed_form_spectrum(spec, Role::GrBar)?;
            if s.energy()? != bar.energy()? {
                return Err(Error::mismatch(
                    format!("energy of non-unit sum graph of {spec}"),
                    bar.energy()?,
                    s.energy()?,
                ));
            }
            Ok(s)
        }
        _ => closed_form_spectrum(spec, role),
    }
}

/// Outcome of checking one ring against the oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecVerification {
    pub spec: RingSpec,
    pub order: u128,
    pub roles_checked: Vec<Role>,
    pub probes: Vec<(Role, StructuralProbe)>,
}

fn expect_eq<T: PartialEq + std::fmt::Display>(context: String, expected: T, found: T) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::mismatch(context, expected, found))
    }
}

/// Compares closed forms with adjacency spectra and character sums for the
/// difference graph, the sum graph and the complement, plus edge, loop and
/// energy counts.
pub fn verify_spec(spec: &RingSpec, bound: usize) -> Result<SpecVerification> {
    let ring = build_concrete_ring(spec, bound)?;
    expect_eq(format!("unit count of {spec}"), spec.units_count(), ring.units().len() as u128)?;
    let mut probes = Vec::new();
    let roles = [Role::Gr, Role::GrPlus, Role::GrBar];
    for role in roles {
        let closed = closed_form_spectrum(spec, role)?;
        let adjacency = adjacency_spectrum(&ring, role)?;
        expect_eq(format!("{role} spectrum of {spec} (adjacency)"), &closed, &adjacency)?;
        let chars = character_spectrum(&ring, role)?;
        expect_eq(format!("{role} spectrum of {spec} (characters)"), &closed, &chars)?;
        probes.push((role, structural_probe(&role_graph(&ring, role))));
    }
    let (e_g, e_plus) = edge_counts(spec)?;
    expect_eq(format!("edges of G({spec})"), e_g, probes[0].1.edge_count as u128)?;
    expect_eq(format!("edges of G+({spec})"), e_plus, probes[1].1.edge_count as u128)?;
    let loops = if spec.order() % 2 == 1 { spec.units_count() } else { 0 };
    expect_eq(format!("loops of G+({spec})"), loops, probes[1].1.loop_count as u128)?;
    let (eg, ebar) = closed_form_energies(spec)?;
    expect_eq(format!("energy of G({spec})"), eg, closed_form_spectrum(spec, Role::Gr)?.energy()?)?;
    expect_eq(format!("energy of complement of G({spec})"), ebar, closed_form_spectrum(spec, Role::GrBar)?.energy()?)?;
    Ok(SpecVerification {
        spec: spec.clone(),
        order: spec.order(),
        roles_checked: roles.to_vec(),
        probes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_model::parse_ring_spec;

    #[test]
    fn oracle_spectra_for_examples() {
        let z9 = build_concrete_ring(&parse_ring_spec("Z9").unwrap(), DEFAULT_BOUND).unwrap();
        assert_eq!(
            adjacency_spectrum(&z9, Role::Gr).unwrap().to_string(),
            "{[6]^1,[0]^6,[-3]^2}"
        );
        let f = build_concrete_ring(&parse_ring_spec("F3xF4").unwrap(), DEFAULT_BOUND).unwrap();
        assert_eq!(
            adjacency_spectrum(&f, Role::GrPlus).unwrap().to_string(),
            "{[6]^1,[3]^1,[1]^3,[-1]^3,[-2]^3,[-3]^1}"
        );
    }

    #[test]
    fn verify_small_rings() {
        for s in ["Z9", "F3xF4", "Z4xF3", "F2xF2", "F3[x]/(x^2)", "F2[x]/(x^3)", "GR(4,2)", "Z12"] {
            verify_spec(&parse_ring_spec(s).unwrap(), DEFAULT_BOUND).unwrap();
        }
    }

    #[test]
    fn non_unit_sum_graph_energy() {
        let s = role_spectrum(&parse_ring_spec("F4xF5").unwrap(), Role::GrMinus, DEFAULT_BOUND).unwrap();
        assert_eq!(s.n(), 20);
        assert_eq!(s.degree(), 7);
    }
}
