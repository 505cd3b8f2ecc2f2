//! Exact spectra, energies and classification of unitary Cayley graphs and
//! unitary Cayley sum graphs over finite commutative rings, with a brute-force
//! oracle that rebuilds every graph from ring elements.

pub mod arith;
pub mod classify;
pub mod error;
pub mod oracle;
pub mod par;
pub mod ring_model;
pub mod search;
pub mod spectra;
pub mod spectrum;

pub use error::{Error, Result};
pub use par::Execution;
pub use ring_model::{parse_ring_spec, Family, FamilyKind, LocalShape, RingSpec};
pub use spectra::{
    closed_form_energies, closed_form_spectrum, complement_spectrum, edge_counts, energy,
    kron_spectrum, unitary_spectrum, unitary_sum_spectrum, Role,
};
pub use spectrum::Spectrum;
