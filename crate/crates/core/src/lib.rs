//! Spectral graph-energy workbench.
//!
//! Builds simple graphs and the complete/matching join families, computes
//! adjacency, Laplacian and normalized-Laplacian spectra both numerically
//! (cyclic Jacobi) and exactly (rational closed forms and join theorems),
//! evaluates graph energies, and searches small graphs for
//! L-borderenergetic witnesses, i.e. graphs of order n with E_L = 2n − 2.

pub mod closed_form;
pub mod energy;
pub mod graph;
pub mod graph6;
pub mod scan;
pub mod spectral;
pub mod verify;

pub use closed_form::{
    base_spectrum, butler_join, complement_spectrum, composition_spectrum, family_spectrum, merris_join,
    union_spectrum, ClosedFormError, Rational, RationalSpectrum,
};
pub use energy::{
    closed_energy_formula, cospectral, exact_energy, laplacian_energy, m_energy, normalized_laplacian_energy,
    EnergyError, EnergyReport,
};
pub use graph::{
    build_graph, complement, degree_stats, family, join, kk_dot_direct, union, DegreeStats, FamilyId, Graph, GraphError,
};
pub use graph6::{parse_graph6, write_graph6, Graph6Error};
pub use spectral::{eigenvalues_sym, matrix, DenseSymMatrix, FloatSpectrum, MatrixKind, SpectralError};
