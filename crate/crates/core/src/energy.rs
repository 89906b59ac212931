//! Graph energies: Σ|λᵢ(M) − tr(M)/n| for the adjacency and Laplacian
//! matrices, Σ|λᵢ − 1| for the normalized Laplacian, in floating point from
//! the eigensolver or exactly from rational spectra.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::closed_form::{family_spectrum, int, ClosedFormError, Rational, RationalSpectrum};
use crate::graph::{FamilyId, Graph};
use crate::spectral::{graph_spectrum, FloatSpectrum, MatrixKind, SpectralError};

/// Absolute tolerance on |E − (2n − 2)| for the numeric borderenergetic verdicts.
pub const BORDERENERGETIC_TOL: f64 = 1e-6;
/// Elementwise tolerance used when comparing a numeric spectrum with K_n's.
pub const COMPLETE_COSPECTRAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("energy of the order-0 graph is undefined")]
    EmptyGraph,
    #[error("spectrum has {len} values for order {n}")]
    LengthMismatch { len: usize, n: usize },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("no closed energy formula for {0}")]
    NoFormula(FamilyId),
}

/// Energy of one matrix of one graph, with the borderenergetic verdicts that
/// apply to that matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub kind: MatrixKind,
    pub order: usize,
    /// Centering constant as a float (tr(M)/n, or 1 for the normalized Laplacian).
    pub center: f64,
    pub center_exact: Option<Rational>,
    pub energy: Option<f64>,
    pub energy_exact: Option<Rational>,
    /// E_L = 2n − 2; only set for the Laplacian.
    pub is_l_borderenergetic: Option<bool>,
    /// E = 2n − 2; only set for the adjacency matrix.
    pub is_borderenergetic: Option<bool>,
    /// The spectrum coincides with that of K_n (adjacency and Laplacian only).
    pub cospectral_with_complete: Option<bool>,
}

impl EnergyReport {
    /// Float energy if computed, else the exact one converted.
    pub fn value(&self) -> f64 {
        self.energy
            .or_else(|| self.energy_exact.as_ref().and_then(ToPrimitive::to_f64))
            .unwrap_or(f64::NAN)
    }
}

/// Σ|λᵢ − trace/n|.
pub fn m_energy(spec: &[f64], trace: f64, n: usize) -> Result<f64, EnergyError> {
    if n == 0 {
        return Err(EnergyError::EmptyGraph);
    }
    if spec.len() != n {
        return Err(EnergyError::LengthMismatch { len: spec.len(), n });
    }
    let center = trace / n as f64;
    Ok(spec.iter().map(|x| (x - center).abs()).sum())
}

/// Σ multiplicity·|value − center|, exactly.
pub fn exact_energy(spec: &RationalSpectrum, center: &Rational) -> Rational {
    spec.entries()
        .iter()
        .map(|(v, m)| (v - center).abs() * Rational::from_integer(BigInt::from(*m)))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// True iff both sorted spectra have the same length and agree elementwise
/// within `tol`.
pub fn cospectral(s1: &[f64], s2: &[f64], tol: f64) -> bool {
    s1.len() == s2.len() && s1.iter().zip(s2).all(|(a, b)| (a - b).abs() <= tol)
}

/// Sorted spectrum of K_n for `kind`, used to flag the trivial witness.
pub fn complete_spectrum(n: usize, kind: MatrixKind) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let nf = n as f64;
    match kind {
        MatrixKind::Adjacency => {
            let mut v = vec![-1.0; n - 1];
            v.push(nf - 1.0);
            v
        }
        MatrixKind::Laplacian => std::iter::once(0.0).chain(std::iter::repeat_n(nf, n - 1)).collect(),
        MatrixKind::NormalizedLaplacian if n == 1 => vec![0.0],
        MatrixKind::NormalizedLaplacian => std::iter::once(0.0)
            .chain(std::iter::repeat_n(nf / (nf - 1.0), n - 1))
            .collect(),
    }
}

fn border_target(n: usize) -> f64 {
    2.0 * n as f64 - 2.0
}

/// Energy from an already computed spectrum of `kind`.
///
/// `trace` is the matrix trace; it is ignored for the normalized Laplacian,
/// whose center is fixed at 1.
pub fn report_from_spectrum(spec: &FloatSpectrum, trace: f64, kind: MatrixKind) -> Result<EnergyReport, EnergyError> {
    let n = spec.len();
    let (energy, center) = match kind {
        MatrixKind::NormalizedLaplacian => (m_energy(spec.values(), n as f64, n)?, 1.0),
        _ => (m_energy(spec.values(), trace, n)?, trace / n as f64),
    };
    let border = (energy - border_target(n)).abs() <= BORDERENERGETIC_TOL;
    let with_complete = cospectral(spec.values(), &complete_spectrum(n, kind), COMPLETE_COSPECTRAL_TOL);
    Ok(EnergyReport {
        kind,
        order: n,
        center,
        center_exact: None,
        energy: Some(energy),
        energy_exact: None,
        is_l_borderenergetic: (kind == MatrixKind::Laplacian).then_some(border),
        is_borderenergetic: (kind == MatrixKind::Adjacency).then_some(border),
        cospectral_with_complete: (kind != MatrixKind::NormalizedLaplacian).then_some(with_complete),
    })
}

/// Numeric energy of `g` for any matrix kind.
pub fn graph_energy(g: &Graph, kind: MatrixKind) -> Result<EnergyReport, EnergyError> {
    if g.order() == 0 {
        return Err(EnergyError::EmptyGraph);
    }
    let spec = graph_spectrum(g, kind)?;
    let trace = match kind {
        MatrixKind::Adjacency => 0.0,
        MatrixKind::Laplacian => (2 * g.edge_count()) as f64,
        MatrixKind::NormalizedLaplacian => (g.order() - g.isolated_count()) as f64,
    };
    let mut report = report_from_spectrum(&spec, trace, kind)?;
    report.center_exact = match kind {
        MatrixKind::Adjacency => Some(Rational::zero()),
        MatrixKind::Laplacian => Some(Rational::new(BigInt::from(2 * g.edge_count()), BigInt::from(g.order()))),
        MatrixKind::NormalizedLaplacian => Some(int(1)),
    };
    Ok(report)
}

/// E_L of `g`, centered at the average degree 2m/n.
pub fn laplacian_energy(g: &Graph) -> Result<EnergyReport, EnergyError> {
    graph_energy(g, MatrixKind::Laplacian)
}

/// E_𝓛 of `g`, centered at 1.
pub fn normalized_laplacian_energy(g: &Graph) -> Result<EnergyReport, EnergyError> {
    graph_energy(g, MatrixKind::NormalizedLaplacian)
}

/// E(G) of the adjacency matrix, centered at 0.
pub fn adjacency_energy(g: &Graph) -> Result<EnergyReport, EnergyError> {
    graph_energy(g, MatrixKind::Adjacency)
}

/// Exact energy of a family member from its closed-form spectrum.
///
/// The Laplacian center is the exact average degree (trace over order); the
/// normalized Laplacian center is 1.
pub fn exact_family_energy(id: FamilyId, kind: MatrixKind) -> Result<EnergyReport, EnergyError> {
    let spec = family_spectrum(id, kind)?;
    let n = spec.order();
    let center = match kind {
        MatrixKind::NormalizedLaplacian => int(1),
        _ => spec.sum() / int(n as i64),
    };
    let energy = exact_energy(&spec, &center);
    let target = int(2 * n as i64 - 2);
    let complete = crate::closed_form::base_spectrum(FamilyId::Complete { n }, kind).ok();
    Ok(EnergyReport {
        kind,
        order: n,
        center: center.to_f64().unwrap_or(f64::NAN),
        center_exact: Some(center),
        energy: None,
        is_l_borderenergetic: (kind == MatrixKind::Laplacian).then(|| energy == target),
        is_borderenergetic: None,
        cospectral_with_complete: (kind == MatrixKind::Laplacian).then(|| complete.as_ref() == Some(&spec)),
        energy_exact: Some(energy),
    })
}

/// The closed energy formulas for the four composite families:
/// 4n − 6, 4n − 2, and (2a + 2b)/(b + 1) for both matching joins.
pub fn closed_energy_formula(id: FamilyId) -> Result<Rational, EnergyError> {
    id.validate().map_err(ClosedFormError::from)?;
    let n_of = |v: usize| v as i64;
    Ok(match id {
        FamilyId::KKOdot { n } => int(4 * n_of(n) - 6),
        FamilyId::KKDot { n } => int(4 * n_of(n) - 2),
        FamilyId::MatchJoinComplete { a, b } | FamilyId::MatchJoinEmpty { a, b } => {
            crate::closed_form::frac(2 * n_of(a) + 2 * n_of(b), n_of(b) + 1)
        }
        _ => return Err(EnergyError::NoFormula(id)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{base_spectrum, frac};
    use crate::graph::{build_graph, family};

    #[test]
    fn m_energy_examples() {
        assert_eq!(m_energy(&[0.0, 3.0, 3.0], 6.0, 3).unwrap(), 4.0);
        assert_eq!(m_energy(&[2.5; 4], 10.0, 4).unwrap(), 0.0);
        assert_eq!(m_energy(&[0.0, 1.0, 3.0, 4.0], 8.0, 4).unwrap(), 6.0);
        assert_eq!(m_energy(&[], 0.0, 0), Err(EnergyError::EmptyGraph));
        assert_eq!(
            m_energy(&[1.0], 1.0, 2),
            Err(EnergyError::LengthMismatch { len: 1, n: 2 })
        );
    }

    #[test]
    fn laplacian_energy_of_families() {
        let r = laplacian_energy(&family(FamilyId::KKOdot { n: 5 }).unwrap()).unwrap();
        assert!((r.value() - 14.0).abs() < 1e-9);
        assert_eq!(r.is_l_borderenergetic, Some(true));
        assert_eq!(r.cospectral_with_complete, Some(false));
        let r = laplacian_energy(&family(FamilyId::KKDot { n: 3 }).unwrap()).unwrap();
        assert!((r.value() - 10.0).abs() < 1e-9);
        assert_eq!(r.is_l_borderenergetic, Some(true));
        let r = laplacian_energy(&family(FamilyId::Complete { n: 6 }).unwrap()).unwrap();
        assert_eq!(
            (r.is_l_borderenergetic, r.cospectral_with_complete),
            (Some(true), Some(true))
        );
    }

    #[test]
    fn laplacian_energy_of_path() {
        // det(L(P₃) − x I) = −x(x − 1)(x − 3), so the spectrum is {0, 1, 3};
        // check the roots by exact cofactor expansion before using them.
        let det = |x: i64| {
            let m = [[1 - x, -1, 0], [-1, 2 - x, -1], [0, -1, 1 - x]];
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        assert!([0, 1, 3].iter().all(|&x| det(x) == 0));
        let want = (0.0f64 - 4.0 / 3.0).abs() + (1.0f64 - 4.0 / 3.0).abs() + (3.0f64 - 4.0 / 3.0).abs();
        let p3 = build_graph(3, &[(0, 1), (1, 2)]).unwrap();
        let r = laplacian_energy(&p3).unwrap();
        assert!((r.value() - want).abs() < 1e-12);
        assert!((want - 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.is_l_borderenergetic, Some(false));
        assert_eq!(r.center_exact, Some(frac(4, 3)));
    }

    #[test]
    fn normalized_energy_examples() {
        let r = normalized_laplacian_energy(&family(FamilyId::MatchJoinComplete { a: 2, b: 2 }).unwrap()).unwrap();
        assert!((r.value() - 8.0 / 3.0).abs() < 1e-9);
        let r = normalized_laplacian_energy(&family(FamilyId::MatchJoinEmpty { a: 3, b: 2 }).unwrap()).unwrap();
        assert!((r.value() - 10.0 / 3.0).abs() < 1e-9);
        let r = normalized_laplacian_energy(&family(FamilyId::Complete { n: 2 }).unwrap()).unwrap();
        assert!((r.value() - 2.0).abs() < 1e-12);
        assert_eq!(r.is_l_borderenergetic, None);
    }

    #[test]
    fn adjacency_energy_of_complete() {
        for n in 2..8 {
            let r = adjacency_energy(&family(FamilyId::Complete { n }).unwrap()).unwrap();
            assert_eq!(r.is_borderenergetic, Some(true));
            assert_eq!(r.cospectral_with_complete, Some(true));
        }
        let r = adjacency_energy(&family(FamilyId::Empty { b: 3 }).unwrap()).unwrap();
        assert_eq!(r.is_borderenergetic, Some(false));
    }

    #[test]
    fn exact_energies() {
        for n in 3..=40usize {
            let spec = family_spectrum(FamilyId::KKOdot { n }, MatrixKind::Laplacian).unwrap();
            assert_eq!(exact_energy(&spec, &int(n as i64 - 1)), int(4 * n as i64 - 6));
        }
        let spec = family_spectrum(
            FamilyId::MatchJoinComplete { a: 2, b: 2 },
            MatrixKind::NormalizedLaplacian,
        )
        .unwrap();
        assert_eq!(exact_energy(&spec, &int(1)), frac(8, 3));
        let flat = RationalSpectrum::new([(frac(7, 2), 5)]);
        assert_eq!(exact_energy(&flat, &frac(7, 2)), int(0));
    }

    #[test]
    fn exact_family_report() {
        let r = exact_family_energy(FamilyId::KKOdot { n: 5 }, MatrixKind::Laplacian).unwrap();
        assert_eq!(r.energy_exact, Some(int(14)));
        assert_eq!(r.center_exact, Some(int(4)));
        assert_eq!(r.is_l_borderenergetic, Some(true));
        assert_eq!(r.cospectral_with_complete, Some(false));
        let r = exact_family_energy(FamilyId::Complete { n: 5 }, MatrixKind::Laplacian).unwrap();
        assert_eq!(r.cospectral_with_complete, Some(true));
    }

    #[test]
    fn closed_formulas() {
        assert_eq!(closed_energy_formula(FamilyId::KKOdot { n: 5 }).unwrap(), int(14));
        assert_eq!(closed_energy_formula(FamilyId::KKDot { n: 3 }).unwrap(), int(10));
        for b in 2..30i64 {
            let id = FamilyId::MatchJoinEmpty { a: 2, b: b as usize };
            assert_eq!(closed_energy_formula(id).unwrap(), frac(2 * b + 4, b + 1));
        }
        for a in 2..10 {
            for b in 2..10 {
                assert_eq!(
                    closed_energy_formula(FamilyId::MatchJoinComplete { a, b }).unwrap(),
                    closed_energy_formula(FamilyId::MatchJoinEmpty { a, b }).unwrap()
                );
            }
        }
        assert!(matches!(
            closed_energy_formula(FamilyId::Complete { n: 3 }),
            Err(EnergyError::NoFormula(_))
        ));
    }

    #[test]
    fn cospectrality() {
        let s = [0.0, 1.0, 2.5];
        assert!(cospectral(&s, &s, 0.0));
        assert!(!cospectral(&s, &s[..2], 1.0));
        let nl = MatrixKind::NormalizedLaplacian;
        let g = family_spectrum(FamilyId::MatchJoinComplete { a: 2, b: 2 }, nl).unwrap();
        let h = family_spectrum(FamilyId::MatchJoinEmpty { a: 2, b: 2 }, nl).unwrap();
        assert_ne!(g, h);
        assert!(!cospectral(&g.to_f64(), &h.to_f64(), 0.0));
        let kk = graph_spectrum(&family(FamilyId::KKOdot { n: 5 }).unwrap(), MatrixKind::Laplacian).unwrap();
        let k8 = base_spectrum(FamilyId::Complete { n: 8 }, MatrixKind::Laplacian).unwrap();
        assert!(!cospectral(kk.values(), &k8.to_f64(), 1e-8));
    }
}
