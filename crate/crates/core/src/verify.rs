//! Verification harness for the composite families.
//!
//! For every K_{n−1}⊙K_n and K_n·K_n with 3 ≤ n ≤ max_n, and every pair
//! aK₂∇K_b / aK₂∇bK₁ with 2 ≤ a, b ≤ max_ab, four checks run:
//!
//! 1. closed-form spectrum against the Jacobi eigensolve of the built graph;
//! 2. closed-form spectrum against the join-theorem composition, exactly;
//! 3. exact energy against the closed energy formula (and the numeric energy
//!    against the exact one);
//! 4. noncospectrality with equal energy against the comparison graph.

use std::time::Instant;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::closed_form::{base_spectrum, composition_spectrum, family_spectrum, int, Rational, RationalSpectrum};
use crate::energy::{closed_energy_formula, cospectral, exact_energy, graph_energy, EnergyError};
use crate::graph::{degree_stats, family, FamilyId};
use crate::spectral::{graph_spectrum, MatrixKind};

/// Elementwise tolerance between closed-form and eigensolver spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Tolerance between numeric and exact energies.
pub const ENERGY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    ClosedVsNumeric,
    ClosedVsComposition,
    EnergyFormula,
    Noncospectrality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: FamilyId,
    /// Comparison graph for the noncospectrality check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub against: Option<FamilyId>,
    pub check: CheckName,
    pub matrix: MatrixKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_equal: Option<bool>,
    pub elapsed_us: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub kkodot_instances: usize,
    pub kkdot_instances: usize,
    pub pairs: usize,
    pub checks: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failures == 0
    }

    /// Process exit code: 0 if every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }
}

type EnergyFormula = fn(FamilyId) -> Result<Rational, EnergyError>;

/// Runs the checks. The energy formula is injectable so that the harness
/// itself can be tested against a deliberately wrong one.
#[derive(Debug, Clone, Copy)]
pub struct Verifier {
    pub energy_formula: EnergyFormula,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            energy_formula: closed_energy_formula,
        }
    }
}

/// Verifies all families with the genuine formulas.
pub fn verify_families(max_n: usize, max_ab: usize) -> VerificationReport {
    Verifier::default().run(max_n, max_ab)
}

fn instance_kind(id: FamilyId) -> MatrixKind {
    match id {
        FamilyId::MatchJoinComplete { .. } | FamilyId::MatchJoinEmpty { .. } => MatrixKind::NormalizedLaplacian,
        _ => MatrixKind::Laplacian,
    }
}

struct Outcome {
    pass: bool,
    max_deviation: Option<f64>,
    exact_equal: Option<bool>,
    detail: Option<String>,
}

impl Outcome {
    fn error(e: impl std::fmt::Display) -> Self {
        Outcome {
            pass: false,
            max_deviation: None,
            exact_equal: None,
            detail: Some(e.to_string()),
        }
    }
}

impl Verifier {
    pub fn run(&self, max_n: usize, max_ab: usize) -> VerificationReport {
        let mut report = VerificationReport::default();
        for n in 3..=max_n {
            report.summary.kkodot_instances += 1;
            self.instance(&mut report, FamilyId::KKOdot { n }, FamilyId::Complete { n: 2 * n - 2 });
        }
        for n in 3..=max_n {
            report.summary.kkdot_instances += 1;
            self.instance(&mut report, FamilyId::KKDot { n }, FamilyId::Complete { n: 2 * n });
        }
        for a in 2..=max_ab {
            for b in 2..=max_ab {
                report.summary.pairs += 1;
                let g = FamilyId::MatchJoinComplete { a, b };
                let h = FamilyId::MatchJoinEmpty { a, b };
                self.single_checks(&mut report, g);
                self.single_checks(&mut report, h);
                self.record(&mut report, g, Some(h), CheckName::Noncospectrality, || {
                    noncospectral(g, h)
                });
            }
        }
        report.summary.checks = report.records.len();
        report.summary.failures = report.failures().count();
        report
    }

    fn instance(&self, report: &mut VerificationReport, id: FamilyId, against: FamilyId) {
        self.single_checks(report, id);
        self.record(report, id, Some(against), CheckName::Noncospectrality, || {
            noncospectral(id, against)
        });
    }

    fn single_checks(&self, report: &mut VerificationReport, id: FamilyId) {
        self.record(report, id, None, CheckName::ClosedVsNumeric, || closed_vs_numeric(id));
        self.record(report, id, None, CheckName::ClosedVsComposition, || {
            closed_vs_composition(id)
        });
        self.record(report, id, None, CheckName::EnergyFormula, || {
            self.energy_formula_check(id)
        });
    }

    fn record(
        &self,
        report: &mut VerificationReport,
        id: FamilyId,
        against: Option<FamilyId>,
        check: CheckName,
        run: impl FnOnce() -> Outcome,
    ) {
        let start = Instant::now();
        let outcome = run();
        report.records.push(CheckRecord {
            id,
            against,
            check,
            matrix: instance_kind(id),
            status: if outcome.pass { Status::Pass } else { Status::Fail },
            max_deviation: outcome.max_deviation,
            exact_equal: outcome.exact_equal,
            elapsed_us: start.elapsed().as_micros() as u64,
            detail: outcome.detail,
        });
    }

    fn energy_formula_check(&self, id: FamilyId) -> Outcome {
        let kind = instance_kind(id);
        let run = || -> Result<Outcome, String> {
            let spec = family_spectrum(id, kind).map_err(|e| e.to_string())?;
            let g = family(id).map_err(|e| e.to_string())?;
            let center = match kind {
                MatrixKind::Laplacian => degree_stats(&g).map_err(|e| e.to_string())?.average_degree,
                _ => int(1),
            };
            let exact = exact_energy(&spec, &center);
            let formula = (self.energy_formula)(id).map_err(|e| e.to_string())?;
            let numeric = graph_energy(&g, kind).map_err(|e| e.to_string())?.value();
            let deviation = (numeric - exact.to_f64().unwrap_or(f64::NAN)).abs();
            let equal = exact == formula;
            let pass = equal && deviation <= ENERGY_TOL;
            Ok(Outcome {
                pass,
                max_deviation: Some(deviation),
                exact_equal: Some(equal),
                detail: (!pass).then(|| format!("exact energy {exact}, formula {formula}, numeric {numeric}")),
            })
        };
        run().unwrap_or_else(Outcome::error)
    }
}

fn closed_vs_numeric(id: FamilyId) -> Outcome {
    let kind = instance_kind(id);
    let run = || -> Result<Outcome, String> {
        let closed = family_spectrum(id, kind).map_err(|e| e.to_string())?.to_f64();
        let g = family(id).map_err(|e| e.to_string())?;
        let numeric = graph_spectrum(&g, kind).map_err(|e| e.to_string())?;
        match numeric.max_deviation(&closed) {
            Some(dev) => Ok(Outcome {
                pass: dev <= SPECTRUM_TOL,
                max_deviation: Some(dev),
                exact_equal: None,
                detail: None,
            }),
            None => Err(format!(
                "closed form has {} values, graph has order {}",
                closed.len(),
                numeric.len()
            )),
        }
    };
    run().unwrap_or_else(Outcome::error)
}

fn closed_vs_composition(id: FamilyId) -> Outcome {
    let kind = instance_kind(id);
    let run = || -> Result<Outcome, String> {
        let closed = family_spectrum(id, kind).map_err(|e| e.to_string())?;
        let composed = composition_spectrum(id, kind).map_err(|e| e.to_string())?;
        let equal = closed == composed;
        Ok(Outcome {
            pass: equal,
            max_deviation: None,
            exact_equal: Some(equal),
            detail: (!equal).then(|| format!("closed {closed} vs composed {composed}")),
        })
    };
    run().unwrap_or_else(Outcome::error)
}

fn exact_spectrum(id: FamilyId, kind: MatrixKind) -> Result<RationalSpectrum, String> {
    match id {
        FamilyId::Complete { .. } => base_spectrum(id, kind),
        _ => family_spectrum(id, kind),
    }
    .map_err(|e| e.to_string())
}

/// The two graphs must differ in exact and numeric spectrum but share the
/// exact energy.
fn noncospectral(id: FamilyId, against: FamilyId) -> Outcome {
    let kind = instance_kind(id);
    let run = || -> Result<Outcome, String> {
        let s1 = exact_spectrum(id, kind)?;
        let s2 = exact_spectrum(against, kind)?;
        let center = |s: &RationalSpectrum| match kind {
            MatrixKind::Laplacian => s.sum() / int(s.order() as i64),
            _ => int(1),
        };
        let (e1, e2) = (exact_energy(&s1, &center(&s1)), exact_energy(&s2, &center(&s2)));
        let g1 = graph_spectrum(&family(id).map_err(|e| e.to_string())?, kind).map_err(|e| e.to_string())?;
        let g2 = graph_spectrum(&family(against).map_err(|e| e.to_string())?, kind).map_err(|e| e.to_string())?;
        let exact_differs = s1 != s2;
        let numeric_differs = !cospectral(g1.values(), g2.values(), SPECTRUM_TOL);
        let same_energy = e1 == e2;
        let pass = exact_differs && numeric_differs && same_energy;
        Ok(Outcome {
            pass,
            max_deviation: g1.max_deviation(g2.values()),
            exact_equal: Some(same_energy),
            detail: (!pass).then(|| {
                format!("exact spectra differ: {exact_differs}, numeric spectra differ: {numeric_differs}, energies {e1} vs {e2}")
            }),
        })
    };
    run().unwrap_or_else(Outcome::error)
}
