//! Search for L-borderenergetic graphs: every labeled graph of a small order,
//! or the graphs of a graph6 corpus.
//!
//! Findings are deduplicated by spectral fingerprint (Laplacian eigenvalues
//! rounded to 1e−6). Each fingerprint keeps its first witness and a count of
//! the graphs that mapped to it.

use std::collections::HashMap;
use std::io::BufRead;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::energy::{complete_spectrum, cospectral, m_energy, BORDERENERGETIC_TOL, COMPLETE_COSPECTRAL_TOL};
use crate::graph::Graph;
use crate::graph6::{read_stream, write_graph6, Graph6Error, Graph6Options};
use crate::spectral::{graph_spectrum, MatrixKind, SpectralError};

/// Largest order for exhaustive labeled enumeration (2²¹ graphs).
pub const MAX_LABELED_ORDER: usize = 7;
/// Fingerprint resolution.
pub const FINGERPRINT_SCALE: f64 = 1e6;
const CHUNK_BITS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error("labeled scans cover orders 1..={MAX_LABELED_ORDER}; got {0}. Use a graph6 corpus for larger orders")]
    OrderOutOfRange(usize),
    #[error("line {line}: {error}")]
    Malformed { line: usize, error: Graph6Error },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanFinding {
    /// First witness, graph6-encoded.
    pub graph: String,
    pub n: usize,
    pub energy_l: f64,
    /// Sorted Laplacian eigenvalues rounded to 1e−6.
    pub fingerprint: Vec<f64>,
    pub cospectral_with_complete: bool,
    pub connected: bool,
    /// Number of scanned graphs sharing this fingerprint.
    pub count: usize,
}

/// Rounded sorted spectrum; the dedupe key.
pub type Fingerprint = Vec<i64>;

pub fn fingerprint(values: &[f64]) -> Fingerprint {
    values.iter().map(|x| (x * FINGERPRINT_SCALE).round() as i64).collect()
}

/// Evaluates one graph; returns a finding (count 1) if E_L = 2n − 2 within
/// tolerance.
pub fn evaluate(g: &Graph) -> Result<Option<(Fingerprint, ScanFinding)>, ScanError> {
    let n = g.order();
    if n == 0 {
        return Ok(None);
    }
    let spec = graph_spectrum(g, MatrixKind::Laplacian)?;
    let trace = (2 * g.edge_count()) as f64;
    let energy = m_energy(spec.values(), trace, n).expect("spectrum length equals order");
    if (energy - (2 * n - 2) as f64).abs() > BORDERENERGETIC_TOL {
        return Ok(None);
    }
    let key = fingerprint(spec.values());
    let finding = ScanFinding {
        graph: write_graph6(g).expect("scan orders are writable"),
        n,
        energy_l: energy,
        fingerprint: key.iter().map(|&k| k as f64 / FINGERPRINT_SCALE).collect(),
        cospectral_with_complete: cospectral(
            spec.values(),
            &complete_spectrum(n, MatrixKind::Laplacian),
            COMPLETE_COSPECTRAL_TOL,
        ),
        connected: g.is_connected(),
        count: 1,
    };
    Ok(Some((key, finding)))
}

/// Insertion-ordered fingerprint table.
#[derive(Default)]
struct Dedupe {
    index: HashMap<Fingerprint, usize>,
    findings: Vec<ScanFinding>,
}

impl Dedupe {
    fn add(&mut self, key: Fingerprint, finding: ScanFinding) {
        match self.index.get(&key) {
            Some(&i) => self.findings[i].count += finding.count,
            None => {
                self.index.insert(key, self.findings.len());
                self.findings.push(finding);
            }
        }
    }

    fn absorb(&mut self, other: Dedupe) {
        let mut keyed: Vec<(Fingerprint, usize)> = other.index.into_iter().collect();
        keyed.sort_unstable_by_key(|(_, i)| *i);
        let mut findings: Vec<Option<ScanFinding>> = other.findings.into_iter().map(Some).collect();
        for (key, i) in keyed {
            let f = findings[i].take().expect("each index appears once");
            self.add(key, f);
        }
    }
}

/// Every labeled graph on `n` vertices, in adjacency bit-code order.
///
/// Bit-code ranges are evaluated in parallel and merged in range order, so
/// the output (first witnesses, counts and their order) is deterministic.
pub fn scan_labeled(n: usize) -> Result<Vec<ScanFinding>, ScanError> {
    if n == 0 || n > MAX_LABELED_ORDER {
        return Err(ScanError::OrderOutOfRange(n));
    }
    let bits = (n * (n - 1) / 2) as u32;
    let total: u64 = 1 << bits;
    let chunk: u64 = 1 << CHUNK_BITS.min(bits);
    let chunks: Vec<Dedupe> = (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut local = Dedupe::default();
            for code in c * chunk..(c + 1) * chunk {
                if let Some((key, f)) = evaluate(&Graph::from_upper_bits(n, code))? {
                    local.add(key, f);
                }
            }
            Ok(local)
        })
        .collect::<Result<_, ScanError>>()?;
    let mut merged = Dedupe::default();
    for part in chunks {
        merged.absorb(part);
    }
    Ok(merged.findings)
}

/// Outcome of a corpus scan.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorpusScan {
    pub findings: Vec<ScanFinding>,
    /// Records parsed and evaluated.
    pub records: usize,
    /// Lines skipped in lenient mode, with their errors.
    pub malformed: Vec<(usize, Graph6Error)>,
    /// Lines accepted despite nonzero padding bits.
    pub padding_warnings: Vec<usize>,
}

/// Scans the graphs of a graph6 stream. In strict mode the first malformed
/// line aborts the scan; otherwise malformed lines are collected and skipped
/// and nonzero padding is only a warning.
pub fn scan_corpus<R: BufRead>(reader: R, strict: bool) -> Result<CorpusScan, ScanError> {
    let opts = Graph6Options {
        lenient_padding: !strict,
        ..Graph6Options::default()
    };
    let mut out = CorpusScan::default();
    let mut table = Dedupe::default();
    for (line, record) in read_stream(reader, opts) {
        match record {
            Ok(decoded) => {
                out.records += 1;
                if decoded.padding_warning.is_some() {
                    out.padding_warnings.push(line);
                }
                if let Some((key, f)) = evaluate(&decoded.graph)? {
                    table.add(key, f);
                }
            }
            Err(error) if strict => return Err(ScanError::Malformed { line, error }),
            Err(error) => out.malformed.push((line, error)),
        }
    }
    out.findings = table.findings;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{family, FamilyId};

    #[test]
    fn order_bounds() {
        assert_eq!(scan_labeled(0), Err(ScanError::OrderOutOfRange(0)));
        assert_eq!(scan_labeled(8), Err(ScanError::OrderOutOfRange(8)));
    }

    #[test]
    fn order_two_has_only_k2() {
        let f = scan_labeled(2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].graph, "A_");
        assert!(f[0].cospectral_with_complete);
        assert!(f[0].connected);
        assert_eq!(f[0].count, 1);
    }

    #[test]
    fn order_four_contains_kkodot3() {
        let f = scan_labeled(4).unwrap();
        assert!(f.iter().any(|x| x.fingerprint == vec![0.0, 1.0, 3.0, 4.0]));
        // 12 labelings of the paw graph (K₂ ∪ K₁) ∇ K₁.
        let paw = f.iter().find(|x| x.fingerprint == vec![0.0, 1.0, 3.0, 4.0]).unwrap();
        assert_eq!(paw.count, 12);
        let k4 = f.iter().find(|x| x.cospectral_with_complete).unwrap();
        assert_eq!(k4.count, 1);
        assert!(f.iter().all(|x| (x.energy_l - 6.0).abs() <= 1e-6));
    }

    #[test]
    fn fingerprint_rounding() {
        assert_eq!(
            fingerprint(&[-1e-12, 2.9999999, 3.0000004]),
            vec![0, 3_000_000, 3_000_000]
        );
    }

    #[test]
    fn corpus_modes() {
        let kk = write_graph6(&family(FamilyId::KKOdot { n: 5 }).unwrap()).unwrap();
        let text = format!(">>graph6<<{kk}\nnot graph6\nBx\n");
        let lenient = scan_corpus(text.as_bytes(), false).unwrap();
        assert_eq!(lenient.records, 2);
        // The padded "Bx" still decodes to K₃, itself a (trivial) witness.
        assert_eq!(lenient.findings.len(), 2);
        assert_eq!(lenient.findings[0].n, 8);
        assert!(lenient.findings[1].cospectral_with_complete);
        assert!((lenient.findings[0].energy_l - 14.0).abs() < 1e-9);
        assert_eq!(lenient.malformed.len(), 1);
        assert_eq!(lenient.malformed[0].0, 2);
        assert_eq!(lenient.padding_warnings, vec![3]);

        let strict = scan_corpus(text.as_bytes(), true);
        assert!(matches!(strict, Err(ScanError::Malformed { line: 2, .. })));
        assert_eq!(scan_corpus("".as_bytes(), true).unwrap(), CorpusScan::default());
    }
}
