//! Exact Laplacian and normalized-Laplacian spectra as multisets of reduced
//! fractions.
//!
//! Two independent routes are provided for every composite family: the
//! closed-form lemma spectra in [`family_spectrum`], and the spectra obtained
//! by composing base spectra with the union rule and the two join theorems
//! in [`composition_spectrum`]. Laplacian joins follow Merris; normalized
//! Laplacian joins of regular graphs follow Butler.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{FamilyId, GraphError};
use crate::spectral::MatrixKind;

/// Exact eigenvalue; always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn uint(v: usize) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClosedFormError {
    #[error(transparent)]
    Family(#[from] GraphError),
    #[error("spectrum has no zero eigenvalue, so it is not a Laplacian spectrum")]
    MissingZero,
    #[error("spectrum has order {actual}, expected {expected}")]
    OrderMismatch { expected: usize, actual: usize },
    #[error("join of an empty side is undefined ({0} + regularity is zero)")]
    DegenerateJoin(&'static str),
    #[error("regularity {r} is impossible for a graph of order {n}")]
    ImplausibleRegularity { n: usize, r: usize },
    #[error("no exact {kind} spectrum is available for {family}")]
    Unsupported { family: FamilyId, kind: MatrixKind },
    #[error("negative multiplicity {0}")]
    NegativeMultiplicity(i64),
}

/// Sorted multiset of exact eigenvalues with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSpectrum {
    entries: Vec<(Rational, usize)>,
}

impl RationalSpectrum {
    /// Collects (value, multiplicity) pairs: zero multiplicities are dropped,
    /// coincident values merged, entries sorted ascending.
    pub fn new(pairs: impl IntoIterator<Item = (Rational, usize)>) -> Self {
        let mut all: Vec<(Rational, usize)> = pairs.into_iter().filter(|(_, m)| *m > 0).collect();
        all.sort_by(|a, b| a.0.cmp(&b.0));
        let mut entries: Vec<(Rational, usize)> = Vec::with_capacity(all.len());
        for (v, m) in all {
            match entries.last_mut() {
                Some((last, count)) if *last == v => *count += m,
                _ => entries.push((v, m)),
            }
        }
        RationalSpectrum { entries }
    }

    /// Like [`RationalSpectrum::new`] but with signed multiplicities, as they
    /// come out of parametrized formulas (e.g. `n − 3`). Negative counts are a
    /// caller error.
    pub fn from_formula(pairs: impl IntoIterator<Item = (Rational, i64)>) -> Result<Self, ClosedFormError> {
        let mut out = Vec::new();
        for (v, m) in pairs {
            if m < 0 {
                return Err(ClosedFormError::NegativeMultiplicity(m));
            }
            out.push((v, m as usize));
        }
        Ok(RationalSpectrum::new(out))
    }

    pub fn empty() -> Self {
        RationalSpectrum { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[(Rational, usize)] {
        &self.entries
    }

    /// Total multiplicity.
    pub fn order(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, value: &Rational) -> usize {
        self.entries.iter().find(|(v, _)| v == value).map_or(0, |(_, m)| *m)
    }

    pub fn contains_zero(&self) -> bool {
        self.multiplicity(&Rational::zero()) > 0
    }

    pub fn largest(&self) -> Option<&Rational> {
        self.entries.last().map(|(v, _)| v)
    }

    /// Σ value × multiplicity.
    pub fn sum(&self) -> Rational {
        self.entries.iter().map(|(v, m)| v * uint(*m)).sum()
    }

    /// Every eigenvalue listed once per multiplicity, ascending.
    pub fn expanded(&self) -> Vec<Rational> {
        self.entries
            .iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.clone(), *m))
            .collect()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|(v, m)| std::iter::repeat_n(v.to_f64().unwrap_or(f64::NAN), *m))
            .collect()
    }

    /// The multiset with one instance of 0 removed.
    fn without_reserved_zero(&self) -> Result<Vec<(Rational, usize)>, ClosedFormError> {
        if !self.contains_zero() {
            return Err(ClosedFormError::MissingZero);
        }
        let mut rest = self.entries.clone();
        for (v, m) in rest.iter_mut() {
            if v.is_zero() {
                *m -= 1;
            }
        }
        Ok(rest)
    }
}

impl fmt::Display for RationalSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, m)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if *m == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{m}")?;
            }
        }
        f.write_str("}")
    }
}

/// JSON-friendly view of one spectrum entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: String,
    pub approx: f64,
    pub multiplicity: usize,
}

impl RationalSpectrum {
    pub fn to_entries(&self) -> Vec<SpectrumEntry> {
        self.entries
            .iter()
            .map(|(v, m)| SpectrumEntry {
                value: v.to_string(),
                approx: v.to_f64().unwrap_or(f64::NAN),
                multiplicity: *m,
            })
            .collect()
    }
}

fn laplacian_only(kind: MatrixKind, family: FamilyId) -> Result<(), ClosedFormError> {
    match kind {
        MatrixKind::Laplacian | MatrixKind::NormalizedLaplacian => Ok(()),
        MatrixKind::Adjacency => Err(ClosedFormError::Unsupported { family, kind }),
    }
}

/// Spectra of K_n, bK₁ and aK₂.
pub fn base_spectrum(id: FamilyId, kind: MatrixKind) -> Result<RationalSpectrum, ClosedFormError> {
    laplacian_only(kind, id)?;
    id.validate()?;
    let normalized = kind == MatrixKind::NormalizedLaplacian;
    Ok(match id {
        FamilyId::Complete { n } if normalized => {
            if n == 1 {
                RationalSpectrum::new([(int(0), 1)])
            } else {
                RationalSpectrum::new([(int(0), 1), (Rational::new(n.into(), (n - 1).into()), n - 1)])
            }
        }
        FamilyId::Complete { n } => RationalSpectrum::new([(int(0), 1), (uint(n), n - 1)]),
        FamilyId::Empty { b } => RationalSpectrum::new([(int(0), b)]),
        // Both L and 𝓛 of a perfect matching are {0^a, 2^a}.
        FamilyId::Matching { a } => RationalSpectrum::new([(int(0), a), (int(2), a)]),
        _ => return Err(ClosedFormError::Unsupported { family: id, kind }),
    })
}

/// Multiset union.
pub fn union_spectrum(s1: &RationalSpectrum, s2: &RationalSpectrum) -> RationalSpectrum {
    RationalSpectrum::new(s1.entries.iter().chain(&s2.entries).cloned())
}

/// Laplacian spectrum of the complement: one 0 kept, every other μ mapped to
/// n − μ.
pub fn complement_spectrum(s: &RationalSpectrum) -> Result<RationalSpectrum, ClosedFormError> {
    let n = uint(s.order());
    let rest = s.without_reserved_zero()?;
    Ok(RationalSpectrum::new(
        std::iter::once((int(0), 1)).chain(rest.into_iter().map(|(v, m)| (&n - v, m))),
    ))
}

/// Laplacian spectrum of G₁ ∇ G₂ from the Laplacian spectra of G₁ and G₂.
pub fn merris_join(s1: &RationalSpectrum, s2: &RationalSpectrum) -> Result<RationalSpectrum, ClosedFormError> {
    let (n1, n2) = (s1.order(), s2.order());
    let rest1 = s1.without_reserved_zero()?;
    let rest2 = s2.without_reserved_zero()?;
    let (shift1, shift2) = (uint(n2), uint(n1));
    Ok(RationalSpectrum::new(
        [(int(0), 1), (uint(n1 + n2), 1)]
            .into_iter()
            .chain(rest1.into_iter().map(|(v, m)| (v + &shift1, m)))
            .chain(rest2.into_iter().map(|(v, m)| (v + &shift2, m))),
    ))
}

/// Normalized Laplacian spectrum of G₁ ∇ G₂ for an `r`-regular G₁ of order
/// `n` and an `s`-regular G₂ of order `m`.
pub fn butler_join(
    s1: &RationalSpectrum,
    n: usize,
    r: usize,
    s2: &RationalSpectrum,
    m: usize,
    s: usize,
) -> Result<RationalSpectrum, ClosedFormError> {
    for (spec, order, reg) in [(s1, n, r), (s2, m, s)] {
        if spec.order() != order {
            return Err(ClosedFormError::OrderMismatch {
                expected: order,
                actual: spec.order(),
            });
        }
        if order > 0 && (reg >= order || (order * reg) % 2 == 1) {
            return Err(ClosedFormError::ImplausibleRegularity { n: order, r: reg });
        }
    }
    if m + r == 0 {
        return Err(ClosedFormError::DegenerateJoin("m"));
    }
    if n + s == 0 {
        return Err(ClosedFormError::DegenerateJoin("n"));
    }
    let rest1 = s1.without_reserved_zero()?;
    let rest2 = s2.without_reserved_zero()?;
    let (nq, mq, rq, sq) = (uint(n), uint(m), uint(r), uint(s));
    let den1 = &mq + &rq;
    let den2 = &nq + &sq;
    let top = &mq / &den1 + &nq / &den2;
    Ok(RationalSpectrum::new(
        [(int(0), 1), (top, 1)]
            .into_iter()
            .chain(rest1.into_iter().map(|(lam, k)| ((&mq + &rq * lam) / &den1, k)))
            .chain(rest2.into_iter().map(|(mu, k)| ((&nq + &sq * mu) / &den2, k))),
    ))
}

/// Closed-form lemma spectra for the composite families:
/// (K_{n−1}⊙K_n, L), (K_n·K_n, L), (aK₂∇K_b, 𝓛), (aK₂∇bK₁, 𝓛). Any other
/// pairing falls back to [`composition_spectrum`].
pub fn family_spectrum(id: FamilyId, kind: MatrixKind) -> Result<RationalSpectrum, ClosedFormError> {
    id.validate()?;
    let sz = |v: usize| v as i64;
    match (id, kind) {
        (FamilyId::KKOdot { n }, MatrixKind::Laplacian) => {
            let n = sz(n);
            RationalSpectrum::from_formula([
                (int(0), 1),
                (int(1), 1),
                (int(n - 1), n - 3),
                (int(n), n - 2),
                (int(2 * n - 2), 1),
            ])
        }
        (FamilyId::KKDot { n }, MatrixKind::Laplacian) => {
            let n = sz(n);
            RationalSpectrum::from_formula([
                (int(0), 1),
                (int(1), 1),
                (int(n), n - 2),
                (int(n + 1), n - 1),
                (int(2 * n), 1),
            ])
        }
        (FamilyId::MatchJoinComplete { a, b }, MatrixKind::NormalizedLaplacian) => {
            let (a, b) = (sz(a), sz(b));
            RationalSpectrum::from_formula([
                (int(0), 1),
                (frac(b, b + 1), a - 1),
                (frac(b + 2, b + 1), a),
                (frac(2 * a + b, 2 * a + b - 1), b - 1),
                (frac(b, b + 1) + frac(2 * a, 2 * a + b - 1), 1),
            ])
        }
        (FamilyId::MatchJoinEmpty { a, b }, MatrixKind::NormalizedLaplacian) => {
            let (a, b) = (sz(a), sz(b));
            RationalSpectrum::from_formula([
                (int(0), 1),
                (frac(b, b + 1), a - 1),
                (frac(b + 2, b + 1), a),
                (int(1), b - 1),
                (frac(b, b + 1) + int(1), 1),
            ])
        }
        _ => composition_spectrum(id, kind),
    }
}

/// Spectrum obtained from base spectra through the union rule and the Merris
/// (Laplacian) or Butler (normalized Laplacian) join rules.
pub fn composition_spectrum(id: FamilyId, kind: MatrixKind) -> Result<RationalSpectrum, ClosedFormError> {
    laplacian_only(kind, id)?;
    id.validate()?;
    let base = |f: FamilyId| base_spectrum(f, kind);
    let complete = |n: usize| FamilyId::Complete { n };
    let laplacian = kind == MatrixKind::Laplacian;
    match id {
        FamilyId::Complete { .. } | FamilyId::Empty { .. } | FamilyId::Matching { .. } => base(id),
        FamilyId::KKOdot { n } if laplacian => merris_join(
            &union_spectrum(&base(complete(n - 1))?, &base(complete(n - 2))?),
            &base(complete(1))?,
        ),
        FamilyId::KKDot { n } if laplacian => merris_join(
            &union_spectrum(&base(complete(n))?, &base(complete(n - 1))?),
            &base(complete(1))?,
        ),
        FamilyId::MatchJoinComplete { a, b } => {
            let left = base(FamilyId::Matching { a })?;
            let right = base(complete(b))?;
            if laplacian {
                merris_join(&left, &right)
            } else {
                butler_join(&left, 2 * a, 1, &right, b, b - 1)
            }
        }
        FamilyId::MatchJoinEmpty { a, b } => {
            let left = base(FamilyId::Matching { a })?;
            let right = base(FamilyId::Empty { b })?;
            if laplacian {
                merris_join(&left, &right)
            } else {
                butler_join(&left, 2 * a, 1, &right, b, 0)
            }
        }
        // (K_{n−1} ∪ K_{n−2}) is not regular, so no exact 𝓛 route exists.
        FamilyId::KKOdot { .. } | FamilyId::KKDot { .. } => Err(ClosedFormError::Unsupported { family: id, kind }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(pairs: &[(Rational, usize)]) -> RationalSpectrum {
        RationalSpectrum::new(pairs.iter().cloned())
    }

    fn ints(pairs: &[(i64, usize)]) -> RationalSpectrum {
        RationalSpectrum::new(pairs.iter().map(|&(v, m)| (int(v), m)))
    }

    #[test]
    fn construction_normalizes() {
        let s = RationalSpectrum::new([(int(3), 1), (int(0), 0), (int(1), 2), (int(3), 2)]);
        assert_eq!(s.entries(), &[(int(1), 2), (int(3), 3)]);
        assert_eq!(s.order(), 5);
        assert_eq!(frac(4, 6), frac(2, 3));
        assert_eq!(frac(2, -4), frac(-1, 2));
        assert!(RationalSpectrum::from_formula([(int(1), -1)]).is_err());
    }

    #[test]
    fn base_spectra() {
        let l = MatrixKind::Laplacian;
        let nl = MatrixKind::NormalizedLaplacian;
        assert_eq!(
            base_spectrum(FamilyId::Complete { n: 4 }, l).unwrap(),
            ints(&[(0, 1), (4, 3)])
        );
        assert_eq!(
            base_spectrum(FamilyId::Matching { a: 2 }, nl).unwrap(),
            ints(&[(0, 2), (2, 2)])
        );
        assert_eq!(base_spectrum(FamilyId::Empty { b: 3 }, l).unwrap(), ints(&[(0, 3)]));
        assert_eq!(base_spectrum(FamilyId::Complete { n: 1 }, nl).unwrap(), ints(&[(0, 1)]));
        assert_eq!(
            base_spectrum(FamilyId::Complete { n: 3 }, nl).unwrap(),
            spec(&[(int(0), 1), (frac(3, 2), 2)])
        );
        assert!(base_spectrum(FamilyId::KKDot { n: 3 }, l).is_err());
        assert!(base_spectrum(FamilyId::Complete { n: 3 }, MatrixKind::Adjacency).is_err());
    }

    #[test]
    fn union_rule() {
        let k3 = ints(&[(0, 1), (3, 2)]);
        let k2 = ints(&[(0, 1), (2, 1)]);
        assert_eq!(union_spectrum(&k3, &k2), ints(&[(0, 2), (2, 1), (3, 2)]));
        assert_eq!(union_spectrum(&k3, &RationalSpectrum::empty()), k3);
        let k4 = ints(&[(0, 1), (4, 3)]);
        let u = union_spectrum(&k4, &k3);
        assert_eq!(u, ints(&[(0, 2), (3, 2), (4, 3)]));
        assert_eq!(u.order(), 7);
    }

    #[test]
    fn complement_rule() {
        // C₄ → 2K₂
        assert_eq!(
            complement_spectrum(&ints(&[(0, 1), (2, 2), (4, 1)])).unwrap(),
            ints(&[(0, 2), (2, 2)])
        );
        assert_eq!(complement_spectrum(&ints(&[(0, 1), (5, 4)])).unwrap(), ints(&[(0, 5)]));
        assert_eq!(complement_spectrum(&ints(&[(0, 3)])).unwrap(), ints(&[(0, 1), (3, 2)]));
        assert_eq!(complement_spectrum(&ints(&[(1, 2)])), Err(ClosedFormError::MissingZero));
    }

    #[test]
    fn merris_examples() {
        let k2k1 = ints(&[(0, 2), (2, 1)]);
        let k1 = ints(&[(0, 1)]);
        assert_eq!(
            merris_join(&k2k1, &k1).unwrap(),
            ints(&[(0, 1), (1, 1), (3, 1), (4, 1)])
        );
        assert_eq!(
            merris_join(&ints(&[(0, 2), (3, 2), (4, 3)]), &k1).unwrap(),
            ints(&[(0, 1), (1, 1), (4, 2), (5, 3), (8, 1)])
        );
        assert_eq!(merris_join(&k1, &k1).unwrap(), ints(&[(0, 1), (2, 1)]));
        assert_eq!(merris_join(&ints(&[(2, 1)]), &k1), Err(ClosedFormError::MissingZero));
    }

    #[test]
    fn butler_examples() {
        let m2 = ints(&[(0, 2), (2, 2)]);
        let k2 = ints(&[(0, 1), (2, 1)]);
        assert_eq!(
            butler_join(&m2, 4, 1, &k2, 2, 1).unwrap(),
            spec(&[
                (int(0), 1),
                (frac(2, 3), 1),
                (frac(4, 3), 2),
                (frac(6, 5), 1),
                (frac(22, 15), 1)
            ])
        );
        let e2 = ints(&[(0, 2)]);
        assert_eq!(
            butler_join(&m2, 4, 1, &e2, 2, 0).unwrap(),
            spec(&[
                (int(0), 1),
                (frac(2, 3), 1),
                (int(1), 1),
                (frac(4, 3), 2),
                (frac(5, 3), 1)
            ])
        );
        let k1 = ints(&[(0, 1)]);
        assert_eq!(butler_join(&k1, 1, 0, &k1, 1, 0).unwrap(), ints(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn butler_rejects_bad_inputs() {
        let m2 = ints(&[(0, 2), (2, 2)]);
        let k1 = ints(&[(0, 1)]);
        assert!(matches!(
            butler_join(&m2, 5, 1, &k1, 1, 0),
            Err(ClosedFormError::OrderMismatch { .. })
        ));
        assert!(matches!(
            butler_join(&m2, 4, 4, &k1, 1, 0),
            Err(ClosedFormError::ImplausibleRegularity { .. })
        ));
        assert!(matches!(
            butler_join(&ints(&[(0, 3)]), 3, 1, &k1, 1, 0),
            Err(ClosedFormError::ImplausibleRegularity { .. })
        ));
        let empty = RationalSpectrum::empty();
        assert_eq!(
            butler_join(&k1, 1, 0, &empty, 0, 0),
            Err(ClosedFormError::DegenerateJoin("m"))
        );
        assert_eq!(
            butler_join(&ints(&[(1, 1)]), 1, 0, &k1, 1, 0),
            Err(ClosedFormError::MissingZero)
        );
    }

    #[test]
    fn lemma_spectra() {
        let l = MatrixKind::Laplacian;
        let nl = MatrixKind::NormalizedLaplacian;
        assert_eq!(
            family_spectrum(FamilyId::KKOdot { n: 5 }, l).unwrap(),
            ints(&[(0, 1), (1, 1), (4, 2), (5, 3), (8, 1)])
        );
        // n = 3: the (n−1)^{n−3} slot vanishes.
        assert_eq!(
            family_spectrum(FamilyId::KKOdot { n: 3 }, l).unwrap(),
            ints(&[(0, 1), (1, 1), (3, 1), (4, 1)])
        );
        assert_eq!(
            family_spectrum(FamilyId::KKDot { n: 3 }, l).unwrap(),
            ints(&[(0, 1), (1, 1), (3, 1), (4, 2), (6, 1)])
        );
        assert_eq!(
            family_spectrum(FamilyId::MatchJoinComplete { a: 2, b: 2 }, nl).unwrap(),
            spec(&[
                (int(0), 1),
                (frac(2, 3), 1),
                (frac(4, 3), 2),
                (frac(6, 5), 1),
                (frac(22, 15), 1)
            ])
        );
        assert!(matches!(
            family_spectrum(FamilyId::KKOdot { n: 4 }, nl),
            Err(ClosedFormError::Unsupported { .. })
        ));
        assert!(family_spectrum(FamilyId::KKOdot { n: 2 }, l).is_err());
    }

    #[test]
    fn routes_agree_on_small_instances() {
        for n in 3..=12 {
            for id in [FamilyId::KKOdot { n }, FamilyId::KKDot { n }] {
                assert_eq!(
                    family_spectrum(id, MatrixKind::Laplacian).unwrap(),
                    composition_spectrum(id, MatrixKind::Laplacian).unwrap()
                );
            }
        }
        for a in 2..=6 {
            for b in 2..=6 {
                for id in [FamilyId::MatchJoinComplete { a, b }, FamilyId::MatchJoinEmpty { a, b }] {
                    assert_eq!(
                        family_spectrum(id, MatrixKind::NormalizedLaplacian).unwrap(),
                        composition_spectrum(id, MatrixKind::NormalizedLaplacian).unwrap(),
                        "{id}"
                    );
                }
            }
        }
    }

    #[test]
    fn display() {
        let s = spec(&[(int(0), 1), (frac(4, 3), 2)]);
        assert_eq!(s.to_string(), "{0, 4/3^2}");
    }
}
