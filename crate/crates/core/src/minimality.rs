//! Certification of the minimality condition: the invariant Ricci operator
//! lies in R I + Der(mu). A least-squares projection produces the soliton
//! constant, the derivation part and the Frobenius residual; the derivation
//! spectrum is matched to a coprime positive-integer type.

use nalgebra::{DMatrix, DVector};

use crate::algebra::{derivation_space, scalar_curvature, Bracket};
use crate::curvature::ricci_nilpotent;
use crate::linalg;
use crate::structures::{invariant_ricci, StructureKind, StructureTensor};
use crate::{Error, Result, TAU_MIN, TAU_RANK, TAU_SPEC};

/// Witness (or refutation, through the residual) of the minimality of the
/// fixed metric for a bracket with a structure.
#[derive(Clone, Debug)]
pub struct MinimalityCertificate {
    /// soliton constant: coefficient of the identity
    pub c: f64,
    /// projection of the invariant Ricci operator onto Der(mu)
    pub derivation: DMatrix<f64>,
    /// Frobenius distance of the invariant Ricci operator to R I + Der(mu)
    pub residual: f64,
    /// coprime positive-integer spectrum of the derivation, when one exists
    pub eigenvalue_type: Option<Vec<u64>>,
    pub structure_kind: StructureKind,
}

impl MinimalityCertificate {
    pub fn is_minimal(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Least-squares solve of min over (c, D in Der(mu)) of
/// ||Ric^gamma - c I - D||_F, assembled on the identity plus an orthonormal
/// derivation basis.
pub fn certify(b: &Bracket, gamma: &StructureTensor) -> Result<MinimalityCertificate> {
    gamma.check_dim(b.dim())?;
    let n = b.dim();
    let ric = ricci_nilpotent(b);
    let ric_gamma = invariant_ricci(&ric, gamma);
    let ders = derivation_space(b, TAU_RANK);

    // columns: vec(I), vec(E_1), ..., vec(E_d)
    let cols = ders.len() + 1;
    let mut m = DMatrix::zeros(n * n, cols);
    for p in 0..n {
        m[(p * n + p, 0)] = 1.0;
    }
    for (idx, e) in ders.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                m[(p * n + q, idx + 1)] = e[(p, q)];
            }
        }
    }
    let rhs = DVector::from_fn(n * n, |r, _| ric_gamma[(r / n, r % n)]);
    let svd = m.clone().svd(true, true);
    let x = svd.solve(&rhs, 1e-13).map_err(|e| Error::Parse(e.to_string()))?;
    let c = x[0];
    let mut derivation = DMatrix::zeros(n, n);
    for (idx, e) in ders.iter().enumerate() {
        derivation += e * x[idx + 1];
    }
    let residual = (&ric_gamma - DMatrix::identity(n, n) * c - &derivation).norm();
    let eigenvalue_type = eigenvalue_type(&derivation, 1e-6, 60);
    Ok(MinimalityCertificate {
        c,
        derivation,
        residual,
        eigenvalue_type,
        structure_kind: gamma.kind(),
    })
}

/// Coprime positive-integer spectrum of a (symmetrized) derivation: searches
/// scalings m / lambda_min for m = 1..=max_multiple such that every scaled
/// eigenvalue is within `tol` (relative) of a positive integer. `None` when
/// no such scaling exists or some eigenvalue is not positive.
pub fn eigenvalue_type(d: &DMatrix<f64>, tol: f64, max_multiple: u64) -> Option<Vec<u64>> {
    let eigs = linalg::symmetric_eigenvalues(d);
    if eigs.is_empty() {
        return None;
    }
    let max_abs = eigs.iter().fold(0.0f64, |m, &e| m.max(e.abs()));
    if max_abs == 0.0 {
        return None;
    }
    let min = eigs[0];
    if min <= tol * max_abs {
        return None; // nonpositive (or vanishing) eigenvalue
    }
    for m in 1..=max_multiple {
        let s = m as f64 / min;
        let mut ints = Vec::with_capacity(eigs.len());
        let mut ok = true;
        for &e in &eigs {
            let scaled = s * e;
            let rounded = scaled.round();
            if rounded < 1.0 || (scaled - rounded).abs() > tol * scaled.abs().max(1.0) {
                ok = false;
                break;
            }
            ints.push(rounded as u64);
        }
        if ok {
            let g = ints.iter().fold(0u64, |acc, &v| gcd(acc, v));
            return Some(ints.iter().map(|v| v / g).collect());
        }
    }
    None
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Rescales a bracket so that scal = -1.
pub fn normalize_scal(b: &Bracket) -> Result<Bracket> {
    let scal = scalar_curvature(b);
    if scal == 0.0 || !scal.is_finite() {
        return Err(Error::ZeroBracket);
    }
    Ok(b.scaled(1.0 / (-scal).sqrt()))
}

/// Verdict of the spectra comparison of two certified minimal metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// the sorted Ricci spectra differ: the structures are not isomorphic
    Distinct,
    /// equal spectra or uncertified inputs prove nothing
    Inconclusive,
}

impl Comparison {
    pub fn as_str(&self) -> &'static str {
        match self {
            Comparison::Distinct => "distinct",
            Comparison::Inconclusive => "inconclusive",
        }
    }
}

/// Compares two certified minimal metrics by the sorted spectra of their
/// full Ricci operators after rescaling both brackets to scal = -1.
/// `Distinct` certifies non-isomorphism; equality never certifies anything.
pub fn compare(
    b1: &Bracket,
    cert1: &MinimalityCertificate,
    b2: &Bracket,
    cert2: &MinimalityCertificate,
    tau_min: f64,
    tau_spec: f64,
) -> Result<Comparison> {
    if cert1.residual > tau_min || cert2.residual > tau_min {
        return Ok(Comparison::Inconclusive);
    }
    if b1.dim() != b2.dim() {
        return Ok(Comparison::Distinct);
    }
    let s1 = ricci_spectrum(&normalize_scal(b1)?);
    let s2 = ricci_spectrum(&normalize_scal(b2)?);
    let gap = s1
        .iter()
        .zip(s2.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if gap > tau_spec {
        Ok(Comparison::Distinct)
    } else {
        Ok(Comparison::Inconclusive)
    }
}

/// Sorted spectrum of the full Ricci operator.
pub fn ricci_spectrum(b: &Bracket) -> Vec<f64> {
    linalg::symmetric_eigenvalues(&ricci_nilpotent(b))
}

/// Convenience wrapper using the default thresholds.
pub fn compare_default(
    b1: &Bracket,
    cert1: &MinimalityCertificate,
    b2: &Bracket,
    cert2: &MinimalityCertificate,
) -> Result<Comparison> {
    compare(b1, cert1, b2, cert2, TAU_MIN, TAU_SPEC)
}
