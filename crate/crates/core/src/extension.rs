//! Rank-one metric solvable extension of a certified minimal nilpotent
//! metric Lie algebra, and the Einstein verification of the result through
//! the general curvature engine.

use nalgebra::DMatrix;

use crate::algebra::{Bracket, BracketTerm};
use crate::curvature::{ricci_general, MetricSolvableAlgebra};
use crate::minimality::MinimalityCertificate;
use crate::structures::StructureKind;
use crate::{Error, Result, TAU_MIN};

/// Builds s = R H + n with [H, X] = D' X on n, D' = D / sqrt(tr D), and H
/// the added orthonormal basis vector. Requires a certificate with no
/// structure, residual below the minimality threshold, a nonzero derivation
/// part and positive trace.
pub fn rank_one_extension(
    b: &Bracket,
    cert: &MinimalityCertificate,
) -> Result<MetricSolvableAlgebra> {
    if cert.structure_kind != StructureKind::None {
        return Err(Error::WrongKind);
    }
    if cert.residual > TAU_MIN {
        return Err(Error::NotMinimal(cert.residual));
    }
    let d = &cert.derivation;
    let n = b.dim();
    if d.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "derivation is {}x{} against dimension {}",
            d.nrows(),
            d.ncols(),
            n
        )));
    }
    if d.amax() < 1e-12 {
        return Err(Error::AbelianDerivation);
    }
    let trace = d.trace();
    if trace <= 0.0 {
        return Err(Error::NonPositiveTrace);
    }
    if cert.c >= 0.0 {
        return Err(Error::NotMinimal(cert.residual));
    }
    let d_prime = d / trace.sqrt();
    extend_by(b, &d_prime, cert.residual)
}

/// Assembles the extension bracket for an explicit derivation `d_prime`.
/// Exposed so perturbed (non-Einstein) extensions can be built in tests and
/// experiments.
pub fn extend_by(
    b: &Bracket,
    d_prime: &DMatrix<f64>,
    residual_budget: f64,
) -> Result<MetricSolvableAlgebra> {
    let n = b.dim();
    let mut terms: Vec<BracketTerm> = b.terms().to_vec();
    for col in 0..n {
        for row in 0..n {
            let v = d_prime[(row, col)];
            if v != 0.0 {
                // [e_col, H] = -D' e_col with H the last basis vector
                terms.push(BracketTerm { i: col, j: n, k: row, c: -v });
            }
        }
    }
    let bracket = Bracket::new(n + 1, terms)?;
    // the Jacobi defect of the extension scales with the certificate residual
    MetricSolvableAlgebra::new(bracket, (100.0 * residual_budget).max(1e-8))
}

/// Einstein check: Ric = (scal / dim) I within `tol` in the max norm.
/// Returns the verdict and the Einstein constant scal / dim.
pub fn einstein_check(s: &MetricSolvableAlgebra, tol: f64) -> (bool, f64) {
    let ric = ricci_general(s);
    let n = s.dim();
    let constant = ric.trace() / n as f64;
    let deviation = (&ric - DMatrix::identity(n, n) * constant).amax();
    (deviation < tol, constant)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::minimality::certify;
    use crate::structures::StructureTensor;

    #[test]
    fn heisenberg3_extension_is_einstein() {
        let entry = catalog::heisenberg3();
        let cert = certify(&entry.bracket, &StructureTensor::None).unwrap();
        let ext = rank_one_extension(&entry.bracket, &cert).unwrap();
        assert_eq!(ext.dim(), 4);
        let (einstein, constant) = einstein_check(&ext, 1e-9);
        assert!(einstein);
        assert!((constant - cert.c).abs() < 1e-9);
        assert!((constant + 1.5).abs() < 1e-9);
    }

    #[test]
    fn filiform_extension_is_einstein() {
        let b = catalog::filiform4_symplectic().bracket;
        let cert = certify(&b, &StructureTensor::None).unwrap();
        let ext = rank_one_extension(&b, &cert).unwrap();
        let (einstein, constant) = einstein_check(&ext, 1e-9);
        assert!(einstein);
        assert!((constant - cert.c).abs() < 1e-9);
        // D' = D / sqrt(5) here
        let expected = &cert.derivation / cert.derivation.trace().sqrt();
        let d = ext.bracket().dense();
        for row in 0..4 {
            assert!((d.get(4, row, row) - expected[(row, row)]).abs() < 1e-12);
        }
    }

    #[test]
    fn ricci_of_extension_in_the_new_direction() {
        // Ric(H, H) = -tr(D'^2)
        let entry = catalog::heisenberg3();
        let cert = certify(&entry.bracket, &StructureTensor::None).unwrap();
        let ext = rank_one_extension(&entry.bracket, &cert).unwrap();
        let ric = ricci_general(&ext);
        let d_prime = &cert.derivation / cert.derivation.trace().sqrt();
        let expected = -(&d_prime * &d_prime).trace();
        assert!((ric[(3, 3)] - expected).abs() < 1e-10);
    }

    #[test]
    fn doubled_derivation_breaks_einstein() {
        let entry = catalog::heisenberg3();
        let cert = certify(&entry.bracket, &StructureTensor::None).unwrap();
        let d_prime = &cert.derivation / cert.derivation.trace().sqrt();
        let ext = extend_by(&entry.bracket, &(&d_prime * 2.0), cert.residual).unwrap();
        let (einstein, _) = einstein_check(&ext, 1e-9);
        assert!(!einstein);
    }

    #[test]
    fn abelian_bracket_is_rejected() {
        let b = Bracket::zero(3);
        let cert = certify(&b, &StructureTensor::None).unwrap();
        assert!(matches!(
            rank_one_extension(&b, &cert),
            Err(Error::AbelianDerivation)
        ));
    }

    #[test]
    fn structure_certificates_are_rejected() {
        let entry = catalog::filiform4_symplectic();
        let cert = certify(&entry.bracket, &entry.structure).unwrap();
        assert!(matches!(
            rank_one_extension(&entry.bracket, &cert),
            Err(Error::WrongKind)
        ));
    }

    #[test]
    fn extension_is_standard() {
        // derived algebra = n, orthogonal complement R H abelian
        let entry = catalog::heisenberg3();
        let cert = certify(&entry.bracket, &StructureTensor::None).unwrap();
        let ext = rank_one_extension(&entry.bracket, &cert).unwrap();
        let d = ext.bracket().dense();
        // image of the bracket lies inside the first n coordinates
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(d.get(i, j, 3), 0.0);
            }
        }
        // and H really acts: [H, e3] = e3 * (2 / sqrt(tr D)) with trD = 4
        assert!((d.get(3, 2, 2) - 1.0).abs() < 1e-12);
    }
}
