//! Constructors for the explicit low-dimensional examples and parametrized
//! families: the Heisenberg symplectic family, the four-dimensional
//! filiform algebra, the six-dimensional two-parameter symplectic family,
//! the complex and hypercomplex two-step model spaces, and their named
//! curves. Expected soliton constants are attached where known so test
//! harnesses can assert them.

use nalgebra::{DMatrix, DVector};

use crate::algebra::Bracket;
use crate::structures::StructureTensor;
use crate::{Error, Result};

/// Tolerance for the normalization constraints the constructors enforce.
const NORM_TOL: f64 = 1e-9;

/// Expected minimality data (soliton constant and derivation part) for a
/// catalog entry, stated for the entry's exact normalization.
#[derive(Clone, Debug)]
pub struct ExpectedCertificate {
    pub c: f64,
    pub derivation: DMatrix<f64>,
}

/// A catalog bracket together with its structure tensor and, when known,
/// the certificate the entry is expected to produce.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub bracket: Bracket,
    pub structure: StructureTensor,
    pub expected: Option<ExpectedCertificate>,
}

/// The antidiagonal almost complex structure paired with the standard
/// symplectic form on R^{2n}: J e_k = e_{2n+1-k} for k <= n and
/// J e_k = -e_{2n+1-k} for k > n (1-based).
pub fn antidiagonal_j(dim: usize) -> DMatrix<f64> {
    assert!(dim % 2 == 0, "antidiagonal J needs even dimension");
    let n = dim / 2;
    let mut j = DMatrix::zeros(dim, dim);
    for k in 0..n {
        j[(dim - 1 - k, k)] = 1.0;
        j[(k, dim - 1 - k)] = -1.0;
    }
    j
}

/// Block rotation J = diag(R, R, R) on R^4 + R^2, R the quarter turn.
pub fn complex_block_j() -> DMatrix<f64> {
    let mut j = DMatrix::zeros(6, 6);
    for b in 0..3 {
        j[(2 * b + 1, 2 * b)] = 1.0;
        j[(2 * b, 2 * b + 1)] = -1.0;
    }
    j
}

fn quaternion_block(i: usize) -> DMatrix<f64> {
    // the standard left multiplications by i, j, k on R^4
    match i {
        0 => DMatrix::from_row_slice(4, 4, &[
            0.0, -1.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, -1.0,
            0.0, 0.0, 1.0, 0.0,
        ]),
        1 => DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, -1.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            1.0, 0.0, 0.0, 0.0,
            0.0, -1.0, 0.0, 0.0,
        ]),
        _ => DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 0.0, -1.0,
            0.0, 0.0, -1.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            1.0, 0.0, 0.0, 0.0,
        ]),
    }
}

/// The hypercomplex triple acting blockwise on R^4 + R^4 (or on a single
/// R^4 when `dim == 4`).
pub fn quaternion_triple(dim: usize) -> [DMatrix<f64>; 3] {
    assert!(dim % 4 == 0, "quaternion triple needs dimension divisible by 4");
    let blocks = dim / 4;
    let mut out = [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)];
    for (idx, m) in out.iter_mut().enumerate() {
        let small = quaternion_block(idx);
        for b in 0..blocks {
            m.view_mut((4 * b, 4 * b), (4, 4)).copy_from(&small);
        }
    }
    out
}

/// Heisenberg bracket mu(e1, e2) = e3 on R^{2n} with the standard symplectic
/// structure. Expected certificate: c = -5/4 for n = 2 and c = -3/4 beyond.
pub fn heisenberg_symplectic(n: usize) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(Error::DomainError("heisenberg family needs n >= 2".into()));
    }
    let dim = 2 * n;
    let bracket = Bracket::from_terms(dim, &[(0, 1, 2, 1.0)])?;
    let structure = StructureTensor::Symplectic(antidiagonal_j(dim));
    let mut d = DVector::zeros(dim);
    let (c, base) = if n == 2 {
        (-1.25, vec![4.0, 3.0, 7.0, 6.0])
    } else if n == 3 {
        (-0.75, vec![2.0, 2.0, 4.0, 2.0, 4.0, 4.0])
    } else {
        let mut v = vec![3.0; dim];
        v[0] = 2.0;
        v[1] = 2.0;
        v[2] = 4.0;
        v[dim - 3] = 2.0;
        v[dim - 2] = 4.0;
        v[dim - 1] = 4.0;
        (-0.75, v)
    };
    for (i, x) in base.iter().enumerate() {
        d[i] = x * 0.25;
    }
    Ok(CatalogEntry {
        bracket,
        structure,
        expected: Some(ExpectedCertificate { c, derivation: DMatrix::from_diagonal(&d) }),
    })
}

/// The three-dimensional Heisenberg algebra with no structure, the smallest
/// extension example: certificate (-3/2, diag(1, 1, 2)).
pub fn heisenberg3() -> CatalogEntry {
    let bracket = Bracket::from_terms(3, &[(0, 1, 2, 1.0)]).expect("static terms");
    CatalogEntry {
        bracket,
        structure: StructureTensor::None,
        expected: Some(ExpectedCertificate {
            c: -1.5,
            derivation: DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 2.0])),
        }),
    }
}

/// The filiform bracket mu(e1,e2) = e3, mu(e1,e3) = e4 with the standard
/// symplectic structure; certificate (-5/4, diag(1,2,3,4)/2).
pub fn filiform4_symplectic() -> CatalogEntry {
    let bracket =
        Bracket::from_terms(4, &[(0, 1, 2, 1.0), (0, 2, 3, 1.0)]).expect("static terms");
    CatalogEntry {
        bracket,
        structure: StructureTensor::Symplectic(antidiagonal_j(4)),
        expected: Some(ExpectedCertificate {
            c: -1.25,
            derivation: DMatrix::from_diagonal(&DVector::from_vec(vec![0.5, 1.0, 1.5, 2.0])),
        }),
    }
}

/// Six-dimensional two-step bracket mu(e1,e2) = a e4, mu(e1,e3) = b e5,
/// mu(e2,e3) = c e6 with the standard symplectic structure. The parameters
/// must satisfy a^2 + b^2 + c^2 = 2 (scal = -1); the expected certificate is
/// attached when the form is closed (a - b + c = 0).
pub fn symplectic_abc(a: f64, b: f64, c: f64) -> Result<CatalogEntry> {
    let norm = a * a + b * b + c * c;
    if (norm - 2.0).abs() > NORM_TOL {
        return Err(Error::DomainError(format!(
            "a^2+b^2+c^2 must be 2, got {norm:.12}"
        )));
    }
    let bracket = Bracket::from_terms(6, &[(0, 1, 3, a), (0, 2, 4, b), (1, 2, 5, c)])?;
    let structure = StructureTensor::Symplectic(antidiagonal_j(6));
    let expected = if (a - b + c).abs() < NORM_TOL {
        let w = 0.5 * norm;
        Some(ExpectedCertificate {
            c: -0.75 * norm,
            derivation: DMatrix::from_diagonal(&DVector::from_vec(vec![
                w,
                w,
                w,
                2.0 * w,
                2.0 * w,
                2.0 * w,
            ])),
        })
    } else {
        None
    };
    Ok(CatalogEntry { bracket, structure, expected })
}

/// Point of the closed symplectic curve (a,b,c) = (s, s+t, t) at parameter
/// t in [0, 1/sqrt(3)], with s the positive root of s^2 + st + t^2 = 1.
pub fn symplectic_abc_curve(t: f64) -> Result<CatalogEntry> {
    let max_t = 1.0 / 3.0f64.sqrt();
    if !(0.0..=max_t + 1e-12).contains(&t) {
        return Err(Error::DomainError(format!(
            "curve parameter t must lie in [0, {max_t:.6}]"
        )));
    }
    let s = 0.5 * (-t + (4.0 - 3.0 * t * t).sqrt());
    symplectic_abc(s, s + t, t)
}

/// Raw two-step bracket on R^4 + R^2 from the six coefficient pairs of
/// mu(X1,X2), mu(X1,X3), mu(X1,X4), mu(X2,X3), mu(X2,X4), mu(X3,X4).
pub fn complex_w_bracket(pairs: &[[f64; 2]; 6]) -> Bracket {
    let index = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut terms = Vec::new();
    for (p, &(i, j)) in index.iter().enumerate() {
        for z in 0..2 {
            if pairs[p][z] != 0.0 {
                terms.push((i, j, 4 + z, pairs[p][z]));
            }
        }
    }
    Bracket::from_terms(6, &terms).expect("indices are canonical")
}

fn w6_norm(pairs: &[[f64; 2]; 6]) -> f64 {
    pairs.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum()
}

/// Two-step complex model point on R^4 + R^2 from the coefficient pairs
/// (A, B, C, D, E, F), paired with the block rotation J. The data must be
/// normalized (sum of squares = 2) and integrable (E = B + JD + JC).
pub fn complex_family(pairs: &[[f64; 2]; 6]) -> Result<CatalogEntry> {
    let norm = w6_norm(pairs);
    if (norm - 2.0).abs() > NORM_TOL {
        return Err(Error::DomainError(format!(
            "coefficient norm must be 2, got {norm:.12}"
        )));
    }
    let rot = |v: [f64; 2]| [-v[1], v[0]];
    let [_a, b, c, d, e, _f] = *pairs;
    let jd = rot(d);
    let jc = rot(c);
    let defect = ((e[0] - b[0] - jd[0] - jc[0]).powi(2)
        + (e[1] - b[1] - jd[1] - jc[1]).powi(2))
    .sqrt();
    if defect > NORM_TOL {
        return Err(Error::DomainError(format!(
            "coefficients are not integrable: defect {defect:.3e}"
        )));
    }
    Ok(CatalogEntry {
        bracket: complex_w_bracket(pairs),
        structure: StructureTensor::Complex(complex_block_j()),
        expected: None,
    })
}

/// Abelian complex curve A = (s,t), F = (-s,t), rest zero, s^2 + t^2 = 1.
pub fn complex_abelian_curve(s: f64, t: f64) -> Result<CatalogEntry> {
    if (s * s + t * t - 1.0).abs() > NORM_TOL {
        return Err(Error::DomainError("curve needs s^2 + t^2 = 1".into()));
    }
    let zero = [0.0, 0.0];
    complex_family(&[[s, t], zero, zero, zero, zero, [-s, t]])
}

/// Abelian complex curve on the Iwasawa background: B = C = -D = E = (1/2, 0)
/// with A = (s,t), F = (-s,t) and s^2 + t^2 = 1/2.
pub fn complex_iwasawa_curve(s: f64, t: f64) -> Result<CatalogEntry> {
    if (s * s + t * t - 0.5).abs() > NORM_TOL {
        return Err(Error::DomainError("curve needs s^2 + t^2 = 1/2".into()));
    }
    let half = [0.5, 0.0];
    complex_family(&[[s, t], half, half, [-0.5, 0.0], half, [-s, t]])
}

/// Modified H-type abelian curve A = (s,0) = -F, B = (0,t) = E, C = D = 0,
/// s^2 + t^2 = 1.
pub fn complex_htype_curve(s: f64, t: f64) -> Result<CatalogEntry> {
    if (s * s + t * t - 1.0).abs() > NORM_TOL {
        return Err(Error::DomainError("curve needs s^2 + t^2 = 1".into()));
    }
    let zero = [0.0, 0.0];
    complex_family(&[[s, 0.0], [0.0, t], zero, zero, [0.0, t], [-s, 0.0]])
}

/// Raw two-step bracket on R^4 + R^4 from the six coefficient vectors of
/// mu(X1,X2), mu(X1,X3), mu(X1,X4), mu(X2,X3), mu(X2,X4), mu(X3,X4).
pub fn hypercomplex_w_bracket(vecs: &[[f64; 4]; 6]) -> Bracket {
    let index = [(0usize, 1usize), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut terms = Vec::new();
    for (p, &(i, j)) in index.iter().enumerate() {
        for z in 0..4 {
            if vecs[p][z] != 0.0 {
                terms.push((i, j, 4 + z, vecs[p][z]));
            }
        }
    }
    Bracket::from_terms(8, &terms).expect("indices are canonical")
}

fn apply4(m: &DMatrix<f64>, v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r] += m[(r, c)] * v[c];
        }
    }
    out
}

fn add4(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn neg4(a: [f64; 4]) -> [f64; 4] {
    [-a[0], -a[1], -a[2], -a[3]]
}

/// Coefficient vectors (A, ..., F) of the integrable hypercomplex point with
/// free data (A, B, C, T): D = -C + T, E = B + J1 T, F = -A + J2 T.
pub fn hypercomplex_coefficients(
    a: [f64; 4],
    b: [f64; 4],
    c: [f64; 4],
    t: [f64; 4],
) -> [[f64; 4]; 6] {
    let j1 = quaternion_block(0);
    let j2 = quaternion_block(1);
    let d = add4(neg4(c), t);
    let e = add4(b, apply4(&j1, t));
    let f = add4(neg4(a), apply4(&j2, t));
    [a, b, c, d, e, f]
}

/// Integrable hypercomplex point on R^4 + R^4 with free data (A, B, C, T),
/// the remaining coefficients filled by the integrability relations and the
/// abelian case being exactly T = 0. The filled coefficients must be
/// normalized (sum of squares = 2).
pub fn hypercomplex_family(
    a: [f64; 4],
    b: [f64; 4],
    c: [f64; 4],
    t: [f64; 4],
) -> Result<CatalogEntry> {
    let vecs = hypercomplex_coefficients(a, b, c, t);
    let norm: f64 = vecs.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>()).sum();
    if (norm - 2.0).abs() > NORM_TOL {
        return Err(Error::DomainError(format!(
            "coefficient norm must be 2, got {norm:.12}"
        )));
    }
    Ok(CatalogEntry {
        bracket: hypercomplex_w_bracket(&vecs),
        structure: StructureTensor::Hypercomplex(quaternion_triple(8)),
        expected: None,
    })
}

/// Abelian hypercomplex family A = (0,r,0,0), B = (0,0,s,0), C = (0,0,0,t),
/// T = 0 with 0 <= r <= s <= t and r^2 + s^2 + t^2 = 2, stored at the
/// normalization scal = -1 (coefficient vectors carry a 1/sqrt(2)).
pub fn hypercomplex_rst(r: f64, s: f64, t: f64) -> Result<CatalogEntry> {
    if !(0.0 <= r && r <= s && s <= t) {
        return Err(Error::DomainError("parameters must satisfy 0 <= r <= s <= t".into()));
    }
    let norm = r * r + s * s + t * t;
    if (norm - 2.0).abs() > NORM_TOL {
        return Err(Error::DomainError(format!(
            "r^2+s^2+t^2 must be 2, got {norm:.12}"
        )));
    }
    let w = 1.0 / 2.0f64.sqrt();
    hypercomplex_family(
        [0.0, r * w, 0.0, 0.0],
        [0.0, 0.0, s * w, 0.0],
        [0.0, 0.0, 0.0, t * w],
        [0.0; 4],
    )
}

/// Non-abelian hypercomplex curve at parameter t in [0, 1/sqrt(3)]:
/// A = (sqrt(1-3t^2), t, 0, 0), B = (0,0,t,0), C = (0,0,0,t),
/// T = (0,0,0,2t).
pub fn hypercomplex_curve(t: f64) -> Result<CatalogEntry> {
    let max_t = 1.0 / 3.0f64.sqrt();
    if !(0.0..=max_t + 1e-12).contains(&t) {
        return Err(Error::DomainError(format!(
            "curve parameter t must lie in [0, {max_t:.6}]"
        )));
    }
    let head = (1.0 - 3.0 * t * t).max(0.0).sqrt();
    hypercomplex_family(
        [head, t, 0.0, 0.0],
        [0.0, 0.0, t, 0.0],
        [0.0, 0.0, 0.0, t],
        [0.0, 0.0, 0.0, 2.0 * t],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{scalar_curvature, validate};
    use crate::curvature::ricci_nilpotent;
    use crate::structures::{check_structure, class_condition_residual};
    use crate::TAU_RANK;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn well_formed(entry: &CatalogEntry) {
        let rep = validate(&entry.bracket, TAU_RANK);
        assert!(rep.jacobi_residual < 1e-12);
        assert!(rep.nilpotency_step.is_some());
        assert!(check_structure(&entry.structure).max() < 1e-12);
        assert!(class_condition_residual(&entry.structure, &entry.bracket) < 1e-12);
    }

    #[test]
    fn all_entries_are_well_formed() {
        well_formed(&heisenberg_symplectic(2).unwrap());
        well_formed(&heisenberg3());
        well_formed(&filiform4_symplectic());
        well_formed(&symplectic_abc(1.0, 1.0, 0.0).unwrap());
        well_formed(&symplectic_abc_curve(0.25).unwrap());
        well_formed(&complex_abelian_curve(0.6, 0.8).unwrap());
        let s = 0.5f64;
        well_formed(&complex_iwasawa_curve(s, (0.5 - s * s).sqrt()).unwrap());
        well_formed(&complex_htype_curve(0.6, 0.8).unwrap());
        well_formed(&hypercomplex_rst(0.5, 0.7, (2.0f64 - 0.25 - 0.49).sqrt()).unwrap());
        well_formed(&hypercomplex_curve(0.4).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let mut draw = || {
                let mut v = [0.0; 4];
                for x in v.iter_mut() {
                    *x = rng.gen_range(-1.0..1.0);
                }
                v
            };
            let (a, b, c, t) = (draw(), draw(), draw(), draw());
            let raw = hypercomplex_coefficients(a, b, c, t);
            let norm: f64 = raw.iter().map(|v| v.iter().map(|x| x * x).sum::<f64>()).sum();
            let s = (2.0 / norm).sqrt();
            let scaled = |v: [f64; 4]| [v[0] * s, v[1] * s, v[2] * s, v[3] * s];
            well_formed(
                &hypercomplex_family(scaled(a), scaled(b), scaled(c), scaled(t)).unwrap(),
            );
        }
    }

    #[test]
    fn heisenberg_form_is_closed_only_in_dimension_four() {
        // the bracket image pairs with X_{2n-2} under omega, which is X2
        // exactly when 2n = 4; beyond that the form is non-closed and the
        // structure enters the theory as a non-integrable one
        for (n, closed) in [(2usize, true), (3, false), (4, false)] {
            let entry = heisenberg_symplectic(n).unwrap();
            let rep = validate(&entry.bracket, TAU_RANK);
            assert!(rep.jacobi_residual < 1e-15);
            assert!(check_structure(&entry.structure).max() < 1e-15);
            let r = class_condition_residual(&entry.structure, &entry.bracket);
            assert_eq!(r < 1e-12, closed, "2n = {}: residual {r}", 2 * n);
        }
    }

    #[test]
    fn normalization_constraints_are_enforced() {
        assert!(matches!(symplectic_abc(1.0, 1.0, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(complex_abelian_curve(1.0, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(hypercomplex_rst(0.5, 0.4, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(hypercomplex_curve(0.8), Err(Error::DomainError(_))));
        assert!(matches!(heisenberg_symplectic(1), Err(Error::DomainError(_))));
    }

    #[test]
    fn catalog_entries_have_unit_scal_where_stated() {
        assert!((scalar_curvature(&symplectic_abc(1.0, 1.0, 0.0).unwrap().bracket) + 1.0).abs() < 1e-12);
        assert!((scalar_curvature(&filiform4_symplectic().bracket) + 1.0).abs() < 1e-12);
        assert!((scalar_curvature(&hypercomplex_curve(0.2).unwrap().bracket) + 1.0).abs() < 1e-12);
        assert!(
            (scalar_curvature(&hypercomplex_rst(0.0, 0.0, 2.0f64.sqrt()).unwrap().bracket) + 1.0)
                .abs()
                < 1e-12
        );
    }

    #[test]
    fn complex_curves_center_ricci_blocks() {
        let (s, t) = (0.6, 0.8);
        let ric = ricci_nilpotent(&complex_abelian_curve(s, t).unwrap().bracket);
        assert!((ric[(4, 4)] - s * s).abs() < 1e-14);
        assert!((ric[(5, 5)] - t * t).abs() < 1e-14);
        assert!(ric[(4, 5)].abs() < 1e-14);

        let (s, t) = (0.3, (0.5f64 - 0.09).sqrt());
        let ric = ricci_nilpotent(&complex_iwasawa_curve(s, t).unwrap().bracket);
        assert!((ric[(4, 4)] - (s * s + 0.5)).abs() < 1e-14);
        assert!((ric[(5, 5)] - t * t).abs() < 1e-14);

        let (s, t) = (0.28, (1.0f64 - 0.28 * 0.28).sqrt());
        let ric = ricci_nilpotent(&complex_htype_curve(s, t).unwrap().bracket);
        assert!((ric[(4, 4)] - s * s).abs() < 1e-14);
        assert!((ric[(5, 5)] - t * t).abs() < 1e-14);
    }

    #[test]
    fn hypercomplex_center_ricci_blocks() {
        let (r, s, t) = (0.4, 0.6, (2.0f64 - 0.16 - 0.36).sqrt());
        let ric = ricci_nilpotent(&hypercomplex_rst(r, s, t).unwrap().bracket);
        for (i, v) in [(4, 0.0), (5, r * r), (6, s * s), (7, t * t)] {
            assert!((ric[(i, i)] - 0.5 * v).abs() < 1e-14);
        }

        let t = 0.35;
        let ric = ricci_nilpotent(&hypercomplex_curve(t).unwrap().bracket);
        assert!((ric[(4, 4)] - (1.0 - 3.0 * t * t)).abs() < 1e-14);
        for i in 5..8 {
            assert!((ric[(i, i)] - t * t).abs() < 1e-14);
        }
    }

    #[test]
    fn modified_htype_j_square_identity() {
        // on the curve A = -F, E = B, D = -C with orthogonal coefficient
        // vectors, j(Z)^2 = -1/2 (<Z,Z1>^2 |v1|^2 + <Z,Z2>^2 |v2|^2) I
        let (s, t) = (0.6, 0.8);
        let entry = complex_htype_curve(s, t).unwrap();
        let v1_sq = 2.0 * s * s;
        let v2_sq = 2.0 * t * t;
        for (zi, expected) in [(4, 0.5 * v1_sq), (5, 0.5 * v2_sq)] {
            let z = DVector::from_fn(6, |r, _| if r == zi { 1.0 } else { 0.0 });
            let j = crate::algebra::j_map(&entry.bracket, 4, &z).unwrap();
            let jsq = &j * &j;
            assert!((jsq + DMatrix::identity(4, 4) * expected).amax() < 1e-14);
        }
    }
}
