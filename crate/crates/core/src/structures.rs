//! Geometric structure tensors, their compatibility residuals, the
//! integrability predicates against a bracket, and the projection of the
//! Ricci operator onto the symmetric maps preserving the structure.

use nalgebra::{DMatrix, DVector};

use crate::algebra::Bracket;
use crate::{Error, Result, TAU_STRUCT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructureKind {
    None,
    Symplectic,
    Complex,
    Hypercomplex,
}

impl StructureKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StructureKind::None => "none",
            StructureKind::Symplectic => "symplectic",
            StructureKind::Complex => "complex",
            StructureKind::Hypercomplex => "hypercomplex",
        }
    }
}

/// A structure tensor on the fixed metric vector space. The symplectic form
/// is stored through its metric partner J (omega = <., J.>), so a single
/// representation serves all three classes.
#[derive(Clone, Debug)]
pub enum StructureTensor {
    None,
    Symplectic(DMatrix<f64>),
    Complex(DMatrix<f64>),
    Hypercomplex([DMatrix<f64>; 3]),
}

impl StructureTensor {
    pub fn kind(&self) -> StructureKind {
        match self {
            StructureTensor::None => StructureKind::None,
            StructureTensor::Symplectic(_) => StructureKind::Symplectic,
            StructureTensor::Complex(_) => StructureKind::Complex,
            StructureTensor::Hypercomplex(_) => StructureKind::Hypercomplex,
        }
    }

    /// Dimension the tensor acts on; `None` for the empty structure.
    pub fn dim(&self) -> Option<usize> {
        match self {
            StructureTensor::None => None,
            StructureTensor::Symplectic(j) | StructureTensor::Complex(j) => Some(j.nrows()),
            StructureTensor::Hypercomplex([j1, _, _]) => Some(j1.nrows()),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != n => Err(Error::DimensionMismatch(format!(
                "structure acts on dimension {d} but the bracket has dimension {n}"
            ))),
            _ => Ok(()),
        }
    }
}

/// Residuals of the defining identities of a structure tensor.
#[derive(Clone, Copy, Debug, Default)]
pub struct StructureResiduals {
    /// max-norm of J^2 + I over the involved J's
    pub almost_complex: f64,
    /// max-norm of J^T J - I over the involved J's
    pub orthogonality: f64,
    /// max-norm of J1 J2 - J3 and J2 J1 + J3 (hypercomplex only)
    pub quaternion: f64,
}

impl StructureResiduals {
    pub fn max(&self) -> f64 {
        self.almost_complex.max(self.orthogonality).max(self.quaternion)
    }
}

fn square_defect(j: &DMatrix<f64>) -> f64 {
    let n = j.nrows();
    (j * j + DMatrix::identity(n, n)).amax()
}

fn orthogonality_defect(j: &DMatrix<f64>) -> f64 {
    let n = j.nrows();
    (j.transpose() * j - DMatrix::identity(n, n)).amax()
}

/// Residuals of J^2 = -I, orthogonality, and the quaternion identities.
pub fn check_structure(gamma: &StructureTensor) -> StructureResiduals {
    match gamma {
        StructureTensor::None => StructureResiduals::default(),
        StructureTensor::Symplectic(j) | StructureTensor::Complex(j) => StructureResiduals {
            almost_complex: square_defect(j),
            orthogonality: orthogonality_defect(j),
            quaternion: 0.0,
        },
        StructureTensor::Hypercomplex([j1, j2, j3]) => {
            let almost = square_defect(j1).max(square_defect(j2)).max(square_defect(j3));
            let orth = orthogonality_defect(j1)
                .max(orthogonality_defect(j2))
                .max(orthogonality_defect(j3));
            let quat = (j1 * j2 - j3).amax().max((j2 * j1 + j3).amax());
            StructureResiduals { almost_complex: almost, orthogonality: orth, quaternion: quat }
        }
    }
}

/// Closedness of the symplectic form against a bracket:
/// omega(mu(X,Y),Z) + omega(mu(Y,Z),X) + omega(mu(Z,X),Y) = 0 over basis
/// triples, with omega(X,Y) = <X, JY>.
pub fn is_closed(gamma: &StructureTensor, b: &Bracket) -> Result<(bool, f64)> {
    let j = match gamma {
        StructureTensor::Symplectic(j) => j,
        _ => return Err(Error::WrongKind),
    };
    gamma.check_dim(b.dim())?;
    let r = closedness_residual(j, b);
    Ok((r < TAU_STRUCT, r))
}

pub(crate) fn closedness_residual(j: &DMatrix<f64>, b: &Bracket) -> f64 {
    let n = b.dim();
    let d = b.dense();
    let mut res = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            let mu_pq = d.basis_pair(p, q);
            for r in (q + 1)..n {
                let mu_qr = d.basis_pair(q, r);
                let mu_rp = d.basis_pair(r, p);
                // omega(v, e_m) = <v, J e_m> = v . (column m of J)
                let s = mu_pq.dot(&j.column(r).into_owned())
                    + mu_qr.dot(&j.column(p).into_owned())
                    + mu_rp.dot(&j.column(q).into_owned());
                res = res.max(s.abs());
            }
        }
    }
    res
}

/// Integrability of an almost complex structure J against a bracket:
/// mu(JX,JY) = mu(X,Y) + J mu(JX,Y) + J mu(X,JY) over basis pairs.
pub fn is_integrable(j: &DMatrix<f64>, b: &Bracket) -> Result<(bool, f64)> {
    let n = b.dim();
    if j.nrows() != n || j.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "J is {}x{} against dimension {}",
            j.nrows(),
            j.ncols(),
            n
        )));
    }
    if square_defect(j) > 1e-12 {
        return Err(Error::BadAlmostComplex);
    }
    let r = integrability_residual(j, b);
    Ok((r < TAU_STRUCT, r))
}

pub(crate) fn integrability_residual(j: &DMatrix<f64>, b: &Bracket) -> f64 {
    let n = b.dim();
    let d = b.dense();
    let mut res = 0.0f64;
    for p in 0..n {
        let jp = j.column(p).into_owned();
        let ep = basis_vec(n, p);
        for q in (p + 1)..n {
            let jq = j.column(q).into_owned();
            let eq = basis_vec(n, q);
            let defect = d.apply(&jp, &jq)
                - d.basis_pair(p, q)
                - j * d.apply(&jp, &eq)
                - j * d.apply(&ep, &jq);
            res = res.max(defect.amax());
        }
    }
    res
}

fn abelian_residual(j: &DMatrix<f64>, b: &Bracket) -> f64 {
    let n = b.dim();
    let d = b.dense();
    let mut res = 0.0f64;
    for p in 0..n {
        let jp = j.column(p).into_owned();
        for q in (p + 1)..n {
            let jq = j.column(q).into_owned();
            let defect = d.apply(&jp, &jq) - d.basis_pair(p, q);
            res = res.max(defect.amax());
        }
    }
    res
}

fn bi_invariant_residual(j: &DMatrix<f64>, b: &Bracket) -> f64 {
    let n = b.dim();
    let d = b.dense();
    let mut res = 0.0f64;
    for p in 0..n {
        let jp = j.column(p).into_owned();
        for q in 0..n {
            let eq = basis_vec(n, q);
            let defect = d.apply(&jp, &eq) - j * d.basis_pair(p, q);
            res = res.max(defect.amax());
        }
    }
    res
}

fn basis_vec(n: usize, i: usize) -> DVector<f64> {
    DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

/// One structure predicate: whether the residual clears the tolerance, and
/// the residual itself.
#[derive(Clone, Copy, Debug)]
pub struct PredicateFlag {
    pub holds: bool,
    pub residual: f64,
}

impl PredicateFlag {
    fn new(residual: f64, tol: f64) -> Self {
        Self { holds: residual < tol, residual }
    }
}

/// All predicates applicable to a structure kind, with their residuals.
#[derive(Clone, Debug, Default)]
pub struct StructureClassification {
    pub integrable: Option<PredicateFlag>,
    pub abelian: Option<PredicateFlag>,
    pub bi_invariant: Option<PredicateFlag>,
    pub closed: Option<PredicateFlag>,
}

/// Evaluates every predicate that makes sense for the kind of `gamma`
/// against `b`. Flags are residual comparisons at `tol`.
pub fn classify(gamma: &StructureTensor, b: &Bracket, tol: f64) -> Result<StructureClassification> {
    gamma.check_dim(b.dim())?;
    let mut out = StructureClassification::default();
    match gamma {
        StructureTensor::None => {}
        StructureTensor::Symplectic(j) => {
            out.closed = Some(PredicateFlag::new(closedness_residual(j, b), tol));
            out.integrable = Some(PredicateFlag::new(integrability_residual(j, b), tol));
            out.abelian = Some(PredicateFlag::new(abelian_residual(j, b), tol));
            out.bi_invariant = Some(PredicateFlag::new(bi_invariant_residual(j, b), tol));
        }
        StructureTensor::Complex(j) => {
            out.integrable = Some(PredicateFlag::new(integrability_residual(j, b), tol));
            out.abelian = Some(PredicateFlag::new(abelian_residual(j, b), tol));
            out.bi_invariant = Some(PredicateFlag::new(bi_invariant_residual(j, b), tol));
        }
        StructureTensor::Hypercomplex(js) => {
            let mut integ = 0.0f64;
            let mut abel = 0.0f64;
            let mut biinv = 0.0f64;
            for j in js {
                integ = integ.max(integrability_residual(j, b));
                abel = abel.max(abelian_residual(j, b));
                biinv = biinv.max(bi_invariant_residual(j, b));
            }
            out.integrable = Some(PredicateFlag::new(integ, tol));
            out.abelian = Some(PredicateFlag::new(abel, tol));
            out.bi_invariant = Some(PredicateFlag::new(biinv, tol));
        }
    }
    Ok(out)
}

/// Residual of the defining integrability condition of the class: closedness
/// for symplectic, integrability of J (all J_i) otherwise, zero for no
/// structure.
pub fn class_condition_residual(gamma: &StructureTensor, b: &Bracket) -> f64 {
    match gamma {
        StructureTensor::None => 0.0,
        StructureTensor::Symplectic(j) => closedness_residual(j, b),
        StructureTensor::Complex(j) => integrability_residual(j, b),
        StructureTensor::Hypercomplex(js) => js
            .iter()
            .map(|j| integrability_residual(j, b))
            .fold(0.0, f64::max),
    }
}

/// Orthogonal projection of a symmetric operator onto the symmetric maps
/// preserving `gamma`: anti-commuting with J for symplectic, commuting with
/// J for complex, commuting with every J_i for hypercomplex, and the
/// identity map when there is no structure.
pub fn invariant_ricci(ric: &DMatrix<f64>, gamma: &StructureTensor) -> DMatrix<f64> {
    match gamma {
        StructureTensor::None => ric.clone(),
        StructureTensor::Symplectic(j) => (ric + j * ric * j) * 0.5,
        StructureTensor::Complex(j) => (ric - j * ric * j) * 0.5,
        StructureTensor::Hypercomplex([j1, j2, j3]) => {
            (ric - j1 * ric * j1 - j2 * ric * j2 - j3 * ric * j3) * 0.25
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::trace_inner;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn antidiagonal_j_is_clean() {
        let j = catalog::antidiagonal_j(6);
        let gamma = StructureTensor::Symplectic(j);
        assert_eq!(check_structure(&gamma).max(), 0.0);
    }

    #[test]
    fn quaternion_triple_is_clean() {
        let gamma = StructureTensor::Hypercomplex(catalog::quaternion_triple(8));
        assert_eq!(check_structure(&gamma).max(), 0.0);
    }

    #[test]
    fn identity_fails_almost_complex() {
        let gamma = StructureTensor::Complex(DMatrix::identity(4, 4));
        assert_eq!(check_structure(&gamma).almost_complex, 2.0);
    }

    #[test]
    fn abc_closedness_criterion() {
        // closed exactly when a - b + c = 0
        let make = |a: f64, b: f64, c: f64| {
            Bracket::from_terms(6, &[(0, 1, 3, a), (0, 2, 4, b), (1, 2, 5, c)]).unwrap()
        };
        let gamma = StructureTensor::Symplectic(catalog::antidiagonal_j(6));
        let (closed, r) = is_closed(&gamma, &make(1.0, 1.0, 0.0)).unwrap();
        assert!(closed && r < 1e-15);
        let (closed, r) = is_closed(&gamma, &make(1.0, 1.0, 1.0)).unwrap();
        assert!(!closed);
        assert!((r - 1.0).abs() < 1e-15);
        let (closed, _) = is_closed(&gamma, &Bracket::zero(6)).unwrap();
        assert!(closed);
    }

    #[test]
    fn is_closed_rejects_wrong_kind() {
        let gamma = StructureTensor::Complex(catalog::antidiagonal_j(4));
        assert!(matches!(is_closed(&gamma, &Bracket::zero(4)), Err(Error::WrongKind)));
    }

    #[test]
    fn zero_bracket_is_integrable() {
        let j = catalog::complex_block_j();
        let (ok, r) = is_integrable(&j, &Bracket::zero(6)).unwrap();
        assert!(ok && r == 0.0);
    }

    #[test]
    fn integrability_of_w_space_matches_linear_condition() {
        // E = B + JD + JC characterizes integrability on the six-dimensional
        // two-step model; both directions over random draws
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let j = catalog::complex_block_j();
        for _ in 0..30 {
            let mut p: [[f64; 2]; 6] = Default::default();
            for pair in p.iter_mut() {
                pair[0] = rng.gen_range(-1.0..1.0);
                pair[1] = rng.gen_range(-1.0..1.0);
            }
            let [a, b, c, d, _e, f] = p;
            let rot = |v: [f64; 2]| [-v[1], v[0]];
            let e_int =
                [b[0] + rot(d)[0] + rot(c)[0], b[1] + rot(d)[1] + rot(c)[1]];
            let integrable = catalog::complex_w_bracket(&[a, b, c, d, e_int, f]);
            let (ok, r) = is_integrable(&j, &integrable).unwrap();
            assert!(ok, "expected integrable, residual {r}");
            let broken =
                catalog::complex_w_bracket(&[a, b, c, d, [e_int[0] + 0.5, e_int[1]], f]);
            let (ok, r) = is_integrable(&j, &broken).unwrap();
            assert!(!ok && r > 0.1);
        }
    }

    #[test]
    fn bi_invariant_family_classifies() {
        // A = F = 0, C = D = JB, E = -B
        let b = [0.3, -0.8];
        let jb = [0.8, 0.3];
        let bracket =
            catalog::complex_w_bracket(&[[0.0, 0.0], b, jb, jb, [-b[0], -b[1]], [0.0, 0.0]]);
        let gamma = StructureTensor::Complex(catalog::complex_block_j());
        let cls = classify(&gamma, &bracket, TAU_STRUCT).unwrap();
        assert!(cls.bi_invariant.unwrap().holds);
        assert!(cls.integrable.unwrap().holds);
        assert!(!cls.abelian.unwrap().holds);
    }

    #[test]
    fn abelian_family_classifies() {
        // E = B, D = -C
        let b = [0.4, 0.1];
        let c = [-0.2, 0.9];
        let bracket =
            catalog::complex_w_bracket(&[[0.5, 0.0], b, c, [-c[0], -c[1]], b, [0.3, 0.3]]);
        let gamma = StructureTensor::Complex(catalog::complex_block_j());
        let cls = classify(&gamma, &bracket, TAU_STRUCT).unwrap();
        assert!(cls.abelian.unwrap().holds);
        assert!(cls.integrable.unwrap().holds);
    }

    #[test]
    fn hypercomplex_curve_is_never_abelian_for_positive_t() {
        let entry = catalog::hypercomplex_curve(0.3).unwrap();
        let cls = classify(&entry.structure, &entry.bracket, TAU_STRUCT).unwrap();
        assert!(cls.integrable.unwrap().holds);
        assert!(!cls.abelian.unwrap().holds);
    }

    #[test]
    fn invariant_ricci_none_is_identity_map() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, -1.0]);
        assert_eq!(invariant_ricci(&m, &StructureTensor::None), m);
    }

    #[test]
    fn invariant_ricci_heisenberg_four() {
        let entry = catalog::heisenberg_symplectic(2).unwrap();
        let ric = crate::curvature::ricci_nilpotent(&entry.bracket);
        let ricg = invariant_ricci(&ric, &entry.structure);
        let expected =
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, -2.0, -1.0])) * -0.25;
        assert!((ricg - expected).amax() < 1e-15);
    }

    #[test]
    fn invariant_ricci_filiform() {
        let entry = catalog::filiform4_symplectic();
        let ric = crate::curvature::ricci_nilpotent(&entry.bracket);
        let ricg = invariant_ricci(&ric, &entry.structure);
        let expected =
            DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0, -1.0, -3.0])) * -0.25;
        assert!((ricg - expected).amax() < 1e-15);
    }

    #[test]
    fn projection_is_idempotent_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let gammas: Vec<StructureTensor> = vec![
            StructureTensor::Symplectic(catalog::antidiagonal_j(6)),
            StructureTensor::Complex(catalog::complex_block_j()),
            StructureTensor::Hypercomplex(catalog::quaternion_triple(8)),
        ];
        for gamma in &gammas {
            let n = gamma.dim().unwrap();
            for _ in 0..40 {
                let raw = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
                let sym = (&raw + raw.transpose()) * 0.5;
                let once = invariant_ricci(&sym, gamma);
                let twice = invariant_ricci(&once, gamma);
                assert!((&twice - &once).amax() < 1e-14);
                assert!(trace_inner(&(&sym - &once), &once).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn projection_commutation_and_trace_facts() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let raw = DMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
            let sym = (&raw + raw.transpose()) * 0.5;
            let j = catalog::antidiagonal_j(6);
            let p = invariant_ricci(&sym, &StructureTensor::Symplectic(j.clone()));
            assert!((&p * &j + &j * &p).amax() < 1e-12);
            assert!(p.trace().abs() < 1e-12);

            let jc = catalog::complex_block_j();
            let p = invariant_ricci(&sym, &StructureTensor::Complex(jc.clone()));
            assert!((&p * &jc - &jc * &p).amax() < 1e-12);
            assert!((p.trace() - sym.trace()).abs() < 1e-12);

            let raw8 = DMatrix::from_fn(8, 8, |_, _| rng.gen_range(-1.0..1.0));
            let sym8 = (&raw8 + raw8.transpose()) * 0.5;
            let js = catalog::quaternion_triple(8);
            let p = invariant_ricci(&sym8, &StructureTensor::Hypercomplex(js.clone()));
            for j in &js {
                assert!((&p * j - j * &p).amax() < 1e-12);
            }
            assert!((p.trace() - sym8.trace()).abs() < 1e-12);
        }
    }
}
