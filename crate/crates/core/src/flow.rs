//! Gradient descent of F([mu]) = tr(Ric^gamma)^2 / ||mu||^4 inside the
//! structure-group orbit of a bracket. Steps act by group elements
//! exp(-h Ric0), so the Jacobi identity and the class integrability
//! condition are preserved up to floating-point error without any
//! re-projection; every iterate is rescaled to scal = -1.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{act, derivation_space, infinitesimal_act_dense, scalar_curvature, validate, Bracket, DenseBracket};
use crate::curvature::ricci_nilpotent;
use crate::linalg::{column_space, expm, nullspace};
use crate::minimality::{certify, normalize_scal, MinimalityCertificate};
use crate::structures::{class_condition_residual, invariant_ricci, StructureTensor};
use crate::{Error, Result, TAU_RANK, TAU_STRUCT};

#[derive(Clone, Copy, Debug)]
pub struct FlowParams {
    /// first trial step of the backtracking search
    pub step0: f64,
    /// certification residual at which the run stops
    pub tol: f64,
    pub max_iter: usize,
    /// backtracking shrink factor
    pub armijo_shrink: f64,
    /// fraction of the predicted decrease a step must realize
    pub armijo_slope: f64,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            step0: 0.1,
            tol: 1e-8,
            max_iter: 10_000,
            armijo_shrink: 0.5,
            armijo_slope: 1e-4,
        }
    }
}

/// One recorded step of a flow run.
#[derive(Clone, Copy, Debug)]
pub struct FlowIterate {
    pub step: usize,
    pub f_value: f64,
    pub grad_norm: f64,
    pub scal: f64,
}

#[derive(Clone, Debug)]
pub struct FlowTrace {
    pub iterates: Vec<FlowIterate>,
    pub final_bracket: Bracket,
    pub converged: bool,
    pub final_certificate: MinimalityCertificate,
    /// largest observed ratio of certification residual to gradient norm,
    /// the empirical constant tying the two convergence measures
    pub residual_gradnorm_ratio: Option<f64>,
}

struct State {
    bracket: Bracket,
    dense: DenseBracket,
    ric0: DMatrix<f64>,
    f_value: f64,
    norm_sq: f64,
    grad_sq: f64,
    grad_norm: f64,
}

fn eval(bracket: Bracket, gamma: &StructureTensor) -> State {
    let n = bracket.dim();
    let ric = ricci_nilpotent(&bracket);
    let ric_gamma = invariant_ricci(&ric, gamma);
    let dense = bracket.dense();
    let norm_sq = dense.v_norm_squared();
    let f_value = ric_gamma.iter().map(|x| x * x).sum::<f64>() / (norm_sq * norm_sq);
    let trace_part = ric_gamma.trace() / n as f64;
    let ric0 = ric_gamma - DMatrix::identity(n, n) * trace_part;
    // gradient proxy: tangential part of pi(Ric0) mu, assembled entrywise
    // so the radial bulk cancels without precision loss
    let dir = infinitesimal_act_dense(&ric0, &dense);
    let radial = dense.v_inner(&dir) / norm_sq;
    let grad_sq = dir.tangential_norm_squared(&dense, radial);
    State { bracket, dense, ric0, f_value, norm_sq, grad_sq, grad_norm: grad_sq.sqrt() }
}

/// Runs the descent from `b0`. The structure must satisfy its class
/// condition at the start (`NotIntegrable` otherwise); a run that exhausts
/// `max_iter` returns its trace with `converged == false`.
pub fn flow_minimize(
    b0: &Bracket,
    gamma: &StructureTensor,
    params: &FlowParams,
) -> Result<FlowTrace> {
    gamma.check_dim(b0.dim())?;
    let rep = validate(b0, TAU_RANK);
    if rep.jacobi_residual > 1e-8 || rep.nilpotency_step.is_none() {
        return Err(Error::InvalidBracket(format!(
            "flow start is not a nilpotent Lie bracket (jacobi {:.3e})",
            rep.jacobi_residual
        )));
    }
    let ic = class_condition_residual(gamma, b0);
    if ic > TAU_STRUCT.max(1e-8) {
        return Err(Error::NotIntegrable(ic));
    }

    let n = b0.dim();
    // The iterate is represented as act(g_acc, anchor): evolving the group
    // element keeps every iterate exactly inside one orbit, so noise cannot
    // slide the bracket onto a neighboring stratum of the variety. The
    // anchor is refreshed (with a retraction cleanup) whenever g_acc gets
    // ill-conditioned, which also tames the automorphism drift the group
    // element picks up near a fixed point.
    let anchor = retract_clean(&normalize_scal(b0)?, gamma);
    let mut g_acc = DMatrix::<f64>::identity(n, n);
    let mut state = eval(anchor.clone(), gamma);
    let mut f_gate = state.f_value;
    let group_basis = structure_group_algebra(gamma, n)?;
    let mut iterates = Vec::new();
    let mut converged = false;
    let mut h_try = params.step0;
    let mut ratio_max: Option<f64> = None;
    let mut best_residual = f64::INFINITY;
    let mut last_cert: Option<MinimalityCertificate> = None;
    let mut stale_checks = 0usize;

    for k in 0..=params.max_iter {
        iterates.push(FlowIterate {
            step: k,
            f_value: f_gate,
            grad_norm: state.grad_norm,
            scal: -0.25 * state.norm_sq,
        });

        // certification is the convergence measure; it is sampled rather
        // than run every step until the gradient gets small
        let check_now = k % 10 == 0 || state.grad_norm < 1e-3;
        if check_now {
            let cert = certify(&state.bracket, gamma)?;
            if state.grad_norm > 0.0 && cert.residual > 0.0 {
                let r = cert.residual / state.grad_norm;
                ratio_max = Some(ratio_max.map_or(r, |m: f64| m.max(r)));
            }
            if cert.residual < params.tol {
                converged = true;
                last_cert = Some(cert);
                break;
            }
            if cert.residual < 0.99 * best_residual {
                best_residual = cert.residual;
                stale_checks = 0;
            } else {
                stale_checks += 1;
                if stale_checks > 200 {
                    last_cert = Some(cert);
                    break; // residual has stopped improving
                }
            }
            last_cert = Some(cert);
        }
        if k == params.max_iter {
            break;
        }
        if state.grad_norm < 1e-13 {
            // cannot move: the iterate is a fixed point to working precision
            continue;
        }

        // the step generator is the traceless invariant Ricci operator,
        // reduced by its component along the directions that do not move
        // the projective bracket: near a soliton the reduced generator
        // vanishes, so the accumulated group element stays bounded instead
        // of running off along the soliton derivation
        let generator = reduce_generator(&state.ric0, &state.bracket, &group_basis);

        // Backtracking line search: Armijo on F while its decrease is
        // measurable in f64, after that on the decay of the gradient norm
        // (F is flat to machine precision near the minimum long before the
        // certification residual reaches its target).
        let mut h = h_try;
        let mut accepted = None;
        for _ in 0..60 {
            let g_step = expm(&(&generator * (-h)));
            let g_cand = &g_step * &g_acc;
            let candidate = match act(&g_cand, &anchor) {
                Ok(c) => c,
                Err(_) => {
                    // accumulated map too ill-conditioned; shrink and retry
                    h *= params.armijo_shrink;
                    continue;
                }
            };
            let scal = scalar_curvature(&candidate);
            if scal >= 0.0 || !scal.is_finite() {
                h *= params.armijo_shrink;
                continue;
            }
            let scale = 1.0 / (-scal).sqrt();
            let next = eval(candidate.scaled(scale), gamma);
            let needed =
                params.armijo_slope * h * state.grad_sq / (state.norm_sq * state.norm_sq);
            let resolvable = needed > 8.0 * f64::EPSILON * f_gate;
            let ok = if resolvable {
                f_gate - next.f_value >= needed
            } else {
                next.grad_norm < state.grad_norm && next.f_value <= f_gate * (1.0 + 1e-12)
            };
            if ok {
                // fold the scal normalization into the group element so the
                // iterate stays a single action on the anchor
                accepted = Some((h, next, g_cand / scale));
                break;
            }
            h *= params.armijo_shrink;
        }
        match accepted {
            Some((h_used, next, g_new)) => {
                f_gate = f_gate.min(next.f_value);
                state = next;
                g_acc = g_new;
                h_try = (h_used * 2.0).min(params.step0 * 8.0);
            }
            None => {
                // neither F nor the gradient norm can be decreased by any
                // step size: the run has stalled at working precision
                let cert = certify(&state.bracket, gamma)?;
                converged = cert.residual < params.tol;
                last_cert = Some(cert);
                break;
            }
        }
    }

    let final_certificate = match last_cert {
        Some(c) if converged => c,
        _ => {
            let c = certify(&state.bracket, gamma)?;
            converged = converged || c.residual < params.tol;
            c
        }
    };
    Ok(FlowTrace {
        iterates,
        final_bracket: state.bracket,
        converged,
        final_certificate,
        residual_gradnorm_ratio: ratio_max,
    })
}

/// Removes from `ric0` its component along (R I + Der(mu)) intersected
/// with the structure-group algebra. Those directions act trivially on the
/// projective bracket (derivations fix it, the identity rescales it), so
/// the descent is unchanged; without the reduction the accumulated group
/// element runs off along the soliton derivation near a fixed point.
fn reduce_generator(
    ric0: &DMatrix<f64>,
    bracket: &Bracket,
    group_basis: &[DMatrix<f64>],
) -> DMatrix<f64> {
    let n = ric0.nrows();
    let ders = derivation_space(bracket, TAU_RANK);
    let mut cols1 = DMatrix::zeros(n * n, ders.len() + 1);
    for (a, e) in ders.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                cols1[(p * n + q, a)] = e[(p, q)];
            }
        }
    }
    for p in 0..n {
        cols1[(p * n + p, ders.len())] = 1.0;
    }
    let q1 = column_space(&cols1, 1e-12);
    let mut q2 = DMatrix::zeros(n * n, group_basis.len());
    for (a, e) in group_basis.iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                q2[(p * n + q, a)] = e[(p, q)];
            }
        }
    }
    // intersection of the two spans: kernel pairs (x, y) with Q1 x = Q2 y
    let mut stacked = DMatrix::zeros(n * n, q1.ncols() + q2.ncols());
    stacked.columns_mut(0, q1.ncols()).copy_from(&q1);
    stacked
        .columns_mut(q1.ncols(), q2.ncols())
        .copy_from(&(-&q2));
    let kernel = nullspace(&stacked, 1e-9);
    if kernel.is_empty() {
        return ric0.clone();
    }
    let mut members = DMatrix::zeros(n * n, kernel.len());
    for (c, kv) in kernel.iter().enumerate() {
        let x = kv.rows(0, q1.ncols()).into_owned();
        members.column_mut(c).copy_from(&(&q1 * x));
    }
    let basis = column_space(&members, 1e-9);
    let ric_vec = DVector::from_fn(n * n, |r, _| ric0[(r / n, r % n)]);
    let reduced_vec = &ric_vec - &basis * (basis.transpose() * &ric_vec);
    // the intersection is only known to tolerance, so re-project onto the
    // structure algebra to keep the step exactly inside the group
    let in_group = &q2 * (q2.transpose() * &reduced_vec);
    DMatrix::from_fn(n, n, |p, q| in_group[p * n + q])
}

/// Iterated retraction until the Jacobi residual reaches working precision.
fn retract_clean(b: &Bracket, gamma: &StructureTensor) -> Bracket {
    let mut out = b.clone();
    for _ in 0..3 {
        if validate(&out, TAU_RANK).jacobi_residual < 1e-14 {
            break;
        }
        out = variety_retraction(&out, gamma);
    }
    out
}

/// One Gauss-Newton correction of a near-solution of the Jacobi identity
/// and the class condition: the minimum-norm update of the structure
/// constants solving the linearized equations. The equations are quadratic
/// (Jacobi) and linear (class condition), so a single step drives residuals
/// of size r down to order r^2.
pub(crate) fn variety_retraction(b: &Bracket, gamma: &StructureTensor) -> Bracket {
    let n = b.dim();
    let d = b.dense();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let unknowns = pairs.len() * n;
    let basis: Vec<DVector<f64>> = (0..n)
        .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();

    // coefficient of delta^m_{ij} in sum_m w_m * delta(u, v)_m
    let add_term = |row: &mut [f64], w: &DVector<f64>, u: &DVector<f64>, v: &DVector<f64>| {
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let factor = u[i] * v[j] - u[j] * v[i];
            if factor == 0.0 {
                continue;
            }
            for m in 0..n {
                if w[m] != 0.0 {
                    row[p * n + m] += w[m] * factor;
                }
            }
        }
    };

    // Jacobi identity rows
    for p in 0..n {
        for q in (p + 1)..n {
            for r in (q + 1)..n {
                let cyc = [(p, q, r), (q, r, p), (r, p, q)];
                let mut value = DVector::zeros(n);
                for &(x, y, z) in &cyc {
                    value += d.apply(&d.basis_pair(x, y), &basis[z]);
                }
                for k in 0..n {
                    let mut row = vec![0.0; unknowns];
                    for &(x, y, z) in &cyc {
                        let u = d.basis_pair(x, y);
                        // delta(mu(x,y), e_z) component k
                        add_term(&mut row, &basis[k], &u, &basis[z]);
                        // mu(delta(x,y), e_z) component k
                        let w = DVector::from_fn(n, |m, _| d.get(m, z, k));
                        add_term(&mut row, &w, &basis[x], &basis[y]);
                    }
                    rows.push(row);
                    rhs.push(-value[k]);
                }
            }
        }
    }

    // class condition rows (linear in the bracket)
    match gamma {
        StructureTensor::None => {}
        StructureTensor::Symplectic(j) => {
            for p in 0..n {
                for q in (p + 1)..n {
                    for r in (q + 1)..n {
                        let cyc = [(p, q, r), (q, r, p), (r, p, q)];
                        let mut row = vec![0.0; unknowns];
                        let mut value = 0.0;
                        for &(x, y, z) in &cyc {
                            let jz = j.column(z).into_owned();
                            value += d.basis_pair(x, y).dot(&jz);
                            add_term(&mut row, &jz, &basis[x], &basis[y]);
                        }
                        rows.push(row);
                        rhs.push(-value);
                    }
                }
            }
        }
        StructureTensor::Complex(j) => {
            integrability_rows(&d, j, &pairs, &basis, &add_term, &mut rows, &mut rhs);
        }
        StructureTensor::Hypercomplex(js) => {
            for j in js {
                integrability_rows(&d, j, &pairs, &basis, &add_term, &mut rows, &mut rhs);
            }
        }
    }

    let rhs_vec = DVector::from_vec(rhs.clone());
    if rhs_vec.amax() == 0.0 {
        return b.clone();
    }
    let mut a = DMatrix::zeros(rows.len(), unknowns);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            a[(r, c)] = v;
        }
    }
    let delta = crate::linalg::min_norm_solve(&a, &rhs_vec, 1e-12);
    let mut out = d;
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for k in 0..n {
            let v = delta[p * n + k];
            if v != 0.0 {
                out.add_pair(i, j, k, v);
            }
        }
    }
    out.to_bracket()
}

fn integrability_rows(
    d: &DenseBracket,
    j: &DMatrix<f64>,
    pairs: &[(usize, usize)],
    basis: &[DVector<f64>],
    add_term: &dyn Fn(&mut [f64], &DVector<f64>, &DVector<f64>, &DVector<f64>),
    rows: &mut Vec<Vec<f64>>,
    rhs: &mut Vec<f64>,
) {
    let n = d.dim();
    for &(p, q) in pairs {
        let jp = j.column(p).into_owned();
        let jq = j.column(q).into_owned();
        let value = d.apply(&jp, &jq)
            - d.basis_pair(p, q)
            - j * d.apply(&jp, &basis[q])
            - j * d.apply(&basis[p], &jq);
        for k in 0..n {
            let mut row = vec![0.0; pairs.len() * n];
            let ek = &basis[k];
            let minus_jrow = DVector::from_fn(n, |m, _| -j[(k, m)]);
            let minus_ek = -ek.clone();
            add_term(&mut row, ek, &jp, &jq);
            add_term(&mut row, &minus_ek, &basis[p], &basis[q]);
            add_term(&mut row, &minus_jrow, &jp, &basis[q]);
            add_term(&mut row, &minus_jrow, &basis[p], &jq);
            rows.push(row);
            rhs.push(-value[k]);
        }
    }
}

/// Basis of the Lie algebra of the subgroup of GL(n) preserving the
/// structure: all of gl(n) for no structure, A^T J + J A = 0 for the
/// symplectic class, commutation with J (with every J_i) otherwise.
pub fn structure_group_algebra(gamma: &StructureTensor, n: usize) -> Result<Vec<DMatrix<f64>>> {
    gamma.check_dim(n)?;
    let constraints: Vec<DMatrix<f64>> = match gamma {
        StructureTensor::None => {
            let mut out = Vec::with_capacity(n * n);
            for p in 0..n {
                for q in 0..n {
                    let mut m = DMatrix::zeros(n, n);
                    m[(p, q)] = 1.0;
                    out.push(m);
                }
            }
            return Ok(out);
        }
        StructureTensor::Symplectic(j) => {
            vec![j.clone()]
        }
        StructureTensor::Complex(j) => vec![j.clone()],
        StructureTensor::Hypercomplex(js) => js.to_vec(),
    };
    let rows_per = n * n;
    let mut m = DMatrix::zeros(rows_per * constraints.len(), n * n);
    for p in 0..n {
        for q in 0..n {
            let mut unit = DMatrix::zeros(n, n);
            unit[(p, q)] = 1.0;
            for (ci, j) in constraints.iter().enumerate() {
                let image = match gamma {
                    StructureTensor::Symplectic(_) => unit.transpose() * j + j * &unit,
                    _ => &unit * j - j * &unit,
                };
                for r in 0..n {
                    for c in 0..n {
                        m[(ci * rows_per + r * n + c, p * n + q)] = image[(r, c)];
                    }
                }
            }
        }
    }
    Ok(nullspace(&m, TAU_RANK)
        .into_iter()
        .map(|v| DMatrix::from_fn(n, n, |p, q| v[p * n + q]))
        .collect())
}

/// A random element exp(A) of the structure group with ||A||_F = epsilon,
/// drawn deterministically from the seed.
pub fn random_structure_group_element(
    gamma: &StructureTensor,
    n: usize,
    epsilon: f64,
    rng: &mut ChaCha8Rng,
) -> Result<DMatrix<f64>> {
    let basis = structure_group_algebra(gamma, n)?;
    let mut a = DMatrix::zeros(n, n);
    for e in &basis {
        a += e * rng.gen_range(-1.0..1.0);
    }
    let norm = a.norm();
    if norm > 0.0 {
        a *= epsilon / norm;
    }
    Ok(expm(&a))
}

/// Moves a bracket by a random structure-group element of size `epsilon`.
/// The class condition is preserved exactly (up to floating point), so the
/// output is a valid flow start.
pub fn perturb(
    b: &Bracket,
    gamma: &StructureTensor,
    epsilon: f64,
    seed: u64,
) -> Result<Bracket> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_structure_group_element(gamma, b.dim(), epsilon, &mut rng)?;
    act(&g, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::minimality::ricci_spectrum;

    #[test]
    fn directional_derivative_matches_gradient_proxy() {
        // dF along exp(-h Ric0) equals -G^2 / ||mu||^4 at h = 0
        let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
        let perturbed = perturb(&entry.bracket, &entry.structure, 0.4, 9).unwrap();
        let state = eval(normalize_scal(&perturbed).unwrap(), &entry.structure);
        let expected_slope = -state.grad_sq / (state.norm_sq * state.norm_sq);

        let h = 1e-7;
        let g = expm(&(&state.ric0 * (-h)));
        let moved = eval(
            normalize_scal(&act(&g, &state.bracket).unwrap()).unwrap(),
            &entry.structure,
        );
        let fd_slope = (moved.f_value - state.f_value) / h;
        assert!(
            (fd_slope - expected_slope).abs() < 1e-5 * expected_slope.abs().max(1e-10),
            "fd {fd_slope} vs expected {expected_slope}"
        );
    }

    #[test]
    fn minimal_start_converges_immediately() {
        let entry = catalog::filiform4_symplectic();
        let trace =
            flow_minimize(&entry.bracket, &entry.structure, &FlowParams::default()).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.iterates.len(), 1);
        assert!(trace.final_certificate.residual < 1e-12);
    }

    #[test]
    fn perturbed_start_recovers_minimal_point() {
        let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
        let start = perturb(&entry.bracket, &entry.structure, 0.3, 41).unwrap();
        let trace = flow_minimize(&start, &entry.structure, &FlowParams::default()).unwrap();
        assert!(trace.converged, "flow did not converge");
        assert!(trace.final_certificate.residual <= 1e-8);
        // F values never increase along the trace
        for w in trace.iterates.windows(2) {
            assert!(w[1].f_value <= w[0].f_value);
        }
        // the limit is isometric to the unperturbed minimal point
        let reference = ricci_spectrum(&normalize_scal(&entry.bracket).unwrap());
        let reached = ricci_spectrum(&trace.final_bracket);
        for (a, b) in reference.iter().zip(reached.iter()) {
            assert!((a - b).abs() < 1e-6, "spectra differ: {a} vs {b}");
        }
    }

    #[test]
    fn iterates_stay_on_the_class_variety() {
        let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
        let start = perturb(&entry.bracket, &entry.structure, 0.3, 17).unwrap();
        let trace = flow_minimize(&start, &entry.structure, &FlowParams::default()).unwrap();
        let rep = validate(&trace.final_bracket, TAU_RANK);
        assert!(rep.jacobi_residual < 1e-8);
        assert!(class_condition_residual(&entry.structure, &trace.final_bracket) < 1e-8);
    }

    #[test]
    fn flow_rejects_non_integrable_start() {
        let entry = catalog::symplectic_abc((2.0f64 - 0.02).sqrt(), 0.1, 0.1).unwrap();
        // a - b + c != 0: the form is not closed
        let res = flow_minimize(&entry.bracket, &entry.structure, &FlowParams::default());
        assert!(matches!(res, Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn structure_group_algebra_dimensions() {
        // sp(3,R) has dimension 21, gl(3,C) 18, gl(2,H) 16, gl(6,R) 36
        let sympl = StructureTensor::Symplectic(catalog::antidiagonal_j(6));
        assert_eq!(structure_group_algebra(&sympl, 6).unwrap().len(), 21);
        let cplx = StructureTensor::Complex(catalog::complex_block_j());
        assert_eq!(structure_group_algebra(&cplx, 6).unwrap().len(), 18);
        let hyper = StructureTensor::Hypercomplex(catalog::quaternion_triple(8));
        assert_eq!(structure_group_algebra(&hyper, 8).unwrap().len(), 16);
        assert_eq!(structure_group_algebra(&StructureTensor::None, 6).unwrap().len(), 36);
    }

    #[test]
    fn perturbation_preserves_class_condition() {
        let entry = catalog::hypercomplex_curve(0.25).unwrap();
        let moved = perturb(&entry.bracket, &entry.structure, 0.3, 5).unwrap();
        assert!(class_condition_residual(&entry.structure, &moved) < 1e-10);
        let rep = validate(&moved, TAU_RANK);
        assert!(rep.jacobi_residual < 1e-12);
    }

    #[test]
    fn two_perturbations_reach_isometric_limits() {
        let entry = catalog::symplectic_abc(1.0, 1.0, 0.0).unwrap();
        let mut spectra = Vec::new();
        for seed in [101u64, 202u64] {
            let start = perturb(&entry.bracket, &entry.structure, 0.3, seed).unwrap();
            let trace =
                flow_minimize(&start, &entry.structure, &FlowParams::default()).unwrap();
            assert!(trace.converged);
            spectra.push(ricci_spectrum(&trace.final_bracket));
        }
        for (a, b) in spectra[0].iter().zip(spectra[1].iter()) {
            assert!((a - b).abs() < 1e-6);
        }
    }
}

/// Test-only access to the retraction.
pub fn test_retract(b: &Bracket, gamma: &StructureTensor) -> Bracket {
    variety_retraction(b, gamma)
}
