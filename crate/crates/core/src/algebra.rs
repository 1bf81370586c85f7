//! Brackets as sparse structure constants on a fixed orthonormal basis,
//! their validation, the GL(n) action with its infinitesimal version,
//! derivation algebras, and the j-map of two-step algebras.

use nalgebra::{DMatrix, DVector};

use crate::linalg;
use crate::{Error, Result, TAU_RANK};

/// One structure constant: mu(e_i, e_j) contains c * e_k, indices 0-based
/// with i < j. The mirror value mu(e_j, e_i) = -mu(e_i, e_j) is implied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BracketTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: f64,
}

/// A skew-symmetric bilinear bracket on R^n given by structure constants.
///
/// Construction only checks well-formedness (index ranges, i < j, no
/// duplicate (i, j, k) entries); whether the data is an actual nilpotent Lie
/// bracket is the job of [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket {
    dim: usize,
    terms: Vec<BracketTerm>,
}

impl Bracket {
    pub fn new(dim: usize, terms: Vec<BracketTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidBracket("dimension must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for t in &terms {
            if t.i >= t.j {
                return Err(Error::InvalidBracket(format!(
                    "term ({}, {}, {}) must have i < j",
                    t.i + 1,
                    t.j + 1,
                    t.k + 1
                )));
            }
            if t.j >= dim || t.k >= dim {
                return Err(Error::InvalidBracket(format!(
                    "term ({}, {}, {}) exceeds dimension {}",
                    t.i + 1,
                    t.j + 1,
                    t.k + 1,
                    dim
                )));
            }
            if !seen.insert((t.i, t.j, t.k)) {
                return Err(Error::InvalidBracket(format!(
                    "duplicate term ({}, {}, {})",
                    t.i + 1,
                    t.j + 1,
                    t.k + 1
                )));
            }
        }
        Ok(Self { dim, terms })
    }

    /// Convenience constructor from (i, j, k, c) tuples.
    pub fn from_terms(dim: usize, terms: &[(usize, usize, usize, f64)]) -> Result<Self> {
        Self::new(
            dim,
            terms
                .iter()
                .map(|&(i, j, k, c)| BracketTerm { i, j, k, c })
                .collect(),
        )
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[BracketTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.c == 0.0)
    }

    /// Dense structure-constant tensor for arithmetic-heavy operations.
    pub fn dense(&self) -> DenseBracket {
        let mut d = DenseBracket::zero(self.dim);
        for t in &self.terms {
            d.add_pair(t.i, t.j, t.k, t.c);
        }
        d
    }

    pub fn scaled(&self, s: f64) -> Bracket {
        Bracket {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| BracketTerm { c: s * t.c, ..*t })
                .collect(),
        }
    }

    /// Squared norm of the bracket as an element of V, summed over ordered
    /// index pairs (twice the i < j sum).
    pub fn norm_squared(&self) -> f64 {
        2.0 * self.terms.iter().map(|t| t.c * t.c).sum::<f64>()
    }
}

/// Dense view c[i][j][k] of a bracket, skew pairs filled in.
#[derive(Clone, Debug)]
pub struct DenseBracket {
    n: usize,
    c: Vec<f64>,
}

impl DenseBracket {
    pub fn zero(n: usize) -> Self {
        Self { n, c: vec![0.0; n * n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// Sets mu(e_i, e_j)_k += v together with the skew mirror entry.
    pub fn add_pair(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.n;
        self.c[(i * n + j) * n + k] += v;
        self.c[(j * n + i) * n + k] -= v;
    }

    /// mu(e_i, e_j) as a vector.
    pub fn basis_pair(&self, i: usize, j: usize) -> DVector<f64> {
        let n = self.n;
        DVector::from_fn(n, |k, _| self.c[(i * n + j) * n + k])
    }

    /// mu(x, y) by bilinearity.
    pub fn apply(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.n;
        let mut out = DVector::zeros(n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = xi * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c[(i * n + j) * n + k];
                }
            }
        }
        out
    }

    /// Collects the i < j entries back into a sparse bracket, dropping exact
    /// zeros only.
    pub fn to_bracket(&self) -> Bracket {
        let n = self.n;
        let mut terms = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let c = self.get(i, j, k);
                    if c != 0.0 {
                        terms.push(BracketTerm { i, j, k, c });
                    }
                }
            }
        }
        Bracket { dim: n, terms }
    }

    /// Inner product on V over ordered index pairs.
    pub fn v_inner(&self, other: &DenseBracket) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| a * b).sum()
    }

    /// Squared norm of self minus `radial * base`, taken entrywise.
    pub fn tangential_norm_squared(&self, base: &DenseBracket, radial: f64) -> f64 {
        self.c
            .iter()
            .zip(base.c.iter())
            .map(|(a, b)| {
                let d = a - radial * b;
                d * d
            })
            .sum()
    }

    pub fn v_norm_squared(&self) -> f64 {
        self.v_inner(self)
    }
}

/// Outcome of checking the Jacobi identity and the lower central series.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    /// Max over basis triples i < j < k of the max-norm of the cyclic Jacobi
    /// sum mu(mu(e_i,e_j),e_k) + mu(mu(e_j,e_k),e_i) + mu(mu(e_k,e_i),e_j).
    pub jacobi_residual: f64,
    /// `None` when the lower central series stabilizes above zero.
    pub nilpotency_step: Option<usize>,
    /// Dimensions of the strictly decreasing nonzero chain of the lower
    /// central series, starting with the algebra itself; empty for the
    /// abelian case. Its length equals the nilpotency step.
    pub lcs_dims: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self, tol: f64) -> bool {
        self.jacobi_residual <= tol && self.nilpotency_step.is_some()
    }
}

/// Jacobi residual and lower central series of a bracket. Rank decisions use
/// the relative singular-value threshold `tau_rank`.
pub fn validate(b: &Bracket, tau_rank: f64) -> ValidationReport {
    let n = b.dim();
    let d = b.dense();
    let mut jacobi = 0.0f64;
    let basis: Vec<DVector<f64>> = (0..n)
        .map(|i| DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mu_ij = d.basis_pair(i, j);
            for k in (j + 1)..n {
                let mu_jk = d.basis_pair(j, k);
                let mu_ki = d.basis_pair(k, i);
                let cyc = d.apply(&mu_ij, &basis[k])
                    + d.apply(&mu_jk, &basis[i])
                    + d.apply(&mu_ki, &basis[j]);
                jacobi = jacobi.max(cyc.amax());
            }
        }
    }

    // lower central series by rank-revealing elimination; computed on the
    // norm-one rescaling of the bracket so that tau_rank acts as an absolute
    // noise floor at every stage (series subspaces are scale invariant)
    let mut lcs_dims = Vec::new();
    let mut current: Vec<DVector<f64>> = basis.clone();
    let mut current_dim = n;
    let mut step = None;
    let scale = b.norm_squared().sqrt();
    if b.is_zero() || scale <= tau_rank {
        step = Some(0);
    } else {
        let dn = b.scaled(1.0 / scale).dense();
        lcs_dims.push(n);
        for s in 1..=n {
            let mut cols = Vec::new();
            for v in &current {
                for e in &basis {
                    cols.push(dn.apply(e, v));
                }
            }
            let m = DMatrix::from_columns(&cols);
            let space = if m.amax() <= tau_rank {
                DMatrix::zeros(n, 0)
            } else {
                linalg::column_space(&m, tau_rank)
            };
            let dim = space.ncols();
            if dim == 0 {
                step = Some(s);
                break;
            }
            if dim >= current_dim {
                break; // stabilized above zero: not nilpotent
            }
            lcs_dims.push(dim);
            current = (0..dim).map(|c| space.column(c).into_owned()).collect();
            current_dim = dim;
        }
        if step.is_none() {
            lcs_dims.clear();
        }
    }
    ValidationReport { jacobi_residual: jacobi, nilpotency_step: step, lcs_dims }
}

/// scal(mu) = -1/4 ||mu||^2 with the ordered-pair norm convention.
pub fn scalar_curvature(b: &Bracket) -> f64 {
    -0.25 * b.norm_squared()
}

/// The natural GL(n) action (g.mu)(x, y) = g mu(g^{-1} x, g^{-1} y).
pub fn act(g: &DMatrix<f64>, b: &Bracket) -> Result<Bracket> {
    let n = b.dim();
    if g.nrows() != n || g.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{} but the bracket has dimension {}",
            g.nrows(),
            g.ncols(),
            n
        )));
    }
    if linalg::condition_number(g) > 1.0 / TAU_RANK {
        return Err(Error::SingularOperator);
    }
    let ginv = g.clone().try_inverse().ok_or(Error::SingularOperator)?;
    let d = b.dense();
    let mut out = DenseBracket::zero(n);
    for i in 0..n {
        let gi = ginv.column(i).into_owned();
        for j in (i + 1)..n {
            let gj = ginv.column(j).into_owned();
            let w = g * d.apply(&gi, &gj);
            for k in 0..n {
                if w[k] != 0.0 {
                    out.add_pair(i, j, k, w[k]);
                }
            }
        }
    }
    Ok(out.to_bracket())
}

/// Derivative of the action: (A.mu)(x, y) = A mu(x,y) - mu(Ax, y) - mu(x, Ay).
/// The result is an element of V and need not satisfy Jacobi.
pub fn infinitesimal_act(a: &DMatrix<f64>, b: &Bracket) -> Bracket {
    infinitesimal_act_dense(a, &b.dense()).to_bracket()
}

pub(crate) fn infinitesimal_act_dense(a: &DMatrix<f64>, d: &DenseBracket) -> DenseBracket {
    let n = d.dim();
    let mut out = DenseBracket::zero(n);
    for i in 0..n {
        let ai = a.column(i).into_owned();
        for j in (i + 1)..n {
            let aj = a.column(j).into_owned();
            let mu_ij = d.basis_pair(i, j);
            let ei = DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
            let ej = DVector::from_fn(n, |r, _| if r == j { 1.0 } else { 0.0 });
            let w = a * mu_ij - d.apply(&ai, &ej) - d.apply(&ei, &aj);
            for k in 0..n {
                if w[k] != 0.0 {
                    out.add_pair(i, j, k, w[k]);
                }
            }
        }
    }
    out
}

/// Orthonormal basis (trace inner product) of Der(mu), the kernel of
/// A -> A.mu.
pub fn derivation_space(b: &Bracket, tau_rank: f64) -> Vec<DMatrix<f64>> {
    let n = b.dim();
    let d = b.dense();
    let pairs = n * (n - 1) / 2;
    // columns indexed by the matrix unit A = E_{pq}
    let mut m = DMatrix::zeros(pairs * n, n * n);
    for p in 0..n {
        for q in 0..n {
            let mut unit = DMatrix::zeros(n, n);
            unit[(p, q)] = 1.0;
            let image = infinitesimal_act_dense(&unit, &d);
            let mut row = 0;
            for i in 0..n {
                for j in (i + 1)..n {
                    for k in 0..n {
                        m[(row * n + k, p * n + q)] = image.get(i, j, k);
                    }
                    row += 1;
                }
            }
        }
    }
    linalg::nullspace(&m, tau_rank)
        .into_iter()
        .map(|v| {
            DMatrix::from_fn(n, n, |p, q| v[p * n + q])
        })
        .collect()
}

/// The j-map of a two-step bracket split as v + z with v the first `v_dim`
/// basis vectors: <j(Z)x, y> = <mu(x, y), Z> on v.
pub fn j_map(b: &Bracket, v_dim: usize, z: &DVector<f64>) -> Result<DMatrix<f64>> {
    let n = b.dim();
    if v_dim >= n || z.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "split v_dim {} and Z length {} do not fit dimension {}",
            v_dim,
            z.len(),
            n
        )));
    }
    for t in b.terms() {
        // image inside z, and z central
        if t.c != 0.0 && (t.k < v_dim || t.j >= v_dim) {
            return Err(Error::NotTwoStepSplit);
        }
    }
    if z.rows(0, v_dim).amax() > 0.0 {
        return Err(Error::NotTwoStepSplit);
    }
    let d = b.dense();
    let mut out = DMatrix::zeros(v_dim, v_dim);
    for x in 0..v_dim {
        for y in 0..v_dim {
            let mut s = 0.0;
            for k in v_dim..n {
                s += d.get(x, y, k) * z[k];
            }
            out[(y, x)] = s;
        }
    }
    Ok(out)
}
