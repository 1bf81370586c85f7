//! Curvature of left-invariant metrics: a closed-form Ricci operator for
//! nilpotent brackets under the fixed orthonormal metric, and a Koszul-based
//! Levi-Civita / curvature engine for arbitrary metric Lie algebras.
//!
//! The two paths share no intermediate code; the general engine acts as an
//! independent check on the closed form and as the Einstein verifier for
//! solvable extensions.

use nalgebra::DMatrix;

use crate::algebra::{scalar_curvature, validate, Bracket};
use crate::linalg;
use crate::structures::{invariant_ricci, StructureKind, StructureTensor};
use crate::{Error, Result, TAU_RANK};

/// Ricci operator of a nilpotent bracket under the fixed orthonormal metric:
///
/// <Ric X, Y> = -1/2 sum_{i,j} <mu(X,e_i),e_j><mu(Y,e_i),e_j>
///             + 1/4 sum_{i,j} <mu(e_i,e_j),X><mu(e_i,e_j),Y>
///
/// with both sums over ordered index pairs.
pub fn ricci_nilpotent(b: &Bracket) -> DMatrix<f64> {
    let n = b.dim();
    let d = b.dense();
    let mut ric = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            let mut first = 0.0;
            let mut second = 0.0;
            for i in 0..n {
                for j in 0..n {
                    first += d.get(x, i, j) * d.get(y, i, j);
                    second += d.get(i, j, x) * d.get(i, j, y);
                }
            }
            let v = -0.5 * first + 0.25 * second;
            ric[(x, y)] = v;
            ric[(y, x)] = v;
        }
    }
    ric
}

/// Ricci data of a bracket together with the projection for a structure.
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub ricci: DMatrix<f64>,
    pub invariant_ricci: DMatrix<f64>,
    pub scal: f64,
    pub structure_kind: StructureKind,
}

pub fn curvature_report(b: &Bracket, gamma: &StructureTensor) -> Result<CurvatureReport> {
    gamma.check_dim(b.dim())?;
    let ricci = ricci_nilpotent(b);
    let inv = invariant_ricci(&ricci, gamma);
    Ok(CurvatureReport {
        ricci,
        invariant_ricci: inv,
        scal: scalar_curvature(b),
        structure_kind: gamma.kind(),
    })
}

/// A metric Lie algebra that is solvable but not necessarily nilpotent,
/// on an orthonormal basis. Used for rank-one extensions and as the input
/// of the general curvature engine.
#[derive(Clone, Debug)]
pub struct MetricSolvableAlgebra {
    bracket: Bracket,
}

impl MetricSolvableAlgebra {
    /// Validates the Jacobi identity (at `jacobi_tol`) and solvability before
    /// accepting the structure constants.
    pub fn new(bracket: Bracket, jacobi_tol: f64) -> Result<Self> {
        let rep = validate(&bracket, TAU_RANK);
        if rep.jacobi_residual > jacobi_tol {
            return Err(Error::InvalidBracket(format!(
                "Jacobi residual {:.3e} exceeds {:.3e}",
                rep.jacobi_residual, jacobi_tol
            )));
        }
        if !is_solvable(&bracket) {
            return Err(Error::InvalidBracket("derived series does not terminate".into()));
        }
        Ok(Self { bracket })
    }

    pub fn dim(&self) -> usize {
        self.bracket.dim()
    }

    pub fn bracket(&self) -> &Bracket {
        &self.bracket
    }
}

fn is_solvable(b: &Bracket) -> bool {
    let n = b.dim();
    let scale = b.norm_squared().sqrt();
    if scale <= TAU_RANK {
        return true;
    }
    let d = b.scaled(1.0 / scale).dense();
    let mut current: Vec<nalgebra::DVector<f64>> = (0..n)
        .map(|i| nalgebra::DVector::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 }))
        .collect();
    let mut dim = n;
    loop {
        let mut cols = Vec::new();
        for (ai, a) in current.iter().enumerate() {
            for b2 in current.iter().skip(ai + 1) {
                cols.push(d.apply(a, b2));
            }
        }
        if cols.is_empty() {
            return true;
        }
        let m = DMatrix::from_columns(&cols);
        if m.amax() <= TAU_RANK {
            return true;
        }
        let space = linalg::column_space(&m, TAU_RANK);
        let next = space.ncols();
        if next == 0 {
            return true;
        }
        if next >= dim {
            return false;
        }
        current = (0..next).map(|c| space.column(c).into_owned()).collect();
        dim = next;
    }
}

/// Koszul connection coefficients of a metric Lie algebra on its orthonormal
/// basis: gamma[i][j][k] = <nabla_{e_i} e_j, e_k>
///   = 1/2 (<[e_i,e_j],e_k> - <[e_j,e_k],e_i> + <[e_k,e_i],e_j>).
pub struct ConnectionCoefficients {
    n: usize,
    g: Vec<f64>,
}

impl ConnectionCoefficients {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.g[(i * self.n + j) * self.n + k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

pub fn levi_civita(s: &MetricSolvableAlgebra) -> ConnectionCoefficients {
    let n = s.dim();
    let d = s.bracket.dense();
    let mut g = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                g[(i * n + j) * n + k] =
                    0.5 * (d.get(i, j, k) - d.get(j, k, i) + d.get(k, i, j));
            }
        }
    }
    ConnectionCoefficients { n, g }
}

/// Ricci operator by trace contraction of the full curvature tensor
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]} Z.
pub fn ricci_general(s: &MetricSolvableAlgebra) -> DMatrix<f64> {
    let n = s.dim();
    let gamma = levi_civita(s);
    let d = s.bracket.dense();
    let mut ric = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in x..n {
            // Ric(x,y) = sum_a <R(e_a, e_x) e_y, e_a>
            let mut v = 0.0;
            for a in 0..n {
                for m in 0..n {
                    v += gamma.get(x, y, m) * gamma.get(a, m, a)
                        - gamma.get(a, y, m) * gamma.get(x, m, a)
                        - d.get(a, x, m) * gamma.get(m, y, a);
                }
            }
            ric[(x, y)] = v;
            ric[(y, x)] = v;
        }
    }
    ric
}
