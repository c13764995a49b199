//! Left-invariant pseudo-Riemannian geometry on a Lie algebra.
//!
//! A Lie algebra enters through its coframe differentials
//! `de^k = Σ_{i<j} c e^i ∧ e^j`; brackets follow from
//! `e^k([e_i, e_j]) = −de^k(e_i, e_j)`. The frame is orthonormal with signs
//! `ε_i`, the connection comes from the Koszul formula, and everything
//! downstream (curvature, Ricci, divergence, extensions by derivations) is
//! computed in that frame with explicit sign bookkeeping.
//!
//! Curvature convention: `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z`,
//! `ric(X,Y) = tr(Z ↦ R(Z,X)Y)`, positive on round spheres. This is the
//! convention under which the Ricci-through-spinors contraction identity
//! holds; a dedicated oracle test asserts it rather than assuming it.

use crate::clifford::FrameMetric;
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};
use crate::{Error, Result};

/// One coframe-differential term: `coeff · e^i ∧ e^j` with `i < j` (1-based).
#[derive(Debug, Clone, PartialEq)]
pub struct CoframeTerm {
    pub coeff: Rational,
    pub i: usize,
    pub j: usize,
}

/// Structure constants of an `n`-dimensional Lie algebra in a fixed frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<S> {
    n: usize,
    /// `c[idx(k,i,j)] = c^k_{ij}` where `[e_i, e_j] = Σ_k c^k_{ij} e_k`.
    c: Vec<S>,
}

/// A g-symmetric endomorphism in frame components `A^j_i = e^j(A(e_i))`.
pub type SymEndo<S> = Matrix<S>;

/// A derivation of the algebra, `D[X,Y] = [DX,Y] + [X,DY]`.
pub type Derivation<S> = Matrix<S>;

impl<S: Scalar> LieAlgebra<S> {
    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        ((k * self.n) + i) * self.n + j
    }

    /// Build from coframe differentials (one term list per `de^k`),
    /// validating the Jacobi identity.
    pub fn from_coframe(n: usize, d_coeffs: &[Vec<CoframeTerm>]) -> Result<Self> {
        if d_coeffs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: d_coeffs.len(),
            });
        }
        let mut c = vec![S::zero(); n * n * n];
        for (k, terms) in d_coeffs.iter().enumerate() {
            for t in terms {
                if t.i == 0 || t.j == 0 || t.i > n || t.j > n {
                    return Err(Error::IndexOutOfRange {
                        index: t.i.max(t.j),
                        dim: n,
                    });
                }
                if t.i >= t.j {
                    return Err(Error::Model {
                        path: format!("de^{}", k + 1),
                        message: "coframe term indices must satisfy i < j".into(),
                    });
                }
                // e^k([e_i, e_j]) = −de^k(e_i, e_j)
                let value = S::from_rational_pair(&-t.coeff.clone(), &Rational::from_integer(0.into()));
                let (i0, j0) = (t.i - 1, t.j - 1);
                let at = ((k * n) + i0) * n + j0;
                let ta = ((k * n) + j0) * n + i0;
                c[at] = c[at].clone() + value.clone();
                c[ta] = c[ta].clone() - value;
            }
        }
        let alg = LieAlgebra { n, c };
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// The abelian algebra of dimension `n`.
    pub fn abelian(n: usize) -> Self {
        LieAlgebra {
            n,
            c: vec![S::zero(); n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `c^k_{ij}` with 1-based indices.
    pub fn c(&self, k: usize, i: usize, j: usize) -> &S {
        &self.c[self.idx(k - 1, i - 1, j - 1)]
    }

    /// Frame components of `[e_i, e_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<S> {
        (1..=self.n).map(|k| self.c(k, i, j).clone()).collect()
    }

    /// Bracket of two frame-component vectors.
    pub fn bracket_vectors(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for i in 1..=self.n {
            if x[i - 1].is_zero() {
                continue;
            }
            for j in 1..=self.n {
                if y[j - 1].is_zero() {
                    continue;
                }
                for k in 1..=self.n {
                    out[k - 1] +=
                        x[i - 1].clone() * y[j - 1].clone() * self.c(k, i, j).clone();
                }
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<()> {
        let n = self.n;
        for i in 1..=n {
            for j in (i + 1)..=n {
                for k in (j + 1)..=n {
                    for l in 1..=n {
                        let mut acc = S::zero();
                        for m in 1..=n {
                            acc += self.c(m, i, j).clone() * self.c(l, m, k).clone();
                            acc += self.c(m, j, k).clone() * self.c(l, m, i).clone();
                            acc += self.c(m, k, i).clone() * self.c(l, m, j).clone();
                        }
                        if !acc.check_zero(1e-9) {
                            return Err(Error::JacobiFailure(i, j, k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Coframe differentials recovered from the structure constants:
    /// `de^k = Σ_{i<j} (−c^k_{ij}) e^i ∧ e^j`.
    pub fn coframe_differentials(&self) -> Vec<Vec<(S, usize, usize)>> {
        (1..=self.n)
            .map(|k| {
                let mut terms = Vec::new();
                for i in 1..=self.n {
                    for j in (i + 1)..=self.n {
                        let coeff = -self.c(k, i, j).clone();
                        if !coeff.is_zero() {
                            terms.push((coeff, i, j));
                        }
                    }
                }
                terms
            })
            .collect()
    }

    /// True when `D[X,Y] = [DX,Y] + [X,DY]` on all frame pairs.
    pub fn is_derivation(&self, d: &Matrix<S>) -> Result<()> {
        let n = self.n;
        for i in 1..=n {
            for j in 1..=n {
                let ei: Vec<S> = (0..n)
                    .map(|k| if k == i - 1 { S::one() } else { S::zero() })
                    .collect();
                let ej: Vec<S> = (0..n)
                    .map(|k| if k == j - 1 { S::one() } else { S::zero() })
                    .collect();
                let lhs = d.mul_vec(&self.bracket(i, j))?;
                let dei = d.mul_vec(&ei)?;
                let dej = d.mul_vec(&ej)?;
                let rhs1 = self.bracket_vectors(&dei, &ej);
                let rhs2 = self.bracket_vectors(&ei, &dej);
                for k in 0..n {
                    let res = lhs[k].clone() - rhs1[k].clone() - rhs2[k].clone();
                    if !res.check_zero(1e-9) {
                        return Err(Error::NotDerivation(i, j));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Levi-Civita connection coefficients `Γ^k_{ij} = e^k(∇_{e_i} e_j)` and the
/// connection form `ω^k_j = Σ_i Γ^k_{ij} e^i` (row `k`, column `j`).
#[derive(Debug, Clone, PartialEq)]
pub struct Connection<S> {
    n: usize,
    gamma: Vec<S>,
}

impl<S: Scalar> Connection<S> {
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        ((i - 1) * self.n + (j - 1)) * self.n + (k - 1)
    }

    /// `Γ^k_{ij}`, 1-based.
    pub fn gamma(&self, k: usize, i: usize, j: usize) -> &S {
        &self.gamma[self.idx(i, j, k)]
    }

    /// Frame components of `∇_{e_i} e_j`.
    pub fn nabla(&self, i: usize, j: usize) -> Vec<S> {
        (1..=self.n).map(|k| self.gamma(k, i, j).clone()).collect()
    }

    /// `∇_{e_i} v` for a constant (left-invariant) vector `v`.
    pub fn nabla_vector(&self, i: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for j in 1..=self.n {
            if v[j - 1].is_zero() {
                continue;
            }
            for k in 1..=self.n {
                out[k - 1] += v[j - 1].clone() * self.gamma(k, i, j).clone();
            }
        }
        out
    }

    /// Connection 1-form entry `ω^k_j` as coframe components.
    pub fn omega_form(&self, k: usize, j: usize) -> Vec<S> {
        (1..=self.n).map(|i| self.gamma(k, i, j).clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.n
    }
}

/// Koszul formula for an orthonormal left-invariant frame:
/// `Γ^k_{ij} = (ε_k c^k_{ij} − ε_i c^i_{jk} + ε_j c^j_{ki}) / (2 ε_k)`.
pub fn levi_civita<S: Scalar>(alg: &LieAlgebra<S>, metric: &FrameMetric) -> Connection<S> {
    let n = alg.dim();
    assert_eq!(n, metric.dim());
    let mut gamma = vec![S::zero(); n * n * n];
    let half = S::from_ratio(1, 2);
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let term = metric.eps_scalar::<S>(k) * alg.c(k, i, j).clone()
                    - metric.eps_scalar::<S>(i) * alg.c(i, j, k).clone()
                    + metric.eps_scalar::<S>(j) * alg.c(j, k, i).clone();
                let value = half.clone() * metric.eps_scalar::<S>(k) * term;
                gamma[((i - 1) * n + (j - 1)) * n + (k - 1)] = value;
            }
        }
    }
    Connection { n, gamma }
}

/// Verify metric compatibility `ε_k Γ^k_{ij} = −ε_j Γ^j_{ik}` and the
/// torsion-free identity `Γ^k_{ij} − Γ^k_{ji} = c^k_{ij}` coefficient-wise.
pub fn connection_identities_hold<S: Scalar>(
    conn: &Connection<S>,
    alg: &LieAlgebra<S>,
    metric: &FrameMetric,
    tol: f64,
) -> bool {
    let n = conn.dim();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                let compat = metric.eps_scalar::<S>(k) * conn.gamma(k, i, j).clone()
                    + metric.eps_scalar::<S>(j) * conn.gamma(j, i, k).clone();
                if !compat.check_zero(tol) {
                    return false;
                }
                let torsion = conn.gamma(k, i, j).clone()
                    - conn.gamma(k, j, i).clone()
                    - alg.c(k, i, j).clone();
                if !torsion.check_zero(tol) {
                    return false;
                }
            }
        }
    }
    true
}

/// Full curvature data in the frame.
#[derive(Debug, Clone)]
pub struct CurvatureTensor<S: Scalar> {
    n: usize,
    /// `r[((l,k),i),j] = R^l_{kij} = e^l(R(e_i,e_j) e_k)`.
    r: Vec<S>,
    /// Ricci operator `Ric^j_i` (column `i` holds `Ric(e_i)` components).
    pub ricci_op: Matrix<S>,
    /// Ricci bilinear form `ric(e_i, e_j)`.
    pub ricci_form: Matrix<S>,
    /// Scalar curvature.
    pub scalar: S,
}

impl<S: Scalar> CurvatureTensor<S> {
    fn idx(&self, l: usize, k: usize, i: usize, j: usize) -> usize {
        (((l - 1) * self.n + (k - 1)) * self.n + (i - 1)) * self.n + (j - 1)
    }

    /// `R^l_{kij}`, 1-based.
    pub fn r(&self, l: usize, k: usize, i: usize, j: usize) -> &S {
        &self.r[self.idx(l, k, i, j)]
    }

    /// Frame components of `R(e_i, e_j) e_k`.
    pub fn apply(&self, i: usize, j: usize, k: usize) -> Vec<S> {
        (1..=self.n).map(|l| self.r(l, k, i, j).clone()).collect()
    }
}

/// Curvature of a left-invariant connection:
/// `R^l_{kij} = Σ_m (Γ^m_{jk} Γ^l_{im} − Γ^m_{ik} Γ^l_{jm}) − Σ_m c^m_{ij} Γ^l_{mk}`.
pub fn curvature<S: Scalar>(
    conn: &Connection<S>,
    alg: &LieAlgebra<S>,
    metric: &FrameMetric,
) -> CurvatureTensor<S> {
    let n = conn.dim();
    let mut r = vec![S::zero(); n * n * n * n];
    for l in 1..=n {
        for k in 1..=n {
            for i in 1..=n {
                for j in 1..=n {
                    let mut acc = S::zero();
                    for m in 1..=n {
                        acc += conn.gamma(m, j, k).clone() * conn.gamma(l, i, m).clone();
                        acc -= conn.gamma(m, i, k).clone() * conn.gamma(l, j, m).clone();
                        acc -= alg.c(m, i, j).clone() * conn.gamma(l, m, k).clone();
                    }
                    r[(((l - 1) * n + (k - 1)) * n + (i - 1)) * n + (j - 1)] = acc;
                }
            }
        }
    }
    let mut curv = CurvatureTensor {
        n,
        r,
        ricci_op: Matrix::zeros(n, n),
        ricci_form: Matrix::zeros(n, n),
        scalar: S::zero(),
    };
    // ric(e_i, e_k) = Σ_j e^j(R(e_j, e_i) e_k)
    for i in 1..=n {
        for k in 1..=n {
            let mut acc = S::zero();
            for j in 1..=n {
                acc += curv.r(j, k, j, i).clone();
            }
            curv.ricci_form[(i - 1, k - 1)] = acc;
        }
    }
    // Ric^m_k = ε_m ric(e_k, e_m); scalar = tr(Ric)
    for k in 1..=n {
        for m in 1..=n {
            curv.ricci_op[(m - 1, k - 1)] =
                metric.eps_scalar::<S>(m) * curv.ricci_form[(k - 1, m - 1)].clone();
        }
    }
    curv.scalar = curv.ricci_op.trace();
    curv
}

/// True when `A` is g-symmetric: `ε_j A^j_i = ε_i A^i_j`.
pub fn is_g_symmetric<S: Scalar>(a: &Matrix<S>, metric: &FrameMetric, tol: f64) -> Result<()> {
    let n = metric.dim();
    for i in 1..=n {
        for j in 1..=n {
            let lhs = metric.eps_scalar::<S>(j) * a[(j - 1, i - 1)].clone();
            let rhs = metric.eps_scalar::<S>(i) * a[(i - 1, j - 1)].clone();
            if !(lhs - rhs).check_zero(tol) {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// g-symmetric part of an endomorphism: `(D + D*)/2`, `D* = Ĝ⁻¹ Dᵀ Ĝ`.
pub fn sym_part<S: Scalar>(d: &Matrix<S>, metric: &FrameMetric) -> Matrix<S> {
    let n = metric.dim();
    let half = S::from_ratio(1, 2);
    Matrix::from_fn(n, n, |j, i| {
        let adj = metric.eps_scalar::<S>(j + 1)
            * metric.eps_scalar::<S>(i + 1)
            * d[(i, j)].clone();
        half.clone() * (d[(j, i)].clone() + adj)
    })
}

/// g-skew part: `D − sym(D)`.
pub fn skew_part<S: Scalar>(d: &Matrix<S>, metric: &FrameMetric) -> Matrix<S> {
    d - &sym_part(d, metric)
}

/// Table of `(∇_{e_i} A)` as one matrix per frame direction:
/// `(∇_{e_i}A)(Y) = ∇_{e_i}(A(Y)) − A(∇_{e_i}Y)` for left-invariant data.
pub fn covariant_derivative_endo<S: Scalar>(
    conn: &Connection<S>,
    a: &Matrix<S>,
) -> Vec<Matrix<S>> {
    let n = conn.dim();
    (1..=n)
        .map(|i| {
            Matrix::from_fn(n, n, |l, k| {
                // e^{l+1}((∇_{e_i}A)(e_{k+1}))
                let mut acc = S::zero();
                for m in 1..=n {
                    acc += conn.gamma(l + 1, i, m).clone() * a[(m - 1, k)].clone();
                    acc -= a[(l, m - 1)].clone() * conn.gamma(m, i, k + 1).clone();
                }
                acc
            })
        })
        .collect()
}

/// The covector `d tr A + δA`, with
/// `(δA)(X) = −Σ_i ε_i g((∇_{e_i}A)(e_i), X)`. The `d tr A` term vanishes
/// identically for left-invariant `A` and is kept at zero explicitly.
pub fn divergence_constraint<S: Scalar>(
    conn: &Connection<S>,
    a: &Matrix<S>,
    metric: &FrameMetric,
) -> Vec<S> {
    let n = conn.dim();
    let nabla_a = covariant_derivative_endo(conn, a);
    (1..=n)
        .map(|x| {
            // component on e_x: −Σ_i ε_i g((∇_{e_i}A)(e_i), e_x)
            let mut acc = S::zero();
            for i in 1..=n {
                let w = &nabla_a[i - 1];
                acc -= metric.eps_scalar::<S>(i)
                    * metric.eps_scalar::<S>(x)
                    * w[(x - 1, i - 1)].clone();
            }
            acc
        })
        .collect()
}

/// Antisymmetric table `F(X,Y) = (∇_X A)(Y) − (∇_Y A)(X)` on frame pairs;
/// `f[i][j]` holds the frame components of `F(e_{i+1}, e_{j+1})`.
pub fn f_tensor<S: Scalar>(conn: &Connection<S>, a: &Matrix<S>) -> Vec<Vec<Vec<S>>> {
    let n = conn.dim();
    let nabla_a = covariant_derivative_endo(conn, a);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|l| {
                            nabla_a[i][(l, j)].clone() - nabla_a[j][(l, i)].clone()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Semidirect extension `𝔤 ⋊_D ℝ e_{n+1}` with `[e_{n+1}, X] = D(X)` and the
/// metric extended by `normal_sign · e^{n+1} ⊗ e^{n+1}`.
pub fn extend_by_derivation<S: Scalar>(
    alg: &LieAlgebra<S>,
    metric: &FrameMetric,
    d: &Derivation<S>,
    normal_sign: i8,
) -> Result<(LieAlgebra<S>, FrameMetric)> {
    alg.is_derivation(d)?;
    let n = alg.dim();
    let m = n + 1;
    let mut c = vec![S::zero(); m * m * m];
    let at = |k: usize, i: usize, j: usize| ((k - 1) * m + (i - 1)) * m + (j - 1);
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                c[at(k, i, j)] = alg.c(k, i, j).clone();
            }
        }
        for j in 1..=n {
            // [e_{n+1}, e_j] = D(e_j)
            c[at(k, m, j)] = d[(k - 1, j - 1)].clone();
            c[at(k, j, m)] = -d[(k - 1, j - 1)].clone();
        }
    }
    let extended = LieAlgebra { n: m, c };
    extended.check_jacobi()?;
    Ok((extended, metric.extend(normal_sign)))
}

/// Weingarten operator of the slice orthogonal to frame direction
/// `normal_index`: `−∇ν` for a spacelike normal, `+∇ν` for a timelike one.
pub fn weingarten_of_slice<S: Scalar>(
    alg_z: &LieAlgebra<S>,
    metric_z: &FrameMetric,
    normal_index: usize,
) -> Result<SymEndo<S>> {
    let m = alg_z.dim();
    if normal_index == 0 || normal_index > m {
        return Err(Error::IndexOutOfRange {
            index: normal_index,
            dim: m,
        });
    }
    let conn = levi_civita(alg_z, metric_z);
    let sign = if metric_z.eps(normal_index) == 1 {
        S::from_int(-1)
    } else {
        S::one()
    };
    let n = m - 1;
    let amb = |i: usize| if i < normal_index { i } else { i + 1 };
    let a = Matrix::from_fn(n, n, |k, i| {
        sign.clone() * conn.gamma(amb(k + 1), amb(i + 1), normal_index).clone()
    });
    Ok(a)
}

/// Metric on the slice orthogonal to `normal_index`.
pub fn slice_metric(metric_z: &FrameMetric, normal_index: usize) -> FrameMetric {
    FrameMetric::new(
        metric_z
            .signs()
            .iter()
            .enumerate()
            .filter(|(k, _)| k + 1 != normal_index)
            .map(|(_, &s)| s)
            .collect(),
    )
}

/// The algebra with the slice direction's brackets removed is recovered by
/// restriction: keep only indices `≠ normal_index`. Valid when the slice
/// spans an ideal, which holds for extensions built by [`extend_by_derivation`].
pub fn slice_algebra<S: Scalar>(alg_z: &LieAlgebra<S>, normal_index: usize) -> LieAlgebra<S> {
    let m = alg_z.dim();
    let n = m - 1;
    let amb = |i: usize| if i < normal_index { i } else { i + 1 };
    let mut c = vec![S::zero(); n * n * n];
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                c[((k - 1) * n + (i - 1)) * n + (j - 1)] =
                    alg_z.c(amb(k), amb(i), amb(j)).clone();
            }
        }
    }
    LieAlgebra { n, c }
}
