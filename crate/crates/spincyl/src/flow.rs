//! The generalized-cylinder evolution system and its constraint monitor.
//!
//! The system evolves a pair `(g_t, A_t)` of matrices over a fixed frame:
//! `ġ(X,Y) = −2 g(A X, Y)`, `Ȧ = −Ric(g_t) + (tr A) A + K·id`.
//! When the initial data satisfies
//! `scal = (n−1)K − tr A² + (tr A)²` and `d tr A + δA = 0`,
//! both quantities are conserved along exact solutions, so their drift
//! measures integration quality.
//!
//! The right-hand side needs the Levi-Civita connection and Ricci operator
//! of a general (non-diagonal) left-invariant metric; the Koszul engine
//! here works with an explicit Gram matrix and inverse-metric contractions,
//! and is cross-checked against the orthonormal-frame engine in exact
//! arithmetic at `t = 0`.

use crate::lie::LieAlgebra;
use crate::matrix::Matrix;
use crate::scalar::{Cf64, Scalar};
use crate::{Error, Result};

/// Connection coefficients for a general left-invariant Gram matrix.
pub struct GramConnection<S> {
    n: usize,
    gamma: Vec<S>,
}

impl<S: Scalar> GramConnection<S> {
    /// `Γ^l_{ij}`, 1-based.
    pub fn gamma(&self, l: usize, i: usize, j: usize) -> &S {
        &self.gamma[((i - 1) * self.n + (j - 1)) * self.n + (l - 1)]
    }
}

/// Inverse of a Gram matrix through exact elimination.
fn invert<S: Scalar>(g: &Matrix<S>) -> Result<Matrix<S>> {
    let n = g.nrows();
    let aug = g.hstack(&Matrix::identity(n));
    let (r, pivots) = aug.rref();
    if pivots.len() < n || pivots.iter().any(|&p| p >= n) {
        return Err(Error::SingularMetric(f64::NAN));
    }
    Ok(Matrix::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Koszul formula with explicit inverse-metric contractions:
/// `Γ^l_{ij} = ½ Σ_k G^{lk} (B_{ij,k} − B_{jk,i} + B_{ki,j})`,
/// `B_{ij,k} = g([e_i, e_j], e_k)`.
pub fn gram_levi_civita<S: Scalar>(
    alg: &LieAlgebra<S>,
    gram: &Matrix<S>,
) -> Result<GramConnection<S>> {
    let n = alg.dim();
    let ginv = invert(gram)?;
    let b = |i: usize, j: usize, k: usize| -> S {
        let mut acc = S::zero();
        for m in 1..=n {
            acc += alg.c(m, i, j).clone() * gram[(m - 1, k - 1)].clone();
        }
        acc
    };
    let half = S::from_ratio(1, 2);
    let mut gamma = vec![S::zero(); n * n * n];
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                let mut acc = S::zero();
                for k in 1..=n {
                    let term = b(i, j, k) - b(j, k, i) + b(k, i, j);
                    acc += ginv[(l - 1, k - 1)].clone() * term;
                }
                gamma[((i - 1) * n + (j - 1)) * n + (l - 1)] = half.clone() * acc;
            }
        }
    }
    Ok(GramConnection { n, gamma })
}

/// Ricci bilinear form and operator for a general left-invariant metric.
pub fn gram_ricci<S: Scalar>(
    alg: &LieAlgebra<S>,
    gram: &Matrix<S>,
) -> Result<(Matrix<S>, Matrix<S>, S)> {
    let n = alg.dim();
    let conn = gram_levi_civita(alg, gram)?;
    // ric(e_i, e_k) = Σ_j e^j(R(e_j, e_i) e_k)
    let mut ric = Matrix::zeros(n, n);
    for i in 1..=n {
        for k in 1..=n {
            let mut acc = S::zero();
            for j in 1..=n {
                // e^j(R(e_j, e_i) e_k)
                for m in 1..=n {
                    acc += conn.gamma(j, j, m).clone() * conn.gamma(m, i, k).clone();
                    acc -= conn.gamma(j, i, m).clone() * conn.gamma(m, j, k).clone();
                    acc -= alg.c(m, j, i).clone() * conn.gamma(j, m, k).clone();
                }
            }
            ric[(i - 1, k - 1)] = acc;
        }
    }
    let ginv = invert(gram)?;
    let ric_op = &ginv * &ric;
    let scalar = ric_op.trace();
    Ok((ric, ric_op, scalar))
}

/// Divergence covector `(d tr A + δA)` in a general frame:
/// `(δA)_k = −Σ_{i,m} (Γ^i_{im} A^m_k − A^i_m Γ^m_{ik})`; the `d tr A`
/// term vanishes for constant `A`.
pub fn gram_divergence<S: Scalar>(
    alg: &LieAlgebra<S>,
    gram: &Matrix<S>,
    a: &Matrix<S>,
) -> Result<Vec<S>> {
    let n = alg.dim();
    let conn = gram_levi_civita(alg, gram)?;
    Ok((1..=n)
        .map(|k| {
            let mut acc = S::zero();
            for i in 1..=n {
                for m in 1..=n {
                    acc -= conn.gamma(i, i, m).clone() * a[(m - 1, k - 1)].clone();
                    acc += a[(i - 1, m - 1)].clone() * conn.gamma(m, i, k).clone();
                }
            }
            acc
        })
        .collect())
}

/// State of the evolution at one time.
#[derive(Debug, Clone)]
pub struct CylinderState<S: Scalar> {
    pub t: f64,
    pub g: Matrix<S>,
    pub a: Matrix<S>,
}

/// Integration configuration.
#[derive(Debug, Clone)]
pub struct FlowConfig {
    pub k_constant: f64,
    pub step: f64,
    pub t_end: f64,
    /// Emit every `output_stride`-th step (plus the final state).
    pub output_stride: usize,
    /// Tolerance on the initial constraints; integration refuses to start
    /// beyond it unless `force` is set.
    pub initial_tolerance: f64,
    pub force: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            k_constant: 0.0,
            step: 1e-3,
            t_end: 1.0,
            output_stride: 10,
            initial_tolerance: 1e-9,
            force: false,
        }
    }
}

/// Right-hand side of the evolution system.
pub fn flow_rhs<S: Scalar>(
    state_g: &Matrix<S>,
    state_a: &Matrix<S>,
    k_constant: &S,
    alg: &LieAlgebra<S>,
) -> Result<(Matrix<S>, Matrix<S>)> {
    let n = alg.dim();
    // ġ_{ij} = −2 g(A e_i, e_j) = −2 (G A)_{ij}  with A acting columnwise;
    // stored A has A(e_i) in column i, so g(A e_i, e_j) = (Aᵀ G)_{ij}.
    let minus_two = S::from_int(-2);
    let g_dot = (state_a.transpose() * state_g).scale(&minus_two);
    let (_, ric_op, _) = gram_ricci(alg, state_g)?;
    let tr_a = state_a.trace();
    let a_dot = -&ric_op + state_a.scale(&tr_a) + Matrix::identity(n).scale(k_constant);
    Ok((g_dot, a_dot))
}

/// Constraint residuals at a state: scalar constraint
/// `scal(g) − [(n−1)K − tr A² + (tr A)²]` and the divergence covector.
pub fn constraint_monitor<S: Scalar>(
    state_g: &Matrix<S>,
    state_a: &Matrix<S>,
    k_constant: &S,
    alg: &LieAlgebra<S>,
) -> Result<(S, Vec<S>)> {
    let n = alg.dim() as i64;
    let (_, _, scal) = gram_ricci(alg, state_g)?;
    let tr_a = state_a.trace();
    let tr_a2 = (state_a * state_a).trace();
    let expected = S::from_int(n - 1) * k_constant.clone() - tr_a2 + tr_a.clone() * tr_a;
    let scalar_residual = scal - expected;
    let covector = gram_divergence(alg, state_g, state_a)?;
    Ok((scalar_residual, covector))
}

/// One sampled record of a trajectory.
#[derive(Debug, Clone)]
pub struct FlowSample {
    pub t: f64,
    pub g: Vec<f64>,
    pub a: Vec<f64>,
    pub scalar_residual: f64,
    pub covector_residual: f64,
}

/// Integrate with the classical fourth-order one-step scheme at fixed step.
/// Stops with an error at the first singular metric encountered.
pub fn integrate(
    state0: &CylinderState<Cf64>,
    cfg: &FlowConfig,
    alg: &LieAlgebra<Cf64>,
) -> Result<Vec<FlowSample>> {
    let k = Cf64::new(cfg.k_constant, 0.0);
    let (res0, cov0) = constraint_monitor(&state0.g, &state0.a, &k, alg)?;
    let cov0_mag = cov0.iter().map(|x| x.magnitude()).fold(0.0, f64::max);
    if !cfg.force && (res0.magnitude() > cfg.initial_tolerance || cov0_mag > cfg.initial_tolerance)
    {
        return Err(Error::Precondition(format!(
            "initial constraints violated: scalar {}, divergence {}",
            res0.magnitude(),
            cov0_mag
        )));
    }
    let h = cfg.step;
    if h <= 0.0 {
        return Err(Error::Precondition("step size must be positive".into()));
    }
    if cfg.output_stride == 0 {
        return Err(Error::Precondition("output stride must be positive".into()));
    }
    let steps = (cfg.t_end / h).round() as usize;
    let mut g = state0.g.clone();
    let mut a = state0.a.clone();
    let mut samples = Vec::new();
    let record = |samples: &mut Vec<FlowSample>, t: f64, g: &Matrix<Cf64>, a: &Matrix<Cf64>| -> Result<()> {
        let (sres, cov) = constraint_monitor(g, a, &k, alg)?;
        let n = alg.dim();
        let flat = |m: &Matrix<Cf64>| -> Vec<f64> {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| m[(i, j)].re)
                .collect()
        };
        samples.push(FlowSample {
            t,
            g: flat(g),
            a: flat(a),
            scalar_residual: sres.magnitude(),
            covector_residual: cov.iter().map(|x| x.magnitude()).fold(0.0, f64::max),
        });
        Ok(())
    };
    record(&mut samples, 0.0, &g, &a)?;
    for step in 0..steps {
        let t = step as f64 * h;
        let rhs = |g: &Matrix<Cf64>, a: &Matrix<Cf64>| -> Result<(Matrix<Cf64>, Matrix<Cf64>)> {
            // a singular metric raises through the inversion
            flow_rhs(g, a, &k, alg).map_err(|e| match e {
                Error::SingularMetric(_) => Error::SingularMetric(t),
                other => other,
            })
        };
        let hs = Cf64::new(h, 0.0);
        let half = Cf64::new(0.5, 0.0);
        let (k1g, k1a) = rhs(&g, &a)?;
        let (k2g, k2a) = rhs(
            &(&g + &k1g.scale(&(hs * half))),
            &(&a + &k1a.scale(&(hs * half))),
        )?;
        let (k3g, k3a) = rhs(
            &(&g + &k2g.scale(&(hs * half))),
            &(&a + &k2a.scale(&(hs * half))),
        )?;
        let (k4g, k4a) = rhs(&(&g + &k3g.scale(&hs)), &(&a + &k3a.scale(&hs)))?;
        let sixth = Cf64::new(h / 6.0, 0.0);
        let two = Cf64::new(2.0, 0.0);
        g = &g + &(&(&k1g + &k2g.scale(&two)) + &(&k3g.scale(&two) + &k4g)).scale(&sixth);
        a = &a + &(&(&k1a + &k2a.scale(&two)) + &(&k3a.scale(&two) + &k4a)).scale(&sixth);
        let t_next = (step + 1) as f64 * h;
        if (step + 1) % cfg.output_stride == 0 || step + 1 == steps {
            record(&mut samples, t_next, &g, &a)?;
        }
    }
    Ok(samples)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(m: &Matrix<Cf64>, order: usize) -> Matrix<Cf64> {
    let n = m.nrows();
    let norm = m.max_magnitude();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil().max(0.0) as usize
    } else {
        0
    };
    let scaled = m.scale(&Cf64::new(1.0 / (1u64 << squarings) as f64, 0.0));
    let mut term = Matrix::<Cf64>::identity(n);
    let mut sum = Matrix::<Cf64>::identity(n);
    for k in 1..=order {
        term = &term * &scaled;
        term = term.scale(&Cf64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Independent oracle for trajectories arising from a derivation extension:
/// the slice family is `g_t = exp(−tD)ᵀ Ĝ exp(−tD)` along the unit-speed
/// normal geodesic. Returns the largest deviation of the sampled `g` from
/// the oracle.
pub fn oracle_compare(
    derivation: &Matrix<Cf64>,
    g0: &Matrix<Cf64>,
    samples: &[FlowSample],
) -> f64 {
    let n = g0.nrows();
    let mut worst = 0.0f64;
    for s in samples {
        let phi = expm(&derivation.scale(&Cf64::new(-s.t, 0.0)), 24);
        let oracle = &phi.transpose() * &(g0 * &phi);
        for i in 0..n {
            for j in 0..n {
                let dev = (oracle[(i, j)].re - s.g[i * n + j]).abs();
                worst = worst.max(dev);
            }
        }
    }
    worst
}

/// Trajectory export: one line per sample, comma-separated, with a header
/// documenting the column order
/// `t, g(row-major), A(row-major), scalar_residual, covector_residual`.
pub fn export_trajectory(samples: &[FlowSample], n: usize) -> String {
    let mut out = String::new();
    let mut header: Vec<String> = vec!["t".into()];
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("g{i}{j}"));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            header.push(format!("a{i}{j}"));
        }
    }
    header.push("scalar_residual".into());
    header.push("covector_residual".into());
    out.push_str(&header.join(","));
    out.push('\n');
    for s in samples {
        let mut row: Vec<String> = vec![format!("{:.12e}", s.t)];
        row.extend(s.g.iter().map(|v| format!("{v:.12e}")));
        row.extend(s.a.iter().map(|v| format!("{v:.12e}")));
        row.push(format!("{:.12e}", s.scalar_residual));
        row.push(format!("{:.12e}", s.covector_residual));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Largest constraint drift over a trajectory (both residuals).
pub fn max_drift(samples: &[FlowSample]) -> f64 {
    samples
        .iter()
        .map(|s| s.scalar_residual.max(s.covector_residual))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::clifford::FrameMetric;
    use crate::lie::{curvature, levi_civita};
    use crate::scalar::Exact;
    use crate::testfix;

    fn gram_of(metric: &FrameMetric) -> Matrix<Exact> {
        let n = metric.dim();
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Exact::from_int(metric.eps(i + 1) as i64)
            } else {
                Exact::zero()
            }
        })
    }

    #[test]
    fn gram_engine_agrees_with_orthonormal_engine() {
        // dual-route check in exact arithmetic at diagonal metrics
        for (alg, metric) in testfix::all_fixture_algebras::<Exact>() {
            let gram = gram_of(&metric);
            let conn = levi_civita(&alg, &metric);
            let gconn = gram_levi_civita(&alg, &gram).unwrap();
            let n = alg.dim();
            for i in 1..=n {
                for j in 1..=n {
                    for l in 1..=n {
                        assert_eq!(
                            gconn.gamma(l, i, j),
                            conn.gamma(l, i, j),
                            "Γ^{l}_{i}{j}"
                        );
                    }
                }
            }
            let curv = curvature(&conn, &alg, &metric);
            let (_, ric_op, scal) = gram_ricci(&alg, &gram).unwrap();
            assert_eq!(ric_op, curv.ricci_op);
            assert_eq!(scal, curv.scalar);
            let a = Matrix::<Exact>::identity(n);
            assert_eq!(
                gram_divergence(&alg, &gram, &a).unwrap(),
                crate::lie::divergence_constraint(&conn, &a, &metric)
            );
        }
    }

    #[test]
    fn rhs_at_t_zero_exact() {
        // ġ entries from the worked example, exact arithmetic
        let alg = testfix::example31_algebra::<Exact>();
        let metric = testfix::example31_metric();
        let gram = gram_of(&metric);
        let a = testfix::example31_a::<Exact>();
        let k = Exact::from_int(-4);
        let (g_dot, a_dot) = flow_rhs(&gram, &a, &k, &alg).unwrap();
        let e = Exact::from_int;
        assert_eq!(g_dot[(0, 0)], e(-4));
        assert_eq!(g_dot[(0, 3)], e(-2));
        assert_eq!(g_dot[(3, 0)], e(-2));
        assert_eq!(g_dot[(1, 1)], e(-2));
        assert_eq!(g_dot[(2, 2)], e(-2));
        assert_eq!(g_dot[(3, 3)], e(0));
        // ġ is symmetric
        assert_eq!(g_dot, g_dot.transpose());
        // the slice family of the group extension satisfies the same system:
        // Ȧ at t = 0 equals the commutator [D, A]
        let d = testfix::example31_derivation::<Exact>();
        assert_eq!(a_dot, d.commutator(&a));
    }

    #[test]
    fn stationary_ricci_flat_state() {
        let (alg, metric) = testfix::abelian3::<Exact>();
        let gram = gram_of(&metric);
        let a = Matrix::<Exact>::zeros(3, 3);
        let (g_dot, a_dot) = flow_rhs(&gram, &a, &Exact::zero(), &alg).unwrap();
        assert!(g_dot.is_zero_within(0.0));
        assert!(a_dot.is_zero_within(0.0));
    }

    #[test]
    fn abelian_identity_state_rhs() {
        // abelian, g = id, A = id: Ric = 0, so ġ = −2g and Ȧ = n·A + K·id
        // reduces to Ȧ = (tr A)·A + K·id with tr A = 3
        let alg = LieAlgebra::<Exact>::abelian(3);
        let gram = Matrix::<Exact>::identity(3);
        let a = Matrix::<Exact>::identity(3);
        let k = Exact::from_ratio(5, 7);
        let (g_dot, a_dot) = flow_rhs(&gram, &a, &k, &alg).unwrap();
        assert_eq!(g_dot, Matrix::identity(3).scale(&Exact::from_int(-2)));
        let expected = Matrix::identity(3).scale(&(Exact::from_int(3) + k));
        assert_eq!(a_dot, expected);
    }

    #[test]
    fn constraint_monitor_zero_at_example_initial_data() {
        let alg = testfix::example31_algebra::<Exact>();
        let gram = gram_of(&testfix::example31_metric());
        let a = testfix::example31_a::<Exact>();
        let (sres, cov) = constraint_monitor(&gram, &a, &Exact::from_int(-4), &alg).unwrap();
        assert!(sres.is_zero());
        assert!(cov.iter().all(|x| x.is_zero()));
        // perturbed A breaks the scalar constraint
        let mut bad = a.clone();
        bad[(0, 0)] = Exact::from_int(3);
        let (sres_bad, _) = constraint_monitor(&gram, &bad, &Exact::from_int(-4), &alg).unwrap();
        assert!(!sres_bad.is_zero());
    }

    fn example_float() -> (LieAlgebra<Cf64>, Matrix<Cf64>, Matrix<Cf64>, Matrix<Cf64>) {
        let alg = testfix::example31_algebra::<Cf64>();
        let metric = testfix::example31_metric();
        let n = 4;
        let gram = Matrix::<Cf64>::from_fn(n, n, |i, j| {
            if i == j {
                Cf64::from_int(metric.eps(i + 1) as i64)
            } else {
                Cf64::zero()
            }
        });
        (
            alg,
            gram,
            testfix::example31_a::<Cf64>(),
            testfix::example31_derivation::<Cf64>(),
        )
    }

    #[test]
    fn integrates_example_and_tracks_oracle() {
        let (alg, g0, a0, d) = example_float();
        let state0 = CylinderState {
            t: 0.0,
            g: g0.clone(),
            a: a0,
        };
        let cfg = FlowConfig {
            k_constant: -4.0,
            step: 1e-3,
            t_end: 0.25,
            output_stride: 25,
            ..Default::default()
        };
        let samples = integrate(&state0, &cfg, &alg).unwrap();
        assert!(samples.len() > 5);
        let drift = max_drift(&samples);
        assert!(drift < 1e-6, "drift {drift}");
        let dev = oracle_compare(&d, &g0, &samples);
        assert!(dev < 1e-6, "oracle deviation {dev}");
        // wrong K: deviation grows with t
        let cfg_bad = FlowConfig {
            k_constant: 4.0,
            force: true,
            ..cfg
        };
        let samples_bad = integrate(&state0, &cfg_bad, &alg).unwrap();
        let dev_bad = oracle_compare(&d, &g0, &samples_bad);
        assert!(dev_bad > 1e-2, "wrong K must drift, got {dev_bad}");
    }

    #[test]
    fn refuses_bad_initial_data_unless_forced() {
        let (alg, g0, a0, _) = example_float();
        let mut bad_a = a0;
        bad_a[(1, 1)] = Cf64::new(7.0, 0.0);
        let state0 = CylinderState {
            t: 0.0,
            g: g0,
            a: bad_a,
        };
        let cfg = FlowConfig {
            k_constant: -4.0,
            t_end: 0.01,
            ..Default::default()
        };
        assert!(matches!(
            integrate(&state0, &cfg, &alg),
            Err(Error::Precondition(_))
        ));
        let forced = FlowConfig {
            force: true,
            ..cfg
        };
        integrate(&state0, &forced, &alg).unwrap();
    }

    #[test]
    fn stationary_trajectory_is_constant() {
        let alg = LieAlgebra::<Cf64>::abelian(3);
        let state0 = CylinderState {
            t: 0.0,
            g: Matrix::identity(3),
            a: Matrix::zeros(3, 3),
        };
        let cfg = FlowConfig {
            k_constant: 0.0,
            step: 1e-2,
            t_end: 0.5,
            output_stride: 10,
            ..Default::default()
        };
        let samples = integrate(&state0, &cfg, &alg).unwrap();
        for s in &samples {
            for (idx, v) in s.g.iter().enumerate() {
                let expected = if idx % 4 == 0 { 1.0 } else { 0.0 };
                assert!((v - expected).abs() < 1e-14);
            }
            assert!(s.a.iter().all(|v| v.abs() < 1e-14));
        }
    }

    #[test]
    fn halving_step_gives_order_four_deviation() {
        let (alg, g0, a0, d) = example_float();
        let state0 = CylinderState {
            t: 0.0,
            g: g0.clone(),
            a: a0,
        };
        let run = |h: f64| {
            let cfg = FlowConfig {
                k_constant: -4.0,
                step: h,
                t_end: 0.25,
                output_stride: usize::MAX,
                ..Default::default()
            };
            let samples = integrate(&state0, &cfg, &alg).unwrap();
            (max_drift(&samples), oracle_compare(&d, &g0, &samples))
        };
        // The deviation from the exact slice family converges at order 4.
        // The constraint drift does not scale with h at all: the constraint
        // functions have vanishing gradient along the solution family (a
        // perturbation d of the state changes them by O(d²)), so the O(h⁴)
        // trajectory error contributes O(h⁸), under the roundoff floor.
        let mut previous: Option<f64> = None;
        for h in [8e-3, 4e-3, 2e-3] {
            let (drift, dev) = run(h);
            assert!(drift < 1e-12, "drift stays at roundoff, got {drift} at h={h}");
            if let Some(prev) = previous {
                let ratio = prev / dev;
                assert!(
                    (12.0..=20.0).contains(&ratio),
                    "deviation ratio {ratio} at h={h}"
                );
            }
            previous = Some(dev);
        }
    }

    #[test]
    fn g_symmetry_of_a_is_preserved() {
        // the invariance of the symmetric subspace is preserved far beyond
        // the O(h^4) one would accept: the defect stays at roundoff for
        // every step size, like the constraint drift
        let (alg, g0, a0, _) = example_float();
        let state0 = CylinderState {
            t: 0.0,
            g: g0,
            a: a0,
        };
        for h in [4e-3, 1e-3] {
            let cfg = FlowConfig {
                k_constant: -4.0,
                step: h,
                t_end: 0.25,
                output_stride: 5,
                ..Default::default()
            };
            let samples = integrate(&state0, &cfg, &alg).unwrap();
            let mut worst = 0.0f64;
            for s in &samples {
                for i in 0..4 {
                    for j in 0..4 {
                        let ga_ij: f64 =
                            (0..4).map(|m| s.g[i * 4 + m] * s.a[m * 4 + j]).sum();
                        let ga_ji: f64 =
                            (0..4).map(|m| s.g[j * 4 + m] * s.a[m * 4 + i]).sum();
                        worst = worst.max((ga_ij - ga_ji).abs());
                    }
                }
            }
            assert!(worst < 1e-12, "symmetry defect {worst} at h={h}");
        }
    }

    #[test]
    fn singular_metric_detected() {
        // abelian algebra with A = −id drives g to zero at t = 1/2:
        // ġ = −2g gives g(t) = e^{−2t}... stays positive; instead use a
        // state pushed through a sign change by forcing large A
        let alg = LieAlgebra::<Cf64>::abelian(2);
        let mut g = Matrix::<Cf64>::identity(2);
        g[(1, 1)] = Cf64::new(1e-14, 0.0);
        let state0 = CylinderState {
            t: 0.0,
            g,
            a: Matrix::zeros(2, 2),
        };
        let cfg = FlowConfig {
            k_constant: 0.0,
            step: 1e-2,
            t_end: 0.1,
            force: true,
            ..Default::default()
        };
        // the near-singular Gram matrix still inverts in f64; shrink to an
        // exactly singular one to trigger the error path
        let mut g_sing = Matrix::<Cf64>::identity(2);
        g_sing[(1, 1)] = Cf64::zero();
        let state_sing = CylinderState {
            t: 0.0,
            g: g_sing,
            a: Matrix::zeros(2, 2),
        };
        assert!(matches!(
            integrate(&state_sing, &cfg, &alg),
            Err(Error::SingularMetric(_))
        ));
        integrate(&state0, &cfg, &alg).unwrap();
    }

    #[test]
    fn export_format_round_trips_through_parsing() {
        let (alg, g0, a0, _) = example_float();
        let state0 = CylinderState {
            t: 0.0,
            g: g0,
            a: a0,
        };
        let cfg = FlowConfig {
            k_constant: -4.0,
            step: 1e-2,
            t_end: 0.05,
            output_stride: 1,
            ..Default::default()
        };
        let samples = integrate(&state0, &cfg, &alg).unwrap();
        let text = export_trajectory(&samples, 4);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), 1 + 16 + 16 + 2);
        assert!(header.starts_with("t,g11,g12"));
        for (line, sample) in lines.zip(&samples) {
            let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(fields.len(), 35);
            assert!((fields[0] - sample.t).abs() < 1e-15);
            assert!((fields[1] - sample.g[0]).abs() < 1e-12);
        }
    }
}
