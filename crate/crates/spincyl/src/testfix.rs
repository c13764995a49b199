//! Shared fixtures for unit tests: the worked nilpotent example, the round
//! su(2) sphere, a flat boosted extension with timelike normal, and flat
//! abelian algebras. The shipped `.model` files must parse to exactly these
//! values; a test in `model` enforces that.

use crate::clifford::FrameMetric;
use crate::lie::{CoframeTerm, LieAlgebra};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn term(coeff: Rational, i: usize, j: usize) -> CoframeTerm {
    CoframeTerm { coeff, i, j }
}

/// The nilpotent algebra `(−2e^{23}, 3e^{13} − 3e^{34}, −3e^{12} + 3e^{24}, 2e^{23})`.
pub fn example31_algebra<S: Scalar>() -> LieAlgebra<S> {
    let d = vec![
        vec![term(rat(-2, 1), 2, 3)],
        vec![term(rat(3, 1), 1, 3), term(rat(-3, 1), 3, 4)],
        vec![term(rat(-3, 1), 1, 2), term(rat(3, 1), 2, 4)],
        vec![term(rat(2, 1), 2, 3)],
    ];
    LieAlgebra::from_coframe(4, &d).expect("fixture algebra is a Lie algebra")
}

pub fn example31_metric() -> FrameMetric {
    FrameMetric::new(vec![1, 1, 1, -1])
}

/// `A = e^1 ⊗ (2e_1 − e_4) + e^2 ⊗ e_2 + e^3 ⊗ e_3 + e^4 ⊗ e_1`.
pub fn example31_a<S: Scalar>() -> Matrix<S> {
    let mut a = Matrix::zeros(4, 4);
    a[(0, 0)] = S::from_int(2);
    a[(3, 0)] = S::from_int(-1);
    a[(1, 1)] = S::one();
    a[(2, 2)] = S::one();
    a[(0, 3)] = S::one();
    a
}

/// `D = 2e^1 ⊗ (e_1 − e_4) + e^2 ⊗ e_2 + e^3 ⊗ e_3`.
pub fn example31_derivation<S: Scalar>() -> Matrix<S> {
    let mut d = Matrix::zeros(4, 4);
    d[(0, 0)] = S::from_int(2);
    d[(3, 0)] = S::from_int(-2);
    d[(1, 1)] = S::one();
    d[(2, 2)] = S::one();
    d
}

/// The worked five-dimensional extension and its metric.
pub fn example31_extension<S: Scalar>() -> (LieAlgebra<S>, FrameMetric) {
    crate::lie::extend_by_derivation(
        &example31_algebra::<S>(),
        &example31_metric(),
        &example31_derivation::<S>(),
        1,
    )
    .expect("extension")
}

/// The fixture spinors of the worked example, in the quaternion-model basis.
pub fn example31_psi<S: Scalar>() -> Vec<S> {
    vec![S::i(), S::one(), S::i(), S::one()]
}

pub fn example31_phi<S: Scalar>() -> Vec<S> {
    vec![-S::i(), S::one(), S::i(), -S::one()]
}

pub fn example31_lambda<S: Scalar>() -> S {
    S::i() * S::from_ratio(1, 2)
}

/// Round su(2): `[e_i, e_j] = c ε_{ijk} e_k` with `c = 5/2`, positive metric.
/// Constant spinors solve the coupled real system with `A = id`, `λ = 3/8`.
pub fn su2_algebra<S: Scalar>() -> (LieAlgebra<S>, FrameMetric) {
    let c = rat(5, 2);
    let d = vec![
        vec![term(-c.clone(), 2, 3)],
        vec![term(c.clone(), 1, 3)],
        vec![term(-c.clone(), 1, 2)],
    ];
    (
        LieAlgebra::from_coframe(3, &d).expect("su2"),
        FrameMetric::new(vec![1, 1, 1]),
    )
}

pub fn su2_a<S: Scalar>() -> Matrix<S> {
    Matrix::identity(3)
}

pub fn su2_lambda<S: Scalar>() -> S {
    S::from_ratio(3, 8)
}

/// Flat abelian three-space with positive metric.
pub fn abelian3<S: Scalar>() -> (LieAlgebra<S>, FrameMetric) {
    (LieAlgebra::abelian(3), FrameMetric::new(vec![1, 1, 1]))
}

/// Flat signature-(2,1) space extended by `D = 2·id + boost` with a timelike
/// normal: the extension has signature (2,2), is Einstein with constant 12,
/// and carries a constant Killing spinor with `λ = 1`. The restricted
/// structure is imaginary with `A = −2·id` on an odd-dimensional slice.
pub fn boost_algebra<S: Scalar>() -> (LieAlgebra<S>, FrameMetric) {
    (LieAlgebra::abelian(3), FrameMetric::new(vec![1, 1, -1]))
}

pub fn boost_derivation<S: Scalar>() -> Matrix<S> {
    let two = S::from_int(2);
    let mut d = Matrix::identity(3).scale(&two);
    d[(0, 2)] = -two.clone();
    d[(2, 0)] = -two;
    d
}

pub fn boost_a<S: Scalar>() -> Matrix<S> {
    Matrix::identity(3).scale(&S::from_int(-2))
}

pub fn boost_lambda<S: Scalar>() -> S {
    S::one()
}

/// Ambient Killing spinor of the boost extension in the standard
/// signature-(2,2) representation.
pub fn boost_ambient_psi<S: Scalar>() -> Vec<S> {
    vec![S::one(), -S::i(), S::one(), S::i()]
}

/// All fixture algebras with their metrics, for identity sweeps.
pub fn all_fixture_algebras<S: Scalar>() -> Vec<(LieAlgebra<S>, FrameMetric)> {
    let (su2, su2_m) = su2_algebra::<S>();
    let (ab, ab_m) = abelian3::<S>();
    let (boost, boost_m) = boost_algebra::<S>();
    let (ext, ext_m) = example31_extension::<S>();
    let (boost_ext, boost_ext_m) = crate::lie::extend_by_derivation(
        &boost,
        &boost_m,
        &boost_derivation::<S>(),
        -1,
    )
    .expect("boost extension");
    vec![
        (example31_algebra::<S>(), example31_metric()),
        (su2, su2_m),
        (ab, ab_m),
        (boost.clone(), boost_m),
        (ext, ext_m),
        (boost_ext, boost_ext_m),
    ]
}
