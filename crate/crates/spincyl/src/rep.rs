//! Concrete complex matrix representations of Clifford algebras.
//!
//! Generators act on spinors of dimension `2^⌊n/2⌋`. The default
//! construction tensors 2×2 blocks with entries in `{0, ±1, ±i}`, so exact
//! arithmetic is preserved; a generator that must square to `−1` (frame sign
//! `+1`) is an `i`-multiple of one that squares to `+1`.
//!
//! A second construction realizes the signature-(3,1) algebra through the
//! quaternionic 2×2 model, complexified by embedding the quaternions into
//! 2×2 complex blocks. Fixture spinor components written against that model
//! are meaningful only once the embedding convention is pinned; the
//! convention is selected by searching the finite candidate set for the one
//! satisfying the fixture's annihilation identities, never assumed.

use crate::clifford::{Blade, FrameMetric, Multivector, Signature};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Spinor: a complex vector of length `2^⌊n/2⌋`.
pub type Spinor<S> = Vec<S>;

/// A Clifford representation: one generator matrix per frame direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordRep<S: Scalar> {
    metric: FrameMetric,
    gammas: Vec<Matrix<S>>,
}

/// 2×2 constant blocks used by the tensor construction.
fn pauli<S: Scalar>(which: usize) -> Matrix<S> {
    let o = S::zero;
    let l = S::one;
    let i = S::i;
    let rows = match which {
        1 => vec![vec![o(), l()], vec![l(), o()]],
        2 => vec![vec![o(), -i()], vec![i(), o()]],
        3 => vec![vec![l(), o()], vec![o(), -l()]],
        _ => unreachable!(),
    };
    Matrix::from_rows(rows)
}

fn kron<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    Matrix::from_fn(a.nrows() * b.nrows(), a.ncols() * b.ncols(), |i, j| {
        let (ai, bi) = (i / b.nrows(), i % b.nrows());
        let (aj, bj) = (j / b.ncols(), j % b.ncols());
        a[(ai, aj)].clone() * b[(bi, bj)].clone()
    })
}

impl<S: Scalar> CliffordRep<S> {
    /// Tensor-product generators for an arbitrary frame sign pattern.
    pub fn build(metric: &FrameMetric) -> Self {
        let n = metric.dim();
        let m = n / 2;
        let dim = 1usize << m;
        // Anticommuting involutions tau_1..tau_n with tau_k^2 = +1:
        //   tau_{2a-1} = s3^(a-1) ⊗ s1 ⊗ 1^(m-a)
        //   tau_{2a}   = s3^(a-1) ⊗ s2 ⊗ 1^(m-a)
        //   tau_{2m+1} = s3^m            (n odd)
        let mut taus: Vec<Matrix<S>> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut factors: Vec<Matrix<S>> = Vec::new();
            if k == 2 * m + 1 {
                for _ in 0..m {
                    factors.push(pauli(3));
                }
            } else {
                let a = k.div_ceil(2);
                for _ in 0..(a - 1) {
                    factors.push(pauli(3));
                }
                factors.push(pauli(if k % 2 == 1 { 1 } else { 2 }));
                for _ in 0..(m - a) {
                    factors.push(Matrix::identity(2));
                }
            }
            let mut t = Matrix::identity(1);
            for f in &factors {
                t = kron(&t, f);
            }
            debug_assert_eq!(t.nrows(), dim);
            taus.push(t);
        }
        let gammas = (1..=n)
            .map(|k| {
                if metric.eps(k) == 1 {
                    taus[k - 1].scale(&S::i())
                } else {
                    taus[k - 1].clone()
                }
            })
            .collect();
        CliffordRep {
            metric: metric.clone(),
            gammas,
        }
    }

    /// Assemble a representation from explicit generator matrices.
    pub fn from_gammas(metric: FrameMetric, gammas: Vec<Matrix<S>>) -> Self {
        assert_eq!(metric.dim(), gammas.len());
        CliffordRep { metric, gammas }
    }

    pub fn metric(&self) -> &FrameMetric {
        &self.metric
    }

    pub fn dim_spinor(&self) -> usize {
        self.gammas[0].nrows()
    }

    pub fn dim_frame(&self) -> usize {
        self.gammas.len()
    }

    /// Generator matrix for frame direction `i` (1-based).
    pub fn gamma(&self, i: usize) -> &Matrix<S> {
        &self.gammas[i - 1]
    }

    /// Matrix of a basis blade: ordered product of its generators.
    pub fn blade_matrix(&self, blade: Blade) -> Matrix<S> {
        let mut out = Matrix::identity(self.dim_spinor());
        for i in blade.indices() {
            out = out * self.gamma(i);
        }
        out
    }

    /// Matrix of a multivector under the representation.
    pub fn multivector_matrix(&self, m: &Multivector<S>) -> Matrix<S> {
        let dim = self.dim_spinor();
        let mut out = Matrix::zeros(dim, dim);
        for (blade, coeff) in m.terms() {
            out = out + self.blade_matrix(*blade).scale(coeff);
        }
        out
    }

    /// Matrix of the Clifford action of a tangent vector with the given
    /// frame components.
    pub fn vector_matrix(&self, components: &[S]) -> Matrix<S> {
        let dim = self.dim_spinor();
        let mut out = Matrix::zeros(dim, dim);
        for (k, c) in components.iter().enumerate() {
            if !c.is_zero() {
                out = out + self.gamma(k + 1).scale(c);
            }
        }
        out
    }

    /// Matrix of the volume element `ω = γ_1 ⋯ γ_n`.
    pub fn volume_matrix(&self) -> Matrix<S> {
        self.blade_matrix(Blade::volume(self.dim_frame()))
    }

    /// Check the defining relations `γ_i γ_j + γ_j γ_i = −2 ε_i δ_ij`.
    pub fn defining_relations_hold(&self) -> bool {
        let n = self.dim_frame();
        let dim = self.dim_spinor();
        for i in 1..=n {
            for j in i..=n {
                let anti = self.gamma(i) * self.gamma(j) + self.gamma(j) * self.gamma(i);
                let expected = if i == j {
                    Matrix::identity(dim).scale(&S::from_int(-2 * self.metric.eps(i) as i64))
                } else {
                    Matrix::zeros(dim, dim)
                };
                if anti != expected {
                    return false;
                }
            }
        }
        true
    }
}

/// Clifford action of a multivector on a spinor.
pub fn act<S: Scalar>(
    m: &Multivector<S>,
    psi: &Spinor<S>,
    rep: &CliffordRep<S>,
) -> Result<Spinor<S>> {
    if psi.len() != rep.dim_spinor() {
        return Err(Error::DimensionMismatch {
            expected: rep.dim_spinor(),
            got: psi.len(),
        });
    }
    if m.max_index() > rep.dim_frame() {
        return Err(Error::IndexOutOfRange {
            index: m.max_index(),
            dim: rep.dim_frame(),
        });
    }
    rep.multivector_matrix(m).mul_vec(psi)
}

/// Volume-grading eigenvalue unit: `1` when `r − s ≡ 0 (mod 4)`, else `i`.
pub fn grading_unit<S: Scalar>(sig: Signature) -> S {
    if sig.r_minus_s_mod4() == 0 {
        S::one()
    } else {
        S::i()
    }
}

/// Projections `(1 ± τ⁻¹ω)/2` onto the half-spinor subspaces, even `n` only.
pub fn grading_projections<S: Scalar>(rep: &CliffordRep<S>) -> Result<(Matrix<S>, Matrix<S>)> {
    let n = rep.dim_frame();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let sig = rep.metric().signature();
    let tau = grading_unit::<S>(sig);
    let tau_inv = S::one() / tau;
    let omega = rep.volume_matrix();
    let id = Matrix::identity(rep.dim_spinor());
    let half = S::from_ratio(1, 2);
    let plus = (&id + &omega.scale(&tau_inv)).scale(&half);
    let minus = (&id - &omega.scale(&tau_inv)).scale(&half);
    Ok((plus, minus))
}

/// Split a spinor into its `±` halves: `ω·ψ± = ±τ·ψ±`.
pub fn split_even<S: Scalar>(
    psi: &Spinor<S>,
    rep: &CliffordRep<S>,
) -> Result<(Spinor<S>, Spinor<S>)> {
    let (p_plus, p_minus) = grading_projections(rep)?;
    Ok((p_plus.mul_vec(psi)?, p_minus.mul_vec(psi)?))
}

/// Hypersurface Clifford multiplication data: an ambient representation,
/// the frame index of the unit normal, and the normal's metric sign.
///
/// A tangent vector `v` of the hypersurface acts as `ν·v` (spacelike
/// normal) or `iν·v` (timelike normal); this restricts to an algebra
/// isomorphism of the hypersurface Clifford algebra onto the even part.
#[derive(Debug, Clone)]
pub struct HypersurfaceMult<S: Scalar> {
    rep_z: CliffordRep<S>,
    normal_index: usize,
    normal_sign: i8,
}

impl<S: Scalar> HypersurfaceMult<S> {
    pub fn new(rep_z: CliffordRep<S>, normal_index: usize) -> Self {
        let normal_sign = rep_z.metric().eps(normal_index);
        HypersurfaceMult {
            rep_z,
            normal_index,
            normal_sign,
        }
    }

    pub fn ambient_rep(&self) -> &CliffordRep<S> {
        &self.rep_z
    }

    pub fn normal_index(&self) -> usize {
        self.normal_index
    }

    pub fn normal_sign(&self) -> i8 {
        self.normal_sign
    }

    /// Induced metric on the hypersurface (normal direction removed).
    pub fn slice_metric(&self) -> FrameMetric {
        let signs: Vec<i8> = self
            .rep_z
            .metric()
            .signs()
            .iter()
            .enumerate()
            .filter(|(k, _)| k + 1 != self.normal_index)
            .map(|(_, &s)| s)
            .collect();
        FrameMetric::new(signs)
    }

    /// Ambient frame index of slice direction `i` (1-based).
    fn ambient_index(&self, i: usize) -> usize {
        if i < self.normal_index {
            i
        } else {
            i + 1
        }
    }

    /// Matrix of the `⊙`-action of slice generator `e_i`.
    pub fn odot_gamma(&self, i: usize) -> Matrix<S> {
        let g = self.rep_z.gamma(self.normal_index) * self.rep_z.gamma(self.ambient_index(i));
        if self.normal_sign == 1 {
            g
        } else {
            g.scale(&S::i())
        }
    }

    /// `⊙`-action of a slice multivector on an ambient spinor.
    pub fn act(&self, v: &Multivector<S>, psi: &Spinor<S>) -> Result<Spinor<S>> {
        let n_slice = self.rep_z.dim_frame() - 1;
        if v.max_index() > n_slice {
            return Err(Error::ContainsNormal(self.normal_index));
        }
        let mut out = vec![S::zero(); psi.len()];
        for (blade, coeff) in v.terms() {
            let mut acted = psi.clone();
            for i in blade.indices().into_iter().rev() {
                acted = self.odot_gamma(i).mul_vec(&acted)?;
            }
            for (o, a) in out.iter_mut().zip(acted) {
                *o += coeff.clone() * a;
            }
        }
        Ok(out)
    }

    /// The induced representation of the slice Clifford algebra.
    pub fn slice_rep(&self) -> CliffordRep<S> {
        let metric = self.slice_metric();
        let gammas = (1..=metric.dim()).map(|i| self.odot_gamma(i)).collect();
        CliffordRep::from_gammas(metric, gammas)
    }
}

/// Ambient representation over an even-dimensional slice representation.
///
/// For even `n` the ambient spinor space coincides with the slice's. The
/// normal acts as `Γ_ν = z·ω` where `ω` is the slice volume matrix and
/// `z ∈ {1, i}` is forced by `Γ_ν² = −ε_ν`; inverting the hypersurface
/// multiplication (`E_i = Γ_ν Γ_i`, resp. `E_i = iΓ_ν Γ_i`) then recovers
/// the ambient generators `Γ_i`. The normal is appended as direction `n+1`.
pub fn extension_rep<S: Scalar>(
    rep_m: &CliffordRep<S>,
    normal_sign: i8,
) -> Result<CliffordRep<S>> {
    let n = rep_m.dim_frame();
    if !n.is_multiple_of(2) {
        return Err(Error::OddDimension(n));
    }
    let omega = rep_m.volume_matrix();
    let w = crate::clifford::volume_square_sign(rep_m.metric().signature());
    // z² · w = −ε_ν
    let z = if w as i64 * normal_sign as i64 == -1 {
        S::one()
    } else {
        S::i()
    };
    let gamma_nu = omega.scale(&z);
    // Γ_i = −Γ_ν E_i (spacelike) or −i Γ_ν E_i (timelike)
    let factor = if normal_sign == 1 {
        -S::one()
    } else {
        -S::i()
    };
    let mut gammas: Vec<Matrix<S>> = (1..=n)
        .map(|i| (&gamma_nu * rep_m.gamma(i)).scale(&factor))
        .collect();
    gammas.push(gamma_nu);
    Ok(CliffordRep::from_gammas(
        rep_m.metric().extend(normal_sign),
        gammas,
    ))
}

/// Quaternion embedding conventions for the signature-(3,1) model.
///
/// The quaternions embed in 2×2 complex matrices two standard ways
/// (differing in the sign conventions for `j`, `k`), and a quaternionic
/// 2-vector flattens to a complex 4-vector in two orders. The four
/// combinations are the candidate set searched by the fixture loader.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuaternionConvention {
    /// `false`: `j ↦ [[0,−1],[1,0]]`, `k ↦ [[0,−i],[−i,0]]`;
    /// `true`:  `j ↦ [[0, 1],[−1,0]]`, `k ↦ [[0, i],[ i,0]]`.
    pub conjugate_embedding: bool,
    /// `false`: (q1, q2) ↦ (z1, w1, z2, w2); `true`: ↦ (z1, z2, w1, w2).
    pub interleaved_order: bool,
}

impl QuaternionConvention {
    pub const ALL: [QuaternionConvention; 4] = [
        QuaternionConvention {
            conjugate_embedding: false,
            interleaved_order: false,
        },
        QuaternionConvention {
            conjugate_embedding: false,
            interleaved_order: true,
        },
        QuaternionConvention {
            conjugate_embedding: true,
            interleaved_order: false,
        },
        QuaternionConvention {
            conjugate_embedding: true,
            interleaved_order: true,
        },
    ];

    pub fn describe(&self) -> String {
        format!(
            "quaternion embedding: j↦{}, component order: {}",
            if self.conjugate_embedding {
                "[[0,1],[-1,0]]"
            } else {
                "[[0,-1],[1,0]]"
            },
            if self.interleaved_order {
                "(z1,z2,w1,w2)"
            } else {
                "(z1,w1,z2,w2)"
            }
        )
    }
}

/// A quaternion with exact complex-scalar coefficients of 1, i, j, k.
#[derive(Clone)]
struct Quat<S>([S; 4]);

impl<S: Scalar> Quat<S> {
    fn unit(which: usize) -> Self {
        let mut q = [S::zero(), S::zero(), S::zero(), S::zero()];
        q[which] = S::one();
        Quat(q)
    }

    fn zero() -> Self {
        Quat([S::zero(), S::zero(), S::zero(), S::zero()])
    }

    fn neg(&self) -> Self {
        Quat([
            -self.0[0].clone(),
            -self.0[1].clone(),
            -self.0[2].clone(),
            -self.0[3].clone(),
        ])
    }

    /// 2×2 complex block of left multiplication by this quaternion.
    fn block(&self, conv: QuaternionConvention) -> Matrix<S> {
        let embed = |which: usize| -> Matrix<S> {
            let o = S::zero;
            let l = S::one;
            let i = S::i;
            let rows = match (which, conv.conjugate_embedding) {
                (0, _) => vec![vec![l(), o()], vec![o(), l()]],
                (1, _) => vec![vec![i(), o()], vec![o(), -i()]],
                (2, false) => vec![vec![o(), -l()], vec![l(), o()]],
                (3, false) => vec![vec![o(), -i()], vec![-i(), o()]],
                (2, true) => vec![vec![o(), l()], vec![-l(), o()]],
                (3, true) => vec![vec![o(), i()], vec![i(), o()]],
                _ => unreachable!(),
            };
            Matrix::from_rows(rows)
        };
        let mut out = Matrix::zeros(2, 2);
        for which in 0..4 {
            if !self.0[which].is_zero() {
                out = out + embed(which).scale(&self.0[which]);
            }
        }
        out
    }
}

/// Flatten a 2×2 quaternionic matrix to a 4×4 complex one.
#[allow(clippy::needless_range_loop)]
fn quat_matrix_to_complex<S: Scalar>(
    q: &[[Quat<S>; 2]; 2],
    conv: QuaternionConvention,
) -> Matrix<S> {
    let mut out = Matrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            let block = q[a][b].block(conv);
            for bi in 0..2 {
                for bj in 0..2 {
                    let (row, col) = if conv.interleaved_order {
                        (a + 2 * bi, b + 2 * bj)
                    } else {
                        (2 * a + bi, 2 * b + bj)
                    };
                    out[(row, col)] = block[(bi, bj)].clone();
                }
            }
        }
    }
    out
}

/// The signature-(3,1) representation through the quaternionic model,
/// with generators `E_i = ω·Ẽ_i`, for a fixed embedding convention.
pub fn cl31_quaternion_rep<S: Scalar>(conv: QuaternionConvention) -> CliffordRep<S> {
    let i_q = || Quat::<S>::unit(1);
    let j_q = || Quat::<S>::unit(2);
    let one_q = || Quat::<S>::unit(0);
    let zero_q = Quat::<S>::zero;
    // Orthonormal basis of the quaternionic model:
    //   Ẽ1 = diag(i, −i), Ẽ2 = diag(j, −j),
    //   Ẽ3 = [[0, 1], [−1, 0]], Ẽ4 = [[0, 1], [1, 0]].
    let tildes_q = [
        [[i_q(), zero_q()], [zero_q(), i_q().neg()]],
        [[j_q(), zero_q()], [zero_q(), j_q().neg()]],
        [[zero_q(), one_q()], [one_q().neg(), zero_q()]],
        [[zero_q(), one_q()], [one_q(), zero_q()]],
    ];
    let tildes: Vec<Matrix<S>> = tildes_q
        .iter()
        .map(|q| quat_matrix_to_complex(q, conv))
        .collect();
    let omega = tildes
        .iter()
        .fold(Matrix::identity(4), |acc, t| acc * t);
    let gammas = tildes.iter().map(|t| &omega * t).collect();
    CliffordRep::from_gammas(Signature::new(3, 1).frame_metric(), gammas)
}

/// Pin the quaternion embedding convention from fixture data: search the
/// candidate set for the convention whose generators annihilate the given
/// spinor through `(E_1 − E_2E_3)ψ = (E_2 − E_3E_1)ψ = (E_3 − E_1E_2)ψ = 0`.
pub fn select_quaternion_convention<S: Scalar>(
    psi: &Spinor<S>,
) -> Result<(QuaternionConvention, CliffordRep<S>)> {
    if psi.len() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: psi.len(),
        });
    }
    for conv in QuaternionConvention::ALL {
        let rep = cl31_quaternion_rep::<S>(conv);
        let pairs = [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)];
        let ok = pairs.iter().all(|&(a, b, c)| {
            let lhs = rep.gamma(a).mul_vec(psi).expect("dims");
            let prod = rep.gamma(b) * rep.gamma(c);
            let rhs = prod.mul_vec(psi).expect("dims");
            lhs.iter().zip(&rhs).all(|(x, y)| (x.clone() - y.clone()).is_zero())
        });
        if ok {
            return Ok((conv, rep));
        }
    }
    Err(Error::NoConvention)
}
