//! Blade-level Clifford algebra of arbitrary signature.
//!
//! Conventions, fixed once for the whole crate:
//! * frame signs `ε_i = ±1`, metric `g = Σ ε_i e^i ⊗ e^i`;
//! * Clifford relation `v·w + w·v = −2 g(v, w)`, so `e_i² = −ε_i`;
//! * volume element `ω = e_1 ⋯ e_n`, satisfying `ω² = (−1)^{n(n+1)/2 + s}`
//!   and `e_i ω = (−1)^{n−1} ω e_i`.
//!
//! Signature `(r, s)` orders the frame as `ε_1 … ε_r = +1`,
//! `ε_{r+1} … ε_n = −1`; [`FrameMetric`] carries an arbitrary sign pattern
//! for geometries whose natural coframe is not sign-sorted.

use crate::scalar::Scalar;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Signature `(r, s)`: counts of `+1` and `−1` frame directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub r: usize,
    pub s: usize,
}

impl Signature {
    pub fn new(r: usize, s: usize) -> Self {
        assert!(r + s >= 1, "dimension must be at least 1");
        Signature { r, s }
    }

    pub fn dim(&self) -> usize {
        self.r + self.s
    }

    /// Sign-sorted frame metric: `+1` first, then `−1`.
    pub fn frame_metric(&self) -> FrameMetric {
        let mut signs = vec![1i8; self.r];
        signs.extend(vec![-1i8; self.s]);
        FrameMetric::new(signs)
    }

    /// `r − s` reduced mod 4, in `0..4`.
    pub fn r_minus_s_mod4(&self) -> usize {
        (self.r as i64 - self.s as i64).rem_euclid(4) as usize
    }
}

/// Diagonal frame signs `ε_i` in frame order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameMetric {
    signs: Vec<i8>,
}

impl FrameMetric {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(!signs.is_empty(), "dimension must be at least 1");
        assert!(signs.iter().all(|&s| s == 1 || s == -1));
        FrameMetric { signs }
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    /// Sign of frame direction `i` (1-based).
    pub fn eps(&self, i: usize) -> i8 {
        self.signs[i - 1]
    }

    pub fn eps_scalar<S: Scalar>(&self, i: usize) -> S {
        S::from_int(self.eps(i) as i64)
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn signature(&self) -> Signature {
        let r = self.signs.iter().filter(|&&s| s == 1).count();
        Signature::new(r, self.signs.len() - r)
    }

    /// Metric with one extra direction of the given sign appended.
    pub fn extend(&self, normal_sign: i8) -> FrameMetric {
        let mut signs = self.signs.clone();
        signs.push(normal_sign);
        FrameMetric::new(signs)
    }

    /// The opposite metric `−g`: every frame sign flipped.
    pub fn opposite(&self) -> FrameMetric {
        FrameMetric::new(self.signs.iter().map(|s| -s).collect())
    }
}

/// Basis blade `e_{i1} ⋯ e_{ik}`, stored as a bitmask (bit `i-1` ⇔ `e_i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Blade(u32);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Build from strictly increasing 1-based indices.
    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut mask = 0u32;
        let mut prev = 0usize;
        for &i in indices {
            if i == 0 || i > 32 {
                return Err(Error::IndexOutOfRange { index: i, dim: 32 });
            }
            assert!(i > prev, "blade indices must be strictly increasing");
            prev = i;
            mask |= 1 << (i - 1);
        }
        Ok(Blade(mask))
    }

    pub fn generator(i: usize) -> Blade {
        Blade::from_indices(&[i]).expect("generator index")
    }

    pub fn volume(n: usize) -> Blade {
        Blade((1u32 << n) - 1)
    }

    pub fn grade(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(&self) -> Vec<usize> {
        (1..=32).filter(|i| self.0 & (1 << (i - 1)) != 0).collect()
    }

    pub fn max_index(&self) -> usize {
        if self.0 == 0 {
            0
        } else {
            32 - self.0.leading_zeros() as usize
        }
    }

    /// Product of two basis blades: resulting blade and integer sign,
    /// computed on the bitmask path.
    pub fn mul(self, other: Blade, metric: &FrameMetric) -> (Blade, i8) {
        // Count transpositions: each generator of `other` moves left past
        // the generators of `self` that have a strictly larger index.
        let mut sign = 1i8;
        let mut acc = self.0;
        for i in 1..=32u32 {
            let bit = 1u32 << (i - 1);
            if other.0 & bit == 0 {
                continue;
            }
            let higher = acc >> i; // generators of acc with index > i
            if higher.count_ones() % 2 == 1 {
                sign = -sign;
            }
            if acc & bit != 0 {
                // e_i e_i = −ε_i
                sign *= -metric.eps(i as usize);
                acc &= !bit;
            } else {
                acc |= bit;
            }
        }
        (Blade(acc), sign)
    }

    /// Transposition-counting reference product on index lists. The bitmask
    /// path must agree with this one; tests compare them exhaustively.
    pub fn mul_reference(self, other: Blade, metric: &FrameMetric) -> (Blade, i8) {
        let mut seq: Vec<usize> = self.indices();
        seq.extend(other.indices());
        let mut sign = 1i8;
        // Bubble sort, counting swaps of distinct generators.
        loop {
            let mut swapped = false;
            for k in 1..seq.len() {
                if seq[k - 1] > seq[k] {
                    seq.swap(k - 1, k);
                    sign = -sign;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // Contract adjacent equal pairs: e_i e_i = −ε_i.
        let mut reduced = Vec::new();
        let mut k = 0;
        while k < seq.len() {
            if k + 1 < seq.len() && seq[k] == seq[k + 1] {
                sign *= -metric.eps(seq[k]);
                k += 2;
            } else {
                reduced.push(seq[k]);
                k += 1;
            }
        }
        (
            Blade::from_indices(&reduced).expect("reduced blade"),
            sign,
        )
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        for i in self.indices() {
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

/// Element of the complexified Clifford algebra: blade-to-coefficient map
/// with no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<S> {
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero() -> Self {
        Multivector {
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(value: S) -> Self {
        let mut m = Self::zero();
        m.add_term(Blade::SCALAR, value);
        m
    }

    pub fn one() -> Self {
        Self::scalar(S::one())
    }

    pub fn basis_blade(blade: Blade) -> Self {
        let mut m = Self::zero();
        m.add_term(blade, S::one());
        m
    }

    pub fn generator(i: usize) -> Self {
        Self::basis_blade(Blade::generator(i))
    }

    /// Grade-1 element with the given frame components.
    pub fn vector(components: &[S]) -> Self {
        let mut m = Self::zero();
        for (k, c) in components.iter().enumerate() {
            m.add_term(Blade::generator(k + 1), c.clone());
        }
        m
    }

    pub fn add_term(&mut self, blade: Blade, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(blade).or_insert_with(S::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&blade);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_index(&self) -> usize {
        self.terms.keys().map(Blade::max_index).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in other.terms() {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero();
        for (b, c) in self.terms() {
            out.add_term(*b, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero();
        for (b, c) in self.terms() {
            out.add_term(*b, c.clone() * s.clone());
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Multivector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})·{b}")?;
        }
        Ok(())
    }
}

/// Geometric (Clifford) product under `e_i e_j + e_j e_i = −2 ε_i δ_ij`.
pub fn geometric_product<S: Scalar>(
    a: &Multivector<S>,
    b: &Multivector<S>,
    metric: &FrameMetric,
) -> Result<Multivector<S>> {
    let n = metric.dim();
    for m in [a, b] {
        let top = m.max_index();
        if top > n {
            return Err(Error::IndexOutOfRange { index: top, dim: n });
        }
    }
    let mut out = Multivector::zero();
    for (ba, ca) in a.terms() {
        for (bb, cb) in b.terms() {
            let (blade, sign) = ba.mul(*bb, metric);
            out.add_term(blade, ca.clone() * cb.clone() * S::from_int(sign as i64));
        }
    }
    Ok(out)
}

/// The volume element `ω = e_1 ⋯ e_n`.
pub fn volume_element<S: Scalar>(metric: &FrameMetric) -> Multivector<S> {
    Multivector::basis_blade(Blade::volume(metric.dim()))
}

/// `ω² = (−1)^{n(n+1)/2 + s}` as `±1`.
pub fn volume_square_sign(sig: Signature) -> i8 {
    let n = sig.dim();
    let exponent = n * (n + 1) / 2 + sig.s;
    if exponent.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The same sign from the `r − s mod 4` table.
pub fn volume_square_sign_table(sig: Signature) -> i8 {
    match sig.r_minus_s_mod4() {
        0 | 3 => 1,
        _ => -1,
    }
}

/// `e_i ω = (−1)^{n−1} ω e_i` as `±1`.
pub fn volume_commutation_sign(sig: Signature) -> i8 {
    if (sig.dim() - 1).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use proptest::prelude::*;

    type Mv = Multivector<Exact>;

    fn all_signatures(max_dim: usize) -> Vec<Signature> {
        let mut out = Vec::new();
        for n in 1..=max_dim {
            for r in 0..=n {
                out.push(Signature::new(r, n - r));
            }
        }
        out
    }

    #[test]
    fn generator_squares() {
        // e1·e1 = −1 and e4·e4 = +1 in signature (3,1)
        let metric = Signature::new(3, 1).frame_metric();
        let e1 = Mv::generator(1);
        let e4 = Mv::generator(4);
        assert_eq!(
            geometric_product(&e1, &e1, &metric).unwrap(),
            Mv::scalar(Exact::from_int(-1))
        );
        assert_eq!(
            geometric_product(&e4, &e4, &metric).unwrap(),
            Mv::scalar(Exact::from_int(1))
        );
    }

    #[test]
    fn bivector_product_contracts_shared_index() {
        // (e1e2)(e2e3) in (3,1): e2e2 = −ε2 = −1, so the result is −e1e3.
        let metric = Signature::new(3, 1).frame_metric();
        let a = Mv::basis_blade(Blade::from_indices(&[1, 2]).unwrap());
        let b = Mv::basis_blade(Blade::from_indices(&[2, 3]).unwrap());
        let p = geometric_product(&a, &b, &metric).unwrap();
        let mut expected = Mv::zero();
        expected.add_term(Blade::from_indices(&[1, 3]).unwrap(), Exact::from_int(-1));
        assert_eq!(p, expected);
    }

    #[test]
    fn anticommutation_exhaustive() {
        for sig in all_signatures(8) {
            let metric = sig.frame_metric();
            let n = sig.dim();
            for i in 1..=n {
                for j in 1..=n {
                    let ei = Mv::generator(i);
                    let ej = Mv::generator(j);
                    let ij = geometric_product(&ei, &ej, &metric).unwrap();
                    let ji = geometric_product(&ej, &ei, &metric).unwrap();
                    let sum = ij.add(&ji);
                    let expected = if i == j {
                        Mv::scalar(Exact::from_int(-2 * metric.eps(i) as i64))
                    } else {
                        Mv::zero()
                    };
                    assert_eq!(sum, expected, "sig ({},{}) i={i} j={j}", sig.r, sig.s);
                }
            }
        }
    }

    #[test]
    fn volume_square_sign_matches_both_formulas_and_product() {
        for sig in all_signatures(8) {
            let metric = sig.frame_metric();
            let omega = volume_element::<Exact>(&metric);
            let sq = geometric_product(&omega, &omega, &metric).unwrap();
            let sign = volume_square_sign(sig);
            assert_eq!(sign, volume_square_sign_table(sig), "sig {sig:?}");
            assert_eq!(sq, Mv::scalar(Exact::from_int(sign as i64)), "sig {sig:?}");
        }
    }

    #[test]
    fn volume_commutation_sign_against_products() {
        for sig in all_signatures(8) {
            let metric = sig.frame_metric();
            let omega = volume_element::<Exact>(&metric);
            let sign = Exact::from_int(volume_commutation_sign(sig) as i64);
            for i in 1..=sig.dim() {
                let ei = Mv::generator(i);
                let left = geometric_product(&ei, &omega, &metric).unwrap();
                let right = geometric_product(&omega, &ei, &metric)
                    .unwrap()
                    .scale(&sign);
                assert_eq!(left, right, "sig {sig:?} i={i}");
            }
        }
    }

    #[test]
    fn specific_volume_elements() {
        let m20 = Signature::new(2, 0).frame_metric();
        assert_eq!(
            volume_element::<Exact>(&m20),
            Mv::basis_blade(Blade::from_indices(&[1, 2]).unwrap())
        );
        let m31 = Signature::new(3, 1).frame_metric();
        assert_eq!(
            volume_element::<Exact>(&m31),
            Mv::basis_blade(Blade::from_indices(&[1, 2, 3, 4]).unwrap())
        );
        let m41 = Signature::new(4, 1).frame_metric();
        assert_eq!(
            volume_element::<Exact>(&m41),
            Mv::basis_blade(Blade::from_indices(&[1, 2, 3, 4, 5]).unwrap())
        );
        // sign table entries quoted in the interface
        assert_eq!(volume_square_sign(Signature::new(3, 1)), -1);
        assert_eq!(volume_square_sign(Signature::new(4, 1)), 1);
        assert_eq!(volume_square_sign(Signature::new(2, 0)), -1);
        assert_eq!(volume_commutation_sign(Signature::new(3, 1)), -1);
        assert_eq!(volume_commutation_sign(Signature::new(4, 1)), 1);
        assert_eq!(volume_commutation_sign(Signature::new(1, 0)), 1);
    }

    #[test]
    fn index_out_of_range_rejected() {
        let metric = Signature::new(2, 0).frame_metric();
        let bad = Mv::generator(3);
        let ok = Mv::generator(1);
        assert!(matches!(
            geometric_product(&bad, &ok, &metric),
            Err(Error::IndexOutOfRange { index: 3, dim: 2 })
        ));
    }

    #[test]
    fn bitmask_sign_agrees_with_reference_exhaustively() {
        for sig in all_signatures(6) {
            let metric = sig.frame_metric();
            let n = sig.dim();
            for a in 0..(1u32 << n) {
                for b in 0..(1u32 << n) {
                    let (ba, bb) = (Blade(a), Blade(b));
                    assert_eq!(
                        ba.mul(bb, &metric),
                        ba.mul_reference(bb, &metric),
                        "sig {sig:?} a={a:b} b={b:b}"
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn associativity_on_random_blades(
            (r, s) in (0usize..=6, 0usize..=2).prop_filter("dim >= 1", |(r, s)| r + s >= 1 && r + s <= 6),
            seed in 0u64..1000,
        ) {
            let sig = Signature::new(r, s);
            let metric = sig.frame_metric();
            let n = sig.dim();
            let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % (1u64 << n)) as u32
            };
            let a = Mv::basis_blade(Blade(next()));
            let b = Mv::basis_blade(Blade(next()));
            let c = Mv::basis_blade(Blade(next()));
            let ab = geometric_product(&a, &b, &metric).unwrap();
            let bc = geometric_product(&b, &c, &metric).unwrap();
            let left = geometric_product(&ab, &c, &metric).unwrap();
            let right = geometric_product(&a, &bc, &metric).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn product_is_bilinear(x in -20i64..20, y in -20i64..20, mask_a in 0u32..16, mask_b in 0u32..16) {
            let metric = Signature::new(3, 1).frame_metric();
            let a = Mv::basis_blade(Blade(mask_a)).scale(&Exact::from_int(x));
            let b = Mv::basis_blade(Blade(mask_b)).scale(&Exact::from_int(y));
            let p = geometric_product(&a, &b, &metric).unwrap();
            let q = geometric_product(
                &Mv::basis_blade(Blade(mask_a)),
                &Mv::basis_blade(Blade(mask_b)),
                &metric,
            )
            .unwrap()
            .scale(&Exact::from_int(x * y));
            prop_assert_eq!(p, q);
        }
    }
}
