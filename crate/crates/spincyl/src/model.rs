//! Model-file schema and fixture loading.
//!
//! A model file is a JSON document describing one fixture: a Lie algebra
//! through its coframe differentials, an orthonormal metric signature, the
//! spinor pair, the symmetric endomorphism, the coupling constant, the
//! ambient Einstein constant, and optionally a derivation for the
//! extension. All scalars are exact rationals written as strings (`"p/q"`
//! or `"p"`); complex values are `[re, im]` pairs of such strings, so exact
//! mode never sees floating-point contamination.

use crate::clifford::{FrameMetric, Signature};
use crate::harmful::{Geometry, HarmfulKind, HarmfulStructure, LambdaClass};
use crate::lie::{CoframeTerm, LieAlgebra};
use crate::matrix::Matrix;
use crate::rep::{select_quaternion_convention, CliffordRep};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which concrete spinor representation the fixture's components refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SpinorBasis {
    /// The tensor-product construction for the fixture's sign pattern.
    #[default]
    Standard,
    /// The signature-(3,1) quaternion model; the embedding convention is
    /// selected by the annihilation-identity search at load time.
    Cl31Quaternion,
}

/// Raw model document, matching the on-disk JSON field for field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub dimension: usize,
    /// `[r, s]`; the frame is ordered with the `r` positive directions first.
    pub signature: (usize, usize),
    /// One list per `de^k`: terms `[coefficient, i, j]` meaning
    /// `coefficient · e^i ∧ e^j` with `i < j`, indices 1-based.
    pub coframe: Vec<Vec<(String, usize, usize)>>,
    /// Endomorphism components: `a[j][i] = e^{j+1}(A(e_{i+1}))`.
    pub a: Vec<Vec<String>>,
    pub psi: Vec<(String, String)>,
    pub phi: Vec<(String, String)>,
    pub lambda: (String, String),
    pub einstein_constant: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub spinor_basis: SpinorBasis,
}

/// A fully validated fixture over a chosen scalar field.
#[derive(Debug)]
pub struct Fixture<S: Scalar> {
    pub name: String,
    pub geometry: Geometry<S>,
    pub structure: HarmfulStructure<S>,
    pub derivation: Option<Matrix<S>>,
    pub einstein_constant: S,
    /// Human-readable record of loader decisions (chosen conventions).
    pub conventions: Vec<String>,
    /// Non-fatal observations (e.g. a genuinely complex λ).
    pub warnings: Vec<String>,
}

fn field_err(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Model {
        path: path.into(),
        message: message.into(),
    }
}

fn rational_at(text: &str, path: &str) -> Result<Rational> {
    parse_rational(text).ok_or_else(|| field_err(path, format!("invalid rational `{text}`")))
}

impl ModelFile {
    /// Parse a JSON document into a model file, without semantic validation.
    pub fn parse(text: &str) -> Result<ModelFile> {
        serde_json::from_str(text)
            .map_err(|e| field_err("document", format!("JSON syntax/schema error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization")
    }

    pub fn metric(&self) -> FrameMetric {
        Signature::new(self.signature.0, self.signature.1).frame_metric()
    }

    fn complex_at<S: Scalar>(pair: &(String, String), path: &str) -> Result<S> {
        let re = rational_at(&pair.0, &format!("{path}[0]"))?;
        let im = rational_at(&pair.1, &format!("{path}[1]"))?;
        Ok(S::from_rational_pair(&re, &im))
    }

    fn matrix_at<S: Scalar>(rows: &[Vec<String>], n: usize, path: &str) -> Result<Matrix<S>> {
        if rows.len() != n {
            return Err(field_err(path, format!("expected {n} rows, got {}", rows.len())));
        }
        let mut m = Matrix::zeros(n, n);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(field_err(
                    format!("{path}[{j}]"),
                    format!("expected {n} entries, got {}", row.len()),
                ));
            }
            for (i, entry) in row.iter().enumerate() {
                let r = rational_at(entry, &format!("{path}[{j}][{i}]"))?;
                m[(j, i)] = S::from_rational_pair(&r, &Rational::from_integer(0.into()));
            }
        }
        Ok(m)
    }

    fn spinor_at<S: Scalar>(
        components: &[(String, String)],
        expected_len: usize,
        path: &str,
    ) -> Result<Vec<S>> {
        if components.len() != expected_len {
            return Err(field_err(
                path,
                format!(
                    "expected {expected_len} components, got {}",
                    components.len()
                ),
            ));
        }
        components
            .iter()
            .enumerate()
            .map(|(k, pair)| Self::complex_at(pair, &format!("{path}[{k}]")))
            .collect()
    }

    /// Validate and build the fixture over the chosen scalar field.
    pub fn to_fixture<S: Scalar>(&self) -> Result<Fixture<S>> {
        let n = self.dimension;
        if n == 0 {
            return Err(field_err("dimension", "must be at least 1"));
        }
        let (r, s) = self.signature;
        if r + s != n {
            return Err(field_err(
                "signature",
                format!("r + s = {} but dimension = {n}", r + s),
            ));
        }
        let metric = self.metric();
        if self.coframe.len() != n {
            return Err(field_err(
                "coframe",
                format!("expected {n} differential lists, got {}", self.coframe.len()),
            ));
        }
        let mut terms: Vec<Vec<CoframeTerm>> = Vec::with_capacity(n);
        for (k, list) in self.coframe.iter().enumerate() {
            let mut out = Vec::with_capacity(list.len());
            for (idx, (coeff, i, j)) in list.iter().enumerate() {
                let path = format!("coframe[{k}][{idx}]");
                let coeff = rational_at(coeff, &path)?;
                if *i == 0 || *j == 0 || *i > n || *j > n {
                    return Err(field_err(&path, format!("index out of range 1..{n}")));
                }
                if i >= j {
                    return Err(field_err(&path, "term indices must satisfy i < j"));
                }
                out.push(CoframeTerm {
                    coeff,
                    i: *i,
                    j: *j,
                });
            }
            terms.push(out);
        }
        let alg = LieAlgebra::<S>::from_coframe(n, &terms).map_err(|e| match e {
            Error::JacobiFailure(i, j, k) => field_err(
                "coframe",
                format!("Jacobi identity fails on frame triple ({i}, {j}, {k})"),
            ),
            other => other,
        })?;
        let a = Self::matrix_at::<S>(&self.a, n, "a")?;
        crate::lie::is_g_symmetric(&a, &metric, 1e-9)
            .map_err(|_| field_err("a", "A not g-symmetric"))?;
        let kind = match self.kind.as_str() {
            "real" => HarmfulKind::Real,
            "imaginary" => HarmfulKind::Imaginary,
            other => {
                return Err(field_err(
                    "kind",
                    format!("expected \"real\" or \"imaginary\", got \"{other}\""),
                ))
            }
        };
        let lambda = Self::complex_at::<S>(&self.lambda, "lambda")?;
        let einstein_constant = {
            let r = rational_at(&self.einstein_constant, "einstein_constant")?;
            S::from_rational_pair(&r, &Rational::from_integer(0.into()))
        };
        let mut conventions = Vec::new();
        let spinor_dim = 1usize << (n / 2);
        let psi = Self::spinor_at::<S>(&self.psi, spinor_dim, "psi")?;
        let phi = Self::spinor_at::<S>(&self.phi, spinor_dim, "phi")?;
        let rep = match self.spinor_basis {
            SpinorBasis::Standard => {
                conventions.push("spinor basis: standard tensor-product generators".into());
                CliffordRep::build(&metric)
            }
            SpinorBasis::Cl31Quaternion => {
                if (r, s) != (3, 1) {
                    return Err(field_err(
                        "spinor_basis",
                        "cl31_quaternion requires signature [3, 1]",
                    ));
                }
                let (conv, rep) = select_quaternion_convention(&psi)?;
                conventions.push(format!(
                    "spinor basis: quaternion model, {}",
                    conv.describe()
                ));
                rep
            }
        };
        let derivation = match &self.derivation {
            None => None,
            Some(rows) => {
                let d = Self::matrix_at::<S>(rows, n, "derivation")?;
                alg.is_derivation(&d).map_err(|e| match e {
                    Error::NotDerivation(i, j) => field_err(
                        "derivation",
                        format!("not a derivation: fails on [e{i}, e{j}]"),
                    ),
                    other => other,
                })?;
                Some(d)
            }
        };
        let geometry = Geometry::new(alg, metric, rep);
        let structure = HarmfulStructure {
            psi,
            phi,
            a,
            lambda,
            kind,
        };
        let mut warnings = Vec::new();
        if structure.lambda_class() == LambdaClass::GeneralComplex {
            warnings.push(
                "lambda is neither real nor purely imaginary; residuals are still computed"
                    .into(),
            );
        }
        Ok(Fixture {
            name: self.name.clone(),
            geometry,
            structure,
            derivation,
            einstein_constant,
            conventions,
            warnings,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmful::{is_harmful, verify_system, Harmfulness};
    use crate::scalar::Exact;
    use crate::testfix;
    use num_traits::Zero;

    fn fixture_path(name: &str) -> String {
        format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
    }

    fn load(name: &str) -> ModelFile {
        let text = std::fs::read_to_string(fixture_path(name)).expect("fixture file");
        ModelFile::parse(&text).expect("fixture parses")
    }

    #[test]
    fn shipped_example_parses_to_worked_fixture() {
        let model = load("example_31.model");
        let fx = model.to_fixture::<Exact>().unwrap();
        assert_eq!(fx.geometry.alg, testfix::example31_algebra::<Exact>());
        assert_eq!(fx.geometry.metric, testfix::example31_metric());
        assert_eq!(fx.structure.psi, testfix::example31_psi::<Exact>());
        assert_eq!(fx.structure.phi, testfix::example31_phi::<Exact>());
        assert_eq!(fx.structure.a, testfix::example31_a::<Exact>());
        assert_eq!(fx.structure.lambda, testfix::example31_lambda::<Exact>());
        assert_eq!(
            fx.derivation.as_ref().unwrap(),
            &testfix::example31_derivation::<Exact>()
        );
        assert_eq!(fx.einstein_constant, Exact::from_int(-4));
        assert!(fx.conventions[0].contains("quaternion"));
        let res = verify_system(&fx.structure, &fx.geometry).unwrap();
        assert!(res.is_exactly_zero());
    }

    #[test]
    fn shipped_su2_and_abelian_and_boost_fixtures_verify() {
        for name in ["su2_round.model", "abelian_flat.model", "boost_21.model"] {
            let fx = load(name).to_fixture::<Exact>().unwrap();
            let res = verify_system(&fx.structure, &fx.geometry).unwrap();
            assert!(res.is_exactly_zero(), "{name}: max {}", res.max_magnitude());
            assert_eq!(
                is_harmful(&fx.structure, &fx.geometry, 0.0),
                Harmfulness::Harmful,
                "{name}"
            );
        }
    }

    #[test]
    fn su2_fixture_matches_test_values() {
        let fx = load("su2_round.model").to_fixture::<Exact>().unwrap();
        let (alg, metric) = testfix::su2_algebra::<Exact>();
        assert_eq!(fx.geometry.alg, alg);
        assert_eq!(fx.geometry.metric, metric);
        assert_eq!(fx.structure.a, testfix::su2_a::<Exact>());
        assert_eq!(fx.structure.lambda, testfix::su2_lambda::<Exact>());
    }

    #[test]
    fn boost_fixture_matches_test_values() {
        let fx = load("boost_21.model").to_fixture::<Exact>().unwrap();
        let (alg, metric) = testfix::boost_algebra::<Exact>();
        assert_eq!(fx.geometry.alg, alg);
        assert_eq!(fx.geometry.metric, metric);
        assert_eq!(fx.structure.a, testfix::boost_a::<Exact>());
        assert_eq!(
            fx.derivation.as_ref().unwrap(),
            &testfix::boost_derivation::<Exact>()
        );
        assert_eq!(fx.structure.kind, crate::harmful::HarmfulKind::Imaginary);
    }

    #[test]
    fn parse_serialize_parse_is_identity() {
        for name in [
            "example_31.model",
            "su2_round.model",
            "abelian_flat.model",
            "boost_21.model",
        ] {
            let model = load(name);
            let reparsed = ModelFile::parse(&model.to_json()).unwrap();
            assert_eq!(model, reparsed, "{name}");
        }
    }

    #[test]
    fn empty_coframe_means_abelian() {
        let model = load("abelian_flat.model");
        let fx = model.to_fixture::<Exact>().unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                assert!(fx.geometry.alg.bracket(i, j).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn asymmetric_a_rejected_with_path() {
        let mut model = load("example_31.model");
        model.a[0][1] = "1".into();
        let err = model.to_fixture::<Exact>().unwrap_err();
        match err {
            Error::Model { path, message } => {
                assert_eq!(path, "a");
                assert!(message.contains("not g-symmetric"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn jacobi_failure_rejected_with_path() {
        let mut model = load("abelian_flat.model");
        model.coframe[0] = vec![("1".into(), 1, 2)];
        model.coframe[1] = vec![("1".into(), 1, 3)];
        let err = model.to_fixture::<Exact>().unwrap_err();
        match err {
            Error::Model { path, message } => {
                assert_eq!(path, "coframe");
                assert!(message.contains("Jacobi"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_rational_rejected_with_located_path() {
        let mut model = load("su2_round.model");
        model.psi[1] = ("oops".into(), "0".into());
        let err = model.to_fixture::<Exact>().unwrap_err();
        match err {
            Error::Model { path, .. } => assert_eq!(path, "psi[1][0]"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatches_rejected() {
        let mut model = load("su2_round.model");
        model.signature = (2, 0);
        assert!(matches!(
            model.to_fixture::<Exact>(),
            Err(Error::Model { .. })
        ));
        let mut model2 = load("su2_round.model");
        model2.psi.push(("0".into(), "0".into()));
        assert!(matches!(
            model2.to_fixture::<Exact>(),
            Err(Error::Model { .. })
        ));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = std::fs::read_to_string(fixture_path("su2_round.model")).unwrap();
        let with_extra = text.replacen('{', "{\n  \"surprise\": 1,", 1);
        assert!(ModelFile::parse(&with_extra).is_err());
    }

    #[test]
    fn float_mode_loads_same_fixture() {
        use crate::scalar::Cf64;
        let fx = load("example_31.model").to_fixture::<Cf64>().unwrap();
        let res = verify_system(&fx.structure, &fx.geometry).unwrap();
        assert!(res.all_zero_within(1e-9));
        assert!(res.max_magnitude() < 1e-12);
    }
}
