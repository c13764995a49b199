//! Command-line front end: model-file verification, extension certificates,
//! restriction round trips, the cylinder flow, and Clifford sign tables.
//!
//! Exit codes: 0 success; 1 a verification check failed (nonzero residual);
//! 2 the input document could not be parsed; 3 the model is semantically
//! invalid (Jacobi failure, asymmetric A, dimension mismatch); 4 a
//! precondition was violated (non-Einstein ambient, singular metric,
//! non-Killing spinor, missing field for the requested command).

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use spincyl::clifford::{
    geometric_product, volume_commutation_sign, volume_element, volume_square_sign,
    volume_square_sign_table, Signature,
};
use spincyl::flow::{
    constraint_monitor, export_trajectory, integrate, max_drift, oracle_compare, CylinderState,
    FlowConfig,
};
use spincyl::harmful::{
    contraction_identity_check, embedding_constraint_check, even_partner, is_harmful,
    killing_curvature_q, killing_residual, lemma_curvature_check, lemma_ricci_check,
    lemma_scalar_check, restrict_killing, verify_system, extension_geometry, Harmfulness,
    LambdaClass, Residuals,
};
use spincyl::matrix::Matrix;
use spincyl::model::{Fixture, ModelFile};
use spincyl::report::{Mode, ReportDocument};
use spincyl::scalar::{Cf64, Exact, Scalar};
use spincyl::spin::ricci_spinor_identity_residuals;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spincyl", version, about = "Spin-geometric verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LambdaPolicy {
    /// Warn about a λ that is neither real nor purely imaginary.
    Warn,
    /// Reject such a λ with a precondition error.
    Reject,
}

#[derive(Args)]
struct CommonOpts {
    /// Exact Gaussian-rational arithmetic (default for verification).
    #[arg(long, conflicts_with = "float", global = true)]
    exact: bool,
    /// Complex-double arithmetic.
    #[arg(long, global = true)]
    float: bool,
    /// Residual tolerance in float mode.
    #[arg(long, default_value_t = 1e-9, global = true)]
    tol: f64,
    /// Emit the machine-readable JSON report instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the report (or trajectory) to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Policy for a λ that is neither real nor purely imaginary.
    #[arg(long, value_enum, default_value_t = LambdaPolicy::Warn, global = true)]
    lambda_policy: LambdaPolicy,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the coupled spinor system, the divergence constraint, and the
    /// embedding constraints of a model file.
    CheckHarmful {
        model: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Check the curvature, Ricci, and scalar lemmas plus the Ricci
    /// contraction identity on a model file.
    Lemmas {
        model: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build the extension by the model's derivation and certify it:
    /// Einstein property, Killing residual, curvature defect, contraction.
    Extend {
        model: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Restrict the extension's Killing spinor back to the slice and verify
    /// the recovered structure.
    Restrict {
        model: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Integrate the cylinder evolution from the model's initial data and
    /// monitor the constraints (float mode only).
    Flow {
        model: PathBuf,
        /// Step size.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Integration horizon.
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        /// Keep every n-th sample in the trajectory output.
        #[arg(long, default_value_t = 10)]
        stride: usize,
        /// Write the trajectory table to this path.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        /// Integrate even when the initial constraints are violated.
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print volume-element sign tables for all signatures up to a bound,
    /// cross-checked against direct Clifford products.
    CliffordTable {
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// Map error kinds to the documented exit codes.
fn classify(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<spincyl::Error>() {
        return match e {
            spincyl::Error::Model { path, .. } if path == "document" => 2,
            spincyl::Error::Model { .. } => 3,
            spincyl::Error::JacobiFailure(..)
            | spincyl::Error::NotSymmetric(..)
            | spincyl::Error::NotDerivation(..)
            | spincyl::Error::DimensionMismatch { .. }
            | spincyl::Error::IndexOutOfRange { .. } => 3,
            spincyl::Error::Precondition(_)
            | spincyl::Error::SingularMetric(_)
            | spincyl::Error::NotKilling(..)
            | spincyl::Error::Degenerate(_)
            | spincyl::Error::NoConvention
            | spincyl::Error::ContainsNormal(_)
            | spincyl::Error::OddDimension(_) => 4,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    4
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::CheckHarmful { model, common } => {
            dispatch_modes(&model, &common, "check-harmful", check_harmful::<Exact>, check_harmful::<Cf64>)
        }
        Command::Lemmas { model, common } => {
            dispatch_modes(&model, &common, "lemmas", lemmas::<Exact>, lemmas::<Cf64>)
        }
        Command::Extend { model, common } => {
            dispatch_modes(&model, &common, "extend", extend::<Exact>, extend::<Cf64>)
        }
        Command::Restrict { model, common } => {
            dispatch_modes(&model, &common, "restrict", restrict::<Exact>, restrict::<Cf64>)
        }
        Command::Flow {
            model,
            step,
            t_end,
            stride,
            trajectory,
            force,
            common,
        } => flow_command(&model, step, t_end, stride, trajectory, force, &common),
        Command::CliffordTable { max_dim, common } => clifford_table(max_dim, &common),
    }
}

fn load_model(path: &Path) -> anyhow::Result<ModelFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading model file {}", path.display()))?;
    Ok(ModelFile::parse(&text)?)
}

type CommandFn<S> = fn(&Fixture<S>, &ModelFile, &mut ReportDocument) -> anyhow::Result<()>;

fn dispatch_modes(
    model_path: &Path,
    common: &CommonOpts,
    command: &str,
    exact_fn: CommandFn<Exact>,
    float_fn: CommandFn<Cf64>,
) -> anyhow::Result<ExitCode> {
    let model = load_model(model_path)?;
    // exact is the default for verification commands
    let use_float = common.float;
    let mode = if use_float { Mode::Float } else { Mode::Exact };
    let mut report = ReportDocument::new(command, &model.name, mode, common.tol);
    if use_float {
        let fixture = model.to_fixture::<Cf64>()?;
        prepare_report(&fixture, common, &mut report)?;
        float_fn(&fixture, &model, &mut report)?;
    } else {
        let fixture = model.to_fixture::<Exact>()?;
        prepare_report(&fixture, common, &mut report)?;
        exact_fn(&fixture, &model, &mut report)?;
    }
    emit(&report, common)
}

fn prepare_report<S: Scalar>(
    fixture: &Fixture<S>,
    common: &CommonOpts,
    report: &mut ReportDocument,
) -> anyhow::Result<()> {
    report.conventions = fixture.conventions.clone();
    report.warnings = fixture.warnings.clone();
    if fixture.structure.lambda_class() == LambdaClass::GeneralComplex
        && common.lambda_policy == LambdaPolicy::Reject
    {
        anyhow::bail!(spincyl::Error::Precondition(
            "lambda is neither real nor purely imaginary (per --lambda-policy reject)".into()
        ));
    }
    Ok(())
}

fn emit(report: &ReportDocument, common: &CommonOpts) -> anyhow::Result<ExitCode> {
    let body = if common.json {
        report.to_json()
    } else {
        report.human_summary()
    };
    match &common.out {
        Some(path) => std::fs::write(path, body.as_bytes())
            .with_context(|| format!("writing report to {}", path.display()))?,
        None => print!("{body}"),
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn check_harmful<S: Scalar>(
    fixture: &Fixture<S>,
    _model: &ModelFile,
    report: &mut ReportDocument,
) -> anyhow::Result<()> {
    let sys = verify_system(&fixture.structure, &fixture.geometry)?;
    report.push_residuals("coupled-system", &sys);
    let verdict = is_harmful(&fixture.structure, &fixture.geometry, report.tolerance);
    let div = spincyl::lie::divergence_constraint(
        &fixture.geometry.conn,
        &fixture.structure.a,
        &fixture.geometry.metric,
    );
    let mut div_res = Residuals::new();
    div_res.push("d tr A + deltaA", div);
    report.push_residuals("divergence-constraint", &div_res);
    report.push_flag(
        "harmful",
        verdict == Harmfulness::Harmful,
        match verdict {
            Harmfulness::Harmful => "divergence constraint holds: harmful",
            Harmfulness::WeaklyHarmful => "divergence constraint fails: weakly harmful only",
        },
    );
    let emb = embedding_constraint_check(
        &fixture.structure,
        &fixture.geometry,
        &fixture.einstein_constant,
    );
    report.push_residuals("embedding-constraints", &emb);
    Ok(())
}

fn lemmas<S: Scalar>(
    fixture: &Fixture<S>,
    _model: &ModelFile,
    report: &mut ReportDocument,
) -> anyhow::Result<()> {
    let hs = &fixture.structure;
    let geo = &fixture.geometry;
    report.push_residuals("curvature-lemma", &lemma_curvature_check(hs, geo)?);
    report.push_residuals("ricci-lemma", &lemma_ricci_check(hs, geo)?);
    report.push_residuals("scalar-lemma", &lemma_scalar_check(hs, geo)?);
    // the Ricci contraction identity holds for arbitrary spinors; check it
    // on the fixture's own pair
    let mut identity = Residuals::new();
    for (x, r) in ricci_spinor_identity_residuals(&geo.alg, &geo.metric, &geo.rep, &hs.psi)?
        .into_iter()
        .enumerate()
    {
        identity.push(format!("ricci-identity[e{}]", x + 1), r);
    }
    report.push_residuals("ricci-contraction-identity", &identity);
    Ok(())
}

fn extend<S: Scalar>(
    fixture: &Fixture<S>,
    _model: &ModelFile,
    report: &mut ReportDocument,
) -> anyhow::Result<()> {
    let derivation = fixture.derivation.as_ref().ok_or_else(|| {
        spincyl::Error::Precondition("model has no derivation to extend by".into())
    })?;
    let (geo_z, psi_z) = extension_geometry(&fixture.structure, &fixture.geometry, derivation)?;
    let m = geo_z.dim();
    // Ricci operator must be K·id
    let einstein =
        &geo_z.curv.ricci_op - &Matrix::identity(m).scale(&fixture.einstein_constant);
    let mut einstein_res = Residuals::new();
    for i in 0..m {
        einstein_res.push(format!("ricci-column[{}]", i + 1), einstein.col(i));
    }
    report.push_residuals("einstein-ric-equals-K-id", &einstein_res);
    let mut scalar_res = Residuals::new();
    scalar_res.push(
        "scal - m*K",
        vec![geo_z.curv.scalar.clone() - S::from_int(m as i64) * fixture.einstein_constant.clone()],
    );
    report.push_residuals("einstein-scalar", &scalar_res);
    report.push_residuals(
        "killing-residual",
        &killing_residual(&psi_z, &fixture.structure.lambda, &geo_z)?,
    );
    report.push_residuals(
        "curvature-defect-Q",
        &killing_curvature_q(&psi_z, &fixture.structure.lambda, &geo_z)?,
    );
    report.push_residuals(
        "contraction-identity",
        &contraction_identity_check(&psi_z, &fixture.structure.lambda, &geo_z, m)?,
    );
    Ok(())
}

fn restrict<S: Scalar>(
    fixture: &Fixture<S>,
    _model: &ModelFile,
    report: &mut ReportDocument,
) -> anyhow::Result<()> {
    let derivation = fixture.derivation.as_ref().ok_or_else(|| {
        spincyl::Error::Precondition("model has no derivation to extend by".into())
    })?;
    let (geo_z, psi_z) = extension_geometry(&fixture.structure, &fixture.geometry, derivation)?;
    let m = geo_z.dim();
    let restricted = restrict_killing(&psi_z, &fixture.structure.lambda, &geo_z, m)?;
    report.push_residuals("reconstruction", &restricted.reconstruction);
    report.push_flag(
        "kind",
        restricted.structure.kind == fixture.structure.kind,
        format!("recovered {:?} structure", restricted.structure.kind),
    );
    // Weingarten operator must match the fixture's A
    let mut a_res = Residuals::new();
    let diff = &restricted.structure.a - &fixture.structure.a;
    for i in 0..diff.ncols() {
        a_res.push(format!("A-column[{}]", i + 1), diff.col(i));
    }
    report.push_residuals("weingarten-matches-A", &a_res);
    let sys = verify_system(&restricted.structure, &restricted.geometry)?;
    report.push_residuals("restricted-coupled-system", &sys);
    report.push_flag(
        "restricted-harmful",
        is_harmful(&restricted.structure, &restricted.geometry, report.tolerance)
            == Harmfulness::Harmful,
        "divergence constraint of the restricted structure",
    );
    if restricted.geometry.dim() % 2 == 0 {
        let partner = even_partner(&restricted.structure.psi, &restricted.geometry.rep)?;
        let mut partner_res = Residuals::new();
        partner_res.push(
            "phi - even_partner(psi)",
            restricted
                .structure
                .phi
                .iter()
                .zip(&partner)
                .map(|(a, b)| a.clone() - b.clone())
                .collect::<Vec<S>>(),
        );
        report.push_residuals("even-partner-coherence", &partner_res);
    }
    Ok(())
}

fn flow_command(
    model_path: &Path,
    step: f64,
    t_end: f64,
    stride: usize,
    trajectory_path: Option<PathBuf>,
    force: bool,
    common: &CommonOpts,
) -> anyhow::Result<ExitCode> {
    let model = load_model(model_path)?;
    let mut report = ReportDocument::new("flow", &model.name, Mode::Float, common.tol);
    // the time loop is floating-point; the t = 0 right-hand side is
    // cross-checked in exact arithmetic first
    let exact = model.to_fixture::<Exact>()?;
    report.conventions = exact.conventions.clone();
    report.warnings = exact.warnings.clone();
    let n = exact.geometry.dim();
    let gram_exact = Matrix::<Exact>::from_fn(n, n, |i, j| {
        if i == j {
            Exact::from_int(exact.geometry.metric.eps(i + 1) as i64)
        } else {
            Exact::from_int(0)
        }
    });
    let (sres0, cov0) = constraint_monitor(
        &gram_exact,
        &exact.structure.a,
        &exact.einstein_constant,
        &exact.geometry.alg,
    )?;
    let mut init = Residuals::new();
    init.push("scalar", vec![sres0]);
    init.push("divergence", cov0);
    report.push_residuals("initial-constraints-exact", &init);

    let fixture = model.to_fixture::<Cf64>()?;
    let k = fixture.einstein_constant.re;
    let gram = Matrix::<Cf64>::from_fn(n, n, |i, j| {
        if i == j {
            Cf64::from_int(fixture.geometry.metric.eps(i + 1) as i64)
        } else {
            Cf64::from_int(0)
        }
    });
    let state0 = CylinderState {
        t: 0.0,
        g: gram.clone(),
        a: fixture.structure.a.clone(),
    };
    let cfg = FlowConfig {
        k_constant: k,
        step,
        t_end,
        output_stride: stride,
        initial_tolerance: common.tol,
        force,
    };
    let samples = integrate(&state0, &cfg, &fixture.geometry.alg)?;
    let drift = max_drift(&samples);
    report.push_check(spincyl::report::CheckResult {
        name: "constraint-drift".into(),
        residual: drift,
        exact_zero: false,
        pass: drift <= common.tol,
        detail: Some(format!("{} samples to t = {t_end}", samples.len())),
    });
    if let Some(d) = &fixture.derivation {
        let dev = oracle_compare(d, &gram, &samples);
        report.push_check(spincyl::report::CheckResult {
            name: "oracle-deviation".into(),
            residual: dev,
            exact_zero: false,
            pass: dev <= common.tol,
            detail: Some("against the derivation slice family".into()),
        });
    }
    if let Some(path) = trajectory_path {
        std::fs::write(&path, export_trajectory(&samples, n))
            .with_context(|| format!("writing trajectory to {}", path.display()))?;
    }
    emit(&report, common)
}

fn clifford_table(max_dim: usize, common: &CommonOpts) -> anyhow::Result<ExitCode> {
    let mut report = ReportDocument::new(
        "clifford-table",
        &format!("signatures with 1 <= r+s <= {max_dim}"),
        Mode::Exact,
        common.tol,
    );
    let mut table = String::from("  r  s   omega^2   e_i*omega\n");
    let mut all_ok = true;
    let mut count = 0usize;
    for n in 1..=max_dim {
        for r in 0..=n {
            let sig = Signature::new(r, n - r);
            let metric = sig.frame_metric();
            let omega = volume_element::<Exact>(&metric);
            let square = geometric_product(&omega, &omega, &metric)?;
            let predicted = volume_square_sign(sig);
            let from_table = volume_square_sign_table(sig);
            let mut ok = square
                == spincyl::clifford::Multivector::scalar(Exact::from_int(predicted as i64))
                && predicted == from_table;
            // commutation sign against products for every generator
            let comm = volume_commutation_sign(sig);
            for i in 1..=n {
                let ei = spincyl::clifford::Multivector::<Exact>::generator(i);
                let left = geometric_product(&ei, &omega, &metric)?;
                let right = geometric_product(&omega, &ei, &metric)?
                    .scale(&Exact::from_int(comm as i64));
                ok &= left == right;
            }
            all_ok &= ok;
            count += 1;
            table.push_str(&format!(
                "{:3}{:3}   {:+3}       {:+3}{}\n",
                sig.r,
                sig.s,
                predicted,
                comm,
                if ok { "" } else { "   MISMATCH" }
            ));
        }
    }
    report.push_flag(
        "sign-tables",
        all_ok,
        format!("{count} signatures checked by direct products"),
    );
    if !common.json {
        print!("{table}");
    }
    emit(&report, common)
}
