//! Implementation of the pipeline subcommands. Each function takes already
//! merged configuration (flags override the config file) and writes its
//! artifacts deterministically.

use std::path::{Path, PathBuf};

use nalgebra::Complex;
use serde::Serialize;

use ldm_sim::{
    check_assumptions, generate_random_network, imag_skew, ipsdm_observed, simulate,
    sl_ground_truth, GeneratorConfig, LdgModel,
};
use skewlr_decomp::io::{
    read_matrix_csv, read_skew_csv, write_matrix_csv, write_sweep_csv, write_sweep_summary,
};
use skewlr_decomp::{
    certify, project_skew, solve_decomposition, sweep_t, ConditionReport, SolveOptions,
    SweepOptions,
};
use spectral_est::io::{complex_matrix_to_json, EstimateBundle};
use spectral_est::{ipsdm_estimate, truncated_psdm, ClassBounds, CorrelogramEstimate, ErrorBudget};
use topo_recon::{
    evaluate, full_topology, normalize_inf, ReconstructedTopology, DEFAULT_TAU,
};

use crate::config::PipelineConfig;
use crate::error::CliError;

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))
}

fn unit_circle(theta: f64) -> Complex<f64> {
    Complex::from_polar(1.0, theta)
}

fn load_model(path: &Path) -> Result<LdgModel, CliError> {
    LdgModel::load(path)
        .map_err(|e| CliError::Usage(format!("cannot load model {}: {e}", path.display())))
}

pub struct GenerateArgs {
    pub config: PipelineConfig,
    pub n: Option<usize>,
    pub n_h: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    let defaults = GeneratorConfig::default();
    let g = &args.config.generator;
    let gen = GeneratorConfig {
        n: args.n.or(g.n).unwrap_or(defaults.n),
        n_h: args.n_h.or(g.n_h).unwrap_or(defaults.n_h),
        avg_degree: g.avg_degree.unwrap_or(defaults.avg_degree),
        seed: args.seed.or(args.config.seed).unwrap_or(defaults.seed),
        gain_range: (
            g.gain_min.unwrap_or(defaults.gain_range.0),
            g.gain_max.unwrap_or(defaults.gain_range.1),
        ),
        max_attempts: g.max_attempts.unwrap_or(defaults.max_attempts),
        ..defaults
    };
    let out = args.out.or(args.config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&out)?;
    let model = generate_random_network(&gen)?;
    let report = check_assumptions(&model);
    model.save(&out.join("model.json"))?;
    std::fs::write(
        out.join("assumptions.json"),
        serde_json::to_string_pretty(&report)?,
    )?;
    println!(
        "generated model: {} nodes ({} hidden), {} edges, admissibility {}",
        model.n(),
        model.n_h(),
        model.edges().len(),
        if report.all_hold() { "all checks hold" } else { "violated" }
    );
    Ok(())
}

pub struct SimulateArgs {
    pub config: PipelineConfig,
    pub model: Option<PathBuf>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let model_path = args
        .model
        .or(args.config.model.clone())
        .ok_or_else(|| CliError::Usage("simulate needs a model file".into()))?;
    let model = load_model(&model_path)?;
    let n_samples = args.n_samples.or(args.config.n_samples).unwrap_or(10_000);
    let seed = args.seed.or(args.config.seed).unwrap_or(0);
    let out = args
        .out
        .or_else(|| args.config.out.clone().map(|d| d.join("series.csv")))
        .unwrap_or_else(|| PathBuf::from("series.csv"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    let x = simulate(&model, n_samples, seed)?;
    // series on disk: one row per time step, one column per node
    write_matrix_csv(&out, &x.transpose())?;
    println!("wrote {} samples of {} series to {}", x.ncols(), x.nrows(), out.display());
    Ok(())
}

pub struct EstimateArgs {
    pub config: PipelineConfig,
    pub series: PathBuf,
    pub p: Option<usize>,
    pub freq: Vec<f64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_estimate(args: EstimateArgs) -> Result<(), CliError> {
    let rows = read_matrix_csv(&args.series)?;
    let x = rows.transpose();
    let p = args
        .p
        .or(args.config.p)
        .ok_or_else(|| CliError::Usage("estimate needs a truncation order (flag or config p)".into()))?;
    let angles = if args.freq.is_empty() {
        if args.config.frequencies.is_empty() {
            vec![args.config.default_frequency()]
        } else {
            args.config.frequencies.clone()
        }
    } else {
        args.freq.clone()
    };
    let est = CorrelogramEstimate::from_series(&x, p)?;
    let mut psdm = Vec::new();
    let mut ipsdm = Vec::new();
    let mut frequencies = Vec::new();
    for &theta in &angles {
        let z = unit_circle(theta);
        let phi = truncated_psdm(&est, z)?;
        let inv = ipsdm_estimate(&phi)?;
        frequencies.push([z.re, z.im]);
        psdm.push(complex_matrix_to_json(&phi));
        ipsdm.push(complex_matrix_to_json(&inv));
    }
    let bundle = EstimateBundle { p, n_samples: est.n_samples(), frequencies, psdm, ipsdm };
    let out = args
        .out
        .or_else(|| args.config.out.clone().map(|d| d.join("estimate.json")))
        .unwrap_or_else(|| PathBuf::from("estimate.json"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    bundle.save(&out)?;
    println!(
        "estimated order-{p} spectra at {} frequencies from {} samples → {}",
        angles.len(),
        est.n_samples(),
        out.display()
    );
    Ok(())
}

pub struct DecomposeArgs {
    pub config: PipelineConfig,
    pub input: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub freq: Option<f64>,
    pub epsilon: Option<f64>,
    pub ground_truth: bool,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct CertificateSummary {
    gamma: f64,
    inf_margin: f64,
    spec_margin: f64,
    support_match: bool,
    uv_match: bool,
    valid: bool,
    reason: Option<String>,
}

#[derive(Serialize)]
struct DecompositionSummary {
    selected_t: Option<f64>,
    selected_certified: bool,
    gamma: Option<f64>,
    converged: bool,
    warnings: Vec<String>,
    certificate: Option<CertificateSummary>,
    condition_report: Option<ConditionReport>,
}

pub fn cmd_decompose(args: DecomposeArgs) -> Result<(), CliError> {
    let out = args.out.or(args.config.out.clone()).unwrap_or_else(|| PathBuf::from("."));
    ensure_dir(&out)?;
    let model = match (&args.input, args.model.as_ref().or(args.config.model.as_ref())) {
        (Some(_), _) => None,
        (None, Some(path)) => Some(load_model(path)?),
        (None, None) => {
            return Err(CliError::Usage(
                "decompose needs either an input matrix or a model file".into(),
            ))
        }
    };
    let theta = args.freq.unwrap_or_else(|| args.config.default_frequency());
    let z = unit_circle(theta);
    let c = match (&args.input, &model) {
        (Some(path), _) => read_skew_csv(path)?,
        (None, Some(m)) => project_skew(&imag_skew(&ipsdm_observed(m, z)?))?,
        (None, None) => unreachable!(),
    };
    let epsilon = args.epsilon.or(args.config.epsilon).unwrap_or(0.02);

    let mut opts = SweepOptions::default();
    if let Some(zt) = args.config.zero_tol {
        opts.zero_tol_rel = zt;
    }
    if args.ground_truth {
        let m = model.as_ref().ok_or_else(|| {
            CliError::Usage("--ground-truth needs a model file to derive the true split".into())
        })?;
        let gt = sl_ground_truth(m, z)?;
        opts.ground_truth = Some((
            project_skew(&imag_skew(&gt.s))?,
            project_skew(&imag_skew(&gt.l))?,
        ));
    }

    let sweep = sweep_t(&c, epsilon, &opts)?;
    write_sweep_csv(&out.join("sweep.csv"), &sweep)?;
    write_sweep_summary(&out.join("sweep_summary.json"), &sweep)?;

    let mut warnings: Vec<String> = sweep
        .points
        .iter()
        .filter(|p| !p.solution.converged)
        .map(|p| format!("solver did not converge at t = {:.4}", p.t))
        .collect();

    let mut summary = DecompositionSummary {
        selected_t: sweep.selected_t,
        selected_certified: sweep.selected_certified,
        gamma: None,
        converged: true,
        warnings: Vec::new(),
        certificate: None,
        condition_report: None,
    };

    if let Some(t) = sweep.selected_t {
        let solution = solve_decomposition(&c, t, &SolveOptions::default())?;
        summary.gamma = Some(solution.gamma);
        summary.converged = solution.converged;
        if !solution.converged {
            warnings.push(format!("solver did not converge at selected t = {t:.4}"));
        }
        write_matrix_csv(&out.join("s_hat.csv"), solution.s_hat.matrix())?;
        write_matrix_csv(&out.join("l_hat.csv"), solution.l_hat.matrix())?;
        match certify(&c, &solution.s_hat, &solution.l_hat, solution.gamma) {
            Ok(cert) => {
                summary.certificate = Some(CertificateSummary {
                    gamma: solution.gamma,
                    inf_margin: cert.inf_margin,
                    spec_margin: cert.spec_margin,
                    support_match: cert.support_match,
                    uv_match: cert.uv_match,
                    valid: cert.valid,
                    reason: cert.reason.clone(),
                });
            }
            Err(e) => warnings.push(format!("certificate unavailable: {e}")),
        }
        match ConditionReport::analyze(&solution.s_hat, &solution.l_hat) {
            Ok(report) => summary.condition_report = Some(report),
            Err(e) => warnings.push(format!("condition report unavailable: {e}")),
        }
    } else {
        warnings.push("no t selected: diff curve has no usable region".into());
    }
    summary.warnings = warnings.clone();
    std::fs::write(
        out.join("decomposition.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;
    println!(
        "sweep over {} points, {} zero regions, selected t = {}",
        sweep.points.len(),
        sweep.zero_regions.len(),
        sweep
            .selected_t
            .map(|t| format!("{t:.4}{}", if sweep.selected_certified { "" } else { " (fallback)" }))
            .unwrap_or_else(|| "none".into())
    );
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

pub struct ReconstructArgs {
    pub config: PipelineConfig,
    pub s_hat: PathBuf,
    pub l_hat: PathBuf,
    pub tau: Option<f64>,
    pub out: Option<PathBuf>,
}

pub fn cmd_reconstruct(args: ReconstructArgs) -> Result<(), CliError> {
    let s = normalize_inf(&read_skew_csv(&args.s_hat)?);
    let l = normalize_inf(&read_skew_csv(&args.l_hat)?);
    let tau = args.tau.or(args.config.tau).unwrap_or(DEFAULT_TAU);
    let recon = full_topology(&s, &l, tau)?;
    let out = args
        .out
        .or_else(|| args.config.out.clone().map(|d| d.join("topology.json")))
        .unwrap_or_else(|| PathBuf::from("topology.json"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    recon.to_json().save(&out)?;
    println!(
        "reconstructed {} observed edges and {} hidden node(s) → {}",
        recon.observed_edges.len(),
        recon.n_h,
        out.display()
    );
    for &(l_idx, node) in &recon.flagged {
        eprintln!(
            "note: edge h{}–{} comes from the degree rule; it is false only if \
             that hidden node has exactly one strict spouse",
            l_idx + 1,
            node
        );
    }
    Ok(())
}

pub struct EvaluateArgs {
    pub config: PipelineConfig,
    pub topology: PathBuf,
    pub ground_truth: PathBuf,
    pub kin: bool,
    pub out: Option<PathBuf>,
}

pub fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let json = topo_recon::TopologyJson::load(&args.topology)?;
    let recon = ReconstructedTopology::from_json(&json)?;
    let truth = load_model(&args.ground_truth)?;
    let metrics = evaluate(&recon, &truth, args.kin)?;
    let out = args
        .out
        .or_else(|| args.config.out.clone().map(|d| d.join("metrics.json")))
        .unwrap_or_else(|| PathBuf::from("metrics.json"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    std::fs::write(&out, serde_json::to_string_pretty(&metrics)?)?;
    println!("metric                  value");
    println!("observed precision      {:.4}", metrics.observed_precision);
    println!("observed recall         {:.4}", metrics.observed_recall);
    println!(
        "hidden count            {} reconstructed / {} true",
        metrics.hidden_count_recon, metrics.hidden_count_true
    );
    for h in &metrics.per_hidden {
        println!(
            "hidden h{} → node {}    jaccard {:.4}  precision {:.4}  recall {:.4}",
            h.recon_index + 1,
            h.matched_true.map(|t| t.to_string()).unwrap_or_else(|| "?".into()),
            h.jaccard,
            h.precision,
            h.recall
        );
    }
    println!("exact match             {}", if metrics.exact_match { "yes" } else { "no" });
    Ok(())
}

pub struct BoundsArgs {
    pub rho: f64,
    pub c1: f64,
    pub epsilon: f64,
    pub eps1: Option<f64>,
    pub delta: f64,
    pub dim: usize,
    pub class_l: f64,
    pub class_big_l: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BoundsReport {
    budget: ErrorBudget,
    /// Truncation order that alone brings the truncation error under the
    /// full epsilon, before any of it is reserved for estimation noise.
    truncation_order_at_eps: usize,
    /// Element-wise bound on the inverse-spectrum error implied by the
    /// budget; absent when the perturbation is too large to say anything.
    ipsdm_error_bound: Option<f64>,
}

pub fn cmd_bounds(args: BoundsArgs) -> Result<(), CliError> {
    let class = ClassBounds {
        l: args.class_l,
        big_l: args.class_big_l,
        sigma_max: args.sigma_max,
        sigma_min: args.sigma_min,
    };
    let budget = ErrorBudget::build(
        args.rho,
        args.c1,
        args.epsilon,
        args.eps1,
        args.dim,
        args.delta,
        class,
    )?;
    let inv_bound = spectral_est::ipsdm_error_bound(args.epsilon, args.dim, &class)?;
    let report = BoundsReport {
        budget,
        truncation_order_at_eps: spectral_est::truncation_order(args.rho, args.c1, args.epsilon)?,
        ipsdm_error_bound: inv_bound,
    };
    let text = serde_json::to_string_pretty(&report)?;
    match &args.out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                ensure_dir(dir)?;
            }
            std::fs::write(path, &text)?;
            println!(
                "p ≥ {}, N ≥ {} (confidence {:.3}) → {}",
                report.budget.p_min,
                report.budget.n_min,
                report.budget.confidence,
                path.display()
            );
        }
        None => println!("{text}"),
    }
    Ok(())
}
