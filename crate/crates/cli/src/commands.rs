use num_complex::Complex64;
use quospec::abelian::{limit_measure, spectrum_by_factorization_with, weak_convergence_report, ReportSettings};
use quospec::arith::gcd;
use quospec::group::QuotientSpec;
use quospec::heisenberg::{structural_zero_count, to_f64};
use quospec::linalg::DenseComplexMatrix;
use quospec::plot::Series;
use quospec::quotient::regular_rep_matrix;
use quospec::spectra::histogram::DEFAULT_CELLS;
use quospec::spectra::{
    deflated_eigenvalues, eigenvalue_measure, fk_determinant, luck_product_of, measure_from_eigenvalues,
    zero_atom_from_eigenvalues, HistogramSpec,
};
use quospec::verify::{run_suite, Suite};
use serde_json::{json, Value};

use crate::config::{Format, JobConfig};
use crate::error::CliError;
use crate::output::{write_json, write_measure};

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn fraction(num: u64, den: u64) -> String {
    let g = gcd(num, den).max(1);
    format!("{}/{}", num / g, den / g)
}

fn level_label(q: &QuotientSpec) -> String {
    match q {
        QuotientSpec::Abelian { moduli, .. } => {
            let m: Vec<String> = moduli.iter().map(u64::to_string).collect();
            format!("m{}", m.join("x"))
        }
        QuotientSpec::Heisenberg { p, level } => format!("p{p}_l{level}"),
    }
}

fn plot_radius(a: &quospec::ring::GroupRingMatrix) -> f64 {
    HistogramSpec::for_norm_bound(a.row_norm_bound(), DEFAULT_CELLS).radius
}

/// Eigenvalues of `A_i`, with the kernel of `M^K` resolved to exact zeros.
/// Abelian quotients go through the `n x n` character blocks.
fn level_spectrum(
    a: &quospec::ring::GroupRingMatrix,
    q: &QuotientSpec,
    rep: &DenseComplexMatrix,
    k: u32,
    tau_svd: f64,
) -> Result<Vec<Complex64>, CliError> {
    Ok(match q {
        QuotientSpec::Abelian { .. } => {
            spectrum_by_factorization_with(a, q, |b| Ok(deflated_eigenvalues(b, k, tau_svd)?.eigenvalues))?
        }
        QuotientSpec::Heisenberg { .. } => deflated_eigenvalues(rep, k, tau_svd)?.eigenvalues,
    })
}

pub fn quotient_spectrum(cfg: &JobConfig) -> Result<Value, CliError> {
    let a = cfg.matrix()?;
    let quotients = cfg.quotients()?;
    if quotients.is_empty() {
        return Err(CliError::Config("quotient-spectrum needs a chain".into()));
    }
    let radius = plot_radius(&a);
    let tol = &cfg.tolerances;
    let mut levels = Vec::new();
    for (i, q) in quotients.iter().enumerate() {
        let order = u64::try_from(q.order()).map_err(|_| CliError::Config(format!("{q} is too large")))?;
        let rep = regular_rep_matrix(&a, q)?;
        let dim = rep.rows();
        let exponent = match q {
            QuotientSpec::Heisenberg { p, level } => p.pow(*level) as u32,
            QuotientSpec::Abelian { .. } => 1,
        };
        let k = tol.rank_power.unwrap_or(a.size() as u32 * exponent);
        let eigs = level_spectrum(&a, q, &rep, k, tol.tau_svd)?;
        let zeros = eigs.iter().filter(|z| **z == Complex64::new(0.0, 0.0)).count() as u64;
        let measure = measure_from_eigenvalues(&eigs, order)?;
        let stem = format!("level{}_{}", i + 1, level_label(q));
        let title = format!("eigenvalues of A on {q}");
        let series = [Series {
            measure: &measure,
            color: PALETTE[0],
            label: &q.to_string(),
        }];
        let files = write_measure(cfg, &stem, &series, radius, &title)?;
        let trace = rep.trace();
        let luck = rep.is_integer_valued().then(|| luck_product_of(&eigs, tol.tau));
        let fk = fk_determinant(&rep, 0.0)?;
        println!(
            "{q}: dim {dim}, zero atom {} = {:.6}, FK determinant {fk:.6e}{}",
            fraction(zeros, order),
            zeros as f64 / order as f64,
            luck.as_ref()
                .map(|l| format!(", nonzero eigenvalue product {:.6e}", l.product))
                .unwrap_or_default()
        );
        levels.push(json!({
            "quotient": q.to_string(),
            "order": order,
            "dim": dim,
            "rank_power": k,
            "trace": complex_json(trace),
            "normalized_trace": complex_json(trace / order as f64),
            "zero_atom": {
                "count": zeros,
                "fraction": fraction(zeros, order),
                "mass": zeros as f64 / order as f64,
                "within_tau": zero_atom_from_eigenvalues(&eigs, order, tol.tau),
            },
            "fk_determinant": fk,
            "luck": luck,
            "files": files,
        }));
    }
    let summary = json!({ "command": "quotient-spectrum", "matrix": a.to_string(), "levels": levels });
    if cfg.wants(Format::Json) {
        write_json(&cfg.out.join("summary.json"), &summary)?;
    }
    Ok(summary)
}

pub fn limit(cfg: &JobConfig) -> Result<Value, CliError> {
    let a = cfg.matrix()?;
    let quotients = cfg.quotients()?;
    let sampler = cfg.effective_sampler();
    let lim = limit_measure(&a, &sampler)?;
    let radius = plot_radius(&a);
    let level_measures = quotients
        .iter()
        .map(|q| quospec::abelian::quotient_measure(&a, q))
        .collect::<quospec::Result<Vec<_>>>()?;
    let labels: Vec<String> = quotients.iter().map(|q| q.to_string()).collect();
    let mut series = vec![Series {
        measure: &lim,
        color: "#7f7f7f",
        label: "limit",
    }];
    for (j, (m, label)) in level_measures.iter().zip(&labels).enumerate() {
        series.push(Series {
            measure: m,
            color: PALETTE[j % PALETTE.len()],
            label,
        });
    }
    let files = write_measure(cfg, "limit", &series, radius, &format!("limit measure, {sampler}"))?;
    println!("limit measure: {} atoms from {sampler}, total mass {}", lim.len(), lim.total_mass());
    let mut summary = json!({
        "command": "limit-measure",
        "matrix": a.to_string(),
        "sampler": sampler.to_string(),
        "atoms": lim.len(),
        "total_mass": lim.total_mass(),
        "files": files,
    });
    if !quotients.is_empty() {
        let settings = ReportSettings {
            degree: cfg.degree,
            cells: DEFAULT_CELLS,
            zero_tol: cfg.tolerances.tau,
        };
        let report = weak_convergence_report(&a, &quotients, &sampler, &settings)?;
        for level in &report.levels {
            println!(
                "{}: histogram distance {:.6}, moment error {:.3e}",
                level.quotient, level.histogram_distance, level.moment_error
            );
        }
        let report = serde_json::to_value(&report).expect("report serializes");
        if cfg.wants(Format::Json) {
            write_json(&cfg.out.join("convergence.json"), &report)?;
        }
        summary["convergence"] = report;
    }
    if cfg.wants(Format::Json) {
        write_json(&cfg.out.join("summary.json"), &summary)?;
    }
    Ok(summary)
}

pub fn heisenberg_table(cfg: &JobConfig, p: u64, levels: &[u32]) -> Result<Value, CliError> {
    if levels.is_empty() {
        return Err(CliError::Config("at least one level is required".into()));
    }
    let reports = levels
        .iter()
        .map(|&m| structural_zero_count(p, m))
        .collect::<quospec::Result<Vec<_>>>()?;
    let limit = &reports[0].limit;
    println!("{:>3}  {:>28}  {:>12}  {:>14}", "m", "zero atom", "decimal", "deviation");
    for r in &reports {
        println!(
            "{:>3}  {:>28}  {:>12.10}  {:>14.6e}",
            r.m,
            quospec::heisenberg::rational_string(&r.mass),
            to_f64(&r.mass),
            to_f64(&r.deviation())
        );
    }
    println!(
        "{:>3}  {:>28}  {:>12.10}",
        "lim",
        quospec::heisenberg::rational_string(limit),
        to_f64(limit)
    );
    let table = json!({
        "command": "heisenberg-table",
        "p": p,
        "rows": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        "limit": quospec::heisenberg::rational_string(limit),
        "limit_decimal": to_f64(limit),
    });
    if cfg.wants(Format::Json) {
        write_json(&cfg.out.join(format!("heisenberg_p{p}.json")), &table)?;
    }
    Ok(table)
}

pub fn demo_discontinuity(cfg: &JobConfig, n: usize, eps: f64) -> Result<Value, CliError> {
    if n < 2 || !eps.is_finite() || eps < 0.0 {
        return Err(CliError::Config(format!("need n >= 2 and a finite eps >= 0, got n = {n}, eps = {eps}")));
    }
    let block = DenseComplexMatrix::nilpotent_jordan(n);
    let perturbed = DenseComplexMatrix::shift_with_corner(n, Complex64::new(eps, 0.0));
    let mu0 = eigenvalue_measure(&block, n as u64)?;
    let mu1 = eigenvalue_measure(&perturbed, n as u64)?;
    let expected = eps.powf(1.0 / n as f64);
    let moduli: Vec<f64> = mu1.atoms().iter().map(|a| a.location.norm()).collect();
    let worst = moduli.iter().map(|r| (r - expected).abs()).fold(0.0, f64::max);
    let radius = 1.5 * expected.max(1.0);
    let series = [
        Series {
            measure: &mu0,
            color: PALETTE[1],
            label: "nilpotent block",
        },
        Series {
            measure: &mu1,
            color: PALETTE[0],
            label: "perturbed",
        },
    ];
    let mut files = write_measure(cfg, "nilpotent", &series[..1], radius, &format!("M_{n}"))?;
    files.extend(write_measure(cfg, "perturbed", &series, radius, &format!("M_{n} with corner {eps:e}"))?);
    let zero_tol = cfg.tolerances.tau.min(expected / 2.0).max(f64::EPSILON);
    let summary = json!({
        "command": "demo-discontinuity",
        "n": n,
        "eps": eps,
        "expected_radius": expected,
        "moduli": moduli,
        "max_radius_error": worst,
        "zero_tol": zero_tol,
        "zero_atom_unperturbed": mu0.mass_within(Complex64::new(0.0, 0.0), zero_tol),
        "zero_atom_perturbed": mu1.mass_within(Complex64::new(0.0, 0.0), zero_tol),
        "files": files,
    });
    println!(
        "M_{n}: zero atom {}; perturbed by {eps:e}: eigenvalue moduli within {worst:.2e} of {expected:.6e}",
        summary["zero_atom_unperturbed"]
    );
    if cfg.wants(Format::Json) {
        write_json(&cfg.out.join("discontinuity.json"), &summary)?;
    }
    Ok(summary)
}

pub fn verify(suite: Suite, cfg: Option<&JobConfig>) -> Result<Value, CliError> {
    let results = run_suite(suite);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    let value = json!({ "suite": suite, "results": results, "failed": failed });
    if let Some(cfg) = cfg {
        write_json(&cfg.out.join("verify.json"), &value)?;
    }
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: results.len(),
        });
    }
    Ok(value)
}
