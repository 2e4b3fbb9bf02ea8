use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde_json::{json, Value};

use crmorse_core::bounds::{sample_terms, BoundValue, MorseBoundReport};
use crmorse_core::geometry::{grauert_tube_spec, heisenberg_spec, GrauertGrid, ManifoldSpec};
use crmorse_core::oracle::{grid_signature_scan, mc_integral};
use crmorse_core::pencil::{integrate_abs_det, signature_set, RootTolerance};

use crate::args::{AnalyzeManifoldArgs, AnalyzePointArgs, SpecKind};
use crate::documents::{
    sha256_digest, OracleComparison, PointInputDocument, ReportDocument, HERMITIAN_TOL,
};
use crate::error::{CliError, CliResult};

const GRID_RELATIVE_TOL: f64 = 1e-3;

fn read_text(path: &Path) -> CliResult<(String, String)> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let digest = sha256_digest(&bytes);
    let text = String::from_utf8(bytes).map_err(|e| CliError::Parse {
        message: format!("input is not UTF-8: {e}"),
        field: None,
        line: None,
        column: None,
    })?;
    Ok((text, digest))
}

fn root_tolerances(report: &mut ReportDocument) {
    let t = RootTolerance::default();
    report.tolerance(
        "root_imag",
        t.imag,
        "eigenvalues with |Im| <= value * (1 + R) count as real roots",
    );
    report.tolerance(
        "root_cluster",
        t.cluster,
        "roots closer than value * (1 + R) are merged",
    );
    report.tolerance(
        "root_residual",
        t.residual,
        "Newton polishing stops at |p(s)| <= value * sum |c_k||s|^k",
    );
}

pub fn analyze_point(args: &AnalyzePointArgs) -> CliResult<ReportDocument> {
    let start = Instant::now();
    let (text, digest) = read_text(&args.input)?;
    let doc = PointInputDocument::parse(&text)?;
    let p = doc.to_pencil()?;
    let dim = p.dim();
    let n = args.n.unwrap_or(dim + 1);
    if n != dim + 1 {
        return Err(CliError::Usage(format!(
            "--n {n} must equal dim + 1 = {}",
            dim + 1
        )));
    }
    let q = args.q;
    let sig = p.levi_signature();
    let set = signature_set(&p, q)?;
    let integral = integrate_abs_det(&p, &set)?;
    let density = integral / (2.0 * PI).powi(n as i32);

    let mut report = ReportDocument::new("analyze-point", digest);
    report.parameters.insert("q".into(), json!(q));
    report.parameters.insert("n".into(), json!(n));
    report
        .parameters
        .insert("oracle".into(), json!(args.oracle));
    report.results = json!({
        "label": doc.label,
        "dim": dim,
        "q": q,
        "n": n,
        "levi_signature": sig,
        "y_status": sig.admits(q),
        "status": if set.is_empty() { "empty set" } else { "ok" },
        "intervals": set.intervals,
        "roots": set.roots,
        "root_bound": set.bound,
        "measure": set.measure(),
        "integral": integral,
        "local_density": density,
    });
    root_tolerances(&mut report);
    report.tolerance(
        "hermitian_input",
        HERMITIAN_TOL,
        "input |A_jt - conj(A_tj)| <= value * (1 + max |A|)",
    );
    report.provenance.insert(
        "integral".into(),
        "exact antiderivative of the determinant polynomial between consecutive real roots".into(),
    );
    report
        .provenance
        .insert("local_density".into(), "integral * (2 pi)^-n".into());

    if args.oracle {
        let grid = grid_signature_scan(&p, q, args.grid_points)?;
        report.tolerance(
            "grid_relative",
            GRID_RELATIVE_TOL,
            "relative gap between the exact integral and the grid Riemann sum",
        );
        report.oracle_comparisons.push(
            OracleComparison::new(
                "integral vs grid scan",
                integral,
                grid.riemann_integral,
                GRID_RELATIVE_TOL,
            )
            .with_detail("grid_points", args.grid_points)
            .with_detail("step", grid.step),
        );
        let wide: Vec<_> = set
            .intervals
            .iter()
            .filter(|i| i.len() > 4.0 * grid.step)
            .collect();
        let runs = grid.runs(q, dim);
        let mut cmp = if runs.len() == wide.len() {
            let err = runs
                .iter()
                .zip(&wide)
                .map(|(r, i)| (r.lo - i.lo).abs().max((r.hi - i.hi).abs()))
                .fold(0.0_f64, f64::max);
            OracleComparison::new("interval endpoints vs grid runs", 0.0, err, 2.0 * grid.step)
        } else {
            let mut c =
                OracleComparison::new("interval endpoints vs grid runs", 0.0, 0.0, 2.0 * grid.step)
                    .with_detail(
                        "mismatch",
                        format!("{} grid runs, {} intervals", runs.len(), wide.len()),
                    );
            c.passed = false;
            c
        };
        cmp = cmp
            .with_detail("grid_runs", json!(runs))
            .with_detail("compared_intervals", wide.len())
            .with_detail(
                "note",
                "analytic is the reference offset 0; oracle is the largest endpoint gap",
            );
        report.oracle_comparisons.push(cmp);
        report.provenance.insert(
            "oracle".into(),
            "midpoint grid on [-R-1, R+1], inertia by Householder tridiagonalization and Sturm counts".into(),
        );
    }
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn generated_spec(
    args: &AnalyzeManifoldArgs,
) -> CliResult<(ManifoldSpec, String, Option<GrauertGrid>)> {
    if args.lambda.is_empty() || args.mu.is_empty() {
        return Err(CliError::Usage(
            "--lambda and --mu are required for generated manifolds".into(),
        ));
    }
    let canonical = json!({
        "spec": format!("{:?}", args.spec),
        "lambda": args.lambda,
        "mu": args.mu,
        "samples": args.samples,
        "jitter_seed": args.jitter_seed,
    });
    let digest = sha256_digest(canonical.to_string().as_bytes());
    match args.spec {
        SpecKind::Heisenberg => Ok((
            heisenberg_spec(&args.lambda, &args.mu, args.samples)?,
            digest,
            None,
        )),
        _ => {
            let grid = GrauertGrid {
                jitter_seed: args.jitter_seed,
                ..GrauertGrid::with_samples(args.lambda.len(), args.samples)
            };
            Ok((
                grauert_tube_spec(&args.lambda, &args.mu, &grid)?,
                digest,
                Some(grid),
            ))
        }
    }
}

fn load_spec(args: &AnalyzeManifoldArgs) -> CliResult<(ManifoldSpec, String, Option<GrauertGrid>)> {
    match args.spec {
        SpecKind::File => {
            let path = args
                .file
                .as_deref()
                .ok_or_else(|| CliError::Usage("--spec file needs --file".into()))?;
            if !args.lambda.is_empty() || !args.mu.is_empty() {
                return Err(CliError::Usage(
                    "--lambda and --mu apply only to generated manifolds".into(),
                ));
            }
            let (text, digest) = read_text(path)?;
            let spec: ManifoldSpec = serde_json::from_str(&text)?;
            Ok((spec, digest, None))
        }
        _ => generated_spec(args),
    }
}

fn refinement(
    spec: &ManifoldSpec,
    report: &MorseBoundReport,
    grid: &GrauertGrid,
    args: &AnalyzeManifoldArgs,
) -> CliResult<Value> {
    let mut out = json!({ "fine_per_axis": grid.per_axis, "fiber": grid.fiber });
    if grid.per_axis < 2 {
        out["note"] = json!("single cell per axis; no coarser lattice");
        return Ok(out);
    }
    let coarse_grid = GrauertGrid {
        per_axis: grid.per_axis / 2,
        ..*grid
    };
    let coarse = grauert_tube_spec(&args.lambda, &args.mu, &coarse_grid)?;
    let mut per_q = BTreeMap::new();
    for (&q, v) in &report.per_q_integral {
        if let BoundValue::Value(fine) = v {
            let c = crmorse_core::bounds::global_integral(&coarse, q)?;
            let change = if *fine == 0.0 {
                (fine - c).abs()
            } else {
                (fine - c).abs() / fine.abs()
            };
            per_q.insert(
                q.to_string(),
                json!({ "coarse": c, "fine": fine, "relative_change": change }),
            );
        }
    }
    out["coarse_per_axis"] = json!(coarse_grid.per_axis);
    out["coarse_sample_count"] = json!(coarse.samples.len());
    out["fine_sample_count"] = json!(spec.samples.len());
    out["per_q"] = json!(per_q);
    Ok(out)
}

fn write_csv(path: &Path, spec: &ManifoldSpec, report: &MorseBoundReport) -> CliResult<()> {
    let qs: Vec<usize> = report.q_range.clone();
    let mut columns: BTreeMap<usize, Option<Vec<f64>>> = BTreeMap::new();
    for &q in &qs {
        let terms = if report.levi_signature.admits(q) {
            Some(sample_terms(spec, q)?)
        } else {
            None
        };
        columns.insert(q, terms);
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut header = vec!["id".to_string(), "dm_weight".into(), "coords".into()];
    header.extend(qs.iter().map(|q| format!("weighted_integral_q{q}")));
    let csv_err = |e: csv::Error| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    w.write_record(&header).map_err(csv_err)?;
    for (k, s) in spec.samples.iter().enumerate() {
        let mut row = vec![
            s.id.clone(),
            format!("{:?}", s.dm_weight),
            s.coords
                .iter()
                .map(|c| format!("{c:?}"))
                .collect::<Vec<_>>()
                .join(";"),
        ];
        for q in &qs {
            row.push(match &columns[q] {
                Some(t) => format!("{:?}", t[k]),
                None => "excluded".into(),
            });
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn analyze_manifold(args: &AnalyzeManifoldArgs) -> CliResult<ReportDocument> {
    let start = Instant::now();
    let qs: Option<Vec<usize>> = match (args.q_all, args.q.is_empty()) {
        (true, _) => None,
        (false, false) => Some(args.q.clone()),
        (false, true) => return Err(CliError::Usage("pass --q-all or --q".into())),
    };
    if let Some(k) = args.k {
        if !(k > 0.0 && k.is_finite()) {
            return Err(CliError::Usage(format!("--k must be positive, got {k}")));
        }
    }
    let (spec, digest, grid) = load_spec(args)?;
    let morse = MorseBoundReport::compute(&spec, qs.as_deref())?;

    let mut report = ReportDocument::new("analyze-manifold", digest);
    report.parameters.insert("spec".into(), json!(spec.name));
    if args.spec != SpecKind::File {
        report
            .parameters
            .insert("lambda".into(), json!(args.lambda));
        report.parameters.insert("mu".into(), json!(args.mu));
        report
            .parameters
            .insert("samples".into(), json!(args.samples));
        report
            .parameters
            .insert("jitter_seed".into(), json!(args.jitter_seed));
    }
    report.parameters.insert("q".into(), json!(morse.q_range));
    report.parameters.insert("k".into(), json!(args.k));
    report
        .parameters
        .insert("mc_draws".into(), json!(args.mc_draws));
    report.parameters.insert("seed".into(), json!(args.seed));

    let mut results = json!({ "morse": morse });
    if let Some(k) = args.k {
        let scale = k.powi(morse.n as i32);
        let bound: BTreeMap<usize, BoundValue> = morse
            .per_q_weak_coeff
            .iter()
            .map(|(&q, v)| {
                let b = match v {
                    BoundValue::Value(c) => BoundValue::Value(c * scale),
                    other => other.clone(),
                };
                (q, b)
            })
            .collect();
        results["bound_at_k"] = json!(bound);
    }
    if let Some(grid) = grid {
        results["refinement"] = refinement(&spec, &morse, &grid, args)?;
    }
    report.results = results;

    if let Some(draws) = args.mc_draws {
        for (&q, v) in &morse.per_q_integral {
            let BoundValue::Value(lattice) = v else {
                continue;
            };
            let (est, se) = mc_integral(&spec, q, draws, args.seed)?;
            let tol = if *lattice == 0.0 {
                3.0 * se
            } else {
                3.0 * se / lattice.abs()
            };
            report.oracle_comparisons.push(
                OracleComparison::new(
                    format!("q={q} sample quadrature vs Monte Carlo"),
                    *lattice,
                    est,
                    tol,
                )
                .with_detail("standard_error", se)
                .with_detail("draws", draws)
                .with_detail("seed", args.seed)
                .with_detail("sample_count", spec.samples.len()),
            );
        }
        report.tolerance(
            "monte_carlo",
            3.0,
            "Monte-Carlo estimates must lie within value standard errors",
        );
    }
    if let Some(path) = &args.csv {
        write_csv(path, &spec, &morse)?;
    }

    root_tolerances(&mut report);
    report.provenance = spec.metadata.clone();
    report.provenance.insert(
        "scale".into(),
        "global integrals are relative to the volume form dm listed under metric".into(),
    );
    report.provenance.insert(
        "coefficients".into(),
        "weak Morse and Weyl coefficients are (2 pi)^-n times the global integral".into(),
    );
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}
