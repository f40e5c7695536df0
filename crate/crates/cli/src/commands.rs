//! One function per subcommand, each turning a validated config into a [`Report`].

use affinor_core::field::{
    self, check_conformal_parallel, check_metric_parallel, check_transformed_parallel,
    nabla_q_residual, Point,
};
use affinor_core::positivity::criteria;
use affinor_core::{
    angle_pair, conformal_combine, det_closed_form, direct_trace_scaled, eigenvalues, gram_triple,
    limit_estimate, predicted_iterations, predicted_limit_cos_q, recurrence_trace,
    transform_angle_pair, ConformalParams, Error as CoreError, Scaling, SymCirc4, Vector4,
};
use affinor_oracle as oracle;
use rayon::prelude::*;

use crate::args::{Command, GridSpec};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{Cell, Report, Table};

/// Recurrence and direct traces are considered in agreement below this.
pub const AGREEMENT_TOL: f64 = 1e-10;
/// `check-fields` verdict thresholds for the gradient conditions and `∇q`.
pub const GRADIENT_TOL: f64 = 1e-6;
pub const NABLA_TOL: f64 = 1e-5;

pub fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Report, CliError> {
    match cmd {
        Command::Det => det(cfg),
        Command::Posdef => posdef(cfg),
        Command::Angles => angles(cfg),
        Command::Transform => transform(cfg),
        Command::Iterate => iterate(cfg),
        Command::CheckFields => check_fields(cfg),
        Command::Sweep => sweep(cfg),
        Command::Families => Ok(list_families()),
    }
}

fn metric(cfg: &RunConfig) -> Result<SymCirc4, CliError> {
    let [a, b, c] = cfg.require_metric()?;
    Ok(SymCirc4::raw(a, b, c)?)
}

fn vector(cfg: &RunConfig) -> Result<Vector4, CliError> {
    let [x, y, z, u] = cfg.require_vector()?;
    Ok(Vector4::try_new(x, y, z, u)?)
}

/// Parameters that must satisfy `0 < β < α`.
fn params(cfg: &RunConfig) -> Result<ConformalParams, CliError> {
    let p = cfg.require_params()?;
    let cp = ConformalParams::new(p.alpha, p.beta)?;
    cp.ensure_positivity_preserving()?;
    Ok(cp)
}

fn scaling(cfg: &RunConfig) -> Scaling {
    if cfg.renormalize {
        Scaling::Trace
    } else {
        Scaling::Raw
    }
}

fn base_report(command: &'static str, cfg: &RunConfig) -> Report {
    let mut r = Report::new(command);
    if let Some(m) = cfg.metric {
        r.input("metric", m.to_vec());
    }
    r
}

fn det(cfg: &RunConfig) -> Result<Report, CliError> {
    let m = metric(cfg)?;
    let (a, b, c) = m.coefficients();
    let closed = det_closed_form(&m);
    let cofactor = oracle::det4(&oracle::metric_matrix(a, b, c));
    let scale = closed.abs().max(cofactor.abs()).max(f64::MIN_POSITIVE);
    let mut r = base_report("det", cfg);
    r.result("det_closed_form", closed)
        .result("det_cofactor", cofactor)
        .result("rel_diff", (closed - cofactor).abs() / scale);
    Ok(r)
}

fn posdef(cfg: &RunConfig) -> Result<Report, CliError> {
    let m = metric(cfg)?;
    let (a, b, c) = m.coefficients();
    let mut r = base_report("posdef", cfg);
    for crit in criteria() {
        r.result(crit.name(), crit.holds(&m));
    }
    let s = eigenvalues(&m);
    r.result("eigenvalue_top", s.top)
        .result("eigenvalue_double", s.double)
        .result("eigenvalue_bottom", s.bottom);
    let minors = oracle::leading_minors(&oracle::metric_matrix(a, b, c));
    for (i, d) in minors.iter().enumerate() {
        r.result(&format!("leading_minor_{}", i + 1), *d);
    }
    r.result("minors_positive", minors.iter().all(|&d| d > 0.0));
    Ok(r)
}

fn angles(cfg: &RunConfig) -> Result<Report, CliError> {
    let m = metric(cfg)?;
    let w = vector(cfg)?;
    let p = angle_pair(&m, w)?;
    let g = gram_triple(&m, w);
    let (phi, psi) = p.angles();
    let mut r = base_report("angles", cfg);
    r.input("vector", w.to_array().to_vec());
    r.result("cos_q", p.cos_q)
        .result("cos_q2", p.cos_q2)
        .result("angle_q", phi)
        .result("angle_q2", psi)
        .result("g_w_w", g.ww)
        .result("g_w_qw", g.w_qw)
        .result("g_w_q2w", g.w_q2w);
    Ok(r)
}

fn params_inputs(r: &mut Report, cp: ConformalParams) {
    r.input("alpha", cp.alpha).input("beta", cp.beta);
}

fn transform(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = metric(cfg)?;
    let w = vector(cfg)?;
    let cp = params(cfg)?;
    let before = angle_pair(&g, w)?;
    let by_formula = transform_angle_pair(before, cp)?;
    let by_metric = angle_pair(&conformal_combine(&g, cp), w)?;
    let dev = (by_formula.cos_q - by_metric.cos_q)
        .abs()
        .max((by_formula.cos_q2 - by_metric.cos_q2).abs());
    let mut r = base_report("transform", cfg);
    r.input("vector", w.to_array().to_vec());
    params_inputs(&mut r, cp);
    r.result("cos_q", before.cos_q)
        .result("cos_q2", before.cos_q2)
        .result("cos_q1_recurrence", by_formula.cos_q)
        .result("cos_q2_1_recurrence", by_formula.cos_q2)
        .result("cos_q1_direct", by_metric.cos_q)
        .result("cos_q2_1_direct", by_metric.cos_q2)
        .result("max_abs_dev", dev);
    Ok(r)
}

fn iterate(cfg: &RunConfig) -> Result<Report, CliError> {
    let g0 = metric(cfg)?;
    let w = vector(cfg)?;
    let cp = params(cfg)?;
    let n = cfg.steps();
    let tol = cfg.tolerance()?;
    let p0 = angle_pair(&g0, w)?;
    let rec = recurrence_trace(p0, cp, n)?;
    let dir = direct_trace_scaled(&g0, w, cp, n, scaling(cfg))?;

    let rows = rec
        .rows
        .iter()
        .zip(&dir.rows)
        .map(|(x, y)| {
            let dev = (x.cos_q - y.cos_q).abs().max((x.cos_q2 - y.cos_q2).abs());
            vec![
                Cell::from(x.n),
                x.cos_q.into(),
                x.cos_q2.into(),
                y.cos_q.into(),
                y.cos_q2.into(),
                dev.into(),
            ]
        })
        .collect();
    let header = [
        "n",
        "cos_q_rec",
        "cos_q2_rec",
        "cos_q_dir",
        "cos_q2_dir",
        "abs_dev",
    ];

    let max_dev = rec.max_abs_deviation(&dir);
    let mut r = base_report("iterate", cfg);
    r.input("vector", w.to_array().to_vec());
    params_inputs(&mut r, cp);
    r.input("steps", n)
        .input("tolerance", tol)
        .input("renormalize", cfg.renormalize);
    r.table = Some(Table {
        header: header.map(String::from).to_vec(),
        rows,
    });
    r.note("max_abs_dev", max_dev)
        .note("agreement_tol", AGREEMENT_TOL)
        .note("agreement", max_dev < AGREEMENT_TOL)
        .note("contraction_ratio", cp.contraction_ratio());
    if let Some(est) = limit_estimate(&dir, tol) {
        r.note("limit_cos_q", est.cos_q)
            .note("limit_cos_q2", est.cos_q2)
            .note("limit_converged", est.converged);
    }
    r.note("predicted_limit_cos_q", predicted_limit_cos_q(&g0, w));
    r.note(
        "predicted_iterations",
        predicted_iterations(p0.cos_q2, cp, tol).ok(),
    );
    r.note("boundary_rows", rec.boundary_rows().len());
    Ok(r)
}

fn eval_point(bundle: &field::FieldBundle, cfg: &RunConfig) -> Point {
    cfg.point.unwrap_or_else(|| {
        // Unbounded axes have no centre; fall back to the point of the axis nearest 0.
        let d = bundle.domain();
        let c = d.center();
        std::array::from_fn(|i| {
            if c[i].is_finite() {
                c[i]
            } else {
                0.0_f64.clamp(d.lo[i], d.hi[i])
            }
        })
    })
}

fn check_fields(cfg: &RunConfig) -> Result<Report, CliError> {
    let name = cfg.require_family()?;
    let fam = field::family(name)?;
    let mut bundle = fam.bundle();
    if let Some(h) = cfg.fd_step()? {
        bundle = bundle.with_step(h);
    }
    let p = eval_point(&bundle, cfg);
    let res_metric = check_metric_parallel(&bundle, &p)?;
    let nabla = nabla_q_residual(&bundle, &p)?;

    let mut r = Report::new("check-fields");
    r.input("field_family", name)
        .input("point", p.to_vec())
        .input("fd_step", bundle.fd_step());
    let g = bundle.metric_at(&p)?;
    r.result("family_parallel", fam.parallel())
        .result("a", g.a())
        .result("b", g.b())
        .result("c", g.c())
        .result("res_metric_a", res_metric.first)
        .result("res_metric_b", res_metric.second)
        .result("nabla_q_residual", nabla)
        .result("gradient_conditions_hold", res_metric.max() < GRADIENT_TOL)
        .result("nabla_q_vanishes", nabla < NABLA_TOL)
        .result(
            "equivalence_consistent",
            (res_metric.max() < GRADIENT_TOL) == (nabla < NABLA_TOL),
        );

    if let (Some(alpha), Some(beta)) = (&bundle.alpha, &bundle.beta) {
        let res_conformal = check_conformal_parallel(alpha, beta, &p)?;
        let res_transformed = check_transformed_parallel(&bundle, &p)?;
        r.result("alpha", alpha.eval(&p))
            .result("beta", beta.eval(&p))
            .result("res_conformal_alpha", res_conformal.first)
            .result("res_conformal_beta", res_conformal.second)
            .result("res_transformed_a", res_transformed.first)
            .result("res_transformed_b", res_transformed.second);
    }
    Ok(r)
}

fn grid(cfg: &RunConfig) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (ag, bg) = match (cfg.alpha_grid, cfg.beta_grid) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(CliError::Config(
                "sweep needs --alpha-grid and --beta-grid (start,stop,count)".into(),
            ))
        }
    };
    let (alphas, betas) = (ag.values(), bg.values());
    if alphas.is_empty() || betas.is_empty() {
        return Err(CliError::Config(
            "sweep grids must contain at least one value".into(),
        ));
    }
    Ok((alphas, betas))
}

fn sweep_cell(
    g0: &SymCirc4,
    w: Vector4,
    alpha: f64,
    beta: f64,
    cfg: &RunConfig,
    tol: f64,
) -> Vec<Cell> {
    let mut row = vec![Cell::from(alpha), Cell::from(beta)];
    let cp = match ConformalParams::new(alpha, beta) {
        Ok(cp) if cp.is_positivity_preserving() => cp,
        _ => {
            row.extend([
                Cell::from("invalid_params"),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
            return row;
        }
    };
    match direct_trace_scaled(g0, w, cp, cfg.steps(), scaling(cfg)) {
        Ok(trace) => {
            let est = limit_estimate(&trace, tol);
            row.push(Cell::from("ok"));
            row.push(cp.contraction_ratio().into());
            row.push(est.map(|e| e.cos_q).into());
            row.push(est.map(|e| e.cos_q2).into());
            row.push(est.map(|e| e.converged).into());
        }
        Err(e) => {
            let status = match e {
                CoreError::ScaleOverflow { .. } => "overflow",
                _ => "error",
            };
            row.extend([
                Cell::from(status),
                cp.contraction_ratio().into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }
    row
}

fn sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let g0 = metric(cfg)?;
    let w = vector(cfg)?;
    let tol = cfg.tolerance()?;
    let (alphas, betas) = grid(cfg)?;
    // The starting pair must exist independently of (alpha, beta).
    angle_pair(&g0, w)?;

    let cells: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| betas.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<Vec<Cell>> = cells
        .par_iter()
        .map(|&(a, b)| sweep_cell(&g0, w, a, b, cfg, tol))
        .collect();

    let mut r = base_report("sweep", cfg);
    r.input("vector", w.to_array().to_vec())
        .input("steps", cfg.steps())
        .input("tolerance", tol)
        .input("renormalize", cfg.renormalize);
    if let (Some(a), Some(b)) = (cfg.alpha_grid, cfg.beta_grid) {
        let as_json =
            |g: GridSpec| serde_json::json!({"start": g.start, "stop": g.stop, "count": g.count});
        r.input("alpha_grid", as_json(a))
            .input("beta_grid", as_json(b));
    }
    let header = [
        "alpha",
        "beta",
        "status",
        "contraction_ratio",
        "limit_cos_q",
        "limit_cos_q2",
        "converged",
    ];
    r.table = Some(Table {
        header: header.map(String::from).to_vec(),
        rows,
    });
    r.note("predicted_limit_cos_q", predicted_limit_cos_q(&g0, w))
        .note("cells", cells.len());
    Ok(r)
}

fn list_families() -> Report {
    let mut r = Report::new("families");
    let mut rows = Vec::new();
    for f in field::families() {
        let b = f.bundle();
        rows.push(vec![
            Cell::from("field_family"),
            f.name().into(),
            Cell::from(f.parallel()),
            Cell::from(b.alpha.is_some()),
            f.description().into(),
        ]);
    }
    for c in criteria() {
        rows.push(vec![
            Cell::from("positivity"),
            c.name().into(),
            Cell::Empty,
            Cell::Empty,
            c.description().into(),
        ]);
    }
    let header = ["kind", "name", "parallel", "conformal", "description"];
    r.table = Some(Table {
        header: header.map(String::from).to_vec(),
        rows,
    });
    r
}
