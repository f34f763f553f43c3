use serde::Serialize;

use frachardy::corpus::decaying_corpus;
use frachardy::extremal::{self, Evaluator, SearchConfig};
use frachardy::hardy::{classical_constant, known_constant, sobolev_seminorm};
use frachardy::littlewood_paley::{
    besov_norm, build_partition, decompose, triebel_lizorkin_norm, PartitionRecord,
    DEFAULT_COVERAGE,
};
use frachardy::spectral::io::load_field;
use frachardy::spectral::{lq_norm, resample, weighted_lq_norm};
use frachardy::stein_weiss::{self, SteinWeissParams};
use frachardy::suite::{check_config, run_suite, summarize, Suite};
use frachardy::{CheckReport, GridSpec, Identity, SampledField};

use crate::config::{Format, RunConfig};
use crate::Failure;

/// Fields whose boundary values exceed this fraction of their peak are
/// poorly modeled by the periodic box.
const DECAY_WARNING: f64 = 1e-8;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn load(cfg: &RunConfig) -> Result<SampledField, Failure> {
    let path = cfg.field.as_ref().ok_or_else(|| usage("--field is required"))?;
    let f = load_field(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let decay = f.boundary_decay();
    if decay > DECAY_WARNING {
        eprintln!(
            "warning: field reaches {decay:.3e} of its peak on the box boundary (> {DECAY_WARNING:e})"
        );
    }
    Ok(f)
}

fn write_out(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = &cfg.output {
        std::fs::write(path, text)
            .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn emit_reports(cfg: &RunConfig, reports: &[CheckReport], format: Format) -> Result<bool, Failure> {
    let text = match format {
        Format::Json => to_json(&reports)?,
        Format::Csv => {
            let mut out = String::from(CheckReport::csv_header());
            out.push('\n');
            for r in reports {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            out
        }
    };
    write_out(cfg, &text)?;
    let (passed, failed, vacuous) = summarize(reports);
    eprintln!(
        "{}: {} checks, {passed} passed, {failed} failed, {vacuous} vacuous",
        cfg.command.as_deref().unwrap_or("run"),
        reports.len()
    );
    Ok(failed == 0)
}

fn default_identity(q: f64) -> Identity {
    if q == 2.0 {
        Identity::FractionalL2
    } else {
        Identity::FractionalW
    }
}

fn identity(cfg: &RunConfig, q: f64) -> Result<Identity, Failure> {
    match &cfg.identity {
        None => Ok(default_identity(q)),
        Some(name) => Identity::parse(name).ok_or_else(|| usage(format!("unknown identity `{name}`"))),
    }
}

/// Proven constant for `identity`, including the fractional quotient at
/// `s = 1, q = 2`, which is the classical one.
fn bound_for(identity: Identity, d: usize, s: f64, q: f64) -> Option<f64> {
    let fractional = matches!(identity, Identity::FractionalL2 | Identity::FractionalW);
    if fractional && s == 1.0 && q == 2.0 && d >= 3 {
        return Some(classical_constant(d));
    }
    known_constant(identity, d, q)
}

pub fn norm(cfg: &RunConfig) -> Result<bool, Failure> {
    let f = load(cfg)?;
    let grid = *f.grid();
    let kind = cfg.kind.as_deref().unwrap_or("lq");
    let s = cfg.s.unwrap_or(0.0);
    let q = cfg.q.unwrap_or(2.0);
    let coverage = cfg.coverage.unwrap_or(DEFAULT_COVERAGE);
    let value = match kind {
        "lq" => lq_norm(&f, q)?,
        "weighted" => weighted_lq_norm(&f, s, q)?,
        "sobolev" => sobolev_seminorm(&f, s, q)?,
        "besov" => besov_norm(&f, &build_partition(&grid, coverage)?, s, q, cfg.r.unwrap_or(q))?.value,
        "triebel-lizorkin" => {
            triebel_lizorkin_norm(&f, &build_partition(&grid, coverage)?, s, q, cfg.r.unwrap_or(2.0))?
                .value
        }
        other => return Err(usage(format!("unknown norm kind `{other}`"))),
    };
    eprintln!("{kind} norm = {value:e}");
    let report = CheckReport::scalar(format!("norm-{kind}"), grid.dim(), s, q, value, 0.0, true, 0.0)
        .on_grid(&grid);
    emit_reports(cfg, &[report], cfg.format())
}

#[derive(Serialize)]
struct LevelSummary {
    level: i32,
    frequency: f64,
    norm: f64,
}

#[derive(Serialize)]
struct LpSummary {
    partition: PartitionRecord,
    q: f64,
    levels: Vec<LevelSummary>,
    /// `||f - mean - sum_N P_N f||_q / ||f - mean||_q`.
    reconstruction_residual: f64,
}

pub fn lp(cfg: &RunConfig) -> Result<bool, Failure> {
    let f = load(cfg)?;
    let q = cfg.q.unwrap_or(2.0);
    let partition = build_partition(f.grid(), cfg.coverage.unwrap_or(DEFAULT_COVERAGE))?;
    let lp = decompose(&f, &partition)?;
    let norms = lp.level_norms(0.0, q)?;
    let levels = lp
        .levels()
        .iter()
        .zip(lp.frequencies())
        .zip(norms)
        .map(|((&level, &frequency), norm)| LevelSummary {
            level,
            frequency,
            norm,
        })
        .collect();
    let mean = f.mean();
    let centered = f.map(|v| v - mean);
    let base = lq_norm(&centered, q)?;
    let residual = lq_norm(&centered.sub(&lp.reconstruct())?, q)?;
    let summary = LpSummary {
        partition: partition.record(),
        q,
        levels,
        reconstruction_residual: if base > 0.0 { residual / base } else { 0.0 },
    };
    write_out(cfg, &to_json(&summary)?)?;
    eprintln!("lp: {} levels", partition.levels().len());
    Ok(true)
}

pub fn hardy_check(cfg: &RunConfig) -> Result<bool, Failure> {
    let f = load(cfg)?;
    let grid = *f.grid();
    let s = cfg.s.unwrap_or(1.0);
    let q = cfg.q.unwrap_or(2.0);
    let id = identity(cfg, q)?;
    let result = Evaluator::new(id, grid, s, q)?.quotient(&f)?;
    let bound = bound_for(id, grid.dim(), s, q);
    let report = result.to_report(&grid, bound, cfg.tolerances().quadrature);
    emit_reports(cfg, &[report], cfg.format())
}

pub fn schur_check(cfg: &RunConfig) -> Result<bool, Failure> {
    let reports = run_suite(Suite::Schur, &cfg.suite_config())?;
    emit_reports(cfg, &reports, cfg.format())
}

pub fn stein_weiss_check(cfg: &RunConfig) -> Result<bool, Failure> {
    let f = load(cfg)?;
    let grid = *f.grid();
    let d = grid.dim();
    let q = cfg.q.unwrap_or(2.0);
    let params = match (cfg.lambda, cfg.s) {
        (Some(lambda), _) => SteinWeissParams::new(
            d,
            lambda,
            cfg.p.unwrap_or(q),
            q,
            cfg.alpha.unwrap_or(0.0),
            cfg.beta.unwrap_or(0.0),
        )?,
        (None, Some(s)) => SteinWeissParams::hardy_specialization(d, s, q)?,
        (None, None) => return Err(usage("stein-weiss-check needs --lambda or --s")),
    };
    let result = stein_weiss::stein_weiss_check(&f, &params)?;
    let report = result.to_report(&grid, None, cfg.tolerances().quadrature);
    emit_reports(cfg, &[report], cfg.format())
}

pub fn estimate_constant(cfg: &RunConfig) -> Result<bool, Failure> {
    let d = cfg.d.unwrap_or(3);
    let s = cfg.s.unwrap_or(1.0);
    let q = cfg.q.unwrap_or(2.0);
    let id = match &cfg.identity {
        None => Identity::FractionalW,
        Some(_) => identity(cfg, q)?,
    };
    let base = SearchConfig::default();
    let search = SearchConfig {
        n: cfg.n.unwrap_or(base.n),
        length: cfg.length.unwrap_or(base.length),
        seed: cfg.seed.unwrap_or(base.seed),
        ..base
    };
    let est = extremal::estimate_constant(id, d, s, q, cfg.budget.unwrap_or(20), &search)?;
    write_out(cfg, &to_json(&est)?)?;
    let trend: Vec<String> = est.trend.iter().map(|t| format!("n={}: {:.6}", t.n, t.best)).collect();
    eprintln!(
        "estimate-constant {id}: best {:.6} ({}) after {} evaluations",
        est.best,
        trend.join(", "),
        est.evaluations
    );
    match bound_for(id, d, s, q) {
        Some(c) => {
            let tol = cfg.tolerances().quadrature;
            let ok = est.trend.iter().all(|t| !(t.best > c * (1.0 + tol)));
            if !ok {
                eprintln!("estimate exceeds the proven constant {c}");
            }
            Ok(ok)
        }
        None => Ok(true),
    }
}

fn sweep_points(cfg: &RunConfig) -> Result<Vec<f64>, Failure> {
    if let Some(v) = &cfg.values {
        return Ok(v.clone());
    }
    let (from, to, step) = match (cfg.from, cfg.to, cfg.step) {
        (Some(a), Some(b), Some(h)) => (a, b, h),
        _ => return Err(usage("sweep needs --values or --from/--to/--step")),
    };
    if !(step > 0.0) || !(to >= from) {
        return Ok(Vec::new());
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    // strip accumulated rounding so labels read 0.6, not 0.6000000000000001
    let tidy = |v: f64| (v * 1e12).round() / 1e12;
    Ok((0..count).map(|i| tidy(from + i as f64 * step)).collect())
}

pub fn sweep(cfg: &RunConfig) -> Result<bool, Failure> {
    let axis = cfg.axis.as_deref().ok_or_else(|| usage("--axis is required (s, q or n)"))?;
    if !matches!(axis, "s" | "q" | "n") {
        return Err(usage(format!("unknown sweep axis `{axis}`")));
    }
    let points = sweep_points(cfg)?;
    if points.is_empty() {
        return Err(usage("empty sweep range"));
    }
    let base = cfg.suite_config();
    // along n every grid sees the same functions: the corpus is built on the
    // coarsest grid and spectrally resampled
    let coarse = match axis {
        "n" => {
            let mut sizes = Vec::with_capacity(points.len());
            for &v in &points {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(usage(format!("grid size {v} is not a positive integer")));
                }
                sizes.push(v as usize);
            }
            let n = sizes.into_iter().min().expect("nonempty");
            let grid = GridSpec::new(base.d, n, base.length)?;
            Some(decaying_corpus(grid, base.corpus_size, base.seed, base.d as f64 / base.q))
        }
        _ => None,
    };
    let mut reports = Vec::new();
    for &v in &points {
        let mut sc = base;
        match axis {
            "s" => sc.s = v,
            "q" => sc.q = v,
            _ => sc.n = v as usize,
        }
        let grid = GridSpec::new(sc.d, sc.n, sc.length)?;
        let id = identity(cfg, sc.q)?;
        let eval = Evaluator::new(id, grid, sc.s, sc.q)?;
        let bound = bound_for(id, sc.d, sc.s, sc.q);
        let corpus = match &coarse {
            Some(fields) => fields
                .iter()
                .map(|cf| Ok((cf.label.clone(), resample(&cf.field, grid)?)))
                .collect::<Result<Vec<_>, frachardy::Error>>()?,
            None => decaying_corpus(grid, sc.corpus_size, sc.seed, sc.d as f64 / sc.q)
                .into_iter()
                .map(|cf| (cf.label, cf.field))
                .collect(),
        };
        for (label, f) in corpus {
            let r = eval.quotient(&f)?;
            reports.push(r.to_report(&grid, bound, sc.tolerances.quadrature).with_field(label));
        }
    }
    emit_reports(cfg, &reports, cfg.format.unwrap_or(Format::Csv))
}

pub fn verify(cfg: &RunConfig) -> Result<bool, Failure> {
    let name = cfg.suite.as_deref().unwrap_or("all");
    let suite = Suite::parse(name).ok_or_else(|| {
        usage(format!("unknown suite `{name}` (hardy, schur, stein-weiss, chain, all)"))
    })?;
    let sc = cfg.suite_config();
    check_config(&sc)?;
    let reports = run_suite(suite, &sc)?;
    emit_reports(cfg, &reports, cfg.format())
}
