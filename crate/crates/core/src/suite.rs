//! Named verification suites over a fixed-seed corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{decaying_corpus, field_seed, mixed_corpus, CorpusField};
use crate::error::{Error, Result};
use crate::hardy::{
    besov_hardy_quotient, classical_constant, classical_hardy_quotient, fractional_hardy_quotient,
    gradient_constant, gradient_hardy_quotient, gradient_refinement_chain, holder_refinement_check,
    lr_monotonicity_check, refined_hardy_quotient, shell_chain_check,
};
use crate::littlewood_paley::{build_partition, DEFAULT_COVERAGE};
use crate::report::{tolerance, CheckReport};
use crate::schur::{hardy_alpha_row_sums, schur_bound_check, SchurKernel};
use crate::spectral::GridSpec;
use crate::stein_weiss::{
    direct_grid_limit, specialization_check, split_domination, split_s1_s2, u_bound_check,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hardy,
    Schur,
    SteinWeiss,
    Chain,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "hardy" => Some(Suite::Hardy),
            "schur" => Some(Suite::Schur),
            "stein-weiss" => Some(Suite::SteinWeiss),
            "chain" => Some(Suite::Chain),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub spectral: f64,
    pub quadrature: f64,
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            spectral: tolerance::SPECTRAL,
            quadrature: tolerance::QUADRATURE,
            exact: tolerance::EXACT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub s: f64,
    pub q: f64,
    pub seed: u64,
    pub corpus_size: usize,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            d: 3,
            n: 32,
            length: 8.0,
            s: 1.0,
            q: 2.0,
            seed: 1,
            corpus_size: 8,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.d, self.n, self.length)
    }

    fn corpus(&self, grid: GridSpec) -> Vec<CorpusField> {
        decaying_corpus(grid, self.corpus_size, self.seed, grid.dim() as f64 / self.q)
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    match suite {
        Suite::Hardy => hardy_suite(cfg),
        Suite::Schur => schur_suite(cfg),
        Suite::SteinWeiss => stein_weiss_suite(cfg),
        Suite::Chain => chain_suite(cfg),
        Suite::All => {
            let mut out = hardy_suite(cfg)?;
            out.extend(schur_suite(cfg)?);
            out.extend(stein_weiss_suite(cfg)?);
            out.extend(chain_suite(cfg)?);
            Ok(out)
        }
    }
}

/// `(passed, failed, vacuous)`; vacuous checks count as passed.
pub fn summarize(reports: &[CheckReport]) -> (usize, usize, usize) {
    let passed = reports.iter().filter(|r| r.pass).count();
    let vacuous = reports.iter().filter(|r| r.vacuous).count();
    (passed, reports.len() - passed, vacuous)
}

pub fn hardy_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let grid = cfg.grid()?;
    let (d, s, q) = (cfg.d, cfg.s, cfg.q);
    let tol = cfg.tolerances.quadrature;
    let partition = build_partition(&grid, DEFAULT_COVERAGE)?;
    let mut out = Vec::new();
    for cf in cfg.corpus(grid) {
        let f = &cf.field;
        let label = cf.label.as_str();
        let mut push = |r: CheckReport| out.push(r.with_field(label));
        push(fractional_hardy_quotient(f, s, q)?.to_report(&grid, None, tol));
        push(besov_hardy_quotient(f, &partition, s, q)?.to_report(&grid, None, tol));
        if q > 2.0 {
            push(refined_hardy_quotient(f, &partition, s, q)?.to_report(&grid, None, tol));
        }
        if d >= 3 {
            push(classical_hardy_quotient(f)?.to_report(&grid, Some(classical_constant(d)), tol));
        }
        if q < d as f64 {
            push(gradient_hardy_quotient(f, q, None)?.to_report(
                &grid,
                Some(gradient_constant(d, q)),
                tol,
            ));
            if q > 2.0 {
                let links = gradient_refinement_chain(f, &partition, q)?;
                push(
                    gradient_hardy_quotient(f, q, Some(&partition))?
                        .to_report(&grid, None, tol)
                        .with_links(links),
                );
            }
        }
    }
    Ok(out)
}

pub fn schur_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let (d, s, q) = (cfg.d as f64, cfg.s, cfg.q);
    let tol = cfg.tolerances.spectral;
    let sums = hardy_alpha_row_sums(s, d, q)?;
    let err = (sums.sum_over_n - sums.closed_form)
        .abs()
        .max((sums.sum_over_r - sums.closed_form).abs());
    let mut out = vec![CheckReport::scalar(
        "schur-row-sum",
        cfg.d,
        s,
        q,
        sums.sum_over_n,
        sums.closed_form,
        err <= tol,
        tol,
    )];
    let kernel = SchurKernel::hardy((-10..=10).collect(), (-10..=10).collect(), s, d, q)?;
    for i in 0..cfg.corpus_size {
        let mut rng = ChaCha8Rng::seed_from_u64(field_seed(cfg.seed, i));
        let c: Vec<f64> = (0..21).map(|_| rng.random::<f64>()).collect();
        let b = schur_bound_check(&kernel, &c, q)?;
        out.push(
            CheckReport::scalar(
                "schur-bound",
                cfg.d,
                s,
                q,
                b.lhs,
                b.rhs,
                b.lhs <= b.rhs * (1.0 + cfg.tolerances.exact),
                cfg.tolerances.exact,
            )
            .with_field(format!("uniform-sequence(index={i})")),
        );
    }
    Ok(out)
}

pub fn stein_weiss_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let (d, s, q) = (cfg.d, cfg.s, cfg.q);
    let coarse = GridSpec::new(d, cfg.n.min(direct_grid_limit(d)), cfg.length)?;
    let mut out = Vec::new();
    for cf in cfg.corpus(coarse) {
        let g = &cf.field;
        out.push(
            u_bound_check(g, s, q)?
                .to_report(&coarse, Some(1.0), cfg.tolerances.quadrature)
                .with_field(cf.label.as_str()),
        );
        let split = split_s1_s2(g, s, q)?;
        let dom = split_domination(g, s, &split)?;
        let cap = 2f64.powf(s);
        out.push(
            CheckReport::scalar(
                "split-domination",
                d,
                s,
                q,
                dom.ratio,
                cap,
                dom.ratio <= cap * (1.0 + cfg.tolerances.exact),
                cfg.tolerances.exact,
            )
            .on_grid(&coarse)
            .with_field(cf.label.as_str()),
        );
    }
    let grid = cfg.grid()?;
    for cf in cfg.corpus(grid) {
        let sp = specialization_check(&cf.field, s, q)?;
        let (a, b) = match sp.ratio() {
            Some(_) => (
                sp.stein_weiss.quotient().unwrap_or(0.0),
                sp.constant * sp.fractional.quotient().unwrap_or(0.0),
            ),
            None => (0.0, 0.0),
        };
        let pass = (a == 0.0 && b == 0.0) || (a / b - 1.0).abs() <= SPECIALIZATION_TOL;
        out.push(
            CheckReport::scalar("stein-weiss-specialization", d, s, q, a, b, pass, SPECIALIZATION_TOL)
                .on_grid(&grid)
                .with_field(cf.label.as_str()),
        );
    }
    Ok(out)
}

/// Relative agreement required between the two specialized quotients.
pub const SPECIALIZATION_TOL: f64 = 0.02;

pub fn chain_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let grid = cfg.grid()?;
    let (d, s, q) = (cfg.d, cfg.s, cfg.q);
    let partition = build_partition(&grid, DEFAULT_COVERAGE)?;
    let exact = cfg.tolerances.exact;
    let mut out = Vec::new();
    for cf in mixed_corpus(grid, cfg.corpus_size, cfg.seed, d as f64 / q) {
        let f = &cf.field;
        let label = cf.label.as_str();
        let chain = shell_chain_check(f, &partition, s, q)?;
        let mut r = CheckReport::scalar("shell-chain", d, s, q, chain.lhs, chain.rhs, true, exact)
            .on_grid(&grid)
            .with_bound(chain.assembled_constant)
            .with_field(label);
        r.vacuous = chain.lhs == 0.0 && chain.rhs == 0.0;
        out.push(r.with_links(chain.links));
        if q >= 2.0 {
            let (a, b, ok) = lr_monotonicity_check(f, &partition, s, q)?;
            out.push(
                CheckReport::scalar("lr-monotonicity", d, s, q, a, b, ok, 0.0)
                    .on_grid(&grid)
                    .with_field(label),
            );
        }
        if q > 2.0 {
            let h = holder_refinement_check(f, &partition, s, q)?;
            out.push(
                CheckReport::scalar("holder-refinement", d, s, q, h.lhs, h.rhs, h.pass, exact)
                    .on_grid(&grid)
                    .with_field(label),
            );
        }
    }
    Ok(out)
}

/// Parse-time validation shared by front ends.
pub fn check_config(cfg: &SuiteConfig) -> Result<()> {
    cfg.grid()?;
    if !(cfg.q > 1.0 && cfg.q.is_finite()) {
        return Err(Error::InvalidExponent(format!("need 1 < q < inf, got {}", cfg.q)));
    }
    if !(cfg.s > 0.0 && cfg.s < cfg.d as f64 / cfg.q) {
        return Err(Error::Inadmissible(format!(
            "need 0 < s < d/q = {}, got s = {}",
            cfg.d as f64 / cfg.q,
            cfg.s
        )));
    }
    Ok(())
}
