//! Empirical best constants: maximize a Hardy quotient over parametric
//! trial families by derivative-free coordinate search.
//!
//! The search is a fixed deterministic sequence of evaluations; a budget
//! truncates it, so a larger budget only ever appends trials.

use serde::{Deserialize, Serialize};

use crate::corpus::{gaussian, interior_band, truncated_power, windowed_random};
use crate::error::{Error, Result};
use crate::hardy::{
    besov_hardy_quotient, classical_hardy_quotient, fractional_hardy_quotient,
    gradient_hardy_quotient, refined_hardy_quotient,
};
use crate::littlewood_paley::{build_partition, DyadicPartition, DEFAULT_COVERAGE};
use crate::report::{Identity, QuotientResult};
use crate::spectral::{GridSpec, SampledField};

/// A point in one trial family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrialFamily {
    Gaussian {
        sigma: f64,
    },
    TruncatedPower {
        a: f64,
        r_in: f64,
        r_out: f64,
    },
    /// Band-limited random field under a Gaussian window of width `sigma`.
    RandomBandLimited {
        seed: u64,
        envelope: f64,
        sigma: f64,
    },
}

impl TrialFamily {
    pub fn kind(&self) -> &'static str {
        match self {
            TrialFamily::Gaussian { .. } => "gaussian",
            TrialFamily::TruncatedPower { .. } => "truncated-power",
            TrialFamily::RandomBandLimited { .. } => "random-band-limited",
        }
    }

    /// Samples the trial on `grid`; `q` bounds the power exponent.
    pub fn build(&self, grid: GridSpec, q: f64) -> Result<SampledField> {
        let h = grid.spacing();
        let d = grid.dim() as f64;
        match *self {
            TrialFamily::Gaussian { sigma } => {
                if !(sigma > 0.0) {
                    return Err(Error::Inadmissible(format!("Gaussian width {sigma} <= 0")));
                }
                Ok(gaussian(grid, sigma))
            }
            TrialFamily::TruncatedPower { a, r_in, r_out } => {
                if !(a > 0.0 && a < d / q) {
                    return Err(Error::Inadmissible(format!(
                        "truncated power needs 0 < a < d/q = {}, got a = {a}",
                        d / q
                    )));
                }
                if r_in < 2.0 * h * (1.0 - 1e-12) {
                    return Err(Error::CutoffCollapse(format!(
                        "inner cutoff {r_in} below two grid spacings ({})",
                        2.0 * h
                    )));
                }
                if !(r_out > r_in) {
                    return Err(Error::CutoffCollapse(format!(
                        "outer cutoff {r_out} not above inner cutoff {r_in}"
                    )));
                }
                Ok(truncated_power(grid, a, r_in, r_out))
            }
            TrialFamily::RandomBandLimited {
                seed,
                envelope,
                sigma,
            } => {
                let band = interior_band(&grid, DEFAULT_COVERAGE);
                Ok(windowed_random(grid, band, envelope, sigma, seed))
            }
        }
    }
}

/// Evaluates one identity on one grid.
pub struct Evaluator {
    identity: Identity,
    grid: GridSpec,
    s: f64,
    q: f64,
    partition: Option<DyadicPartition>,
}

impl Evaluator {
    pub fn new(identity: Identity, grid: GridSpec, s: f64, q: f64) -> Result<Self> {
        let partition = match identity {
            Identity::Besov | Identity::Refined | Identity::GradientRefined => {
                Some(build_partition(&grid, DEFAULT_COVERAGE)?)
            }
            _ => None,
        };
        if matches!(identity, Identity::SteinWeiss | Identity::UBound) {
            return Err(Error::Inadmissible(format!(
                "no trial-family estimate for {identity}"
            )));
        }
        Ok(Evaluator {
            identity,
            grid,
            s,
            q,
            partition,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn quotient(&self, f: &SampledField) -> Result<QuotientResult> {
        let (s, q) = (self.s, self.q);
        match self.identity {
            Identity::ClassicalH1 => classical_hardy_quotient(f),
            Identity::FractionalL2 | Identity::FractionalW => fractional_hardy_quotient(f, s, q),
            Identity::Besov => besov_hardy_quotient(f, self.partition.as_ref().unwrap(), s, q),
            Identity::Refined => refined_hardy_quotient(f, self.partition.as_ref().unwrap(), s, q),
            Identity::GradientClassical => gradient_hardy_quotient(f, q, None),
            Identity::GradientRefined => gradient_hardy_quotient(f, q, self.partition.as_ref()),
            Identity::SteinWeiss | Identity::UBound => unreachable!("rejected in new"),
        }
    }

    /// Quotient of one trial; `None` when the trial is invalid or vacuous.
    pub fn evaluate(&self, trial: &TrialFamily) -> Option<f64> {
        let f = trial.build(self.grid, self.effective_q()).ok()?;
        self.quotient(&f).ok()?.quotient().filter(|v| v.is_finite())
    }

    /// The exponent that bounds admissible powers: `q` for the weight `|x|^{-s}`.
    fn effective_q(&self) -> f64 {
        match self.identity {
            Identity::ClassicalH1 => 2.0,
            _ => self.q,
        }
    }

    fn weight_order(&self) -> f64 {
        match self.identity {
            Identity::ClassicalH1 | Identity::GradientClassical | Identity::GradientRefined => 1.0,
            _ => self.s,
        }
    }
}

/// Search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub seed: u64,
    pub sweeps: usize,
    pub golden_steps: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n: 64,
            length: 16.0,
            seed: 1,
            sweeps: 3,
            golden_steps: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub n: usize,
    pub best: f64,
}

/// Result of one estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub identity: Identity,
    pub d: usize,
    pub s: f64,
    pub q: f64,
    /// Largest quotient over all trials on the base grid.
    pub best: f64,
    pub params: TrialFamily,
    /// Best quotient at `n` and at `2n`.
    pub trend: Vec<TrendPoint>,
    pub budget: usize,
    pub evaluations: usize,
}

struct Coordinate {
    lo: f64,
    hi: f64,
}

/// Parametrization of one family: start point, bounds, and the map to a trial.
struct Family {
    start: Vec<f64>,
    bounds: Vec<Coordinate>,
    make: Box<dyn Fn(&[f64]) -> TrialFamily>,
}

fn families(eval: &Evaluator, seed: u64) -> Vec<Family> {
    let grid = eval.grid;
    let h = grid.spacing();
    let l = grid.length();
    let d = grid.dim() as f64;
    let cap = d / eval.effective_q();
    let critical = (cap - eval.weight_order()).clamp(0.05 * cap, 0.95 * cap);
    let sigma_lo = (2.0 * h).ln();
    let sigma_hi = (l / 12.0).ln().max(sigma_lo + 1e-9);
    let r_in_lo = (2.0 * h).ln();
    let r_out_hi = (l / 4.0).ln();
    let r_in_hi = (r_out_hi - 2f64.ln()).max(r_in_lo + 1e-9);
    vec![
        Family {
            start: vec![(l / 16.0).ln().clamp(sigma_lo, sigma_hi)],
            bounds: vec![Coordinate {
                lo: sigma_lo,
                hi: sigma_hi,
            }],
            make: Box::new(|x| TrialFamily::Gaussian { sigma: x[0].exp() }),
        },
        Family {
            start: vec![critical, r_in_lo, r_out_hi],
            bounds: vec![
                Coordinate {
                    lo: 0.05 * cap,
                    hi: 0.98 * cap,
                },
                Coordinate {
                    lo: r_in_lo,
                    hi: r_in_hi,
                },
                Coordinate {
                    lo: r_in_lo + 2f64.ln(),
                    hi: r_out_hi,
                },
            ],
            make: Box::new(|x| TrialFamily::TruncatedPower {
                a: x[0],
                r_in: x[1].exp(),
                r_out: x[2].exp(),
            }),
        },
        Family {
            start: vec![1.0, (l / 16.0).ln().clamp(sigma_lo, sigma_hi)],
            bounds: vec![
                Coordinate { lo: 0.0, hi: 2.0 },
                Coordinate {
                    lo: sigma_lo,
                    hi: sigma_hi,
                },
            ],
            make: Box::new(move |x| TrialFamily::RandomBandLimited {
                seed,
                envelope: x[0],
                sigma: x[1].exp(),
            }),
        },
    ]
}

/// Running state of the evaluation sequence.
struct Search<'a> {
    eval: &'a Evaluator,
    budget: usize,
    count: usize,
    best: Option<(f64, TrialFamily)>,
}

impl Search<'_> {
    fn exhausted(&self) -> bool {
        self.count >= self.budget
    }

    fn trial(&mut self, t: TrialFamily) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        self.count += 1;
        let v = self.eval.evaluate(&t)?;
        if self.best.as_ref().is_none_or(|(b, _)| v > *b) {
            self.best = Some((v, t));
        }
        Some(v)
    }

    /// Golden-section maximization of one coordinate; returns the best
    /// point seen (including the incumbent) and its value.
    fn golden(&mut self, fam: &Family, x: &mut [f64], i: usize, fx: f64, steps: usize) -> f64 {
        const PHI: f64 = 0.618_033_988_749_894_9;
        let (mut a, mut b) = (fam.bounds[i].lo, fam.bounds[i].hi);
        let at = |this: &mut Self, v: f64, x: &mut [f64]| {
            let keep = x[i];
            x[i] = v;
            let r = this.trial((fam.make)(x)).unwrap_or(f64::NEG_INFINITY);
            x[i] = keep;
            r
        };
        let mut c = b - PHI * (b - a);
        let mut e = a + PHI * (b - a);
        let mut fc = at(self, c, x);
        let mut fe = at(self, e, x);
        let mut best = (x[i], fx);
        for (p, v) in [(c, fc), (e, fe)] {
            if v > best.1 {
                best = (p, v);
            }
        }
        for _ in 0..steps {
            if self.exhausted() {
                break;
            }
            if fc >= fe {
                b = e;
                e = c;
                fe = fc;
                c = b - PHI * (b - a);
                fc = at(self, c, x);
                if fc > best.1 {
                    best = (c, fc);
                }
            } else {
                a = c;
                c = e;
                fc = fe;
                e = a + PHI * (b - a);
                fe = at(self, e, x);
                if fe > best.1 {
                    best = (e, fe);
                }
            }
        }
        x[i] = best.0;
        best.1
    }

    fn run_family(&mut self, fam: &Family, sweeps: usize, steps: usize) {
        let mut x = fam.start.clone();
        let mut fx = self.trial((fam.make)(&x)).unwrap_or(f64::NEG_INFINITY);
        for _ in 0..sweeps {
            for i in 0..x.len() {
                if self.exhausted() {
                    return;
                }
                fx = self.golden(fam, &mut x, i, fx, steps);
            }
        }
    }
}

fn search(eval: &Evaluator, cfg: &SearchConfig, budget: usize, only: Option<&str>) -> (Option<(f64, TrialFamily)>, usize) {
    let mut st = Search {
        eval,
        budget,
        count: 0,
        best: None,
    };
    for fam in families(eval, cfg.seed) {
        if let Some(kind) = only {
            if (fam.make)(&fam.start).kind() != kind {
                continue;
            }
        }
        st.run_family(&fam, cfg.sweeps, cfg.golden_steps);
        if st.exhausted() {
            break;
        }
    }
    (st.best, st.count)
}

/// Maximize the quotient of `identity` over all three families on an
/// `n`-grid, then repeat the search for the winning family at `2n`.
pub fn estimate_constant(
    identity: Identity,
    d: usize,
    s: f64,
    q: f64,
    budget: usize,
    cfg: &SearchConfig,
) -> Result<ConstantEstimate> {
    if budget == 0 {
        return Err(Error::Inadmissible("budget must be at least one evaluation".into()));
    }
    let grid = GridSpec::new(d, cfg.n, cfg.length)?;
    let eval = Evaluator::new(identity, grid, s, q)?;
    // surface parameter errors before the search swallows them
    eval.quotient(&gaussian(grid, cfg.length / 16.0))?;
    let (best, evaluations) = search(&eval, cfg, budget, None);
    let (best, params) = best.ok_or_else(|| {
        Error::Inadmissible("no trial produced a finite quotient".into())
    })?;
    let fine = GridSpec::new(d, 2 * cfg.n, cfg.length)?;
    let fine_eval = Evaluator::new(identity, fine, s, q)?;
    let (fine_best, _) = search(&fine_eval, cfg, budget, Some(params.kind()));
    let fine_best = fine_best.map(|(v, _)| v).unwrap_or(f64::NAN);
    Ok(ConstantEstimate {
        identity,
        d,
        s,
        q,
        best,
        params,
        trend: vec![
            TrendPoint { n: cfg.n, best },
            TrendPoint {
                n: 2 * cfg.n,
                best: fine_best,
            },
        ],
        budget,
        evaluations,
    })
}

/// `(r_in^2 + r^2)^{-a/2}` with `a = d/q - s - epsilon`, cut smoothly at
/// `r_in = 4h` and `r_out = L/4`.
pub fn quasi_extremal(grid: GridSpec, s: f64, q: f64, epsilon: f64) -> Result<SampledField> {
    let d = grid.dim() as f64;
    let a = d / q - s - epsilon;
    if !(a > 0.0 && a < d / q) {
        return Err(Error::Inadmissible(format!(
            "exponent a = d/q - s - epsilon = {a} must lie in (0, d/q = {})",
            d / q
        )));
    }
    let r_in = 4.0 * grid.spacing();
    let r_out = grid.length() / 4.0;
    if r_in >= r_out {
        return Err(Error::CutoffCollapse(format!(
            "inner radius 4h = {r_in} reaches outer radius L/4 = {r_out}"
        )));
    }
    Ok(truncated_power(grid, a, r_in, r_out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_power_invariants() {
        let g = GridSpec::new(2, 32, 8.0).unwrap();
        let bad_a = TrialFamily::TruncatedPower {
            a: 1.0,
            r_in: 1.0,
            r_out: 2.0,
        };
        assert!(bad_a.build(g, 2.0).is_err());
        let bad_r = TrialFamily::TruncatedPower {
            a: 0.5,
            r_in: 0.1,
            r_out: 2.0,
        };
        assert!(matches!(bad_r.build(g, 2.0), Err(Error::CutoffCollapse(_))));
    }

    #[test]
    fn quasi_extremal_needs_room() {
        let g = GridSpec::new(3, 16, 4.0).unwrap();
        assert!(matches!(
            quasi_extremal(g, 1.0, 2.0, 0.2),
            Err(Error::CutoffCollapse(_))
        ));
        let g = GridSpec::new(3, 32, 8.0).unwrap();
        assert!(quasi_extremal(g, 1.0, 2.0, 0.6).is_err());
        assert!(quasi_extremal(g, 1.0, 2.0, 0.2).is_ok());
    }

    #[test]
    fn family_json_is_tagged() {
        let t = TrialFamily::Gaussian { sigma: 1.5 };
        assert_eq!(
            serde_json::to_string(&t).unwrap(),
            r#"{"kind":"gaussian","sigma":1.5}"#
        );
    }
}
