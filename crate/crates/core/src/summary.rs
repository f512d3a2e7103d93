//! Posterior summaries on the standard-deviation scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::{cell_centers, check_levels, ContourLevel, GridSpec, RegionGrid, RegionKind};
use crate::sampler::PosteriorSample;

pub const MIN_TABLE_DRAWS: usize = 1_000;
pub const MIN_HPD_DRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    FiniteSd,
    SuperSd,
    ErrorSd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanovaRow {
    pub label: String,
    pub param_kind: ParamKind,
    pub mean: f64,
    pub median: f64,
    pub q_lower: f64,
    pub q_upper: f64,
    /// Paired `Pr(param > σ_ε | Y)`; absent on the error row.
    pub pr_gt_error: Option<f64>,
    /// Posterior mass at exactly zero; absent on the error row.
    pub zero_mass: Option<f64>,
}

/// Rows in order: finite `s_α`, super `σ_α`, error `σ_ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanovaTable {
    pub rows: Vec<BanovaRow>,
    pub n_draws: usize,
    pub seed: u64,
    pub ci_level: f64,
}

/// Nearest-rank (type 1) quantile of sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    // guard against n*p landing a hair above an integer
    let rank = ((n as f64) * p - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(n) - 1]
}

fn sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v
}

fn fraction(n: usize, total: usize) -> f64 {
    n as f64 / total as f64
}

/// Monte Carlo estimate of `Pr(σ²_α = 0 | Y)`.
pub fn pr_null(s: &PosteriorSample) -> f64 {
    if s.draws.is_empty() {
        return 0.0;
    }
    fraction(s.draws.iter().filter(|d| d.at_zero).count(), s.draws.len())
}

pub fn banova_table(s: &PosteriorSample, ci_level: f64) -> Result<BanovaTable> {
    if s.n_draws < MIN_TABLE_DRAWS {
        return Err(Error::TooFewDraws {
            needed: MIN_TABLE_DRAWS,
            got: s.n_draws,
        });
    }
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Error::Domain(format!("ci_level must lie in (0, 1), got {ci_level}")));
    }
    let lo_p = (1.0 - ci_level) / 2.0;
    let hi_p = 1.0 - lo_p;
    let n = s.n_draws;
    let sigma_eps: Vec<f64> = s.sigma_eps().collect();
    let null = pr_null(s);

    let row = |label: &str, kind: ParamKind, values: Vec<f64>| {
        let paired = (kind != ParamKind::ErrorSd).then(|| {
            let above = values.iter().zip(&sigma_eps).filter(|(v, e)| v > e).count();
            fraction(above, n)
        });
        let mean = values.iter().sum::<f64>() / n as f64;
        let sorted = sorted(values.into_iter());
        BanovaRow {
            label: label.to_string(),
            param_kind: kind,
            mean,
            median: quantile_sorted(&sorted, 0.5),
            q_lower: quantile_sorted(&sorted, lo_p),
            q_upper: quantile_sorted(&sorted, hi_p),
            pr_gt_error: paired,
            zero_mass: (kind != ParamKind::ErrorSd).then_some(null),
        }
    };

    Ok(BanovaTable {
        rows: vec![
            row("s_alpha", ParamKind::FiniteSd, s.finite_sd.clone()),
            row("sigma_alpha", ParamKind::SuperSd, s.sigma_alpha().collect()),
            row("sigma_eps", ParamKind::ErrorSd, sigma_eps.clone()),
        ],
        n_draws: n,
        seed: s.seed,
        ci_level,
    })
}

impl BanovaTable {
    pub fn row(&self, kind: ParamKind) -> &BanovaRow {
        self.rows
            .iter()
            .find(|r| r.param_kind == kind)
            .expect("table has every row")
    }

    pub fn pr_null(&self) -> f64 {
        self.row(ParamKind::SuperSd).zero_mass.unwrap_or(0.0)
    }

    /// Aligned plain-text table, two decimals for sds and three for probabilities.
    pub fn render_text(&self, factor: &str) -> String {
        let lo = 100.0 * (1.0 - self.ci_level) / 2.0;
        let interval_head = format!("(Q{}, Q{})", trim_pct(lo), trim_pct(100.0 - lo));
        let names = [
            (factor, "(finite) s_alpha"),
            ("", "(super) sigma_alpha"),
            ("Errors", "sigma_eps"),
        ];
        let fw = factor.len().max(6);
        let mut out = format!(
            "{:<fw$}  {:>19}  {:>8}  {:>8}  {:>20}  {:>15}\n",
            "", "Parameter", "Mean", "Q0.5", interval_head, "Pr(> sigma_eps)"
        );
        for (r, (left, name)) in self.rows.iter().zip(names) {
            let interval = format!("({:.2}, {:.2})", r.q_lower, r.q_upper);
            let pr = r.pr_gt_error.map(|p| format!("{p:.3}")).unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{left:<fw$}  {name:>19}  {:>8.2}  {:>8.2}  {interval:>20}  {pr:>15}\n",
                r.mean, r.median
            ));
        }
        out.push_str(&format!(
            "Pr(sigma2_alpha = 0 | Y) = {:.3}   draws = {}, seed = {}\n",
            self.pr_null(),
            self.n_draws,
            self.seed
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let mut out = String::from("label,param_kind,mean,median,q_lower,q_upper,pr_gt_error,zero_mass\n");
        for r in &self.rows {
            let kind = serde_json::to_value(r.param_kind).expect("kind serializes");
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.label,
                kind.as_str().unwrap_or_default(),
                r.mean,
                r.median,
                r.q_lower,
                r.q_upper,
                opt(r.pr_gt_error),
                opt(r.zero_mass)
            ));
        }
        out
    }
}

fn trim_pct(pct: f64) -> String {
    let s = format!("{:.4}", pct / 100.0);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// One line of an interval plot: thick 50% segment, thin outer segment,
/// a median tick, and a dot at zero when the posterior has mass there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub label: String,
    pub kind: ParamKind,
    pub lo50: f64,
    pub hi50: f64,
    pub lo95: f64,
    pub hi95: f64,
    pub median: f64,
    pub zero_dot: bool,
}

pub fn interval_plot_data(t: &BanovaTable, s: &PosteriorSample) -> Vec<IntervalRecord> {
    t.rows
        .iter()
        .map(|r| {
            let values = sorted(match r.param_kind {
                ParamKind::FiniteSd => Box::new(s.finite_sd.iter().copied()) as Box<dyn Iterator<Item = f64>>,
                ParamKind::SuperSd => Box::new(s.sigma_alpha()),
                ParamKind::ErrorSd => Box::new(s.sigma_eps()),
            });
            IntervalRecord {
                label: r.label.clone(),
                kind: r.param_kind,
                lo50: quantile_sorted(&values, 0.25),
                hi50: quantile_sorted(&values, 0.75),
                lo95: quantile_sorted(&values, 0.025),
                hi95: quantile_sorted(&values, 0.975),
                median: quantile_sorted(&values, 0.5),
                zero_dot: r.zero_mass.is_some_and(|m| m > 0.0),
            }
        })
        .collect()
}

pub fn interval_records_csv(records: &[IntervalRecord]) -> String {
    let mut out = String::from("label,kind,lo50,hi50,lo95,hi95,median,zero_dot\n");
    for r in records {
        let kind = serde_json::to_value(r.kind).expect("kind serializes");
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.label,
            kind.as_str().unwrap_or_default(),
            r.lo50,
            r.hi50,
            r.lo95,
            r.hi95,
            r.median,
            r.zero_dot
        ));
    }
    out
}

/// Histogram density of `(σ_α, σ_ε)` draws with HPD thresholds.
///
/// The threshold for level `γ` is the largest density `d` such that the
/// cells with density `≥ d` hold at least `γ` of all draws. Unset ranges
/// span `[0, 1.05 · max draw]`.
pub fn hpd_region_grid(s: &PosteriorSample, grid: &GridSpec, levels: &[f64]) -> Result<RegionGrid> {
    if s.n_draws < MIN_HPD_DRAWS {
        return Err(Error::TooFewDraws {
            needed: MIN_HPD_DRAWS,
            got: s.n_draws,
        });
    }
    check_levels(levels)?;
    if grid.n_alpha == 0 || grid.n_eps == 0 {
        return Err(Error::Domain("grid needs at least one cell per axis".into()));
    }
    let span = |values: &mut dyn Iterator<Item = f64>| {
        let max = values.fold(0.0f64, f64::max);
        (0.0, if max > 0.0 { 1.05 * max } else { 1.0 })
    };
    let (a_lo, a_hi) = grid.alpha_range.unwrap_or_else(|| span(&mut s.sigma_alpha()));
    let (e_lo, e_hi) = grid.eps_range.unwrap_or_else(|| span(&mut s.sigma_eps()));
    if !(a_hi > a_lo && a_lo >= 0.0 && e_hi > e_lo && e_lo >= 0.0) {
        return Err(Error::Domain("HPD grid ranges must be nonnegative and nonempty".into()));
    }
    let (na, ne) = (grid.n_alpha, grid.n_eps);
    let (wa, we) = ((a_hi - a_lo) / na as f64, (e_hi - e_lo) / ne as f64);

    let cell = |x: f64, lo: f64, hi: f64, w: f64, n: usize| -> Option<usize> {
        if x < lo || x > hi {
            return None;
        }
        Some((((x - lo) / w) as usize).min(n - 1))
    };
    let mut counts = vec![vec![0usize; ne]; na];
    for (a, e) in s.sigma_alpha().zip(s.sigma_eps()) {
        if let (Some(i), Some(j)) = (cell(a, a_lo, a_hi, wa, na), cell(e, e_lo, e_hi, we, ne)) {
            counts[i][j] += 1;
        }
    }

    let norm = 1.0 / (s.n_draws as f64 * wa * we);
    let values: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 * norm).collect())
        .collect();

    let mut occupied: Vec<usize> = counts.iter().flatten().copied().filter(|&c| c > 0).collect();
    occupied.sort_unstable_by(|a, b| b.cmp(a));
    let contour_levels = levels
        .iter()
        .map(|&g| {
            let needed = (g * s.n_draws as f64 - 1e-9).ceil() as usize;
            let mut cum = 0usize;
            let mut threshold_count = *occupied.last().unwrap_or(&0);
            for &c in &occupied {
                cum += c;
                if cum >= needed {
                    threshold_count = c;
                    break;
                }
            }
            ContourLevel {
                confidence: g,
                threshold: threshold_count as f64 * norm,
            }
        })
        .collect();

    Ok(RegionGrid {
        kind: RegionKind::HpdDensity,
        sigma_alpha_axis: cell_centers(a_lo, a_hi, na),
        sigma_eps_axis: cell_centers(e_lo, e_hi, ne),
        values,
        contour_levels,
    })
}
