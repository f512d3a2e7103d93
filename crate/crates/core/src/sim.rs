//! Simulation study contrasting statistical and practical significance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::{default_hyperparameters, posterior_update};
use crate::classical::{fixed_effects_table, mom_varcomp};
use crate::dataset::BalancedOneWayData;
use crate::error::{Error, Result};
use crate::sampler::sample;
use crate::specfun::{derive_seed, sample_normal, RngStream};
use crate::summary::{banova_table, pr_null, ParamKind, MIN_TABLE_DRAWS};

/// `Y_ij = α_i + ε_ij`, `α_i ~ N(0, σ²_α)`, `ε_ij ~ N(0, σ²_ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSpec {
    pub n_groups: usize,
    pub n_reps: usize,
    pub sigma2_alpha: f64,
    pub sigma2_eps: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SimSpec {
    /// Low practical significance: `σ²_α = 1/2`, `n_J = 6`, `n_I = 5`.
    pub fn case_a() -> Self {
        Self {
            n_groups: 5,
            n_reps: 6,
            sigma2_alpha: 0.5,
            sigma2_eps: 1.0,
            seed: 0,
        }
    }

    /// High practical significance: `σ²_α = 2`, `n_J = 2`, `n_I = 5`.
    pub fn case_b() -> Self {
        Self {
            n_groups: 5,
            n_reps: 2,
            sigma2_alpha: 2.0,
            sigma2_eps: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_groups < 2 || self.n_reps < 2 {
            return Err(Error::InvalidSpec(format!(
                "need n_groups >= 2 and n_reps >= 2, got {} x {}",
                self.n_groups, self.n_reps
            )));
        }
        if !(self.sigma2_alpha >= 0.0) || !self.sigma2_alpha.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "sigma2_alpha must be >= 0, got {}",
                self.sigma2_alpha
            )));
        }
        if !(self.sigma2_eps > 0.0) || !self.sigma2_eps.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "sigma2_eps must be > 0, got {}",
                self.sigma2_eps
            )));
        }
        Ok(())
    }
}

/// The two cases of a study, as read from a spec file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyCases {
    pub case_a: SimSpec,
    pub case_b: SimSpec,
}

impl StudyCases {
    pub fn paper() -> Self {
        Self {
            case_a: SimSpec::case_a(),
            case_b: SimSpec::case_b(),
        }
    }
}

pub fn generate(spec: &SimSpec) -> Result<BalancedOneWayData> {
    spec.validate()?;
    let mut rng = RngStream::new(spec.seed, 0);
    let mut rows = Vec::with_capacity(spec.n_groups);
    for _ in 0..spec.n_groups {
        let alpha = sample_normal(&mut rng, 0.0, spec.sigma2_alpha)?;
        let row = (0..spec.n_reps)
            .map(|_| sample_normal(&mut rng, alpha, spec.sigma2_eps))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    BalancedOneWayData::from_rows(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateRecord {
    pub case: String,
    pub replicate: usize,
    pub f_value: f64,
    pub p_value: f64,
    pub pr_null: f64,
    pub pr_finite_gt_error: f64,
    pub pr_super_gt_error: f64,
    pub mom_sigma2_alpha: f64,
    pub mom_sigma2_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseAggregate {
    pub case: String,
    pub n_reps: usize,
    pub median_p_value: f64,
    pub median_pr_null: f64,
    pub median_pr_finite_gt_error: f64,
    pub median_pr_super_gt_error: f64,
    /// Spearman correlation of p-value against `Pr(σ²_α = 0 | Y)`;
    /// absent when either column is constant.
    pub spearman_p_vs_pr_null: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub seed: u64,
    pub draws_per_rep: usize,
    pub records: Vec<ReplicateRecord>,
    pub aggregates: Vec<CaseAggregate>,
}

const CASE_LABELS: [&str; 2] = ["A", "B"];

/// Runs classical and Bayesian analyses on `n_reps` fresh datasets per case.
///
/// Replicate `r` of case `c` draws its data from `derive_seed(seed, [c, r, spec.seed, 0])`
/// and its posterior sample from `derive_seed(seed, [c, r, spec.seed, 1])`.
pub fn replicate_study(
    case_a: &SimSpec,
    case_b: &SimSpec,
    n_reps: usize,
    draws_per_rep: usize,
    seed: u64,
) -> Result<StudyReport> {
    if n_reps == 0 {
        return Err(Error::InvalidSpec("n_reps must be at least 1".into()));
    }
    if draws_per_rep < MIN_TABLE_DRAWS {
        return Err(Error::TooFewDraws {
            needed: MIN_TABLE_DRAWS,
            got: draws_per_rep,
        });
    }
    case_a.validate()?;
    case_b.validate()?;
    let specs = [case_a, case_b];
    let jobs: Vec<(usize, usize)> = (0..2).flat_map(|c| (0..n_reps).map(move |r| (c, r))).collect();
    let records = jobs
        .par_iter()
        .map(|&(c, r)| run_replicate(specs[c], c, r, draws_per_rep, seed))
        .collect::<Result<Vec<_>>>()?;

    let aggregates = (0..2)
        .map(|c| aggregate(CASE_LABELS[c], &records[c * n_reps..(c + 1) * n_reps]))
        .collect();
    Ok(StudyReport {
        seed,
        draws_per_rep,
        records,
        aggregates,
    })
}

fn run_replicate(spec: &SimSpec, case: usize, rep: usize, draws: usize, seed: u64) -> Result<ReplicateRecord> {
    let path = [case as u64, rep as u64, spec.seed];
    let data_spec = SimSpec {
        seed: derive_seed(seed, &[path[0], path[1], path[2], 0]),
        ..*spec
    };
    let data = generate(&data_spec)?;
    let table = fixed_effects_table(&data)?;
    let mom = mom_varcomp(&data);
    let post = posterior_update(&default_hyperparameters(&data), &data)?;
    let s = sample(&post, draws, derive_seed(seed, &[path[0], path[1], path[2], 1]))?;
    let bt = banova_table(&s, 0.95)?;
    Ok(ReplicateRecord {
        case: CASE_LABELS[case].to_string(),
        replicate: rep,
        f_value: table.f_value(),
        p_value: table.p_value(),
        pr_null: pr_null(&s),
        pr_finite_gt_error: bt.row(ParamKind::FiniteSd).pr_gt_error.unwrap_or(0.0),
        pr_super_gt_error: bt.row(ParamKind::SuperSd).pr_gt_error.unwrap_or(0.0),
        mom_sigma2_alpha: mom.sigma2_alpha_hat,
        mom_sigma2_eps: mom.sigma2_eps_hat,
    })
}

fn aggregate(case: &str, recs: &[ReplicateRecord]) -> CaseAggregate {
    let col = |f: fn(&ReplicateRecord) -> f64| recs.iter().map(f).collect::<Vec<_>>();
    let p = col(|r| r.p_value);
    let null = col(|r| r.pr_null);
    CaseAggregate {
        case: case.to_string(),
        n_reps: recs.len(),
        median_p_value: median(&p),
        median_pr_null: median(&null),
        median_pr_finite_gt_error: median(&col(|r| r.pr_finite_gt_error)),
        median_pr_super_gt_error: median(&col(|r| r.pr_super_gt_error)),
        spearman_p_vs_pr_null: spearman(&p, &null),
    }
}

/// Sample median (mean of the two middle values for even counts).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

impl StudyReport {
    pub fn records_csv(&self) -> String {
        let mut out = String::from(
            "case,replicate,f_value,p_value,pr_null,pr_finite_gt_error,pr_super_gt_error,mom_sigma2_alpha,mom_sigma2_eps\n",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.case,
                r.replicate,
                r.f_value,
                r.p_value,
                r.pr_null,
                r.pr_finite_gt_error,
                r.pr_super_gt_error,
                r.mom_sigma2_alpha,
                r.mom_sigma2_eps
            ));
        }
        out
    }

    pub fn aggregate_json(&self) -> String {
        let value = serde_json::json!({
            "seed": self.seed,
            "draws_per_rep": self.draws_per_rep,
            "aggregates": self.aggregates,
        });
        serde_json::to_string_pretty(&value).expect("aggregate serializes")
    }

    pub fn aggregate(&self, case: &str) -> Option<&CaseAggregate> {
        self.aggregates.iter().find(|a| a.case == case)
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{:<5} {:>5} {:>10} {:>10} {:>14} {:>14} {:>10}\n",
            "Case", "Reps", "med p", "med Pr0", "med Pr(s>e)", "med Pr(sig>e)", "Spearman"
        );
        for a in &self.aggregates {
            let rho = a
                .spearman_p_vs_pr_null
                .map(|r| format!("{r:.3}"))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<5} {:>5} {:>10.4} {:>10.4} {:>14.3} {:>14.3} {:>10}\n",
                a.case,
                a.n_reps,
                a.median_p_value,
                a.median_pr_null,
                a.median_pr_finite_gt_error,
                a.median_pr_super_gt_error,
                rho
            ));
        }
        out
    }
}
