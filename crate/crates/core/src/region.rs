//! Gridded two-dimensional confidence regions over `(σ_α, σ_ε)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    /// Relative log-likelihood `ℓ(θ) - ℓ(θ̂)`.
    RelativeLikelihood,
    /// Histogram density of posterior draws.
    HpdDensity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourLevel {
    pub confidence: f64,
    pub threshold: f64,
}

/// Values on a rectangular grid; `values[i][j]` sits at
/// `(sigma_alpha_axis[i], sigma_eps_axis[j])`. The region at a level is
/// the set of cells whose value is at least the level's threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub kind: RegionKind,
    pub sigma_alpha_axis: Vec<f64>,
    pub sigma_eps_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub contour_levels: Vec<ContourLevel>,
}

/// Grid resolution and optional axis ranges (standard-deviation units).
/// Unset ranges fall back to a data-driven default chosen by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_alpha: usize,
    pub n_eps: usize,
    pub alpha_range: Option<(f64, f64)>,
    pub eps_range: Option<(f64, f64)>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_alpha: 100,
            n_eps: 100,
            alpha_range: None,
            eps_range: None,
        }
    }
}

impl GridSpec {
    pub fn new(n_alpha: usize, n_eps: usize) -> Self {
        Self {
            n_alpha,
            n_eps,
            ..Self::default()
        }
    }

    /// Parses `NAxNE`, e.g. `100x80`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("grid must look like `100x100`, got `{s}`"));
        let (a, e) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let n_alpha: usize = a.trim().parse().map_err(|_| bad())?;
        let n_eps: usize = e.trim().parse().map_err(|_| bad())?;
        if n_alpha == 0 || n_eps == 0 {
            return Err(bad());
        }
        Ok(Self::new(n_alpha, n_eps))
    }

    pub fn with_ranges(mut self, alpha: (f64, f64), eps: (f64, f64)) -> Self {
        self.alpha_range = Some(alpha);
        self.eps_range = Some(eps);
        self
    }
}

/// Midpoints of `n` equal cells spanning `[lo, hi]`.
pub fn cell_centers(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let width = (hi - lo) / n as f64;
    (0..n).map(|k| lo + (k as f64 + 0.5) * width).collect()
}

pub(crate) fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Domain(format!("{name} axis is empty")));
    }
    if axis.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Domain(format!("{name} axis values must be positive and finite")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain(format!("{name} axis must be strictly increasing")));
    }
    Ok(())
}

pub(crate) fn check_levels(levels: &[f64]) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::Domain("at least one confidence level is required".into()));
    }
    if let Some(l) = levels.iter().find(|&&l| !(l > 0.0 && l < 1.0)) {
        return Err(Error::Domain(format!("confidence level must lie in (0, 1), got {l}")));
    }
    Ok(())
}

impl RegionGrid {
    /// Cell membership of the region at `contour_levels[level]`.
    pub fn region_mask(&self, level: usize) -> Vec<Vec<bool>> {
        let t = self.contour_levels[level].threshold;
        self.values
            .iter()
            .map(|row| row.iter().map(|&v| v >= t).collect())
            .collect()
    }

    /// Grid cell nearest to a point, by axis distance.
    pub fn nearest_cell(&self, sigma_alpha: f64, sigma_eps: f64) -> (usize, usize) {
        (
            nearest(&self.sigma_alpha_axis, sigma_alpha),
            nearest(&self.sigma_eps_axis, sigma_eps),
        )
    }

    /// Long-form CSV preceded by `#` metadata lines naming the kind and
    /// each level's threshold.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# kind={:?}\n", self.kind);
        for l in &self.contour_levels {
            out.push_str(&format!("# level={},threshold={}\n", l.confidence, l.threshold));
        }
        out.push_str("sigma_alpha,sigma_eps,value\n");
        for (i, a) in self.sigma_alpha_axis.iter().enumerate() {
            for (j, e) in self.sigma_eps_axis.iter().enumerate() {
                out.push_str(&format!("{a},{e},{}\n", self.values[i][j]));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes")
    }
}

fn nearest(axis: &[f64], x: f64) -> usize {
    axis.iter()
        .enumerate()
        .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
        .map(|(k, _)| k)
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid_spec() {
        let g = GridSpec::parse("120x80").unwrap();
        assert_eq!((g.n_alpha, g.n_eps), (120, 80));
        assert!(GridSpec::parse("12").is_err());
        assert!(GridSpec::parse("0x5").is_err());
        assert!(GridSpec::parse("ax5").is_err());
    }

    #[test]
    fn centers() {
        assert_eq!(cell_centers(0.0, 4.0, 4), vec![0.5, 1.5, 2.5, 3.5]);
    }

    #[test]
    fn axis_checks() {
        assert!(check_axis(&[1.0, 2.0], "a").is_ok());
        assert!(check_axis(&[0.0, 2.0], "a").is_err());
        assert!(check_axis(&[2.0, 2.0], "a").is_err());
        assert!(check_levels(&[0.5, 1.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let g = RegionGrid {
            kind: RegionKind::HpdDensity,
            sigma_alpha_axis: vec![1.0, 2.0],
            sigma_eps_axis: vec![0.5],
            values: vec![vec![0.25], vec![0.75]],
            contour_levels: vec![ContourLevel {
                confidence: 0.5,
                threshold: 0.75,
            }],
        };
        assert_eq!(
            g.to_csv(),
            "# kind=HpdDensity\n# level=0.5,threshold=0.75\nsigma_alpha,sigma_eps,value\n1,0.5,0.25\n2,0.5,0.75\n"
        );
        assert_eq!(g.region_mask(0), vec![vec![false], vec![true]]);
        let back: RegionGrid = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
