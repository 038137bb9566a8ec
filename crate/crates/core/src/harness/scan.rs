use serde::{Deserialize, Serialize};

use super::fate::{estimate_origin_fate, FateConfig, FateEstimate};
use super::setting::Setting;
use crate::error::{Error, Result};
use crate::lattice::rng::{hash, mix64, STREAM_SCAN};
use crate::lattice::{Period, Topology};

/// Lattice side for each scan cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Fixed(usize),
    /// `ceil(c / p)`: a fixed number of mean blue spacings along a row.
    InverseP(f64),
}

impl Side {
    pub fn for_p(&self, p: f64) -> usize {
        match *self {
            Side::Fixed(l) => l,
            Side::InverseP(c) => ((c / p).ceil() as usize).max(8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanParams {
    /// Prefix of every `run_id`.
    pub name: String,
    pub setting: Setting,
    pub r: Period,
    pub p_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    /// Exponent in `q = a p^gamma`; defaults to the setting's own.
    pub gamma: Option<f64>,
    pub side: Side,
    pub replicates: u64,
    pub seed: u64,
}

impl ScanParams {
    pub fn gamma(&self) -> f64 {
        self.gamma.unwrap_or_else(|| self.setting.gamma())
    }

    pub fn q(&self, p: f64, a: f64) -> f64 {
        a * p.powf(self.gamma())
    }

    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() || self.a_grid.is_empty() {
            return Err(Error::invalid("p and a grids must be nonempty"));
        }
        if self.replicates == 0 {
            return Err(Error::invalid("at least one replicate is required"));
        }
        for &p in &self.p_grid {
            for &a in &self.a_grid {
                let q = self.q(p, a);
                if !(p > 0.0 && a > 0.0 && p + q <= 1.0) {
                    return Err(Error::invalid(format!("cell p = {p}, a = {a} gives q = {q}")));
                }
            }
        }
        Ok(())
    }

    /// Seed of the cell `(p, a)`, keyed by the values so grids can grow.
    pub fn cell_seed(&self, p: f64, a: f64) -> u64 {
        hash(self.seed ^ mix64(p.to_bits()), STREAM_SCAN, 0, 0, a.to_bits())
    }
}

/// One CSV row: a `(p, a)` cell aggregated over its replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub run_id: String,
    pub p: f64,
    pub q: f64,
    pub a: f64,
    pub gamma: f64,
    pub rho: u32,
    pub tau: u32,
    pub r: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub topology: String,
    pub replicates: u64,
    #[serde(rename = "P_blue")]
    pub p_blue: f64,
    #[serde(rename = "P_blue_lo")]
    pub p_blue_lo: f64,
    #[serde(rename = "P_blue_hi")]
    pub p_blue_hi: f64,
    #[serde(rename = "P_red")]
    pub p_red: f64,
    #[serde(rename = "P_empty")]
    pub p_empty: f64,
    pub mean_frac_blue: f64,
    pub mean_frac_red: f64,
    pub mean_frac_empty: f64,
    pub mean_fixation_time: f64,
    pub horizon_hits: u64,
}

impl ScanRow {
    /// Row for a two-species estimate whose first species is blue and second red.
    pub fn from_estimate(run_id: String, params: &ScanParams, p: f64, a: f64, l: usize, est: &FateEstimate) -> Self {
        Self {
            run_id,
            p,
            q: params.q(p, a),
            a,
            gamma: params.gamma(),
            rho: params.setting.rho(),
            tau: params.setting.tau(),
            r: params.r.as_f64(),
            l,
            topology: Topology::Torus.to_string(),
            replicates: est.replicates,
            p_blue: est.species[0].estimate,
            p_blue_lo: est.species[0].lo,
            p_blue_hi: est.species[0].hi,
            p_red: est.species[1].estimate,
            p_empty: est.empty.estimate,
            mean_frac_blue: est.mean_fraction[0],
            mean_frac_red: est.mean_fraction[1],
            mean_frac_empty: est.mean_empty_fraction,
            mean_fixation_time: est.mean_fixation_time,
            horizon_hits: est.horizon_hits,
        }
    }

    pub fn key(&self) -> (u64, u64) {
        (self.p.to_bits(), self.a.to_bits())
    }
}

/// `P(blue)` rising with `a` beyond both confidence intervals.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityFlag {
    pub p: f64,
    pub a_lo: f64,
    pub a_hi: f64,
    pub p_blue_at_lo: f64,
    pub p_blue_at_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub flags: Vec<MonotonicityFlag>,
}

/// Estimates the cell `(p, a)`.
pub fn scan_cell(params: &ScanParams, p: f64, a: f64, index: (usize, usize)) -> Result<ScanRow> {
    let l = params.side.for_p(p);
    let template = params.setting.model(l, p, params.q(p, a), params.r)?;
    let cfg = FateConfig::new(l, params.replicates, params.cell_seed(p, a));
    let est = estimate_origin_fate(&template, &cfg)?;
    let run_id = format!("{}-p{}-a{}", params.name, index.0, index.1);
    Ok(ScanRow::from_estimate(run_id, params, p, a, l, &est))
}

/// Full sweep over the grid, row-major in `p` then `a`. Cells for which
/// `done(p, a)` holds are skipped; every computed row goes to `sink` as soon
/// as it is ready.
pub fn phase_scan_with(
    params: &ScanParams,
    done: &dyn Fn(f64, f64) -> bool,
    sink: &mut dyn FnMut(&ScanRow) -> Result<()>,
) -> Result<Vec<ScanRow>> {
    params.validate()?;
    let mut rows = Vec::new();
    for (i, &p) in params.p_grid.iter().enumerate() {
        for (j, &a) in params.a_grid.iter().enumerate() {
            if done(p, a) {
                continue;
            }
            let row = scan_cell(params, p, a, (i, j))?;
            log::info!("p = {p}, a = {a}: P_blue = {:.3}", row.p_blue);
            sink(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn phase_scan(params: &ScanParams) -> Result<ScanReport> {
    let rows = phase_scan_with(params, &|_, _| false, &mut |_| Ok(()))?;
    let flags = monotonicity_flags(&rows);
    Ok(ScanReport { rows, flags })
}

/// Rows grouped by `p` (in first-seen order), each group sorted by `a`.
pub(crate) fn group_by_p(rows: &[ScanRow]) -> Vec<(f64, Vec<&ScanRow>)> {
    let mut groups: Vec<(f64, Vec<&ScanRow>)> = Vec::new();
    for row in rows {
        match groups.iter_mut().find(|(p, _)| p.to_bits() == row.p.to_bits()) {
            Some((_, g)) => g.push(row),
            None => groups.push((row.p, vec![row])),
        }
    }
    for (_, g) in &mut groups {
        g.sort_by(|x, y| x.a.total_cmp(&y.a));
    }
    groups
}

/// Pairs `a < a'` at the same `p` where the lower end of the interval at `a'`
/// lies above the upper end at `a`.
pub fn monotonicity_flags(rows: &[ScanRow]) -> Vec<MonotonicityFlag> {
    let mut flags = Vec::new();
    for (p, g) in group_by_p(rows) {
        for (i, lo) in g.iter().enumerate() {
            for hi in &g[i + 1..] {
                if hi.a > lo.a && hi.p_blue_lo > lo.p_blue_hi {
                    flags.push(MonotonicityFlag {
                        p,
                        a_lo: lo.a,
                        a_hi: hi.a,
                        p_blue_at_lo: lo.p_blue,
                        p_blue_at_hi: hi.p_blue,
                    });
                }
            }
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ScanParams {
        ScanParams {
            name: "t".into(),
            setting: Setting::Lines { rho: 1, tau: 1 },
            r: Period::ONE,
            p_grid: vec![0.05, 0.02],
            a_grid: vec![0.5, 4.0],
            gamma: None,
            side: Side::Fixed(32),
            replicates: 10,
            seed: 4,
        }
    }

    fn row(p: f64, a: f64, p_blue: f64, half: f64) -> ScanRow {
        let mut r = ScanRow::from_estimate(
            "x".into(),
            &params(),
            p,
            a,
            8,
            &FateEstimate {
                labels: vec!["blue".into(), "red".into()],
                replicates: 1,
                species: vec![super::super::Proportion::new(0, 1); 2],
                empty: super::super::Proportion::new(1, 1),
                mean_fraction: vec![0.0, 0.0],
                mean_empty_fraction: 1.0,
                mean_fixation_time: 0.0,
                horizon_hits: 0,
            },
        );
        r.p_blue = p_blue;
        r.p_blue_lo = p_blue - half;
        r.p_blue_hi = p_blue + half;
        r
    }

    #[test]
    fn scan_covers_grid_and_skips_done_cells() {
        let p = params();
        let full = phase_scan(&p).unwrap();
        assert_eq!(full.rows.len(), 4);
        let mut seen = Vec::new();
        let resumed = phase_scan_with(&p, &|pp, aa| pp == 0.05 && aa == 0.5, &mut |r| {
            seen.push(r.key());
            Ok(())
        })
        .unwrap();
        assert_eq!(resumed.len(), 3);
        assert_eq!(seen.len(), 3);
        // a cell's result does not depend on which other cells ran
        assert_eq!(resumed[0], full.rows[1]);
    }

    #[test]
    fn empty_grid_rejected() {
        let mut p = params();
        p.p_grid.clear();
        assert!(phase_scan(&p).is_err());
    }

    #[test]
    fn flags_only_beyond_intervals() {
        let rows = vec![row(0.1, 1.0, 0.5, 0.05), row(0.1, 2.0, 0.58, 0.05), row(0.1, 3.0, 0.9, 0.05)];
        let flags = monotonicity_flags(&rows);
        assert_eq!(flags.len(), 2);
        assert!(flags.iter().all(|f| f.a_hi == 3.0));
    }

    #[test]
    fn inverse_p_side() {
        assert_eq!(Side::InverseP(4.0).for_p(0.01), 400);
        assert_eq!(Side::InverseP(0.01).for_p(0.5), 8);
    }
}
