use serde::Serialize;

use super::scan::{group_by_p, ScanParams, ScanRow, Side};
use super::setting::Setting;
use crate::error::{Error, Result};
use crate::lattice::Period;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentFit {
    pub gamma_hat: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// `(p, q*)` for every usable `p`.
    pub crossings: Vec<(f64, f64)>,
    /// Values of `p` without a bracketed crossing.
    pub omitted: Vec<f64>,
}

/// Weighted pool-adjacent-violators fit of a nonincreasing sequence.
pub fn isotonic_decreasing(y: &[f64], w: &[f64]) -> Vec<f64> {
    assert_eq!(y.len(), w.len());
    // blocks of (mean, weight, count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(y.len());
    for (&yi, &wi) in y.iter().zip(w) {
        blocks.push((yi, wi, 1));
        while blocks.len() > 1 {
            let n = blocks.len();
            let (m1, w1, c1) = blocks[n - 2];
            let (m2, w2, c2) = blocks[n - 1];
            if m1 >= m2 {
                break;
            }
            let wt = w1 + w2;
            let mean = if wt > 0.0 { (m1 * w1 + m2 * w2) / wt } else { 0.5 * (m1 + m2) };
            blocks.truncate(n - 2);
            blocks.push((mean, wt, c1 + c2));
        }
    }
    blocks.into_iter().flat_map(|(m, _, c)| std::iter::repeat_n(m, c)).collect()
}

/// `ln q` where the smoothed curve first drops to 1/2, interpolated linearly
/// in `ln q` between the bracketing grid points. `None` unless some point lies
/// strictly above 1/2 and a later one at or below it.
pub fn crossing_log_q(log_q: &[f64], smoothed: &[f64]) -> Option<f64> {
    let i = smoothed.iter().position(|&s| s <= 0.5)?;
    if i == 0 {
        return None;
    }
    let (s0, s1) = (smoothed[i - 1], smoothed[i]);
    let t = (s0 - 0.5) / (s0 - s1);
    Some(log_q[i - 1] + t * (log_q[i] - log_q[i - 1]))
}

/// Ordinary least squares `y = c + s x`; returns `(s, c, stderr of s)`.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let stderr = if x.len() > 2 { (sse / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (slope, intercept, stderr)
}

/// Slope of `ln q*(p)` against `ln p`, where `q*(p)` is the 1/2-crossing of
/// the isotonic (in `q`) smoothing of `P(blue)`.
pub fn fit_exponent(rows: &[ScanRow]) -> Result<ExponentFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut crossings = Vec::new();
    let mut omitted = Vec::new();
    for (p, mut g) in group_by_p(rows) {
        g.sort_by(|a, b| a.q.total_cmp(&b.q));
        let log_q: Vec<f64> = g.iter().map(|r| r.q.ln()).collect();
        let y: Vec<f64> = g.iter().map(|r| r.p_blue).collect();
        let w: Vec<f64> = g.iter().map(|r| r.replicates as f64).collect();
        match crossing_log_q(&log_q, &isotonic_decreasing(&y, &w)) {
            Some(lq) => {
                xs.push(p.ln());
                ys.push(lq);
                crossings.push((p, lq.exp()));
            }
            None => {
                log::warn!("no bracketed P(blue) = 1/2 crossing at p = {p}; omitted from the fit");
                omitted.push(p);
            }
        }
    }
    if xs.len() < 3 {
        return Err(Error::Fit(format!("{} values of p have a bracketed crossing; at least 3 are needed", xs.len())));
    }
    let (gamma_hat, intercept, stderr) = ols(&xs, &ys);
    Ok(ExponentFit { gamma_hat, stderr, intercept, crossings, omitted })
}

/// Noise-free rows with `P(blue) = 1 / (1 + (q / p^gamma_true)^2)` on the
/// grid `q = a p^gamma_grid`.
pub fn planted_logistic_rows(p_grid: &[f64], a_grid: &[f64], gamma_grid: f64, gamma_true: f64) -> Vec<ScanRow> {
    let params = ScanParams {
        name: "planted".into(),
        setting: Setting::Lines { rho: 1, tau: 1 },
        r: Period::ONE,
        p_grid: p_grid.to_vec(),
        a_grid: a_grid.to_vec(),
        gamma: Some(gamma_grid),
        side: Side::Fixed(0),
        replicates: 1,
        seed: 0,
    };
    let mut rows = Vec::new();
    for (i, &p) in p_grid.iter().enumerate() {
        for (j, &a) in a_grid.iter().enumerate() {
            let q = params.q(p, a);
            let pb = 1.0 / (1.0 + (q / p.powf(gamma_true)).powi(2));
            rows.push(ScanRow {
                run_id: format!("planted-p{i}-a{j}"),
                p,
                q,
                a,
                gamma: gamma_grid,
                rho: 1,
                tau: 1,
                r: 1.0,
                l: 0,
                topology: "planted".into(),
                replicates: 1000,
                p_blue: pb,
                p_blue_lo: pb,
                p_blue_hi: pb,
                p_red: 1.0 - pb,
                p_empty: 0.0,
                mean_frac_blue: pb,
                mean_frac_red: 1.0 - pb,
                mean_frac_empty: 0.0,
                mean_fixation_time: 0.0,
                horizon_hits: 0,
            });
        }
    }
    rows
}

/// Geometric grid of `n >= 2` points from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_matches_brute_force_examples() {
        assert_eq!(isotonic_decreasing(&[0.9, 0.7, 0.8, 0.2], &[1.0; 4]), vec![0.9, 0.75, 0.75, 0.2]);
        assert_eq!(isotonic_decreasing(&[0.1, 0.5, 0.9], &[1.0; 3]), vec![0.5; 3]);
        let s = isotonic_decreasing(&[0.2, 0.6], &[3.0, 1.0]);
        assert!((s[0] - 0.3).abs() < 1e-15 && (s[1] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn crossing_interpolates() {
        let lq = [0.0, 1.0, 2.0];
        assert_eq!(crossing_log_q(&lq, &[0.9, 0.7, 0.3]), Some(1.5));
        assert_eq!(crossing_log_q(&lq, &[0.4, 0.3, 0.1]), None);
        assert_eq!(crossing_log_q(&lq, &[0.9, 0.8, 0.6]), None);
        assert_eq!(crossing_log_q(&lq, &[0.9, 0.5, 0.1]), Some(1.0));
    }

    #[test]
    fn ols_exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 0.5 * v).collect();
        let (s, c, e) = ols(&x, &y);
        assert!((s + 0.5).abs() < 1e-14 && (c - 2.0).abs() < 1e-14 && e.abs() < 1e-7);
    }

    #[test]
    fn ols_stderr_against_closed_form() {
        // y = x + e with e = (+1, -1, -1, +1): slope 1, SSE 4, Sxx 5
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 0.0, 1.0, 4.0];
        let (s, _, e) = ols(&x, &y);
        assert!((s - 1.0).abs() < 1e-14);
        assert!((e - (4.0f64 / 2.0 / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn planted_exponent_recovered() {
        let a = geometric_grid(0.05, 20.0, 25);
        let rows = planted_logistic_rows(&[0.02, 0.01, 0.005, 0.0025], &a, 1.4, 1.5);
        let fit = fit_exponent(&rows).unwrap();
        assert!((fit.gamma_hat - 1.5).abs() < 0.01, "{fit:?}");
    }

    #[test]
    fn unbracketed_p_is_omitted_and_too_few_is_an_error() {
        let a = geometric_grid(0.2, 5.0, 9);
        let mut rows = planted_logistic_rows(&[0.02, 0.01, 0.005], &a, 1.5, 1.5);
        assert_eq!(fit_exponent(&rows).unwrap().omitted, Vec::<f64>::new());
        for r in rows.iter_mut().filter(|r| r.p == 0.005) {
            r.p_blue = 0.1;
        }
        assert!(matches!(fit_exponent(&rows), Err(Error::Fit(_))));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn weighted(y: &[f64], w: &[f64]) -> f64 {
        y.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    proptest! {
        #[test]
        fn pava_is_a_nonincreasing_projection(
            yw in prop::collection::vec((0.0f64..1.0, 0.1f64..10.0), 1..30)
        ) {
            let (y, w): (Vec<f64>, Vec<f64>) = yw.into_iter().unzip();
            let s = isotonic_decreasing(&y, &w);
            prop_assert_eq!(s.len(), y.len());
            prop_assert!(s.windows(2).all(|p| p[0] >= p[1] - 1e-12));
            prop_assert!((weighted(&s, &w) - weighted(&y, &w)).abs() <= 1e-9 * (1.0 + weighted(&y, &w)));
            let again = isotonic_decreasing(&s, &w);
            prop_assert!(again.iter().zip(&s).all(|(a, b)| (a - b).abs() <= 1e-12));
        }

        #[test]
        fn crossing_lies_in_its_bracket(mut y in prop::collection::vec(0.0f64..1.0, 2..20)) {
            y.sort_by(|a, b| b.total_cmp(a));
            let x: Vec<f64> = (0..y.len()).map(|i| i as f64 * 0.3 - 2.0).collect();
            match crossing_log_q(&x, &y) {
                Some(c) => {
                    let j = y.iter().position(|&v| v <= 0.5).unwrap();
                    prop_assert!(j > 0 && c >= x[j - 1] && c <= x[j]);
                }
                None => prop_assert!(y[0] <= 0.5 || y[y.len() - 1] > 0.5),
            }
        }

        #[test]
        fn ols_recovers_exact_lines(slope in -3.0f64..3.0, icpt in -5.0f64..5.0, n in 3usize..12) {
            let x: Vec<f64> = (0..n).map(|i| (i as f64).ln_1p()).collect();
            let y: Vec<f64> = x.iter().map(|v| icpt + slope * v).collect();
            let (b, a, se) = ols(&x, &y);
            prop_assert!((b - slope).abs() < 1e-9 && (a - icpt).abs() < 1e-9 && se < 1e-6);
        }
    }
}
