//! Sampler and engine check for the red-wins events.
//!
//! With red growing through the L1 ball of radius `rho` at period `r` and
//! blue horizontally with range `tau`, put `v = p^(-rho/(rho+1))` and
//!
//! - `G`: no potentially blue site on the axis segment `|x| <= eps tau r / p`;
//! - `H`: some red site `(x, y)` with `0 <= x <= eps / 2p` and `0 <= y <= eps v`
//!   such that the box `[x - 2 eps tau r v, x + 2 eps tau r v] x [0, eps v]`
//!   holds no `rho` consecutive rows that each contain a potentially blue site.
//!
//! On `G` and `H` the origin should end up red. The check simulates a
//! dead-boundary window around the origin large enough that the origin's
//! state at the horizon equals its state on the whole plane.

use serde::Serialize;

use crate::dynamics::{window_dependence_radius, FrontierEngine};
use crate::error::{Error, Result};
use crate::lattice::{blue_line, red_ball, two_stage_sample, ModelSpec, Period, Topology, TwoStageSample};

/// Windows above this many sites are refused.
pub const MAX_WINDOW_SITES: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RedWinsParams {
    pub p: f64,
    pub q: f64,
    pub epsilon: f64,
    pub r: Period,
    pub tau: u32,
    pub rho: u32,
}

/// Integer extents of the events and of the simulated window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RedWinsGeometry {
    /// `G` covers `|x| <= g_half` on the axis.
    pub g_half: i64,
    /// Red candidates lie in `[0, red_x] x [0, red_y]`.
    pub red_x: i64,
    pub red_y: i64,
    /// Half width of the blue-free box around a red candidate.
    pub guard_half: i64,
    pub horizon_ticks: u64,
    /// The window is `[-half, half]^2`.
    pub half: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedWinsReport {
    pub g: bool,
    pub h: bool,
    /// Red site certifying `H`.
    pub witness: Option<(i64, i64)>,
    /// Engine verdict "origin is red", only when `G` and `H` hold.
    pub verified: Option<bool>,
    pub origin_color: Option<u8>,
    pub geometry: RedWinsGeometry,
}

impl RedWinsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::invalid("epsilon must be positive"));
        }
        if !(self.p > 0.0 && self.p < 1.0) || !(0.0..1.0).contains(&self.q) || self.p + self.q > 1.0 {
            return Err(Error::invalid(format!("densities p = {}, q = {}", self.p, self.q)));
        }
        if self.tau == 0 || self.rho == 0 {
            return Err(Error::invalid("ranges must be at least 1"));
        }
        Ok(())
    }

    /// Blue line of range `tau` and red L1 ball of radius `rho` on the window.
    pub fn model(&self, half: i64, seed: u64) -> Result<ModelSpec> {
        let side = (2 * half + 1) as usize;
        Ok(ModelSpec::new(side, side, Topology::DeadBoundary)
            .with_species(blue_line(self.tau)?, self.p)
            .with_species(red_ball(self.rho, self.r)?, self.q)
            .with_seed(seed))
    }

    pub fn geometry(&self) -> Result<RedWinsGeometry> {
        self.validate()?;
        let rho = self.rho as f64;
        let v = self.p.powf(-rho / (rho + 1.0));
        let etr = self.epsilon * self.tau as f64 * self.r.as_f64();
        let g_half = (etr / self.p).ceil() as i64;
        let red_x = (self.epsilon / (2.0 * self.p)).floor() as i64;
        let red_y = (self.epsilon * v).floor() as i64;
        let guard_half = (2.0 * etr * v).ceil() as i64;
        // red reaches the origin from any candidate within ceil(d / rho) of its updates
        let updates = ((red_x + red_y) as u64).div_ceil(self.rho as u64) + 1;
        let probe = self.model(1, 0)?;
        let red_ticks = probe.tick_scale()? as u64 / self.r.den() as u64 * self.r.num() as u64;
        let horizon_ticks =
            updates.checked_mul(red_ticks).ok_or_else(|| Error::TickOverflow("red-wins horizon".into()))?;
        let radius = window_dependence_radius(&probe, horizon_ticks)? as i64;
        let half = radius.max(g_half).max(red_x + guard_half).max(red_y) + 1;
        let side = 2 * half as u64 + 1;
        if side.checked_mul(side).is_none_or(|n| n > MAX_WINDOW_SITES) {
            return Err(Error::invalid(format!("red-wins window of side {side} exceeds {MAX_WINDOW_SITES} sites")));
        }
        Ok(RedWinsGeometry { g_half, red_x, red_y, guard_half, horizon_ticks, half })
    }
}

/// Evaluates `G` and `H` on a sample over the window of `geom` and, when both
/// hold, runs the engine to the horizon and reads the origin.
pub fn check_red_wins(params: &RedWinsParams, geom: &RedWinsGeometry, sample: TwoStageSample) -> Result<RedWinsReport> {
    let side = (2 * geom.half + 1) as usize;
    if sample.lattice.width() != side || sample.lattice.height() != side {
        return Err(Error::invalid("sample does not match the red-wins window"));
    }
    let at = |x: i64, y: i64| ((x + geom.half) as usize, (y + geom.half) as usize);
    let blue = |x: i64, y: i64| {
        let (i, j) = at(x, y);
        sample.is_potentially_blue(i, j)
    };
    let g = (-geom.g_half..=geom.g_half).all(|x| !blue(x, 0));

    let rho = params.rho.max(1);
    let guarded = |x0: i64| {
        let mut run = 0;
        for y in 0..=geom.red_y {
            let hit = (x0 - geom.guard_half..=x0 + geom.guard_half).any(|x| blue(x, y));
            run = if hit { run + 1 } else { 0 };
            if run >= rho {
                return false;
            }
        }
        true
    };
    let mut witness = None;
    'outer: for x in 0..=geom.red_x {
        for y in 0..=geom.red_y {
            let (i, j) = at(x, y);
            if sample.is_red(i, j) && guarded(x) {
                witness = Some((x, y));
                break 'outer;
            }
        }
    }
    let h = witness.is_some();
    let (verified, origin_color) = if g && h {
        let red_id = sample.lattice.model().species[1].id;
        let (ox, oy) = at(0, 0);
        let res = FrontierEngine::new(sample.lattice)?.run(geom.horizon_ticks)?;
        let c = res.color(ox, oy);
        (Some(c == red_id), Some(c))
    } else {
        (None, None)
    };
    Ok(RedWinsReport { g, h, witness, verified, origin_color, geometry: *geom })
}

/// Samples a configuration in two stages and runs [`check_red_wins`].
pub fn red_wins_certificate(params: &RedWinsParams, seed: u64) -> Result<RedWinsReport> {
    let geom = params.geometry()?;
    let sample = two_stage_sample(params.model(geom.half, seed)?, params.p, params.q)?;
    check_red_wins(params, &geom, sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;

    fn params() -> RedWinsParams {
        RedWinsParams { p: 0.01, q: 0.025, epsilon: 0.2, r: Period::ONE, tau: 1, rho: 1 }
    }

    fn planted(
        params: &RedWinsParams,
        geom: &RedWinsGeometry,
        red: &[(i64, i64)],
        blue: &[(i64, i64)],
    ) -> TwoStageSample {
        let side = (2 * geom.half + 1) as usize;
        let mut lattice = Lattice::empty(params.model(geom.half, 0).unwrap()).unwrap();
        let mut red_marks = vec![false; side * side];
        let mut blue_marks = vec![false; side * side];
        for &(x, y) in blue {
            let (i, j) = ((x + geom.half) as usize, (y + geom.half) as usize);
            blue_marks[lattice.index(i, j)] = true;
            lattice.plant(i, j, 1).unwrap();
        }
        for &(x, y) in red {
            let (i, j) = ((x + geom.half) as usize, (y + geom.half) as usize);
            red_marks[lattice.index(i, j)] = true;
            lattice.plant(i, j, 2).unwrap();
        }
        TwoStageSample { red: red_marks, potentially_blue: blue_marks, lattice }
    }

    #[test]
    fn geometry_values() {
        let g = params().geometry().unwrap();
        assert_eq!((g.g_half, g.red_x, g.red_y, g.guard_half), (20, 10, 2, 4));
        // 12 red updates plus one
        assert_eq!(g.horizon_ticks, 13);
        // radius (1 + 1) * 13 = 26 dominates
        assert_eq!(g.half, 27);
    }

    #[test]
    fn planted_configuration_is_verified() {
        let p = params();
        let g = p.geometry().unwrap();
        // red at the far corner of the candidate box; blue just outside both guards
        let s = planted(&p, &g, &[(10, 2)], &[(21, 0), (-21, 0), (15, 1), (5, 2), (0, 5), (3, -1)]);
        let rep = check_red_wins(&p, &g, s).unwrap();
        assert!(rep.g && rep.h);
        assert_eq!(rep.verified, Some(true));
    }

    #[test]
    fn blue_on_axis_makes_no_claim() {
        let p = params();
        let g = p.geometry().unwrap();
        let s = planted(&p, &g, &[(3, 1)], &[(2, 0)]);
        let rep = check_red_wins(&p, &g, s).unwrap();
        assert!(!rep.g);
        assert_eq!(rep.verified, None);
    }

    #[test]
    fn guard_violation_fails_h() {
        let p = params();
        let g = p.geometry().unwrap();
        let s = planted(&p, &g, &[(6, 1)], &[(9, 2)]);
        let rep = check_red_wins(&p, &g, s).unwrap();
        assert!(rep.g && !rep.h);
    }

    #[test]
    fn rho_two_needs_two_rows() {
        let p = RedWinsParams { rho: 2, ..params() };
        let g = p.geometry().unwrap();
        // one guarded row holding blue is not a blocker for range 2
        let s = planted(&p, &g, &[(4, 3)], &[(4, 1)]);
        assert!(check_red_wins(&p, &g, s).unwrap().h);
        let s = planted(&p, &g, &[(4, 3)], &[(4, 1), (2, 2)]);
        assert!(!check_red_wins(&p, &g, s).unwrap().h);
    }

    #[test]
    fn bad_parameters() {
        assert!(RedWinsParams { epsilon: 0.0, ..params() }.geometry().is_err());
        assert!(RedWinsParams { p: 1e-9, epsilon: 1e3, ..params() }.geometry().is_err());
    }
}
