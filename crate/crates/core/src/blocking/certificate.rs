use serde::Serialize;

use super::field::BlueField;
use super::scaffold::{BlockingScaffold, Rect};
use super::success::is_successful;
use crate::dynamics::{run_reference, run_to_fixation, window_dependence_radius, SimResult};
use crate::error::{Error, Result};
use crate::lattice::{blue_leftward, red_ball, Lattice, ModelSpec, Neighborhood, Period, Species, Topology, NEVER};

/// Largest domain a certificate will allocate.
const MAX_DOMAIN_SITES: i64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    /// Blue grows by `B = {e1}`; every box must be crossed by a blue row
    /// before red enters the rows of that box.
    Dynamic,
    /// Blue is frozen as one crossing row segment per box (the witness rows);
    /// red must not reach the rows of layer `l` before its threshold time.
    Static,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Frontier,
    Reference,
}

/// A row segment that must stay free of red up to a time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisCheck {
    pub y: i64,
    pub x_lo: i64,
    pub x_hi: i64,
    /// Time limit in model time units.
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateConfig {
    pub mode: CertificateMode,
    pub r: Period,
    pub rho: u32,
    pub engine: Engine,
    /// Refuse to run unless every scaffold is successful for the field.
    pub require_success: bool,
    pub axis: Option<AxisCheck>,
}

impl CertificateConfig {
    pub fn new(mode: CertificateMode, r: Period, rho: u32) -> Self {
        Self { mode, r, rho, engine: Engine::Frontier, require_success: true, axis: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxOutcome {
    pub scaffold: usize,
    pub layer: usize,
    pub index: usize,
    /// Earliest tick at which some row of the box is blue across its width.
    pub crossing_tick: Option<u32>,
    /// Earliest tick at which red appears in the rows of the box.
    pub red_entry_tick: Option<u32>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayerOutcome {
    pub scaffold: usize,
    pub layer: usize,
    pub red_entry_tick: Option<u32>,
    /// Earliest admissible entry time in model time units.
    pub threshold: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub mode: CertificateMode,
    pub passed: bool,
    /// `(scaffold, layer, index)` of the lowest violation; index 0 marks a whole layer.
    pub first_violation: Option<(usize, usize, usize)>,
    pub boxes: Vec<BoxOutcome>,
    pub layers: Vec<LayerOutcome>,
    pub axis_clear: Option<bool>,
    /// Smallest slack in model time units over all checks (negative on failure).
    pub min_margin: f64,
    pub horizon_ticks: u64,
    /// World rectangle simulated; lattice site `(0, 0)` sits at its lower-left corner.
    pub domain: Rect,
    /// Part of the domain whose evolution up to the horizon is exact.
    pub window: Rect,
    #[serde(skip)]
    pub result: SimResult,
}

impl CertificateReport {
    pub fn origin(&self) -> (i64, i64) {
        (self.domain.x, self.domain.y)
    }
}

/// Runs red from solid cones `{y <= y0 - |x - x0|}` against the scaffolds'
/// blue and checks the protection property for `cfg.mode`.
///
/// The simulated domain is the checked window dilated by the dependence
/// radius of the horizon, so everything read inside the window matches the
/// infinite-plane dynamics with the same initial state in the window's light
/// cone. Red outside the cones is absent; blue outside the domain is absent.
pub fn protection_certificate(
    scaffolds: &[BlockingScaffold],
    apexes: &[(i64, i64)],
    field: &dyn BlueField,
    cfg: &CertificateConfig,
) -> Result<CertificateReport> {
    if scaffolds.is_empty() {
        return Err(Error::invalid("no scaffolds given"));
    }
    if apexes.is_empty() {
        return Err(Error::invalid("no red cones given"));
    }
    for sc in scaffolds {
        if sc.transposed {
            return Err(Error::invalid("certificates take upright scaffolds only"));
        }
        // Red covers rho sites per period r; it must be no faster than 1/alpha_bar.
        if sc.params.alpha_bar * cfg.rho as f64 > cfg.r.as_f64() + 1e-12 {
            return Err(Error::Constraint(format!(
                "alpha_bar * rho = {} must not exceed the red period r = {}",
                sc.params.alpha_bar * cfg.rho as f64,
                cfg.r
            )));
        }
    }
    let successes: Vec<_> = scaffolds.iter().map(|s| is_successful(s, field, cfg.rho)).collect();
    if cfg.require_success {
        if let Some(rep) = successes.iter().find(|r| !r.success) {
            let (layer, index) = rep.first_failure.expect("failure recorded");
            return Err(Error::UnsuccessfulScaffold { layer, index });
        }
    }

    let blue = match cfg.mode {
        CertificateMode::Dynamic => blue_leftward(),
        CertificateMode::Static => Species::new(1, "blue", Neighborhood::inert(), Period::ONE),
    };
    let red = red_ball(cfg.rho, cfg.r)?;
    let probe =
        ModelSpec::new(1, 1, Topology::DeadBoundary).with_species(blue.clone(), 0.0).with_species(red.clone(), 0.0);
    let scale = probe.tick_scale()? as u64;
    let red_period_ticks = cfg.r.num() as u64 * (scale / cfg.r.den() as u64);

    // Horizon: long enough for every check to be decided.
    let horizon_time = match cfg.mode {
        CertificateMode::Dynamic => {
            scaffolds.iter().flat_map(|s| &s.boxes).map(|b| b.rect.width + b.activation.width).max().unwrap_or(0) as f64
                + 1.0
        }
        CertificateMode::Static => {
            scaffolds.iter().flat_map(|s| (0..=s.ell_max).map(|l| s.layer_threshold(l))).fold(0.0, f64::max).ceil()
                + 1.0
        }
    };
    let horizon_time = cfg.axis.map_or(horizon_time, |a| horizon_time.max(a.time));
    let horizon_ticks = (horizon_time * scale as f64).ceil() as u64;

    // Red from a cone site far to the side must climb as far as it travels
    // sideways, so strips above the apexes are only reachable within this reach.
    let reach = (horizon_ticks * cfg.rho as u64).div_ceil(red_period_ticks) as i64 + 1;
    let mut window = scaffolds.iter().map(|s| s.bounds()).reduce(|a, b| a.union(&b)).expect("nonempty");
    for &(x0, y0) in apexes {
        window = window.union(&Rect::new(x0 - reach, y0, 2 * reach + 1, 1));
    }
    if let Some(a) = cfg.axis {
        window = window.union(&Rect::new(a.x_lo - reach, a.y, a.x_hi - a.x_lo + 1 + 2 * reach, 1));
    }
    let radius = window_dependence_radius(&probe, horizon_ticks)? as i64;
    let domain = window.dilated(radius);
    if domain.area() > MAX_DOMAIN_SITES {
        return Err(Error::invalid(format!(
            "certificate domain {}x{} exceeds {MAX_DOMAIN_SITES} sites",
            domain.width, domain.height
        )));
    }

    let model = ModelSpec::new(domain.width as usize, domain.height as usize, Topology::DeadBoundary)
        .with_species(blue, 0.0)
        .with_species(red, 0.0);
    let mut lattice = Lattice::empty(model)?;
    let (ox, oy) = (domain.x, domain.y);
    let to_local = |x: i64, y: i64| ((x - ox) as usize, (y - oy) as usize);
    match cfg.mode {
        CertificateMode::Dynamic => {
            for (x, y) in field.points_in(&domain) {
                let (i, j) = to_local(x, y);
                lattice.plant(i, j, 1)?;
            }
        }
        CertificateMode::Static => {
            for (sc, rep) in scaffolds.iter().zip(&successes) {
                for (b, w) in sc.boxes.iter().zip(&rep.witness_rows) {
                    let Some(y0) = w else { continue };
                    for y in *y0..*y0 + cfg.rho as i64 {
                        for x in b.rect.x..b.rect.right() {
                            let (i, j) = to_local(x, y);
                            lattice.plant(i, j, 1)?;
                        }
                    }
                }
            }
        }
    }
    for j in 0..domain.height {
        let y = oy + j;
        for i in 0..domain.width {
            let x = ox + i;
            if apexes.iter().any(|&(x0, y0)| y <= y0 - (x - x0).abs()) {
                lattice.plant(i as usize, j as usize, 2)?;
            }
        }
    }

    let result = match cfg.engine {
        Engine::Frontier => run_to_fixation(lattice, horizon_ticks)?,
        Engine::Reference => run_reference(lattice, horizon_ticks)?,
    };

    let lat = &result.lattice;
    let w = domain.width as usize;
    let at = |x: i64, y: i64| {
        let (i, j) = to_local(x, y);
        (lat.colors()[j * w + i], lat.colored_at()[j * w + i])
    };
    let first_red_in_rows = |y_lo: i64, y_hi: i64| -> Option<u32> {
        let mut best = NEVER;
        for y in y_lo..y_hi {
            for x in window.x..window.right() {
                let (c, t) = at(x, y);
                if c == 2 {
                    best = best.min(t);
                }
            }
        }
        (best != NEVER).then_some(best)
    };
    let ticks_to_time = |t: u32| t as f64 / scale as f64;
    let horizon_f = horizon_ticks as f64 / scale as f64;

    let mut boxes = Vec::new();
    let mut layers = Vec::new();
    let mut first_violation: Option<(usize, usize, usize)> = None;
    let mut min_margin = f64::INFINITY;
    let note = |v: (usize, usize, usize), fv: &mut Option<(usize, usize, usize)>| {
        let key = |t: &(usize, usize, usize)| (t.1, t.0, t.2);
        if fv.is_none_or(|cur| key(&v) < key(&cur)) {
            *fv = Some(v);
        }
    };

    match cfg.mode {
        CertificateMode::Dynamic => {
            for (s, sc) in scaffolds.iter().enumerate() {
                for b in &sc.boxes {
                    let mut crossing: Option<u32> = None;
                    for y in b.rect.y..b.rect.top() {
                        let mut latest = 0u32;
                        let full = (b.rect.x..b.rect.right()).all(|x| {
                            let (c, t) = at(x, y);
                            latest = latest.max(t);
                            c == 1
                        });
                        if full {
                            crossing = Some(crossing.map_or(latest, |c| c.min(latest)));
                        }
                    }
                    let red_entry = first_red_in_rows(b.rect.y, b.rect.top());
                    let ok = match (crossing, red_entry) {
                        (Some(c), Some(r)) => c < r,
                        (Some(_), None) => true,
                        (None, _) => false,
                    };
                    let margin = match (crossing, red_entry) {
                        (Some(c), Some(r)) => ticks_to_time(r) - ticks_to_time(c),
                        (Some(c), None) => horizon_f - ticks_to_time(c),
                        (None, Some(r)) => ticks_to_time(r) - horizon_f,
                        (None, None) => -1.0,
                    };
                    min_margin = min_margin.min(margin);
                    if !ok {
                        note((s, b.layer, b.index), &mut first_violation);
                    }
                    boxes.push(BoxOutcome {
                        scaffold: s,
                        layer: b.layer,
                        index: b.index,
                        crossing_tick: crossing,
                        red_entry_tick: red_entry,
                        ok,
                    });
                }
            }
        }
        CertificateMode::Static => {
            for (s, sc) in scaffolds.iter().enumerate() {
                for (l, &(y, h)) in sc.strips.iter().enumerate() {
                    let red_entry = first_red_in_rows(y, y + h);
                    let threshold = sc.layer_threshold(l);
                    let entry_time = red_entry.map_or(f64::INFINITY, ticks_to_time);
                    let ok = entry_time >= threshold - 1e-9;
                    min_margin = min_margin.min(entry_time.min(horizon_f) - threshold);
                    if !ok {
                        note((s, l, 0), &mut first_violation);
                    }
                    layers.push(LayerOutcome { scaffold: s, layer: l, red_entry_tick: red_entry, threshold, ok });
                }
            }
        }
    }

    let axis_clear = cfg.axis.map(|a| {
        let limit = (a.time * scale as f64).floor() as u32;
        (a.x_lo..=a.x_hi).all(|x| {
            let (c, t) = at(x, a.y);
            c != 2 || t > limit
        })
    });
    let passed = first_violation.is_none() && axis_clear != Some(false);
    Ok(CertificateReport {
        mode: cfg.mode,
        passed,
        first_violation,
        boxes,
        layers,
        axis_clear,
        min_margin,
        horizon_ticks,
        domain,
        window,
        result,
    })
}
