use super::result::SimResult;
use super::schedule::Schedule;
use crate::error::{Error, Result};
use crate::lattice::rng::STREAM_TIE;
use crate::lattice::{coin, Lattice, ModelSpec, Topology, NEVER};

/// Frontier-driven evolution.
///
/// Only sites colored by a species at its previous update can seed that
/// species' next update, so each update looks at `frontier x offsets`
/// candidates instead of every empty site.
#[derive(Debug, Clone)]
pub struct FrontierEngine {
    model: ModelSpec,
    tick_scale: u32,
    schedule: Schedule,
    width: usize,
    height: usize,
    torus: bool,
    colors: Vec<u8>,
    colored_at: Vec<u32>,
    ids: Vec<u8>,
    /// Per species: displacements from a frontier site to the sites it can claim.
    /// On a torus these are pre-reduced into `[0, width) x [0, height)`.
    reach: Vec<Vec<(i64, i64)>>,
    frontier: Vec<Vec<u32>>,
    next: Vec<Vec<u32>>,
    alive: u32,
    claims: Vec<u8>,
    touched: Vec<u32>,
    fresh: Vec<u32>,
    tick: u64,
    last_colored: u32,
}

impl FrontierEngine {
    pub fn new(lattice: Lattice) -> Result<Self> {
        let (model, tick_scale, colors, colored_at) = lattice.into_parts();
        let schedule = Schedule::for_model(&model)?;
        let (width, height) = (model.width, model.height);
        let torus = model.topology == Topology::Torus;
        let ids: Vec<u8> = model.species.iter().map(|s| s.id).collect();
        let reach = model
            .species
            .iter()
            .map(|s| {
                s.neighborhood
                    .offsets()
                    .iter()
                    .map(|o| {
                        let (dx, dy) = (-(o.dx as i64), -(o.dy as i64));
                        if torus {
                            (dx.rem_euclid(width as i64), dy.rem_euclid(height as i64))
                        } else {
                            (dx, dy)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut frontier = vec![Vec::new(); ids.len()];
        let mut last_colored = 0;
        for (i, &c) in colors.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = model
                .species_index(c)
                .ok_or_else(|| Error::invalid(format!("site {i} holds unknown species id {c}")))?;
            if colored_at[i] == 0 {
                frontier[s].push(i as u32);
            }
            last_colored = last_colored.max(colored_at[i]);
        }
        if last_colored != 0 {
            return Err(Error::invalid("initial lattice must only hold sites colored at tick 0"));
        }
        let alive = frontier.iter().enumerate().filter(|(_, f)| !f.is_empty()).fold(0, |m, (s, _)| m | (1 << s));
        let n = colors.len();
        Ok(Self {
            model,
            tick_scale,
            schedule,
            width,
            height,
            torus,
            colors,
            colored_at,
            next: vec![Vec::new(); ids.len()],
            ids,
            reach,
            frontier,
            alive,
            claims: vec![0; n],
            touched: Vec::new(),
            fresh: Vec::new(),
            tick: 0,
            last_colored,
        })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    /// Last processed event tick.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    /// Bitmask of species (by index) that may still grow.
    pub fn alive_mask(&self) -> u32 {
        self.alive
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    /// Next event tick at which a live species updates.
    pub fn next_event(&self) -> Result<Option<u64>> {
        self.schedule.next_event_after(self.tick, self.alive)
    }

    #[inline]
    fn target(&self, site: u32, (dx, dy): (i64, i64)) -> Option<usize> {
        let (w, h) = (self.width as i64, self.height as i64);
        let x = site as i64 % w;
        let y = site as i64 / w;
        if self.torus {
            let mut tx = x + dx;
            if tx >= w {
                tx -= w;
            }
            let mut ty = y + dy;
            if ty >= h {
                ty -= h;
            }
            Some((ty * w + tx) as usize)
        } else {
            let (tx, ty) = (x + dx, y + dy);
            ((0..w).contains(&tx) && (0..h).contains(&ty)).then(|| (ty * w + tx) as usize)
        }
    }

    /// Applies the update at event tick `tick` and returns the newly colored sites.
    pub fn step(&mut self, tick: u64) -> Result<&[u32]> {
        if tick <= self.tick {
            return Err(Error::invalid(format!("tick {tick} is not after the last processed tick {}", self.tick)));
        }
        if tick >= NEVER as u64 {
            return Err(Error::TickOverflow(format!("tick {tick} does not fit in the colored_at array")));
        }
        let updating = self.schedule.updating_mask(tick) & self.alive;
        self.fresh.clear();
        self.tick = tick;
        if updating == 0 {
            return Ok(&self.fresh);
        }

        for s in 0..self.ids.len() {
            if updating & (1 << s) == 0 {
                continue;
            }
            let bit = 1u8 << s;
            for k in 0..self.frontier[s].len() {
                let f = self.frontier[s][k];
                for r in 0..self.reach[s].len() {
                    let Some(c) = self.target(f, self.reach[s][r]) else { continue };
                    if self.colors[c] != 0 {
                        continue;
                    }
                    if self.claims[c] == 0 {
                        self.touched.push(c as u32);
                    }
                    self.claims[c] |= bit;
                }
            }
            self.next[s].clear();
        }

        // Claims were all read from the pre-update state; resolve them now.
        let w = self.width;
        for k in 0..self.touched.len() {
            let c = self.touched[k] as usize;
            let mask = std::mem::take(&mut self.claims[c]);
            let s = if mask.count_ones() == 1 {
                mask.trailing_zeros() as usize
            } else {
                let n = mask.count_ones() as usize;
                let pick = coin(self.model.seed, STREAM_TIE, (c % w) as i64, (c / w) as i64, tick, n);
                nth_set_bit(mask, pick)
            };
            debug_assert_eq!(self.colors[c], 0, "site {c} colored twice");
            self.colors[c] = self.ids[s];
            self.colored_at[c] = tick as u32;
            self.next[s].push(c as u32);
            self.fresh.push(c as u32);
        }
        self.touched.clear();

        for s in 0..self.ids.len() {
            if updating & (1 << s) == 0 {
                continue;
            }
            std::mem::swap(&mut self.frontier[s], &mut self.next[s]);
            if self.frontier[s].is_empty() {
                self.alive &= !(1 << s);
            }
        }
        if !self.fresh.is_empty() {
            self.last_colored = tick as u32;
        }
        Ok(&self.fresh)
    }

    /// Runs until every species is dead or the next event would pass `horizon_ticks`.
    pub fn run(mut self, horizon_ticks: u64) -> Result<SimResult> {
        let capped = loop {
            match self.next_event()? {
                None => break false,
                Some(t) if t > horizon_ticks => break true,
                Some(t) => {
                    self.step(t)?;
                }
            }
        };
        Ok(self.finish(capped))
    }

    fn finish(self, capped: bool) -> SimResult {
        let lattice = Lattice::from_parts(self.model, self.tick_scale, self.colors, self.colored_at);
        SimResult::new(lattice, self.last_colored, capped)
    }
}

fn nth_set_bit(mut mask: u8, n: usize) -> usize {
    for _ in 0..n {
        mask &= mask - 1;
    }
    mask.trailing_zeros() as usize
}

/// Default horizon: `4 (width + height)` updates of the slowest species.
pub fn default_horizon(model: &ModelSpec) -> Result<u64> {
    let scale = model.tick_scale()? as u64;
    let slowest =
        model.species.iter().map(|s| (s.period.num() as u64).div_ceil(s.period.den() as u64)).max().unwrap_or(1).max(1);
    4u64.checked_mul((model.width + model.height) as u64)
        .and_then(|v| v.checked_mul(scale))
        .and_then(|v| v.checked_mul(slowest))
        .ok_or_else(|| Error::TickOverflow("default horizon".into()))
}

/// Evolves `lattice` with the frontier engine.
pub fn run_to_fixation(lattice: Lattice, horizon_ticks: u64) -> Result<SimResult> {
    FrontierEngine::new(lattice)?.run(horizon_ticks)
}

/// Brute-force oracle: rescans every empty site at every event tick.
pub fn run_reference(lattice: Lattice, horizon_ticks: u64) -> Result<SimResult> {
    let (model, tick_scale, mut colors, mut colored_at) = lattice.into_parts();
    let schedule = Schedule::for_model(&model)?;
    let probe = Lattice::from_parts(model.clone(), tick_scale, Vec::new(), Vec::new());
    let (w, h) = (model.width, model.height);
    let ns = model.species.len();
    let mut alive = 0u32;
    for (s, sp) in model.species.iter().enumerate() {
        if colors.contains(&sp.id) {
            alive |= 1 << s;
        }
    }
    let mut t = 0u64;
    let mut last = 0u32;
    let capped = loop {
        let Some(next) = schedule.next_event_after(t, alive)? else { break false };
        if next > horizon_ticks {
            break true;
        }
        if next >= NEVER as u64 {
            return Err(Error::TickOverflow(format!("tick {next} does not fit in the colored_at array")));
        }
        t = next;
        let updating = schedule.updating_mask(t);
        let mut claims = Vec::new();
        for y in 0..h {
            for x in 0..w {
                let i = y * w + x;
                if colors[i] != 0 {
                    continue;
                }
                let mut mask = 0u8;
                for (s, sp) in model.species.iter().enumerate() {
                    if updating & (1 << s) == 0 {
                        continue;
                    }
                    let sees = sp.neighborhood.offsets().iter().any(|o| {
                        probe.wrap(x as i64 + o.dx as i64, y as i64 + o.dy as i64).is_some_and(|j| colors[j] == sp.id)
                    });
                    if sees {
                        mask |= 1 << s;
                    }
                }
                if mask != 0 {
                    claims.push((i, mask));
                }
            }
        }
        let mut yields = vec![0usize; ns];
        for &(i, mask) in &claims {
            let n = mask.count_ones() as usize;
            let s = if n == 1 {
                mask.trailing_zeros() as usize
            } else {
                nth_set_bit(mask, coin(model.seed, STREAM_TIE, (i % w) as i64, (i / w) as i64, t, n))
            };
            colors[i] = model.species[s].id;
            colored_at[i] = t as u32;
            yields[s] += 1;
        }
        if !claims.is_empty() {
            last = t as u32;
        }
        for (s, &grown) in yields.iter().enumerate().take(ns) {
            if updating & (1 << s) == 0 {
                continue;
            }
            debug_assert!(alive & (1 << s) != 0 || grown == 0, "dead species {s} grew at tick {t}");
            if grown == 0 {
                alive &= !(1 << s);
            }
        }
    };
    let lattice = Lattice::from_parts(model, tick_scale, colors, colored_at);
    Ok(SimResult::new(lattice, last, capped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{blue_leftward, blue_line, red_ball, sample_initial, Period, Topology};

    fn two_species(
        w: usize,
        h: usize,
        topo: Topology,
        blue: crate::lattice::Species,
        red: crate::lattice::Species,
    ) -> ModelSpec {
        ModelSpec::new(w, h, topo).with_species(blue, 0.0).with_species(red, 0.0)
    }

    #[test]
    fn nth_bit() {
        assert_eq!(nth_set_bit(0b1011, 0), 0);
        assert_eq!(nth_set_bit(0b1011, 1), 1);
        assert_eq!(nth_set_bit(0b1011, 2), 3);
    }

    #[test]
    fn leftward_step() {
        let m = two_species(3, 1, Topology::DeadBoundary, blue_leftward(), red_ball(1, Period::ONE).unwrap());
        let mut l = Lattice::empty(m).unwrap();
        l.plant(1, 0, 1).unwrap();
        let mut e = FrontierEngine::new(l).unwrap();
        let fresh = e.step(1).unwrap().to_vec();
        assert_eq!(fresh, vec![0]);
        assert_eq!(e.colors()[0], 1);
        assert_eq!(e.colors()[2], 0);
    }

    #[test]
    fn tie_is_fair_over_seeds() {
        let mut blue_wins = 0;
        let n = 10_000;
        for seed in 0..n {
            let m = two_species(3, 3, Topology::DeadBoundary, blue_leftward(), red_ball(1, Period::ONE).unwrap())
                .with_seed(seed);
            let mut l = Lattice::empty(m).unwrap();
            l.plant(1, 0, 1).unwrap();
            l.plant(0, 1, 2).unwrap();
            let mut e = FrontierEngine::new(l).unwrap();
            e.step(1).unwrap();
            match e.colors()[0] {
                1 => blue_wins += 1,
                2 => {}
                c => panic!("origin has color {c}"),
            }
        }
        let frac = blue_wins as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.015, "blue won {frac}");
    }

    #[test]
    fn range_two_jumps_obstacle() {
        // Vertical red on a single row cannot claim anything itself.
        let red = crate::lattice::red_line(1, Period::ONE).unwrap();
        let m = two_species(3, 1, Topology::DeadBoundary, blue_line(2).unwrap(), red);
        let mut l = Lattice::empty(m).unwrap();
        l.plant(2, 0, 1).unwrap();
        l.plant(1, 0, 2).unwrap();
        let r = run_to_fixation(l, 10).unwrap();
        assert_eq!(r.color(0, 0), 1);
        assert_eq!(r.lattice.colored_at()[0], 1);
    }

    #[test]
    fn all_empty_fixates_immediately() {
        let m = two_species(8, 8, Topology::Torus, blue_line(1).unwrap(), red_ball(1, Period::ONE).unwrap());
        let l = Lattice::empty(m).unwrap();
        let a = run_to_fixation(l.clone(), 100).unwrap();
        let b = run_reference(l, 100).unwrap();
        assert_eq!(a.fixation_tick, 0);
        assert!(!a.horizon_capped);
        assert_eq!(a.empty, 64);
        assert_eq!(a, b);
    }

    #[test]
    fn ball_growth_is_torus_l1_distance() {
        let m = two_species(21, 21, Topology::Torus, blue_line(1).unwrap(), red_ball(1, Period::ONE).unwrap());
        let mut l = Lattice::empty(m).unwrap();
        l.plant(0, 0, 2).unwrap();
        let r = run_to_fixation(l, 1000).unwrap();
        for y in 0..21usize {
            for x in 0..21usize {
                let d = x.min(21 - x) + y.min(21 - y);
                assert_eq!(r.lattice.colored_at()[y * 21 + x], d as u32, "({x},{y})");
            }
        }
        assert_eq!(r.fixation_tick, 20);
        assert_eq!(r.counts, vec![0, 441]);
    }

    #[test]
    fn directed_row_wraps() {
        let m = two_species(11, 11, Topology::Torus, blue_leftward(), red_ball(1, Period::ONE).unwrap());
        let mut l = Lattice::empty(m).unwrap();
        l.plant(5, 5, 1).unwrap();
        let r = run_to_fixation(l, 1000).unwrap();
        assert_eq!(r.empty, 110);
        assert!((0..11).all(|x| r.color(x, 5) == 1));
        assert_eq!(r.fixation_tick, 10);
    }

    #[test]
    fn horizon_caps_run() {
        let m = two_species(21, 21, Topology::Torus, blue_line(1).unwrap(), red_ball(1, Period::ONE).unwrap());
        let mut l = Lattice::empty(m).unwrap();
        l.plant(0, 0, 2).unwrap();
        let r = run_to_fixation(l.clone(), 5).unwrap();
        assert!(r.horizon_capped);
        assert_eq!(r.fixation_tick, 5);
        assert_eq!(r, run_reference(l, 5).unwrap());
    }

    #[test]
    fn slow_red_matches_reference() {
        let red = red_ball(1, Period::new(2, 3).unwrap()).unwrap();
        let m =
            ModelSpec::new(32, 32, Topology::Torus).with_species(blue_line(1).unwrap(), 0.05).with_species(red, 0.02);
        for seed in 0..10 {
            let l = sample_initial(m.clone().with_seed(seed)).unwrap();
            let h = default_horizon(l.model()).unwrap();
            let a = run_to_fixation(l.clone(), h).unwrap();
            let b = run_reference(l, h).unwrap();
            assert!(!a.horizon_capped);
            assert_eq!(a, b, "seed {seed}");
        }
    }

    #[test]
    fn default_horizon_scales_with_slowest_period() {
        let m = two_species(
            10,
            6,
            Topology::Torus,
            blue_line(1).unwrap(),
            red_ball(1, Period::new(5, 2).unwrap()).unwrap(),
        );
        assert_eq!(default_horizon(&m).unwrap(), 4 * 16 * 2 * 3);
    }
}
