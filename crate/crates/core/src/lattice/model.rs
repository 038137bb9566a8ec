use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::neighborhood::Neighborhood;
use crate::error::{Error, Result};

/// Species ids are `1..=MAX_SPECIES`; 0 marks an empty site.
pub const MAX_SPECIES: usize = 8;

/// Sentinel stored in `colored_at` for sites that are still empty.
pub const NEVER: u32 = u32::MAX;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Positive rational update period `num/den`, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Period {
    num: u32,
    den: u32,
}

impl Period {
    pub const ONE: Period = Period { num: 1, den: 1 };

    pub fn new(num: u32, den: u32) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::invalid(format!("period {num}/{den} must be positive")));
        }
        let g = gcd(num as u64, den as u64) as u32;
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn num(self) -> u32 {
        self.num
    }

    pub fn den(self) -> u32 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Period {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("cannot parse period {s:?}; expected \"num/den\""));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n = n.trim().parse().map_err(|_| bad())?;
                let d = d.trim().parse().map_err(|_| bad())?;
                Period::new(n, d)
            }
            None => Period::new(s.parse().map_err(|_| bad())?, 1),
        }
    }
}

impl TryFrom<String> for Period {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Period> for String {
    fn from(p: Period) -> Self {
        p.to_string()
    }
}

/// A growth rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Species {
    pub id: u8,
    pub label: String,
    pub neighborhood: Neighborhood,
    pub period: Period,
    pub rgb: [u8; 3],
}

impl Species {
    pub fn new(id: u8, label: impl Into<String>, neighborhood: Neighborhood, period: Period) -> Self {
        let label = label.into();
        let rgb = default_rgb(&label, id);
        Self { id, label, neighborhood, period, rgb }
    }

    pub fn with_rgb(mut self, rgb: [u8; 3]) -> Self {
        self.rgb = rgb;
        self
    }
}

/// Palette used for the conventional labels, falling back to a grey ramp.
pub fn default_rgb(label: &str, id: u8) -> [u8; 3] {
    match label {
        "blue" => [0, 0, 255],
        "red" => [255, 0, 0],
        "green" => [0, 160, 0],
        _ => {
            let v = 40u8.saturating_add(id.saturating_mul(25));
            [v, v, v]
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    #[default]
    Torus,
    /// Offsets that leave the rectangle are ignored.
    DeadBoundary,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Topology::Torus => "torus",
            Topology::DeadBoundary => "dead_boundary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub species: Vec<Species>,
    /// Initial probability of each species, aligned with `species`.
    pub densities: Vec<f64>,
    pub topology: Topology,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(width: usize, height: usize, topology: Topology) -> Self {
        Self { species: Vec::new(), densities: Vec::new(), topology, width, height, seed: 0 }
    }

    pub fn with_species(mut self, species: Species, density: f64) -> Self {
        self.species.push(species);
        self.densities.push(density);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid("lattice dimensions must be positive"));
        }
        if self.width > i32::MAX as usize / 2 || self.height > i32::MAX as usize / 2 {
            return Err(Error::invalid("lattice dimensions too large"));
        }
        if self.width.checked_mul(self.height).is_none_or(|n| n > u32::MAX as usize) {
            return Err(Error::invalid("lattice has more than 2^32 sites"));
        }
        if self.species.len() > MAX_SPECIES {
            return Err(Error::invalid(format!("at most {MAX_SPECIES} species are supported")));
        }
        if self.species.len() != self.densities.len() {
            return Err(Error::invalid("one density per species is required"));
        }
        let mut seen = [false; MAX_SPECIES + 1];
        for s in &self.species {
            let id = s.id as usize;
            if id == 0 || id > MAX_SPECIES {
                return Err(Error::invalid(format!("species id {id} outside 1..={MAX_SPECIES}")));
            }
            if seen[id] {
                return Err(Error::invalid(format!("duplicate species id {id}")));
            }
            seen[id] = true;
        }
        let mut total = 0.0;
        for &d in &self.densities {
            if !(d >= 0.0) || !d.is_finite() {
                return Err(Error::invalid(format!("density {d} must be a nonnegative number")));
            }
            total += d;
        }
        if total > 1.0 + 1e-12 {
            return Err(Error::DensityOverflow(total));
        }
        self.tick_scale()?;
        Ok(())
    }

    /// Common denominator of all species periods; one tick is `1/tick_scale` time units.
    pub fn tick_scale(&self) -> Result<u32> {
        let mut scale = 1u64;
        for s in &self.species {
            scale = lcm(scale, s.period.den() as u64);
            if scale > u32::MAX as u64 {
                return Err(Error::TickOverflow("period denominators have too large an lcm".into()));
            }
        }
        Ok(scale as u32)
    }

    /// Index in `species` for a color byte, if any.
    pub fn species_index(&self, id: u8) -> Option<usize> {
        self.species.iter().position(|s| s.id == id)
    }

    pub fn species_by_label(&self, label: &str) -> Option<&Species> {
        self.species.iter().find(|s| s.label == label)
    }

    pub fn sites(&self) -> usize {
        self.width * self.height
    }
}

/// Color of a site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Empty,
    Species(u8),
}

impl Color {
    pub fn from_byte(b: u8) -> Self {
        if b == 0 {
            Color::Empty
        } else {
            Color::Species(b)
        }
    }

    pub fn to_byte(self) -> u8 {
        match self {
            Color::Empty => 0,
            Color::Species(id) => id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellState {
    pub color: Color,
    /// Tick at which the site was colored; `None` while empty.
    pub colored_at: Option<u32>,
}

/// Finite rectangle of sites with packed per-site state.
///
/// `colors[i]` is 0 for empty or a species id; `colored_at[i]` is the tick at
/// which the site was colored or [`NEVER`]. Site `(x, y)` lives at index
/// `y * width + x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    model: ModelSpecKey,
    tick_scale: u32,
    pub(crate) colors: Vec<u8>,
    pub(crate) colored_at: Vec<u32>,
}

// ModelSpec holds f64 densities, so equality of lattices compares the spec
// through its bit patterns.
#[derive(Debug, Clone)]
struct ModelSpecKey(ModelSpec);

impl PartialEq for ModelSpecKey {
    fn eq(&self, other: &Self) -> bool {
        let a = &self.0;
        let b = &other.0;
        a.species == b.species
            && a.topology == b.topology
            && a.width == b.width
            && a.height == b.height
            && a.seed == b.seed
            && a.densities.len() == b.densities.len()
            && a.densities.iter().zip(&b.densities).all(|(x, y)| x.to_bits() == y.to_bits())
    }
}

impl Eq for ModelSpecKey {}

impl Lattice {
    /// All-empty lattice for `model`.
    pub fn empty(model: ModelSpec) -> Result<Self> {
        model.validate()?;
        let tick_scale = model.tick_scale()?;
        let n = model.sites();
        Ok(Self { model: ModelSpecKey(model), tick_scale, colors: vec![0; n], colored_at: vec![NEVER; n] })
    }

    pub fn model(&self) -> &ModelSpec {
        &self.model.0
    }

    pub fn width(&self) -> usize {
        self.model.0.width
    }

    pub fn height(&self) -> usize {
        self.model.0.height
    }

    pub fn tick_scale(&self) -> u32 {
        self.tick_scale
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize) -> usize {
        y * self.width() + x
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.width(), idx / self.width())
    }

    /// Index of `(x, y)` after wrapping (torus) or `None` outside (dead boundary).
    pub fn wrap(&self, x: i64, y: i64) -> Option<usize> {
        let (w, h) = (self.width() as i64, self.height() as i64);
        match self.model.0.topology {
            Topology::Torus => Some(self.index(x.rem_euclid(w) as usize, y.rem_euclid(h) as usize)),
            Topology::DeadBoundary => {
                if (0..w).contains(&x) && (0..h).contains(&y) {
                    Some(self.index(x as usize, y as usize))
                } else {
                    None
                }
            }
        }
    }

    pub fn cell(&self, x: usize, y: usize) -> CellState {
        let i = self.index(x, y);
        let c = self.colors[i];
        CellState { color: Color::from_byte(c), colored_at: (c != 0).then_some(self.colored_at[i]) }
    }

    pub fn color_at(&self, x: usize, y: usize) -> u8 {
        self.colors[self.index(x, y)]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn colored_at(&self) -> &[u32] {
        &self.colored_at
    }

    /// Marks `(x, y)` with species `id` at tick 0. Overwrites whatever was there.
    pub fn plant(&mut self, x: usize, y: usize, id: u8) -> Result<()> {
        if x >= self.width() || y >= self.height() {
            return Err(Error::invalid(format!("site ({x},{y}) outside the lattice")));
        }
        if id != 0 && self.model.0.species_index(id).is_none() {
            return Err(Error::invalid(format!("unknown species id {id}")));
        }
        let i = self.index(x, y);
        self.colors[i] = id;
        self.colored_at[i] = if id == 0 { NEVER } else { 0 };
        Ok(())
    }

    /// Number of sites per color byte (index 0 = empty).
    pub fn census(&self) -> [usize; MAX_SPECIES + 1] {
        let mut counts = [0usize; MAX_SPECIES + 1];
        for &c in &self.colors {
            counts[c as usize] += 1;
        }
        counts
    }

    pub(crate) fn into_parts(self) -> (ModelSpec, u32, Vec<u8>, Vec<u32>) {
        (self.model.0, self.tick_scale, self.colors, self.colored_at)
    }

    pub(crate) fn from_parts(model: ModelSpec, tick_scale: u32, colors: Vec<u8>, colored_at: Vec<u32>) -> Self {
        Self { model: ModelSpecKey(model), tick_scale, colors, colored_at }
    }
}
