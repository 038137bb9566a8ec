//! TOML configuration files.
//!
//! ```toml
//! [model]
//! width = 800            # height defaults to width
//! topology = "torus"     # or "dead_boundary"
//! seed = 1
//!
//! [[model.species]]
//! label = "blue"         # id defaults to position + 1
//! density = 0.001
//! period = 1             # integer or "num/den"
//! neighborhood = { kind = "line", range = 1, axis = "x", directed = false }
//!
//! [[model.species]]
//! label = "red"
//! density = 0.001
//! neighborhood = { kind = "l1_ball", radius = 1 }
//! # or { kind = "offsets", offsets = [[0, 1], [0, -1]] }
//!
//! [experiment]           # phase scans
//! name = "lines"
//! setting = { kind = "lines", rho = 1, tau = 1 }
//! r = 1
//! p_grid = [0.02, 0.01]
//! a_grid = [0.5, 1, 2]
//! side = 800             # or side_factor = 4 for ceil(4 / p)
//! replicates = 100
//! seed = 1
//!
//! [render]
//! scale = 1
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::harness::{ScanParams, Setting, Side};
use crate::lattice::{Axis, ModelSpec, Neighborhood, Offset, Period, Species, Topology};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub model: Option<ModelConfig>,
    pub experiment: Option<ExperimentConfig>,
    #[serde(default)]
    pub render: RenderConfig,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub width: usize,
    pub height: Option<usize>,
    #[serde(default)]
    pub topology: Topology,
    #[serde(default)]
    pub seed: u64,
    pub species: Vec<SpeciesConfig>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub label: String,
    pub id: Option<u8>,
    #[serde(default)]
    pub density: f64,
    #[serde(default = "one")]
    pub period: PeriodValue,
    pub neighborhood: NeighborhoodConfig,
    pub rgb: Option<[u8; 3]>,
}

/// A period written as an integer or as `"num/den"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum PeriodValue {
    Int(u32),
    Text(String),
}

fn one() -> PeriodValue {
    PeriodValue::Int(1)
}

impl PeriodValue {
    pub fn period(&self) -> Result<Period> {
        match self {
            PeriodValue::Int(n) => Period::new(*n, 1),
            PeriodValue::Text(s) => s.parse(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NeighborhoodConfig {
    Line {
        range: u32,
        axis: Axis,
        #[serde(default)]
        directed: bool,
    },
    L1Ball {
        radius: u32,
    },
    Offsets {
        offsets: Vec<(i32, i32)>,
    },
}

impl NeighborhoodConfig {
    pub fn build(&self) -> Result<Neighborhood> {
        match self {
            NeighborhoodConfig::Line { range, axis, directed } => Neighborhood::line(*range, *axis, *directed),
            NeighborhoodConfig::L1Ball { radius } => Neighborhood::l1_ball(*radius),
            NeighborhoodConfig::Offsets { offsets } => {
                Neighborhood::from_offsets(offsets.iter().map(|&(dx, dy)| Offset::new(dx, dy)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub setting: Setting,
    #[serde(default = "one")]
    pub r: PeriodValue,
    pub p_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub gamma: Option<f64>,
    pub side: Option<usize>,
    pub side_factor: Option<f64>,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_name() -> String {
    "scan".into()
}

fn default_replicates() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RenderConfig {
    #[serde(default = "default_scale")]
    pub scale: u32,
}

fn default_scale() -> u32 {
    1
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self { scale: 1 }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config { path: "<string>".into(), message: e.to_string() })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config { path: path.into(), message: e.to_string() })?;
        toml::from_str(&text).map_err(|e| Error::Config { path: path.into(), message: e.to_string() })
    }

    pub fn model_spec(&self) -> Result<ModelSpec> {
        let m = self.model.as_ref().ok_or_else(|| Error::invalid("config has no [model] section"))?;
        m.spec()
    }

    pub fn scan_params(&self) -> Result<ScanParams> {
        let e = self.experiment.as_ref().ok_or_else(|| Error::invalid("config has no [experiment] section"))?;
        e.params()
    }
}

impl ModelConfig {
    pub fn spec(&self) -> Result<ModelSpec> {
        let mut spec =
            ModelSpec::new(self.width, self.height.unwrap_or(self.width), self.topology).with_seed(self.seed);
        for (i, s) in self.species.iter().enumerate() {
            let id = s.id.unwrap_or(i as u8 + 1);
            let mut species = Species::new(id, s.label.clone(), s.neighborhood.build()?, s.period.period()?);
            if let Some(rgb) = s.rgb {
                species = species.with_rgb(rgb);
            }
            spec = spec.with_species(species, s.density);
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl ExperimentConfig {
    pub fn params(&self) -> Result<ScanParams> {
        let side = match (self.side, self.side_factor) {
            (Some(l), None) => Side::Fixed(l),
            (None, Some(c)) => Side::InverseP(c),
            (None, None) => Side::InverseP(4.0),
            (Some(_), Some(_)) => return Err(Error::invalid("give either side or side_factor, not both")),
        };
        let params = ScanParams {
            name: self.name.clone(),
            setting: self.setting,
            r: self.r.period()?,
            p_grid: self.p_grid.clone(),
            a_grid: self.a_grid.clone(),
            gamma: self.gamma,
            side,
            replicates: self.replicates,
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[model]
width = 40
height = 30
topology = "dead_boundary"
seed = 9

[[model.species]]
label = "blue"
density = 0.01
neighborhood = { kind = "line", range = 2, axis = "x" }

[[model.species]]
label = "red"
density = 0.02
period = "2/3"
neighborhood = { kind = "l1_ball", radius = 1 }

[[model.species]]
label = "odd"
id = 5
period = 3
rgb = [1, 2, 3]
neighborhood = { kind = "offsets", offsets = [[1, 1], [-1, -1]] }

[experiment]
setting = { kind = "ball_vs_leftward", rho = 2 }
r = "3/2"
p_grid = [0.02, 0.01]
a_grid = [1, 2]
side_factor = 3.5
replicates = 7

[render]
scale = 3
"#;

    #[test]
    fn full_config_round_trip() {
        let c = Config::parse(FULL).unwrap();
        let m = c.model_spec().unwrap();
        assert_eq!((m.width, m.height, m.topology, m.seed), (40, 30, Topology::DeadBoundary, 9));
        assert_eq!(m.species[1].period, Period::new(2, 3).unwrap());
        assert_eq!(m.species[2].id, 5);
        assert_eq!(m.species[2].rgb, [1, 2, 3]);
        assert_eq!(m.species[0].neighborhood, Neighborhood::line(2, Axis::X, false).unwrap());
        assert_eq!(m.tick_scale().unwrap(), 3);
        let s = c.scan_params().unwrap();
        assert_eq!(s.setting, Setting::BallVsLeftward { rho: 2 });
        assert_eq!(s.side, Side::InverseP(3.5));
        assert_eq!(s.replicates, 7);
        assert_eq!(s.r, Period::new(3, 2).unwrap());
        assert_eq!(c.render.scale, 3);
    }

    #[test]
    fn errors_are_reported() {
        assert!(Config::parse("[model]\nwidth = 4\nspecies = []\nbogus = 1").is_err());
        let c = Config::parse("[model]\nwidth = 4\n[[model.species]]\nlabel = \"b\"\ndensity = 0.7\nneighborhood = { kind = \"l1_ball\", radius = 1 }\n[[model.species]]\nlabel = \"r\"\ndensity = 0.7\nneighborhood = { kind = \"l1_ball\", radius = 1 }").unwrap();
        assert!(matches!(c.model_spec(), Err(Error::DensityOverflow(_))));
        let c =
            Config::parse("[experiment]\nsetting = { kind = \"lines\", rho = 1, tau = 1 }\np_grid = []\na_grid = [1]")
                .unwrap();
        assert!(c.scan_params().is_err());
        assert!(matches!(Config::load(Path::new("/nonexistent/x.toml")), Err(Error::Config { .. })));
    }
}
