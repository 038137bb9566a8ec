use serde::{Deserialize, Serialize};

use crate::continuum::{layer_table, ContinuumConfig, LayerRow};
use crate::error::{Error, Result};

/// Map from continuum lengths to lattice lengths: `u -> ceil(u * scale)` with
/// `scale = p^(-rho/(rho+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RescaleRule {
    pub p: f64,
    pub rho: u32,
    pub scale: f64,
}

impl RescaleRule {
    pub fn new(p: f64, rho: u32) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!("p = {p} must lie in (0, 1]")));
        }
        if rho == 0 {
            return Err(Error::invalid("rho must be at least 1"));
        }
        let scale = p.powf(-(rho as f64) / (rho as f64 + 1.0));
        Ok(Self { p, rho, scale })
    }

    /// `ceil(u * scale)`. Products within 1e-9 (relative) above an integer
    /// round down to it, so exact values are not pushed up by float noise.
    pub fn rescaled(&self, u: f64) -> i64 {
        let v = u * self.scale;
        (v - 1e-9 * v.abs().max(1.0)).ceil() as i64
    }
}

/// Axis-aligned block of sites `[x, x + width) x [y, y + height)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: i64,
    pub y: i64,
    pub width: i64,
    pub height: i64,
}

impl Rect {
    pub fn new(x: i64, y: i64, width: i64, height: i64) -> Self {
        Self { x, y, width, height }
    }

    pub fn right(&self) -> i64 {
        self.x + self.width
    }

    pub fn top(&self) -> i64 {
        self.y + self.height
    }

    pub fn area(&self) -> i64 {
        self.width.max(0) * self.height.max(0)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.top()
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.x < o.right() && o.x < self.right() && self.y < o.top() && o.y < self.top()
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Rect {
        Rect { x: self.x + dx, y: self.y + dy, ..*self }
    }

    /// Image under `y -> -y`.
    pub fn reflected(&self) -> Rect {
        Rect { y: -(self.top() - 1), ..*self }
    }

    /// Smallest rectangle containing both.
    pub fn union(&self, o: &Rect) -> Rect {
        let x = self.x.min(o.x);
        let y = self.y.min(o.y);
        Rect { x, y, width: self.right().max(o.right()) - x, height: self.top().max(o.top()) - y }
    }

    pub fn dilated(&self, r: i64) -> Rect {
        Rect { x: self.x - r, y: self.y - r, width: self.width + 2 * r, height: self.height + 2 * r }
    }
}

/// Scaffold parameters in continuum units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaffoldParams {
    pub p: f64,
    pub alpha: f64,
    pub alpha_bar: f64,
    pub m: u32,
    pub rho: u32,
    /// Top layer; `None` picks the smallest integer `>= ln(1/p) / ln(lambda)`.
    pub ell_max: Option<usize>,
}

impl ScaffoldParams {
    /// `alpha = 0.9 min(1, r)`, `alpha_bar` halfway between `alpha` and `r`,
    /// and the smallest admissible `m`.
    pub fn with_defaults(p: f64, r: f64, rho: u32) -> Self {
        let alpha = 0.9 * r.min(1.0);
        let alpha_bar = (alpha + r) / 2.0;
        let m = (2.0 / alpha).floor() as u32 + 1;
        Self { p, alpha, alpha_bar, m, rho, ell_max: None }
    }

    pub fn continuum(&self) -> Result<ContinuumConfig> {
        ContinuumConfig::new(self.alpha, self.alpha_bar, self.m)
    }

    pub fn default_ell_max(&self) -> Result<usize> {
        let lambda = self.continuum()?.lambda();
        Ok(((1.0 / self.p).ln() / lambda.ln()).ceil().max(0.0) as usize)
    }

    pub fn resolved_ell_max(&self) -> Result<usize> {
        match self.ell_max {
            Some(l) => Ok(l),
            None => self.default_ell_max(),
        }
    }

    /// `2 m sqrt(lambda) / (sqrt(lambda) - 1)`.
    pub fn sigma(&self) -> Result<f64> {
        Ok(self.continuum()?.sigma())
    }

    /// Depth of a cone apex below its scaffold center, `g_1 / alpha`, in continuum units.
    pub fn cone_drop(&self) -> Result<f64> {
        let rows = layer_table(&self.continuum()?, 1)?;
        Ok(rows[1].triple.g / self.alpha)
    }
}

/// One box of a scaffold with its activation region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaffoldBox {
    pub layer: usize,
    /// Position within the layer, `1..=m`.
    pub index: usize,
    pub rect: Rect,
    pub activation: Rect,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockingScaffold {
    pub center: (i64, i64),
    pub transposed: bool,
    pub params: ScaffoldParams,
    pub rule: RescaleRule,
    pub sigma: f64,
    pub ell_max: usize,
    /// Layer-major, bottom to top within each layer.
    pub boxes: Vec<ScaffoldBox>,
    /// Row band `(y, height)` of each layer.
    pub strips: Vec<(i64, i64)>,
    #[serde(skip)]
    pub rows: Vec<LayerRow>,
}

impl BlockingScaffold {
    pub fn build(center: (i64, i64), params: ScaffoldParams, transposed: bool) -> Result<Self> {
        let cfg = params.continuum()?;
        let rule = RescaleRule::new(params.p, params.rho)?;
        let ell_max = params.resolved_ell_max()?;
        let rows = layer_table(&cfg, ell_max)?;
        let lambda = cfg.lambda();
        let gap = params.alpha_bar - params.alpha;
        let m = params.m as usize;

        let mut boxes = Vec::with_capacity(m * (ell_max + 1));
        let mut strips = Vec::with_capacity(ell_max + 1);
        let mut base = 1i64;
        for row in &rows {
            let l = row.layer;
            let t = row.triple;
            let height = rule.rescaled(lambda.powf(-(l as f64) / 2.0));
            let width = rule.rescaled(t.g);
            let act_width = if l == 0 { rule.rescaled(gap / 2.0) } else { rule.rescaled(gap * rows[l - 1].triple.h) };
            for k in 1..=m {
                let kf = k as f64;
                let x = rule.rescaled((kf - 1.0) * t.g - kf * t.h + row.s);
                let y = base + (k as i64 - 1) * height;
                let rect = Rect::new(x, y, width, height);
                let activation = Rect::new(x + width, y, act_width, height);
                boxes.push(ScaffoldBox { layer: l, index: k, rect, activation });
            }
            strips.push((base, m as i64 * height));
            base += m as i64 * height;
        }

        let (cx, cy) = center;
        let place = |r: Rect| if transposed { r.reflected() } else { r }.translated(cx, cy);
        for b in &mut boxes {
            b.rect = place(b.rect);
            b.activation = place(b.activation);
        }
        for s in &mut strips {
            let r = place(Rect::new(0, s.0, 1, s.1));
            *s = (r.y, r.height);
        }
        Ok(Self { center, transposed, params, rule, sigma: cfg.sigma(), ell_max, boxes, strips, rows })
    }

    pub fn layer_boxes(&self, layer: usize) -> impl Iterator<Item = &ScaffoldBox> {
        self.boxes.iter().filter(move |b| b.layer == layer)
    }

    /// Total number of rows through the top layer.
    pub fn total_height(&self) -> i64 {
        self.strips.iter().map(|s| s.1).sum()
    }

    /// Smallest rectangle holding every box and activation region.
    pub fn bounds(&self) -> Rect {
        self.boxes.iter().fold(self.boxes[0].rect, |acc, b| acc.union(&b.rect).union(&b.activation))
    }

    /// Time (continuum units times the scale) red must not beat to reach layer `l`:
    /// `g_l + (alpha_bar - alpha) h_{l-1}`, or `g_0 + (alpha_bar - alpha)/2` at the bottom.
    pub fn layer_threshold(&self, l: usize) -> f64 {
        let gap = self.params.alpha_bar - self.params.alpha;
        let extra = if l == 0 { gap / 2.0 } else { gap * self.rows[l - 1].triple.h };
        (self.rows[l].triple.g + extra) * self.rule.scale
    }
}
