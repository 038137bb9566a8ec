use crate::error::{Error, Result};

/// Red inverse speed, slowed inverse speed and layers per block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumConfig {
    pub alpha: f64,
    pub alpha_bar: f64,
    pub m: u32,
}

impl ContinuumConfig {
    pub fn new(alpha: f64, alpha_bar: f64, m: u32) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::invalid(format!("alpha = {alpha} must be positive")));
        }
        if !(alpha_bar > alpha) || !alpha_bar.is_finite() {
            return Err(Error::invalid(format!("alpha_bar = {alpha_bar} must exceed alpha = {alpha}")));
        }
        if !(m as f64 * alpha > 2.0) {
            return Err(Error::Constraint(format!("m = {m} must exceed 2/alpha = {}", 2.0 / alpha)));
        }
        Ok(Self { alpha, alpha_bar, m })
    }

    pub fn lambda(&self) -> f64 {
        lambda_of(self.m, self.alpha)
    }

    /// `2 m sqrt(lambda) / (sqrt(lambda) - 1)`.
    pub fn sigma(&self) -> f64 {
        let s = self.lambda().sqrt();
        2.0 * self.m as f64 * s / (s - 1.0)
    }

    /// The linear map `(f, g) -> (f', g')`.
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        let m = self.m as f64;
        let a = self.alpha;
        [[1.0 - 2.0 / (m + 1.0), 2.0 * m / (m + 1.0)], [-a / (m + 1.0), (m + a * m + 1.0) / (m + 1.0)]]
    }
}

/// Growth ratio `(m + alpha m - 1) / (m + 1)`.
pub fn lambda_of(m: u32, alpha: f64) -> f64 {
    let m = m as f64;
    (m + alpha * m - 1.0) / (m + 1.0)
}

/// Roots of the characteristic polynomial of a 2x2 matrix, ascending.
pub fn eigenvalues(a: [[f64; 2]; 2]) -> Result<(f64, f64)> {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = tr * tr - 4.0 * det;
    if disc < 0.0 {
        return Err(Error::invalid("complex eigenvalues"));
    }
    let r = disc.sqrt();
    Ok(((tr - r) / 2.0, (tr + r) / 2.0))
}

/// Red interval length `f`, blue interval length `g` and overhang `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

impl Triple {
    /// Relative violation of `m (g - h) = f + h`.
    pub fn constraint_residual(&self, m: u32) -> f64 {
        let lhs = m as f64 * (self.g - self.h);
        let rhs = self.f + self.h;
        (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE)
    }

    pub fn scaled(&self, c: f64) -> Triple {
        Triple { f: c * self.f, g: c * self.g, h: c * self.h }
    }
}

/// `(1, alpha/2, (m alpha/2 - 1)/(m + 1))`.
pub fn initial_triple(cfg: &ContinuumConfig) -> Result<Triple> {
    let m = cfg.m as f64;
    let h = (m * cfg.alpha / 2.0 - 1.0) / (m + 1.0);
    if !(h > 0.0) {
        return Err(Error::Constraint(format!("overhang h = {h} is not positive")));
    }
    Ok(Triple { f: 1.0, g: cfg.alpha / 2.0, h })
}

const RECURRENCE_TOL: f64 = 1e-9;

/// One step of the recurrence: `f' = f + 2h`, `g' = g + alpha h`, and `h'`
/// solving `m (g' - h') = f' + h'`.
pub fn advance_triple(t: &Triple, cfg: &ContinuumConfig) -> Result<Triple> {
    if t.constraint_residual(cfg.m) > RECURRENCE_TOL {
        return Err(Error::Constraint(format!("triple {t:?} violates m(g-h) = f+h")));
    }
    if (t.g - cfg.alpha * t.f / 2.0).abs() > RECURRENCE_TOL * t.g.abs() {
        return Err(Error::Constraint(format!("triple {t:?} is off the eigenvector g = alpha f / 2")));
    }
    let m = cfg.m as f64;
    let f = t.f + 2.0 * t.h;
    let g = t.g + cfg.alpha * t.h;
    let h = (m * g - f) / (m + 1.0);
    Ok(Triple { f, g, h })
}

/// One row of the layer table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerRow {
    pub layer: usize,
    pub triple: Triple,
    /// Horizontal shift of the layer.
    pub s: f64,
}

/// Triples and shifts for layers `0..=layers`, with `S_0 = 0` and
/// `S_{l+1} = S_l - h_l`.
pub fn layer_table(cfg: &ContinuumConfig, layers: usize) -> Result<Vec<LayerRow>> {
    let mut rows = Vec::with_capacity(layers + 1);
    let mut t = initial_triple(cfg)?;
    let mut s = 0.0;
    for layer in 0..=layers {
        rows.push(LayerRow { layer, triple: t, s });
        s -= t.h;
        if layer < layers {
            t = advance_triple(&t, cfg)?;
        }
    }
    Ok(rows)
}
