use super::certificate::AxisCheck;
use super::field::{hand_built_field, PointSet};
use super::scaffold::{BlockingScaffold, Rect, ScaffoldParams};
use crate::error::Result;

/// One scaffold centered at rescaled `(0, -sigma)`, red confined to the cone
/// with apex `g_1 / alpha` further down, the sparsest successful blue field,
/// and the axis segment `[-C/p, C/p] x {0}` checked through time `C/p`.
#[derive(Debug, Clone)]
pub struct AxisScenario {
    pub scaffold: BlockingScaffold,
    pub apex: (i64, i64),
    pub field: PointSet,
    pub axis: AxisCheck,
}

impl AxisScenario {
    pub fn build(params: ScaffoldParams, c: f64, seed: u64) -> Result<Self> {
        let probe = BlockingScaffold::build((0, 0), params, false)?;
        let cy = probe.rule.rescaled(-probe.sigma);
        let scaffold = BlockingScaffold::build((0, cy), params, false)?;
        let apex = (0, cy - scaffold.rule.rescaled(params.cone_drop()?));
        let field = hand_built_field(std::slice::from_ref(&scaffold), params.rho, seed)?;
        let reach = (c / params.p).floor() as i64;
        let axis = AxisCheck { y: 0, x_lo: -reach, x_hi: reach, time: c / params.p };
        Ok(Self { scaffold, apex, field, axis })
    }

    /// Removes the blue sites in the activation region of box `(layer, index)`.
    /// Returns the number removed, or `None` if there is no such box.
    pub fn sabotage(&mut self, layer: usize, index: usize) -> Option<usize> {
        let b = self.scaffold.boxes.iter().find(|b| b.layer == layer && b.index == index)?;
        let a: Rect = b.activation;
        let doomed: Vec<(i64, i64)> = self.field.iter().filter(|&(x, y)| a.contains(x, y)).collect();
        for &(x, y) in &doomed {
            self.field.remove(x, y);
        }
        Some(doomed.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::is_successful;

    #[test]
    fn sabotage_breaks_success() {
        let params = ScaffoldParams { p: 0.01, alpha: 1.0, alpha_bar: 1.5, m: 3, rho: 1, ell_max: Some(3) };
        let mut s = AxisScenario::build(params, 1.0, 2).unwrap();
        assert!(is_successful(&s.scaffold, &s.field, 1).success);
        assert!(s.scaffold.bounds().top() <= 0);
        assert!(s.apex.1 < s.scaffold.bounds().y);
        assert_eq!(s.sabotage(1, 2), Some(1));
        assert_eq!(is_successful(&s.scaffold, &s.field, 1).first_failure, Some((1, 2)));
        assert_eq!(s.sabotage(9, 1), None);
    }
}
