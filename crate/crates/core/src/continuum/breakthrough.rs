use crate::error::{Error, Result};

/// Horizontal segment `[left, right]` at height `level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub level: f64,
    pub left: f64,
    pub right: f64,
}

impl Segment {
    pub fn new(level: f64, left: f64, right: f64) -> Result<Self> {
        if !(level.is_finite() && left.is_finite() && right.is_finite()) || left > right {
            return Err(Error::invalid(format!("bad segment [{left}, {right}] at level {level}")));
        }
        Ok(Self { level, left, right })
    }

    pub fn scaled(&self, c: f64) -> Segment {
        Segment { level: self.level * c, left: self.left * c, right: self.right * c }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakthrough {
    /// Least cost for red to get above every obstacle.
    pub time: f64,
    /// Horizontal extent reachable above the obstacles at that cost.
    pub extent: (f64, f64),
}

/// Groups obstacles by level (ascending) and merges overlapping open intervals.
pub(crate) fn blocked_levels(obstacles: &[Segment]) -> Vec<(f64, Vec<(f64, f64)>)> {
    let mut sorted: Vec<Segment> = obstacles.iter().copied().filter(|s| s.left < s.right).collect();
    sorted.sort_by(|a, b| a.level.total_cmp(&b.level).then(a.left.total_cmp(&b.left)));
    let mut out: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for s in sorted {
        match out.last_mut() {
            Some((lvl, ivs)) if *lvl == s.level => match ivs.last_mut() {
                // Open intervals that only touch leave their shared endpoint free.
                Some(last) if s.left < last.1 => last.1 = last.1.max(s.right),
                _ => ivs.push((s.left, s.right)),
            },
            _ => out.push((s.level, vec![(s.left, s.right)])),
        }
    }
    out
}

/// Piecewise-linear cost with slope `-alpha` left of the first breakpoint
/// and `+alpha` right of the last.
struct Cost {
    alpha: f64,
    pts: Vec<(f64, f64)>,
}

impl Cost {
    fn eval(&self, x: f64) -> f64 {
        let pts = &self.pts;
        let first = pts[0];
        let last = pts[pts.len() - 1];
        if x <= first.0 {
            return first.1 + self.alpha * (first.0 - x);
        }
        if x >= last.0 {
            return last.1 + self.alpha * (x - last.0);
        }
        let i = pts.partition_point(|p| p.0 <= x);
        let (a, b) = (pts[i - 1], pts[i]);
        if b.0 == a.0 {
            return a.1.min(b.1);
        }
        a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
    }

    /// Forces crossings of the open interval `(l, r)` through its endpoints.
    fn block(&mut self, l: f64, r: f64) {
        let (cl, cr) = (self.eval(l), self.eval(r));
        let apex = (cr - cl + self.alpha * (r + l)) / (2.0 * self.alpha);
        let mut mid = vec![(l, cl)];
        if apex > l && apex < r {
            mid.push((apex, cl + self.alpha * (apex - l)));
        }
        mid.push((r, cr));
        let lo = self.pts.partition_point(|p| p.0 < l);
        let hi = self.pts.partition_point(|p| p.0 <= r);
        self.pts.splice(lo..hi, mid);
    }
}

/// Least cost for red, starting on `red0`, to get above all obstacles.
///
/// Vertical moves are free and horizontal moves cost `alpha` per unit;
/// paths may not pass through the interior of an obstacle. Between two
/// obstacle levels nothing blocks horizontal motion, so an optimal path
/// climbs level by level and the cost above each level is
/// `min over free crossings y of c(y) + alpha |x - y|`.
pub fn breakthrough(obstacles: &[Segment], red0: Segment, alpha: f64) -> Result<Breakthrough> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(format!("alpha = {alpha} must be positive")));
    }
    if let Some(s) = obstacles.iter().find(|s| s.level <= red0.level) {
        return Err(Error::invalid(format!("obstacle at level {} is not above the red segment", s.level)));
    }
    let mut cost = Cost { alpha, pts: vec![(red0.left, 0.0), (red0.right, 0.0)] };
    for (_, ivs) in blocked_levels(obstacles) {
        for (l, r) in ivs {
            cost.block(l, r);
        }
    }
    let time = cost.pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * (1.0 + time.abs());
    let reach = cost.pts.iter().filter(|p| p.1 <= time + tol);
    let lo = reach.clone().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = reach.map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(Breakthrough { time, extent: (lo, hi) })
}

/// The staircase `[(k-1)g - kh, kg - kh] x {k}` for `k = 1..=m`.
pub fn canonical_obstacles(g: f64, h: f64, m: u32) -> Vec<Segment> {
    (1..=m)
        .map(|k| {
            let k = k as f64;
            Segment { level: k, left: (k - 1.0) * g - k * h, right: k * g - k * h }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::{advance_triple, initial_triple, ContinuumConfig};
    use approx::assert_relative_eq;

    #[test]
    fn no_obstacles() {
        let b = breakthrough(&[], Segment::new(0.0, 0.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(b.time, 0.0);
        assert_eq!(b.extent, (0.0, 1.0));
    }

    #[test]
    fn canonical_staircase_costs_alpha_h() {
        for (a, m) in [(1.0, 3u32), (0.5, 5), (0.7, 4)] {
            let cfg = ContinuumConfig::new(a, a * 1.5, m).unwrap();
            let mut t = initial_triple(&cfg).unwrap();
            for _ in 0..4 {
                let obs = canonical_obstacles(t.g, t.h, m);
                let b = breakthrough(&obs, Segment::new(0.0, 0.0, t.f).unwrap(), a).unwrap();
                assert_relative_eq!(b.time, a * t.h, max_relative = 1e-12);
                assert_relative_eq!(b.extent.0, -t.h, max_relative = 1e-12);
                assert_relative_eq!(b.extent.1, t.f + t.h, max_relative = 1e-12);
                t = advance_triple(&t, &cfg).unwrap();
            }
        }
    }

    #[test]
    fn single_wall_centered() {
        // Wall [-1, 3] over red [0, 1]: go around the left end at cost 1.
        let obs = [Segment::new(1.0, -1.0, 3.0).unwrap()];
        let b = breakthrough(&obs, Segment::new(0.0, 0.0, 1.0).unwrap(), 2.0).unwrap();
        assert_relative_eq!(b.time, 2.0);
        assert_eq!(b.extent, (-1.0, -1.0));
    }

    #[test]
    fn touching_intervals_leave_gap() {
        let obs = [Segment::new(1.0, -5.0, 0.5).unwrap(), Segment::new(1.0, 0.5, 5.0).unwrap()];
        let b = breakthrough(&obs, Segment::new(0.0, 0.0, 1.0).unwrap(), 1.0).unwrap();
        assert_eq!(b.time, 0.0);
        let levels = blocked_levels(&[Segment::new(1.0, 0.0, 2.0).unwrap(), Segment::new(1.0, 1.0, 3.0).unwrap()]);
        assert_eq!(levels, vec![(1.0, vec![(0.0, 3.0)])]);
    }

    #[test]
    fn obstacle_below_red_rejected() {
        let obs = [Segment::new(0.0, 0.0, 1.0).unwrap()];
        assert!(breakthrough(&obs, Segment::new(0.0, 0.0, 1.0).unwrap(), 1.0).is_err());
        assert!(Segment::new(1.0, 2.0, 1.0).is_err());
    }
}
