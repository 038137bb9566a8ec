use std::collections::BTreeSet;

use super::scaffold::{BlockingScaffold, Rect};
use crate::error::{Error, Result};
use crate::lattice::rng::{hash, uniform, STREAM_FIELD};
use crate::lattice::Lattice;

/// Initially blue sites in world coordinates.
pub trait BlueField: Sync {
    fn is_blue(&self, x: i64, y: i64) -> bool;

    /// Blue sites inside `r`, row-major from the bottom-left.
    fn points_in(&self, r: &Rect) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for y in r.y..r.top() {
            for x in r.x..r.right() {
                if self.is_blue(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

/// Explicit finite set of blue sites.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointSet {
    points: BTreeSet<(i64, i64)>,
}

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, x: i64, y: i64) -> bool {
        self.points.insert((x, y))
    }

    pub fn remove(&mut self, x: i64, y: i64) -> bool {
        self.points.remove(&(x, y))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.points.iter().copied()
    }

    /// Image under `y -> -y`, then shifted by `(dx, dy)`.
    pub fn reflected(&self, dx: i64, dy: i64) -> Self {
        self.iter().map(|(x, y)| (x + dx, -y + dy)).collect()
    }
}

impl FromIterator<(i64, i64)> for PointSet {
    fn from_iter<I: IntoIterator<Item = (i64, i64)>>(iter: I) -> Self {
        Self { points: iter.into_iter().collect() }
    }
}

impl BlueField for PointSet {
    fn is_blue(&self, x: i64, y: i64) -> bool {
        self.points.contains(&(x, y))
    }

    fn points_in(&self, r: &Rect) -> Vec<(i64, i64)> {
        let mut v: Vec<_> = self.points.iter().copied().filter(|&(x, y)| r.contains(x, y)).collect();
        v.sort_by_key(|&(x, y)| (y, x));
        v
    }
}

/// Dense window of blue flags; everything outside the window is not blue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub origin: (i64, i64),
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(origin: (i64, i64), width: usize, height: usize) -> Self {
        Self { origin, width, height, bits: vec![false; width * height] }
    }

    /// Sites of species `id` in `lattice`, with lattice site `(0, 0)` at `origin`.
    pub fn from_lattice(lattice: &Lattice, id: u8, origin: (i64, i64)) -> Self {
        let bits = lattice.colors().iter().map(|&c| c == id).collect();
        Self { origin, width: lattice.width(), height: lattice.height(), bits }
    }

    pub fn set(&mut self, x: i64, y: i64, blue: bool) -> Result<()> {
        let i = self.slot(x, y).ok_or_else(|| Error::invalid(format!("({x},{y}) outside the bitmap")))?;
        self.bits[i] = blue;
        Ok(())
    }

    fn slot(&self, x: i64, y: i64) -> Option<usize> {
        let (i, j) = (x - self.origin.0, y - self.origin.1);
        (i >= 0 && j >= 0 && (i as usize) < self.width && (j as usize) < self.height)
            .then(|| j as usize * self.width + i as usize)
    }
}

impl BlueField for Bitmap {
    fn is_blue(&self, x: i64, y: i64) -> bool {
        self.slot(x, y).is_some_and(|i| self.bits[i])
    }
}

/// Independent Bernoulli(`density`) blue sites over the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BernoulliField {
    pub seed: u64,
    pub density: f64,
}

impl BlueField for BernoulliField {
    fn is_blue(&self, x: i64, y: i64) -> bool {
        uniform(self.seed, STREAM_FIELD, x, y, 0) < self.density
    }
}

/// The sparsest field making `scaffolds` successful: one blue site per
/// activation region (`rho = 1`), or one site in each of `rho` consecutive
/// rows. Positions are drawn from `seed`.
pub fn hand_built_field(scaffolds: &[BlockingScaffold], rho: u32, seed: u64) -> Result<PointSet> {
    let rho = rho.max(1) as i64;
    let mut field = PointSet::new();
    for (s, sc) in scaffolds.iter().enumerate() {
        for (b, bx) in sc.boxes.iter().enumerate() {
            let a = bx.activation;
            if a.height < rho || a.width < 1 {
                return Err(Error::Constraint(format!(
                    "activation region of layer {} box {} is {}x{}, too small for {rho} rows",
                    bx.layer, bx.index, a.width, a.height
                )));
            }
            let draw =
                |salt: i64, n: i64| (hash(seed, STREAM_FIELD, s as i64, b as i64, salt as u64) % n as u64) as i64;
            let y0 = a.y + draw(-1, a.height - rho + 1);
            for j in 0..rho {
                field.insert(a.x + draw(j, a.width), y0 + j);
            }
        }
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_set_queries() {
        let f: PointSet = [(0, 0), (2, 1), (5, 5)].into_iter().collect();
        assert!(f.is_blue(2, 1));
        assert!(!f.is_blue(1, 2));
        assert_eq!(f.points_in(&Rect::new(0, 0, 3, 2)), vec![(0, 0), (2, 1)]);
        assert!(f.reflected(1, 0).is_blue(3, -1));
    }

    #[test]
    fn bitmap_queries() {
        let mut b = Bitmap::new((-2, -2), 4, 4);
        b.set(-1, 1, true).unwrap();
        assert!(b.is_blue(-1, 1));
        assert!(!b.is_blue(10, 10));
        assert!(b.set(3, 3, true).is_err());
        assert_eq!(b.points_in(&Rect::new(-5, -5, 10, 10)), vec![(-1, 1)]);
    }

    #[test]
    fn bernoulli_density() {
        let f = BernoulliField { seed: 3, density: 0.2 };
        let pts = f.points_in(&Rect::new(0, 0, 300, 300)).len() as f64;
        let n = 90_000.0;
        assert!((pts - 0.2 * n).abs() < 4.0 * (n * 0.2 * 0.8f64).sqrt());
    }
}
