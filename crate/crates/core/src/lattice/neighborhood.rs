use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice displacement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Offset {
    pub dx: i32,
    pub dy: i32,
}

impl Offset {
    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    /// L-infinity norm.
    pub fn max_norm(self) -> u32 {
        self.dx.unsigned_abs().max(self.dy.unsigned_abs())
    }

    pub fn l1_norm(self) -> u32 {
        self.dx.unsigned_abs() + self.dy.unsigned_abs()
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

impl From<(i32, i32)> for Offset {
    fn from((dx, dy): (i32, i32)) -> Self {
        Self { dx, dy }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// Finite set of offsets. An empty site `x` adopts a color when `x + o`
/// bears that color for some offset `o` in the set.
///
/// Offsets are kept deduplicated and sorted so iteration order never depends
/// on how the set was built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Offset>", into = "Vec<Offset>")]
pub struct Neighborhood {
    offsets: Vec<Offset>,
}

impl Neighborhood {
    pub fn from_offsets<I, O>(offsets: I) -> Result<Self>
    where
        I: IntoIterator<Item = O>,
        O: Into<Offset>,
    {
        let mut offsets: Vec<Offset> = offsets.into_iter().map(Into::into).collect();
        offsets.sort_unstable();
        offsets.dedup();
        if offsets.is_empty() {
            return Err(Error::invalid("neighborhood must contain at least one offset"));
        }
        Ok(Self { offsets })
    }

    /// Offsets along one axis. Undirected: every nonzero coordinate in
    /// `[-range, range]`; directed: only `1..=range`, so `(1, X, true)` is `{e1}`.
    pub fn line(range: u32, axis: Axis, directed: bool) -> Result<Self> {
        if range == 0 {
            return Err(Error::invalid("line neighborhood range must be at least 1"));
        }
        let r = range as i32;
        let lo = if directed { 1 } else { -r };
        let offsets = (lo..=r).filter(|&d| d != 0).map(|d| match axis {
            Axis::X => Offset::new(d, 0),
            Axis::Y => Offset::new(0, d),
        });
        Self::from_offsets(offsets)
    }

    /// All nonzero offsets with `|dx| + |dy| <= radius`.
    pub fn l1_ball(radius: u32) -> Result<Self> {
        if radius == 0 {
            return Err(Error::invalid("l1 ball radius must be at least 1"));
        }
        let r = radius as i32;
        let mut offsets = Vec::with_capacity((2 * radius * (radius + 1)) as usize);
        for dy in -r..=r {
            let span = r - dy.abs();
            for dx in -span..=span {
                if dx != 0 || dy != 0 {
                    offsets.push(Offset::new(dx, dy));
                }
            }
        }
        Self::from_offsets(offsets)
    }

    /// `{(0,0)}`: a species with this neighborhood never grows.
    pub fn inert() -> Self {
        Self { offsets: vec![Offset::new(0, 0)] }
    }

    pub fn offsets(&self) -> &[Offset] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn contains(&self, o: Offset) -> bool {
        self.offsets.binary_search(&o).is_ok()
    }

    /// Largest L-infinity norm over the offsets.
    pub fn max_norm(&self) -> u32 {
        self.offsets.iter().map(|o| o.max_norm()).max().unwrap_or(0)
    }

    /// True if every offset is `(0,0)`.
    pub fn is_inert(&self) -> bool {
        self.offsets.iter().all(|o| o.dx == 0 && o.dy == 0)
    }
}

impl TryFrom<Vec<Offset>> for Neighborhood {
    type Error = Error;

    fn try_from(v: Vec<Offset>) -> Result<Self> {
        Self::from_offsets(v)
    }
}

impl From<Neighborhood> for Vec<Offset> {
    fn from(n: Neighborhood) -> Self {
        n.offsets
    }
}
