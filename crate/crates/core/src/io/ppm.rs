use std::io::Write;
use std::path::Path;

use crate::blocking::Rect;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, MAX_SPECIES};

pub const EMPTY_RGB: [u8; 3] = [255, 255, 255];

/// An RGB raster. Pixel row 0 is the top of the image and shows lattice row
/// 0, so lattice `y` grows downward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
    /// Pixels per lattice site along each axis.
    pub scale: usize,
}

impl Image {
    /// Final colors of `lattice`, each site drawn as a `scale x scale` block.
    pub fn from_lattice(lattice: &Lattice, scale: u32) -> Result<Self> {
        if scale == 0 {
            return Err(Error::invalid("render scale must be at least 1"));
        }
        let scale = scale as usize;
        let mut palette = [EMPTY_RGB; MAX_SPECIES + 1];
        for s in &lattice.model().species {
            palette[s.id as usize] = s.rgb;
        }
        let (w, h) = (lattice.width() * scale, lattice.height() * scale);
        let mut pixels = Vec::with_capacity(w * h);
        for y in 0..lattice.height() {
            let row: Vec<[u8; 3]> = (0..lattice.width())
                .flat_map(|x| std::iter::repeat_n(palette[lattice.color_at(x, y) as usize], scale))
                .collect();
            for _ in 0..scale {
                pixels.extend_from_slice(&row);
            }
        }
        Ok(Self { width: w, height: h, pixels, scale })
    }

    /// Outline of the sites in `rect`, given in lattice coordinates.
    pub fn outline(&mut self, rect: &Rect, rgb: [u8; 3]) {
        if rect.width <= 0 || rect.height <= 0 {
            return;
        }
        let s = self.scale as i64;
        let (x0, y0) = (rect.x * s, rect.y * s);
        let (x1, y1) = (rect.right() * s - 1, rect.top() * s - 1);
        for x in x0..=x1 {
            self.put(x, y0, rgb);
            self.put(x, y1, rgb);
        }
        for y in y0..=y1 {
            self.put(x0, y, rgb);
            self.put(x1, y, rgb);
        }
    }

    fn put(&mut self, x: i64, y: i64, rgb: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.pixels[y as usize * self.width + x as usize] = rgb;
        }
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    /// Binary PPM (`P6`, maxval 255).
    pub fn to_ppm(&self) -> Vec<u8> {
        let header = format!("P6\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + 3 * self.pixels.len());
        out.extend_from_slice(header.as_bytes());
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(&self.to_ppm())?;
        f.flush()?;
        Ok(())
    }
}
