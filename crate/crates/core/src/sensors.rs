//! Sensor deployments and the bucket index used for detection queries.

use alloc::vec::Vec;

use crate::error::invalid;
use crate::geom::{Point2, Rect};
use crate::{math, rng, Error, Result};

/// An immutable set of sensor positions inside a region.
#[derive(Debug, Clone)]
pub struct SensorField {
    positions: Vec<Point2>,
    seed: Option<u64>,
    region: Rect,
    index: SensorIndex,
}

impl PartialEq for SensorField {
    fn eq(&self, other: &Self) -> bool {
        self.positions == other.positions && self.region == other.region && self.seed == other.seed
    }
}

impl SensorField {
    /// Wraps explicit positions; every position must lie in `region`.
    pub fn new(positions: Vec<Point2>, region: Rect, seed: Option<u64>) -> Result<Self> {
        check_region(&region)?;
        if let Some(p) = positions
            .iter()
            .find(|p| !p.is_finite() || !region.contains(**p))
        {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let index = SensorIndex::build(&positions, region);
        Ok(Self {
            positions,
            seed,
            region,
            index,
        })
    }

    /// Positions with the region taken as their bounding rectangle.
    pub fn from_positions(positions: Vec<Point2>) -> Result<Self> {
        let region = Rect::bounding(&positions).ok_or(Error::EmptySet)?;
        if let Some(p) = positions.iter().find(|p| !p.is_finite()) {
            return Err(Error::OutOfBounds { x: p.x, y: p.y });
        }
        let index = SensorIndex::build(&positions, region);
        Ok(Self {
            positions,
            seed: None,
            region,
            index,
        })
    }

    /// A field with no sensors.
    pub fn empty(region: Rect) -> Result<Self> {
        Self::new(Vec::new(), region, None)
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn region(&self) -> Rect {
        self.region
    }

    pub fn density_per_km2(&self) -> f64 {
        self.positions.len() as f64 / self.region.area()
    }

    /// Lowest sensor index within the closed disk, if any.
    pub fn first_within(&self, center: Point2, radius: f64) -> Option<usize> {
        self.index.first_within(&self.positions, center, radius)
    }

    /// Nearest sensor and its distance.
    pub fn nearest(&self, p: Point2) -> Option<(usize, f64)> {
        self.index.nearest(&self.positions, p)
    }
}

fn check_region(region: &Rect) -> Result<()> {
    if region.min.is_finite()
        && region.max.is_finite()
        && region.width() > 0.0
        && region.height() > 0.0
    {
        Ok(())
    } else {
        Err(invalid("region", "extents must be finite and > 0"))
    }
}

/// `count` independent uniform positions in `region`.
///
/// Uses [`crate::rng`]: ChaCha8 seeded from `seed`, two 53-bit doubles per
/// sensor (x then y). For the same seed, a smaller deployment is a prefix of
/// a larger one.
pub fn deploy_uniform(count: usize, region: Rect, seed: u64) -> Result<SensorField> {
    check_region(&region)?;
    let mut r = rng::seeded(seed);
    let positions = (0..count)
        .map(|_| {
            let x = rng::uniform(&mut r, region.min.x, region.max.x);
            let y = rng::uniform(&mut r, region.min.y, region.max.y);
            Point2::new(x, y)
        })
        .collect();
    SensorField::new(positions, region, Some(seed))
}

const MAX_CELLS: usize = 1 << 22;

/// Uniform bucket grid sized to the mean inter-sensor spacing. Buckets are
/// stored CSR-style with sensor indices ascending inside each bucket.
#[derive(Debug, Clone)]
struct SensorIndex {
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    members: Vec<u32>,
}

impl SensorIndex {
    fn build(positions: &[Point2], region: Rect) -> Self {
        let n = positions.len();
        let (w, h) = (region.width().max(1e-12), region.height().max(1e-12));
        let mut cell = if n == 0 {
            w.max(h)
        } else {
            math::sqrt(w * h / n as f64)
        };
        // keep the bucket count bounded for huge counts or thin regions
        while (math::ceil(w / cell) * math::ceil(h / cell)) as usize > MAX_CELLS.max(1) {
            cell *= 2.0;
        }
        let nx = (math::ceil(w / cell) as usize).max(1);
        let ny = (math::ceil(h / cell) as usize).max(1);
        let mut index = Self {
            origin: region.min,
            cell,
            nx,
            ny,
            starts: alloc::vec![0; nx * ny + 1],
            members: alloc::vec![0; n],
        };
        let cells: Vec<usize> = positions.iter().map(|p| index.cell_id(*p)).collect();
        for &c in &cells {
            index.starts[c + 1] += 1;
        }
        for i in 0..nx * ny {
            index.starts[i + 1] += index.starts[i];
        }
        let mut fill: Vec<u32> = index.starts[..nx * ny].to_vec();
        for (i, &c) in cells.iter().enumerate() {
            index.members[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        index
    }

    fn coord(&self, v: f64, origin: f64, n: usize) -> usize {
        let k = math::floor((v - origin) / self.cell);
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(n - 1)
        }
    }

    fn cell_id(&self, p: Point2) -> usize {
        self.coord(p.y, self.origin.y, self.ny) * self.nx + self.coord(p.x, self.origin.x, self.nx)
    }

    fn bucket(&self, ix: usize, iy: usize) -> &[u32] {
        let c = iy * self.nx + ix;
        &self.members[self.starts[c] as usize..self.starts[c + 1] as usize]
    }

    fn first_within(&self, positions: &[Point2], center: Point2, radius: f64) -> Option<usize> {
        if positions.is_empty() || !(radius >= 0.0) || !center.is_finite() {
            return None;
        }
        let r2 = radius * radius;
        let x0 = self.coord(center.x - radius, self.origin.x, self.nx);
        let x1 = self.coord(center.x + radius, self.origin.x, self.nx);
        let y0 = self.coord(center.y - radius, self.origin.y, self.ny);
        let y1 = self.coord(center.y + radius, self.origin.y, self.ny);
        let mut best: Option<u32> = None;
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                for &i in self.bucket(ix, iy) {
                    if best.is_some_and(|b| i >= b) {
                        break;
                    }
                    if positions[i as usize].distance_sq(center) <= r2 {
                        best = Some(i);
                        break;
                    }
                }
            }
        }
        best.map(|i| i as usize)
    }

    fn nearest(&self, positions: &[Point2], p: Point2) -> Option<(usize, f64)> {
        if positions.is_empty() {
            return None;
        }
        let (cx, cy) = (
            self.coord(p.x, self.origin.x, self.nx) as isize,
            self.coord(p.y, self.origin.y, self.ny) as isize,
        );
        let mut best: Option<(usize, f64)> = None;
        let max_ring = self.nx.max(self.ny) as isize;
        for ring in 0..=max_ring {
            // every point in ring k is at least (k - 1) cells away
            if let Some((_, d2)) = best {
                let reach = (ring - 1).max(0) as f64 * self.cell;
                if reach * reach > d2 {
                    break;
                }
            }
            for iy in (cy - ring)..=(cy + ring) {
                for ix in (cx - ring)..=(cx + ring) {
                    let on_ring = (iy - cy).abs() == ring || (ix - cx).abs() == ring;
                    if !on_ring
                        || ix < 0
                        || iy < 0
                        || ix >= self.nx as isize
                        || iy >= self.ny as isize
                    {
                        continue;
                    }
                    for &i in self.bucket(ix as usize, iy as usize) {
                        let d2 = positions[i as usize].distance_sq(p);
                        if best.is_none_or(|(bi, bd)| d2 < bd || (d2 == bd && (i as usize) < bi)) {
                            best = Some((i as usize, d2));
                        }
                    }
                }
            }
        }
        best.map(|(i, d2)| (i, math::sqrt(d2)))
    }
}
