/// Uniform bucket grid over a window for fixed-radius neighbour queries.
#[derive(Debug, Clone)]
pub(crate) struct Grid {
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<u32>>,
}

impl Grid {
    /// `cell` should be at least the query radius; it is capped so the grid
    /// never holds more than ~4M buckets.
    pub fn new(width: f64, height: f64, cell: f64, points: impl Iterator<Item = (u32, (f64, f64))>) -> Self {
        let mut cell = cell.max(1e-9);
        while (width / cell).ceil() * (height / cell).ceil() > 4.0e6 {
            cell *= 2.0;
        }
        let cols = ((width / cell).ceil() as usize).max(1);
        let rows = ((height / cell).ceil() as usize).max(1);
        let mut buckets = vec![Vec::new(); cols * rows];
        let mut g = Grid {
            cell,
            cols,
            rows,
            buckets: Vec::new(),
        };
        for (idx, pos) in points {
            let (c, r) = g.cell_of(pos);
            buckets[r * cols + c].push(idx);
        }
        g.buckets = buckets;
        g
    }

    fn cell_of(&self, (x, y): (f64, f64)) -> (usize, usize) {
        let c = ((x / self.cell).floor().max(0.0) as usize).min(self.cols - 1);
        let r = ((y / self.cell).floor().max(0.0) as usize).min(self.rows - 1);
        (c, r)
    }

    /// Calls `visit` for every stored index in cells intersecting the disc of
    /// `radius` around `center`. Callers filter by exact distance. Returning
    /// `false` stops the scan.
    pub fn visit_near(&self, center: (f64, f64), radius: f64, mut visit: impl FnMut(u32) -> bool) {
        let span = (radius / self.cell).ceil() as isize;
        let (c0, r0) = self.cell_of(center);
        let (c0, r0) = (c0 as isize, r0 as isize);
        for r in (r0 - span).max(0)..=(r0 + span).min(self.rows as isize - 1) {
            for c in (c0 - span).max(0)..=(c0 + span).min(self.cols as isize - 1) {
                for &idx in &self.buckets[r as usize * self.cols + c as usize] {
                    if !visit(idx) {
                        return;
                    }
                }
            }
        }
    }
}
