//! Conditional transmission probability `h1(r_c, x)`: the probability that a
//! communication node at `x` transmits given that the tagged transmitter at
//! `(r_c, 0)` does.

use std::sync::atomic::{AtomicBool, Ordering};

/// Pair-conditional transmission frequencies binned by the distance between
/// the two transmitters. `values[i]` is the estimate at the bin centre
/// `(i + 0.5) * bin_width`; lookups interpolate linearly between centres.
#[derive(Debug, Default)]
pub struct H1Table {
    bin_width: f64,
    values: Vec<f64>,
    warned: AtomicBool,
}

impl Clone for H1Table {
    fn clone(&self) -> Self {
        Self {
            bin_width: self.bin_width,
            values: self.values.clone(),
            warned: AtomicBool::new(false),
        }
    }
}

impl PartialEq for H1Table {
    fn eq(&self, other: &Self) -> bool {
        self.bin_width == other.bin_width && self.values == other.values
    }
}

impl H1Table {
    /// Builds a table from per-bin `(hits, trials)` counts. Empty bins borrow
    /// the nearest populated bin; a table without any data is identically 1
    /// (no contention observed).
    pub fn from_counts(bin_width: f64, counts: &[(u64, u64)]) -> Self {
        assert!(bin_width > 0.0, "bin width must be positive");
        let raw: Vec<Option<f64>> = counts
            .iter()
            .map(|&(hits, trials)| (trials > 0).then(|| hits as f64 / trials as f64))
            .collect();
        let populated: Vec<usize> = (0..raw.len()).filter(|&i| raw[i].is_some()).collect();
        let values = if populated.is_empty() {
            vec![1.0; raw.len().max(1)]
        } else {
            (0..raw.len())
                .map(|i| {
                    raw[i].unwrap_or_else(|| {
                        let nearest = populated
                            .iter()
                            .min_by_key(|&&j| j.abs_diff(i))
                            .expect("non-empty");
                        raw[*nearest].expect("populated")
                    })
                })
                .collect()
        };
        Self::from_values(bin_width, values)
    }

    pub fn from_values(bin_width: f64, values: Vec<f64>) -> Self {
        assert!(bin_width > 0.0, "bin width must be positive");
        assert!(!values.is_empty(), "table needs at least one bin");
        let values = values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Self {
            bin_width,
            values,
            warned: AtomicBool::new(false),
        }
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Distance covered by the grid.
    pub fn extent(&self) -> f64 {
        self.bin_width * self.values.len() as f64
    }

    /// Value at the outermost bin, used for every distance beyond the grid.
    pub fn boundary_value(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    /// Interpolated value and whether `d` fell outside the sampled grid.
    pub fn value_at(&self, d: f64) -> (f64, bool) {
        let pos = d / self.bin_width - 0.5;
        let last = self.values.len() - 1;
        if pos <= 0.0 {
            return (self.values[0], d < 0.0);
        }
        if pos >= last as f64 {
            return (self.values[last], d > self.extent());
        }
        let i = pos.floor() as usize;
        let t = pos - i as f64;
        (self.values[i] * (1.0 - t) + self.values[i + 1] * t, false)
    }

    fn warn_once(&self, d: f64) {
        if !self.warned.swap(true, Ordering::Relaxed) {
            log::warn!(
                "h1 table queried at {d:.3} m outside its {:.3} m grid; clamping to the boundary value",
                self.extent()
            );
        }
    }
}

/// How `h1` is evaluated.
#[derive(Debug, Clone, Default, PartialEq)]
pub enum H1Strategy {
    /// Other transmitters are independent of the tagged one: `h1 = q_w`.
    #[default]
    Independent,
    /// Monte-Carlo calibrated pair-conditional frequencies.
    Table(H1Table),
}

impl H1Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            H1Strategy::Independent => "independent",
            H1Strategy::Table(_) => "table",
        }
    }
}

/// `h1(r_c, x)` for a node at `x`, with the receiver at the origin and the
/// tagged transmitter at `(r_c, 0)`. Table lookups outside the grid are
/// clamped to the boundary bin and logged once per table.
pub fn h1_conditional_map(strategy: &H1Strategy, q_w: f64, r_c: f64, x: (f64, f64)) -> f64 {
    match strategy {
        H1Strategy::Independent => q_w,
        H1Strategy::Table(t) => {
            let d = (x.0 - r_c).hypot(x.1);
            let (v, outside) = t.value_at(d);
            if outside {
                t.warn_once(d);
            }
            v
        }
    }
}
