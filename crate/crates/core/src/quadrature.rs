//! Globally adaptive Gauss-Kronrod quadrature.
//!
//! A 21-point Kronrod rule with its embedded 10-point Gauss rule estimates
//! each panel; the panel with the largest error estimate is bisected until the
//! summed error meets `max(abs_tol, rel_tol * |I|)`. Semi-infinite ranges are
//! mapped onto `(0, 1]` with `x = a + (1 - t) / t`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_867_376,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and the outer split radius for planar integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Radius (m) separating the finite adaptive panel set from the mapped
    /// semi-infinite tail of radial integrals.
    pub truncation_radius: f64,
    /// Panel budget per one-dimensional integral.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-8,
            truncation_radius: 1_000.0,
            max_subdivisions: 2_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.truncation_radius > 0.0) {
            return Err(Error::Domain(format!("invalid quadrature spec {self:?}")));
        }
        Ok(())
    }

    /// Same spec with both tolerances scaled, for nested integrals.
    pub fn tighter(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }
}

/// Result of a one-dimensional integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutput {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

impl QuadOutput {
    const ZERO: QuadOutput = QuadOutput {
        value: 0.0,
        abs_error: 0.0,
        evaluations: 0,
        subdivisions: 0,
    };

    fn add(self, other: QuadOutput) -> QuadOutput {
        QuadOutput {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
            subdivisions: self.subdivisions + other.subdivisions,
        }
    }
}

struct Panel {
    lower: f64,
    upper: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let error = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    Panel {
        lower: a,
        upper: b,
        value,
        error,
    }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadOutput> {
    if a == b {
        return Ok(QuadOutput::ZERO);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("finite interval required, got [{a}, {b}]")));
    }
    let first = kronrod21(&f, a, b);
    let mut value = first.value;
    let mut error = first.error;
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let target = |v: f64| spec.abs_tol.max(spec.rel_tol * v.abs());
    let mut subdivisions = 1;
    while error > target(value) {
        if subdivisions >= spec.max_subdivisions || !value.is_finite() {
            return Err(Error::Quadrature {
                lower: a,
                upper: b,
                estimate: value,
                abs_error: error,
                subdivisions,
                evaluations,
            });
        }
        let worst = heap.pop().expect("panel heap is never empty");
        let mid = 0.5 * (worst.lower + worst.upper);
        // Panels narrower than the floating-point resolution cannot improve.
        if mid <= worst.lower || mid >= worst.upper {
            return Err(Error::Quadrature {
                lower: a,
                upper: b,
                estimate: value,
                abs_error: error,
                subdivisions,
                evaluations,
            });
        }
        let left = kronrod21(&f, worst.lower, mid);
        let right = kronrod21(&f, mid, worst.upper);
        evaluations += 42;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-sum occasionally so cancellation in the running totals cannot drift.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    Ok(QuadOutput {
        value,
        abs_error: error,
        evaluations,
        subdivisions,
    })
}

/// Integrates `f` over `[a, b]`, splitting at the given interior breakpoints.
/// Breakpoints outside `(a, b)` are ignored.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadOutput> {
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = QuadOutput::ZERO;
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        total = total.add(integrate(&f, lo, hi, spec)?);
        lo = hi;
    }
    Ok(total)
}

/// Integrates `f` over `[a, inf)` through the map `x = a + (1 - t) / t`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, spec: &QuadratureSpec) -> Result<QuadOutput> {
    let mapped = |t: f64| {
        let x = a + (1.0 - t) / t;
        let v = f(x) / (t * t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, spec)
}

/// Integrates a radial integrand over `[r0, inf)`: adaptively on
/// `[r0, R]` (with optional breakpoints) and through the mapped rule on the
/// tail beyond `R = max(r0, spec.truncation_radius)`.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    f: F,
    r0: f64,
    breakpoints: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadOutput> {
    let split = spec.truncation_radius.max(r0);
    let head = integrate_pieces(&f, r0, split, breakpoints, spec)?;
    let tail = integrate_to_infinity(&f, split, spec)?;
    Ok(head.add(tail))
}
