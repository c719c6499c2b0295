/// Monte-Carlo statistic with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    /// Number of independent replications (or batches) behind the estimate.
    pub n: usize,
    pub ci95: (f64, f64),
}

impl Estimate {
    pub fn new(mean: f64, stderr: f64, n: usize) -> Self {
        let stderr = stderr.max(0.0);
        Self {
            mean,
            stderr,
            n,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
        }
    }

    /// Sample mean and standard error of i.i.d. replication values.
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self::new(f64::NAN, f64::NAN, 0);
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return Self::new(mean, 0.0, 1);
        }
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Self::new(mean, (var / n as f64).sqrt(), n)
    }

    /// Pooled ratio `sum(num) / sum(den)` over replications, with the
    /// delta-method standard error of a ratio estimator. A zero denominator
    /// yields a NaN mean.
    pub fn ratio(pairs: &[(f64, f64)]) -> Self {
        let n = pairs.len();
        let num: f64 = pairs.iter().map(|p| p.0).sum();
        let den: f64 = pairs.iter().map(|p| p.1).sum();
        if n == 0 || den <= 0.0 {
            return Self::new(f64::NAN, f64::NAN, n);
        }
        let q = num / den;
        if n == 1 {
            return Self::new(q, 0.0, 1);
        }
        let den_mean = den / n as f64;
        let ss: f64 = pairs.iter().map(|&(a, b)| (a - q * b).powi(2)).sum();
        let var = ss / ((n * (n - 1)) as f64 * den_mean * den_mean);
        Self::new(q, var.sqrt(), n)
    }

    pub fn half_width(&self) -> f64 {
        1.96 * self.stderr
    }

    /// True when the two 95% intervals overlap.
    pub fn overlaps(&self, other: &Estimate) -> bool {
        self.ci95.0 <= other.ci95.1 && other.ci95.0 <= self.ci95.1
    }

    /// Mean of two independent estimates, e.g. the same metric on two windows.
    pub fn average(a: &Estimate, b: &Estimate) -> Self {
        Self::new(
            0.5 * (a.mean + b.mean),
            0.5 * (a.stderr * a.stderr + b.stderr * b.stderr).sqrt(),
            a.n + b.n,
        )
    }
}
