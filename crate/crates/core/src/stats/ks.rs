use crate::error::{Error, Result};

/// Minimum sample size for any test.
pub const MIN_SAMPLE: usize = 8;

/// Sorted sample of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
}

impl EmpiricalSample {
    /// Wraps an already sorted sample; unsorted input is a contract error.
    pub fn from_sorted(values: Vec<f64>) -> Result<Self> {
        check_len(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("sample contains non-finite values".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Contract("sample is not sorted ascending".into()));
        }
        Ok(Self { values })
    }

    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        check_len(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Contract("sample contains non-finite values".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn quantile(&self, p: f64) -> f64 {
        let idx = ((self.values.len() - 1) as f64 * p.clamp(0.0, 1.0)).round() as usize;
        self.values[idx]
    }
}

fn check_len(n: usize) -> Result<()> {
    if n < MIN_SAMPLE {
        return Err(Error::InsufficientData {
            got: n,
            need: MIN_SAMPLE,
        });
    }
    Ok(())
}

/// `D_n = max_i max(i/n - F(x_i), F(x_i) - (i-1)/n)`.
pub fn ks_one_sample(sample: &EmpiricalSample, cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sample.len() as f64;
    sample
        .values()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let i = i as f64;
            ((i + 1.0) / n - f).abs().max((f - i / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Two-sample statistic `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> f64 {
    let (x, y) = (a.values(), b.values());
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

pub fn uniform_cdf(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Pearson correlation; 0 when either input is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len()) as f64;
    if n < 2.0 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
