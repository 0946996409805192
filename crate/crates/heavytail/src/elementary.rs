//! Base variates: uniform-driven inverse-CDF samplers for the exponential,
//! Weibull and Laplace laws, the ziggurat normal, and the Weibull survival
//! function. Inverse-CDF sampling keeps every draw monotone in the underlying
//! uniform, which makes batches reproducible draw for draw.

use crate::error::{Error, Result};
use crate::rng::RngState;

/// Shape parameter of a Weibull law with survival `exp(-x^gamma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeibullParams {
    gamma: f64,
}

impl WeibullParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!(
                "weibull shape gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(WeibullParams { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Standard normal draw.
pub fn sample_normal(rng: &mut RngState) -> f64 {
    rng.standard_normal()
}

/// Standard exponential draw, `-ln U`.
pub fn sample_exponential(rng: &mut RngState) -> f64 {
    -rng.open01().ln()
}

/// Weibull draw by inverse CDF, `(-ln U)^{1/gamma}`.
pub fn sample_weibull(p: &WeibullParams, rng: &mut RngState) -> f64 {
    (-rng.open01().ln()).powf(1.0 / p.gamma)
}

/// Standard Laplace draw (density `e^{-|x|}/2`) by inverse CDF.
pub fn sample_laplace(rng: &mut RngState) -> f64 {
    let u = rng.open01();
    if u < 0.5 {
        (2.0 * u).ln()
    } else {
        -(2.0 * (1.0 - u)).ln()
    }
}

/// Weibull survival function `exp(-x^gamma)` for `x >= 0`.
pub fn weibull_sf(p: &WeibullParams, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("weibull survival needs x >= 0, got {x}")));
    }
    Ok((-x.powf(p.gamma)).exp())
}

pub fn exponential_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x).exp_m1()
    }
}

pub fn laplace_pdf(x: f64) -> f64 {
    0.5 * (-x.abs()).exp()
}

pub fn laplace_cdf(x: f64) -> f64 {
    if x < 0.0 {
        0.5 * x.exp()
    } else {
        1.0 - 0.5 * (-x).exp()
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// Normal survival function, accurate in the far right tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::draw_batch_seq;

    #[test]
    fn weibull_rejects_nonpositive_shape() {
        assert!(WeibullParams::new(0.0).is_err());
        assert!(WeibullParams::new(-1.0).is_err());
        assert!(WeibullParams::new(f64::NAN).is_err());
    }

    #[test]
    fn weibull_sf_values() {
        let w1 = WeibullParams::new(1.0).unwrap();
        let w2 = WeibullParams::new(2.0).unwrap();
        assert_eq!(weibull_sf(&w1, 0.0).unwrap(), 1.0);
        assert!((weibull_sf(&w1, 1.0).unwrap() - 0.367_879_441_171_442_33).abs() < 1e-15);
        assert!((weibull_sf(&w2, 2.0).unwrap() - 0.018_315_638_888_734_18).abs() < 1e-15);
        assert!(weibull_sf(&w1, -0.1).is_err());
    }

    #[test]
    fn normal_moments() {
        let xs = draw_batch_seq(1_000_000, 11, 0, sample_normal);
        let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.004, "mean {mean}");
        assert!((var - 1.0).abs() < 0.01, "var {var}");
    }

    #[test]
    fn laplace_moments() {
        let xs = draw_batch_seq(1_000_000, 12, 0, sample_laplace);
        let mean: f64 = xs.iter().sum::<f64>() / xs.len() as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.006, "mean {mean}");
        assert!((var - 2.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn weibull_median_at_gamma_two() {
        let p = WeibullParams::new(2.0).unwrap();
        let mut xs = draw_batch_seq(100_000, 13, 0, |rng| sample_weibull(&p, rng));
        xs.sort_unstable_by(f64::total_cmp);
        let med = xs[xs.len() / 2];
        assert!((med - 0.832_554_611_157_697_8).abs() < 0.01, "median {med}");
    }

    #[test]
    fn draws_are_deterministic_per_state() {
        let mut a = RngState::new(5, 17);
        let mut b = RngState::new(5, 17);
        let p = WeibullParams::new(0.7).unwrap();
        for _ in 0..64 {
            assert_eq!(sample_weibull(&p, &mut a), sample_weibull(&p, &mut b));
        }
        let mut a = RngState::new(5, 17);
        let mut b = RngState::new(5, 17);
        for _ in 0..64 {
            assert_eq!(sample_laplace(&mut a), sample_laplace(&mut b));
            assert_eq!(sample_normal(&mut a), sample_normal(&mut b));
        }
    }

    #[test]
    fn cdf_helpers_are_consistent() {
        assert!((laplace_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((laplace_cdf(1.0) + laplace_cdf(-1.0) - 1.0).abs() < 1e-15);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-9);
        assert!((exponential_cdf(1.0) - 0.632_120_558_828_557_7).abs() < 1e-15);
    }
}
