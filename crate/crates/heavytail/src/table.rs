//! Monotone cubic (Fritsch-Carlson) interpolation for cached CDF tables.

#[derive(Debug, Clone)]
pub(crate) struct MonotoneTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

// Three-point one-sided endpoint slope with the usual shape-preserving clips.
fn edge_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 <= 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d.min(3.0 * s0.abs()).max(-3.0 * s0.abs())
    }
}

impl MonotoneTable {
    /// Build from strictly increasing `xs` and nondecreasing `ys`.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        assert_eq!(xs.len(), ys.len());
        assert!(xs.len() >= 2);
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let sec: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = edge_slope(h[0], h.get(1).copied().unwrap_or(h[0]), sec[0], sec.get(1).copied().unwrap_or(sec[0]));
        slopes[n - 1] = edge_slope(
            h[n - 2],
            if n >= 3 { h[n - 3] } else { h[n - 2] },
            sec[n - 2],
            if n >= 3 { sec[n - 3] } else { sec[n - 2] },
        );
        for i in 1..n - 1 {
            if sec[i - 1] * sec[i] <= 0.0 {
                slopes[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                slopes[i] = (w1 + w2) / (w1 / sec[i - 1] + w2 / sec[i]);
            }
        }
        MonotoneTable { xs, ys, slopes }
    }

    /// Cubic Hermite evaluation, clamped to the table range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => return self.ys[i],
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1]
            + h11 * h * self.slopes[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_monotone_data_monotonically() {
        let xs: Vec<f64> = (0..80).map(|i| i as f64 * 0.125).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 1.0 - (-x).exp()).collect();
        let t = MonotoneTable::new(xs, ys);
        let mut prev = -1.0;
        for i in 0..790 {
            let x = i as f64 * 0.0125;
            let v = t.eval(x);
            assert!(v >= prev - 1e-15);
            assert!((v - (1.0 - (-x).exp())).abs() < 5e-4, "x={x}");
            prev = v;
        }
        assert_eq!(t.eval(-1.0), t.eval(0.0));
        assert_eq!(t.eval(100.0), t.eval(9.875));
    }
}
