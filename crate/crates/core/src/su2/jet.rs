use std::ops::Mul;

use num_complex::Complex64;

use super::Propagator;

/// Truncated Taylor expansion of a 2×2 propagator in the common pulse area.
///
/// Entry `(i, j)` holds coefficients `c_0 … c_K` with
/// `U_ij(s0 + t) = Σ c_k t^k + O(t^{K+1})`. Products are truncated at the
/// order of the shorter operand, so every retained coefficient is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    expansion_point: f64,
    order: usize,
    // row-major: 11, 12, 21, 22
    coeffs: [Vec<Complex64>; 4],
}

impl Jet {
    pub fn identity(expansion_point: f64, order: usize) -> Self {
        let mut one = vec![Complex64::new(0.0, 0.0); order + 1];
        one[0] = Complex64::new(1.0, 0.0);
        let zero = vec![Complex64::new(0.0, 0.0); order + 1];
        Self {
            expansion_point,
            order,
            coeffs: [one.clone(), zero.clone(), zero, one],
        }
    }

    /// Jet of a single resonant pulse of area `s` and phase `phase`, expanded
    /// around `s = expansion_point`.
    pub fn resonant_pulse(expansion_point: f64, order: usize, phase: f64) -> Self {
        let (cos_coeffs, sin_coeffs) = half_angle_series(expansion_point, order);
        let axis = Complex64::from_polar(1.0, -phase);
        let minus_i = Complex64::new(0.0, -1.0);

        let a: Vec<Complex64> = cos_coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let b: Vec<Complex64> = sin_coeffs.iter().map(|&s| minus_i * axis * s).collect();
        let minus_b_conj: Vec<Complex64> = b.iter().map(|z| -z.conj()).collect();
        Self {
            expansion_point,
            order,
            coeffs: [a.clone(), b, minus_b_conj, a],
        }
    }

    pub fn expansion_point(&self) -> f64 {
        self.expansion_point
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Taylor coefficients of entry `(row, col)`, zero-based.
    pub fn coefficients(&self, row: usize, col: usize) -> &[Complex64] {
        &self.coeffs[2 * row + col]
    }

    /// `k`-th derivative of entry `(row, col)` at the expansion point.
    pub fn derivative(&self, row: usize, col: usize, k: usize) -> Complex64 {
        let factorial: f64 = (1..=k).map(|i| i as f64).product();
        self.coefficients(row, col)[k] * factorial
    }

    /// The propagator at the expansion point.
    pub fn value(&self) -> Propagator {
        Propagator::new(self.coeffs[0][0], self.coeffs[1][0])
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Jet) -> Jet {
        debug_assert!(
            (self.expansion_point - rhs.expansion_point).abs() < 1e-12,
            "jets expanded around different points"
        );
        let order = self.order.min(rhs.order);
        let entry = |i: usize, j: usize| {
            let mut out = cauchy(self.coefficients(i, 0), rhs.coefficients(0, j), order);
            let second = cauchy(self.coefficients(i, 1), rhs.coefficients(1, j), order);
            for (o, s) in out.iter_mut().zip(second) {
                *o += s;
            }
            out
        };
        Jet {
            expansion_point: self.expansion_point,
            order,
            coeffs: [entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)],
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        self.matmul(rhs)
    }
}

/// Truncated Cauchy product of two series.
pub(crate) fn cauchy(x: &[Complex64], y: &[Complex64], order: usize) -> Vec<Complex64> {
    (0..=order).map(|k| (0..=k).map(|j| x[j] * y[k - j]).sum()).collect()
}

/// Taylor coefficients of `cos((s0 + t)/2)` and `sin((s0 + t)/2)` in `t`.
fn half_angle_series(s0: f64, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (s, c) = (s0 / 2.0).sin_cos();
    // d^k/dx^k cos(x) cycles through cos, -sin, -cos, sin
    let cos_cycle = [c, -s, -c, s];
    let sin_cycle = [s, c, -s, -c];
    let mut scale = 1.0;
    let mut cos_coeffs = Vec::with_capacity(order + 1);
    let mut sin_coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order {
        if k > 0 {
            scale *= 0.5 / k as f64;
        }
        cos_coeffs.push(scale * cos_cycle[k % 4]);
        sin_coeffs.push(scale * sin_cycle[k % 4]);
    }
    (cos_coeffs, sin_coeffs)
}
