//! Truncated power series and the square-root coefficient machinery behind
//! the matrix-square-root experiments: the Taylor expansion of
//! `f_t(z) = sqrt(z^2 - z + t)` and its closed-form dominant term.

use serde::{Deserialize, Serialize};

use crate::cx::{cx, on_sqrt_cut, principal_sqrt, Cx};
use crate::error::{Error, Result};

/// Coefficients grow geometrically in the oscillation experiments; beyond
/// this magnitude a scan reports saturation instead of overflowing.
pub const MAGNITUDE_GUARD: f64 = 1e100;

/// Truncated Taylor series; index = power of z. Serializes as the bare
/// coefficient array `[[re,im],...]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PowerSeries {
    pub coeffs: Vec<Cx>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Cx>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid(
                "power series needs at least one coefficient",
            ));
        }
        if coeffs.iter().any(|z| !crate::cx::is_finite(*z)) {
            return Err(Error::invalid("power series has non-finite coefficient"));
        }
        Ok(PowerSeries { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        PowerSeries {
            coeffs: coeffs.iter().map(|&x| cx(x, 0.0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of z^k, zero beyond the stored length.
    #[inline]
    pub fn coeff(&self, k: usize) -> Cx {
        self.coeffs.get(k).copied().unwrap_or_else(|| cx(0.0, 0.0))
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Cx) -> Cx {
        let mut acc = cx(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Cauchy product truncated to `n` coefficients.
    pub fn mul_truncated(&self, other: &PowerSeries, n: usize) -> PowerSeries {
        let mut out = vec![cx(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut acc = cx(0.0, 0.0);
            for i in 0..=k {
                acc += self.coeff(i) * other.coeff(k - i);
            }
            *slot = acc;
        }
        PowerSeries { coeffs: out }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.len().max(other.len());
        PowerSeries {
            coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Square root of a power series through its stored order: `q` with
/// `q * q = p` truncated, `q[0]` the principal root of `p[0]`. Coefficient
/// recurrence `q[n] = (p[n] - sum_{1<=k<=n-1} q[k] q[n-k]) / (2 q[0])`.
pub fn series_sqrt(p: &PowerSeries) -> Result<PowerSeries> {
    let p0 = p.coeff(0);
    if on_sqrt_cut(p0) {
        return Err(Error::Branch(format!(
            "constant term {p0} lies on the square-root cut (-inf, 0]"
        )));
    }
    let n = p.len();
    let mut q = vec![cx(0.0, 0.0); n];
    q[0] = principal_sqrt(p0);
    let half_inv = cx(1.0, 0.0) / (q[0] * 2.0);
    for k in 1..n {
        let mut conv = cx(0.0, 0.0);
        for i in 1..k {
            conv += q[i] * q[k - i];
        }
        q[k] = (p.coeff(k) - conv) * half_inv;
        if q[k].norm() > MAGNITUDE_GUARD {
            return Err(Error::Regime(format!(
                "series_sqrt coefficient {k} exceeds the 1e100 magnitude guard"
            )));
        }
    }
    Ok(PowerSeries { coeffs: q })
}

/// First `n` Taylor coefficients of `f_t(z) = sqrt(z^2 - z + t)` at 0.
pub fn ft_series(t: Cx, n: usize) -> Result<PowerSeries> {
    if t == cx(0.0, 0.0) {
        return Err(Error::Branch("ft_series requires t != 0".into()));
    }
    if n == 0 {
        return Err(Error::invalid("ft_series needs n >= 1"));
    }
    let mut p = vec![cx(0.0, 0.0); n.max(3)];
    p[0] = t;
    if n >= 2 {
        p[1] = cx(-1.0, 0.0);
    }
    if n >= 3 {
        p[2] = cx(1.0, 0.0);
    }
    p.truncate(n.max(1));
    let p = PowerSeries { coeffs: p };
    series_sqrt(&p)
}

/// `c_n` of `sqrt(1-z) = 1 - sum c_n z^n`, evaluated through the Beta
/// closed form `c_n = 1 / (2 (n+1/2)(n-1/2) B(1/2, n+1))` written as a
/// stable product (`B(1/2, n+1) = n! / prod_{k=0..n} (k+1/2)`).
pub fn sqrt_coefficient(n: usize) -> f64 {
    assert!(n >= 1);
    // prod_{k=1..n} (k+1/2)/k, times the k=0 factor 1/2
    let mut prod = 0.5f64;
    for k in 1..=n {
        prod *= (k as f64 + 0.5) / k as f64;
    }
    let nf = n as f64;
    prod / (2.0 * (nf + 0.5) * (nf - 0.5))
}

/// Asymptotic form `1 / (2 sqrt(pi) n^{3/2})` of [`sqrt_coefficient`].
pub fn sqrt_coefficient_asymptotic(n: usize) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI.sqrt() * (n as f64).powf(1.5))
}

/// Closed-form data for the n-th coefficient of `f_t`: the dominant term
/// `h_hat_n = -c_n (a z1^{-n} + b z2^{-n})`, the root data, and the shape
/// `rho^{-n} / n^2` of the remainder bound (its constant is existential
/// and fitted by callers, never asserted).
#[derive(Debug, Clone)]
pub struct ClosedFormCoeff {
    pub c_n: f64,
    pub h_hat_n: Cx,
    pub g_bound_shape: f64,
    pub z1: Cx,
    pub z2: Cx,
    pub a: Cx,
    pub b: Cx,
    pub rho: f64,
}

/// Evaluate the closed form in the lemma regime `0 < |t - 1/4| < 1/4`.
pub fn closed_form_coeffs(t: Cx, n: usize) -> Result<ClosedFormCoeff> {
    let r = (t - cx(0.25, 0.0)).norm();
    if !(r > 0.0 && r < 0.25) {
        return Err(Error::Regime(format!(
            "closed_form_coeffs requires 0 < |t - 1/4| < 1/4, got |t - 1/4| = {r}"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("closed_form_coeffs needs n >= 1"));
    }
    let root = principal_sqrt(cx(0.25, 0.0) - t);
    let z1 = cx(0.5, 0.0) + root;
    let z2 = cx(0.5, 0.0) - root;
    let a = principal_sqrt(z2 - z1) * principal_sqrt(z1);
    let b = principal_sqrt(z1 - z2) * principal_sqrt(z2);
    let rho = z1.norm().min(z2.norm());
    let c_n = sqrt_coefficient(n);

    // z^{-n} in polar form with the magnitude guard
    let pow_neg = |z: Cx, n: usize| -> Cx {
        let ln_mag = -(n as f64) * z.norm().ln();
        let mag = ln_mag.exp().min(MAGNITUDE_GUARD);
        Cx::from_polar(mag, -(n as f64) * z.arg())
    };
    let h_hat_n = -(a * pow_neg(z1, n) + b * pow_neg(z2, n)) * c_n;
    let g_bound_shape =
        (rho.powi(-(n.min(1000) as i32))).min(MAGNITUDE_GUARD) / (n as f64 * n as f64);
    Ok(ClosedFormCoeff {
        c_n,
        h_hat_n,
        g_bound_shape,
        z1,
        z2,
        a,
        b,
        rho,
    })
}

impl PowerSeries {
    pub fn to_json(&self) -> String {
        let wire: Vec<[f64; 2]> = self.coeffs.iter().map(|z| [z.re, z.im]).collect();
        serde_json::to_string(&wire).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: Vec<[f64; 2]> =
            serde_json::from_str(s).map_err(|e| Error::invalid(format!("series JSON: {e}")))?;
        PowerSeries::new(wire.iter().map(|&[re, im]| cx(re, im)).collect())
    }
}

/// Taylor coefficients of `sqrt(1-z)`: `(1, -c_1, ..., -c_{n-1})`.
pub fn sqrt_one_minus_z(n: usize) -> PowerSeries {
    let mut coeffs = vec![cx(0.0, 0.0); n.max(1)];
    coeffs[0] = cx(1.0, 0.0);
    for (k, slot) in coeffs.iter_mut().enumerate().skip(1) {
        *slot = cx(-sqrt_coefficient(k), 0.0);
    }
    PowerSeries { coeffs }
}

/// Taylor coefficients of `log(1/(1-z))`: `(0, 1, 1/2, 1/3, ...)`.
pub fn log_reciprocal_one_minus_z(n: usize) -> PowerSeries {
    let coeffs = (0..n.max(1))
        .map(|k| {
            if k == 0 {
                cx(0.0, 0.0)
            } else {
                cx(1.0 / k as f64, 0.0)
            }
        })
        .collect();
    PowerSeries { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Lcg64;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn sqrt_binomial_series() {
        let p = PowerSeries::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0]);
        let q = series_sqrt(&p).unwrap();
        let expect = [1.0, -0.5, -1.0 / 8.0, -1.0 / 16.0, -5.0 / 128.0];
        for (k, &e) in expect.iter().enumerate() {
            approx(q.coeff(k).re, e, 1e-15);
            assert_eq!(q.coeff(k).im, 0.0);
        }
    }

    #[test]
    fn sqrt_of_perfect_square() {
        // (1/2 - z)^2 = 1/4 - z + z^2, principal branch positive at 0.
        let p = PowerSeries::from_real(&[0.25, -1.0, 1.0, 0.0, 0.0, 0.0]);
        let q = series_sqrt(&p).unwrap();
        approx(q.coeff(0).re, 0.5, 1e-15);
        approx(q.coeff(1).re, -1.0, 1e-15);
        for k in 2..6 {
            assert_eq!(q.coeff(k), cx(0.0, 0.0));
        }
    }

    #[test]
    fn sqrt_rejects_cut() {
        assert!(series_sqrt(&PowerSeries::from_real(&[0.0, 1.0])).is_err());
        assert!(series_sqrt(&PowerSeries::from_real(&[-0.3, 1.0])).is_err());
        assert!(series_sqrt(&PowerSeries::new(vec![cx(-1.0, 1e-12)]).unwrap()).is_ok());
    }

    #[test]
    fn sqrt_self_consistency_random() {
        let mut rng = Lcg64::new(0x5EED);
        for _ in 0..100 {
            let n = 24;
            let mut coeffs = vec![cx(1.0, 0.0)];
            for _ in 1..n {
                coeffs.push(rng.complex_in_rect(-0.5, 0.5, -0.5, 0.5));
            }
            let p = PowerSeries::new(coeffs).unwrap();
            let q = series_sqrt(&p).unwrap();
            let qq = q.mul_truncated(&q, n);
            let scale = p.max_coeff_norm().max(1.0);
            for k in 0..n {
                assert!(
                    (qq.coeff(k) - p.coeff(k)).norm() <= 1e-12 * scale,
                    "coefficient {k} residual {}",
                    (qq.coeff(k) - p.coeff(k)).norm()
                );
            }
        }
    }

    #[test]
    fn ft_series_examples() {
        // t = 1/4: perfect square case.
        let q = ft_series(cx(0.25, 0.0), 6).unwrap();
        approx(q.coeff(0).re, 0.5, 1e-15);
        approx(q.coeff(1).re, -1.0, 1e-15);
        assert_eq!(q.coeff(3), cx(0.0, 0.0));

        // f_hat_0(t) = sqrt(t)
        let q = ft_series(cx(0.3, 0.0), 2).unwrap();
        approx(q.coeff(0).re, 0.3f64.sqrt(), 1e-15);
        // f_hat_1(t) = -1/(2 sqrt(t))
        approx(q.coeff(1).re, -1.0 / (2.0 * 0.3f64.sqrt()), 1e-14);

        assert!(ft_series(cx(0.0, 0.0), 4).is_err());
    }

    #[test]
    fn beta_closed_form_matches_binomial_series() {
        // dual route: recurrence coefficients of sqrt(1-z) vs Beta product
        let p = {
            let mut c = vec![cx(0.0, 0.0); 21];
            c[0] = cx(1.0, 0.0);
            c[1] = cx(-1.0, 0.0);
            PowerSeries { coeffs: c }
        };
        let q = series_sqrt(&p).unwrap();
        approx(sqrt_coefficient(1), 0.5, 0.0);
        approx(sqrt_coefficient(2), 0.125, 1e-16);
        for n in 1..=20 {
            let from_series = -q.coeff(n).re;
            approx(
                sqrt_coefficient(n),
                from_series,
                1e-15 * from_series.abs().max(1e-30),
            );
        }
    }

    #[test]
    fn beta_asymptotic() {
        // c_n * 2 sqrt(pi) n^{3/2} -> 1; within 1e-3 relative at n = 10^4.
        let n = 10_000;
        let ratio = sqrt_coefficient(n) / sqrt_coefficient_asymptotic(n);
        assert!((ratio - 1.0).abs() <= 1e-3, "ratio {ratio}");
    }

    #[test]
    fn closed_form_regime_checks() {
        assert!(closed_form_coeffs(cx(0.25, 0.0), 5).is_err());
        assert!(closed_form_coeffs(cx(0.6, 0.0), 5).is_err());
        assert!(closed_form_coeffs(cx(0.25 + 0.1, 0.0), 5).is_ok());
    }

    #[test]
    fn closed_form_dominates_for_moderate_n() {
        // |f_hat_n - h_hat_n| <= (K/n^2) rho^{-n}: fit K on n in [10, 40]
        // and verify on n in [41, 80], over samples of the circle r = 0.1.
        let r = 0.1;
        let ts: Vec<Cx> = (0..16)
            .map(|k| cx(0.25, 0.0) + Cx::from_polar(r, std::f64::consts::TAU * k as f64 / 16.0))
            .collect();
        let mut k_fit = 0.0f64;
        for &t in &ts {
            let f = ft_series(t, 81).unwrap();
            for n in 10..=40 {
                let cf = closed_form_coeffs(t, n).unwrap();
                let g = (f.coeff(n) - cf.h_hat_n).norm();
                k_fit = k_fit.max(g * (n * n) as f64 * cf.rho.powi(n as i32));
            }
        }
        assert!(k_fit.is_finite() && k_fit > 0.0);
        for &t in &ts {
            let f = ft_series(t, 81).unwrap();
            for n in 41..=80 {
                let cf = closed_form_coeffs(t, n).unwrap();
                let g = (f.coeff(n) - cf.h_hat_n).norm();
                let bound = 2.0 * k_fit / ((n * n) as f64) * cf.rho.powi(-(n as i32));
                assert!(g <= bound, "n={n} t={t} g={g} bound={bound}");
            }
        }
    }

    #[test]
    fn dominant_term_pair_ratio() {
        // Pairwise sums |f_{n-1}|+|f_n| track |h_{n-1}|+|h_n| within a
        // factor of 2 for n >= 30 (single coefficients can dip where the
        // two root contributions interfere).
        let r = 0.1;
        for k in 0..16 {
            let t = cx(0.25, 0.0) + Cx::from_polar(r, std::f64::consts::TAU * k as f64 / 16.0);
            let f = ft_series(t, 61).unwrap();
            for n in 30..60 {
                let h0 = closed_form_coeffs(t, n).unwrap().h_hat_n.norm();
                let h1 = closed_form_coeffs(t, n + 1).unwrap().h_hat_n.norm();
                let fpair = f.coeff(n).norm() + f.coeff(n + 1).norm();
                let ratio = fpair / (h0 + h1);
                assert!((0.5..=2.0).contains(&ratio), "n={n} k={k} ratio {ratio}");
            }
        }
    }

    #[test]
    fn series_json_round_trip() {
        let p = PowerSeries::new(vec![cx(0.0, 0.0), cx(4.0, 0.0), cx(-4.0, 0.0)]).unwrap();
        let back = PowerSeries::from_json(&p.to_json()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn named_series() {
        let s = sqrt_one_minus_z(4);
        approx(s.coeff(0).re, 1.0, 0.0);
        approx(s.coeff(2).re, -0.125, 1e-16);
        let l = log_reciprocal_one_minus_z(4);
        assert_eq!(l.coeff(0), cx(0.0, 0.0));
        approx(l.coeff(3).re, 1.0 / 3.0, 0.0);
    }
}
