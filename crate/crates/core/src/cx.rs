//! Complex scalar used throughout: double precision, finite entries only.

pub use num_complex::Complex64 as Cx;

/// Shorthand constructor.
#[inline]
pub fn cx(re: f64, im: f64) -> Cx {
    Cx::new(re, im)
}

/// True when both parts are finite. Public APIs reject NaN/Inf at the
/// boundary so the kernels never have to re-check.
#[inline]
pub fn is_finite(z: Cx) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Principal square root: cut along the negative real axis, `arg` in
/// `(-pi, pi]`. `num_complex::sqrt` implements exactly this convention;
/// the wrapper only adds the cut check callers need.
#[inline]
pub fn principal_sqrt(z: Cx) -> Cx {
    z.sqrt()
}

/// True when `z` lies on the closed negative real half-line `(-inf, 0]`,
/// i.e. where the principal square root is discontinuous or zero.
#[inline]
pub fn on_sqrt_cut(z: Cx) -> bool {
    z.im == 0.0 && z.re <= 0.0
}
