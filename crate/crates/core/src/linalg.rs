//! Small dense complex-vector helpers. Vectors here are at most a few dozen
//! entries long, so plain slices are enough.

use num_complex::Complex64;

/// `a^H b`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `|h^H v|^2`, the power a unit-power stream precoded with `v` delivers
/// through channel `h`.
pub fn gain(h: &[Complex64], v: &[Complex64]) -> f64 {
    inner(h, v).norm_sqr()
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    norm_sqr(a).sqrt()
}

/// Scales `a` to unit norm and fixes the global phase so that the first entry
/// has a nonnegative real part. Returns `None` for the zero vector.
pub fn normalize(mut a: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = norm(&a);
    if !(n > 0.0) || !n.is_finite() {
        return None;
    }
    let scale = if a[0].re < 0.0 { -1.0 / n } else { 1.0 / n };
    for x in &mut a {
        *x *= scale;
    }
    Some(a)
}

/// Solves `(a I + x x^H) w = y` with the rank-one inverse identity
/// `(aI + xx^H)^{-1} y = (y - x (x^H y) / (a + |x|^2)) / a`.
pub fn rank_one_solve(a: f64, x: &[Complex64], y: &[Complex64]) -> Vec<Complex64> {
    let coef = inner(x, y) / (a + norm_sqr(x));
    x.iter()
        .zip(y)
        .map(|(xi, yi)| (yi - xi * coef) / a)
        .collect()
}
