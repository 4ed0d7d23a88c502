#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twofloat::TwoFloat;
use uavdm_core::{steering_vector, ArrayConfig, Complex64, LinkState};

/// Seeded generator; `UAVDM_TEST_SEED` overrides the default. The seed is
/// printed so that failures can be replayed.
pub fn rng(name: &str, default_seed: u64) -> ChaCha8Rng {
    let seed = std::env::var("UAVDM_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    println!("{name}: seed {seed}");
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Random but physically plausible link: arbitrary directions, distances
/// from 20 m to 1 km, noise within 5 dB of -70 dBm.
pub fn random_link<R: Rng>(rng: &mut R, m: usize, ps_dbm: f64) -> LinkState {
    let array = ArrayConfig::half_wavelength(m).unwrap();
    let d_ab: f64 = rng.random_range(20.0..1000.0);
    let d_ae: f64 = rng.random_range(20.0..1000.0);
    LinkState::new(
        steering_vector(rng.random_range(0.0..=PI), &array).unwrap(),
        steering_vector(rng.random_range(0.0..=PI), &array).unwrap(),
        1.0 / (d_ab * d_ab),
        1.0 / (d_ae * d_ae),
        dbm_to_mw(rng.random_range(-75.0..-65.0)),
        dbm_to_mw(rng.random_range(-75.0..-65.0)),
        dbm_to_mw(ps_dbm),
        1,
    )
    .unwrap()
}

pub fn random_unit<R: Rng>(rng: &mut R, m: usize) -> Vec<Complex64> {
    // normalized complex Gaussian is uniform on the sphere
    let v: Vec<Complex64> = (0..m)
        .map(|_| {
            // Box-Muller: the pair (r cos, r sin) is two independent normals
            let (u1, u2): (f64, f64) = (rng.random_range(1e-300..1.0), rng.random());
            Complex64::from_polar((-2.0 * u1.ln()).sqrt(), 2.0 * PI * u2)
        })
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn cosine(a: &[Complex64], b: &[Complex64]) -> f64 {
    let dot: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    dot.norm() / (na * nb)
}

/// `p x x^H + s I`
pub fn rank_one_plus_identity(p: f64, x: &[Complex64], s: f64) -> DMatrix<Complex64> {
    let m = x.len();
    DMatrix::from_fn(m, m, |i, j| {
        let diag = if i == j {
            Complex64::new(s, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        x[i] * x[j].conj() * p + diag
    })
}

/// Dominant generalized eigenvector of `(num, den)` with `den` Hermitian
/// positive definite, via a full eigendecomposition of `den^{-1/2} num den^{-1/2}`.
pub fn dominant_generalized_eigvec(
    num: &DMatrix<Complex64>,
    den: &DMatrix<Complex64>,
) -> Vec<Complex64> {
    let eig = den.clone().symmetric_eigen();
    let inv_sqrt = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::new(1.0 / l.sqrt(), 0.0)),
    );
    let u = &eig.eigenvectors;
    let w = u * DMatrix::from_diagonal(&inv_sqrt) * u.adjoint();
    let c = &w * num * &w;
    let c = (&c + c.adjoint()) * Complex64::new(0.5, 0.0);
    let ce = c.symmetric_eigen();
    let top = ce.eigenvalues.imax();
    let y = ce.eigenvectors.column(top).into_owned();
    (w * y).iter().copied().collect()
}

/// Double-double complex number, used only by the refinement below.
#[derive(Clone, Copy)]
struct Cdd {
    re: TwoFloat,
    im: TwoFloat,
}

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

/// Entry `(i, j)` of `p x x^H + s I` in double-double.
fn entry_dd(p: f64, x: &[Complex64], s: f64, i: usize, j: usize) -> Cdd {
    let (a, b) = (x[i], x[j]);
    let re = (dd(a.re) * b.re + dd(a.im) * b.im) * p;
    let im = (dd(a.im) * b.re - dd(a.re) * b.im) * p;
    Cdd {
        re: if i == j { re + s } else { re },
        im,
    }
}

/// Solves `(p x x^H + s I) z = rhs` by dense LU with residuals accumulated
/// in double-double (mixed-precision iterative refinement). The matrix can
/// have condition numbers near 1e11 here, where a plain f64 solve loses
/// about five digits.
pub fn refined_dense_solve(p: f64, x: &[Complex64], s: f64, rhs: &[Complex64]) -> Vec<Complex64> {
    let m = x.len();
    let lu = rank_one_plus_identity(p, x, s).lu();
    let b = DVector::from_column_slice(rhs);
    let mut z = lu.solve(&b).expect("matrix is positive definite");
    for _ in 0..8 {
        let r = DVector::from_iterator(
            m,
            (0..m).map(|i| {
                let mut acc = Cdd {
                    re: dd(rhs[i].re),
                    im: dd(rhs[i].im),
                };
                for j in 0..m {
                    let e = entry_dd(p, x, s, i, j);
                    acc.re -= e.re * z[j].re - e.im * z[j].im;
                    acc.im -= e.re * z[j].im + e.im * z[j].re;
                }
                Complex64::new(acc.re.into(), acc.im.into())
            }),
        );
        z += lu.solve(&r).expect("matrix is positive definite");
    }
    z.iter().copied().collect()
}

/// Dominant generalized eigenvector of `(p_num h h^H, p_den x x^H + s I)`:
/// dense eigendecomposition for the starting vector, then generalized power
/// steps `v <- B^{-1} A v` with the refined solve.
pub fn refined_generalized_eigvec(
    p_num: f64,
    h: &[Complex64],
    p_den: f64,
    x: &[Complex64],
    s: f64,
) -> Vec<Complex64> {
    let a = rank_one_plus_identity(p_num, h, 0.0);
    let b = rank_one_plus_identity(p_den, x, s);
    let mut v = DVector::from_vec(dominant_generalized_eigvec(&a, &b));
    for _ in 0..3 {
        let av = &a * &v;
        let z = refined_dense_solve(p_den, x, s, av.as_slice());
        let n = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v = DVector::from_iterator(z.len(), z.into_iter().map(|c| c / n));
    }
    v.iter().copied().collect()
}
