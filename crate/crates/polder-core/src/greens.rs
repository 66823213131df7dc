//! Photon Green tensor in a homogeneous medium and the scalar radial kernels
//! shared by all pair potentials.
//!
//! In the frequency-coordinate domain the retarded tensor between points
//! separated by `R` along unit vector `rh` is
//!
//! ```text
//! D_r^{vv'} = w^2 [ delta_{vv'} (1 + i/x - 1/x^2)
//!                 + rh_v rh_v' (3/x^2 - 3i/x - 1) ] e^{ix} / R,    x = n(w) w R
//! ```
//!
//! and the advanced tensor is its elementwise complex conjugate. Contracting
//! the squared tensor over both indices collapses the angular structure to a
//! single radial factor:
//!
//! ```text
//! sum_{vv'} (D_r^{vv'})^2 = 2 (w^4/R^2) f(x) e^{2ix},
//! f(x) = 1 + 2i/x - 5/x^2 - 6i/x^3 + 3/x^4,
//! ```
//!
//! which is the kernel of the fluctuation integral. The real-photon
//! (resonant) channel instead carries `g(x) = 1 + 1/x^2 + 3/x^4` together
//! with the separate absorption factor `exp(-2 Im(n) w R)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Stack-allocated 3x3 complex tensor.
pub type Tensor3 = [[Complex64; 3]; 3];

/// Values of the two radial bracket factors at `x = n w R`.
#[derive(Debug, Clone, Copy)]
pub struct RadialKernelValue {
    /// Fluctuation kernel `1 + 2i/x - 5/x^2 - 6i/x^3 + 3/x^4`.
    pub f_nonres: Complex64,
    /// Real-photon kernel `1 + 1/x^2 + 3/x^4` on the same argument.
    pub g_res: Complex64,
    /// The dimensionless argument itself.
    pub x: Complex64,
}

/// Fluctuation kernel `f(x)`; approaches 1 as `|x| -> inf`.
#[inline]
pub fn nonresonant_kernel(x: Complex64) -> Complex64 {
    let ix = x.inv();
    let i = Complex64::new(0.0, 1.0);
    Complex64::new(1.0, 0.0) + ix * (2.0 * i + ix * (Complex64::new(-5.0, 0.0) + ix * (-6.0 * i + ix * 3.0)))
}

/// Real-photon kernel `g(x)`; approaches 1 as `|x| -> inf`.
#[inline]
pub fn resonant_kernel(x: Complex64) -> Complex64 {
    let ix2 = (x * x).inv();
    Complex64::new(1.0, 0.0) + ix2 + 3.0 * ix2 * ix2
}

/// Fluctuation kernel continued to the imaginary frequency axis: for
/// `x = i y` with real `y`, `f(iy) = 1 + 2/y + 5/y^2 + 6/y^3 + 3/y^4` and
/// the oscillation `e^{2ix}` turns into the decay `e^{-2y}`.
#[inline]
pub fn imaginary_axis_kernel(y: f64) -> f64 {
    let iy = 1.0 / y;
    1.0 + iy * (2.0 + iy * (5.0 + iy * (6.0 + iy * 3.0)))
}

/// `w^4 f(n w R)` assembled as a polynomial in `w`, stable at `w -> 0`.
/// `sigma = 1/(n R)`.
#[inline]
pub fn scaled_nonresonant_kernel(omega: Complex64, sigma: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let w2 = omega * omega;
    w2 * w2 + 2.0 * i * omega * w2 * sigma - 5.0 * w2 * sigma * sigma
        - 6.0 * i * omega * sigma * sigma * sigma
        + 3.0 * sigma.powu(4)
}

/// `u^4 f(i n u R) = u^4 + 2u^3 t + 5u^2 t^2 + 6u t^3 + 3t^4` with
/// `t = 1/(n R)`, the imaginary-axis weight written without divisions so the
/// static limit `u = 0` evaluates exactly to `3 t^4`.
#[inline]
pub fn scaled_imaginary_axis_kernel(u: f64, t: f64) -> f64 {
    u * u * u * u + 2.0 * u * u * u * t + 5.0 * u * u * t * t + 6.0 * u * t * t * t + 3.0 * t * t * t * t
}

/// `w^4 g(n w R)` as a polynomial in `w`; `sigma = 1/(n R)`.
#[inline]
pub fn scaled_resonant_kernel(omega: Complex64, sigma: Complex64) -> Complex64 {
    let w2 = omega * omega;
    w2 * w2 + w2 * sigma * sigma + 3.0 * sigma.powu(4)
}

/// Both radial bracket values at `x = n w R`.
pub fn radial_kernels(n_omega: Complex64, omega: f64, separation: f64) -> Result<RadialKernelValue> {
    if separation <= 0.0 {
        return Err(Error::Domain(format!(
            "separation must be positive, got {separation}"
        )));
    }
    if omega == 0.0 || n_omega == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("radial kernel argument x = n w R is zero".into()));
    }
    let x = n_omega * omega * separation;
    Ok(RadialKernelValue {
        f_nonres: nonresonant_kernel(x),
        g_res: resonant_kernel(x),
        x,
    })
}

/// Retarded Green tensor between two points separated by `r_vec` in a medium
/// with refractive index `n_omega` at frequency `omega`.
pub fn green_tensor_retarded(n_omega: Complex64, omega: f64, r_vec: [f64; 3]) -> Result<Tensor3> {
    let r = (r_vec[0] * r_vec[0] + r_vec[1] * r_vec[1] + r_vec[2] * r_vec[2]).sqrt();
    if r == 0.0 {
        return Err(Error::Domain("coincident points in the Green tensor".into()));
    }
    let x = n_omega * omega * r;
    let ix = x.inv();
    let i = Complex64::new(0.0, 1.0);
    // Bracket coefficients of delta_{vv'} and of rh_v rh_v'.
    let a = Complex64::new(1.0, 0.0) + i * ix - ix * ix;
    let b = 3.0 * ix * ix - 3.0 * i * ix - Complex64::new(1.0, 0.0);
    let prefactor = omega * omega * (i * x).exp() / r;

    let rh = [r_vec[0] / r, r_vec[1] / r, r_vec[2] / r];
    let mut d = [[Complex64::new(0.0, 0.0); 3]; 3];
    for v in 0..3 {
        for vp in 0..3 {
            let delta = if v == vp { 1.0 } else { 0.0 };
            d[v][vp] = prefactor * (a * delta + b * rh[v] * rh[vp]);
        }
    }
    Ok(d)
}

/// Advanced tensor: the elementwise complex conjugate of the retarded one.
pub fn green_tensor_advanced(n_omega: Complex64, omega: f64, r_vec: [f64; 3]) -> Result<Tensor3> {
    let mut d = green_tensor_retarded(n_omega, omega, r_vec)?;
    for row in &mut d {
        for entry in row {
            *entry = entry.conj();
        }
    }
    Ok(d)
}

/// `sum_{vv'} (D^{vv'})^2` of a tensor.
pub fn tensor_contraction(d: &Tensor3) -> Complex64 {
    d.iter()
        .flat_map(|row| row.iter())
        .map(|&e| e * e)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kernels_at_unit_argument() {
        let k = radial_kernels(c(1.0, 0.0), 1.0, 1.0).unwrap();
        // f(1) = 1 + 2i - 5 - 6i + 3 = -1 - 4i, g(1) = 1 + 1 + 3 = 5.
        assert_abs_diff_eq!(k.f_nonres.re, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.f_nonres.im, -4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.g_res.re, 5.0, epsilon = 1e-14);
        assert_abs_diff_eq!(k.g_res.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn kernels_approach_unity_far_out() {
        let k = radial_kernels(c(1.0, 0.0), 1.0, 1e8).unwrap();
        assert_relative_eq!(k.f_nonres.re, 1.0, max_relative = 1e-7);
        assert_abs_diff_eq!(k.f_nonres.im, 0.0, epsilon = 1e-7);
        assert_relative_eq!(k.g_res.re, 1.0, max_relative = 1e-7);
    }

    #[test]
    fn zero_argument_is_rejected() {
        assert!(radial_kernels(c(1.0, 0.0), 0.0, 1.0).is_err());
        assert!(radial_kernels(c(0.0, 0.0), 1.0, 1.0).is_err());
        assert!(radial_kernels(c(1.0, 0.0), 1.0, 0.0).is_err());
        assert!(green_tensor_retarded(c(1.0, 0.0), 1.0, [0.0; 3]).is_err());
    }

    #[test]
    fn tensor_is_symmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = c(rng.gen_range(0.5..2.0), rng.gen_range(0.0..0.5));
            let w: f64 = rng.gen_range(0.2..3.0);
            let rv = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.1..2.0),
            ];
            let d = green_tensor_retarded(n, w, rv).unwrap();
            for v in 0..3 {
                for vp in 0..3 {
                    assert_eq!(d[v][vp], d[vp][v]);
                }
            }
        }
    }

    #[test]
    fn advanced_is_conjugate_of_retarded() {
        let n = c(1.2, 0.3);
        let rv = [0.3, -0.4, 1.1];
        let dr = green_tensor_retarded(n, 1.7, rv).unwrap();
        let da = green_tensor_advanced(n, 1.7, rv).unwrap();
        for v in 0..3 {
            for vp in 0..3 {
                assert_eq!(da[v][vp], dr[v][vp].conj());
            }
        }
    }

    #[test]
    fn far_field_is_transverse() {
        // n = 1, x -> inf: D -> (w^2 e^{iwR}/R)(delta - rh rh).
        let w = 1.0;
        let r = 1e7;
        let rv = [0.0, 0.0, r];
        let d = green_tensor_retarded(c(1.0, 0.0), w, rv).unwrap();
        let prefactor = w * w * (c(0.0, 1.0) * w * r).exp() / r;
        for v in 0..3 {
            for vp in 0..3 {
                let delta = if v == vp { 1.0 } else { 0.0 };
                let rh = [0.0, 0.0, 1.0];
                let expected = prefactor * (delta - rh[v] * rh[vp]);
                assert_abs_diff_eq!((d[v][vp] - expected).norm(), 0.0, epsilon = 1e-7 * prefactor.norm());
            }
        }
    }

    #[test]
    fn contraction_matches_radial_kernel() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let n = c(rng.gen_range(0.5..2.5), rng.gen_range(0.0..0.8));
            let w: f64 = rng.gen_range(0.1..4.0);
            let rv = [
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.05..3.0),
            ];
            let r = (rv[0] * rv[0] + rv[1] * rv[1] + rv[2] * rv[2]).sqrt();
            let d = green_tensor_retarded(n, w, rv).unwrap();
            let contracted = tensor_contraction(&d);
            let x = n * w * r;
            let expected =
                2.0 * w.powi(4) / (r * r) * nonresonant_kernel(x) * (2.0 * Complex64::new(0.0, 1.0) * x).exp();
            assert!(
                (contracted - expected).norm() <= 1e-12 * expected.norm(),
                "relative error {:e}",
                (contracted - expected).norm() / expected.norm()
            );
        }
    }

    #[test]
    fn imaginary_axis_kernel_is_the_rotated_fluctuation_kernel() {
        for y in [0.05, 0.3, 1.0, 4.0, 40.0] {
            let rotated = nonresonant_kernel(c(0.0, y));
            assert_relative_eq!(imaginary_axis_kernel(y), rotated.re, max_relative = 1e-13);
            assert_abs_diff_eq!(rotated.im, 0.0, epsilon = 1e-13 * rotated.re.abs());
        }
    }

    #[test]
    fn scaled_kernels_match_their_quotient_forms() {
        let n = c(1.1, 0.2);
        let r = 0.7;
        let sigma = (n * r).inv();
        for w in [0.3, 1.0, 2.7] {
            let x = n * w * r;
            let direct = Complex64::new(w, 0.0).powu(4) * nonresonant_kernel(x);
            let scaled = scaled_nonresonant_kernel(c(w, 0.0), sigma);
            assert!((direct - scaled).norm() < 1e-12 * direct.norm());

            let direct_res = Complex64::new(w, 0.0).powu(4) * resonant_kernel(x);
            let scaled_res = scaled_resonant_kernel(c(w, 0.0), sigma);
            assert!((direct_res - scaled_res).norm() < 1e-12 * direct_res.norm());
        }
        // Static limit of the imaginary-axis weight: 3 t^4.
        let t = 1.0 / (1.2 * 0.7);
        assert_eq!(scaled_imaginary_axis_kernel(0.0, t), 3.0 * t.powi(4));
    }
}
