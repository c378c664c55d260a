//! Complex log-gamma by the Stirling series.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numeric::bernoulli_even;

const STIRLING_TERMS: usize = 10;
const SHIFT_RADIUS: f64 = 15.0;

/// `log Γ(z)` for `Re z > 0`, on the branch continuous in `z` across the
/// right half-plane (the one that makes `Im log Γ(1/4 + it/2)` smooth in `t`).
pub fn ln_gamma_right(z: Complex64) -> Complex64 {
    debug_assert!(z.re > 0.0);
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.norm() < SHIFT_RADIUS {
        shift += w.ln();
        w += 1.0;
    }
    stirling(w) - shift
}

fn stirling(w: Complex64) -> Complex64 {
    let half_ln_two_pi = 0.5 * (2.0 * PI).ln();
    let mut acc = (w - 0.5) * w.ln() - w + half_ln_two_pi;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for k in 1..=STIRLING_TERMS {
        let kk = 2.0 * k as f64;
        acc += pow * (bernoulli_even(k) / (kk * (kk - 1.0)));
        pow *= inv2;
    }
    acc
}

/// `log sin z`, avoiding overflow of `sin` for large `|Im z|`.
/// The imaginary part is only defined modulo 2π.
pub fn ln_sin(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im > 1.0 {
        // sin z = e^{-iz} (e^{2iz} - 1) / (2i)
        -i * z + ((2.0 * i * z).exp() - 1.0).ln() - (2.0 * i).ln()
    } else if z.im < -1.0 {
        // sin z = e^{iz} (1 - e^{-2iz}) / (2i)
        i * z + (1.0 - (-2.0 * i * z).exp()).ln() - (2.0 * i).ln()
    } else {
        z.sin().ln()
    }
}

/// `log Γ(z)` with reflection for `Re z < 1/2`. The imaginary part is only
/// meaningful modulo 2π there; exponentiate before comparing.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - ln_gamma_right(1.0 - z)
    } else {
        ln_gamma_right(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_factorials() {
        for n in 1..15u32 {
            let expected: f64 = (1..n).map(f64::from).product::<f64>().ln();
            let got = ln_gamma(Complex64::new(f64::from(n), 0.0));
            assert!(
                (got.re - expected).abs() < 1e-13 * expected.abs().max(1.0),
                "n = {n}"
            );
            assert!(got.im.abs() < 1e-15);
        }
    }

    #[test]
    fn half_integer_and_reflection() {
        let g = ln_gamma(Complex64::new(0.5, 0.0)).exp();
        assert!((g.re - PI.sqrt()).abs() < 3e-14, "{g}");
        // Γ(-1/2) = -2√π
        let g = ln_gamma(Complex64::new(-0.5, 0.0)).exp();
        assert!((g.re + 2.0 * PI.sqrt()).abs() < 1e-13, "{g}");
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for &(x, y) in &[(0.3, 2.0), (1.7, -40.0), (-2.3, 5.0), (0.25, 500.0)] {
            let z = Complex64::new(x, y);
            let lhs = (ln_gamma(z + 1.0) - ln_gamma(z)).exp();
            assert!((lhs - z).norm() < 1e-11 * z.norm(), "z = {z}");
        }
    }

    #[test]
    fn modulus_on_the_quarter_line() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        let y = 3.0;
        let g = ln_gamma(Complex64::new(0.5, y));
        let expected = 0.5 * (PI / (PI * y).cosh()).ln();
        assert!((g.re - expected).abs() < 1e-13);
    }
}
