//! Roots of complex polynomials of degree at most four, via the eigenvalues
//! of the companion matrix followed by Newton polishing.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

/// Evaluate `sum coeffs[k] z^k` (coefficients in ascending order).
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// All roots of the polynomial with ascending coefficients `coeffs`.
///
/// Leading coefficients that are negligible relative to the largest one are
/// dropped, so the returned vector may hold fewer than `coeffs.len() - 1`
/// roots. Each eigenvalue gets up to three Newton steps, kept only while they
/// reduce the residual.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let mut degree = coeffs.len() - 1;
    while degree > 0 && coeffs[degree].norm() <= 1e-14 * scale {
        degree -= 1;
    }
    if degree == 0 {
        return Vec::new();
    }
    let poly = &coeffs[..=degree];
    let lead = poly[degree];

    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -poly[i] / lead;
    }

    let eig: Vec<Complex64> = match Schur::try_new(companion, 1e-15, 10_000) {
        Some(schur) => {
            let (_, t) = schur.unpack();
            (0..degree).map(|i| t[(i, i)]).collect()
        }
        None => return Vec::new(),
    };

    let dpoly = derivative(poly);
    eig.into_iter().map(|z| newton_polish(poly, &dpoly, z)).collect()
}

fn newton_polish(poly: &[Complex64], dpoly: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut res = horner(poly, z).norm();
    for _ in 0..3 {
        let d = horner(dpoly, z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - horner(poly, z) / d;
        let next_res = horner(poly, next).norm();
        if next_res.is_finite() && next_res < res {
            z = next;
            res = next_res;
        } else {
            break;
        }
    }
    z
}
