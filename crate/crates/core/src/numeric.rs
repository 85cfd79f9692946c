//! Test-support numerics: complex roots of a real polynomial by
//! Durand–Kerner (Weierstrass) iteration.  Used by unit tests to check
//! unitarity / functional-equation properties of computed polynomials; not
//! part of the library API.

use num_complex::Complex64;

/// All complex roots of `c₀ + c₁x + … + c_d x^d` (`coeffs[d] ≠ 0`).
///
/// Plain simultaneous iteration from the standard staggered starting points;
/// the polynomials under test here are well-conditioned (degree ≤ 6, roots on
/// or near circles), so no deflation or scaling is needed.
pub fn complex_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    assert!(d >= 1 && coeffs[d] != 0.0);
    let monic: Vec<f64> = coeffs.iter().map(|c| c / coeffs[d]).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // Staggered ring of starting values, radius guided by coefficient size.
    let radius = 1.0
        + monic
            .iter()
            .take(d)
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let mut roots: Vec<Complex64> = (0..d)
        .map(|i| {
            let theta = 2.0 * std::f64::consts::PI * (i as f64 + 0.25) / d as f64;
            Complex64::from_polar(radius.min(2.0), theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_polynomials() {
        // x² − 3x + 2 = (x−1)(x−2).
        let mut r = complex_roots(&[2.0, -3.0, 1.0]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!((r[1] - Complex64::new(2.0, 0.0)).norm() < 1e-9);

        // (x² + 1)³ has ±i with multiplicity 3; all roots on the unit circle.
        let r = complex_roots(&[1.0, 0.0, 3.0, 0.0, 3.0, 0.0, 1.0]);
        for z in r {
            assert!((z.norm() - 1.0).abs() < 1e-5, "|{z}| ≠ 1");
        }
    }
}
