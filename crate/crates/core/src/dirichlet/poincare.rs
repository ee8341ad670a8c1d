use nalgebra::DMatrix;

use super::FormError;

/// Best `C` with `Σ_{x∈γ} g(x)² <= C Σ_{(x,y)∈γ} (g(x) − g(y))²` for mean-zero
/// `g` on a cycle of length `k`: the inverse of the smallest nonzero
/// eigenvalue of the cycle form. The form has edges `(i, i+1 mod k)`, so for
/// `k = 2` both oriented edges join the same pair and the form doubles.
/// `k = 1` has no nonzero mean-zero function; the constant is 0.
pub fn poincare_constant(k: usize) -> Result<f64, FormError> {
    match k {
        0 => Err(FormError::InvalidLength(0)),
        1 => Ok(0.0),
        _ => {
            let mut l = DMatrix::<f64>::zeros(k, k);
            for i in 0..k {
                let j = (i + 1) % k;
                l[(i, i)] += 1.0;
                l[(j, j)] += 1.0;
                l[(i, j)] -= 1.0;
                l[(j, i)] -= 1.0;
            }
            let mut ev: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            // The smallest eigenvalue belongs to the constants.
            Ok(1.0 / ev[1])
        }
    }
}
