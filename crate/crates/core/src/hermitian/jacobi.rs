use num_complex::Complex64;

use super::{HermitianMatrix, Spectrum};

const MAX_SWEEPS: usize = 64;
const REL_TOL: f64 = 1e-13;

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each pivot `(p, q)` is first made real by a diagonal phase and then
/// annihilated by a real plane rotation. Sweeps visit pivots in row-major
/// order; iteration stops once every off-diagonal modulus is below
/// `1e-13 * max |a_jj|`.
pub fn eigenvalues(h: &HermitianMatrix) -> Spectrum {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.entries().to_vec();
    let at = |j: usize, k: usize| j * n + k;

    for sweep in 0..MAX_SWEEPS {
        let diag_max = (0..n).map(|j| a[at(j, j)].re.abs()).fold(0.0, f64::max);
        let off_max = (0..n)
            .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
            .map(|(j, k)| a[at(j, k)].norm())
            .fold(0.0, f64::max);
        if off_max == 0.0 || off_max <= REL_TOL * diag_max {
            break;
        }
        // early sweeps only rotate pivots above a fifth of the mean off-diagonal modulus
        let threshold = if sweep < 3 {
            let off_sum: f64 = (0..n)
                .flat_map(|j| ((j + 1)..n).map(move |k| (j, k)))
                .map(|(j, k)| a[at(j, k)].norm())
                .sum();
            0.2 * off_sum / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[at(p, q)];
                let mag = apq.norm();
                if mag == 0.0 || mag < threshold {
                    continue;
                }
                let phase = apq / mag;
                let alpha = a[at(p, p)].re;
                let gamma = a[at(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]; A <- G^H A G
                let gqp = -phase.conj() * s;
                let gqq = phase.conj() * c;
                for k in 0..n {
                    let akp = a[at(k, p)];
                    let akq = a[at(k, q)];
                    a[at(k, p)] = akp * c + akq * gqp;
                    a[at(k, q)] = akp * s + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[at(p, k)];
                    let aqk = a[at(q, k)];
                    a[at(p, k)] = apk * c + aqk * gqp.conj();
                    a[at(q, k)] = apk * s + aqk * gqq.conj();
                }
                a[at(p, q)] = Complex64::new(0.0, 0.0);
                a[at(q, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut values: Vec<f64> = (0..n).map(|j| a[at(j, j)].re).collect();
    values.sort_by(f64::total_cmp);
    Spectrum { values }
}
