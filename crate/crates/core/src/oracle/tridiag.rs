//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and
//! eigenvectors by inverse iteration.

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e[i]` couples rows `i` and `i + 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert_eq!(e.len() + 1, d.len(), "off-diagonal length must be n - 1");
        Self { d, e }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.d.len() {
            let coupling = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] / q };
            q = self.d[i] - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.e[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - left - right);
            hi = hi.max(self.d[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (zero based), bisected to full precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for the eigenvalue `lambda`.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.d.len();
        let scale = self.gershgorin();
        let shift = lambda + 1e-14 * (scale.0.abs() + scale.1.abs());
        let mut x = vec![1.0; n];
        for _ in 0..3 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }

    /// Solves `(T - shift) y = rhs` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.d.len();
        let tiny = 1e-300;
        // rows as (sub, diag, super, super2) after pivoting
        let mut diag: Vec<f64> = self.d.iter().map(|v| v - shift).collect();
        let mut sup: Vec<f64> = self.e.clone();
        sup.push(0.0);
        let mut sup2 = vec![0.0; n];
        let mut sub: Vec<f64> = self.e.clone();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if sub[i].abs() > diag[i].abs() {
                // swap rows i and i + 1
                std::mem::swap(&mut diag[i], &mut sub[i]);
                let (s_i, d_next) = (sup[i], diag[i + 1]);
                sup[i] = d_next;
                diag[i + 1] = s_i;
                let s_next = sup[i + 1];
                sup2[i] = s_next;
                sup[i + 1] = 0.0;
                b.swap(i, i + 1);
            }
            if diag[i].abs() < tiny {
                diag[i] = tiny;
            }
            let m = sub[i] / diag[i];
            diag[i + 1] -= m * sup[i];
            sup[i + 1] -= m * sup2[i];
            b[i + 1] -= m * b[i];
            sub[i] = 0.0;
        }
        if diag[n - 1].abs() < tiny {
            diag[n - 1] = tiny;
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= sup[i] * y[i + 1];
            }
            if i + 2 < n {
                s -= sup2[i] * y[i + 2];
            }
            y[i] = s / diag[i];
        }
        let peak = y.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if peak > 1e200 {
            y.iter_mut().for_each(|v| *v /= peak);
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let t = laplacian(n);
        for k in 0..n {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert_relative_eq!(t.eigenvalue(k), want, max_relative = 1e-13, epsilon = 1e-14);
        }
        assert_eq!(t.count_below(0.0), 0);
        assert_eq!(t.count_below(5.0), n);
    }

    #[test]
    fn eigenvector_satisfies_equation() {
        let n = 40;
        let d: Vec<f64> = (0..n).map(|i| 2.0 + (i as f64 * 0.3).sin()).collect();
        let t = SymTridiagonal::new(d, (0..n - 1).map(|i| -1.0 - 0.1 * i as f64 / n as f64).collect());
        for k in [0, 7, 39] {
            let lam = t.eigenvalue(k);
            let v = t.eigenvector(lam);
            for i in 0..n {
                let mut av = t.d[i] * v[i];
                if i > 0 {
                    av += t.e[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    av += t.e[i] * v[i + 1];
                }
                assert!((av - lam * v[i]).abs() < 1e-10);
            }
        }
    }
}
