//! Symmetric tridiagonal eigenproblems: Sturm-count bisection for
//! eigenvalues, inverse iteration for eigenvectors.

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// off[i] couples rows i and i+1.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1].powi(2) };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based) by bisection to full precision.
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

    pub fn lowest(&self, k: usize) -> Vec<f64> {
        (0..k.min(self.len())).map(|i| self.eigenvalue(i)).collect()
    }

    /// Eigenvector for the eigenvalue `mu`, unit Euclidean norm.
    pub fn eigenvector(&self, mu: f64) -> Vec<f64> {
        let n = self.len();
        let shift = mu + 1e-10 * mu.abs().max(1.0);
        // irregular start so no eigenvector is missed by symmetry
        let mut v: Vec<f64> = (0..n).map(|j| 0.5 + (j as f64 * 0.618_033_988_75).fract()).collect();
        for _ in 0..3 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    /// (T − σI)x = b by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // band rows: l (sub), d (diag), u1, u2 (fill-in from pivoting)
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - sigma).collect();
        let mut u1: Vec<f64> = self.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut rhs = b.to_vec();
        let mut sub: Vec<f64> = self.off.clone();
        for i in 0..n.saturating_sub(1) {
            if sub[i].abs() > d[i].abs() {
                // swap rows i and i+1
                std::mem::swap(&mut d[i], &mut sub[i]);
                let t = u1[i];
                u1[i] = d[i + 1];
                d[i + 1] = t;
                let t = u2[i];
                u2[i] = u1[i + 1];
                u1[i + 1] = t;
                rhs.swap(i, i + 1);
            }
            let piv = if d[i] == 0.0 { f64::MIN_POSITIVE } else { d[i] };
            let m = sub[i] / piv;
            d[i + 1] -= m * u1[i];
            u1[i + 1] -= m * u2[i];
            rhs[i + 1] -= m * rhs[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            if i + 1 < n {
                s -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * x[i + 2];
            }
            let piv = if d[i] == 0.0 { f64::MIN_POSITIVE } else { d[i] };
            x[i] = s / piv;
        }
        x
    }
}
