//! Dense 3×3 complex linear solve by Gaussian elimination with partial
//! pivoting, plus a 1-norm condition estimate.

use num_complex::Complex64;

pub type Matrix3 = [[Complex64; 3]; 3];

/// LU factors of a 3×3 matrix, row permutation folded in.
#[derive(Debug, Clone, Copy)]
pub struct Lu3 {
    lu: Matrix3,
    perm: [usize; 3],
}

impl Lu3 {
    /// Returns `None` when a pivot is exactly zero.
    pub fn factor(a: &Matrix3) -> Option<Self> {
        let mut lu = *a;
        let mut perm = [0, 1, 2];
        for k in 0..3 {
            let pivot = (k..3)
                .max_by(|&i, &j| lu[i][k].norm().total_cmp(&lu[j][k].norm()))
                .unwrap();
            if lu[pivot][k].norm() == 0.0 {
                return None;
            }
            if pivot != k {
                lu.swap(pivot, k);
                perm.swap(pivot, k);
            }
            for i in k + 1..3 {
                let factor = lu[i][k] / lu[k][k];
                lu[i][k] = factor;
                for j in k + 1..3 {
                    let t = lu[k][j];
                    lu[i][j] -= factor * t;
                }
            }
        }
        Some(Lu3 { lu, perm })
    }

    pub fn solve(&self, b: &[Complex64; 3]) -> [Complex64; 3] {
        let mut y = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            let mut s = b[self.perm[i]];
            for j in 0..i {
                s -= self.lu[i][j] * y[j];
            }
            y[i] = s;
        }
        let mut x = [Complex64::new(0.0, 0.0); 3];
        for i in (0..3).rev() {
            let mut s = y[i];
            for j in i + 1..3 {
                s -= self.lu[i][j] * x[j];
            }
            x[i] = s / self.lu[i][i];
        }
        x
    }

    /// ‖A‖₁·‖A⁻¹‖₁ with the inverse formed column by column.
    pub fn condition_1(&self, a: &Matrix3) -> f64 {
        let mut inv_norm: f64 = 0.0;
        for col in 0..3 {
            let mut e = [Complex64::new(0.0, 0.0); 3];
            e[col] = Complex64::new(1.0, 0.0);
            let x = self.solve(&e);
            inv_norm = inv_norm.max(x.iter().map(|v| v.norm()).sum());
        }
        norm_1(a) * inv_norm
    }
}

pub fn norm_1(a: &Matrix3) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| a[i][j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn mat_vec(a: &Matrix3, x: &[Complex64; 3]) -> [Complex64; 3] {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
    }
    out
}
