use crate::error::{Error, Result};

use super::field::{Fe, PrimeField};
use super::matrix::DenseMatrix;

impl DenseMatrix {
    /// Pfaffian of an even-order skew-symmetric matrix.
    ///
    /// Skew elimination: at each step the 2x2 block `[[0, a], [-a, 0]]` in
    /// positions `(k, k+1)` is pivoted out, `Pf(M) = a * Pf(S)` with the Schur
    /// complement `S[i][j] = M[i][j] + (M[k+1][i] M[k][j] - M[k][i] M[k+1][j]) / a`.
    /// A simultaneous row/column swap to bring a nonzero pivot into `(k, k+1)`
    /// flips the sign.
    pub fn pfaffian(&self, field: &PrimeField) -> Result<Fe> {
        if self.rows() != self.cols() || self.rows() % 2 != 0 {
            return Err(Error::NotEvenSquare { rows: self.rows(), cols: self.cols() });
        }
        if let Some((i, j)) = self.skew_violation(field) {
            return Err(Error::NotSkewSymmetric(i, j));
        }
        let n = self.rows();
        let mut a = self.clone();
        let mut pf = Fe::ONE;
        let mut k = 0;
        while k < n {
            let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if j != k + 1 {
                a.swap_rows(j, k + 1);
                a.swap_cols(j, k + 1);
                pf = field.neg(pf);
            }
            let pivot = a[(k, k + 1)];
            pf = field.mul(pf, pivot);
            let inv = field.inv(pivot).expect("pivot is nonzero");
            for i in k + 2..n {
                let ki = a[(k, i)];
                let k1i = a[(k + 1, i)];
                if ki.is_zero() && k1i.is_zero() {
                    continue;
                }
                for jj in k + 2..n {
                    let kj = a[(k, jj)];
                    let k1j = a[(k + 1, jj)];
                    let cross = field.sub(field.mul(k1i, kj), field.mul(ki, k1j));
                    if cross.is_zero() {
                        continue;
                    }
                    a[(i, jj)] = field.add(a[(i, jj)], field.mul(cross, inv));
                }
            }
            k += 2;
        }
        Ok(pf)
    }
}
