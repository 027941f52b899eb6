//! Householder QR least squares.
//!
//! The design matrix is factorized directly; `XᵀX` is never formed. Column
//! `j` is reported as dependent when, after removing its projection onto
//! columns `0..j`, less than [`RANK_TOL`] of its original norm remains.

use crate::error::{Error, Result};

pub const RANK_TOL: f64 = 1e-10;

/// Result of `min ‖y − Xb‖₂`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Diagonal of `(XᵀX)⁻¹`, computed as squared row norms of `R⁻¹`.
    pub xtx_inv_diag: Vec<f64>,
}

fn norm(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale * v.iter().map(|x| (x / scale) * (x / scale)).sum::<f64>().sqrt()
}

/// Solves the least-squares problem for a design given column-wise.
/// `names[j]` labels column `j` in rank-deficiency errors.
pub fn least_squares(columns: &[Vec<f64>], names: &[String], y: &[f64]) -> Result<LeastSquares> {
    let n = y.len();
    let k = columns.len();
    debug_assert_eq!(names.len(), k);
    if k == 0 || n < k {
        return Err(Error::TooFew {
            what: "observations for the design",
            required: k.max(1),
            found: n,
        });
    }
    if let Some(bad) = columns.iter().position(|c| c.len() != n) {
        return Err(Error::Malformed(format!(
            "column '{}' has {} rows, expected {}",
            names[bad],
            columns[bad].len(),
            n
        )));
    }

    let original_norms: Vec<f64> = columns.iter().map(|c| norm(c)).collect();
    let mut a: Vec<Vec<f64>> = columns.to_vec();
    let mut qty = y.to_vec();
    let mut r = vec![vec![0.0; k]; k];

    for j in 0..k {
        let tail_norm = norm(&a[j][j..]);
        if original_norms[j] == 0.0 || tail_norm <= RANK_TOL * original_norms[j] {
            return Err(Error::RankDeficient(names[j].clone()));
        }
        let alpha = if a[j][j] > 0.0 { -tail_norm } else { tail_norm };
        let mut v = a[j][j..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|x| x * x).sum();

        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(p, q)| p * q).sum();
            let s = 2.0 * dot / vtv;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= s * vi;
            }
        };
        for col in a.iter_mut().skip(j + 1) {
            reflect(&mut col[j..]);
        }
        reflect(&mut qty[j..]);

        r[j][j] = alpha;
        for (l, col) in a.iter().enumerate().skip(j + 1) {
            r[j][l] = col[j];
        }
    }

    let mut b = vec![0.0; k];
    for i in (0..k).rev() {
        let s: f64 = ((i + 1)..k).map(|l| r[i][l] * b[l]).sum();
        b[i] = (qty[i] - s) / r[i][i];
    }

    // R⁻¹, upper triangular, column by column.
    let mut rinv = vec![vec![0.0; k]; k];
    for c in 0..k {
        rinv[c][c] = 1.0 / r[c][c];
        for i in (0..c).rev() {
            let s: f64 = ((i + 1)..=c).map(|l| r[i][l] * rinv[l][c]).sum();
            rinv[i][c] = -s / r[i][i];
        }
    }
    let xtx_inv_diag = rinv
        .iter()
        .map(|row| row.iter().map(|x| x * x).sum())
        .collect();

    Ok(LeastSquares {
        coefficients: b,
        xtx_inv_diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|j| format!("c{j}")).collect()
    }

    #[test]
    fn exact_line() {
        let ones = vec![1.0; 4];
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let ls = least_squares(&[ones, x], &names(2), &y).unwrap();
        assert!((ls.coefficients[0] - 1.0).abs() < 1e-14);
        assert!((ls.coefficients[1] - 2.0).abs() < 1e-14);
        // (XᵀX)⁻¹ for x = 1..4 with intercept: [[1.5, -0.5], [-0.5, 0.2]]
        assert!((ls.xtx_inv_diag[0] - 1.5).abs() < 1e-14);
        assert!((ls.xtx_inv_diag[1] - 0.2).abs() < 1e-14);
    }

    #[test]
    fn names_dependent_column() {
        let ones = vec![1.0; 5];
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let twice: Vec<f64> = x.iter().map(|v| 2.0 * v - 3.0).collect();
        let err = least_squares(&[ones, x, twice], &names(3), &[1.0; 5]).unwrap_err();
        assert_eq!(err, Error::RankDeficient("c2".into()));

        let err = least_squares(&[vec![1.0; 3], vec![7.0; 3]], &names(2), &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(err, Error::RankDeficient("c1".into()));

        let err = least_squares(&[vec![0.0; 3]], &names(1), &[1.0, 2.0, 3.0]).unwrap_err();
        assert_eq!(err, Error::RankDeficient("c0".into()));
    }

    #[test]
    fn too_few_rows() {
        assert!(least_squares(&[vec![1.0], vec![2.0]], &names(2), &[1.0]).is_err());
    }
}
