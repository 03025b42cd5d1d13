//! Small dense matrices over ℚ(i).

use super::GaussRational;

pub type GaussMatrix = Vec<Vec<GaussRational>>;

pub fn identity(n: usize) -> GaussMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }).collect())
        .collect()
}

pub fn transpose(a: &GaussMatrix) -> GaussMatrix {
    let n = a.len();
    let m = a.first().map(Vec::len).unwrap_or(0);
    (0..m).map(|j| (0..n).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mat_mul(a: &GaussMatrix, b: &GaussMatrix) -> GaussMatrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map(Vec::len).unwrap_or(0);
    let mut out = vec![vec![GaussRational::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] += &(&a[i][l] * &b[l][j]);
                }
            }
        }
    }
    out
}

pub fn is_antisymmetric(a: &GaussMatrix) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| a[i][j] == -&a[j][i]))
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn invert(a: &GaussMatrix) -> Option<GaussMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<GaussRational>> = a
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].inv()?;
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &m[col][c];
                m[r][c] -= &t;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}
