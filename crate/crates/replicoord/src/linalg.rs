//! Small dense 3x3 helpers: direct solve, determinant, eigenvector extraction,
//! and a numerical eigenvalue routine used to cross-check the closed forms.

use nalgebra::Matrix3;
use num_complex::Complex64;

/// Gaussian elimination with partial pivoting; `None` on singular systems.
pub fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = m[i][3];
        for k in i + 1..3 {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Eigenvector of a 3x3 matrix for a (simple, real) eigenvalue: the null
/// direction of `m - lambda*I`, taken as the largest cross product of its rows.
/// Normalized, with the largest-magnitude component made positive.
pub fn real_eigenvector(m: &[[f64; 3]; 3], lambda: f64) -> [f64; 3] {
    let rows: Vec<[f64; 3]> = (0..3)
        .map(|i| {
            let mut r = m[i];
            r[i] -= lambda;
            r
        })
        .collect();
    let candidates = [
        cross(rows[0], rows[1]),
        cross(rows[0], rows[2]),
        cross(rows[1], rows[2]),
    ];
    let mut best = candidates[0];
    for c in &candidates[1..] {
        if norm(*c) > norm(best) {
            best = *c;
        }
    }
    let n = norm(best);
    if n == 0.0 {
        return [0.0, 0.0, 0.0];
    }
    let mut v = [best[0] / n, best[1] / n, best[2] / n];
    let lead = (0..3).max_by(|&i, &j| v[i].abs().partial_cmp(&v[j].abs()).unwrap()).unwrap();
    if v[lead] < 0.0 {
        for c in &mut v {
            *c = -*c;
        }
    }
    v
}

/// Numerical eigenvalues via the real Schur form. This is the independent
/// route; closed forms stay authoritative in reports.
pub fn numeric_eigenvalues(m: &[[f64; 3]; 3]) -> [Complex64; 3] {
    let mat = Matrix3::from_fn(|i, j| m[i][j]);
    let eig = mat.complex_eigenvalues();
    [eig[0], eig[1], eig[2]]
}

/// Smallest over eigenvalue pairings of the largest pairwise distance; the
/// multiset distance between two spectra.
pub fn spectrum_distance(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    PERMS
        .iter()
        .map(|p| {
            (0..3)
                .map(|i| (a[i] - b[p[i]]).norm())
                .fold(0.0f64, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_det() {
        let a = [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let b = [1.0, 2.0, 3.0];
        let x = solve3(&a, &b).unwrap();
        for i in 0..3 {
            let got: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
            assert!((got - b[i]).abs() < 1e-12);
        }
        assert!((det3(&a) - 18.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvector_of_triangular_matrix() {
        let m = [[2.0, 1.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 3.0]];
        let v = real_eigenvector(&m, -1.0);
        // (m - (-1)I) v = 0  =>  v parallel to (1, -3, 0)
        assert!((v[0] / v[1] + 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(v[2], 0.0);
    }

    #[test]
    fn schur_eigenvalues_match_known_spectrum() {
        let m = [[0.0, 4.0 / 3.0, 0.0], [4.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], [
            -4.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
        ]];
        let eig = numeric_eigenvalues(&m);
        let expected = [
            Complex64::new(4.0 / 3.0, 0.0),
            Complex64::new(-4.0 / 3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        assert!(spectrum_distance(&eig, &expected) < 1e-12);
    }
}
