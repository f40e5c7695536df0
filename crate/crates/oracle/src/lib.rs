//! Brute-force reference computations on plain 4×4 arrays.
//!
//! Nothing here knows about circulant structure. Every routine works on
//! explicit sixteen-entry matrices so that the structured closed forms in
//! `affinor-core` can be checked against something that shares none of
//! their code paths.

// Loops keep the index notation of the formulas they transcribe.
#![allow(clippy::needless_range_loop)]

pub type Mat4 = [[f64; 4]; 4];
pub type Vec4 = [f64; 4];

/// Metric matrix written out entry by entry, first row `(a, b, c, b)`.
pub fn metric_matrix(a: f64, b: f64, c: f64) -> Mat4 {
    [[a, b, c, b], [b, a, b, c], [c, b, a, b], [b, c, b, a]]
}

/// The affinor `q` as the literal coordinate table `q_i^j`.
pub fn affinor_matrix() -> Mat4 {
    [
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
    ]
}

pub fn identity() -> Mat4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(x: &Mat4, y: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += x[i][k] * y[k][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn mat_pow(x: &Mat4, k: u32) -> Mat4 {
    (0..k).fold(identity(), |acc, _| mat_mul(&acc, x))
}

pub fn transpose(x: &Mat4) -> Mat4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[j][i] = x[i][j];
        }
    }
    out
}

/// Column action `M·v`.
pub fn mat_vec(m: &Mat4, v: &Vec4) -> Vec4 {
    let mut out = [0.0; 4];
    for i in 0..4 {
        out[i] = (0..4).map(|j| m[i][j] * v[j]).sum();
    }
    out
}

/// Row action `v·M`.
pub fn row_mat(v: &Vec4, m: &Mat4) -> Vec4 {
    let mut out = [0.0; 4];
    for j in 0..4 {
        out[j] = (0..4).map(|i| v[i] * m[i][j]).sum();
    }
    out
}

/// `wᵀ M v` by explicit double sum.
pub fn bilinear(m: &Mat4, w: &Vec4, v: &Vec4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += w[i] * m[i][j] * v[j];
        }
    }
    s
}

/// `f_ij = g_ik q^k_t q^t_j`, contracted index by index.
pub fn contract_pullback(g: &Mat4) -> Mat4 {
    let q = affinor_matrix();
    let mut f = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for t in 0..4 {
                    s += g[i][k] * q[k][t] * q[t][j];
                }
            }
            f[i][j] = s;
        }
    }
    f
}

/// Determinant by recursive Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    match n {
        0 => 1.0,
        1 => m[0][0],
        _ => {
            let mut det = 0.0;
            for col in 0..n {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                det += sign * m[0][col] * cofactor_det(&minor);
            }
            det
        }
    }
}

pub fn det4(m: &Mat4) -> f64 {
    let rows: Vec<Vec<f64>> = m.iter().map(|r| r.to_vec()).collect();
    cofactor_det(&rows)
}

/// The four leading principal minors, smallest first.
pub fn leading_minors(m: &Mat4) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        let sub: Vec<Vec<f64>> = m[..=k].iter().map(|r| r[..=k].to_vec()).collect();
        *slot = cofactor_det(&sub);
    }
    out
}

/// Sylvester's criterion.
pub fn positive_definite_by_minors(m: &Mat4) -> bool {
    leading_minors(m).iter().all(|&d| d > 0.0)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues(m: &Mat4) -> Vec4 {
    let mut a = *m;
    for _sweep in 0..100 {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a
            .iter()
            .flatten()
            .map(|x| x * x)
            .sum::<f64>()
            .max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev = [a[0][0], a[1][1], a[2][2], a[3][3]];
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// `∏ (x − λ)` evaluated from the matrix directly: `det(M − xE)`.
pub fn characteristic_at(m: &Mat4, x: f64) -> f64 {
    let mut shifted = *m;
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= x;
    }
    det4(&shifted)
}

/// Inverse by the adjugate, for cross-checking structured inverses.
pub fn adjugate_inverse(m: &Mat4) -> Mat4 {
    let det = det4(m);
    let mut inv = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let minor: Vec<Vec<f64>> = (0..4)
                .filter(|&r| r != i)
                .map(|r| (0..4).filter(|&c| c != j).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            inv[j][i] = sign * cofactor_det(&minor) / det;
        }
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_matches_known_values() {
        assert_eq!(det4(&identity()), 1.0);
        assert_eq!(det4(&metric_matrix(3.0, 1.0, 2.0)), 21.0);
        let q = affinor_matrix();
        // 4-cycle permutation is odd.
        assert_eq!(det4(&q), -1.0);
    }

    #[test]
    fn jacobi_on_diagonal_and_circulant() {
        let ev = jacobi_eigenvalues(&metric_matrix(3.0, 1.0, 2.0));
        let expect = [1.0, 1.0, 3.0, 7.0];
        for (x, y) in ev.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12, "{ev:?}");
        }
        for x in ev {
            assert!(characteristic_at(&metric_matrix(3.0, 1.0, 2.0), x).abs() < 1e-9);
        }
    }

    #[test]
    fn adjugate_inverse_is_inverse() {
        let m = metric_matrix(3.0, 1.0, 2.0);
        let p = mat_mul(&m, &adjugate_inverse(&m));
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((p[i][j] - e).abs() < 1e-12);
            }
        }
    }
}
