//! Independent dense-matrix oracle shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

pub type Matrix = Vec<Vec<f64>>;

/// Cyclic Jacobi diagonalisation of a real symmetric matrix.
/// Returns eigenvalues in ascending order and the matching eigenvectors
/// (as columns of the returned matrix, i.e. `vecs[i][k]` is component `i`
/// of eigenvector `k`).
pub fn jacobi_eigen(a: &Matrix) -> (Vec<f64>, Matrix) {
    let n = a.len();
    let mut a = a.clone();
    let mut v: Matrix = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().max(1e-300);
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n)
        .map(|r| order.iter().map(|&c| v[r][c]).collect())
        .collect();
    (vals, vecs)
}

pub fn eigenvalues(a: &Matrix) -> Vec<f64> {
    jacobi_eigen(a).0
}

/// Ground state `(E, ψ)` from the dense oracle.
pub fn ground(a: &Matrix) -> (f64, Vec<f64>) {
    let (vals, vecs) = jacobi_eigen(a);
    (vals[0], vecs.iter().map(|row| row[0]).collect())
}

/// `S₊` in the basis `m = −S, …, S` (index `k = m + S`), from
/// `⟨m+1|S₊|m⟩ = √((S−m)(S+m+1))`.
pub fn raising(two_s: u32) -> Matrix {
    let d = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    let mut a = vec![vec![0.0; d]; d];
    for k in 0..d - 1 {
        let m = k as f64 - s;
        a[k + 1][k] = ((s - m) * (s + m + 1.0)).sqrt();
    }
    a
}

pub fn transpose(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

pub fn add(a: &Matrix, b: &Matrix, fa: f64, fb: f64) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| fa * x + fb * y).collect())
        .collect()
}

pub fn mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn sx(two_s: u32) -> Matrix {
    let p = raising(two_s);
    add(&p, &transpose(&p), 0.5, 0.5)
}

pub fn sz(two_s: u32) -> Matrix {
    let d = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { i as f64 - s } else { 0.0 })
                .collect()
        })
        .collect()
}

/// `S_y² = −(S₊ − S₋)²/4`, which is real.
pub fn sy2(two_s: u32) -> Matrix {
    let p = raising(two_s);
    let d = add(&p, &transpose(&p), 1.0, -1.0);
    let sq = mul(&d, &d);
    add(&sq, &sq, -0.125, -0.125)
}

/// `λS_x + S_z²` as a dense matrix.
pub fn hamiltonian(two_s: u32, lambda: f64) -> Matrix {
    let z = sz(two_s);
    add(&sx(two_s), &mul(&z, &z), lambda, 1.0)
}

pub fn expect(a: &Matrix, psi: &[f64]) -> f64 {
    let n = a.len();
    (0..n)
        .map(|i| psi[i] * (0..n).map(|j| a[i][j] * psi[j]).sum::<f64>())
        .sum()
}

/// `(⟨S_x⟩, Var[S_z], ⟨S_y²⟩)` of a real state via dense matrices.
pub fn dense_moments(two_s: u32, psi: &[f64]) -> (f64, f64, f64) {
    let z = sz(two_s);
    let mz = expect(&z, psi);
    let mz2 = expect(&mul(&z, &z), psi);
    (
        expect(&sx(two_s), psi),
        mz2 - mz * mz,
        expect(&sy2(two_s), psi),
    )
}

/// Uniformly random real unit vector from a fixed linear congruential stream.
pub fn random_unit(dim: usize, seed: u64) -> Vec<f64> {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut v: Vec<f64> = (0..dim)
        .map(|_| {
            // Box–Muller
            let (u1, u2) = (next().max(1e-300), next());
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs()
}
