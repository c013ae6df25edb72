//! Test-only reference implementations, independent of the library's code paths.
#![allow(dead_code)]

use mixedq_core::{CMatrix, C64};

/// Eigenvalues of a Hermitian matrix, non-increasing, via cyclic Jacobi on the
/// real symmetric embedding `[[A, -B], [B, A]]` of `A + iB` (each eigenvalue
/// appears twice in the embedding).
pub fn jacobi_eigenvalues(h: &CMatrix) -> Vec<f64> {
    let n = h.nrows();
    let m = 2 * n;
    let mut a = vec![vec![0.0f64; m]; m];
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            a[i][j] = z.re;
            a[i + n][j + n] = z.re;
            a[i][j + n] = -z.im;
            a[i + n][j] = z.im;
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..m).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    eig.into_iter().step_by(2).collect()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMatrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn pauli(label: char) -> CMatrix {
    let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
    let entries = match label {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, c(0.0, -1.0), c(0.0, 1.0), o],
        'Z' => [l, o, o, c(-1.0, 0.0)],
        _ => panic!("unknown Pauli {label}"),
    };
    CMatrix::from_row_slice(2, 2, &entries)
}

pub fn pauli_string(labels: &str) -> CMatrix {
    labels.chars().fold(CMatrix::identity(1, 1), |acc, l| kron(&acc, &pauli(l)))
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)])
}

pub fn projector(dim: usize, index: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    m[(index, index)] = c(1.0, 0.0);
    m
}

/// Matrix exponential of a Hermitian matrix by scaling and squaring of the
/// Taylor series.
pub fn expm_taylor(h: &CMatrix, scale: f64) -> CMatrix {
    let n = h.nrows();
    let a = h.scale(scale);
    let norm: f64 = a.iter().map(|z| z.norm()).sum();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let a = a.scale(0.5f64.powi(squarings));
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..40 {
        term = &term * &a / c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn max_abs(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Normal approximation to the one-sided 3-sigma binomial allowance.
pub fn three_sigma(p: f64, trials: usize) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
