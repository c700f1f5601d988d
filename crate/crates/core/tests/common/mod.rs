//! Dense reference operators assembled literally from their defining
//! products. Only usable for small N; independent of the matrix-free steps.

#![allow(dead_code)]

pub type Dense = Vec<Vec<f64>>;

pub fn zeros(n: usize) -> Dense {
    vec![vec![0.0; n]; n]
}

pub fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut c = zeros(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0.0 {
                for j in 0..n {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    c
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut c = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    c[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    c
}

pub fn apply(m: &Dense, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `2|psi_S><psi_S| - I_N`
pub fn grover(n: usize) -> Dense {
    let mut g = zeros(n);
    for (i, row) in g.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = 2.0 / n as f64 - if i == j { 1.0 } else { 0.0 };
        }
    }
    g
}

/// `I_N - 2|s><s| - 2|r><r|` for 0-based `s`, `r`.
pub fn marked_phase(n: usize, s: usize, r: usize) -> Dense {
    let mut p = identity(n);
    p[s][s] = -1.0;
    p[r][r] = -1.0;
    p
}

/// Star walk `U = S C` on `[|1,0>..|N,0>, |0,1>..|0,N>]`.
pub fn star_unitary(n: usize, s: usize, r: usize) -> Dense {
    let d = 2 * n;
    let mut shift = zeros(d);
    for j in 0..n {
        shift[j][n + j] = 1.0;
        shift[n + j][j] = 1.0;
    }
    let mut coin = zeros(d);
    let p = marked_phase(n, s, r);
    let g = grover(n);
    for i in 0..n {
        coin[i][i] = p[i][i];
        for j in 0..n {
            coin[n + i][n + j] = g[i][j];
        }
    }
    matmul(&shift, &coin)
}

/// Complete graph with loops, `U = S ((I - 2|s><s| - 2|r><r|) (x) G)`.
pub fn complete_loop_unitary(n: usize, s: usize, r: usize) -> Dense {
    let mut shift = zeros(n * n);
    for i in 0..n {
        for j in 0..n {
            shift[j * n + i][i * n + j] = 1.0;
        }
    }
    matmul(&shift, &kron(&marked_phase(n, s, r), &grover(n)))
}

/// Szegedy walk with queries, `U = R_B R_A R_M`, built from the vectors
/// `Phi_i`, `Psi_j` with `p_ij = (1 - delta_ij) / (N - 1)`.
pub fn szegedy_unitary(n: usize, s: usize, r: usize) -> Dense {
    let d = n * n;
    let w = 1.0 / ((n - 1) as f64).sqrt();
    let mut ra = zeros(d);
    let mut rb = zeros(d);
    for i in 0..n {
        let mut phi = vec![0.0; d];
        let mut psi = vec![0.0; d];
        for j in (0..n).filter(|&j| j != i) {
            phi[i * n + j] = w;
            psi[j * n + i] = w;
        }
        for a in 0..d {
            for b in 0..d {
                ra[a][b] += 2.0 * phi[a] * phi[b];
                rb[a][b] += 2.0 * psi[a] * psi[b];
            }
        }
    }
    for a in 0..d {
        ra[a][a] -= 1.0;
        rb[a][a] -= 1.0;
    }
    let rm = kron(&marked_phase(n, s, r), &identity(n));
    matmul(&rb, &matmul(&ra, &rm))
}
