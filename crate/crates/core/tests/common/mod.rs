#![allow(dead_code, clippy::needless_range_loop)]

//! Brute-force oracles shared by the integration suites.

use num_rational::Ratio;
use theta_core::dual_pairs::Star;
use theta_core::moment_descent::{check_theta_lift, classify_complex_descent, complex_descend};
use theta_core::orbits::{enumerate_complex_orbits, real_forms_of, AdmissibleTableau, LieType, MultForm};

type Q = Ratio<i64>;
pub type Matrix = Vec<Vec<Q>>;

fn zeros(n: usize) -> Matrix {
    vec![vec![Q::from_integer(0); n]; n]
}

/// Form on the irreducible `sl₂`-module of dimension `t`, normalised so the
/// odd case has its middle entry positive.
pub fn sl2_form(t: usize) -> Matrix {
    let mut a = zeros(t);
    let c: i64 = if t % 2 == 1 && (t / 2) % 2 == 1 { -1 } else { 1 };
    for i in 0..t {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        a[i][t - 1 - i] = Q::from_integer(sign * c);
    }
    a
}

pub fn multiplicity_form(form: &MultForm) -> Matrix {
    match *form {
        MultForm::Orth(p, q) => {
            let n = (p + q) as usize;
            let mut a = zeros(n);
            for i in 0..n {
                a[i][i] = Q::from_integer(if i < p as usize { 1 } else { -1 });
            }
            a
        }
        MultForm::Symp(d) => {
            let n = d as usize;
            let mut a = zeros(n);
            for i in 0..n / 2 {
                a[i][n / 2 + i] = Q::from_integer(1);
                a[n / 2 + i][i] = Q::from_integer(-1);
            }
            a
        }
    }
}

pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn block_sum(blocks: &[Matrix]) -> Matrix {
    let n = blocks.iter().map(Vec::len).sum();
    let mut out = zeros(n);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.len() {
            for j in 0..b.len() {
                out[at + i][at + j] = b[i][j];
            }
        }
        at += b.len();
    }
    out
}

/// Gram matrix of `⊕ M_t ⊗ S_t`.
pub fn tableau_gram(tab: &AdmissibleTableau) -> Matrix {
    let blocks: Vec<Matrix> =
        tab.rows.iter().map(|r| kronecker(&multiplicity_form(&r.form), &sl2_form(r.t as usize))).collect();
    block_sum(&blocks)
}

pub fn is_symmetric(a: &Matrix) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i][j] == a[j][i]))
}

pub fn is_skew(a: &Matrix) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i][j] == -a[j][i]))
}

/// `(positive, negative, zero)` counts of a symmetric rational matrix, by
/// congruence diagonalisation.
pub fn inertia(a: &Matrix) -> (u32, u32, u32) {
    let mut a = a.clone();
    let n = a.len();
    let zero = Q::from_integer(0);
    let (mut pos, mut neg, mut nul) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if a[k][k] == zero {
            // bring a non-zero diagonal entry to position k
            if let Some(j) = (k + 1..n).find(|&j| a[j][j] != zero) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| a[k][j] != zero) {
                // row_k += row_j, col_k += col_j makes a[k][k] = 2 a[k][j]
                for c in 0..n {
                    let v = a[j][c];
                    a[k][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j];
                    a[r][k] += v;
                }
            } else {
                nul += 1;
                k += 1;
                continue;
            }
        }
        let pivot = a[k][k];
        if pivot > zero {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = a[i][k] / pivot;
            if f == zero {
                continue;
            }
            for c in k..n {
                let v = a[k][c];
                a[i][c] -= f * v;
            }
        }
        for c in k + 1..n {
            a[k][c] = zero;
        }
        for i in k + 1..n {
            a[i][k] = zero;
        }
        k += 1;
    }
    (pos, neg, nul)
}

/// Rank by Gaussian elimination.
pub fn rank(a: &Matrix) -> usize {
    let mut a = a.clone();
    let n = a.len();
    let zero = Q::from_integer(0);
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| a[i][c] != zero) else { continue };
        a.swap(r, p);
        for i in 0..n {
            if i != r && a[i][c] != zero {
                let f = a[i][c] / a[r][c];
                for cc in c..n {
                    let v = a[r][cc];
                    a[i][cc] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// All real tableaux of both signs with total dimension at most `max_dim`.
pub fn all_tableaux(max_dim: u32) -> Vec<AdmissibleTableau> {
    let mut out = Vec::new();
    for lie_type in [LieType::Orthogonal, LieType::Symplectic] {
        for size in 0..=max_dim {
            for orbit in enumerate_complex_orbits(lie_type, size, max_dim).unwrap() {
                out.extend(real_forms_of(&orbit));
            }
        }
    }
    out
}

fn star_for(lie_type: LieType, dim: u32) -> Star {
    match lie_type {
        LieType::Symplectic => Star::C,
        LieType::Orthogonal if dim % 2 == 1 => Star::B,
        LieType::Orthogonal => Star::D,
    }
}

/// Regular orbits whose descent does not lift back to themselves.
pub fn lifreg_failures(max_dim: u32) -> Vec<String> {
    let mut failures = Vec::new();
    for lie_type in [LieType::Orthogonal, LieType::Symplectic] {
        for dim_vp in 0..=max_dim {
            for dim_v in 0..=max_dim {
                let ambient_ok = match lie_type {
                    LieType::Symplectic => dim_vp % 2 == 0,
                    LieType::Orthogonal => dim_v % 2 == 0,
                };
                if !ambient_ok {
                    continue;
                }
                for o_prime in enumerate_complex_orbits(lie_type, dim_vp, max_dim).unwrap() {
                    let Ok(class) = classify_complex_descent(&o_prime, dim_v, star_for(lie_type, dim_vp)) else {
                        continue;
                    };
                    if !class.regular {
                        continue;
                    }
                    let Ok(down) = complex_descend(&o_prime, dim_v) else { continue };
                    match check_theta_lift(&down, dim_vp, max_dim) {
                        Ok(up) if up == o_prime => {}
                        other => failures.push(format!("{o_prime} -> {down} -> {other:?}")),
                    }
                }
            }
        }
    }
    failures
}
