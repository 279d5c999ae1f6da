//! Independent reference implementations shared by the integration tests.
//! Everything here works on explicit 2×2 complex matrices and plain index
//! arithmetic, never on the crate's Bloch-vector algebra.

#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `s·𝟙 + v·σ` written out entry by entry.
pub fn matrix(s: f64, v: [f64; 3]) -> M2 {
    [
        [c(s + v[2]), C::new(v[0], -v[1])],
        [C::new(v[0], v[1]), c(s - v[2])],
    ]
}

pub fn add(a: &M2, b: &M2) -> M2 {
    let mut out = *a;
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn trace(a: &M2) -> C {
    a[0][0] + a[1][1]
}

/// Eigenvalues of a Hermitian 2×2 matrix from its characteristic polynomial,
/// largest first.
pub fn eigenvalues(a: &M2) -> (f64, f64) {
    let t = trace(a).re;
    let d = (a[0][0] * a[1][1] - a[0][1] * a[1][0]).re;
    let disc = (t * t / 4.0 - d).max(0.0).sqrt();
    (t / 2.0 + disc, t / 2.0 - disc)
}

/// Equatorial Bloch vector at angle `phi` from the x-axis.
pub fn equatorial(phi: f64) -> [f64; 3] {
    [phi.cos(), phi.sin(), 0.0]
}

/// The four input directions `+a, −a, +b, −b` for opening angle `theta`.
pub fn input_directions(theta: f64) -> [[f64; 3]; 4] {
    let a = equatorial(theta / 2.0);
    let b = equatorial(-theta / 2.0);
    let neg = |v: [f64; 3]| [-v[0], -v[1], -v[2]];
    [a, neg(a), b, neg(b)]
}

/// `k`-subsets of `{0, 1, 2, 3}` in lexicographic order, built by bitmask.
pub fn subsets(k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0u32..16)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Values of the outcome function with index `i` over `len` sets; the first
/// set is the most significant base-4 digit.
pub fn decode(mut i: usize, len: usize) -> Vec<usize> {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = i % 4;
        i /= 4;
    }
    v
}

/// `Σ_{S: φ(S) ∉ S} |φ(S)⟩⟨φ(S)|` as a matrix.
pub fn unnormalized_member(theta: f64, family: &[Vec<usize>], phi: &[usize]) -> M2 {
    let dirs = input_directions(theta);
    let mut m = [[c(0.0); 2]; 2];
    for (set, &x) in family.iter().zip(phi) {
        if !set.contains(&x) {
            m = add(&m, &matrix(0.5, dirs[x].map(|t| t * 0.5)));
        }
    }
    m
}

/// Brute force over every outcome function: `(Σ_φ tr, max_φ λ_max, argmax)`
/// of the unnormalized members.
pub struct Enumeration {
    pub total_trace: f64,
    pub max_eigenvalue: f64,
    pub maximizers: Vec<usize>,
    pub eigenvalues: Vec<f64>,
}

pub fn enumerate(theta: f64, k: usize) -> Enumeration {
    let family = subsets(k);
    let n = 4usize.pow(family.len() as u32);
    let mut total_trace = 0.0;
    let mut eigenvalues = Vec::with_capacity(n);
    for i in 0..n {
        let m = unnormalized_member(theta, &family, &decode(i, family.len()));
        total_trace += trace(&m).re;
        eigenvalues.push(eigenvalues_of(&m));
    }
    let max_eigenvalue = eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let maximizers = (0..n).filter(|&i| max_eigenvalue - eigenvalues[i] <= 1e-9).collect();
    Enumeration {
        total_trace,
        max_eigenvalue,
        maximizers,
        eigenvalues,
    }
}

fn eigenvalues_of(m: &M2) -> f64 {
    eigenvalues(m).0
}

/// Success probabilities straight from the stated formulas.
pub fn formulas(theta: f64) -> [f64; 6] {
    let ct = theta.cos();
    let h = (theta / 2.0).cos().powi(2);
    let r = (10.0 + 6.0 * ct).sqrt();
    [
        0.5,
        (3.0 + h) / 6.0,
        (4.0 + h) / 6.0,
        0.25 * (1.0 + (ct + 3.0) / r),
        (4.0 + r) / 12.0,
        (6.0 + r) / 12.0,
    ]
}
