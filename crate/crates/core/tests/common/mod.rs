//! Independent oracles for the verification suites. Everything here builds
//! operators by a different route than the library: explicit 2×2 matrices
//! combined entry-by-entry, scaled Taylor summation for exponentials, and
//! exhaustive search for chromatic numbers.

use nalgebra::DMatrix;
use num_complex::Complex64;
use sze_core::pauli::{PauliOp, PauliSum, PauliTerm};

pub type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn single_matrix(op: PauliOp) -> [[Complex64; 2]; 2] {
    let z = c(0.0, 0.0);
    match op {
        PauliOp::I => [[c(1.0, 0.0), z], [z, c(1.0, 0.0)]],
        PauliOp::X => [[z, c(1.0, 0.0)], [c(1.0, 0.0), z]],
        PauliOp::Y => [[z, c(0.0, -1.0)], [c(0.0, 1.0), z]],
        PauliOp::Z => [[c(1.0, 0.0), z], [z, c(-1.0, 0.0)]],
    }
}

/// Dense matrix of a Pauli term, assembled entry-wise from per-site 2×2
/// factors (no mask arithmetic shared with the library path).
pub fn dense_term_oracle(term: &PauliTerm) -> CMatrix {
    let n = term.n_qubits();
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for row in 0..dim {
        for col in 0..dim {
            let mut entry = term.phase();
            for q in 0..n {
                let rq = (row >> q) & 1;
                let cq = (col >> q) & 1;
                entry *= single_matrix(term.op_at(q))[rq][cq];
                if entry == c(0.0, 0.0) {
                    break;
                }
            }
            m[(row, col)] = entry;
        }
    }
    m
}

pub fn dense_sum_oracle(sum: &PauliSum) -> CMatrix {
    let dim = 1usize << sum.n_qubits();
    let mut m = CMatrix::zeros(dim, dim);
    for (term, coeff) in sum.iter_terms() {
        m += dense_term_oracle(&term) * coeff;
    }
    m
}

/// exp(M) by scaling-and-squaring with a Taylor core; independent of the
/// eigendecomposition route used by the library.
pub fn expm_taylor(m: &CMatrix) -> CMatrix {
    let norm = m.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m * c(1.0 / 2f64.powi(squarings as i32), 0.0);
    let dim = m.nrows();
    let mut result = CMatrix::identity(dim, dim);
    let mut term = CMatrix::identity(dim, dim);
    for k in 1..=24 {
        term = &term * &scaled * c(1.0 / k as f64, 0.0);
        result += &term;
        if term.norm() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Spectral norm via the Gram matrix's largest eigenvalue (power iteration,
/// independent of the library's eigensolver).
pub fn spectral_norm_oracle(m: &CMatrix) -> f64 {
    let gram = m.adjoint() * m;
    let dim = gram.nrows();
    let mut v = nalgebra::DVector::from_element(dim, c(1.0, 0.0));
    v /= c(v.norm(), 0.0);
    let mut lambda = 0.0f64;
    for _ in 0..200 {
        let w = &gram * &v;
        let nw = w.norm();
        if nw < 1e-300 {
            return 0.0;
        }
        let next = nw;
        v = w / c(nw, 0.0);
        if (next - lambda).abs() <= 1e-13 * next.max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

/// Exhaustive chromatic number of the anticommutation graph by backtracking;
/// exact for small term counts.
pub fn chromatic_number_oracle(h: &PauliSum) -> usize {
    let keys: Vec<_> = h.terms().iter().map(|(k, _)| *k).collect();
    let m = keys.len();
    if m == 0 {
        return 0;
    }
    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j && !keys[i].commutes(&keys[j]) {
                adj[i][j] = true;
            }
        }
    }
    fn feasible(adj: &[Vec<bool>], colors: usize, assign: &mut Vec<usize>, v: usize) -> bool {
        if v == adj.len() {
            return true;
        }
        let cap = colors.min(assign.iter().take(v).copied().max().map_or(0, |m| m + 1) + 1);
        for color in 0..cap {
            if (0..v).all(|u| !(adj[v][u] && assign[u] == color)) {
                assign[v] = color;
                if feasible(adj, colors, assign, v + 1) {
                    return true;
                }
            }
        }
        false
    }
    for colors in 1..=m {
        let mut assign = vec![usize::MAX; m];
        if feasible(&adj, colors, &mut assign, 0) {
            return colors;
        }
    }
    m
}

/// Deterministic pseudo-random Pauli sums for the property suites.
pub struct SumSampler {
    state: u64,
}

impl SumSampler {
    pub fn new(seed: u64) -> Self {
        SumSampler { state: seed.wrapping_mul(0x9e3779b97f4a7c15).max(1) }
    }

    pub fn next_u64(&mut self) -> u64 {
        // xorshift64*
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545f4914f6cdd1d)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn term(&mut self, n: usize) -> PauliTerm {
        let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
        let x = self.next_u64() & mask;
        let z = self.next_u64() & mask;
        PauliTerm::from_masks(n, x, z, (self.next_u64() % 4) as u8).expect("valid masks")
    }

    pub fn hermitian_sum(&mut self, n: usize, max_terms: usize) -> PauliSum {
        let count = 1 + (self.next_u64() as usize) % max_terms;
        PauliSum::from_weighted_terms(
            n,
            (0..count).map(|_| {
                let mut t = self.term(n);
                t = PauliTerm::from_masks(n, t.x_mask(), t.z_mask(), 0).unwrap();
                (t, c(self.uniform() * 2.0 - 1.0, 0.0))
            }),
        )
        .expect("consistent qubit count")
    }

    pub fn complex_sum(&mut self, n: usize, max_terms: usize) -> PauliSum {
        let count = 1 + (self.next_u64() as usize) % max_terms;
        PauliSum::from_weighted_terms(
            n,
            (0..count).map(|_| {
                (
                    self.term(n),
                    c(self.uniform() * 2.0 - 1.0, self.uniform() * 2.0 - 1.0),
                )
            }),
        )
        .expect("consistent qubit count")
    }
}
