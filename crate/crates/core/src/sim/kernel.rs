//! Sparse Pauli rotation kernels.
//!
//! A rotation e^{−iθP} with P = i^{#Y}·X^x Z^z acts on amplitude pairs
//! (b, b⊕x):
//!
//!   ψ'[b] = cosθ·ψ[b] − i sinθ · λ(b⊕x) · ψ[b⊕x],
//!   λ(b)  = i^{#Y+2·phase/…} (−1)^{popcount(z∧b)}   (the entry ⟨b⊕x|P|b⟩).
//!
//! For x ≠ 0 the pairs are disjoint orbits; splitting the array at the
//! highest set bit of x gives contiguous blocks whose two halves pair up,
//! which is the layout both the sequential loop and the rayon path use. The
//! parallel path partitions work identically for every thread count, so
//! results are bit-reproducible.
//!
//! Each function has a `_seq` twin used by the benches and the
//! thread-independence tests; with the `parallel` feature disabled the
//! public entry points fall through to the sequential code.

use num_complex::Complex64;

use crate::pauli::PauliTerm;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Minimum amplitudes before the parallel path engages.
#[cfg(feature = "parallel")]
const PAR_THRESHOLD: usize = 1 << 12;

#[derive(Clone, Copy)]
struct TermAction {
    x_mask: usize,
    z_mask: usize,
    /// ⟨b⊕x|P|b⟩ = entry_phase · (−1)^{popcount(z∧b)}
    entry_phase: Complex64,
}

fn action_of(term: &PauliTerm) -> TermAction {
    let y_count = (term.x_mask() & term.z_mask()).count_ones() as u8;
    let exponent = (term.phase_exponent() + y_count) % 4;
    let entry_phase = match exponent {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    TermAction {
        x_mask: term.x_mask() as usize,
        z_mask: term.z_mask() as usize,
        entry_phase,
    }
}

#[inline]
fn parity_sign(mask: usize, b: usize) -> f64 {
    if (mask & b).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// In-place e^{−iθP}ψ on an amplitude vector.
pub fn rotate_vector(amplitudes: &mut [Complex64], term: &PauliTerm, angle: f64) {
    #[cfg(feature = "parallel")]
    {
        if amplitudes.len() >= PAR_THRESHOLD {
            return rotate_vector_par(amplitudes, term, angle);
        }
    }
    rotate_vector_seq(amplitudes, term, angle);
}

/// Sequential reference implementation of `rotate_vector`.
pub fn rotate_vector_seq(amplitudes: &mut [Complex64], term: &PauliTerm, angle: f64) {
    let act = action_of(term);
    let cos = angle.cos();
    let misin = Complex64::new(0.0, -angle.sin());

    if act.x_mask == 0 {
        // diagonal action: ψ'[b] = (cos − i sin·λ(b))·ψ[b]
        for (b, amp) in amplitudes.iter_mut().enumerate() {
            let lambda = act.entry_phase * parity_sign(act.z_mask, b);
            *amp = *amp * cos + *amp * misin * lambda;
        }
        return;
    }

    let pivot = usize::BITS as usize - 1 - act.x_mask.leading_zeros() as usize;
    let block = 1usize << (pivot + 1);
    let half = block >> 1;
    let x_rest = act.x_mask & !(1 << pivot);
    for chunk_index in 0..amplitudes.len() / block {
        let base = chunk_index * block;
        let (lo, hi) = amplitudes[base..base + block].split_at_mut(half);
        rotate_block(lo, hi, base, half, x_rest, &act, cos, misin);
    }
}

#[cfg(feature = "parallel")]
fn rotate_vector_par(amplitudes: &mut [Complex64], term: &PauliTerm, angle: f64) {
    let act = action_of(term);
    let cos = angle.cos();
    let misin = Complex64::new(0.0, -angle.sin());

    if act.x_mask == 0 {
        amplitudes.par_iter_mut().enumerate().for_each(|(b, amp)| {
            let lambda = act.entry_phase * parity_sign(act.z_mask, b);
            *amp = *amp * cos + *amp * misin * lambda;
        });
        return;
    }

    let pivot = usize::BITS as usize - 1 - act.x_mask.leading_zeros() as usize;
    let block = 1usize << (pivot + 1);
    let half = block >> 1;
    let x_rest = act.x_mask & !(1 << pivot);
    amplitudes
        .par_chunks_mut(block)
        .enumerate()
        .for_each(|(chunk_index, chunk)| {
            let base = chunk_index * block;
            let (lo, hi) = chunk.split_at_mut(half);
            rotate_block(lo, hi, base, half, x_rest, &act, cos, misin);
        });
}

/// Pair update within one pivot block: lo[j] pairs with hi[j ^ x_rest].
#[inline]
fn rotate_block(
    lo: &mut [Complex64],
    hi: &mut [Complex64],
    base: usize,
    half: usize,
    x_rest: usize,
    act: &TermAction,
    cos: f64,
    misin: Complex64,
) {
    // every j in the low half is the pivot-bit-0 member of its own orbit,
    // so each pair is visited exactly once
    for j in 0..half {
        let k = j ^ x_rest;
        let b_lo = base + j;
        let b_hi = base + half + k;
        let a = lo[j];
        let b = hi[k];
        // λ for the source index of each contribution
        let lam_from_hi = act.entry_phase * parity_sign(act.z_mask, b_hi);
        let lam_from_lo = act.entry_phase * parity_sign(act.z_mask, b_lo);
        lo[j] = a * cos + b * misin * lam_from_hi;
        hi[k] = b * cos + a * misin * lam_from_lo;
    }
}

/// Left conjugation step on a row-major density matrix: ρ ← U ρ with
/// U = e^{−iθP}. Rows r and r⊕x combine; each column is independent.
pub fn rotate_density_left(elements: &mut [Complex64], dim: usize, term: &PauliTerm, angle: f64) {
    let act = action_of(term);
    let cos = angle.cos();
    let misin = Complex64::new(0.0, -angle.sin());

    if act.x_mask == 0 {
        let row_op = |r: usize, row: &mut [Complex64]| {
            let lambda = act.entry_phase * parity_sign(act.z_mask, r);
            let f = Complex64::new(cos, 0.0) + misin * lambda;
            for v in row.iter_mut() {
                *v *= f;
            }
        };
        #[cfg(feature = "parallel")]
        {
            if elements.len() >= PAR_THRESHOLD {
                elements
                    .par_chunks_mut(dim)
                    .enumerate()
                    .for_each(|(r, row)| row_op(r, row));
                return;
            }
        }
        for (r, row) in elements.chunks_mut(dim).enumerate() {
            row_op(r, row);
        }
        return;
    }

    let block_rows = {
        let pivot = usize::BITS as usize - 1 - act.x_mask.leading_zeros() as usize;
        1usize << (pivot + 1)
    };
    let half = block_rows >> 1;
    let x_rest = act.x_mask & !(half);
    let block_op = |block_index: usize, block: &mut [Complex64]| {
        let row_base = block_index * block_rows;
        let (lo, hi) = block.split_at_mut(half * dim);
        for j in 0..half {
            let k = j ^ x_rest;
            let r_lo = row_base + j;
            let r_hi = row_base + half + k;
            let lam_from_hi = act.entry_phase * parity_sign(act.z_mask, r_hi);
            let lam_from_lo = act.entry_phase * parity_sign(act.z_mask, r_lo);
            let row_a = &mut lo[j * dim..(j + 1) * dim];
            let row_b = &mut hi[k * dim..(k + 1) * dim];
            for (a, b) in row_a.iter_mut().zip(row_b.iter_mut()) {
                let va = *a;
                let vb = *b;
                *a = va * cos + vb * misin * lam_from_hi;
                *b = vb * cos + va * misin * lam_from_lo;
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        if elements.len() >= PAR_THRESHOLD {
            elements
                .par_chunks_mut(block_rows * dim)
                .enumerate()
                .for_each(|(i, block)| block_op(i, block));
            return;
        }
    }
    for (i, block) in elements.chunks_mut(block_rows * dim).enumerate() {
        block_op(i, block);
    }
}

/// Right conjugation step on a row-major density matrix: ρ ← ρ U† with
/// U = e^{−iθP}; each row transforms independently.
pub fn rotate_density_right(elements: &mut [Complex64], dim: usize, term: &PauliTerm, angle: f64) {
    let act = action_of(term);
    let cos = angle.cos();
    // ρU† adds +i sin ρP
    let pisin = Complex64::new(0.0, angle.sin());

    let row_op = |row: &mut [Complex64]| {
        if act.x_mask == 0 {
            for (c, v) in row.iter_mut().enumerate() {
                let lambda = act.entry_phase * parity_sign(act.z_mask, c);
                *v = *v * cos + *v * pisin * lambda;
            }
        } else {
            for c in 0..dim {
                let c2 = c ^ act.x_mask;
                if c2 < c {
                    continue;
                }
                // (ρP)[r][c] = ρ[r][c⊕x] · ⟨c⊕x|P... P[c⊕x][c] entry source
                let lam_c = act.entry_phase * parity_sign(act.z_mask, c);
                let lam_c2 = act.entry_phase * parity_sign(act.z_mask, c2);
                let va = row[c];
                let vb = row[c2];
                row[c] = va * cos + vb * pisin * lam_c;
                row[c2] = vb * cos + va * pisin * lam_c2;
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        if elements.len() >= PAR_THRESHOLD {
            elements.par_chunks_mut(dim).for_each(row_op);
            return;
        }
    }
    for row in elements.chunks_mut(dim) {
        row_op(row);
    }
}

/// acc += scale · src, elementwise.
pub fn axpy(acc: &mut [Complex64], src: &[Complex64], scale: f64) {
    #[cfg(feature = "parallel")]
    {
        if acc.len() >= PAR_THRESHOLD {
            acc.par_iter_mut().zip(src.par_iter()).for_each(|(a, s)| {
                *a += s * scale;
            });
            return;
        }
    }
    for (a, s) in acc.iter_mut().zip(src) {
        *a += s * scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliOp, PauliTerm};

    #[test]
    fn sequential_and_dispatch_agree() {
        let n = 13; // above the parallel threshold
        let dim = 1usize << n;
        let mk = || -> Vec<Complex64> {
            (0..dim)
                .map(|i| Complex64::new((i as f64 * 0.13).sin(), (i as f64 * 0.29).cos()))
                .collect()
        };
        for ops in [
            vec![(0, PauliOp::X)],
            vec![(3, PauliOp::Y), (9, PauliOp::Z)],
            vec![(1, PauliOp::Z), (5, PauliOp::Z)],
            vec![(12, PauliOp::Y), (0, PauliOp::X), (7, PauliOp::Y)],
        ] {
            let term = PauliTerm::from_ops(n, &ops).unwrap();
            let mut a = mk();
            let mut b = mk();
            rotate_vector(&mut a, &term, 0.377);
            rotate_vector_seq(&mut b, &term, 0.377);
            assert_eq!(a, b, "bitwise agreement for {ops:?}");
        }
    }
}
