//! Exact algebra of n-qubit Pauli strings and their sparse linear combinations.
//!
//! A Pauli string is stored in symplectic form: bit i of `x_mask` is set iff
//! qubit i carries X or Y, bit i of `z_mask` iff it carries Z or Y. The global
//! phase is a power of i, so that
//!
//!   term = i^phase_exponent · ⊗_q letter(x_q, z_q),
//!
//! with letter(0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y. Products then reduce to
//! XORs of masks plus a phase bookkeeping rule, and commutation to the parity
//! of the symplectic inner product
//!
//!   ⟨p,q⟩ = popcount(p.x & q.z) + popcount(p.z & q.x)  (mod 2).
//!
//! Sums keep one complex coefficient per (z_mask, x_mask) key, ordered
//! ascending by (z, x) so every serialization is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{SzeError, SzeResult};

/// Coefficients with magnitude below `PRUNE_REL_TOL * l1_norm` are dropped
/// after every sum-level operation. All coefficients arising from the target
/// expansions are dyadic/rational combinations, so true zeros sit far below.
pub const PRUNE_REL_TOL: f64 = 1e-12;

/// Dense matrices are refused above this qubit count.
pub const DENSE_QUBIT_LIMIT: usize = 12;

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => PauliOp::I,
            (true, false) => PauliOp::X,
            (false, true) => PauliOp::Z,
            (true, true) => PauliOp::Y,
        }
    }

    fn letter(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }
}

/// Canonical key of a Pauli string: masks only, no phase.
///
/// Ordering is ascending (z_mask, x_mask), the term order used for all
/// serialized output and for deterministic sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliKey {
    pub z_mask: u64,
    pub x_mask: u64,
}

impl PauliKey {
    pub const IDENTITY: PauliKey = PauliKey { z_mask: 0, x_mask: 0 };

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    /// True iff the two strings commute as operators.
    pub fn commutes(&self, other: &PauliKey) -> bool {
        let s = (self.x_mask & other.z_mask).count_ones()
            + (self.z_mask & other.x_mask).count_ones();
        s % 2 == 0
    }
}

/// Phase increment (as a power of i) picked up when multiplying the canonical
/// letter strings of `a` and `b`, left to right.
#[inline]
fn product_phase(a: PauliKey, b: PauliKey) -> u8 {
    let y_a = (a.x_mask & a.z_mask).count_ones();
    let y_b = (b.x_mask & b.z_mask).count_ones();
    let anti = (a.z_mask & b.x_mask).count_ones();
    let y_ab = ((a.x_mask ^ b.x_mask) & (a.z_mask ^ b.z_mask)).count_ones();
    // going through the X^x Z^z normal form: each Y contributes one i,
    // each Z-past-X swap contributes a sign
    ((y_a + y_b + 2 * anti + 4 * y_ab - y_ab) % 4) as u8
}

#[inline]
fn phase_factor(exponent: u8) -> Complex64 {
    match exponent % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn check_qubits(a: usize, b: usize) -> SzeResult<()> {
    if a != b {
        return Err(SzeError::QubitMismatch(a, b));
    }
    Ok(())
}

fn mask_for(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

/// A signed/phased n-qubit Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliTerm {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase_exponent: u8,
}

impl PauliTerm {
    pub fn identity(n_qubits: usize) -> SzeResult<Self> {
        Self::from_masks(n_qubits, 0, 0, 0)
    }

    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64, phase_exponent: u8) -> SzeResult<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(SzeError::TooManyQubits(n_qubits));
        }
        let m = mask_for(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(SzeError::TooManyQubits(n_qubits));
        }
        Ok(PauliTerm {
            n_qubits,
            x_mask,
            z_mask,
            phase_exponent: phase_exponent % 4,
        })
    }

    pub fn from_key(n_qubits: usize, key: PauliKey, phase_exponent: u8) -> SzeResult<Self> {
        Self::from_masks(n_qubits, key.x_mask, key.z_mask, phase_exponent)
    }

    /// Build from a list of (qubit, op) pairs; identity ops are ignored.
    pub fn from_ops(n_qubits: usize, ops: &[(usize, PauliOp)]) -> SzeResult<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(q, op) in ops {
            if q >= n_qubits {
                return Err(SzeError::TooManyQubits(n_qubits));
            }
            match op {
                PauliOp::I => {}
                PauliOp::X => x |= 1 << q,
                PauliOp::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                }
                PauliOp::Z => z |= 1 << q,
            }
        }
        Self::from_masks(n_qubits, x, z, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase_exponent
    }

    /// Global factor i^phase_exponent as a complex number.
    pub fn phase(&self) -> Complex64 {
        phase_factor(self.phase_exponent)
    }

    pub fn key(&self) -> PauliKey {
        PauliKey { z_mask: self.z_mask, x_mask: self.x_mask }
    }

    pub fn op_at(&self, qubit: usize) -> PauliOp {
        PauliOp::from_bits(self.x_mask >> qubit & 1 == 1, self.z_mask >> qubit & 1 == 1)
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.key().weight()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0 && self.phase_exponent == 0
    }

    /// Operator product self · other.
    pub fn multiply(&self, other: &PauliTerm) -> SzeResult<PauliTerm> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let phase = self.phase_exponent + other.phase_exponent + product_phase(self.key(), other.key());
        Ok(PauliTerm {
            n_qubits: self.n_qubits,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase_exponent: phase % 4,
        })
    }

    pub fn commutes_with(&self, other: &PauliTerm) -> SzeResult<bool> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        Ok(self.key().commutes(&other.key()))
    }

    /// Dense 2^n × 2^n matrix (qubit 0 indexes the least significant bit).
    pub fn to_dense(&self) -> SzeResult<DMatrix<Complex64>> {
        dense_of_key(self.n_qubits, self.key()).map(|m| m * self.phase())
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase_exponent {
            0 => {}
            1 => write!(f, "+i ")?,
            2 => write!(f, "- ")?,
            _ => write!(f, "-i ")?,
        }
        if self.x_mask == 0 && self.z_mask == 0 {
            return write!(f, "I");
        }
        let mut first = true;
        for q in 0..self.n_qubits {
            let op = self.op_at(q);
            if op != PauliOp::I {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}{}", op.letter(), q)?;
                first = false;
            }
        }
        Ok(())
    }
}

/// Dense matrix of a bare key (phase-free string), built by Kronecker factors.
fn dense_of_key(n_qubits: usize, key: PauliKey) -> SzeResult<DMatrix<Complex64>> {
    if n_qubits > DENSE_QUBIT_LIMIT {
        return Err(SzeError::DenseLimit { n_qubits, limit: DENSE_QUBIT_LIMIT });
    }
    let dim = 1usize << n_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    // ⟨r|P|c⟩ is nonzero only for r = c ^ x_mask; the entry is
    // i^{#Y} (−1)^{popcount(z & c)} with the i per Y site folded via x&z.
    let y_phase = phase_factor(((key.x_mask & key.z_mask).count_ones() % 4) as u8);
    for c in 0..dim {
        let r = c ^ key.x_mask as usize;
        let sign = if ((key.z_mask as usize & c).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        m[(r, c)] = y_phase * sign;
    }
    Ok(m)
}

/// A sparse complex-weighted combination of Pauli strings.
///
/// Terms are held sorted by key; the global phase of each contributing string
/// is folded into its coefficient, so keys are canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(PauliKey, Complex64)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        PauliSum { n_qubits, terms: Vec::new() }
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliSum {
            n_qubits,
            terms: vec![(PauliKey::IDENTITY, Complex64::new(1.0, 0.0))],
        }
    }

    pub fn from_weighted_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (PauliTerm, Complex64)>,
    ) -> SzeResult<Self> {
        let mut map: BTreeMap<PauliKey, Complex64> = BTreeMap::new();
        for (t, c) in terms {
            check_qubits(n_qubits, t.n_qubits())?;
            *map.entry(t.key()).or_insert(Complex64::new(0.0, 0.0)) += c * t.phase();
        }
        let mut sum = PauliSum {
            n_qubits,
            terms: map.into_iter().collect(),
        };
        sum.prune();
        Ok(sum)
    }

    /// Construct directly from key/coefficient pairs (merged and pruned).
    pub fn from_key_coeffs(
        n_qubits: usize,
        pairs: impl IntoIterator<Item = (PauliKey, Complex64)>,
    ) -> Self {
        let mut map: BTreeMap<PauliKey, Complex64> = BTreeMap::new();
        for (k, c) in pairs {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        let mut sum = PauliSum {
            n_qubits,
            terms: map.into_iter().collect(),
        };
        sum.prune();
        sum
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (z, x) ascending order.
    pub fn terms(&self) -> &[(PauliKey, Complex64)] {
        &self.terms
    }

    pub fn coefficient(&self, key: PauliKey) -> Complex64 {
        match self.terms.binary_search_by_key(&key, |(k, _)| *k) {
            Ok(i) => self.terms[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Sum of coefficient magnitudes.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    /// All coefficients real within `tol` relative to the l1 norm.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let scale = self.l1_norm().max(1.0);
        self.terms.iter().all(|(_, c)| c.im.abs() <= tol * scale)
    }

    /// All coefficients purely imaginary within `tol` relative to the l1 norm.
    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        let scale = self.l1_norm().max(1.0);
        self.terms.iter().all(|(_, c)| c.re.abs() <= tol * scale)
    }

    fn prune(&mut self) {
        let l1: f64 = self.l1_norm();
        let cut = PRUNE_REL_TOL * l1;
        self.terms.retain(|(_, c)| c.norm() > cut && c.norm() > 0.0);
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(k, c)| (*k, c * factor)).collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &PauliSum) -> SzeResult<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        // merge-join of two sorted term lists
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                std::cmp::Ordering::Less => {
                    terms.push(self.terms[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push(other.terms[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    terms.push((self.terms[i].0, self.terms[i].1 + other.terms[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        let mut out = PauliSum { n_qubits: self.n_qubits, terms };
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &PauliSum) -> SzeResult<PauliSum> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Operator product self · other.
    pub fn mul(&self, other: &PauliSum) -> SzeResult<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let terms = accumulate_products(&self.terms, &other.terms, ProductKind::Full);
        let mut out = PauliSum { n_qubits: self.n_qubits, terms };
        out.prune();
        Ok(out)
    }

    /// Commutator [self, other] = self·other − other·self.
    ///
    /// Only anticommuting key pairs contribute ([P,Q] = 2PQ for those),
    /// so the pair scan is filtered before any phase work.
    pub fn commutator(&self, other: &PauliSum) -> SzeResult<PauliSum> {
        check_qubits(self.n_qubits, other.n_qubits)?;
        let terms = accumulate_products(&self.terms, &other.terms, ProductKind::Commutator);
        let mut out = PauliSum { n_qubits: self.n_qubits, terms };
        out.prune();
        Ok(out)
    }

    /// Dense 2^n × 2^n matrix of the sum.
    pub fn to_dense(&self) -> SzeResult<DMatrix<Complex64>> {
        if self.n_qubits > DENSE_QUBIT_LIMIT {
            return Err(SzeError::DenseLimit {
                n_qubits: self.n_qubits,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for &(key, coeff) in &self.terms {
            let y_phase = phase_factor(((key.x_mask & key.z_mask).count_ones() % 4) as u8);
            for c in 0..dim {
                let r = c ^ key.x_mask as usize;
                let sign = if ((key.z_mask as usize & c).count_ones()) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                m[(r, c)] += coeff * y_phase * sign;
            }
        }
        Ok(m)
    }

    /// Iterate terms as (phase-free PauliTerm, coefficient).
    pub fn iter_terms(&self) -> impl Iterator<Item = (PauliTerm, Complex64)> + '_ {
        self.terms.iter().map(move |&(k, c)| {
            (
                PauliTerm {
                    n_qubits: self.n_qubits,
                    x_mask: k.x_mask,
                    z_mask: k.z_mask,
                    phase_exponent: 0,
                },
                c,
            )
        })
    }

    /// Exact key-wise equality of pruned forms within `tol` per coefficient.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        if self.n_qubits != other.n_qubits {
            return false;
        }
        match self.sub(other) {
            Ok(d) => d.terms.iter().all(|(_, c)| c.norm() <= tol),
            Err(_) => false,
        }
    }
}

enum ProductKind {
    Full,
    Commutator,
}

/// Shared pair-product accumulator for `mul` and `commutator`.
///
/// The left operand is split into fixed-size chunks that are processed
/// independently (in parallel when the `parallel` feature is on) and merged
/// in chunk order, so the floating-point accumulation order per key is
/// identical for every thread count.
fn accumulate_products(
    a: &[(PauliKey, Complex64)],
    b: &[(PauliKey, Complex64)],
    kind: ProductKind,
) -> Vec<(PauliKey, Complex64)> {
    const CHUNK: usize = 64;
    let commutator = matches!(kind, ProductKind::Commutator);

    let chunk_maps: Vec<FxHashMap<PauliKey, Complex64>> = {
        let work = |chunk: &[(PauliKey, Complex64)]| -> FxHashMap<PauliKey, Complex64> {
            let mut local: FxHashMap<PauliKey, Complex64> = FxHashMap::default();
            local.reserve(chunk.len().saturating_mul(b.len()).min(1 << 16));
            for &(ka, ca) in chunk {
                for &(kb, cb) in b {
                    if commutator && ka.commutes(&kb) {
                        continue;
                    }
                    let key = PauliKey {
                        z_mask: ka.z_mask ^ kb.z_mask,
                        x_mask: ka.x_mask ^ kb.x_mask,
                    };
                    let mut c = ca * cb * phase_factor(product_phase(ka, kb));
                    if commutator {
                        c *= 2.0;
                    }
                    *local.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
                }
            }
            local
        };

        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            a.par_chunks(CHUNK).map(work).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            a.chunks(CHUNK).map(work).collect()
        }
    };

    let mut master: FxHashMap<PauliKey, Complex64> = FxHashMap::default();
    for m in chunk_maps {
        for (k, c) in m {
            *master.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
    }
    let mut terms: Vec<(PauliKey, Complex64)> = master.into_iter().collect();
    terms.sort_unstable_by_key(|(k, _)| *k);
    terms
}

/// Sequential reference path for the product accumulator; kept for the
/// bench suite and the thread-count independence tests.
#[doc(hidden)]
pub fn mul_sequential(a: &PauliSum, b: &PauliSum) -> SzeResult<PauliSum> {
    check_qubits(a.n_qubits, b.n_qubits)?;
    let mut master: FxHashMap<PauliKey, Complex64> = FxHashMap::default();
    for &(ka, ca) in &a.terms {
        for &(kb, cb) in &b.terms {
            let key = PauliKey {
                z_mask: ka.z_mask ^ kb.z_mask,
                x_mask: ka.x_mask ^ kb.x_mask,
            };
            let c = ca * cb * phase_factor(product_phase(ka, kb));
            *master.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
    }
    let mut terms: Vec<(PauliKey, Complex64)> = master.into_iter().collect();
    terms.sort_unstable_by_key(|(k, _)| *k);
    let mut out = PauliSum { n_qubits: a.n_qubits, terms };
    out.prune();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------
//
//   n_qubits: <n>
//   <coeff> <LETTER><index> ...
//
// One term per line in canonical order; `#` starts a comment. A term with no
// letters is the identity. Coefficients are `<real>` or `<real><+/-><imag>i`.

/// Format a coefficient as `<real>` or `<real><+/-><imag>i`.
pub fn format_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

fn parse_coeff(tok: &str) -> Option<Complex64> {
    if let Some(body) = tok.strip_suffix('i') {
        // split at the sign separating real and imaginary parts (not a
        // leading sign and not an exponent sign)
        let bytes = body.as_bytes();
        for i in (1..bytes.len()).rev() {
            let ch = bytes[i] as char;
            if (ch == '+' || ch == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                let re: f64 = body[..i].parse().ok()?;
                let sign = if ch == '-' { -1.0 } else { 1.0 };
                let im: f64 = body[i + 1..].parse().ok()?;
                return Some(Complex64::new(re, sign * im));
            }
        }
        // pure imaginary: `2.5i`
        let im: f64 = body.parse().ok()?;
        return Some(Complex64::new(0.0, im));
    }
    tok.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

impl PauliSum {
    /// Serialize in the line-oriented text format, including the header.
    pub fn to_text(&self) -> String {
        let mut out = format!("n_qubits: {}\n", self.n_qubits);
        out.push_str(&self.terms_to_text());
        out
    }

    /// Serialize only the term lines (used where a header is already present).
    pub fn terms_to_text(&self) -> String {
        let mut out = String::new();
        for &(key, coeff) in &self.terms {
            out.push_str(&format_coeff(coeff));
            if key != PauliKey::IDENTITY {
                for q in 0..self.n_qubits {
                    let op = PauliOp::from_bits(key.x_mask >> q & 1 == 1, key.z_mask >> q & 1 == 1);
                    if op != PauliOp::I {
                        out.push(' ');
                        out.push(op.letter());
                        out.push_str(&q.to_string());
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// Parse the text format; requires the `n_qubits:` header line.
    pub fn from_text(text: &str) -> SzeResult<Self> {
        let mut n_qubits: Option<usize> = None;
        let mut pairs: Vec<(PauliKey, Complex64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("n_qubits:") {
                let n = rest.trim().parse::<usize>().map_err(|_| SzeError::Parse {
                    line: lineno + 1,
                    message: format!("invalid qubit count `{}`", rest.trim()),
                })?;
                if n == 0 || n > 64 {
                    return Err(SzeError::Parse {
                        line: lineno + 1,
                        message: format!("qubit count {n} out of range 1..=64"),
                    });
                }
                n_qubits = Some(n);
                continue;
            }
            let n = n_qubits.ok_or_else(|| SzeError::Parse {
                line: lineno + 1,
                message: "term before the mandatory `n_qubits: <n>` header".into(),
            })?;
            let (key, coeff) = parse_term_line(line, n, lineno + 1)?;
            pairs.push((key, coeff));
        }
        let n = n_qubits.ok_or_else(|| SzeError::Parse {
            line: 1,
            message: "missing `n_qubits: <n>` header".into(),
        })?;
        Ok(PauliSum::from_key_coeffs(n, pairs))
    }
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub(crate) fn parse_term_line(
    line: &str,
    n_qubits: usize,
    lineno: usize,
) -> SzeResult<(PauliKey, Complex64)> {
    let mut toks = line.split_whitespace();
    let coeff_tok = toks.next().ok_or_else(|| SzeError::Parse {
        line: lineno,
        message: "empty term line".into(),
    })?;
    let coeff = parse_coeff(coeff_tok).ok_or_else(|| SzeError::Parse {
        line: lineno,
        message: format!("invalid coefficient `{coeff_tok}`"),
    })?;
    let mut x = 0u64;
    let mut z = 0u64;
    for tok in toks {
        let mut chars = tok.chars();
        let letter = chars.next().unwrap_or(' ');
        let idx: usize = chars.as_str().parse().map_err(|_| SzeError::Parse {
            line: lineno,
            message: format!("invalid site token `{tok}`"),
        })?;
        if idx >= n_qubits {
            return Err(SzeError::Parse {
                line: lineno,
                message: format!("qubit index {idx} exceeds n_qubits {n_qubits}"),
            });
        }
        match letter {
            'X' | 'x' => x |= 1 << idx,
            'Y' | 'y' => {
                x |= 1 << idx;
                z |= 1 << idx;
            }
            'Z' | 'z' => z |= 1 << idx,
            'I' | 'i' => {}
            _ => {
                return Err(SzeError::Parse {
                    line: lineno,
                    message: format!("invalid site token `{tok}`"),
                })
            }
        }
    }
    Ok((PauliKey { z_mask: z, x_mask: x }, coeff))
}
