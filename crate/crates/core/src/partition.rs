//! Splits a Pauli sum into internally commuting subsets by coloring the
//! anticommutation graph: vertices are terms, edges join anticommuting
//! pairs, a proper coloring is a valid partition.
//!
//! DSATUR runs first (ties broken by canonical term order, so output is
//! deterministic), then a bounded Kempe-chain pass tries to dissolve the
//! smallest color class.

use num_complex::Complex64;

use crate::error::SzeResult;
use crate::pauli::{PauliKey, PauliSum};

const KEMPE_ITERATION_LIMIT: usize = 500;

/// A partition of a Pauli sum into internally commuting parts.
#[derive(Debug, Clone)]
pub struct CommutingPartition {
    parts: Vec<PauliSum>,
    source: PauliSum,
}

impl CommutingPartition {
    pub fn parts(&self) -> &[PauliSum] {
        &self.parts
    }

    pub fn source(&self) -> &PauliSum {
        &self.source
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// Assemble from explicit parts (used by the layered-model loader); the
    /// caller is expected to gate with `verify_partition`.
    pub fn from_parts(parts: Vec<PauliSum>, source: PauliSum) -> Self {
        CommutingPartition { parts, source }
    }
}

/// Color the anticommutation graph of `h` and return the parts, largest
/// first (ties by lexicographically smallest member key).
pub fn partition(h: &PauliSum) -> CommutingPartition {
    let keys: Vec<PauliKey> = h.terms().iter().map(|(k, _)| *k).collect();
    let m = keys.len();
    if m == 0 {
        return CommutingPartition { parts: Vec::new(), source: h.clone() };
    }

    // adjacency over anticommuting pairs
    let mut adj = vec![Vec::new(); m];
    for i in 0..m {
        for j in i + 1..m {
            if !keys[i].commutes(&keys[j]) {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }

    let mut color = dsatur(&adj, m);
    kempe_improve(&adj, &mut color);

    let ncolors = color.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut groups: Vec<Vec<(PauliKey, Complex64)>> = vec![Vec::new(); ncolors];
    for (v, &(key, coeff)) in h.terms().iter().enumerate() {
        groups[color[v]].push((key, coeff));
    }
    let mut parts: Vec<PauliSum> = groups
        .into_iter()
        .filter(|g| !g.is_empty())
        .map(|g| PauliSum::from_key_coeffs(h.n_qubits(), g))
        .collect();
    parts.sort_by(|a, b| {
        b.num_terms()
            .cmp(&a.num_terms())
            .then_with(|| a.terms()[0].0.cmp(&b.terms()[0].0))
    });
    CommutingPartition { parts, source: h.clone() }
}

fn dsatur(adj: &[Vec<usize>], m: usize) -> Vec<usize> {
    let mut color = vec![usize::MAX; m];
    let mut saturation: Vec<std::collections::BTreeSet<usize>> = vec![Default::default(); m];
    for _ in 0..m {
        // max saturation, then max degree, then canonical order
        let mut best = usize::MAX;
        for v in 0..m {
            if color[v] != usize::MAX {
                continue;
            }
            if best == usize::MAX {
                best = v;
                continue;
            }
            let key_v = (saturation[v].len(), adj[v].len());
            let key_b = (saturation[best].len(), adj[best].len());
            if key_v > key_b {
                best = v;
            }
        }
        let mut c = 0;
        while saturation[best].contains(&c) {
            c += 1;
        }
        color[best] = c;
        for &u in &adj[best] {
            saturation[u].insert(c);
        }
    }
    color
}

/// Try to empty the smallest color class by Kempe-chain swaps; bounded and
/// sequential so results are identical across runs and thread counts.
fn kempe_improve(adj: &[Vec<usize>], color: &mut [usize]) {
    let mut iterations = 0;
    loop {
        let ncolors = color.iter().map(|&c| c + 1).max().unwrap_or(0);
        if ncolors <= 1 {
            return;
        }
        let mut sizes = vec![0usize; ncolors];
        for &c in color.iter() {
            sizes[c] += 1;
        }
        let smallest = (0..ncolors).min_by_key(|&c| (sizes[c], c)).unwrap();

        let mut improved = false;
        'search: for v in 0..color.len() {
            if color[v] != smallest {
                continue;
            }
            for target in 0..ncolors {
                if target == smallest {
                    continue;
                }
                iterations += 1;
                if iterations > KEMPE_ITERATION_LIMIT {
                    return;
                }
                // Kempe chain on colors {smallest, target} containing v
                let mut component = vec![false; color.len()];
                let mut stack = vec![v];
                component[v] = true;
                let mut gain: isize = 0;
                while let Some(u) = stack.pop() {
                    gain += if color[u] == smallest { -1 } else { 1 };
                    for &w in &adj[u] {
                        if !component[w] && (color[w] == smallest || color[w] == target) {
                            component[w] = true;
                            stack.push(w);
                        }
                    }
                }
                if gain < 0 {
                    for (u, inside) in component.iter().enumerate() {
                        if *inside {
                            color[u] = if color[u] == smallest { target } else { smallest };
                        }
                    }
                    improved = true;
                    break 'search;
                }
            }
        }
        if !improved {
            return;
        }
        // if the class emptied, compact color indices
        let mut sizes = vec![0usize; color.iter().map(|&c| c + 1).max().unwrap()];
        for &c in color.iter() {
            sizes[c] += 1;
        }
        if sizes.iter().any(|&s| s == 0) {
            let mut remap = vec![usize::MAX; sizes.len()];
            let mut next = 0;
            for (c, &s) in sizes.iter().enumerate() {
                if s > 0 {
                    remap[c] = next;
                    next += 1;
                }
            }
            for c in color.iter_mut() {
                *c = remap[*c];
            }
        }
    }
}

/// Check all partition invariants: pairwise commutation inside every part,
/// disjoint keys, exact coefficient-wise reassembly of the source, and the
/// deterministic part ordering.
pub fn verify_partition(p: &CommutingPartition) -> bool {
    verify_partition_detailed(p).is_ok()
}

pub(crate) fn verify_partition_detailed(p: &CommutingPartition) -> SzeResult<()> {
    use crate::error::SzeError;
    let mut seen = std::collections::BTreeSet::new();
    for part in &p.parts {
        let terms = part.terms();
        for (i, (ki, _)) in terms.iter().enumerate() {
            if !seen.insert(*ki) {
                return Err(SzeError::PartitionInvalid("duplicate key across parts".into()));
            }
            for (kj, _) in terms.iter().skip(i + 1) {
                if !ki.commutes(kj) {
                    return Err(SzeError::PartitionInvalid(format!(
                        "anticommuting pair inside a part: keys ({:#x},{:#x}) and ({:#x},{:#x})",
                        ki.z_mask, ki.x_mask, kj.z_mask, kj.x_mask
                    )));
                }
            }
        }
    }
    let mut union = PauliSum::zero(p.source.n_qubits());
    for part in &p.parts {
        union = union.add(part)?;
    }
    if !union.approx_eq(&p.source, 0.0) {
        return Err(SzeError::PartitionInvalid(
            "parts do not reassemble the source coefficient-wise".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{PauliOp, PauliTerm};

    fn c1() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn all_z_sum_is_one_part() {
        let n = 5;
        let terms = (0..n - 1).map(|i| {
            (
                PauliTerm::from_ops(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Z)]).unwrap(),
                c1(),
            )
        });
        let h = PauliSum::from_weighted_terms(n, terms).unwrap();
        let p = partition(&h);
        assert_eq!(p.num_parts(), 1);
        assert!(verify_partition(&p));
    }

    #[test]
    fn empty_sum_gives_empty_partition() {
        let p = partition(&PauliSum::zero(3));
        assert_eq!(p.num_parts(), 0);
        assert!(verify_partition(&p));
    }

    #[test]
    fn mixed_zz_x_partition_is_valid() {
        let n = 4;
        let mut terms = Vec::new();
        for i in 0..n - 1 {
            terms.push((
                PauliTerm::from_ops(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Z)]).unwrap(),
                c1(),
            ));
        }
        for q in 0..n {
            terms.push((PauliTerm::from_ops(n, &[(q, PauliOp::X)]).unwrap(), c1()));
        }
        let h = PauliSum::from_weighted_terms(n, terms).unwrap();
        let p = partition(&h);
        assert_eq!(p.num_parts(), 2, "TFIM splits into ZZ and X layers");
        assert!(verify_partition(&p));
    }

    #[test]
    fn hand_built_invalid_partition_is_rejected() {
        let n = 2;
        let zz = PauliTerm::from_ops(n, &[(0, PauliOp::Z), (1, PauliOp::Z)]).unwrap();
        let x0 = PauliTerm::from_ops(n, &[(0, PauliOp::X)]).unwrap();
        let source =
            PauliSum::from_weighted_terms(n, [(zz, c1()), (x0, c1())]).unwrap();
        let bad = CommutingPartition::from_parts(vec![source.clone()], source);
        assert!(!verify_partition(&bad));
    }

    #[test]
    fn determinism_across_runs() {
        let n = 6;
        let mut terms = Vec::new();
        for i in 0..n - 1 {
            terms.push((
                PauliTerm::from_ops(n, &[(i, PauliOp::Y), (i + 1, PauliOp::Z)]).unwrap(),
                Complex64::new(-1.0, 0.0),
            ));
            terms.push((
                PauliTerm::from_ops(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Y)]).unwrap(),
                Complex64::new(-1.0, 0.0),
            ));
        }
        let h = PauliSum::from_weighted_terms(n, terms).unwrap();
        let p1 = partition(&h);
        let p2 = partition(&h);
        assert_eq!(p1.num_parts(), p2.num_parts());
        for (a, b) in p1.parts().iter().zip(p2.parts()) {
            assert!(a.approx_eq(b, 0.0));
        }
        assert_eq!(p1.num_parts(), 2, "even/odd bond classes");
        // canonical output order: size descending, then smallest member key
        for w in p1.parts().windows(2) {
            let ord = w[1]
                .num_terms()
                .cmp(&w[0].num_terms())
                .then_with(|| w[0].terms()[0].0.cmp(&w[1].terms()[0].0));
            assert_ne!(ord, std::cmp::Ordering::Greater);
        }
    }
}
