//! Builds executable per-time-step plans: nested stochastic Zassenhaus
//! expansions SZE_{k,p} and Suzuki-Trotter product formulas PF_p, and counts
//! their gate costs.
//!
//! SZE_{k,p} construction: extract Zassenhaus exponents for the input layers
//! up to order p. Every exponent of effective time order m ≤ k is split into
//! internally commuting parts (each a Direct factor at order m); the split
//! spawns a nested extraction whose order-j exponents carry effective order
//! m·j and recurse under the same rule. Exponents of effective order in
//! [k+1, p] are summed per order and each order becomes one Stochastic
//! factor; orders above p are truncated.
//!
//! Gate counts use the CNOT-ladder convention, 2·(weight−1) CNOTs per
//! weight-w rotation, with no cancellation across adjacent rotations. In an
//! SZE plan the same Pauli string reappearing at several time orders is one
//! per-step rotation whose angle is a polynomial in t, so its ladder is
//! counted once; product-formula factors are genuinely re-executed in time
//! and count per occurrence.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{SzeError, SzeResult};
use crate::partition::{partition, verify_partition_detailed};
use crate::pauli::{parse_term_line, strip_comment, PauliKey, PauliSum};
use crate::series::extract_zassenhaus;

/// Suzuki recursion weights u_k = 1/(4 − 4^{1/(2k−1)}), 30 significant digits.
const SUZUKI_U2: f64 = 0.414490771794375737142354062860761;
const SUZUKI_U3: f64 = 0.373065827733272297477118034306667;
const SUZUKI_U4: f64 = 0.359584649349992130531250054778248;
const SUZUKI_U5: f64 = 0.353480950959407881586327409599702;

fn suzuki_u(k: usize) -> f64 {
    match k {
        2 => SUZUKI_U2,
        3 => SUZUKI_U3,
        4 => SUZUKI_U4,
        5 => SUZUKI_U5,
        _ => 1.0 / (4.0 - 4f64.powf(1.0 / (2.0 * k as f64 - 1.0))),
    }
}

/// How a factor's exponential is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    Direct,
    Stochastic,
}

/// One exponential factor of a time-step plan. A factor at time order m
/// evolves its Hamiltonian for (t/r)^m; product-formula factors fold their
/// Suzuki sub-step weight into the Hamiltonian coefficients.
#[derive(Debug, Clone)]
pub struct Factor {
    pub time_order: usize,
    pub mode: FactorMode,
    pub provenance: String,
    pub hamiltonian: PauliSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanKind {
    Sze { k: usize, p: usize },
    Pf { p: usize },
    MinimalPf { p: usize },
}

impl PlanKind {
    pub fn label(&self) -> String {
        match self {
            PlanKind::Sze { k, p } => format!("sze:{k}:{p}"),
            PlanKind::Pf { p } => format!("pf:{p}"),
            PlanKind::MinimalPf { p } => format!("minpf:{p}"),
        }
    }
}

/// An ordered list of exponential factors defining one time step.
#[derive(Debug, Clone)]
pub struct ExpansionPlan {
    pub kind: PlanKind,
    pub n_qubits: usize,
    pub factors: Vec<Factor>,
    pub metadata: Vec<(String, String)>,
}

/// Gate cost of one time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCount {
    pub rotations: usize,
    pub cnots_deterministic: f64,
    pub cnots_stochastic_expected: f64,
    pub total_expected: f64,
}

/// Build an SZE_{k,p} plan from internally commuting layers.
pub fn build_sze(layers: &[PauliSum], k: usize, p: usize) -> SzeResult<ExpansionPlan> {
    if layers.is_empty() {
        return Err(SzeError::InvalidPlan("no layers".into()));
    }
    let n = layers[0].n_qubits();
    if k < 1 || p < k || p > 2 * k + 1 {
        return Err(SzeError::InvalidPlan(format!(
            "need 1 <= k <= p <= 2k+1, got k={k}, p={p}"
        )));
    }
    for layer in layers {
        check_layer_commuting(layer)?;
    }

    let mut direct: Vec<Factor> = layers
        .iter()
        .enumerate()
        .map(|(i, l)| Factor {
            time_order: 1,
            mode: FactorMode::Direct,
            provenance: format!("layer{i}"),
            hamiltonian: l.clone(),
        })
        .collect();
    let mut stochastic: BTreeMap<usize, PauliSum> = BTreeMap::new();

    // queue of nested expansions: (base effective order, generator parts, label)
    let mut queue: Vec<(usize, Vec<PauliSum>, String)> = vec![(1, layers.to_vec(), String::new())];
    let mut head = 0;
    while head < queue.len() {
        let (base, parts, label) = queue[head].clone();
        head += 1;
        let max_j = p / base;
        if max_j < 2 {
            continue;
        }
        let generators: Vec<PauliSum> = parts
            .iter()
            .map(|q| q.scale(Complex64::new(0.0, -1.0)))
            .collect();
        let expansion = extract_zassenhaus(&generators, max_j)?;
        for (j, _) in expansion.exponents() {
            let hermitian = expansion.hermitian_exponent(j).expect("exponent exists");
            let effective = base * j;
            let name = if label.is_empty() {
                format!("H_{{{j}}}")
            } else {
                format!("{},{j}}}", &label[..label.len() - 1])
            };
            if effective <= k {
                let split = partition(&hermitian);
                verify_partition_detailed(&split)?;
                for (qi, part) in split.parts().iter().enumerate() {
                    direct.push(Factor {
                        time_order: effective,
                        mode: FactorMode::Direct,
                        provenance: format!("{name}.part{qi}"),
                        hamiltonian: part.clone(),
                    });
                }
                if split.num_parts() > 1 {
                    queue.push((effective, split.parts().to_vec(), name));
                }
            } else if effective <= p {
                let entry = stochastic
                    .entry(effective)
                    .or_insert_with(|| PauliSum::zero(n));
                *entry = entry.add(&hermitian)?;
            }
        }
    }

    // ascending effective time order, generation order within each order
    direct.sort_by_key(|f| f.time_order);
    let mut factors = direct;
    for (order, h) in stochastic {
        if h.is_empty() {
            continue;
        }
        factors.push(Factor {
            time_order: order,
            mode: FactorMode::Stochastic,
            provenance: format!("H'_{{{order}}}"),
            hamiltonian: h,
        });
    }
    factors.sort_by_key(|f| f.time_order);

    Ok(ExpansionPlan {
        kind: PlanKind::Sze { k, p },
        n_qubits: n,
        factors,
        metadata: base_metadata(n),
    })
}

fn check_layer_commuting(layer: &PauliSum) -> SzeResult<()> {
    let terms = layer.terms();
    for (i, (ki, _)) in terms.iter().enumerate() {
        for (kj, _) in terms.iter().skip(i + 1) {
            if !ki.commutes(kj) {
                return Err(SzeError::InvalidPlan(
                    "layer is not internally commuting".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Flattened Suzuki-Trotter stage sequence as (layer index, weight) with
/// adjacent same-layer stages merged.
fn suzuki_stages(num_layers: usize, order: usize) -> Vec<(usize, f64)> {
    fn extend(seq: &mut Vec<(usize, f64)>, stage: &[(usize, f64)], scale: f64) {
        for &(idx, w) in stage {
            match seq.last_mut() {
                Some((last, acc)) if *last == idx => *acc += w * scale,
                _ => seq.push((idx, w * scale)),
            }
        }
    }
    // S_1: plain layer sweep; S_2: palindromic half-steps
    let s1: Vec<(usize, f64)> = (0..num_layers).map(|i| (i, 1.0)).collect();
    if order == 1 {
        return s1;
    }
    let mut s2: Vec<(usize, f64)> = Vec::new();
    for i in 0..num_layers - 1 {
        extend(&mut s2, &[(i, 0.5)], 1.0);
    }
    extend(&mut s2, &[(num_layers - 1, 1.0)], 1.0);
    for i in (0..num_layers - 1).rev() {
        extend(&mut s2, &[(i, 0.5)], 1.0);
    }
    let mut current = s2;
    let mut ord = 2;
    while ord < order {
        ord += 2;
        let u = suzuki_u(ord / 2);
        let mut next: Vec<(usize, f64)> = Vec::new();
        for scale in [u, u, 1.0 - 4.0 * u, u, u] {
            extend(&mut next, &current, scale);
        }
        current = next;
    }
    current
}

/// Build a PF_p plan. Factors are Direct at order 1 with the Suzuki stage
/// weights folded into the Hamiltonian coefficients.
pub fn build_pf(layers: &[PauliSum], p: usize) -> SzeResult<ExpansionPlan> {
    if layers.is_empty() {
        return Err(SzeError::InvalidPlan("no layers".into()));
    }
    if !matches!(p, 1 | 2 | 4 | 6 | 8 | 10) {
        return Err(SzeError::UnsupportedOrder { what: "product formula", order: p });
    }
    for layer in layers {
        check_layer_commuting(layer)?;
    }
    let n = layers[0].n_qubits();
    let stages = suzuki_stages(layers.len(), p);
    let mut weights_note = String::new();
    let factors: Vec<Factor> = stages
        .iter()
        .map(|&(idx, w)| {
            let _ = write!(weights_note, "{idx}:{w:.17e} ");
            Factor {
                time_order: 1,
                mode: FactorMode::Direct,
                provenance: format!("layer{idx}"),
                hamiltonian: layers[idx].scale(Complex64::new(w, 0.0)),
            }
        })
        .collect();
    let mut metadata = base_metadata(n);
    metadata.push(("suzuki_stage_weights".into(), weights_note.trim().into()));
    Ok(ExpansionPlan {
        kind: PlanKind::Pf { p },
        n_qubits: n,
        factors,
        metadata,
    })
}

/// Gate count of the minimal product formulas assembled from 15 (p=8) or
/// 31 (p=10) second-order blocks, with boundary merging between consecutive
/// blocks. Counting only; the stage coefficients are not published.
pub fn minimal_pf_count(layers: &[PauliSum], p: usize) -> SzeResult<GateCount> {
    let blocks = match p {
        8 => 15,
        10 => 31,
        _ => return Err(SzeError::UnsupportedOrder { what: "minimal product formula", order: p }),
    };
    let s2 = build_pf(layers, 2)?;
    let total = count_gates(&s2);
    // appending another S_2 block merges its leading factor with the trailing
    // one of the previous block (same layer, palindromic ends)
    let first = &s2.factors[0];
    let first_rot = first.hamiltonian.num_terms();
    let first_cnots = sum_ladder_cnots(&first.hamiltonian);
    let rotations = total.rotations * blocks - first_rot * (blocks - 1);
    let cnots = total.cnots_deterministic * blocks as f64 - first_cnots * (blocks - 1) as f64;
    Ok(GateCount {
        rotations,
        cnots_deterministic: cnots,
        cnots_stochastic_expected: 0.0,
        total_expected: cnots,
    })
}

fn ladder_cnots(key: &PauliKey) -> f64 {
    let w = key.weight();
    if w <= 1 {
        0.0
    } else {
        2.0 * (w as f64 - 1.0)
    }
}

fn sum_ladder_cnots(h: &PauliSum) -> f64 {
    h.terms().iter().map(|(k, _)| ladder_cnots(k)).sum()
}

/// Count rotations and expected CNOTs for one step of a plan.
///
/// Rotations: one per term of each Direct factor, one per Stochastic factor.
/// Deterministic CNOTs: per-occurrence for product formulas; for SZE plans a
/// string occurring at several time orders shares one ladder per step.
/// Stochastic CNOTs: probability-weighted ladder cost per factor.
pub fn count_gates(plan: &ExpansionPlan) -> GateCount {
    let mut rotations = 0usize;
    let mut cnots_stochastic = 0.0f64;
    for f in &plan.factors {
        match f.mode {
            FactorMode::Direct => rotations += f.hamiltonian.num_terms(),
            FactorMode::Stochastic => {
                rotations += 1;
                let l1 = f.hamiltonian.l1_norm();
                if l1 > 0.0 {
                    cnots_stochastic += f
                        .hamiltonian
                        .terms()
                        .iter()
                        .map(|(k, c)| c.norm() / l1 * ladder_cnots(k))
                        .sum::<f64>();
                }
            }
        }
    }

    let cnots_deterministic = match plan.kind {
        PlanKind::Sze { .. } => {
            let mut seen: BTreeMap<PauliKey, ()> = BTreeMap::new();
            let mut total = 0.0;
            for f in plan.factors.iter().filter(|f| f.mode == FactorMode::Direct) {
                for (key, _) in f.hamiltonian.terms() {
                    if seen.insert(*key, ()).is_none() {
                        total += ladder_cnots(key);
                    }
                }
            }
            total
        }
        PlanKind::Pf { .. } | PlanKind::MinimalPf { .. } => plan
            .factors
            .iter()
            .filter(|f| f.mode == FactorMode::Direct)
            .map(|f| sum_ladder_cnots(&f.hamiltonian))
            .sum(),
    };

    GateCount {
        rotations,
        cnots_deterministic,
        cnots_stochastic_expected: cnots_stochastic,
        total_expected: cnots_deterministic + cnots_stochastic,
    }
}

pub const CNOT_CONVENTION: &str = "2*(weight-1) CNOTs per rotation ladder, no cross-rotation cancellation; SZE direct strings share one ladder per step across time orders; stochastic factors in expectation";

fn base_metadata(n: usize) -> Vec<(String, String)> {
    vec![
        ("n_qubits".into(), n.to_string()),
        ("cnot_convention".into(), CNOT_CONVENTION.into()),
    ]
}

// ---------------------------------------------------------------------------
// Plan text serialization: `FACTOR <m> <mode> <provenance>` followed by
// indented term lines in the pauli_core text format.
// ---------------------------------------------------------------------------

impl ExpansionPlan {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# plan {}", self.kind.label());
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "n_qubits: {}", self.n_qubits);
        for f in &self.factors {
            let mode = match f.mode {
                FactorMode::Direct => "direct",
                FactorMode::Stochastic => "stochastic",
            };
            let _ = writeln!(out, "FACTOR {} {} {}", f.time_order, mode, f.provenance);
            for line in f.hamiltonian.terms_to_text().lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }

    /// Parse the serialized form; `kind` is reconstructed from the header.
    pub fn from_text(text: &str) -> SzeResult<Self> {
        let mut kind: Option<PlanKind> = None;
        let mut n_qubits: Option<usize> = None;
        let mut factors: Vec<Factor> = Vec::new();
        let mut pending: Option<(usize, FactorMode, String, Vec<(PauliKey, Complex64)>)> = None;

        let flush =
            |pending: &mut Option<(usize, FactorMode, String, Vec<(PauliKey, Complex64)>)>,
             factors: &mut Vec<Factor>,
             n: usize| {
                if let Some((m, mode, prov, pairs)) = pending.take() {
                    factors.push(Factor {
                        time_order: m,
                        mode,
                        provenance: prov,
                        hamiltonian: PauliSum::from_key_coeffs(n, pairs),
                    });
                }
            };

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            if raw.trim_start().starts_with('#') {
                if kind.is_none() {
                    if let Some(tok) = raw.trim_start().strip_prefix("# plan ") {
                        kind = parse_method_token(tok.trim());
                    }
                }
                continue;
            }
            let line = strip_comment(raw);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.trim().strip_prefix("n_qubits:") {
                n_qubits = Some(rest.trim().parse().map_err(|_| SzeError::Parse {
                    line: lineno,
                    message: "invalid n_qubits".into(),
                })?);
                continue;
            }
            let n = n_qubits.ok_or_else(|| SzeError::Parse {
                line: lineno,
                message: "missing n_qubits header".into(),
            })?;
            if let Some(rest) = line.trim().strip_prefix("FACTOR ") {
                flush(&mut pending, &mut factors, n);
                let mut toks = rest.split_whitespace();
                let m: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| SzeError::Parse { line: lineno, message: "bad FACTOR order".into() })?;
                let mode = match toks.next() {
                    Some("direct") => FactorMode::Direct,
                    Some("stochastic") => FactorMode::Stochastic,
                    _ => return Err(SzeError::Parse { line: lineno, message: "bad FACTOR mode".into() }),
                };
                let prov = toks.collect::<Vec<_>>().join(" ");
                pending = Some((m, mode, prov, Vec::new()));
                continue;
            }
            match pending.as_mut() {
                Some((_, _, _, pairs)) => {
                    pairs.push(parse_term_line(line.trim(), n, lineno)?);
                }
                None => {
                    return Err(SzeError::Parse {
                        line: lineno,
                        message: "term line outside any FACTOR".into(),
                    })
                }
            }
        }
        let n = n_qubits.ok_or_else(|| SzeError::Parse { line: 1, message: "missing n_qubits".into() })?;
        flush(&mut pending, &mut factors, n);
        Ok(ExpansionPlan {
            kind: kind.unwrap_or(PlanKind::Pf { p: 1 }),
            n_qubits: n,
            factors,
            metadata: Vec::new(),
        })
    }
}

fn parse_method_token(tok: &str) -> Option<PlanKind> {
    let parts: Vec<&str> = tok.split(':').collect();
    match parts.as_slice() {
        ["pf", p] => p.parse().ok().map(|p| PlanKind::Pf { p }),
        ["minpf", p] => p.parse().ok().map(|p| PlanKind::MinimalPf { p }),
        ["sze", k, p] => match (k.parse(), p.parse()) {
            (Ok(k), Ok(p)) => Some(PlanKind::Sze { k, p }),
            _ => None,
        },
        _ => None,
    }
}
