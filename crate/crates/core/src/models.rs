//! Benchmark Hamiltonians pre-split into internally commuting layers, plus
//! the layered text-file loader.

use num_complex::Complex64;

use crate::error::{SzeError, SzeResult};
use crate::partition::{partition, verify_partition_detailed, CommutingPartition};
use crate::pauli::{parse_term_line, strip_comment, PauliKey, PauliOp, PauliSum, PauliTerm};

/// A Hamiltonian given as an ordered list of internally commuting layers.
#[derive(Debug, Clone)]
pub struct LayeredHamiltonian {
    pub label: String,
    pub parameters: Vec<(String, f64)>,
    layers: Vec<PauliSum>,
    total: PauliSum,
}

impl LayeredHamiltonian {
    pub fn new(label: &str, layers: Vec<PauliSum>) -> SzeResult<Self> {
        if layers.is_empty() {
            return Err(SzeError::InvalidModel("no layers".into()));
        }
        let n = layers[0].n_qubits();
        let mut total = PauliSum::zero(n);
        for layer in &layers {
            validate_layer(layer)?;
            total = total.add(layer)?;
        }
        Ok(LayeredHamiltonian {
            label: label.to_string(),
            parameters: Vec::new(),
            layers,
            total,
        })
    }

    pub fn layers(&self) -> &[PauliSum] {
        &self.layers
    }

    pub fn total(&self) -> &PauliSum {
        &self.total
    }

    pub fn n_qubits(&self) -> usize {
        self.total.n_qubits()
    }

    /// Serialize with `layer:` section headers.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.label);
        for (k, v) in &self.parameters {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        out.push_str(&format!("n_qubits: {}\n", self.n_qubits()));
        for (i, layer) in self.layers.iter().enumerate() {
            out.push_str(&format!("layer: {i}\n"));
            out.push_str(&layer.terms_to_text());
        }
        out
    }
}

fn validate_layer(layer: &PauliSum) -> SzeResult<()> {
    let n = layer.n_qubits();
    let terms = layer.terms();
    for (i, (ki, _)) in terms.iter().enumerate() {
        for (kj, _) in terms.iter().skip(i + 1) {
            if !ki.commutes(kj) {
                return Err(SzeError::NonCommutingLayer(
                    term_name(n, *ki),
                    term_name(n, *kj),
                ));
            }
        }
    }
    Ok(())
}

fn term_name(n: usize, key: PauliKey) -> String {
    PauliTerm::from_key(n, key, 0)
        .map(|t| t.to_string())
        .unwrap_or_else(|_| format!("({:#x},{:#x})", key.z_mask, key.x_mask))
}

/// Open-boundary transverse-field Ising chain
/// H = −J Σ Z_i Z_{i+1} − h Σ X_j as layers A (bonds) and B (fields).
pub fn tfim(n: usize, coupling_j: f64, field_h: f64) -> SzeResult<LayeredHamiltonian> {
    if n < 2 {
        return Err(SzeError::InvalidModel(format!("tfim needs n >= 2, got {n}")));
    }
    if n > 64 {
        return Err(SzeError::TooManyQubits(n));
    }
    let a = PauliSum::from_weighted_terms(
        n,
        (0..n - 1).map(|i| {
            (
                PauliTerm::from_ops(n, &[(i, PauliOp::Z), (i + 1, PauliOp::Z)]).expect("in range"),
                Complex64::new(-coupling_j, 0.0),
            )
        }),
    )?;
    let b = PauliSum::from_weighted_terms(
        n,
        (0..n).map(|q| {
            (
                PauliTerm::from_ops(n, &[(q, PauliOp::X)]).expect("in range"),
                Complex64::new(-field_h, 0.0),
            )
        }),
    )?;
    let mut model = LayeredHamiltonian::new("tfim", vec![a, b])?;
    model.parameters = vec![
        ("n".into(), n as f64),
        ("J".into(), coupling_j),
        ("h".into(), field_h),
    ];
    Ok(model)
}

/// Parse a layered Hamiltonian from text. `layer: <name>` lines open
/// sections; without any such line the terms are auto-partitioned into
/// commuting layers.
pub fn parse_layered(text: &str) -> SzeResult<LayeredHamiltonian> {
    let mut n_qubits: Option<usize> = None;
    let mut layers: Vec<Vec<(PauliKey, Complex64)>> = Vec::new();
    let mut loose: Vec<(PauliKey, Complex64)> = Vec::new();
    let mut in_layer = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw).trim().to_string();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n_qubits:") {
            let n = rest.trim().parse::<usize>().map_err(|_| SzeError::Parse {
                line: lineno,
                message: format!("invalid qubit count `{}`", rest.trim()),
            })?;
            if n == 0 || n > 64 {
                return Err(SzeError::Parse {
                    line: lineno,
                    message: format!("qubit count {n} out of range 1..=64"),
                });
            }
            n_qubits = Some(n);
            continue;
        }
        if line.strip_prefix("layer:").is_some() {
            layers.push(Vec::new());
            in_layer = true;
            continue;
        }
        let n = n_qubits.ok_or_else(|| SzeError::Parse {
            line: lineno,
            message: "term before the mandatory `n_qubits: <n>` header".into(),
        })?;
        let pair = parse_term_line(&line, n, lineno)?;
        if in_layer {
            layers.last_mut().expect("layer open").push(pair);
        } else {
            loose.push(pair);
        }
    }

    let n = n_qubits.ok_or_else(|| SzeError::Parse {
        line: 1,
        message: "missing `n_qubits: <n>` header".into(),
    })?;

    if !loose.is_empty() && !layers.is_empty() {
        return Err(SzeError::Parse {
            line: 1,
            message: "terms outside layer sections mixed with `layer:` sections".into(),
        });
    }

    if layers.is_empty() {
        // no separators: auto-partition
        let total = PauliSum::from_key_coeffs(n, loose);
        let split: CommutingPartition = partition(&total);
        verify_partition_detailed(&split)
            .map_err(|e| SzeError::InvalidModel(format!("auto-partition failed: {e}")))?;
        let mut model = LayeredHamiltonian::new("file", split.parts().to_vec())?;
        model.parameters = vec![("n".into(), n as f64)];
        return Ok(model);
    }

    let sums: Vec<PauliSum> = layers
        .into_iter()
        .filter(|l| !l.is_empty())
        .map(|pairs| PauliSum::from_key_coeffs(n, pairs))
        .collect();
    let mut model = LayeredHamiltonian::new("file", sums)?;
    model.parameters = vec![("n".into(), n as f64)];
    Ok(model)
}

/// Load a layered Hamiltonian from a file path.
pub fn from_file(path: &std::path::Path) -> SzeResult<LayeredHamiltonian> {
    let text = std::fs::read_to_string(path).map_err(|e| SzeError::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_layered(&text)
}
