//! Noncommutative truncated power series over Pauli-sum coefficients, and
//! Zassenhaus exponent extraction by series matching.
//!
//! The expansion engine works on anti-Hermitian generators X_i = −iH_i with
//! the formal variable carrying physical time, so every extracted exponent
//! G_j is itself a −i·(Hermitian) generator:
//!
//!   exp(t ΣX_i) = exp(tX_1) ··· exp(tX_m) · Π_{j≥2} exp(t^j G_j).
//!
//! Extraction maintains the defect series R = V⁻¹ · exp(t ΣX_i), where V is
//! the product of factors found so far; the order-j coefficient of R is G_j,
//! and the residual at already-processed orders is re-checked each step.

use num_complex::Complex64;

use crate::dense::{exp_anti_hermitian, spectral_norm, CMatrix};
use crate::error::{SzeError, SzeResult};
use crate::pauli::PauliSum;

/// Hard cap on the number of terms in any single series coefficient. The
/// order-11 extraction for a 10-site chain peaks around 231k terms; the cap
/// aborts runaway products well before memory pressure.
pub const COEFF_TERM_CAP: usize = 1_000_000;

/// Relative tolerance for the per-order residual self-check.
const RESIDUAL_REL_TOL: f64 = 1e-8;

/// Truncated power series Σ_j coeffs[j] t^j with PauliSum coefficients.
#[derive(Debug, Clone)]
pub struct OperatorSeries {
    n_qubits: usize,
    coeffs: Vec<PauliSum>,
}

impl OperatorSeries {
    /// The constant series 1 (identity operator at order zero).
    pub fn one(n_qubits: usize, max_order: usize) -> Self {
        let mut coeffs = vec![PauliSum::zero(n_qubits); max_order + 1];
        coeffs[0] = PauliSum::identity(n_qubits);
        OperatorSeries { n_qubits, coeffs }
    }

    /// Taylor series of exp(t^m · g) truncated at `max_order`:
    /// coefficient at t^{j·m} is g^j / j!.
    pub fn exponential(g: &PauliSum, time_power: usize, max_order: usize) -> SzeResult<Self> {
        assert!(time_power >= 1, "time power must be positive");
        let mut series = OperatorSeries::one(g.n_qubits(), max_order);
        let mut power = PauliSum::identity(g.n_qubits());
        let mut factorial = 1.0f64;
        let mut j = 1usize;
        while j * time_power <= max_order {
            power = power.mul(g)?;
            check_cap(j * time_power, power.num_terms())?;
            factorial *= j as f64;
            series.coeffs[j * time_power] = power.scale(Complex64::new(1.0 / factorial, 0.0));
            j += 1;
        }
        Ok(series)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, order: usize) -> &PauliSum {
        &self.coeffs[order]
    }

    /// Cauchy product truncated at the common max order. Noncommutative:
    /// `self` is the left factor.
    pub fn mul(&self, rhs: &OperatorSeries) -> SzeResult<OperatorSeries> {
        if self.n_qubits != rhs.n_qubits {
            return Err(SzeError::QubitMismatch(self.n_qubits, rhs.n_qubits));
        }
        if self.max_order() != rhs.max_order() {
            return Err(SzeError::SeriesShape(format!(
                "orders {} vs {}",
                self.max_order(),
                rhs.max_order()
            )));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for k in 0..self.coeffs.len() {
            let mut acc = PauliSum::zero(self.n_qubits);
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &rhs.coeffs[k - i]);
                if a.is_empty() || b.is_empty() {
                    continue;
                }
                acc = acc.add(&a.mul(b)?)?;
            }
            check_cap(k, acc.num_terms())?;
            coeffs.push(acc);
        }
        Ok(OperatorSeries { n_qubits: self.n_qubits, coeffs })
    }

    /// Multiplicative inverse by order-by-order recursion
    /// b_j = −Σ_{i=1..j} a_i b_{j−i}; requires an identity head.
    pub fn inverse(&self) -> SzeResult<OperatorSeries> {
        if !self.coeffs[0].approx_eq(&PauliSum::identity(self.n_qubits), 1e-12) {
            return Err(SzeError::NonIdentityHead);
        }
        let mut inv = OperatorSeries::one(self.n_qubits, self.max_order());
        for j in 1..self.coeffs.len() {
            let mut acc = PauliSum::zero(self.n_qubits);
            for i in 1..=j {
                if self.coeffs[i].is_empty() || inv.coeffs[j - i].is_empty() {
                    continue;
                }
                acc = acc.add(&self.coeffs[i].mul(&inv.coeffs[j - i])?)?;
            }
            check_cap(j, acc.num_terms())?;
            inv.coeffs[j] = acc.scale(Complex64::new(-1.0, 0.0));
        }
        Ok(inv)
    }
}

fn check_cap(order: usize, terms: usize) -> SzeResult<()> {
    if terms > COEFF_TERM_CAP {
        return Err(SzeError::TermCap { order, terms, cap: COEFF_TERM_CAP });
    }
    Ok(())
}

/// Result of a Zassenhaus extraction: ordered generators X_i plus the
/// exponents G_j of the factors exp(t^j G_j), j ≥ 2. Orders whose exponent
/// vanished (commuting structure) are absent from the map.
#[derive(Debug, Clone)]
pub struct ZassenhausExpansion {
    generators: Vec<PauliSum>,
    exponents: std::collections::BTreeMap<usize, PauliSum>,
}

impl ZassenhausExpansion {
    pub fn generators(&self) -> &[PauliSum] {
        &self.generators
    }

    /// Exponent G_j of the order-j factor, if nonzero.
    pub fn exponent(&self, order: usize) -> Option<&PauliSum> {
        self.exponents.get(&order)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (usize, &PauliSum)> {
        self.exponents.iter().map(|(k, v)| (*k, v))
    }

    /// Hermitian form H_j = i·G_j of the order-j exponent (G_j = −iH_j).
    pub fn hermitian_exponent(&self, order: usize) -> Option<PauliSum> {
        self.exponents
            .get(&order)
            .map(|g| g.scale(Complex64::new(0.0, 1.0)))
    }

    pub fn max_order(&self) -> usize {
        self.exponents.keys().next_back().copied().unwrap_or(1)
    }

    pub fn n_qubits(&self) -> usize {
        self.generators[0].n_qubits()
    }
}

/// Extract Zassenhaus exponents for the ordered `generators` through
/// `max_order`, by matching the series of exp(t ΣX_i) against the factor
/// product order by order.
pub fn extract_zassenhaus(
    generators: &[PauliSum],
    max_order: usize,
) -> SzeResult<ZassenhausExpansion> {
    assert!(max_order >= 2, "extraction needs max_order >= 2");
    assert!(!generators.is_empty(), "extraction needs at least one generator");
    let n = generators[0].n_qubits();
    for g in generators {
        if g.n_qubits() != n {
            return Err(SzeError::QubitMismatch(n, g.n_qubits()));
        }
    }

    let mut total = PauliSum::zero(n);
    for g in generators {
        total = total.add(g)?;
    }

    // defect series R = exp(-tX_m)···exp(-tX_1)·exp(t ΣX_i)
    let mut defect = OperatorSeries::exponential(&total, 1, max_order)?;
    let mut scale = defect.coeff(1).l1_norm().max(1.0);
    for g in generators {
        let inv_factor = OperatorSeries::exponential(&g.scale(Complex64::new(-1.0, 0.0)), 1, max_order)?;
        defect = inv_factor.mul(&defect)?;
    }

    // natural magnitude of an order-j coefficient of exponential products is
    // scale^j / j!; cancellation noise sits many orders below that
    let order_scale = |scale: f64, j: usize| {
        let mut s = 1.0f64;
        for i in 1..=j {
            s *= scale / i as f64;
        }
        s.max(1.0)
    };

    let mut exponents = std::collections::BTreeMap::new();
    for j in 2..=max_order {
        // all orders below j must have been cancelled already
        for i in 1..j {
            let residual = defect.coeff(i).l1_norm();
            let tol = RESIDUAL_REL_TOL * order_scale(scale, i);
            if residual > tol {
                return Err(SzeError::ResidualCheck { order: i, residual });
            }
        }
        let g_j = defect.coeff(j).clone();
        // coefficients at the cancellation-noise level are true zeros
        if g_j.l1_norm() <= RESIDUAL_REL_TOL * order_scale(scale, j) {
            continue;
        }
        scale = scale.max(g_j.l1_norm().powf(1.0 / j as f64));
        let inv_factor =
            OperatorSeries::exponential(&g_j.scale(Complex64::new(-1.0, 0.0)), j, max_order)?;
        defect = inv_factor.mul(&defect)?;
        exponents.insert(j, g_j);
    }

    Ok(ZassenhausExpansion {
        generators: generators.to_vec(),
        exponents,
    })
}

/// Spectral-norm defect between the exact exp(t ΣX_i) and the dense product
/// of all extracted factors; scales as O(t^{J+1}) for an order-J expansion.
pub fn truncation_defect(expansion: &ZassenhausExpansion, t: f64) -> SzeResult<f64> {
    let n = expansion.n_qubits();
    let mut total = PauliSum::zero(n);
    for g in expansion.generators() {
        total = total.add(g)?;
    }
    let exact = exp_anti_hermitian(&(total.to_dense()? * Complex64::new(t, 0.0)));
    let dim = 1usize << n;
    let mut product: CMatrix = CMatrix::identity(dim, dim);
    for g in expansion.generators() {
        product *= exp_anti_hermitian(&(g.to_dense()? * Complex64::new(t, 0.0)));
    }
    for (j, g) in expansion.exponents() {
        product *= exp_anti_hermitian(&(g.to_dense()? * Complex64::new(t.powi(j as i32), 0.0)));
    }
    Ok(spectral_norm(&(exact - product)))
}
