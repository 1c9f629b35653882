//! Method tokens: `pf:<p>`, `minpf:<p>`, `sze:<k>:<p>`.

use sze_core::models::LayeredHamiltonian;
use sze_core::plan::{build_pf, build_sze, minimal_pf_count, ExpansionPlan, GateCount};
use sze_core::{SzeError, SzeResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Pf { p: usize },
    MinPf { p: usize },
    Sze { k: usize, p: usize },
}

impl Method {
    pub fn parse(token: &str) -> SzeResult<Method> {
        let bad = || SzeError::InvalidPlan(format!("invalid method token `{token}`"));
        let parts: Vec<&str> = token.split(':').collect();
        match parts.as_slice() {
            ["pf", p] => Ok(Method::Pf { p: p.parse().map_err(|_| bad())? }),
            ["minpf", p] => Ok(Method::MinPf { p: p.parse().map_err(|_| bad())? }),
            ["sze", k, p] => Ok(Method::Sze {
                k: k.parse().map_err(|_| bad())?,
                p: p.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }

    pub fn token(&self) -> String {
        match self {
            Method::Pf { p } => format!("pf:{p}"),
            Method::MinPf { p } => format!("minpf:{p}"),
            Method::Sze { k, p } => format!("sze:{k}:{p}"),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Method::Pf { p } | Method::MinPf { p } | Method::Sze { p, .. } => *p,
        }
    }

    /// Build the executable plan; minimal product formulas are counting-only.
    pub fn plan(&self, model: &LayeredHamiltonian) -> SzeResult<Option<ExpansionPlan>> {
        match self {
            Method::Pf { p } => build_pf(model.layers(), *p).map(Some),
            Method::Sze { k, p } => build_sze(model.layers(), *k, *p).map(Some),
            Method::MinPf { .. } => Ok(None),
        }
    }

    pub fn gate_count(&self, model: &LayeredHamiltonian) -> SzeResult<GateCount> {
        match self {
            Method::MinPf { p } => minimal_pf_count(model.layers(), *p),
            _ => {
                let plan = self.plan(model)?.expect("executable plan");
                Ok(sze_core::plan::count_gates(&plan))
            }
        }
    }
}

pub fn parse_all(tokens: &[String]) -> SzeResult<Vec<Method>> {
    if tokens.is_empty() {
        return Err(SzeError::InvalidPlan("no --method given".into()));
    }
    tokens.iter().map(|t| Method::parse(t)).collect()
}
