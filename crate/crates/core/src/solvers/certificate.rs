use serde::{Deserialize, Serialize};

use super::shifted::optimal_shift;
use crate::coefficients::{delta_closed_form, tau_h, tau_summary};
use crate::error::{Error, Result};
use crate::tensor::{DenseTensor3, DENSE_GUARD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub name: String,
    pub value: f64,
    /// `value < 1`.
    pub certifies: bool,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub n: usize,
    pub entries: Vec<CertificateEntry>,
    pub optimal_sigma: f64,
}

impl CertificateSummary {
    pub fn get(&self, name: &str) -> Option<&CertificateEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Some entry certifies a unique stochastic fixed point.
    pub fn any_certifies(&self) -> bool {
        self.entries.iter().any(|e| e.certifies)
    }
}

/// All uniqueness certificates of a dense stochastic tensor. Each value
/// certifies its statement when below one.
pub fn convergence_certificate(p: &DenseTensor3) -> Result<CertificateSummary> {
    if p.n() > DENSE_GUARD {
        return Err(Error::TooLarge {
            what: "convergence certificate",
            limit: DENSE_GUARD,
            n: p.n(),
        });
    }
    crate::coefficients::require_stochastic(p)?;
    let s = tau_summary(p)?;
    let th = tau_h(p)?.value;
    let delta = delta_closed_form(p)?.value;
    let shift = optimal_shift(p, 0.5, 1001, 1e-6)?;
    let entry = |name: &str, value: f64, statement: &str| CertificateEntry {
        name: name.to_string(),
        value,
        certifies: value < 1.0,
        statement: statement.to_string(),
    };
    let entries = vec![
        entry(
            "T",
            s.tau.value,
            "unique fixed point; the higher-order power method converges linearly at rate T",
        ),
        entry(
            "TL+TR",
            s.tau_left.value + s.tau_right.value,
            "the alternate power method and reinforced walks with divergent schedule converge",
        ),
        entry(
            "TH",
            th,
            "unique fixed point; the power method contracts in the Hilbert metric",
        ),
        entry(
            "2-2delta",
            2.0 - 2.0 * delta,
            "delta > 1/2: unique fixed point and convergent power method",
        ),
        entry(
            "min_sigma T(P_sigma)",
            shift.value,
            "the shifted power method at the optimal sigma converges",
        ),
    ];
    Ok(CertificateSummary {
        n: p.n(),
        entries,
        optimal_sigma: shift.sigma,
    })
}
