use serde::Serialize;

use crate::gabkron::params::{t_upper_bound, violations, RawParams, Variant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeFormula {
    /// `m·n` bits: one circulant row, as claimed for the original sets.
    ClaimedOriginal,
    /// pk `m·k·(n-k)`, sk `m(1+n2+λ+k²)+λn` bits.
    Repaired,
    /// pk `k1·n1·n2·m`, sk `m + n1²λ(m+n2) + k1·n1·m` bits.
    Improved,
}

impl SizeFormula {
    pub fn id(self) -> &'static str {
        match self {
            SizeFormula::ClaimedOriginal => "claimed-original:m*n/8",
            SizeFormula::Repaired => "repaired:m*k*(n-k)/8",
            SizeFormula::Improved => "improved:k1*n1*n2*m/8",
        }
    }

    pub fn for_variant(v: Variant) -> Self {
        match v {
            Variant::Repaired => SizeFormula::Repaired,
            Variant::Improved => SizeFormula::Improved,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub formula: SizeFormula,
    pub formula_id: &'static str,
    pub pk_bits: u64,
    pub sk_bits: Option<u64>,
    pub inputs: RawParams,
}

impl SizeReport {
    /// Exact byte count when the bit count is a multiple of 8.
    pub fn pk_bytes(&self) -> Option<u64> {
        (self.pk_bits % 8 == 0).then_some(self.pk_bits / 8)
    }

    pub fn pk_bytes_f64(&self) -> f64 {
        self.pk_bits as f64 / 8.0
    }

    pub fn sk_bytes_f64(&self) -> Option<f64> {
        self.sk_bits.map(|b| b as f64 / 8.0)
    }
}

/// Thousands of bytes with one decimal, e.g. `258.5K`.
pub fn display_kilo(bytes: f64) -> String {
    format!("{:.1}K", bytes / 1000.0)
}

pub fn key_sizes(raw: &RawParams, formula: SizeFormula) -> SizeReport {
    let u = |x: usize| x as u64;
    let (m, n1, k1, n2, k2, lambda) = (u(raw.m), u(raw.n1), u(raw.k1), u(raw.n2), u(raw.k2), u(raw.lambda));
    let (n, k) = (n1 * n2, k1 * k2);
    let (pk_bits, sk_bits) = match formula {
        SizeFormula::ClaimedOriginal => (m * n, None),
        SizeFormula::Repaired => (m * k * (n - k), Some(m * (1 + n2 + lambda + k * k) + lambda * n)),
        SizeFormula::Improved => (k1 * n1 * n2 * m, Some(m + n1 * n1 * lambda * (m + n2) + k1 * n1 * m)),
    };
    SizeReport { formula, formula_id: formula.id(), pk_bits, sk_bits, inputs: raw.clone() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub name: String,
    pub claimed_t: Option<usize>,
    /// `⌊(n2-k2)/(2λ)⌋`.
    pub bound: usize,
    pub formula_id: &'static str,
    pub feasible: bool,
    pub violations: Vec<String>,
}

pub fn feasibility(name: &str, raw: &RawParams) -> FeasibilityReport {
    let v = violations(raw);
    FeasibilityReport {
        name: name.to_string(),
        claimed_t: raw.t,
        bound: t_upper_bound(raw.n2, raw.k2, raw.lambda),
        formula_id: "floor((n2-k2)/(2*lambda))",
        feasible: v.is_empty(),
        violations: v,
    }
}
