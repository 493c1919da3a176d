//! Problem instances: the degree, the domain exponents and optional
//! summing parameters, plus the exact regime classification.

use serde::{Deserialize, Serialize};

use crate::error::ExponentError;
use crate::scalar::{ExtScalar, Rat};

/// An m-linear Hardy-Littlewood instance: spaces `l_{p_1} x ... x l_{p_m}`,
/// optionally with summing parameters `(r, q)` for the vector-valued case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HLInstance {
    p: Vec<ExtScalar>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    r: Option<ExtScalar>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    q: Option<ExtScalar>,
}

impl HLInstance {
    pub fn new(p: Vec<ExtScalar>) -> Result<Self, ExponentError> {
        if p.len() < 2 {
            return Err(ExponentError::Parameter(format!(
                "degree m must be at least 2, got {}",
                p.len()
            )));
        }
        for (i, pk) in p.iter().enumerate() {
            if !pk.is_exponent() {
                return Err(ExponentError::Domain(format!(
                    "p_{} = {} lies outside [1, inf]",
                    i + 1,
                    pk
                )));
            }
        }
        Ok(HLInstance { p, r: None, q: None })
    }

    /// Instance with all spaces equal to `p`.
    pub fn isotropic(m: usize, p: ExtScalar) -> Result<Self, ExponentError> {
        HLInstance::new(vec![p; m])
    }

    pub fn with_summing(mut self, r: ExtScalar, q: ExtScalar) -> Result<Self, ExponentError> {
        if r < ExtScalar::one() {
            return Err(ExponentError::Parameter(format!("r = {r} must be >= 1")));
        }
        if r > q {
            return Err(ExponentError::Parameter(format!(
                "need r <= q, got r = {r}, q = {q}"
            )));
        }
        self.r = Some(r);
        self.q = Some(q);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[ExtScalar] {
        &self.p
    }

    pub fn p_at(&self, k: usize) -> &ExtScalar {
        &self.p[k - 1]
    }

    pub fn r(&self) -> Option<&ExtScalar> {
        self.r.as_ref()
    }

    pub fn q(&self) -> Option<&ExtScalar> {
        self.q.as_ref()
    }

    /// `sum_{j=k}^{m} 1/p_j` as an exact rational; `k` is 1-based.
    pub fn recip_tail_sum(&self, k: usize) -> Result<Rat, ExponentError> {
        if k < 1 || k > self.m() {
            return Err(ExponentError::Index(format!(
                "k = {k} out of range 1..={}",
                self.m()
            )));
        }
        let mut sum = Rat::new(0, 1);
        for pk in &self.p[k - 1..] {
            sum += pk.recip_rat()?;
        }
        Ok(sum)
    }

    /// `sum 1/p_j` over all slots.
    pub fn recip_sum(&self) -> Rat {
        self.recip_tail_sum(1).expect("k=1 is always in range")
    }

    pub fn classify_regime(&self) -> RegimeClass {
        let sum = self.recip_sum();
        let half = Rat::new(1, 2);
        let one = Rat::new(1, 1);
        if sum < half {
            RegimeClass::Subcritical
        } else if sum == half {
            RegimeClass::SubcriticalIntermediateBoundary
        } else if sum < one {
            RegimeClass::Intermediate
        } else if sum == one {
            RegimeClass::Critical
        } else {
            RegimeClass::Supercritical
        }
    }

    /// Largest index `t` with `1/p_t + ... + 1/p_m >= threshold` (inclusive at
    /// equality). Errors when no index qualifies.
    pub fn k0(&self, threshold: Rat) -> Result<usize, ExponentError> {
        for t in (1..=self.m()).rev() {
            if self.recip_tail_sum(t)? >= threshold {
                return Ok(t);
            }
        }
        Err(ExponentError::Regime(format!(
            "no tail sum reaches the threshold {threshold} (full sum {})",
            self.recip_sum()
        )))
    }
}

/// Exact position of `sum 1/p_k` relative to the case split at 1/2 and 1.
/// The boundary `sum = 1/2` belongs to both the subcritical and the
/// intermediate case and gets its own variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeClass {
    /// `sum 1/p < 1/2`
    Subcritical,
    /// `sum 1/p = 1/2`: subcritical and intermediate at once
    SubcriticalIntermediateBoundary,
    /// `1/2 < sum 1/p < 1`
    Intermediate,
    /// `sum 1/p = 1`
    Critical,
    /// `sum 1/p > 1`
    Supercritical,
}

impl RegimeClass {
    /// `sum 1/p <= 1/2`
    pub fn is_subcritical(&self) -> bool {
        matches!(
            self,
            RegimeClass::Subcritical | RegimeClass::SubcriticalIntermediateBoundary
        )
    }

    /// `1/2 <= sum 1/p < 1`
    pub fn is_intermediate(&self) -> bool {
        matches!(
            self,
            RegimeClass::SubcriticalIntermediateBoundary | RegimeClass::Intermediate
        )
    }

    pub fn is_critical(&self) -> bool {
        matches!(self, RegimeClass::Critical)
    }
}

impl std::fmt::Display for RegimeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeClass::Subcritical => "Subcritical",
            RegimeClass::SubcriticalIntermediateBoundary => "Subcritical/Intermediate boundary",
            RegimeClass::Intermediate => "Intermediate",
            RegimeClass::Critical => "Critical",
            RegimeClass::Supercritical => "Supercritical",
        };
        f.write_str(s)
    }
}
