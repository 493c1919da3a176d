//! Exact-arithmetic calculator for the exponent formulas, admissibility
//! conditions and regularity-shift equations.
//!
//! Every operation works on exact rationals; theorem preconditions are
//! checked exactly and violations name the failed condition.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::ExponentError;
use crate::instance::HLInstance;
use crate::scalar::{ExtScalar, Rat};

/// Which result produced a tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleSource {
    /// Graded tuple with cutoff k0 for the intermediate regime.
    Main,
    /// Isotropic single exponent lambda.
    Dimant,
    /// Anisotropic tuple for p in (1, 2m].
    AlbuquerqueRezende,
    /// Anisotropic tuple requiring p_m in (1, 2].
    Aron,
    /// Bilinear pair (lambda, p2*).
    OsikiewiczTonge,
    /// Isotropic mu for the subcritical regime.
    PracianoPereira,
    /// Vector-valued tuple with threshold 1/r - 1/q.
    Vector,
    /// Critical case (sum 1/p = 1), leading exponent infinite.
    Critical,
    /// Critical isotropic corollary for p_k = m.
    CriticalIso,
    /// Critical isotropic tuple 2m(m-1)/(mk-2k+2).
    Paulino,
    /// Solved from the anisotropic regularity-shift equations.
    RegularityShift,
    /// User-supplied tuple.
    Custom,
}

impl std::fmt::Display for TupleSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TupleSource::Main => "main",
            TupleSource::Dimant => "dimant",
            TupleSource::AlbuquerqueRezende => "albuquerque-rezende",
            TupleSource::Aron => "aron",
            TupleSource::OsikiewiczTonge => "osikiewicz-tonge",
            TupleSource::PracianoPereira => "praciano-pereira",
            TupleSource::Vector => "vector",
            TupleSource::Critical => "critical",
            TupleSource::CriticalIso => "critical-iso",
            TupleSource::Paulino => "paulino",
            TupleSource::RegularityShift => "regularity-shift",
            TupleSource::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// An ordered exponent tuple with provenance and, when applicable, the
/// cutoff index `k0` at which the formula switches to the constant tail.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentTuple {
    pub values: Vec<ExtScalar>,
    pub source: TupleSource,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k0: Option<usize>,
}

impl ExponentTuple {
    pub fn new(values: Vec<ExtScalar>, source: TupleSource) -> Self {
        ExponentTuple {
            values,
            source,
            k0: None,
        }
    }

    pub fn custom(values: Vec<ExtScalar>) -> Self {
        ExponentTuple::new(values, TupleSource::Custom)
    }

    pub fn with_k0(mut self, k0: usize) -> Self {
        self.k0 = Some(k0);
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// 1-based access, matching the s_k notation.
    pub fn at(&self, k: usize) -> &ExtScalar {
        &self.values[k - 1]
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Coordinatewise `self_k >= other_k`.
    pub fn dominates(&self, other: &ExponentTuple) -> bool {
        self.len() == other.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a >= b)
    }

    /// `sum 1/t_k` as an exact rational (infinite entries contribute 0).
    pub fn recip_sum(&self) -> Result<Rat, ExponentError> {
        let mut sum = Rat::new(0, 1);
        for v in &self.values {
            sum += v.recip_rat()?;
        }
        Ok(sum)
    }
}

impl std::fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Classification of a tuple against the proven admissible region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Admissibility {
    Admissible,
    NonAdmissible,
    Unknown,
}

impl std::fmt::Display for Admissibility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Admissibility::Admissible => "Admissible",
            Admissibility::NonAdmissible => "NonAdmissible",
            Admissibility::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// An exact power of two, kept symbolic so odd half-integer exponents stay exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerOfTwo {
    /// Exponent of 2, an exact rational.
    pub exponent: Rat,
}

impl PowerOfTwo {
    pub fn new(exponent: Rat) -> Self {
        PowerOfTwo { exponent }
    }

    /// Exact rational value when the exponent is a nonnegative integer.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.exponent.is_integer() && *self.exponent.numer() >= 0 && *self.exponent.numer() < 63
        {
            Some(Rat::from_integer(1i64 << *self.exponent.numer()))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        2f64.powf(self.exponent.to_f64().unwrap_or(f64::NAN))
    }
}

impl std::fmt::Display for PowerOfTwo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let Some(r) = self.as_rat() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "2^({})", self.exponent)
        }
    }
}

fn half() -> Rat {
    Rat::new(1, 2)
}

fn one() -> Rat {
    Rat::new(1, 1)
}

/// Requires `1/2 <= sum 1/p < 1`, naming the violation otherwise.
fn require_intermediate(inst: &HLInstance) -> Result<Rat, ExponentError> {
    let sum = inst.recip_sum();
    if sum < half() || sum >= one() {
        return Err(ExponentError::Regime(format!(
            "need 1/2 <= sum 1/p_k < 1, got sum = {sum} ({})",
            inst.classify_regime()
        )));
    }
    Ok(sum)
}

/// Conjugate exponent: `1/p + 1/p* = 1`, with `1* = inf` and `inf* = 1`.
pub fn conjugate(p: &ExtScalar) -> Result<ExtScalar, ExponentError> {
    if !p.is_exponent() {
        return Err(ExponentError::Domain(format!(
            "conjugate needs p in [1, inf], got {p}"
        )));
    }
    ExtScalar::from_recip(one() - p.recip_rat()?)
}

/// mu = 2m / (m + 1 - 2 sum 1/p), defined for `sum 1/p <= 1/2`.
pub fn mu_praciano(inst: &HLInstance) -> Result<ExtScalar, ExponentError> {
    let sum = inst.recip_sum();
    if sum > half() {
        return Err(ExponentError::Regime(format!(
            "need sum 1/p_k <= 1/2, got {sum}"
        )));
    }
    let m = Rat::from_integer(inst.m() as i64);
    let mu = (m * 2) / (m + 1 - sum * 2);
    ExtScalar::from_rat(mu)
}

/// The isotropic mu tuple `(mu, ..., mu)`.
pub fn mu_tuple(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let mu = mu_praciano(inst)?;
    Ok(ExponentTuple::new(
        vec![mu; inst.m()],
        TupleSource::PracianoPereira,
    ))
}

/// Sufficient (and, within the window, necessary) condition for the
/// subcritical anisotropic inequality:
/// `sum 1/t_k <= (m+1)/2 - sum 1/p_k` with every `t_k` in the window
/// `((1 - sum 1/p)^{-1}, 2]`. The right end is accepted closed
/// ("window: half-open extended to closed at 2").
pub fn check_sufficient_211(
    t: &ExponentTuple,
    inst: &HLInstance,
) -> Result<bool, ExponentError> {
    let sum_p = inst.recip_sum();
    if sum_p > half() {
        return Err(ExponentError::Regime(format!(
            "condition only stated for sum 1/p_k <= 1/2, got {sum_p}"
        )));
    }
    if t.len() != inst.m() {
        return Err(ExponentError::Parameter(format!(
            "tuple length {} does not match m = {}",
            t.len(),
            inst.m()
        )));
    }
    let lower = ExtScalar::from_recip(one() - sum_p)?;
    let two = ExtScalar::two();
    for (k, tk) in t.values.iter().enumerate() {
        if !(*tk > lower && *tk <= two) {
            return Err(ExponentError::Domain(format!(
                "t_{} = {tk} outside the window ({lower}, 2]",
                k + 1
            )));
        }
    }
    let lhs = t.recip_sum()?;
    let rhs = Rat::from_integer(inst.m() as i64 + 1) / 2 - sum_p;
    Ok(lhs <= rhs)
}

/// Graded tuple for the intermediate regime:
/// `s_k = [1 - tail_k]^{-1}` up to the cutoff `k0`, then 2.
pub fn exponents_main(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    require_intermediate(inst)?;
    let k0 = inst.k0(half())?;
    let mut values = Vec::with_capacity(inst.m());
    for k in 1..=inst.m() {
        if k <= k0 {
            values.push(ExtScalar::from_recip(one() - inst.recip_tail_sum(k)?)?);
        } else {
            values.push(ExtScalar::two());
        }
    }
    Ok(ExponentTuple::new(values, TupleSource::Main).with_k0(k0))
}

/// Anisotropic tuple `s_k = [1/2 + (m-k+1)/(2m) - tail_k]^{-1}`,
/// for `p_k` in `(1, 2m]`.
pub fn exponents_ar(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let m = inst.m();
    let two_m = ExtScalar::from_int(2 * m as u64);
    for (i, pk) in inst.p().iter().enumerate() {
        if *pk <= ExtScalar::one() || *pk > two_m {
            return Err(ExponentError::Domain(format!(
                "p_{} = {pk} outside (1, {}]",
                i + 1,
                2 * m
            )));
        }
    }
    require_intermediate(inst)?;
    let mut values = Vec::with_capacity(m);
    for k in 1..=m {
        let recip =
            half() + Rat::new((m - k + 1) as i64, 2 * m as i64) - inst.recip_tail_sum(k)?;
        values.push(ExtScalar::from_recip(recip)?);
    }
    Ok(ExponentTuple::new(values, TupleSource::AlbuquerqueRezende))
}

/// Anisotropic tuple `s_k = [1 - tail_k]^{-1}` under the hypotheses
/// `p_1, ..., p_{m-1} in (1, inf]`, `p_m in (1, 2]`.
pub fn exponents_aron(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let m = inst.m();
    for (i, pk) in inst.p().iter().enumerate() {
        if *pk <= ExtScalar::one() {
            return Err(ExponentError::Domain(format!(
                "p_{} = {pk} must exceed 1",
                i + 1
            )));
        }
    }
    if *inst.p_at(m) > ExtScalar::two() {
        return Err(ExponentError::Domain(format!(
            "p_m = {} outside (1, 2]",
            inst.p_at(m)
        )));
    }
    require_intermediate(inst)?;
    let mut values = Vec::with_capacity(m);
    for k in 1..=m {
        values.push(ExtScalar::from_recip(one() - inst.recip_tail_sum(k)?)?);
    }
    Ok(ExponentTuple::new(values, TupleSource::Aron))
}

/// Optimal isotropic exponent `1/lambda = 1 - sum 1/p`.
pub fn lambda_dimant(inst: &HLInstance) -> Result<ExtScalar, ExponentError> {
    let sum = require_intermediate(inst)?;
    ExtScalar::from_recip(one() - sum)
}

/// The isotropic lambda tuple `(lambda, ..., lambda)`.
pub fn lambda_tuple(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let lambda = lambda_dimant(inst)?;
    Ok(ExponentTuple::new(
        vec![lambda; inst.m()],
        TupleSource::Dimant,
    ))
}

/// Bilinear pair `(lambda, p2*)` for `p1 in (2, inf]`, `p2 in (1, 2]`.
/// Holds with constant 1.
pub fn exponents_ot(p1: &ExtScalar, p2: &ExtScalar) -> Result<ExponentTuple, ExponentError> {
    if *p1 <= ExtScalar::two() {
        return Err(ExponentError::Domain(format!("p1 = {p1} outside (2, inf]")));
    }
    if *p2 <= ExtScalar::one() || *p2 > ExtScalar::two() {
        return Err(ExponentError::Domain(format!("p2 = {p2} outside (1, 2]")));
    }
    let sum = p1.recip_rat()? + p2.recip_rat()?;
    if sum < half() || sum >= one() {
        return Err(ExponentError::Regime(format!(
            "need 1/2 <= 1/p1 + 1/p2 < 1, got {sum}"
        )));
    }
    let lambda = ExtScalar::from_recip(one() - sum)?;
    Ok(ExponentTuple::new(
        vec![lambda, conjugate(p2)?],
        TupleSource::OsikiewiczTonge,
    ))
}

/// Vector-valued tuple with threshold `1/r - 1/q`:
/// `s_k = [1/r - tail_k]^{-1}` up to `k0`, then `q`. At the critical
/// boundary `sum 1/p = 1/r` the leading exponent is infinite.
pub fn exponents_vector(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let (r, q) = match (inst.r(), inst.q()) {
        (Some(r), Some(q)) => (r, q),
        _ => {
            return Err(ExponentError::Parameter(
                "vector-valued exponents need the summing parameters (r, q)".into(),
            ))
        }
    };
    let inv_r = r.recip_rat()?;
    let inv_q = q.recip_rat()?;
    let threshold = inv_r - inv_q;
    let sum = inst.recip_sum();
    if sum < threshold || sum > inv_r {
        return Err(ExponentError::Regime(format!(
            "need 1/r - 1/q <= sum 1/p_k <= 1/r, got sum = {sum}, 1/r - 1/q = {threshold}, 1/r = {inv_r}"
        )));
    }
    if sum == inv_r {
        let tail2 = inst.recip_tail_sum(2)?;
        if tail2 < threshold || tail2 >= inv_r {
            return Err(ExponentError::Regime(format!(
                "critical boundary needs 1/r - 1/q <= sum_{{k>=2}} 1/p_k < 1/r, got {tail2}"
            )));
        }
    }
    let k0 = inst.k0(threshold)?;
    let mut values = Vec::with_capacity(inst.m());
    for k in 1..=inst.m() {
        if k <= k0 {
            values.push(ExtScalar::from_recip(inv_r - inst.recip_tail_sum(k)?)?);
        } else {
            values.push(*q);
        }
    }
    Ok(ExponentTuple::new(values, TupleSource::Vector).with_k0(k0))
}

/// Critical-case tuple (`sum 1/p = 1`): `s_1 = inf`, then the graded
/// pattern with cutoff at threshold 1/2.
pub fn exponents_critical(inst: &HLInstance) -> Result<ExponentTuple, ExponentError> {
    let sum = inst.recip_sum();
    if sum != one() {
        return Err(ExponentError::Regime(format!(
            "need sum 1/p_k = 1, got {sum}"
        )));
    }
    let tail2 = inst.recip_tail_sum(2)?;
    if tail2 < half() || tail2 >= one() {
        return Err(ExponentError::Regime(format!(
            "need 1/2 <= sum_{{k>=2}} 1/p_k < 1, got {tail2}"
        )));
    }
    let k0 = inst.k0(half())?;
    let mut values = Vec::with_capacity(inst.m());
    for k in 1..=inst.m() {
        if k <= k0 {
            // k = 1 has tail 1, so the convention 1/0 = inf applies.
            values.push(ExtScalar::from_recip(one() - inst.recip_tail_sum(k)?)?);
        } else {
            values.push(ExtScalar::two());
        }
    }
    Ok(ExponentTuple::new(values, TupleSource::Critical).with_k0(k0))
}

/// Critical isotropic corollary for `p_1 = ... = p_m = m`:
/// `(inf, m, m/2, ...)` with `k0 = floor((m+2)/2)`.
pub fn exponents_critical_iso(m: usize) -> Result<ExponentTuple, ExponentError> {
    if m < 2 {
        return Err(ExponentError::Parameter(format!("need m >= 2, got {m}")));
    }
    let k0 = (m + 2) / 2;
    let mut values = Vec::with_capacity(m);
    values.push(ExtScalar::INF);
    for k in 2..=m {
        if k <= k0 {
            values.push(ExtScalar::from_rat(Rat::new(m as i64, k as i64 - 1))?);
        } else {
            values.push(ExtScalar::two());
        }
    }
    Ok(ExponentTuple::new(values, TupleSource::CriticalIso).with_k0(k0))
}

/// Critical isotropic tuple `s_k = 2m(m-1)/(mk - 2k + 2)` with `s_1 = inf`.
pub fn exponents_paulino(m: usize) -> Result<ExponentTuple, ExponentError> {
    if m < 2 {
        return Err(ExponentError::Parameter(format!("need m >= 2, got {m}")));
    }
    let mut values = Vec::with_capacity(m);
    values.push(ExtScalar::INF);
    let mi = m as i64;
    for k in 2..=mi {
        values.push(ExtScalar::from_rat(Rat::new(
            2 * mi * (mi - 1),
            mi * k - 2 * k + 2,
        ))?);
    }
    Ok(ExponentTuple::new(values, TupleSource::Paulino))
}

/// Constant bound `2^{(m - k0)/2}` for the intermediate regime.
pub fn constant_bound(inst: &HLInstance) -> Result<PowerOfTwo, ExponentError> {
    require_intermediate(inst)?;
    let k0 = inst.k0(half())?;
    Ok(PowerOfTwo::new(Rat::new(inst.m() as i64 - k0 as i64, 2)))
}

/// Solves the anisotropic regularity-shift equations
/// `1/s_k - sum_{j>=k} 1/q_j = 1/r - sum_{j>=k} 1/p_j` exactly.
///
/// Returns the solved tuple and whether the shift is valid: the positivity
/// condition `1/r - sum 1/p + sum 1/q > 0` holds and every `s_k >= 1`.
/// Nonpositive solved reciprocals are reported as `inf` with `valid = false`.
pub fn regularity_shift(
    r: &ExtScalar,
    p: &[ExtScalar],
    q: &[ExtScalar],
) -> Result<(ExponentTuple, bool), ExponentError> {
    if p.len() != q.len() || p.is_empty() {
        return Err(ExponentError::Parameter(format!(
            "p and q must have equal nonzero length, got {} and {}",
            p.len(),
            q.len()
        )));
    }
    if *r < ExtScalar::one() {
        return Err(ExponentError::Parameter(format!("r = {r} must be >= 1")));
    }
    for (i, (pk, qk)) in p.iter().zip(q).enumerate() {
        if qk < pk {
            return Err(ExponentError::Domain(format!(
                "q_{} = {qk} < p_{} = {pk}",
                i + 1,
                i + 1
            )));
        }
    }
    let inv_r = r.recip_rat()?;
    let m = p.len();
    let mut tail_p = vec![Rat::new(0, 1); m + 1];
    let mut tail_q = vec![Rat::new(0, 1); m + 1];
    for k in (0..m).rev() {
        tail_p[k] = tail_p[k + 1] + p[k].recip_rat()?;
        tail_q[k] = tail_q[k + 1] + q[k].recip_rat()?;
    }
    let positivity = inv_r - tail_p[0] + tail_q[0] > Rat::new(0, 1);
    let mut values = Vec::with_capacity(m);
    let mut valid = positivity;
    for k in 0..m {
        let recip = inv_r - tail_p[k] + tail_q[k];
        if recip <= Rat::new(0, 1) {
            valid = false;
            values.push(ExtScalar::INF);
        } else {
            let s = ExtScalar::from_recip(recip)?;
            if s < ExtScalar::one() {
                valid = false;
            }
            values.push(s);
        }
    }
    Ok((
        ExponentTuple::new(values, TupleSource::RegularityShift),
        valid,
    ))
}

/// Regularity-principle increment `alpha = p1 p2 / (2 p1 - p2)`,
/// for `1 <= p1 <= p2 < 2 p1`.
pub fn rp_alpha(p1: &ExtScalar, p2: &ExtScalar) -> Result<ExtScalar, ExponentError> {
    let (a, b) = match (p1.as_rat(), p2.as_rat()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(ExponentError::Domain(
                "rp_alpha needs finite p1, p2".into(),
            ))
        }
    };
    if a < one() || b < a {
        return Err(ExponentError::Domain(format!(
            "need 1 <= p1 <= p2, got p1 = {p1}, p2 = {p2}"
        )));
    }
    if b >= a * 2 {
        return Err(ExponentError::Domain(format!(
            "need p2 < 2 p1, got p1 = {p1}, p2 = {p2}"
        )));
    }
    ExtScalar::from_rat(a * b / (a * 2 - b))
}

/// Increment `delta = 2 eps p1 / (p1 - eps)`, for `0 < eps < p1`.
/// Satisfies `p1 + delta = rp_alpha(p1, p1 + eps)` identically.
pub fn rp_delta(p1: &ExtScalar, eps: &ExtScalar) -> Result<ExtScalar, ExponentError> {
    let (a, e) = match (p1.as_rat(), eps.as_rat()) {
        (Some(a), Some(e)) => (a, e),
        _ => return Err(ExponentError::Domain("rp_delta needs finite p1, eps".into())),
    };
    if e <= Rat::new(0, 1) || e >= a {
        return Err(ExponentError::Domain(format!(
            "need 0 < eps < p1, got eps = {eps}, p1 = {p1}"
        )));
    }
    ExtScalar::from_rat(e * a * 2 / (a - e))
}

/// KSZ necessary condition: `sum 1/t_k <= (m+1)/2 - sum 1/p_k`,
/// proven for `p_k in [2, inf]`. `false` means provably non-admissible.
pub fn check_necessary_ksz(
    t: &ExponentTuple,
    inst: &HLInstance,
) -> Result<bool, ExponentError> {
    if t.len() != inst.m() {
        return Err(ExponentError::Parameter(format!(
            "tuple length {} does not match m = {}",
            t.len(),
            inst.m()
        )));
    }
    for (i, pk) in inst.p().iter().enumerate() {
        if *pk < ExtScalar::two() {
            return Err(ExponentError::NotApplicable(format!(
                "p_{} = {pk} < 2; the condition is only proven for p >= 2",
                i + 1
            )));
        }
    }
    let lhs = t.recip_sum()?;
    let rhs = Rat::from_integer(inst.m() as i64 + 1) / 2 - inst.recip_sum();
    Ok(lhs <= rhs)
}

/// All theorem tuples whose preconditions hold for this instance.
pub fn proven_tuples(inst: &HLInstance) -> Vec<ExponentTuple> {
    let mut out = Vec::new();
    let candidates: [Result<ExponentTuple, ExponentError>; 6] = [
        exponents_main(inst),
        exponents_aron(inst),
        exponents_ar(inst),
        mu_tuple(inst),
        lambda_tuple(inst),
        exponents_critical(inst),
    ];
    for c in candidates {
        if let Ok(t) = c {
            out.push(t);
        }
    }
    out
}

/// Classifies a tuple for an instance:
/// * `Admissible` when it coordinatewise dominates a proven tuple, or when it
///   sits in the subcritical window and satisfies the sufficient condition;
/// * `NonAdmissible` when some trailing suffix with all spaces >= 2 violates
///   the KSZ necessary condition, or a critical-regime necessary condition
///   fails (see [`violates_critical_necessary`]);
/// * `Unknown` otherwise.
pub fn classify_tuple(t: &ExponentTuple, inst: &HLInstance) -> Result<Admissibility, ExponentError> {
    if t.len() != inst.m() {
        return Err(ExponentError::Parameter(format!(
            "tuple length {} does not match m = {}",
            t.len(),
            inst.m()
        )));
    }
    for (k, v) in t.values.iter().enumerate() {
        if !v.is_exponent() {
            return Err(ExponentError::Domain(format!(
                "t_{} = {v} lies outside [1, inf]",
                k + 1
            )));
        }
    }
    if proven_tuples(inst).iter().any(|s| t.dominates(s)) {
        return Ok(Admissibility::Admissible);
    }
    if matches!(check_sufficient_211(t, inst), Ok(true)) {
        return Ok(Admissibility::Admissible);
    }
    if violates_ksz_on_suffix(t, inst)? {
        return Ok(Admissibility::NonAdmissible);
    }
    if violates_critical_necessary(t, inst)? {
        return Ok(Admissibility::NonAdmissible);
    }
    Ok(Admissibility::Unknown)
}

/// Necessary conditions specific to `sum 1/p >= 1`:
/// * a trailing suffix with `sum 1/p_j >= 1` admits no all-finite exponent
///   suffix (a flat exponent at the max would follow by monotonicity);
/// * for the critical isotropic instance `p_1 = ... = p_m = m`, any
///   admissible tuple has `t_k >= m/(k-1)` for `k >= 2`.
pub fn violates_critical_necessary(
    t: &ExponentTuple,
    inst: &HLInstance,
) -> Result<bool, ExponentError> {
    let m = inst.m();
    for k in 1..=m {
        if inst.recip_tail_sum(k)? >= one()
            && t.values[k - 1..].iter().all(|v| !v.is_infinite())
        {
            return Ok(true);
        }
    }
    let iso_critical = inst.recip_sum() == one()
        && inst.p().iter().all(|p| *p == ExtScalar::from_int(m as u64));
    if iso_critical {
        for k in 2..=m {
            if t.values[k - 1] < ExtScalar::from_rat(Rat::new(m as i64, k as i64 - 1))? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Scans every trailing suffix `(t_k, ..., t_m)` whose spaces are all >= 2
/// for a violation of the KSZ necessary condition (restriction lemma).
pub fn violates_ksz_on_suffix(
    t: &ExponentTuple,
    inst: &HLInstance,
) -> Result<bool, ExponentError> {
    let m = inst.m();
    for k in 1..=m {
        if inst.p()[k - 1..].iter().any(|p| *p < ExtScalar::two()) {
            continue;
        }
        let mut lhs = Rat::new(0, 1);
        for v in &t.values[k - 1..] {
            lhs += v.recip_rat()?;
        }
        let len = (m - k + 1) as i64;
        let rhs = Rat::new(len + 1, 2) - inst.recip_tail_sum(k)?;
        if lhs > rhs {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::HLInstance;

    fn s(v: &str) -> ExtScalar {
        v.parse().unwrap()
    }

    fn inst(ps: &[&str]) -> HLInstance {
        HLInstance::new(ps.iter().map(|p| s(p)).collect()).unwrap()
    }

    fn iso(m: usize, p: &str) -> HLInstance {
        HLInstance::isotropic(m, s(p)).unwrap()
    }

    fn tuple(vs: &[&str]) -> ExponentTuple {
        ExponentTuple::custom(vs.iter().map(|v| s(v)).collect())
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(&s("2")).unwrap(), s("2"));
        assert_eq!(conjugate(&s("inf")).unwrap(), s("1"));
        assert_eq!(conjugate(&s("1")).unwrap(), s("inf"));
        assert_eq!(conjugate(&s("4/3")).unwrap(), s("4"));
        assert!(conjugate(&s("1/2")).is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_praciano(&iso(2, "inf")).unwrap(), s("4/3"));
        assert_eq!(mu_praciano(&iso(3, "inf")).unwrap(), s("3/2"));
        assert_eq!(mu_praciano(&iso(2, "8")).unwrap(), s("8/5"));
        assert!(mu_praciano(&iso(9, "10")).is_err());
    }

    #[test]
    fn sufficient_211_examples() {
        let two_inf = iso(2, "inf");
        assert!(check_sufficient_211(&tuple(&["4/3", "4/3"]), &two_inf).unwrap());
        assert!(check_sufficient_211(&tuple(&["2", "2", "2"]), &iso(3, "8")).unwrap());
        // 4/3 - 1/10 = 37/30 is still inside the window but pushes the sum over.
        assert!(!check_sufficient_211(&tuple(&["37/30", "4/3"]), &two_inf).unwrap());
        // outside the window
        assert!(check_sufficient_211(&tuple(&["1", "4/3"]), &two_inf).is_err());
        assert!(check_sufficient_211(&tuple(&["4/3", "4/3"]), &iso(9, "10")).is_err());
    }

    #[test]
    fn mu_tuple_hits_211_with_equality() {
        // sum m/mu = (m+1)/2 - sum 1/p by algebra.
        for inst in [iso(2, "inf"), iso(3, "8"), iso(4, "inf"), iso(2, "8")] {
            let t = mu_tuple(&inst).unwrap();
            let lhs = t.recip_sum().unwrap();
            let rhs = Rat::from_integer(inst.m() as i64 + 1) / 2 - inst.recip_sum();
            assert_eq!(lhs, rhs);
            assert!(check_sufficient_211(&t, &inst).unwrap());
        }
    }

    #[test]
    fn main_examples() {
        let t = exponents_main(&iso(9, "10")).unwrap();
        assert_eq!(
            t.values,
            tuple(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"]).values
        );
        assert_eq!(t.k0, Some(5));

        let t = exponents_main(&inst(&["4", "2"])).unwrap();
        assert_eq!(t.values, tuple(&["4", "2"]).values);

        let t = exponents_main(&iso(3, "4")).unwrap();
        assert_eq!(t.values, tuple(&["4", "2", "2"]).values);
        assert_eq!(t.k0, Some(2));

        assert!(exponents_main(&iso(2, "8")).is_err());
        assert!(exponents_main(&iso(10, "10")).is_err());
    }

    #[test]
    fn ar_examples() {
        let t = exponents_ar(&iso(9, "10")).unwrap();
        assert_eq!(*t.at(1), s("10"));
        assert_eq!(*t.at(2), s("90/13"));
        assert_eq!(*t.at(5), s("18/5"));
        assert_eq!(*t.at(9), s("90/41"));
        // p outside (1, 2m]
        assert!(exponents_ar(&iso(2, "8")).is_err());
        assert!(exponents_ar(&inst(&["inf", "4", "2"])).is_err());
    }

    #[test]
    fn aron_examples() {
        let t = exponents_aron(&inst(&["4", "2"])).unwrap();
        assert_eq!(t.values, tuple(&["4", "2"]).values);
        let t = exponents_aron(&inst(&["inf", "4", "2"])).unwrap();
        assert_eq!(t.values, tuple(&["4", "4", "2"]).values);
        assert!(exponents_aron(&inst(&["4", "4"])).is_err());
    }

    #[test]
    fn dimant_examples() {
        assert_eq!(lambda_dimant(&iso(9, "10")).unwrap(), s("10"));
        assert_eq!(lambda_dimant(&inst(&["4", "2"])).unwrap(), s("4"));
        assert_eq!(lambda_dimant(&iso(2, "3")).unwrap(), s("3"));
        assert!(lambda_dimant(&iso(2, "8")).is_err());
    }

    #[test]
    fn ot_examples() {
        let t = exponents_ot(&s("4"), &s("2")).unwrap();
        assert_eq!(t.values, tuple(&["4", "2"]).values);
        let t = exponents_ot(&s("inf"), &s("4/3")).unwrap();
        assert_eq!(t.values, tuple(&["4", "4"]).values);
        assert!(exponents_ot(&s("3"), &s("3")).is_err());
    }

    #[test]
    fn vector_examples() {
        let v = iso(9, "10").with_summing(s("1"), s("2")).unwrap();
        let t = exponents_vector(&v).unwrap();
        assert_eq!(
            t.values,
            tuple(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"]).values
        );

        // critical boundary: leading exponent forced to infinity
        let v = iso(10, "10").with_summing(s("1"), s("2")).unwrap();
        let t = exponents_vector(&v).unwrap();
        assert_eq!(*t.at(1), ExtScalar::INF);
        assert_eq!(
            t.values[1..],
            tuple(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"]).values[..]
        );

        // r = q: zero threshold forces k0 = m
        let v = iso(2, "8").with_summing(s("2"), s("2")).unwrap();
        let t = exponents_vector(&v).unwrap();
        assert_eq!(t.k0, Some(2));
        // 1/s_k = 1/2 - tail_k
        assert_eq!(*t.at(1), s("4"));
        assert_eq!(*t.at(2), s("8/3"));

        assert!(exponents_vector(&iso(9, "10")).is_err());
    }

    #[test]
    fn critical_examples() {
        let t = exponents_critical(&iso(10, "10")).unwrap();
        assert_eq!(*t.at(1), ExtScalar::INF);
        assert_eq!(
            t.values[1..],
            tuple(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"]).values[..]
        );
        assert_eq!(t.k0, Some(6));

        let t = exponents_critical(&iso(2, "2")).unwrap();
        assert_eq!(t.values, vec![ExtScalar::INF, s("2")]);

        let t = exponents_critical(&iso(3, "3")).unwrap();
        assert_eq!(t.values, vec![ExtScalar::INF, s("3"), s("2")]);
        assert_eq!(t.k0, Some(2));

        assert!(exponents_critical(&iso(9, "10")).is_err());
    }

    #[test]
    fn critical_iso_examples() {
        let t = exponents_critical_iso(10).unwrap();
        assert_eq!(*t.at(1), ExtScalar::INF);
        assert_eq!(
            t.values[1..],
            tuple(&["10", "5", "10/3", "5/2", "2", "2", "2", "2", "2"]).values[..]
        );
        assert_eq!(t.k0, Some(6));
        assert_eq!(
            exponents_critical_iso(2).unwrap().values,
            vec![ExtScalar::INF, s("2")]
        );
        assert_eq!(
            exponents_critical_iso(3).unwrap().values,
            vec![ExtScalar::INF, s("3"), s("2")]
        );
    }

    #[test]
    fn critical_iso_matches_critical() {
        for m in 2..=12 {
            let inst = HLInstance::isotropic(m, ExtScalar::from_int(m as u64)).unwrap();
            assert_eq!(
                exponents_critical_iso(m).unwrap().values,
                exponents_critical(&inst).unwrap().values,
                "m = {m}"
            );
        }
    }

    #[test]
    fn paulino_examples() {
        let t = exponents_paulino(10).unwrap();
        assert_eq!(*t.at(1), ExtScalar::INF);
        assert_eq!(*t.at(2), s("10"));
        assert_eq!(*t.at(4), s("90/17"));
        assert_eq!(*t.at(10), s("90/41"));
    }

    #[test]
    fn paulino_dominates_critical_iso() {
        for m in 2..=12 {
            let pa = exponents_paulino(m).unwrap();
            let ci = exponents_critical_iso(m).unwrap();
            assert_eq!(pa.at(2), ci.at(2));
            assert!(pa.dominates(&ci), "m = {m}");
        }
    }

    #[test]
    fn constant_bound_examples() {
        let b = constant_bound(&iso(9, "10")).unwrap();
        assert_eq!(b.as_rat(), Some(Rat::from_integer(4)));

        // k0 = m gives constant 1
        let b = constant_bound(&inst(&["4", "2"])).unwrap();
        assert_eq!(b.as_rat(), Some(Rat::from_integer(1)));

        let b = constant_bound(&iso(3, "4")).unwrap();
        assert_eq!(b.as_rat(), None);
        assert!((b.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn regularity_shift_examples() {
        // q = p collapses to s_k = r
        let p = vec![s("3"), s("5")];
        let (t, valid) = regularity_shift(&s("2"), &p, &p).unwrap();
        assert_eq!(t.values, vec![s("2"), s("2")]);
        assert!(valid);

        let (t, valid) =
            regularity_shift(&s("2"), &[s("1"), s("2")], &[s("4/3"), s("2")]).unwrap();
        assert_eq!(t.values, vec![s("4"), s("2")]);
        assert!(valid);

        let (t, valid) = regularity_shift(&s("2"), &[s("1"), s("1")], &[s("1"), s("1")]).unwrap();
        assert_eq!(t.values, vec![s("2"), s("2")]);
        assert!(valid);

        assert!(regularity_shift(&s("2"), &[s("2")], &[s("3/2")]).is_err());
    }

    #[test]
    fn rp_examples() {
        assert_eq!(rp_alpha(&s("1"), &s("1")).unwrap(), s("1"));
        assert_eq!(rp_alpha(&s("1"), &s("3/2")).unwrap(), s("3"));
        assert_eq!(rp_alpha(&s("2"), &s("3")).unwrap(), s("6"));
        assert!(rp_alpha(&s("1"), &s("2")).is_err());

        assert_eq!(rp_delta(&s("1"), &s("1/2")).unwrap(), s("2"));
        assert_eq!(rp_delta(&s("2"), &s("1")).unwrap(), s("4"));
        assert!(rp_delta(&s("1"), &s("1")).is_err());
    }

    #[test]
    fn rp_delta_alpha_consistency() {
        // p1 + delta = alpha(p1, p1 + eps)
        for num in 1..8i64 {
            for den in 1..5i64 {
                let p1 = ExtScalar::from_rat(Rat::new(num + den, den)).unwrap();
                let eps = ExtScalar::from_rat(Rat::new(num, den + 1)).unwrap();
                if eps.as_rat().unwrap() >= p1.as_rat().unwrap() {
                    continue;
                }
                let delta = rp_delta(&p1, &eps).unwrap();
                let p2 =
                    ExtScalar::from_rat(p1.as_rat().unwrap() + eps.as_rat().unwrap()).unwrap();
                let alpha = rp_alpha(&p1, &p2).unwrap();
                assert_eq!(
                    p1.as_rat().unwrap() + delta.as_rat().unwrap(),
                    alpha.as_rat().unwrap()
                );
            }
        }
    }

    #[test]
    fn ksz_necessary_examples() {
        let i3 = iso(3, "4");
        assert!(check_necessary_ksz(&tuple(&["4", "2", "2"]), &i3).unwrap());
        assert!(!check_necessary_ksz(&tuple(&["4", "2", "19/10"]), &i3).unwrap());
        let two_inf = iso(2, "inf");
        assert!(check_necessary_ksz(&tuple(&["4/3", "4/3"]), &two_inf).unwrap());
        assert!(check_necessary_ksz(&tuple(&["4", "2"]), &inst(&["4", "3/2"])).is_err());
    }

    #[test]
    fn classify_examples() {
        let i3 = iso(3, "4");
        assert_eq!(
            classify_tuple(&tuple(&["4", "2", "2"]), &i3).unwrap(),
            Admissibility::Admissible
        );
        assert_eq!(
            classify_tuple(&tuple(&["4", "2", "19/10"]), &i3).unwrap(),
            Admissibility::NonAdmissible
        );
        // frozen fixture: the suffix (100, 1) over (4, 4) violates the
        // necessary condition (1/100 + 1 > 3/2 - 1/2)
        assert_eq!(
            classify_tuple(&tuple(&["100", "100", "1"]), &i3).unwrap(),
            Admissibility::NonAdmissible
        );
    }

    #[test]
    fn classify_subcritical_window() {
        // inside the subcritical window, the sufficient condition decides
        let two_inf = iso(2, "inf");
        assert_eq!(
            classify_tuple(&tuple(&["5/4", "5/3"]), &two_inf).unwrap(),
            Admissibility::Admissible
        );
        assert_eq!(
            classify_tuple(&tuple(&["7/6", "3/2"]), &two_inf).unwrap(),
            Admissibility::NonAdmissible
        );
    }

    #[test]
    fn main_first_entry_is_lambda() {
        for inst in [iso(9, "10"), inst(&["4", "2"]), iso(3, "4"), inst(&["inf", "4", "2"])] {
            assert_eq!(
                *exponents_main(&inst).unwrap().at(1),
                lambda_dimant(&inst).unwrap()
            );
        }
    }

    #[test]
    fn main_matches_ot_on_bilinear_domain() {
        let i = inst(&["4", "2"]);
        assert_eq!(
            exponents_main(&i).unwrap().values,
            exponents_ot(&s("4"), &s("2")).unwrap().values
        );
        let i = inst(&["3", "2"]);
        assert_eq!(
            exponents_main(&i).unwrap().values,
            exponents_ot(&s("3"), &s("2")).unwrap().values
        );
    }

    #[test]
    fn main_dominated_by_ar() {
        // Table 1 dominance: main_k <= ar_k, strict somewhere for m=9, p=10
        let i = iso(9, "10");
        let main = exponents_main(&i).unwrap();
        let ar = exponents_ar(&i).unwrap();
        assert!(ar.dominates(&main));
        assert!(main.values != ar.values);
    }

    #[test]
    fn vector_12_matches_main() {
        for i in [iso(9, "10"), iso(3, "4"), inst(&["4", "2"])] {
            let v = i.clone().with_summing(s("1"), s("2")).unwrap();
            assert_eq!(
                exponents_vector(&v).unwrap().values,
                exponents_main(&i).unwrap().values
            );
        }
    }
}
