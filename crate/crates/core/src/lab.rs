//! Empirical sharpness experiments: growth of mixed-norm/operator-norm
//! ratios over random sign forms, log-log slope fits, perturbation scans
//! of exponent tuples and 3d region classification grids.

use serde::{Deserialize, Serialize};

use crate::error::LabError;
use crate::exponents::{classify_tuple, Admissibility, ExponentTuple};
use crate::instance::HLInstance;
use crate::norm::{
    estimate_norm, exact_norm, BallSpec, DEFAULT_BUDGET, DEFAULT_RESTARTS, DEFAULT_TOL,
};
use crate::scalar::{ExtScalar, Rat};
use crate::tensor::{derive_seed, ksz_sample, CoefficientTensor, MixedNormSpec};

/// How the denominator norm is computed in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    /// Extreme-point enumeration; errors when infeasible.
    Oracle,
    /// Multistart ascent with the given number of starts (lower bound on the norm).
    Multistart { restarts: usize },
    /// Oracle when it fits the budget, multistart otherwise.
    Auto { restarts: usize, budget: u64 },
}

impl Default for NormMethod {
    fn default() -> Self {
        NormMethod::Auto {
            restarts: DEFAULT_RESTARTS,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// A growth experiment: sample `trials` random sign tensors per `n`,
/// measure `mixed_norm / norm` and fit the slope in `log n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthExperiment {
    pub m: usize,
    pub p: BallSpec,
    pub t: MixedNormSpec,
    pub n_list: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub norm_method: NormMethod,
}

impl GrowthExperiment {
    pub fn validate(&self) -> Result<(), LabError> {
        if self.m < 1 {
            return Err(LabError::Experiment("m must be >= 1".into()));
        }
        if self.p.len() != self.m || self.t.len() != self.m {
            return Err(LabError::Experiment(format!(
                "p and t must have length m = {}",
                self.m
            )));
        }
        if self.n_list.len() < 1 || self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Experiment(
                "n_list must be nonempty and strictly increasing".into(),
            ));
        }
        if self.n_list[0] < 1 {
            return Err(LabError::Experiment("n values must be positive".into()));
        }
        if self.trials < 1 {
            return Err(LabError::Experiment("trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// Per-n summary of one growth experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthRow {
    pub n: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

impl std::fmt::Display for GrowthVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            GrowthVerdict::Bounded => "Bounded",
            GrowthVerdict::Growing => "Growing",
            GrowthVerdict::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub slope: f64,
    pub stderr: f64,
    pub verdict: GrowthVerdict,
    /// True when every denominator came from the exact oracle.
    pub oracle_only: bool,
}

impl GrowthReport {
    /// CSV with one line per (n, trial) ratio.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,trial,ratio,max_ratio,mean_ratio\n");
        for row in &self.rows {
            for (trial, ratio) in row.ratios.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.n, trial, ratio, row.max_ratio, row.mean_ratio
                ));
            }
        }
        out
    }
}

fn norm_value(
    t: &CoefficientTensor,
    ball: &BallSpec,
    method: &NormMethod,
    seed: u64,
) -> Result<(f64, bool), LabError> {
    match method {
        NormMethod::Oracle => Ok((exact_norm(t, ball, DEFAULT_BUDGET)?.value, true)),
        NormMethod::Multistart { restarts } => Ok((
            estimate_norm(t, ball, *restarts, seed, DEFAULT_TOL)?.value,
            false,
        )),
        NormMethod::Auto { restarts, budget } => match exact_norm(t, ball, *budget) {
            Ok(est) => Ok((est.value, true)),
            Err(crate::error::NormError::Infeasible(_)) => Ok((
                estimate_norm(t, ball, *restarts, seed, DEFAULT_TOL)?.value,
                false,
            )),
            Err(e) => Err(e.into()),
        },
    }
}

/// Runs the experiment. Deterministic: trial seeds come from
/// `derive_seed(base, n, trial)`.
///
/// The slope is fit on the per-size mean ratios; with four or more sizes
/// the smallest acts as a warm-up and is excluded. Max statistics at desk
/// scale saturate at tiny sizes (extremal draws are common there), which
/// biases the fitted slope; means converge fast enough to read the
/// asymptotic exponent. Per-size max ratios are still reported.
pub fn ratio_curve(exp: &GrowthExperiment) -> Result<GrowthReport, LabError> {
    exp.validate()?;
    let mut rows = Vec::with_capacity(exp.n_list.len());
    let mut oracle_only = true;
    for &n in &exp.n_list {
        let mut ratios = Vec::with_capacity(exp.trials);
        for trial in 0..exp.trials {
            let seed = derive_seed(exp.seed, n as u64, trial as u64);
            let tensor = ksz_sample(exp.m, n, seed);
            let numer = tensor.mixed_norm(&exp.t)?;
            let (denom, exact) = norm_value(&tensor, &exp.p, &exp.norm_method, seed)?;
            oracle_only &= exact;
            if denom <= 0.0 {
                return Err(LabError::Experiment(format!(
                    "zero norm at n = {n}, trial {trial}"
                )));
            }
            ratios.push(numer / denom);
        }
        let max_ratio = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean_ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
        rows.push(GrowthRow {
            n,
            max_ratio,
            mean_ratio,
            ratios,
        });
    }
    let skip = usize::from(rows.len() >= 4);
    let points: Vec<(usize, f64)> = rows[skip..].iter().map(|r| (r.n, r.mean_ratio)).collect();
    let (slope, stderr) = fit_slope(&points)?;
    let v = verdict(slope, stderr, 0.05);
    Ok(GrowthReport {
        rows,
        slope,
        stderr,
        verdict: v,
        oracle_only,
    })
}

/// Expected log-log growth rate of the flat-counting ratio for +-1 forms:
/// `sum 1/t_k - (m+1)/2 + sum 1/p_k`. Needs every `p_k >= 2`.
pub fn predicted_slope(
    t: &ExponentTuple,
    p: &[ExtScalar],
    m: usize,
) -> Result<Rat, LabError> {
    if t.values.len() != m || p.len() != m {
        return Err(LabError::Experiment(format!("t and p must have length {m}")));
    }
    let mut sum_p = Rat::new(0, 1);
    for (k, pk) in p.iter().enumerate() {
        if *pk < ExtScalar::two() {
            return Err(LabError::Experiment(format!(
                "p_{} = {pk} < 2; slope prediction needs p >= 2",
                k + 1
            )));
        }
        sum_p += pk.recip_rat().map_err(crate::error::LabError::from)?;
    }
    let sum_t = t.recip_sum().map_err(crate::error::LabError::from)?;
    Ok(sum_t - Rat::new((m as i64) + 1, 2) + sum_p)
}

/// Ordinary least squares of `log ratio` against `log n`.
pub fn fit_slope(points: &[(usize, f64)]) -> Result<(f64, f64), LabError> {
    let mut distinct: Vec<usize> = points.iter().map(|&(n, _)| n).collect();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(LabError::Fit(format!(
            "need at least 3 distinct n, got {}",
            distinct.len()
        )));
    }
    for &(n, r) in points {
        if r <= 0.0 {
            return Err(LabError::Fit(format!("nonpositive ratio {r} at n = {n}")));
        }
    }
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, r)| r.ln()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let dof = (xs.len().saturating_sub(2)).max(1) as f64;
    let stderr = (sse / dof / sxx).sqrt();
    Ok((slope, stderr))
}

/// Growing if the slope is clearly above the threshold after a 2-sigma
/// band, Bounded if clearly below, otherwise Inconclusive.
pub fn verdict(slope: f64, stderr: f64, growth_threshold: f64) -> GrowthVerdict {
    if slope - 2.0 * stderr > growth_threshold {
        GrowthVerdict::Growing
    } else if slope + 2.0 * stderr < growth_threshold {
        GrowthVerdict::Bounded
    } else {
        GrowthVerdict::Inconclusive
    }
}

/// One perturbed-tuple classification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbEntry {
    /// 1-based coordinate that was decreased.
    pub coordinate: usize,
    pub eps: ExtScalar,
    pub perturbed: Vec<ExtScalar>,
    pub classification: Admissibility,
}

/// Decreases each finite coordinate of `s` by every epsilon in `eps_list`
/// (clamped below at 1) and classifies the result for `inst`.
/// Infinite coordinates are left out; decreasing them is meaningless here.
pub fn perturb_scan(
    s: &ExponentTuple,
    inst: &HLInstance,
    eps_list: &[ExtScalar],
) -> Result<Vec<PerturbEntry>, LabError> {
    let mut out = Vec::new();
    for (j, sj) in s.values.iter().enumerate() {
        let Some(sj_rat) = sj.as_rat() else {
            continue;
        };
        for eps in eps_list {
            let e = eps
                .as_rat()
                .ok_or_else(|| LabError::Experiment("epsilon must be finite".into()))?;
            if e <= Rat::new(0, 1) {
                return Err(LabError::Experiment(format!("epsilon {eps} must be positive")));
            }
            let lowered = (sj_rat - e).max(Rat::new(1, 1));
            let mut values = s.values.to_vec();
            values[j] = ExtScalar::from_rat(lowered).map_err(crate::error::LabError::from)?;
            let tuple = ExponentTuple::custom(values.clone());
            let classification = classify_tuple(&tuple, inst)?;
            out.push(PerturbEntry {
                coordinate: j + 1,
                eps: *eps,
                perturbed: values,
                classification,
            });
        }
    }
    Ok(out)
}

/// A classified grid over exponent tuples for a fixed trilinear instance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionSample {
    pub points: Vec<RegionPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionPoint {
    pub t: Vec<ExtScalar>,
    pub label: Admissibility,
}

impl RegionSample {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t1,t2,t3,label\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{:?}\n",
                pt.t[0], pt.t[1], pt.t[2], pt.label
            ));
        }
        out
    }
}

/// Classifies every tuple on the cartesian grid `axes[0] x axes[1] x axes[2]`
/// for a trilinear instance.
pub fn region_grid(
    inst: &HLInstance,
    axes: &[Vec<ExtScalar>; 3],
) -> Result<RegionSample, LabError> {
    if inst.m() != 3 {
        return Err(LabError::Experiment(format!(
            "region grids are fixed at m = 3, got m = {}",
            inst.m()
        )));
    }
    let mut points = Vec::new();
    for t1 in &axes[0] {
        for t2 in &axes[1] {
            for t3 in &axes[2] {
                let tuple = ExponentTuple::custom(vec![*t1, *t2, *t3]);
                let label = classify_tuple(&tuple, inst)?;
                points.push(RegionPoint {
                    t: vec![*t1, *t2, *t3],
                    label,
                });
            }
        }
    }
    Ok(RegionSample { points })
}
