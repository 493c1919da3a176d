//! The five subcommands: exponents, table, verify, sharpness, region.

use std::path::Path;

use serde::Serialize;

use hl_core::exponents::{
    classify_tuple, constant_bound, exponents_ar, exponents_aron, exponents_critical,
    exponents_critical_iso, exponents_main, exponents_ot, exponents_paulino, exponents_vector,
    lambda_tuple, mu_tuple, ExponentTuple,
};
use hl_core::instance::HLInstance;
use hl_core::lab::{perturb_scan, ratio_curve, region_grid, GrowthExperiment, GrowthVerdict, NormMethod};
use hl_core::norm::BallSpec;
use hl_core::scalar::ExtScalar;
use hl_core::tensor::{derive_seed, ksz_sample, CoefficientTensor};
use hl_core::Admissibility;

use crate::config::{OutputFormat, RunConfig};
use crate::render::{scalar_cell, TextTable};

pub type CmdResult = Result<i32, String>;

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn build_instance(cfg: &RunConfig) -> Result<HLInstance, String> {
    let p = cfg.instance_p().map_err(fail)?;
    let inst = HLInstance::new(p).map_err(fail)?;
    match (&cfg.r, &cfg.q) {
        (Some(r), Some(q)) => inst.with_summing(*r, *q).map_err(fail),
        (None, None) => Ok(inst),
        _ => Err("vector parameters need both -r and -q".into()),
    }
}

/// Instance for theorems that are defined by `m` alone (`p_k = m`).
fn iso_critical_instance(cfg: &RunConfig) -> Result<(usize, HLInstance), String> {
    let m = match (cfg.m, &cfg.p) {
        (Some(m), _) => m,
        (None, Some(p)) if p.len() > 1 => p.len(),
        _ => return Err("need -m (or a full -p list)".into()),
    };
    let inst = HLInstance::isotropic(m, ExtScalar::from_int(m as u64)).map_err(fail)?;
    Ok((m, inst))
}

fn theorem_tuple(name: &str, cfg: &RunConfig) -> Result<(ExponentTuple, HLInstance), String> {
    match name {
        "main" => {
            let inst = build_instance(cfg)?;
            Ok((exponents_main(&inst).map_err(fail)?, inst))
        }
        "dimant" => {
            let inst = build_instance(cfg)?;
            Ok((lambda_tuple(&inst).map_err(fail)?, inst))
        }
        "ar" => {
            let inst = build_instance(cfg)?;
            Ok((exponents_ar(&inst).map_err(fail)?, inst))
        }
        "aron" => {
            let inst = build_instance(cfg)?;
            Ok((exponents_aron(&inst).map_err(fail)?, inst))
        }
        "mu" | "praciano" => {
            let inst = build_instance(cfg)?;
            Ok((mu_tuple(&inst).map_err(fail)?, inst))
        }
        "ot" => {
            let inst = build_instance(cfg)?;
            if inst.m() != 2 {
                return Err("theorem ot is bilinear; need m = 2".into());
            }
            let t = exponents_ot(inst.p_at(1), inst.p_at(2)).map_err(fail)?;
            Ok((t, inst))
        }
        "vector" => {
            let inst = build_instance(cfg)?;
            Ok((exponents_vector(&inst).map_err(fail)?, inst))
        }
        "critical" => {
            let inst = build_instance(cfg)?;
            Ok((exponents_critical(&inst).map_err(fail)?, inst))
        }
        "critical-iso" => {
            let (m, inst) = iso_critical_instance(cfg)?;
            Ok((exponents_critical_iso(m).map_err(fail)?, inst))
        }
        "paulino" => {
            let (m, inst) = iso_critical_instance(cfg)?;
            Ok((exponents_paulino(m).map_err(fail)?, inst))
        }
        other => Err(format!(
            "unknown theorem {other:?}; expected one of main, dimant, ar, aron, mu, ot, vector, critical, critical-iso, paulino"
        )),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), String> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_artifacts(out: &Path, json: &str, csv: &str) -> Result<(), String> {
    let json_path = format!("{}.json", out.display());
    let csv_path = format!("{}.csv", out.display());
    std::fs::write(&json_path, json).map_err(|e| format!("cannot write {json_path}: {e}"))?;
    std::fs::write(&csv_path, csv).map_err(|e| format!("cannot write {csv_path}: {e}"))?;
    println!("wrote {json_path}");
    println!("wrote {csv_path}");
    Ok(())
}

#[derive(Serialize)]
struct ExponentsOut {
    theorem: String,
    m: usize,
    p: Vec<ExtScalar>,
    s: ExponentTuple,
    regime: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_bound: Option<String>,
}

pub fn cmd_exponents(cfg: &RunConfig) -> CmdResult {
    let name = cfg
        .theorem
        .as_deref()
        .ok_or_else(|| "missing --theorem".to_string())?;
    let (tuple, inst) = theorem_tuple(name, cfg)?;
    let bound = constant_bound(&inst).ok().map(|b| b.to_string());
    let out = ExponentsOut {
        theorem: name.to_string(),
        m: inst.m(),
        p: inst.p().to_vec(),
        s: tuple.clone(),
        regime: inst.classify_regime().to_string(),
        constant_bound: bound.clone(),
    };
    let text = match cfg.format {
        OutputFormat::Json => serde_json::to_string_pretty(&out).map_err(fail)? + "\n",
        OutputFormat::Csv => {
            let cells: Vec<String> = tuple.values.iter().map(|v| v.to_string()).collect();
            let k0 = tuple.k0.map(|k| k.to_string()).unwrap_or_default();
            format!("theorem,{}\n{name},{},{k0}\n", header_csv(inst.m()), cells.join(","))
        }
        OutputFormat::Pretty => {
            let mut table = TextTable::new(header_cells(inst.m()));
            table.push(tuple_row(name, &tuple));
            let mut s = table.render();
            s.push_str(&format!("regime: {}\n", inst.classify_regime()));
            if let Some(b) = bound {
                s.push_str(&format!("constant bound: {b}\n"));
            }
            s
        }
    };
    emit(cfg, &text)?;
    Ok(0)
}

fn header_cells(m: usize) -> Vec<String> {
    let mut h = vec!["theorem".to_string()];
    h.extend((1..=m).map(|k| format!("s_{k}")));
    h.push("k0".to_string());
    h
}

fn header_csv(m: usize) -> String {
    let mut h: Vec<String> = (1..=m).map(|k| format!("s_{k}")).collect();
    h.push("k0".to_string());
    h.join(",")
}

fn tuple_row(name: &str, t: &ExponentTuple) -> Vec<String> {
    let mut row = vec![name.to_string()];
    row.extend(t.values.iter().map(scalar_cell));
    row.push(t.k0.map(|k| k.to_string()).unwrap_or_else(|| "-".into()));
    row
}

#[derive(Serialize)]
struct TableRow {
    theorem: String,
    applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    s: Option<ExponentTuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct TableOut {
    m: usize,
    p: Vec<ExtScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<ExtScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<ExtScalar>,
    regime: String,
    rows: Vec<TableRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_bound: Option<String>,
}

pub fn cmd_table(cfg: &RunConfig) -> CmdResult {
    let inst = build_instance(cfg)?;
    let m = inst.m();
    let mut candidates: Vec<(&str, Result<ExponentTuple, String>)> = Vec::new();
    if inst.r().is_some() {
        candidates.push(("vector", exponents_vector(&inst).map_err(fail)));
    }
    candidates.push(("dimant", lambda_tuple(&inst).map_err(fail)));
    candidates.push(("ar", exponents_ar(&inst).map_err(fail)));
    candidates.push(("main", exponents_main(&inst).map_err(fail)));
    candidates.push(("aron", exponents_aron(&inst).map_err(fail)));
    candidates.push(("mu", mu_tuple(&inst).map_err(fail)));
    if m == 2 {
        candidates.push((
            "ot",
            exponents_ot(inst.p_at(1), inst.p_at(2)).map_err(fail),
        ));
    }
    candidates.push(("critical", exponents_critical(&inst).map_err(fail)));
    let iso_m = ExtScalar::from_int(m as u64);
    if inst.p().iter().all(|p| *p == iso_m) {
        candidates.push(("paulino", exponents_paulino(m).map_err(fail)));
        candidates.push(("critical-iso", exponents_critical_iso(m).map_err(fail)));
    }
    let rows: Vec<TableRow> = candidates
        .into_iter()
        .map(|(name, res)| match res {
            Ok(s) => TableRow {
                theorem: name.to_string(),
                applicable: true,
                s: Some(s),
                reason: None,
            },
            Err(reason) => TableRow {
                theorem: name.to_string(),
                applicable: false,
                s: None,
                reason: Some(reason),
            },
        })
        .collect();
    let bound = constant_bound(&inst).ok().map(|b| b.to_string());
    let out = TableOut {
        m,
        p: inst.p().to_vec(),
        r: inst.r().copied(),
        q: inst.q().copied(),
        regime: inst.classify_regime().to_string(),
        rows,
        constant_bound: bound.clone(),
    };
    let text = match cfg.format {
        OutputFormat::Json => serde_json::to_string_pretty(&out).map_err(fail)? + "\n",
        OutputFormat::Csv => {
            let mut s = format!("theorem,{}\n", header_csv(m));
            for row in &out.rows {
                if let Some(t) = &row.s {
                    let cells: Vec<String> = t.values.iter().map(|v| v.to_string()).collect();
                    let k0 = t.k0.map(|k| k.to_string()).unwrap_or_default();
                    s.push_str(&format!("{},{},{k0}\n", row.theorem, cells.join(",")));
                }
            }
            s
        }
        OutputFormat::Pretty => {
            let mut table = TextTable::new(header_cells(m));
            for row in &out.rows {
                match &row.s {
                    Some(t) => table.push(tuple_row(&row.theorem, t)),
                    None => table.push(vec![
                        row.theorem.clone(),
                        format!("n/a: {}", row.reason.as_deref().unwrap_or("")),
                    ]),
                }
            }
            let mut s = table.render();
            s.push_str(&format!("regime: {}\n", out.regime));
            if let Some(b) = bound {
                s.push_str(&format!("constant bound: {b}\n"));
            }
            s
        }
    };
    emit(cfg, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyRow {
    n: usize,
    trial: usize,
    mixed_norm: f64,
    norm: f64,
    ratio: f64,
    exact: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    t: Vec<ExtScalar>,
    p: Vec<ExtScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_bound: Option<f64>,
    rows: Vec<VerifyRow>,
    max_ratio: f64,
}

fn norm_of(
    tensor: &CoefficientTensor,
    ball: &BallSpec,
    cfg: &RunConfig,
    seed: u64,
) -> Result<(f64, bool), String> {
    let method = NormMethod::Auto {
        restarts: cfg.restarts,
        budget: cfg.budget,
    };
    match method {
        NormMethod::Auto { restarts, budget } => {
            match hl_core::norm::exact_norm(tensor, ball, budget) {
                Ok(est) => Ok((est.value, true)),
                Err(hl_core::NormError::Infeasible(_)) => Ok((
                    hl_core::norm::estimate_norm(
                        tensor,
                        ball,
                        restarts,
                        seed,
                        hl_core::norm::DEFAULT_TOL,
                    )
                    .map_err(fail)?
                    .value,
                    false,
                )),
                Err(e) => Err(fail(e)),
            }
        }
        _ => unreachable!(),
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> CmdResult {
    let t = cfg
        .t
        .clone()
        .ok_or_else(|| "missing -t (mixed norm exponents)".to_string())?;
    let mut rows = Vec::new();
    let inst_p: Vec<ExtScalar>;
    if let Some(path) = &cfg.tensor {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let tensor: CoefficientTensor = serde_json::from_str(&text).map_err(fail)?;
        let m = tensor.order();
        inst_p = match &cfg.p {
            Some(p) if p.len() == 1 => vec![p[0]; m],
            Some(p) if p.len() == m => p.clone(),
            Some(p) => return Err(format!("-p has {} entries, tensor order is {m}", p.len())),
            None => return Err("missing -p".into()),
        };
        if t.len() != m {
            return Err(format!("-t has {} entries, tensor order is {m}", t.len()));
        }
        let ball = BallSpec::new(inst_p.clone()).map_err(fail)?;
        let mixed = tensor.mixed_norm(&t).map_err(fail)?;
        let (norm, exact) = norm_of(&tensor, &ball, cfg, cfg.seed)?;
        rows.push(VerifyRow {
            n: *tensor.dims().iter().max().unwrap(),
            trial: 0,
            mixed_norm: mixed,
            norm,
            ratio: mixed / norm,
            exact,
        });
    } else {
        inst_p = cfg.instance_p().map_err(fail)?;
        let m = inst_p.len();
        if t.len() != m {
            return Err(format!("-t has {} entries but m = {m}", t.len()));
        }
        let ball = BallSpec::new(inst_p.clone()).map_err(fail)?;
        let n_list = cfg.n_list.clone().unwrap_or_else(|| vec![8]);
        let trials = cfg.trials.unwrap_or(20);
        for &n in &n_list {
            for trial in 0..trials {
                let seed = derive_seed(cfg.seed, n as u64, trial as u64);
                let tensor = ksz_sample(m, n, seed);
                let mixed = tensor.mixed_norm(&t).map_err(fail)?;
                let (norm, exact) = norm_of(&tensor, &ball, cfg, seed)?;
                rows.push(VerifyRow {
                    n,
                    trial,
                    mixed_norm: mixed,
                    norm,
                    ratio: mixed / norm,
                    exact,
                });
            }
        }
    }
    let inst = HLInstance::new(inst_p.clone()).map_err(fail)?;
    let bound = constant_bound(&inst).ok().map(|b| b.to_f64());
    let max_ratio = rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    let out = VerifyOut {
        t,
        p: inst_p,
        constant_bound: bound,
        rows,
        max_ratio,
    };
    let text = match cfg.format {
        OutputFormat::Json => serde_json::to_string_pretty(&out).map_err(fail)? + "\n",
        OutputFormat::Csv => {
            let mut s = String::from("n,trial,mixed_norm,norm,ratio,exact\n");
            for r in &out.rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n, r.trial, r.mixed_norm, r.norm, r.ratio, r.exact
                ));
            }
            s
        }
        OutputFormat::Pretty => {
            let mut table = TextTable::new(
                ["n", "trial", "mixed_norm", "norm", "ratio", "exact"]
                    .map(String::from)
                    .to_vec(),
            );
            for r in &out.rows {
                table.push(vec![
                    r.n.to_string(),
                    r.trial.to_string(),
                    format!("{:.6}", r.mixed_norm),
                    format!("{:.6}", r.norm),
                    format!("{:.6}", r.ratio),
                    r.exact.to_string(),
                ]);
            }
            let mut s = table.render();
            s.push_str(&format!("max ratio: {:.6}\n", out.max_ratio));
            if let Some(b) = out.constant_bound {
                s.push_str(&format!("constant bound: {b:.6}\n"));
            }
            s
        }
    };
    emit(cfg, &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct SharpnessEntry {
    coordinate: usize,
    eps: ExtScalar,
    perturbed: Vec<ExtScalar>,
    classification: Admissibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical: Option<GrowthVerdict>,
}

#[derive(Serialize)]
struct SharpnessOut {
    theorem: String,
    s: ExponentTuple,
    base_classification: Admissibility,
    entries: Vec<SharpnessEntry>,
}

pub fn cmd_sharpness(cfg: &RunConfig) -> CmdResult {
    let name = cfg.theorem.as_deref().unwrap_or("main");
    let (tuple, inst) = theorem_tuple(name, cfg)?;
    let eps = cfg.eps.clone().unwrap_or_else(|| {
        vec!["1/100".parse().unwrap(), "1/10".parse().unwrap()]
    });
    let scan = perturb_scan(&tuple, &inst, &eps).map_err(fail)?;
    let base = classify_tuple(&tuple, &inst).map_err(fail)?;
    let mut entries = Vec::with_capacity(scan.len());
    for e in scan {
        let empirical = match &cfg.n_list {
            Some(n_list) => {
                let exp = GrowthExperiment {
                    m: inst.m(),
                    p: BallSpec::new(inst.p().to_vec()).map_err(fail)?,
                    t: e.perturbed.clone(),
                    n_list: n_list.clone(),
                    trials: cfg.trials.unwrap_or(20),
                    seed: cfg.seed,
                    norm_method: NormMethod::Auto {
                        restarts: cfg.restarts,
                        budget: cfg.budget,
                    },
                };
                Some(ratio_curve(&exp).map_err(fail)?.verdict)
            }
            None => None,
        };
        entries.push(SharpnessEntry {
            coordinate: e.coordinate,
            eps: e.eps,
            perturbed: e.perturbed,
            classification: e.classification,
            empirical,
        });
    }
    let out = SharpnessOut {
        theorem: name.to_string(),
        s: tuple,
        base_classification: base,
        entries,
    };
    let json = serde_json::to_string_pretty(&out).map_err(fail)? + "\n";
    let mut csv = String::from("coordinate,eps,perturbed,classification,empirical\n");
    for e in &out.entries {
        let perturbed: Vec<String> = e.perturbed.iter().map(|v| v.to_string()).collect();
        csv.push_str(&format!(
            "{},{},({}),{},{}\n",
            e.coordinate,
            e.eps,
            perturbed.join(" "),
            e.classification,
            e.empirical.map(|v| v.to_string()).unwrap_or_default()
        ));
    }
    match &cfg.out {
        Some(path) => write_artifacts(path, &json, &csv)?,
        None => match cfg.format {
            OutputFormat::Json => print!("{json}"),
            OutputFormat::Csv => print!("{csv}"),
            OutputFormat::Pretty => {
                let mut table = TextTable::new(
                    ["coordinate", "eps", "perturbed", "classification", "empirical"]
                        .map(String::from)
                        .to_vec(),
                );
                for e in &out.entries {
                    let perturbed: Vec<String> =
                        e.perturbed.iter().map(|v| v.to_string()).collect();
                    table.push(vec![
                        e.coordinate.to_string(),
                        e.eps.to_string(),
                        format!("({})", perturbed.join(", ")),
                        e.classification.to_string(),
                        e.empirical.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    ]);
                }
                print!("{}", table.render());
                println!("base tuple {} is {}", out.s, out.base_classification);
            }
        },
    }
    let inconclusive = out
        .entries
        .iter()
        .any(|e| {
            e.classification == Admissibility::Unknown
                || e.empirical == Some(GrowthVerdict::Inconclusive)
        });
    if cfg.strict && inconclusive {
        return Ok(2);
    }
    Ok(0)
}

pub fn cmd_region(cfg: &RunConfig) -> CmdResult {
    let inst = build_instance(cfg)?;
    let axis: Vec<ExtScalar> = match &cfg.t {
        Some(t) => t.clone(),
        None => ["1", "3/2", "2", "5/2", "3", "7/2", "4"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect(),
    };
    let axes = [axis.clone(), axis.clone(), axis];
    let sample = region_grid(&inst, &axes).map_err(fail)?;
    let json = serde_json::to_string_pretty(&sample).map_err(fail)? + "\n";
    let csv = sample.to_csv();
    match &cfg.out {
        Some(path) => write_artifacts(path, &json, &csv)?,
        None => match cfg.format {
            OutputFormat::Json => print!("{json}"),
            _ => print!("{csv}"),
        },
    }
    let unknown = sample
        .points
        .iter()
        .any(|p| p.label == Admissibility::Unknown);
    if cfg.strict && unknown {
        return Ok(2);
    }
    Ok(0)
}
