use std::time::Duration;

use abca_core::ca::Bipermutivity;
use abca_core::io::ca_to_json;
use abca_core::solitons::{
    decide_randomization_commuting, diffusivity_probe, dual_soliton_crosscheck, finite_fixed_points,
    orbit_shift_detect, soliton_search, SearchBudget,
};
use abca_core::spectral::{
    cesaro_statistics, cylinder_distribution, distance_to_uniform, evolved_fourier, spectral_trace,
};
use abca_core::{sample, AbelianCA, Error, FiniteConfiguration};
use anyhow::Context;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{emit, float, json_document, Csv, Meta};
use crate::{load, Cli, Command};

pub fn run(cli: &Cli) -> anyhow::Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .context("building the worker pool")?;
    let f = load::automaton(&cli.ca)?;
    let text = pool.install(|| dispatch(cli, &f))?;
    emit(&text, cli.out.as_deref()).context("writing output")?;
    Ok(())
}

fn dispatch(cli: &Cli, f: &AbelianCA) -> anyhow::Result<String> {
    let meta = Meta::new(command_name(&cli.command), &cli.ca, f);
    match &cli.command {
        Command::Describe => Ok(json_document(&meta, describe(f))),
        Command::RankTrace {
            character,
            horizon,
            measure,
        } => rank_trace(f, meta, character, *horizon, measure.as_deref()),
        Command::Measure {
            measure,
            window,
            horizon,
            truncation,
            character,
            threshold,
        } => measure_cmd(
            f,
            meta,
            measure,
            window,
            *horizon,
            *truncation,
            character.as_deref(),
            *threshold,
        ),
        Command::Soliton {
            budget,
            time_limit,
            dual,
        } => soliton(f, meta, budget, *time_limit, *dual),
        Command::Decide => {
            let verdict = decide_randomization_commuting(f)?;
            Ok(json_document(&meta, verdict.to_json()))
        }
        Command::Deps { horizon, max_k } => Ok(deps(f, meta, *horizon, *max_k)?),
        Command::Fixed { width } => {
            let space = finite_fixed_points(f, *width)?;
            let basis: Vec<String> = space.basis().iter().map(|c| c.to_string()).collect();
            let result = json!({
                "basis": basis,
                "lex_min": space.lex_min().map(|c| c.to_string()),
                "log2_size": space.subgroup().log2_order(),
                "size": space.size().map(|n| n.to_string()),
                "width": width,
            });
            Ok(json_document(&meta.param("width", width), result))
        }
        Command::Orbit { init, horizon } => orbit(f, meta, init, *horizon),
        Command::Probe {
            seeds,
            width,
            horizon,
            rank_cap,
            seed,
        } => probe(f, meta, *seeds, *width, *horizon, *rank_cap, *seed),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Describe => "describe",
        Command::RankTrace { .. } => "rank-trace",
        Command::Measure { .. } => "measure",
        Command::Soliton { .. } => "soliton",
        Command::Decide => "decide",
        Command::Deps { .. } => "deps",
        Command::Fixed { .. } => "fixed",
        Command::Orbit { .. } => "orbit",
        Command::Probe { .. } => "probe",
    }
}

fn describe(f: &AbelianCA) -> Value {
    let dual = f.dual();
    let bip = match f.bipermutivity() {
        Bipermutivity::Bipermutive => json!("bipermutive"),
        Bipermutivity::NotBipermutive {
            left_bijective,
            right_bijective,
        } => json!({ "left_bijective": left_bijective, "right_bijective": right_bijective }),
        Bipermutivity::SingleOffset => json!("single_offset"),
        Bipermutivity::Zero => json!("zero"),
    };
    let coefficients: Value = serde_json::from_str(&ca_to_json(f)).expect("own JSON parses");
    let dual_json: Value = serde_json::from_str(&ca_to_json(&dual)).expect("own JSON parses");
    json!({
        "automaton": coefficients,
        "bipermutivity": bip,
        "commuting": f.coefficients_commute(),
        "dual": dual_json,
        "dual_equals_mirror": dual == f.mirror(),
        "dual_equals_self": &dual == f,
        "group": f.spec().to_string(),
        "neighbourhood": f.offset_range().map(|(a, b)| vec![a, b]),
        "radius": f.radius(),
    })
}

fn rank_trace(
    f: &AbelianCA,
    meta: Meta,
    character: &str,
    horizon: u64,
    measure: Option<&str>,
) -> anyhow::Result<String> {
    let chi = load::configuration(character, f.spec())?;
    let mut meta = meta.param("char", &chi).param("T", horizon);
    let mu = match measure {
        Some(src) => {
            let mu = load::measure(src, f.spec())?;
            meta = meta.with_measure(src, &mu);
            Some(mu)
        }
        None => None,
    };
    let trace = spectral_trace(f, mu.as_ref(), &chi, horizon)?;
    let columns = ["t", "rank", "support_min", "support_max", "re_coeff", "im_coeff", "abs_coeff"];
    let mut csv = Csv::new(meta, columns.iter().map(|s| s.to_string()).collect());
    for r in &trace.records {
        let (lo, hi) = r
            .support
            .map_or((String::new(), String::new()), |(a, b)| (a.to_string(), b.to_string()));
        let (re, im, abs) = r.coefficient.map_or((String::new(), String::new(), String::new()), |c| {
            (float(c.re), float(c.im), float(c.norm()))
        });
        csv.row(vec![r.t.to_string(), r.rank.to_string(), lo, hi, re, im, abs]);
    }
    Ok(csv.render())
}

#[allow(clippy::too_many_arguments)]
fn measure_cmd(
    f: &AbelianCA,
    meta: Meta,
    source: &str,
    window: &str,
    horizon: u64,
    truncation: usize,
    character: Option<&str>,
    threshold: f64,
) -> anyhow::Result<String> {
    let mu = load::measure(source, f.spec())?;
    let (a, b) = load::window(window)?;
    let chi = character
        .map(|c| load::configuration(c, f.spec()))
        .transpose()?;
    let mut meta = meta
        .with_measure(source, &mu)
        .param("window", format!("{a}:{b}"))
        .param("T", horizon)
        .param("K", truncation);
    if let Some(c) = &chi {
        meta = meta.param("char", c).param("threshold", threshold);
    }
    // Fail on oversized windows before spawning work.
    let first = cylinder_distribution(f, &mu, (a, b), 0)?;
    distance_to_uniform(f, &mu, 0, truncation)?;

    let rows: Vec<_> = (0..=horizon)
        .into_par_iter()
        .map(|t| -> abca_core::Result<_> {
            let d = distance_to_uniform(f, &mu, t, truncation)?;
            let table = cylinder_distribution(f, &mu, (a, b), t)?;
            let c = chi
                .as_ref()
                .map(|c| evolved_fourier(f, &mu, c, t))
                .transpose()?;
            Ok((d, table.probabilities().to_vec(), c))
        })
        .collect::<abca_core::Result<_>>()?;

    let mut columns = vec![
        "t".to_string(),
        format!("distance_K{truncation}"),
        "window_max_deviation".to_string(),
    ];
    if chi.is_some() {
        columns.extend(
            ["re_coeff", "im_coeff", "abs_coeff", "cesaro_mean_abs", "small_fraction"]
                .iter()
                .map(|s| s.to_string()),
        );
    }
    for i in 0..first.probabilities().len() {
        let word: Vec<String> = first.word(i).iter().map(|c| f.spec().index_of(c).to_string()).collect();
        columns.push(format!("p_{}", word.join("_")));
    }
    let stats = chi.as_ref().map(|_| {
        let coeffs: Vec<_> = rows.iter().map(|r| r.2.expect("character given")).collect();
        cesaro_statistics(&coeffs, threshold)
    });
    if let Some(s) = &stats {
        meta = meta.param("lower_density_small", float(s.lower_density));
    }
    let mut csv = Csv::new(meta, columns);
    for (t, (d, probs, c)) in rows.iter().enumerate() {
        let uniform = 1.0 / probs.len() as f64;
        let dev = probs.iter().map(|p| (p - uniform).abs()).fold(0.0, f64::max);
        let mut cells = vec![t.to_string(), float(*d), float(dev)];
        if let (Some(z), Some(s)) = (c, &stats) {
            cells.extend([
                float(z.re),
                float(z.im),
                float(z.norm()),
                float(s.running_mean_abs[t]),
                float(s.small_fraction[t]),
            ]);
        }
        cells.extend(probs.iter().map(|&p| float(p)));
        csv.row(cells);
    }
    Ok(csv.render())
}

fn soliton(
    f: &AbelianCA,
    meta: Meta,
    budget: &str,
    time_limit: Option<f64>,
    dual: bool,
) -> anyhow::Result<String> {
    let (w, p, q) = load::budget(budget)?;
    let mut b = SearchBudget::new(w, p, q);
    let mut meta = meta.param("budget", format!("{w},{p},{q}"));
    if let Some(secs) = time_limit {
        if !(secs > 0.0) {
            return Err(Error::Parse(format!("time limit must be positive, got {secs}")).into());
        }
        b = b.with_time_limit(Duration::from_secs_f64(secs));
        meta = meta.param("time_limit_s", secs);
    }
    let status = |found: bool| if found { "found" } else { "none_within_budget" };
    if dual {
        let report = dual_soliton_crosscheck(f, &b)?;
        let mut result = report.to_json();
        result["primal_status"] = json!(status(report.primal.witness.is_some()));
        result["dual_status"] = json!(status(report.dual.witness.is_some()));
        return Ok(json_document(&meta.param("dual", true), result));
    }
    let outcome = soliton_search(f, &b)?;
    let mut result = outcome.to_json();
    result["status"] = json!(status(outcome.witness.is_some()));
    Ok(json_document(&meta, result))
}

fn deps(f: &AbelianCA, meta: Meta, horizon: usize, max_k: usize) -> abca_core::Result<String> {
    let table = f.dependency_table(horizon);
    let mut columns = vec!["t".to_string(), "d".to_string(), "bijective".to_string()];
    columns.extend((0..=max_k).map(|k| format!("s_{k}")));
    let mut csv = Csv::new(meta.param("T", horizon).param("max_k", max_k), columns);
    for t in 0..=horizon {
        let mut cells = vec![
            t.to_string(),
            table.d(t)?.to_string(),
            table.bijective_count(t)?.to_string(),
        ];
        for k in 0..=max_k {
            cells.push(table.s(k, t)?.to_string());
        }
        csv.row(cells);
    }
    Ok(csv.render())
}

fn orbit(f: &AbelianCA, meta: Meta, init: &str, horizon: u64) -> anyhow::Result<String> {
    let x = load::configuration(init, f.spec())?;
    let mut orbit = vec![x.clone()];
    for _ in 0..horizon {
        let next = f.apply(orbit.last().unwrap())?;
        orbit.push(next);
    }
    let ranges: Vec<(i64, i64)> = orbit.iter().filter_map(|c| c.support_range()).collect();
    let lo = ranges.iter().map(|r| r.0).min().unwrap_or(0);
    let hi = ranges.iter().map(|r| r.1).max().unwrap_or(0);
    let repeat = orbit_shift_detect(f, &x, horizon.max(1))?;
    let mut meta = meta
        .param("init", &x)
        .param("T", horizon)
        .param("columns", format!("{lo}:{hi}"));
    meta = match &repeat {
        Some(w) => meta.param(
            "repeat",
            format!("{} p={} q={}", w.configuration(), w.period(), w.shift()),
        ),
        None => meta.param("repeat", "none"),
    };
    let mut csv = Csv::new(meta, vec!["t".into(), "rank".into(), "cells".into()]);
    for (t, c) in orbit.iter().enumerate() {
        csv.row(vec![t.to_string(), c.rank().to_string(), diagram_row(c, lo, hi)]);
    }
    Ok(csv.render())
}

/// One row of the space-time diagram: element indices, `.` for zero.
fn diagram_row(c: &FiniteConfiguration, lo: i64, hi: i64) -> String {
    let spec = c.spec();
    let wide = spec.size().is_none_or(|n| n > 36);
    (lo..=hi)
        .map(|z| {
            let e = c.get(z);
            if e.is_zero() {
                ".".to_string()
            } else if wide {
                format!("[{}]", e.residues().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "))
            } else {
                char::from_digit(spec.index_of(&e) as u32, 36).unwrap().to_string()
            }
        })
        .collect()
}

fn probe(
    f: &AbelianCA,
    meta: Meta,
    seeds: usize,
    width: usize,
    horizon: u64,
    rank_cap: usize,
    seed: u64,
) -> anyhow::Result<String> {
    if width == 0 {
        return Err(Error::Parse("seed width must be positive".into()).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let configs: Vec<FiniteConfiguration> = (0..seeds)
        .map(|_| sample::configuration_of_width(f.spec(), 0, width, &mut rng))
        .collect();
    let reports = configs
        .par_iter()
        .map(|c| diffusivity_probe(f, std::slice::from_ref(c), horizon, rank_cap).map(|mut r| r.remove(0)))
        .collect::<abca_core::Result<Vec<_>>>()?;
    let meta = meta
        .param("seeds", seeds)
        .param("width", width)
        .param("T", horizon)
        .param("rank_cap", rank_cap)
        .param("seed", seed);
    let columns = ["seed", "configuration", "statistic", "key", "value"];
    let mut csv = Csv::new(meta, columns.iter().map(|s| s.to_string()).collect());
    for (i, (c, r)) in configs.iter().zip(&reports).enumerate() {
        let label = c.to_string();
        for &(k, m) in &r.window_minima {
            csv.row(vec![i.to_string(), label.clone(), "window_min".into(), k.to_string(), m.to_string()]);
        }
        for &(m, frac) in &r.threshold_fractions {
            csv.row(vec![i.to_string(), label.clone(), "rank_fraction".into(), m.to_string(), float(frac)]);
        }
    }
    Ok(csv.render())
}
