//! `scf`: config-driven experiments for secure compute-and-forward over
//! nested lattice codes.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage/config error.

mod config;
mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use config::*;
use report::{write_csv, write_json, Meta};
use scf_core::fourier::{bessel_first_zero, BesselContext, CharFnSpec};
use scf_core::lattice::{
    goodlattice_params, nested_ensemble_sample, CodeLatticeDocument, GroupElement, LatticeBasis,
    NestedPair,
};
use scf_core::modulation::{
    checks::secrecy_certificates, modulator::z_over_nz_modulator,
    SecureModulator,
};
use scf_core::sim::{
    error_rate, noiseless_decode_failures, power_rate_sweep, secrecy_empirical, target_point,
    trial_rng, ChannelConfig, ConditionOn, SweepConfig,
};
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scf", version, about = "Secure compute-and-forward simulator")]
struct Cli {
    /// RNG seed; embedded in every artifact
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for artifacts
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Stdout format: csv (tables) or json (full report)
    #[arg(long, global = true)]
    format: Option<String>,
    /// Monte Carlo trial count override
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// JSON configuration document (flags override its fields)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Binary XOR construction demo: pmf tables, secrecy certificates,
    /// noiseless decoding
    XorDemo {
        /// triangle | c2 | minvar | all
        #[arg(long)]
        family: Option<String>,
    },
    /// Secrecy certificates plus empirical channel statistics for one
    /// configured modulator
    SecrecyCheck {
        /// use the insecure point-mass baseline instead
        #[arg(long)]
        baseline: bool,
    },
    /// Monte Carlo error rates over a noise sweep (and optional dimension
    /// sweep)
    ErrorSweep,
    /// Sample ensemble lattices at balanced parameters and report their
    /// geometry
    EnsembleReport {
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Dump characteristic function, density, and pmf samples
    PmfTable {
        /// triangle | c2 | minvar
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        k_max: Option<i64>,
    },
    /// First Bessel zeros and minimum-power figures across dimensions
    MinvarReport,
    /// Print the default configuration document with all fields
    ConfigReference,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<ConfigDoc> {
    match path {
        None => Ok(ConfigDoc::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    let mut doc = load_config(&cli.config)?;
    if let Some(s) = cli.seed {
        doc.seed = Some(s);
    }
    if let Some(f) = &cli.format {
        if f != "csv" && f != "json" {
            bail!("--format must be csv or json, got {f}");
        }
        doc.format = Some(f.clone());
    }
    if let Some(t) = cli.trials {
        doc.trials = Some(t);
    }
    let seed = doc.seed.unwrap_or(1);
    let json_out = doc.format.as_deref() == Some("json");

    match &cli.command {
        Command::XorDemo { family } => {
            let mut cfg = doc.xor_demo.clone();
            if let Some(f) = family {
                cfg.family = f.clone();
            }
            if let Some(t) = doc.trials {
                cfg.empirical_trials = t;
            }
            cmd_xor_demo(&cfg, seed, &cli.out, json_out)
        }
        Command::SecrecyCheck { baseline } => {
            let mut cfg = doc.secrecy_check.clone();
            if *baseline {
                cfg.baseline = true;
            }
            if let Some(t) = doc.trials {
                cfg.empirical_trials = t;
            }
            cmd_secrecy_check(&cfg, seed, &cli.out, json_out)
        }
        Command::ErrorSweep => {
            let mut cfg = doc.error_sweep.clone();
            if let Some(t) = doc.trials {
                cfg.trials = t;
            }
            cmd_error_sweep(&cfg, seed, &cli.out, json_out)
        }
        Command::EnsembleReport { rho } => {
            let mut cfg = doc.ensemble_report.clone();
            if let Some(r) = rho {
                cfg.rho = *r;
            }
            cmd_ensemble_report(&cfg, seed, &cli.out, json_out)
        }
        Command::PmfTable { family, k_max } => {
            let mut cfg = doc.pmf_table.clone();
            if let Some(f) = family {
                cfg.family = f.clone();
            }
            if let Some(k) = k_max {
                cfg.k_max = *k;
            }
            cmd_pmf_table(&cfg, seed, &cli.out)
        }
        Command::MinvarReport => cmd_minvar_report(&doc.minvar_report, seed, &cli.out),
        Command::ConfigReference => {
            println!("{}", serde_json::to_string_pretty(&ConfigDoc::default())?);
            Ok(0)
        }
    }
}

fn binary_charfn(family: &str) -> Result<CharFnSpec> {
    Ok(match family {
        "triangle" => CharFnSpec::triangle(PI / 2.0),
        "c2" => CharFnSpec::c2_smooth(PI / 2.0),
        "minvar" => CharFnSpec::min_var_radial(1, PI / 2.0)?,
        other => bail!("unknown family '{other}' (triangle | c2 | minvar)"),
    })
}

fn cmd_xor_demo(cfg: &XorDemoConfig, seed: u64, out: &PathBuf, json_out: bool) -> Result<u8> {
    let families: Vec<&str> = match cfg.family.as_str() {
        "all" => vec!["triangle", "c2", "minvar"],
        f => vec![match f {
            "triangle" => "triangle",
            "c2" => "c2",
            "minvar" => "minvar",
            other => bail!("unknown family '{other}'"),
        }],
    };
    let meta = Meta::new("xor-demo", seed, serde_json::to_value(cfg)?);
    let mut failures: Vec<String> = Vec::new();
    let mut blocks = Vec::new();
    for fam in &families {
        let charfn = binary_charfn(fam)?;
        let m = z_over_nz_modulator(2, &charfn, cfg.truncation_radius)?;

        // pmf table
        let mut ks: Vec<i64> = m.mixture().coords().iter().map(|c| c[0]).collect();
        ks.sort_unstable();
        let rows: Vec<String> = ks
            .iter()
            .map(|&k| {
                format!(
                    "{k},{},{},{}",
                    m.mixture().mass_at(&[k]),
                    m.coset_pmf(GroupElement(0)).mass_at(&[k]),
                    m.coset_pmf(GroupElement(1)).mass_at(&[k])
                )
            })
            .collect();
        let budgets = serde_json::json!({
            "tail_mass": m.tail_budget().mass,
            "tail_second_moment": m.tail_budget().second_moment,
            "truncation_radius": m.truncation_radius(),
        });
        let table_meta = Meta::new("xor-demo", seed, serde_json::to_value(cfg)?)
            .with_budgets(budgets.clone());
        write_csv(
            out,
            &format!("xor_demo_pmf_{fam}.csv"),
            &table_meta,
            "k,p,p0,p1",
            &rows,
        )?;

        // certificates and channel statistics
        let certs = secrecy_certificates(&m, cfg.grid_per_axis, 50_000_000)?;
        let empirical = secrecy_empirical(
            &m,
            cfg.empirical_trials.max(10_000),
            seed,
            ConditionOn::FirstMessage,
            1e-3,
        )?;
        let noiseless_failures = noiseless_decode_failures(&m, cfg.noiseless_rounds, seed)?;
        let power = m.power_check();
        let pass = certs.pass && empirical.pass && noiseless_failures == 0 && power.pass;
        if !pass {
            failures.push(format!(
                "{fam}: certificates={} empirical={} noiseless_failures={noiseless_failures} power={}",
                certs.pass, empirical.pass, power.pass
            ));
        }
        blocks.push(serde_json::json!({
            "family": fam,
            "avg_power_formula": power.formula,
            "avg_power_measured": power.measured,
            "power_budget": power.budget,
            "certificates": certs,
            "empirical": empirical,
            "noiseless_rounds": cfg.noiseless_rounds,
            "noiseless_failures": noiseless_failures,
            "budgets": budgets,
            "pass": pass,
        }));
        println!(
            "xor-demo {fam}: power {} certificates {} empirical p={:.4} noiseless {}/{} ok",
            power.measured,
            if certs.pass { "PASS" } else { "FAIL" },
            empirical.p_value,
            cfg.noiseless_rounds - noiseless_failures,
            cfg.noiseless_rounds
        );
    }
    let report = serde_json::json!({
        "meta": meta.json_header(),
        "families": blocks,
        "failures": failures,
        "pass": failures.is_empty(),
    });
    let path = write_json(out, "xor_demo_report.json", &report)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    println!("report: {}", path.display());
    Ok(if failures.is_empty() { 0 } else { 1 })
}

fn build_pair(spec: &PairSpec, seed: u64) -> Result<(NestedPair, serde_json::Value)> {
    Ok(match spec {
        PairSpec::ZOverNz { n } => {
            let pair = NestedPair::new(
                LatticeBasis::integer(1),
                LatticeBasis::scaled_integer(1, *n as f64)?,
            )?;
            (pair, serde_json::json!({"type": "z_over_nz", "n": n}))
        }
        PairSpec::Hypercubic { d, n } => {
            let pair = NestedPair::new(
                LatticeBasis::integer(*d),
                LatticeBasis::scaled_integer(*d, *n as f64)?,
            )?;
            (pair, serde_json::json!({"type": "hypercubic", "d": d, "n": n}))
        }
        PairSpec::ConstructionA { d, k, q, k1, q1 } => {
            let mut rng = trial_rng(seed, 0);
            let ne = nested_ensemble_sample(*d, *k, *q, *k1, *q1, false, &mut rng)?;
            let coarse_doc = CodeLatticeDocument::new(&ne.coarse_code, 1)?;
            let fine_doc = CodeLatticeDocument::new(&ne.fine_code, 1)?;
            let info = serde_json::json!({
                "type": "construction_a",
                "rate": ne.rate,
                "resample_attempts": ne.resample_attempts,
                "coarse_code": coarse_doc,
                "fine_code": fine_doc,
            });
            (ne.pair, info)
        }
    })
}

fn build_charfn(choice: &CharFnChoice, pair: &NestedPair) -> Result<CharFnSpec> {
    if !(choice.shrink > 0.0 && choice.shrink <= 1.0) {
        bail!("charfn.shrink must lie in (0, 1]");
    }
    let d = pair.fine().dimension();
    let fourier_dual = pair.coarse().fourier_dual()?;
    let rho = choice.shrink * fourier_dual.shortest_vector()?.1 / 2.0;
    Ok(match choice.family.as_str() {
        "triangle" => {
            if d != 1 {
                bail!("triangle family is one-dimensional");
            }
            CharFnSpec::triangle(rho)
        }
        "c2" => {
            if d != 1 {
                bail!("c2 family is one-dimensional; use product_c2 in dimension {d}");
            }
            CharFnSpec::c2_smooth(rho)
        }
        "minvar" => CharFnSpec::min_var_radial(d, rho)?,
        "product_c2" => {
            let lam = rho / (d as f64).sqrt();
            CharFnSpec::product((0..d).map(|_| CharFnSpec::c2_smooth(lam)).collect())?
        }
        other => bail!("unknown charfn family '{other}'"),
    })
}

fn cmd_secrecy_check(
    cfg: &SecrecyCheckConfig,
    seed: u64,
    out: &PathBuf,
    json_out: bool,
) -> Result<u8> {
    let (pair, pair_info) = build_pair(&cfg.pair, seed)?;
    let m = if cfg.baseline {
        SecureModulator::naive_baseline(pair)?
    } else {
        let charfn = build_charfn(&cfg.charfn, &pair)?;
        match cfg.truncation_radius {
            Some(r) => SecureModulator::with_truncation(pair, charfn, r)?,
            None => SecureModulator::new(pair, charfn)?,
        }
    };
    let certs = secrecy_certificates(&m, cfg.grid_per_axis, cfg.convolution_cap)?;
    let empirical = secrecy_empirical(
        &m,
        cfg.empirical_trials.max(10_000),
        seed,
        ConditionOn::FirstMessage,
        cfg.significance,
    )?;
    let pass = certs.pass && empirical.pass;
    let meta = Meta::new("secrecy-check", seed, serde_json::to_value(cfg)?).with_budgets(
        serde_json::json!({
            "tail_mass": m.tail_budget().mass,
            "identity_budget": certs.identity.budget,
            "convolution_budget": certs.convolution.as_ref().map(|c| c.budget),
        }),
    );
    let report = serde_json::json!({
        "meta": meta.json_header(),
        "pair": pair_info,
        "baseline": cfg.baseline,
        "certificates": certs,
        "empirical": empirical,
        "pass": pass,
        "failures": if pass { vec![] } else {
            vec![format!(
                "identity={} convolution={:?} empirical_p={}",
                certs.identity.pass,
                certs.convolution.as_ref().map(|c| c.pass),
                empirical.p_value
            )]
        },
    });
    let path = write_json(out, "secrecy_report.json", &report)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!(
            "secrecy-check: identity sup={:.3e} (budget {:.3e}) conv_l1={} empirical p={:.4} => {}",
            certs.identity.sup_residual,
            certs.identity.budget,
            certs
                .convolution
                .as_ref()
                .map(|c| format!("{:.3e}", c.max_l1))
                .unwrap_or_else(|| "skipped".into()),
            empirical.p_value,
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("report: {}", path.display());
    Ok(if pass { 0 } else { 1 })
}

fn cmd_error_sweep(cfg: &ErrorSweepConfig, seed: u64, out: &PathBuf, json_out: bool) -> Result<u8> {
    if cfg.sigma_list.is_empty() {
        bail!("sigma_list must not be empty");
    }
    let (pair, pair_info) = build_pair(&cfg.pair, seed)?;
    let charfn = build_charfn(&cfg.charfn, &pair)?;
    let m = match cfg.truncation_radius {
        Some(r) => SecureModulator::with_truncation(pair, charfn, r)?,
        None => SecureModulator::new(pair, charfn)?,
    };
    let meta = Meta::new("error-sweep", seed, serde_json::to_value(cfg)?).with_budgets(
        serde_json::json!({
            "tail_mass": m.tail_budget().mass,
            "tail_second_moment": m.tail_budget().second_moment,
        }),
    );
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for &sigma in &cfg.sigma_list {
        if !(sigma > 0.0) {
            bail!("sigma values must be positive, got {sigma}");
        }
        let res = error_rate(&m, &ChannelConfig::new(sigma * sigma, cfg.trials, seed)?)?;
        let p_for_rate = if res.avg_power_formula.is_finite() {
            res.avg_power_formula
        } else {
            res.avg_power_measured
        };
        let target = target_point(p_for_rate, sigma * sigma);
        rows.push(format!(
            "{sigma},{},{},{},{},{},{},{},{},{target}",
            res.sigma2,
            res.p_err,
            res.wilson_low,
            res.wilson_high,
            res.errors,
            res.trials_run,
            res.rate,
            res.avg_power_measured,
        ));
        results.push(serde_json::json!({
            "sigma": sigma, "result": res, "target_rate": target,
        }));
        println!(
            "sigma={sigma}: p_err={} [{}, {}] rate={} target_rate={target:.4}",
            res.p_err, res.wilson_low, res.wilson_high, res.rate
        );
    }
    let path = write_csv(
        out,
        "error_sweep.csv",
        &meta,
        "sigma,sigma2,p_err,wilson_low,wilson_high,errors,trials,rate,power_measured,target_rate",
        &rows,
    )?;
    println!("table: {}", path.display());

    let mut dim_rows_json = serde_json::Value::Null;
    if !cfg.dims.is_empty() {
        let coarse_scale = match cfg.pair {
            PairSpec::ZOverNz { n } | PairSpec::Hypercubic { n, .. } => n,
            PairSpec::ConstructionA { .. } => {
                bail!("dimension sweep supports the hypercubic pair family")
            }
        };
        let sweep = power_rate_sweep(&SweepConfig {
            coarse_scale,
            sigma2: cfg.sigma_list[0] * cfg.sigma_list[0],
            trials: cfg.trials,
            seed,
            dims: cfg.dims.clone(),
            covering_samples: 20_000,
        })?;
        let rows: Vec<String> = sweep
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.d,
                    r.rho,
                    r.power_formula,
                    r.power_measured,
                    r.rate,
                    r.p_err,
                    r.wilson_low,
                    r.wilson_high,
                    r.gc2_diagnostic,
                    r.target_rate,
                    r.sim_path,
                    r.seed
                )
            })
            .collect();
        let path = write_csv(
            out,
            "dimension_sweep.csv",
            &meta,
            "d,rho,power_formula,power_measured,rate,p_err,wilson_low,wilson_high,gc2_diagnostic,target_rate,sim_path,seed",
            &rows,
        )?;
        println!("dimension table: {}", path.display());
        dim_rows_json = serde_json::to_value(&sweep)?;
    }

    let report = serde_json::json!({
        "meta": meta.json_header(),
        "pair": pair_info,
        "noise_sweep": results,
        "dimension_sweep": dim_rows_json,
    });
    let path = write_json(out, "error_sweep_report.json", &report)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    println!("report: {}", path.display());
    Ok(0)
}

fn cmd_ensemble_report(
    cfg: &EnsembleReportConfig,
    seed: u64,
    out: &PathBuf,
    json_out: bool,
) -> Result<u8> {
    let g_reference = 1.0 / (2.0 * PI * std::f64::consts::E);
    let beta_reference = 1.0 / (2.0 * std::f64::consts::E);
    let mut rows = Vec::new();
    let mut blocks = Vec::new();
    let mut header_r_min = f64::NAN;
    for &d in &cfg.dims {
        let k = ((cfg.k_fraction * d as f64).round() as usize).clamp(1, d);
        let params = goodlattice_params(cfg.rho, d, k)
            .map_err(|e| anyhow!("goodlattice parameters at d={d}, k={k}: {e}"))?;
        header_r_min = params.r_min;
        let mut rng = trial_rng(seed, d as u64);
        let sample =
            scf_core::lattice::ensemble_sample(d, k, params.suggested_q, true, &mut rng)?;
        let radii = sample.basis.radii(cfg.covering_samples, &mut rng)?;
        let moment = sample
            .basis
            .second_moment_per_dim(cfg.moment_samples, &mut rng)?;
        let dual_pack = sample.basis.fourier_dual()?.shortest_vector()?.1 / 2.0;
        let gc2 = dual_pack * radii.covering_lower_bound / d as f64;
        rows.push(format!(
            "{d},{k},{},{},{},{},{},{},{},{},{},{g_reference},{gc2},{beta_reference}",
            params.suggested_q,
            params.r_min,
            radii.packing,
            radii.effective,
            radii.covering_lower_bound,
            radii.covering_samples,
            moment.m,
            moment.stderr,
            moment.g,
        ));
        blocks.push(serde_json::json!({
            "d": d, "k": k, "q": params.suggested_q,
            "params": params,
            "radii": radii,
            "second_moment": moment,
            "gc2_diagnostic": gc2,
            "code": CodeLatticeDocument::new(&sample.code, d as u64)?,
        }));
        println!(
            "d={d} k={k} q={}: r_pack={:.4} r_eff={:.4} r_cov>={:.4} G={:.5} (ref {:.5}) gc2={:.4} (ref {:.4})",
            params.suggested_q,
            radii.packing,
            radii.effective,
            radii.covering_lower_bound,
            moment.g,
            g_reference,
            gc2,
            beta_reference
        );
    }
    let meta = Meta::new("ensemble-report", seed, serde_json::to_value(cfg)?).with_budgets(
        serde_json::json!({
            "r_min": header_r_min,
            "covering_is_lower_bound": true,
        }),
    );
    let path = write_csv(
        out,
        "ensemble_report.csv",
        &meta,
        "d,k,q,r_min,r_pack,r_eff,r_cov_lower_bound,covering_samples,m_lambda,m_stderr,g_lambda,g_reference,gc2_diagnostic,beta_reference",
        &rows,
    )?;
    println!("table: {}", path.display());
    let report = serde_json::json!({
        "meta": meta.json_header(),
        "rows": blocks,
        "references": {"g": g_reference, "beta": beta_reference},
    });
    let jpath = write_json(out, "ensemble_report.json", &report)?;
    if json_out {
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    println!("report: {}", jpath.display());
    Ok(0)
}

fn cmd_pmf_table(cfg: &PmfTableConfig, seed: u64, out: &PathBuf) -> Result<u8> {
    let rho = cfg.support_radius.unwrap_or(PI / 2.0);
    let charfn = match cfg.family.as_str() {
        "triangle" => CharFnSpec::triangle(rho),
        "c2" => CharFnSpec::c2_smooth(rho),
        "minvar" => CharFnSpec::min_var_radial(1, rho)?,
        other => bail!("unknown family '{other}'"),
    };
    let meta = Meta::new("pmf-table", seed, serde_json::to_value(cfg)?);

    if charfn.eval(&[0.1]).is_ok() {
        let rows: Vec<String> = (0..cfg.samples)
            .map(|i| {
                let t = -1.5 * rho + 3.0 * rho * i as f64 / (cfg.samples - 1) as f64;
                format!("{t},{}", charfn.eval(&[t]).unwrap())
            })
            .collect();
        let p = write_csv(out, "charfn_samples.csv", &meta, "t_or_x,value", &rows)?;
        println!("charfn samples: {}", p.display());
    } else {
        println!("charfn samples: skipped (family defined through its density)");
    }

    let xmax = 4.0 * cfg.k_max as f64;
    let rows: Vec<String> = (0..cfg.samples)
        .map(|i| {
            let x = -xmax + 2.0 * xmax * i as f64 / (cfg.samples - 1) as f64;
            format!("{x},{}", charfn.density(&[x]).unwrap())
        })
        .collect();
    let p = write_csv(out, "density_samples.csv", &meta, "t_or_x,value", &rows)?;
    println!("density samples: {}", p.display());

    let m = z_over_nz_modulator(2, &charfn, Some((cfg.k_max as f64).max(64.0)))?;
    let mut rows = Vec::new();
    for k in -cfg.k_max..=cfg.k_max {
        rows.push(format!(
            "{k},{},{},{}",
            m.mixture().mass_at(&[k]),
            m.coset_pmf(GroupElement(0)).mass_at(&[k]),
            m.coset_pmf(GroupElement(1)).mass_at(&[k])
        ));
    }
    let meta = meta.with_budgets(serde_json::json!({
        "tail_mass": m.tail_budget().mass,
        "truncation_radius": m.truncation_radius(),
    }));
    let p = write_csv(out, "pmf_table.csv", &meta, "k,p,p0,p1", &rows)?;
    println!("pmf table: {}", p.display());
    Ok(0)
}

fn cmd_minvar_report(cfg: &MinvarReportConfig, seed: u64, out: &PathBuf) -> Result<u8> {
    let meta = Meta::new("minvar-report", seed, serde_json::to_value(cfg)?);
    let mut rows = Vec::new();
    for &d in &cfg.dims {
        let ctx = BesselContext::for_dimension(d)?;
        let moment = ctx.moment_lower_bound(cfg.rho);
        let ratio = 4.0 * ctx.first_zero * ctx.first_zero / (d as f64 * d as f64);
        rows.push(format!(
            "{d},{},{},{},{moment},{ratio}",
            ctx.order,
            ctx.first_zero,
            ctx.density_constant(),
        ));
        println!(
            "d={d}: j_{{{}}}={:.9} min power*rho^2/4={:.6} ratio-to-asymptote={ratio:.6}",
            ctx.order,
            ctx.first_zero,
            moment * cfg.rho * cfg.rho / 4.0
        );
    }
    let path = write_csv(
        out,
        "minvar_report.csv",
        &meta,
        "d,order,first_zero,density_constant,moment_bound,ratio_to_asymptote",
        &rows,
    )?;
    println!("table: {}", path.display());
    // sanity anchor for the table: j_{-1/2} = pi/2
    let _ = bessel_first_zero(-0.5)?;
    Ok(0)
}
