//! The batch subcommands: each runs one experiment, writes a CSV table with
//! the config hash and seed embedded as comment lines, and returns the
//! manifest describing the run.
//!
//! All floating-point columns are printed with 17 significant digits so the
//! values round-trip losslessly.

use std::io::Write;
use std::path::Path;
#[cfg(test)]
use std::path::PathBuf;

use crate::asymptotics::{ef_asymptote, ef_mean, AsymptoteSide};
use crate::cli::config::canonical_string;
use crate::cli::manifest::{config_hash, RunManifest};
use crate::error::{Error, Result};
use crate::montecarlo::{
    bias_experiment, ks_two_sample, quantile_table, run_finite_sample, run_limit,
    ExperimentConfig,
};
use crate::noise::{sample_noise, HurstIndex, Regime};
use crate::rng::{derive_stream, StreamDomain};

/// 17 significant digits: enough to reconstruct the exact f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(contents.as_bytes())?;
    Ok(())
}

fn header(hash: &str, seed: u64) -> String {
    format!("# config_hash = {hash}\n# seed = {seed}\n")
}

fn finish(
    out: &Path,
    contents: &str,
    hash: String,
    seed: u64,
    command: String,
) -> Result<RunManifest> {
    write_file(out, contents)?;
    let mut manifest = RunManifest::new(hash, seed, command);
    manifest.outputs.push(out.display().to_string());
    Ok(manifest)
}

/// `simulate-noise`: one innovation path as (t, eps) rows.
pub fn cmd_simulate_noise(
    config: &ExperimentConfig,
    out: &Path,
    command: String,
) -> Result<RunManifest> {
    let hash = config_hash(&canonical_string(config));
    let mut rng = derive_stream(config.seed, StreamDomain::Noise, config.n as u64, 0);
    let eps = sample_noise(&config.noise, config.n, &mut rng)?;
    let mut body = header(&hash, config.seed);
    body.push_str("t,eps\n");
    for (t, e) in eps.iter().enumerate() {
        body.push_str(&format!("{},{}\n", t + 1, fmt_float(*e)));
    }
    finish(out, &body, hash, config.seed, command)
}

/// `limit-table`: empirical quantiles of the simulated limit vector.
pub fn cmd_limit_table(
    config: &ExperimentConfig,
    probs: &[f64],
    out: &Path,
    command: String,
) -> Result<RunManifest> {
    let hash = config_hash(&canonical_string(config));
    let sample = run_limit(config)?;
    let table = quantile_table(&sample, probs)?;
    let mut body = header(&hash, config.seed);
    if config.h.regime() == Regime::Antipersistent {
        let c = config.noise.attraction_constants()?;
        let f_const = -0.5 * c.sigma2 / (c.l * c.l);
        body.push_str(&format!(
            "# note: below H = 1/2 the limit scalar F is the constant \
             -(sigma/L)^2/2 = {}; randomness enters only through Theta\n",
            fmt_float(f_const)
        ));
    }
    body.push_str("H,gamma,regime,prob,quantile_tau,quantile_b,reps,seed\n");
    for (i, &p) in table.probs.iter().enumerate() {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_float(config.h.value()),
            fmt_float(config.gamma),
            table.regime.name(),
            fmt_float(p),
            fmt_float(table.tau[i]),
            fmt_float(table.b[i]),
            table.reps,
            table.seed,
        ));
    }
    finish(out, &body, hash, config.seed, command)
}

/// `ks-compare`: per-coordinate KS statistics plus both empirical CDFs as
/// plot-ready (coordinate, x, cdf_finite, cdf_limit) rows.
pub fn cmd_ks_compare(
    config: &ExperimentConfig,
    out: &Path,
    command: String,
) -> Result<RunManifest> {
    let hash = config_hash(&canonical_string(config));
    let finite = run_finite_sample(config)?;
    let limit = run_limit(config)?;

    let mut body = header(&hash, config.seed);
    let mut blocks = String::new();
    let mut ks_line = String::new();
    for (name, fin, lim) in [
        ("tau", finite.taus(), limit.taus()),
        ("b", finite.bs(), limit.bs()),
    ] {
        let ks = ks_two_sample(&fin, &lim);
        ks_line.push_str(&format!("# ks_{name} = {}\n", fmt_float(ks)));
        let mut fin_sorted = fin.clone();
        let mut lim_sorted = lim.clone();
        fin_sorted.sort_by(f64::total_cmp);
        lim_sorted.sort_by(f64::total_cmp);
        let mut grid: Vec<f64> = fin_sorted.iter().chain(lim_sorted.iter()).copied().collect();
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let cdf = |sorted: &[f64], x: f64| {
            sorted.partition_point(|&v| v <= x) as f64 / sorted.len() as f64
        };
        for x in grid {
            blocks.push_str(&format!(
                "{name},{},{},{}\n",
                fmt_float(x),
                fmt_float(cdf(&fin_sorted, x)),
                fmt_float(cdf(&lim_sorted, x)),
            ));
        }
    }
    body.push_str(&ks_line);
    body.push_str("coordinate,x,cdf_finite,cdf_limit\n");
    body.push_str(&blocks);
    finish(out, &body, hash, config.seed, command)
}

/// `ef-table`: the expected limit functional with the matching asymptote and
/// their ratio. Requires every H > 1/2; at gamma = 0 the exact value 1/2 is
/// printed and the asymptote column is empty.
pub fn cmd_ef_table(
    h_list: &[f64],
    gamma_list: &[f64],
    out: &Path,
    command: String,
) -> Result<RunManifest> {
    if h_list.is_empty() || gamma_list.is_empty() {
        return Err(Error::InvalidArgument(
            "ef-table needs at least one H and one gamma".into(),
        ));
    }
    let hs = h_list
        .iter()
        .map(|&v| {
            let h = HurstIndex::new(v)?;
            if h.value() <= 0.5 {
                return Err(Error::InvalidArgument(format!(
                    "ef-table needs H > 1/2 (the expectation is 0 at H = 1/2 \
                     and -1/2 below); got {v}"
                )));
            }
            Ok(h)
        })
        .collect::<Result<Vec<_>>>()?;

    let canonical = format!(
        "ef_table.h={}\nef_table.gamma={}\n",
        h_list.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(","),
        gamma_list.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(","),
    );
    let hash = config_hash(&canonical);
    let mut body = header(&hash, 0);
    body.push_str("H,gamma,ef,asymptote,ratio\n");
    for &h in &hs {
        for &g in gamma_list {
            let (ef, asy) = if g == 0.0 {
                // exact closed-form value at gamma = 0
                (0.5, None)
            } else {
                let side = if g > 0.0 { AsymptoteSide::Plus } else { AsymptoteSide::Minus };
                (ef_mean(h, g)?, Some(ef_asymptote(h, g, side)?))
            };
            match asy {
                Some(a) => body.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_float(h.value()),
                    fmt_float(g),
                    fmt_float(ef),
                    fmt_float(a),
                    fmt_float(ef / a),
                )),
                None => body.push_str(&format!(
                    "{},{},{},,\n",
                    fmt_float(h.value()),
                    fmt_float(g),
                    fmt_float(ef),
                )),
            }
        }
    }
    finish(out, &body, hash, 0, command)
}

/// `bias-check`: the bias experiment across a list of sample sizes.
pub fn cmd_bias_check(
    h: f64,
    gamma: f64,
    n_list: &[usize],
    reps: usize,
    seed: u64,
    out: &Path,
    command: String,
) -> Result<RunManifest> {
    if n_list.is_empty() {
        return Err(Error::InvalidArgument("bias-check needs at least one n".into()));
    }
    let h = HurstIndex::new(h)?;
    let canonical = format!(
        "bias_check.h={:?}\nbias_check.gamma={gamma:?}\nbias_check.n={}\n\
         bias_check.reps={reps}\nbias_check.seed={seed}\n",
        h.value(),
        n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
    );
    let hash = config_hash(&canonical);
    let mut body = header(&hash, seed);
    body.push_str("n,estimate,stderr,target,z_score\n");
    for &n in n_list {
        let b = bias_experiment(h, gamma, n, reps, seed)?;
        body.push_str(&format!(
            "{n},{},{},{},{}\n",
            fmt_float(b.estimate),
            fmt_float(b.mc_stderr),
            fmt_float(b.target.value),
            fmt_float(b.z_score()),
        ));
    }
    finish(out, &body, hash, seed, command)
}
