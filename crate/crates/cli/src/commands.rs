use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use implantphy_core::energy::{detect_crossovers, SweepPoint, MODULATION_ORDERS};
use implantphy_core::rate::{de_rate_curve_with, embedded_table, uncoded_reference_snr, EMBEDDED_TARGETS};
use implantphy_core::sim::{active_time_ratio, duty_cycle_row, SchemeChoice};
use implantphy_core::{
    link_run as run_link, sweep_energy_vs_distance, Error, LinkRunConfig, ScenarioConfig, SimConfig, TissuePathLoss,
    TissueScenario,
};

use crate::format::sig6;
use crate::manifest::RunManifest;
use crate::{DutyCycleArgs, Figure5Args, LinkRunArgs, ScenarioArg, SchemeArg, SweepArg, TablesArgs, WhichTable};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    fn bad_input(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: 2,
            error: e.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleFrame { .. } | Error::NoFeasiblePoint { .. } => 1,
            _ => 2,
        };
        Self {
            code,
            error: e.into(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 2,
            error: e.into(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self {
            code: 2,
            error: e.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

pub struct Context {
    pub config: SimConfig,
    pub config_bytes: Vec<u8>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub invocation: String,
}

impl Context {
    pub fn load(config: Option<&Path>, seed: u64, out: Option<PathBuf>, invocation: String) -> CliResult<Self> {
        let (config, config_bytes) = match config {
            Some(path) => {
                let bytes = std::fs::read(path)
                    .map_err(|e| CliError::bad_input(anyhow::anyhow!("{}: {e}", path.display())))?;
                (SimConfig::load(path)?, bytes)
            }
            None => (SimConfig::default(), Vec::new()),
        };
        Ok(Self {
            config,
            config_bytes,
            seed,
            out,
            invocation,
        })
    }

    fn scenario(&self, pb: Option<f64>) -> CliResult<ScenarioConfig> {
        let mut s = self.config.scenario()?;
        if let Some(pb) = pb {
            s.pb_target = pb;
            s.validate()?;
        }
        Ok(s)
    }

    /// Writes the CSV body plus `# key,value` footer lines, and the manifest
    /// when writing to a file.
    fn emit(&self, body: Vec<u8>, footer: &[(String, String)]) -> CliResult<()> {
        let mut text = body;
        for (k, v) in footer {
            writeln!(text, "# {k},{v}")?;
        }
        match &self.out {
            None => std::io::stdout().write_all(&text)?,
            Some(path) => {
                std::fs::write(path, &text)?;
                let mut manifest = RunManifest::new(self.invocation.clone(), &self.config_bytes, self.seed);
                manifest.outputs.push(path.clone());
                std::fs::write(RunManifest::path_for(path), manifest.render())?;
            }
        }
        Ok(())
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::bad_input(anyhow::anyhow!("{e}")))
}

/// `start:stop:step` in mm → meters, inclusive of `stop` when it lands on
/// the step.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::bad_input(anyhow::anyhow!("grid must be start:stop:step in mm, got {spec:?}"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start > 0.0 && stop >= start && step > 0.0) {
        return Err(bad());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| (start + step * i as f64) * 1e-3).collect())
}

pub fn link_run(ctx: &Context, a: &LinkRunArgs) -> CliResult<bool> {
    let cfg = ctx.scenario(a.pb)?;
    if !(a.distance_mm > 0.0) {
        return Err(CliError::bad_input(anyhow::anyhow!("distance must be positive")));
    }
    let codec = &ctx.config.codec;
    let mut run = LinkRunConfig::new(a.distance_mm * 1e-3, ctx.seed);
    run.scheme = match a.scheme {
        SchemeArg::Uncoded => SchemeChoice::Uncoded,
        SchemeArg::Coded => SchemeChoice::Coded,
        SchemeArg::Auto => SchemeChoice::Auto,
    };
    run.block_size = a.block_size.unwrap_or(codec.block_size);
    run.dist = codec.distribution()?;
    run.max_iters = codec.max_iters;
    run.channel_weight = codec.channel_weight;
    run.snr_override_db = a.snr_db;
    let rep = run_link(&run, &cfg)?;

    let mut w = writer();
    w.write_record(["block", "k", "symbols_sent", "realized_rate", "bit_errors", "ber", "converged"])?;
    for b in &rep.blocks {
        w.write_record([
            b.block.to_string(),
            b.k.to_string(),
            b.symbols_sent.to_string(),
            sig6(b.realized_rate),
            sig6(b.bit_errors),
            sig6(b.ber),
            b.converged.to_string(),
        ])?;
    }
    let e = &rep.energy;
    let mut footer = vec![
        ("scheme".to_string(), rep.scheme.as_str().to_string()),
        ("M".into(), rep.m.to_string()),
        ("distance_mm".into(), sig6(a.distance_mm)),
        ("channel_snr_dB".into(), sig6(rep.channel_snr_db)),
        ("channel_p".into(), sig6(rep.channel_p)),
    ];
    if let Some(row) = rep.row {
        footer.push(("table_rate".into(), sig6(row.rate)));
        footer.push(("table_gain_dB".into(), sig6(row.gain_db)));
    }
    footer.extend([
        ("frame_ber".into(), sig6(rep.frame_ber())),
        ("frame_realized_rate".into(), sig6(rep.realized_rate())),
        ("rf_J".into(), sig6(e.rf)),
        ("circuit_J".into(), sig6(e.circuit)),
        ("transient_J".into(), sig6(e.transient)),
        ("coding_J".into(), sig6(e.coding)),
        ("total_J".into(), sig6(e.total)),
        ("T_ac_s".into(), sig6(rep.schedule.t_ac)),
        ("T_sl_s".into(), sig6(rep.schedule.t_sl)),
        ("duty_cycle".into(), sig6(e.duty_cycle)),
        ("tx_power_W".into(), sig6(e.tx_power)),
        ("eirp_exceeded".into(), e.exceeds_eirp().to_string()),
    ]);
    if e.exceeds_eirp() {
        eprintln!("implantphy: warning: transmit power {} W exceeds the 25 µW EIRP cap", sig6(e.tx_power));
    }
    ctx.emit(finish(w)?, &footer)?;
    Ok(true)
}

pub fn tables(ctx: &Context, a: &TablesArgs) -> CliResult<bool> {
    let conv = ctx.config.energy.ber_convention;
    let dist = ctx.config.codec.distribution()?;
    let mut w = writer();
    let mut all_ok = true;
    match a.which {
        WhichTable::V | WhichTable::Vi => {
            let m = if matches!(a.which, WhichTable::V) { 2 } else { 4 };
            let mut header = vec!["M", "Pb", "snr_dB", "rate", "gain_dB"];
            if a.de {
                header.extend(["de_rate", "de_delta"]);
            }
            w.write_record(&header)?;
            for pb in EMBEDDED_TARGETS {
                let t = embedded_table(m, pb)?;
                let de = if a.de {
                    let grid: Vec<f64> = t.rows.iter().map(|r| r.snr_db).collect();
                    Some(de_rate_curve_with(&dist, m, pb, &grid, conv)?)
                } else {
                    None
                };
                for (i, r) in t.rows.iter().enumerate() {
                    let mut rec = vec![m.to_string(), format!("{pb:e}"), sig6(r.snr_db), sig6(r.rate), sig6(r.gain_db)];
                    if let Some(c) = &de {
                        let p = c.points[i];
                        rec.push(sig6(p.rate));
                        rec.push(sig6(p.rate - r.rate));
                    }
                    w.write_record(&rec)?;
                }
            }
        }
        WhichTable::Consistency => {
            w.write_record(["M", "Pb", "rows", "column_constant_dB", "uncoded_ref_dB", "max_deviation_dB", "status"])?;
            for m in MODULATION_ORDERS {
                for pb in EMBEDDED_TARGETS {
                    let t = embedded_table(m, pb)?;
                    let reference = uncoded_reference_snr(m, pb, conv)?;
                    let constant = t.column_constant();
                    let mut ok = t.max_column_deviation() <= 0.05;
                    if m == 2 {
                        ok &= (constant - reference).abs() <= 0.03;
                    }
                    all_ok &= ok;
                    w.write_record([
                        m.to_string(),
                        format!("{pb:e}"),
                        t.rows.len().to_string(),
                        sig6(constant),
                        sig6(reference),
                        sig6(t.max_column_deviation()),
                        if ok { "PASS" } else { "FAIL" }.to_string(),
                    ])?;
                }
            }
        }
    }
    ctx.emit(finish(w)?, &[])?;
    if !all_ok {
        eprintln!("implantphy: table consistency check failed");
    }
    Ok(all_ok)
}

fn all_feasible(pts: &[SweepPoint]) -> bool {
    let bad = pts.iter().filter(|p| p.outcome.is_err()).count();
    if bad > 0 {
        eprintln!("implantphy: {bad} of {} distances have no feasible operating point", pts.len());
    }
    bad == 0
}

pub fn figure5(ctx: &Context, a: &Figure5Args) -> CliResult<bool> {
    let mut cfg = ctx.scenario(a.pb)?;
    if let Some(s) = a.scenario {
        cfg.path_loss = TissuePathLoss::for_scenario(match s {
            ScenarioArg::Deep => TissueScenario::DeepTissue,
            ScenarioArg::Near => TissueScenario::NearSurface,
        });
    }
    let grid = parse_grid(&a.grid)?;
    let pts = sweep_energy_vs_distance(&grid, &cfg)?;
    let mut w = writer();
    w.write_record([
        "d_mm",
        "uncoded_M",
        "uncoded_total_J",
        "coded_M",
        "coded_snr_dB",
        "coded_rate",
        "coded_total_J",
        "winner",
    ])?;
    for p in &pts {
        let d = sig6(p.d_m * 1e3);
        match &p.outcome {
            Ok(o) => w.write_record([
                d,
                o.uncoded.m.to_string(),
                sig6(o.uncoded.total),
                o.coded.energy.m.to_string(),
                sig6(o.coded.row.snr_db),
                sig6(o.coded.row.rate),
                sig6(o.coded.energy.total),
                o.winner().as_str().to_string(),
            ])?,
            Err(_) => w.write_record([d.as_str(), "", "", "", "", "", "", "infeasible"])?,
        }
    }
    let crossings = detect_crossovers(&pts, &cfg)?;
    let d_t = if crossings.is_empty() {
        "none".to_string()
    } else {
        crossings.iter().map(|d| sig6(d * 1e3)).collect::<Vec<_>>().join(";")
    };
    ctx.emit(finish(w)?, &[("d_T_mm".into(), d_t)])?;
    Ok(all_feasible(&pts))
}

pub fn duty_cycle(ctx: &Context, a: &DutyCycleArgs) -> CliResult<bool> {
    let cfg = ctx.scenario(a.pb)?;
    let mut w = writer();
    let mut feasible = true;
    match a.sweep {
        SweepArg::Snr => {
            w.write_record(["M", "bandwidth_hz", "snr_dB", "rate", "T_ac_s", "T_ac_coded_s", "duty_cycle"])?;
            for m in MODULATION_ORDERS {
                let link = cfg.link.with_m(m);
                let reference = uncoded_reference_snr(m, cfg.pb_target, cfg.ber_convention)?;
                let mut rows = vec![(sig6(reference), 1.0), (String::new(), 0.5)];
                for r in &cfg.rate_table(m)?.rows {
                    rows.push((sig6(r.snr_db), r.rate));
                }
                for (snr, rate) in rows {
                    let d = duty_cycle_row(&link, rate)?;
                    w.write_record([
                        m.to_string(),
                        sig6(d.bandwidth_hz),
                        snr,
                        sig6(rate),
                        sig6(d.t_ac_s),
                        sig6(d.t_ac_coded_s),
                        sig6(d.duty_cycle),
                    ])?;
                }
            }
        }
        SweepArg::Distance => {
            w.write_record(["d_mm", "scheme", "M", "rate", "T_ac_coded_s", "duty_cycle"])?;
            let pts = sweep_energy_vs_distance(&parse_grid(&a.grid)?, &cfg)?;
            feasible = all_feasible(&pts);
            for p in pts {
                let d = sig6(p.d_m * 1e3);
                match p.outcome {
                    Ok(o) => {
                        let e = match o.winner() {
                            implantphy_core::Scheme::Coded => o.coded.energy,
                            implantphy_core::Scheme::Uncoded => o.uncoded,
                        };
                        w.write_record([
                            d,
                            o.winner().as_str().to_string(),
                            e.m.to_string(),
                            sig6(e.rate),
                            sig6(e.t_ac_effective),
                            sig6(e.duty_cycle),
                        ])?;
                    }
                    Err(_) => w.write_record([d.as_str(), "infeasible", "", "", "", ""])?,
                }
            }
        }
    }
    let ratio = active_time_ratio(&cfg.link, 62.5e3);
    ctx.emit(
        finish(w)?,
        &[(format!("T_ac_ratio_{}Hz_vs_62500Hz", sig6(cfg.link.bandwidth_hz)), sig6(ratio))],
    )?;
    Ok(feasible)
}

#[cfg(test)]
mod tests {
    use super::parse_grid;

    #[test]
    fn grid_parsing() {
        let g = parse_grid("30:300:1").unwrap();
        assert_eq!(g.len(), 271);
        assert!((g[270] - 0.3).abs() < 1e-12);
        assert_eq!(parse_grid("100:100:5").unwrap(), vec![0.1]);
        assert!(parse_grid("0:10:1").is_err());
        assert!(parse_grid("10:5:1").is_err());
        assert!(parse_grid("a:b").is_err());
    }
}
