use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::phy::{linear_to_db, required_snr, BerConvention};

/// Column-constant tolerance: `|snr + gain − uncoded_ref|` per row, dB.
pub const COLUMN_TOLERANCE_DB: f64 = 0.05;

const EMBEDDED_CSV: &str = include_str!("../../assets/rate_tables.csv");

/// The calibration tables as shipped, `M,Pb,snr_dB,rate,gain_dB`.
pub fn embedded_csv() -> &'static str {
    EMBEDDED_CSV
}

/// One LT operating point: at channel SNR `snr_db` the code runs at `rate`
/// and buys `gain_db` of coding gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateGainRow {
    pub snr_db: f64,
    pub rate: f64,
    pub gain_db: f64,
}

impl RateGainRow {
    pub fn new(snr_db: f64, rate: f64, gain_db: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::param("rate", format!("{rate} outside (0, 1]")));
        }
        Ok(Self {
            snr_db,
            rate,
            gain_db,
        })
    }

    /// The operating point that behaves exactly like no coding.
    pub fn uncoded() -> Self {
        Self {
            snr_db: f64::NAN,
            rate: 1.0,
            gain_db: 0.0,
        }
    }

    pub fn gain_linear(&self) -> f64 {
        10f64.powf(self.gain_db / 10.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateGainTable {
    pub m: u32,
    pub pb_target: f64,
    pub rows: Vec<RateGainRow>,
    pub uncoded_ref_db: f64,
}

/// SNR (dB) an uncoded NC-MFSK link needs to reach `pb`.
pub fn uncoded_reference_snr(m: u32, pb: f64, conv: BerConvention) -> Result<f64> {
    required_snr(pb, m, conv).map(linear_to_db)
}

impl RateGainTable {
    /// Validates ordering, rate monotonicity and the column-constant
    /// structure against the per-bit uncoded reference.
    pub fn new(m: u32, pb_target: f64, rows: Vec<RateGainRow>) -> Result<Self> {
        let uncoded_ref_db = uncoded_reference_snr(m, pb_target, BerConvention::PerBit)?;
        let table = Self {
            m,
            pb_target,
            rows,
            uncoded_ref_db,
        };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        for w in self.rows.windows(2) {
            if !(w[1].snr_db > w[0].snr_db) {
                return Err(Error::param("rows", "SNR column must be strictly increasing"));
            }
            if w[1].rate < w[0].rate {
                return Err(Error::param(
                    "rows",
                    format!("rate drops from {} to {} at {} dB", w[0].rate, w[1].rate, w[1].snr_db),
                ));
            }
        }
        if let Some(r) = self.rows.iter().find(|r| !(r.rate > 0.0 && r.rate <= 1.0)) {
            return Err(Error::param("rows", format!("rate {} outside (0, 1]", r.rate)));
        }
        let dev = self.max_column_deviation();
        if dev > COLUMN_TOLERANCE_DB {
            return Err(Error::param(
                "rows",
                format!("snr + gain deviates from the uncoded reference by {dev:.3} dB"),
            ));
        }
        Ok(())
    }

    /// Mean of `snr + gain` over the rows.
    pub fn column_constant(&self) -> f64 {
        self.rows.iter().map(|r| r.snr_db + r.gain_db).sum::<f64>() / self.rows.len() as f64
    }

    pub fn max_column_deviation(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.snr_db + r.gain_db - self.uncoded_ref_db).abs())
            .fold(0.0, f64::max)
    }

    pub fn row_at(&self, snr_db: f64) -> Option<&RateGainRow> {
        self.rows.iter().find(|r| (r.snr_db - snr_db).abs() < 1e-9)
    }
}

pub const EMBEDDED_TARGETS: [f64; 3] = [1e-3, 1e-4, 1e-5];

fn same_target(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs()
}

fn parse_embedded() -> Result<Vec<RateGainTable>> {
    let mut columns: Vec<(u32, f64, Vec<RateGainRow>)> = Vec::new();
    for (lineno, line) in EMBEDDED_CSV.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("rate_tables.csv line {}", lineno + 1));
        let f: Vec<&str> = line.split(',').collect();
        let [m, pb, snr, rate, gain] = f[..] else {
            return Err(bad());
        };
        let m: u32 = m.parse().map_err(|_| bad())?;
        let pb: f64 = pb.parse().map_err(|_| bad())?;
        let row = RateGainRow::new(
            snr.parse().map_err(|_| bad())?,
            rate.parse().map_err(|_| bad())?,
            gain.parse().map_err(|_| bad())?,
        )?;
        match columns.iter_mut().find(|c| c.0 == m && same_target(c.1, pb)) {
            Some(c) => c.2.push(row),
            None => columns.push((m, pb, vec![row])),
        }
    }
    columns
        .into_iter()
        .map(|(m, pb, rows)| RateGainTable::new(m, pb, rows))
        .collect()
}

fn embedded_tables() -> &'static [RateGainTable] {
    static TABLES: OnceLock<Vec<RateGainTable>> = OnceLock::new();
    TABLES.get_or_init(|| parse_embedded().expect("embedded rate tables are well formed"))
}

/// The published rate/gain column for `(M, Pb)`, `M ∈ {2, 4}` and
/// `Pb ∈ {1e-3, 1e-4, 1e-5}`.
pub fn embedded_table(m: u32, pb: f64) -> Result<RateGainTable> {
    embedded_tables()
        .iter()
        .find(|t| t.m == m && same_target(t.pb_target, pb))
        .cloned()
        .ok_or(Error::UnsupportedTable { m, pb })
}
