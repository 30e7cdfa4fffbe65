use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::channel::Framework;
use crate::error::{Error, Result};
use crate::schemes::Scheme;

use super::spec::SweepKind;

pub const CSV_HEADER: &str =
    "sweep,scheme,framework,K,M,N,snr_db,trials,mean_sum_rate,stderr_sum_rate,mean_leakage,flops";

/// One line of sweep output. Rate columns are empty for complexity rows and
/// `flops` is empty for rate rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep: SweepKind,
    pub scheme: Scheme,
    pub framework: Framework,
    pub transmitters: usize,
    pub antennas: usize,
    pub users: usize,
    pub snr_db: Option<f64>,
    pub trials: Option<usize>,
    pub mean_sum_rate: Option<f64>,
    pub stderr_sum_rate: Option<f64>,
    pub mean_leakage: Option<f64>,
    pub flops: Option<u64>,
}

/// `%.10g`-style rendering: 10 significant digits, trailing zeros removed,
/// scientific notation outside `[1e-5, 1e10)`.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.9e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl ResultRow {
    fn fields(&self) -> [String; 12] {
        [
            self.sweep.name().to_string(),
            self.scheme.short_name().to_string(),
            self.framework.short_name().to_string(),
            self.transmitters.to_string(),
            self.antennas.to_string(),
            self.users.to_string(),
            opt(self.snr_db, format_sig),
            opt(self.trials, |t| t.to_string()),
            opt(self.mean_sum_rate, format_sig),
            opt(self.stderr_sum_rate, format_sig),
            opt(self.mean_leakage, format_sig),
            opt(self.flops, |f| f.to_string()),
        ]
    }

    fn from_record(rec: &csv::StringRecord) -> Result<Self> {
        let bad = |what: &str| Error::InvalidSpec(format!("malformed CSV field '{what}'"));
        let get = |i: usize| rec.get(i).ok_or_else(|| bad("missing column"));
        let num = |i: usize| -> Result<Option<f64>> {
            let s = get(i)?;
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad(s))
            }
        };
        let int = |i: usize| -> Result<usize> { get(i)?.parse().map_err(|_| bad(get(i).unwrap_or(""))) };
        let scheme = match get(1)? {
            "oia" => Scheme::Oia,
            "min-inr" => Scheme::MinInr,
            "max-snr" => Scheme::MaxSnr,
            other => return Err(bad(other)),
        };
        let framework = match get(2)? {
            "us" => Framework::UserSelection,
            "up" => Framework::UserPairing,
            other => return Err(bad(other)),
        };
        Ok(Self {
            sweep: get(0)?.parse()?,
            scheme,
            framework,
            transmitters: int(3)?,
            antennas: int(4)?,
            users: int(5)?,
            snr_db: num(6)?,
            trials: if get(7)?.is_empty() { None } else { Some(int(7)?) },
            mean_sum_rate: num(8)?,
            stderr_sum_rate: num(9)?,
            mean_leakage: num(10)?,
            flops: if get(11)?.is_empty() { None } else { Some(get(11)?.parse().map_err(|_| bad("flops"))?) },
        })
    }
}

/// Writes the header and one line per row, in the given order.
pub fn emit_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[ResultRow], path: &Path) -> Result<()> {
    emit_csv(rows, File::create(path)?)
}

/// Parses output produced by [`emit_csv`].
pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(Error::InvalidSpec(format!("unexpected CSV header '{header}'")));
    }
    r.records().map(|rec| ResultRow::from_record(&rec?)).collect()
}
