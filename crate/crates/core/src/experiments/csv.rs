use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use super::sweep::SweepRow;
use crate::simulator::Estimate;

pub const CSV_COLUMNS: [&str; 20] = [
    "lambda",
    "tau",
    "epsilon",
    "eta",
    "window",
    "q_w_analytic",
    "q_w_sim",
    "q_w_sim_stderr",
    "P_s_analytic",
    "P_s_sim",
    "P_s_sim_stderr",
    "tput_analytic",
    "tput_sim",
    "tput_sim_stderr",
    "d_rm_analytic",
    "d_rm_sim",
    "d_rm_sim_stderr",
    "n_reps",
    "seed",
    "error",
];

/// Formats `x` with 12 significant digits in the shortest of fixed or
/// scientific notation, like C's `%.12g`.
pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-4..12).contains(&exp) {
        trim(format!("{x:.*}", (11 - exp) as usize))
    } else {
        format!("{}e{}{:02}", trim(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

fn est(v: Option<Estimate>) -> [String; 2] {
    match v {
        Some(e) => [format_value(e.mean), format_value(e.stderr)],
        None => [String::new(), String::new()],
    }
}

/// Writes the header and one line per row, CRLF-free.
pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{}", CSV_COLUMNS.join(","))?;
    for r in rows {
        let window = r.window.map(|w| w.to_string()).unwrap_or_else(|| "avg".into());
        let [q, q_se] = est(r.q_w_sim);
        let [ps, ps_se] = est(r.p_s_sim);
        let [t, t_se] = est(r.tput_sim);
        let [d, d_se] = est(r.d_rm_sim);
        let fields = [
            format_value(r.lambda),
            format_value(r.tau),
            format_value(r.epsilon),
            format_value(r.eta),
            window,
            opt(r.q_w_analytic),
            q,
            q_se,
            opt(r.p_s_analytic),
            ps,
            ps_se,
            opt(r.tput_analytic),
            t,
            t_se,
            opt(r.d_rm_analytic),
            d,
            d_se,
            r.n_reps.to_string(),
            r.seed.to_string(),
            quote(r.error.as_deref().unwrap_or("")),
        ];
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

/// Writes `rows` to `path`.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> io::Result<()> {
    if rows.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "no rows to write"));
    }
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(&mut out, rows)?;
    out.flush()
}
