use crate::teleport::CurveRow;

pub const CSV_HEADER: &str = "N,squeezing_dB,r,gain,F_opt";

/// Rounds to 12 significant digits and prints the shortest text that parses
/// back to the rounded value, so formatting a parsed field reproduces it.
pub fn format_sig12(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let rounded: f64 = format!("{v:.11e}")
        .parse()
        .expect("float from exponent format");
    // normalise -0
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded}")
}

pub fn curve_csv(rows: &[CurveRow]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            format_sig12(r.squeezing_db),
            format_sig12(r.r),
            format_sig12(r.gain),
            format_sig12(r.f_opt)
        ));
    }
    s
}
