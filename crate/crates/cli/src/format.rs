//! Number rendering for human-readable output and CSV.

use num_complex::Complex64;
use qcorr_core::ComplexMatrix;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits, trailing zeros dropped. Magnitudes
/// outside `[1e-4, 1e12)` use scientific notation.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        return format!("{}e{exp}", trim(mantissa));
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let fixed = trim(&format!("{x:.decimals$}")).to_string();
    if fixed == "-0" {
        "0".into()
    } else {
        fixed
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn complex(z: Complex64) -> String {
    let re = sig(z.re);
    let im = sig(z.im.abs());
    match (z.re == 0.0 || re == "0", z.im == 0.0 || im == "0") {
        (_, true) => re,
        (true, false) => format!("{}{im}i", if z.im < 0.0 { "-" } else { "" }),
        (false, false) => format!("{re}{}{im}i", if z.im < 0.0 { "-" } else { "+" }),
    }
}

pub fn matrix(m: &ComplexMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| {
            let cells: Vec<String> = (0..m.cols()).map(|c| complex(m[(r, c)])).collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

pub fn list(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|&v| sig(v)).collect();
    format!("[{}]", cells.join(", "))
}
