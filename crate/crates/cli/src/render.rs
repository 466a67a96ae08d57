//! Text rendering. Floats carry 12 significant digits; binary coarse values
//! are printed as exact fractions of the level's minor count.

use std::fmt::Write;

use entangle::indicators::AnalysisReport;
use entangle::separability::{Factorization, SeparabilityReport};
use entangle::tables::format_ratio;
use entangle::{Complex64, PureState};

use crate::args::Mode;

pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..12).contains(&exp) {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        return format!("{}e{e}", trim_zeros(mantissa));
    }
    trim_zeros(&format!("{:.*}", (11 - exp) as usize, x))
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

pub fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() && z.im != 0.0 { '-' } else { '+' };
    format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
}

fn coefficient(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else {
        format!("({})", complex(z))
    }
}

/// Nonzero terms of the basis expansion, e.g. `0.5|00> - 0.5|11>`.
pub fn ket_sum(state: &PureState) -> String {
    let dims = state.dims();
    let mut out = String::new();
    for (offset, &a) in state.amps().iter().enumerate() {
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut rest = offset;
        let mut digits = vec!['0'; dims.len()];
        for (slot, &d) in dims.iter().enumerate().rev() {
            digits[slot] = char::from_digit((rest % d) as u32, 36).unwrap_or('?');
            rest /= d;
        }
        let ket: String = digits.into_iter().collect();
        let negative_real = a.im == 0.0 && a.re < 0.0;
        let coeff = coefficient(if negative_real && !out.is_empty() { -a } else { a });
        match (out.is_empty(), negative_real) {
            (true, _) => write!(out, "{coeff}|{ket}>"),
            (false, true) => write!(out, " - {coeff}|{ket}>"),
            (false, false) => write!(out, " + {coeff}|{ket}>"),
        }
        .expect("writing to a string");
    }
    if out.is_empty() {
        out = format!("0|{}>", "0".repeat(dims.len()));
    }
    out
}

fn list<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn profile(out: &mut String, report: &AnalysisReport, mode: Mode) {
    let _ = writeln!(out, "dims        {}", list(&report.dims));
    let _ = writeln!(out, "tolerance   {}", num(report.tolerance));
    for level in &report.levels {
        let _ = writeln!(
            out,
            "level {}     {} of {} minors nonzero",
            level.level, level.nonzero, level.count
        );
        let _ = writeln!(out, "  pattern   {}", list(level.binary_pattern()));
        if mode == Mode::Raw {
            for m in &level.minors {
                let _ = writeln!(
                    out,
                    "  branch {} rows ({},{}) cols ({},{})  {}  |{}|",
                    list(&m.branch),
                    m.row_pair.0,
                    m.row_pair.1,
                    m.col_pair.0,
                    m.col_pair.1,
                    complex(m.value),
                    num(m.magnitude)
                );
            }
        }
    }
    let coarse = match mode {
        Mode::Binary => list(report.levels.iter().map(|l| format_ratio(l.coarse_ratio()))),
        Mode::Raw => list(report.coarse.raw.iter().map(|&x| num(x))),
    };
    let label = if mode == Mode::Binary { "binary" } else { "raw" };
    let _ = writeln!(out, "coarse      {coarse} ({label}, levels {}..2)", report.dims.len());
    if let Some(c) = report.concurrence {
        let _ = writeln!(out, "concurrence {}", num(c));
    }
    if let Some(det) = report.cayley {
        let _ = writeln!(out, "cayley      {}", complex(Complex64::new(det.re, det.im)));
    }
    if let Some(t) = report.tangle {
        let _ = writeln!(out, "tangle      {}", num(t));
    }
}

pub fn factorization(out: &mut String, f: &Factorization) {
    let n = f.core_sites + f.factors.len();
    if let Some(core) = &f.core {
        let _ = writeln!(out, "core        sites 1..{}: {}", f.core_sites, ket_sum(core));
    }
    for (k, factor) in f.factors.iter().enumerate().rev() {
        let _ = writeln!(out, "factor {:<4} {}", n - k, list(factor.iter().map(|&z| complex(z))));
    }
    if f.marginal {
        let _ = writeln!(out, "warning     a rank decision fell within a decade of the tolerance");
    }
}

pub fn separability(out: &mut String, report: &SeparabilityReport) {
    let _ = writeln!(out, "separable   {}", yes_no(report.completely_separable));
    let splits: Vec<String> = report
        .per_site_separable
        .iter()
        .enumerate()
        .map(|(i, &s)| format!("{}:{}", i + 1, yes_no(s)))
        .collect();
    let _ = writeln!(out, "site splits {}", splits.join(" "));
    let marginal: Vec<String> = report
        .per_site_marginal
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(i, _)| (i + 1).to_string())
        .collect();
    if !marginal.is_empty() {
        let _ = writeln!(out, "marginal    sites {} are near the tolerance", marginal.join(", "));
    }
    factorization(out, &report.factorization);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(num(1.0 / 3.0), "0.333333333333");
        assert_eq!(num(0.25), "0.25");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1e-10), "1e-10");
        assert_eq!(num(1.234567890123456e-7), "1.23456789012e-7");
        assert_eq!(num(123456.0), "123456");
        assert_eq!(num(0.9999999999999), "1");
    }

    #[test]
    fn complex_and_kets() {
        assert_eq!(complex(Complex64::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(complex(Complex64::new(1.0, 0.0)), "1+0i");
        let s = PureState::new(
            vec![2, 2],
            vec![
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.5),
                Complex64::new(-0.5, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(ket_sum(&s), "0.5|00> + (0+0.5i)|10> - 0.5|11>");
    }
}
