//! Byte-stable renderings of fields, reports and histograms: JSON, CSV,
//! plain text and a small SVG bar chart.

use std::fmt::Write as _;

use serde::Serialize;

use crate::constructions::QcssDescriptor;
use crate::gf::FieldSpec;
use crate::verifier::{round_sig, CorrelationReport, ShiftMagnitude};

/// Magnitudes print as integers when flagged integral, else with 9
/// significant digits.
pub fn format_number(v: f64, integral: bool) -> String {
    if integral && v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{}", round_sig(v, 9))
    }
}

fn format_real(v: f64) -> String {
    format_number(v, v.fract() == 0.0)
}

/// A field as written by the `field` command; readable back as a field file.
#[derive(Clone, Debug, Serialize)]
pub struct FieldDump {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    /// Constant term first.
    pub modulus: Vec<u32>,
    pub alpha: Vec<u32>,
    /// `alpha^k` for `k = 0..n`, constant term first.
    pub alpha_powers: Vec<Vec<u32>>,
}

impl FieldDump {
    pub fn new(fs: &FieldSpec) -> Self {
        let d = fs.description();
        FieldDump {
            p: d.p,
            n: d.n,
            q: fs.q(),
            modulus: d.modulus,
            alpha: d.alpha,
            alpha_powers: (0..fs.n().min(fs.unit_order()))
                .map(|k| fs.coeffs(fs.alpha_pow(k as u64)))
                .collect(),
        }
    }
}

/// Family parameters as written by `build` without an index.
#[derive(Clone, Debug, Serialize)]
pub struct DescriptorDump {
    pub family: crate::constructions::Family,
    pub p: u32,
    pub n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_exp: Option<u32>,
    #[serde(rename = "M")]
    pub set_size: u64,
    #[serde(rename = "K")]
    pub flock_size: u32,
    #[serde(rename = "N")]
    pub length: u32,
    pub theta_claimed: u64,
    pub alphabet_size: u64,
    pub unit_root_order: u32,
}

impl DescriptorDump {
    pub fn new(d: &QcssDescriptor) -> Self {
        DescriptorDump {
            family: d.family(),
            p: d.field().p(),
            n: d.field().n(),
            k_exp: (d.family() == crate::constructions::Family::QuadrinomialChar2)
                .then_some(d.k_exp()),
            set_size: d.set_size(),
            flock_size: d.flock_size(),
            length: d.length(),
            theta_claimed: d.theta_claimed(),
            alphabet_size: d.alphabet_size(),
            unit_root_order: d.unit_root_order(),
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s
}

pub fn field_text(fs: &FieldSpec) -> String {
    let mut out = String::new();
    let poly: Vec<String> = fs
        .modulus()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "x".into(),
            (1, c) => format!("{c}x"),
            (i, 1) => format!("x^{i}"),
            (i, c) => format!("{c}x^{i}"),
        })
        .collect();
    let _ = writeln!(out, "GF({}^{}) q = {}", fs.p(), fs.n(), fs.q());
    let _ = writeln!(out, "modulus  {}", poly.join(" + "));
    let _ = writeln!(out, "alpha    {:?}", fs.coeffs(fs.alpha()));
    out
}

pub fn report_text(r: &CorrelationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} over GF({}^{}): M = {}, K = {}, N = {}",
        r.family, r.p, r.n, r.set_size, r.flock_size, r.length
    );
    let mode = match r.mode {
        crate::verifier::Mode::Exhaustive => "exhaustive".to_string(),
        crate::verifier::Mode::Sampled { seed, count } => {
            format!("sampled (seed {seed}, {count} queries)")
        }
    };
    let _ = writeln!(out, "mode            {mode}");
    let _ = writeln!(out, "queries         {}", r.queries);
    let _ = writeln!(
        out,
        "theta a/c/max   {} / {} / {} (claimed {})",
        format_real(r.theta_a),
        format_real(r.theta_c),
        format_real(r.theta_observed),
        r.theta_claimed
    );
    let _ = writeln!(out, "theta_opt       {}", format_real(r.theta_opt));
    let rho = r.rho.map(format_real).unwrap_or_else(|| "inf".into());
    let _ = writeln!(
        out,
        "rho             {rho} ({} here, {} as q grows)",
        r.optimality_class, r.asymptotic_class
    );
    let support: Vec<String> = r.support().iter().map(|m| m.to_string()).collect();
    let _ = writeln!(out, "support         {{{}}}", support.join(", "));
    if let Some(w) = r.witness {
        let _ = writeln!(
            out,
            "witness         m1 = {}, m2 = {}, tau = {}",
            w.m1, w.m2, w.tau
        );
    }
    if r.degenerate {
        let _ = writeln!(out, "degenerate      no nontrivial query");
    }
    let _ = writeln!(
        out,
        "result          {}",
        if r.passes() { "pass" } else { "fail" }
    );
    out
}

/// `tau,magnitude` with one row per shift.
pub fn pair_csv(profile: &[ShiftMagnitude]) -> String {
    let mut out = String::from("tau,magnitude\n");
    for s in profile {
        let _ = writeln!(out, "{},{}", s.tau, format_number(s.magnitude, s.integral));
    }
    out
}

/// `magnitude,count` rows.
pub fn histogram_csv(hist: &[(u64, u64)]) -> String {
    let mut out = String::from("magnitude,count\n");
    for (m, c) in hist {
        let _ = writeln!(out, "{m},{c}");
    }
    out
}

/// One bar of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct Bar {
    pub label: String,
    pub value: f64,
    /// Drawn in a second color, e.g. the in-phase peak.
    pub highlight: bool,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// A plain bar chart: bars, value axis ticks and labels.
pub fn svg_bar_chart(title: &str, x_label: &str, y_label: &str, bars: &[Bar]) -> String {
    const W: f64 = 720.0;
    const H: f64 = 360.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let max = bars.iter().map(|b| b.value).fold(0.0f64, f64::max).max(1.0);
    let slot = plot_w / bars.len().max(1) as f64;
    let bar_w = (slot * 0.8).max(1.0);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    // axes
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#,
        TOP + plot_h
    );
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    for i in 0..=4 {
        let v = max * i as f64 / 4.0;
        let y = TOP + plot_h - plot_h * i as f64 / 4.0;
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            format_real(round_sig(v, 4))
        );
    }
    let label_every = (bars.len() / 24).max(1);
    for (i, b) in bars.iter().enumerate() {
        let h = plot_h * b.value / max;
        let x = LEFT + slot * i as f64 + (slot - bar_w) / 2.0;
        let fill = if b.highlight { "#c0392b" } else { "#2c6fbb" };
        let _ = writeln!(
            out,
            r#"<rect x="{x:.2}" y="{:.2}" width="{bar_w:.2}" height="{h:.2}" fill="{fill}"><title>{}: {}</title></rect>"#,
            TOP + plot_h - h,
            escape(&b.label),
            format_real(b.value)
        );
        if i % label_every == 0 {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
                x + bar_w / 2.0,
                TOP + plot_h + 14.0,
                escape(&b.label)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    out.push_str("</svg>\n");
    out
}

/// Per-shift magnitudes of one pair as bars; the in-phase peak of an
/// autocorrelation is highlighted.
pub fn pair_bars(profile: &[ShiftMagnitude], auto: bool) -> Vec<Bar> {
    profile
        .iter()
        .map(|s| Bar {
            label: s.tau.to_string(),
            value: s.magnitude,
            highlight: auto && s.tau == 0,
        })
        .collect()
}

pub fn histogram_bars(hist: &[(u64, u64)]) -> Vec<Bar> {
    hist.iter()
        .map(|&(m, c)| Bar {
            label: m.to_string(),
            value: c as f64,
            highlight: false,
        })
        .collect()
}

/// Coefficients of matrix `m` as `a = ..., b = ...`.
pub fn coefficient_text(d: &QcssDescriptor, m: u64) -> crate::error::Result<String> {
    let idx = d.decode(m)?;
    let parts: Vec<String> = idx
        .coefficients
        .describe(d.field())
        .into_iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect();
    Ok(parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(25.0, true), "25");
        assert_eq!(format_number(24.000833347, false), "24.0008333");
        assert_eq!(format_number(7.0, false), "7");
    }

    #[test]
    fn svg_is_well_formed_and_stable() {
        let bars = vec![
            Bar {
                label: "0".into(),
                value: 600.0,
                highlight: true,
            },
            Bar {
                label: "1".into(),
                value: 25.0,
                highlight: false,
            },
            Bar {
                label: "2".into(),
                value: 0.0,
                highlight: false,
            },
        ];
        let a = svg_bar_chart("auto <m>", "tau", "|R|", &bars);
        assert_eq!(a, svg_bar_chart("auto <m>", "tau", "|R|", &bars));
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("<rect x=").count(), 3);
        assert!(a.contains("#c0392b"));
        assert!(a.contains("auto &lt;m&gt;"));
    }

    #[test]
    fn csv_shapes() {
        let profile = vec![
            ShiftMagnitude {
                tau: 0,
                magnitude: 600.0,
                integral: true,
            },
            ShiftMagnitude {
                tau: 1,
                magnitude: 25.0,
                integral: true,
            },
        ];
        assert_eq!(pair_csv(&profile), "tau,magnitude\n0,600\n1,25\n");
        assert_eq!(
            histogram_csv(&[(0, 4), (8, 2)]),
            "magnitude,count\n0,4\n8,2\n"
        );
    }
}
