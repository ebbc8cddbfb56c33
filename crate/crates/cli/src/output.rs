//! Report serialization. Floats are written with 17 significant digits so
//! output is round-trip safe and byte-stable.

use degenzeta::identities::{Failure, FailureKind};
use degenzeta::IdentityReport;

use crate::config::OutputFormat;

/// `{:.16e}`, or `null` when not finite.
pub fn json_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn text_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn kind_name(f: &Failure) -> &'static str {
    match f.kind {
        FailureKind::Constraint => "constraint",
        FailureKind::NonConvergence => "non_convergence",
        FailureKind::Evaluation => "evaluation",
    }
}

fn elapsed_ms(r: &IdentityReport, timing: bool) -> f64 {
    if timing {
        r.elapsed.as_secs_f64() * 1e3
    } else {
        0.0
    }
}

pub fn report_json(r: &IdentityReport, timing: bool) -> String {
    let mut params = vec![
        format!("\"lambda\":{}", json_f64(r.params.lambda)),
        format!("\"p\":{}", r.params.p),
    ];
    for (k, v) in [("n", r.params.n), ("r", r.params.r), ("m", r.params.m)] {
        if let Some(v) = v {
            params.push(format!("\"{k}\":{v}"));
        }
    }
    let mut fields = vec![
        format!("\"identity\":{}", json_str(r.id.name())),
        format!("\"params\":{{{}}}", params.join(",")),
        format!("\"lhs\":{}", json_f64(r.lhs.value)),
        format!("\"rhs\":{}", json_f64(r.rhs.value)),
        format!("\"lhs_tail_bound\":{}", json_f64(r.lhs.tail_bound)),
        format!("\"rhs_tail_bound\":{}", json_f64(r.rhs.tail_bound)),
        format!("\"abs_residual\":{}", json_f64(r.abs_residual)),
        format!("\"rel_residual\":{}", json_f64(r.rel_residual)),
        format!("\"tolerance\":{}", json_f64(r.tolerance)),
        format!("\"pass\":{}", r.pass),
        format!("\"terms_used\":{}", r.lhs.terms_used),
        format!("\"elapsed_ms\":{}", json_f64(elapsed_ms(r, timing))),
    ];
    if let Some(c) = &r.cross_oracle {
        fields.push(format!(
            "\"cross_oracle\":{{\"value\":{},\"error_estimate\":{},\"agrees\":{}}}",
            json_f64(c.value),
            json_f64(c.error_estimate),
            c.agrees
        ));
    }
    if let Some(e) = r.max_term_rel_error {
        fields.push(format!("\"max_term_rel_error\":{}", json_f64(e)));
    }
    if let Some(f) = &r.failure {
        fields.push(format!(
            "\"error\":{{\"kind\":{},\"message\":{}}}",
            json_str(kind_name(f)),
            json_str(&f.message)
        ));
    }
    format!("{{{}}}", fields.join(","))
}

pub const CSV_HEADER: [&str; 20] = [
    "identity",
    "lambda",
    "p",
    "n",
    "r",
    "m",
    "lhs",
    "rhs",
    "lhs_tail_bound",
    "rhs_tail_bound",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "pass",
    "terms_used",
    "elapsed_ms",
    "cross_oracle",
    "cross_agrees",
    "max_term_rel_error",
    "error",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn report_csv_record(r: &IdentityReport, timing: bool) -> Vec<String> {
    vec![
        r.id.name().to_string(),
        text_f64(r.params.lambda),
        r.params.p.to_string(),
        opt(r.params.n),
        opt(r.params.r),
        opt(r.params.m),
        text_f64(r.lhs.value),
        text_f64(r.rhs.value),
        text_f64(r.lhs.tail_bound),
        text_f64(r.rhs.tail_bound),
        text_f64(r.abs_residual),
        text_f64(r.rel_residual),
        text_f64(r.tolerance),
        r.pass.to_string(),
        r.lhs.terms_used.to_string(),
        text_f64(elapsed_ms(r, timing)),
        opt(r.cross_oracle.map(|c| text_f64(c.value))),
        opt(r.cross_oracle.map(|c| c.agrees)),
        opt(r.max_term_rel_error.map(text_f64)),
        opt(r.failure.as_ref().map(|f| format!("{}: {}", kind_name(f), f.message))),
    ]
}

pub fn report_text(r: &IdentityReport, timing: bool) -> String {
    let params = r.params.to_string();
    let status = if r.pass { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{status} {} {params}: lhs {} (+/- {}), rhs {} (+/- {}), residual {}, tolerance {}, terms {}",
        r.id,
        text_f64(r.lhs.value),
        text_f64(r.lhs.tail_bound),
        text_f64(r.rhs.value),
        text_f64(r.rhs.tail_bound),
        text_f64(r.abs_residual),
        text_f64(r.tolerance),
        r.lhs.terms_used
    );
    if let Some(c) = &r.cross_oracle {
        line.push_str(&format!(
            ", quadrature {} ({})",
            text_f64(c.value),
            if c.agrees { "agrees" } else { "disagrees" }
        ));
    }
    if let Some(e) = r.max_term_rel_error {
        line.push_str(&format!(", max term error {}", text_f64(e)));
    }
    if timing {
        line.push_str(&format!(", {:.3} ms", elapsed_ms(r, true)));
    }
    if let Some(f) = &r.failure {
        line.push_str(&format!(", error ({}): {}", kind_name(f), f.message));
    }
    line
}

/// Serializes reports followed by a summary line.
pub fn render(reports: &[IdentityReport], format: OutputFormat, timing: bool, summary: bool) -> String {
    let passed = reports.iter().filter(|r| r.pass).count();
    let failed = reports.len() - passed;
    let mut out = String::new();
    match format {
        OutputFormat::Json => {
            for r in reports {
                out.push_str(&report_json(r, timing));
                out.push('\n');
            }
            if summary {
                out.push_str(&format!(
                    "{{\"summary\":{{\"total\":{},\"passed\":{passed},\"failed\":{failed}}}}}\n",
                    reports.len()
                ));
            }
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER).expect("in-memory write");
            for r in reports {
                w.write_record(report_csv_record(r, timing)).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory flush");
            out.push_str(&String::from_utf8(bytes).expect("utf-8 fields"));
            if summary {
                out.push_str(&format!(
                    "# summary: total={} passed={passed} failed={failed}\n",
                    reports.len()
                ));
            }
        }
        OutputFormat::Text => {
            for r in reports {
                out.push_str(&report_text(r, timing));
                out.push('\n');
            }
            if summary {
                out.push_str(&format!(
                    "summary: {} reports, {passed} passed, {failed} failed\n",
                    reports.len()
                ));
            }
        }
    }
    out
}
