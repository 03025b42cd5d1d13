use super::RunReport;

fn mark(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Plain-text summary: one line per verdict plus the headline numbers.
pub(super) fn render(r: &RunReport) -> String {
    let mut out = Vec::new();
    out.push(format!("command: {}", r.command));
    if let Some(s) = &r.setup {
        out.push(format!(
            "setup: dim {}, {} ordering, lambda order {}, budget {}, p-axes {:?}",
            s.dim, s.ordering, s.lambda_order, s.budget, s.p_axes
        ));
    }
    if let Some(a) = &r.adaptedness {
        let parts: Vec<String> = a.conditions.iter().map(|c| format!("{} {}", c.label, mark(c.passed))).collect();
        out.push(format!("adaptedness: {}", parts.join(", ")));
    }
    for t in &r.star_coefficients {
        out.push(format!("star_{}: {} entries", t.k, t.entries.len()));
    }
    if let Some(s) = &r.spectrum {
        let vals: Vec<String> = s.values.iter().map(|v| v.energy.to_string()).collect();
        out.push(format!("spectrum: [{}]", vals.join(", ")));
    }
    if let Some(m) = &r.maslov {
        if let Some(a) = &m.action {
            out.push(format!("action: {a}"));
        }
    }
    if let Some(e) = &r.equivalence {
        out.push(format!("alpha: {}", e.split.alpha));
    }
    for v in &r.verdicts {
        out.push(format!("[{}] {}: {}", mark(v.passed), v.name, v.detail));
    }
    if let Some(t) = &r.timing {
        for (k, s) in t {
            out.push(format!("time {k}: {s:.3}s"));
        }
    }
    out.push(format!(
        "convention: generator action {} (reference {})",
        r.conventions.generator_action, r.conventions.generator_action_reference
    ));
    out.push(format!("result: {}", mark(r.passed)));
    out.join("\n") + "\n"
}
