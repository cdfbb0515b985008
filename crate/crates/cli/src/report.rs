//! Structured run reports with deterministic text and JSON renderings.
//!
//! Complex numbers are rendered as `re+imi` with 12 significant digits
//! (`{:.11e}` notation), and all maps are ordered, so a report is
//! byte-identical across runs for a fixed seed.

use std::collections::BTreeMap;

use num_complex::Complex64;

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn fmt_f(x: f64) -> String {
    format!("{:.11e}", clean(x))
}

pub fn fmt_c(z: Complex64) -> String {
    format!("{:.11e}{:+.11e}i", clean(z.re), clean(z.im))
}

#[derive(Debug, Clone)]
pub enum TraceEvent {
    Stmt {
        index: usize,
        text: String,
    },
    Measure {
        var: String,
        outcome: i8,
        parity: String,
        probability: f64,
    },
    State {
        norm: f64,
        amps: Vec<(String, Complex64)>,
    },
    Matrix {
        name: String,
        basis: Vec<String>,
        rows: Vec<Vec<Complex64>>,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub script: String,
    pub seed: u64,
    pub shots: u64,
    /// Trace of shot 0.
    pub trace: Vec<TraceEvent>,
    /// Per-variable (even, odd) outcome counts over all shots.
    pub var_counts: BTreeMap<String, (u64, u64)>,
    /// Joint outcome histogram over all shots, keyed like `m1=even,m2=odd`.
    pub joint_counts: BTreeMap<String, u64>,
}

impl Report {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("majsim report v1\n");
        out.push_str(&format!("script {}\n", self.script));
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("shots {}\n", self.shots));
        out.push_str("trace (shot 0)\n");
        for ev in &self.trace {
            match ev {
                TraceEvent::Stmt { index, text } => {
                    out.push_str(&format!("  [{index:03}] {text}\n"));
                }
                TraceEvent::Measure {
                    var,
                    outcome,
                    parity,
                    probability,
                } => {
                    out.push_str(&format!(
                        "        measure {var}: outcome {outcome:+} ({parity}), p = {}\n",
                        fmt_f(*probability)
                    ));
                }
                TraceEvent::State { norm, amps } => {
                    out.push_str(&format!("        state, norm {}\n", fmt_f(*norm)));
                    for (label, amp) in amps {
                        out.push_str(&format!("          |{label}>  {}\n", fmt_c(*amp)));
                    }
                }
                TraceEvent::Matrix { name, basis, rows } => {
                    out.push_str(&format!(
                        "        matrix {name} in ({})\n",
                        basis.join(", ")
                    ));
                    for row in rows {
                        let cells: Vec<String> = row.iter().map(|z| fmt_c(*z)).collect();
                        out.push_str(&format!("          [{}]\n", cells.join(", ")));
                    }
                }
            }
        }
        if !self.var_counts.is_empty() {
            out.push_str("aggregate\n");
            for (var, (even, odd)) in &self.var_counts {
                out.push_str(&format!("  var {var}: even {even}, odd {odd}\n"));
            }
            for (key, count) in &self.joint_counts {
                out.push_str(&format!("  joint {key}: {count}\n"));
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn render_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"report\": \"majsim-v1\",\n"));
        out.push_str(&format!("  \"script\": {},\n", json_str(&self.script)));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"shots\": {},\n", self.shots));
        out.push_str("  \"trace\": [\n");
        for (i, ev) in self.trace.iter().enumerate() {
            let comma = if i + 1 == self.trace.len() { "" } else { "," };
            match ev {
                TraceEvent::Stmt { index, text } => {
                    out.push_str(&format!(
                        "    {{\"stmt\": {index}, \"text\": {}}}{comma}\n",
                        json_str(text)
                    ));
                }
                TraceEvent::Measure {
                    var,
                    outcome,
                    parity,
                    probability,
                } => {
                    out.push_str(&format!(
                        "    {{\"measure\": {}, \"outcome\": {outcome}, \"parity\": {}, \
                         \"probability\": {}}}{comma}\n",
                        json_str(var),
                        json_str(parity),
                        json_str(&fmt_f(*probability))
                    ));
                }
                TraceEvent::State { norm, amps } => {
                    let entries: Vec<String> = amps
                        .iter()
                        .map(|(l, a)| {
                            format!(
                                "{{\"ket\": {}, \"amp\": {}}}",
                                json_str(l),
                                json_str(&fmt_c(*a))
                            )
                        })
                        .collect();
                    out.push_str(&format!(
                        "    {{\"state_norm\": {}, \"amps\": [{}]}}{comma}\n",
                        json_str(&fmt_f(*norm)),
                        entries.join(", ")
                    ));
                }
                TraceEvent::Matrix { name, basis, rows } => {
                    let basis_s: Vec<String> = basis.iter().map(|b| json_str(b)).collect();
                    let rows_s: Vec<String> = rows
                        .iter()
                        .map(|row| {
                            let cells: Vec<String> =
                                row.iter().map(|z| json_str(&fmt_c(*z))).collect();
                            format!("[{}]", cells.join(", "))
                        })
                        .collect();
                    out.push_str(&format!(
                        "    {{\"matrix\": {}, \"basis\": [{}], \"rows\": [{}]}}{comma}\n",
                        json_str(name),
                        basis_s.join(", "),
                        rows_s.join(", ")
                    ));
                }
            }
        }
        out.push_str("  ],\n");
        out.push_str("  \"aggregate\": {\n");
        let vars: Vec<String> = self
            .var_counts
            .iter()
            .map(|(var, (even, odd))| {
                format!(
                    "      {}: {{\"even\": {even}, \"odd\": {odd}}}",
                    json_str(var)
                )
            })
            .collect();
        out.push_str("    \"vars\": {\n");
        out.push_str(&vars.join(",\n"));
        if !vars.is_empty() {
            out.push('\n');
        }
        out.push_str("    },\n");
        let joints: Vec<String> = self
            .joint_counts
            .iter()
            .map(|(k, v)| format!("      {}: {v}", json_str(k)))
            .collect();
        out.push_str("    \"joint\": {\n");
        out.push_str(&joints.join(",\n"));
        if !joints.is_empty() {
            out.push('\n');
        }
        out.push_str("    }\n");
        out.push_str("  }\n");
        out.push_str("}\n");
        out
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}
