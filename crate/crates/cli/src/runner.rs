//! Execute parsed circuits against the simulator core.

use std::collections::BTreeMap;

use majsim_core::fock::{build_space, pair_parity_op, quad_parity_op, FockSpace, StateVector};
use majsim_core::gates::{braid, gate_on, named_gate, phase_gate, BraidConvention, Sector};
use majsim_core::measure::{measure, MeasureOutcome, OutcomePolicy};

use crate::ast::{Circuit, ParityWord, PrintKind, Spanned, Stmt};
use crate::report::{Report, TraceEvent};

#[derive(Debug, Clone)]
pub struct RunError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: runtime error: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub shots: u64,
    /// Forced raw eigenvalues per measurement variable.
    pub forced: BTreeMap<String, i8>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 0,
            shots: 1,
            forced: BTreeMap::new(),
        }
    }
}

struct Exec<'a> {
    opts: &'a RunOptions,
    space: Option<FockSpace>,
    pairs: BTreeMap<String, (usize, usize)>,
    state: Option<StateVector>,
    vars: Vec<(String, i8, &'static str)>,
    policy: OutcomePolicy,
    trace: Option<&'a mut Vec<TraceEvent>>,
    stmt_counter: usize,
}

impl<'a> Exec<'a> {
    fn fail(&self, s: &Spanned, message: impl Into<String>) -> RunError {
        RunError {
            line: s.line,
            col: s.col,
            message: message.into(),
        }
    }

    fn core_err(&self, s: &Spanned, e: majsim_core::Error) -> RunError {
        self.fail(s, e.to_string())
    }

    fn space(&self, s: &Spanned) -> Result<&FockSpace, RunError> {
        self.space
            .as_ref()
            .ok_or_else(|| self.fail(s, "no space declared"))
    }

    fn state(&self, s: &Spanned) -> Result<&StateVector, RunError> {
        self.state
            .as_ref()
            .ok_or_else(|| self.fail(s, "no state prepared"))
    }

    fn record_stmt(&mut self, s: &Spanned) {
        self.stmt_counter += 1;
        let index = self.stmt_counter;
        if let Some(trace) = self.trace.as_deref_mut() {
            trace.push(TraceEvent::Stmt {
                index,
                text: summarize(&s.stmt),
            });
        }
    }

    fn run_measure(
        &mut self,
        s: &Spanned,
        obs: majsim_core::fock::Operator,
        desc: &str,
        var: &str,
        even_eigenvalue: i8,
    ) -> Result<(), RunError> {
        let state = self.state(s)?.clone();
        let mut forced_policy;
        let policy: &mut OutcomePolicy = if let Some(forced) = self.opts.forced.get(var) {
            forced_policy = OutcomePolicy::forced(&[*forced]);
            &mut forced_policy
        } else {
            &mut self.policy
        };
        let outcome = measure(&state, &obs, policy, var, desc).map_err(|e| self.core_err(s, e))?;
        match outcome {
            MeasureOutcome::Collapsed(rec, post) => {
                let parity = if rec.outcome == even_eigenvalue {
                    "even"
                } else {
                    "odd"
                };
                self.vars.push((var.to_string(), rec.outcome, parity));
                if let Some(trace) = self.trace.as_deref_mut() {
                    trace.push(TraceEvent::Measure {
                        var: var.to_string(),
                        outcome: rec.outcome,
                        parity: parity.to_string(),
                        probability: rec.probability,
                    });
                }
                self.state = Some(post);
                Ok(())
            }
            MeasureOutcome::Branches(_) => unreachable!("runner never enumerates"),
        }
    }

    fn exec(&mut self, stmts: &[Spanned]) -> Result<(), RunError> {
        for s in stmts {
            self.record_stmt(s);
            match &s.stmt {
                Stmt::Space { n_majoranas } => {
                    let space = build_space(n_majoranas / 2).map_err(|e| self.core_err(s, e))?;
                    self.space = Some(space);
                }
                Stmt::Pair { name, a, b } => {
                    self.pairs.insert(name.clone(), (*a, *b));
                }
                Stmt::Prepare { ket } => {
                    let space = self.space(s)?.clone();
                    let state = StateVector::basis(&space, ket).map_err(|e| self.core_err(s, e))?;
                    self.state = Some(state);
                }
                Stmt::Braid { i, j } => {
                    let space = self.space(s)?.clone();
                    let op = braid(&space, *i, *j, BraidConvention::Mem)
                        .map_err(|e| self.core_err(s, e))?;
                    let state = self.state(s)?;
                    self.state = Some(op.apply(state));
                }
                Stmt::Phase { pair, angle } => {
                    let space = self.space(s)?.clone();
                    let &(a, b) = self
                        .pairs
                        .get(pair)
                        .ok_or_else(|| self.fail(s, format!("undeclared pair `{pair}`")))?;
                    let op = phase_gate(&space, (a, b), angle.value())
                        .map_err(|e| self.core_err(s, e))?;
                    let state = self.state(s)?;
                    self.state = Some(op.apply(state));
                }
                Stmt::Gate { name, pairs } => {
                    let space = self.space(s)?.clone();
                    let mut resolved = Vec::with_capacity(pairs.len());
                    for p in pairs {
                        let &pq = self
                            .pairs
                            .get(p)
                            .ok_or_else(|| self.fail(s, format!("undeclared pair `{p}`")))?;
                        resolved.push(pq);
                    }
                    let op = gate_on(&space, name, &resolved, BraidConvention::Mem)
                        .map_err(|e| self.core_err(s, e))?;
                    let state = self.state(s)?;
                    self.state = Some(op.apply(state));
                }
                Stmt::Measure2 { a, b, var } => {
                    let space = self.space(s)?.clone();
                    let obs = pair_parity_op(&space, *a, *b).map_err(|e| self.core_err(s, e))?;
                    // Pi = -i g_a g_b: +1 marks the empty (even) pair.
                    self.run_measure(s, obs, &format!("-i g{a} g{b}"), var, 1)?;
                }
                Stmt::Measure4 { a, b, c, d, var } => {
                    let space = self.space(s)?.clone();
                    let obs =
                        quad_parity_op(&space, *a, *b, *c, *d).map_err(|e| self.core_err(s, e))?;
                    // Eigenvalue -1 marks even joint parity.
                    self.run_measure(s, obs, &format!("g{a} g{b} g{c} g{d}"), var, -1)?;
                }
                Stmt::If { var, parity, body } => {
                    let bound = self
                        .vars
                        .iter()
                        .rev()
                        .find(|(name, ..)| name == var)
                        .ok_or_else(|| self.fail(s, format!("`{var}` is unbound")))?;
                    let word = match parity {
                        ParityWord::Even => "even",
                        ParityWord::Odd => "odd",
                    };
                    if bound.2 == word {
                        self.exec(body)?;
                    }
                }
                Stmt::Print(PrintKind::State) => {
                    let state = self.state(s)?.clone();
                    if let Some(trace) = self.trace.as_deref_mut() {
                        let mut amps = Vec::new();
                        for (idx, amp) in state.amps.iter().enumerate() {
                            if amp.norm() > 1e-12 {
                                amps.push((state.space.label_of(idx), *amp));
                            }
                        }
                        trace.push(TraceEvent::State {
                            norm: state.norm(),
                            amps,
                        });
                    }
                }
                Stmt::Print(PrintKind::Matrix(name)) => {
                    if self.trace.is_some() {
                        let sector = if name == "CNOT-" {
                            Sector::Odd
                        } else {
                            Sector::Even
                        };
                        let gate = named_gate(name, sector).map_err(|e| self.core_err(s, e))?;
                        let d = gate.gate.dim();
                        let rows = (0..d)
                            .map(|i| (0..d).map(|j| gate.gate.matrix[(i, j)]).collect())
                            .collect();
                        if let Some(trace) = self.trace.as_deref_mut() {
                            trace.push(TraceEvent::Matrix {
                                name: name.clone(),
                                basis: gate.gate.basis.clone(),
                                rows,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Execute a circuit; shot 0 is traced, all shots feed the aggregates.
pub fn run(circuit: &Circuit, script: &str, opts: &RunOptions) -> Result<Report, RunError> {
    let mut report = Report {
        script: script.to_string(),
        seed: opts.seed,
        shots: opts.shots,
        ..Report::default()
    };
    for shot in 0..opts.shots.max(1) {
        let mut trace_buf = Vec::new();
        let mut exec = Exec {
            opts,
            space: None,
            pairs: BTreeMap::new(),
            state: None,
            vars: Vec::new(),
            policy: OutcomePolicy::sampled(opts.seed, shot),
            trace: if shot == 0 {
                Some(&mut trace_buf)
            } else {
                None
            },
            stmt_counter: 0,
        };
        exec.exec(&circuit.stmts)?;
        let vars = std::mem::take(&mut exec.vars);
        if shot == 0 {
            report.trace = trace_buf;
        }
        let mut joint = Vec::new();
        for (name, _, parity) in &vars {
            let entry = report.var_counts.entry(name.clone()).or_insert((0, 0));
            if *parity == "even" {
                entry.0 += 1;
            } else {
                entry.1 += 1;
            }
            joint.push(format!("{name}={parity}"));
        }
        if !joint.is_empty() {
            *report.joint_counts.entry(joint.join(",")).or_insert(0) += 1;
        }
    }
    Ok(report)
}

fn summarize(stmt: &Stmt) -> String {
    match stmt {
        Stmt::Space { n_majoranas } => format!("space {n_majoranas}"),
        Stmt::Pair { name, a, b } => format!("pair {name} {a} {b}"),
        Stmt::Prepare { ket } => format!("prepare |{ket}>"),
        Stmt::Braid { i, j } => format!("braid {i} {j}"),
        Stmt::Phase { pair, angle } => format!("phase {pair} {angle}"),
        Stmt::Gate { name, pairs } => format!("gate {name} {}", pairs.join(" ")),
        Stmt::Measure2 { a, b, var } => format!("measure2 {a} {b} -> {var}"),
        Stmt::Measure4 { a, b, c, d, var } => format!("measure4 {a} {b} {c} {d} -> {var}"),
        Stmt::If { var, parity, body } => {
            format!(
                "if {var} == {} {{ {} statement(s) }}",
                parity.tag(),
                body.len()
            )
        }
        Stmt::Print(PrintKind::State) => "print state".into(),
        Stmt::Print(PrintKind::Matrix(name)) => format!("print matrix {name}"),
    }
}
