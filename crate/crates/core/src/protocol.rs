//! The sparse-dense CNOT pipeline in three modes — input correction, gate
//! correction, and a probabilistic discard baseline — plus the generalized
//! corrected-gate skeleton and a Monte-Carlo chain harness.
//!
//! One run on four modes executes, in order: the entangling braids (gamma_6
//! exchanged with gamma_5 then gamma_4), the pair-parity measurement M1 of
//! Pi(4,5), the branch correction, the dense CNOT sequence on the relabeled
//! register A=(1,2), B=(3,6), D=(7,8), the restoring braids, the quad-parity
//! measurement M2 of gamma_5 gamma_6 gamma_7 gamma_8, and the output
//! correction on the undesired M2 branch.
//!
//! On the undesired M1 branch the input correction is the occupation flip of
//! modes B and C, realized by braiding gamma_6 and gamma_4 twice. (The
//! narrative correction — a mode swap of C,D followed by the C,D flip —
//! leaves the dense register outside the even sector and does not yield a
//! deterministic CNOT; it remains available through
//! [`general_corrected_gate`] where its basis-mapping check reports the
//! mismatch.)

use num_complex::Complex64;

use crate::encoding::{
    decode_logical, encode_logical, even_collapse_basis, odd_collapse_basis, sp_pairing,
    LogicalTwoQubit,
};
use crate::error::{Error, Result};
use crate::fock::{
    build_space, pairing_basis, quad_parity_op, total_parity_op, FockSpace, Operator, StateVector,
};
use crate::gates::{
    braid, cnot_minus_on, cnot_plus_on, cnot_target, embed_sector_gate, swap_on, y2_matrix,
    BraidConvention,
};
use crate::matrix::{vec_dot, vec_norm, CMat, ONE, SEQ_TOL};
use crate::measure::{measure, MeasureOutcome, MeasurementRecord, OutcomePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Process1,
    Process2,
    Discard,
    General,
}

impl RunMode {
    pub fn tag(self) -> &'static str {
        match self {
            RunMode::Process1 => "process1",
            RunMode::Process2 => "process2",
            RunMode::Discard => "discard",
            RunMode::General => "general",
        }
    }
}

/// Execution trace of one pipeline run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub mode: RunMode,
    pub input_logical: Option<LogicalTwoQubit>,
    pub records: Vec<MeasurementRecord>,
    pub corrections: Vec<String>,
    pub final_state: StateVector,
    pub logical_out: Option<LogicalTwoQubit>,
    /// Phase of the decoded output against CNOT times the input, recorded
    /// when the run reproduces the CNOT action on its branch.
    pub branch_phase: Option<Complex64>,
    pub success: bool,
}

/// Prebuilt operators for the four-mode pipeline.
pub struct Pipeline {
    pub space: FockSpace,
    entangle: Operator,
    restore: Operator,
    m1_obs: Operator,
    m2_obs: Operator,
    x_bc_rel: Operator,
    x_bc_can: Operator,
    cnot_plus: Operator,
    cnot_minus: Operator,
}

impl Pipeline {
    pub fn new(conv: BraidConvention) -> Result<Self> {
        let space = build_space(4)?;
        let entangle = crate::encoding::entangling_braids(&space, conv)?;
        let restore = crate::encoding::restoring_braids(&space, conv)?;
        let m1_obs = crate::fock::pair_parity_op(&space, 4, 5)?;
        let m2_obs = quad_parity_op(&space, 5, 6, 7, 8)?;
        let b64 = braid(&space, 6, 4, conv)?;
        let x_bc_rel = b64.mul(&b64);
        let b45 = braid(&space, 4, 5, conv)?;
        let x_bc_can = b45.mul(&b45);
        let cnot_plus = cnot_plus_on(&space, [(1, 2), (3, 6), (7, 8)], conv)?;
        let cnot_minus = cnot_minus_on(&space, [(1, 2), (3, 6), (7, 8)], conv)?;
        Ok(Pipeline {
            space,
            entangle,
            restore,
            m1_obs,
            m2_obs,
            x_bc_rel,
            x_bc_can,
            cnot_plus,
            cnot_minus,
        })
    }

    fn check_even_sector(&self, state: &StateVector) -> Result<()> {
        let parity = total_parity_op(&self.space);
        let image = parity.apply(state);
        let dev = (state.dot(&image) - ONE).norm();
        if dev > SEQ_TOL {
            return Err(Error::NotEvenSector(dev));
        }
        Ok(())
    }

    fn collapse(
        state: &StateVector,
        obs: &Operator,
        policy: &mut OutcomePolicy,
        label: &str,
        desc: &str,
    ) -> Result<(MeasurementRecord, StateVector)> {
        match measure(state, obs, policy, label, desc)? {
            MeasureOutcome::Collapsed(rec, post) => Ok((rec, post)),
            MeasureOutcome::Branches(_) => Err(Error::Invalid(
                "branch enumeration is driven by enumerate_cnot_branches".into(),
            )),
        }
    }

    pub fn run(
        &self,
        mode: RunMode,
        state: &StateVector,
        policy: &mut OutcomePolicy,
    ) -> Result<RunReport> {
        self.check_even_sector(state)?;
        let input_logical = decode_logical(state).ok();
        let mut corrections = Vec::new();
        let mut records = Vec::new();
        let mut success = true;

        let mut psi = self.entangle.apply(state);

        let (rec1, post1) = Self::collapse(&psi, &self.m1_obs, policy, "M1", "-i g4 g5")?;
        let m1 = rec1.outcome;
        records.push(rec1);
        psi = post1;

        let mut gate = &self.cnot_plus;
        if m1 < 0 {
            match mode {
                RunMode::Process1 => {
                    psi = self.x_bc_rel.apply(&psi);
                    corrections.push(
                        "input corrected: B64^2 flips occupations of modes B=(3,6), C=(4,5)"
                            .to_string(),
                    );
                }
                RunMode::Process2 => {
                    gate = &self.cnot_minus;
                    corrections.push(
                        "gate corrected: dense sequence switched to CNOT- (inverse phase \
                         elements realized as tripled same-sign elements)"
                            .to_string(),
                    );
                }
                RunMode::Discard => success = false,
                RunMode::General => unreachable!("general runs use run_general"),
            }
        }

        psi = gate.apply(&psi);
        psi = self.restore.apply(&psi);

        let (rec2, post2) = Self::collapse(&psi, &self.m2_obs, policy, "M2", "g5 g6 g7 g8")?;
        let m2 = rec2.outcome;
        records.push(rec2);
        psi = post2;

        if m2 > 0 {
            match mode {
                RunMode::Process1 | RunMode::Process2 => {
                    psi = self.x_bc_can.apply(&psi);
                    corrections.push(
                        "output corrected: B45^2 flips occupations of canonical modes \
                         B=(3,4), C=(5,6)"
                            .to_string(),
                    );
                }
                RunMode::Discard => success = false,
                RunMode::General => unreachable!(),
            }
        }

        let logical_out = decode_logical(&psi).ok();
        let branch_phase = match (&input_logical, &logical_out) {
            (Some(inp), Some(out)) => {
                let expected = inp.apply_matrix(&cnot_target());
                if (expected.fidelity(out) - 1.0).abs() < 1e-6 {
                    Some(out.relative_phase(&expected))
                } else {
                    None
                }
            }
            _ => None,
        };

        Ok(RunReport {
            mode,
            input_logical,
            records,
            corrections,
            final_state: psi,
            logical_out,
            branch_phase,
            success,
        })
    }

    /// Generalized corrected-gate skeleton with caller-supplied corrections: L2 rectifies the
    /// undesired first measurement, P the undesired second one.
    pub fn run_general(
        &self,
        gate: &Operator,
        l2: &Operator,
        p: &Operator,
        state: &StateVector,
        policy: &mut OutcomePolicy,
    ) -> Result<RunReport> {
        self.check_l2(l2)?;
        self.check_parity_flip(p)?;
        self.check_even_sector(state)?;
        let input_logical = decode_logical(state).ok();
        let mut corrections = Vec::new();
        let mut records = Vec::new();

        let mut psi = self.entangle.apply(state);
        let (rec1, post1) = Self::collapse(&psi, &self.m1_obs, policy, "M1", "-i g4 g5")?;
        let m1 = rec1.outcome;
        records.push(rec1);
        psi = post1;

        if m1 < 0 {
            psi = l2.apply(&psi);
            corrections.push("L2 applied on the undesired first-measurement branch".to_string());
        }

        psi = gate.apply(&psi);
        psi = self.restore.apply(&psi);

        let (rec2, post2) = Self::collapse(&psi, &self.m2_obs, policy, "M2", "g5 g6 g7 g8")?;
        let m2 = rec2.outcome;
        records.push(rec2);
        psi = post2;

        if m2 > 0 {
            psi = p.apply(&psi);
            corrections.push("P applied on the undesired second-measurement branch".to_string());
        }

        let logical_out = decode_logical(&psi).ok();
        Ok(RunReport {
            mode: RunMode::General,
            input_logical,
            records,
            corrections,
            final_state: psi,
            logical_out,
            branch_phase: None,
            success: true,
        })
    }

    /// L2 must carry the odd-collapse basis into one of the two collapse
    /// spans: the even one (a genuine parity rectification) or the odd one
    /// (no rectification, valid for parity-independent gates). A map that
    /// scatters across both fails.
    fn check_l2(&self, l2: &Operator) -> Result<()> {
        let even_c = even_collapse_basis(&self.space)?;
        let odd_c = odd_collapse_basis(&self.space)?;
        let mut even_leak = 0.0f64;
        let mut odd_leak = 0.0f64;
        for v in &odd_c.vectors {
            let image = l2.mat.matvec(&v.amps);
            let mut res_even = image.clone();
            for b in &even_c.vectors {
                let amp = vec_dot(&b.amps, &image);
                for (r, x) in res_even.iter_mut().zip(b.amps.iter()) {
                    *r -= amp * x;
                }
            }
            even_leak = even_leak.max(vec_norm(&res_even));
            let mut res_odd = image;
            for b in &odd_c.vectors {
                let amp = vec_dot(&b.amps, &res_odd);
                let amp2 = amp;
                for (r, x) in res_odd.iter_mut().zip(b.amps.iter()) {
                    *r -= amp2 * x;
                }
            }
            odd_leak = odd_leak.max(vec_norm(&res_odd));
        }
        if even_leak <= SEQ_TOL || odd_leak <= SEQ_TOL {
            Ok(())
        } else {
            Err(Error::BadCorrection(even_leak.min(odd_leak)))
        }
    }

    fn check_parity_flip(&self, p: &Operator) -> Result<()> {
        let anti = p
            .mat
            .mul(&self.m2_obs.mat)
            .add(&self.m2_obs.mat.mul(&p.mat));
        let dev = anti.max_abs();
        if dev > SEQ_TOL {
            return Err(Error::Invalid(format!(
                "P does not flip the measured parity (anticommutator norm {dev:.3e})"
            )));
        }
        Ok(())
    }
}

fn run_once(mode: RunMode, state: &StateVector, policy: &OutcomePolicy) -> Result<RunReport> {
    let pipeline = Pipeline::new(BraidConvention::Mem)?;
    let mut policy = policy.clone();
    pipeline.run(mode, state, &mut policy)
}

/// Process I: correct the input qubits on the undesired M1 branch.
pub fn cnot_process1(state: &StateVector, policy: &OutcomePolicy) -> Result<RunReport> {
    run_once(RunMode::Process1, state, policy)
}

/// Process II: correct the gate sequence on the undesired M1 branch.
pub fn cnot_process2(state: &StateVector, policy: &OutcomePolicy) -> Result<RunReport> {
    run_once(RunMode::Process2, state, policy)
}

/// Probabilistic baseline: no corrections, undesired outcomes abandon the run.
pub fn cnot_discard(state: &StateVector, policy: &OutcomePolicy) -> Result<RunReport> {
    run_once(RunMode::Discard, state, policy)
}

/// All four forced (M1, M2) branch combinations of one run.
pub fn enumerate_cnot_branches(mode: RunMode, state: &StateVector) -> Result<Vec<RunReport>> {
    let pipeline = Pipeline::new(BraidConvention::Mem)?;
    let mut out = Vec::with_capacity(4);
    for m1 in [1i8, -1] {
        for m2 in [-1i8, 1] {
            let mut policy = OutcomePolicy::forced(&[m1, m2]);
            out.push(pipeline.run(mode, state, &mut policy)?);
        }
    }
    Ok(out)
}

/// Logical action of a corrected pipeline on a fixed forced branch, column by
/// column over the four logical basis inputs.
#[derive(Debug, Clone)]
pub struct LogicalMatrixReport {
    pub mode: RunMode,
    pub m1: i8,
    pub m2: i8,
    pub matrix: CMat,
    /// Per-column overlap magnitude against the CNOT column (1 = exact).
    pub column_fidelities: [f64; 4],
    /// Per-column phase against the CNOT column.
    pub column_phases: [Complex64; 4],
    pub unitarity_defect: f64,
}

pub fn extract_logical_matrix(mode: RunMode, m1: i8, m2: i8) -> Result<LogicalMatrixReport> {
    let pipeline = Pipeline::new(BraidConvention::Mem)?;
    let space = pipeline.space.clone();
    let target = cnot_target();
    let mut matrix = CMat::zeros(4);
    let mut column_fidelities = [0.0f64; 4];
    let mut column_phases = [ONE; 4];
    for k in 0..4 {
        let input = encode_logical(&space, &LogicalTwoQubit::basis(k))?;
        let mut policy = OutcomePolicy::forced(&[m1, m2]);
        let report = pipeline.run(mode, &input, &mut policy)?;
        let out = report
            .logical_out
            .ok_or_else(|| Error::Invalid("branch output left the computational span".into()))?;
        for j in 0..4 {
            matrix[(j, k)] = out.amps[j];
        }
        let expected = LogicalTwoQubit::basis(k).apply_matrix(&target);
        column_fidelities[k] = expected.fidelity(&out);
        column_phases[k] = out.relative_phase(&expected);
    }
    let unitarity_defect = matrix.unitarity_defect();
    Ok(LogicalMatrixReport {
        mode,
        m1,
        m2,
        matrix,
        column_fidelities,
        column_phases,
        unitarity_defect,
    })
}

/// Ready-made L2 corrections for [`general_corrected_gate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionScheme {
    /// Occupation flip of modes B and C (the working Process I correction).
    XbXc,
    /// C,D occupation flip followed by the Y (+) Y^T dense-register gate.
    XcXdThenY2,
    /// The narrative mode swap of C,D followed by the C,D flip.
    SwapThenXcXd,
    /// No first-branch correction (parity-independent gates).
    Identity,
}

pub fn correction_operator(
    space: &FockSpace,
    scheme: CorrectionScheme,
    conv: BraidConvention,
) -> Result<Operator> {
    match scheme {
        CorrectionScheme::XbXc => {
            let b = braid(space, 6, 4, conv)?;
            Ok(b.mul(&b))
        }
        CorrectionScheme::XcXdThenY2 => {
            let b = braid(space, 5, 7, conv)?;
            let x_cd = b.mul(&b);
            let rel = pairing_basis(space, &sp_pairing())?;
            let labels = ["0000", "0101", "1100", "1001"];
            let basis: Vec<(String, StateVector)> = labels
                .iter()
                .map(|l| {
                    let (lab, st) = rel
                        .iter()
                        .find(|(lab, _)| lab == l)
                        .expect("label present")
                        .clone();
                    (lab, st)
                })
                .collect();
            let y2 = embed_sector_gate(space, &y2_matrix(), &basis);
            Ok(y2.mul(&x_cd))
        }
        CorrectionScheme::SwapThenXcXd => {
            let b = braid(space, 5, 7, conv)?;
            let x_cd = b.mul(&b);
            let swap = swap_on(space, (4, 5), (7, 8), conv)?;
            Ok(x_cd.mul(&swap))
        }
        CorrectionScheme::Identity => Ok(Operator::identity(space)),
    }
}

/// Run the generalized corrected pipeline with a caller-supplied dense gate
/// and corrections.
pub fn general_corrected_gate(
    gate: &Operator,
    l2: &Operator,
    p: &Operator,
    state: &StateVector,
    policy: &OutcomePolicy,
) -> Result<RunReport> {
    let pipeline = Pipeline::new(BraidConvention::Mem)?;
    let mut policy = policy.clone();
    pipeline.run_general(gate, l2, p, state, &mut policy)
}

/// Monte-Carlo statistics for a chain of sequential CNOT gates.
#[derive(Debug, Clone)]
pub struct ChainStats {
    pub n_gates: usize,
    pub shots: u64,
    pub successes: u64,
    pub rate: f64,
    pub expected_rate: f64,
    pub binomial_std_err: f64,
    /// Total correction operations applied across all shots.
    pub corrections_applied: u64,
    /// Largest number of corrections any single gate needed (constant bound).
    pub max_corrections_per_gate: usize,
    /// Fermion modes allocated per shot; constant, no ancillary modes.
    pub modes_allocated: usize,
}

/// Run `n_gates` sequential CNOTs on the fixed input |10> for every shot.
///
/// Discard mode succeeds only when all 2N binary measurements land on the
/// desired branch, so the expected rate is 2^(-2N); corrected modes always
/// succeed.
pub fn chain_stats(n_gates: usize, shots: u64, mode: RunMode, seed: u64) -> Result<ChainStats> {
    if n_gates == 0 || shots == 0 {
        return Err(Error::Invalid(
            "chain needs n_gates >= 1 and shots >= 1".into(),
        ));
    }
    let pipeline = Pipeline::new(BraidConvention::Mem)?;
    let input = encode_logical(&pipeline.space, &LogicalTwoQubit::basis(2))?;
    let mut successes = 0u64;
    let mut corrections_applied = 0u64;
    let mut max_corrections_per_gate = 0usize;
    for shot in 0..shots {
        let mut policy = OutcomePolicy::sampled(seed, shot);
        let mut state = input.clone();
        let mut ok = true;
        for _ in 0..n_gates {
            let report = pipeline.run(mode, &state, &mut policy)?;
            corrections_applied += report.corrections.len() as u64;
            max_corrections_per_gate = max_corrections_per_gate.max(report.corrections.len());
            if !report.success {
                ok = false;
                break;
            }
            state = report.final_state;
        }
        if ok {
            successes += 1;
        }
    }
    let expected_rate = match mode {
        RunMode::Discard => 0.25f64.powi(n_gates as i32),
        _ => 1.0,
    };
    let rate = successes as f64 / shots as f64;
    let binomial_std_err = (expected_rate * (1.0 - expected_rate) / shots as f64).sqrt();
    Ok(ChainStats {
        n_gates,
        shots,
        successes,
        rate,
        expected_rate,
        binomial_std_err,
        corrections_applied,
        max_corrections_per_gate,
        modes_allocated: pipeline.space.n_modes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, ALG_TOL};

    fn logical_input(k: usize) -> StateVector {
        let space = build_space(4).unwrap();
        encode_logical(&space, &LogicalTwoQubit::basis(k)).unwrap()
    }

    #[test]
    fn process1_desired_branch_maps_10_to_11() {
        let input = logical_input(2);
        let report = cnot_process1(&input, &OutcomePolicy::forced(&[1, -1])).unwrap();
        assert!(report.success);
        assert!(report.corrections.is_empty());
        let out = report.logical_out.unwrap();
        assert_eq!(out.closest_basis_label(), "11");
        assert!((out.fidelity(&LogicalTwoQubit::basis(3)) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn process1_odd_branch_matches_full_matrix_oracle() {
        // Independent oracle: assemble the forced (-1, -1) branch as one
        // 16x16 matrix chain (projectors included) and apply it in a single
        // matrix-vector product.
        let pipeline = Pipeline::new(BraidConvention::Mem).unwrap();
        let input = logical_input(2);

        let id = CMat::identity(16);
        let p1_minus = id.sub(&pipeline.m1_obs.mat).scale(c(0.5, 0.0));
        let p2_minus = id.sub(&pipeline.m2_obs.mat).scale(c(0.5, 0.0));
        let chain = p2_minus
            .mul(&pipeline.restore.mat)
            .mul(&pipeline.cnot_plus.mat)
            .mul(&pipeline.x_bc_rel.mat)
            .mul(&p1_minus)
            .mul(&pipeline.entangle.mat);
        let raw = chain.matvec(&input.amps);
        let n = vec_norm(&raw);
        let oracle: Vec<_> = raw.into_iter().map(|a| a / n).collect();

        let report = cnot_process1(&input, &OutcomePolicy::forced(&[-1, -1])).unwrap();
        let overlap = vec_dot(&oracle, &report.final_state.amps).norm();
        assert!((overlap - 1.0).abs() < 1e-10);

        let out = report.logical_out.unwrap();
        assert!((out.fidelity(&LogicalTwoQubit::basis(3)) - 1.0).abs() < 1e-9);
        assert!(report.branch_phase.is_some());
    }

    #[test]
    fn corrected_modes_reproduce_cnot_on_every_branch() {
        for mode in [RunMode::Process1, RunMode::Process2] {
            for m1 in [1i8, -1] {
                for m2 in [-1i8, 1] {
                    let rep = extract_logical_matrix(mode, m1, m2).unwrap();
                    for k in 0..4 {
                        assert!(
                            (rep.column_fidelities[k] - 1.0).abs() < 1e-9,
                            "{mode:?} branch ({m1},{m2}) column {k}: fidelity {}",
                            rep.column_fidelities[k]
                        );
                    }
                    assert!(rep.unitarity_defect < 1e-9);
                }
            }
        }
    }

    #[test]
    fn processes_agree_on_all_branches_up_to_phase() {
        for m1 in [1i8, -1] {
            for m2 in [-1i8, 1] {
                for k in 0..4 {
                    let input = logical_input(k);
                    let r1 = cnot_process1(&input, &OutcomePolicy::forced(&[m1, m2])).unwrap();
                    let r2 = cnot_process2(&input, &OutcomePolicy::forced(&[m1, m2])).unwrap();
                    let o1 = r1.logical_out.unwrap();
                    let o2 = r2.logical_out.unwrap();
                    assert!(
                        (o1.fidelity(&o2) - 1.0).abs() < 1e-9,
                        "branch ({m1},{m2}) input {k} disagrees"
                    );
                }
            }
        }
    }

    #[test]
    fn final_states_restore_both_quad_parities() {
        let space = build_space(4).unwrap();
        let q1 = quad_parity_op(&space, 1, 2, 3, 4).unwrap();
        let q2 = quad_parity_op(&space, 5, 6, 7, 8).unwrap();
        for mode in [RunMode::Process1, RunMode::Process2] {
            for report in enumerate_cnot_branches(mode, &logical_input(1)).unwrap() {
                assert!(report.success);
                let s = &report.final_state;
                let e1 = s.dot(&q1.apply(s));
                let e2 = s.dot(&q2.apply(s));
                assert!((e1 + ONE).norm() < 1e-9, "quad(1..4) not restored");
                assert!((e2 + ONE).norm() < 1e-9, "quad(5..8) not restored");
            }
        }
    }

    #[test]
    fn discard_mode_branches() {
        let input = logical_input(2);
        // All-desired branch coincides with the corrected desired branch.
        let d = cnot_discard(&input, &OutcomePolicy::forced(&[1, -1])).unwrap();
        assert!(d.success);
        let p = cnot_process1(&input, &OutcomePolicy::forced(&[1, -1])).unwrap();
        let overlap = vec_dot(&d.final_state.amps, &p.final_state.amps).norm();
        assert!((overlap - 1.0).abs() < 1e-10);

        let f = cnot_discard(&input, &OutcomePolicy::forced(&[-1, -1])).unwrap();
        assert!(!f.success);
        assert!(f.corrections.is_empty());
    }

    #[test]
    fn branch_probabilities_are_half_for_basis_inputs() {
        let input = logical_input(0);
        let reports = enumerate_cnot_branches(RunMode::Process1, &input).unwrap();
        assert_eq!(reports.len(), 4);
        for r in reports {
            for rec in &r.records {
                assert!((rec.probability - 0.5).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn superposition_inputs_collapse_with_born_weights() {
        // (|00> + |10>)/sqrt(2) through the sampled pipeline: outcomes remain
        // fair coins and the corrected output decodes inside the span.
        let space = build_space(4).unwrap();
        let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let input = encode_logical(
            &space,
            &LogicalTwoQubit::new([s, c(0.0, 0.0), s, c(0.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let report = cnot_process1(&input, &OutcomePolicy::sampled(5, 0)).unwrap();
        assert!(report.success);
        assert!(report.logical_out.is_some());
    }

    #[test]
    fn general_identity_gate_with_identity_correction_is_logical_identity() {
        let space = build_space(4).unwrap();
        let id = Operator::identity(&space);
        let b45 = braid(&space, 4, 5, BraidConvention::Mem).unwrap();
        let p = b45.mul(&b45);
        for k in 0..4 {
            let input = logical_input(k);
            for m1 in [1i8, -1] {
                for m2 in [-1i8, 1] {
                    let report = general_corrected_gate(
                        &id,
                        &id,
                        &p,
                        &input,
                        &OutcomePolicy::forced(&[m1, m2]),
                    )
                    .unwrap();
                    let out = report.logical_out.unwrap();
                    assert!(
                        (out.fidelity(&LogicalTwoQubit::basis(k)) - 1.0).abs() < 1e-9,
                        "identity pipeline moved input {k} on branch ({m1},{m2})"
                    );
                }
            }
        }
    }

    #[test]
    fn general_y2_variant_agrees_with_process1_per_branch() {
        let space = build_space(4).unwrap();
        let pipeline = Pipeline::new(BraidConvention::Mem).unwrap();
        let l2 = correction_operator(&space, CorrectionScheme::XcXdThenY2, BraidConvention::Mem)
            .unwrap();
        let b45 = braid(&space, 4, 5, BraidConvention::Mem).unwrap();
        let p = b45.mul(&b45);
        for k in 0..4 {
            let input = logical_input(k);
            for m1 in [1i8, -1] {
                for m2 in [-1i8, 1] {
                    let general = pipeline
                        .run_general(
                            &pipeline.cnot_plus,
                            &l2,
                            &p,
                            &input,
                            &mut OutcomePolicy::forced(&[m1, m2]),
                        )
                        .unwrap();
                    let reference =
                        cnot_process1(&input, &OutcomePolicy::forced(&[m1, m2])).unwrap();
                    let g = general.logical_out.expect("in span");
                    let r = reference.logical_out.unwrap();
                    assert!(
                        (g.fidelity(&r) - 1.0).abs() < 1e-9,
                        "Y2 variant differs on input {k} branch ({m1},{m2})"
                    );
                }
            }
        }
    }

    #[test]
    fn general_narrative_swap_variant_is_detected_as_non_rectifying() {
        // The reference swap matrix followed by the C,D flip scatters the odd
        // collapse across both spans (the doubly occupied kets land even,
        // the singly occupied ones stay odd), so the basis-mapping check
        // rejects it.
        let space = build_space(4).unwrap();
        let pipeline = Pipeline::new(BraidConvention::Mem).unwrap();
        let l2 = correction_operator(&space, CorrectionScheme::SwapThenXcXd, BraidConvention::Mem)
            .unwrap();
        let b45 = braid(&space, 4, 5, BraidConvention::Mem).unwrap();
        let p = b45.mul(&b45);
        let input = logical_input(0);
        let err = pipeline.run_general(
            &pipeline.cnot_plus,
            &l2,
            &p,
            &input,
            &mut OutcomePolicy::forced(&[-1, -1]),
        );
        assert!(matches!(err, Err(Error::BadCorrection(_))));

        // The literal braid word gives the fermionic swap instead; together
        // with the flip it also splits the odd collapse (singly occupied
        // C,D kets stay odd, doubly occupied ones land even), so it is
        // rejected the same way.
        let fermionic_swap = crate::gates::compose(&[
            braid(&space, 7, 5, BraidConvention::Mem).unwrap(),
            braid(&space, 5, 4, BraidConvention::Mem).unwrap(),
            braid(&space, 8, 7, BraidConvention::Mem).unwrap(),
            braid(&space, 7, 5, BraidConvention::Mem).unwrap(),
        ]);
        let b57 = braid(&space, 5, 7, BraidConvention::Mem).unwrap();
        let l2_literal = b57.mul(&b57).mul(&fermionic_swap);
        let err2 = pipeline.run_general(
            &pipeline.cnot_plus,
            &l2_literal,
            &p,
            &input,
            &mut OutcomePolicy::forced(&[-1, -1]),
        );
        assert!(matches!(err2, Err(Error::BadCorrection(_))));
    }

    #[test]
    fn bad_l2_is_rejected() {
        // A Hadamard-like rotation on mode C scatters the odd collapse across
        // both spans.
        let space = build_space(4).unwrap();
        let pipeline = Pipeline::new(BraidConvention::Mem).unwrap();
        let bad = braid(&space, 4, 7, BraidConvention::Mem).unwrap();
        let b45 = braid(&space, 4, 5, BraidConvention::Mem).unwrap();
        let p = b45.mul(&b45);
        let input = logical_input(0);
        let err = pipeline.run_general(
            &pipeline.cnot_plus,
            &bad,
            &p,
            &input,
            &mut OutcomePolicy::forced(&[-1, -1]),
        );
        assert!(matches!(err, Err(Error::BadCorrection(_))));
    }

    #[test]
    fn chain_statistics() {
        let corrected = chain_stats(1, 64, RunMode::Process1, 11).unwrap();
        assert_eq!(corrected.successes, 64);
        assert!((corrected.rate - 1.0).abs() < ALG_TOL);
        assert_eq!(corrected.modes_allocated, 4);
        assert!(corrected.max_corrections_per_gate <= 2);

        let discard = chain_stats(2, 4000, RunMode::Discard, 12).unwrap();
        assert!((discard.expected_rate - 0.0625).abs() < ALG_TOL);
        let dev = (discard.rate - discard.expected_rate).abs();
        assert!(
            dev <= 3.0 * discard.binomial_std_err + 1e-12,
            "discard rate {} vs expected {} (3 sigma {})",
            discard.rate,
            discard.expected_rate,
            3.0 * discard.binomial_std_err
        );
        assert_eq!(discard.corrections_applied, 0);
    }

    #[test]
    fn non_even_input_rejected() {
        let space = build_space(4).unwrap();
        let odd = StateVector::basis(&space, "1000").unwrap();
        assert!(matches!(
            cnot_process1(&odd, &OutcomePolicy::forced(&[1, -1])),
            Err(Error::NotEvenSector(_))
        ));
    }
}
