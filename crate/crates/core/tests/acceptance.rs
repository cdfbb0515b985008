//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p majsim-core --test acceptance` (add
//! `-- --nocapture` to see the lines for passing criteria too).

use num_complex::Complex64;

use majsim_core::encoding::{
    encode_logical, even_collapse_basis, odd_collapse_basis, sp_basis, sparse_even_basis,
    LogicalTwoQubit,
};
use majsim_core::fock::{build_space, pair_parity_op, quad_parity_op};
use majsim_core::gates::{
    b23_target, braid, braid_matrix_check, cnot_target, duality_check, hadamard_target, named_gate,
    one_qubit_basis, pauli_x_target, phase_gate, sector_matrix, swap_prime_target, swap_target,
    BraidConvention, Sector,
};
use majsim_core::matrix::{c, CMat, ALG_TOL, SEQ_TOL};
use majsim_core::measure::OutcomePolicy;
use majsim_core::protocol::{
    chain_stats, cnot_process1, correction_operator, general_corrected_gate, CorrectionScheme,
    Pipeline, RunMode,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn conclude(id: u8, what: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {id:02} — {what}: {detail}");
    assert!(pass, "criterion {id:02} failed: {detail}");
}

#[test]
fn criterion_01_majorana_algebra() {
    // Exhaustive anticommutators for n <= 4 at 1e-12. Each gamma column has
    // a single nonzero entry, which keeps the exhaustive sweep O(dim^2).
    let mut worst = 0.0f64;
    for n in 1..=4usize {
        let space = build_space(n).unwrap();
        let dim = space.dim();
        let gammas: Vec<CMat> = (1..=2 * n)
            .map(|i| majsim_core::fock::majorana(&space, i).unwrap().mat)
            .collect();
        // (row, value) of the single nonzero in each column.
        let col_map = |g: &CMat, k: usize| -> (usize, Complex64) {
            let mut hit = None;
            for r in 0..dim {
                if g[(r, k)].norm() > 0.0 {
                    assert!(hit.is_none(), "gamma column {k} has two nonzeros");
                    hit = Some((r, g[(r, k)]));
                }
            }
            hit.expect("gamma column empty")
        };
        for (i, gi) in gammas.iter().enumerate() {
            for (j, gj) in gammas.iter().enumerate() {
                for k in 0..dim {
                    let (rj, vj) = col_map(gj, k);
                    let (rij, vij) = col_map(gi, rj);
                    let (ri, vi) = col_map(gi, k);
                    let (rji, vji) = col_map(gj, ri);
                    // {gi,gj} e_k accumulated entrywise.
                    let mut acc = vec![Complex64::default(); dim];
                    acc[rij] += vij * vj;
                    acc[rji] += vji * vi;
                    let target = if i == j { c(2.0, 0.0) } else { c(0.0, 0.0) };
                    for (r, a) in acc.iter().enumerate() {
                        let want = if r == k { target } else { c(0.0, 0.0) };
                        worst = worst.max((a - want).norm());
                    }
                }
            }
        }
    }
    conclude(
        1,
        "anticommutators {g_i,g_j} = 2 delta_ij for n <= 4",
        worst <= ALG_TOL,
        format!("max deviation {worst:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_02_b23_sector_matrices() {
    let space = build_space(2).unwrap();
    let mut worst = 0.0f64;
    for conv in [BraidConvention::Mem, BraidConvention::Ivanov] {
        let b = braid(&space, 2, 3, conv).unwrap();
        for sector in [Sector::Even, Sector::Odd] {
            let m = sector_matrix(&b, &one_qubit_basis(&space, sector), SEQ_TOL)
                .unwrap()
                .matrix;
            worst = worst.max(m.max_abs_diff(&b23_target(conv)));
        }
    }
    conclude(
        2,
        "B23 sector matrices (mem and ivanov, both parities)",
        worst <= ALG_TOL,
        format!("max deviation {worst:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_03_hadamard_and_not_identities() {
    let space = build_space(2).unwrap();
    let th = -std::f64::consts::FRAC_PI_4;
    let r = phase_gate(&space, (1, 2), th).unwrap();
    let b = braid(&space, 2, 3, BraidConvention::Mem).unwrap();
    let cons = r.mul(&b).mul(&r);
    let mut worst = 0.0f64;
    for sector in [Sector::Even, Sector::Odd] {
        let basis = one_qubit_basis(&space, sector);
        let hm = sector_matrix(&cons, &basis, SEQ_TOL).unwrap().matrix;
        worst = worst.max(hm.max_abs_diff(&hadamard_target().scale(I)));

        let x = b.mul(&b).scale(-I);
        let xm = sector_matrix(&x, &basis, SEQ_TOL).unwrap().matrix;
        worst = worst.max(xm.max_abs_diff(&pauli_x_target()));

        // X = -H_c R^2 H_c with the braid-built Hadamard H_c = R B23 R.
        let rhs = cons.mul(&r).mul(&r).mul(&cons).scale(-ONE);
        let rm = sector_matrix(&rhs, &basis, SEQ_TOL).unwrap().matrix;
        worst = worst.max(rm.max_abs_diff(&pauli_x_target()));
    }
    conclude(
        3,
        "R B23 R = iH; X = -i B23^2 = -H_c R^2 H_c",
        worst <= ALG_TOL,
        format!("max deviation {worst:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_04_parity_witness() {
    let space = build_space(2).unwrap();
    let r34 = phase_gate(&space, (3, 4), -std::f64::consts::FRAC_PI_4).unwrap();
    let even = sector_matrix(&r34, &one_qubit_basis(&space, Sector::Even), SEQ_TOL)
        .unwrap()
        .matrix;
    let odd = sector_matrix(&r34, &one_qubit_basis(&space, Sector::Odd), SEQ_TOL)
        .unwrap()
        .matrix;
    let d_even = even.max_abs_diff(&CMat::diag(&[ONE, I]));
    let d_odd = odd.max_abs_diff(&CMat::diag(&[I, ONE]));
    let worst = d_even.max(d_odd);
    conclude(
        4,
        "mode-B phase gate is diag(1,i) even / diag(i,1) odd",
        worst <= ALG_TOL,
        format!("max deviation {worst:.2e} (tol 1e-12)"),
    );
}

#[test]
fn criterion_05_cnot_sequences() {
    let cnot_p = named_gate("CNOT+", Sector::Even).unwrap();
    let d_plus = cnot_p.gate.matrix.max_abs_diff(&cnot_target());
    let cnot_m = named_gate("CNOT-", Sector::Odd).unwrap();
    let d_minus = cnot_m.gate.matrix.max_abs_diff(&cnot_target());
    let worst = d_plus.max(d_minus);
    conclude(
        5,
        "seven-factor CNOT+ (even) and CNOT- (odd) match the reference CNOT up to phase",
        worst <= SEQ_TOL,
        format!(
            "max deviation {worst:.2e} after phases {:+.0}/{:+.0} (tol 1e-9)",
            cnot_p.construction_phase.re, cnot_m.construction_phase.re
        ),
    );
}

#[test]
fn criterion_06_swap_braid_products() {
    let swap = named_gate("SWAP", Sector::Even).unwrap();
    let d1 = swap.gate.matrix.max_abs_diff(&swap_target());
    let swap_p = named_gate("SWAP'", Sector::Even).unwrap();
    let d2 = swap_p.gate.matrix.max_abs_diff(&swap_prime_target());
    let worst = d1.max(d2);
    conclude(
        6,
        "four-braid swap products match the reference matrices (prefactor dropped)",
        worst <= SEQ_TOL,
        format!("max deviation {worst:.2e} (tol 1e-9)"),
    );
}

#[test]
fn criterion_07_braid_pair_matrices() {
    let report = braid_matrix_check().unwrap();
    let worst = report
        .forward_deviation
        .max(report.backward_deviation)
        .max(report.inverse_pair_deviation);
    conclude(
        7,
        "8x8 entangling/restoring braid matrices match the prints up to single phases",
        worst <= SEQ_TOL,
        format!(
            "forward {:.2e}, backward {:.2e}, inverse pair {:.2e} (tol 1e-9)",
            report.forward_deviation, report.backward_deviation, report.inverse_pair_deviation
        ),
    );
}

#[test]
fn criterion_08_superposition_chain() {
    let space = build_space(4).unwrap();
    let sp = sp_basis(&space).unwrap();
    let sparse = sparse_even_basis(&space).unwrap();
    let u = majsim_core::encoding::entangling_braids(&space, BraidConvention::Mem).unwrap();

    let mut worst_col = 0.0f64;
    for (k, col) in sparse.vectors.iter().enumerate() {
        let braided = u.apply(col);
        match braided.phase_match(&sp.vectors[k], SEQ_TOL).unwrap() {
            Some(phase) => {
                let dev: f64 = braided
                    .amps
                    .iter()
                    .zip(sp.vectors[k].amps.iter())
                    .map(|(a, b)| (a - phase * b).norm())
                    .fold(0.0, f64::max);
                worst_col = worst_col.max(dev);
            }
            None => worst_col = f64::MAX,
        }
    }

    let pi = pair_parity_op(&space, 4, 5).unwrap();
    let mut worst_prob = 0.0f64;
    for v in &sp.vectors {
        let image = pi.apply(v);
        let plus: Vec<Complex64> = v
            .amps
            .iter()
            .zip(image.amps.iter())
            .map(|(a, pa)| (a + pa) * c(0.5, 0.0))
            .collect();
        let p = majsim_core::matrix::vec_norm(&plus).powi(2);
        worst_prob = worst_prob.max((p - 0.5).abs());
    }

    // Collapses reproduce the reference collapsed bases up to recorded phases.
    let even_c = even_collapse_basis(&space).unwrap();
    let odd_c = odd_collapse_basis(&space).unwrap();
    let mut worst_phase = 0.0f64;
    for basis in [&even_c, &odd_c] {
        for phase in &basis.phases {
            worst_phase = worst_phase.max((phase.norm() - 1.0).abs());
        }
    }

    let pass = worst_col <= SEQ_TOL && worst_prob <= ALG_TOL && worst_phase <= SEQ_TOL;
    conclude(
        8,
        "braided sparse basis = superposition rows per column; Born 1/2; collapse chain",
        pass,
        format!(
            "column dev {worst_col:.2e} (tol 1e-9), prob dev {worst_prob:.2e} (tol 1e-12), \
             collapse phase dev {worst_phase:.2e}"
        ),
    );
}

#[test]
fn criterion_09_end_to_end_determinism() {
    let space = build_space(4).unwrap();
    let q1 = quad_parity_op(&space, 1, 2, 3, 4).unwrap();
    let q2 = quad_parity_op(&space, 5, 6, 7, 8).unwrap();
    let pipeline = Pipeline::new(BraidConvention::Mem).unwrap();
    let mut worst_fid = 0.0f64;
    let mut worst_parity = 0.0f64;
    for mode in [RunMode::Process1, RunMode::Process2] {
        for m1 in [1i8, -1] {
            for m2 in [-1i8, 1] {
                for k in 0..4 {
                    let input = encode_logical(&space, &LogicalTwoQubit::basis(k)).unwrap();
                    let mut policy = OutcomePolicy::forced(&[m1, m2]);
                    let report = pipeline.run(mode, &input, &mut policy).unwrap();
                    assert!(report.success);
                    let out = report.logical_out.expect("output in computational span");
                    let expected = LogicalTwoQubit::basis(k).apply_matrix(&cnot_target());
                    worst_fid = worst_fid.max((expected.fidelity(&out) - 1.0).abs());
                    let s = &report.final_state;
                    worst_parity = worst_parity.max((s.dot(&q1.apply(s)) + ONE).norm());
                    worst_parity = worst_parity.max((s.dot(&q2.apply(s)) + ONE).norm());
                }
            }
        }
    }
    conclude(
        9,
        "both corrected processes give CNOT on every input and forced branch",
        worst_fid <= 1e-9 && worst_parity <= 1e-9,
        format!(
            "max fidelity defect {worst_fid:.2e}, max quad-parity defect {worst_parity:.2e} \
             (tol 1e-9)"
        ),
    );
}

#[test]
fn criterion_10_general_scheme_y2_equivalence() {
    let space = build_space(4).unwrap();
    let l2 =
        correction_operator(&space, CorrectionScheme::XcXdThenY2, BraidConvention::Mem).unwrap();
    let b45 = braid(&space, 4, 5, BraidConvention::Mem).unwrap();
    let p = b45.mul(&b45);
    let cnot_op =
        majsim_core::gates::cnot_plus_on(&space, [(1, 2), (3, 6), (7, 8)], BraidConvention::Mem)
            .unwrap();
    let mut worst = 0.0f64;
    for m1 in [1i8, -1] {
        for m2 in [-1i8, 1] {
            for k in 0..4 {
                let input = encode_logical(&space, &LogicalTwoQubit::basis(k)).unwrap();
                let general = general_corrected_gate(
                    &cnot_op,
                    &l2,
                    &p,
                    &input,
                    &OutcomePolicy::forced(&[m1, m2]),
                )
                .unwrap();
                let reference = cnot_process1(&input, &OutcomePolicy::forced(&[m1, m2])).unwrap();
                let g = general.logical_out.expect("in span");
                let r = reference.logical_out.unwrap();
                worst = worst.max((g.fidelity(&r) - 1.0).abs());
            }
        }
    }
    conclude(
        10,
        "generalized scheme with the Y2 correction agrees with the input-corrected process",
        worst <= 1e-9,
        format!("max per-branch disagreement {worst:.2e} (tol 1e-9)"),
    );
}

#[test]
fn criterion_11_chain_statistics() {
    let shots = 10_000u64;
    let seed = 20260808u64;
    let mut lines = Vec::new();
    let mut pass = true;
    for n in 1..=3usize {
        let discard = chain_stats(n, shots, RunMode::Discard, seed).unwrap();
        let dev = (discard.rate - discard.expected_rate).abs();
        let ok = dev <= 3.0 * discard.binomial_std_err;
        pass &= ok;
        lines.push(format!(
            "discard N={n}: rate {:.4} vs 2^-{} = {:.4} ({:.1} sigma)",
            discard.rate,
            2 * n,
            discard.expected_rate,
            dev / discard.binomial_std_err
        ));
    }
    for mode in [RunMode::Process1, RunMode::Process2] {
        let corrected = chain_stats(3, shots, mode, seed).unwrap();
        let ok = corrected.successes == shots
            && corrected.modes_allocated == 4
            && corrected.max_corrections_per_gate <= 2;
        pass &= ok;
        lines.push(format!(
            "{} N=3: {}/{} succeeded, {} modes, <= {} corrections per gate",
            mode.tag(),
            corrected.successes,
            corrected.shots,
            corrected.modes_allocated,
            corrected.max_corrections_per_gate
        ));
    }
    conclude(
        11,
        "discard chains follow 2^-2N within 3 sigma; corrected chains are deterministic at O(1) space",
        pass,
        lines.join("; "),
    );
}

#[test]
fn criterion_12_ciz_identity() {
    let ciz = named_gate("CiZ", Sector::Even).unwrap();
    let dev = ciz
        .gate
        .matrix
        .max_abs_diff(&CMat::diag(&[ONE, ONE, I, -I]));
    conclude(
        12,
        "CNOT·CY = diag(1,1,i,-i) with CY from target-mode conjugation",
        dev <= ALG_TOL,
        format!("max deviation {dev:.2e} (tol 1e-12)"),
    );
}

#[test]
fn duality_report_is_exact_under_mem() {
    // Companion check used by the verification suite: not a numbered
    // criterion, but pins the duality identities' calibration.
    let report = duality_check(BraidConvention::Mem).unwrap();
    assert!(report.max_deviation() <= ALG_TOL, "{report:?}");
    let iv = duality_check(BraidConvention::Ivanov).unwrap();
    for check in &iv.checks {
        assert!(check.matched_phase.is_some());
        assert!(check.phase_deviation.unwrap() <= ALG_TOL);
    }
}

#[test]
fn fault_injection_flips_are_detected() {
    // A deliberately flipped sign in the entangling braid must show up as a
    // large deviation from the golden matrix, so the checks have teeth.
    let space = build_space(4).unwrap();
    let good = majsim_core::gates::compose(&[
        braid(&space, 5, 6, BraidConvention::Mem).unwrap(),
        braid(&space, 4, 5, BraidConvention::Mem).unwrap(),
    ]);
    let bad = good.scale(c(0.0, 1.0)); // wrong global phase is fine...
    let basis = majsim_core::gates::even_sector_basis4(&space);
    let m = sector_matrix(&bad, &basis, SEQ_TOL).unwrap().matrix;
    let target = majsim_core::gates::entangler_forward_target();
    assert!(
        majsim_core::matrix::phase_match_slices(m.data(), target.data(), SEQ_TOL).is_some(),
        "global phases are accepted"
    );
    // ...but an internal sign flip is not.
    let flipped = braid(&space, 5, 4, BraidConvention::Mem).unwrap();
    let wrong =
        majsim_core::gates::compose(&[braid(&space, 5, 6, BraidConvention::Mem).unwrap(), flipped]);
    let m = sector_matrix(&wrong, &basis, SEQ_TOL).unwrap().matrix;
    assert!(
        majsim_core::matrix::phase_match_slices(m.data(), target.data(), SEQ_TOL).is_none(),
        "sign flip slipped through"
    );
    let dev = m.max_abs_diff(&target);
    assert!(dev > 0.5, "expected a gross deviation, got {dev:.3}");
}
