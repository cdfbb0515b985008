//! Sparse, dense, and intermediate bases, and the logical encode/decode maps
//! between two-qubit logical states and Fock states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{pair_parity_op, pairing_basis, FockSpace, Pairing, StateVector};
use crate::gates::{braid, compose, x_on, BraidConvention};
use crate::matrix::{c, vec_norm, CMat, I, ONE, SEQ_TOL, ZERO};

/// Normalized two-qubit logical state over (|00>, |01>, |10>, |11>).
#[derive(Debug, Clone)]
pub struct LogicalTwoQubit {
    pub amps: [Complex64; 4],
}

impl LogicalTwoQubit {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let n = vec_norm(&amps);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("logical norm {n} is not 1")));
        }
        Ok(LogicalTwoQubit { amps })
    }

    pub fn basis(k: usize) -> Self {
        let mut amps = [ZERO; 4];
        amps[k] = ONE;
        LogicalTwoQubit { amps }
    }

    pub fn labels() -> [&'static str; 4] {
        ["00", "01", "10", "11"]
    }

    pub fn fidelity(&self, other: &LogicalTwoQubit) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm()
    }

    /// Unit phase with `self = phase * other`, when the fidelity is 1.
    pub fn relative_phase(&self, other: &LogicalTwoQubit) -> Complex64 {
        let ov: Complex64 = other
            .amps
            .iter()
            .zip(self.amps.iter())
            .map(|(b, a)| b.conj() * a)
            .sum();
        if ov.norm() < 1e-300 {
            ONE
        } else {
            ov / ov.norm()
        }
    }

    pub fn apply_matrix(&self, m: &CMat) -> LogicalTwoQubit {
        let v = m.matvec(&self.amps);
        LogicalTwoQubit {
            amps: [v[0], v[1], v[2], v[3]],
        }
    }

    pub fn closest_basis_label(&self) -> &'static str {
        let k = self
            .amps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .map(|(k, _)| k)
            .unwrap();
        Self::labels()[k]
    }
}

/// A named, ordered, orthonormal family of Fock states.
#[derive(Debug, Clone)]
pub struct EncodedBasis {
    pub name: String,
    pub labels: Vec<String>,
    pub vectors: Vec<StateVector>,
    pub pairing: Pairing,
    /// Per-vector phase relative to the reference kets named in `labels`
    /// (1 where the vector is the reference ket itself).
    pub phases: Vec<Complex64>,
    pub provenance: String,
}

impl EncodedBasis {
    fn from_canonical_kets(
        space: &FockSpace,
        name: &str,
        labels: &[&str],
        provenance: &str,
    ) -> Result<Self> {
        let vectors = labels
            .iter()
            .map(|l| StateVector::basis(space, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(EncodedBasis {
            name: name.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            vectors,
            pairing: space.canonical_pairing(),
            phases: vec![ONE; labels.len()],
            provenance: provenance.into(),
        })
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let d = a.dot(b);
                let expect = if i == j { ONE } else { ZERO };
                if (d - expect).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

fn expect_modes(space: &FockSpace, n: usize) -> Result<()> {
    if space.n_modes() != n {
        Err(Error::WrongSpaceSize {
            expected: n,
            actual: space.n_modes(),
        })
    } else {
        Ok(())
    }
}

/// Computational two-Squbit basis: (|0000>, |0011>, |1100>, |1111>).
pub fn sparse_even_basis(space: &FockSpace) -> Result<EncodedBasis> {
    expect_modes(space, 4)?;
    EncodedBasis::from_canonical_kets(
        space,
        "sparse-even",
        &["0000", "0011", "1100", "1111"],
        "computational two-Squbit basis; every vector has both quad parities -1",
    )
}

/// Non-computational partner basis with the same total parity:
/// (|0101>, |0110>, |1001>, |1010>).
pub fn sparse_noncomp_basis(space: &FockSpace) -> Result<EncodedBasis> {
    expect_modes(space, 4)?;
    EncodedBasis::from_canonical_kets(
        space,
        "sparse-noncomp",
        &["0101", "0110", "1001", "1010"],
        "non-computational even-sector basis; quad parities +1",
    )
}

/// Two-Dqubit basis on three modes, in the reference ordering.
pub fn dense_basis(space: &FockSpace, parity: crate::gates::Sector) -> Result<EncodedBasis> {
    expect_modes(space, 3)?;
    match parity {
        crate::gates::Sector::Even => EncodedBasis::from_canonical_kets(
            space,
            "dense-plus",
            &["000", "011", "101", "110"],
            "even dense two-Dqubit basis",
        ),
        crate::gates::Sector::Odd => EncodedBasis::from_canonical_kets(
            space,
            "dense-minus",
            &["001", "010", "100", "111"],
            "odd dense two-Dqubit basis",
        ),
    }
}

/// The relabeled pairing used between the entangling braids and the first
/// measurement: A=(1,2), B=(3,6), C=(4,5), D=(7,8).
pub fn sp_pairing() -> Pairing {
    Pairing::new(vec![(1, 2), (3, 6), (4, 5), (7, 8)], 8).unwrap()
}

/// Reference amplitude rows of the computational/non-computational
/// superposition basis, as (label, coefficient) pairs before normalization.
fn sp_rows() -> [[(&'static str, Complex64); 2]; 4] {
    [
        [("0000", I), ("0110", ONE)],
        [("0011", -ONE), ("0101", I)],
        [("1010", ONE), ("1100", I)],
        [("1001", I), ("1111", -ONE)],
    ]
}

/// Relabeled kets with the reference phase convention: the listed
/// pairing-basis kets additionally carry a factor i per occupied C mode.
/// With this adjustment the reference amplitude rows coincide with the
/// entangling braid product column by column (up to one phase per column).
fn adjusted_rel_kets(space: &FockSpace) -> Result<std::collections::BTreeMap<String, StateVector>> {
    let pairing = sp_pairing();
    let basis = pairing_basis(space, &pairing)?;
    let mut map = std::collections::BTreeMap::new();
    for (label, state) in basis {
        let n_c = if label.as_bytes()[2] == b'1' { 1 } else { 0 };
        let adj = if n_c == 1 { state.scaled(I) } else { state };
        map.insert(label, adj);
    }
    Ok(map)
}

/// Superposition basis reached after the entangling braids, built from the
/// reference amplitudes (normalized by 1/sqrt(2)) over the relabeled pairing.
pub fn sp_basis(space: &FockSpace) -> Result<EncodedBasis> {
    expect_modes(space, 4)?;
    let kets = adjusted_rel_kets(space)?;
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut vectors = Vec::with_capacity(4);
    let mut labels = Vec::with_capacity(4);
    for row in sp_rows() {
        let mut amps = vec![ZERO; space.dim()];
        for (label, coeff) in row {
            let ket = &kets[label];
            for (a, b) in amps.iter_mut().zip(ket.amps.iter()) {
                *a += coeff * s * b;
            }
        }
        labels.push(format!("{}+{}", row[0].0, row[1].0));
        vectors.push(StateVector {
            space: space.clone(),
            amps,
            pairing: sp_pairing(),
        });
    }
    Ok(EncodedBasis {
        name: "SP".into(),
        labels,
        vectors,
        pairing: sp_pairing(),
        phases: vec![ONE; 4],
        provenance:
            "reference superposition rows (unnormalized), stored normalized; kets carry the \
                     source's implicit i-per-occupied-C phase"
                .into(),
    })
}

/// The entangling braid pair as applied in the protocol: gamma_6 exchanges
/// with gamma_5, then with gamma_4.
pub fn entangling_braids(
    space: &FockSpace,
    conv: BraidConvention,
) -> Result<crate::fock::Operator> {
    Ok(compose(&[
        braid(space, 4, 5, conv)?,
        braid(space, 5, 6, conv)?,
    ]))
}

/// Inverse of the entangling pair, used to restore the canonical pairing.
pub fn restoring_braids(space: &FockSpace, conv: BraidConvention) -> Result<crate::fock::Operator> {
    Ok(compose(&[
        braid(space, 6, 5, conv)?,
        braid(space, 5, 4, conv)?,
    ]))
}

fn collapse_basis(
    space: &FockSpace,
    name: &str,
    keep_occupied_c: bool,
    ref_labels: [&str; 4],
    ref_signs: [Complex64; 4],
    provenance: &str,
) -> Result<EncodedBasis> {
    let sp = sp_basis(space)?;
    let pi = pair_parity_op(space, 4, 5)?;
    let sign = if keep_occupied_c { -1.0 } else { 1.0 };
    let kets = adjusted_rel_kets(space)?;
    let mut vectors = Vec::with_capacity(4);
    let mut phases = Vec::with_capacity(4);
    for (k, v) in sp.vectors.iter().enumerate() {
        let image = pi.mat.matvec(&v.amps);
        let mut proj: Vec<Complex64> = v
            .amps
            .iter()
            .zip(image.iter())
            .map(|(a, pa)| (a + c(sign, 0.0) * pa) * c(0.5, 0.0))
            .collect();
        let n = vec_norm(&proj);
        for a in &mut proj {
            *a /= n;
        }
        let state = StateVector {
            space: space.clone(),
            amps: proj,
            pairing: sp_pairing(),
        };
        let reference = kets[ref_labels[k]].clone().scaled(ref_signs[k]);
        let phase = reference.dot(&state);
        debug_assert!((phase.norm() - 1.0).abs() < 1e-9);
        phases.push(phase / phase.norm());
        vectors.push(state);
    }
    Ok(EncodedBasis {
        name: name.into(),
        labels: ref_labels.iter().map(|s| s.to_string()).collect(),
        vectors,
        pairing: sp_pairing(),
        phases,
        provenance: provenance.into(),
    })
}

/// Even collapse of the superposition basis (C empty): the dense two-Dqubit
/// basis carried by modes A, B, D.
pub fn even_collapse_basis(space: &FockSpace) -> Result<EncodedBasis> {
    collapse_basis(
        space,
        "dense-collapsed-even",
        false,
        ["0000", "0101", "1100", "1001"],
        [ONE, ONE, ONE, ONE],
        "positive pair-parity projection of the superposition basis, renormalized; \
         per-vector phases recorded",
    )
}

/// Odd collapse (C occupied), with the tabulated signs on the reference kets.
pub fn odd_collapse_basis(space: &FockSpace) -> Result<EncodedBasis> {
    collapse_basis(
        space,
        "dense-collapsed-odd",
        true,
        ["0110", "0011", "1010", "1111"],
        [ONE, -ONE, ONE, -ONE],
        "negative pair-parity projection of the superposition basis, renormalized; \
         per-vector phases recorded",
    )
}

/// Corrected basis: the occupation flip of modes B and C applied to the odd
/// collapse. Maps each odd-collapse vector onto the corresponding
/// even-collapse ket (the reference corrected list contains the same kets in a
/// permuted order; the branch-preserving order is used here).
pub fn corrected_collapse_basis(space: &FockSpace) -> Result<EncodedBasis> {
    let odd_c = odd_collapse_basis(space)?;
    let x_bc = x_on(space, (3, 6), (4, 5), BraidConvention::Mem)?;
    let kets = adjusted_rel_kets(space)?;
    let ref_labels = ["0000", "0101", "1100", "1001"];
    let mut vectors = Vec::with_capacity(4);
    let mut phases = Vec::with_capacity(4);
    for (k, v) in odd_c.vectors.iter().enumerate() {
        let state = x_bc.apply(v);
        let phase = kets[ref_labels[k]].dot(&state);
        phases.push(phase / phase.norm());
        vectors.push(state);
    }
    Ok(EncodedBasis {
        name: "corrected".into(),
        labels: ref_labels.iter().map(|s| s.to_string()).collect(),
        vectors,
        pairing: sp_pairing(),
        phases,
        provenance: "odd collapse corrected by the B,C occupation flip; spans the \
                     even-collapse kets in branch order"
            .into(),
    })
}

/// Linear isometry from logical two-qubit states onto the computational
/// sparse basis, (|00>,|01>,|10>,|11>) -> (|0000>,|0011>,|1100>,|1111>).
pub fn encode_logical(space: &FockSpace, l: &LogicalTwoQubit) -> Result<StateVector> {
    let basis = sparse_even_basis(space)?;
    let mut amps = vec![ZERO; space.dim()];
    for (coeff, vector) in l.amps.iter().zip(basis.vectors.iter()) {
        for (a, b) in amps.iter_mut().zip(vector.amps.iter()) {
            *a += coeff * b;
        }
    }
    StateVector::new(space, amps)
}

/// Inverse of [`encode_logical`]; errors if the state leaks outside the
/// computational span beyond 1e-9.
pub fn decode_logical(state: &StateVector) -> Result<LogicalTwoQubit> {
    let basis = sparse_even_basis(&state.space)?;
    let mut amps = [ZERO; 4];
    let mut residual = state.amps.clone();
    for (k, vector) in basis.vectors.iter().enumerate() {
        amps[k] = vector.dot(state);
        for (r, b) in residual.iter_mut().zip(vector.amps.iter()) {
            *r -= amps[k] * b;
        }
    }
    let leak = vec_norm(&residual);
    if leak > SEQ_TOL {
        return Err(Error::DecodeLeakage(leak));
    }
    let n = vec_norm(&amps);
    for a in &mut amps {
        *a /= n;
    }
    LogicalTwoQubit::new(amps)
}
