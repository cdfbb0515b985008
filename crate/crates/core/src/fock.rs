//! Fermionic Fock space, Majorana operators, parity observables, and
//! occupation bases under arbitrary pairings.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * Modes are numbered 1..=n; Majorana indices 1..=2n with the canonical
//!   pairing mode k = (gamma_{2k-1}, gamma_{2k}).
//! * Jordan-Wigner representation: gamma_{2k-1} = Z^(k-1) X_k,
//!   gamma_{2k} = Z^(k-1) Y_k, with |0> = (1,0)^T, so
//!   Psi_k = (gamma_{2k-1} + i gamma_{2k})/2 annihilates mode k.
//! * The canonical occupation basis is ordered lexicographically by the
//!   occupation string n_1 n_2 ... n_m with the vacuum first (n_1 is the
//!   most significant bit of the basis index).
//! * The reported parity observable is Pi(a,b) = -i gamma_a gamma_b, which
//!   on a canonical mode equals (-1)^(n_k): +1 for empty, -1 for occupied.
//!   The raw i gamma_a gamma_b of the underlying literature is -Pi.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c, vec_dot, vec_norm, CMat, ALG_TOL, I, ONE, ZERO};

pub const MAX_MODES: usize = 12;

/// A perfect matching of Majorana indices into ordered pairs; pair k defines
/// the fermion mode Psi_k = (gamma_{a_k} + i gamma_{b_k})/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(usize, usize)>, n_majoranas: usize) -> Result<Self> {
        let mut seen = vec![false; n_majoranas + 1];
        if pairs.len() * 2 != n_majoranas {
            return Err(Error::InvalidPairing(format!(
                "{} pairs cannot cover {} Majoranas",
                pairs.len(),
                n_majoranas
            )));
        }
        for &(a, b) in &pairs {
            for idx in [a, b] {
                if idx == 0 || idx > n_majoranas {
                    return Err(Error::InvalidPairing(format!("index {idx} out of range")));
                }
                if seen[idx] {
                    return Err(Error::InvalidPairing(format!("index {idx} repeated")));
                }
                seen[idx] = true;
            }
        }
        Ok(Pairing { pairs })
    }

    pub fn canonical(n_modes: usize) -> Self {
        Pairing {
            pairs: (1..=n_modes).map(|k| (2 * k - 1, 2 * k)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn n_modes(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_canonical(&self) -> bool {
        self.pairs
            .iter()
            .enumerate()
            .all(|(k, &(a, b))| a == 2 * k + 1 && b == 2 * k + 2)
    }
}

/// The 2^n-dimensional state space over n fermion modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    n_modes: usize,
}

impl FockSpace {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_majoranas(&self) -> usize {
        2 * self.n_modes
    }

    pub fn dim(&self) -> usize {
        1 << self.n_modes
    }

    pub fn canonical_pairing(&self) -> Pairing {
        Pairing::canonical(self.n_modes)
    }

    /// Occupation of canonical mode k (1-based) in basis state `index`.
    pub fn occupation(&self, index: usize, k: usize) -> usize {
        (index >> (self.n_modes - k)) & 1
    }

    /// Basis index of an occupation string such as "0110".
    pub fn index_of(&self, bits: &str) -> Result<usize> {
        if bits.len() != self.n_modes || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::Invalid(format!(
                "occupation string `{bits}` does not describe {} modes",
                self.n_modes
            )));
        }
        Ok(bits
            .bytes()
            .fold(0usize, |acc, b| (acc << 1) | (b - b'0') as usize))
    }

    /// Occupation string of a basis index.
    pub fn label_of(&self, index: usize) -> String {
        (1..=self.n_modes)
            .map(|k| {
                if self.occupation(index, k) == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n_majoranas() {
            Err(Error::IndexOutOfRange {
                index: i,
                max: self.n_majoranas(),
            })
        } else {
            Ok(())
        }
    }
}

/// Construct the Fock space for `n_modes` fermion modes (desk-scale cap 12).
pub fn build_space(n_modes: usize) -> Result<FockSpace> {
    if n_modes == 0 || n_modes > MAX_MODES {
        return Err(Error::ModeCountOutOfRange(n_modes));
    }
    Ok(FockSpace { n_modes })
}

/// Normalized complex amplitude vector over the canonical occupation basis.
///
/// `pairing` records the frame under which the state's labels are meant to be
/// read (canonical unless the state came out of [`pairing_basis`]); amplitudes
/// are always stored in the canonical basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub space: FockSpace,
    pub amps: Vec<Complex64>,
    pub pairing: Pairing,
}

impl StateVector {
    pub fn new(space: &FockSpace, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: space.dim(),
            });
        }
        let n = vec_norm(&amps);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::Invalid(format!("state norm {n} is not 1")));
        }
        Ok(StateVector {
            space: space.clone(),
            amps,
            pairing: space.canonical_pairing(),
        })
    }

    /// Canonical basis state from an occupation string like "0011".
    pub fn basis(space: &FockSpace, bits: &str) -> Result<Self> {
        let idx = space.index_of(bits)?;
        let mut amps = vec![ZERO; space.dim()];
        amps[idx] = ONE;
        StateVector::new(space, amps)
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    pub fn dot(&self, other: &StateVector) -> Complex64 {
        vec_dot(&self.amps, &other.amps)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            for a in &mut self.amps {
                *a /= n;
            }
        }
        self
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        for a in &mut self.amps {
            *a *= s;
        }
        self
    }

    /// `self = phase * other` within `tol`, if such a unit phase exists.
    pub fn phase_match(&self, other: &StateVector, tol: f64) -> Result<Option<Complex64>> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                left: self.amps.len(),
                right: other.amps.len(),
            });
        }
        Ok(crate::matrix::phase_match_slices(
            &self.amps,
            &other.amps,
            tol,
        ))
    }
}

/// Dense operator on the full Fock space. The hermitian/unitary flags are
/// advisory and recorded at construction time.
#[derive(Debug, Clone)]
pub struct Operator {
    pub space: FockSpace,
    pub mat: CMat,
    pub hermitian: bool,
    pub unitary: bool,
}

impl Operator {
    pub fn new(space: &FockSpace, mat: CMat) -> Self {
        let hermitian = mat.is_hermitian(ALG_TOL);
        let unitary = mat.is_unitary(crate::matrix::SEQ_TOL);
        Operator {
            space: space.clone(),
            mat,
            hermitian,
            unitary,
        }
    }

    pub fn identity(space: &FockSpace) -> Self {
        Operator::new(space, CMat::identity(space.dim()))
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        StateVector {
            space: state.space.clone(),
            amps: self.mat.matvec(&state.amps),
            pairing: state.pairing.clone(),
        }
    }

    pub fn mul(&self, rhs: &Operator) -> Operator {
        Operator::new(&self.space, self.mat.mul(&rhs.mat))
    }

    pub fn adjoint(&self) -> Operator {
        Operator::new(&self.space, self.mat.adjoint())
    }

    pub fn scale(&self, s: Complex64) -> Operator {
        Operator::new(&self.space, self.mat.scale(s))
    }

    pub fn phase_match(&self, other: &Operator, tol: f64) -> Result<Option<Complex64>> {
        self.mat.phase_match(&other.mat, tol)
    }
}

/// Jordan-Wigner matrix for gamma_i under the canonical pairing.
pub fn majorana(space: &FockSpace, i: usize) -> Result<Operator> {
    space.check_index(i)?;
    let m = space.n_modes();
    let k = (i + 1) / 2; // mode, 1-based
    let is_x = i % 2 == 1; // gamma_{2k-1} is the X-type partner
    let dim = space.dim();
    let mut mat = CMat::zeros(dim);
    for col in 0..dim {
        // Z string over modes 1..k-1.
        let mut sign = 1.0;
        for j in 1..k {
            if space.occupation(col, j) == 1 {
                sign = -sign;
            }
        }
        let bit = space.occupation(col, k);
        let row = col ^ (1 << (m - k));
        let entry = if is_x {
            c(sign, 0.0)
        } else {
            // Y|0> = i|1>, Y|1> = -i|0>.
            if bit == 0 {
                I * sign
            } else {
                -I * sign
            }
        };
        mat[(row, col)] = entry;
    }
    Ok(Operator::new(space, mat))
}

/// Normalized pair parity Pi(a,b) = -i gamma_a gamma_b; +1 on an empty
/// canonical mode, -1 on an occupied one.
pub fn pair_parity_op(space: &FockSpace, a: usize, b: usize) -> Result<Operator> {
    space.check_index(a)?;
    space.check_index(b)?;
    if a == b {
        return Err(Error::IndexClash(vec![a, b]));
    }
    let ga = majorana(space, a)?;
    let gb = majorana(space, b)?;
    Ok(Operator::new(space, ga.mat.mul(&gb.mat).scale(-I)))
}

/// Quad parity gamma_a gamma_b gamma_c gamma_d; for canonical modes (j,k) it
/// equals -(-1)^(n_j + n_k), so eigenvalue -1 marks even joint parity.
pub fn quad_parity_op(
    space: &FockSpace,
    a: usize,
    b: usize,
    cc: usize,
    d: usize,
) -> Result<Operator> {
    let idx = [a, b, cc, d];
    for &i in &idx {
        space.check_index(i)?;
    }
    for p in 0..4 {
        for q in (p + 1)..4 {
            if idx[p] == idx[q] {
                return Err(Error::IndexClash(idx.to_vec()));
            }
        }
    }
    let mut mat = majorana(space, a)?.mat;
    for &i in &idx[1..] {
        mat = mat.mul(&majorana(space, i)?.mat);
    }
    Ok(Operator::new(space, mat))
}

/// The 2^n simultaneous eigenstates of all pair parities of `pairing`,
/// labeled by occupation strings under that pairing.
///
/// Phases are fixed deterministically: the new vacuum is the state
/// annihilated by every new annihilator, with its first nonzero canonical
/// amplitude made real positive; excited states apply the new creation
/// operators as the ascending-mode operator string (rightmost mode acts
/// first).
pub fn pairing_basis(space: &FockSpace, pairing: &Pairing) -> Result<Vec<(String, StateVector)>> {
    if pairing.n_modes() != space.n_modes() {
        return Err(Error::InvalidPairing(format!(
            "pairing covers {} modes, space has {}",
            pairing.n_modes(),
            space.n_modes()
        )));
    }
    let dim = space.dim();
    let m = space.n_modes();

    // Annihilators and creators of the new modes.
    let mut annihilators = Vec::with_capacity(m);
    for &(a, b) in pairing.pairs() {
        let ga = majorana(space, a)?;
        let gb = majorana(space, b)?;
        let psi = ga.mat.add(&gb.mat.scale(I)).scale(c(0.5, 0.0));
        annihilators.push(psi);
    }
    let creators: Vec<CMat> = annihilators.iter().map(|p| p.adjoint()).collect();

    // Vacuum projector: product of the empty-mode projectors Psi Psi^dagger.
    let mut proj = CMat::identity(dim);
    for psi in &annihilators {
        proj = proj.mul(&psi.mul(&psi.adjoint()));
    }
    let mut vacuum = None;
    for j in 0..dim {
        let mut probe = vec![ZERO; dim];
        probe[j] = ONE;
        let v = proj.matvec(&probe);
        let n = vec_norm(&v);
        if n > 1e-6 {
            let mut v: Vec<Complex64> = v.into_iter().map(|x| x / n).collect();
            let j0 = v
                .iter()
                .position(|x| x.norm() > 1e-9)
                .expect("normalized vector has a nonzero entry");
            let phase = v[j0].conj() / v[j0].norm();
            for x in &mut v {
                *x *= phase;
            }
            vacuum = Some(v);
            break;
        }
    }
    let vacuum = vacuum.ok_or_else(|| Error::InvalidPairing("no vacuum state found".into()))?;

    let mut out = Vec::with_capacity(dim);
    for code in 0..dim {
        let label: String = (0..m)
            .map(|k| {
                if (code >> (m - 1 - k)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect();
        let mut v = vacuum.clone();
        // Ascending-mode operator string: the highest mode's creator acts first.
        for k in (0..m).rev() {
            if (code >> (m - 1 - k)) & 1 == 1 {
                v = creators[k].matvec(&v);
            }
        }
        let state = StateVector {
            space: space.clone(),
            amps: v,
            pairing: pairing.clone(),
        };
        out.push((label, state));
    }
    Ok(out)
}

/// Total fermion parity (-1)^F as an operator.
pub fn total_parity_op(space: &FockSpace) -> Operator {
    let dim = space.dim();
    let mut mat = CMat::zeros(dim);
    for idx in 0..dim {
        let parity = (idx.count_ones() % 2) as i32;
        mat[(idx, idx)] = if parity == 0 { ONE } else { -ONE };
    }
    Operator::new(space, mat)
}
