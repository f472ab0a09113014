use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::operator::{energy_and_variance, CompiledSum, WeightedPauliSum};
use crate::pauli::PauliString;
use crate::state::{apply_pauli_into, inner, rotate_in_place, StateVector};
use crate::Complex64;

use super::ansatz::Ansatz;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `-i v` in place.
fn times_minus_i(v: &mut [Complex64]) {
    for a in v {
        *a = Complex64::new(a.im, -a.re);
    }
}

/// `psi` followed by every `d_mu |psi> = U_N ... U_{mu+1} (-i P_mu) U_mu ... U_1 |ref>`,
/// the latter stored back to back in one buffer.
fn tangent_vectors(ansatz: &Ansatz) -> (Vec<Complex64>, Vec<Complex64>) {
    let generators = ansatz.generators();
    let angles = ansatz.angles();
    let mut phi = ansatz.reference().amplitudes().to_vec();
    let dim = phi.len();
    let mut derivatives = vec![ZERO; dim * ansatz.len()];
    // Each derivative runs through its remaining rotations while it is hot in cache.
    for (mu, (p, &theta)) in generators.iter().zip(angles).enumerate() {
        rotate_in_place(p, theta, &mut phi);
        let d = &mut derivatives[mu * dim..(mu + 1) * dim];
        apply_pauli_into(p, &phi, d);
        times_minus_i(d);
        for (q, &later) in generators[mu + 1..].iter().zip(&angles[mu + 1..]) {
            rotate_in_place(q, later, d);
        }
    }
    (phi, derivatives)
}

/// The derivative states `d_mu |psi(theta)>` in generator order.
pub fn derivative_states(ansatz: &Ansatz) -> Vec<StateVector> {
    let n = ansatz.n_qubits();
    let (psi, flat) = tangent_vectors(ansatz);
    flat.chunks_exact(psi.len())
        .map(|d| StateVector::from_raw(n, d.to_vec()))
        .collect()
}

fn as_reals(v: &[Complex64]) -> &[f64] {
    // Complex<f64> is repr(C) with (re, im) fields.
    unsafe { std::slice::from_raw_parts(v.as_ptr().cast::<f64>(), 2 * v.len()) }
}

/// `Re <a_i|b_j>` for row-stacked states `a` (rows x dim) and `b` (cols x dim),
/// written row-major into `out`.
fn real_overlaps(a: &[Complex64], b: &[Complex64], dim: usize, out: &mut [f64]) {
    let (rows, cols) = (a.len() / dim, b.len() / dim);
    debug_assert_eq!(out.len(), rows * cols);
    if rows == 0 || cols == 0 {
        return;
    }
    let (a, b) = (as_reals(a), as_reals(b));
    let k = 2 * dim;
    // Re<x|y> is the plain dot product of interleaved (re, im) pairs.
    unsafe {
        matrixmultiply::dgemm(
            rows,
            k,
            cols,
            1.0,
            a.as_ptr(),
            k as isize,
            1,
            b.as_ptr(),
            1,
            k as isize,
            0.0,
            out.as_mut_ptr(),
            cols as isize,
            1,
        );
    }
}

/// Candidates evaluated per matrix product during a pool scan.
const CANDIDATE_BATCH: usize = 64;

/// Raw overlaps of the tangent space at the current angles:
/// `Re G = Re <d_mu|d_nu>`, `o_mu = <psi|d_mu>` and `f_mu = <d_mu|H|psi>`.
#[derive(Clone, Debug)]
pub(crate) struct TangentSpace {
    pub psi: Vec<Complex64>,
    pub h_psi: Vec<Complex64>,
    pub energy: f64,
    pub variance: f64,
    derivatives: Vec<Complex64>,
    gram: DMatrix<f64>,
    overlap: Vec<Complex64>,
    force: Vec<Complex64>,
}

/// Overlaps a candidate generator appended at `theta = 0` would contribute.
pub(crate) struct Candidate {
    derivative: Vec<Complex64>,
    column: Vec<f64>,
    overlap: Complex64,
    force: Complex64,
}

impl Candidate {
    /// Column of `A` against existing generators, the new diagonal entry and
    /// the new entry of `C`.
    pub fn realtime_border(&self, space: &TangentSpace) -> (DVector<f64>, f64, f64) {
        let a = DVector::from_fn(space.len(), |mu, _| 2.0 * (self.column[mu] + (space.overlap[mu].conj() * self.overlap.conj()).re));
        let alpha = 2.0 * (1.0 + (self.overlap.conj() * self.overlap.conj()).re);
        let c = 2.0 * (self.force + self.overlap * space.energy).im;
        (a, alpha, c)
    }
}

impl TangentSpace {
    pub fn new(ansatz: &Ansatz, hamiltonian: &CompiledSum) -> Result<Self> {
        check_dim(ansatz.n_qubits(), hamiltonian.n_qubits())?;
        let (psi, derivatives) = tangent_vectors(ansatz);
        let dim = psi.len();
        let h_psi = hamiltonian.apply(&psi);
        let (energy, variance) = energy_and_variance(&psi, &h_psi)?;
        let n = ansatz.len();
        let mut raw = vec![0.0; n * n];
        real_overlaps(&derivatives, &derivatives, dim, &mut raw);
        // Mirror the upper triangle so the matrix is exactly symmetric.
        let gram = DMatrix::from_fn(n, n, |mu, nu| raw[mu.min(nu) * n + mu.max(nu)]);
        let overlap = derivatives.chunks_exact(dim).map(|d| inner(&psi, d)).collect();
        let force = derivatives.chunks_exact(dim).map(|d| inner(d, &h_psi)).collect();
        Ok(Self {
            psi,
            h_psi,
            energy,
            variance,
            derivatives,
            gram,
            overlap,
            force,
        })
    }

    pub fn len(&self) -> usize {
        self.gram.nrows()
    }

    fn dim(&self) -> usize {
        self.psi.len()
    }

    /// `A = 2 Re[G + conj(o) conj(o)^T]`, `C = 2 Im[f + o E]`.
    pub fn realtime(&self) -> (DMatrix<f64>, DVector<f64>) {
        let n = self.len();
        let a = DMatrix::from_fn(n, n, |mu, nu| 2.0 * (self.gram[(mu, nu)] + (self.overlap[mu].conj() * self.overlap[nu].conj()).re));
        let c = DVector::from_fn(n, |mu, _| 2.0 * (self.force[mu] + self.overlap[mu] * self.energy).im);
        (a, c)
    }

    /// `A_R = Re G`, `C_R = Re f`.
    pub fn imagtime(&self) -> (DMatrix<f64>, DVector<f64>) {
        (self.gram.clone(), DVector::from_fn(self.len(), |mu, _| self.force[mu].re))
    }

    /// Calls `visit` with each generator's candidate data, in order.
    pub fn scan<F: FnMut(usize, Candidate)>(&self, generators: &[PauliString], mut visit: F) {
        let dim = self.dim();
        let n = self.len();
        let mut batch = Vec::with_capacity(CANDIDATE_BATCH * dim);
        let mut columns = Vec::new();
        for (chunk_index, chunk) in generators.chunks(CANDIDATE_BATCH).enumerate() {
            batch.clear();
            batch.resize(chunk.len() * dim, ZERO);
            for (p, v) in chunk.iter().zip(batch.chunks_exact_mut(dim)) {
                apply_pauli_into(p, &self.psi, v);
                times_minus_i(v);
            }
            columns.clear();
            columns.resize(n * chunk.len(), 0.0);
            real_overlaps(&self.derivatives, &batch, dim, &mut columns);
            for (j, v) in batch.chunks_exact(dim).enumerate() {
                let candidate = Candidate {
                    derivative: v.to_vec(),
                    column: (0..n).map(|mu| columns[mu * chunk.len() + j]).collect(),
                    overlap: inner(&self.psi, v),
                    force: inner(v, &self.h_psi),
                };
                visit(chunk_index * CANDIDATE_BATCH + j, candidate);
            }
        }
    }

    #[cfg(test)]
    pub fn candidate(&self, generator: &PauliString) -> Candidate {
        let mut found = None;
        self.scan(std::slice::from_ref(generator), |_, c| found = Some(c));
        found.expect("one generator yields one candidate")
    }

    /// Extends the tangent space by a generator appended at `theta = 0`,
    /// which leaves `|psi>` unchanged.
    pub fn push(&mut self, candidate: Candidate) {
        let n = self.len();
        let gram = std::mem::replace(&mut self.gram, DMatrix::zeros(0, 0));
        let mut gram = gram.resize(n + 1, n + 1, 0.0);
        for (mu, &g) in candidate.column.iter().enumerate() {
            gram[(mu, n)] = g;
            gram[(n, mu)] = g;
        }
        gram[(n, n)] = 1.0;
        self.gram = gram;
        self.overlap.push(candidate.overlap);
        self.force.push(candidate.force);
        self.derivatives.extend_from_slice(&candidate.derivative);
    }
}

/// McLachlan linear systems and moments of `H` at the current angles.
#[derive(Clone, Debug)]
pub struct GeometrySnapshot {
    pub a: DMatrix<f64>,
    pub c: DVector<f64>,
    pub a_r: DMatrix<f64>,
    pub c_r: DVector<f64>,
    pub energy: f64,
    pub variance: f64,
}

pub fn geometry(ansatz: &Ansatz, hamiltonian: &WeightedPauliSum) -> Result<GeometrySnapshot> {
    let space = TangentSpace::new(ansatz, &hamiltonian.compile())?;
    let (a, c) = space.realtime();
    let (a_r, c_r) = space.imagtime();
    Ok(GeometrySnapshot {
        a,
        c,
        a_r,
        c_r,
        energy: space.energy,
        variance: space.variance,
    })
}

/// Real-time McLachlan system `(A, C)`.
pub fn realtime_geometry(ansatz: &Ansatz, hamiltonian: &WeightedPauliSum) -> Result<(DMatrix<f64>, DVector<f64>)> {
    Ok(TangentSpace::new(ansatz, &hamiltonian.compile())?.realtime())
}

/// Imaginary-time McLachlan system `(A_R, C_R)`.
pub fn imagtime_geometry(ansatz: &Ansatz, hamiltonian: &WeightedPauliSum) -> Result<(DMatrix<f64>, DVector<f64>)> {
    Ok(TangentSpace::new(ansatz, &hamiltonian.compile())?.imagtime())
}

/// Slack below zero tolerated in the squared distance before the geometry is
/// declared inconsistent.
const NEGATIVE_SLACK: f64 = 1e-10;

/// `Delta = sqrt(theta'^T A theta' - 2 theta' . C + 2 Var[H])`.
pub fn mclachlan_distance(a: &DMatrix<f64>, c: &DVector<f64>, variance: f64, theta_dot: &DVector<f64>) -> Result<f64> {
    check_dim(a.nrows(), theta_dot.len())?;
    check_dim(c.len(), theta_dot.len())?;
    let squared = (theta_dot.transpose() * a * theta_dot)[(0, 0)] - 2.0 * theta_dot.dot(c) + 2.0 * variance;
    distance_from_squared(squared)
}

pub(crate) fn distance_from_squared(squared: f64) -> Result<f64> {
    if !squared.is_finite() || squared < -NEGATIVE_SLACK {
        return Err(Error::GeometryInconsistency { value: squared });
    }
    Ok(squared.max(0.0).sqrt())
}
