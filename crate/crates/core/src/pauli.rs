//! Pauli-basis bookkeeping for two-qubit Hamiltonians, n-qubit Pauli
//! strings, and traceless bases for d-level systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{contract, Error, Result};
use crate::numerics::{c, identity, is_hermitian, kron, pauli, CMatrix, Real3, Vec3};

/// `c0·I⊗I + Σ a_i σ_i⊗I + Σ b_j I⊗σ_j + Σ M_ij σ_i⊗σ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliDecomposition {
    pub c0: f64,
    pub a: Vec3,
    pub b: Vec3,
    /// Pauli representation of the nonlocal part.
    pub m: Real3,
}

/// `σ_i ⊗ σ_j` with 0 meaning identity.
pub fn pauli_pair(i: usize, j: usize) -> CMatrix {
    kron(&pauli(i), &pauli(j))
}

fn check_two_qubit(h: &CMatrix, what: &str) -> Result<()> {
    if h.shape() != (4, 4) {
        return Err(contract(format!(
            "{what}: expected a 4x4 two-qubit operator, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if !is_hermitian(h, 1e-10) {
        return Err(contract(format!("{what}: operator is not Hermitian")));
    }
    Ok(())
}

fn coeff(h: &CMatrix, i: usize, j: usize) -> f64 {
    (pauli_pair(i, j) * h).trace().re / 4.0
}

pub fn decompose(h: &CMatrix) -> Result<PauliDecomposition> {
    check_two_qubit(h, "decompose")?;
    Ok(PauliDecomposition {
        c0: coeff(h, 0, 0),
        a: Vec3::from_fn(|i, _| coeff(h, i + 1, 0)),
        b: Vec3::from_fn(|j, _| coeff(h, 0, j + 1)),
        m: Real3::from_fn(|i, j| coeff(h, i + 1, j + 1)),
    })
}

impl PauliDecomposition {
    pub fn nonlocal(m: Real3) -> Self {
        Self {
            c0: 0.0,
            a: Vec3::zeros(),
            b: Vec3::zeros(),
            m,
        }
    }

    /// `Σ h_i σ_i⊗σ_i`.
    pub fn diagonal(h: Vec3) -> Self {
        Self::nonlocal(Real3::from_diagonal(&h))
    }

    pub fn compose(&self) -> CMatrix {
        let mut out = identity(4) * c(self.c0, 0.0);
        for i in 0..3 {
            out += pauli_pair(i + 1, 0) * c(self.a[i], 0.0);
            out += pauli_pair(0, i + 1) * c(self.b[i], 0.0);
            for j in 0..3 {
                out += pauli_pair(i + 1, j + 1) * c(self.m[(i, j)], 0.0);
            }
        }
        out
    }

    pub fn is_local(&self, tol: f64) -> bool {
        self.m.abs().max() <= tol
    }
}

/// Strip identity and single-side terms, keeping `Σ M_ij σ_i⊗σ_j`.
pub fn nonlocal_part(h: &CMatrix) -> Result<CMatrix> {
    Ok(PauliDecomposition::nonlocal(decompose(h)?.m).compose())
}

/// `I⊗K_B`-free and `K_A⊗I`-free part of an operator on `C^{da} ⊗ C^{db}`.
pub fn nonlocal_part_bipartite(h: &CMatrix, da: usize, db: usize) -> Result<CMatrix> {
    if h.shape() != (da * db, da * db) {
        return Err(contract(format!(
            "nonlocal_part_bipartite: {}x{} operator does not match dims [{da}, {db}]",
            h.nrows(),
            h.ncols()
        )));
    }
    let ka = partial_trace_b(h, da, db) * c(1.0 / db as f64, 0.0);
    let kb = partial_trace_a(h, da, db) * c(1.0 / da as f64, 0.0);
    let scalar = h.trace() / c((da * db) as f64, 0.0);
    Ok(h - kron(&ka, &identity(db)) - kron(&identity(da), &kb) + identity(da * db) * scalar)
}

/// `tr_B` of an operator on `A ⊗ B`.
pub fn partial_trace_b(h: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| {
        (0..db).map(|k| h[(i * db + k, j * db + k)]).sum()
    })
}

/// `tr_A` of an operator on `A ⊗ B`.
pub fn partial_trace_a(h: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |i, j| {
        (0..da).map(|k| h[(k * db + i, k * db + j)]).sum()
    })
}

/// Operator that exchanges the two factors of `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> CMatrix {
    let n = d * d;
    CMatrix::from_fn(n, n, |r, col| {
        let (a, b) = (col / d, col % d);
        if r == b * d + a {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `S·H·S` with `S` the swap of two equal-dimension factors.
pub fn swap_sides(h: &CMatrix, d: usize) -> CMatrix {
    let s = swap_operator(d);
    &s * h * &s
}

/// Largest qubit count for which Pauli string matrices are materialized.
pub const MAX_STRING_QUBITS: usize = 4;

/// `σ_x^{i₁} σ_z^{i₂} ⊗ … ⊗ σ_x^{i_{2n−1}} σ_z^{i_{2n}}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    bits: Vec<bool>,
}

impl PauliString {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.len() % 2 != 0 || bits.is_empty() {
            return Err(contract(format!(
                "PauliString: need an even, nonzero number of bits, got {}",
                bits.len()
            )));
        }
        Ok(Self {
            n: bits.len() / 2,
            bits,
        })
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| b != 0).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            bits: vec![false; 2 * n],
        }
    }

    /// All `4^n` strings, ordered by the binary value of the bit vector.
    pub fn all(n: usize) -> Vec<PauliString> {
        (0..1usize << (2 * n))
            .map(|k| Self {
                n,
                bits: (0..2 * n).map(|b| (k >> (2 * n - 1 - b)) & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.bits[2 * q]
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.bits[2 * q + 1]
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        if self.n > MAX_STRING_QUBITS {
            return Err(Error::Capacity(format!(
                "Pauli string on {} qubits exceeds the {MAX_STRING_QUBITS}-qubit limit",
                self.n
            )));
        }
        let mut out = identity(1);
        for q in 0..self.n {
            let mut factor = identity(2);
            if self.x_bit(q) {
                factor *= pauli(1);
            }
            if self.z_bit(q) {
                factor *= pauli(3);
            }
            out = kron(&out, &factor);
        }
        Ok(out)
    }

    /// `self · other = phase · (self ⊕ other)`.
    ///
    /// Moving `Z^b` past `X^c` on each qubit costs `(−1)^{bc}`.
    pub fn multiply(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.n != other.n {
            return Err(contract("PauliString::multiply: qubit counts differ"));
        }
        let mut flips = 0usize;
        for q in 0..self.n {
            if self.z_bit(q) && other.x_bit(q) {
                flips += 1;
            }
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a ^ b)
            .collect();
        let phase = if flips % 2 == 0 { c(1.0, 0.0) } else { c(-1.0, 0.0) };
        Ok((phase, PauliString { n: self.n, bits }))
    }

    /// Phase `φ ∈ {1, i, −1, −i}` with `φ · matrix` Hermitian
    /// (each `σ_xσ_z = −iσ_y` factor contributes `i`).
    pub fn hermitian_phase(&self) -> Complex64 {
        let y_count = (0..self.n).filter(|&q| self.x_bit(q) && self.z_bit(q)).count();
        c(0.0, 1.0).powu(y_count as u32)
    }

    /// `matrix²` is `+I` or `−I`; returns the sign.
    pub fn square_sign(&self) -> f64 {
        let y_count = (0..self.n).filter(|&q| self.x_bit(q) && self.z_bit(q)).count();
        if y_count % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Free function form of [`PauliString::matrix`].
pub fn pauli_string_matrix(p: &PauliString) -> Result<CMatrix> {
    p.matrix()
}

pub const MIN_BASIS_DIM: usize = 2;
pub const MAX_BASIS_DIM: usize = 4;

/// Nonorthonormal basis of traceless Hermitian `d×d` matrices.
///
/// Order: the `d−1` diagonal differences `|0⟩⟨0| − |k⟩⟨k|`, then for each
/// pair `j < k` (lexicographic) the real symmetric `|j⟩⟨k| + |k⟩⟨j|`
/// followed by the imaginary antisymmetric `−i|j⟩⟨k| + i|k⟩⟨j|`.
#[derive(Debug, Clone)]
pub struct TracelessBasisD {
    pub d: usize,
    pub elements: Vec<CMatrix>,
}

pub fn traceless_basis(d: usize) -> Result<TracelessBasisD> {
    if !(MIN_BASIS_DIM..=MAX_BASIS_DIM).contains(&d) {
        return Err(Error::Capacity(format!(
            "traceless basis supports {MIN_BASIS_DIM} <= d <= {MAX_BASIS_DIM}, got {d}"
        )));
    }
    let zero = CMatrix::zeros(d, d);
    let mut elements = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        let mut e = zero.clone();
        e[(0, 0)] = c(1.0, 0.0);
        e[(k, k)] = c(-1.0, 0.0);
        elements.push(e);
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut sym = zero.clone();
            sym[(j, k)] = c(1.0, 0.0);
            sym[(k, j)] = c(1.0, 0.0);
            let mut anti = zero.clone();
            anti[(j, k)] = c(0.0, -1.0);
            anti[(k, j)] = c(0.0, 1.0);
            elements.push(sym);
            elements.push(anti);
        }
    }
    Ok(TracelessBasisD { d, elements })
}

impl TracelessBasisD {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Gram matrix `G_kl = tr(η_k η_l)` (real for Hermitian elements).
    pub fn gram(&self) -> DMatrix<f64> {
        let n = self.len();
        DMatrix::from_fn(n, n, |k, l| {
            (&self.elements[k] * &self.elements[l]).trace().re
        })
    }

    /// Coefficients of a traceless Hermitian operator in this basis.
    pub fn coefficients(&self, x: &CMatrix) -> Result<Vec<f64>> {
        if x.shape() != (self.d, self.d) {
            return Err(contract("TracelessBasisD::coefficients: dimension mismatch"));
        }
        let rhs = DMatrix::from_fn(self.len(), 1, |k, _| (&self.elements[k] * x).trace().re);
        let sol = self
            .gram()
            .lu()
            .solve(&rhs)
            .ok_or_else(|| contract("traceless basis Gram matrix is singular"))?;
        Ok(sol.iter().copied().collect())
    }

    /// Coefficients `c_ij` of the nonlocal part `Σ c_ij η_i⊗η_j` of an
    /// operator on `C^d ⊗ C^d`. Row index is the A-side element.
    pub fn bipartite_coefficients(&self, h: &CMatrix) -> Result<DMatrix<f64>> {
        let d = self.d;
        if h.shape() != (d * d, d * d) {
            return Err(contract(
                "TracelessBasisD::bipartite_coefficients: dimension mismatch",
            ));
        }
        let n = self.len();
        let overlaps = DMatrix::from_fn(n, n, |i, j| {
            (kron(&self.elements[i], &self.elements[j]) * h).trace().re
        });
        let gram_lu = self.gram().lu();
        let left = gram_lu
            .solve(&overlaps)
            .ok_or_else(|| contract("traceless basis Gram matrix is singular"))?;
        let both = gram_lu
            .solve(&left.transpose())
            .ok_or_else(|| contract("traceless basis Gram matrix is singular"))?;
        Ok(both.transpose())
    }

    pub fn compose_bipartite(&self, coeffs: &DMatrix<f64>) -> CMatrix {
        let d = self.d;
        let mut out = CMatrix::zeros(d * d, d * d);
        for i in 0..self.len() {
            for j in 0..self.len() {
                let v = coeffs[(i, j)];
                if v != 0.0 {
                    out += kron(&self.elements[i], &self.elements[j]) * c(v, 0.0);
                }
            }
        }
        out
    }
}
