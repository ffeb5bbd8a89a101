//! Local-unitary normal form of two-qubit Hamiltonians.
//!
//! Every two-qubit Hamiltonian `K` is conjugate under `U⊗V` (up to local
//! terms) to `Σ h_i σ_i⊗σ_i` with `h₁ ≥ h₂ ≥ |h₃|`, where the `|h_i|` are the
//! singular values of the Pauli representation `M` of `K` and `h₃` carries
//! the sign of `det M`.

use crate::error::Result;
use crate::numerics::{kron, so3_to_su2, svd3, CMatrix, Real3, Vec3};
use crate::pauli::{decompose, nonlocal_part, PauliDecomposition};

/// Absolute threshold below which a Pauli representation counts as zero.
pub const LOCAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct NormalForm {
    /// Canonical triple, `h₁ ≥ h₂ ≥ |h₃|`.
    pub h: Vec3,
    /// A-side unitary with `(U⊗V)·K_nl·(U⊗V)† = Σ h_i σ_i⊗σ_i`.
    pub u: CMatrix,
    pub v: CMatrix,
    /// Rotation of `U`; the Pauli representation transforms as `Rᵀ M S`.
    pub r: Real3,
    pub s: Real3,
    pub local_a: Vec3,
    pub local_b: Vec3,
    pub c0: f64,
}

impl NormalForm {
    /// The canonical Hamiltonian `Σ h_i σ_i⊗σ_i`.
    pub fn hamiltonian(&self) -> CMatrix {
        PauliDecomposition::diagonal(self.h).compose()
    }

    pub fn is_local(&self) -> bool {
        self.h.abs().max() <= LOCAL_TOL
    }

    /// `U⊗V`.
    pub fn local_unitary(&self) -> CMatrix {
        kron(&self.u, &self.v)
    }
}

fn det_sign(m: &Real3) -> f64 {
    if m.determinant() < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Normal form of an arbitrary 4×4 Hermitian `K`.
pub fn normal_form(k: &CMatrix) -> Result<NormalForm> {
    let dec = decompose(k)?;
    normal_form_of(&dec)
}

pub fn normal_form_of(dec: &PauliDecomposition) -> Result<NormalForm> {
    let m = dec.m;
    let (h, r, s) = if m.abs().max() <= LOCAL_TOL {
        (Vec3::zeros(), Real3::identity(), Real3::identity())
    } else {
        let svd = svd3(&m)?;
        let (d1, d2) = (det_sign(&svd.o1), det_sign(&svd.o2));
        let fix1 = Real3::from_diagonal(&Vec3::new(1.0, 1.0, d1));
        let fix2 = Real3::from_diagonal(&Vec3::new(1.0, 1.0, d2));
        let r = svd.o1 * fix1;
        let s = svd.o2.transpose() * fix2;
        let h = Vec3::new(svd.d[0], svd.d[1], d1 * d2 * svd.d[2]);
        (h, r, s)
    };
    Ok(NormalForm {
        h,
        u: so3_to_su2(&r)?,
        v: so3_to_su2(&s)?,
        r,
        s,
        local_a: dec.a,
        local_b: dec.b,
        c0: dec.c0,
    })
}

/// Just the canonical triple.
pub fn normal_triple(k: &CMatrix) -> Result<Vec3> {
    Ok(normal_form(k)?.h)
}

#[derive(Debug, Clone)]
pub struct LuEquivalence {
    pub equivalent: bool,
    /// `(U, V)` with `(U⊗V)·K1_nl·(U⊗V)† = K2_nl`, present when equivalent.
    pub witness: Option<(CMatrix, CMatrix)>,
    pub h1: Vec3,
    pub h2: Vec3,
}

/// Compares the nonlocal parts of two Hamiltonians up to local unitaries.
pub fn is_lu_equivalent(k1: &CMatrix, k2: &CMatrix) -> Result<LuEquivalence> {
    let (n1, n2) = (normal_form(k1)?, normal_form(k2)?);
    let equivalent = (n1.h - n2.h).abs().max() <= 1e-8;
    let witness = equivalent.then(|| {
        let u = n2.u.adjoint() * &n1.u;
        let v = n2.v.adjoint() * &n1.v;
        (u, v)
    });
    Ok(LuEquivalence {
        equivalent,
        witness,
        h1: n1.h,
        h2: n2.h,
    })
}

/// `(U⊗V)·nonlocal(K)·(U⊗V)†`.
pub fn conjugate_nonlocal(k: &CMatrix, u: &CMatrix, v: &CMatrix) -> Result<CMatrix> {
    let uv = kron(u, v);
    Ok(&uv * nonlocal_part(k)? * uv.adjoint())
}
