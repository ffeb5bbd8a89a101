//! Dense linear-algebra kernel for small complex and 3×3 real matrices.
//!
//! Everything here is a pure function over owned values. Complex matrices
//! are `nalgebra` dynamic matrices; rotations are fixed 3×3 real matrices.
//!
//! Pauli index convention used throughout the crate: 1 ↔ x, 2 ↔ y, 3 ↔ z,
//! with 0 reserved for the identity.

use nalgebra::{DMatrix, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{contract, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
/// 3×3 real matrix; orthogonal for rotations, arbitrary for Pauli representations.
pub type Real3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;

/// Default comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 16;

const EIG_EPS: f64 = 1e-15;
const EIG_MAX_ITER: usize = 10_000;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Single-qubit Pauli matrix: 0 → I, 1 → σ_x, 2 → σ_y, 3 → σ_z.
pub fn pauli(k: usize) -> CMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match k {
        0 => CMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        1 => CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        2 => CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => panic!("pauli index {k} out of range 0..=3"),
    }
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn dagger(a: &CMatrix) -> CMatrix {
    a.adjoint()
}

/// `A X A†`.
pub fn conjugate(a: &CMatrix, x: &CMatrix) -> CMatrix {
    a * x * a.adjoint()
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.trace()
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermiticity within `tol`, scaled by the matrix magnitude.
pub fn is_hermitian(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && max_abs(&(a - a.adjoint())) <= tol * max_abs(a).max(1.0)
}

pub fn is_unitary(a: &CMatrix, tol: f64) -> bool {
    a.is_square() && max_abs(&(a.adjoint() * a - identity(a.nrows()))) <= tol
}

pub fn is_rotation(r: &Real3, tol: f64) -> bool {
    is_orthogonal(r, tol) && (r.determinant() - 1.0).abs() <= tol
}

pub fn is_orthogonal(r: &Real3, tol: f64) -> bool {
    (r.transpose() * r - Real3::identity()).abs().max() <= tol
}

fn check_hermitian(h: &CMatrix, what: &str) -> Result<()> {
    if !h.is_square() {
        return Err(contract(format!(
            "{what}: expected a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if h.nrows() > MAX_DIM {
        return Err(Error::Capacity(format!(
            "{what}: dimension {} exceeds {MAX_DIM}",
            h.nrows()
        )));
    }
    if !is_hermitian(h, 1e-10) {
        return Err(contract(format!("{what}: matrix is not Hermitian")));
    }
    Ok(())
}

/// Eigendecomposition `H = Q Λ Q†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.values.len();
        let lambda = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(self.values[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

pub fn herm_eig(h: &CMatrix) -> Result<HermEig> {
    check_hermitian(h, "herm_eig")?;
    // Symmetrize so roundoff in the input does not leak into the solver.
    let sym = (h + h.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, EIG_EPS, EIG_MAX_ITER).ok_or(Error::Numeric {
        what: "herm_eig",
        iterations: EIG_MAX_ITER,
    })?;
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermEig { values, vectors })
}

/// `e^{−iHt}` for Hermitian `H`.
pub fn expm_i(h: &CMatrix, t: f64) -> Result<CMatrix> {
    check_hermitian(h, "expm_i")?;
    if t == 0.0 {
        return Ok(identity(h.nrows()));
    }
    let eig = herm_eig(h)?;
    let n = h.nrows();
    let phases = CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, -eig.values[i] * t)
        } else {
            c(0.0, 0.0)
        }
    });
    Ok(&eig.vectors * phases * eig.vectors.adjoint())
}

/// Largest singular value.
pub fn spectral_norm(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    match herm_eig(&gram) {
        Ok(e) => e.values[0].max(0.0).sqrt(),
        // The Gram matrix is Hermitian by construction; fall back to the
        // Frobenius bound if the solver ever refuses it.
        Err(_) => frobenius(a),
    }
}

/// Eigenphases of a unitary.
///
/// Schur first; when it stalls (it can on near-identity input), diagonalize
/// a generic Hermitian combination of the commuting parts `(Z+Z†)/2` and
/// `(Z−Z†)/2i` and read phases off Rayleigh quotients.
fn unitary_phases(z: &CMatrix) -> Result<Vec<f64>> {
    if let Some(schur) = nalgebra::linalg::Schur::try_new(z.clone(), EIG_EPS, EIG_MAX_ITER) {
        let (_, t) = schur.unpack();
        return Ok((0..t.nrows()).map(|k| t[(k, k)].arg()).collect());
    }
    let re = (z + z.adjoint()) * c(0.5, 0.0);
    let im = (z - z.adjoint()) * c(0.0, -0.5);
    for (alpha, beta) in [(0.8191520442889918, 0.5735764363510462), (0.3090169943749474, 0.9510565162951535)] {
        let k = &re * c(alpha, 0.0) + &im * c(beta, 0.0);
        let Ok(eig) = herm_eig(&k) else { continue };
        let mut phases = Vec::with_capacity(z.nrows());
        let mut ok = true;
        for j in 0..z.nrows() {
            let v = eig.vectors.column(j);
            let zv = z * v;
            let lambda = (v.adjoint() * &zv)[(0, 0)];
            if (zv - v * lambda).norm() > 1e-8 {
                ok = false;
                break;
            }
            phases.push(lambda.arg());
        }
        if ok {
            return Ok(phases);
        }
    }
    Err(Error::Numeric {
        what: "phase_min_distance",
        iterations: EIG_MAX_ITER,
    })
}

/// `min_φ ‖A − e^{iφ} B‖₂` for unitary `A`, `B` of equal size.
///
/// `B†A` is unitary with spectrum on the unit circle, so the distance is the
/// chord from `e^{iφ}` to the farthest eigenvalue, minimized by centring `φ`
/// on the shortest arc that covers the whole spectrum.
pub fn phase_min_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(contract("phase_min_distance: shape mismatch"));
    }
    let z = b.adjoint() * a;
    let mut angles = unitary_phases(&z)?;
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    let mut widest_gap = 0.0_f64;
    for k in 0..n {
        let next = if k + 1 < n {
            angles[k + 1]
        } else {
            angles[0] + std::f64::consts::TAU
        };
        widest_gap = widest_gap.max(next - angles[k]);
    }
    let cover = (std::f64::consts::TAU - widest_gap).max(0.0);
    Ok(2.0 * (cover / 4.0).sin())
}

/// Real 3×3 singular value decomposition `M = O₁ · diag(d) · O₂`.
#[derive(Debug, Clone, Copy)]
pub struct Svd3 {
    pub o1: Real3,
    /// Singular values, descending and nonnegative.
    pub d: Vec3,
    pub o2: Real3,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Real3 {
        self.o1 * Real3::from_diagonal(&self.d) * self.o2
    }
}

pub fn svd3(m: &Real3) -> Result<Svd3> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(contract("svd3: non-finite entry"));
    }
    let svd = nalgebra::linalg::SVD::try_new(*m, true, true, 1e-15, 10_000).ok_or(
        Error::Numeric {
            what: "svd3",
            iterations: 10_000,
        },
    )?;
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut o1 = Real3::zeros();
    let mut o2 = Real3::zeros();
    let mut d = Vec3::zeros();
    for (slot, &k) in order.iter().enumerate() {
        d[slot] = svd.singular_values[k].max(0.0);
        o1.set_column(slot, &u.column(k));
        o2.set_row(slot, &vt.row(k));
    }
    Ok(Svd3 { o1, d, o2 })
}

/// SO(3) image of a single-qubit unitary under `U σ_i U† = Σ_l R_il σ_l`.
///
/// The global phase of `U` is irrelevant, so any element of U(2) is accepted.
/// With this convention the map reverses products:
/// `R(UV) = R(V)·R(U)`.
pub fn su2_to_so3(u: &CMatrix) -> Result<Real3> {
    if u.shape() != (2, 2) || !is_unitary(u, 1e-9) {
        return Err(contract("su2_to_so3: input is not a 2x2 unitary"));
    }
    let sig = [pauli(1), pauli(2), pauli(3)];
    let ud = u.adjoint();
    let mut r = Real3::zeros();
    for i in 0..3 {
        let rotated = u * &sig[i] * &ud;
        for l in 0..3 {
            r[(i, l)] = 0.5 * (&sig[l] * &rotated).trace().re;
        }
    }
    Ok(r)
}

/// Canonical SU(2) lift of a rotation; inverse of [`su2_to_so3`] up to sign.
///
/// The lift has `Re tr U ≥ 0`. When the trace vanishes the sign is fixed by
/// the first entry (row-major) with nonzero modulus: its imaginary part is
/// made positive, or its real part if the entry is real.
pub fn so3_to_su2(r: &Real3) -> Result<CMatrix> {
    if !is_rotation(r, 1e-8) {
        return Err(contract("so3_to_su2: input is not in SO(3)"));
    }
    // `r` acts by rows (R_il); the ordinary active rotation is its transpose.
    let rot = r.transpose();
    let (w, x, y, z) = quaternion_of(&rot);
    let mut u = CMatrix::from_row_slice(
        2,
        2,
        &[c(w, -z), c(-y, -x), c(y, -x), c(w, z)],
    );
    let tie = 1e-12;
    let flip = if w.abs() > tie {
        w < 0.0
    } else {
        match u.iter_row_major().find(|e| e.norm() > tie) {
            Some(e) if e.im.abs() > tie => e.im < 0.0,
            Some(e) => e.re < 0.0,
            None => false,
        }
    };
    if flip {
        u = -u;
    }
    Ok(u)
}

trait RowMajor {
    fn iter_row_major(&self) -> Box<dyn Iterator<Item = Complex64> + '_>;
}

impl RowMajor for CMatrix {
    fn iter_row_major(&self) -> Box<dyn Iterator<Item = Complex64> + '_> {
        let cols = self.ncols();
        Box::new((0..self.len()).map(move |k| self[(k / cols, k % cols)]))
    }
}

/// Unit quaternion `(w, x, y, z)` of an active rotation matrix.
fn quaternion_of(m: &Real3) -> (f64, f64, f64, f64) {
    let t = m.trace();
    let (w, x, y, z) = if t > 0.0 {
        let s = (t + 1.0).sqrt() * 2.0;
        (
            0.25 * s,
            (m[(2, 1)] - m[(1, 2)]) / s,
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(1, 0)] - m[(0, 1)]) / s,
        )
    } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
        let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
        (
            (m[(2, 1)] - m[(1, 2)]) / s,
            0.25 * s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
        )
    } else if m[(1, 1)] > m[(2, 2)] {
        let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
        (
            (m[(0, 2)] - m[(2, 0)]) / s,
            (m[(0, 1)] + m[(1, 0)]) / s,
            0.25 * s,
            (m[(1, 2)] + m[(2, 1)]) / s,
        )
    } else {
        let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
        (
            (m[(1, 0)] - m[(0, 1)]) / s,
            (m[(0, 2)] + m[(2, 0)]) / s,
            (m[(1, 2)] + m[(2, 1)]) / s,
            0.25 * s,
        )
    };
    let n = (w * w + x * x + y * y + z * z).sqrt();
    (w / n, x / n, y / n, z / n)
}

// ---------------------------------------------------------------------------
// Seeded random generators
// ---------------------------------------------------------------------------

pub type SimRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss<R: Rng>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Hermitian matrix with Gaussian entries (GUE-like scaling).
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(gauss(rng), gauss(rng)));
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Haar-random unitary via QR with phase correction.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(gauss(rng), gauss(rng)));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-random element of SU(2).
pub fn random_su2<R: Rng>(rng: &mut R) -> CMatrix {
    let mut q = [gauss(rng), gauss(rng), gauss(rng), gauss(rng)];
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    for v in q.iter_mut() {
        *v /= n;
    }
    let a = c(q[0], q[1]);
    let b = c(q[2], q[3]);
    CMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Uniformly random rotation.
pub fn random_so3<R: Rng>(rng: &mut R) -> Real3 {
    su2_to_so3(&random_su2(rng)).expect("random_su2 returns a unitary")
}

/// Random real 3×3 matrix with standard normal entries.
pub fn random_real3<R: Rng>(rng: &mut R) -> Real3 {
    Real3::from_fn(|_, _| gauss(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    fn close_up_to_sign(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        close(a, b, tol) || close(a, &-b, tol)
    }

    #[test]
    fn eig_of_sigma_z_is_diagonal() {
        let e = herm_eig(&pauli(3)).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        // Columns equal the standard basis up to phase.
        assert!((e.vectors[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!((e.vectors[(1, 1)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_of_sigma_x() {
        let e = herm_eig(&pauli(1)).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-12);
        assert!((e.values[1] + 1.0).abs() < 1e-12);
        let v0 = e.vectors.column(0);
        let v1 = e.vectors.column(1);
        // (1,1)/√2 and (1,−1)/√2 up to phase.
        assert!((v0[0].norm() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(((v0[0] - v0[1]).norm()) < 1e-12);
        assert!(((v1[0] + v1[1]).norm()) < 1e-12);
    }

    #[test]
    fn eig_random_hermitian_reconstructs() {
        let mut r = rng(7);
        for n in [1, 2, 4, 8, 16] {
            let h = random_hermitian(n, &mut r);
            let e = herm_eig(&h).unwrap();
            let resid = frobenius(&(&h - e.reconstruct()));
            assert!(resid <= 1e-9 * frobenius(&h).max(1.0), "n={n} resid={resid}");
            assert!(is_unitary(&e.vectors, 1e-9));
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let mut a = pauli(1);
        a[(0, 1)] = c(2.0, 0.0);
        assert!(matches!(herm_eig(&a), Err(Error::Contract(_))));
        let big = identity(17);
        assert!(matches!(herm_eig(&big), Err(Error::Capacity(_))));
    }

    #[test]
    fn expm_sigma_z_quarter_turn() {
        let u = expm_i(&pauli(3), FRAC_PI_2).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[c(0.0, -1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(close(&u, &want, 1e-12));
    }

    #[test]
    fn expm_at_zero_is_identity() {
        let h = random_hermitian(4, &mut rng(3));
        assert_eq!(expm_i(&h, 0.0).unwrap(), identity(4));
    }

    #[test]
    fn expm_xx_closed_form() {
        let xx = kron(&pauli(1), &pauli(1));
        for t in [0.3_f64, 1.0, 2.7] {
            let want = identity(4) * c(t.cos(), 0.0) - &xx * c(0.0, t.sin());
            assert!(close(&expm_i(&xx, t).unwrap(), &want, 1e-12));
        }
    }

    #[test]
    fn svd3_diagonal_passthrough() {
        let m = Real3::from_diagonal(&Vec3::new(3.0, 2.0, 1.0));
        let s = svd3(&m).unwrap();
        assert!((s.d - Vec3::new(3.0, 2.0, 1.0)).norm() < 1e-12);
        assert!((s.reconstruct() - m).norm() < 1e-12);
    }

    #[test]
    fn svd3_recovers_rank_one() {
        let mut r = rng(11);
        let (a, b) = (random_so3(&mut r), random_so3(&mut r));
        let m = a * Real3::from_diagonal(&Vec3::new(1.0, 0.0, 0.0)) * b;
        let s = svd3(&m).unwrap();
        assert!((s.d - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((s.reconstruct() - m).norm() < 1e-12);
        assert!(is_orthogonal(&s.o1, 1e-9) && is_orthogonal(&s.o2, 1e-9));
    }

    #[test]
    fn svd3_negative_determinant() {
        let m = Real3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0)) / 3.0;
        let s = svd3(&m).unwrap();
        assert!((s.d - Vec3::repeat(1.0 / 3.0)).norm() < 1e-12);
        assert!(((s.o1 * s.o2).determinant() + 1.0).abs() < 1e-9);
    }

    #[test]
    fn so3_images_of_paulis() {
        let r = su2_to_so3(&pauli(1)).unwrap();
        assert!((r - Real3::from_diagonal(&Vec3::new(1.0, -1.0, -1.0))).norm() < 1e-12);
        assert!((su2_to_so3(&identity(2)).unwrap() - Real3::identity()).norm() < 1e-12);
        // (σx+σy)/√2 swaps x and y and negates z.
        let u1 = (pauli(1) + pauli(2)) * c(FRAC_1_SQRT_2, 0.0);
        let r1 = su2_to_so3(&u1).unwrap();
        let want = Real3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0);
        assert!((r1 - want).norm() < 1e-12);
    }

    #[test]
    fn canonical_lifts() {
        assert_eq!(so3_to_su2(&Real3::identity()).unwrap(), identity(2));
        let s3 = Real3::from_diagonal(&Vec3::new(-1.0, -1.0, 1.0));
        let u = so3_to_su2(&s3).unwrap();
        // ±iσ_z; the tie rule picks the positive-imaginary first entry.
        assert!(close(&u, &(pauli(3) * c(0.0, 1.0)), 1e-12));
        assert!((su2_to_so3(&u).unwrap() - s3).norm() < 1e-12);
    }

    #[test]
    fn lift_rejects_reflections() {
        let refl = Real3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
        assert!(so3_to_su2(&refl).is_err());
        let mut bad = pauli(1);
        bad[(0, 0)] = c(1.0, 0.0);
        assert!(su2_to_so3(&bad).is_err());
    }

    #[test]
    fn double_cover_round_trip() {
        let mut r = rng(1234);
        for _ in 0..10_000 {
            let u = random_su2(&mut r);
            let rot = su2_to_so3(&u).unwrap();
            assert!(is_rotation(&rot, 1e-9));
            let back = so3_to_su2(&rot).unwrap();
            assert!(close_up_to_sign(&back, &u, 1e-8));
        }
    }

    #[test]
    fn so3_round_trip_from_rotations() {
        let mut r = rng(99);
        for _ in 0..1000 {
            let rot = random_so3(&mut r);
            let u = so3_to_su2(&rot).unwrap();
            assert!((u.determinant() - c(1.0, 0.0)).norm() < 1e-9);
            assert!((su2_to_so3(&u).unwrap() - rot).abs().max() <= 1e-8);
        }
    }

    #[test]
    fn map_reverses_products() {
        let mut r = rng(5);
        for _ in 0..1000 {
            let (u, v) = (random_su2(&mut r), random_su2(&mut r));
            let ruv = su2_to_so3(&(&u * &v)).unwrap();
            let want = su2_to_so3(&v).unwrap() * su2_to_so3(&u).unwrap();
            assert!((ruv - want).abs().max() <= 1e-8);
        }
    }

    #[test]
    fn expm_group_law() {
        let mut r = rng(21);
        for n in [2, 4, 8] {
            let h = random_hermitian(n, &mut r);
            let (t1, t2) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
            let lhs = expm_i(&h, t1).unwrap() * expm_i(&h, t2).unwrap();
            assert!(close(&lhs, &expm_i(&h, t1 + t2).unwrap(), 1e-9));
            assert!(is_unitary(&lhs, 1e-9));
        }
    }

    #[test]
    fn svd3_reconstruction_sweep() {
        let mut r = rng(77);
        for k in 0..10_000 {
            let m = match k % 4 {
                0 => random_real3(&mut r),
                // rank deficient
                1 => {
                    let d = Vec3::new(gauss(&mut r).abs(), gauss(&mut r).abs(), 0.0);
                    random_so3(&mut r) * Real3::from_diagonal(&d) * random_so3(&mut r)
                }
                // repeated singular values
                2 => {
                    let a = gauss(&mut r).abs();
                    let d = Vec3::new(a, a, gauss(&mut r));
                    random_so3(&mut r) * Real3::from_diagonal(&d) * random_so3(&mut r)
                }
                _ => {
                    let a = gauss(&mut r);
                    random_so3(&mut r) * Real3::from_diagonal(&Vec3::repeat(a)) * random_so3(&mut r)
                }
            };
            let s = svd3(&m).unwrap();
            assert!((s.reconstruct() - m).norm() <= 1e-9 * m.norm().max(1.0));
            assert!(s.d[0] >= s.d[1] && s.d[1] >= s.d[2] && s.d[2] >= 0.0);
            assert!(is_orthogonal(&s.o1, 1e-9) && is_orthogonal(&s.o2, 1e-9));
        }
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let u = random_unitary(4, &mut rng(8));
        let v = &u * Complex64::from_polar(1.0, 0.7);
        assert!(phase_min_distance(&u, &v).unwrap() < 1e-12);
        let w = &u * expm_i(&kron(&pauli(3), &pauli(0)), 0.01).unwrap();
        let d = phase_min_distance(&w, &u).unwrap();
        // eigenphases ±0.01, so the best phase sits at 0 and the chord is 2 sin(0.005)
        assert!((d - 2.0 * 0.005_f64.sin()).abs() < 1e-12);
    }
}
