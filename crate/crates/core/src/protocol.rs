//! Explicit local-unitary simulation protocols for two-qubit Hamiltonians.
//!
//! A protocol is a list of `(p_k, U_k, V_k)`: run the source `H` for a
//! fraction `p_k` of the time, conjugated by `U_k⊗V_k`. To first order the
//! net generator is the average Hamiltonian `Σ p_k (U_k⊗V_k) H (U_k⊗V_k)†`,
//! which a correct protocol makes equal to `s·H'`.

use rand::Rng;

use crate::error::{contract, Error, Result};
use crate::generic_sim::{decouple_ddim, DecoupleSide};
use crate::normal_form::{normal_form, NormalForm};
use crate::numerics::{
    c, expm_i, identity, is_hermitian, is_unitary, kron, pauli, phase_min_distance,
    so3_to_su2, spectral_norm, CMatrix, Real3, Vec3,
};
use crate::pauli::{decompose, nonlocal_part, pauli_pair, PauliDecomposition};
use crate::polyhedron::{optimal_factor, optimal_point, s_majorizes, VertexLabel};

/// Residual threshold for a protocol to count as verified.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolStep {
    /// Fraction of the total source time spent in this step.
    pub p: f64,
    pub u: CMatrix,
    pub v: CMatrix,
    /// Polyhedron vertex this step realizes, when it came from one.
    pub label: Option<VertexLabel>,
}

impl ProtocolStep {
    pub fn new(p: f64, u: CMatrix, v: CMatrix) -> Self {
        Self { p, u, v, label: None }
    }
}

/// How a protocol was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    Optimal,
    Baseline,
    Inversion,
    UniversalInversion,
    Decouple,
    Custom,
}

impl ProtocolKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProtocolKind::Optimal => "optimal",
            ProtocolKind::Baseline => "baseline",
            ProtocolKind::Inversion => "inversion",
            ProtocolKind::UniversalInversion => "universal-inversion",
            ProtocolKind::Decouple => "decouple",
            ProtocolKind::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "optimal" => ProtocolKind::Optimal,
            "baseline" => ProtocolKind::Baseline,
            "inversion" => ProtocolKind::Inversion,
            "universal-inversion" => ProtocolKind::UniversalInversion,
            "decouple" => ProtocolKind::Decouple,
            "custom" => ProtocolKind::Custom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolMeta {
    pub kind: ProtocolKind,
    /// Face family of the optimum, for geometry-derived protocols.
    pub case: Option<u8>,
    pub vertices: Vec<VertexLabel>,
}

impl ProtocolMeta {
    pub fn of(kind: ProtocolKind) -> Self {
        Self {
            kind,
            case: None,
            vertices: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationProtocol {
    pub steps: Vec<ProtocolStep>,
    /// Achieved time ratio `t'/t`.
    pub s: f64,
    pub source: CMatrix,
    pub target: CMatrix,
    pub final_local: Option<(CMatrix, CMatrix)>,
    pub meta: ProtocolMeta,
}

impl SimulationProtocol {
    /// Weights sum to one, unitaries are unitary and two-dimensional.
    pub fn validate(&self) -> Result<()> {
        if self.steps.is_empty() {
            return Err(contract("protocol has no steps"));
        }
        let total: f64 = self.steps.iter().map(|s| s.p).sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(contract(format!("step weights sum to {total}, not 1")));
        }
        for (k, st) in self.steps.iter().enumerate() {
            if !(st.p > 0.0 && st.p <= 1.0 + 1e-12) {
                return Err(contract(format!("step {k}: weight {} outside (0, 1]", st.p)));
            }
            if st.u.shape() != (2, 2) || st.v.shape() != (2, 2) {
                return Err(contract(format!("step {k}: local unitaries must be 2x2")));
            }
            if !is_unitary(&st.u, 1e-9) || !is_unitary(&st.v, 1e-9) {
                return Err(contract(format!("step {k}: local operator is not unitary")));
            }
        }
        if !(self.s > 0.0) {
            return Err(contract(format!("factor {} is not positive", self.s)));
        }
        for (name, m) in [("source", &self.source), ("target", &self.target)] {
            if m.shape() != (4, 4) || !is_hermitian(m, 1e-8) {
                return Err(contract(format!("{name} must be a 4x4 Hermitian matrix")));
            }
        }
        Ok(())
    }

    /// `Σ p_k (U_k⊗V_k) H_nl (U_k⊗V_k)†` for the nonlocal part of the source.
    pub fn average(&self) -> Result<CMatrix> {
        average_of(&self.steps, &nonlocal_part(&self.source)?)
    }
}

pub fn average_of(steps: &[ProtocolStep], h: &CMatrix) -> Result<CMatrix> {
    let mut acc = CMatrix::zeros(h.nrows(), h.ncols());
    for st in steps {
        let uv = kron(&st.u, &st.v);
        if uv.shape() != h.shape() {
            return Err(contract("step dimension does not match the Hamiltonian"));
        }
        acc += &uv * h * uv.adjoint() * c(st.p, 0.0);
    }
    Ok(acc)
}

/// Frobenius distance between the protocol's nonlocal average Hamiltonian
/// and `s·H'_nl`.
pub fn verify_average(prot: &SimulationProtocol) -> Result<f64> {
    prot.validate()?;
    let avg = nonlocal_part(&prot.average()?)?;
    let want = nonlocal_part(&prot.target)? * c(prot.s, 0.0);
    Ok(crate::numerics::frobenius(&(avg - want)))
}

fn identity_step() -> ProtocolStep {
    ProtocolStep::new(1.0, identity(2), identity(2))
}

/// Time-optimal protocol simulating `Hp` with `H`.
///
/// A local `Hp` yields a decoupling protocol (the nonlocal part of `H` is
/// twirled away on the A side); a local `H` cannot simulate anything else.
pub fn synthesize(h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol> {
    let nf_h = normal_form(h)?;
    let nf_p = normal_form(hp)?;
    if nf_h.is_local() {
        return Err(Error::Infeasible(
            "source Hamiltonian is local; it can only simulate the zero Hamiltonian".into(),
        ));
    }
    if nf_p.is_local() {
        return decoupling_protocol(h, hp);
    }
    synthesize_from_normal_forms(h, hp, &nf_h, &nf_p, ProtocolKind::Optimal)
}

fn decoupling_protocol(h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol> {
    let schedule = decouple_ddim(&nonlocal_part(h)?, 2, DecoupleSide::A)?;
    let steps = schedule
        .steps
        .into_iter()
        .map(|st| ProtocolStep::new(st.weight, st.a, st.b))
        .collect();
    Ok(SimulationProtocol {
        steps,
        s: 1.0,
        source: h.clone(),
        target: hp.clone(),
        final_local: None,
        meta: ProtocolMeta::of(ProtocolKind::Decouple),
    })
}

fn synthesize_from_normal_forms(
    h: &CMatrix,
    hp: &CMatrix,
    nf_h: &NormalForm,
    nf_p: &NormalForm,
    kind: ProtocolKind,
) -> Result<SimulationProtocol> {
    let opt = optimal_point(&nf_p.h, &nf_h.h)?;
    let flip = if opt.pair.flipped {
        Real3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0))
    } else {
        Real3::identity()
    };
    // Pauli representations: M_H = A·D_h·Bᵀ and M_P = A'·D_p·B'ᵀ. A vertex
    // term π·D_h·S contributes A'·π·Aᵀ·M_H·B·S·B'ᵀ, realized by the
    // conjugation whose rotations are R_U = A·πᵀ·A'ᵀ and S_V = B·S·B'ᵀ.
    let (a, b) = (nf_h.r, nf_h.s);
    let (ap, bp) = (nf_p.r, nf_p.s);
    let mut steps = Vec::with_capacity(opt.decomposition.terms.len());
    for (p, label) in &opt.decomposition.terms {
        let left = label.left();
        let right = flip * label.right() * flip;
        let r_u = a * left.transpose() * ap.transpose();
        let s_v = b * right * bp.transpose();
        steps.push(ProtocolStep {
            p: *p,
            u: so3_to_su2(&r_u)?,
            v: so3_to_su2(&s_v)?,
            label: Some(*label),
        });
    }
    if steps.is_empty() {
        steps.push(identity_step());
    }
    Ok(SimulationProtocol {
        steps,
        s: opt.result.s,
        source: h.clone(),
        target: hp.clone(),
        final_local: None,
        meta: ProtocolMeta {
            kind,
            case: Some(opt.result.face_case),
            vertices: opt.decomposition.labels(),
        },
    })
}

/// Optimal protocol for simulating `−H` with `H`.
pub fn invert_optimal(h: &CMatrix) -> Result<SimulationProtocol> {
    let nf_h = normal_form(h)?;
    if nf_h.is_local() {
        return Err(Error::Infeasible("cannot invert a local Hamiltonian".into()));
    }
    let target = -nonlocal_part(h)?;
    let nf_t = normal_form(&target)?;
    synthesize_from_normal_forms(h, &target, &nf_h, &nf_t, ProtocolKind::Inversion)
}

/// `H`-independent steps together with the factor they achieve.
#[derive(Debug, Clone)]
pub struct ProtocolTemplate {
    pub steps: Vec<ProtocolStep>,
    pub s: f64,
}

impl ProtocolTemplate {
    /// Binds the template to a source; the target is `−H_nl`.
    pub fn instantiate(&self, h: &CMatrix) -> Result<SimulationProtocol> {
        let target = -nonlocal_part(h)?;
        Ok(SimulationProtocol {
            steps: self.steps.clone(),
            s: self.s,
            source: h.clone(),
            target,
            final_local: None,
            meta: ProtocolMeta::of(ProtocolKind::UniversalInversion),
        })
    }
}

/// Three equal slices conjugated by `σ_x`, `σ_y`, `σ_z` on A:
/// `Σ_i σ_i σ_j σ_i = −σ_j`, so any purely nonlocal `H` averages to `−H/3`.
pub fn invert_universal() -> ProtocolTemplate {
    let steps = (1..=3)
        .map(|k| ProtocolStep::new(1.0 / 3.0, pauli(k), identity(2)))
        .collect();
    ProtocolTemplate { steps, s: 1.0 / 3.0 }
}

/// `s_{H|H'} · s_{H'|H}`.
pub fn interconversion_product(h: &CMatrix, hp: &CMatrix) -> Result<f64> {
    let (a, b) = (normal_form(h)?.h, normal_form(hp)?.h);
    Ok(optimal_factor(&b, &a)?.s * optimal_factor(&a, &b)?.s)
}

/// Largest time ratio reachable from `H` towards `H'` (normal-form triples).
pub fn optimal_s(h: &CMatrix, hp: &CMatrix) -> Result<f64> {
    Ok(optimal_factor(&normal_form(hp)?.h, &normal_form(h)?.h)?.s)
}

/// Stroboscopic check of a protocol: `N` repetitions of the product of the
/// conjugated short evolutions, compared with `e^{−i s H'_nl t}` up to
/// global phase in operator norm.
///
/// Local terms of the source are undone after each slice with
/// `e^{+iK_A τ}⊗e^{+iK_B τ}`, which is exact to first order.
pub fn stroboscopic_error(prot: &SimulationProtocol, t_total: f64, cycles: usize) -> Result<f64> {
    prot.validate()?;
    if cycles == 0 {
        return Err(contract("stroboscopic_error needs at least one cycle"));
    }
    let norm = spectral_norm(&prot.source);
    if norm * t_total.abs() > 10.0 + 1e-12 {
        return Err(contract(format!(
            "||H||*t = {:.3} exceeds 10; the first-order regime does not apply",
            norm * t_total.abs()
        )));
    }
    let dec = decompose(&prot.source)?;
    let ka = single_qubit(&dec.a);
    let kb = single_qubit(&dec.b);
    let dt = t_total / cycles as f64;
    let mut cycle = identity(4);
    for st in &prot.steps {
        let tau = st.p * dt;
        let slice = kron(&expm_i(&ka, -tau)?, &expm_i(&kb, -tau)?) * expm_i(&prot.source, tau)?;
        let uv = kron(&st.u, &st.v);
        cycle = &uv * slice * uv.adjoint() * cycle;
    }
    let w = matrix_power(&cycle, cycles);
    let want = expm_i(&nonlocal_part(&prot.target)?, prot.s * t_total)?;
    phase_min_distance(&w, &want)
}

fn single_qubit(coeffs: &Vec3) -> CMatrix {
    (0..3).fold(CMatrix::zeros(2, 2), |acc, k| acc + pauli(k + 1) * c(coeffs[k], 0.0))
}

fn matrix_power(m: &CMatrix, mut n: usize) -> CMatrix {
    let mut base = m.clone();
    let mut out = identity(m.nrows());
    while n > 0 {
        if n & 1 == 1 {
            out = &out * &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    out
}

/// One step of a protocol with a one-qubit ancilla on each side.
#[derive(Debug, Clone)]
pub struct AncillaStep {
    pub p: f64,
    /// Acts on `A⊗A'`.
    pub u: CMatrix,
    /// Acts on `B⊗B'`.
    pub v: CMatrix,
}

fn embed_with_ancillas(h: &CMatrix) -> CMatrix {
    // Tensor order A A' B B'.
    let mut out = CMatrix::zeros(16, 16);
    for i in 0..4 {
        for j in 0..4 {
            let coeff = (pauli_pair(i, j) * h).trace() / c(4.0, 0.0);
            if coeff.norm() == 0.0 {
                continue;
            }
            let a = kron(&pauli(i), &identity(2));
            let b = kron(&pauli(j), &identity(2));
            out += kron(&a, &b) * coeff;
        }
    }
    out
}

/// `⟨0_{A'} 0_{B'}| Σ p_k (U_k⊗V_k)(H⊗I)(U_k⊗V_k)† |0_{A'} 0_{B'}⟩`.
pub fn ancilla_effective(h: &CMatrix, steps: &[AncillaStep]) -> Result<CMatrix> {
    if h.shape() != (4, 4) || !is_hermitian(h, 1e-10) {
        return Err(contract("ancilla_effective: H must be a 4x4 Hermitian matrix"));
    }
    let full = embed_with_ancillas(h);
    let mut acc = CMatrix::zeros(16, 16);
    for (k, st) in steps.iter().enumerate() {
        if st.u.shape() != (4, 4) || st.v.shape() != (4, 4) {
            return Err(contract(format!(
                "ancilla step {k}: unitaries must act on a qubit plus a one-qubit ancilla (4x4)"
            )));
        }
        if !is_unitary(&st.u, 1e-9) || !is_unitary(&st.v, 1e-9) {
            return Err(contract(format!("ancilla step {k}: operator is not unitary")));
        }
        let uv = kron(&st.u, &st.v);
        acc += &uv * &full * uv.adjoint() * c(st.p, 0.0);
    }
    let idx = |a: usize, b: usize| (a * 2) * 4 + b * 2;
    Ok(CMatrix::from_fn(4, 4, |r, col| {
        acc[(idx(r / 2, r % 2), idx(col / 2, col % 2))]
    }))
}

/// Random ancilla protocol with `n` steps and Dirichlet-ish weights.
pub fn random_ancilla_steps<R: Rng>(n: usize, rng: &mut R) -> Vec<AncillaStep> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter()
        .map(|w| AncillaStep {
            p: w / total,
            u: crate::numerics::random_unitary(4, rng),
            v: crate::numerics::random_unitary(4, rng),
        })
        .collect()
}

/// Whether an effective Hamiltonian stays within what `H` can reach at unit
/// rate, i.e. its normal-form triple is s-majorized by that of `H`.
pub fn within_reach(h: &CMatrix, effective: &CMatrix) -> Result<bool> {
    let src = normal_form(h)?.h;
    let eff = normal_form(effective)?.h;
    Ok(s_majorizes(&eff, &src))
}

/// `Σ h_i σ_i⊗σ_i`.
pub fn diagonal_hamiltonian(h: Vec3) -> CMatrix {
    PauliDecomposition::diagonal(h).compose()
}
