//! Universal but inefficient constructions: decoupling twirls, the two-stage
//! any-to-any simulation for two qubits, and a d-level version for
//! `d ≤ 4` built from diagonal extraction and projector averaging.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::DMatrix;

use crate::error::{contract, Error, Result};
use crate::normal_form::normal_form;
use crate::numerics::{
    c, identity, is_hermitian, is_unitary, kron, pauli, random_unitary, rng, CMatrix,
};
use crate::pauli::{decompose, nonlocal_part_bipartite, traceless_basis, PauliString};
use crate::protocol::{ProtocolKind, ProtocolMeta, ProtocolStep, SimulationProtocol};

/// Attempts with random local pre-rotations before giving up on a
/// degenerate source in [`simulate_generic_ddim`].
pub const MAX_PREROTATIONS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleStep {
    pub weight: f64,
    pub a: CMatrix,
    pub b: CMatrix,
}

/// Mixed-unitary average `H ↦ Σ w_k (A_k⊗B_k) H (A_k⊗B_k)†`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConjugationSchedule {
    pub steps: Vec<ScheduleStep>,
}

impl ConjugationSchedule {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.steps.first().map(|s| (s.a.nrows(), s.b.nrows()))
    }

    pub fn validate(&self) -> Result<()> {
        let (da, db) = self.dims().ok_or_else(|| contract("empty conjugation schedule"))?;
        let mut total = 0.0;
        for (k, st) in self.steps.iter().enumerate() {
            if !(0.0..=1.0 + 1e-12).contains(&st.weight) {
                return Err(contract(format!("schedule step {k}: weight {} outside [0, 1]", st.weight)));
            }
            if st.a.shape() != (da, da) || st.b.shape() != (db, db) {
                return Err(contract(format!("schedule step {k}: operator dimensions differ")));
            }
            if !is_unitary(&st.a, 1e-9) || !is_unitary(&st.b, 1e-9) {
                return Err(contract(format!("schedule step {k}: operator is not unitary")));
            }
            total += st.weight;
        }
        if (total - 1.0).abs() > 1e-10 {
            return Err(contract(format!("schedule weights sum to {total}, not 1")));
        }
        Ok(())
    }

    pub fn average(&self, h: &CMatrix) -> Result<CMatrix> {
        let mut acc = CMatrix::zeros(h.nrows(), h.ncols());
        for st in &self.steps {
            let ab = kron(&st.a, &st.b);
            if ab.shape() != h.shape() {
                return Err(contract("schedule dimension does not match the Hamiltonian"));
            }
            acc += &ab * h * ab.adjoint() * c(st.weight, 0.0);
        }
        Ok(acc)
    }

    fn uniform(ops: Vec<(CMatrix, CMatrix)>) -> Self {
        let w = 1.0 / ops.len() as f64;
        Self {
            steps: ops
                .into_iter()
                .map(|(a, b)| ScheduleStep { weight: w, a, b })
                .collect(),
        }
    }
}

fn check_square_hermitian(h: &CMatrix, dim: usize, what: &str) -> Result<()> {
    if h.shape() != (dim, dim) {
        return Err(contract(format!(
            "{what}: expected a {dim}x{dim} operator, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    if !is_hermitian(h, 1e-10) {
        return Err(contract(format!("{what}: operator is not Hermitian")));
    }
    Ok(())
}

/// Conjugation by every `P_i⊗P_j` with `P_i, P_j` n-qubit Pauli strings.
/// The average of any `H` is `(tr H / 4ⁿ)·I`.
pub fn decouple_qubits(h: &CMatrix, n: usize) -> Result<ConjugationSchedule> {
    if !(1..=2).contains(&n) {
        return Err(contract(format!("decouple_qubits supports n = 1 or 2 qubits per side, got {n}")));
    }
    check_square_hermitian(h, 1 << (2 * n), "decouple_qubits")?;
    let strings = PauliString::all(n)
        .iter()
        .map(|p| p.matrix())
        .collect::<Result<Vec<_>>>()?;
    let mut ops = Vec::with_capacity(strings.len() * strings.len());
    for pa in &strings {
        for pb in &strings {
            ops.push((pa.clone(), pb.clone()));
        }
    }
    Ok(ConjugationSchedule::uniform(ops))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoupleSide {
    A,
    Both,
}

impl DecoupleSide {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" | "a" => Some(Self::A),
            "both" => Some(Self::Both),
            _ => None,
        }
    }
}

/// `diag(ω^k)` with `ω = e^{2πi/d}`.
pub fn clock(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            let th = 2.0 * PI * r as f64 / d as f64;
            c(th.cos(), th.sin())
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `X|r+1⟩ = |r⟩` (indices mod d).
pub fn shift(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |r, col| if col == (r + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    (0..k).fold(identity(m.nrows()), |acc, _| acc * m)
}

/// The `d²` clock-and-shift products `Z^i X^j`, `j` outer.
pub fn clock_shift_group(d: usize) -> Vec<CMatrix> {
    let (z, x) = (clock(d), shift(d));
    let mut out = Vec::with_capacity(d * d);
    for j in 0..d {
        for i in 0..d {
            out.push(power(&z, i) * power(&x, j));
        }
    }
    out
}

/// Clock-and-shift twirl on `C^d⊗C^d`. Side A leaves `I⊗(tr_A H)/d`;
/// both sides leave `(tr H/d²)·I`.
pub fn decouple_ddim(h: &CMatrix, d: usize, side: DecoupleSide) -> Result<ConjugationSchedule> {
    if !(2..=4).contains(&d) {
        return Err(Error::Capacity(format!("decouple_ddim supports 2 <= d <= 4, got {d}")));
    }
    check_square_hermitian(h, d * d, "decouple_ddim")?;
    let group = clock_shift_group(d);
    let ops = match side {
        DecoupleSide::A => group.iter().map(|u| (u.clone(), identity(d))).collect(),
        DecoupleSide::Both => group
            .iter()
            .flat_map(|u| group.iter().map(move |v| (u.clone(), v.clone())))
            .collect(),
    };
    Ok(ConjugationSchedule::uniform(ops))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    /// 1, 2, 3 for X, Y, Z.
    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 1,
            PauliAxis::Y => 2,
            PauliAxis::Z => 3,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        match k {
            1 => Some(PauliAxis::X),
            2 => Some(PauliAxis::Y),
            3 => Some(PauliAxis::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> CMatrix {
        pauli(self.index())
    }
}

/// The 24 single-qubit Clifford unitaries (up to phase) in a fixed order.
pub fn clifford_group() -> Vec<CMatrix> {
    let s = c(FRAC_1_SQRT_2, 0.0);
    let i = c(0.0, 1.0);
    let mut out = vec![identity(2), pauli(3), pauli(1), pauli(2)];
    for (j, k, sign) in [(1, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0), (1, 2, -1.0), (1, 3, -1.0), (2, 3, -1.0)] {
        out.push((pauli(j) + pauli(k) * c(sign, 0.0)) * s);
    }
    for k in 1..=3 {
        for sign in [1.0, -1.0] {
            out.push((identity(2) - pauli(k) * i * c(sign, 0.0)) * s);
        }
    }
    for nx in [1.0, -1.0] {
        for ny in [1.0, -1.0] {
            for nz in [1.0, -1.0] {
                let n = pauli(1) * c(nx, 0.0) + pauli(2) * c(ny, 0.0) + pauli(3) * c(nz, 0.0);
                out.push((identity(2) + n * i) * c(0.5, 0.0));
            }
        }
    }
    out
}

/// First Clifford `U` (in [`clifford_group`] order) with `U·src·U† = sign·dst`.
pub fn clifford_conjugator(src: PauliAxis, dst: PauliAxis, positive: bool) -> CMatrix {
    let (p, q) = (src.matrix(), dst.matrix());
    let want = if positive { q } else { -q };
    clifford_group()
        .into_iter()
        .find(|u| crate::numerics::max_abs(&(u * &p * u.adjoint() - &want)) < 1e-12)
        .expect("the Clifford group acts transitively on signed Paulis")
}

/// Two-stage any-to-any simulation for two qubits.
///
/// `H` is rotated to normal form and its leading term moved onto `Z⊗Z`;
/// averaging over `{I,Z}⊗{I,Z}` keeps only `h₁ Z⊗Z` (plus local `Z`
/// terms). Each Pauli term `c'_ij σ_i⊗σ_j` of the target is then rebuilt
/// by a Clifford conjugation with weight `|c'_ij|/Σ|c'|`, so
/// `s = h₁/Σ|c'_ij|`.
pub fn baseline_simulation(h: &CMatrix, hp: &CMatrix) -> Result<SimulationProtocol> {
    let nf = normal_form(h)?;
    if nf.is_local() {
        return Err(Error::Infeasible("source Hamiltonian is local".into()));
    }
    let target = decompose(hp)?.m;
    let total: f64 = target.iter().map(|v| v.abs()).sum();
    if total <= crate::normal_form::LOCAL_TOL {
        return Err(contract("baseline_simulation: target has no nonlocal part"));
    }
    let had = (pauli(1) + pauli(3)) * c(FRAC_1_SQRT_2, 0.0);
    let pre_a = &had * &nf.u;
    let pre_b = &had * &nf.v;
    let twirl = [identity(2), pauli(3)];
    let mut steps = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let cij = target[(i, j)];
            if cij.abs() <= crate::normal_form::LOCAL_TOL {
                continue;
            }
            let ca = clifford_conjugator(PauliAxis::Z, PauliAxis::ALL[i], cij > 0.0);
            let cb = clifford_conjugator(PauliAxis::Z, PauliAxis::ALL[j], true);
            let w = cij.abs() / total / 4.0;
            for ta in &twirl {
                for tb in &twirl {
                    steps.push(ProtocolStep::new(w, &ca * ta * &pre_a, &cb * tb * &pre_b));
                }
            }
        }
    }
    Ok(SimulationProtocol {
        steps,
        s: nf.h[0] / total,
        source: h.clone(),
        target: hp.clone(),
        final_local: None,
        meta: ProtocolMeta::of(ProtocolKind::Baseline),
    })
}

impl From<&SimulationProtocol> for ConjugationSchedule {
    fn from(p: &SimulationProtocol) -> Self {
        Self {
            steps: p
                .steps
                .iter()
                .map(|s| ScheduleStep {
                    weight: s.p,
                    a: s.u.clone(),
                    b: s.v.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenericSimulation {
    pub schedule: ConjugationSchedule,
    pub s: f64,
    /// Random pre-rotations tried before the source became usable.
    pub prerotations: usize,
}

/// `η = Q (|x⟩⟨x| − |y⟩⟨y|) Q†` for each element of the traceless basis.
fn basis_as_projector_differences(d: usize) -> Vec<(CMatrix, usize, usize)> {
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        out.push((identity(d), 0, k));
    }
    let s = FRAC_1_SQRT_2;
    for j in 0..d {
        for k in j + 1..d {
            for imag in [false, true] {
                let mut q = identity(d);
                let off = if imag { c(0.0, s) } else { c(s, 0.0) };
                q[(j, j)] = c(s, 0.0);
                q[(k, j)] = off;
                q[(j, k)] = c(s, 0.0);
                q[(k, k)] = -off;
                out.push((q, j, k));
            }
        }
    }
    out
}

fn transposition(d: usize, a: usize, b: usize) -> CMatrix {
    let mut p = CMatrix::zeros(d, d);
    for k in 0..d {
        let img = if k == a { b } else if k == b { a } else { k };
        p[(img, k)] = c(1.0, 0.0);
    }
    p
}

/// Cyclic permutation of every basis state except `fixed`.
fn cycle_fixing(d: usize, fixed: usize) -> CMatrix {
    let others: Vec<usize> = (0..d).filter(|&k| k != fixed).collect();
    let mut p = CMatrix::zeros(d, d);
    p[(fixed, fixed)] = c(1.0, 0.0);
    for (n, &k) in others.iter().enumerate() {
        p[(others[(n + 1) % others.len()], k)] = c(1.0, 0.0);
    }
    p
}

/// `κ_qr`: coefficient of `T_q⊗T_r` (with `T_q = |q⟩⟨q| − I/d`) left after
/// averaging the diagonal `D` over the cycles fixing `q` and `r`.
fn kappa(diag: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    let df = d as f64;
    let e = DMatrix::from_fn(d, d, |q, a| {
        if q == a {
            df / (df - 1.0) - 1.0 / (df - 1.0)
        } else {
            -1.0 / (df - 1.0)
        }
    });
    &e * diag * e.transpose()
}

/// Simulation of an arbitrary `H'` by `H` on `C^d⊗C^d`, `d ≤ 4`.
///
/// Clock twirling reduces `H` to its diagonal `D`; averaging over the
/// cycles fixing `|q⟩` and `|r⟩` isolates `κ_qr T_q⊗T_r`. Every target term
/// `c'_ij η_i⊗η_j` splits into four signed `T_a⊗T_b`, each produced from
/// the strongest `κ` of the needed sign by a permutation and a basis change.
/// `d = 2` uses [`baseline_simulation`].
pub fn simulate_generic_ddim(h: &CMatrix, hp: &CMatrix, d: usize, seed: u64) -> Result<GenericSimulation> {
    if !(2..=4).contains(&d) {
        return Err(Error::Capacity(format!("simulate_generic_ddim supports 2 <= d <= 4, got {d}")));
    }
    check_square_hermitian(h, d * d, "simulate_generic_ddim source")?;
    check_square_hermitian(hp, d * d, "simulate_generic_ddim target")?;
    if d == 2 {
        let prot = baseline_simulation(h, hp)?;
        return Ok(GenericSimulation {
            schedule: ConjugationSchedule::from(&prot),
            s: prot.s,
            prerotations: 0,
        });
    }
    let basis = traceless_basis(d)?;
    let coeffs = basis.bipartite_coefficients(&nonlocal_part_bipartite(hp, d, d)?)?;
    let scale = coeffs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale <= 1e-12 {
        return Err(contract("simulate_generic_ddim: target has no nonlocal part"));
    }
    let mut r = rng(seed);
    for attempt in 0..=MAX_PREROTATIONS {
        let (wa, wb) = if attempt == 0 {
            (identity(d), identity(d))
        } else {
            (random_unitary(d, &mut r), random_unitary(d, &mut r))
        };
        let rotated = kron(&wa, &wb) * h * kron(&wa, &wb).adjoint();
        let diag = DMatrix::from_fn(d, d, |a, b| rotated[(a * d + b, a * d + b)].re);
        let k = kappa(&diag, d);
        let hscale = k.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let best = |positive: bool| {
            let mut pick: Option<(usize, usize, f64)> = None;
            for q in 0..d {
                for rr in 0..d {
                    let v = k[(q, rr)];
                    let ok = if positive { v > 0.0 } else { v < 0.0 };
                    if ok && pick.is_none_or(|(_, _, b)| v.abs() > b.abs()) {
                        pick = Some((q, rr, v));
                    }
                }
            }
            pick
        };
        let (Some(pos), Some(neg)) = (best(true), best(false)) else {
            continue;
        };
        if pos.2.abs() <= 1e-9 * hscale.max(1e-300) || hscale <= 1e-12 {
            continue;
        }
        return Ok(assemble_ddim(d, &coeffs, pos, neg, &wa, &wb, attempt));
    }
    Err(Error::Degenerate(format!(
        "no usable diagonal interaction after {MAX_PREROTATIONS} random local pre-rotations"
    )))
}

fn assemble_ddim(
    d: usize,
    coeffs: &DMatrix<f64>,
    pos: (usize, usize, f64),
    neg: (usize, usize, f64),
    wa: &CMatrix,
    wb: &CMatrix,
    attempt: usize,
) -> GenericSimulation {
    let parts = basis_as_projector_differences(d);
    // (unnormalized weight, fixed pair (q, r), A-side map, B-side map)
    let mut subterms: Vec<(f64, (usize, usize), CMatrix, CMatrix)> = Vec::new();
    for (i, (qa, xa, ya)) in parts.iter().enumerate() {
        for (j, (qb, xb, yb)) in parts.iter().enumerate() {
            let cij = coeffs[(i, j)];
            if cij.abs() <= 1e-12 {
                continue;
            }
            for (a, sa) in [(*xa, 1.0), (*ya, -1.0)] {
                for (b, sb) in [(*xb, 1.0), (*yb, -1.0)] {
                    let (q, r, kv) = if cij * sa * sb > 0.0 { pos } else { neg };
                    let ua = qa * transposition(d, q, a);
                    let ub = qb * transposition(d, r, b);
                    subterms.push((cij.abs() / kv.abs(), (q, r), ua, ub));
                }
            }
        }
    }
    let total: f64 = subterms.iter().map(|t| t.0).sum();
    let clocks: Vec<CMatrix> = (0..d).map(|k| power(&clock(d), k)).collect();
    let cycles = |fixed: usize| -> Vec<CMatrix> {
        let cyc = cycle_fixing(d, fixed);
        (0..d - 1).map(|k| power(&cyc, k)).collect()
    };
    let per_term = ((d * (d - 1)) * (d * (d - 1))) as f64;
    let mut steps = Vec::with_capacity(subterms.len() * per_term as usize);
    for (raw, (q, r), ua, ub) in &subterms {
        let w = raw / total / per_term;
        let (ca, cb) = (cycles(*q), cycles(*r));
        for ka in &ca {
            for kb in &cb {
                for za in &clocks {
                    for zb in &clocks {
                        steps.push(ScheduleStep {
                            weight: w,
                            a: ua * ka * za * wa,
                            b: ub * kb * zb * wb,
                        });
                    }
                }
            }
        }
    }
    GenericSimulation {
        schedule: ConjugationSchedule { steps },
        s: 1.0 / total,
        prerotations: attempt,
    }
}

/// `H = diag(1,−1,0)⊗diag(1,1,−2)` on two qutrits and its swap.
pub fn noswap_fixture() -> (CMatrix, CMatrix) {
    let diag = |v: [f64; 3]| CMatrix::from_fn(3, 3, |r, col| if r == col { c(v[r], 0.0) } else { c(0.0, 0.0) });
    let h = kron(&diag([1.0, -1.0, 0.0]), &diag([1.0, 1.0, -2.0]));
    let swapped = crate::pauli::swap_sides(&h, 3);
    (h, swapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{frobenius, max_abs, random_hermitian, rng};
    use crate::pauli::{nonlocal_part, pauli_pair};
    use crate::protocol::{optimal_s, verify_average};

    fn traceless(h: CMatrix) -> CMatrix {
        let n = h.nrows();
        let t = h.trace() / c(n as f64, 0.0);
        h - identity(n) * t
    }

    #[test]
    fn qubit_decoupling() {
        let xx = pauli_pair(1, 1);
        let sch = decouple_qubits(&xx, 1).unwrap();
        assert_eq!(sch.len(), 16);
        sch.validate().unwrap();
        assert!(max_abs(&sch.average(&xx).unwrap()) < 1e-15);
        let id = identity(4);
        assert!(max_abs(&(sch.average(&id).unwrap() - &id)) < 1e-15);
        let mut r = rng(5);
        for n in [1, 2] {
            let dim = 1 << (2 * n);
            let h = random_hermitian(dim, &mut r);
            let sch = decouple_qubits(&h, n).unwrap();
            assert_eq!(sch.len(), 1 << (4 * n));
            let want = identity(dim) * (h.trace() / c(dim as f64, 0.0));
            assert!(max_abs(&(sch.average(&h).unwrap() - want)) < 1e-12);
            assert!(max_abs(&sch.average(&traceless(h)).unwrap()) < 1e-12);
        }
        assert!(decouple_qubits(&xx, 2).is_err());
        assert!(decouple_qubits(&xx, 3).is_err());
    }

    #[test]
    fn ddim_decoupling() {
        let xx = pauli_pair(1, 1);
        let sch = decouple_ddim(&xx, 2, DecoupleSide::A).unwrap();
        assert_eq!(sch.len(), 4);
        let z = pauli(3);
        let x = pauli(1);
        let zx = &z * &x;
        for (st, want) in sch.steps.iter().zip([identity(2), z, x, zx]) {
            assert!(max_abs(&(&st.a - want)) < 1e-15);
        }
        assert!(max_abs(&sch.average(&xx).unwrap()) < 1e-15);

        let mut r = rng(7);
        for d in 2..=4 {
            let h = random_hermitian(d * d, &mut r);
            let both = decouple_ddim(&h, d, DecoupleSide::Both).unwrap();
            assert_eq!(both.len(), d.pow(4));
            both.validate().unwrap();
            let want = identity(d * d) * (h.trace() / c((d * d) as f64, 0.0));
            assert!(max_abs(&(both.average(&h).unwrap() - want)) < 1e-10);

            let one = decouple_ddim(&h, d, DecoupleSide::A).unwrap();
            assert_eq!(one.len(), d * d);
            let kb = crate::pauli::partial_trace_a(&h, d, d) * c(1.0 / d as f64, 0.0);
            assert!(max_abs(&(one.average(&h).unwrap() - kron(&identity(d), &kb))) < 1e-10);
        }
        assert!(matches!(decouple_ddim(&identity(25), 5, DecoupleSide::A), Err(Error::Capacity(_))));
    }

    #[test]
    fn clifford_conjugators() {
        assert_eq!(clifford_group().len(), 24);
        let s = c(FRAC_1_SQRT_2, 0.0);
        let u = clifford_conjugator(PauliAxis::X, PauliAxis::Z, true);
        assert!(max_abs(&(u - (pauli(1) + pauli(3)) * s)) < 1e-15);
        let u = clifford_conjugator(PauliAxis::X, PauliAxis::X, false);
        assert!(max_abs(&(u - pauli(3))) < 1e-15);
        for src in PauliAxis::ALL {
            for dst in PauliAxis::ALL {
                for positive in [true, false] {
                    let u = clifford_conjugator(src, dst, positive);
                    let sign = if positive { 1.0 } else { -1.0 };
                    let got = &u * src.matrix() * u.adjoint();
                    assert!(max_abs(&(got - dst.matrix() * c(sign, 0.0))) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn clifford_group_is_closed_up_to_phase() {
        let g = clifford_group();
        let same_up_to_phase = |a: &CMatrix, b: &CMatrix| (a.adjoint() * b).trace().norm() > 2.0 - 1e-9;
        for a in &g {
            for b in &g {
                let p = a * b;
                assert!(g.iter().any(|x| same_up_to_phase(x, &p)));
            }
        }
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                assert!(!same_up_to_phase(a, b));
            }
        }
    }

    #[test]
    fn baseline_examples() {
        let xx = pauli_pair(1, 1);
        let zz = pauli_pair(3, 3);
        let iso = (pauli_pair(1, 1) + pauli_pair(2, 2) + pauli_pair(3, 3)) * c(1.0 / 3.0, 0.0);
        for target in [&zz, &iso] {
            let p = baseline_simulation(&xx, target).unwrap();
            assert!((p.s - 1.0).abs() < 1e-12);
            assert!(verify_average(&p).unwrap() < 1e-12);
        }
        assert!(matches!(baseline_simulation(&pauli_pair(3, 0), &xx), Err(Error::Infeasible(_))));
    }

    #[test]
    fn baseline_random_pairs() {
        let mut r = rng(11);
        for _ in 0..200 {
            let h = random_hermitian(4, &mut r);
            let hp = random_hermitian(4, &mut r);
            let p = baseline_simulation(&h, &hp).unwrap();
            assert!(verify_average(&p).unwrap() <= 1e-8);
            assert!(p.s <= optimal_s(&h, &hp).unwrap() + 1e-9);
            let m = decompose(&h).unwrap().m;
            let mp = decompose(&hp).unwrap().m;
            let lower = 0.25 * m.abs().max() / mp.abs().sum();
            assert!(p.s >= lower - 1e-12);
        }
    }

    #[test]
    fn projector_differences_match_basis() {
        for d in 2..=4 {
            let basis = traceless_basis(d).unwrap();
            let parts = basis_as_projector_differences(d);
            assert_eq!(parts.len(), basis.len());
            for ((q, x, y), eta) in parts.iter().zip(&basis.elements) {
                let mut diff = CMatrix::zeros(d, d);
                diff[(*x, *x)] = c(1.0, 0.0);
                diff[(*y, *y)] = c(-1.0, 0.0);
                assert!(is_unitary(q, 1e-12));
                assert!(max_abs(&(q * diff * q.adjoint() - eta)) < 1e-12);
            }
        }
    }

    fn check_generic(h: &CMatrix, hp: &CMatrix, d: usize) -> GenericSimulation {
        let g = simulate_generic_ddim(h, hp, d, 0).unwrap();
        g.schedule.validate().unwrap();
        let avg = nonlocal_part_bipartite(&g.schedule.average(h).unwrap(), d, d).unwrap();
        let want = nonlocal_part_bipartite(hp, d, d).unwrap() * c(g.s, 0.0);
        let res = frobenius(&(avg - want));
        assert!(res <= 1e-8, "d={d}: residual {res}");
        g
    }

    #[test]
    fn generic_eta_eta_qutrits() {
        let basis = traceless_basis(3).unwrap();
        let h = kron(&basis.elements[0], &basis.elements[0]);
        let g = check_generic(&h, &h, 3);
        assert!(g.s >= 0.25, "s = {}", g.s);
        assert!((g.s - 0.5625).abs() < 1e-12);
    }

    #[test]
    fn generic_sign_stage_and_random() {
        let mut r = rng(13);
        let basis = traceless_basis(3).unwrap();
        let h = random_hermitian(9, &mut r);
        let hp = kron(&basis.elements[3], &basis.elements[4]) * c(-0.7, 0.0)
            + kron(&basis.elements[0], &basis.elements[1]) * c(0.2, 0.0);
        check_generic(&h, &hp, 3);
        let hp = random_hermitian(9, &mut r);
        check_generic(&h, &hp, 3);

        let b4 = traceless_basis(4).unwrap();
        let h = random_hermitian(16, &mut r);
        let hp = kron(&b4.elements[5], &b4.elements[2]) - kron(&b4.elements[1], &b4.elements[8]);
        check_generic(&h, &hp, 4);
    }

    #[test]
    fn generic_qubits_match_baseline() {
        let mut r = rng(17);
        for _ in 0..20 {
            let h = random_hermitian(4, &mut r);
            let hp = random_hermitian(4, &mut r);
            let g = check_generic(&h, &hp, 2);
            let b = baseline_simulation(&h, &hp).unwrap();
            assert!((g.s - b.s).abs() < 1e-9);
        }
    }

    #[test]
    fn generic_retries_degenerate_source() {
        // Purely off-diagonal coupling: the clock twirl erases it.
        let basis = traceless_basis(3).unwrap();
        let h = kron(&basis.elements[2], &basis.elements[2]);
        let g = check_generic(&h, &h, 3);
        assert!(g.prerotations >= 1);
        let again = simulate_generic_ddim(&h, &h, 3, 0).unwrap();
        assert_eq!(again.schedule, g.schedule);
    }

    #[test]
    fn generic_rejects_bad_input() {
        assert!(matches!(
            simulate_generic_ddim(&identity(25), &identity(25), 5, 0),
            Err(Error::Capacity(_))
        ));
        let (h, _) = noswap_fixture();
        assert!(simulate_generic_ddim(&h, &identity(9), 3, 0).is_err());
        assert!(simulate_generic_ddim(&h, &identity(4), 3, 0).is_err());
    }

    #[test]
    fn noswap_fixture_properties() {
        let (h, s) = noswap_fixture();
        assert!(h.trace().norm() < 1e-15 && s.trace().norm() < 1e-15);
        assert!(is_hermitian(&h, 0.0) && is_hermitian(&s, 0.0));
        assert!(max_abs(&(&h - &s)) > 0.5);
        let sch = decouple_ddim(&h, 3, DecoupleSide::Both).unwrap();
        assert!(max_abs(&sch.average(&h).unwrap()) < 1e-10);
        assert!(frobenius(&nonlocal_part(&pauli_pair(1, 1)).unwrap()) > 0.0);
    }
}
