//! JSON documents for Hamiltonians, protocols and schedules.
//!
//! Complex matrices are nested rows of `[re, im]` pairs.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::generic_sim::{ConjugationSchedule, ScheduleStep};
use crate::numerics::{c, is_hermitian, is_unitary, CMatrix, Real3, Vec3};
use crate::pauli::PauliDecomposition;
use crate::polyhedron::VertexLabel;
use crate::protocol::{ProtocolKind, ProtocolMeta, ProtocolStep, SimulationProtocol};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|k| [m[(r, k)].re, m[(r, k)].im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(contract("matrix must be square and non-empty"));
    }
    Ok(CMatrix::from_fn(n, n, |r, k| c(rows[r][k][0], rows[r][k][1])))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliJson {
    #[serde(default)]
    pub c0: f64,
    pub a: [f64; 3],
    pub b: [f64; 3],
    #[serde(rename = "M")]
    pub m: [[f64; 3]; 3],
}

/// A Hamiltonian given in exactly one of three forms.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pauli: Option<PauliJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diag: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
}

/// A parsed Hamiltonian with its bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub matrix: CMatrix,
    pub dims: [usize; 2],
}

impl HamiltonianSpec {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            matrix: Some(matrix_to_json(m)),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Hamiltonian> {
        let spec: HamiltonianSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("Hamiltonian JSON: {e}")))?;
        spec.resolve()
    }

    pub fn resolve(&self) -> Result<Hamiltonian> {
        let given = [self.matrix.is_some(), self.pauli.is_some(), self.diag.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(contract(
                "Hamiltonian input needs exactly one of \"matrix\", \"pauli\", \"diag\"",
            ));
        }
        let matrix = if let Some(rows) = &self.matrix {
            let m = matrix_from_json(rows)?;
            if !is_hermitian(&m, 1e-8) {
                return Err(contract("Hamiltonian matrix is not Hermitian within 1e-8"));
            }
            (&m + m.adjoint()) * c(0.5, 0.0)
        } else if let Some(p) = &self.pauli {
            PauliDecomposition {
                c0: p.c0,
                a: Vec3::from(p.a),
                b: Vec3::from(p.b),
                m: Real3::from_fn(|i, j| p.m[i][j]),
            }
            .compose()
        } else {
            PauliDecomposition::diagonal(Vec3::from(self.diag.unwrap_or_default())).compose()
        };
        let n = matrix.nrows();
        let dims = match self.dims {
            Some(d) => d,
            None => {
                let d = (n as f64).sqrt().round() as usize;
                if d * d != n {
                    return Err(contract(format!(
                        "cannot infer \"dims\" for a {n}x{n} matrix; give [d_A, d_B]"
                    )));
                }
                [d, d]
            }
        };
        if dims[0] * dims[1] != n || dims[0] < 2 || dims[1] < 2 {
            return Err(contract(format!(
                "dims {:?} inconsistent with a {n}x{n} Hamiltonian",
                dims
            )));
        }
        if (self.pauli.is_some() || self.diag.is_some()) && dims != [2, 2] {
            return Err(contract("\"pauli\" and \"diag\" forms describe two qubits; dims must be [2, 2]"));
        }
        Ok(Hamiltonian { matrix, dims })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub p: f64,
    #[serde(rename = "U")]
    pub u: MatrixJson,
    #[serde(rename = "V")]
    pub v: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalJson {
    #[serde(rename = "U")]
    pub u: MatrixJson,
    #[serde(rename = "V")]
    pub v: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetaJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<u8>,
    #[serde(default)]
    pub vertices: Vec<[u8; 2]>,
}

/// Protocol or schedule document. `source`/`target` are carried so a
/// protocol can be re-verified without restating them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolJson {
    pub factor: f64,
    pub steps: Vec<StepJson>,
    #[serde(default)]
    pub final_local: Option<LocalJson>,
    #[serde(default)]
    pub meta: MetaJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<MatrixJson>,
}

impl ProtocolJson {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("protocol JSON: {e}")))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("protocol documents always serialize")
    }

    /// Rebuilds a two-qubit protocol. Explicit `source`/`target` override
    /// the embedded ones.
    pub fn into_protocol(self, source: Option<&CMatrix>, target: Option<&CMatrix>) -> Result<SimulationProtocol> {
        let pick = |given: Option<&CMatrix>, embedded: &Option<MatrixJson>, what: &str| -> Result<CMatrix> {
            match (given, embedded) {
                (Some(m), _) => Ok(m.clone()),
                (None, Some(rows)) => matrix_from_json(rows),
                (None, None) => Err(contract(format!("protocol has no embedded {what}; pass it explicitly"))),
            }
        };
        let source = pick(source, &self.source, "source")?;
        let target = pick(target, &self.target, "target")?;
        let steps = self
            .steps
            .iter()
            .map(|st| Ok(ProtocolStep::new(st.p, matrix_from_json(&st.u)?, matrix_from_json(&st.v)?)))
            .collect::<Result<Vec<_>>>()?;
        let final_local = match &self.final_local {
            Some(l) => Some((matrix_from_json(&l.u)?, matrix_from_json(&l.v)?)),
            None => None,
        };
        let kind = match &self.meta.kind {
            Some(k) => ProtocolKind::parse(k).ok_or_else(|| Error::Parse(format!("unknown protocol kind {k:?}")))?,
            None => ProtocolKind::Custom,
        };
        let vertices = self
            .meta
            .vertices
            .iter()
            .map(|&[i, j]| {
                if i < 6 && j < 4 {
                    Ok(VertexLabel::new(i, j))
                } else {
                    Err(contract(format!("vertex label [{i}, {j}] out of range")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimulationProtocol {
            steps,
            s: self.factor,
            source,
            target,
            final_local,
            meta: ProtocolMeta {
                kind,
                case: self.meta.case,
                vertices,
            },
        })
    }

    pub fn into_schedule(self) -> Result<(ConjugationSchedule, f64)> {
        let steps = self
            .steps
            .iter()
            .map(|st| {
                let (a, b) = (matrix_from_json(&st.u)?, matrix_from_json(&st.v)?);
                if !is_unitary(&a, 1e-9) || !is_unitary(&b, 1e-9) {
                    return Err(contract("schedule operator is not unitary"));
                }
                Ok(ScheduleStep { weight: st.p, a, b })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((ConjugationSchedule { steps }, self.factor))
    }
}

impl From<&SimulationProtocol> for ProtocolJson {
    fn from(p: &SimulationProtocol) -> Self {
        Self {
            factor: p.s,
            steps: p
                .steps
                .iter()
                .map(|st| StepJson {
                    p: st.p,
                    u: matrix_to_json(&st.u),
                    v: matrix_to_json(&st.v),
                })
                .collect(),
            final_local: p.final_local.as_ref().map(|(u, v)| LocalJson {
                u: matrix_to_json(u),
                v: matrix_to_json(v),
            }),
            meta: MetaJson {
                kind: Some(p.meta.kind.as_str().to_string()),
                case: p.meta.case,
                vertices: p.meta.vertices.iter().map(|l| [l.i, l.j]).collect(),
            },
            source: Some(matrix_to_json(&p.source)),
            target: Some(matrix_to_json(&p.target)),
        }
    }
}

/// Schedule document; `kind` names the construction.
pub fn schedule_to_json(
    sch: &ConjugationSchedule,
    factor: f64,
    kind: &str,
    source: Option<&CMatrix>,
    target: Option<&CMatrix>,
) -> ProtocolJson {
    ProtocolJson {
        factor,
        steps: sch
            .steps
            .iter()
            .map(|st| StepJson {
                p: st.weight,
                u: matrix_to_json(&st.a),
                v: matrix_to_json(&st.b),
            })
            .collect(),
        final_local: None,
        meta: MetaJson {
            kind: Some(kind.to_string()),
            case: None,
            vertices: Vec::new(),
        },
        source: source.map(matrix_to_json),
        target: target.map(matrix_to_json),
    }
}
