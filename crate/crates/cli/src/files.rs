//! Gate and program files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use qsynth_core::pulseprog::Branch;
use qsynth_core::{Complex4x4, PulseProgram, PulseSegment, SystemParams, Unitary4, C64};

use crate::error::CliError;
use crate::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateName {
    #[serde(rename = "CNOT12")]
    Cnot12,
    #[serde(rename = "CNOT21")]
    Cnot21,
    #[serde(rename = "SWAP")]
    Swap,
    #[serde(rename = "IDENTITY")]
    Identity,
}

impl GateName {
    /// Permutation matrix in the basis `|00⟩, |01⟩, |10⟩, |11⟩`, electron first.
    pub fn matrix(&self) -> Complex4x4 {
        let p = match self {
            GateName::Cnot12 => [0, 1, 3, 2],
            GateName::Cnot21 => [0, 3, 2, 1],
            GateName::Swap => [0, 2, 1, 3],
            GateName::Identity => [0, 1, 2, 3],
        };
        Complex4x4::from_fn(|i, j| {
            if p[j] == i {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePolicy {
    #[default]
    ProjectToSu4,
    RequireSu4,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateSpecFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<GateName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[[f64; 2]; 4]; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_policy: Option<PhasePolicy>,
}

impl GateSpecFile {
    pub fn named(name: GateName) -> Self {
        GateSpecFile {
            name: Some(name),
            ..Default::default()
        }
    }

    pub fn from_matrix(m: &Complex4x4) -> Self {
        GateSpecFile {
            matrix: Some(std::array::from_fn(|i| {
                std::array::from_fn(|j| [m.0[i][j].re, m.0[i][j].im])
            })),
            ..Default::default()
        }
    }

    pub fn policy(&self) -> PhasePolicy {
        self.phase_policy.unwrap_or_default()
    }

    pub fn raw_matrix(&self) -> Result<Complex4x4, CliError> {
        match (&self.name, &self.matrix) {
            (Some(n), None) => Ok(n.matrix()),
            (None, Some(m)) => Ok(Complex4x4::from_fn(|i, j| C64::new(m[i][j][0], m[i][j][1]))),
            _ => Err(CliError::Parse(
                "gate file needs exactly one of `name` or `matrix`".into(),
            )),
        }
    }

    /// The unitary as given, after checking the phase policy.
    pub fn unitary(&self) -> Result<Unitary4, CliError> {
        let m = self.raw_matrix()?;
        let u = Unitary4::new(m)?;
        if self.policy() == PhasePolicy::RequireSu4 {
            Unitary4::new_special(m)?;
        }
        Ok(u)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        parse(&read(path)?)
    }

    pub fn to_json(&self) -> String {
        json::to_string(self).expect("gate files serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "omega_r_I")]
    pub omega_r_i: f64,
    #[serde(rename = "omega_r_S")]
    pub omega_r_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    FastRotation,
    FreeEvolution,
    SelectiveDrive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchName {
    Alpha,
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentFile {
    pub kind: SegmentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<[f64; 3]>,
    pub angle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Application,
}

/// A pulse program on disk. Segments are listed in the order they are
/// applied in time, the reverse of the operator product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub order: Order,
    pub params: ParamsFile,
    pub segments: Vec<SegmentFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<GateSpecFile>,
}

const AXIS_TOL: f64 = 1e-9;

impl SegmentFile {
    pub fn from_segment(s: &PulseSegment) -> Self {
        match *s {
            PulseSegment::FastRotation { axis, angle } => SegmentFile {
                kind: SegmentKind::FastRotation,
                branch: None,
                phase: None,
                axis: Some(axis),
                angle,
            },
            PulseSegment::FreeEvolution { angle } => SegmentFile {
                kind: SegmentKind::FreeEvolution,
                branch: None,
                phase: None,
                axis: None,
                angle,
            },
            PulseSegment::SelectiveDrive { branch, phase, angle } => SegmentFile {
                kind: SegmentKind::SelectiveDrive,
                branch: Some(match branch {
                    Branch::Alpha => BranchName::Alpha,
                    Branch::Beta => BranchName::Beta,
                }),
                phase: Some(phase),
                axis: None,
                angle,
            },
        }
    }

    pub fn to_segment(&self, index: usize) -> Result<PulseSegment, CliError> {
        let bad = |what: &str| CliError::Parse(format!("segment {index}: {what}"));
        let finite = |x: f64| x.is_finite();
        if !finite(self.angle) {
            return Err(bad("angle is not finite"));
        }
        match self.kind {
            SegmentKind::FastRotation => {
                if self.branch.is_some() || self.phase.is_some() {
                    return Err(bad("fast rotations take only `axis` and `angle`"));
                }
                let axis = self.axis.ok_or_else(|| bad("missing `axis`"))?;
                let norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !axis.iter().all(|x| finite(*x)) || (norm - 1.0).abs() > AXIS_TOL {
                    return Err(bad("`axis` must be a unit vector"));
                }
                Ok(PulseSegment::FastRotation {
                    axis,
                    angle: self.angle,
                })
            }
            SegmentKind::FreeEvolution => {
                if self.branch.is_some() || self.phase.is_some() || self.axis.is_some() {
                    return Err(bad("free evolution takes only `angle`"));
                }
                if self.angle < 0.0 {
                    return Err(bad("free evolution angle must be nonnegative"));
                }
                Ok(PulseSegment::FreeEvolution { angle: self.angle })
            }
            SegmentKind::SelectiveDrive => {
                if self.axis.is_some() {
                    return Err(bad("selective drives take no `axis`"));
                }
                let branch = match self.branch.ok_or_else(|| bad("missing `branch`"))? {
                    BranchName::Alpha => Branch::Alpha,
                    BranchName::Beta => Branch::Beta,
                };
                let phase = self.phase.ok_or_else(|| bad("missing `phase`"))?;
                if !finite(phase) {
                    return Err(bad("phase is not finite"));
                }
                if self.angle < 0.0 {
                    return Err(bad("drive angle must be nonnegative"));
                }
                Ok(PulseSegment::SelectiveDrive {
                    branch,
                    phase,
                    angle: self.angle,
                })
            }
        }
    }
}

impl ProgramFile {
    pub fn from_program(program: &PulseProgram, params: &SystemParams, target: Option<GateSpecFile>) -> Self {
        ProgramFile {
            order: Order::Application,
            params: ParamsFile {
                j: params.j,
                omega_r_i: params.omega_r_i,
                omega_r_s: params.omega_r_s,
            },
            segments: program.segments.iter().rev().map(SegmentFile::from_segment).collect(),
            target,
        }
    }

    pub fn params(&self) -> Result<SystemParams, CliError> {
        let p = &self.params;
        if ![p.j, p.omega_r_i, p.omega_r_s]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0)
        {
            return Err(CliError::Parse("params must be positive and finite".into()));
        }
        Ok(SystemParams::new(p.j, p.omega_r_i, p.omega_r_s))
    }

    /// The in-memory program, segments in operator order.
    pub fn program(&self) -> Result<PulseProgram, CliError> {
        let n = self.segments.len();
        let segments = self
            .segments
            .iter()
            .enumerate()
            .rev()
            .map(|(i, s)| s.to_segment(i))
            .collect::<Result<Vec<_>, _>>()?;
        debug_assert_eq!(segments.len(), n);
        Ok(PulseProgram::new(segments))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let file: ProgramFile = parse(&read(path)?)?;
        file.params()?;
        file.program()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        json::to_string(self).expect("program files serialize")
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_gates_are_permutations() {
        let c = GateName::Cnot12.matrix();
        assert_eq!(c.0[3][2], C64::new(1.0, 0.0));
        assert_eq!(c.0[2][3], C64::new(1.0, 0.0));
        assert_eq!(c.0[0][0], C64::new(1.0, 0.0));
        let s = GateName::Swap.matrix();
        assert_eq!(s.0[1][2], C64::new(1.0, 0.0));
        let c21 = GateName::Cnot21.matrix();
        assert_eq!(c21.0[3][1], C64::new(1.0, 0.0));
        assert_eq!(c21.0[1][3], C64::new(1.0, 0.0));
        assert_eq!(GateName::Identity.matrix(), Complex4x4::identity());
    }

    #[test]
    fn gate_file_needs_one_source() {
        let both: GateSpecFile = parse(r#"{"name": "SWAP", "matrix": [[[1,0],[0,0],[0,0],[0,0]],[[0,0],[1,0],[0,0],[0,0]],[[0,0],[0,0],[1,0],[0,0]],[[0,0],[0,0],[0,0],[1,0]]]}"#).unwrap();
        assert!(matches!(both.unitary(), Err(CliError::Parse(_))));
        let none: GateSpecFile = parse("{}").unwrap();
        assert!(matches!(none.unitary(), Err(CliError::Parse(_))));
    }

    #[test]
    fn require_su4_rejects_swap() {
        let mut g = GateSpecFile::named(GateName::Swap);
        assert!(g.unitary().is_ok());
        g.phase_policy = Some(PhasePolicy::RequireSu4);
        assert!(matches!(g.unitary(), Err(CliError::Input(_))));
    }

    #[test]
    fn program_roundtrip_reverses_order() {
        let segments = vec![
            PulseSegment::FreeEvolution { angle: 0.25 },
            PulseSegment::SelectiveDrive {
                branch: Branch::Beta,
                phase: 1.0,
                angle: 2.0,
            },
        ];
        let prog = PulseProgram::new(segments.clone());
        let file = ProgramFile::from_program(&prog, &SystemParams::default(), None);
        assert_eq!(file.segments[0].kind, SegmentKind::SelectiveDrive);
        let text = file.to_json();
        let back: ProgramFile = parse(&text).unwrap();
        assert_eq!(back.program().unwrap().segments, segments);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn rejects_malformed_segments() {
        let seg = SegmentFile {
            kind: SegmentKind::FreeEvolution,
            branch: None,
            phase: None,
            axis: None,
            angle: -1.0,
        };
        assert!(seg.to_segment(0).is_err());
        let seg = SegmentFile {
            kind: SegmentKind::FastRotation,
            branch: None,
            phase: None,
            axis: Some([1.0, 1.0, 0.0]),
            angle: 1.0,
        };
        assert!(seg.to_segment(0).is_err());
    }
}
