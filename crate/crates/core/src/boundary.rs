//! Boundary data: face classification, inflow entropy flux and the
//! admissibility test on the prescribed inflow energy flux.
//!
//! Signs follow the outward normal: on an inflow face `u_b . n < 0` and the
//! prescribed total energy flux `F_ib = (rho_b e u_b + q) . n` must be
//! negative, i.e. energy enters the domain.

use serde::{Deserialize, Serialize};

use crate::error::{hyp, NsfError, Result, Violation};
use crate::solver::Mesh1D;
use crate::thermo::EosSpec;

/// `|u_b . n|` at or below this is a wall.
pub const WALL_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceKind {
    In,
    Out,
    Wall,
}

/// One boundary face as it appears in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryFace {
    pub pos: f64,
    pub u_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_b: Option<f64>,
    #[serde(rename = "F_ib", default, skip_serializing_if = "Option::is_none")]
    pub f_ib: Option<f64>,
    /// Force wall treatment even if `u_b` carries rounding noise.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub wall: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub faces: Vec<BoundaryFace>,
}

/// Boundary face with its geometry and classification resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Face {
    pub pos: f64,
    /// Outward normal, `-1` on the left end and `+1` on the right end.
    pub normal: f64,
    pub u_b: f64,
    /// `u_b . n`, zero on walls.
    pub vn: f64,
    pub kind: FaceKind,
    pub rho_b: f64,
    pub f_ib: f64,
}

/// Both ends of a one-dimensional domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Boundary {
    pub left: Face,
    pub right: Face,
}

impl Boundary {
    pub fn faces(&self) -> [Face; 2] {
        [self.left, self.right]
    }

    /// Closed box with no-slip walls.
    pub fn walls(mesh: &Mesh1D) -> Self {
        BoundarySpec::walls(mesh).resolve(mesh).expect("walls always resolve")
    }
}

fn classify(u_b: f64, normal: f64, wall: bool) -> FaceKind {
    let vn = u_b * normal;
    if wall || vn.abs() <= WALL_TOL {
        FaceKind::Wall
    } else if vn < 0.0 {
        FaceKind::In
    } else {
        FaceKind::Out
    }
}

impl BoundarySpec {
    pub fn walls(mesh: &Mesh1D) -> Self {
        let face = |pos| BoundaryFace { pos, u_b: 0.0, rho_b: None, f_ib: None, wall: true };
        Self { faces: vec![face(mesh.x0), face(mesh.x1)] }
    }

    /// Match faces to the mesh ends and check the data each class needs.
    pub fn resolve(&self, mesh: &Mesh1D) -> Result<Boundary> {
        let mut bad = Vec::new();
        let tol = 1e-12 * (1.0 + mesh.x0.abs().max(mesh.x1.abs()));
        let find = |x: f64| self.faces.iter().position(|f| (f.pos - x).abs() <= tol);
        let (il, ir) = (find(mesh.x0), find(mesh.x1));
        if self.faces.len() != 2 || il.is_none() || ir.is_none() {
            bad.push(Violation::new(
                "boundary.faces",
                hyp::SCHEMA,
                format!("need exactly one face at x0={} and one at x1={}", mesh.x0, mesh.x1),
            ));
            return Err(NsfError::Invalid(bad));
        }
        let mut build = |idx: usize, normal: f64| {
            let f = &self.faces[idx];
            let path = |k: &str| format!("boundary.faces[{idx}].{k}");
            if !f.u_b.is_finite() {
                bad.push(Violation::new(path("u_b"), hyp::SCHEMA, "must be finite"));
            }
            if f.wall && f.u_b.abs() > 1e-8 {
                bad.push(Violation::new(path("wall"), hyp::SCHEMA, format!("wall override with u_b = {} is not a rounding artefact", f.u_b)));
            }
            let kind = classify(f.u_b, normal, f.wall);
            let (mut rho_b, mut f_ib) = (f64::NAN, f64::NAN);
            if kind == FaceKind::In {
                match f.rho_b {
                    Some(r) if r > 0.0 && r.is_finite() => rho_b = r,
                    Some(r) => bad.push(Violation::new(path("rho_b"), hyp::INFLOW_DENSITY, format!("inflow density must be positive, got {r}"))),
                    None => bad.push(Violation::new(path("rho_b"), hyp::INFLOW_DENSITY, "inflow face needs rho_b")),
                }
                match f.f_ib {
                    Some(v) if v.is_finite() => f_ib = v,
                    _ => bad.push(Violation::new(path("F_ib"), hyp::INFLOW_FLUX, "inflow face needs a finite F_ib")),
                }
            }
            Face {
                pos: f.pos,
                normal,
                u_b: f.u_b,
                vn: if kind == FaceKind::Wall { 0.0 } else { f.u_b * normal },
                kind,
                rho_b,
                f_ib,
            }
        };
        let left = build(il.unwrap(), -1.0);
        let right = build(ir.unwrap(), 1.0);
        if bad.is_empty() {
            Ok(Boundary { left, right })
        } else {
            Err(NsfError::Invalid(bad))
        }
    }
}

/// Labels of the faces at `x0` and `x1`, in that order.
pub fn classify_faces(mesh: &Mesh1D, spec: &BoundarySpec) -> Vec<FaceKind> {
    [(mesh.x0, -1.0), (mesh.x1, 1.0)]
        .iter()
        .map(|&(x, n)| {
            let f = spec
                .faces
                .iter()
                .min_by(|a, b| (a.pos - x).abs().total_cmp(&(b.pos - x).abs()))
                .expect("boundary has faces");
            classify(f.u_b, n, f.wall)
        })
        .collect()
}

fn require_inflow(op: &str, vn: f64) -> Result<()> {
    if vn < 0.0 {
        Ok(())
    } else {
        Err(NsfError::Misuse(format!("{op} is only defined on inflow faces (u_b.n < 0), got u_b.n = {vn}")))
    }
}

/// `S_ib = F_ib / theta + (s - e / theta) rho_b u_b.n`.
pub fn entropy_inflow_flux(eos: &EosSpec, rho_b: f64, theta: f64, vn: f64, f_ib: f64) -> Result<f64> {
    require_inflow("entropy_inflow_flux", vn)?;
    let e = eos.specific_internal_energy(rho_b, theta)?;
    let s = eos.specific_entropy(rho_b, theta)?;
    Ok(f_ib / theta + (s - e / theta) * rho_b * vn)
}

/// Split the inflow flux into the cold part carried by the elastic energy
/// and the thermal remainder `F_tau`.
pub fn cold_heat_flux_split(eos: &EosSpec, rho_b: f64, vn: f64, f_ib: f64) -> Result<(f64, f64)> {
    require_inflow("cold_heat_flux_split", vn)?;
    let cold = 1.5 * eos.p_inf() * rho_b.powf(5.0 / 3.0);
    Ok((cold * vn, f_ib / vn - cold))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceMargin {
    pub pos: f64,
    pub kind: FaceKind,
    pub vn: f64,
    /// `F_ib / |u_b.n| + (3/2) p_inf rho_b^{5/3}`, inflow faces only.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub pass: bool,
    /// Supremum of the inflow margins; `-inf` without inflow faces.
    pub margin: f64,
    pub faces: Vec<FaceMargin>,
    pub failures: Vec<Violation>,
}

/// Check the inflow data: positive density, negative flux and a strictly
/// negative margin on every inflow face.
pub fn admissibility_check(eos: &EosSpec, boundary: &Boundary) -> AdmissibilityReport {
    let mut faces = Vec::new();
    let mut failures = Vec::new();
    let mut sup = f64::NEG_INFINITY;
    for (k, f) in boundary.faces().iter().enumerate() {
        let mut margin = None;
        if f.kind == FaceKind::In {
            let path = |s: &str| format!("boundary.faces[{k}].{s}");
            if !(f.rho_b > 0.0) {
                failures.push(Violation::new(path("rho_b"), hyp::INFLOW_DENSITY, format!("rho_b = {} is not positive", f.rho_b)));
            }
            if !(f.f_ib < 0.0) {
                failures.push(Violation::new(path("F_ib"), hyp::INFLOW_FLUX, format!("F_ib = {} must be negative on inflow faces", f.f_ib)));
            }
            let m = f.f_ib / f.vn.abs() + 1.5 * eos.p_inf() * f.rho_b.powf(5.0 / 3.0);
            if !(m < 0.0) {
                failures.push(Violation::new(
                    path("F_ib"),
                    hyp::INFLOW_FLUX,
                    format!("margin F_ib/|u_b.n| + 1.5 p_inf rho_b^(5/3) = {m:e} is not negative"),
                ));
            }
            sup = sup.max(if m.is_nan() { f64::INFINITY } else { m });
            margin = Some(m);
        }
        faces.push(FaceMargin { pos: f.pos, kind: f.kind, vn: f.vn, margin });
    }
    AdmissibilityReport {
        pass: failures.is_empty(),
        margin: sup,
        faces,
        failures,
    }
}
