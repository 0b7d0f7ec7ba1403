use serde::{Deserialize, Serialize};

use super::shape::{MonotoneTable, PressureShape};
use crate::error::{domain, hyp, NsfError, Result, Violation};

/// Constitutive closure `p = theta^{5/2} P(rho/theta^{3/2}) + (a/3) theta^4`
/// with the internal energy and entropy that Gibbs' relation forces on it.
#[derive(Debug, Clone, PartialEq)]
pub struct EosSpec {
    pub shape: PressureShape,
    /// Radiation constant.
    pub a: f64,
    /// Additive entropy constant (only used without the third-law normalisation).
    pub entropy_const: f64,
    /// Normalise the entropy profile so that it vanishes as `Z -> inf`.
    pub third_law: bool,
    /// Constant added to the `S(1) = 0` profile, resolved once at construction.
    offset: f64,
}

/// Partial derivatives of `p`, `e`, `s` with respect to `(rho, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoDerivatives {
    pub p: f64,
    pub e: f64,
    pub s: f64,
    pub p_rho: f64,
    pub p_theta: f64,
    pub e_rho: f64,
    pub e_theta: f64,
    pub s_rho: f64,
    pub s_theta: f64,
}

impl EosSpec {
    /// Iconic closure `P(Z) = Z + p_inf Z^{5/3}` with `S(1) = entropy_const`.
    pub fn iconic(a: f64, p_inf: f64) -> Result<Self> {
        Self::build(PressureShape::Iconic { p_inf }, a, 0.0, false)
    }

    pub fn iconic_with_entropy_const(a: f64, p_inf: f64, entropy_const: f64) -> Result<Self> {
        Self::build(PressureShape::Iconic { p_inf }, a, entropy_const, false)
    }

    /// Tabulated monotone `P(Z)`; knots must start at `(0, 0)`.
    pub fn tabulated(a: f64, z: Vec<f64>, p: Vec<f64>, third_law: bool) -> Result<Self> {
        let table = MonotoneTable::new(z, p)?;
        Self::build(PressureShape::Table(table), a, 0.0, third_law)
    }

    pub fn build(shape: PressureShape, a: f64, entropy_const: f64, third_law: bool) -> Result<Self> {
        let mut bad = Vec::new();
        if !(a > 0.0) && a != 0.0 || !a.is_finite() {
            bad.push(Violation::new("eos.a", hyp::STATE_LAW, "radiation constant must be nonnegative"));
        }
        if let PressureShape::Iconic { p_inf } = shape {
            if !(p_inf > 0.0) || !p_inf.is_finite() {
                bad.push(Violation::new("eos.p_inf", hyp::COLD_ASYMPTOTE, "p_inf must be positive"));
            }
        }
        if !entropy_const.is_finite() {
            bad.push(Violation::new("eos.entropy_const", hyp::ENTROPY_CONST, "must be finite"));
        }
        let at_inf = shape.entropy_profile_at_infinity();
        if third_law {
            if at_inf.is_none() {
                bad.push(Violation::new(
                    "eos.third_law",
                    hyp::THIRD_LAW,
                    format!("the {} shape has an entropy profile diverging to -inf; the third-law normalisation is impossible", shape.name()),
                ));
            }
            if entropy_const != 0.0 {
                bad.push(Violation::new(
                    "eos.entropy_const",
                    hyp::THIRD_LAW,
                    "third-law normalisation fixes the entropy constant; leave it at 0",
                ));
            }
        }
        if !bad.is_empty() {
            return Err(NsfError::Invalid(bad));
        }
        let offset = if third_law { -at_inf.unwrap_or(0.0) } else { entropy_const };
        Ok(Self {
            shape,
            a,
            entropy_const,
            third_law,
            offset,
        })
    }

    pub fn p_inf(&self) -> f64 {
        self.shape.p_inf()
    }

    /// Normalised entropy profile `S(Z)`.
    pub fn entropy_profile(&self, z: f64) -> f64 {
        self.shape.entropy_profile(z) + self.offset
    }

    /// Limit of the entropy as `theta -> 0` at fixed positive density.
    pub fn entropy_floor(&self) -> f64 {
        if self.third_law {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    }

    pub fn pressure(&self, rho: f64, theta: f64) -> Result<f64> {
        check_theta("pressure", theta)?;
        if !(rho >= 0.0) {
            return Err(domain("pressure", format!("density must be nonnegative, got {rho}")));
        }
        Ok(self.pressure_unchecked(rho, theta))
    }

    pub(crate) fn pressure_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = rho / theta.powf(1.5);
        theta.powf(2.5) * self.shape.p(z) + self.a / 3.0 * theta.powi(4)
    }

    pub fn specific_internal_energy(&self, rho: f64, theta: f64) -> Result<f64> {
        check_rho_theta("specific_internal_energy", rho, theta)?;
        Ok(self.energy_unchecked(rho, theta))
    }

    pub(crate) fn energy_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = rho / theta.powf(1.5);
        1.5 * theta.powf(2.5) / rho * self.shape.p(z) + self.a / rho * theta.powi(4)
    }

    /// Internal energy per unit volume `rho e`, well defined down to `rho = 0`.
    pub fn energy_density(&self, rho: f64, theta: f64) -> f64 {
        let z = rho / theta.powf(1.5);
        1.5 * theta.powf(2.5) * self.shape.p(z) + self.a * theta.powi(4)
    }

    pub fn specific_entropy(&self, rho: f64, theta: f64) -> Result<f64> {
        check_rho_theta("specific_entropy", rho, theta)?;
        Ok(self.entropy_unchecked(rho, theta))
    }

    pub(crate) fn entropy_unchecked(&self, rho: f64, theta: f64) -> f64 {
        let z = rho / theta.powf(1.5);
        self.entropy_profile(z) + 4.0 * self.a / 3.0 * theta.powi(3) / rho
    }

    /// Closed-form values and first derivatives, by hand differentiation of
    /// the pressure, energy and entropy laws.
    pub fn derivatives(&self, rho: f64, theta: f64) -> Result<ThermoDerivatives> {
        check_rho_theta("derivatives", rho, theta)?;
        Ok(self.derivatives_unchecked(rho, theta))
    }

    pub(crate) fn derivatives_unchecked(&self, rho: f64, theta: f64) -> ThermoDerivatives {
        let a = self.a;
        let th32 = theta.powf(1.5);
        let z = rho / th32;
        let pz = self.shape.p(z);
        let dpz = self.shape.dp(z);
        let ds = self.shape.entropy_profile_slope(z);
        let th3 = theta * theta * theta;
        let th4 = th3 * theta;
        // Material and radiation parts are assembled separately.
        let p = th32 * theta * pz + a / 3.0 * th4;
        let p_rho = theta * dpz;
        let p_theta = th32 * (2.5 * pz - 1.5 * dpz * z) + 4.0 * a / 3.0 * th3;
        let e = 1.5 * theta * pz / z + a * th4 / rho;
        let e_rho = 1.5 * theta / rho * (dpz - pz / z) - a * th4 / (rho * rho);
        let e_theta = 1.5 * (2.5 * pz / z - 1.5 * dpz) + 4.0 * a * th3 / rho;
        let s = self.entropy_profile(z) + 4.0 * a / 3.0 * th3 / rho;
        let s_rho = ds * z / rho - 4.0 * a / 3.0 * th3 / (rho * rho);
        let s_theta = -1.5 * ds * z / theta + 4.0 * a * theta * theta / rho;
        ThermoDerivatives {
            p,
            e,
            s,
            p_rho,
            p_theta,
            e_rho,
            e_theta,
            s_rho,
            s_theta,
        }
    }

    /// `(theta ds/dtheta - de/dtheta, theta ds/drho - de/drho + p/rho^2)`.
    ///
    /// The second component is assembled per homogeneous part (material and
    /// radiation) before summation so that large radiation terms at low
    /// density do not swamp the residual in rounding.
    pub fn gibbs_residual(&self, rho: f64, theta: f64) -> Result<(f64, f64)> {
        check_rho_theta("gibbs_residual", rho, theta)?;
        let a = self.a;
        let th32 = theta.powf(1.5);
        let z = rho / th32;
        let pz = self.shape.p(z);
        let dpz = self.shape.dp(z);
        let ds = self.shape.entropy_profile_slope(z);
        let th3 = theta * theta * theta;

        // d/dtheta components.
        let s_theta_mat = -1.5 * ds * z / theta;
        let e_theta_mat = 1.5 * (2.5 * pz / z - 1.5 * dpz);
        let s_theta_rad = 4.0 * a * theta * theta / rho;
        let e_theta_rad = 4.0 * a * th3 / rho;
        let r1 = (theta * s_theta_mat - e_theta_mat) + (theta * s_theta_rad - e_theta_rad);

        // d/drho components.
        let s_rho_mat = ds * z / rho;
        let e_rho_mat = 1.5 * theta / rho * (dpz - pz / z);
        let p_mat = th32 * theta * pz;
        // Radiation terms are all multiples of a theta^4 / rho^2: theta s_rho,
        // e_rho and p / rho^2 carry the factors -4/3, -1 and 1/3. Summing the
        // factors first keeps the rounding relative to the residual, not to
        // the (large) individual terms.
        let rad = a * th3 * theta / (rho * rho);
        let (th_s_rho_rad, e_rho_rad, p_rad_over) = (-4.0 / 3.0, -1.0, 1.0 / 3.0);
        let r2 = (theta * s_rho_mat - e_rho_mat + p_mat / (rho * rho)) + rad * (th_s_rho_rad - e_rho_rad + p_rad_over);
        Ok((r1, r2))
    }

    /// `(dp/drho at fixed theta, de/dtheta at fixed rho)`.
    pub fn stability_margins(&self, rho: f64, theta: f64) -> Result<(f64, f64)> {
        let d = self.derivatives(rho, theta)?;
        Ok((d.p_rho, d.e_theta))
    }

    /// Squared adiabatic sound speed `p_rho + p_theta^2 theta / (rho^2 e_theta)`.
    pub fn sound_speed_sq(&self, rho: f64, theta: f64) -> Result<f64> {
        let d = self.derivatives(rho, theta)?;
        Ok(d.p_rho + d.p_theta * d.p_theta * theta / (rho * rho * d.e_theta))
    }
}

fn check_theta(op: &'static str, theta: f64) -> Result<()> {
    if theta > 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("temperature must be positive, got {theta}")))
    }
}

fn check_rho_theta(op: &'static str, rho: f64, theta: f64) -> Result<()> {
    check_theta(op, theta)?;
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("density must be positive, got {rho}")))
    }
}

/// Tabulated knots as they appear in `eos.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub z: Vec<f64>,
    pub p: Vec<f64>,
}

/// Serialized form of [`EosSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EosDoc {
    #[serde(default = "default_shape")]
    pub shape: String,
    #[serde(default = "one")]
    pub a: f64,
    #[serde(default = "one")]
    pub p_inf: f64,
    #[serde(default)]
    pub entropy_const: f64,
    #[serde(default)]
    pub third_law: bool,
    /// Transport temperature exponent; carried alongside the closure.
    #[serde(default = "half")]
    pub lambda_exp: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableDoc>,
}

fn default_shape() -> String {
    "iconic".into()
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

impl Default for EosDoc {
    fn default() -> Self {
        Self {
            shape: default_shape(),
            a: 1.0,
            p_inf: 1.0,
            entropy_const: 0.0,
            third_law: false,
            lambda_exp: 0.5,
            table: None,
        }
    }
}

impl TryFrom<EosDoc> for EosSpec {
    type Error = NsfError;

    fn try_from(doc: EosDoc) -> Result<Self> {
        let shape = match doc.shape.as_str() {
            "iconic" => PressureShape::Iconic { p_inf: doc.p_inf },
            "table" => {
                let t = doc.table.ok_or_else(|| {
                    NsfError::Invalid(vec![Violation::new("eos.table", hyp::STATE_LAW, "shape \"table\" requires a table block")])
                })?;
                PressureShape::Table(MonotoneTable::new(t.z, t.p).map_err(|e| prefix(e, "eos."))?)
            }
            other => {
                return Err(NsfError::Invalid(vec![Violation::new(
                    "eos.shape",
                    hyp::STATE_LAW,
                    format!("unknown shape {other:?} (expected \"iconic\" or \"table\")"),
                )]))
            }
        };
        EosSpec::build(shape, doc.a, doc.entropy_const, doc.third_law)
    }
}

impl From<&EosSpec> for EosDoc {
    fn from(e: &EosSpec) -> Self {
        let table = match &e.shape {
            PressureShape::Table(t) => {
                let (z, p) = t.knots();
                Some(TableDoc { z: z.to_vec(), p: p.to_vec() })
            }
            _ => None,
        };
        EosDoc {
            shape: e.shape.name().into(),
            a: e.a,
            p_inf: e.p_inf(),
            entropy_const: e.entropy_const,
            third_law: e.third_law,
            lambda_exp: 0.5,
            table,
        }
    }
}

pub(crate) fn prefix(e: NsfError, pre: &str) -> NsfError {
    match e {
        NsfError::Invalid(v) => NsfError::Invalid(
            v.into_iter()
                .map(|mut x| {
                    x.field = format!("{pre}{}", x.field);
                    x
                })
                .collect(),
        ),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn pressure_examples() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        assert!(close(eos.pressure(1.0, 1.0).unwrap(), 7.0 / 3.0, 1e-14));
        assert!(close(eos.pressure(0.0, 1.0).unwrap(), 1.0 / 3.0, 1e-14));
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        assert!(close(cold.pressure(2.0, 1.0).unwrap(), 2.0 + 2f64.powf(5.0 / 3.0), 1e-14));
        assert!(close(cold.pressure(2.0, 1.0).unwrap(), 5.1748, 1e-4));
        assert!(eos.pressure(1.0, 0.0).is_err());
        assert!(eos.pressure(1.0, -1.0).is_err());
    }

    #[test]
    fn energy_examples() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        assert!(close(eos.specific_internal_energy(1.0, 1.0).unwrap(), 4.0, 1e-14));
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        assert!(close(cold.specific_internal_energy(1.0, 2.0).unwrap(), 4.5, 1e-14));
        assert!(eos.specific_internal_energy(0.0, 1.0).is_err());
        // rho e = (3/2) rho theta + (3/2) p_inf rho^{5/3} + a theta^4
        for &(r, t) in &[(0.3f64, 2.0f64), (4.0, 0.7), (1.5, 1.5)] {
            let split = 1.5 * r * t + 1.5 * 0.8 * r.powf(5.0 / 3.0) + 0.2 * t.powi(4);
            let e2 = EosSpec::iconic(0.2, 0.8).unwrap();
            assert!(close(r * e2.specific_internal_energy(r, t).unwrap(), split, 1e-13));
        }
    }

    #[test]
    fn entropy_examples() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        assert!(close(eos.specific_entropy(1.0, 1.0).unwrap(), 4.0 / 3.0, 1e-14));
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        let th = (2.0f64 / 3.0).exp();
        assert!(close(cold.specific_entropy(1.0, th).unwrap(), 1.0, 1e-14));
        assert!(eos.entropy_profile(2.0) < eos.entropy_profile(1.0));
        assert!(eos.specific_entropy(0.0, 1.0).is_err());
    }

    #[test]
    fn gibbs_residual_vanishes_and_ignores_entropy_const() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        let (r1, r2) = eos.gibbs_residual(1.0, 1.0).unwrap();
        assert!(r1.abs() < 1e-12 && r2.abs() < 1e-12);
        let shifted = EosSpec::iconic_with_entropy_const(1.0, 1.0, 17.5).unwrap();
        assert_eq!(eos.gibbs_residual(0.7, 3.1).unwrap(), shifted.gibbs_residual(0.7, 3.1).unwrap());
    }

    #[test]
    fn stability_examples() {
        let eos = EosSpec::iconic(1.0, 1.0).unwrap();
        assert!(close(eos.stability_margins(1.0, 1.0).unwrap().1, 5.5, 1e-14));
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        assert!(close(cold.stability_margins(1.0, 1.0).unwrap().0, 8.0 / 3.0, 1e-14));
    }

    #[test]
    fn sound_speed_matches_finite_difference_oracle() {
        // c^2 = p_rho + p_theta^2 theta / (rho^2 e_theta), derivatives by central differences.
        let cold = EosSpec::iconic(0.0, 1.0).unwrap();
        let h = 1e-5;
        let p = |r: f64, t: f64| cold.pressure(r, t).unwrap();
        let e = |r: f64, t: f64| cold.specific_internal_energy(r, t).unwrap();
        let p_r = (p(1.0 + h, 1.0) - p(1.0 - h, 1.0)) / (2.0 * h);
        let p_t = (p(1.0, 1.0 + h) - p(1.0, 1.0 - h)) / (2.0 * h);
        let e_t = (e(1.0, 1.0 + h) - e(1.0, 1.0 - h)) / (2.0 * h);
        let oracle = p_r + p_t * p_t / e_t;
        assert!(close(oracle, 10.0 / 3.0, 1e-8));
        assert!(close(cold.sound_speed_sq(1.0, 1.0).unwrap(), oracle, 1e-8));
    }

    #[test]
    fn third_law_rejected_for_iconic() {
        let err = EosSpec::build(PressureShape::Iconic { p_inf: 1.0 }, 1.0, 0.0, true).unwrap_err();
        assert!(err.to_string().contains(hyp::THIRD_LAW));
    }

    #[test]
    fn doc_round_trip() {
        let doc: EosDoc = serde_json::from_str(r#"{"shape":"iconic","a":0.5,"p_inf":2.0,"entropy_const":0.1,"third_law":false,"lambda_exp":0.5}"#).unwrap();
        let eos = EosSpec::try_from(doc.clone()).unwrap();
        assert_eq!(EosDoc::from(&eos), doc);
    }
}
