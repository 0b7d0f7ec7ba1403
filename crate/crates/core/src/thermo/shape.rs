//! The scaling function `P(Z)` of the pressure law and the entropy profile
//! `S(Z)` it induces.
//!
//! With `Z = rho / theta^{3/2}` the material part of the closure is fixed by a
//! single scalar function `P`. Everything else (energy, entropy, stability
//! margins) is built from `P`, `P'` and the structural quantity
//!
//! ```text
//! g(Z) = ((5/3) P(Z) - P'(Z) Z) / Z,
//! ```
//!
//! which must stay strictly positive and bounded. The entropy profile solves
//! `S'(Z) = -(3/2) g(Z) / Z`.

use crate::error::{hyp, NsfError, Result, Violation};

/// Built-in shapes for `P(Z)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PressureShape {
    /// `P(Z) = Z + p_inf Z^{5/3}`: molecular, electron (cold) and, through the
    /// separate radiation term, photon contributions.
    Iconic { p_inf: f64 },
    /// Monotone piecewise-cubic interpolant of tabulated knots.
    Table(MonotoneTable),
}

impl PressureShape {
    pub fn p(&self, z: f64) -> f64 {
        match self {
            PressureShape::Iconic { p_inf } => z + p_inf * z.powf(5.0 / 3.0),
            PressureShape::Table(t) => t.p(z),
        }
    }

    pub fn dp(&self, z: f64) -> f64 {
        match self {
            PressureShape::Iconic { p_inf } => 1.0 + (5.0 / 3.0) * p_inf * z.powf(2.0 / 3.0),
            PressureShape::Table(t) => t.dp(z),
        }
    }

    /// `g(Z) = ((5/3)P - P'Z)/Z`, evaluated without cancellation where a
    /// closed form exists.
    pub fn g(&self, z: f64) -> f64 {
        match self {
            PressureShape::Iconic { .. } => 2.0 / 3.0,
            PressureShape::Table(t) => t.g(z),
        }
    }

    /// `lim P(Z)/Z^{5/3}` as `Z -> inf`.
    pub fn p_inf(&self) -> f64 {
        match self {
            PressureShape::Iconic { p_inf } => *p_inf,
            PressureShape::Table(t) => t.tail_p_inf,
        }
    }

    /// Entropy profile normalised by `S(1) = 0`.
    pub fn entropy_profile(&self, z: f64) -> f64 {
        match self {
            PressureShape::Iconic { .. } => -z.ln(),
            PressureShape::Table(t) => t.entropy_profile(z),
        }
    }

    /// `S'(Z) = -(3/2) g(Z)/Z`.
    pub fn entropy_profile_slope(&self, z: f64) -> f64 {
        match self {
            PressureShape::Iconic { .. } => -1.0 / z,
            _ => -1.5 * self.g(z) / z,
        }
    }

    /// `lim S(Z)` as `Z -> inf` under the `S(1) = 0` normalisation, or `None`
    /// when the profile diverges to `-inf`.
    pub fn entropy_profile_at_infinity(&self) -> Option<f64> {
        match self {
            PressureShape::Iconic { .. } => None,
            PressureShape::Table(t) => Some(t.entropy_at_infinity),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PressureShape::Iconic { .. } => "iconic",
            PressureShape::Table(_) => "table",
        }
    }
}

/// Monotone cubic Hermite interpolant of `(Z_i, P_i)` with `Z_0 = P_0 = 0`.
///
/// Beyond the last knot the shape continues as `p_inf Z^{5/3} + b` with
/// `(p_inf, b)` matched to the value and slope at the last knot; that tail
/// keeps `g > 0` and makes `S` converge as `Z -> inf`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneTable {
    z: Vec<f64>,
    p: Vec<f64>,
    slopes: Vec<f64>,
    /// Power-basis coefficients `c0..c3` of each segment in the global variable.
    coeffs: Vec<[f64; 4]>,
    /// Raw entropy profile at each knot (index 0 unused: the profile is +inf at Z = 0).
    knot_entropy: Vec<f64>,
    entropy_shift: f64,
    tail_p_inf: f64,
    tail_b: f64,
    entropy_at_infinity: f64,
}

impl MonotoneTable {
    /// Builds the interpolant and rejects tables that violate positivity of
    /// `P'` or `g` anywhere on a fine sampling of every segment.
    pub fn new(z: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let mut bad = Vec::new();
        if z.len() != p.len() {
            bad.push(Violation::new("table", hyp::SCHEMA, "z and p must have equal length"));
        }
        if z.len() < 3 {
            bad.push(Violation::new("table.z", hyp::SCHEMA, "need at least 3 knots"));
        }
        if !bad.is_empty() {
            return Err(NsfError::Invalid(bad));
        }
        if z[0] != 0.0 || p[0] != 0.0 {
            bad.push(Violation::new("table", hyp::PRESSURE_ORIGIN, "first knot must be (0, 0) so that P(0) = 0"));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            bad.push(Violation::new("table.z", hyp::SCHEMA, "knots must be strictly increasing"));
        }
        if p.windows(2).any(|w| !(w[1] > w[0])) {
            bad.push(Violation::new("table.p", hyp::MONOTONE_PRESSURE, "P must be strictly increasing"));
        }
        if z.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            bad.push(Violation::new("table", hyp::SCHEMA, "non-finite entry"));
        }
        if !bad.is_empty() {
            return Err(NsfError::Invalid(bad));
        }

        let slopes = pchip_slopes(&z, &p);
        let coeffs = (0..z.len() - 1)
            .map(|k| segment_power_coeffs(z[k], z[k + 1], p[k], p[k + 1], slopes[k], slopes[k + 1]))
            .collect::<Vec<_>>();

        let n = z.len() - 1;
        let (zn, pn, dn) = (z[n], p[n], slopes[n]);
        let g_n = (5.0 / 3.0) * pn / zn - dn;
        let tail_p_inf = dn / ((5.0 / 3.0) * zn.powf(2.0 / 3.0));
        let tail_b = 0.6 * g_n * zn;

        let mut table = Self {
            z,
            p,
            slopes,
            coeffs,
            knot_entropy: Vec::new(),
            entropy_shift: 0.0,
            tail_p_inf,
            tail_b,
            entropy_at_infinity: 0.0,
        };
        table.check_positivity()?;
        table.integrate_entropy();
        Ok(table)
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.z, &self.p)
    }

    fn check_positivity(&self) -> Result<()> {
        let mut bad = Vec::new();
        let n = self.z.len() - 1;
        let g_n = (5.0 / 3.0) * self.p[n] / self.z[n] - self.slopes[n];
        if !(g_n > 0.0) {
            bad.push(Violation::new(
                "table",
                hyp::MONOTONE_PRESSURE,
                format!("(5/3)P - P'Z must be positive at the last knot (got g = {g_n:e})"),
            ));
        }
        if !(self.tail_p_inf > 0.0) {
            bad.push(Violation::new("table", hyp::COLD_ASYMPTOTE, "asymptote p_inf must be positive"));
        }
        'outer: for k in 0..n {
            let (a, b) = (self.z[k], self.z[k + 1]);
            for j in 0..=32 {
                let zz = a + (b - a) * (j as f64) / 32.0;
                if zz == 0.0 {
                    continue;
                }
                if !(self.dp(zz) > 0.0) {
                    bad.push(Violation::new("table", hyp::MONOTONE_PRESSURE, format!("P'(Z) <= 0 at Z = {zz:e}")));
                    break 'outer;
                }
                if !(self.g(zz) > 0.0) {
                    bad.push(Violation::new(
                        "table",
                        hyp::MONOTONE_PRESSURE,
                        format!("(5/3)P - P'Z <= 0 at Z = {zz:e}; P(Z)/Z^(5/3) not decreasing"),
                    ));
                    break 'outer;
                }
            }
        }
        if self.slopes[0] <= 0.0 {
            bad.push(Violation::new("table", hyp::MONOTONE_PRESSURE, "P'(0) must be positive"));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(NsfError::Invalid(bad))
        }
    }

    fn segment(&self, z: f64) -> usize {
        match self.z.binary_search_by(|k| k.partial_cmp(&z).unwrap()) {
            Ok(i) => i.min(self.z.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.z.len() - 2),
        }
    }

    fn last(&self) -> f64 {
        self.z[self.z.len() - 1]
    }

    pub fn p(&self, z: f64) -> f64 {
        if z > self.last() {
            return self.tail_p_inf * z.powf(5.0 / 3.0) + self.tail_b;
        }
        let k = self.segment(z);
        hermite(self.z[k], self.z[k + 1], self.p[k], self.p[k + 1], self.slopes[k], self.slopes[k + 1], z).0
    }

    pub fn dp(&self, z: f64) -> f64 {
        if z > self.last() {
            return (5.0 / 3.0) * self.tail_p_inf * z.powf(2.0 / 3.0);
        }
        let k = self.segment(z);
        hermite(self.z[k], self.z[k + 1], self.p[k], self.p[k + 1], self.slopes[k], self.slopes[k + 1], z).1
    }

    pub fn g(&self, z: f64) -> f64 {
        if z > self.last() {
            return (5.0 / 3.0) * self.tail_b / z;
        }
        let k = self.segment(z);
        if k == 0 {
            // c0 = 0 on the first segment, so g = (2/3)c1 - (1/3)c2 z - (4/3)c3 z^2 exactly.
            let c = self.coeffs[0];
            return (2.0 / 3.0) * c[1] - (1.0 / 3.0) * c[2] * z - (4.0 / 3.0) * c[3] * z * z;
        }
        (5.0 / 3.0) * self.p(z) / z - self.dp(z)
    }

    /// Antiderivative of `S'(Z)` on segment `k` (up to a segment constant).
    fn segment_antiderivative(&self, k: usize, z: f64) -> f64 {
        let [c0, c1, c2, c3] = self.coeffs[k];
        let inner = if c0 == 0.0 {
            (2.0 / 3.0) * c1 * z.ln() - (1.0 / 3.0) * c2 * z - (2.0 / 3.0) * c3 * z * z
        } else {
            -(5.0 / 3.0) * c0 / z + (2.0 / 3.0) * c1 * z.ln() - (1.0 / 3.0) * c2 * z - (2.0 / 3.0) * c3 * z * z
        };
        -1.5 * inner
    }

    fn integrate_entropy(&mut self) {
        let n = self.z.len() - 1;
        let mut knot = vec![f64::INFINITY; n + 1];
        knot[1] = 0.0;
        for k in 1..n {
            knot[k + 1] = knot[k] + self.segment_antiderivative(k, self.z[k + 1])
                - self.segment_antiderivative(k, self.z[k]);
        }
        self.knot_entropy = knot;
        self.entropy_shift = 0.0;
        let at_one = self.raw_entropy(1.0);
        self.entropy_shift = at_one;
        self.entropy_at_infinity = self.raw_entropy(self.last()) - at_one - 2.5 * self.tail_b / self.last();
    }

    fn raw_entropy(&self, z: f64) -> f64 {
        let n = self.z.len() - 1;
        if z > self.z[n] {
            return self.knot_entropy[n] + 2.5 * self.tail_b * (1.0 / z - 1.0 / self.z[n]);
        }
        let k = self.segment(z);
        if k == 0 {
            return self.knot_entropy[1] - (self.segment_antiderivative(0, self.z[1]) - self.segment_antiderivative(0, z));
        }
        self.knot_entropy[k] + self.segment_antiderivative(k, z) - self.segment_antiderivative(k, self.z[k])
    }

    pub fn entropy_profile(&self, z: f64) -> f64 {
        self.raw_entropy(z) - self.entropy_shift
    }
}

/// Fritsch-Carlson slopes (harmonic mean of adjacent secants), with the
/// end slopes clamped: the secant at `Z = 0` and a one-sided three-point
/// estimate limited to `[0, 3 * secant]` at the far end.
fn pchip_slopes(z: &[f64], p: &[f64]) -> Vec<f64> {
    let n = z.len();
    let h: Vec<f64> = z.windows(2).map(|w| w[1] - w[0]).collect();
    let del: Vec<f64> = (0..n - 1).map(|k| (p[k + 1] - p[k]) / h[k]).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if del[k - 1] * del[k] <= 0.0 {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    d[0] = del[0];
    let m = n - 1;
    let (h0, h1) = (h[m - 1], h[m - 2]);
    let end = ((2.0 * h0 + h1) * del[m - 1] - h0 * del[m - 2]) / (h0 + h1);
    d[m] = end.clamp(0.0, 3.0 * del[m - 1]);
    d
}

fn hermite(z0: f64, z1: f64, p0: f64, p1: f64, d0: f64, d1: f64, z: f64) -> (f64, f64) {
    let h = z1 - z0;
    let t = (z - z0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let val = h00 * p0 + h10 * h * d0 + h01 * p1 + h11 * h * d1;
    let dh00 = (6.0 * t2 - 6.0 * t) / h;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = (-6.0 * t2 + 6.0 * t) / h;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let der = dh00 * p0 + dh10 * d0 + dh01 * p1 + dh11 * d1;
    (val, der)
}

/// Converts the Hermite cubic on `[z0, z1]` to `c0 + c1 Z + c2 Z^2 + c3 Z^3`.
fn segment_power_coeffs(z0: f64, z1: f64, p0: f64, p1: f64, d0: f64, d1: f64) -> [f64; 4] {
    let h = z1 - z0;
    let del = (p1 - p0) / h;
    // Local form p0 + d0 t + a2 t^2 + a3 t^3 with t = Z - z0.
    let a2 = (3.0 * del - 2.0 * d0 - d1) / h;
    let a3 = (d0 + d1 - 2.0 * del) / (h * h);
    let c0 = if z0 == 0.0 { 0.0 } else { p0 - d0 * z0 + a2 * z0 * z0 - a3 * z0 * z0 * z0 };
    let c1 = d0 - 2.0 * a2 * z0 + 3.0 * a3 * z0 * z0;
    let c2 = a2 - 3.0 * a3 * z0;
    let c3 = a3;
    [c0, c1, c2, c3]
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn iconic_like_table() -> MonotoneTable {
        let mut z = vec![0.0];
        let mut p = vec![0.0];
        for k in 0..=60 {
            let zz = 10f64.powf(-3.0 + 0.1 * k as f64);
            z.push(zz);
            p.push(zz + zz.powf(5.0 / 3.0));
        }
        MonotoneTable::new(z, p).unwrap()
    }

    #[test]
    fn table_reproduces_knots_and_is_c1() {
        let t = iconic_like_table();
        let (z, p) = t.knots();
        for (zz, pp) in z.iter().zip(p) {
            assert!((t.p(*zz) - pp).abs() <= 1e-12 * pp.max(1.0));
        }
        let zn = *z.last().unwrap();
        let below = t.p(zn * (1.0 - 1e-9));
        let above = t.p(zn * (1.0 + 1e-9));
        assert!((above - below).abs() < 1e-3 * t.p(zn) * 1e-6 + 1e-6 * t.p(zn));
        assert!((t.dp(zn * (1.0 + 1e-12)) - t.dp(zn)).abs() < 1e-6 * t.dp(zn));
    }

    #[test]
    fn table_tracks_iconic_shape() {
        let t = iconic_like_table();
        for &zz in &[0.01f64, 0.5, 3.0, 70.0] {
            let exact = zz + zz.powf(5.0 / 3.0);
            assert!((t.p(zz) - exact).abs() < 2e-3 * exact, "Z={zz}");
        }
        assert!((t.tail_p_inf - 1.0).abs() < 0.05);
    }

    #[test]
    fn entropy_profile_normalised_and_slope_consistent() {
        let t = iconic_like_table();
        assert!(t.entropy_profile(1.0).abs() < 1e-13);
        for &zz in &[0.02, 0.3, 2.0, 40.0, 500.0, 2000.0] {
            let h = 1e-5 * zz;
            let fd = (t.entropy_profile(zz + h) - t.entropy_profile(zz - h)) / (2.0 * h);
            let exact = -1.5 * t.g(zz) / zz;
            assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "Z={zz}: {fd} vs {exact}");
        }
    }

    #[test]
    fn rejects_nonmonotone_and_missing_origin() {
        assert!(MonotoneTable::new(vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 1.0]).is_err());
        assert!(MonotoneTable::new(vec![0.5, 1.0, 2.0], vec![0.1, 2.0, 3.0]).is_err());
        // P growing faster than Z^{5/3} breaks the monotone structure.
        let z: Vec<f64> = (0..10).map(|k| k as f64).collect();
        let p: Vec<f64> = z.iter().map(|v| v * v * v).collect();
        assert!(MonotoneTable::new(z, p).is_err());
    }
}
