//! The growth-cycle model with a constant accumulation rate `k`:
//!
//! ```text
//! dω/dt = ω (γ + ρλ − α)
//! dλ/dt = λ (k(1 − ω)/ν − (α + β + δ))
//! ```
//!
//! Orbits are closed level sets of the first integral returned by
//! [`conserved_quantity`], which also serves as the integrator's accuracy
//! gauge.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// The seven scalars driving the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodwinParams {
    /// Productivity growth rate per year.
    pub alpha: f64,
    /// Labor-force growth rate per year.
    pub beta: f64,
    /// Depreciation rate per year.
    pub delta: f64,
    /// Capital-to-output ratio (years).
    pub nu: f64,
    /// Phillips-curve intercept.
    pub gamma: f64,
    /// Phillips-curve slope.
    pub rho: f64,
    /// Fraction of profits invested.
    pub k: f64,
}

impl GoodwinParams {
    /// `α + β + δ`.
    pub fn natural_growth(&self) -> f64 {
        self.alpha + self.beta + self.delta
    }

    /// `α − γ`; must be positive for an interior employment rate.
    pub fn wage_factor(&self) -> f64 {
        self.alpha - self.gamma
    }

    /// `k/ν − (α + β + δ)`; must be positive for an interior wage share.
    pub fn profit_factor(&self) -> f64 {
        self.k / self.nu - self.natural_growth()
    }

    pub fn has_interior_center(&self) -> bool {
        self.rho > 0.0 && self.nu > 0.0 && self.wage_factor() > 0.0 && self.profit_factor() > 0.0
    }

    /// Soft warnings; estimates outside these ranges are still usable.
    pub fn warnings(&self) -> Vec<&'static str> {
        let mut w = Vec::new();
        if !(self.k > 0.0 && self.k <= 1.0) {
            w.push("accumulation rate k outside (0, 1]");
        }
        if self.rho <= 0.0 {
            w.push("Phillips slope rho is not positive");
        }
        if self.nu <= 0.0 {
            w.push("capital-to-output ratio nu is not positive");
        }
        if self.delta < 0.0 {
            w.push("depreciation rate delta is negative");
        }
        if self.wage_factor() <= 0.0 {
            w.push("alpha <= gamma: no interior employment equilibrium");
        }
        if self.profit_factor() <= 0.0 {
            w.push("k/nu <= alpha + beta + delta: no interior wage-share equilibrium");
        }
        w
    }
}

/// A state of the system: wage share and employment rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub omega: f64,
    pub lambda: f64,
}

impl PhasePoint {
    pub fn new(omega: f64, lambda: f64) -> Self {
        Self { omega, lambda }
    }

    pub fn is_positive(&self) -> bool {
        self.omega > 0.0 && self.lambda > 0.0 && self.omega.is_finite() && self.lambda.is_finite()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.omega - other.omega).hypot(self.lambda - other.lambda)
    }
}

/// Time derivatives `(dω/dt, dλ/dt)`.
pub fn rhs(p: &GoodwinParams, x: PhasePoint) -> (f64, f64) {
    (
        x.omega * (p.gamma + p.rho * x.lambda - p.alpha),
        x.lambda * (p.k * (1.0 - x.omega) / p.nu - p.natural_growth()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equilibrium {
    pub point: PhasePoint,
    /// `0 < λ̄ ≤ 1`.
    pub interior_lambda: bool,
    /// `0 < ω̄ < 1`.
    pub interior_omega: bool,
}

/// Fixed point `λ̄ = (α − γ)/ρ`, `ω̄ = 1 − (α + β + δ) ν / k`.
pub fn equilibrium(p: &GoodwinParams) -> Result<Equilibrium> {
    if p.rho == 0.0 {
        return Err(Error::ZeroRho);
    }
    if p.k == 0.0 {
        return Err(Error::InvalidArgument("accumulation rate k is zero".into()));
    }
    let lambda = p.wage_factor() / p.rho;
    let omega = 1.0 - p.natural_growth() * p.nu / p.k;
    Ok(Equilibrium {
        point: PhasePoint { omega, lambda },
        interior_lambda: lambda > 0.0 && lambda <= 1.0,
        interior_omega: omega > 0.0 && omega < 1.0,
    })
}

/// Period of small oscillations around the center,
/// `2π / sqrt((α − γ)(k/ν − (α + β + δ)))`.
pub fn period(p: &GoodwinParams) -> Result<f64> {
    let (a, b) = (p.wage_factor(), p.profit_factor());
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::ComplexPeriod {
            wage_factor: a,
            profit_factor: b,
        });
    }
    Ok(2.0 * core::f64::consts::PI / (a * b).sqrt())
}

/// First integral
/// `V = (k/ν) ω − (k/ν − (α+β+δ)) ln ω + ρ λ − (α − γ) ln λ`.
pub fn conserved_quantity(p: &GoodwinParams, x: PhasePoint) -> f64 {
    let kn = p.k / p.nu;
    kn * x.omega - p.profit_factor() * x.omega.ln() + p.rho * x.lambda - p.wage_factor() * x.lambda.ln()
}

fn rk4_step(p: &GoodwinParams, x: PhasePoint, h: f64) -> PhasePoint {
    let shift = |x: PhasePoint, d: (f64, f64), s: f64| PhasePoint {
        omega: x.omega + s * d.0,
        lambda: x.lambda + s * d.1,
    };
    let k1 = rhs(p, x);
    let k2 = rhs(p, shift(x, k1, h / 2.0));
    let k3 = rhs(p, shift(x, k2, h / 2.0));
    let k4 = rhs(p, shift(x, k3, h));
    PhasePoint {
        omega: x.omega + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        lambda: x.lambda + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
    }
}

/// Target for `max |V − V₀| / |V₀|` over a simulation.
pub const DRIFT_TOLERANCE: f64 = 1e-6;
const MIN_STEPS_PER_YEAR: usize = 32;
const MAX_STEPS_PER_YEAR: usize = 1 << 15;

fn relative_drift(v: f64, v0: f64) -> f64 {
    if v0 == 0.0 {
        (v - v0).abs()
    } else {
        ((v - v0) / v0).abs()
    }
}

/// Integrates `years` whole years (negative runs backward) at a fixed
/// number of RK4 steps per year, returning the state at each year and the
/// worst relative drift of V seen at any step.
fn integrate_years(
    p: &GoodwinParams,
    x0: PhasePoint,
    years: i32,
    steps_per_year: usize,
) -> Result<(Vec<PhasePoint>, f64)> {
    let v0 = conserved_quantity(p, x0);
    let h = years.signum() as f64 / steps_per_year as f64;
    let mut x = x0;
    let mut out = Vec::with_capacity(years.unsigned_abs() as usize);
    let mut drift = 0.0f64;
    for year in 1..=years.unsigned_abs() {
        for step in 0..steps_per_year {
            x = rk4_step(p, x, h);
            if !x.is_positive() {
                let t = (year - 1) as f64 + (step + 1) as f64 / steps_per_year as f64;
                return Err(Error::NonPositiveState {
                    time: t * years.signum() as f64,
                });
            }
            drift = drift.max(relative_drift(conserved_quantity(p, x), v0));
        }
        out.push(x);
    }
    Ok((out, drift))
}

/// States sampled once a year along one orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub start_year: i32,
    /// One point per year from `start_year`.
    pub points: Vec<PhasePoint>,
    pub params: GoodwinParams,
    /// The initial condition and the year it is pinned to.
    pub initial: PhasePoint,
    pub initial_year: i32,
    pub steps_per_year: usize,
    /// Largest relative change of V along the integration.
    pub max_drift: f64,
    /// Some simulated employment rate exceeds 1.
    pub exceeds_full_employment: bool,
}

impl Trajectory {
    pub fn end_year(&self) -> i32 {
        self.start_year + self.points.len() as i32 - 1
    }

    pub fn omega(&self) -> Vec<f64> {
        self.points.iter().map(|x| x.omega).collect()
    }

    pub fn lambda(&self) -> Vec<f64> {
        self.points.iter().map(|x| x.lambda).collect()
    }

    pub fn at(&self, year: i32) -> Option<PhasePoint> {
        let i = usize::try_from(year - self.start_year).ok()?;
        self.points.get(i).copied()
    }
}

/// Forward simulation for `n_years` from `x0` at `start_year`; the result
/// holds `n_years + 1` annual points including `x0`.
pub fn simulate(p: &GoodwinParams, x0: PhasePoint, start_year: i32, n_years: usize) -> Result<Trajectory> {
    if n_years == 0 {
        return Err(Error::InvalidArgument(
            "simulation horizon must be at least one year".into(),
        ));
    }
    simulate_window(p, x0, start_year, start_year, start_year + n_years as i32)
}

/// Simulates the orbit through `x0` at `anchor_year`, integrating backward
/// to `first_year` and forward to `last_year`.
///
/// The number of RK4 steps per year is doubled until the relative drift of
/// the conserved quantity stays below [`DRIFT_TOLERANCE`] over the window.
pub fn simulate_window(
    p: &GoodwinParams,
    x0: PhasePoint,
    anchor_year: i32,
    first_year: i32,
    last_year: i32,
) -> Result<Trajectory> {
    if !x0.is_positive() {
        return Err(Error::InvalidArgument(
            "initial state must lie in the positive quadrant".into(),
        ));
    }
    if !(first_year <= anchor_year && anchor_year <= last_year) {
        return Err(Error::InvalidArgument("anchor year must lie inside the window".into()));
    }
    if !(p.nu > 0.0) {
        return Err(Error::InvalidArgument(
            "capital-to-output ratio must be positive".into(),
        ));
    }
    let mut steps = MIN_STEPS_PER_YEAR;
    let mut last_err;
    loop {
        let attempt = integrate_years(p, x0, first_year - anchor_year, steps).and_then(|(back, d1)| {
            integrate_years(p, x0, last_year - anchor_year, steps).map(|(fwd, d2)| (back, fwd, d1.max(d2)))
        });
        match attempt {
            Ok((back, fwd, drift)) if drift <= DRIFT_TOLERANCE => {
                let mut points: Vec<PhasePoint> = back.into_iter().rev().collect();
                points.push(x0);
                points.extend(fwd);
                let exceeds = points.iter().any(|x| x.lambda > 1.0);
                return Ok(Trajectory {
                    start_year: first_year,
                    points,
                    params: *p,
                    initial: x0,
                    initial_year: anchor_year,
                    steps_per_year: steps,
                    max_drift: drift,
                    exceeds_full_employment: exceeds,
                });
            }
            Ok((_, _, drift)) => {
                last_err = Error::DriftToleranceUnmet {
                    drift,
                    steps_per_year: steps,
                }
            }
            Err(e) => last_err = e,
        }
        if steps >= MAX_STEPS_PER_YEAR {
            return Err(last_err);
        }
        steps *= 2;
    }
}

/// Flows `x0` for `duration` time units (negative runs backward) with
/// `steps` equal RK4 steps.
pub fn flow(p: &GoodwinParams, x0: PhasePoint, duration: f64, steps: usize) -> Result<PhasePoint> {
    let h = duration / steps.max(1) as f64;
    let mut x = x0;
    for i in 0..steps.max(1) {
        x = rk4_step(p, x, h);
        if !x.is_positive() {
            return Err(Error::NonPositiveState {
                time: (i + 1) as f64 * h,
            });
        }
    }
    Ok(x)
}

fn wrapped(angle: f64) -> f64 {
    let tau = 2.0 * core::f64::consts::PI;
    let a = angle % tau;
    if a > core::f64::consts::PI {
        a - tau
    } else if a < -core::f64::consts::PI {
        a + tau
    } else {
        a
    }
}

/// Time for the orbit through `x0` to complete one revolution around the
/// equilibrium, located by accumulating the polar angle and refining the
/// crossing by bisection.
pub fn measure_period(p: &GoodwinParams, x0: PhasePoint) -> Result<f64> {
    let linear = period(p)?;
    let eq = equilibrium(p)?.point;
    if x0.distance(&eq) == 0.0 {
        return Err(Error::InvalidArgument(
            "the equilibrium has no revolution period".into(),
        ));
    }
    let angle = |x: PhasePoint| (x.lambda - eq.lambda).atan2(x.omega - eq.omega);
    let full = 2.0 * core::f64::consts::PI;
    let h = (linear / 4000.0).min(1.0 / MIN_STEPS_PER_YEAR as f64);
    let horizon = 10.0 * linear;
    let mut t = 0.0;
    let mut x = x0;
    let mut turned = 0.0f64;
    while t < horizon {
        let next = rk4_step(p, x, h);
        if !next.is_positive() {
            return Err(Error::NonPositiveState { time: t + h });
        }
        let step_turn = wrapped(angle(next) - angle(x));
        if (turned + step_turn).abs() >= full {
            // bisection on the sub-step length
            let (mut lo, mut hi) = (0.0, h);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let xm = flow(p, x, mid, 8)?;
                if (turned + wrapped(angle(xm) - angle(x))).abs() >= full {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(t + 0.5 * (lo + hi));
        }
        turned += step_turn;
        x = next;
        t += h;
    }
    Err(Error::OrbitNotClosed { horizon })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn denmark() -> GoodwinParams {
        GoodwinParams {
            alpha: 0.018,
            beta: 0.006,
            delta: 0.050,
            nu: 2.842,
            gamma: -0.330,
            rho: 0.367,
            k: 0.640,
        }
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let p = denmark();
        let e = equilibrium(&p).unwrap();
        let (a, b) = rhs(&p, e.point);
        assert!(a.abs() < 1e-14 && b.abs() < 1e-14);
        assert!(e.interior_lambda && e.interior_omega);
        assert_abs_diff_eq!(e.point.omega, 0.6730, epsilon = 1.5e-2);
        assert_abs_diff_eq!(e.point.lambda, 0.9492, epsilon = 1.5e-2);
    }

    #[test]
    fn boundary_equilibria() {
        let mut p = denmark();
        p.gamma = p.alpha;
        let e = equilibrium(&p).unwrap();
        assert_eq!(e.point.lambda, 0.0);
        assert!(!e.interior_lambda);
        let mut p = denmark();
        p.k = p.natural_growth() * p.nu;
        assert_abs_diff_eq!(equilibrium(&p).unwrap().point.omega, 0.0, epsilon = 1e-15);
        p.rho = 0.0;
        assert_eq!(equilibrium(&p), Err(Error::ZeroRho));
    }

    #[test]
    fn profit_term_vanishes_at_full_wage_share() {
        let p = GoodwinParams {
            alpha: 0.018,
            beta: 0.02,
            delta: 0.06,
            nu: 3.0,
            gamma: 0.3,
            rho: 0.4,
            k: 1.0,
        };
        let (_, dl) = rhs(&p, PhasePoint::new(1.0, 0.9));
        assert_abs_diff_eq!(dl, -0.9 * (0.018 + 0.02 + 0.06), epsilon = 1e-15);
        let (_, dl0) = rhs(&p, PhasePoint::new(0.5, 0.0));
        assert_eq!(dl0, 0.0);
    }

    #[test]
    fn period_scaling_and_errors() {
        let p = denmark();
        let t = period(&p).unwrap();
        assert_abs_diff_eq!(t, 27.34, epsilon = 0.02 * 27.34);
        // doubling both factors halves the period
        let mut q = p;
        q.gamma = p.alpha - 2.0 * p.wage_factor();
        q.k = q.nu * (2.0 * p.profit_factor() + q.natural_growth());
        assert_abs_diff_eq!(period(&q).unwrap(), t / 2.0, epsilon = 1e-10);
        q.gamma = q.alpha + 0.1;
        assert!(matches!(period(&q), Err(Error::ComplexPeriod { .. })));
    }

    #[test]
    fn gradient_of_v_vanishes_at_equilibrium() {
        let p = denmark();
        let e = equilibrium(&p).unwrap().point;
        let h = 1e-6;
        let dv_dw = (conserved_quantity(&p, PhasePoint::new(e.omega + h, e.lambda))
            - conserved_quantity(&p, PhasePoint::new(e.omega - h, e.lambda)))
            / (2.0 * h);
        let dv_dl = (conserved_quantity(&p, PhasePoint::new(e.omega, e.lambda + h))
            - conserved_quantity(&p, PhasePoint::new(e.omega, e.lambda - h)))
            / (2.0 * h);
        assert!(dv_dw.abs() < 1e-8 && dv_dl.abs() < 1e-8);
        let v_eq = conserved_quantity(&p, e);
        for (dw, dl) in [(0.01, 0.0), (0.0, -0.01), (-0.02, 0.02)] {
            assert!(conserved_quantity(&p, PhasePoint::new(e.omega + dw, e.lambda + dl)) > v_eq);
        }
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let p = denmark();
        let e = equilibrium(&p).unwrap().point;
        let tr = simulate(&p, e, 1960, 50).unwrap();
        assert_eq!(tr.points.len(), 51);
        for x in &tr.points {
            assert!(x.distance(&e) < 1e-10);
        }
    }

    #[test]
    fn backward_window_and_reversal() {
        let p = denmark();
        let x0 = PhasePoint::new(0.66, 0.96);
        let tr = simulate_window(&p, x0, 1985, 1960, 2010).unwrap();
        assert_eq!(tr.start_year, 1960);
        assert_eq!(tr.points.len(), 51);
        assert_eq!(tr.at(1985), Some(x0));
        assert!(tr.max_drift < DRIFT_TOLERANCE);

        let fwd = simulate(&p, x0, 0, 20).unwrap();
        let end = *fwd.points.last().unwrap();
        let back = simulate_window(&p, end, 20, 0, 20).unwrap();
        assert!(back.points[0].distance(&x0) < 1e-8, "{}", back.points[0].distance(&x0));
    }

    #[test]
    fn small_orbit_period_matches_linearization() {
        let p = denmark();
        let e = equilibrium(&p).unwrap().point;
        let x0 = PhasePoint::new(e.omega + 1e-3, e.lambda);
        let measured = measure_period(&p, x0).unwrap();
        let linear = period(&p).unwrap();
        assert!((measured / linear - 1.0).abs() < 5e-3, "{measured} vs {linear}");
        let back = flow(&p, x0, measured, 20_000).unwrap();
        assert!(back.distance(&x0) < 1e-5);
    }

    #[test]
    fn level_set_symmetry_with_unit_k() {
        // gamma negative so the center is interior
        let p = GoodwinParams {
            alpha: 0.018,
            beta: 0.02,
            delta: 0.06,
            nu: 3.0,
            gamma: -0.3,
            rho: 0.4,
            k: 1.0,
        };
        let e = equilibrium(&p).unwrap().point;
        let x0 = PhasePoint::new(e.omega, e.lambda - 0.05);
        let tr = simulate(&p, x0, 0, 60).unwrap();
        let v0 = conserved_quantity(&p, x0);
        let (lo, hi) = tr.points.iter().fold((x0, x0), |(lo, hi), x| {
            (
                if x.omega < lo.omega { *x } else { lo },
                if x.omega > hi.omega { *x } else { hi },
            )
        });
        assert!(((conserved_quantity(&p, lo) - v0) / v0).abs() < 1e-6);
        assert!(((conserved_quantity(&p, hi) - v0) / v0).abs() < 1e-6);
    }

    #[test]
    fn invalid_simulation_inputs() {
        let p = denmark();
        assert!(simulate(&p, PhasePoint::new(-0.1, 0.9), 0, 5).is_err());
        assert!(simulate(&p, PhasePoint::new(0.6, 0.9), 0, 0).is_err());
    }

    #[test]
    fn k_raises_equilibrium_wage_share() {
        let mut p = denmark();
        let mut last = f64::NEG_INFINITY;
        for i in 0..20 {
            p.k = 0.3 + 0.05 * i as f64;
            let w = equilibrium(&p).unwrap().point.omega;
            assert!(w > last);
            last = w;
        }
    }

    proptest! {
        #[test]
        fn v_is_constant_along_the_flow(
            omega in 0.3f64..0.95,
            lambda in 0.5f64..1.2,
            gamma in -0.8f64..-0.05,
            rho in 0.1f64..1.0,
            k in 0.4f64..1.0,
        ) {
            let p = GoodwinParams { alpha: 0.02, beta: 0.01, delta: 0.05, nu: 3.0, gamma, rho, k };
            let x = PhasePoint::new(omega, lambda);
            let (dw, dl) = rhs(&p, x);
            let h = 1e-6;
            let ahead = conserved_quantity(&p, PhasePoint::new(omega + h * dw, lambda + h * dl));
            let behind = conserved_quantity(&p, PhasePoint::new(omega - h * dw, lambda - h * dl));
            prop_assert!(((ahead - behind) / (2.0 * h)).abs() < 1e-8);
        }
    }
}
