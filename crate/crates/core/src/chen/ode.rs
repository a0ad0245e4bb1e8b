//! Adaptive classical Runge–Kutta with step doubling.

use num_complex::Complex;

use super::real::Real;
use super::ChenError;

/// Smallest step before the integrator gives up.
pub const MIN_STEP: f64 = 1e-13;

/// Step budget per unit parameter interval.
pub const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub steps: usize,
    pub rejected: usize,
    pub error_estimate: f64,
}

impl StepStats {
    pub fn zero() -> Self {
        StepStats { steps: 0, rejected: 0, error_estimate: 0.0 }
    }

    pub fn absorb(&mut self, other: StepStats) {
        self.steps += other.steps;
        self.rejected += other.rejected;
        self.error_estimate += other.error_estimate;
    }
}

fn rk4_step<T: Real, F>(f: &F, s: T, y: &[Complex<T>], h: T, out: &mut [Complex<T>])
where
    F: Fn(T, &[Complex<T>], &mut [Complex<T>]),
{
    let n = y.len();
    let two = T::of_f64(2.0);
    let half = h * T::of_f64(0.5);
    let mut k1 = vec![Complex::new(T::zero(), T::zero()); n];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut tmp = k1.clone();
    f(s, y, &mut k1);
    for i in 0..n {
        tmp[i] = y[i] + k1[i] * half;
    }
    f(s + half, &tmp, &mut k2);
    for i in 0..n {
        tmp[i] = y[i] + k2[i] * half;
    }
    f(s + half, &tmp, &mut k3);
    for i in 0..n {
        tmp[i] = y[i] + k3[i] * h;
    }
    f(s + h, &tmp, &mut k4);
    let sixth = h * T::of_f64(6.0).inv();
    for i in 0..n {
        out[i] = y[i] + (k1[i] + k2[i] * two + k3[i] * two + k4[i]) * sixth;
    }
}

/// Integrates `y' = f(s, y)` over `s ∈ [0, 1]`, keeping the local error
/// per unit step below `tol`. The state is updated in place.
pub fn integrate_unit<T: Real, F>(f: F, y: &mut [Complex<T>], tol: f64) -> Result<StepStats, ChenError>
where
    F: Fn(T, &[Complex<T>], &mut [Complex<T>]),
{
    let n = y.len();
    let zero = Complex::new(T::zero(), T::zero());
    let mut full = vec![zero; n];
    let mut mid = vec![zero; n];
    let mut fine = vec![zero; n];
    let mut stats = StepStats::zero();
    let fifteenth = T::of_f64(15.0).inv();
    let mut s = T::zero();
    let mut h = 1.0 / 16.0;
    loop {
        let remaining = 1.0 - s.lossy_f64();
        if remaining <= 0.0 {
            break;
        }
        let last = h >= remaining;
        let step = if last { T::one() - s } else { T::of_f64(h) };
        rk4_step(&f, s, y, step, &mut full);
        let half = step * T::of_f64(0.5);
        rk4_step(&f, s, y, half, &mut mid);
        rk4_step(&f, s + half, &mid, half, &mut fine);
        let mut err = 0.0f64;
        for i in 0..n {
            err = err.max(((fine[i] - full[i]) * fifteenth).norm().lossy_f64());
        }
        let h_used = step.lossy_f64();
        let allowed = tol * h_used;
        if !err.is_finite() {
            return Err(ChenError::ToleranceNotMet { achieved: f64::INFINITY, tol });
        }
        if err <= allowed {
            for i in 0..n {
                y[i] = fine[i] + (fine[i] - full[i]) * fifteenth;
            }
            stats.steps += 1;
            stats.error_estimate += err;
            if stats.steps > MAX_STEPS {
                return Err(ChenError::ToleranceNotMet { achieved: stats.error_estimate, tol });
            }
            if last {
                break;
            }
            s = s + step;
        } else {
            stats.rejected += 1;
        }
        let factor = if err == 0.0 { 4.0 } else { (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 4.0) };
        h = h_used * factor;
        if h < MIN_STEP {
            return Err(ChenError::ToleranceNotMet { achieved: err / h_used, tol });
        }
    }
    Ok(stats)
}
