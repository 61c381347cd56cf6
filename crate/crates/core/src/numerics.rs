//! Shared numerical kernels: central finite differences, fixed-step RK4 and
//! winding numbers of sampled angle sequences.

use nalgebra::SVector;

use crate::error::{Error, Result};

/// Central finite-difference scheme. `step` is relative: the absolute step at
/// `x` is `step * max(1, |x|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDScheme {
    pub step: f64,
    pub order: u8,
}

impl FDScheme {
    /// Second-order central differences with `h = eps^(1/3)`.
    pub fn central2() -> Self {
        Self { step: f64::EPSILON.cbrt(), order: 2 }
    }

    /// Fourth-order central differences with `h = eps^(1/5)`.
    pub fn central4() -> Self {
        Self { step: f64::EPSILON.powf(0.2), order: 4 }
    }

    pub fn new(step: f64, order: u8) -> Result<Self> {
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::InvalidArgument(format!("FD step {step} outside (0, 1)")));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidArgument(format!("FD order {order} not in {{2, 4}}")));
        }
        Ok(Self { step, order })
    }

    /// Absolute step used at abscissa `x`.
    #[inline]
    pub fn h_at(&self, x: f64) -> f64 {
        self.step * x.abs().max(1.0)
    }
}

impl Default for FDScheme {
    fn default() -> Self {
        Self::central2()
    }
}

fn check_finite<const N: usize>(v: &[f64; N], at: f64) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteSample { at: format!("x = {at}") })
    }
}

/// Central-difference estimate of `f'(x)` for a vector-valued `f`.
pub fn derivative_fd<const N: usize>(
    f: impl Fn(f64) -> [f64; N],
    x: f64,
    scheme: &FDScheme,
) -> Result<[f64; N]> {
    let h = scheme.h_at(x);
    let mut out = [0.0; N];
    match scheme.order {
        2 => {
            let (fp, fm) = (f(x + h), f(x - h));
            check_finite(&fp, x + h)?;
            check_finite(&fm, x - h)?;
            for i in 0..N {
                out[i] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        _ => {
            let (fp1, fm1, fp2, fm2) = (f(x + h), f(x - h), f(x + 2.0 * h), f(x - 2.0 * h));
            check_finite(&fp1, x + h)?;
            check_finite(&fm1, x - h)?;
            check_finite(&fp2, x + 2.0 * h)?;
            check_finite(&fm2, x - 2.0 * h)?;
            for i in 0..N {
                out[i] = (8.0 * (fp1[i] - fm1[i]) - (fp2[i] - fm2[i])) / (12.0 * h);
            }
        }
    }
    Ok(out)
}

/// Scalar convenience wrapper around [`derivative_fd`].
pub fn derivative_fd_scalar(f: impl Fn(f64) -> f64, x: f64, scheme: &FDScheme) -> Result<f64> {
    derivative_fd(|t| [f(t)], x, scheme).map(|d| d[0])
}

/// State of an ODE: independent parameter and state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ODEState<const N: usize> {
    pub s: f64,
    pub y: SVector<f64, N>,
}

impl<const N: usize> ODEState<N> {
    pub fn new(s: f64, y: SVector<f64, N>) -> Self {
        Self { s, y }
    }
}

/// One classical Runge-Kutta step of size `h`.
#[inline]
pub fn rk4_step<const N: usize>(
    f: &impl Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    state: &ODEState<N>,
    h: f64,
) -> ODEState<N> {
    let (s, y) = (state.s, &state.y);
    let k1 = f(s, y);
    let k2 = f(s + 0.5 * h, &(y + k1 * (0.5 * h)));
    let k3 = f(s + 0.5 * h, &(y + k2 * (0.5 * h)));
    let k4 = f(s + h, &(y + k3 * h));
    ODEState { s: s + h, y: y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0) }
}

/// Number of uniform steps of size at most `step` covering `span`.
pub(crate) fn uniform_steps(span: f64, step: f64) -> usize {
    ((span.abs() / step).ceil() as usize).max(1)
}

/// Integrate `y' = f(s, y)` from `y0` to `s_end` with RK4 on a uniform grid whose
/// spacing does not exceed `step`. Works in either direction.
pub fn integrate_rk4<const N: usize>(
    f: impl Fn(f64, &SVector<f64, N>) -> SVector<f64, N>,
    y0: ODEState<N>,
    s_end: f64,
    step: f64,
) -> Result<ODEState<N>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidArgument(format!("RK4 step {step} must be positive")));
    }
    let span = s_end - y0.s;
    if span == 0.0 {
        return Ok(y0);
    }
    let n = uniform_steps(span, step);
    let h = span / n as f64;
    let mut state = y0;
    for k in 0..n {
        state = rk4_step(&f, &state, h);
        if k + 1 == n {
            state.s = s_end;
        }
        if !state.y.iter().all(|c| c.is_finite()) {
            return Err(Error::Blowup { s: state.s });
        }
    }
    Ok(state)
}

/// Total unwrapped change of an ordered angle sequence divided by `period`.
///
/// Consecutive samples must differ by less than half a period modulo the
/// period; otherwise the direction of rotation is ambiguous.
pub fn winding_number(angles: &[f64], period: f64) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::InvalidArgument("winding period must be positive".into()));
    }
    let mut total = 0.0;
    for w in angles.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite()) {
            return Err(Error::NonFiniteSample { at: "angle sequence".into() });
        }
        let d = w[1] - w[0];
        let reduced = d - period * (d / period).round();
        if reduced.abs() >= 0.5 * period * (1.0 - 1e-9) {
            return Err(Error::UndersampledCurve { gap: reduced.abs(), period });
        }
        total += reduced;
    }
    Ok(total / period)
}
