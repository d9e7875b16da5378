//! Strong-stability-preserving explicit Runge-Kutta steppers in Shu-Osher
//! form.

use std::fmt;

use crate::error::{Result, SolverError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stepper {
    ForwardEuler,
    Tvdrk2,
    Tvdrk3,
}

impl Stepper {
    /// The stepper paired with a spatial order.
    pub fn for_order(order: u8) -> Self {
        match order {
            1 => Self::ForwardEuler,
            2 => Self::Tvdrk2,
            _ => Self::Tvdrk3,
        }
    }

    /// Weight of `u^n` in each stage; the remainder multiplies a forward
    /// Euler step from the previous stage.
    pub fn weights(self) -> &'static [f64] {
        match self {
            Self::ForwardEuler => &[0.0],
            Self::Tvdrk2 => &[0.0, 0.5],
            Self::Tvdrk3 => &[0.0, 0.75, 1.0 / 3.0],
        }
    }
}

impl fmt::Display for Stepper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ForwardEuler => "forward_euler",
            Self::Tvdrk2 => "tvdrk2",
            Self::Tvdrk3 => "tvdrk3",
        })
    }
}

/// A stepper with its stage buffers.
#[derive(Debug, Clone)]
pub struct Integrator {
    kind: Stepper,
    stage: Vec<f64>,
    deriv: Vec<f64>,
    first: Vec<f64>,
}

impl Integrator {
    pub fn new(kind: Stepper, len: usize) -> Self {
        Self { kind, stage: vec![0.0; len], deriv: vec![0.0; len], first: vec![0.0; len] }
    }

    pub fn kind(&self) -> Stepper {
        self.kind
    }

    /// Advances `u` by `dt`.
    ///
    /// `rhs` evaluates the semi-discrete operator and `post` validates or
    /// projects every stage. Returns the derivative of the first stage,
    /// `L(u^n)`, for steady-state monitoring.
    pub fn step<R, P>(&mut self, u: &mut [f64], dt: f64, mut rhs: R, mut post: P) -> Result<&[f64]>
    where
        R: FnMut(&[f64], &mut [f64]) -> Result<()>,
        P: FnMut(&mut [f64]) -> Result<()>,
    {
        self.stage.copy_from_slice(u);
        for (s, &a) in self.kind.weights().iter().enumerate() {
            rhs(&self.stage, &mut self.deriv)?;
            if s == 0 {
                self.first.copy_from_slice(&self.deriv);
            }
            for ((x, &un), &d) in self.stage.iter_mut().zip(u.iter()).zip(&self.deriv) {
                *x = a * un + (1.0 - a) * (*x + dt * d);
            }
            if self.stage.iter().any(|x| !x.is_finite()) {
                return Err(SolverError::StageBlowUp { stage: s + 1 });
            }
            post(&mut self.stage)?;
        }
        u.copy_from_slice(&self.stage);
        Ok(&self.first)
    }
}
