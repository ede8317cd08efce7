use crate::error::Result;
use crate::exactnum::{Dual, Ring};
use crate::funcfield::{Derivation, FfElem};

/// Coefficient rings the p-curvature engine runs over: K itself and K[ε]/(ε²).
///
/// A derivation of K acts on K[ε] ε-linearly.
pub trait DiffCoeff: Ring {
    fn derive(&self, theta: &Derivation) -> Self;

    /// Multiplication by a function of K.
    fn mul_function(&self, u: &FfElem) -> Self;

    /// Embeds a function of K.
    fn lift(&self, u: &FfElem) -> Self;

    fn check_cap(&self) -> Result<()>;
}

impl DiffCoeff for FfElem {
    fn derive(&self, theta: &Derivation) -> Self {
        theta.apply(self)
    }
    fn mul_function(&self, u: &FfElem) -> Self {
        self.mul(u)
    }
    fn lift(&self, u: &FfElem) -> Self {
        u.clone()
    }
    fn check_cap(&self) -> Result<()> {
        FfElem::check_cap(self)
    }
}

impl DiffCoeff for Dual<FfElem> {
    fn derive(&self, theta: &Derivation) -> Self {
        self.map(|u| theta.apply(u))
    }
    fn mul_function(&self, u: &FfElem) -> Self {
        self.map(|a| a.mul(u))
    }
    fn lift(&self, u: &FfElem) -> Self {
        Dual::constant(u.clone())
    }
    fn check_cap(&self) -> Result<()> {
        self.body.check_cap()?;
        self.slope.check_cap()
    }
}
