//! Exact arithmetic over rational combinations of `√r · π^{m/2}` and the
//! ball/sphere volume constants.

mod constants;
mod pi_scalar;
mod rational;

pub use constants::{alpha, ln_alpha, ln_binomial, ln_omega, omega, ConstantTable};
pub use pi_scalar::{float_of, square_free_split, Monomial, PiScalar, MAX_FLOAT_DIGITS};
pub use rational::{
    binomial, factorial, generalized_binomial, generalized_binomial_f64, rat, rat_int, HalfInteger, Rational,
};

/// Binary operation selector for [`pi_scalar_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

pub fn pi_scalar_arith(a: &PiScalar, b: &PiScalar, op: ArithOp) -> PiScalar {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    }
}
