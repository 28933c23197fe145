use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GkfError;

/// The seven coordinate systems on the space of invariant valuations of Σ^N.
///
/// * `Phi`   – powers of the Crofton valuation φ
/// * `T`     – powers of the Lipschitz–Killing generator t
/// * `U`     – powers of u = t/√(4N)
/// * `Mu`    – intrinsic volumes μ_i
/// * `Tau`   – curvature integrals τ_i
/// * `Sigma` – rescaled curvature integrals σ_i = τ_{N−i}/(4N)^{(N−i)/2}
/// * `Nu`    – the dual family of the χ kinematic formula, p_N(χ) = Σ u^k ⊗ ν_k
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    Phi,
    T,
    U,
    Mu,
    Tau,
    Sigma,
    Nu,
}

impl Basis {
    pub const ALL: [Basis; 7] =
        [Basis::Phi, Basis::T, Basis::U, Basis::Mu, Basis::Tau, Basis::Sigma, Basis::Nu];

    pub fn name(self) -> &'static str {
        match self {
            Basis::Phi => "phi",
            Basis::T => "t",
            Basis::U => "u",
            Basis::Mu => "mu",
            Basis::Tau => "tau",
            Basis::Sigma => "sigma",
            Basis::Nu => "nu",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = GkfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Basis::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| GkfError::Parse(format!("unknown basis `{s}`")))
    }
}
