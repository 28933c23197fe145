//! Signed numbers stored as `sign · e^{ln}`, for sums whose terms overflow
//! or underflow `f64` individually.

use std::ops::Mul;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// -1, 0 or 1
    pub sign: i8,
    pub ln: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: 0, ln: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: 1, ln: 0.0 };

    pub fn new(sign: i8, ln: f64) -> Self {
        if sign == 0 || ln == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            SignedLog { sign: sign.signum(), ln }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            SignedLog { sign: if x > 0.0 { 1 } else { -1 }, ln: x.abs().ln() }
        }
    }

    pub fn positive(ln: f64) -> Self {
        Self::new(1, ln)
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln.exp()
        }
    }

    pub fn abs(self) -> Self {
        SignedLog { sign: self.sign.abs(), ln: self.ln }
    }

    /// Multiplies by `e^{delta}`.
    pub fn shift(self, delta: f64) -> Self {
        Self::new(self.sign, self.ln + delta)
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog::new(self.sign * rhs.sign, self.ln + rhs.ln)
    }
}

/// Sum of signed log values, shifted by the largest magnitude before
/// exponentiating.
pub fn log_sum<I: IntoIterator<Item = SignedLog>>(terms: I) -> SignedLog {
    let terms: Vec<SignedLog> = terms.into_iter().filter(|t| !t.is_zero()).collect();
    let Some(max) = terms.iter().map(|t| t.ln).max_by(f64::total_cmp) else {
        return SignedLog::ZERO;
    };
    if max == f64::INFINITY {
        let s: f64 = terms.iter().filter(|t| t.ln == max).map(|t| f64::from(t.sign)).sum();
        return SignedLog::new(s.signum() as i8, if s == 0.0 { f64::NAN } else { max });
    }
    let s: f64 = terms.iter().map(|t| f64::from(t.sign) * (t.ln - max).exp()).sum();
    SignedLog::from_f64(s).shift(max)
}
