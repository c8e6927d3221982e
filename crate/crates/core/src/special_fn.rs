//! Euler Beta and log-Gamma functions.
//!
//! The floating-point routes use a Lanczos approximation (the g = 6.0247,
//! 13-term set that is accurate to double precision) and assemble the Beta
//! function in log space so that the large power terms cancel before
//! exponentiation. Integer arguments are routed through [`beta_exact`], which
//! works in arbitrary-precision rationals and doubles as the test oracle.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest Beta argument accepted by [`beta`].
pub const MAX_BETA_ARGUMENT: f64 = 1.0e4;

/// Largest `m + n - 1` accepted by [`beta_exact`].
pub const MAX_EXACT_ORDER: u64 = 20_000;

/// Integer arguments with `m + n` at most this go through the exact path.
const EXACT_FAST_PATH_LIMIT: u64 = 512;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("{function}: argument {name}={value} is outside the domain ({requirement})")]
    Domain {
        function: &'static str,
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },
    #[error("{function}: argument {value} exceeds the supported range (max {max})")]
    OutOfRange {
        function: &'static str,
        value: f64,
        max: f64,
    },
    #[error("beta({m}, {n}) overflows f64")]
    Overflow { m: f64, n: f64 },
    #[error("beta({m}, {n}) underflows f64")]
    Underflow { m: f64, n: f64 },
}

/// Validated arguments of the Beta function `β(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaArgs {
    m: f64,
    n: f64,
}

impl BetaArgs {
    pub fn new(m: f64, n: f64) -> Result<Self, SpecialFnError> {
        for (name, value) in [("m", m), ("n", n)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(SpecialFnError::Domain {
                    function: "beta",
                    name,
                    value,
                    requirement: "finite and > 0",
                });
            }
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

/// A rational number in lowest terms with a positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        // Ratio::new reduces and normalizes the sign onto the numerator.
        Some(Self(BigRational::new(numerator, denominator)))
    }

    pub fn from_integer(value: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_ratio(numerator: i64, denominator: i64) -> Option<Self> {
        Self::new(BigInt::from(numerator), BigInt::from(denominator))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = BigRational::one();
        for _ in 0..exponent {
            acc *= &self.0;
        }
        Self(acc)
    }

    /// Nearest `f64` (may be `0.0` or infinite when out of range).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator(), self.denominator())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// `β(m, n) = (m-1)!(n-1)!/(m+n-1)!` for positive integers, exactly.
pub fn beta_exact(m: u64, n: u64) -> Result<ExactRational, SpecialFnError> {
    for (name, value) in [("m", m), ("n", n)] {
        if value == 0 {
            return Err(SpecialFnError::Domain {
                function: "beta_exact",
                name,
                value: 0.0,
                requirement: "integer >= 1",
            });
        }
    }
    let order = m + n - 1;
    if order > MAX_EXACT_ORDER {
        return Err(SpecialFnError::OutOfRange {
            function: "beta_exact",
            value: order as f64,
            max: MAX_EXACT_ORDER as f64,
        });
    }
    let numerator = factorial(m - 1) * factorial(n - 1);
    let denominator = factorial(order);
    Ok(ExactRational(BigRational::new(
        BigInt::from(numerator),
        BigInt::from(denominator),
    )))
}

// Lanczos approximation, g = 6.024680040776729583740234375, N = 13.
#[allow(clippy::excessive_precision)]
const LANCZOS_G: f64 = 6.024_680_040_776_729_583_740_234_375;
#[allow(clippy::excessive_precision)]
const LANCZOS_NUM: [f64; 13] = [
    23531376880.410759688572007674451636754734846804940,
    42919803642.649098768957899047001988850926355848959,
    35711959237.355668049440185451547166705960488635843,
    17921034426.037209699919755754458931112671403265390,
    6039542586.3520280050642916443072979210699388420708,
    1439720407.3117216736632230727949123939715485786772,
    248874557.86205415651146038641322942321632125127801,
    31426415.585400194380614231628318205362874684987640,
    2876370.6289353724412254090516208496135991145378768,
    186056.26539522349504029498971604569928220784236328,
    8071.6720023658162106380029022722506138218516325024,
    210.82427775157934587250973392071336271166969580291,
    2.5066282746310002701649081771338373386264310793408,
];
const LANCZOS_DEN: [f64; 13] = [
    0.0,
    39916800.0,
    120543840.0,
    150917976.0,
    105258076.0,
    45995730.0,
    13339535.0,
    2637558.0,
    357423.0,
    32670.0,
    1925.0,
    66.0,
    1.0,
];

/// Rational Lanczos sum `S(x)` with `Γ(x) = S(x) (x+g-1/2)^(x-1/2) e^-(x+g-1/2)`.
fn lanczos_sum(x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    if x < 8.0 {
        for i in (0..LANCZOS_NUM.len()).rev() {
            num = num * x + LANCZOS_NUM[i];
            den = den * x + LANCZOS_DEN[i];
        }
    } else {
        for i in 0..LANCZOS_NUM.len() {
            num = num / x + LANCZOS_NUM[i];
            den = den / x + LANCZOS_DEN[i];
        }
    }
    num / den
}

/// `ζ(k) - 1` for k = 0..=40 (entries 0 and 1 unused), by Euler–Maclaurin.
fn zeta_minus_one() -> &'static [f64; 41] {
    static TABLE: OnceLock<[f64; 41]> = OnceLock::new();
    TABLE.get_or_init(|| {
        const CUT: f64 = 16.0;
        // B_{2j} / (2j)!
        const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
            1.0 / 6.0 / 2.0,
            -1.0 / 30.0 / 24.0,
            1.0 / 42.0 / 720.0,
            -1.0 / 30.0 / 40320.0,
            5.0 / 66.0 / 3628800.0,
            -691.0 / 2730.0 / 479001600.0,
        ];
        let mut table = [0.0; 41];
        for (k, slot) in table.iter_mut().enumerate().skip(2) {
            let kf = k as f64;
            let mut tail = CUT.powf(1.0 - kf) / (kf - 1.0) + 0.5 * CUT.powf(-kf);
            let mut rising = kf;
            for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
                if j > 0 {
                    let base = kf + 2.0 * j as f64;
                    rising *= (base - 1.0) * base;
                }
                tail += coeff * rising * CUT.powf(-kf - 2.0 * j as f64 - 1.0);
            }
            let head: f64 = (2..16).rev().map(|i| (i as f64).powf(-kf)).sum();
            *slot = head + tail;
        }
        table
    })
}

/// `ln Γ(2 + ε)` by its Taylor series; intended for |ε| ≤ 1/2.
fn log_gamma_near_two(eps: f64) -> f64 {
    let zeta = zeta_minus_one();
    let mut sum = 0.0;
    for k in (2..zeta.len()).rev() {
        let term = zeta[k] / k as f64 * (-eps).powi(k as i32);
        sum += term;
    }
    (1.0 - EULER_GAMMA) * eps + sum
}

fn log_gamma_lanczos(x: f64) -> f64 {
    let scaled = lanczos_sum(x) * (-LANCZOS_G).exp();
    let shifted = x + LANCZOS_G - 0.5;
    (x - 0.5) * (shifted.ln() - 1.0) + scaled.ln()
}

/// Natural logarithm of the Gamma function for `x > 0`.
///
/// Around the zeros at 1 and 2 a Taylor expansion keeps the result accurate
/// in the relative sense; elsewhere the Lanczos form is used.
pub fn log_gamma(x: f64) -> Result<f64, SpecialFnError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecialFnError::Domain {
            function: "log_gamma",
            name: "x",
            value: x,
            requirement: "finite and > 0",
        });
    }
    let value = if (1.5..2.5).contains(&x) {
        log_gamma_near_two(x - 2.0)
    } else if (0.5..1.5).contains(&x) {
        // ln Γ(x) = ln Γ(x + 1) - ln x, and x + 1 = 2 + (x - 1) exactly.
        log_gamma_near_two(x - 1.0) - x.ln()
    } else {
        log_gamma_lanczos(x)
    };
    Ok(value)
}

fn is_small_integer(x: f64) -> Option<u64> {
    (x.fract() == 0.0 && x <= EXACT_FAST_PATH_LIMIT as f64).then_some(x as u64)
}

/// Euler Beta function `β(m, n) = Γ(m)Γ(n)/Γ(m+n)`.
pub fn beta(args: BetaArgs) -> Result<f64, SpecialFnError> {
    let (m, n) = (args.m, args.n);
    for value in [m, n] {
        if value > MAX_BETA_ARGUMENT {
            return Err(SpecialFnError::OutOfRange {
                function: "beta",
                value,
                max: MAX_BETA_ARGUMENT,
            });
        }
    }

    if let (Some(mi), Some(ni)) = (is_small_integer(m), is_small_integer(n)) {
        if mi + ni <= EXACT_FAST_PATH_LIMIT {
            let value = beta_exact(mi, ni)?.to_f64();
            return check_beta_range(value, m, n);
        }
    }

    // Order the arguments so the result is exactly symmetric.
    let (a, b) = if m >= n { (m, n) } else { (n, m) };
    let c = a + b;
    let cgh = c + LANCZOS_G - 0.5;
    let bgh = b + LANCZOS_G - 0.5;

    let ratio = lanczos_sum(a) * (lanczos_sum(b) / lanczos_sum(c));
    // (agh/cgh)^(a-1/2) (bgh/cgh)^b with agh/cgh = 1 - b/cgh, bgh/cgh = 1 - a/cgh.
    let exponent = (a - 0.5) * (-b / cgh).ln_1p() + b * (-a / cgh).ln_1p();
    let value = ratio * (0.5 - LANCZOS_G + exponent).exp() / bgh.sqrt();
    check_beta_range(value, m, n)
}

fn check_beta_range(value: f64, m: f64, n: f64) -> Result<f64, SpecialFnError> {
    if !value.is_finite() {
        Err(SpecialFnError::Overflow { m, n })
    } else if value == 0.0 {
        Err(SpecialFnError::Underflow { m, n })
    } else {
        Ok(value)
    }
}

/// Shorthand for `beta(BetaArgs::new(m, n)?)`.
pub fn beta_of(m: f64, n: f64) -> Result<f64, SpecialFnError> {
    beta(BetaArgs::new(m, n)?)
}
