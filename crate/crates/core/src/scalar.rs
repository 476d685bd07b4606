//! Scalar arithmetic over two interchangeable backends.
//!
//! Every quantity in this crate is either an exact rational (the default for
//! all combinatorial constructions) or a complex double with a comparison
//! tolerance `eps` (for continuous families with irrational parameters).
//! Backends never mix inside one tensor; mixing them in a scalar operation is
//! a programming error and panics.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Default comparison tolerance for the float backend.
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Which arithmetic a value (or a whole tensor) lives in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    /// Arbitrary-precision rationals, compared exactly.
    Exact,
    /// Complex doubles, compared up to `eps` in modulus.
    Float {
        /// Comparison tolerance, strictly positive.
        eps: f64,
    },
}

impl Backend {
    /// Float backend with the default tolerance.
    pub fn float_default() -> Self {
        Backend::Float {
            eps: DEFAULT_EPSILON,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Backend::Exact)
    }

    /// The tolerance used for equality on this backend (0 for exact).
    pub fn eps(&self) -> f64 {
        match self {
            Backend::Exact => 0.0,
            Backend::Float { eps } => *eps,
        }
    }
}

/// A backend-tagged scalar value.
///
/// Exact values are rationals kept in lowest terms with positive denominator
/// (an invariant `BigRational` maintains for us). Float values carry the
/// tolerance of the context they belong to.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float { value: Complex64, eps: f64 },
}

impl Scalar {
    pub fn zero(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(BigRational::zero()),
            Backend::Float { eps } => Scalar::Float {
                value: Complex64::new(0.0, 0.0),
                eps,
            },
        }
    }

    pub fn one(backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(BigRational::one()),
            Backend::Float { eps } => Scalar::Float {
                value: Complex64::new(1.0, 0.0),
                eps,
            },
        }
    }

    pub fn from_int(v: i64, backend: Backend) -> Self {
        match backend {
            Backend::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(v))),
            Backend::Float { eps } => Scalar::Float {
                value: Complex64::new(v as f64, 0.0),
                eps,
            },
        }
    }

    /// Exact rational `num/den`. Panics when `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn from_complex(value: Complex64, eps: f64) -> Self {
        Scalar::Float { value, eps }
    }

    pub fn from_f64(value: f64, eps: f64) -> Self {
        Scalar::Float {
            value: Complex64::new(value, 0.0),
            eps,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Exact(_) => Backend::Exact,
            Scalar::Float { eps, .. } => Backend::Float { eps: *eps },
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float { .. } => None,
        }
    }

    pub fn as_complex(&self) -> Option<Complex64> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Float { value, .. } => Some(*value),
        }
    }

    /// True when the value is zero (exactly, or within `eps` in modulus).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float { value, eps } => value.norm() <= *eps,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_one(),
            Scalar::Float { value, eps } => (value - Complex64::new(1.0, 0.0)).norm() <= *eps,
        }
    }

    /// True only for the exact rational one; float values near one do not
    /// qualify, so multiply-by-one shortcuts stay bit-faithful.
    pub(crate) fn is_exact_one(&self) -> bool {
        matches!(self, Scalar::Exact(r) if r.is_one())
    }

    /// Backend-aware equality: exact comparison, or `|a - b| <= eps`.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Float { value: a, eps }, Scalar::Float { value: b, .. }) => {
                (a - b).norm() <= *eps
            }
            _ => false,
        }
    }

    /// Modulus of the value as `f64`, used for pivot selection.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().map(f64::abs).unwrap_or(f64::INFINITY),
            Scalar::Float { value, .. } => value.norm(),
        }
    }

    /// Multiplicative inverse. Panics on (backend-)zero input.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Exact(r.recip())
            }
            Scalar::Float { value, eps } => {
                assert!(value.norm() > *eps, "division by (near-)zero");
                Scalar::Float {
                    value: value.inv(),
                    eps: *eps,
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self * &other.inv()
    }

    /// Nonnegative integer value, if the scalar is one (exact backend:
    /// exactly; float backend: within eps of an integer).
    pub fn to_usize(&self) -> Option<usize> {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() && !r.is_negative() {
                    r.to_integer().to_usize()
                } else {
                    None
                }
            }
            Scalar::Float { value, eps } => {
                if value.im.abs() > *eps {
                    return None;
                }
                let rounded = value.re.round();
                if (value.re - rounded).abs() <= *eps && rounded >= 0.0 {
                    Some(rounded as usize)
                } else {
                    None
                }
            }
        }
    }
}

fn merged_eps(a: f64, b: f64) -> f64 {
    // Tolerances within one computation context are identical; mixing
    // contexts is a caller bug.
    assert!(a == b, "mixed float tolerances: {a} vs {b}");
    a
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (
                        Scalar::Float { value: a, eps: ea },
                        Scalar::Float { value: b, eps: eb },
                    ) => Scalar::Float { value: a $op b, eps: merged_eps(*ea, *eb) },
                    _ => panic!("scalar backend mismatch"),
                }
            }
        }

        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float { value, eps } => Scalar::Float {
                value: -value,
                eps: *eps,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float { value, .. } => {
                if value.im == 0.0 {
                    write!(f, "{}", value.re)
                } else {
                    write!(f, "{}{:+}i", value.re, value.im)
                }
            }
        }
    }
}
