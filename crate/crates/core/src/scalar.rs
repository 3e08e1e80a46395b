use nalgebra::RealField;
use num_traits::ToPrimitive;

/// Real scalar the numerical core is generic over.
///
/// Everything in this crate is written against this trait so the same code
/// runs in `f32` and `f64`. Literal constants go through [`Scalar::lit`].
pub trait Scalar: RealField + Copy + ToPrimitive + Send + Sync + 'static {
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(value: f64) -> Self {
        nalgebra::convert(value)
    }

    /// Lossy conversion used for error messages and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn from_count(value: usize) -> Self {
        Self::lit(value as f64)
    }

    #[inline]
    fn sqrt2() -> Self {
        Self::lit(std::f64::consts::SQRT_2)
    }

    #[inline]
    fn inv_sqrt2() -> Self {
        Self::lit(std::f64::consts::FRAC_1_SQRT_2)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Tolerances shared by every check in the crate.
///
/// `algebraic` bounds residuals of identities (unitarity, noise condition,
/// channel reconstruction). `psd` bounds how negative a minimum eigenvalue
/// may be before a matrix is declared indefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub algebraic: T,
    pub psd: T,
}

impl<T: Scalar> Tolerances<T> {
    pub fn new(algebraic: T, psd: T) -> Self {
        Self { algebraic, psd }
    }

    /// Same PSD tolerance, different algebraic one.
    pub fn with_algebraic(self, algebraic: T) -> Self {
        Self { algebraic, ..self }
    }
}

impl<T: Scalar> Default for Tolerances<T> {
    /// `1e-10` / `1e-9` in double precision; widened to a few hundred ulps
    /// for narrower types.
    fn default() -> Self {
        let eps = T::default_epsilon();
        Self {
            algebraic: T::lit(1e-10).max(eps * T::lit(1e3)),
            psd: T::lit(1e-9).max(eps * T::lit(1e4)),
        }
    }
}
