pub mod bialg;
pub mod error;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod mpf;
pub mod path;
pub mod periods;
pub mod poly;
pub mod quadrature;
pub mod roots;
pub mod ratfunc;
pub mod scalar;
pub mod strata;
pub mod torus;
pub mod varieties;

pub use error::{Error, Result};
pub use mpf::Mpf;
pub use scalar::{ComplexExt, GaussRat, Real, Scalar};

/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Exact Gaussian rationals `Q(i)`.
pub type GaussianRational = GaussRat;
/// Arbitrary-precision reals at the working precision.
pub type BigReal = Mpf;
pub type BigComplex = num_complex::Complex<Mpf>;
pub type Complex64 = num_complex::Complex<f64>;
/// Configurations with exact coordinates.
pub type ExactConfig = strata::DiffConfig<GaussRat>;
/// Configurations at the working precision.
pub type NumericConfig = strata::DiffConfig<BigComplex>;
