//! Linear complexity of binary sequences built from the spacings between consecutive
//! quadratic residues and between consecutive primitive roots modulo a prime.
//!
//! The number theory is generic over [`numtheory::Natural`], implemented for `u64` (the
//! whole-field sweeps) and `BigUint` (the 10^30-10^40 Monte Carlo moduli); the aliases
//! below name the two instantiations the experiments use.
//!
//! ```
//! use spacing_lc::experiments::qr_complexity;
//! use spacing_lc::{Ratio, SmallPrime};
//!
//! let r = qr_complexity(&SmallPrime::new(11)?)?;
//! assert_eq!((r.period_length, r.complexity), (4, 3));
//! assert_eq!(r.normalized, Ratio::new(3, 4));
//! # Ok::<(), spacing_lc::Error>(())
//! ```

pub mod error;
pub mod experiments;
pub mod linear_complexity;
pub mod numtheory;
pub mod sequences;

pub use error::{Error, Result};
pub use num_bigint::BigUint;
pub use num_rational::Ratio;

/// Machine-word prime modulus, used by the sweeps.
pub type SmallPrime = numtheory::PrimeModulus<u64>;
/// Arbitrary-precision prime modulus, used by the Monte Carlo runs.
pub type BigPrime = numtheory::PrimeModulus<BigUint>;
/// Exact normalized complexity `L / period`.
pub type Normalized = Ratio<u64>;
pub type SmallFactorization = numtheory::Factorization<u64>;
pub type BigFactorization = numtheory::Factorization<BigUint>;
