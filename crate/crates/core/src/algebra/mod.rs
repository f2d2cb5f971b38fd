//! Finite fields, sparse multivariate polynomials and the bivariate
//! machinery (gcd, squarefree part, root finding) needed by the threshold
//! computations.

pub mod bivariate;
pub mod field;
pub mod parse;
pub mod poly;
pub mod roots;
pub mod upoly;

pub use bivariate::{squarefree_part, SquarefreeDecomposition};
pub use field::{FieldElement, FiniteField, PrimeCharacteristic};
pub use parse::{parse_polynomial, parse_univariate};
pub use poly::{poly_arith, Monomial, MvPolynomial, PolyOp, WeightedGrading};
pub use roots::{find_roots, Root};
