//! Girth-8 `(3, L)` fully connected QC-LDPC codes.
//!
//! * [`exponent`]: exponent matrices, girth-8 matrices and the transforms
//!   between them.
//! * [`girth`]: three independent girth checkers.
//! * [`bounds`]: lower bounds on the lifting degree and an exhaustive
//!   nonexistence search for small `L`.
//! * [`construct`]: explicit constructions with an arithmetic second row.
//! * [`lifting`]: circulant lifting, GF(2) rank, alist I/O.
//! * [`sim`]: Min-Sum BER/FER simulation over BPSK/AWGN.
//!
//! ```
//! use qcldpc::{construct, girth, lifting};
//!
//! let code = construct::construct_d1(5).unwrap();
//! assert_eq!(code.p_min, 17);
//! let h = lifting::lift(&code.e_min);
//! assert_eq!(girth::girth_lifted(&h).unwrap(), girth::Girth::Cycle(8));
//! ```

pub mod bounds;
pub mod construct;
pub mod error;
pub mod exec;
pub mod exponent;
pub mod girth;
pub mod lifting;
pub mod sim;

pub use error::{Error, Result};
pub use exec::Workers;
pub use exponent::{ExponentMatrix, Girth8Matrix, Modulus};
pub use girth::Girth;
pub use lifting::SparseBinaryMatrix;
