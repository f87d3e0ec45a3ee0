//! Capacity bounds for two-relay diamond networks whose broadcast hop is a
//! pair of orthogonal bit-pipes and whose second hop is a multiple-access
//! channel.
//!
//! The crate covers generic finite-alphabet channels ([`dmc`]), the Gaussian
//! channel ([`gaussian`]), the binary adder channel ([`adder`]) and a
//! Monte-Carlo simulator of the random coding scheme ([`sim`]).

pub mod adder;
pub mod dmc;
pub mod entropy;
pub mod error;
pub mod gaussian;
pub mod optim;
pub mod pmf;
pub mod quad;
pub mod report;
pub mod sim;
pub mod sweep;
pub mod verify;

pub use entropy::{h2, h2_inv, mutual_info, star, Bits, Prob};
pub use error::{Error, Result};
pub use report::BoundReport;
