//! Positive-word navigation in finite quotients by the potent
//! Solovay–Kitaev procedure, with two instances: SL2 over F_q[t]/(t^n)
//! for even q, and the Fabrykowski–Gupta group acting on the ternary tree.

pub mod algebra;
pub mod engine;
pub mod error;
pub mod f3;
pub mod fabgup;
pub mod group;
pub mod oracle;
pub mod sl2;
pub mod spectral;
pub mod tree;

pub use engine::{Instance, NavigationResult, Navigator, Word};
pub use error::{Error, Result};
pub use group::Quotient;
