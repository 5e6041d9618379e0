#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frame;
pub mod fusion;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod partition;
pub mod replacement;
pub mod report;
pub mod rip;
pub mod subsets;
pub mod verify;

pub use error::{Error, Result};
pub use frame::{ConvergenceFailure, Frame, FrameBounds};
pub use numerics::{Field, Matrix, Scalar, Tolerances};
pub use partition::Partition;
pub use rip::{RieszBounds, RipMethod, RipReport};
