//! Finite-scale computation of lax orthogonal factorisation systems on
//! preorders: the down-set factorisation whose fibrant objects are the
//! complete lattices, KZ lifting operations, Kan injectivity, and the
//! finite topology (Scott opens, way-below, filter monad) around them.

pub mod adjunction;
pub mod awfs;
pub mod downset_monad;
pub mod error;
pub mod io;
pub mod kan;
pub mod lifting;
pub mod limits;
pub mod oracle;
pub mod order;
pub mod suite;
pub mod topology;

pub use error::{OrderError, Result};
pub use limits::Limits;
pub use order::{FinPreorder, MonotoneMap};
