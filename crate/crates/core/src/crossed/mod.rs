//! Conjugacy-class crossed modules, the cocycle ζ, the braiding Ψ and the
//! braided integer and factorial operators on tensor powers.

mod module;
mod operator;
mod tensor;

pub use module::CrossedModule;
pub use operator::{yang_baxter_holds, BraidKind, BraidOp};
pub use tensor::{TensorVec, Word};
