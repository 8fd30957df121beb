//! Max-plus linear algebra and a solver for max-atom systems
//! `x_i ≤ a + max(x_j, x_k)`.

pub mod maxplus;
pub mod model;
pub mod nonpositive;
pub mod oracle;
pub mod positive;
pub mod solve;
