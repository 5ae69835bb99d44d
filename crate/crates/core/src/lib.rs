//! Exact arithmetic and witness checking for Thompson-like groups acting on
//! Cantor sets and the circle, a small quasimorphism laboratory, and cone-off
//! tools for finite hyperbolic graphs.

pub mod cantor;
pub mod criterion;
pub mod elements;
pub mod hypgraph;
pub mod quasi;
