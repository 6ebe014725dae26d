//! Explicit colorings of exponential graphs.
//!
//! For a host graph `H`, the exponential graph `K_3^H` has every function
//! `V(H) -> {1,2,3}` as a vertex, two functions `f, g` being adjacent when
//! `f(u) != g(v)` for every edge `uv` of `H`. When `H` is not 3-colorable the
//! non-isolated part of `K_3^H` is 3-colorable, and this crate assigns the
//! color of a single function in time linear in the length of one odd cycle
//! of `H`, using the winding-style label of the function around the
//! "step-two" chord cycle and the value of a short path on it.
//!
//! Layout:
//!
//! * [`graph`]: simple undirected graphs, generators and small exact solvers.
//! * [`arith`]: arc values, labels and little-path values on odd cycles.
//! * [`expo`]: adjacency in `K_k^H` / `C_k^H`, neighbor streams, explicit
//!   construction and component analysis at desk scale.
//! * [`colorize`]: the per-vertex coloring routine, its odd-cycle-target
//!   variant, the bipartition baseline and the general-`H` pipeline.
//! * [`oracle`]: exhaustive verifiers for every property the coloring
//!   relies on.

pub mod arith;
pub mod colorize;
mod error;
pub mod expo;
pub mod graph;
pub mod oracle;

pub use arith::{Assignment, Half, OddCycleCtx};
pub use colorize::{Branch, ColorVerdict, CycleCache};
pub use error::{Error, Result};
pub use expo::{ComponentClass, ExpoGraph, Target};
pub use graph::{CycleWitness, Graph};
pub use oracle::VerificationReport;
