//! Derivative-free local optimizers, driven one probe at a time.
//!
//! Both methods keep exactly one probe outstanding. If asked again before the
//! probe is told, they return a Gaussian sample around the incumbent; such
//! fillers are archived but do not advance the search.

mod cobyla;
mod line_search;
mod powell;

pub use cobyla::{make_cobyla_like, CobylaLike, INITIAL_RADIUS, MIN_RADIUS};
pub use line_search::{LineSearch, LINE_TOLERANCE};
pub use powell::{is_degenerate, make_powell, Powell};
