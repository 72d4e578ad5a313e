//! Exact scalars: the cyclotomic field `Q(ξ_m)`, polynomials and rational
//! functions in the deformation parameter `q` over it, and the parameter
//! sequence `ε_n` that deforms the scalar product.

mod cyclotomic;
mod params;
mod poly;
mod ratfunc;

pub(crate) use cyclotomic::forward_owned;
pub use cyclotomic::{parse_rational, rational_to_string, Cyc, CyclotomicField};
pub use params::{ParamMode, Params};
pub use poly::CycPoly;
pub use ratfunc::CycRat;
