//! Dependence maps over finite domains: enumeration, counting, adjoints,
//! incidence and dualization.

pub mod adjoint;
pub mod lemmas;
pub mod map;

pub use adjoint::{adjoint, digit, from_adjoint, AdjointMap, NotElementary};
pub use lemmas::{dualize_dependence, incidence, Dualization};
pub use map::{
    count_dependence_maps, enumerate_dependence_maps, DependenceMap, DependenceMaps, Layout,
    Valuation, DEFAULT_BOUND,
};
