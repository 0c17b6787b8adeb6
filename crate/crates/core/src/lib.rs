//! Station placement for the original (symmetric) and cyclic flow refueling
//! location problems.
//!
//! The crate covers the whole pipeline: instance loading ([`network`]), route
//! enumeration ([`routes`]), cut-set covering families ([`covering`]),
//! servedness checks with witnesses ([`feasibility`]), LP relaxations and
//! bounds ([`lp`]), branch-and-cut ([`solver`]), brute-force reference
//! answers ([`oracle`]) and instance generators ([`generators`]).

pub mod covering;
pub mod error;
pub mod feasibility;
pub mod generators;
pub mod lp;
pub mod network;
pub mod nodeset;
pub mod oracle;
pub mod routes;
pub mod solver;

pub use error::{FrlpError, Result};
pub use network::{
    parse_instance, serialize_instance, shortest_distance, Demand, Edge, Instance, Network, NodeId,
    PlacementConstraints, RouteSpec, Variant,
};
pub use nodeset::NodeSet;
pub use routes::{enumerate_routes, is_traversable, route_budget, Route, RouteKind};
