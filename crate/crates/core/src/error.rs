use thiserror::Error;

use crate::network::Violation;

pub type Result<T> = std::result::Result<T, FrlpError>;

#[derive(Debug, Error)]
pub enum FrlpError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("invalid instance:\n{}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("demand {demand}: destination unreachable, no route exists")]
    NoRoute { demand: usize },

    #[error("demand {demand}: route enumeration exceeded the cap of {cap} routes")]
    EnumerationOverflow { demand: usize, cap: usize },

    #[error("route uses edge {from}->{to} of length {length} longer than the range {range}")]
    EdgeTooLong {
        from: usize,
        to: usize,
        length: f64,
        range: f64,
    },

    #[error("cut-set aggregation exceeded the guard of {guard} intermediate unions")]
    AggregationOverflow { guard: usize },

    #[error("minimality witness undefined: {0}")]
    WitnessUndefined(String),

    #[error("{what} supports at most {cap} nodes, instance has {nodes}")]
    DimensionCap {
        what: &'static str,
        nodes: usize,
        cap: usize,
    },

    #[error("model inputs missing: {0}")]
    MissingInputs(String),

    #[error("LP numerical failure: {0}")]
    NumericalFailure(String),

    #[error("infeasible: demands {} cannot be served even with every allowed station open", .demands.join(", "))]
    Infeasible { demands: Vec<String> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the original variant requires an undirected network; {0}")]
    DirectedNetwork(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  - {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}
