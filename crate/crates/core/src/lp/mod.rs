//! Linear programming: the simplex engine, covering model builders and the
//! value-function bound evaluators.

pub mod bounds;
pub mod model;
pub mod simplex;

pub use bounds::{eval_v_agg, eval_v_disagg, eval_v_tight, TightEvaluator};
pub use model::{build_model, lp_bound, Formulation, MipModel, ModelInputs, VarRole};
pub use simplex::{solve_lp, LinearProgram, LpSolution, LpStatus, Relation, Row, Sense};
