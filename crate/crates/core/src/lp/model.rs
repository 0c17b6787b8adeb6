//! Covering models: disaggregated (route variables), aggregated (one served
//! indicator per demand), station minimization and budgeted maximum cover.

use std::fmt;

use crate::covering::CutSetFamily;
use crate::error::{FrlpError, Result};
use crate::lp::simplex::{solve_lp, LinearProgram, LpStatus, Relation, Sense};
use crate::network::{Instance, NodeId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Formulation {
    /// One variable per route, `sum_r z_r <= 1` and `sum_{j in S} x_j >= z_r`.
    Disagg,
    /// One variable per demand with `sum_{j in S} x_j >= y_q`.
    Agg,
    /// Minimize the number of stations subject to serving at least `coverage` of the volume.
    MinStations { coverage: f64 },
    /// Aggregated model with an explicit station budget.
    MaxCover { budget: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarRole {
    Station(NodeId),
    Served(usize),
    RouteUse { demand: usize, route: usize },
}

/// Covering families fed to the builder.
#[derive(Debug, Clone, Copy)]
pub enum ModelInputs<'a> {
    /// One family per route, per demand.
    PerRoute(&'a [Vec<CutSetFamily>]),
    /// One aggregated family per demand.
    Aggregated(&'a [CutSetFamily]),
}

#[derive(Debug, Clone)]
pub struct MipModel {
    pub lp: LinearProgram,
    pub integer: Vec<bool>,
    pub roles: Vec<VarRole>,
    pub formulation: Formulation,
    /// Column of station variable x_j.
    pub x: Vec<usize>,
    /// Column of y_q, absent when every demand must be served.
    pub y: Vec<Option<usize>>,
}

impl MipModel {
    pub fn num_rows(&self) -> usize {
        self.lp.rows.len()
    }

    /// Renders the model with readable variable names, one row per line.
    pub fn describe(&self, instance: &Instance) -> String {
        let name = |j: usize| match self.roles[j] {
            VarRole::Station(n) => format!("x_{}", instance.network.name(n)),
            VarRole::Served(q) => format!("y_{}", q + 1),
            VarRole::RouteUse { demand, route } => format!("z_{}_{}", demand + 1, route + 1),
        };
        let terms = |coeffs: &[(usize, f64)]| {
            coeffs
                .iter()
                .map(|&(j, a)| {
                    if a == 1.0 {
                        name(j)
                    } else if a == -1.0 {
                        format!("-{}", name(j))
                    } else {
                        format!("{a}*{}", name(j))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
                .replace("+ -", "- ")
        };
        let obj: Vec<(usize, f64)> = self
            .lp
            .objective
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(j, &c)| (j, c))
            .collect();
        let mut out = format!(
            "{} {}\n",
            if self.lp.sense == Sense::Max { "max" } else { "min" },
            if obj.is_empty() { "0".to_string() } else { terms(&obj) }
        );
        for row in &self.lp.rows {
            let rel = match row.relation {
                Relation::Le => "<=",
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            out += &format!("  {} {rel} {}\n", terms(&row.coeffs), row.rhs);
        }
        out
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formulation::Disagg => f.write_str("disaggregated"),
            Formulation::Agg => f.write_str("aggregated"),
            Formulation::MinStations { coverage } => write!(f, "min-stations (coverage {coverage})"),
            Formulation::MaxCover { budget } => write!(f, "max-cover (budget {budget})"),
        }
    }
}

/// Transcribes the covering model for `formulation` from the given families.
///
/// Station variables are bounded by the forced-open/closed fixings; the
/// instance budget, when present, becomes a row `sum x_j <= B`.
pub fn build_model(instance: &Instance, formulation: Formulation, inputs: ModelInputs) -> Result<MipModel> {
    let n = instance.node_count();
    let nq = instance.demands.len();
    let sense = match formulation {
        Formulation::MinStations { .. } => Sense::Min,
        _ => Sense::Max,
    };
    let mut lp = LinearProgram::new(sense);
    let mut roles = Vec::new();
    let mut integer = Vec::new();
    let station_cost = if sense == Sense::Min { 1.0 } else { 0.0 };
    let p = &instance.placement;
    let x: Vec<usize> = (0..n)
        .map(|j| {
            let lo = if p.forced_open.contains(&j) { 1.0 } else { 0.0 };
            let hi = if p.forced_closed.contains(&j) { 0.0 } else { 1.0 };
            roles.push(VarRole::Station(j));
            integer.push(true);
            lp.add_var(station_cost, lo, hi)
        })
        .collect();

    let budget = match formulation {
        Formulation::MaxCover { budget } => Some(p.budget.map_or(budget, |b| b.min(budget))),
        _ => p.budget,
    };
    let mut y = vec![None; nq];

    match (formulation, inputs) {
        (Formulation::Disagg, ModelInputs::PerRoute(per_demand)) => {
            check_len(per_demand.len(), nq)?;
            for (q, families) in per_demand.iter().enumerate() {
                let f = instance.demands[q].volume;
                let zs: Vec<usize> = families
                    .iter()
                    .enumerate()
                    .map(|(r, _)| {
                        roles.push(VarRole::RouteUse { demand: q, route: r });
                        integer.push(true);
                        lp.add_var(f, 0.0, 1.0)
                    })
                    .collect();
                if !zs.is_empty() {
                    lp.add_row(zs.iter().map(|&z| (z, 1.0)).collect(), Relation::Le, 1.0);
                }
                for (fam, &z) in families.iter().zip(&zs) {
                    for set in &fam.sets {
                        let mut coeffs: Vec<(usize, f64)> = set.iter().map(|j| (x[j], 1.0)).collect();
                        coeffs.push((z, -1.0));
                        lp.add_row(coeffs, Relation::Ge, 0.0);
                    }
                }
            }
        }
        (Formulation::Disagg, _) => {
            return Err(FrlpError::MissingInputs("the disaggregated model needs per-route families".into()))
        }
        (_, ModelInputs::Aggregated(families)) => {
            check_len(families.len(), nq)?;
            let coverage = match formulation {
                Formulation::MinStations { coverage } => Some(coverage),
                _ => None,
            };
            if let Some(c) = coverage {
                if !(c > 0.0 && c <= 1.0) {
                    return Err(FrlpError::InvalidArgument(format!("coverage must lie in (0, 1], got {c}")));
                }
            }
            let all_served = coverage == Some(1.0);
            for (q, fam) in families.iter().enumerate() {
                let yq = if all_served {
                    None
                } else {
                    roles.push(VarRole::Served(q));
                    integer.push(true);
                    let cost = if coverage.is_some() { 0.0 } else { instance.demands[q].volume };
                    Some(lp.add_var(cost, 0.0, 1.0))
                };
                y[q] = yq;
                for set in &fam.sets {
                    let mut coeffs: Vec<(usize, f64)> = set.iter().map(|j| (x[j], 1.0)).collect();
                    match yq {
                        Some(v) => {
                            coeffs.push((v, -1.0));
                            lp.add_row(coeffs, Relation::Ge, 0.0);
                        }
                        None => {
                            lp.add_row(coeffs, Relation::Ge, 1.0);
                        }
                    }
                }
            }
            if let Some(c) = coverage.filter(|&c| c < 1.0) {
                let total = instance.total_volume();
                let coeffs = (0..nq)
                    .map(|q| (y[q].unwrap(), instance.demands[q].volume))
                    .collect();
                lp.add_row(coeffs, Relation::Ge, c * total);
            }
        }
        (_, ModelInputs::PerRoute(_)) => {
            return Err(FrlpError::MissingInputs(format!(
                "the {formulation} model needs aggregated families"
            )))
        }
    }
    if let Some(b) = budget {
        lp.add_row(x.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, b as f64);
    }
    Ok(MipModel {
        lp,
        integer,
        roles,
        formulation,
        x,
        y,
    })
}

fn check_len(got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(FrlpError::MissingInputs(format!(
            "expected families for {want} demands, got {got}"
        )));
    }
    Ok(())
}

/// Optimum of the continuous relaxation.
pub fn lp_bound(model: &MipModel) -> Result<f64> {
    let sol = solve_lp(&model.lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.objective),
        LpStatus::Infeasible => Err(FrlpError::Infeasible { demands: Vec::new() }),
        LpStatus::Unbounded => Err(FrlpError::NumericalFailure("relaxation is unbounded".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{aggregate_cut_sets_full, instance_covers};
    use crate::generators::gen_example;
    use crate::network::Variant;

    #[test]
    fn example1_disagg_model_has_eight_rows() {
        let inst = gen_example("fig2").unwrap();
        let covers = instance_covers(&inst, Variant::Original).unwrap();
        let per: Vec<_> = covers.iter().map(|c| c.per_route.clone()).collect();
        let m = build_model(&inst, Formulation::Disagg, ModelInputs::PerRoute(&per)).unwrap();
        assert_eq!(m.num_rows(), 8);
        assert_eq!(m.lp.num_vars(), 5 + 2);
        assert!(m.describe(&inst).contains("z_"));
    }

    #[test]
    fn example2_agg_model_from_the_full_family() {
        let mut inst = gen_example("fig2").unwrap();
        let covers = instance_covers(&inst, Variant::Original).unwrap();
        let full = aggregate_cut_sets_full(&covers[0].per_route, 1000).unwrap();
        let m = build_model(&inst, Formulation::Agg, ModelInputs::Aggregated(std::slice::from_ref(&full))).unwrap();
        assert_eq!(m.num_rows(), 10);
        // with one station the relaxation splits it between nodes 2 and 4
        inst.placement.budget = Some(1);
        let h = covers[0].aggregated.clone();
        let m = build_model(&inst, Formulation::Agg, ModelInputs::Aggregated(&[h])).unwrap();
        assert!((lp_bound(&m).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn degenerate_models() {
        let mut inst = gen_example("fig7").unwrap();
        let covers = instance_covers(&inst, Variant::Cyclic).unwrap();
        let h: Vec<_> = covers.iter().map(|c| c.aggregated.clone()).collect();
        let m = build_model(&inst, Formulation::MaxCover { budget: 4 }, ModelInputs::Aggregated(&h)).unwrap();
        assert_eq!(lp_bound(&m).unwrap(), 1.0);
        let per: Vec<_> = covers.iter().map(|c| c.per_route.clone()).collect();
        assert!(matches!(
            build_model(&inst, Formulation::Agg, ModelInputs::PerRoute(&per)),
            Err(FrlpError::MissingInputs(_))
        ));
        inst.demands.clear();
        let m = build_model(&inst, Formulation::MinStations { coverage: 1.0 }, ModelInputs::Aggregated(&[])).unwrap();
        assert_eq!(m.num_rows(), 0);
        assert_eq!(lp_bound(&m).unwrap(), 0.0);
    }
}
