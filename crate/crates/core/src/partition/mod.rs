//! Partitions of the exponent range that organize convergence arguments.

pub mod classify;
pub mod plan;
pub mod threshold;

pub use classify::{cell_sum_report, classify3, classify_fine, Cell3, CellReport, CellRow, FineCell};
pub use plan::{
    budget_range, plan, step_budget, step_budget_coefficients, witness_plan, PartitionPlan, MAX_CELLS,
};
pub use threshold::{below_weak_threshold, fact_witness, weak_threshold, FactWitness, Surd, WeakThreshold};
