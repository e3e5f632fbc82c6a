//! Exact Gaussian elimination over the Gaussian rationals.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Equation, UnknownId};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub unknowns: Vec<UnknownId>,
    pub equations: Vec<Equation<GaussianRational>>,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Unique(BTreeMap<UnknownId, GaussianRational>),
    Underdetermined {
        free: Vec<UnknownId>,
        rank: usize,
    },
    /// The equation reduced to `0 = constant` with `constant ≠ 0`.
    Inconsistent {
        equation: Box<Equation<GaussianRational>>,
        constant: GaussianRational,
    },
}

impl SolveOutcome {
    pub fn is_unique(&self) -> bool {
        matches!(self, SolveOutcome::Unique(_))
    }
}

struct Row {
    linear: BTreeMap<UnknownId, GaussianRational>,
    constant: GaussianRational,
}

impl Row {
    /// self -= f · other
    fn sub_scaled(&mut self, other: &Row, f: &GaussianRational) {
        for (u, c) in &other.linear {
            let v = self.linear.entry(*u).or_insert_with(GaussianRational::zero);
            *v = &*v - &(c * f);
            if v.is_zero() {
                self.linear.remove(u);
            }
        }
        self.constant = &self.constant - &(&other.constant * f);
    }
}

/// Solve `Σ_u a_u u + b = 0` row by row.
///
/// Pivots are the smallest surviving unknown of each new row, so the
/// elimination and any inconsistency witness are deterministic in the
/// equation order.
pub fn exact_solve(system: &LinearSystem) -> SolveOutcome {
    let mut pivots: BTreeMap<UnknownId, Row> = BTreeMap::new();
    for eq in &system.equations {
        let mut row = Row {
            linear: eq
                .linear
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(u, c)| (*u, c.clone()))
                .collect(),
            constant: eq.constant.clone(),
        };
        loop {
            let next = row.linear.keys().find(|u| pivots.contains_key(u)).copied();
            let Some(u) = next else { break };
            let f = row.linear[&u].clone();
            row.sub_scaled(&pivots[&u], &f);
        }
        match row.linear.keys().next().copied() {
            None if row.constant.is_zero() => {}
            None => {
                return SolveOutcome::Inconsistent {
                    equation: Box::new(eq.clone()),
                    constant: row.constant,
                };
            }
            Some(u) => {
                let inv = row.linear[&u].inv().expect("nonzero pivot");
                let normalized = Row {
                    linear: row.linear.iter().map(|(k, v)| (*k, v * &inv)).collect(),
                    constant: &row.constant * &inv,
                };
                pivots.insert(u, normalized);
            }
        }
    }

    let mut all: Vec<UnknownId> = system.unknowns.clone();
    for eq in &system.equations {
        all.extend(eq.linear.keys().copied());
    }
    all.sort();
    all.dedup();
    let free: Vec<UnknownId> = all.into_iter().filter(|u| !pivots.contains_key(u)).collect();
    if !free.is_empty() {
        return SolveOutcome::Underdetermined {
            free,
            rank: pivots.len(),
        };
    }

    let mut values: BTreeMap<UnknownId, GaussianRational> = BTreeMap::new();
    for (u, row) in pivots.iter().rev() {
        let mut acc = row.constant.clone();
        for (w, c) in &row.linear {
            if w != u {
                acc += &(c * &values[w]);
            }
        }
        values.insert(*u, -acc);
    }
    SolveOutcome::Unique(values)
}
