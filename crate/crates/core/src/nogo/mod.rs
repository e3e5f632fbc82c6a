//! Mechanized obstruction to a Lie bracket obeying the decoupling axioms
//! `(A,C) = (A,C)_c` and `(A,Q) = (A,Q)_q`.
//!
//! Brackets of mixed basis monomials `(M_n, M_n')` are reconstructed, up to
//! one additive c-number constant per pair, from their brackets with
//! `q, p, x, k`. The constants are then fixed by Jacobi identities on
//! selected triple classes and checked against the remaining ones. The
//! pipeline runs at ℏ = 1 over the Gaussian rationals.

mod affine;
mod solve;
mod table;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

pub use affine::{AffineObservable, AffineScalar, UnknownId};
pub use solve::{exact_solve, LinearSystem, SolveOutcome};
pub use table::{
    axiom_bracket, mixed_basis, reconstruct_from_partials, BracketTable, Family, Triple, TripleClass, DIMS,
};

use crate::algebra::{bracket, BracketKind, Monomial, Observable};
use crate::error::NoGoError;
use crate::scalar::{Coeff, GaussianRational, Scalar};

/// Where an equation came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub class: TripleClass,
    pub triple: Triple,
    pub monomial: Monomial,
}

/// `Σ_u linear[u] · u + constant = 0`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation<R: Coeff = GaussianRational> {
    pub linear: BTreeMap<UnknownId, R>,
    pub constant: R,
    pub provenance: Provenance,
}

/// Stack the equations of several triple classes.
pub fn impose_jacobi(
    table: &BracketTable,
    classes: &[TripleClass],
    unknowns: &[UnknownId],
) -> Result<LinearSystem, NoGoError> {
    let mut equations = Vec::new();
    for class in classes {
        equations.extend(table.impose_jacobi(*class)?);
    }
    Ok(LinearSystem {
        unknowns: unknowns.to_vec(),
        equations,
    })
}

/// One stage of the induction.
#[derive(Clone, Copy, Debug)]
pub struct StepPlan {
    pub index: usize,
    pub pairs: (Family, Family),
    pub determine: [TripleClass; 2],
    pub check: TripleClass,
}

pub fn step_plans() -> [StepPlan; 4] {
    use Family::{Any, Classical as C, Mixed as M, Quantum as Q};
    [
        StepPlan {
            index: 1,
            pairs: (M(2), M(2)),
            determine: [TripleClass(M(2), M(2), Q(2)), TripleClass(M(2), M(2), C(2))],
            check: TripleClass(M(2), M(2), M(2)),
        },
        StepPlan {
            index: 2,
            pairs: (M(2), M(3)),
            determine: [TripleClass(M(2), M(3), Q(2)), TripleClass(M(2), M(3), C(2))],
            check: TripleClass(M(2), Any(3), M(2)),
        },
        StepPlan {
            index: 3,
            pairs: (M(2), M(4)),
            determine: [TripleClass(M(2), M(4), Q(2)), TripleClass(M(2), M(4), C(2))],
            check: TripleClass(M(2), Any(4), M(2)),
        },
        StepPlan {
            index: 4,
            pairs: (M(3), M(3)),
            determine: [TripleClass(M(3), Q(3), M(2)), TripleClass(M(3), C(3), M(2))],
            check: TripleClass(M(3), M(3), M(2)),
        },
    ]
}

/// Basis pairs of a step; unordered when both families coincide.
pub fn step_pairs(pairs: (Family, Family)) -> Vec<(Monomial, Monomial)> {
    let (left, right) = (pairs.0.basis(), pairs.1.basis());
    let mut out = Vec::new();
    for a in &left {
        for b in &right {
            if pairs.0 == pairs.1 && a >= b {
                continue;
            }
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// Result of evaluating every jacobiator of a class on the current table.
#[derive(Clone, Debug)]
pub struct JacobiCheck {
    pub class: TripleClass,
    pub triples: usize,
    pub failures: usize,
    pub first_failure: Option<(Triple, Observable<GaussianRational>)>,
}

impl JacobiCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Evaluate the jacobiators of a class, which must be free of unknowns.
pub fn check_jacobi(table: &BracketTable, class: TripleClass) -> Result<JacobiCheck, NoGoError> {
    let triples = class.triples();
    let mut failures = 0;
    let mut first_failure = None;
    for t in &triples {
        let j = table.jacobiator(t)?;
        let j = j
            .to_concrete()
            .ok_or_else(|| NoGoError::AffineViolation(format!("unresolved unknowns in check {class}")))?;
        if !j.is_zero() {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some((t.clone(), j));
            }
        }
    }
    Ok(JacobiCheck {
        class,
        triples: triples.len(),
        failures,
        first_failure,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Unique,
    Underdetermined,
    Inconsistent,
}

/// Concrete Jacobi violation after all constants were fixed.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub class: TripleClass,
    pub triple: Triple,
    /// Jacobiator at ℏ = 1.
    pub residual: Observable<GaussianRational>,
    /// The same jacobiator re-evaluated with symbolic ℏ.
    pub residual_symbolic: Observable<Scalar>,
    /// First nonzero coefficient, read as the row `0 = value`.
    pub witness_monomial: Monomial,
    pub witness_value: GaussianRational,
}

#[derive(Clone, Debug)]
pub struct StepRecord {
    pub index: usize,
    pub pair_class: (Family, Family),
    /// `pairs[i]` carries the constant `unknowns[i]`.
    pub pairs: Vec<(Monomial, Monomial)>,
    pub unknowns: Vec<UnknownId>,
    pub determining: [TripleClass; 2],
    pub equations: usize,
    pub solve: SolveOutcome,
    pub check: Option<JacobiCheck>,
    /// Whether every resolved entry of this step equals `(M, M')_s` at ℏ = 1.
    pub matches_standard_hybrid: Option<bool>,
    pub certificate: Option<Certificate>,
}

impl StepRecord {
    pub fn unknown_count(&self) -> usize {
        self.unknowns.len()
    }

    pub fn outcome(&self) -> StepOutcome {
        match &self.solve {
            SolveOutcome::Underdetermined { .. } => StepOutcome::Underdetermined,
            SolveOutcome::Inconsistent { .. } => StepOutcome::Inconsistent,
            SolveOutcome::Unique(_) => match &self.check {
                Some(c) if !c.passed() => StepOutcome::Inconsistent,
                _ => StepOutcome::Unique,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every requested step admitted a unique consistent solution.
    Consistent { through_step: usize },
    /// A step produced a Jacobi violation or an inconsistent system.
    Obstructed { step: usize },
    /// A step left constants undetermined.
    Undetermined { step: usize },
}

#[derive(Clone, Debug)]
pub struct NoGoReport {
    pub requested_steps: usize,
    pub steps: Vec<StepRecord>,
    pub verdict: Verdict,
}

impl NoGoReport {
    pub fn unknown_counts(&self) -> Vec<usize> {
        self.steps.iter().map(StepRecord::unknown_count).collect()
    }

    /// Steps 1–3 unique, consistent and equal to `(,)_s`; step 4, when
    /// requested, obstructed with a nonzero certificate.
    pub fn matches_prediction(&self) -> bool {
        if self.steps.len() != self.requested_steps {
            return false;
        }
        self.steps.iter().all(|s| {
            if s.index <= 3 {
                s.outcome() == StepOutcome::Unique && s.matches_standard_hybrid == Some(true)
            } else {
                s.outcome() == StepOutcome::Inconsistent
                    && s.certificate.as_ref().is_some_and(|c| !c.residual.is_zero())
            }
        })
    }
}

/// Run steps `1..=steps` of the induction.
pub fn run_verification(steps: usize) -> Result<NoGoReport, NoGoError> {
    if !(1..=4).contains(&steps) {
        return Err(NoGoError::InvalidSteps(steps));
    }
    let mut table = BracketTable::<GaussianRational>::new();
    let mut records = Vec::new();
    let mut verdict = Verdict::Consistent { through_step: steps };

    for plan in step_plans().into_iter().take(steps) {
        let pairs = step_pairs(plan.pairs);
        let unknowns = table.extend(&pairs)?;
        let system = impose_jacobi(&table, &plan.determine, &unknowns)?;
        let solve = exact_solve(&system);
        let mut record = StepRecord {
            index: plan.index,
            pair_class: plan.pairs,
            pairs: pairs.clone(),
            unknowns,
            determining: plan.determine,
            equations: system.equations.len(),
            solve,
            check: None,
            matches_standard_hybrid: None,
            certificate: None,
        };

        let values = match &record.solve {
            SolveOutcome::Unique(v) => v.clone(),
            SolveOutcome::Underdetermined { .. } => {
                verdict = Verdict::Undetermined { step: plan.index };
                records.push(record);
                break;
            }
            SolveOutcome::Inconsistent { .. } => {
                verdict = Verdict::Obstructed { step: plan.index };
                records.push(record);
                break;
            }
        };
        table.resolve(&values);
        record.matches_standard_hybrid = Some(matches_standard_hybrid(&table, &pairs));

        let check = check_jacobi(&table, plan.check)?;
        if let Some((triple, residual)) = &check.first_failure {
            record.certificate = Some(certificate(&table, plan.check, triple, residual)?);
            verdict = Verdict::Obstructed { step: plan.index };
        }
        let failed = !check.passed();
        record.check = Some(check);
        records.push(record);
        if failed {
            break;
        }
    }

    Ok(NoGoReport {
        requested_steps: steps,
        steps: records,
        verdict,
    })
}

fn matches_standard_hybrid(table: &BracketTable, pairs: &[(Monomial, Monomial)]) -> bool {
    pairs.iter().all(|(a, b)| {
        let sa = Observable::<Scalar>::monomial(DIMS, a.clone());
        let sb = Observable::<Scalar>::monomial(DIMS, b.clone());
        let expected = bracket(BracketKind::StandardHybrid, &sa, &sb).at_unit_hbar();
        let got = table.entry(a, b).and_then(|e| e.to_concrete());
        matches!((expected, got), (Some(e), Some(g)) if e == g)
    })
}

/// Every resolved entry with ℏ reinstated by weight.
pub fn lift_table(table: &BracketTable) -> Result<BracketTable<Scalar>, NoGoError> {
    let mut lifted = BracketTable::<Scalar>::new();
    for ((a, b), entry) in table.entries() {
        let concrete = entry
            .to_concrete()
            .ok_or_else(|| NoGoError::Lift(format!("unresolved entry {:?}", (a.exponents(), b.exponents()))))?;
        let weight = a.degree() + b.degree() - 2;
        let sym = concrete
            .lift_homogeneous(weight)
            .ok_or_else(|| NoGoError::Lift(format!("entry {:?} is not homogeneous", (a.exponents(), b.exponents()))))?;
        lifted.insert_concrete(a.clone(), b.clone(), &sym);
    }
    Ok(lifted)
}

fn certificate(
    table: &BracketTable,
    class: TripleClass,
    triple: &Triple,
    residual: &Observable<GaussianRational>,
) -> Result<Certificate, NoGoError> {
    let lifted = lift_table(table)?;
    let residual_symbolic = lifted
        .jacobiator(triple)?
        .to_concrete()
        .ok_or_else(|| NoGoError::Lift("symbolic residual carries unknowns".into()))?;
    let weight = triple.iter().map(Monomial::degree).sum::<u32>() - 4;
    if residual.lift_homogeneous(weight).as_ref() != Some(&residual_symbolic) {
        return Err(NoGoError::Lift("symbolic and numeric residuals disagree".into()));
    }
    let (m, v) = residual
        .terms()
        .next()
        .map(|(m, v)| (m.clone(), v.clone()))
        .expect("nonzero residual");
    Ok(Certificate {
        class,
        triple: triple.clone(),
        residual: residual.clone(),
        residual_symbolic,
        witness_monomial: m,
        witness_value: v,
    })
}

#[cfg(test)]
mod tests;
