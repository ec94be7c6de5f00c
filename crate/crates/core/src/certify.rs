//! Optimality certificates for the weight-`r` penalty models.
//!
//! For given `(n, r)` and coefficient bounds, [`build_gap_lp`] writes the
//! linear program whose variables are every coefficient of a model plus the
//! gap `g`. There is one equality row per weight-`r` string (the model
//! vanishes there), one `value >= g` row per other string, and the bound
//! rows. Its optimum is the largest minimum penalty any bounded model can
//! achieve. [`certify_optimality`] compares that optimum against the closed
//! form from [`crate::builders`], and checks that the builder's own model is a
//! feasible point attaining it.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::Serialize;
use thiserror::Error;

use crate::bits::Bitstring;
use crate::builders::{
    build_ising_hamming, build_qubo_hamming, optimal_ising_scale, optimal_qubo_scale, BuildError,
    CoefficientBounds, IsingBounds, QuboBounds,
};
use crate::lp::{self, Constraint, LinearProgram, LpError, LpStatus, Relation, RowOrigin};
use crate::model::{Coefficients, ModelKind, PenaltyModel};
use crate::rational::Rational;

/// Largest `n` for which a gap LP is built (`2^n` value rows).
pub const LP_VARIABLE_LIMIT: usize = 12;

/// Agreement required between the LP optimum and the closed form.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("gap LP needs 2 <= n <= {LP_VARIABLE_LIMIT}, got n = {n}")]
    Capacity { n: usize },
    #[error("no closed-form optimum for weight {r} of {n} (need 1 <= r <= n-1)")]
    UnsupportedWeight { r: usize, n: usize },
    #[error(transparent)]
    Solver(#[from] LpError),
    #[error("gap LP finished with status {0:?}")]
    NotOptimal(LpStatus),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Which bounds enter the LP.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundSides {
    /// QUBO: `b_j >= -B`, `c_jk <= C`. Ising: `-h_min <= h_j <= h_max`, `J_jk <= J_max`.
    #[default]
    OneSided,
    /// Adds the mirrored bounds: `|b_j| <= B`, `|c_jk| <= C`, or `J_jk >= -J_max`.
    TwoSided,
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
        .collect()
}

fn check_shape(n: usize, r: usize) -> Result<(), CertifyError> {
    if !(2..=LP_VARIABLE_LIMIT).contains(&n) {
        return Err(CertifyError::Capacity { n });
    }
    if r == 0 || r >= n {
        return Err(CertifyError::UnsupportedWeight { r, n });
    }
    Ok(())
}

/// Variable layout: offset, `n` linear, `n(n-1)/2` quadratic (pair order), then `g`.
fn variable_names(kind: ModelKind, n: usize) -> Vec<String> {
    let (offset, linear, quadratic) = match kind {
        ModelKind::Qubo => ("a", "b", "c"),
        ModelKind::Ising => ("E0", "h", "J"),
    };
    let mut names = vec![offset.to_string()];
    names.extend((0..n).map(|j| format!("{linear}_{j}")));
    names.extend(pairs(n).iter().map(|(j, k)| format!("{quadratic}_{j}_{k}")));
    names.push("g".to_string());
    names
}

/// The gap-maximization LP with one-sided bounds.
pub fn build_gap_lp(
    n: usize,
    r: usize,
    bounds: &CoefficientBounds,
) -> Result<LinearProgram, CertifyError> {
    build_gap_lp_with(n, r, bounds, BoundSides::OneSided)
}

pub fn build_gap_lp_with(
    n: usize,
    r: usize,
    bounds: &CoefficientBounds,
    sides: BoundSides,
) -> Result<LinearProgram, CertifyError> {
    check_shape(n, r)?;
    let kind = bounds.kind();
    let pair_list = pairs(n);
    let gap = 1 + n + pair_list.len();
    let mut lp = LinearProgram::new(variable_names(kind, n));
    lp.set_objective(gap, 1.0);

    for mask in 0..1u64 << n {
        let x = Bitstring::new(n, mask).expect("mask within n bits");
        let mut terms = vec![(0, 1.0)];
        match kind {
            ModelKind::Qubo => {
                terms.extend(x.support().map(|j| (1 + j, 1.0)));
                for (p, &(j, k)) in pair_list.iter().enumerate() {
                    if x.get(j) && x.get(k) {
                        terms.push((1 + n + p, 1.0));
                    }
                }
            }
            ModelKind::Ising => {
                terms.extend((0..n).map(|j| (1 + j, f64::from(x.spin(j)))));
                for (p, &(j, k)) in pair_list.iter().enumerate() {
                    terms.push((1 + n + p, f64::from(x.spin(j) * x.spin(k))));
                }
            }
        }
        let relation = if x.weight() == r {
            Relation::Eq
        } else {
            terms.push((gap, -1.0));
            Relation::Ge
        };
        lp.add_row(Constraint {
            terms,
            relation,
            rhs: 0.0,
            origin: RowOrigin::Value(x),
        })?;
    }

    let mut bound = |var: usize, relation: Relation, rhs: f64| {
        lp.add_row(Constraint {
            terms: vec![(var, 1.0)],
            relation,
            rhs,
            origin: RowOrigin::Bound(var),
        })
    };
    let two_sided = sides == BoundSides::TwoSided;
    match bounds {
        CoefficientBounds::Qubo(b) => {
            let lower = b.linear_lower().to_f64();
            let upper = b.quadratic_upper().to_f64();
            for j in 0..n {
                bound(1 + j, Relation::Ge, -lower)?;
                if two_sided {
                    bound(1 + j, Relation::Le, lower)?;
                }
            }
            for p in 0..pair_list.len() {
                bound(1 + n + p, Relation::Le, upper)?;
                if two_sided {
                    bound(1 + n + p, Relation::Ge, -upper)?;
                }
            }
        }
        CoefficientBounds::Ising(b) => {
            let h_min = b.h_min().to_f64();
            let h_max = b.h_max().to_f64();
            let j_max = b.j_max().to_f64();
            for j in 0..n {
                bound(1 + j, Relation::Ge, -h_min)?;
                bound(1 + j, Relation::Le, h_max)?;
            }
            for p in 0..pair_list.len() {
                bound(1 + n + p, Relation::Le, j_max)?;
                if two_sided {
                    bound(1 + n + p, Relation::Ge, -j_max)?;
                }
            }
        }
    }
    Ok(lp)
}

/// Solves a gap LP, insisting on an optimal finish.
pub fn solve_gap_lp(lp: &LinearProgram) -> Result<f64, CertifyError> {
    let solution = lp::solve(lp)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution.objective),
        other => Err(CertifyError::NotOptimal(other)),
    }
}

/// LP point for a concrete model: its coefficients followed by `gap`.
pub fn lp_point(coefficients: &Coefficients, gap: &Rational) -> Vec<f64> {
    let n = coefficients.n();
    let mut point = vec![coefficients.offset().to_f64()];
    point.extend(coefficients.linear().iter().map(Rational::to_f64));
    point.extend(
        pairs(n)
            .iter()
            .map(|&(j, k)| coefficients.coupling(j, k).to_f64()),
    );
    point.push(gap.to_f64());
    point
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_difference(abs_diff: f64) -> Verdict {
        if abs_diff <= CERTIFICATE_TOLERANCE {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimalityCertificate {
    pub n: usize,
    pub r: usize,
    pub kind: ModelKind,
    pub bounds: CoefficientBounds,
    pub lp_gap: f64,
    pub closed_form: Rational,
    pub abs_diff: f64,
    pub verdict: Verdict,
    /// The builder's model at the closed-form scale is LP-feasible and its
    /// gap matches the LP optimum, both within tolerance.
    pub witness_attains: bool,
    #[serde(skip)]
    pub witness_violation: f64,
}

impl OptimalityCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass && self.witness_attains
    }
}

/// LP optimum for the bounds compared against the closed-form optimum.
pub fn certify_optimality(
    n: usize,
    r: usize,
    bounds: &CoefficientBounds,
) -> Result<OptimalityCertificate, CertifyError> {
    check_shape(n, r)?;
    let (closed_form, witness) = match bounds {
        CoefficientBounds::Qubo(b) => closed_qubo(n, r, b)?,
        CoefficientBounds::Ising(b) => closed_ising(n, r, b)?,
    };
    let lp = build_gap_lp(n, r, bounds)?;
    let lp_gap = solve_gap_lp(&lp)?;

    let point = lp_point(&witness, &closed_form);
    let (witness_violation, _) = lp.max_violation(&point);
    let closed = closed_form.to_f64();
    let abs_diff = (lp_gap - closed).abs();
    Ok(OptimalityCertificate {
        n,
        r,
        kind: bounds.kind(),
        bounds: bounds.clone(),
        lp_gap,
        abs_diff,
        verdict: Verdict::from_difference(abs_diff),
        witness_attains: witness_violation <= CERTIFICATE_TOLERANCE
            && (lp.objective_value(&point) - lp_gap).abs() <= CERTIFICATE_TOLERANCE,
        witness_violation,
        closed_form,
    })
}

fn closed_qubo(
    n: usize,
    r: usize,
    b: &QuboBounds,
) -> Result<(Rational, Coefficients), CertifyError> {
    let scale = optimal_qubo_scale(n, r, b)?;
    let model = build_qubo_hamming(n, r, &scale.energy_scale)?;
    Ok((scale.gap, model.coefficients().clone()))
}

fn closed_ising(
    n: usize,
    r: usize,
    b: &IsingBounds,
) -> Result<(Rational, Coefficients), CertifyError> {
    let scale = optimal_ising_scale(n, r, b)?;
    let model = build_ising_hamming(n, r, &scale.energy_scale)?;
    Ok((scale.gap, model.coefficients().clone()))
}

/// One `(n, r, bounds)` instance of a certification grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCase {
    pub n: usize,
    pub r: usize,
    pub bounds: CoefficientBounds,
}

fn int(v: i64) -> Rational {
    Rational::from(v)
}

/// The standard QUBO profiles for weight `r`: `(1,1)`, `(1,4)`, `(4,1)` and
/// the tie `(2r-1, 2)`.
pub fn standard_qubo_bounds(r: usize) -> Vec<CoefficientBounds> {
    [(1, 1), (1, 4), (4, 1), (2 * r as i64 - 1, 2)]
        .into_iter()
        .map(|(b, c)| QuboBounds::new(int(b), int(c)).expect("positive").into())
        .collect()
}

/// The standard Ising profiles `(h_min, h_max, J_max)`.
pub fn standard_ising_bounds() -> Vec<CoefficientBounds> {
    [(1, 1, 1), (10, 10, 1), (1, 10, 1), (10, 1, 1)]
        .into_iter()
        .map(|(lo, hi, j)| {
            IsingBounds::new(int(lo), int(hi), int(j))
                .expect("positive")
                .into()
        })
        .collect()
}

/// Every interior `(n, r)` with `n` in `sizes`, crossed with the standard
/// profiles of `kind`.
pub fn standard_grid(kind: ModelKind, sizes: RangeInclusive<usize>) -> Vec<GridCase> {
    let mut cases = Vec::new();
    for n in sizes {
        for r in 1..n {
            let profiles = match kind {
                ModelKind::Qubo => standard_qubo_bounds(r),
                ModelKind::Ising => standard_ising_bounds(),
            };
            cases.extend(profiles.into_iter().map(|bounds| GridCase { n, r, bounds }));
        }
    }
    cases
}

/// Every interior `(n, r)` with `n` in `sizes`, all with the same bounds.
pub fn uniform_grid(bounds: &CoefficientBounds, sizes: RangeInclusive<usize>) -> Vec<GridCase> {
    sizes
        .flat_map(|n| {
            (1..n).map(move |r| GridCase {
                n,
                r,
                bounds: bounds.clone(),
            })
        })
        .collect()
}

/// Certifies every case, in input order, on up to `workers` threads.
pub fn certify_grid(
    cases: &[GridCase],
    workers: usize,
) -> Vec<Result<OptimalityCertificate, CertifyError>> {
    let workers = workers.clamp(1, cases.len().max(1));
    let next = AtomicUsize::new(0);
    let mut results: Vec<(usize, Result<OptimalityCertificate, CertifyError>)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    scope.spawn(|| {
                        let mut done = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            let Some(case) = cases.get(i) else { break };
                            done.push((i, certify_optimality(case.n, case.r, &case.bounds)));
                        }
                        done
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("certification worker panicked"))
                .collect()
        });
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, res)| res).collect()
}
