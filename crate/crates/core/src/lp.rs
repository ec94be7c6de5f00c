//! Dense tableau simplex for small linear programs.
//!
//! Problems are stated over variables that are free in sign; every
//! restriction, including simple bounds, is an explicit row. The solver
//! maximizes the objective. Internally each free variable is split into a
//! difference of two nonnegative columns, `>=` and `=` rows are rewritten as
//! `<=` rows, and the tableau is kept in exchange (Tucker) form so only
//! nonbasic columns are stored. Entering and leaving variables follow
//! Bland's rule, which rules out cycling on the heavily degenerate gap LPs.
//! A phase-one pass with a single artificial column runs only when some
//! right-hand side is negative.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bits::Bitstring;

/// Feasibility and optimality tolerance.
pub const LP_TOLERANCE: f64 = 1e-9;

const PIVOT_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("row {row} references variable {index}, but the program has {count} variables")]
    UnknownVariable {
        row: usize,
        index: usize,
        count: usize,
    },
    #[error("row {row} has a non-finite coefficient or right-hand side")]
    NonFinite { row: usize },
    #[error("simplex did not converge within {pivots} pivots")]
    PivotLimit { pivots: usize },
    #[error("numerical breakdown: row {row} violated by {violation:e} at the reported optimum")]
    Breakdown { row: usize, violation: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        })
    }
}

/// Where a row came from, for inspection and diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowOrigin {
    /// Model value on the bitstring with this support.
    Value(Bitstring),
    /// Simple bound on one variable.
    Bound(usize),
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    /// Sparse `(variable, coefficient)` terms.
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    pub origin: RowOrigin,
}

impl Constraint {
    pub fn lhs(&self, point: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * point[v]).sum()
    }

    /// Amount by which `point` violates this row; zero when satisfied.
    pub fn violation(&self, point: &[f64]) -> f64 {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }

    pub fn coefficient(&self, var: usize) -> f64 {
        self.terms
            .iter()
            .filter(|&&(v, _)| v == var)
            .map(|&(_, a)| a)
            .sum()
    }
}

/// `maximize c.x` over free variables subject to explicit rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    variables: Vec<String>,
    objective: Vec<f64>,
    rows: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(variables: Vec<String>) -> Self {
        let objective = vec![0.0; variables.len()];
        LinearProgram {
            variables,
            objective,
            rows: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, var: usize, coefficient: f64) {
        self.objective[var] = coefficient;
    }

    pub fn add_row(&mut self, row: Constraint) -> Result<(), LpError> {
        let index = self.rows.len();
        let count = self.variables.len();
        for &(v, a) in &row.terms {
            if v >= count {
                return Err(LpError::UnknownVariable {
                    row: index,
                    index: v,
                    count,
                });
            }
            if !a.is_finite() {
                return Err(LpError::NonFinite { row: index });
            }
        }
        if !row.rhs.is_finite() {
            return Err(LpError::NonFinite { row: index });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn objective_value(&self, point: &[f64]) -> f64 {
        self.objective.iter().zip(point).map(|(c, x)| c * x).sum()
    }

    /// Largest row violation at `point`, with the offending row index.
    pub fn max_violation(&self, point: &[f64]) -> (f64, Option<usize>) {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| (row.violation(point), Some(i)))
            .fold(
                (0.0, None),
                |best, cur| if cur.0 > best.0 { cur } else { best },
            )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective at `values`; meaningful only when optimal.
    pub objective: f64,
    pub values: Vec<f64>,
    pub pivots: usize,
}

/// Exchange-form tableau: each row reads `basic + sum_j t[j] * nonbasic_j = rhs`;
/// the last row is the objective, `z + sum_j d_j * nonbasic_j = z0`.
struct Tableau {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    /// Variable id of each nonbasic column.
    col_var: Vec<usize>,
    /// Variable id of each basic row.
    row_var: Vec<usize>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cols + 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.cols)
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let w = self.width();
        let p = self.data[r * w + s];
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let factor = self.data[i * w + s];
            if factor == 0.0 {
                continue;
            }
            let ratio = factor / p;
            let row = &mut self.data[i * w..(i + 1) * w];
            for (j, v) in row.iter_mut().enumerate() {
                if j != s {
                    *v -= ratio * pivot_row[j];
                }
            }
            row[s] = -ratio;
        }
        let row = &mut self.data[r * w..(r + 1) * w];
        for (j, v) in row.iter_mut().enumerate() {
            if j != s {
                *v /= p;
            }
        }
        row[s] = 1.0 / p;
        std::mem::swap(&mut self.col_var[s], &mut self.row_var[r]);
        self.pivots += 1;
    }

    /// Rewrites the objective row for `cost` (indexed by variable id).
    fn load_objective(&mut self, cost: impl Fn(usize) -> f64) {
        let w = self.width();
        let base = self.rows * w;
        for j in 0..self.cols {
            let mut d = -cost(self.col_var[j]);
            for i in 0..self.rows {
                let c = cost(self.row_var[i]);
                if c != 0.0 {
                    d += c * self.data[i * w + j];
                }
            }
            self.data[base + j] = d;
        }
        let mut z = 0.0;
        for i in 0..self.rows {
            let c = cost(self.row_var[i]);
            if c != 0.0 {
                z += c * self.data[i * w + self.cols];
            }
        }
        self.data[base + self.cols] = z;
    }

    fn run(&mut self) -> Result<Step, LpError> {
        loop {
            if self.pivots >= PIVOT_LIMIT {
                return Err(LpError::PivotLimit {
                    pivots: self.pivots,
                });
            }
            let entering = (0..self.cols)
                .filter(|&j| self.at(self.rows, j) < -LP_TOLERANCE)
                .min_by_key(|&j| self.col_var[j]);
            let Some(s) = entering else {
                return Ok(Step::Optimal);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let a = self.at(i, s);
                if a <= LP_TOLERANCE {
                    continue;
                }
                let ratio = self.rhs(i).max(0.0) / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((best, best_ratio)) => {
                        if ratio < best_ratio - 1e-12
                            || (ratio <= best_ratio + 1e-12 && self.row_var[i] < self.row_var[best])
                        {
                            Some((i, ratio))
                        } else {
                            Some((best, best_ratio))
                        }
                    }
                };
            }
            match leave {
                None => return Ok(Step::Unbounded),
                Some((r, _)) => self.pivot(r, s),
            }
        }
    }

    fn drop_column(&mut self, s: usize) {
        let w = self.width();
        let mut data = Vec::with_capacity((self.rows + 1) * (w - 1));
        for i in 0..=self.rows {
            for j in 0..w {
                if j != s {
                    data.push(self.data[i * w + j]);
                }
            }
        }
        self.data = data;
        self.col_var.remove(s);
        self.cols -= 1;
    }
}

/// Solves `lp` to optimality, or reports it unbounded or infeasible.
///
/// An optimal answer is re-checked against every original row; a violation
/// above [`LP_TOLERANCE`] is reported as [`LpError::Breakdown`].
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    let nv = lp.variables.len();
    let split = 2 * nv;

    // Every row as `a.y <= b` over the split columns.
    let mut std_rows: Vec<(Vec<(usize, f64)>, f64)> = Vec::new();
    for row in &lp.rows {
        let expand = |sign: f64| {
            let terms: Vec<(usize, f64)> = row
                .terms
                .iter()
                .flat_map(|&(v, a)| [(2 * v, sign * a), (2 * v + 1, -sign * a)])
                .collect();
            (terms, sign * row.rhs)
        };
        match row.relation {
            Relation::Le => std_rows.push(expand(1.0)),
            Relation::Ge => std_rows.push(expand(-1.0)),
            Relation::Eq => {
                std_rows.push(expand(1.0));
                std_rows.push(expand(-1.0));
            }
        }
    }
    let m = std_rows.len();
    let artificial = split + m;
    let needs_phase_one = std_rows.iter().any(|(_, b)| *b < -LP_TOLERANCE);
    let cols = split + usize::from(needs_phase_one);

    let w = cols + 1;
    let mut data = vec![0.0; (m + 1) * w];
    for (i, (terms, b)) in std_rows.iter().enumerate() {
        for &(c, a) in terms {
            data[i * w + c] += a;
        }
        if needs_phase_one {
            data[i * w + split] = -1.0;
        }
        data[i * w + cols] = *b;
    }
    let mut col_var: Vec<usize> = (0..split).collect();
    if needs_phase_one {
        col_var.push(artificial);
    }
    let mut t = Tableau {
        rows: m,
        cols,
        data,
        col_var,
        row_var: (split..split + m).collect(),
        pivots: 0,
    };

    if needs_phase_one {
        t.load_objective(|v| if v == artificial { -1.0 } else { 0.0 });
        let worst = (0..m)
            .min_by(|&a, &b| t.rhs(a).total_cmp(&t.rhs(b)))
            .expect("phase one has rows");
        t.pivot(worst, split);
        if let Step::Unbounded = t.run()? {
            unreachable!("phase one objective is bounded by zero");
        }
        if t.rhs(t.rows) < -LP_TOLERANCE {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                values: vec![f64::NAN; nv],
                pivots: t.pivots,
            });
        }
        if let Some(r) = t.row_var.iter().position(|&v| v == artificial) {
            let s = (0..t.cols)
                .filter(|&j| t.col_var[j] != artificial)
                .max_by(|&a, &b| t.at(r, a).abs().total_cmp(&t.at(r, b).abs()))
                .expect("tableau has columns");
            t.pivot(r, s);
        }
        let s = t
            .col_var
            .iter()
            .position(|&v| v == artificial)
            .expect("artificial is nonbasic");
        t.drop_column(s);
    }

    let cost = |v: usize| {
        if v < split {
            let c = lp.objective[v / 2];
            if v.is_multiple_of(2) {
                c
            } else {
                -c
            }
        } else {
            0.0
        }
    };
    t.load_objective(cost);
    let step = t.run()?;

    let mut split_values = vec![0.0; split];
    for (i, &v) in t.row_var.iter().enumerate() {
        if v < split {
            split_values[v] = t.rhs(i);
        }
    }
    let values: Vec<f64> = (0..nv)
        .map(|v| split_values[2 * v] - split_values[2 * v + 1])
        .collect();

    if let Step::Unbounded = step {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            objective: f64::INFINITY,
            values,
            pivots: t.pivots,
        });
    }
    for (row_index, row) in lp.rows.iter().enumerate() {
        let scale = 1.0f64.max(row.rhs.abs());
        let violation = row.violation(&values);
        if violation > LP_TOLERANCE * scale {
            return Err(LpError::Breakdown {
                row: row_index,
                violation,
            });
        }
    }
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective: lp.objective_value(&values),
        values,
        pivots: t.pivots,
    })
}
