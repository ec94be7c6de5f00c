//! Penalty models for the weight-`r` class and their optimal energy scales.
//!
//! The QUBO is `E (r - |x|)^2`, expanded as
//! `r^2 E - (2r - 1) E sum x_j + 2E sum_{j<k} x_j x_k`.
//! The Ising model is the same polynomial at scale `2E` written in spins:
//! biases `(n - 2r) E`, couplings `E` and offset `E (n + (n - 2r)^2) / 2`, so
//! it is zero on the weight-`r` class and `2E (r - w)^2` on weight `w`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{IsingModel, ModelKind, Qubo};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("target weight {r} outside 0..={n}")]
    WeightOutOfRange { r: usize, n: usize },
    #[error("need at least {min} variables, got {n}")]
    TooFewVariables { n: usize, min: usize },
    #[error("energy scale must be positive, got {0}")]
    NonPositiveScale(Rational),
    #[error("no closed-form optimal scale for weight {r} of {n} (need 1 <= r <= n-1)")]
    UnsupportedWeight { r: usize, n: usize },
    #[error("bound {name} must be positive, got {value}")]
    NonPositiveBound { name: &'static str, value: Rational },
}

/// Bounds `b_j >= -B` and `c_jk <= C` on a QUBO.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuboBounds {
    linear_lower: Rational,
    quadratic_upper: Rational,
}

impl QuboBounds {
    pub fn new(linear_lower: Rational, quadratic_upper: Rational) -> Result<Self, BuildError> {
        positive("B", &linear_lower)?;
        positive("C", &quadratic_upper)?;
        Ok(QuboBounds {
            linear_lower,
            quadratic_upper,
        })
    }

    /// `B`: linear coefficients must be at least `-B`.
    pub fn linear_lower(&self) -> &Rational {
        &self.linear_lower
    }

    /// `C`: quadratic coefficients must be at most `C`.
    pub fn quadratic_upper(&self) -> &Rational {
        &self.quadratic_upper
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self, BuildError> {
        QuboBounds::new(&self.linear_lower * factor, &self.quadratic_upper * factor)
    }
}

/// Bounds `-h_min <= h_j <= h_max` and `J_jk <= J_max` on an Ising model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsingBounds {
    bias_lower: Rational,
    bias_upper: Rational,
    coupling_upper: Rational,
}

impl IsingBounds {
    pub fn new(h_min: Rational, h_max: Rational, j_max: Rational) -> Result<Self, BuildError> {
        positive("h_min", &h_min)?;
        positive("h_max", &h_max)?;
        positive("J_max", &j_max)?;
        Ok(IsingBounds {
            bias_lower: h_min,
            bias_upper: h_max,
            coupling_upper: j_max,
        })
    }

    pub fn h_min(&self) -> &Rational {
        &self.bias_lower
    }

    pub fn h_max(&self) -> &Rational {
        &self.bias_upper
    }

    pub fn j_max(&self) -> &Rational {
        &self.coupling_upper
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self, BuildError> {
        IsingBounds::new(
            &self.bias_lower * factor,
            &self.bias_upper * factor,
            &self.coupling_upper * factor,
        )
    }
}

fn positive(name: &'static str, value: &Rational) -> Result<(), BuildError> {
    if value.is_positive() {
        Ok(())
    } else {
        Err(BuildError::NonPositiveBound {
            name,
            value: value.clone(),
        })
    }
}

/// Bound profile for either model kind.
///
/// Serialized as `{"kind": "qubo", "B": "1", "C": "4"}` or
/// `{"kind": "ising", "h_min": "1", "h_max": "1", "J_max": "1"}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BoundsRepr", into = "BoundsRepr")]
pub enum CoefficientBounds {
    Qubo(QuboBounds),
    Ising(IsingBounds),
}

impl CoefficientBounds {
    pub fn kind(&self) -> ModelKind {
        match self {
            CoefficientBounds::Qubo(_) => ModelKind::Qubo,
            CoefficientBounds::Ising(_) => ModelKind::Ising,
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Result<Self, BuildError> {
        Ok(match self {
            CoefficientBounds::Qubo(b) => CoefficientBounds::Qubo(b.scaled(factor)?),
            CoefficientBounds::Ising(b) => CoefficientBounds::Ising(b.scaled(factor)?),
        })
    }
}

impl From<QuboBounds> for CoefficientBounds {
    fn from(b: QuboBounds) -> Self {
        CoefficientBounds::Qubo(b)
    }
}

impl From<IsingBounds> for CoefficientBounds {
    fn from(b: IsingBounds) -> Self {
        CoefficientBounds::Ising(b)
    }
}

impl fmt::Display for CoefficientBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientBounds::Qubo(b) => {
                write!(f, "B={}, C={}", b.linear_lower, b.quadratic_upper)
            }
            CoefficientBounds::Ising(b) => write!(
                f,
                "h_min={}, h_max={}, J_max={}",
                b.bias_lower, b.bias_upper, b.coupling_upper
            ),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum BoundsRepr {
    Qubo {
        #[serde(rename = "B")]
        b: Rational,
        #[serde(rename = "C")]
        c: Rational,
    },
    Ising {
        h_min: Rational,
        h_max: Rational,
        #[serde(rename = "J_max")]
        j_max: Rational,
    },
}

impl TryFrom<BoundsRepr> for CoefficientBounds {
    type Error = BuildError;
    fn try_from(repr: BoundsRepr) -> Result<Self, BuildError> {
        Ok(match repr {
            BoundsRepr::Qubo { b, c } => QuboBounds::new(b, c)?.into(),
            BoundsRepr::Ising {
                h_min,
                h_max,
                j_max,
            } => IsingBounds::new(h_min, h_max, j_max)?.into(),
        })
    }
}

impl From<CoefficientBounds> for BoundsRepr {
    fn from(bounds: CoefficientBounds) -> Self {
        match bounds {
            CoefficientBounds::Qubo(b) => BoundsRepr::Qubo {
                b: b.linear_lower,
                c: b.quadratic_upper,
            },
            CoefficientBounds::Ising(b) => BoundsRepr::Ising {
                h_min: b.bias_lower,
                h_max: b.bias_upper,
                j_max: b.coupling_upper,
            },
        }
    }
}

/// Which coefficient bound limits the energy scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Binding {
    Linear,
    Quadratic,
    Tie,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleResult {
    #[serde(rename = "E")]
    pub energy_scale: Rational,
    /// Guaranteed minimum penalty of the model built at `energy_scale`.
    pub gap: Rational,
    pub binding: Binding,
}

fn check_scale(e: &Rational) -> Result<(), BuildError> {
    if e.is_positive() {
        Ok(())
    } else {
        Err(BuildError::NonPositiveScale(e.clone()))
    }
}

fn all_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| (j + 1..n).map(move |k| (j, k)))
}

/// `E (r - |x|)^2` as a QUBO on `n` bits.
pub fn build_qubo_hamming(n: usize, r: usize, e: &Rational) -> Result<Qubo, BuildError> {
    if n == 0 {
        return Err(BuildError::TooFewVariables { n, min: 1 });
    }
    if r > n {
        return Err(BuildError::WeightOutOfRange { r, n });
    }
    check_scale(e)?;
    let r = r as i64;
    let offset = e * &Rational::from(r * r);
    let linear = e * &Rational::from(1 - 2 * r);
    let quadratic = e * &Rational::from(2);
    Ok(Qubo::new(
        n,
        offset,
        vec![linear; n],
        all_pairs(n).map(|p| (p, quadratic.clone())),
    )
    .expect("well-formed by construction"))
}

/// Spin form of `2E (r - |x|)^2`.
pub fn build_ising_hamming(n: usize, r: usize, e: &Rational) -> Result<IsingModel, BuildError> {
    if n < 2 {
        return Err(BuildError::TooFewVariables { n, min: 2 });
    }
    if r > n {
        return Err(BuildError::WeightOutOfRange { r, n });
    }
    check_scale(e)?;
    let imbalance = n as i64 - 2 * r as i64;
    let bias = e * &Rational::from(imbalance);
    let offset = e * &Rational::new(n as i64 + imbalance * imbalance, 2);
    Ok(IsingModel::new(
        n,
        offset,
        vec![bias; n],
        all_pairs(n).map(|p| (p, e.clone())),
    )
    .expect("well-formed by construction"))
}

fn interior(n: usize, r: usize) -> Result<(), BuildError> {
    if r == 0 || r >= n {
        Err(BuildError::UnsupportedWeight { r, n })
    } else {
        Ok(())
    }
}

fn pick(linear: Rational, quadratic: Rational) -> (Rational, Binding) {
    match linear.cmp(&quadratic) {
        std::cmp::Ordering::Less => (linear, Binding::Linear),
        std::cmp::Ordering::Greater => (quadratic, Binding::Quadratic),
        std::cmp::Ordering::Equal => (linear, Binding::Tie),
    }
}

/// Largest minimum penalty reachable with `b_j >= -B`, `c_jk <= C`.
///
/// The QUBO penalty at scale `E` has `b_j = -(2r-1)E` and `c_jk = 2E`, so the
/// scale is `min(B / (2r-1), C / 2)` and the gap equals the scale.
pub fn optimal_qubo_scale(
    n: usize,
    r: usize,
    bounds: &QuboBounds,
) -> Result<ScaleResult, BuildError> {
    interior(n, r)?;
    let linear = bounds.linear_lower() / &Rational::from(2 * r as i64 - 1);
    let quadratic = bounds.quadratic_upper() / &Rational::from(2);
    let (e, binding) = pick(linear, quadratic);
    Ok(ScaleResult {
        gap: e.clone(),
        energy_scale: e,
        binding,
    })
}

/// Largest scale for which the Ising penalty respects the bounds; gap is `2E`.
///
/// Biases are `(n - 2r) E`, so `h_max` limits the scale below half weight and
/// `h_min` above it. At exactly half weight the biases vanish and only
/// `J_max` matters.
pub fn optimal_ising_scale(
    n: usize,
    r: usize,
    bounds: &IsingBounds,
) -> Result<ScaleResult, BuildError> {
    interior(n, r)?;
    let imbalance = n as i64 - 2 * r as i64;
    let (e, binding) = match imbalance {
        0 => (bounds.j_max().clone(), Binding::Quadratic),
        d if d > 0 => pick(bounds.h_max() / &Rational::from(d), bounds.j_max().clone()),
        d => pick(bounds.h_min() / &Rational::from(-d), bounds.j_max().clone()),
    };
    Ok(ScaleResult {
        gap: &e * &Rational::from(2),
        energy_scale: e,
        binding,
    })
}
