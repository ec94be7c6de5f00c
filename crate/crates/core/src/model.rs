//! QUBO and Ising models over exact rationals.
//!
//! Both kinds share the same coefficient layout: an offset, one linear
//! coefficient per variable and a sparse strict-upper-triangular quadratic
//! part. They differ only in how an assignment is read: a QUBO sees the bits
//! `x_j` directly, an Ising model sees spins `s_j = 2x_j - 1`, so bit 1 is
//! spin +1 and bit 0 is spin -1.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{Bitstring, MAX_BITS};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable count {0} outside 1..={MAX_BITS}")]
    VariableCount(usize),
    #[error("expected {expected} linear coefficients, found {found}")]
    LinearLength { expected: usize, found: usize },
    #[error("quadratic index pair ({i}, {j}) invalid for {n} variables (need i < j < n)")]
    InvalidPair { i: usize, j: usize, n: usize },
    #[error("quadratic index pair ({i}, {j}) given more than once")]
    DuplicatePair { i: usize, j: usize },
    #[error("assignment has length {found}, model has {expected} variables")]
    Dimension { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Qubo,
    Ising,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Qubo => "qubo",
            ModelKind::Ising => "ising",
        })
    }
}

/// Offset, linear and quadratic coefficients shared by both model kinds.
///
/// Zero quadratic coefficients are never stored, so two coefficient sets are
/// equal exactly when they describe the same polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coefficients {
    n: usize,
    offset: Rational,
    linear: Vec<Rational>,
    quadratic: BTreeMap<(usize, usize), Rational>,
}

impl Coefficients {
    pub fn new<I>(
        n: usize,
        offset: Rational,
        linear: Vec<Rational>,
        quadratic: I,
    ) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = ((usize, usize), Rational)>,
    {
        if n == 0 || n > MAX_BITS {
            return Err(ModelError::VariableCount(n));
        }
        if linear.len() != n {
            return Err(ModelError::LinearLength {
                expected: n,
                found: linear.len(),
            });
        }
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for ((i, j), value) in quadratic {
            if i >= j || j >= n {
                return Err(ModelError::InvalidPair { i, j, n });
            }
            if !seen.insert((i, j)) {
                return Err(ModelError::DuplicatePair { i, j });
            }
            if !value.is_zero() {
                map.insert((i, j), value);
            }
        }
        Ok(Coefficients {
            n,
            offset,
            linear,
            quadratic: map,
        })
    }

    pub fn zero(n: usize) -> Result<Self, ModelError> {
        Coefficients::new(n, Rational::zero(), vec![Rational::zero(); n], [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn linear(&self) -> &[Rational] {
        &self.linear
    }

    /// Nonzero quadratic coefficients keyed by `(j, k)` with `j < k`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), Rational> {
        &self.quadratic
    }

    /// Quadratic coefficient of the pair, in either order; zero when absent.
    pub fn coupling(&self, j: usize, k: usize) -> Rational {
        let key = if j < k { (j, k) } else { (k, j) };
        self.quadratic.get(&key).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.quadratic.is_empty() && self.linear.iter().all(Rational::is_zero)
    }

    /// Relabels variables: the coefficient at position `j` moves to `perm[j]`.
    ///
    /// `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Coefficients {
        assert_eq!(perm.len(), self.n, "permutation degree mismatch");
        let mut linear = vec![Rational::zero(); self.n];
        for (j, b) in self.linear.iter().enumerate() {
            linear[perm[j]] = b.clone();
        }
        let quadratic = self
            .quadratic
            .iter()
            .map(|(&(j, k), c)| {
                let (a, b) = (perm[j], perm[k]);
                ((a.min(b), a.max(b)), c.clone())
            })
            .collect();
        Coefficients {
            n: self.n,
            offset: self.offset.clone(),
            linear,
            quadratic,
        }
    }

    fn check_len(&self, x: &Bitstring) -> Result<(), ModelError> {
        if x.len() != self.n {
            return Err(ModelError::Dimension {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Behaviour common to QUBOs and Ising models.
pub trait PenaltyModel: Clone + fmt::Debug + PartialEq + Send + Sync {
    const KIND: ModelKind;

    fn coefficients(&self) -> &Coefficients;

    fn from_coefficients(coefficients: Coefficients) -> Self;

    /// Exact objective value on `x`.
    fn evaluate(&self, x: &Bitstring) -> Result<Rational, ModelError>;

    /// The QUBO taking the same value on every bitstring.
    fn to_qubo(&self) -> Cow<'_, Qubo>;
}

/// `a + sum b_j x_j + sum_{j<k} c_jk x_j x_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Qubo(Coefficients);

impl Qubo {
    pub fn new<I>(
        n: usize,
        offset: Rational,
        linear: Vec<Rational>,
        quadratic: I,
    ) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = ((usize, usize), Rational)>,
    {
        Coefficients::new(n, offset, linear, quadratic).map(Qubo)
    }

    pub fn zero(n: usize) -> Result<Self, ModelError> {
        Coefficients::zero(n).map(Qubo)
    }
}

impl Deref for Qubo {
    type Target = Coefficients;
    fn deref(&self) -> &Coefficients {
        &self.0
    }
}

impl PenaltyModel for Qubo {
    const KIND: ModelKind = ModelKind::Qubo;

    fn coefficients(&self) -> &Coefficients {
        &self.0
    }

    fn from_coefficients(coefficients: Coefficients) -> Self {
        Qubo(coefficients)
    }

    fn evaluate(&self, x: &Bitstring) -> Result<Rational, ModelError> {
        self.0.check_len(x)?;
        let mut value = self.0.offset.clone();
        for j in x.support() {
            value += &self.0.linear[j];
        }
        for (&(j, k), c) in &self.0.quadratic {
            if x.get(j) && x.get(k) {
                value += c;
            }
        }
        Ok(value)
    }

    fn to_qubo(&self) -> Cow<'_, Qubo> {
        Cow::Borrowed(self)
    }
}

/// `E0 + sum h_j s_j + sum_{j<k} J_jk s_j s_k` with `s_j = 2x_j - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsingModel(Coefficients);

impl IsingModel {
    pub fn new<I>(
        n: usize,
        offset: Rational,
        biases: Vec<Rational>,
        couplings: I,
    ) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = ((usize, usize), Rational)>,
    {
        Coefficients::new(n, offset, biases, couplings).map(IsingModel)
    }

    pub fn zero(n: usize) -> Result<Self, ModelError> {
        Coefficients::zero(n).map(IsingModel)
    }

    pub fn biases(&self) -> &[Rational] {
        self.0.linear()
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), Rational> {
        self.0.quadratic()
    }
}

impl Deref for IsingModel {
    type Target = Coefficients;
    fn deref(&self) -> &Coefficients {
        &self.0
    }
}

impl PenaltyModel for IsingModel {
    const KIND: ModelKind = ModelKind::Ising;

    fn coefficients(&self) -> &Coefficients {
        &self.0
    }

    fn from_coefficients(coefficients: Coefficients) -> Self {
        IsingModel(coefficients)
    }

    fn evaluate(&self, x: &Bitstring) -> Result<Rational, ModelError> {
        self.0.check_len(x)?;
        let mut value = self.0.offset.clone();
        for (j, h) in self.0.linear.iter().enumerate() {
            if x.get(j) {
                value += h;
            } else {
                value -= h;
            }
        }
        for (&(j, k), coupling) in &self.0.quadratic {
            if x.get(j) == x.get(k) {
                value += coupling;
            } else {
                value -= coupling;
            }
        }
        Ok(value)
    }

    fn to_qubo(&self) -> Cow<'_, Qubo> {
        Cow::Owned(ising_to_qubo(self))
    }
}

/// Rewrites a QUBO in spin variables via `x = (s + 1) / 2`.
pub fn qubo_to_ising(q: &Qubo) -> IsingModel {
    let n = q.n();
    let quarter = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    let mut biases: Vec<Rational> = q.linear().iter().map(|b| b * &half).collect();
    let mut offset = q.offset() + &(q.linear().iter().sum::<Rational>() * &half);
    let mut couplings = Vec::with_capacity(q.quadratic().len());
    for (&(j, k), c) in q.quadratic() {
        let quarter_c = c * &quarter;
        biases[j] += &quarter_c;
        biases[k] += &quarter_c;
        offset += &quarter_c;
        couplings.push(((j, k), quarter_c));
    }
    IsingModel::new(n, offset, biases, couplings).expect("conversion preserves shape")
}

/// Rewrites an Ising model in bit variables via `s = 2x - 1`.
pub fn ising_to_qubo(m: &IsingModel) -> Qubo {
    let n = m.n();
    let two = Rational::from(2);
    let four = Rational::from(4);
    let mut linear: Vec<Rational> = m.biases().iter().map(|h| h * &two).collect();
    let mut offset = m.offset() - &m.biases().iter().sum::<Rational>();
    let mut quadratic = Vec::with_capacity(m.couplings().len());
    for (&(j, k), coupling) in m.couplings() {
        let twice = coupling * &two;
        linear[j] -= &twice;
        linear[k] -= &twice;
        offset += coupling;
        quadratic.push(((j, k), coupling * &four));
    }
    Qubo::new(n, offset, linear, quadratic).expect("conversion preserves shape")
}

/// A model of either kind, as read from or written to a model file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Qubo(Qubo),
    Ising(IsingModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Qubo(_) => ModelKind::Qubo,
            Model::Ising(_) => ModelKind::Ising,
        }
    }

    pub fn coefficients(&self) -> &Coefficients {
        match self {
            Model::Qubo(q) => q.coefficients(),
            Model::Ising(m) => m.coefficients(),
        }
    }

    pub fn n(&self) -> usize {
        self.coefficients().n()
    }

    pub fn evaluate(&self, x: &Bitstring) -> Result<Rational, ModelError> {
        match self {
            Model::Qubo(q) => q.evaluate(x),
            Model::Ising(m) => m.evaluate(x),
        }
    }

    pub fn to_qubo(&self) -> Qubo {
        match self {
            Model::Qubo(q) => q.clone(),
            Model::Ising(m) => ising_to_qubo(m),
        }
    }

    /// The same objective in the other representation.
    pub fn converted(&self) -> Model {
        match self {
            Model::Qubo(q) => Model::Ising(qubo_to_ising(q)),
            Model::Ising(m) => Model::Qubo(ising_to_qubo(m)),
        }
    }
}

impl From<Qubo> for Model {
    fn from(q: Qubo) -> Self {
        Model::Qubo(q)
    }
}

impl From<IsingModel> for Model {
    fn from(m: IsingModel) -> Self {
        Model::Ising(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| Rational::from(v)).collect()
    }

    fn q1_n3() -> Qubo {
        Qubo::new(
            3,
            r(1, 1),
            ints(&[-1, -1, -1]),
            [((0, 1), r(2, 1)), ((0, 2), r(2, 1)), ((1, 2), r(2, 1))],
        )
        .unwrap()
    }

    fn all_strings(n: usize) -> impl Iterator<Item = Bitstring> {
        (0..1u64 << n).map(move |m| Bitstring::new(n, m).unwrap())
    }

    #[test]
    fn evaluate_single_hot_penalty() {
        let q = q1_n3();
        assert_eq!(q.evaluate(&"100".parse().unwrap()).unwrap(), r(0, 1));
        assert_eq!(q.evaluate(&"000".parse().unwrap()).unwrap(), r(1, 1));
        assert_eq!(q.evaluate(&"111".parse().unwrap()).unwrap(), r(4, 1));
    }

    #[test]
    fn evaluate_zero_model() {
        let q = Qubo::zero(4).unwrap();
        for x in all_strings(4) {
            assert!(q.evaluate(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn evaluate_rejects_length_mismatch() {
        let q = q1_n3();
        let x = Bitstring::zeros(4).unwrap();
        assert_eq!(
            q.evaluate(&x),
            Err(ModelError::Dimension {
                expected: 3,
                found: 4
            })
        );
        let m = qubo_to_ising(&q);
        assert!(m.evaluate(&x).is_err());
    }

    #[test]
    fn constructor_validates_pairs() {
        let bad = Qubo::new(3, r(0, 1), ints(&[0, 0, 0]), [((1, 1), r(1, 1))]);
        assert_eq!(bad, Err(ModelError::InvalidPair { i: 1, j: 1, n: 3 }));
        let bad = Qubo::new(3, r(0, 1), ints(&[0, 0, 0]), [((2, 1), r(1, 1))]);
        assert!(matches!(bad, Err(ModelError::InvalidPair { .. })));
        let bad = Qubo::new(3, r(0, 1), ints(&[0, 0, 0]), [((1, 3), r(1, 1))]);
        assert!(matches!(bad, Err(ModelError::InvalidPair { .. })));
        let dup = Qubo::new(
            3,
            r(0, 1),
            ints(&[0, 0, 0]),
            [((0, 1), r(1, 1)), ((0, 1), r(2, 1))],
        );
        assert_eq!(dup, Err(ModelError::DuplicatePair { i: 0, j: 1 }));
        assert!(matches!(
            Qubo::new(2, r(0, 1), ints(&[0]), []),
            Err(ModelError::LinearLength { .. })
        ));
        assert_eq!(Qubo::zero(0), Err(ModelError::VariableCount(0)));
    }

    #[test]
    fn zero_couplings_are_not_stored() {
        let q = Qubo::new(2, r(0, 1), ints(&[0, 0]), [((0, 1), r(0, 1))]).unwrap();
        assert!(q.quadratic().is_empty());
        assert_eq!(q, Qubo::zero(2).unwrap());
    }

    #[test]
    fn single_hot_n2_to_ising() {
        let q = Qubo::new(2, r(1, 1), ints(&[-1, -1]), [((0, 1), r(2, 1))]).unwrap();
        let m = qubo_to_ising(&q);
        assert_eq!(m.offset(), &r(1, 2));
        assert_eq!(m.biases(), &[r(0, 1), r(0, 1)]);
        assert_eq!(m.coupling(0, 1), r(1, 2));
        for x in all_strings(2) {
            assert_eq!(m.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
        }
        assert_eq!(ising_to_qubo(&m), q);
    }

    #[test]
    fn linear_qubo_to_ising() {
        let q = Qubo::new(2, r(0, 1), ints(&[2, 0]), []).unwrap();
        let m = qubo_to_ising(&q);
        assert_eq!(m.offset(), &r(1, 1));
        assert_eq!(m.biases(), &[r(1, 1), r(0, 1)]);
        assert!(m.couplings().is_empty());
        for x in all_strings(2) {
            assert_eq!(m.evaluate(&x).unwrap(), q.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn zero_models_convert_to_zero() {
        assert_eq!(
            qubo_to_ising(&Qubo::zero(3).unwrap()),
            IsingModel::zero(3).unwrap()
        );
        assert_eq!(
            ising_to_qubo(&IsingModel::zero(3).unwrap()),
            Qubo::zero(3).unwrap()
        );
    }

    #[test]
    fn ising_to_qubo_inverse_example() {
        let m = IsingModel::new(2, r(1, 2), ints(&[0, 0]), [((0, 1), r(1, 2))]).unwrap();
        let q = ising_to_qubo(&m);
        assert_eq!(q.offset(), &r(1, 1));
        assert_eq!(q.linear(), &[r(-1, 1), r(-1, 1)]);
        assert_eq!(q.coupling(0, 1), r(2, 1));
        assert_eq!(q.coupling(1, 0), r(2, 1));
    }

    #[test]
    fn permutation_moves_coefficients() {
        let q = Qubo::new(3, r(5, 1), ints(&[1, 2, 3]), [((0, 1), r(7, 1))]).unwrap();
        let p = q.permuted(&[2, 0, 1]);
        assert_eq!(p.linear(), &[r(2, 1), r(3, 1), r(1, 1)]);
        assert_eq!(p.coupling(0, 2), r(7, 1));
        assert_eq!(p.offset(), &r(5, 1));
    }

    #[test]
    fn model_enum_dispatch() {
        let model = Model::from(q1_n3());
        assert_eq!(model.kind(), ModelKind::Qubo);
        let other = model.converted();
        assert_eq!(other.kind(), ModelKind::Ising);
        assert_eq!(other.converted(), model);
        for x in all_strings(3) {
            assert_eq!(model.evaluate(&x).unwrap(), other.evaluate(&x).unwrap());
        }
    }
}
