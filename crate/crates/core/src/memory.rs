//! Exponential-capacity associative memory.
//!
//! Retrieval weights come from the softmax kernel K(q, k) = exp(q . k):
//! the stored values are averaged with weights K(q, k_j) / sum_l K(q, k_l).
//! One such retrieval equals a single gradient step (unit rate) of a
//! Hopfield network with exponential energy; iterating it with re-queries
//! converges to the nearest stored value when the keys are spread out.
//!
//! The linearized variant replaces K with an unbiased positive random
//! feature map, phi(x) = m^{-1/2} exp(-|x|^2/2) (exp(w_1.x), ..,
//! exp(w_m.x)), w_i standard normal, collapsing the memory into
//! constant-size accumulators A = sum phi(k_j)^T v_j and z = sum phi(k_j)
//! whose footprint is independent of the number of stored observations.

use crate::rng;
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MemoryError {
    #[error("memory is empty")]
    EmptyMemory,
    #[error("key/value dimensions are inconsistent")]
    DimensionMismatch,
    #[error("feature normalizer is near zero; query too far from stored keys")]
    NearZeroNormalizer,
}

/// Exact memory: the full key/value sequence.
#[derive(Debug, Clone, Default)]
pub struct ExactMemory {
    keys: Vec<DVector<f64>>,
    values: Vec<DVector<f64>>,
}

impl ExactMemory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn ingest(&mut self, key: DVector<f64>, value: DVector<f64>) -> Result<(), MemoryError> {
        if let (Some(k0), Some(v0)) = (self.keys.first(), self.values.first()) {
            if k0.len() != key.len() || v0.len() != value.len() {
                return Err(MemoryError::DimensionMismatch);
            }
        }
        self.keys.push(key);
        self.values.push(value);
        Ok(())
    }

    /// Softmax attention weights for a query, computed with max-subtraction.
    /// Non-negative, summing to 1.
    pub fn attention_weights(&self, query: &DVector<f64>) -> Result<DVector<f64>, MemoryError> {
        if self.is_empty() {
            return Err(MemoryError::EmptyMemory);
        }
        let logits: Vec<f64> = self.keys.iter().map(|k| query.dot(k)).collect();
        let max = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
        let total: f64 = exps.iter().sum();
        Ok(DVector::from_iterator(exps.len(), exps.into_iter().map(|e| e / total)))
    }

    /// Softmax-kernel weighted value retrieval.
    pub fn retrieve(&self, query: &DVector<f64>) -> Result<DVector<f64>, MemoryError> {
        let w = self.attention_weights(query)?;
        let mut out = DVector::zeros(self.values[0].len());
        for (wj, v) in w.iter().zip(self.values.iter()) {
            out += v * *wj;
        }
        Ok(out)
    }

    /// Least-squares map from value space to key space (min |V M - K|_F),
    /// used to re-query during Hopfield iteration.
    fn value_to_key_map(&self) -> DMatrix<f64> {
        let l = self.len();
        let d = self.values[0].len();
        let dk = self.keys[0].len();
        let mut v = DMatrix::zeros(l, d);
        let mut k = DMatrix::zeros(l, dk);
        for i in 0..l {
            v.row_mut(i).copy_from(&self.values[i].transpose());
            k.row_mut(i).copy_from(&self.keys[i].transpose());
        }
        let pinv = v.pseudo_inverse(1e-12).expect("pseudo-inverse exists");
        pinv * k
    }

    /// Iterated retrieval: each step retrieves a value, projects it back to
    /// key space through the bank's value-to-key least-squares map, and
    /// re-queries. One step is exactly [`retrieve`](Self::retrieve).
    pub fn hopfield_retrieve(&self, query: &DVector<f64>, steps: usize) -> Result<DVector<f64>, MemoryError> {
        if self.is_empty() {
            return Err(MemoryError::EmptyMemory);
        }
        let steps = steps.max(1);
        let mut value = self.retrieve(query)?;
        if steps > 1 {
            let map = self.value_to_key_map();
            for _ in 1..steps {
                let requery = (value.transpose() * &map).transpose();
                value = self.retrieve(&requery)?;
            }
        }
        Ok(value)
    }
}

/// Positive random feature map for the softmax kernel.
#[derive(Debug, Clone)]
pub struct FeatureMap {
    projections: Vec<DVector<f64>>,
}

impl FeatureMap {
    /// `m` features for `d_qk`-dimensional keys/queries, drawn i.i.d.
    /// standard normal from the seed.
    pub fn new(m: usize, d_qk: usize, seed: u64) -> Self {
        assert!(m >= 1);
        let mut r = rng::from_seed(seed);
        let projections = (0..m)
            .map(|_| DVector::from_iterator(d_qk, (0..d_qk).map(|_| rng::standard_normal(&mut r))))
            .collect();
        Self { projections }
    }

    pub fn m(&self) -> usize {
        self.projections.len()
    }

    /// phi(x) = m^{-1/2} exp(-|x|^2 / 2) * (exp(w_1.x), ..., exp(w_m.x)).
    pub fn features(&self, x: &DVector<f64>) -> DVector<f64> {
        let m = self.m() as f64;
        let prefactor = (-x.norm_squared() / 2.0).exp() / m.sqrt();
        DVector::from_iterator(
            self.projections.len(),
            self.projections.iter().map(|w| prefactor * w.dot(x).exp()),
        )
    }

    /// Unbiased kernel estimate phi(x) . phi(y) of exp(x . y).
    pub fn kernel_estimate(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        self.features(x).dot(&self.features(y))
    }
}

/// Linearized memory: constant-size feature-space accumulators. The state
/// holds only A (m x d) and z (m) regardless of how many observations were
/// ingested.
#[derive(Debug, Clone)]
pub struct LinearMemory {
    feature_map: FeatureMap,
    accumulator: DMatrix<f64>,
    normalizer: DVector<f64>,
    len: usize,
}

impl LinearMemory {
    pub fn new(feature_map: FeatureMap, value_dim: usize) -> Self {
        let m = feature_map.m();
        Self {
            feature_map,
            accumulator: DMatrix::zeros(m, value_dim),
            normalizer: DVector::zeros(m),
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// State size in scalars: m * d + m, independent of len().
    pub fn state_size(&self) -> usize {
        self.accumulator.len() + self.normalizer.len()
    }

    /// Rank-one state update; ingestion order does not matter beyond float
    /// reassociation.
    pub fn ingest(&mut self, key: &DVector<f64>, value: &DVector<f64>) -> Result<(), MemoryError> {
        if value.len() != self.accumulator.ncols() {
            return Err(MemoryError::DimensionMismatch);
        }
        let phi = self.feature_map.features(key);
        self.accumulator += &phi * value.transpose();
        self.normalizer += phi;
        self.len += 1;
        Ok(())
    }

    /// phi(q) A / (phi(q) . z).
    pub fn retrieve(&self, query: &DVector<f64>) -> Result<DVector<f64>, MemoryError> {
        if self.is_empty() {
            return Err(MemoryError::EmptyMemory);
        }
        let phi = self.feature_map.features(query);
        let denom = phi.dot(&self.normalizer);
        if denom < 1e-12 {
            return Err(MemoryError::NearZeroNormalizer);
        }
        Ok(((phi.transpose() * &self.accumulator) / denom).transpose())
    }
}
