//! Sliding sample windows.
//!
//! The feature vector at time `t` is the window of the `M` most recent
//! samples, newest first. Consecutive windows overlap in `M − 1` entries:
//! pushing a sample shifts every entry down by one and discards the
//! oldest. All dot products in this crate follow the newest-first
//! ordering.

use std::collections::VecDeque;

use crate::scalar::Scalar;

/// Fixed-length window of the `M` most recent samples, newest first.
///
/// Entries before the first push are zero, so a freshly created window is
/// the all-zero vector and the associated time index is `-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindow<F = f64> {
    buf: VecDeque<F>,
    t: i64,
}

impl<F: Scalar> SlidingWindow<F> {
    /// All-zero window of length `dim`.
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "window length must be at least 1");
        let mut buf = VecDeque::with_capacity(dim + 1);
        buf.resize(dim, F::zero());
        Self { buf, t: -1 }
    }

    pub fn len(&self) -> usize {
        self.buf.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Time index of the newest sample; `-1` before the first push.
    pub fn t(&self) -> i64 {
        self.t
    }

    /// Shift in `sample` as the newest entry, returning the discarded
    /// oldest entry.
    pub fn push(&mut self, sample: F) -> F {
        self.buf.push_front(sample);
        self.t += 1;
        self.buf.pop_back().expect("window is never empty")
    }

    /// Newest sample.
    pub fn newest(&self) -> F {
        *self.buf.front().expect("window is never empty")
    }

    /// Entries in newest-first order as two contiguous slices.
    pub fn as_slices(&self) -> (&[F], &[F]) {
        self.buf.as_slices()
    }

    /// Entries in newest-first order.
    pub fn iter(&self) -> impl Iterator<Item = &F> {
        self.buf.iter()
    }

    /// Copy of the entries in newest-first order.
    pub fn to_vec(&self) -> Vec<F> {
        self.buf.iter().copied().collect()
    }

    /// Copy the entries into `out`, newest first.
    pub fn write_to(&self, out: &mut [F]) {
        debug_assert_eq!(out.len(), self.buf.len());
        let (a, b) = self.buf.as_slices();
        out[..a.len()].copy_from_slice(a);
        out[a.len()..].copy_from_slice(b);
    }

    /// Dot product with `weights` (aligned newest-first).
    pub fn dot(&self, weights: &[F]) -> F {
        debug_assert_eq!(weights.len(), self.buf.len());
        let (a, b) = self.buf.as_slices();
        let mut acc = F::zero();
        for (w, x) in weights[..a.len()].iter().zip(a) {
            acc = acc + *w * *x;
        }
        for (w, x) in weights[a.len()..].iter().zip(b) {
            acc = acc + *w * *x;
        }
        acc
    }
}

/// The `(M+1)`-dimensional vector `[s, w₀, …, w_{M−1}]` formed when sample
/// `s` is pushed into window `w`: its head is the newest sample and its
/// tail is the entire pre-push window.
///
/// Dropping the first entry recovers the pre-push window; dropping the
/// last yields the post-push window. This one-vector overlap of two
/// consecutive windows is what the fast Newton-step update operates on.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedVector<F = f64> {
    values: Vec<F>,
}

impl<F: Scalar> ExtendedVector<F> {
    /// Build from the sample being pushed and the window as it was before
    /// the push.
    pub fn from_push(sample: F, pre_push: &SlidingWindow<F>) -> Self {
        let mut values = Vec::with_capacity(pre_push.len() + 1);
        values.push(sample);
        values.extend(pre_push.iter().copied());
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// The window before the push (all but the first entry).
    pub fn pre_push_window(&self) -> &[F] {
        &self.values[1..]
    }

    /// The window after the push (all but the last entry).
    pub fn post_push_window(&self) -> &[F] {
        &self.values[..self.values.len() - 1]
    }
}
