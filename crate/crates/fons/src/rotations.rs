//! Givens and hyperbolic rotation kernels for the rank-2 state update.
//!
//! Each step of the fast Newton learner processes an `(M+2)×3` pre-array
//! whose first row is `[√η, x̃ᵀΛ]` and whose bottom block is `[[0; ρ], Λ]`.
//! Two plane rotations, applied column-pair-wise from the right,
//! annihilate the off-diagonal entries of the first row:
//!
//! 1. a Givens rotation mixes columns 0 and 1 (both carrying signature
//!    `+1`) to zero entry `(0,1)`;
//! 2. a hyperbolic rotation mixes columns 0 and 2 (signatures `+1` and
//!    `−1`) to zero entry `(0,2)`.
//!
//! Both preserve the congruence `B Θ Bᵀ` for the fixed signature
//! `Θ = diag(1, 1, −1)`, which is exactly why the transformed bottom
//! block can be read back as the updated `ρ` and `Λ`. Each application
//! touches two columns of `M+2` rows, so the total cost is O(M).

use thiserror::Error;

use crate::scalar::Scalar;

/// Fixed column signature `diag(1, 1, −1)` of the 3-column array.
///
/// Column 2 carries the negative sign for every step; the factorization
/// never needs a time-varying signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature;

impl Signature {
    pub const DIAG: [i8; 3] = [1, 1, -1];

    pub fn diag<F: Scalar>() -> [F; 3] {
        [F::one(), F::one(), -F::one()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RotationError {
    /// Both pivot entries are zero: the annihilation target is already
    /// zero and the rotation direction is undefined. Callers substitute
    /// the identity rotation.
    #[error("degenerate rotation pair (0, 0)")]
    DegeneratePair,
    /// `|a| ≤ |b|` up to round-off: no hyperbolic rotation with this
    /// pivot exists. Analytically impossible here since the pivot carries
    /// `η ≥ 1`, so this signals accumulated round-off.
    #[error("hyperbolic rotation breakdown: |{a}| <= |{b}|")]
    HyperbolicBreakdown { a: f64, b: f64 },
}

/// Plane rotation with `c² + s² = 1`; maps a row pair `(u, v)` to
/// `(c·u + s·v, c·v − s·u)` and preserves `u² + v²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GivensRotation<F = f64> {
    pub c: F,
    pub s: F,
}

impl<F: Scalar> GivensRotation<F> {
    pub fn identity() -> Self {
        Self {
            c: F::one(),
            s: F::zero(),
        }
    }

    #[inline]
    pub fn apply(&self, u: F, v: F) -> (F, F) {
        (self.c * u + self.s * v, self.c * v - self.s * u)
    }
}

/// Hyperbolic rotation with `ch² − sh² = 1`; maps a row pair `(u, v)` to
/// `(ch·u + sh·v, ch·v + sh·u)` and preserves `u² − v²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicRotation<F = f64> {
    pub ch: F,
    pub sh: F,
}

impl<F: Scalar> HyperbolicRotation<F> {
    pub fn identity() -> Self {
        Self {
            ch: F::one(),
            sh: F::zero(),
        }
    }

    #[inline]
    pub fn apply(&self, u: F, v: F) -> (F, F) {
        (self.ch * u + self.sh * v, self.ch * v + self.sh * u)
    }
}

/// The rotations of one transform step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationPair<F = f64> {
    pub givens: GivensRotation<F>,
    pub hyperbolic: HyperbolicRotation<F>,
}

/// Givens rotation sending `(a, b)` to `(√(a² + b²), 0)`.
///
/// The leading result is always positive.
pub fn compute_givens<F: Scalar>(a: F, b: F) -> Result<GivensRotation<F>, RotationError> {
    if a == F::zero() && b == F::zero() {
        return Err(RotationError::DegeneratePair);
    }
    if b == F::zero() {
        let c = if a > F::zero() { F::one() } else { -F::one() };
        return Ok(GivensRotation { c, s: F::zero() });
    }
    let r = a.hypot(b);
    Ok(GivensRotation { c: a / r, s: b / r })
}

/// Hyperbolic rotation sending `(a, b)` to `(√(a² − b²), 0)`; requires a
/// dominant pivot `|a| > |b|`.
///
/// Breakdown is declared when `a² − b² < tol · max(1, a²)` with the
/// scalar's [`Scalar::breakdown_tol`]; any smaller pivot gap is
/// indistinguishable from round-off because the pivot here carries
/// `η ≥ 1`.
pub fn compute_hyperbolic<F: Scalar>(a: F, b: F) -> Result<HyperbolicRotation<F>, RotationError> {
    // (a-b)(a+b) avoids the cancellation of a² − b² near breakdown.
    let gap = (a - b) * (a + b);
    // a NaN pivot also counts as breakdown
    if gap.is_nan() || gap < F::breakdown_tol() * F::max(F::one(), a * a) {
        return Err(RotationError::HyperbolicBreakdown {
            a: a.to_f64(),
            b: b.to_f64(),
        });
    }
    if b == F::zero() {
        return Ok(HyperbolicRotation::identity());
    }
    let r = gap.sqrt();
    Ok(HyperbolicRotation {
        ch: a / r,
        sh: -b / r,
    })
}

/// The `(M+2)×3` array processed once per fast Newton step, stored by
/// column. Row 0 is the pivot row `[√η, x̃ᵀΛ]`; rows `1..M+2` hold
/// `[[0; ρ], Λ]`.
///
/// [`apply_transform`] overwrites it with the post-array, whose row 0 is
/// `[√η', 0, 0]` and whose bottom block is `[[ρ'; 0], Λ']`.
#[derive(Debug, Clone, PartialEq)]
pub struct PreArray<F = f64> {
    pub col0: Vec<F>,
    pub col1: Vec<F>,
    pub col2: Vec<F>,
}

impl<F: Scalar> PreArray<F> {
    /// All-zero array for window length `dim` (rows = `dim + 2`).
    pub fn zeros(dim: usize) -> Self {
        let rows = dim + 2;
        Self {
            col0: vec![F::zero(); rows],
            col1: vec![F::zero(); rows],
            col2: vec![F::zero(); rows],
        }
    }

    pub fn from_columns(col0: Vec<F>, col1: Vec<F>, col2: Vec<F>) -> Self {
        assert_eq!(col0.len(), col1.len());
        assert_eq!(col0.len(), col2.len());
        assert!(col0.len() >= 3, "array needs at least M + 2 = 3 rows");
        Self { col0, col1, col2 }
    }

    pub fn rows(&self) -> usize {
        self.col0.len()
    }

    pub fn row(&self, i: usize) -> [F; 3] {
        [self.col0[i], self.col1[i], self.col2[i]]
    }
}

/// Annihilate entries `(0,1)` and `(0,2)` in place: a Givens rotation on
/// columns `(0, 1)` followed by a hyperbolic rotation on columns `(0, 2)`,
/// in that order. Returns the rotations used.
///
/// Afterwards row 0 is `[√η', 0, 0]` with a positive leading entry, and
/// the congruence `B Θ Bᵀ` (with `Θ = diag(1, 1, −1)`) is unchanged.
pub fn apply_transform<F: Scalar>(arr: &mut PreArray<F>) -> Result<RotationPair<F>, RotationError> {
    let givens = match compute_givens(arr.col0[0], arr.col1[0]) {
        Ok(g) => g,
        // target entry already zero with a zero pivot; nothing to rotate
        Err(RotationError::DegeneratePair) => GivensRotation::identity(),
        Err(e) => return Err(e),
    };
    for (u, v) in arr.col0.iter_mut().zip(arr.col1.iter_mut()) {
        (*u, *v) = givens.apply(*u, *v);
    }

    let hyperbolic = compute_hyperbolic(arr.col0[0], arr.col2[0])?;
    for (u, v) in arr.col0.iter_mut().zip(arr.col2.iter_mut()) {
        (*u, *v) = hyperbolic.apply(*u, *v);
    }

    Ok(RotationPair { givens, hyperbolic })
}
