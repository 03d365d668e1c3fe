//! Binary entropy and the closed-form entropy of a block-constant graphon.

use crate::error::{domain, Result};
use crate::numeric::{order_free_sum, xlogx};
use crate::Scalar;

/// `h(x) = −x ln x − (1−x) ln(1−x)` in nats, with `h(0) = h(1) = 0`.
pub fn binary_entropy<T: Scalar>(x: T) -> Result<T> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(domain(format!("binary entropy argument must lie in [0, 1], got {x}")));
    }
    Ok(binary_entropy_unchecked(x))
}

/// Binary entropy for an argument already known to lie in `[0, 1]`.
#[inline]
pub fn binary_entropy_unchecked<T: Scalar>(x: T) -> T {
    let v = -(xlogx(x) + xlogx(T::one() - x));
    // rounding can push h(x) a hair below zero near the endpoints
    v.max(T::zero())
}

/// Binary entropy of `x` clipped into `[eps, 1 − eps]`.
#[inline]
pub fn clipped_binary_entropy<T: Scalar>(x: T, eps: T) -> T {
    binary_entropy_unchecked(x.max(eps).min(T::one() - eps))
}

/// Derivative of the binary entropy, `h'(x) = ln((1−x)/x)`; zero at the endpoints
/// where the variance it multiplies vanishes anyway.
#[inline]
pub fn binary_entropy_slope<T: Scalar>(x: T) -> T {
    if x <= T::zero() || x >= T::one() {
        T::zero()
    } else {
        ((T::one() - x) / x).ln()
    }
}

/// Entropy of a stochastic block model with connectivity `theta` (row-major `k×k`)
/// and block sizes `sizes`:
/// `−Σ_{a,b} (h_a h_b / n²) [θ_ab ln θ_ab + (1−θ_ab) ln(1−θ_ab)]`.
///
/// The sum is evaluated independently of block order, so relabeling blocks
/// leaves the result bit-for-bit unchanged.
pub fn block_entropy<T: Scalar>(theta: &[T], sizes: &[usize], n: usize) -> Result<T> {
    let k = sizes.len();
    if theta.len() != k * k {
        return Err(domain(format!("theta has {} entries, expected {}x{}", theta.len(), k, k)));
    }
    let total: usize = sizes.iter().sum();
    if total != n || n == 0 {
        return Err(domain(format!("block sizes sum to {total}, expected n = {n}")));
    }
    let n_t = T::from_count(n);
    let mut terms = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let th = theta[a * k + b];
            if !(th >= T::zero() && th <= T::one()) {
                return Err(domain(format!("theta[{a}][{b}] = {th} is not a probability")));
            }
            let w = (T::from_count(sizes[a]) / n_t) * (T::from_count(sizes[b]) / n_t);
            terms.push(w * binary_entropy_unchecked(th));
        }
    }
    Ok(order_free_sum(terms))
}

/// Block entropy with fractional block widths (the graphon form, widths sum to one).
pub(crate) fn block_entropy_fractions<T: Scalar>(theta: &[T], fractions: &[T]) -> T {
    let k = fractions.len();
    let mut terms = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            terms.push(fractions[a] * fractions[b] * binary_entropy_unchecked(theta[a * k + b]));
        }
    }
    order_free_sum(terms)
}
