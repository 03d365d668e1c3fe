//! Small numerical helpers: compensated summation and `x log x` tables.

use crate::Scalar;

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    carry: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self { sum: T::zero(), carry: T::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

impl<T: Scalar> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(iter: I) -> T {
    iter.into_iter().collect::<CompensatedSum<T>>().value()
}

/// Sum that does not depend on the order of the inputs: terms are sorted first.
pub fn order_free_sum<T: Scalar>(mut terms: Vec<T>) -> T {
    terms.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    compensated_sum(terms)
}

/// `x ln x` with the continuous extension `0 ln 0 = 0`.
#[inline]
pub fn xlogx<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.ln()
    }
}

/// Lookup table of `m ln m` for integer counts `m = 0..=max`.
#[derive(Clone, Debug)]
pub struct XLogXTable<T> {
    values: Vec<T>,
}

impl<T: Scalar> XLogXTable<T> {
    pub fn new(max: usize) -> Self {
        let values = (0..=max).map(|m| xlogx(T::from_count(m))).collect();
        Self { values }
    }

    #[inline]
    pub fn get(&self, m: u64) -> T {
        self.values[m as usize]
    }

    pub fn max_value(&self) -> T {
        self.values.last().copied().unwrap_or_else(T::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut terms = vec![1.0e16_f64];
        terms.extend(std::iter::repeat(1.0).take(1000));
        terms.push(-1.0e16);
        assert_eq!(compensated_sum(terms), 1000.0);
    }

    #[test]
    fn order_free_sum_is_permutation_invariant() {
        let a = vec![0.1_f64, 0.7, 1e-9, 3.3, -2.2, 0.25];
        let mut b = a.clone();
        b.reverse();
        b.swap(0, 3);
        assert_eq!(order_free_sum(a).to_bits(), order_free_sum(b).to_bits());
    }

    #[test]
    fn xlogx_table_matches_direct() {
        let t = XLogXTable::<f64>::new(100);
        assert_eq!(t.get(0), 0.0);
        assert_eq!(t.get(1), 0.0);
        assert!((t.get(37) - 37.0 * 37f64.ln()).abs() < 1e-12);
    }
}
