//! Dense helpers for the small projected problems inside subspace iteration.

use crate::Scalar;

/// Eigen-decomposition of a small symmetric matrix (row-major `r×r`) by cyclic Jacobi
/// rotations. Returns eigenvalues and the column-major eigenvector matrix, sorted by
/// decreasing absolute eigenvalue.
pub fn symmetric_eigen<T: Scalar>(a: &[T], r: usize) -> (Vec<T>, Vec<T>) {
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); r * r];
    for i in 0..r {
        v[i * r + i] = T::one();
    }
    let tiny = T::epsilon() * T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..r {
            diag += m[i * r + i] * m[i * r + i];
            for j in i + 1..r {
                off += m[i * r + j] * m[i * r + j];
            }
        }
        if off <= tiny * diag.max(T::min_positive_value()) {
            break;
        }
        for p in 0..r {
            for q in p + 1..r {
                let apq = m[p * r + q];
                if apq == T::zero() {
                    continue;
                }
                let (app, aqq) = (m[p * r + p], m[q * r + q]);
                let tau = (aqq - app) / (T::two() * apq);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..r {
                    let (mkp, mkq) = (m[k * r + p], m[k * r + q]);
                    m[k * r + p] = c * mkp - s * mkq;
                    m[k * r + q] = s * mkp + c * mkq;
                }
                for k in 0..r {
                    let (mpk, mqk) = (m[p * r + k], m[q * r + k]);
                    m[p * r + k] = c * mpk - s * mqk;
                    m[q * r + k] = s * mpk + c * mqk;
                }
                // column-major eigenvectors: column p lives at v[p*r..]
                for k in 0..r {
                    let (vkp, vkq) = (v[p * r + k], v[q * r + k]);
                    v[p * r + k] = c * vkp - s * vkq;
                    v[q * r + k] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| {
        m[y * r + y].abs().partial_cmp(&m[x * r + x].abs()).unwrap_or(std::cmp::Ordering::Equal).then(x.cmp(&y))
    });
    let values = order.iter().map(|&i| m[i * r + i]).collect();
    let mut vectors = Vec::with_capacity(r * r);
    for &i in &order {
        vectors.extend_from_slice(&v[i * r..(i + 1) * r]);
    }
    (values, vectors)
}

/// Modified Gram–Schmidt (two passes) on the column-major `n×r` block `q`, in place.
/// Returns the indices of columns whose norm collapsed below `drop_tol` relative to
/// their original size; those columns are left zeroed.
pub fn orthonormalize<T: Scalar>(q: &mut [T], n: usize, r: usize, drop_tol: T) -> Vec<usize> {
    let mut dropped = Vec::new();
    for j in 0..r {
        let original = norm(&q[j * n..(j + 1) * n]);
        for _pass in 0..2 {
            for i in 0..j {
                if dropped.contains(&i) {
                    continue;
                }
                let (head, tail) = q.split_at_mut(j * n);
                let qi = &head[i * n..(i + 1) * n];
                let qj = &mut tail[..n];
                let d = dot(qi, qj);
                for (x, &y) in qj.iter_mut().zip(qi) {
                    *x -= d * y;
                }
            }
        }
        let col = &mut q[j * n..(j + 1) * n];
        let nrm = norm(col);
        if !(nrm > drop_tol * original) || nrm == T::zero() {
            col.iter_mut().for_each(|x| *x = T::zero());
            dropped.push(j);
        } else {
            col.iter_mut().for_each(|x| *x /= nrm);
        }
    }
    dropped
}

#[inline]
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}
