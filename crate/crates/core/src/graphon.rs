//! Graphon representations, evaluation and the entropy functional `∬ h(ρ f(x, y)) dx dy`.

use crate::entropy::{binary_entropy_unchecked, block_entropy_fractions};
use crate::error::{domain, Result};
use crate::numeric::CompensatedSum;
use crate::special::beta_quantile;
use crate::Scalar;

/// Default number of midpoint nodes per axis for the entropy quadrature.
pub const DEFAULT_QUAD_POINTS: usize = 2048;

/// Default lattice resolution used when tabulating `f₂`.
pub const DEFAULT_F2_GRID: usize = 1025;

/// Default `f₂` parameters `(a0, a1, α₁)`.
pub const F2_DEFAULTS: (f64, f64, f64) = (0.25, 0.15, 3.0);

#[derive(Clone, Debug, PartialEq)]
pub enum GraphonKind<T> {
    /// `f ≡ level` (Erdős–Rényi).
    Constant { level: T },
    /// `f(x, y) = g(x) g(y)` with `g` sampled on a uniform grid of `[0, 1]`.
    Separable { g: Vec<T> },
    /// Piecewise constant on blocks of widths `fractions`; `theta` is row-major `k×k`.
    BlockConstant { theta: Vec<T>, fractions: Vec<T> },
    /// `f(x, y) = Σ_j λ_j g_j(x) g_j(y)`; every `g_j` is a grid on `[0, 1]`.
    LowRank { lambdas: Vec<T>, components: Vec<Vec<T>> },
    /// `f` tabulated on an `m×m` uniform lattice (row-major), interpolated bilinearly.
    AnalyticGrid { m: usize, grid: Vec<T>, holder_exponent: Option<T> },
}

impl<T> GraphonKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            GraphonKind::Constant { .. } => "constant",
            GraphonKind::Separable { .. } => "separable",
            GraphonKind::BlockConstant { .. } => "block",
            GraphonKind::LowRank { .. } => "lowrank",
            GraphonKind::AnalyticGrid { .. } => "grid",
        }
    }
}

/// A generating mechanism: a graphon shape together with its sparsity scale `ρₙ`.
///
/// Construction validates that `ρₙ · max f ≤ 1`, so every evaluation is a probability.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphonSpec<T> {
    kind: GraphonKind<T>,
    rho: T,
}

fn check_rho<T: Scalar>(rho: T) -> Result<()> {
    if !(rho > T::zero() && rho <= T::one()) {
        return Err(domain(format!("rho must lie in (0, 1], got {rho}")));
    }
    Ok(())
}

fn check_nonnegative<T: Scalar>(what: &str, values: &[T]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= T::zero())) {
        return Err(domain(format!("{what} must be finite and nonnegative, found {v}")));
    }
    Ok(())
}

fn check_grid_len(what: &str, len: usize) -> Result<()> {
    if len < 2 {
        return Err(domain(format!("{what} needs at least 2 grid points, got {len}")));
    }
    Ok(())
}

/// Linear interpolation of a uniform grid over `[0, 1]`.
#[inline]
fn interp<T: Scalar>(grid: &[T], x: T) -> T {
    let last = grid.len() - 1;
    let pos = x * T::from_count(last);
    let i = pos.floor().to_usize().unwrap_or(0).min(last - 1);
    let t = pos - T::from_count(i);
    grid[i] + (grid[i + 1] - grid[i]) * t
}

impl<T: Scalar> GraphonSpec<T> {
    pub fn new(kind: GraphonKind<T>, rho: T) -> Result<Self> {
        check_rho(rho)?;
        match &kind {
            GraphonKind::Constant { level } => {
                if !(*level > T::zero() && *level <= T::one()) {
                    return Err(domain(format!("constant level must lie in (0, 1], got {level}")));
                }
            }
            GraphonKind::Separable { g } => {
                check_grid_len("separable factor", g.len())?;
                check_nonnegative("separable factor values", g)?;
            }
            GraphonKind::BlockConstant { theta, fractions } => {
                let k = fractions.len();
                if k == 0 || theta.len() != k * k {
                    return Err(domain(format!(
                        "block graphon needs a k×k theta for k = {k} fractions, got {} entries",
                        theta.len()
                    )));
                }
                if fractions.iter().any(|f| !(*f > T::zero())) {
                    return Err(domain("block fractions must be positive"));
                }
                let total: T = fractions.iter().copied().sum();
                if (total - T::one()).abs() > T::tolerance(1e-12) {
                    return Err(domain(format!("block fractions must sum to 1, got {total}")));
                }
                check_nonnegative("theta", theta)?;
                for a in 0..k {
                    for b in 0..a {
                        if theta[a * k + b] != theta[b * k + a] {
                            return Err(domain(format!("theta is not symmetric at ({a}, {b})")));
                        }
                    }
                }
            }
            GraphonKind::LowRank { lambdas, components } => {
                if lambdas.is_empty() || lambdas.len() != components.len() {
                    return Err(domain("low-rank graphon needs one weight per component"));
                }
                check_nonnegative("low-rank weights", lambdas)?;
                for g in components {
                    check_grid_len("low-rank component", g.len())?;
                    check_nonnegative("low-rank component values", g)?;
                }
            }
            GraphonKind::AnalyticGrid { m, grid, holder_exponent } => {
                check_grid_len("graphon lattice", *m)?;
                if grid.len() != m * m {
                    return Err(domain(format!("lattice has {} values, expected {m}x{m}", grid.len())));
                }
                check_nonnegative("graphon lattice values", grid)?;
                for i in 0..*m {
                    for j in 0..i {
                        if grid[i * m + j] != grid[j * m + i] {
                            return Err(domain(format!("lattice is not symmetric at ({i}, {j})")));
                        }
                    }
                }
                if let Some(a) = holder_exponent {
                    if !(*a > T::zero() && *a <= T::one()) {
                        return Err(domain(format!("Hölder exponent must lie in (0, 1], got {a}")));
                    }
                }
            }
        }
        let spec = Self { kind, rho };
        let peak = spec.max_value() * rho;
        if peak > T::one() + T::epsilon() * T::lit(64.0) {
            return Err(domain(format!(
                "rho * max f = {peak} exceeds 1; edge probabilities would be invalid"
            )));
        }
        Ok(spec)
    }

    pub fn constant(level: T, rho: T) -> Result<Self> {
        Self::new(GraphonKind::Constant { level }, rho)
    }

    pub fn separable(g: Vec<T>, rho: T) -> Result<Self> {
        Self::new(GraphonKind::Separable { g }, rho)
    }

    pub fn block_constant(theta: Vec<T>, fractions: Vec<T>, rho: T) -> Result<Self> {
        Self::new(GraphonKind::BlockConstant { theta, fractions }, rho)
    }

    pub fn low_rank(lambdas: Vec<T>, components: Vec<Vec<T>>, rho: T) -> Result<Self> {
        Self::new(GraphonKind::LowRank { lambdas, components }, rho)
    }

    pub fn analytic_grid(m: usize, grid: Vec<T>, holder_exponent: Option<T>, rho: T) -> Result<Self> {
        Self::new(GraphonKind::AnalyticGrid { m, grid, holder_exponent }, rho)
    }

    /// Tabulates a symmetric function on an `m×m` lattice `{i/(m−1)}`.
    pub fn tabulate(m: usize, rho: T, f: impl Fn(T, T) -> T) -> Result<Self> {
        check_grid_len("graphon lattice", m)?;
        let step = T::one() / T::from_count(m - 1);
        let mut grid = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..=i {
                let v = f(T::from_count(i) * step, T::from_count(j) * step);
                grid[i * m + j] = v;
                grid[j * m + i] = v;
            }
        }
        Self::analytic_grid(m, grid, None, rho)
    }

    pub fn kind(&self) -> &GraphonKind<T> {
        &self.kind
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    /// Same shape with a different sparsity scale.
    pub fn with_rho(&self, rho: T) -> Result<Self> {
        Self::new(self.kind.clone(), rho)
    }

    /// Supremum of the unscaled graphon `f`.
    pub fn max_value(&self) -> T {
        let fold_max = |it: &mut dyn Iterator<Item = T>| it.fold(T::zero(), T::max);
        match &self.kind {
            GraphonKind::Constant { level } => *level,
            GraphonKind::Separable { g } => {
                let m = fold_max(&mut g.iter().copied());
                m * m
            }
            GraphonKind::BlockConstant { theta, .. } => fold_max(&mut theta.iter().copied()),
            GraphonKind::LowRank { lambdas, components } => {
                // piecewise linear in each argument, so the max sits on the lattice
                let m = components.iter().map(Vec::len).max().unwrap_or(2);
                let step = T::one() / T::from_count(m - 1);
                let mut best = T::zero();
                for i in 0..m {
                    for j in 0..=i {
                        let (x, y) = (T::from_count(i) * step, T::from_count(j) * step);
                        let v: T = lambdas
                            .iter()
                            .zip(components)
                            .map(|(&l, g)| l * (interp(g, x) * interp(g, y)))
                            .sum();
                        best = best.max(v);
                    }
                }
                best
            }
            GraphonKind::AnalyticGrid { grid, .. } => fold_max(&mut grid.iter().copied()),
        }
    }

    /// The unscaled graphon value `f(x, y)`.
    pub fn shape_value(&self, x: T, y: T) -> T {
        let (x, y) = {
            let x = x.max(T::zero()).min(T::one());
            let y = y.max(T::zero()).min(T::one());
            if x <= y { (x, y) } else { (y, x) }
        };
        match &self.kind {
            GraphonKind::Constant { level } => *level,
            GraphonKind::Separable { g } => interp(g, x) * interp(g, y),
            GraphonKind::BlockConstant { theta, fractions } => {
                let k = fractions.len();
                theta[block_of(fractions, x) * k + block_of(fractions, y)]
            }
            GraphonKind::LowRank { lambdas, components } => lambdas
                .iter()
                .zip(components)
                .map(|(&l, g)| l * (interp(g, x) * interp(g, y)))
                .sum(),
            GraphonKind::AnalyticGrid { m, grid, .. } => bilinear(grid, *m, x, y),
        }
    }

    /// Edge probability `ρₙ f(x, y)` (symmetric in its arguments, bit for bit).
    pub fn eval(&self, x: T, y: T) -> T {
        (self.rho * self.shape_value(x, y)).min(T::one())
    }
}

/// Index of the block containing `x` under cumulative widths `fractions`.
fn block_of<T: Scalar>(fractions: &[T], x: T) -> usize {
    let mut upper = T::zero();
    for (a, &w) in fractions.iter().enumerate() {
        upper += w;
        if x < upper {
            return a;
        }
    }
    fractions.len() - 1
}

fn bilinear<T: Scalar>(grid: &[T], m: usize, x: T, y: T) -> T {
    let last = m - 1;
    let locate = |v: T| {
        let pos = v * T::from_count(last);
        let i = pos.floor().to_usize().unwrap_or(0).min(last - 1);
        (i, pos - T::from_count(i))
    };
    let (i, tx) = locate(x);
    let (j, ty) = locate(y);
    let one = T::one();
    let g = |r: usize, c: usize| grid[r * m + c];
    (one - tx) * (one - ty) * g(i, j)
        + tx * (one - ty) * g(i + 1, j)
        + (one - tx) * ty * g(i, j + 1)
        + tx * ty * g(i + 1, j + 1)
}

/// Graphon entropy `∬ h(ρₙ f(x, y)) dx dy`.
///
/// Block-constant graphons use the exact closed form; every other kind uses a
/// tensor-product midpoint rule with `quad_points²` nodes.
pub fn graphon_entropy<T: Scalar>(spec: &GraphonSpec<T>, quad_points: usize) -> Result<T> {
    match spec.kind() {
        GraphonKind::BlockConstant { theta, fractions } => {
            let scaled: Vec<T> = theta.iter().map(|&t| (t * spec.rho()).min(T::one())).collect();
            Ok(block_entropy_fractions(&scaled, fractions))
        }
        GraphonKind::Constant { level } => Ok(binary_entropy_unchecked(*level * spec.rho())),
        _ => graphon_entropy_quadrature(spec, quad_points),
    }
}

/// Midpoint-rule entropy for any kind, never taking the closed-form shortcut.
pub fn graphon_entropy_quadrature<T: Scalar>(spec: &GraphonSpec<T>, quad_points: usize) -> Result<T> {
    if quad_points < 2 {
        return Err(domain(format!("quadrature needs at least 2 points, got {quad_points}")));
    }
    let m = quad_points;
    let nodes: Vec<T> = (0..m)
        .map(|i| (T::from_count(i) + T::lit(0.5)) / T::from_count(m))
        .collect();
    let rho = spec.rho();
    // separable shapes factor, so precompute the marginal values
    let factors: Option<Vec<Vec<T>>> = match spec.kind() {
        GraphonKind::Separable { g } => Some(vec![nodes.iter().map(|&x| interp(g, x)).collect()]),
        GraphonKind::LowRank { lambdas, components } => Some(
            lambdas
                .iter()
                .zip(components)
                .map(|(&l, g)| nodes.iter().map(|&x| l.sqrt() * interp(g, x)).collect())
                .collect(),
        ),
        _ => None,
    };
    let value_at = |i: usize, j: usize| -> T {
        let f = match &factors {
            Some(fs) => fs.iter().map(|v| v[i] * v[j]).sum(),
            None => spec.shape_value(nodes[i], nodes[j]),
        };
        binary_entropy_unchecked((rho * f).min(T::one()))
    };
    let mut off = CompensatedSum::new();
    let mut diag = CompensatedSum::new();
    for i in 0..m {
        diag.add(value_at(i, i));
        let mut row = CompensatedSum::new();
        for j in 0..i {
            row.add(value_at(i, j));
        }
        off.merge(&row);
    }
    let total = T::two() * off.value() + diag.value();
    Ok(total / (T::from_count(m) * T::from_count(m)))
}

/// `f₁(x, y) = 4xy`, represented exactly as the separable graphon with `g(x) = 2x`.
pub fn make_f1<T: Scalar>(rho: T) -> Result<GraphonSpec<T>> {
    GraphonSpec::separable(vec![T::zero(), T::two()], rho)
}

/// `f₂(x, y) = a0 + 4a1 Q(x)Q(y) + 4a1 (1−Q(x))(1−Q(y))`, `Q` the Beta(α₁, α₁) quantile,
/// tabulated on a `grid_points`-square lattice. Its marginal `∫ f₂(x, y) dy` is `a0 + 2a1`.
pub fn make_f2<T: Scalar>(a0: T, a1: T, alpha1: T, rho: T, grid_points: usize) -> Result<GraphonSpec<T>> {
    if !(a0 > T::zero()) || !(a1 >= T::zero()) || !(alpha1 > T::zero()) {
        return Err(domain(format!(
            "f2 needs a0 > 0, a1 >= 0, alpha1 > 0; got a0 = {a0}, a1 = {a1}, alpha1 = {alpha1}"
        )));
    }
    check_rho(rho)?;
    let peak = a0 + T::lit(4.0) * a1;
    if peak * rho > T::one() {
        return Err(domain(format!(
            "f2 peak a0 + 4 a1 = {peak} exceeds 1/rho = {}",
            T::one() / rho
        )));
    }
    if a1 == T::zero() {
        return GraphonSpec::constant(a0, rho);
    }
    check_grid_len("f2 lattice", grid_points)?;
    let m = grid_points;
    let step = T::one() / T::from_count(m - 1);
    let q: Vec<T> = (0..m)
        .map(|i| beta_quantile(T::from_count(i) * step, alpha1, alpha1))
        .collect::<Result<_>>()?;
    let four_a1 = T::lit(4.0) * a1;
    let one = T::one();
    GraphonSpec::tabulate_with(m, rho, |i, j| {
        a0 + four_a1 * (q[i] * q[j]) + four_a1 * ((one - q[i]) * (one - q[j]))
    })
}

impl<T: Scalar> GraphonSpec<T> {
    fn tabulate_with(m: usize, rho: T, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let mut grid = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..=i {
                let v = f(i, j);
                grid[i * m + j] = v;
                grid[j * m + i] = v;
            }
        }
        Self::analytic_grid(m, grid, None, rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{binary_entropy, block_entropy};
    use proptest::prelude::*;

    const LN2: f64 = std::f64::consts::LN_2;
    // ∬ h(xy) dx dy, series expansion cross-checked by mpmath quadrature
    const F1_QUARTER_TRUTH: f64 = 0.427_532_966_575_886_8;

    fn two_block() -> GraphonSpec<f64> {
        GraphonSpec::block_constant(vec![0.2, 0.5, 0.5, 0.8], vec![0.5, 0.5], 1.0).unwrap()
    }

    #[test]
    fn constant_eval() {
        let s = GraphonSpec::constant(0.3, 1.0).unwrap();
        assert_eq!(s.eval(0.1, 0.77), 0.3);
        assert!((graphon_entropy(&GraphonSpec::constant(0.5, 1.0).unwrap(), 8).unwrap() - LN2).abs() < 1e-15);
    }

    #[test]
    fn block_lookup() {
        assert_eq!(two_block().eval(0.1, 0.9), 0.5);
        assert_eq!(two_block().eval(0.9, 0.9), 0.8);
        assert_eq!(two_block().eval(0.0, 0.0), 0.2);
        assert_eq!(two_block().eval(1.0, 1.0), 0.8);
    }

    #[test]
    fn separable_constant_factor() {
        let s = GraphonSpec::separable(vec![2.0; 5], 0.25).unwrap();
        assert_eq!(s.eval(0.3, 0.6), 1.0);
    }

    #[test]
    fn construction_rejects_invalid_probabilities() {
        assert!(GraphonSpec::separable(vec![2.0; 5], 0.3).is_err());
        assert!(GraphonSpec::constant(0.5, 1.5).is_err());
        assert!(GraphonSpec::constant(0.5, 0.0).is_err());
        assert!(GraphonSpec::block_constant(vec![0.2, 0.5, 0.4, 0.8], vec![0.5, 0.5], 1.0).is_err());
        assert!(GraphonSpec::block_constant(vec![0.2, 0.5, 0.5, 0.8], vec![0.5, 0.6], 1.0).is_err());
        assert!(GraphonSpec::low_rank(vec![-0.1], vec![vec![1.0, 1.0]], 1.0).is_err());
        assert!(make_f1(0.3).is_err());
    }

    #[test]
    fn block_closed_form_example() {
        let v = graphon_entropy(&two_block(), 2).unwrap();
        assert!((v - 0.596_774_802_049_066_6).abs() < 1e-12);
    }

    #[test]
    fn f1_entropy_matches_series() {
        let sep = make_f1(0.25).unwrap();
        let v = graphon_entropy(&sep, DEFAULT_QUAD_POINTS).unwrap();
        assert!((v - F1_QUARTER_TRUTH).abs() < 5e-4, "{v}");
        // 4xy is bilinear, so a coarse lattice reproduces it exactly
        let grid = GraphonSpec::tabulate(3, 0.25_f64, |x, y| 4.0 * x * y).unwrap();
        assert!((grid.eval(0.3, 0.7) - 0.21).abs() < 1e-15);
        let g = graphon_entropy(&grid, DEFAULT_QUAD_POINTS).unwrap();
        assert!((g - F1_QUARTER_TRUTH).abs() < 5e-4, "{g}");
    }

    #[test]
    fn block_aligned_quadrature_equals_closed_form() {
        let spec = GraphonSpec::block_constant(
            vec![0.1, 0.4, 0.7, 0.4, 0.9, 0.3, 0.7, 0.3, 0.05],
            vec![0.25, 0.5, 0.25],
            0.9_f64,
        )
        .unwrap();
        let closed = graphon_entropy(&spec, 4).unwrap();
        let quad = graphon_entropy_quadrature(&spec, 64).unwrap();
        assert!((closed - quad).abs() < 1e-10, "{closed} vs {quad}");
    }

    #[test]
    fn block_relabeling_is_exactly_invariant() {
        let theta = vec![0.1, 0.4, 0.7, 0.4, 0.9, 0.3, 0.7, 0.3, 0.05];
        let fr = vec![0.2, 0.5, 0.3];
        let perm = [2usize, 0, 1];
        let mut theta_p = vec![0.0; 9];
        for a in 0..3 {
            for b in 0..3 {
                theta_p[a * 3 + b] = theta[perm[a] * 3 + perm[b]];
            }
        }
        let fr_p: Vec<f64> = perm.iter().map(|&a| fr[a]).collect();
        let s1 = GraphonSpec::block_constant(theta, fr, 1.0).unwrap();
        let s2 = GraphonSpec::block_constant(theta_p, fr_p, 1.0).unwrap();
        assert_eq!(
            graphon_entropy(&s1, 2).unwrap().to_bits(),
            graphon_entropy(&s2, 2).unwrap().to_bits()
        );
    }

    #[test]
    fn block_entropy_helpers_agree() {
        let theta = vec![0.2, 0.5, 0.5, 0.8];
        let a = block_entropy(&theta, &[30, 30], 60).unwrap();
        let b = graphon_entropy(&two_block(), 2).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!((binary_entropy(0.2).unwrap() * 0.25 + 0.5 * LN2 + 0.25 * binary_entropy(0.8).unwrap() - a).abs() < 1e-15);
    }

    #[test]
    fn f2_degenerates_to_constant() {
        let s = make_f2(0.3, 0.0, 3.0, 1.0, 33).unwrap();
        assert_eq!(s.kind().name(), "constant");
        assert_eq!(s.eval(0.2, 0.4), 0.3);
    }

    #[test]
    fn f2_marginal_is_flat() {
        let (a0, a1, al) = F2_DEFAULTS;
        let m = 257;
        let s = make_f2(a0, a1, al, 1.0, m).unwrap();
        let GraphonKind::AnalyticGrid { grid, .. } = s.kind() else { panic!("expected lattice") };
        for i in 0..m {
            // trapezoid rule over the lattice row
            let row = &grid[i * m..(i + 1) * m];
            let inner: f64 = row[1..m - 1].iter().sum();
            let integral = (inner + 0.5 * (row[0] + row[m - 1])) / (m - 1) as f64;
            assert!((integral - (a0 + 2.0 * a1)).abs() < 1e-6, "row {i}: {integral}");
        }
    }

    #[test]
    fn f2_point_symmetry() {
        let (a0, a1, al) = F2_DEFAULTS;
        let m = 129;
        let s = make_f2(a0, a1, al, 1.0, m).unwrap();
        for &(i, j) in &[(3usize, 100usize), (0, 64), (17, 17), (50, 128)] {
            let (x, y) = (i as f64 / 128.0, j as f64 / 128.0);
            assert!((s.eval(x, y) - s.eval(1.0 - x, 1.0 - y)).abs() < 1e-12);
        }
    }

    #[test]
    fn f2_rejects_invalid_parameters() {
        assert!(make_f2(0.5, 0.2, 3.0, 1.0, 33).is_err());
        assert!(make_f2(0.0, 0.1, 3.0, 1.0, 33).is_err());
        assert!(make_f2(0.2, 0.1, -1.0, 1.0, 33).is_err());
    }

    #[test]
    fn single_precision_entropy() {
        let s = make_f1(0.25_f32).unwrap();
        let v = graphon_entropy(&s, 512).unwrap();
        assert!((v as f64 - F1_QUARTER_TRUTH).abs() < 1e-3);
    }

    fn arb_spec() -> impl Strategy<Value = GraphonSpec<f64>> {
        prop_oneof![
            (0.01_f64..1.0).prop_map(|l| GraphonSpec::constant(l, 1.0).unwrap()),
            proptest::collection::vec(0.0_f64..1.0, 2..8)
                .prop_map(|g| GraphonSpec::separable(g, 1.0).unwrap()),
            (proptest::collection::vec(0.0_f64..1.0, 10), 0.1_f64..1.0).prop_map(|(v, rho)| {
                let theta = vec![v[0], v[1], v[2], v[1], v[3], v[4], v[2], v[4], v[5]];
                GraphonSpec::block_constant(theta, vec![0.2, 0.3, 0.5], rho).unwrap()
            }),
            (proptest::collection::vec(0.0_f64..0.7, 5), proptest::collection::vec(0.0_f64..0.7, 5))
                .prop_map(|(g1, g2)| GraphonSpec::low_rank(vec![1.0, 1.0], vec![g1, g2], 1.0).unwrap()),
            (0.0_f64..0.5).prop_map(|c| GraphonSpec::tabulate(9, 1.0, |x, y| c + 0.5 * x * y).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn eval_is_exactly_symmetric(spec in arb_spec(), x in 0.0_f64..=1.0, y in 0.0_f64..=1.0) {
            let a = spec.eval(x, y);
            prop_assert_eq!(a.to_bits(), spec.eval(y, x).to_bits());
            prop_assert!((0.0..=1.0).contains(&a));
        }

        #[test]
        fn entropy_within_bounds(spec in arb_spec()) {
            let v = graphon_entropy(&spec, 64).unwrap();
            prop_assert!((0.0..=LN2 + 1e-12).contains(&v));
        }
    }
}
