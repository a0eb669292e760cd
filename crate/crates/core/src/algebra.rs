//! Gonosomal algebras given by their structure constants.
//!
//! Storage is 0-based; documentation and messages use 1-based indices.
//! For an algebra of type `(n, ν)` the female basis is `e_1..e_n`, the male
//! basis `ẽ_1..ẽ_ν`, same-sex products vanish and
//!
//! ```text
//! e_i ẽ_j = Σ_k γ_ijk e_k + Σ_r γ̃_ijr ẽ_r,   Σ_k γ_ijk + Σ_r γ̃_ijr = 1.
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GonosomalError, Result};
use crate::linalg::Matrix;
use crate::scalar::{l1, Scalar};

/// Element `Σ x_i e_i + Σ y_j ẽ_j` of a gonosomal algebra.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Element<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> Element<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Self {
        Self { x, y }
    }

    pub fn zeros(n: usize, nu: usize) -> Self {
        Self::new(vec![T::zero(); n], vec![T::zero(); nu])
    }

    /// Female basis element `e_i` (0-based `i`).
    pub fn female(n: usize, nu: usize, i: usize) -> Self {
        let mut e = Self::zeros(n, nu);
        e.x[i] = T::one();
        e
    }

    /// Male basis element `ẽ_j` (0-based `j`).
    pub fn male(n: usize, nu: usize, j: usize) -> Self {
        let mut e = Self::zeros(n, nu);
        e.y[j] = T::one();
        e
    }

    /// Splits a concatenated coordinate vector `(x, y)` after `n` entries.
    pub fn from_concat(n: usize, v: &[T]) -> Self {
        Self::new(v[..n].to_vec(), v[n..].to_vec())
    }

    /// Uniform draw from the simplex `ϖ = 1`, deterministic in `seed`.
    pub fn random_simplex(n: usize, nu: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // normalized exponentials are uniform on the simplex
        let e: Vec<f64> = (0..n + nu).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = e.iter().sum();
        Self::from_concat(n, &e.iter().map(|v| T::lit(v / s)).collect::<Vec<_>>())
    }

    /// The same coordinates read in the opposite algebra: `(x, y) ↦ (y, x)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone())
    }

    pub fn to_concat(&self) -> Vec<T> {
        let mut v = self.x.clone();
        v.extend_from_slice(&self.y);
        v
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn nu(&self) -> usize {
        self.y.len()
    }

    pub fn dim(&self) -> usize {
        self.x.len() + self.y.len()
    }

    /// The linear form ϖ: sum of all coordinates.
    pub fn omega(&self) -> T {
        self.x.iter().copied().sum::<T>() + self.y.iter().copied().sum::<T>()
    }

    pub fn female_mass(&self) -> T {
        self.x.iter().copied().sum()
    }

    pub fn male_mass(&self) -> T {
        self.y.iter().copied().sum()
    }

    pub fn l1_norm(&self) -> T {
        l1(&self.x) + l1(&self.y)
    }

    pub fn l1_dist(&self, other: &Self) -> T {
        self.sub(other).l1_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.x.iter().zip(&other.x).map(|(a, b)| *a + *b).collect(),
            self.y.iter().zip(&other.y).map(|(a, b)| *a + *b).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.x.iter().zip(&other.x).map(|(a, b)| *a - *b).collect(),
            self.y.iter().zip(&other.y).map(|(a, b)| *a - *b).collect(),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(
            self.x.iter().map(|a| *a * s).collect(),
            self.y.iter().map(|a| *a * s).collect(),
        )
    }

    /// Every coordinate exactly zero.
    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.y).all(|a| *a == T::zero())
    }

    /// Membership in `O`: all female or all male coordinates exactly zero.
    pub fn in_o(&self) -> bool {
        self.x.iter().all(|a| *a == T::zero()) || self.y.iter().all(|a| *a == T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|a| a.is_finite())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.x.iter().chain(&self.y).all(|a| *a >= T::zero())
    }

    /// Checks simplex membership: non-negative with coordinate sum 1 within `tol`.
    pub fn check_simplex(&self, tol: T) -> Result<()> {
        if let Some(a) = self
            .x
            .iter()
            .chain(&self.y)
            .find(|a| **a < T::zero() || !a.is_finite())
        {
            return Err(GonosomalError::NotInSimplex(format!(
                "coordinate {a} is negative or not finite"
            )));
        }
        let s = self.omega();
        if (s - T::one()).abs() > tol {
            return Err(GonosomalError::NotInSimplex(format!(
                "coordinates sum to {s}, expected 1"
            )));
        }
        Ok(())
    }
}

/// One offending entry found by [`AlgebraSpec::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The row of `e_i ẽ_j` does not sum to 1 (1-based indices).
    RowSum { i: usize, j: usize, sum: f64 },
    /// A negative structure constant (1-based indices).
    NegativeGamma {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
    NegativeGammaTilde {
        i: usize,
        j: usize,
        r: usize,
        value: f64,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::RowSum { i, j, sum } => write!(f, "row e{i}ẽ{j} sums to {sum}, expected 1"),
            Violation::NegativeGamma { i, j, k, value } => write!(f, "gamma[{i}][{j}][{k}] = {value} < 0"),
            Violation::NegativeGammaTilde { i, j, r, value } => {
                write!(f, "gamma_tilde[{i}][{j}][{r}] = {value} < 0")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_gonosomal: bool,
    pub is_stochastic: bool,
    pub violations: Vec<Violation>,
}

/// On-disk layout: `gamma[i][j][k]`, `gamma_tilde[i][j][r]`, female index outermost.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
pub struct AlgebraFile<T> {
    pub n: usize,
    pub nu: usize,
    pub gamma: Vec<Vec<Vec<T>>>,
    pub gamma_tilde: Vec<Vec<Vec<T>>>,
}

/// Structure constants of a gonosomal algebra of type `(n, ν)`.
///
/// Shapes are checked at construction, so every value of this type has
/// consistent dimensions. The sum constraint is *not* enforced; use
/// [`AlgebraSpec::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraFile<T>", into = "AlgebraFile<T>", bound = "T: Scalar")]
pub struct AlgebraSpec<T> {
    n: usize,
    nu: usize,
    gamma: Vec<T>,
    gamma_tilde: Vec<T>,
}

impl<T: Scalar> TryFrom<AlgebraFile<T>> for AlgebraSpec<T> {
    type Error = GonosomalError;
    fn try_from(f: AlgebraFile<T>) -> Result<Self> {
        Self::new(f.n, f.nu, &f.gamma, &f.gamma_tilde)
    }
}

impl<T: Scalar> From<AlgebraSpec<T>> for AlgebraFile<T> {
    fn from(s: AlgebraSpec<T>) -> Self {
        let (n, nu) = (s.n, s.nu);
        AlgebraFile {
            n,
            nu,
            gamma: (0..n)
                .map(|i| {
                    (0..nu)
                        .map(|j| (0..n).map(|k| s.gamma(i, j, k)).collect())
                        .collect()
                })
                .collect(),
            gamma_tilde: (0..n)
                .map(|i| {
                    (0..nu)
                        .map(|j| (0..nu).map(|r| s.gamma_tilde(i, j, r)).collect())
                        .collect()
                })
                .collect(),
        }
    }
}

fn flatten3<T: Scalar>(name: &str, t: &[Vec<Vec<T>>], a: usize, b: usize, c: usize) -> Result<Vec<T>> {
    let shape_err = || GonosomalError::ShapeMismatch(format!("{name} must have shape [{a}][{b}][{c}]"));
    if t.len() != a {
        return Err(shape_err());
    }
    let mut out = Vec::with_capacity(a * b * c);
    for plane in t {
        if plane.len() != b {
            return Err(shape_err());
        }
        for row in plane {
            if row.len() != c {
                return Err(shape_err());
            }
            out.extend_from_slice(row);
        }
    }
    Ok(out)
}

impl<T: Scalar> AlgebraSpec<T> {
    /// Builds a spec from nested tensors shaped `[n][ν][n]` and `[n][ν][ν]`.
    pub fn new(n: usize, nu: usize, gamma: &[Vec<Vec<T>>], gamma_tilde: &[Vec<Vec<T>>]) -> Result<Self> {
        if n == 0 || nu == 0 {
            return Err(GonosomalError::ShapeMismatch(
                "n and nu must both be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            nu,
            gamma: flatten3("gamma", gamma, n, nu, n)?,
            gamma_tilde: flatten3("gamma_tilde", gamma_tilde, n, nu, nu)?,
        })
    }

    /// Builds a spec from row data: `rows[i][j]` is the coefficient vector of
    /// `e_i ẽ_j`, female part first (length `n + ν`).
    pub fn from_rows(n: usize, nu: usize, rows: &[Vec<Vec<T>>]) -> Result<Self> {
        let bad = || GonosomalError::ShapeMismatch(format!("rows must have shape [{n}][{nu}][{}]", n + nu));
        if n == 0 || nu == 0 || rows.len() != n {
            return Err(bad());
        }
        let mut gamma = Vec::with_capacity(n * nu * n);
        let mut gamma_tilde = Vec::with_capacity(n * nu * nu);
        for plane in rows {
            if plane.len() != nu {
                return Err(bad());
            }
            for row in plane {
                if row.len() != n + nu {
                    return Err(bad());
                }
                gamma.extend_from_slice(&row[..n]);
                gamma_tilde.extend_from_slice(&row[n..]);
            }
        }
        Ok(Self {
            n,
            nu,
            gamma,
            gamma_tilde,
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| GonosomalError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.n + self.nu
    }

    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> T {
        self.gamma[(i * self.nu + j) * self.n + k]
    }

    #[inline]
    pub fn gamma_tilde(&self, i: usize, j: usize, r: usize) -> T {
        self.gamma_tilde[(i * self.nu + j) * self.nu + r]
    }

    /// `γ_ij = Σ_k γ_ijk`, the female share of the offspring of `e_i ẽ_j`.
    pub fn female_share(&self, i: usize, j: usize) -> T {
        (0..self.n).map(|k| self.gamma(i, j, k)).sum()
    }

    /// `γ̃_ij = Σ_r γ̃_ijr`.
    pub fn male_share(&self, i: usize, j: usize) -> T {
        (0..self.nu).map(|r| self.gamma_tilde(i, j, r)).sum()
    }

    pub fn row_sum(&self, i: usize, j: usize) -> T {
        self.female_share(i, j) + self.male_share(i, j)
    }

    /// Coefficient vector of `e_i ẽ_j`, female part first.
    pub fn row(&self, i: usize, j: usize) -> Vec<T> {
        (0..self.n)
            .map(|k| self.gamma(i, j, k))
            .chain((0..self.nu).map(|r| self.gamma_tilde(i, j, r)))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        let mut gonosomal = true;
        for i in 0..self.n {
            for j in 0..self.nu {
                let s = self.row_sum(i, j);
                if (s - T::one()).abs() > T::CONSTRAINT_TOL || !s.is_finite() {
                    gonosomal = false;
                    violations.push(Violation::RowSum {
                        i: i + 1,
                        j: j + 1,
                        sum: s.as_f64(),
                    });
                }
            }
        }
        let mut nonneg = true;
        for i in 0..self.n {
            for j in 0..self.nu {
                for k in 0..self.n {
                    let v = self.gamma(i, j, k);
                    if v < -T::SIGN_NOISE {
                        nonneg = false;
                        violations.push(Violation::NegativeGamma {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            value: v.as_f64(),
                        });
                    }
                }
                for r in 0..self.nu {
                    let v = self.gamma_tilde(i, j, r);
                    if v < -T::SIGN_NOISE {
                        nonneg = false;
                        violations.push(Violation::NegativeGammaTilde {
                            i: i + 1,
                            j: j + 1,
                            r: r + 1,
                            value: v.as_f64(),
                        });
                    }
                }
            }
        }
        ValidationReport {
            is_gonosomal: gonosomal,
            is_stochastic: gonosomal && nonneg,
            violations,
        }
    }

    pub fn is_stochastic(&self) -> bool {
        self.validate().is_stochastic
    }

    /// Errors with `NotStochastic` unless the algebra is a gonosomal stochastic algebra.
    pub fn require_stochastic(&self) -> Result<()> {
        let r = self.validate();
        if r.is_stochastic {
            Ok(())
        } else {
            Err(GonosomalError::NotStochastic(format!(
                "{:?}",
                r.violations.first()
            )))
        }
    }

    pub fn check_element(&self, a: &Element<T>) -> Result<()> {
        if a.n() != self.n || a.nu() != self.nu {
            return Err(GonosomalError::ShapeMismatch(format!(
                "element has type ({}, {}), algebra has type ({}, {})",
                a.n(),
                a.nu(),
                self.n,
                self.nu
            )));
        }
        Ok(())
    }

    /// Product in the algebra. Commutative by construction.
    pub fn multiply(&self, a: &Element<T>, b: &Element<T>) -> Result<Element<T>> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub(crate) fn mul_unchecked(&self, a: &Element<T>, b: &Element<T>) -> Element<T> {
        let mut out = Element::zeros(self.n, self.nu);
        for i in 0..self.n {
            for j in 0..self.nu {
                let w = a.x[i] * b.y[j] + a.y[j] * b.x[i];
                if w == T::zero() {
                    continue;
                }
                for k in 0..self.n {
                    out.x[k] += w * self.gamma(i, j, k);
                }
                for r in 0..self.nu {
                    out.y[r] += w * self.gamma_tilde(i, j, r);
                }
            }
        }
        out
    }

    /// Structure constants in the basis `a_i = Σ_j α_ji e_j`, `ã_p = Σ_q α̃_qp ẽ_q`.
    pub fn change_basis(&self, bc: &BasisChange<T>) -> Result<Self> {
        let (n, nu) = (self.n, self.nu);
        if bc.alpha.rows() != n || bc.alpha_tilde.rows() != nu {
            return Err(GonosomalError::ShapeMismatch(format!(
                "basis change is for type ({}, {}), algebra has type ({n}, {nu})",
                bc.alpha.rows(),
                bc.alpha_tilde.rows()
            )));
        }
        let ainv = bc
            .alpha
            .inverse()
            .ok_or(GonosomalError::SingularBasisChange { det: 0.0 })?;
        let atinv = bc
            .alpha_tilde
            .inverse()
            .ok_or(GonosomalError::SingularBasisChange { det: 0.0 })?;
        let mut gamma = vec![T::zero(); n * nu * n];
        let mut gamma_tilde = vec![T::zero(); n * nu * nu];
        for i in 0..n {
            for p in 0..nu {
                // a_i ã_p expressed in the old basis.
                let mut old = Element::zeros(n, nu);
                for j in 0..n {
                    for q in 0..nu {
                        let w = bc.alpha[(j, i)] * bc.alpha_tilde[(q, p)];
                        for k in 0..n {
                            old.x[k] += w * self.gamma(j, q, k);
                        }
                        for r in 0..nu {
                            old.y[r] += w * self.gamma_tilde(j, q, r);
                        }
                    }
                }
                let new_x = ainv.mul_vec(&old.x);
                let new_y = atinv.mul_vec(&old.y);
                gamma[(i * nu + p) * n..(i * nu + p + 1) * n].copy_from_slice(&new_x);
                gamma_tilde[(i * nu + p) * nu..(i * nu + p + 1) * nu].copy_from_slice(&new_y);
            }
        }
        Ok(Self {
            n,
            nu,
            gamma,
            gamma_tilde,
        })
    }

    /// The opposite algebra of type `(ν, n)`: males and females trade roles.
    pub fn opposite(&self) -> Self {
        let (n, nu) = (self.nu, self.n);
        let mut gamma = vec![T::zero(); n * nu * n];
        let mut gamma_tilde = vec![T::zero(); n * nu * nu];
        for i in 0..n {
            for p in 0..nu {
                for k in 0..n {
                    gamma[(i * nu + p) * n + k] = self.gamma_tilde(p, i, k);
                }
                for r in 0..nu {
                    gamma_tilde[(i * nu + p) * nu + r] = self.gamma(p, i, r);
                }
            }
        }
        Self {
            n,
            nu,
            gamma,
            gamma_tilde,
        }
    }

    /// Random stochastic algebra: each row of `e_i ẽ_j` is `n + ν` uniforms
    /// divided by their sum. Deterministic in `seed`.
    pub fn random_stochastic(n: usize, nu: usize, seed: u64) -> Result<Self> {
        if n == 0 || nu == 0 {
            return Err(GonosomalError::ShapeMismatch(
                "n and nu must both be at least 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut gamma = Vec::with_capacity(n * nu * n);
        let mut gamma_tilde = Vec::with_capacity(n * nu * nu);
        for _ in 0..n * nu {
            let u: Vec<f64> = (0..n + nu).map(|_| rng.gen::<f64>()).collect();
            let s: f64 = u.iter().sum();
            gamma.extend(u[..n].iter().map(|v| T::lit(v / s)));
            gamma_tilde.extend(u[n..].iter().map(|v| T::lit(v / s)));
        }
        Ok(Self {
            n,
            nu,
            gamma,
            gamma_tilde,
        })
    }
}

/// Change of gonosomal basis. Columns of both matrices sum to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BasisChange<T> {
    alpha: Matrix<T>,
    alpha_tilde: Matrix<T>,
}

impl<T: Scalar> BasisChange<T> {
    pub fn new(alpha: Matrix<T>, alpha_tilde: Matrix<T>) -> Result<Self> {
        for (name, m) in [("alpha", &alpha), ("alpha_tilde", &alpha_tilde)] {
            if m.rows() != m.cols() || m.rows() == 0 {
                return Err(GonosomalError::ShapeMismatch(format!("{name} must be square")));
            }
            for c in 0..m.cols() {
                let s: T = (0..m.rows()).map(|r| m[(r, c)]).sum();
                if (s - T::one()).abs() > T::CONSTRAINT_TOL {
                    return Err(GonosomalError::InvalidBasisChange {
                        matrix: name,
                        column: c + 1,
                        sum: s.as_f64(),
                    });
                }
            }
            let det = m.determinant();
            if det.abs() < T::EQ_TOL {
                return Err(GonosomalError::SingularBasisChange { det: det.as_f64() });
            }
        }
        Ok(Self { alpha, alpha_tilde })
    }

    pub fn identity(n: usize, nu: usize) -> Self {
        Self {
            alpha: Matrix::identity(n),
            alpha_tilde: Matrix::identity(nu),
        }
    }

    pub fn alpha(&self) -> &Matrix<T> {
        &self.alpha
    }

    pub fn alpha_tilde(&self) -> &Matrix<T> {
        &self.alpha_tilde
    }

    /// The change equal to applying `self` first and then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        Self::new(
            self.alpha.mul(&next.alpha)?,
            self.alpha_tilde.mul(&next.alpha_tilde)?,
        )
    }

    /// Random invertible change with positive column-stochastic matrices.
    pub fn random(n: usize, nu: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut col_stochastic = |d: usize| {
                let draws: Vec<f64> = (0..d * d).map(|_| rng.gen()).collect();
                let mut m = Matrix::from_fn(d, d, |i, j| {
                    let base = if i == j { 2.0 } else { 0.0 };
                    T::lit(base + draws[i * d + j])
                });
                for c in 0..d {
                    let s: T = (0..d).map(|r| m[(r, c)]).sum();
                    for r in 0..d {
                        m[(r, c)] /= s;
                    }
                }
                m
            };
            let a = col_stochastic(n);
            let at = col_stochastic(nu);
            if let Ok(bc) = Self::new(a, at) {
                return bc;
            }
        }
    }
}

/// LR/R algebra `eẽ = γe + (1−γ)ẽ` of type (1, 1).
pub fn type11<T: Scalar>(gamma: T) -> AlgebraSpec<T> {
    AlgebraSpec::from_rows(1, 1, &[vec![vec![gamma, T::one() - gamma]]]).expect("static shape")
}
