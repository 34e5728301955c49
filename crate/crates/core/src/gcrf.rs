//! Gaussian conditional random field with one unstructured predictor `R`
//! and one similarity matrix, learned and evaluated in a Laplacian
//! eigenbasis.
//!
//! With `Q = αI + βL` and `L ≈ U diag(μ̂) Uᵀ`, everything reduces to
//! per-coordinate arithmetic on `c = Uᵀy`, `r = UᵀR`:
//! `λ_i = α + β μ̂_i` and the mean coefficients are `m_i = α r_i / λ_i`.

use ndarray::{Array1, ArrayView1, Zip};

use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

/// Projected training data for one basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GcrfProblem {
    c: Array1<f64>,
    r: Array1<f64>,
    mu_hat: Array1<f64>,
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::NonPositiveParam { name: "alpha", value: alpha });
    }
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::NonPositiveParam { name: "beta", value: beta });
    }
    Ok(())
}

impl GcrfProblem {
    /// Problem from precomputed coordinates.
    pub fn new(c: Array1<f64>, r: Array1<f64>, mu_hat: Array1<f64>) -> Result<Self> {
        let n = c.len();
        for len in [r.len(), mu_hat.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, found: len });
            }
        }
        if let Some(&bad) = mu_hat.iter().find(|&&m| !(m >= 0.0)) {
            return Err(Error::InvalidArgument(format!("eigenvalue estimate {bad} is negative")));
        }
        Ok(Self { c, r, mu_hat })
    }

    /// Projects `y` and `R` onto `basis` once.
    pub fn build(basis: &SpectralBasis, y: ArrayView1<'_, f64>, r: ArrayView1<'_, f64>) -> Result<Self> {
        let c = basis.project(y)?;
        let r = basis.project(r)?;
        Self::new(c, r, basis.eigenvalues().clone())
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn c(&self) -> &Array1<f64> {
        &self.c
    }

    pub fn r(&self) -> &Array1<f64> {
        &self.r
    }

    pub fn mu_hat(&self) -> &Array1<f64> {
        &self.mu_hat
    }

    /// `log P(y | R)` for `Σ⁻¹ = 2Q`, including normalization constants.
    pub fn log_likelihood(&self, alpha: f64, beta: f64) -> Result<f64> {
        check_params(alpha, beta)?;
        let mut quad = 0.0;
        let mut logdet = 0.0;
        Zip::from(&self.c).and(&self.r).and(&self.mu_hat).for_each(|&c, &r, &mu| {
            let lambda = alpha + beta * mu;
            let d = c - alpha * r / lambda;
            quad += lambda * d * d;
            logdet += lambda.ln();
        });
        let n = self.len() as f64;
        Ok(-quad + 0.5 * logdet - 0.5 * n * std::f64::consts::PI.ln())
    }

    /// `(∂/∂α, ∂/∂β)` of [`log_likelihood`](Self::log_likelihood).
    pub fn gradients(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        check_params(alpha, beta)?;
        let mut ga = 0.0;
        let mut gb = 0.0;
        Zip::from(&self.c).and(&self.r).and(&self.mu_hat).for_each(|&c, &r, &mu| {
            let lambda = alpha + beta * mu;
            let m = alpha * r / lambda;
            ga += -c * c + 2.0 * r * c - 2.0 * r * m + m * m + 0.5 / lambda;
            gb += mu * (m * m - c * c) + 0.5 * mu / lambda;
        });
        Ok((ga, gb))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub initial_alpha: f64,
    pub initial_beta: f64,
    /// First step length in `(log α, log β)`.
    pub initial_step: f64,
    /// Stop when the per-node log-likelihood changes by less than this.
    pub tol: f64,
    pub max_iter: usize,
    /// Hold `β` at zero (unstructured model).
    pub fix_beta_zero: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            initial_alpha: 1.0,
            initial_beta: 1.0,
            initial_step: 0.1,
            tol: 1e-6,
            max_iter: 500,
            fix_beta_zero: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub final_loglik: f64,
    pub converged: bool,
    /// Log-likelihood at the start and after every accepted step.
    pub history: Vec<f64>,
}

/// Gradient ascent on `(u, v) = (log α, log β)` with step halving.
///
/// The objective is the log-likelihood divided by `N`, so the step length
/// does not depend on the problem size. A step is accepted when it does
/// not decrease the objective; otherwise it is halved and retried. After an
/// accepted move the step doubles again, up to its initial length, so one
/// early halving does not slow down the rest of the run.
pub fn fit(p: &GcrfProblem, opts: &FitOptions) -> Result<FitResult> {
    check_params(opts.initial_alpha, opts.initial_beta)?;
    if p.is_empty() {
        return Err(Error::InvalidArgument("empty problem".into()));
    }
    let n = p.len() as f64;
    let objective = |u: f64, v: Option<f64>| -> Option<f64> {
        let ll = p.log_likelihood(u.exp(), v.map_or(0.0, f64::exp)).ok()? / n;
        ll.is_finite().then_some(ll)
    };

    let mut u = opts.initial_alpha.ln();
    let mut v = (!opts.fix_beta_zero).then(|| opts.initial_beta.ln());
    let mut current = objective(u, v)
        .ok_or_else(|| Error::InvalidArgument("log-likelihood not finite at the start point".into()))?;
    let mut history = vec![current * n];
    let mut step = opts.initial_step;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        let (alpha, beta) = (u.exp(), v.map_or(0.0, f64::exp));
        let (ga, gb) = p.gradients(alpha, beta)?;
        let gu = alpha * ga / n;
        let gv = v.map(|_| beta * gb / n);

        let accepted = loop {
            let cu = u + step * gu;
            let cv = v.zip(gv).map(|(v, g)| v + step * g);
            match objective(cu, cv) {
                Some(next) if next >= current => break Some((cu, cv, next)),
                _ => {
                    step *= 0.5;
                    if step < 1e-16 {
                        break None;
                    }
                }
            }
        };
        let Some((cu, cv, next)) = accepted else {
            converged = true;
            break;
        };
        let delta = next - current;
        step = (step * 2.0).min(opts.initial_step);
        u = cu;
        v = cv;
        current = next;
        history.push(current * n);
        if delta.abs() < opts.tol {
            converged = true;
            break;
        }
    }

    Ok(FitResult {
        alpha: u.exp(),
        beta: v.map_or(0.0, f64::exp),
        iterations,
        final_loglik: current * n,
        converged,
        history,
    })
}

/// GCRF mean `(αI + βL)⁻¹ α R` evaluated in the basis.
pub fn predict(basis: &SpectralBasis, alpha: f64, beta: f64, r: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
    check_params(alpha, beta)?;
    let mut coeffs = basis.project(r)?;
    Zip::from(&mut coeffs)
        .and(basis.eigenvalues())
        .for_each(|x, &mu| *x *= alpha / (alpha + beta * mu));
    basis.back_project(coeffs.view())
}

/// Mean squared error.
pub fn mse(yhat: ArrayView1<'_, f64>, y: ArrayView1<'_, f64>) -> Result<f64> {
    if yhat.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: y.len(), found: yhat.len() });
    }
    if y.is_empty() {
        return Err(Error::InvalidArgument("empty vectors".into()));
    }
    let sum: f64 = yhat.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / y.len() as f64)
}
