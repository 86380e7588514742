//! Unital norms and uncurling metrics for the spin factor algebra.
//!
//! A symmetric matrix `L` is an uncurling metric when the field
//! `s ↦ L s⁻¹` is curl-free, i.e. when `L·J(s)` is symmetric for the
//! Jacobian `J` of the inversion map. If in addition `s'L s⁻¹ = ‖1‖²`, the
//! path integral
//!
//! ```text
//! u(s) = exp( (1/‖1‖²) ∫_1^s [L t⁻¹]·dt )
//! ```
//!
//! is independent of path and degree-1 homogeneous. Pairings `·` here are
//! Euclidean.
//!
//! [`solve_uncurling`] finds `L` numerically from sampled constraints;
//! [`unital_norm`] evaluates the integral by composite Gauss–Legendre
//! quadrature along the straight segment from `1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::rng::XorShift64Star;
use crate::spinfactor::{Signature, SpinFactorElement};

pub const DEFAULT_STEPS: usize = 1024;
pub const DEFAULT_Q_FLOOR: f64 = 0.05;

/// Relative step for central finite differences.
pub const FD_STEP: f64 = 1e-5;

// 8-point Gauss–Legendre rule on [-1, 1].
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// A symmetric candidate metric `L` with its normalization `‖1‖²`.
///
/// Only the upper triangle is stored, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UncurlingCandidate {
    upper: Vec<f64>,
    dim: usize,
    unit_norm_sq: f64,
    signature: Signature,
}

fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl UncurlingCandidate {
    /// Builds a candidate from a full matrix, which must be symmetric to
    /// within `1e-12` relative.
    pub fn from_matrix(signature: Signature, l: &DMatrix<f64>, unit_norm_sq: f64) -> Result<Self> {
        let dim = signature.algebra_dim();
        if l.nrows() != dim || l.ncols() != dim {
            return Err(Error::InvalidConfig(format!(
                "metric must be {dim}x{dim}, got {}x{}",
                l.nrows(),
                l.ncols()
            )));
        }
        let scale = l.amax().max(1.0);
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                if (l[(i, j)] - l[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidConfig(format!(
                        "metric is not symmetric at ({i},{j})"
                    )));
                }
                upper.push(0.5 * (l[(i, j)] + l[(j, i)]));
            }
        }
        Ok(Self {
            upper,
            dim,
            unit_norm_sq,
            signature,
        })
    }

    pub fn identity(signature: Signature) -> Self {
        let dim = signature.algebra_dim();
        Self::from_matrix(signature, &DMatrix::identity(dim, dim), 1.0)
            .expect("identity is symmetric")
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.dim, i, j)]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.entry(i, j))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit_norm_sq(&self) -> f64 {
        self.unit_norm_sq
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// `L x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j) * x[j]).sum())
            .collect()
    }

    /// `x' L y`.
    pub fn pair(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(x, &self.apply(y))
    }

    /// `max |L J(s) − (L J(s))'|`: zero exactly when the field `L s⁻¹` is
    /// curl-free at `s`.
    pub fn curl_residual(&self, s: &SpinFactorElement) -> Result<f64> {
        let m = self.matrix() * inverse_field_jacobian(s)?;
        Ok((&m - m.transpose()).amax())
    }

    /// `|s' L s⁻¹ − ‖1‖²|`.
    pub fn homogeneity_residual(&self, s: &SpinFactorElement) -> Result<f64> {
        let inv = s.inverse()?.coords();
        Ok((self.pair(&s.coords(), &inv) - self.unit_norm_sq).abs())
    }

    /// Largest curl or homogeneity residual over `points`.
    pub fn max_residual<'a>(
        &self,
        points: impl IntoIterator<Item = &'a SpinFactorElement>,
    ) -> Result<f64> {
        let mut worst = 0.0f64;
        for s in points {
            worst = worst
                .max(self.curl_residual(s)?)
                .max(self.homogeneity_residual(s)?);
        }
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub sample_count: usize,
    /// Half-width of the sampling box around `1`.
    pub box_radius: f64,
    /// Minimum quadratic form accepted for samples and path nodes.
    pub q_floor: f64,
    /// Singular values below `svd_threshold × σ_max` count as zero.
    pub svd_threshold: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            sample_count: 200,
            box_radius: 0.4,
            q_floor: DEFAULT_Q_FLOOR,
            svd_threshold: 1e-8,
            seed: 42,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.box_radius > 0.0 && self.box_radius < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "box_radius must lie in (0, 1), got {}",
                self.box_radius
            )));
        }
        if !(self.q_floor > 0.0 && self.q_floor.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "q_floor must be positive, got {}",
                self.q_floor
            )));
        }
        if !(self.svd_threshold > 0.0 && self.svd_threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "svd_threshold must lie in (0, 1), got {}",
                self.svd_threshold
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub path_steps: usize,
    /// Bound on the change in `value` when the step count is doubled.
    pub residual_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncurlingSolution {
    /// Dimension of the space of symmetric `L` making `L s⁻¹` curl-free.
    pub curl_nullspace_dim: usize,
    /// Dimension of the affine family left after the homogeneity and
    /// normalization constraints (0 means the solution is unique).
    pub solution_family_dim: usize,
    pub metric: UncurlingCandidate,
    /// Largest residual over all assembled constraints.
    pub constraint_residual: f64,
    /// Singular values of the curl constraint matrix, descending.
    pub curl_singular_values: Vec<f64>,
    pub samples: Vec<SpinFactorElement>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fourth-order central-difference gradient with step
/// `FD_STEP · max(1, |x_i|)`.
pub fn central_gradient(f: impl Fn(&[f64]) -> Result<f64>, x: &[f64]) -> Result<Vec<f64>> {
    let mut grad = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    let at = |i: usize, offset: f64, probe: &mut Vec<f64>| {
        probe[i] = x[i] + offset;
        let v = f(probe);
        probe[i] = x[i];
        v
    };
    for (i, xi) in x.iter().enumerate() {
        let h = FD_STEP * xi.abs().max(1.0);
        let (p1, m1) = (at(i, h, &mut probe)?, at(i, -h, &mut probe)?);
        let (p2, m2) = (at(i, 2.0 * h, &mut probe)?, at(i, -2.0 * h, &mut probe)?);
        grad.push((8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h));
    }
    Ok(grad)
}

/// `ℓ(s) = √(s'Ls)`.
pub fn bilinear_norm(l: &DMatrix<f64>, s: &[f64]) -> Result<f64> {
    let v = DVector::from_column_slice(s);
    let q = v.dot(&(l * &v));
    if q > 0.0 {
        Ok(q.sqrt())
    } else {
        Err(Error::NonPositiveForm(q))
    }
}

/// `max |Ls − ℓ(s)∇ℓ(s)|` with `∇ℓ` from central differences.
pub fn bilinear_norm_residual(l: &DMatrix<f64>, s: &[f64]) -> Result<f64> {
    let ell = bilinear_norm(l, s)?;
    let grad = central_gradient(|x| bilinear_norm(l, x), s)?;
    let ls = l * DVector::from_column_slice(s);
    Ok(ls
        .iter()
        .zip(&grad)
        .fold(0.0f64, |m, (a, g)| m.max((a - ell * g).abs())))
}

/// Closed-form Jacobian of `s ↦ s⁻¹ = (σ, −a)/Q` in algebra coordinates.
pub fn inverse_field_jacobian(s: &SpinFactorElement) -> Result<DMatrix<f64>> {
    if !s.is_unit() {
        return Err(Error::NullElement {
            quadratic_form: s.quadratic_form(),
        });
    }
    let sig = s.signature();
    let q = s.quadratic_form();
    let (q1, q2) = (1.0 / q, 1.0 / (q * q));
    let sigma = s.scalar();
    let a = s.vector();
    let n = sig.algebra_dim();
    let mut j = DMatrix::zeros(n, n);
    j[(0, 0)] = q1 - 2.0 * sigma * sigma * q2;
    for k in 0..a.len() {
        let g: f64 = sig.metric(k);
        j[(0, k + 1)] = 2.0 * sigma * g * a[k] * q2;
        j[(k + 1, 0)] = 2.0 * sigma * a[k] * q2;
        for m in 0..a.len() {
            let gm: f64 = sig.metric(m);
            let delta = if k == m { q1 } else { 0.0 };
            j[(k + 1, m + 1)] = -delta - 2.0 * gm * a[k] * a[m] * q2;
        }
    }
    Ok(j)
}

/// Draws `cfg.sample_count` units `1 + u`, `u` uniform in the box, keeping
/// only those with `Q ≥ q_floor`.
pub fn sample_units(
    sig: Signature,
    cfg: &SolverConfig,
    rng: &mut XorShift64Star,
) -> Result<Vec<SpinFactorElement>> {
    let max_attempts = 1000 * cfg.sample_count.max(1);
    let mut out = Vec::with_capacity(cfg.sample_count);
    let mut attempts = 0;
    while out.len() < cfg.sample_count {
        if attempts == max_attempts {
            return Err(Error::SamplingFailure {
                wanted: cfg.sample_count,
                q_floor: cfg.q_floor,
                attempts,
            });
        }
        attempts += 1;
        let mut c = rng.uniform_vec(sig.algebra_dim(), -cfg.box_radius, cfg.box_radius);
        c[0] += 1.0;
        let s = SpinFactorElement::from_coords(sig, &c)?;
        if s.quadratic_form() >= cfg.q_floor {
            out.push(s);
        }
    }
    Ok(out)
}

/// Symmetric unit matrices spanning the free entries of `L`, in packed order.
fn symmetric_basis(dim: usize) -> Vec<DMatrix<f64>> {
    let mut basis = Vec::with_capacity(dim * (dim + 1) / 2);
    for i in 0..dim {
        for j in i..dim {
            let mut e = DMatrix::zeros(dim, dim);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            basis.push(e);
        }
    }
    basis
}

/// SVD of `a`, zero-padded so that a full set of right singular vectors is
/// available. Returns (singular values, V') sorted by descending value.
fn full_svd(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let a = if a.nrows() < a.ncols() {
        a.clone().resize_vertically(a.ncols(), 0.0)
    } else {
        a.clone()
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V'");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let values = order.iter().map(|&k| svd.singular_values[k]).collect();
    let rows = DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
    (values, rows)
}

/// Finds a symmetric `L` with `L s⁻¹` curl-free, `s'L s⁻¹ = 1` and
/// `1'L1 = 1`, from constraints sampled around `1`.
pub fn solve_uncurling(sig: Signature, cfg: &SolverConfig) -> Result<UncurlingSolution> {
    cfg.validate()?;
    if cfg.sample_count == 0 {
        return Err(Error::EmptySolution(
            "no samples, so no constraints were assembled".into(),
        ));
    }
    let unit_norm_sq = 1.0;
    let dim = sig.algebra_dim();
    let mut rng = XorShift64Star::new(cfg.seed);
    let samples = sample_units(sig, cfg, &mut rng)?;
    let basis = symmetric_basis(dim);

    // Curl constraints: for each sample, the antisymmetric part of L·J(s)
    // vanishes. Linear in the packed entries of L.
    let pairs: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect();
    let mut curl = DMatrix::zeros(samples.len() * pairs.len(), basis.len());
    for (n, s) in samples.iter().enumerate() {
        let jac = inverse_field_jacobian(s)?;
        for (col, e) in basis.iter().enumerate() {
            let m = e * &jac;
            for (r, &(i, j)) in pairs.iter().enumerate() {
                curl[(n * pairs.len() + r, col)] = m[(i, j)] - m[(j, i)];
            }
        }
    }
    let (curl_sv, curl_vt) = full_svd(&curl);
    let cutoff = cfg.svd_threshold * curl_sv.first().copied().unwrap_or(0.0);
    let null: Vec<DMatrix<f64>> = curl_sv
        .iter()
        .enumerate()
        .filter(|(_, &sv)| sv <= cutoff)
        .map(|(k, _)| {
            basis
                .iter()
                .enumerate()
                .fold(DMatrix::zeros(dim, dim), |acc, (c, e)| {
                    acc + e * curl_vt[(k, c)]
                })
        })
        .collect();
    if null.is_empty() {
        return Err(Error::EmptySolution(
            "curl constraints admit only L = 0".into(),
        ));
    }

    // Homogeneity rows s'N_k s⁻¹ and the normalization 1'N_k 1, one column
    // per null-space direction N_k.
    let one = SpinFactorElement::identity(sig).coords();
    let inverses: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| s.inverse().map(|x| x.coords()))
        .collect::<Result<_>>()?;
    let rows = samples.len() + 1;
    let mut a = DMatrix::zeros(rows, null.len());
    for (k, nk) in null.iter().enumerate() {
        for (n, s) in samples.iter().enumerate() {
            let sv = DVector::from_vec(s.coords());
            let iv = DVector::from_column_slice(&inverses[n]);
            a[(n, k)] = sv.dot(&(nk * iv));
        }
        let ov = DVector::from_column_slice(&one);
        a[(samples.len(), k)] = ov.dot(&(nk * &ov));
    }
    let rhs = DVector::from_element(rows, unit_norm_sq);
    let (a_sv, _) = full_svd(&a);
    let a_cut = cfg.svd_threshold * a_sv.first().copied().unwrap_or(0.0);
    let rank = a_sv.iter().filter(|&&sv| sv > a_cut).count();
    let coeffs = a
        .clone()
        .svd(true, true)
        .solve(&rhs, a_cut)
        .map_err(|e| Error::EmptySolution(e.to_string()))?;
    let fit = (&a * &coeffs - &rhs).amax();
    let scale = a_sv.first().copied().unwrap_or(1.0).max(1.0);
    if rank == 0 || fit.is_nan() || fit > cfg.svd_threshold * scale {
        return Err(Error::EmptySolution(format!(
            "homogeneity constraints leave residual {fit:e}"
        )));
    }

    let l = null
        .iter()
        .zip(coeffs.iter())
        .fold(DMatrix::zeros(dim, dim), |acc, (nk, &c)| acc + nk * c);
    let metric = UncurlingCandidate::from_matrix(sig, &l, unit_norm_sq)?;
    let norm_residual = (metric.pair(&one, &one) - unit_norm_sq).abs();
    let constraint_residual = metric.max_residual(&samples)?.max(norm_residual);
    Ok(UncurlingSolution {
        curl_nullspace_dim: null.len(),
        solution_family_dim: null.len() - rank,
        metric,
        constraint_residual,
        curl_singular_values: curl_sv,
        samples,
    })
}

/// Composite Gauss–Legendre evaluator for `∫ [L t⁻¹]·dt` along polylines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathIntegrator {
    pub steps: usize,
    pub q_floor: f64,
}

impl Default for PathIntegrator {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            q_floor: DEFAULT_Q_FLOOR,
        }
    }
}

impl PathIntegrator {
    pub fn new(steps: usize, q_floor: f64) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidConfig(
                "quadrature needs at least one step".into(),
            ));
        }
        if q_floor.is_nan() || q_floor <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "q_floor must be positive, got {q_floor}"
            )));
        }
        Ok(Self { steps, q_floor })
    }

    /// `∫_from^to [L t⁻¹]·dt` on the straight segment.
    pub fn segment(
        &self,
        from: &SpinFactorElement,
        to: &SpinFactorElement,
        l: &UncurlingCandidate,
    ) -> Result<f64> {
        let sig = from.signature();
        if to.signature() != sig || l.signature() != sig {
            return Err(Error::SignatureMismatch {
                left: sig.to_string(),
                right: to.signature().to_string(),
            });
        }
        let n = sig.algebra_dim();
        let a = from.coords();
        let d: Vec<f64> = to.coords().iter().zip(&a).map(|(y, x)| y - x).collect();
        // (L' d)_k, so that (L t⁻¹)·d = Σ_k t⁻¹_k (L d)_k for symmetric L
        let ld = l.apply(&d);
        let metric: Vec<f64> = (0..n - 1).map(|k| sig.metric(k)).collect();
        let h = 1.0 / self.steps as f64;
        let mut total = 0.0;
        let mut t = vec![0.0; n];
        for panel in 0..self.steps {
            let mid = (panel as f64 + 0.5) * h;
            let mut acc = 0.0;
            for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS) {
                for tau in [mid - 0.5 * h * x, mid + 0.5 * h * x] {
                    for k in 0..n {
                        t[k] = a[k] + tau * d[k];
                    }
                    let q = t[0] * t[0]
                        - t[1..]
                            .iter()
                            .zip(&metric)
                            .map(|(v, g)| g * v * v)
                            .sum::<f64>();
                    if q.is_nan() || q < self.q_floor {
                        return Err(Error::PathCrossesNullCone {
                            t: tau,
                            q,
                            q_floor: self.q_floor,
                        });
                    }
                    // t⁻¹ = (t₀, −t_vec)/Q
                    let paired =
                        t[0] * ld[0] - t[1..].iter().zip(&ld[1..]).map(|(v, m)| v * m).sum::<f64>();
                    acc += w * paired / q;
                }
            }
            total += 0.5 * h * acc;
        }
        Ok(total)
    }

    /// `∫ [L t⁻¹]·dt` along `1 → waypoints[0] → … → waypoints[last]`,
    /// `steps` panels per segment.
    pub fn polyline(&self, waypoints: &[SpinFactorElement], l: &UncurlingCandidate) -> Result<f64> {
        let Some(first) = waypoints.first() else {
            return Ok(0.0);
        };
        let mut prev = SpinFactorElement::identity(first.signature());
        let mut total = 0.0;
        for w in waypoints {
            total += self.segment(&prev, w, l)?;
            prev = w.clone();
        }
        Ok(total)
    }

    /// `u(s)` along the straight path, without the doubling check.
    pub fn norm_value(&self, s: &SpinFactorElement, l: &UncurlingCandidate) -> Result<f64> {
        Ok((self.polyline(std::slice::from_ref(s), l)? / l.unit_norm_sq()).exp())
    }

    /// `u(s)` along the straight path, with a step-doubling error estimate.
    pub fn norm(&self, s: &SpinFactorElement, l: &UncurlingCandidate) -> Result<NormResult> {
        let value = self.norm_value(s, l)?;
        let doubled = Self {
            steps: 2 * self.steps,
            ..*self
        }
        .norm_value(s, l)?;
        Ok(NormResult {
            value,
            path_steps: self.steps,
            residual_estimate: (doubled - value).abs() + 8.0 * f64::EPSILON * value,
        })
    }
}

/// `u(s)` by straight-path quadrature with `steps` panels and the default
/// Q floor.
pub fn unital_norm(
    s: &SpinFactorElement,
    l: &UncurlingCandidate,
    steps: usize,
) -> Result<NormResult> {
    PathIntegrator::new(steps, DEFAULT_Q_FLOOR)?.norm(s, l)
}

/// `√(σ² − ⟪s, s⟫)`.
pub fn closed_form_norm(s: &SpinFactorElement) -> Result<f64> {
    let q = s.quadratic_form();
    if q > 0.0 {
        Ok(q.sqrt())
    } else {
        Err(Error::NonPositiveForm(q))
    }
}

/// `max |L s⁻¹ − ‖1‖² ∇u(s)/u(s)|`, with `∇u` by central differences of the
/// integrated norm.
pub fn gradient_relation_residual(s: &SpinFactorElement, l: &UncurlingCandidate) -> Result<f64> {
    let integrator = PathIntegrator::default();
    let sig = s.signature();
    let u = integrator.norm_value(s, l)?;
    let grad = central_gradient(
        |x| integrator.norm_value(&SpinFactorElement::from_coords(sig, x)?, l),
        &s.coords(),
    )?;
    let field = l.apply(&s.inverse()?.coords());
    Ok(field.iter().zip(&grad).fold(0.0f64, |m, (f, g)| {
        m.max((f - l.unit_norm_sq() * g / u).abs())
    }))
}
