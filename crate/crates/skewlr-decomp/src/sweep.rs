use crate::error::Error;
use crate::skew::SkewMatrix;
use crate::solver::{solve_decomposition, DecompositionSolution, SolveOptions};

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub solve: SolveOptions,
    /// diff_t counts as zero below zero_tol_rel·‖C‖_F.
    pub zero_tol_rel: f64,
    /// When present, tol_t = relative Frobenius error against (S̃, L̃) is
    /// recorded per grid point.
    pub ground_truth: Option<(SkewMatrix, SkewMatrix)>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            solve: SolveOptions::default(),
            zero_tol_rel: 1e-6,
            ground_truth: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub t: f64,
    pub solution: DecompositionSolution,
    /// ‖Ŝ_{t−ε}−Ŝ_t‖_F + ‖L̂_{t−ε}−L̂_t‖_F; absent at the first grid point.
    pub diff: Option<f64>,
    pub tol: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub epsilon: f64,
    pub points: Vec<SweepPoint>,
    /// Maximal closed t-intervals where diff_t is numerically zero, sorted
    /// and disjoint. An interval spans from the grid point before its first
    /// zero diff (that solution already belongs to the constant stretch) to
    /// the last zero-diff point.
    pub zero_regions: Vec<(f64, f64)>,
    pub selected_t: Option<f64>,
    /// True when selected_t came from a proper middle zero region; false for
    /// the argmin-diff fallback.
    pub selected_certified: bool,
}

/// Successive-solution change between consecutive grid points.
pub fn compute_diff(prev: &DecompositionSolution, cur: &DecompositionSolution) -> Result<f64, Error> {
    if prev.s_hat.n() != cur.s_hat.n() {
        return Err(Error::DimensionMismatch(prev.s_hat.n(), cur.s_hat.n()));
    }
    Ok((prev.s_hat.matrix() - cur.s_hat.matrix()).norm()
        + (prev.l_hat.matrix() - cur.l_hat.matrix()).norm())
}

/// Relative Frobenius distance to a known ground-truth pair.
pub fn compute_tol(
    sol: &DecompositionSolution,
    s_true: &SkewMatrix,
    l_true: &SkewMatrix,
) -> Result<f64, Error> {
    let ns = s_true.norm_fro();
    let nl = l_true.norm_fro();
    if ns == 0.0 || nl == 0.0 {
        return Err(Error::Domain(
            "relative error undefined against zero-norm ground truth".into(),
        ));
    }
    if sol.s_hat.n() != s_true.n() || sol.s_hat.n() != l_true.n() {
        return Err(Error::DimensionMismatch(sol.s_hat.n(), s_true.n()));
    }
    Ok((sol.s_hat.matrix() - s_true.matrix()).norm() / ns
        + (sol.l_hat.matrix() - l_true.matrix()).norm() / nl)
}

/// Solves the decomposition over the grid t ∈ {ε, 2ε, …, 1}, records the
/// diff_t curve, extracts its zero regions, and picks a representative t:
/// the midpoint of the middle zero region when at least three regions exist,
/// otherwise (fallback, flagged non-certified) the argmin of diff_t over
/// t ∈ [0.26, 0.4].
pub fn sweep_t(c: &SkewMatrix, epsilon: f64, opts: &SweepOptions) -> Result<SweepResult, Error> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let count = (1.0 / epsilon + 1e-9).floor() as usize;
    if count < 2 {
        return Err(Error::Parameter("grid needs at least 2 points".into()));
    }
    let norm_c = c.norm_fro();
    let zero_tol = opts.zero_tol_rel * norm_c;

    let mut points: Vec<SweepPoint> = Vec::with_capacity(count);
    for k in 0..count {
        let t = ((k + 1) as f64 * epsilon).min(1.0);
        let solution = solve_decomposition(c, t, &opts.solve)?;
        let diff = match points.last() {
            Some(prev) => Some(compute_diff(&prev.solution, &solution)?),
            None => None,
        };
        let tol = match &opts.ground_truth {
            Some((s_true, l_true)) => Some(compute_tol(&solution, s_true, l_true)?),
            None => None,
        };
        points.push(SweepPoint { t, solution, diff, tol });
    }

    let zero_regions = find_zero_regions(&points, zero_tol);
    let (selected_t, selected_certified) = select_t(&points, &zero_regions);

    Ok(SweepResult {
        epsilon,
        points,
        zero_regions,
        selected_t,
        selected_certified,
    })
}

fn find_zero_regions(points: &[SweepPoint], zero_tol: f64) -> Vec<(f64, f64)> {
    let mut regions = Vec::new();
    let mut start: Option<usize> = None;
    for k in 1..points.len() {
        let is_zero = points[k].diff.map(|d| d <= zero_tol).unwrap_or(false);
        if is_zero && start.is_none() {
            start = Some(k);
        }
        let run_ends = !is_zero || k == points.len() - 1;
        if run_ends {
            if let Some(s) = start.take() {
                let last = if is_zero { k } else { k - 1 };
                regions.push((points[s - 1].t, points[last].t));
            }
        }
    }
    regions
}

fn select_t(points: &[SweepPoint], regions: &[(f64, f64)]) -> (Option<f64>, bool) {
    if regions.len() >= 3 {
        // Middle region: widest of the interior ones; ties go to the one
        // whose midpoint is nearest the empirically good t ≈ 1/3.
        let interior = &regions[1..regions.len() - 1];
        let best = interior
            .iter()
            .map(|&(a, b)| (b - a, -((0.5 * (a + b) - 1.0 / 3.0).abs()), 0.5 * (a + b)))
            .max_by(|x, y| x.partial_cmp(y).unwrap());
        if let Some((_, _, mid)) = best {
            return (Some(mid), true);
        }
    }
    // Fallback: argmin diff_t restricted to [0.26, 0.4].
    let best = points
        .iter()
        .filter(|p| p.t >= 0.26 && p.t <= 0.4)
        .filter_map(|p| p.diff.map(|d| (d, p.t)))
        .min_by(|x, y| x.partial_cmp(y).unwrap());
    (best.map(|(_, t)| t), false)
}
