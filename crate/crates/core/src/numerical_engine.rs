//! Independent numerical cross-validation: Euclidean time-sliced kernel
//! composition, symmetric eigensolver, imaginary-time ground-state
//! extraction, and convergence-order fitting.

use ndarray::Array2;
use num_complex::Complex64;

use crate::dunkl_operators::{effective_potential, DunklParams, HalfGrid, ParityChannel};
use crate::error::{DunklError, Result};
pub use crate::linalg::{EigenDecomposition, SymTridiagonal};
use crate::linalg::symmetric_eigen;
use crate::propagators::{ComplexTime, Kernel};

/// Euclidean slicing: N interior slices, per-slice step eps = tau / (N + 1).
#[derive(Debug, Clone, Copy)]
pub struct SliceScheme {
    pub slices: usize,
    pub total_tau: f64,
}

impl SliceScheme {
    pub fn new(slices: usize, total_tau: f64) -> Result<Self> {
        if slices == 0 {
            return Err(DunklError::Domain("slice count must be >= 1".into()));
        }
        if !(total_tau > 0.0) {
            return Err(DunklError::Domain(format!("total tau must be > 0, got {total_tau}")));
        }
        Ok(Self { slices, total_tau })
    }

    pub fn eps(&self) -> f64 {
        self.total_tau / (self.slices as f64 + 1.0)
    }
}

/// One Euclidean slice of the per-channel flat-measure kernel with the
/// potential evaluated at the slice endpoint:
/// `sqrt(m/(2 pi hbar eps)) exp(-[m (yb-ya)^2/(2 eps) + eps V_eff(yb)]/hbar)`.
pub fn short_time_kernel(
    yb: f64,
    ya: f64,
    eps: f64,
    channel: &ParityChannel,
    params: &DunklParams,
    potential: impl Fn(f64) -> f64,
) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(DunklError::Domain(format!("slice width must be > 0, got {eps}")));
    }
    let v_eff = effective_potential(yb, channel, params, potential)?;
    let m_over = params.mass / (2.0 * params.hbar * eps);
    let dy = yb - ya;
    Ok((m_over / std::f64::consts::PI).sqrt()
        * (-(m_over * dy * dy + eps * v_eff / params.hbar)).exp())
}

/// Advisory note when the slice width cannot resolve the effective potential
/// anywhere on the grid (eps max|V_eff| > 1/2). Attractive sub-critical
/// channels trip this on any fine grid; their naive endpoint-sampled Trotter
/// product collapses onto a spurious origin-localized mode instead of the
/// channel kernel, so composition refuses rather than regularizes.
pub fn slice_resolution_note(
    channel: &ParityChannel,
    params: &DunklParams,
    scheme: &SliceScheme,
    half: &HalfGrid,
    potential: impl Fn(f64) -> f64,
) -> Option<String> {
    let eps = scheme.eps();
    let mut worst: f64 = 0.0;
    for &y in half.nodes() {
        let v = effective_potential(y, channel, params, &potential).ok()?;
        worst = worst.max(v.abs());
    }
    (eps * worst > 0.5).then(|| {
        format!(
            "eps * max|V_eff| = {:.3e} exceeds 1/2; slice width {:.3e} too coarse for this channel/grid",
            eps * worst,
            eps
        )
    })
}

/// Composition of N+1 short-time kernels by repeated flat-measure midpoint
/// quadrature over the half grid; returns the half-line channel kernel.
pub fn time_sliced_kernel(
    channel: &ParityChannel,
    params: &DunklParams,
    scheme: &SliceScheme,
    half: &HalfGrid,
    potential: impl Fn(f64) -> f64,
) -> Result<Kernel> {
    let m = half.len();
    let h = half.spacing();
    let eps = scheme.eps();
    let mut slice = Array2::zeros((m, m));
    for (bi, &yb) in half.nodes().iter().enumerate() {
        for (ai, &ya) in half.nodes().iter().enumerate() {
            slice[(bi, ai)] = short_time_kernel(yb, ya, eps, channel, params, &potential)?;
        }
    }
    // K = A (h A)^N computed as B^(N+1)/h with B = h A, by binary powering
    let b = &slice * h;
    let power = matrix_power_checked(&b, scheme.slices + 1)?;
    let values = power.mapv(|x| Complex64::new(x / h, 0.0));
    Ok(Kernel {
        xb_nodes: half.nodes().to_vec(),
        xa_nodes: half.nodes().to_vec(),
        time: ComplexTime::euclidean(scheme.total_tau)?,
        values,
    })
}

fn matrix_power_checked(b: &Array2<f64>, mut n: usize) -> Result<Array2<f64>> {
    let mut result: Option<Array2<f64>> = None;
    let mut base = b.clone();
    loop {
        if n & 1 == 1 {
            let next = match &result {
                Some(r) => r.dot(&base),
                None => base.clone(),
            };
            ensure_finite(&next)?;
            result = Some(next);
        }
        n >>= 1;
        if n == 0 {
            break;
        }
        base = base.dot(&base);
        ensure_finite(&base)?;
    }
    Ok(result.expect("n >= 1"))
}

fn ensure_finite(a: &Array2<f64>) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(DunklError::Divergence(
            "slice composition overflowed; see the slice resolution note (attractive singular tail)"
                .into(),
        ))
    }
}

/// Full eigendecomposition of a dense real symmetric matrix via Householder
/// tridiagonalization and implicit-shift QL iteration.
pub fn diagonalize(matrix: &Array2<f64>) -> Result<EigenDecomposition> {
    symmetric_eigen(matrix)
}

/// The k lowest channel energies on the grid, with the leading O(h^2) stencil
/// bias removed by Richardson extrapolation across {M, 2M} half grids.
pub fn grid_energies(
    channel: &ParityChannel,
    params: &DunklParams,
    half_width: f64,
    half_count: usize,
    k: usize,
    potential: impl Fn(f64) -> f64,
) -> Result<Vec<f64>> {
    let coarse = HalfGrid::new(half_width, half_count)?;
    let fine = HalfGrid::new(half_width, 2 * half_count)?;
    let tri_c = crate::dunkl_operators::hamiltonian_matrix(channel, params, &coarse, &potential);
    let tri_f = crate::dunkl_operators::hamiltonian_matrix(channel, params, &fine, &potential);
    let ev_c = tri_c.lowest_eigenvalues(k)?;
    let ev_f = tri_f.lowest_eigenvalues(k)?;
    Ok(ev_c
        .iter()
        .zip(&ev_f)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect())
}

/// Imaginary-time projection onto the channel ground state: repeated
/// application of the short-time slice to a positive seed with per-step
/// renormalization. Energy comes from the log-ratio of norms; the returned
/// profile lives on the half-grid nodes (flat measure).
pub fn ground_state_imaginary_time(
    channel: &ParityChannel,
    params: &DunklParams,
    half: &HalfGrid,
    potential: impl Fn(f64) -> f64,
    tau_step: f64,
    steps: usize,
) -> Result<(f64, Vec<f64>)> {
    if !(tau_step > 0.0) || steps == 0 {
        return Err(DunklError::Domain("need tau_step > 0 and steps >= 1".into()));
    }
    let m = half.len();
    let h = half.spacing();
    let mut slice = Array2::zeros((m, m));
    for (bi, &yb) in half.nodes().iter().enumerate() {
        for (ai, &ya) in half.nodes().iter().enumerate() {
            slice[(bi, ai)] = short_time_kernel(yb, ya, tau_step, channel, params, &potential)?;
        }
    }

    // energy floor: log-ratio estimates below the Gershgorin bound of the
    // discrete channel Hamiltonian signal the Trotter collapse mode
    let tri = crate::dunkl_operators::hamiltonian_matrix(channel, params, half, &potential);
    let mut floor = f64::INFINITY;
    for j in 0..tri.len() {
        let r = if j > 0 { tri.off[j - 1].abs() } else { 0.0 }
            + if j + 1 < tri.len() { tri.off[j].abs() } else { 0.0 };
        floor = floor.min(tri.diag[j] - r);
    }

    let width = if params.omega > 0.0 {
        (params.hbar / (params.mass * params.omega)).sqrt()
    } else {
        1.0
    };
    let p = channel.branch_exponent();
    let mut state: Vec<f64> = half
        .nodes()
        .iter()
        .map(|&y| (y / width).powf(p) * (-y * y / (2.0 * width * width)).exp())
        .collect();
    normalize(&mut state, h);

    let mut energy = f64::NAN;
    let mut below_floor = 0usize;
    for _ in 0..steps {
        let mut next = vec![0.0; m];
        for (bi, row) in slice.outer_iter().enumerate() {
            let mut acc = 0.0;
            for (ai, &a) in row.iter().enumerate() {
                acc += a * state[ai];
            }
            next[bi] = acc * h;
        }
        let norm = (h * next.iter().map(|v| v * v).sum::<f64>()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(DunklError::Divergence("imaginary-time norm left (0, inf)".into()));
        }
        energy = -norm.ln() / tau_step;
        below_floor = if energy < floor - 1.0 { below_floor + 1 } else { 0 };
        if below_floor >= 3 {
            return Err(DunklError::Divergence(format!(
                "log-ratio energy {energy:.3e} fell below the discrete spectral floor {floor:.3e}; \
                 Trotter collapse of the attractive singular tail"
            )));
        }
        for (s, n) in state.iter_mut().zip(&next) {
            *s = n / norm;
        }
    }
    Ok((energy, state))
}

fn normalize(v: &mut [f64], h: f64) {
    let norm = (h * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Least-squares slope of log(error) against log(N); the fitted convergence
/// order of a discretization series.
pub fn convergence_report(series: &[(usize, f64)]) -> Result<f64> {
    if series.len() < 3 {
        return Err(DunklError::Domain("need at least 3 points to fit an order".into()));
    }
    if series.iter().any(|&(_, e)| !(e > 0.0)) {
        return Err(DunklError::Domain("errors must be positive".into()));
    }
    let xs: Vec<f64> = series.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = series.iter().map(|&(_, e)| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx < 1e-12 {
        return Err(DunklError::Domain("degenerate fit: abscissae coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dunkl_operators::{hamiltonian_matrix, Parity};
    use crate::propagators::{free_kernel_parity, heat_kernel};
    use ndarray::array;

    fn setup(nu: f64, parity: Parity) -> (DunklParams, ParityChannel) {
        let params = DunklParams::natural(nu).unwrap();
        let channel = ParityChannel::new(parity, &params);
        (params, channel)
    }

    const ZERO_V: fn(f64) -> f64 = |_| 0.0;

    #[test]
    fn slice_scheme_eps() {
        let s = SliceScheme::new(3, 1.0).unwrap();
        assert!((s.eps() - 0.25).abs() < 1e-15);
        assert!(SliceScheme::new(0, 1.0).is_err());
    }

    #[test]
    fn short_time_kernel_values() {
        // nu = 0 even channel: plain Gaussian heat slice
        let (params, ch) = setup(0.0, Parity::Even);
        let got = short_time_kernel(1.3, 0.9, 0.2, &ch, &params, ZERO_V).unwrap();
        let want = heat_kernel(0.4, 0.2, &params);
        assert!((got - want).abs() < 1e-15);

        // direct formula at nu = 1/2, odd channel
        let (params, ch) = setup(0.5, Parity::Odd);
        let got = short_time_kernel(1.0, 1.0, 0.1, &ch, &params, ZERO_V).unwrap();
        assert!((got - 1.215133580189838281).abs() < 1e-12);
    }

    #[test]
    fn short_time_diagonal_divergence() {
        let (params, ch) = setup(0.3, Parity::Odd);
        let k = |eps: f64| short_time_kernel(1.0, 1.0, eps, &ch, &params, ZERO_V).unwrap();
        assert!((k(1e-6) / k(4e-6) - 2.0).abs() < 1e-3);
    }

    #[test]
    fn single_slice_is_one_composition() {
        // N = 1: K = A (hA)^1, checked entry-wise against the definition
        let (params, ch) = setup(0.5, Parity::Odd);
        let half = HalfGrid::new(6.0, 40).unwrap();
        let h = half.spacing();
        let scheme = SliceScheme::new(1, 0.5).unwrap();
        let eps = scheme.eps();
        let kern = time_sliced_kernel(&ch, &params, &scheme, &half, ZERO_V).unwrap();
        let (bi, ai) = (10, 25);
        let mut want = 0.0;
        for (ki, &yk) in half.nodes().iter().enumerate() {
            let _ = ki;
            want += short_time_kernel(half.nodes()[bi], yk, eps, &ch, &params, ZERO_V).unwrap()
                * h
                * short_time_kernel(yk, half.nodes()[ai], eps, &ch, &params, ZERO_V).unwrap();
        }
        assert!((kern.values[(bi, ai)].re - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn sliced_free_even_channel_matches_heat_kernel_mid_grid() {
        // nu = 0, V = 0: mid-grid values match the even image-sum heat kernel
        let (params, ch) = setup(0.0, Parity::Even);
        let half = HalfGrid::new(12.0, 300).unwrap();
        let scheme = SliceScheme::new(64, 1.0).unwrap();
        let kern = time_sliced_kernel(&ch, &params, &scheme, &half, ZERO_V).unwrap();
        // pick points far from both boundaries
        let (bi, ai) = (140, 160); // y ~ 5.6, 6.4
        let (yb, ya) = (half.nodes()[bi], half.nodes()[ai]);
        // transformed flat-measure channel target: sqrt(ya yb) * 2c * e^{-c(..)} I_lambda,
        // which at lambda = -1/2 is the image sum g(yb-ya) + g(yb+ya)
        let want = heat_kernel(yb - ya, 1.0, &params) + heat_kernel(yb + ya, 1.0, &params);
        let got = kern.values[(bi, ai)].re;
        assert!(
            ((got - want) / want).abs() < 1e-3,
            "mid-grid heat kernel: {got} vs {want}"
        );
    }

    #[test]
    fn sliced_repulsive_channel_converges_to_closed_form() {
        // nu = 1/2 odd channel (repulsive tail): error vs the closed channel
        // kernel decreases roughly like 1/N
        let (params, ch) = setup(0.5, Parity::Odd);
        let half = HalfGrid::new(12.0, 300).unwrap();
        let time = ComplexTime::euclidean(1.0).unwrap();
        let (bi, ai) = (24, 37); // y = 0.98, 1.5
        let (yb, ya) = (half.nodes()[bi], half.nodes()[ai]);
        // flat-measure target: (ya yb)^nu x parity kernel
        let target = (ya * yb).powf(params.nu)
            * free_kernel_parity(yb, ya, &time, &ch, &params).unwrap().re;
        let mut series = Vec::new();
        for n in [16usize, 32, 64, 128] {
            let scheme = SliceScheme::new(n, 1.0).unwrap();
            let kern = time_sliced_kernel(&ch, &params, &scheme, &half, ZERO_V).unwrap();
            let err = ((kern.values[(bi, ai)].re - target) / target).abs();
            series.push((n, err));
        }
        assert!(series[0].1 < 2e-2, "N=16 error {}", series[0].1);
        let order = convergence_report(&series).unwrap();
        assert!(order <= -0.8, "fitted order {order}");
    }

    #[test]
    fn sliced_semigroup_property() {
        // K(tau, N) composed with itself equals K(2 tau, 2N+1) exactly on the grid
        let (params, ch) = setup(1.5, Parity::Even);
        let half = HalfGrid::new(10.0, 80).unwrap();
        let h = half.spacing();
        let k1 = time_sliced_kernel(&ch, &params, &SliceScheme::new(7, 0.5).unwrap(), &half, ZERO_V)
            .unwrap();
        let k2 =
            time_sliced_kernel(&ch, &params, &SliceScheme::new(15, 1.0).unwrap(), &half, ZERO_V)
                .unwrap();
        let m = half.len();
        let (bi, ai) = (20, 33);
        let mut composed = 0.0;
        for k in 0..m {
            composed += k1.values[(bi, k)].re * k1.values[(k, ai)].re * h;
        }
        let direct = k2.values[(bi, ai)].re;
        assert!(
            ((composed - direct) / direct).abs() < 1e-12,
            "{composed} vs {direct}"
        );
    }

    #[test]
    fn sliced_attractive_subcritical_channel_is_flagged_and_diverges() {
        // even channel at nu = 1/2 carries the maximally attractive tail;
        // the resolution note fires and the composition detects the collapse
        let (params, ch) = setup(0.5, Parity::Even);
        let half = HalfGrid::new(12.0, 300).unwrap();
        let scheme = SliceScheme::new(256, 1.0).unwrap();
        assert!(slice_resolution_note(&ch, &params, &scheme, &half, ZERO_V).is_some());
        assert!(matches!(
            time_sliced_kernel(&ch, &params, &scheme, &half, ZERO_V),
            Err(DunklError::Divergence(_))
        ));
    }

    #[test]
    fn diagonalize_examples() {
        let dec = diagonalize(&array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        assert!((dec.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((dec.eigenvalues[1] - 3.0).abs() < 1e-12);
        let dec = diagonalize(&Array2::eye(5)).unwrap();
        assert!(dec.eigenvalues.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn odd_channel_grid_ground_state() {
        // nu = 1/2 odd channel lowest eigenvalue: hbar omega (nu + 3/2) = 2
        let (params, ch) = setup(0.5, Parity::Odd);
        let half = HalfGrid::new(12.0, 2000).unwrap();
        let tri = hamiltonian_matrix(&ch, &params, &half, |y| 0.5 * y * y);
        let low = tri.lowest_eigenvalues(1).unwrap();
        assert!((low[0] - 2.0).abs() < 1e-4, "got {}", low[0]);
    }

    #[test]
    fn richardson_grid_energies_match_exact_spectrum() {
        let (params, ch) = setup(0.25, Parity::Even);
        let ev = grid_energies(&ch, &params, 12.0, 1000, 5, |y| 0.5 * y * y).unwrap();
        for (n, &e) in ev.iter().enumerate() {
            let exact = 2.0 * n as f64 + 0.75;
            assert!((e - exact).abs() < 1e-4, "n={n}: {e} vs {exact}");
        }
    }

    #[test]
    fn imaginary_time_ground_state_repulsive_even_channel() {
        // nu = 3/2 even channel: E_0^+ = nu + 1/2 = 2
        let (params, ch) = setup(1.5, Parity::Even);
        let half = HalfGrid::new(12.0, 400).unwrap();
        let (energy, state) =
            ground_state_imaginary_time(&ch, &params, &half, |y| 0.5 * y * y, 2e-3, 4000)
                .unwrap();
        assert!((energy - 2.0).abs() < 1e-3, "energy {energy}");
        // overlap with the transformed exact profile y^(nu) psi_0 ~ y^(3/2) e^{-y^2/2}
        let h = half.spacing();
        let mut exact: Vec<f64> =
            half.nodes().iter().map(|&y| y.powf(1.5) * (-y * y / 2.0).exp()).collect();
        normalize(&mut exact, h);
        let overlap: f64 = h * state
            .iter()
            .zip(&exact)
            .map(|(a, b)| a * b)
            .sum::<f64>();
        assert!(overlap.abs() >= 0.9999, "fidelity {overlap}");
    }

    #[test]
    fn imaginary_time_detects_collapse() {
        let (params, ch) = setup(0.5, Parity::Even);
        let half = HalfGrid::new(12.0, 300).unwrap();
        let out = ground_state_imaginary_time(&ch, &params, &half, |y| 0.5 * y * y, 4e-3, 4000);
        assert!(matches!(out, Err(DunklError::Divergence(_))));
    }

    #[test]
    fn imaginary_time_agrees_with_diagonalization() {
        // extrapolate the O(eps) Trotter bias out of the log-ratio energy and
        // compare against the Richardson grid eigenvalue
        let (params, ch) = setup(1.5, Parity::Even);
        let half = HalfGrid::new(12.0, 400).unwrap();
        let v = |y: f64| 0.5 * y * y;
        let (e1, _) = ground_state_imaginary_time(&ch, &params, &half, v, 2e-3, 4000).unwrap();
        let (e2, _) = ground_state_imaginary_time(&ch, &params, &half, v, 1e-3, 8000).unwrap();
        let extrapolated = 2.0 * e2 - e1;
        let grid = grid_energies(&ch, &params, 12.0, 400, 1, v).unwrap()[0];
        assert!(
            (extrapolated - grid).abs() < 1e-4,
            "imaginary time {extrapolated} vs grid {grid}"
        );
    }

    #[test]
    fn convergence_report_orders() {
        let one: Vec<(usize, f64)> = [16, 32, 64, 128].iter().map(|&n| (n, 3.0 / n as f64)).collect();
        assert!((convergence_report(&one).unwrap() + 1.0).abs() < 0.05);
        let two: Vec<(usize, f64)> =
            [16, 32, 64, 128].iter().map(|&n| (n, 5.0 / (n * n) as f64)).collect();
        assert!((convergence_report(&two).unwrap() + 2.0).abs() < 0.05);
        assert!(convergence_report(&one[..2]).is_err());
    }
}
