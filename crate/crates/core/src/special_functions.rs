//! Self-contained special-function kit: log-gamma, modified Bessel functions of
//! the first kind at real order and complex argument, generalized Laguerre
//! polynomials, the deformed exponential, and the Hille-Hardy bilinear pair.

use num_complex::Complex64;

use crate::error::{DunklError, Result};

/// Truncation policy shared by every series in this module.
#[derive(Debug, Clone, Copy)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-13, max_terms: 500 }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(DunklError::Domain(format!("rel_tol must be > 0, got {rel_tol}")));
        }
        if max_terms == 0 {
            return Err(DunklError::Domain("max_terms must be >= 1".into()));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// Ascending series / asymptotic expansion switchover radius for Bessel evaluation.
/// The ascending series loses roughly three digits at this radius, still inside
/// tolerance, and the asymptotic expansion is accurate beyond it.
const BESSEL_SWITCH_RADIUS: f64 = 30.0;

// Lanczos approximation, g = 7, nine coefficients (GSL set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for positive real argument.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(DunklError::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(log_gamma_unchecked(x))
}

fn log_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps the Lanczos argument away from the poles
        let s = (std::f64::consts::PI * x).sin();
        return (std::f64::consts::PI / s).ln() - log_gamma_unchecked(1.0 - x);
    }
    let xm1 = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xm1 + i as f64);
    }
    let t = xm1 + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xm1 + 0.5) * t.ln() - t + acc.ln()
}

/// Gamma function for positive real argument.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(log_gamma(x)?.exp())
}

/// Entire part of the modified Bessel function:
/// `iota_mu(w) = sum_k w^k / (k! Gamma(mu+k+1)) = I_mu(2 sqrt(w)) / w^(mu/2)`.
///
/// Working with `iota` instead of `I` keeps kernel formulas free of fractional
/// branch cuts; every power of the argument is carried explicitly by callers.
pub(crate) fn bessel_i_entire(mu: f64, w: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    debug_assert!(mu > -1.0);
    let mut term = Complex64::new(log_gamma_unchecked(mu + 1.0).exp().recip(), 0.0);
    let mut sum = term;
    for k in 1..=ctl.max_terms {
        term *= w / (k as f64 * (mu + k as f64));
        sum += term;
        if term.norm() <= ctl.rel_tol * sum.norm() {
            return Ok(sum);
        }
    }
    Err(DunklError::Convergence {
        max_terms: ctl.max_terms,
        ratio: term.norm() / sum.norm().max(f64::MIN_POSITIVE),
    })
}

/// Coefficients a_k(nu) of the large-argument expansion, generated on the fly:
/// a_k = (4nu^2-1)(4nu^2-9)...(4nu^2-(2k-1)^2) / (k! 8^k).
fn bessel_i_asymptotic(order: f64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    // reduce to the right half-plane via I_nu(z e^{i pi sigma}) = e^{i pi sigma nu} I_nu(-z)
    if z.re < 0.0 {
        let sigma = if z.im >= 0.0 { 1.0 } else { -1.0 };
        let phase = Complex64::from_polar(1.0, sigma * std::f64::consts::PI * order);
        return Ok(phase * bessel_i_asymptotic(order, -z, ctl)?);
    }
    let four_nu2 = 4.0 * order * order;
    let prefactor = |w: Complex64| w.exp() / (2.0 * std::f64::consts::PI * z).sqrt();

    // growing exponential: sum (-1)^k a_k / z^k; decaying: sum a_k / z^k
    let mut term = Complex64::new(1.0, 0.0);
    let mut grow = term;
    let mut decay = term;
    let mut prev_norm = f64::INFINITY;
    for k in 1..60usize {
        let odd = (2 * k - 1) as f64;
        term *= (four_nu2 - odd * odd) / (8.0 * k as f64) / z;
        if term.norm() >= prev_norm {
            break; // optimal truncation of the divergent tail
        }
        prev_norm = term.norm();
        grow += if k % 2 == 0 { term } else { -term };
        decay += term;
        if term.norm() <= ctl.rel_tol * grow.norm() {
            break;
        }
    }
    let sigma = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let reflected = Complex64::from_polar(1.0, sigma * std::f64::consts::PI * (order + 0.5));
    Ok(prefactor(z) * grow + reflected * prefactor(-z) * decay)
}

/// Modified Bessel function of the first kind, real order >= -1/2, complex argument.
///
/// Ascending power series for |z| <= 30, uniform asymptotic expansion beyond.
pub fn modified_bessel_i(order: f64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if order < -0.5 {
        return Err(DunklError::Domain(format!(
            "modified_bessel_i requires order >= -1/2, got {order}"
        )));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(DunklError::Domain("modified_bessel_i requires finite z".into()));
    }
    if z.norm() == 0.0 {
        return if order == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else if order > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(DunklError::Domain(format!("I_{order}(0) is singular")))
        };
    }
    if z.norm() <= BESSEL_SWITCH_RADIUS {
        let half = z / 2.0;
        Ok(half.powf(order) * bessel_i_entire(order, half * half, ctl)?)
    } else {
        bessel_i_asymptotic(order, z, ctl)
    }
}

/// Generalized Laguerre polynomial L_n^mu(x) via the three-term upward
/// recurrence in n, stable for the moderate degrees used here.
pub fn laguerre(n: usize, mu: f64, x: f64) -> Result<f64> {
    if mu <= -1.0 {
        return Err(DunklError::Domain(format!("laguerre requires mu > -1, got {mu}")));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut lm1 = 1.0;
    let mut l = 1.0 + mu - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + mu - x) * l - (kf + mu) * lm1) / (kf + 1.0);
        lm1 = l;
        l = next;
    }
    Ok(l)
}

/// Deformed exponential E_nu(z).
///
/// For |z| <= 30 the entire-series form
/// `Gamma(nu+1/2) [iota_{nu-1/2}(z^2/4) + (z/2) iota_{nu+1/2}(z^2/4)]`
/// is used; it is branch-free, reduces to the sign-function Bessel combination
/// for real z, and analytically continues it elsewhere. Beyond the switch
/// radius the asymptotic Bessel route with a principal-branch prefactor takes
/// over (real arguments keep the all-real sign-function path).
pub fn deformed_exponential(nu: f64, z: Complex64, ctl: &SeriesControl) -> Result<Complex64> {
    if nu <= -0.5 {
        return Err(DunklError::Domain(format!(
            "deformed_exponential requires nu > -1/2, got {nu}"
        )));
    }
    if z.norm() == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let g = log_gamma_unchecked(nu + 0.5).exp();
    if z.norm() <= BESSEL_SWITCH_RADIUS {
        let w = z * z / 4.0;
        let even = bessel_i_entire(nu - 0.5, w, ctl)?;
        let odd = bessel_i_entire(nu + 0.5, w, ctl)?;
        return Ok(g * (even + z / 2.0 * odd));
    }
    if z.im == 0.0 {
        // paper form on the real axis: sgn(z) weights the odd-order term
        let az = z.re.abs();
        let sgn = z.re.signum();
        let even = modified_bessel_i(nu - 0.5, Complex64::new(az, 0.0), ctl)?;
        let odd = modified_bessel_i(nu + 0.5, Complex64::new(az, 0.0), ctl)?;
        return Ok(g * (2.0 / az).powf(nu - 0.5) * (even + sgn * odd));
    }
    let even = modified_bessel_i(nu - 0.5, z, ctl)?;
    let odd = modified_bessel_i(nu + 0.5, z, ctl)?;
    Ok(g * (2.0 / z).powc(Complex64::new(nu - 0.5, 0.0)) * (even + odd))
}

/// Both sides of the Hille-Hardy bilinear identity, for identity testing.
///
/// Left: the Laguerre sum truncated at `nterms`. Right: the closed Bessel form,
/// rewritten through `iota_mu` so that no fractional power of `x y z` appears:
/// `(1-z)^(-mu-1) exp[-(x+y)(1+z)/(2(1-z))] iota_mu(x y z/(1-z)^2)`.
pub fn hille_hardy_pair(
    x: f64,
    y: f64,
    z: Complex64,
    mu: f64,
    nterms: usize,
    ctl: &SeriesControl,
) -> Result<(Complex64, Complex64)> {
    if x <= 0.0 || y <= 0.0 {
        return Err(DunklError::Domain("hille_hardy_pair requires x, y > 0".into()));
    }
    if mu <= -1.0 {
        return Err(DunklError::Domain(format!("hille_hardy_pair requires mu > -1, got {mu}")));
    }
    if z.norm() >= 1.0 {
        return Err(DunklError::Domain(format!(
            "hille_hardy_pair requires |z| < 1 for convergence, got |z| = {}",
            z.norm()
        )));
    }

    let damp = (-(x + y) / 2.0).exp();
    // joint upward recurrence over both Laguerre sequences
    let mut ratio = log_gamma_unchecked(mu + 1.0).exp().recip(); // n!/Gamma(n+mu+1)
    let mut zn = Complex64::new(1.0, 0.0);
    let (mut lx_m1, mut ly_m1) = (1.0, 1.0);
    let (mut lx, mut ly) = (1.0 + mu - x, 1.0 + mu - y);
    let mut lhs = Complex64::new(ratio * damp, 0.0); // n = 0 term
    let mut last = lhs;
    for n in 1..=nterms {
        let nf = n as f64;
        ratio *= nf / (nf + mu);
        zn *= z;
        last = ratio * lx * ly * damp * zn;
        lhs += last;
        // advance the recurrences to degree n+1
        let next_x = ((2.0 * nf + 1.0 + mu - x) * lx - (nf + mu) * lx_m1) / (nf + 1.0);
        let next_y = ((2.0 * nf + 1.0 + mu - y) * ly - (nf + mu) * ly_m1) / (nf + 1.0);
        lx_m1 = lx;
        ly_m1 = ly;
        lx = next_x;
        ly = next_y;
    }
    let tail = last.norm() * z.norm() / (1.0 - z.norm());
    if tail > ctl.rel_tol * lhs.norm() {
        return Err(DunklError::Convergence {
            max_terms: nterms,
            ratio: tail / lhs.norm().max(f64::MIN_POSITIVE),
        });
    }

    let one = Complex64::new(1.0, 0.0);
    let omz = one - z;
    let rhs = omz.powc(Complex64::new(-mu - 1.0, 0.0))
        * (-(x + y) / 2.0 * (one + z) / omz).exp()
        * bessel_i_entire(mu, x * y * z / (omz * omz), ctl)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const CTL: SeriesControl = SeriesControl { rel_tol: 1e-13, max_terms: 500 };

    #[test]
    fn log_gamma_known_values() {
        // Gamma(1/2) = sqrt(pi), Gamma(1) = 1, Gamma(2.5) by recurrence from sqrt(pi)
        assert!((log_gamma(0.5).unwrap() - 0.572364942924700087).abs() < 1e-14);
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!((log_gamma(2.5).unwrap() - 0.284682870472919160).abs() < 1e-14);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-1.3).is_err());
    }

    #[test]
    fn log_gamma_recurrence_property() {
        // ln Gamma(x+1) = ln Gamma(x) + ln x over a wide argument range
        let mut x = 0.1;
        while x <= 50.0 {
            let lhs = log_gamma(x + 1.0).unwrap();
            let rhs = log_gamma(x).unwrap() + x.ln();
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "recurrence off at x = {x}: {lhs} vs {rhs}"
            );
            x += 0.0917;
        }
    }

    #[test]
    fn bessel_small_order_values() {
        // I_0(0) = 1
        assert_eq!(modified_bessel_i(0.0, c(0.0, 0.0), &CTL).unwrap(), c(1.0, 0.0));
        // half-integer closed forms: I_{1/2}(1), I_{3/2}(1)
        let i_half = modified_bessel_i(0.5, c(1.0, 0.0), &CTL).unwrap();
        assert!((i_half.re - 0.937674888245487647).abs() < 1e-12);
        let i_3half = modified_bessel_i(1.5, c(1.0, 0.0), &CTL).unwrap();
        assert!((i_3half.re - 0.293525326347479800).abs() < 1e-12);
    }

    #[test]
    fn bessel_half_integer_closed_forms_over_range() {
        // I_{1/2}(z) = sqrt(2/(pi z)) sinh z, I_{3/2}(z) = sqrt(2/(pi z)) (cosh z - sinh z / z)
        let mut z = 0.1;
        while z <= 20.0 {
            let pref = (2.0 / (std::f64::consts::PI * z)).sqrt();
            let exact_half = pref * z.sinh();
            let exact_3half = pref * (z.cosh() - z.sinh() / z);
            let got_half = modified_bessel_i(0.5, c(z, 0.0), &CTL).unwrap().re;
            let got_3half = modified_bessel_i(1.5, c(z, 0.0), &CTL).unwrap().re;
            assert!((got_half - exact_half).abs() <= 1e-11 * exact_half.abs());
            assert!((got_3half - exact_3half).abs() <= 1e-11 * exact_3half.abs());
            z += 0.37;
        }
    }

    #[test]
    fn bessel_asymptotic_region() {
        // frozen high-precision references
        let cases = [
            (0.7, 40.0, 1.4802660243771215e16),
            (2.3, 60.0, 5.637812436076330e24),
            (0.25, 31.0, 2.0878220240138575e12),
        ];
        for (order, z, expected) in cases {
            let got = modified_bessel_i(order, c(z, 0.0), &CTL).unwrap().re;
            assert!(
                ((got - expected) / expected).abs() < 1e-12,
                "I_{order}({z}) = {got}, want {expected}"
            );
        }
        // half-integer checks straddling the switchover
        for z in [29.0f64, 31.0, 50.0] {
            let pref = (2.0 / (std::f64::consts::PI * z)).sqrt();
            let exact = pref * z.sinh();
            let got = modified_bessel_i(0.5, c(z, 0.0), &CTL).unwrap().re;
            assert!(((got - exact) / exact).abs() < 1e-11);
            let exact25 = pref * ((1.0 + 3.0 / (z * z)) * z.cosh() - 3.0 / z * z.sinh());
            let got25 = modified_bessel_i(2.5, c(z, 0.0), &CTL).unwrap().re;
            assert!(((got25 - exact25) / exact25).abs() < 1e-11);
        }
    }

    #[test]
    fn bessel_imaginary_argument_matches_j() {
        // I_0(i y) = J_0(y); frozen J_0(10)
        let got = modified_bessel_i(0.0, c(0.0, 10.0), &CTL).unwrap();
        assert!((got.re - -0.245935764451348335).abs() < 1e-10);
        assert!(got.im.abs() < 1e-10);
    }

    #[test]
    fn bessel_rejects_low_order() {
        assert!(modified_bessel_i(-0.6, c(1.0, 0.0), &CTL).is_err());
    }

    #[test]
    fn laguerre_degree_edge_cases() {
        assert_eq!(laguerre(0, 0.7, 3.1).unwrap(), 1.0);
        assert!((laguerre(1, 0.5, 2.0).unwrap() - -0.5).abs() < 1e-15);
        // explicit quadratic: x^2/2 - (mu+2) x + (mu+1)(mu+2)/2
        assert!((laguerre(2, 0.5, 1.0).unwrap() - -0.125).abs() < 1e-14);
    }

    #[test]
    fn laguerre_matches_monomial_expansion() {
        // direct expansion L_n^mu(x) = sum_k (-1)^k C(n+mu, n-k) x^k / k!
        fn expansion(n: usize, mu: f64, x: f64) -> f64 {
            let mut total = 0.0;
            for k in 0..=n {
                let mut binom_ln = 0.0;
                // C(n+mu, n-k) = Gamma(n+mu+1)/(Gamma(k+mu+1) Gamma(n-k+1))
                binom_ln += log_gamma(n as f64 + mu + 1.0).unwrap();
                binom_ln -= log_gamma(k as f64 + mu + 1.0).unwrap();
                binom_ln -= log_gamma((n - k) as f64 + 1.0).unwrap();
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * binom_ln.exp() * x.powi(k as i32)
                    / log_gamma(k as f64 + 1.0).unwrap().exp();
            }
            total
        }
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let n = (next() * 8.0) as usize + 1;
            let mu = -0.4 + next() * 3.4;
            let x = next() * 10.0;
            let got = laguerre(n, mu, x).unwrap();
            let want = expansion(n, mu, x);
            assert!(
                (got - want).abs() <= 1e-9 * want.abs().max(1.0),
                "n={n} mu={mu} x={x}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn deformed_exponential_reduces_to_exp() {
        // E_0(x) = e^x
        let mut x: f64 = -5.0;
        while x <= 5.0 {
            if x.abs() > 1e-12 {
                let got = deformed_exponential(0.0, c(x, 0.0), &CTL).unwrap();
                assert!(
                    (got.re - x.exp()).abs() <= 1e-11 * x.exp(),
                    "E_0({x}) = {} vs {}",
                    got.re,
                    x.exp()
                );
                assert!(got.im.abs() <= 1e-13 * x.exp());
            }
            x += 0.31;
        }
    }

    #[test]
    fn deformed_exponential_point_values() {
        assert_eq!(deformed_exponential(1.2, c(0.0, 0.0), &CTL).unwrap(), c(1.0, 0.0));
        // E_1(1) = cosh(1) via the half-integer closed forms
        let got = deformed_exponential(1.0, c(1.0, 0.0), &CTL).unwrap();
        assert!((got.re - 1.543080634815243778).abs() < 1e-12);
    }

    #[test]
    fn deformed_exponential_large_real_argument() {
        // E_0 = exp across the asymptotic switchover, both signs
        for x in [31.0f64, 45.0, -35.0] {
            let got = deformed_exponential(0.0, c(x, 0.0), &CTL).unwrap();
            assert!(
                ((got.re - x.exp()) / x.exp()).abs() < 1e-11,
                "E_0({x}) = {} vs {}",
                got.re,
                x.exp()
            );
        }
    }

    #[test]
    fn hille_hardy_small_z_limit() {
        // z -> 0: both sides collapse to the n = 0 term e^{-(x+y)/2}/Gamma(mu+1)
        let (lhs, rhs) =
            hille_hardy_pair(0.5, 0.5, c(1e-300, 0.0), 0.5, 4, &CTL).unwrap();
        let expected = 0.684396560624433066;
        assert!((lhs.re - expected).abs() < 1e-13);
        assert!((rhs.re - expected).abs() < 1e-13);
    }

    #[test]
    fn hille_hardy_identity_examples() {
        let (lhs, rhs) = hille_hardy_pair(0.5, 0.5, c(0.3, 0.0), 0.5, 60, &CTL).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm());
        let (lhs, rhs) = hille_hardy_pair(1.0, 2.0, c(0.5, 0.0), 1.5, 80, &CTL).unwrap();
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm());
    }

    #[test]
    fn hille_hardy_rejects_large_z() {
        assert!(hille_hardy_pair(1.0, 1.0, c(1.0, 0.2), 0.5, 40, &CTL).is_err());
    }

    #[test]
    fn hille_hardy_tail_bound_trips() {
        // |z| close to 1 with far too few terms must report non-convergence
        let err = hille_hardy_pair(1.0, 1.0, c(0.95, 0.0), 0.5, 5, &CTL);
        assert!(matches!(err, Err(DunklError::Convergence { .. })));
    }
}
