use num_complex::Complex64;
use serde::Serialize;

use super::{GridChoice, MpsParams, MAX_AUTO_GRID};
use crate::error::{Error, Result};
use crate::numeric::{next_pow2, CompensatedSum};
use crate::spectral::{convolve, fft, grid_sup, sample, SupportedFunction};

/// Measured properties of one damped factor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MpsCertificate {
    pub b: f64,
    pub c: f64,
    #[serde(rename = "M")]
    pub grid: usize,
    #[serde(rename = "M_t")]
    pub truncation: usize,
    pub tol: f64,
    /// `ℓ²` mass of the coefficients dropped outside `[-M_t, 0]`.
    pub eps_support: f64,
    /// `max |R̂ + 1| - 1` on the doubled grid.
    pub max_prop3_violation: f64,
    /// `‖R‖₂ / (√2·b·‖f‖₂)`.
    pub l2_ratio: f64,
    /// `min (Re ĥ - |f̂|)` on the grid.
    pub min_real_h: f64,
    #[serde(rename = "sup_R")]
    pub sup_r: f64,
    pub accepted: bool,
}

impl MpsCertificate {
    fn judge(mut self) -> Self {
        self.accepted = self.eps_support <= self.tol
            && self.max_prop3_violation <= self.tol
            && self.l2_ratio <= 1.0 + self.tol
            && self.min_real_h.abs() <= self.tol;
        self
    }

    /// Names of the failed checks, for error messages.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !(self.eps_support <= self.tol) {
            out.push("eps_support");
        }
        if !(self.max_prop3_violation <= self.tol) {
            out.push("max_prop3_violation");
        }
        if !(self.l2_ratio <= 1.0 + self.tol) {
            out.push("l2_ratio");
        }
        if !(self.min_real_h.abs() <= self.tol) {
            out.push("min_real_h");
        }
        out
    }
}

/// The analytic completion `h` of `f`, the damped factor `R` with
/// `R̂ = e^{-bĥ} - 1`, and the certificate measured while building them.
#[derive(Clone, Debug)]
pub struct MpsFactor {
    pub h: SupportedFunction,
    pub r: SupportedFunction,
    pub certificate: MpsCertificate,
}

/// Grid samples of `|f̂|`, `ĥ` and the untruncated `R̂ = e^{-bĥ} - 1`.
#[derive(Clone, Debug)]
pub struct FactorSamples {
    pub abs_f: Vec<f64>,
    pub h_hat: Vec<Complex64>,
    pub r_hat: Vec<Complex64>,
}

fn check_input(f: &SupportedFunction, grid: usize) -> Result<()> {
    if f.is_zero() {
        return Err(Error::domain("the zero function has no damped factor"));
    }
    if !f.is_real() {
        return Err(Error::domain("damped factors need a real-valued function"));
    }
    if !grid.is_power_of_two() {
        return Err(Error::domain(format!("grid size {grid} is not a power of two")));
    }
    if 4 * f.spread() as u128 >= grid as u128 {
        return Err(Error::Aliasing {
            grid,
            required: next_pow2(4 * f.spread() as usize + 1),
        });
    }
    Ok(())
}

/// `h` with `h(0) = c₀` and `h(-n) = 2cₙ` for `0 < n ≤ M_t`, where
/// `cₙ = (1/M) Σ_k |f̂(k/M)| e(-nk/M)` and `|f̂(θ)| = Σ cₙ e(nθ)`.
///
/// With `M_t = M/2` the Nyquist coefficient enters once rather than twice,
/// which makes `Re ĥ = |f̂|` hold exactly at every grid point.
fn completion(f: &SupportedFunction, grid: usize, truncation: usize) -> (Vec<f64>, SupportedFunction) {
    let abs_f: Vec<f64> = sample(f, grid).iter().map(|v| v.norm()).collect();
    let mut coeffs: Vec<Complex64> = abs_f.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    fft::forward(&mut coeffs);
    let scale = 1.0 / grid as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); truncation + 1];
    values[truncation] = Complex64::new(coeffs[0].re * scale, 0.0);
    for n in 1..=truncation {
        let weight = if 2 * n == grid { 1.0 } else { 2.0 };
        values[truncation - n] = Complex64::new(weight * coeffs[n].re * scale, 0.0);
    }
    (abs_f, SupportedFunction::new(-(truncation as i64), values))
}

/// `e^{-bH} - 1` without cancellation when `bH` is small.
#[inline]
fn damp(b: f64, h: Complex64) -> Complex64 {
    let (x, y) = (-b * h.re, -b * h.im);
    let (s, c) = y.sin_cos();
    let half = (0.5 * y).sin();
    Complex64::new(x.exp_m1() * c - 2.0 * half * half, x.exp() * s)
}

fn resolve(f: &SupportedFunction, params: &MpsParams) -> Result<usize> {
    match params.grid {
        GridChoice::Fixed(m) => Ok(m),
        GridChoice::Auto => {
            let m = next_pow2((32 * (f.spread() as usize + 1)).max(8192));
            if m > MAX_AUTO_GRID {
                return Err(Error::capacity(format!(
                    "spread {} needs a grid above 2^23 for the damped factor",
                    f.spread()
                )));
            }
            Ok(m)
        }
    }
}

fn truncation_for(params: &MpsParams, grid: usize) -> Result<usize> {
    let t = params.truncation.unwrap_or(grid / 2);
    if t == 0 || 2 * t > grid {
        return Err(Error::domain(format!(
            "truncation {t} must lie in 1..={} for grid {grid}",
            grid / 2
        )));
    }
    Ok(t)
}

/// The analytic completion `h_f` on the first grid of `params`.
pub fn analytic_completion(f: &SupportedFunction, params: &MpsParams) -> Result<SupportedFunction> {
    let grid = resolve(f, params)?;
    check_input(f, grid)?;
    Ok(completion(f, grid, truncation_for(params, grid)?).1)
}

/// Grid values behind one construction attempt at grid size `grid`,
/// before any truncation of `R`.
pub fn factor_samples(f: &SupportedFunction, params: &MpsParams, grid: usize) -> Result<FactorSamples> {
    check_input(f, grid)?;
    let (abs_f, h) = completion(f, grid, truncation_for(params, grid)?);
    let h_hat = sample(&h, grid);
    let r_hat = h_hat.iter().map(|&v| damp(params.b, v)).collect();
    Ok(FactorSamples { abs_f, h_hat, r_hat })
}

fn attempt(f: &SupportedFunction, params: &MpsParams, grid: usize) -> Result<MpsFactor> {
    check_input(f, grid)?;
    let truncation = truncation_for(params, grid)?;
    let (abs_f, h) = completion(f, grid, truncation);
    let mut buf = sample(&h, grid);
    let min_real_h = buf
        .iter()
        .zip(&abs_f)
        .map(|(v, a)| v.re - a)
        .fold(f64::INFINITY, f64::min);
    drop(abs_f);
    for v in buf.iter_mut() {
        *v = damp(params.b, *v);
    }
    fft::inverse(&mut buf);
    let scale = 1.0 / grid as f64;

    // Residue i holds the coefficients at n ≡ i mod M. Everything outside
    // n ∈ [-M_t, 0], i.e. residues 1..M-M_t, is dropped and measured.
    let dropped: CompensatedSum = buf[1..grid - truncation]
        .iter()
        .map(|v| v.norm_sqr() * scale * scale)
        .collect();
    let mut kept = Vec::with_capacity(truncation + 1);
    kept.extend(buf[grid - truncation..].iter().map(|v| v * scale));
    kept.push(buf[0] * scale);
    drop(buf);
    let r = SupportedFunction::new(-(truncation as i64), kept);

    let fine = sample(&r, 2 * grid);
    let max_shifted = fine
        .iter()
        .map(|v| (v + Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    let sup_r = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);

    let certificate = MpsCertificate {
        b: params.b,
        c: params.c(),
        grid,
        truncation,
        tol: params.tol,
        eps_support: dropped.value().sqrt(),
        max_prop3_violation: max_shifted - 1.0,
        l2_ratio: r.l2() / (std::f64::consts::SQRT_2 * params.b * f.l2()),
        min_real_h,
        sup_r,
        accepted: false,
    }
    .judge();
    Ok(MpsFactor { h, r, certificate })
}

/// Builds `R_f` and certifies it.
///
/// With [`GridChoice::Auto`] the grid starts at the power of two at or
/// above `max(8192, 32·(spread+1))` and doubles after every rejected
/// attempt, up to `2^23`. A fixed grid gets a single attempt.
pub fn damped_factor(f: &SupportedFunction, params: &MpsParams) -> Result<MpsFactor> {
    let mut grid = resolve(f, params)?;
    loop {
        let factor = attempt(f, params, grid)?;
        if factor.certificate.accepted {
            return Ok(factor);
        }
        let retry = matches!(params.grid, GridChoice::Auto)
            && params.truncation.is_none()
            && 2 * grid <= MAX_AUTO_GRID;
        if !retry {
            let cert = factor.certificate;
            return Err(Error::construction(
                format!("damped factor rejected at grid {grid}: {}", cert.failures().join(", ")),
                Some(cert),
            ));
        }
        grid *= 2;
    }
}

/// `h = g + c·f + g ∗ R_f`.
///
/// Both `ĝ` and `f̂` must be bounded by `1 + tol` on their sup grids; the
/// damping inequality `e^{-bx} + (1 - e^{-b})x ≤ 1` then keeps `ĥ` bounded
/// by one plus the accumulated tolerances.
pub fn combine_step(
    g: &SupportedFunction,
    f: &SupportedFunction,
    factor: &MpsFactor,
    params: &MpsParams,
) -> Result<SupportedFunction> {
    for (name, func) in [("g", g), ("f", f)] {
        if func.is_zero() {
            continue;
        }
        let (sup, grid) = grid_sup(func)?;
        if sup > 1.0 + params.tol {
            return Err(Error::domain(format!(
                "sup norm of {name} is {sup} on a grid of {grid} points, above 1 + tol"
            )));
        }
    }
    combine_unchecked(g, f, &factor.r, params.c())
}

pub(crate) fn combine_unchecked(
    g: &SupportedFunction,
    f: &SupportedFunction,
    r: &SupportedFunction,
    c: f64,
) -> Result<SupportedFunction> {
    let cross = convolve(g, r)?;
    Ok(&(g + &f.scale_real(c)) + &cross)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcore::{random_subset, IntegerSet};

    fn params(b: f64) -> MpsParams {
        MpsParams::new(b).unwrap()
    }

    #[test]
    fn delta_case_closed_form() {
        let d = SupportedFunction::delta(0);
        let h = analytic_completion(&d, &params(1.0)).unwrap();
        assert!((&h - &d).l2() < 1e-12);
        let fac = damped_factor(&d, &params(1.0)).unwrap();
        let expected = SupportedFunction::from_real(0, &[(-1f64).exp() - 1.0]);
        assert!((&fac.r - &expected).l2() < 1e-12);
        assert!(fac.certificate.accepted);
        assert!((fac.certificate.max_prop3_violation - ((-1f64).exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn pair_completion() {
        let a = IntegerSet::new(vec![0, 1]).unwrap();
        let mu = SupportedFunction::normalized_indicator(&a).unwrap();
        let h = analytic_completion(&mu, &params(1.0)).unwrap();
        assert!((h.get(0).re - 2.0 / std::f64::consts::PI).abs() < 1e-6);
        assert!(h.l2_squared() <= 2.0 * mu.l2_squared() * (1.0 + 1e-9));
        let half = SupportedFunction::from_real(0, &[0.5, 0.5]);
        assert!(analytic_completion(&half, &params(1.0)).unwrap().l2_squared() <= 1.0 + 1e-9);
    }

    #[test]
    fn random_sets_accepted() {
        for seed in 0..4 {
            let a = random_subset(512, 8, seed).unwrap();
            let f = SupportedFunction::normalized_indicator(&a).unwrap();
            let fac = damped_factor(&f, &params(1.0)).unwrap();
            let cert = fac.certificate;
            assert!(cert.accepted, "{cert:?}");
            assert!(cert.l2_ratio <= 1.0 + 1e-6);
            assert!(cert.max_prop3_violation <= 1e-6);
            assert!(fac.r.support_max().unwrap() <= 0);
            assert!(fac.r.support_min().unwrap() >= -(cert.truncation as i64));
        }
    }

    #[test]
    fn fixed_grid_rejection_carries_certificate() {
        let a = random_subset(512, 8, 3).unwrap();
        let f = SupportedFunction::normalized_indicator(&a).unwrap();
        let p = params(1.0).with_grid(GridChoice::Fixed(4096));
        match damped_factor(&f, &p) {
            Err(Error::Construction { certificate: Some(c), .. }) => assert!(!c.accepted),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn input_errors() {
        let p = params(1.0);
        assert!(matches!(damped_factor(&SupportedFunction::zero(), &p), Err(Error::Domain(_))));
        let complex = SupportedFunction::scaled_delta(0, Complex64::new(0.0, 1.0));
        assert!(matches!(damped_factor(&complex, &p), Err(Error::Domain(_))));
        let wide = SupportedFunction::indicator(&IntegerSet::new(vec![0, 2000]).unwrap()).unwrap();
        let fixed = p.with_grid(GridChoice::Fixed(4096));
        assert!(matches!(damped_factor(&wide, &fixed), Err(Error::Aliasing { .. })));
    }

    /// `R = Σ_{j≥1} (-b)^j/j! h^{∗j}`, summed in the time domain on
    /// `[-M_t, 0]`, where truncation is exact because `h` lives on `Z≤0`.
    fn series_factor(h: &SupportedFunction, b: f64, truncation: i64) -> SupportedFunction {
        let clip = |f: SupportedFunction| {
            SupportedFunction::from_entries(f.entries().filter(|e| e.0 >= -truncation))
        };
        let mut term = h.scale_real(-b);
        let mut total = term.clone();
        for j in 2..200 {
            term = clip(convolve(&term, h).unwrap().scale_real(-b / j as f64));
            total = &total + &term;
            if term.l2() < 1e-18 {
                break;
            }
        }
        total
    }

    #[test]
    fn spectral_route_matches_power_series() {
        let a = IntegerSet::new(vec![0, 3, 4, 11, 20, 31]).unwrap();
        let f = SupportedFunction::normalized_indicator(&a).unwrap();
        let p = params(1.3).with_grid(GridChoice::Fixed(1 << 12)).with_truncation(256);
        let h = analytic_completion(&f, &p).unwrap();
        let fac = attempt(&f, &p, 1 << 12).unwrap();
        let series = series_factor(&h, 1.3, 256);
        let err = (&fac.r - &series).l2();
        assert!(err < 1e-9, "err {err}");
    }

    #[test]
    fn pointwise_identities_on_grid_values() {
        let a = random_subset(300, 10, 11).unwrap();
        let f = SupportedFunction::normalized_indicator(&a).unwrap();
        let b = 1.3766505;
        let s = factor_samples(&f, &params(b), 1 << 14).unwrap();
        for k in 0..s.abs_f.len() {
            let (h, r) = (s.h_hat[k], s.r_hat[k]);
            assert!(r.norm() <= b * h.norm() + 1e-12);
            assert!(((r + 1.0).norm() - (-b * h.re).exp()).abs() <= 1e-12);
            assert!((h.re - s.abs_f[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn combine_examples() {
        let d = SupportedFunction::delta(0);
        let p = params(1.0);
        let fac = damped_factor(&d, &p).unwrap();
        let h = combine_step(&d, &d, &fac, &p).unwrap();
        assert!((&h - &d).l2() < 1e-12);
        let only_f = combine_step(&SupportedFunction::zero(), &d, &fac, &p).unwrap();
        assert!((only_f.get(0).re - p.c()).abs() < 1e-15);
        let big = SupportedFunction::from_real(0, &[2.0]);
        assert!(matches!(combine_step(&big, &d, &fac, &p), Err(Error::Domain(_))));
    }
}
