//! Maximisation of `f(b, λ) = (1 - e^{-b})/ln λ · (1 - 2b/(√3(√λ - 1)))`,
//! the constant in front of `log N` in the geometric-chain lower bound.

use std::io::Write;

use serde::Serialize;

use crate::bounds::{build_chain_lambda, prop31_bound};
use crate::error::{Error, Result};
use crate::numeric::round_sig12;
use crate::setcore::IntegerSet;

/// Default search box `[0.1, 5] × [2, 500]`.
pub const DEFAULT_BOX: SearchBox = SearchBox {
    b: (0.1, 5.0),
    lambda: (2.0, 500.0),
};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Step of the local-maximum certificate.
pub const CERTIFICATE_STEP: f64 = 1e-4;

/// Step of the reported central differences.
pub const GRADIENT_STEP: f64 = 1e-5;

const MAX_SWEEPS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub b: (f64, f64),
    pub lambda: (f64, f64),
}

impl SearchBox {
    fn validate(&self) -> Result<()> {
        let (b0, b1) = self.b;
        let (l0, l1) = self.lambda;
        if !(b0 > 0.0 && b0 <= b1 && b1.is_finite()) {
            return Err(Error::domain(format!("b range [{b0}, {b1}] must be nonempty and positive")));
        }
        if !(l0 > 1.0 && l0 <= l1 && l1.is_finite()) {
            return Err(Error::domain(format!(
                "lambda range [{l0}, {l1}] must be nonempty and above 1"
            )));
        }
        Ok(())
    }

    fn contains(&self, b: f64, lambda: f64) -> bool {
        (self.b.0..=self.b.1).contains(&b) && (self.lambda.0..=self.lambda.1).contains(&lambda)
    }
}

/// `f(b, λ)` for `b > 0`, `λ > 1`.
pub fn objective(b: f64, lambda: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain(format!("b = {b} must be positive")));
    }
    if !(lambda > 1.0 && lambda.is_finite()) {
        return Err(Error::domain(format!("lambda = {lambda} must exceed 1")));
    }
    Ok(eval(b, lambda))
}

#[inline]
fn eval(b: f64, lambda: f64) -> f64 {
    -(-b).exp_m1() / lambda.ln() * (1.0 - 2.0 * b / (3f64.sqrt() * (lambda.sqrt() - 1.0)))
}

/// Golden-section search for the maximum of `g` on `[lo, hi]`.
fn golden_max(g: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        }
    }
    // The bracket endpoints are candidates too, so optima on the boundary
    // are found exactly.
    [(a, g(a)), (b, g(b)), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((a, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best })
        .0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalMaxCertificate {
    pub step: f64,
    /// `f* - f(p)` at each in-box perturbation `p`; all must be `≥ 0`.
    pub margins: Vec<f64>,
    /// Box faces the optimum lies on: `b_lo`, `b_hi`, `lambda_lo`, `lambda_hi`.
    pub active_bounds: Vec<String>,
    /// Central differences `(∂f/∂b, ∂f/∂λ)`; one-sided on an active face.
    pub gradient: (f64, f64),
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimumReport {
    pub b_star: f64,
    pub lambda_star: f64,
    pub f_star: f64,
    pub iterations: usize,
    /// Largest coordinate change in the final sweep.
    pub convergence_radius: f64,
    pub certificate: LocalMaxCertificate,
}

fn derivative(g: impl Fn(f64) -> f64, x: f64, lo: f64, hi: f64, h: f64) -> f64 {
    let (a, b) = ((x - h).max(lo), (x + h).min(hi));
    if b > a {
        (g(b) - g(a)) / (b - a)
    } else {
        0.0
    }
}

fn certify(bx: &SearchBox, b: f64, lambda: f64) -> LocalMaxCertificate {
    let f = eval(b, lambda);
    let h = CERTIFICATE_STEP;
    let margins: Vec<f64> = [(b - h, lambda), (b + h, lambda), (b, lambda - h), (b, lambda + h)]
        .into_iter()
        .filter(|&(pb, pl)| bx.contains(pb, pl))
        .map(|(pb, pl)| f - eval(pb, pl))
        .collect();
    let mut active_bounds = Vec::new();
    for (name, hit) in [
        ("b_lo", b == bx.b.0),
        ("b_hi", b == bx.b.1),
        ("lambda_lo", lambda == bx.lambda.0),
        ("lambda_hi", lambda == bx.lambda.1),
    ] {
        if hit {
            active_bounds.push(name.to_string());
        }
    }
    let gradient = (
        derivative(|x| eval(x, lambda), b, bx.b.0, bx.b.1, GRADIENT_STEP),
        derivative(|x| eval(b, x), lambda, bx.lambda.0, bx.lambda.1, GRADIENT_STEP),
    );
    LocalMaxCertificate {
        step: h,
        passed: margins.iter().all(|&m| m >= 0.0),
        margins,
        active_bounds,
        gradient,
    }
}

/// Alternating golden-section sweeps over `b` and `λ` from the box centre,
/// until neither coordinate moves by more than `tol` or a sweep no longer
/// improves `f`. An optimum on the boundary is reported with its active
/// faces; a failed local-maximum certificate is an error.
pub fn maximize(bx: &SearchBox, tol: f64) -> Result<OptimumReport> {
    bx.validate()?;
    if !(tol >= 1e-10) {
        return Err(Error::domain(format!("tol {tol} below 1e-10")));
    }
    let mut b = 0.5 * (bx.b.0 + bx.b.1);
    let mut lambda = 0.5 * (bx.lambda.0 + bx.lambda.1);
    let mut best = eval(b, lambda);
    let mut iterations = 0;
    let mut radius = 0.0;
    let pinned = bx.b.0 == bx.b.1 && bx.lambda.0 == bx.lambda.1;
    if !pinned {
        loop {
            if iterations == MAX_SWEEPS {
                return Err(Error::Optimization(format!(
                    "no fixed point after {MAX_SWEEPS} sweeps (last move {radius:e})"
                )));
            }
            iterations += 1;
            let nb = golden_max(|x| eval(x, lambda), bx.b.0, bx.b.1, tol);
            let nl = golden_max(|x| eval(nb, x), bx.lambda.0, bx.lambda.1, tol);
            let value = eval(nb, nl);
            if value < best {
                // The line searches are exact up to round-off, so a decrease
                // means we are already at the numerical fixed point.
                break;
            }
            radius = (nb - b).abs().max((nl - lambda).abs());
            let gain = value - best;
            b = nb;
            lambda = nl;
            best = value;
            if radius < tol || gain == 0.0 {
                break;
            }
        }
    }
    let certificate = certify(bx, b, lambda);
    if !certificate.passed {
        return Err(Error::Optimization(format!(
            "local-maximum certificate failed at b = {b}, lambda = {lambda}: margins {:?}",
            certificate.margins
        )));
    }
    Ok(OptimumReport {
        b_star: b,
        lambda_star: lambda,
        f_star: best,
        iterations,
        convergence_radius: radius,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J")]
    pub segments: usize,
    pub sizes: Vec<usize>,
    pub bound: f64,
    /// `bound / ln N`.
    pub ratio: f64,
}

/// For each `N`, the geometric-chain bound on `{0, …, N-1}` at `(b, λ)`
/// divided by `ln N`.
pub fn constant_pipeline(n_values: &[usize], b: f64, lambda: f64) -> Result<Vec<PipelineRow>> {
    n_values
        .iter()
        .map(|&n| {
            if n < 16 {
                return Err(Error::domain(format!("pipeline needs N >= 16, got {n}")));
            }
            let set = IntegerSet::interval(0, n)?;
            let chain = build_chain_lambda(&set, lambda)?;
            let report = prop31_bound(&chain, b)?;
            Ok(PipelineRow {
                n,
                segments: chain.len(),
                sizes: chain.sizes().to_vec(),
                bound: report.bound_value,
                ratio: report.bound_value / (n as f64).ln(),
            })
        })
        .collect()
}

/// CSV `b,lambda,f` on a `b_steps × lambda_steps` grid spanning the box.
pub fn write_surface_csv<W: Write>(bx: &SearchBox, b_steps: usize, lambda_steps: usize, mut out: W) -> Result<()> {
    bx.validate()?;
    if b_steps == 0 || lambda_steps == 0 {
        return Err(Error::domain("surface grid needs at least one step per axis"));
    }
    let axis = |(lo, hi): (f64, f64), steps: usize, i: usize| {
        if steps == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (steps - 1) as f64
        }
    };
    writeln!(out, "b,lambda,f")?;
    for i in 0..b_steps {
        let b = axis(bx.b, b_steps, i);
        for j in 0..lambda_steps {
            let l = axis(bx.lambda, lambda_steps, j);
            writeln!(out, "{b},{l},{}", round_sig12(eval(b, l)))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_examples() {
        let f = objective(1.3766505, 36.1127893).unwrap();
        assert!((f - 0.1422917).abs() < 1e-7);
        let expected = (1.0 - (-1f64).exp()) / 4f64.ln() * (1.0 - 2.0 / 3f64.sqrt());
        assert_eq!(objective(1.0, 4.0).unwrap(), expected);
        assert!((expected + 0.07054).abs() < 1e-5);
        assert!(objective(1e-12, 36.0).unwrap().abs() < 1e-12);
        assert!(objective(0.0, 4.0).is_err());
        assert!(objective(1.0, 1.0).is_err());
    }

    #[test]
    fn default_box_optimum() {
        let r = maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap();
        assert!((r.b_star - 1.3766505).abs() < 1e-5, "{r:?}");
        assert!((r.lambda_star - 36.1127893).abs() < 1e-4, "{r:?}");
        assert!((r.f_star - 0.1422917).abs() < 1e-7);
        assert!(r.certificate.active_bounds.is_empty());
        assert!(r.certificate.gradient.0.abs() <= 1e-3);
        assert!(r.certificate.gradient.1.abs() <= 1e-5);
        assert_eq!(r, maximize(&DEFAULT_BOX, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn pinned_box() {
        let bx = SearchBox { b: (1.0, 1.0), lambda: (4.0, 4.0) };
        let r = maximize(&bx, 1e-9).unwrap();
        assert_eq!((r.b_star, r.lambda_star, r.iterations), (1.0, 4.0, 0));
        assert_eq!(r.f_star, objective(1.0, 4.0).unwrap());
    }

    /// Stationary point of `b ↦ (1 - e^{-b})(1 - βb)` by bisection on
    /// `e^{-b}(1 - βb) - β(1 - e^{-b})`.
    fn best_b(lambda: f64) -> f64 {
        let beta = 2.0 / (3f64.sqrt() * (lambda.sqrt() - 1.0));
        let d = |b: f64| (-b).exp() * (1.0 - beta * b) - beta * (1.0 - (-b).exp());
        let (mut lo, mut hi) = (1e-9, 1.0 / beta);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if d(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn boundary_optimum() {
        let bx = SearchBox { b: (0.1, 5.0), lambda: (2.0, 10.0) };
        let r = maximize(&bx, 1e-9).unwrap();
        assert_eq!(r.lambda_star, 10.0);
        assert_eq!(r.certificate.active_bounds, vec!["lambda_hi".to_string()]);
        assert!((r.b_star - best_b(10.0)).abs() < 1e-6, "{} vs {}", r.b_star, best_b(10.0));
    }

    #[test]
    fn invalid_boxes() {
        let bad = SearchBox { b: (2.0, 1.0), lambda: (2.0, 3.0) };
        assert!(maximize(&bad, 1e-9).is_err());
        let bad = SearchBox { b: (1.0, 2.0), lambda: (0.5, 3.0) };
        assert!(maximize(&bad, 1e-9).is_err());
        assert!(maximize(&DEFAULT_BOX, 1e-12).is_err());
    }

    #[test]
    fn pipeline_rows() {
        let rows = constant_pipeline(&[16, 100, 10_000], 1.3766505, 36.1127893).unwrap();
        assert_eq!(rows[1].sizes, vec![4]);
        assert_eq!(rows[2].sizes, vec![9, 326]);
        let f_star = 0.1422917;
        assert!(rows[2].ratio >= 0.5 * f_star && rows[2].ratio <= f_star + 0.05);
        assert!(constant_pipeline(&[15], 1.0, 4.0).is_err());
    }

    #[test]
    fn surface_csv() {
        let bx = SearchBox { b: (1.0, 2.0), lambda: (4.0, 9.0) };
        let mut buf = Vec::new();
        write_surface_csv(&bx, 2, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "b,lambda,f");
        assert!(lines[1].starts_with("1,4,"));
        assert!(lines[6].starts_with("2,9,"));
    }
}
