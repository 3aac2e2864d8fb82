use serde::Serialize;

use super::{combine_unchecked, damped_factor, MpsCertificate, MpsFactor, MpsParams};
use crate::bounds::SegmentChain;
use crate::error::{Error, Result};
use crate::setcore::{initial_segment, IntegerSet};
use crate::spectral::{convolve, grid_sup, inner_product, SupportedFunction};

/// One step `R_j = R_{j-1} + c·g_j + D_j` of the iteration.
#[derive(Clone, Debug)]
pub struct TestFunctionStep {
    pub g: SupportedFunction,
    /// `D_j = R_{j-1} ∗ R_{g_j}`; zero for the first step.
    pub d: SupportedFunction,
    /// The damped factor of `g_j`; the first step needs none.
    pub factor: Option<MpsFactor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationCertificate {
    #[serde(rename = "J")]
    pub steps: usize,
    pub b: f64,
    pub c: f64,
    pub tol: f64,
    /// `max |R̂|` on the sup grid.
    pub sup_r: f64,
    pub sup_grid: usize,
    /// `1 + J·tol`.
    pub sup_threshold: f64,
    /// `‖R - (c·Σg_j + ΣD_j)‖₂`.
    pub residual: f64,
    pub relative_residual: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct IteratedTestFunction {
    pub r: SupportedFunction,
    pub steps: Vec<TestFunctionStep>,
    pub certificate: IterationCertificate,
}

impl IteratedTestFunction {
    /// `c·Σ g_j + Σ D_j`, rebuilt from the stored steps.
    pub fn decomposition(&self) -> SupportedFunction {
        let c = self.certificate.c;
        self.steps.iter().fold(SupportedFunction::zero(), |acc, s| {
            &(&acc + &s.g.scale_real(c)) + &s.d
        })
    }

    pub fn factor_certificates(&self) -> Vec<MpsCertificate> {
        self.steps
            .iter()
            .filter_map(|s| s.factor.as_ref().map(|f| f.certificate))
            .collect()
    }
}

fn check_sup(gs: &[SupportedFunction], tol: f64) -> Result<()> {
    for (i, g) in gs.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let (sup, grid) = grid_sup(g)?;
        if sup > 1.0 + tol {
            return Err(Error::domain(format!(
                "sup norm of g_{} is {sup} on a grid of {grid} points, above 1 + tol",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Runs `R₁ = c·g₁`, `R_{j+1} = R_j + c·g_{j+1} + R_j ∗ R_{g_{j+1}}` and
/// certifies `‖R̂‖_∞ ≤ 1 + J·tol` on a grid together with the bookkeeping
/// identity `R = c·Σg_j + ΣD_j`.
pub fn build_test_function(gs: &[SupportedFunction], params: &MpsParams) -> Result<IteratedTestFunction> {
    if gs.is_empty() {
        return Err(Error::domain("at least one function is needed"));
    }
    check_sup(gs, params.tol)?;
    let c = params.c();
    let mut r = gs[0].scale_real(c);
    let mut steps = vec![TestFunctionStep {
        g: gs[0].clone(),
        d: SupportedFunction::zero(),
        factor: None,
    }];
    for g in &gs[1..] {
        let factor = damped_factor(g, params)?;
        let d = convolve(&r, &factor.r)?;
        r = combine_unchecked(&r, g, &factor.r, c)?;
        steps.push(TestFunctionStep {
            g: g.clone(),
            d,
            factor: Some(factor),
        });
    }

    let mut itf = IteratedTestFunction {
        r,
        steps,
        certificate: IterationCertificate {
            steps: gs.len(),
            b: params.b,
            c,
            tol: params.tol,
            sup_r: 0.0,
            sup_grid: 0,
            sup_threshold: 1.0 + gs.len() as f64 * params.tol,
            residual: 0.0,
            relative_residual: 0.0,
            accepted: false,
        },
    };
    let residual = (&itf.r - &itf.decomposition()).l2();
    let norm = itf.r.l2();
    let (sup_r, sup_grid) = grid_sup(&itf.r)?;
    let cert = &mut itf.certificate;
    cert.sup_r = sup_r;
    cert.sup_grid = sup_grid;
    cert.residual = residual;
    cert.relative_residual = if norm > 0.0 { residual / norm } else { residual };
    cert.accepted = sup_r <= cert.sup_threshold && residual <= params.tol * norm;
    if !cert.accepted {
        return Err(Error::construction(
            format!(
                "test function rejected: sup {sup_r} (threshold {}), residual {residual:e}",
                cert.sup_threshold
            ),
            None,
        ));
    }
    Ok(itf)
}

/// `F_ij` with `F̂_ij = R̂_{g_j} ∏_{i<ℓ<j} (R̂_{g_ℓ} + 1)`, so that
/// `D_j = c·Σ_{i<j} g_i ∗ F_ij`. Indices are 1-based with `i < j ≤ J`.
pub fn extract_factors(itf: &IteratedTestFunction, i: usize, j: usize) -> Result<SupportedFunction> {
    let total = itf.steps.len();
    if !(1 <= i && i < j && j <= total) {
        return Err(Error::domain(format!(
            "factor indices ({i}, {j}) need 1 <= i < j <= {total}"
        )));
    }
    let factor = |k: usize| &itf.steps[k - 1].factor.as_ref().expect("steps after the first carry factors").r;
    let mut out = factor(j).clone();
    for l in i + 1..j {
        let cross = convolve(&out, factor(l))?;
        out = &out + &cross;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TestFunctionBound {
    /// `Re⟨R, 1_A⟩ / max(1, sup |R̂|)`.
    pub lower_bound: f64,
    pub correlation: f64,
    #[serde(rename = "J")]
    pub steps: usize,
    pub sizes: Vec<usize>,
    pub iteration: IterationCertificate,
    pub factors: Vec<MpsCertificate>,
}

/// A lower bound for `‖1̂_A‖₁` from the test function built on the
/// normalised indicators of the chain's segments.
///
/// `⟨R, 1_A⟩ = ⟨R̂, 1̂_A⟩ ≤ ‖R̂‖_∞‖1̂_A‖₁`, and the grid sup of `R̂` stands
/// in for `‖R̂‖_∞`. Dividing by `max(1, sup)` never inflates the value.
pub fn lower_bound_via_test_function(
    set: &IntegerSet,
    chain: &SegmentChain,
    params: &MpsParams,
) -> Result<TestFunctionBound> {
    if chain.base() != set {
        return Err(Error::domain("segment chain was built on a different set"));
    }
    let gs = chain
        .sizes()
        .iter()
        .map(|&k| SupportedFunction::normalized_indicator(&initial_segment(set, k)?))
        .collect::<Result<Vec<_>>>()?;
    let itf = build_test_function(&gs, params)?;
    let correlation = inner_product(&itf.r, &SupportedFunction::indicator(set)?).re;
    Ok(TestFunctionBound {
        lower_bound: correlation / itf.certificate.sup_r.max(1.0),
        correlation,
        steps: gs.len(),
        sizes: chain.sizes().to_vec(),
        iteration: itf.certificate,
        factors: itf.factor_certificates(),
    })
}
