use std::ops::{Add, Sub};

use num_complex::Complex64;

use super::fft;
use crate::error::{Error, Result};
use crate::numeric::{next_pow2, CompensatedSum};
use crate::setcore::IntegerSet;

/// Largest output spread `convolve` will materialise.
pub const MAX_CONVOLUTION_SPREAD: u64 = 1 << 26;

/// Below this many nonzero products the direct sum beats an FFT.
const DIRECT_PRODUCTS: usize = 1 << 16;

/// A finitely supported function `Z -> C`.
///
/// Stored densely from the first to the last nonzero value; both ends are
/// always nonzero, and the zero function has no entries at all.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SupportedFunction {
    offset: i64,
    values: Vec<Complex64>,
}

impl SupportedFunction {
    /// `values[k]` is the value at `offset + k`.
    pub fn new(offset: i64, values: Vec<Complex64>) -> Self {
        let mut f = Self { offset, values };
        f.trim();
        f
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Self {
        Self::new(offset, values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a function from `(n, value)` pairs; repeated `n` accumulate.
    pub fn from_entries(entries: impl IntoIterator<Item = (i64, Complex64)>) -> Self {
        let entries: Vec<_> = entries.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            entries.iter().map(|e| e.0).min(),
            entries.iter().map(|e| e.0).max(),
        ) else {
            return Self::zero();
        };
        let mut values = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize + 1];
        for (n, v) in entries {
            values[(n - lo) as usize] += v;
        }
        Self::new(lo, values)
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn delta(n: i64) -> Self {
        Self::scaled_delta(n, Complex64::new(1.0, 0.0))
    }

    pub fn scaled_delta(n: i64, value: Complex64) -> Self {
        Self::new(n, vec![value])
    }

    /// `1_A`; capacity error when the spread exceeds [`MAX_CONVOLUTION_SPREAD`].
    pub fn indicator(set: &IntegerSet) -> Result<Self> {
        Self::weighted_indicator(set, 1.0)
    }

    /// `1_A / |A|`, the uniform probability measure on `A`.
    pub fn normalized_indicator(set: &IntegerSet) -> Result<Self> {
        Self::weighted_indicator(set, 1.0 / set.len() as f64)
    }

    fn weighted_indicator(set: &IntegerSet, w: f64) -> Result<Self> {
        let Some(lo) = set.min() else {
            return Ok(Self::zero());
        };
        if set.spread() > MAX_CONVOLUTION_SPREAD {
            return Err(Error::capacity(format!(
                "spread {} exceeds 2^26 for a dense representation",
                set.spread()
            )));
        }
        let mut values = vec![Complex64::new(0.0, 0.0); set.spread() as usize + 1];
        for x in set.iter() {
            values[(x - lo) as usize] = Complex64::new(w, 0.0);
        }
        Ok(Self::new(lo, values))
    }

    fn trim(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        let Some(first) = self.values.iter().position(|&v| v != zero) else {
            self.values.clear();
            self.offset = 0;
            return;
        };
        let last = self.values.iter().rposition(|&v| v != zero).unwrap();
        self.values.truncate(last + 1);
        self.values.drain(..first);
        self.offset += first as i64;
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn support_min(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.offset)
    }

    pub fn support_max(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.offset + self.values.len() as i64 - 1)
    }

    /// `support_max - support_min`, 0 for the zero function.
    pub fn spread(&self) -> u64 {
        self.values.len().saturating_sub(1) as u64
    }

    /// First index of the dense window; meaningless for the zero function.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Dense values on `support_min..=support_max`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Complex64 {
        let k = n - self.offset;
        if k < 0 || k as usize >= self.values.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[k as usize]
        }
    }

    /// Nonzero entries in increasing order of `n`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let zero = Complex64::new(0.0, 0.0);
        self.values
            .iter()
            .enumerate()
            .filter(move |(_, &v)| v != zero)
            .map(move |(k, &v)| (self.offset + k as i64, v))
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries().count()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.offset, self.values.iter().map(|&v| v * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).collect::<CompensatedSum>().value()
    }

    pub fn l2_squared(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).collect::<CompensatedSum>().value()
    }

    pub fn l2(&self) -> f64 {
        self.l2_squared().sqrt()
    }

    /// Sum of all values, i.e. the transform at `θ = 0`.
    pub fn total(&self) -> Complex64 {
        let re: CompensatedSum = self.values.iter().map(|v| v.re).collect();
        let im: CompensatedSum = self.values.iter().map(|v| v.im).collect();
        Complex64::new(re.value(), im.value())
    }

    /// Direct evaluation of `f̂(θ) = Σ f(n) e(-nθ)`; `O(spread)` per point.
    pub fn evaluate(&self, theta: f64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let local: Complex64 = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| v * fft::unit(-(k as f64) * theta))
            .sum();
        // The offset factor is reduced mod 1 to keep the angle small.
        let shift = (self.offset as f64 * theta).rem_euclid(1.0);
        local * fft::unit(-shift)
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        if self.is_zero() {
            return other.scale_real(sign);
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.offset.min(other.offset);
        let hi = self.support_max().unwrap().max(other.support_max().unwrap());
        let mut values = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize + 1];
        for (k, &v) in self.values.iter().enumerate() {
            values[(self.offset - lo) as usize + k] += v;
        }
        for (k, &v) in other.values.iter().enumerate() {
            values[(other.offset - lo) as usize + k] += v * sign;
        }
        Self::new(lo, values)
    }
}

impl Add for &SupportedFunction {
    type Output = SupportedFunction;

    fn add(self, rhs: Self) -> SupportedFunction {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &SupportedFunction {
    type Output = SupportedFunction;

    fn sub(self, rhs: Self) -> SupportedFunction {
        self.combine(rhs, -1.0)
    }
}

/// `g°(x) = conj(g(-x))`, whose transform is `conj(ĝ)`.
pub fn reflect_conjugate(g: &SupportedFunction) -> SupportedFunction {
    if g.is_zero() {
        return SupportedFunction::zero();
    }
    let values = g.values.iter().rev().map(|v| v.conj()).collect();
    SupportedFunction::new(-g.support_max().unwrap(), values)
}

/// `⟨f, g⟩ = Σ f(n) conj(g(n))`.
pub fn inner_product(f: &SupportedFunction, g: &SupportedFunction) -> Complex64 {
    let (Some(lo_f), Some(lo_g)) = (f.support_min(), g.support_min()) else {
        return Complex64::new(0.0, 0.0);
    };
    let lo = lo_f.max(lo_g);
    let hi = f.support_max().unwrap().min(g.support_max().unwrap());
    let mut re = CompensatedSum::new();
    let mut im = CompensatedSum::new();
    for n in lo..=hi {
        let p = f.get(n) * g.get(n).conj();
        re.add(p.re);
        im.add(p.im);
    }
    Complex64::new(re.value(), im.value())
}

/// `f ∗ g (x) = Σ_y f(y) g(x - y)`.
///
/// Sparse inputs are summed directly; dense ones go through a zero-padded
/// FFT of length at least `spread(f) + spread(g) + 1`, so nothing wraps.
pub fn convolve(f: &SupportedFunction, g: &SupportedFunction) -> Result<SupportedFunction> {
    if f.is_zero() || g.is_zero() {
        return Ok(SupportedFunction::zero());
    }
    let spread = f.spread() + g.spread();
    if spread > MAX_CONVOLUTION_SPREAD {
        return Err(Error::capacity(format!(
            "convolution output spread {spread} exceeds 2^26"
        )));
    }
    let offset = f.offset + g.offset;
    let (nf, ng) = (f.nonzero_count(), g.nonzero_count());
    if nf.min(ng) <= 64 || nf.saturating_mul(ng) <= DIRECT_PRODUCTS {
        let mut out = vec![Complex64::new(0.0, 0.0); spread as usize + 1];
        let (sparse, other) = if nf <= ng { (f, g) } else { (g, f) };
        for (n, v) in sparse.entries() {
            let base = (n - sparse.offset) as usize;
            for (k, &w) in other.values.iter().enumerate() {
                out[base + k] += v * w;
            }
        }
        return Ok(SupportedFunction::new(offset, out));
    }
    let size = next_pow2(spread as usize + 1);
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    let mut b = vec![Complex64::new(0.0, 0.0); size];
    a[..f.values.len()].copy_from_slice(&f.values);
    b[..g.values.len()].copy_from_slice(&g.values);
    fft::forward(&mut a);
    fft::forward(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft::inverse(&mut a);
    let scale = 1.0 / size as f64;
    a.truncate(spread as usize + 1);
    for x in a.iter_mut() {
        *x *= scale;
    }
    Ok(SupportedFunction::new(offset, a))
}
