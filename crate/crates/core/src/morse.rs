//! Morse potential V(x) = V₀(e^{−2ax} − 2e^{−ax}) through its map onto the
//! one-dimensional oscillator-plus-barrier channel under z = e^{−ax/2}.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{build_quadrature, gen_laguerre, ln_factorial, ln_gamma, CompensatedSum, QuadratureKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorseParams {
    depth: f64,
    range: f64,
}

impl MorseParams {
    pub fn new(depth: f64, range: f64) -> Result<Self> {
        if !(depth > 0.0 && depth.is_finite()) {
            return Err(domain(format!("well depth V0 must be positive, got {depth}")));
        }
        if !(range > 0.0 && range.is_finite()) {
            return Err(domain(format!("range parameter a must be positive, got {range}")));
        }
        Ok(MorseParams { depth, range })
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    /// λ = √(2V₀)/a.
    pub fn lambda(&self) -> f64 {
        (2.0 * self.depth).sqrt() / self.range
    }

    /// Number of discrete levels, ⌊λ − ½⌋ + 1 (zero when λ ≤ ½).
    pub fn level_count(&self) -> usize {
        let shifted = self.lambda() - 0.5;
        if shifted < 0.0 {
            0
        } else {
            shifted.floor() as usize + 1
        }
    }

    pub fn potential(&self, x: f64) -> f64 {
        let e = (-self.range * x).exp();
        self.depth * (e * e - 2.0 * e)
    }
}

/// E_p = −V₀[1 − (p + ½)/λ]², p = 0..=⌊λ − ½⌋. Empty when λ ≤ ½.
///
/// When λ − ½ is an integer the top entry is the E = 0 threshold, which has
/// no normalizable wavefunction.
pub fn morse_spectrum(params: &MorseParams) -> Vec<f64> {
    let lambda = params.lambda();
    (0..params.level_count())
        .map(|p| -params.depth * (1.0 - (p as f64 + 0.5) / lambda).powi(2))
        .collect()
}

/// Oscillator-channel parameters reproducing the Morse equation at energy E.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMatch {
    /// Ω = 2λ.
    pub omega: f64,
    /// P = −8E/a² − ¼.
    pub p_strength: f64,
    /// E_z = 4λ².
    pub e_z: f64,
    /// b = √(P + ¼) = 2√(−2E)/a.
    pub b: f64,
}

impl ChannelMatch {
    /// Ω(2p + b + 1), the channel energy of axial level p on the Plus branch.
    pub fn plus_branch_energy(&self, p: u32) -> f64 {
        self.omega * (2.0 * p as f64 + self.b + 1.0)
    }
}

/// Matches a Morse energy E < 0 to the oscillator channel.
///
/// Only −32E > a² (P > 0) yields bound states; energies with 0 < −32E ≤ a²
/// return `Error::NoBoundState`.
pub fn sw_to_morse(params: &MorseParams, energy: f64) -> Result<ChannelMatch> {
    let lambda = params.lambda();
    if !(lambda > 0.5) {
        return Err(Error::NoBoundState(format!("lambda = {lambda} does not exceed 1/2")));
    }
    let a2 = params.range * params.range;
    if !(energy < 0.0) {
        return Err(domain(format!("matching needs E < 0, got {energy}")));
    }
    if -32.0 * energy <= a2 {
        return Err(Error::NoBoundState(format!(
            "E = {energy} lies in 0 < -32E <= a^2, where the matching has no bound state"
        )));
    }
    let p_strength = -8.0 * energy / a2 - 0.25;
    Ok(ChannelMatch { omega: 2.0 * lambda, p_strength, e_z: 4.0 * lambda * lambda, b: (p_strength + 0.25).sqrt() })
}

struct Prefactor {
    ln_norm: f64,
    /// 2λ − 2p − 1, the Laguerre order and twice the power of u.
    order: f64,
}

fn prefactor(p: u32, params: &MorseParams) -> Result<Prefactor> {
    let lambda = params.lambda();
    if p as usize >= params.level_count() {
        return Err(Error::Index(format!("Morse level p = {p} does not exist for lambda = {lambda}")));
    }
    let order = 2.0 * lambda - 2.0 * p as f64 - 1.0;
    if order <= 0.0 {
        return Err(Error::NoBoundState(format!("level p = {p} sits at the E = 0 threshold")));
    }
    let ln_norm = 0.5
        * (params.range.ln() + ln_factorial(p) + order.ln() - ln_gamma(2.0 * lambda - p as f64)?);
    Ok(Prefactor { ln_norm, order })
}

/// Normalized ψ_p(x) = (−1)^p N u^{λ−p−½} e^{−u/2} L_p^{2λ−2p−1}(u), u = 2λe^{−ax},
/// N² = a p! (2λ−2p−1)/Γ(2λ−p).
pub fn morse_wavefunction(p: u32, params: &MorseParams, x: f64) -> Result<f64> {
    let pre = prefactor(p, params)?;
    let u = 2.0 * params.lambda() * (-params.range * x).exp();
    let envelope = (pre.ln_norm + 0.5 * pre.order * u.ln() - 0.5 * u).exp();
    let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * envelope * gen_laguerre(p, pre.order, u)?)
}

/// Squared normalization constant as printed with the channel map,
/// 2λ a p!/Γ(2λ−p), divided by the one used here.
pub fn printed_normalization_ratio(p: u32, params: &MorseParams) -> Result<f64> {
    let pre = prefactor(p, params)?;
    Ok(2.0 * params.lambda() / pre.order)
}

/// Norm of ψ_p computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormDiagnostic {
    /// ∫ψ² dx by composite Gauss-Legendre on an adaptively truncated x-range.
    pub direct: f64,
    /// The same integral mapped to u and done by Gauss-Laguerre.
    pub laguerre: f64,
    pub printed_ratio: f64,
}

/// x-range outside which ψ_p ψ_q is below 1e-18 of its peak.
pub fn significant_range(params: &MorseParams, levels: &[u32]) -> Result<(f64, f64)> {
    let a = params.range;
    // peak of the envelope sits near u ~ 2λ − 2p − 1
    let center = -((params.lambda() + 1.0) / params.lambda()).ln() / a;
    let step = 0.25 / a;
    let magnitude = |x: f64| -> Result<f64> {
        let mut m: f64 = 0.0;
        for &p in levels {
            m = m.max(morse_wavefunction(p, params, x)?.abs());
        }
        Ok(m * m)
    };
    let mut peak: f64 = 0.0;
    for i in -400..=400 {
        peak = peak.max(magnitude(center + i as f64 * step * 0.1)?);
    }
    let floor = 1e-18 * peak;
    let mut lo = center;
    let mut misses = 0;
    while misses < 8 {
        lo -= step;
        misses = if magnitude(lo)? < floor { misses + 1 } else { 0 };
    }
    let mut hi = center;
    misses = 0;
    while misses < 8 {
        hi += step;
        misses = if magnitude(hi)? < floor { misses + 1 } else { 0 };
        if hi - center > 1e4 / a {
            return Err(Error::Numeric("Morse wavefunction tail does not decay".into()));
        }
    }
    Ok((lo, hi))
}

/// ∫ f dx over [lo, hi] with `panels` panels of a 24-point Gauss-Legendre rule.
pub(crate) fn composite_legendre(lo: f64, hi: f64, panels: usize, mut f: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let rule = build_quadrature(QuadratureKind::GaussLegendre, 24)?;
    let width = (hi - lo) / panels as f64;
    let mut sum = CompensatedSum::default();
    for i in 0..panels {
        let mid = lo + (i as f64 + 0.5) * width;
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            sum.add(0.5 * width * w * f(mid + 0.5 * width * t)?);
        }
    }
    Ok(sum.value())
}

/// ⟨ψ_p, ψ_q⟩ by direct quadrature in x.
pub fn morse_overlap(p: u32, q: u32, params: &MorseParams) -> Result<f64> {
    let (lo, hi) = significant_range(params, &[p, q])?;
    composite_legendre(lo, hi, 200, |x| Ok(morse_wavefunction(p, params, x)? * morse_wavefunction(q, params, x)?))
}

pub fn normalization_diagnostic(p: u32, params: &MorseParams) -> Result<NormDiagnostic> {
    let pre = prefactor(p, params)?;
    let direct = morse_overlap(p, p, params)?;
    // dx = du/(a u): ∫ψ² dx = (N²/a) ∫ u^{order−1} e^{−u} L² du
    let rule = build_quadrature(QuadratureKind::GaussLaguerre { alpha: pre.order - 1.0 }, p as usize + 2)?;
    let scale = (2.0 * pre.ln_norm).exp() / params.range;
    let mut err = None;
    let laguerre = scale
        * rule.integrate(|u| match gen_laguerre(p, pre.order, u) {
            Ok(l) => l * l,
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(NormDiagnostic { direct, laguerre, printed_ratio: printed_normalization_ratio(p, params)? })
}
