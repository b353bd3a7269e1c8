//! Physical parameters, quantum-number labels, energies and separation constants.
//!
//! Units: ħ = mass = 1. The potential is
//! Ω²r²/2 + P/(2z²) + Q/(2ρ²).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Oscillator frequency, barrier strengths and azimuthal quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    omega: f64,
    p_strength: f64,
    q_strength: f64,
    m: i32,
}

/// Constants derived from [`SystemParams`]: b = √(P+¼), c = √(Q+m²), δ = c − |m|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConstants {
    pub b: f64,
    pub c: f64,
    pub delta: f64,
}

impl SystemParams {
    /// Validates Ω > 0, P > −¼ and Q ≥ 0.
    pub fn new(omega: f64, p_strength: f64, q_strength: f64, m: i32) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(domain(format!("omega must be positive and finite, got {omega}")));
        }
        if !(p_strength > -0.25) || !p_strength.is_finite() {
            return Err(domain(format!("P must exceed -1/4, got {p_strength}")));
        }
        if !(q_strength >= 0.0) || !q_strength.is_finite() {
            return Err(domain(format!("Q must be non-negative, got {q_strength}")));
        }
        Ok(Self { omega, p_strength, q_strength, m })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn p_strength(&self) -> f64 {
        self.p_strength
    }

    pub fn q_strength(&self) -> f64 {
        self.q_strength
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    /// The same system with azimuthal number `m`.
    pub fn with_m(&self, m: i32) -> Self {
        Self { m, ..*self }
    }

    pub fn channel(&self) -> ChannelConstants {
        channel_constants(self)
    }

    /// P = 0 exactly, i.e. b = ½: the ring-shape oscillator.
    pub fn is_ring(&self) -> bool {
        self.p_strength == 0.0
    }

    /// ±b for the requested branch, rejecting Minus when b > ½.
    pub fn signed_b(&self, branch: Branch) -> Result<f64> {
        let b = self.channel().b;
        match branch {
            Branch::Plus => Ok(b),
            Branch::Minus if b <= 0.5 => Ok(-b),
            Branch::Minus => Err(Error::Branch { branch: branch.name(), b }),
        }
    }

    /// Branches admissible for this b, Plus first.
    pub fn admissible_branches(&self) -> Vec<Branch> {
        if self.signed_b(Branch::Minus).is_ok() {
            vec![Branch::Plus, Branch::Minus]
        } else {
            vec![Branch::Plus]
        }
    }
}

/// Sign in front of b in the angular and axial exponents ½ ± b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            other => Err(domain(format!("unknown branch '{other}', expected plus or minus"))),
        }
    }
}

/// Spherical state (n_r, q, m, ±); level n = n_r + q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphericalLabel {
    pub n_r: u32,
    pub q: u32,
    pub m: i32,
    pub branch: Branch,
}

impl SphericalLabel {
    /// Builds a label for `params`, rejecting inadmissible branches.
    pub fn new(n_r: u32, q: u32, branch: Branch, params: &SystemParams) -> Result<Self> {
        params.signed_b(branch)?;
        Ok(Self { n_r, q, m: params.m(), branch })
    }

    pub fn level(&self) -> u32 {
        self.n_r + self.q
    }
}

/// Cylindrical state (n_ρ, p, m, ±); level n = n_ρ + p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylindricalLabel {
    pub n_rho: u32,
    pub p: u32,
    pub m: i32,
    pub branch: Branch,
}

impl CylindricalLabel {
    pub fn new(n_rho: u32, p: u32, branch: Branch, params: &SystemParams) -> Result<Self> {
        params.signed_b(branch)?;
        Ok(Self { n_rho, p, m: params.m(), branch })
    }

    pub fn level(&self) -> u32 {
        self.n_rho + self.p
    }
}

/// Either kind of separable-basis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateLabel {
    Spherical(SphericalLabel),
    Cylindrical(CylindricalLabel),
}

/// Ring-shape quantum numbers (valid at P = 0).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RingLabel {
    /// Principal number N and orbital number l, with N − l even.
    Spherical { principal: u32, orbital: u32, m: i32, delta: f64 },
    /// Principal number N and axial number n₃, with N − |m| − n₃ even.
    Cylindrical { principal: u32, axial: u32, m: i32, delta: f64 },
}

pub fn channel_constants(params: &SystemParams) -> ChannelConstants {
    let b = (params.p_strength + 0.25).sqrt();
    let m = params.m as f64;
    let c = (params.q_strength + m * m).sqrt();
    // c ≥ |m| can fail by an ulp when Q is tiny
    let c = c.max(m.abs());
    ChannelConstants { b, c, delta: c - m.abs() }
}

/// A_q = (2q + c ± b + ½)(2q + c ± b + 3/2), eigenvalue of M in the spherical basis.
pub fn separation_constant_a(q: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let sb = params.signed_b(branch)?;
    let s = 2.0 * q as f64 + params.channel().c + sb;
    Ok((s + 0.5) * (s + 1.5))
}

/// E_n = Ω(2n + c ± b + 2).
pub fn energy_level(n: u32, params: &SystemParams, branch: Branch) -> Result<f64> {
    let sb = params.signed_b(branch)?;
    Ok(params.omega * (2.0 * n as f64 + params.channel().c + sb + 2.0))
}

/// (E_ρ, E_z) = (Ω(2n_ρ + c + 1), Ω(2p ± b + 1)).
pub fn energy_cylindrical_parts(
    n_rho: u32,
    p: u32,
    params: &SystemParams,
    branch: Branch,
) -> Result<(f64, f64)> {
    let sb = params.signed_b(branch)?;
    let ch = params.channel();
    let e_rho = params.omega * (2.0 * n_rho as f64 + ch.c + 1.0);
    let e_z = params.omega * (2.0 * p as f64 + sb + 1.0);
    Ok((e_rho, e_z))
}

/// All spherical and cylindrical labels at level `n`, paired as (q = i, p = i),
/// for every admissible branch (Plus first).
pub fn enumerate_level(n: u32, params: &SystemParams) -> Vec<(SphericalLabel, CylindricalLabel)> {
    let m = params.m;
    params
        .admissible_branches()
        .into_iter()
        .flat_map(|branch| {
            (0..=n).map(move |i| {
                (
                    SphericalLabel { n_r: n - i, q: i, m, branch },
                    CylindricalLabel { n_rho: n - i, p: i, m, branch },
                )
            })
        })
        .collect()
}

/// Rewrites a label in ring-shape quantum numbers; requires P = 0.
pub fn ring_relabel(label: &StateLabel, params: &SystemParams) -> Result<RingLabel> {
    if !params.is_ring() {
        return Err(domain(format!(
            "ring relabeling needs P = 0 (b = 1/2), got P = {}",
            params.p_strength
        )));
    }
    let delta = params.channel().delta;
    let odd = |branch: Branch| u32::from(branch == Branch::Plus);
    match *label {
        StateLabel::Spherical(s) => {
            let am = s.m.unsigned_abs();
            Ok(RingLabel::Spherical {
                principal: am + 2 * s.level() + odd(s.branch),
                orbital: am + 2 * s.q + odd(s.branch),
                m: s.m,
                delta,
            })
        }
        StateLabel::Cylindrical(cl) => {
            let am = cl.m.unsigned_abs();
            Ok(RingLabel::Cylindrical {
                principal: am + 2 * cl.level() + odd(cl.branch),
                axial: 2 * cl.p + odd(cl.branch),
                m: cl.m,
                delta,
            })
        }
    }
}

/// Ring-shape separation constant A_l(δ) = (l + δ)(l + δ + 1).
pub fn ring_separation_constant(orbital: u32, delta: f64) -> f64 {
    let s = orbital as f64 + delta;
    s * (s + 1.0)
}

/// Ring-shape energy E_N(δ) = Ω(N + δ + 3/2).
pub fn ring_energy(principal: u32, delta: f64, omega: f64) -> f64 {
    omega * (principal as f64 + delta + 1.5)
}
