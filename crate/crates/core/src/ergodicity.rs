//! Eigenvector probability measures on vertex subsets and equidistribution
//! sweeps.
//!
//! A unit vector `ψ` puts mass `|ψ(v)|²` on vertex `v`. A sweep follows one
//! eigenvector per graph order together with a subset per order and records
//! `y_n = μ_ψ(S_n)`; equidistribution means `y_n` tracks `|S_n|/n`.
//!
//! For the sine witness `s_{(n-1)/2}` on the centred arc of half-width
//! `⌊np/2⌋`, `y_n = (4/n) Σ_{k=1}^{m} sin²(πk/n)`, whose limit is
//! `4∫_0^{p/2} sin²(πx) dx = p − sin(πp)/π`, strictly below `p`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::CirculantSpec;
use crate::spectral::{
    check_theta, constant_vector, cosine_vector, fourier_vector, rotated_pair, sine_vector,
    BasisFamily, BasisLabel,
};

/// Anything whose squared modulus is a probability weight.
pub trait Amplitude: Copy {
    fn weight(self) -> f64;
}

impl Amplitude for f64 {
    #[inline]
    fn weight(self) -> f64 {
        self * self
    }
}

impl Amplitude for Complex64 {
    #[inline]
    fn weight(self) -> f64 {
        self.norm_sqr()
    }
}

/// Sorted, duplicate-free subset of `{0, ..., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSubset {
    n: usize,
    members: Vec<usize>,
}

impl VertexSubset {
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self { n, members })
    }

    /// Builds from signed labels, reducing each modulo `n`.
    pub fn from_labels(n: usize, labels: impl IntoIterator<Item = i64>) -> Self {
        let members = labels.into_iter().map(|l| l.rem_euclid(n as i64) as usize);
        Self::new(n, members).expect("labels reduced mod n")
    }

    pub fn full(n: usize) -> Self {
        Self {
            n,
            members: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn density(&self) -> f64 {
        self.members.len() as f64 / self.n as f64
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            members: (0..self.n).filter(|&v| !self.contains(v)).collect(),
        }
    }

    pub fn with(&self, v: usize) -> Result<Self> {
        Self::new(
            self.n,
            self.members.iter().copied().chain(std::iter::once(v)),
        )
    }
}

/// `μ_ψ(S) = Σ_{v∈S} |ψ(v)|²`.
pub fn measure<T: Amplitude>(psi: &[T], subset: &VertexSubset) -> Result<f64> {
    if psi.len() != subset.n() {
        return Err(Error::DimensionMismatch {
            expected: subset.n(),
            got: psi.len(),
        });
    }
    let norm = psi.iter().map(|x| x.weight()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 || norm.is_nan() {
        return Err(Error::NotNormalized { norm });
    }
    Ok(subset.members().iter().map(|&v| psi[v].weight()).sum())
}

fn check_density(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::DensityOutOfRange { p, range: "(0, 1)" })
    }
}

/// `{-m, ..., m}` mod `n` with `m = ⌊np/2⌋`.
pub fn symmetric_arc(n: usize, p: f64) -> Result<VertexSubset> {
    check_density(p)?;
    let m = (n as f64 * p / 2.0).floor() as i64;
    Ok(VertexSubset::from_labels(n, -m..=m))
}

/// Labels `⌈−np/2 − nθ/π⌉ ..= ⌊np/2 − nθ/π⌋`, reduced mod `n`.
///
/// The end points are taken literally, so at `θ = 0` this can differ from
/// [`symmetric_arc`] by one boundary vertex.
pub fn shifted_arc(n: usize, p: f64, theta: f64) -> Result<VertexSubset> {
    check_density(p)?;
    check_theta(theta)?;
    let half = n as f64 * p / 2.0;
    let shift = n as f64 * theta / PI;
    let lo = (-half - shift).ceil() as i64;
    let hi = (half - shift).floor() as i64;
    Ok(VertexSubset::from_labels(n, lo..=hi))
}

/// Upper bound `π² p³ / 6` on the witness limit, meaningful for `p < √6/π`.
pub fn cubic_density_bound(p: f64) -> Result<f64> {
    let max = 6f64.sqrt() / PI;
    if p > 0.0 && p < max {
        Ok(PI * PI * p.powi(3) / 6.0)
    } else {
        Err(Error::DensityOutOfRange {
            p,
            range: "(0, sqrt(6)/pi)",
        })
    }
}

/// Limit `p − sin(πp)/π` of the witness measure on symmetric arcs.
pub fn witness_limit(p: f64) -> Result<f64> {
    check_density(p)?;
    Ok(p - (PI * p).sin() / PI)
}

/// Finite-order bound `π² (np)(np+1)(np+2) / (6 n³)` on the witness
/// measure of the symmetric arc.
pub fn finite_order_bound(n: usize, p: f64) -> f64 {
    let x = n as f64 * p;
    PI * PI * x * (x + 1.0) * (x + 2.0) / (6.0 * (n as f64).powi(3))
}

/// Per-order angle source.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaSchedule {
    Zero,
    Constant(f64),
    /// One angle per entry of the sweep's order list.
    PerOrder(Vec<f64>),
}

impl ThetaSchedule {
    fn at(&self, position: usize) -> f64 {
        match self {
            ThetaSchedule::Zero => 0.0,
            ThetaSchedule::Constant(t) => *t,
            ThetaSchedule::PerOrder(ts) => ts[position],
        }
    }

    fn validate(&self, orders: usize) -> Result<()> {
        match self {
            ThetaSchedule::Zero => Ok(()),
            ThetaSchedule::Constant(t) => check_theta(*t),
            ThetaSchedule::PerOrder(ts) => {
                if ts.len() != orders {
                    return Err(Error::ThetaLengthMismatch {
                        expected: orders,
                        got: ts.len(),
                    });
                }
                ts.iter().try_for_each(|&t| check_theta(t))
            }
        }
    }
}

/// Which eigenbasis family to draw the tracked vector from. A rotated basis
/// uses the same angle for every pair at a given order.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisRule {
    Fourier,
    Canonical,
    Rotated(ThetaSchedule),
}

/// Which vector of the basis to follow as `n` grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigvecSelector {
    /// `v_{(n-1)/2}`, `s_{(n-1)/2}` or `s'_{(n-1)/2}` depending on the family.
    Witness,
    /// `v_j` (Fourier family only).
    Fourier(usize),
    /// `c_j` or `c'_j` (real families, `1 <= j <= (n-1)/2`).
    Cosine(usize),
    /// `s_j` or `s'_j` (real families, `1 <= j <= (n-1)/2`).
    Sine(usize),
    /// `v_0`.
    Constant,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SubsetRule {
    SymmetricArc {
        p: f64,
    },
    ShiftedArc {
        p: f64,
        theta: ThetaSchedule,
    },
    /// The same members at every order.
    Custom(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetKind {
    SymmetricArc,
    ShiftedArc,
    Custom,
}

impl std::fmt::Display for SubsetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SubsetKind::SymmetricArc => "symmetric-arc",
            SubsetKind::ShiftedArc => "shifted-arc",
            SubsetKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Offsets of the graph family `C_n(a)`; every order must give a valid spec.
    pub offsets: Vec<usize>,
    /// Strictly increasing odd orders.
    pub orders: Vec<usize>,
    pub basis: BasisRule,
    pub eigvec: EigvecSelector,
    pub subset: SubsetRule,
    /// Worker threads; `<= 1` runs sequentially.
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub n: usize,
    pub subset_size: usize,
    pub density: f64,
    pub y: f64,
    pub eigvec_label: BasisLabel,
    pub theta_used: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSeries {
    pub records: Vec<SweepRecord>,
    /// Limiting subset density, absent for custom subsets.
    pub target_p: Option<f64>,
    pub family: BasisFamily,
    pub subset_rule: SubsetKind,
}

enum Tracked {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

fn select_vector(
    n: usize,
    basis: &BasisRule,
    theta: f64,
    selector: EigvecSelector,
) -> Result<(Tracked, BasisLabel)> {
    let half = (n - 1) / 2;
    let pair_index = |j: usize| {
        if (1..=half).contains(&j) {
            Ok(j)
        } else {
            Err(Error::IndexOutOfRange {
                index: j,
                n: half + 1,
            })
        }
    };
    let wrong_family = || {
        Err(Error::InvalidArgument(format!(
            "selector {selector:?} does not belong to the {basis:?} basis"
        )))
    };
    if selector == EigvecSelector::Constant {
        return Ok((Tracked::Real(constant_vector(n)), BasisLabel::V(0)));
    }
    match basis {
        BasisRule::Fourier => {
            let j = match selector {
                EigvecSelector::Witness => half,
                EigvecSelector::Fourier(j) if j < n => j,
                EigvecSelector::Fourier(j) => return Err(Error::IndexOutOfRange { index: j, n }),
                _ => return wrong_family(),
            };
            Ok((Tracked::Complex(fourier_vector(n, j)), BasisLabel::V(j)))
        }
        BasisRule::Canonical => match selector {
            EigvecSelector::Witness => {
                Ok((Tracked::Real(sine_vector(n, half)), BasisLabel::S(half)))
            }
            EigvecSelector::Sine(j) => {
                let j = pair_index(j)?;
                Ok((Tracked::Real(sine_vector(n, j)), BasisLabel::S(j)))
            }
            EigvecSelector::Cosine(j) => {
                let j = pair_index(j)?;
                Ok((Tracked::Real(cosine_vector(n, j)), BasisLabel::C(j)))
            }
            _ => wrong_family(),
        },
        BasisRule::Rotated(_) => {
            let (j, want_sine) = match selector {
                EigvecSelector::Witness => (half, true),
                EigvecSelector::Sine(j) => (pair_index(j)?, true),
                EigvecSelector::Cosine(j) => (pair_index(j)?, false),
                _ => return wrong_family(),
            };
            let (c, s) = rotated_pair(n, j, theta);
            Ok(if want_sine {
                (Tracked::Real(s), BasisLabel::SRot(j))
            } else {
                (Tracked::Real(c), BasisLabel::CRot(j))
            })
        }
    }
}

fn sweep_record(cfg: &SweepConfig, position: usize, n: usize) -> Result<SweepRecord> {
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrder { n });
    }
    CirculantSpec::new(n, cfg.offsets.clone())?;
    let theta = match &cfg.basis {
        BasisRule::Rotated(schedule) => Some(schedule.at(position)),
        _ => None,
    };
    let (psi, label) = select_vector(n, &cfg.basis, theta.unwrap_or(0.0), cfg.eigvec)?;
    let subset = match &cfg.subset {
        SubsetRule::SymmetricArc { p } => symmetric_arc(n, *p)?,
        SubsetRule::ShiftedArc { p, theta } => shifted_arc(n, *p, theta.at(position))?,
        SubsetRule::Custom(members) => VertexSubset::new(n, members.iter().copied())?,
    };
    let y = match &psi {
        Tracked::Real(v) => measure(v, &subset)?,
        Tracked::Complex(v) => measure(v, &subset)?,
    };
    Ok(SweepRecord {
        n,
        subset_size: subset.len(),
        density: subset.density(),
        y,
        eigvec_label: label,
        theta_used: theta,
    })
}

/// Runs the sweep; records come back ordered by `n` whatever `jobs` is.
pub fn dque_sweep(cfg: &SweepConfig) -> Result<SweepSeries> {
    for w in cfg.orders.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::OrdersNotIncreasing {
                prev: w[0],
                next: w[1],
            });
        }
    }
    if let BasisRule::Rotated(schedule) = &cfg.basis {
        schedule.validate(cfg.orders.len())?;
    }
    let (target_p, subset_rule) = match &cfg.subset {
        SubsetRule::SymmetricArc { p } => {
            check_density(*p)?;
            (Some(*p), SubsetKind::SymmetricArc)
        }
        SubsetRule::ShiftedArc { p, theta } => {
            check_density(*p)?;
            theta.validate(cfg.orders.len())?;
            (Some(*p), SubsetKind::ShiftedArc)
        }
        SubsetRule::Custom(_) => (None, SubsetKind::Custom),
    };
    let family = match cfg.basis {
        BasisRule::Fourier => BasisFamily::ComplexFourier,
        BasisRule::Canonical => BasisFamily::RealCanonical,
        BasisRule::Rotated(_) => BasisFamily::RealRotated,
    };

    let indexed: Vec<(usize, usize)> = cfg.orders.iter().copied().enumerate().collect();
    let records = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| {
            indexed
                .par_iter()
                .map(|&(pos, n)| sweep_record(cfg, pos, n))
                .collect::<Result<Vec<_>>>()
        })?
    } else {
        indexed
            .iter()
            .map(|&(pos, n)| sweep_record(cfg, pos, n))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(SweepSeries {
        records,
        target_p,
        family,
        subset_rule,
    })
}
