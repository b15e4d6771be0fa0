//! Closed-form spectra of circulant graphs and their eigenbases.
//!
//! Every circulant matrix is diagonalized by the Fourier vectors
//! `v_j[i] = ω^{ij} / √n`, `ω = e^{2πi/n}`, with eigenvalue
//! `λ_j = Σ_k (ω^{a_k j} + ω^{-a_k j})`. For odd `n` the pairs `v_j, v_{n-j}`
//! combine into the real cosine/sine vectors `c_j, s_j`, and any rotation of
//! each pair inside its plane gives another real orthonormal eigenbasis.
//!
//! Phases are reduced exactly as `(i j) mod n` before evaluating `cos`/`sin`.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{CirculantSpec, DenseSymMatrix};
use crate::multiplicity::{index_classes, IndexClassPartition};

#[inline]
fn phase(n: usize, k: usize) -> f64 {
    TAU * ((k % n) as f64) / n as f64
}

/// `λ_j` of `A(C_n(a))`.
pub fn analytic_eigenvalue(spec: &CirculantSpec, j: usize) -> Result<f64> {
    let n = spec.n();
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    Ok(spec
        .offsets()
        .iter()
        .map(|&a| {
            let c = phase(n, a * j).cos();
            // The antipodal offset n/2 is a single neighbour.
            if 2 * a == n {
                c
            } else {
                2.0 * c
            }
        })
        .sum())
}

/// All eigenvalues in index order, with exact classes for prime 4-regular specs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTable {
    pub n: usize,
    pub values: Vec<f64>,
    pub classes: Option<IndexClassPartition>,
}

impl SpectrumTable {
    /// Values in ascending order.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

pub fn full_spectrum(spec: &CirculantSpec) -> SpectrumTable {
    let n = spec.n();
    let values = (0..n)
        .map(|j| analytic_eigenvalue(spec, j).expect("index in range"))
        .collect();
    let classes = match spec.offsets() {
        &[a1, a2] => index_classes(n as u64, a1 as u64, a2 as u64).ok(),
        _ => None,
    };
    SpectrumTable { n, values, classes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisFamily {
    ComplexFourier,
    RealCanonical,
    RealRotated,
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisFamily::ComplexFourier => "complex-fourier",
            BasisFamily::RealCanonical => "real-canonical",
            BasisFamily::RealRotated => "real-rotated",
        })
    }
}

/// Tag identifying a basis vector and the eigenvalue index it belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// Fourier vector `v_j` (`v_0` is the constant vector in every family).
    V(usize),
    C(usize),
    S(usize),
    CRot(usize),
    SRot(usize),
}

impl BasisLabel {
    /// The eigenvalue index `j` whose eigenspace contains this vector.
    pub fn eigen_index(self) -> usize {
        match self {
            BasisLabel::V(j)
            | BasisLabel::C(j)
            | BasisLabel::S(j)
            | BasisLabel::CRot(j)
            | BasisLabel::SRot(j) => j,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::V(j) => write!(f, "v{j}"),
            BasisLabel::C(j) => write!(f, "c{j}"),
            BasisLabel::S(j) => write!(f, "s{j}"),
            BasisLabel::CRot(j) => write!(f, "c'{j}"),
            BasisLabel::SRot(j) => write!(f, "s'{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisVectors {
    Complex(Vec<Vec<Complex64>>),
    Real(Vec<Vec<f64>>),
}

/// An ordered orthonormal eigenbasis of every circulant graph of order `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    n: usize,
    family: BasisFamily,
    theta: Option<Vec<f64>>,
    vectors: BasisVectors,
    labels: Vec<BasisLabel>,
}

impl EigenBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> BasisFamily {
        self.family
    }

    pub fn theta(&self) -> Option<&[f64]> {
        self.theta.as_deref()
    }

    pub fn vectors(&self) -> &BasisVectors {
        &self.vectors
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// Real vectors, or `None` for the complex family.
    pub fn real_vectors(&self) -> Option<&[Vec<f64>]> {
        match &self.vectors {
            BasisVectors::Real(v) => Some(v),
            BasisVectors::Complex(_) => None,
        }
    }

    /// `max |<u_a, u_b> - δ_ab|` over all pairs (Hermitian product for the
    /// complex family).
    pub fn gram_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        match &self.vectors {
            BasisVectors::Real(vs) => {
                for (a, u) in vs.iter().enumerate() {
                    for (b, w) in vs.iter().enumerate().skip(a) {
                        let dot: f64 = u.iter().zip(w).map(|(x, y)| x * y).sum();
                        let target = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((dot - target).abs());
                    }
                }
            }
            BasisVectors::Complex(vs) => {
                for (a, u) in vs.iter().enumerate() {
                    for (b, w) in vs.iter().enumerate().skip(a) {
                        let dot: Complex64 = u.iter().zip(w).map(|(x, y)| x.conj() * y).sum();
                        let target = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((dot - target).norm());
                    }
                }
            }
        }
        worst
    }

    /// Largest `‖M u − μ(label) u‖∞` over the basis.
    pub fn max_residual(
        &self,
        matrix: &DenseSymMatrix,
        eigenvalue: impl Fn(BasisLabel) -> f64,
    ) -> Result<f64> {
        let mut worst = 0.0f64;
        for (k, &label) in self.labels.iter().enumerate() {
            let r = match &self.vectors {
                BasisVectors::Real(vs) => verify_eigenpair(matrix, &vs[k], eigenvalue(label))?,
                BasisVectors::Complex(vs) => {
                    verify_complex_eigenpair(matrix, &vs[k], eigenvalue(label))?
                }
            };
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

/// Table of the scaled roots `ω^k / √n`, `k = 0..n`.
#[derive(Debug, Clone)]
pub struct FourierTable {
    roots: Vec<Complex64>,
}

impl FourierTable {
    pub fn new(n: usize) -> Self {
        let scale = 1.0 / (n as f64).sqrt();
        Self {
            roots: (0..n)
                .map(|k| Complex64::from_polar(scale, phase(n, k)))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.roots.len()
    }

    /// `v_j`.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        let n = self.roots.len();
        let step = j % n;
        let mut k = 0;
        (0..n)
            .map(|_| {
                let z = self.roots[k];
                k += step;
                if k >= n {
                    k -= n;
                }
                z
            })
            .collect()
    }
}

/// `v_j`, entry `i` equal to `ω^{ij} / √n`.
pub fn fourier_vector(n: usize, j: usize) -> Vec<Complex64> {
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|i| Complex64::from_polar(scale, phase(n, i * j)))
        .collect()
}

/// `c_j`, entry `i` equal to `√(2/n) cos(2π i j / n)`.
pub fn cosine_vector(n: usize, j: usize) -> Vec<f64> {
    let scale = (2.0 / n as f64).sqrt();
    (0..n).map(|i| scale * phase(n, i * j).cos()).collect()
}

/// `s_j`, entry `i` equal to `√(2/n) sin(2π i j / n)`.
pub fn sine_vector(n: usize, j: usize) -> Vec<f64> {
    let scale = (2.0 / n as f64).sqrt();
    (0..n).map(|i| scale * phase(n, i * j).sin()).collect()
}

/// Constant unit vector `v_0`.
pub fn constant_vector(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

/// `(c'_j, s'_j) = (cos θ c_j + sin θ s_j, −sin θ c_j + cos θ s_j)`.
pub fn rotated_pair(n: usize, j: usize, theta: f64) -> (Vec<f64>, Vec<f64>) {
    let c = cosine_vector(n, j);
    let s = sine_vector(n, j);
    rotate_pair(&c, &s, theta)
}

fn rotate_pair(c: &[f64], s: &[f64], theta: f64) -> (Vec<f64>, Vec<f64>) {
    let (sin, cos) = theta.sin_cos();
    let cr = c.iter().zip(s).map(|(x, y)| cos * x + sin * y).collect();
    let sr = c.iter().zip(s).map(|(x, y)| -sin * x + cos * y).collect();
    (cr, sr)
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&theta) {
        Ok(())
    } else {
        Err(Error::ThetaOutOfRange { theta })
    }
}

fn check_odd(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::OrderTooSmall { n: n as u64 });
    }
    if n.is_multiple_of(2) {
        return Err(Error::EvenOrderUnsupported { n });
    }
    Ok(())
}

/// The unitary Fourier basis `v_0, ..., v_{n-1}`.
pub fn fourier_basis(n: usize) -> Result<EigenBasis> {
    if n < 3 {
        return Err(Error::OrderTooSmall { n: n as u64 });
    }
    let table = FourierTable::new(n);
    let vectors = (0..n).map(|j| table.vector(j)).collect();
    Ok(EigenBasis {
        n,
        family: BasisFamily::ComplexFourier,
        theta: None,
        vectors: BasisVectors::Complex(vectors),
        labels: (0..n).map(BasisLabel::V).collect(),
    })
}

/// `{v_0, c_1, s_1, ..., c_h, s_h}` with `h = (n-1)/2`, `n` odd.
pub fn real_canonical_basis(n: usize) -> Result<EigenBasis> {
    check_odd(n)?;
    let mut vectors = vec![constant_vector(n)];
    let mut labels = vec![BasisLabel::V(0)];
    for j in 1..=(n - 1) / 2 {
        vectors.push(cosine_vector(n, j));
        vectors.push(sine_vector(n, j));
        labels.push(BasisLabel::C(j));
        labels.push(BasisLabel::S(j));
    }
    Ok(EigenBasis {
        n,
        family: BasisFamily::RealCanonical,
        theta: None,
        vectors: BasisVectors::Real(vectors),
        labels,
    })
}

/// `{v_0, c'_1, s'_1, ...}`: each pair `(c_j, s_j)` rotated by `theta[j-1]`.
pub fn rotated_basis(n: usize, theta: &[f64]) -> Result<EigenBasis> {
    check_odd(n)?;
    let half = (n - 1) / 2;
    if theta.len() != half {
        return Err(Error::ThetaLengthMismatch {
            expected: half,
            got: theta.len(),
        });
    }
    for &t in theta {
        check_theta(t)?;
    }
    let mut vectors = vec![constant_vector(n)];
    let mut labels = vec![BasisLabel::V(0)];
    for (j, &t) in (1..=half).zip(theta) {
        let (c, s) = rotated_pair(n, j, t);
        vectors.push(c);
        vectors.push(s);
        labels.push(BasisLabel::CRot(j));
        labels.push(BasisLabel::SRot(j));
    }
    Ok(EigenBasis {
        n,
        family: BasisFamily::RealRotated,
        theta: Some(theta.to_vec()),
        vectors: BasisVectors::Real(vectors),
        labels,
    })
}

/// `‖A v − λ v‖∞`.
pub fn verify_eigenpair(a: &DenseSymMatrix, v: &[f64], lambda: f64) -> Result<f64> {
    let av = a.mul_vec(v)?;
    Ok(av
        .iter()
        .zip(v)
        .map(|(x, y)| (x - lambda * y).abs())
        .fold(0.0, f64::max))
}

/// Complex counterpart of [`verify_eigenpair`] for a real matrix.
pub fn verify_complex_eigenpair(a: &DenseSymMatrix, v: &[Complex64], lambda: f64) -> Result<f64> {
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    let are = a.mul_vec(&re)?;
    let aim = a.mul_vec(&im)?;
    Ok((0..v.len())
        .map(|i| Complex64::new(are[i] - lambda * re[i], aim[i] - lambda * im[i]).norm())
        .fold(0.0, f64::max))
}
