//! Brute-force reference eigensolver.
//!
//! Cyclic-by-row Jacobi on a dense symmetric matrix, plus tolerance-based
//! clustering of the resulting eigenvalues. Nothing here knows about
//! circulant structure; it is the independent check on the closed forms.

use crate::error::{Error, Result};
use crate::graph::DenseSymMatrix;
use crate::multiplicity::IndexClassPartition;

/// Gap tolerances tried in order by [`audited_clusters`].
pub const DEFAULT_GAP_SCHEDULE: [f64; 5] = [1e-6, 1e-7, 1e-8, 1e-9, 1e-10];

/// Tolerance for matching a closed-form eigenvalue against a numeric cluster.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Stop once `off(A) <= tol * ‖A‖_F`.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Largest accepted matrix order.
    pub max_order: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_sweeps: 60,
            max_order: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
    /// Number of completed sweeps.
    pub iterations: usize,
    /// Final off-diagonal Frobenius norm.
    pub offdiag_norm: f64,
}

impl EigenDecomposition {
    /// `‖A − V Λ Vᵀ‖∞` (maximum absolute row sum).
    pub fn reconstruction_error(&self, a: &DenseSymMatrix) -> f64 {
        let n = a.order();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let vlv: f64 = self
                            .values
                            .iter()
                            .zip(&self.vectors)
                            .map(|(l, v)| l * v[i] * v[j])
                            .sum();
                        (a.get(i, j) - vlv).abs()
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// `‖Vᵀ V − I‖∞`.
    pub fn orthogonality_error(&self) -> f64 {
        let vs = &self.vectors;
        (0..vs.len())
            .map(|a| {
                (0..vs.len())
                    .map(|b| {
                        let dot: f64 = vs[a].iter().zip(&vs[b]).map(|(x, y)| x * y).sum();
                        (dot - if a == b { 1.0 } else { 0.0 }).abs()
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Eigenvalues only; skips the eigenvector accumulation.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiValues {
    pub values: Vec<f64>,
    pub iterations: usize,
    pub offdiag_norm: f64,
}

/// Off-diagonal Frobenius norm from the strict upper triangle.
fn off_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for x in &a[p * n + p + 1..(p + 1) * n] {
            s += x * x;
        }
    }
    (2.0 * s).sqrt()
}

#[inline]
fn rotate(x: &mut f64, y: &mut f64, s: f64, tau: f64) {
    let (g, h) = (*x, *y);
    *x = g - s * (h + g * tau);
    *y = h + s * (g - h * tau);
}

/// Runs sweeps in place on the upper triangle of `a` (row-major, the lower
/// triangle is ignored and left stale). `vt` holds eigenvectors as rows.
fn jacobi_in_place(
    a: &mut [f64],
    n: usize,
    mut vt: Option<&mut [f64]>,
    opts: &JacobiOptions,
) -> Result<(usize, f64)> {
    let norm_f = {
        let diag: f64 = (0..n).map(|i| a[i * n + i].powi(2)).sum();
        let off = off_norm(a, n);
        (diag + off * off).sqrt()
    };
    let target = opts.tol * norm_f;
    let mut sweeps = 0;
    loop {
        let off = off_norm(a, n);
        if off <= target {
            return Ok((sweeps, off));
        }
        if sweeps == opts.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                // Upper-triangle entries (k,p),(k,q) for k < p; (p,k),(k,q)
                // for p < k < q; (p,k),(q,k) for k > q.
                for k in 0..p {
                    let (kp, kq) = (k * n + p, k * n + q);
                    let (mut x, mut y) = (a[kp], a[kq]);
                    rotate(&mut x, &mut y, s, tau);
                    a[kp] = x;
                    a[kq] = y;
                }
                for k in (p + 1)..q {
                    let (pk, kq) = (p * n + k, k * n + q);
                    let (mut x, mut y) = (a[pk], a[kq]);
                    rotate(&mut x, &mut y, s, tau);
                    a[pk] = x;
                    a[kq] = y;
                }
                {
                    let (head, tail) = a.split_at_mut(q * n);
                    let row_p = &mut head[p * n + q + 1..(p + 1) * n];
                    let row_q = &mut tail[q + 1..n];
                    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
                        rotate(x, y, s, tau);
                    }
                }
                if let Some(vt) = vt.as_deref_mut() {
                    let (head, tail) = vt.split_at_mut(q * n);
                    let row_p = &mut head[p * n..(p + 1) * n];
                    let row_q = &mut tail[..n];
                    for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
                        rotate(x, y, s, tau);
                    }
                }
            }
        }
        sweeps += 1;
    }
}

fn check_options(a: &DenseSymMatrix, opts: &JacobiOptions) -> Result<()> {
    if a.order() > opts.max_order {
        return Err(Error::OrderTooLarge {
            n: a.order() as u64,
            cap: opts.max_order as u64,
        });
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tol must be positive, got {}",
            opts.tol
        )));
    }
    Ok(())
}

/// Ascending order, ties broken by original position.
fn ascending_order(diag: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..diag.len()).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]).then(x.cmp(&y)));
    order
}

/// Full eigendecomposition by cyclic Jacobi.
///
/// Eigenvectors are sign-normalized so their largest-magnitude entry is
/// positive (first such entry on ties).
pub fn jacobi_eigendecompose(
    a: &DenseSymMatrix,
    opts: &JacobiOptions,
) -> Result<EigenDecomposition> {
    check_options(a, opts)?;
    let n = a.order();
    let mut work = a.as_row_major().to_vec();
    let mut vt = DenseSymMatrix::identity(n).as_row_major().to_vec();
    let (iterations, offdiag_norm) = jacobi_in_place(&mut work, n, Some(&mut vt), opts)?;
    let diag: Vec<f64> = (0..n).map(|i| work[i * n + i]).collect();
    let order = ascending_order(&diag);
    let values = order.iter().map(|&k| diag[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut v = vt[k * n..(k + 1) * n].to_vec();
            let lead = v
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |best, (i, x)| {
                    if x.abs() > best.1 {
                        (i, x.abs())
                    } else {
                        best
                    }
                })
                .0;
            if v[lead] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    Ok(EigenDecomposition {
        values,
        vectors,
        iterations,
        offdiag_norm,
    })
}

/// Eigenvalues by cyclic Jacobi without accumulating eigenvectors.
pub fn jacobi_eigenvalues(a: &DenseSymMatrix, opts: &JacobiOptions) -> Result<JacobiValues> {
    check_options(a, opts)?;
    let n = a.order();
    let mut work = a.as_row_major().to_vec();
    let (iterations, offdiag_norm) = jacobi_in_place(&mut work, n, None, opts)?;
    let mut values: Vec<f64> = (0..n).map(|i| work[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(JacobiValues {
        values,
        iterations,
        offdiag_norm,
    })
}

/// Run of consecutive sorted values whose neighbouring gaps are `<= gap_tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub start: usize,
    pub len: usize,
    pub mean: f64,
    /// `max - min` inside the cluster.
    pub spread: f64,
}

/// Groups ascending `values` into clusters of near-equal entries.
pub fn cluster_eigenvalues(values: &[f64], gap_tol: f64) -> Vec<Cluster> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap_tol {
            let run = &values[start..k];
            if !run.is_empty() {
                clusters.push(Cluster {
                    start,
                    len: run.len(),
                    mean: run.iter().sum::<f64>() / run.len() as f64,
                    spread: run[run.len() - 1] - run[0],
                });
            }
            start = k;
        }
    }
    clusters
}

/// Smallest gap between adjacent clusters at `gap_tol`; `+∞` with fewer
/// than two clusters.
pub fn min_distinct_gap(values: &[f64], gap_tol: f64) -> f64 {
    let clusters = cluster_eigenvalues(values, gap_tol);
    clusters
        .windows(2)
        .map(|w| values[w[1].start] - values[w[0].start + w[0].len - 1])
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapAudit {
    pub gap_tol: f64,
    pub min_distinct_gap: f64,
    pub max_spread: f64,
}

impl GapAudit {
    /// Clusters are trusted when they are separated by at least `100 gap_tol`
    /// and each is internally tighter than `gap_tol / 100`.
    pub fn passes(&self) -> bool {
        self.min_distinct_gap >= 100.0 * self.gap_tol && self.max_spread <= self.gap_tol / 100.0
    }
}

pub fn spectral_gap_audit(values: &[f64], gap_tol: f64) -> GapAudit {
    let clusters = cluster_eigenvalues(values, gap_tol);
    GapAudit {
        gap_tol,
        min_distinct_gap: min_distinct_gap(values, gap_tol),
        max_spread: clusters.iter().map(|c| c.spread).fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditedClustering {
    pub clusters: Vec<Cluster>,
    pub audit: GapAudit,
}

/// Clusters at the first tolerance in `schedule` whose audit passes.
pub fn audited_clusters(values: &[f64], schedule: &[f64]) -> Result<AuditedClustering> {
    let mut last = f64::NAN;
    for &gap_tol in schedule {
        let audit = spectral_gap_audit(values, gap_tol);
        if audit.passes() {
            return Ok(AuditedClustering {
                clusters: cluster_eigenvalues(values, gap_tol),
                audit,
            });
        }
        last = gap_tol;
    }
    Err(Error::AuditFailed { gap_tol: last })
}

/// Outcome of comparing numeric clusters with an exact index partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCheck {
    pub matches: bool,
    /// `max_j |λ_j − mean of the cluster j is assigned to|`.
    pub max_deviation: f64,
    pub numeric_classes: Vec<Vec<usize>>,
}

/// Checks that numeric clusters of the sorted spectrum reproduce `expected`.
///
/// Indices are ordered by their closed-form value `analytic[j]` and assigned
/// to the clusters position by position; the result matches when every
/// index lies within [`MATCH_TOL`] of its cluster mean and the induced
/// partition equals `expected`.
pub fn check_classes(
    analytic: &[f64],
    clusters: &[Cluster],
    expected: &IndexClassPartition,
) -> ClassCheck {
    let mut order: Vec<usize> = (0..analytic.len()).collect();
    order.sort_by(|&x, &y| analytic[x].total_cmp(&analytic[y]).then(x.cmp(&y)));
    let total: usize = clusters.iter().map(|c| c.len).sum();
    if total != analytic.len() {
        return ClassCheck {
            matches: false,
            max_deviation: f64::INFINITY,
            numeric_classes: Vec::new(),
        };
    }
    let mut max_deviation = 0.0f64;
    let mut groups = Vec::with_capacity(clusters.len());
    for c in clusters {
        let members: Vec<usize> = order[c.start..c.start + c.len].to_vec();
        for &j in &members {
            max_deviation = max_deviation.max((analytic[j] - c.mean).abs());
        }
        groups.push(members);
    }
    let induced = IndexClassPartition::from_groups(analytic.len(), groups.clone());
    let matches = max_deviation <= MATCH_TOL && induced.as_ref() == Some(expected);
    let mut numeric_classes = groups;
    numeric_classes.iter_mut().for_each(|g| g.sort_unstable());
    numeric_classes.sort_unstable_by_key(|g| g[0]);
    ClassCheck {
        matches,
        max_deviation,
        numeric_classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CirculantSpec;
    use crate::multiplicity::index_classes;
    use crate::spectral::full_spectrum;

    #[test]
    fn identity_and_exchange() {
        let d =
            jacobi_eigendecompose(&DenseSymMatrix::identity(5), &JacobiOptions::default()).unwrap();
        assert_eq!(d.values, vec![1.0; 5]);
        assert_eq!(d.iterations, 0);
        assert!(d.orthogonality_error() < 1e-15);

        let x = DenseSymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let d = jacobi_eigendecompose(&x, &JacobiOptions::default()).unwrap();
        assert!((d.values[0] + 1.0).abs() < 1e-15 && (d.values[1] - 1.0).abs() < 1e-15);
        assert!(d.reconstruction_error(&x) < 1e-15);
        // Sign convention: largest entry positive.
        for v in &d.vectors {
            let lead = v
                .iter()
                .cloned()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn worked_example_matches_closed_form() {
        let spec = CirculantSpec::new(13, vec![2, 3]).unwrap();
        let a = spec.adjacency_matrix();
        let d = jacobi_eigendecompose(&a, &JacobiOptions::default()).unwrap();
        let analytic = full_spectrum(&spec).sorted_values();
        for (x, y) in d.values.iter().zip(&analytic) {
            assert!((x - y).abs() < 1e-10);
        }
        let sizes: Vec<usize> = cluster_eigenvalues(&d.values, 1e-6)
            .iter()
            .map(|c| c.len)
            .collect();
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 4, 4, 4]);
        assert!(min_distinct_gap(&d.values, 1e-6) > 0.1);
        for (l, v) in d.values.iter().zip(&d.vectors) {
            assert!(crate::spectral::verify_eigenpair(&a, v, *l).unwrap() < 1e-8);
        }
    }

    #[test]
    fn small_prime_clusters() {
        let spec = CirculantSpec::new(7, vec![1, 2]).unwrap();
        let v = jacobi_eigenvalues(&spec.adjacency_matrix(), &JacobiOptions::default()).unwrap();
        let mut sizes: Vec<usize> = cluster_eigenvalues(&v.values, 1e-6)
            .iter()
            .map(|c| c.len)
            .collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 2, 2]);
        assert!(spectral_gap_audit(&v.values, 1e-6).passes());
        let analytic = full_spectrum(&spec).values;
        let check = check_classes(
            &analytic,
            &cluster_eigenvalues(&v.values, 1e-6),
            &index_classes(7, 1, 2).unwrap(),
        );
        assert!(check.matches, "{check:?}");
    }

    #[test]
    fn clustering_edge_cases() {
        let c = cluster_eigenvalues(&[2.0; 6], 1e-6);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].len, 6);
        assert_eq!(min_distinct_gap(&[2.0; 6], 1e-6), f64::INFINITY);
        assert!(cluster_eigenvalues(&[], 1e-6).is_empty());
    }

    #[test]
    fn audit_detects_hidden_merge() {
        // Two distinct values 3e-7 apart merge at 1e-6; the spread check
        // rejects that clustering and the schedule refines.
        let values = [0.0, 1.0, 1.0 + 3e-7, 2.0];
        let a = spectral_gap_audit(&values, 1e-6);
        assert!(!a.passes());
        let fine = audited_clusters(&values, &DEFAULT_GAP_SCHEDULE).unwrap();
        assert_eq!(fine.clusters.len(), 4);
        assert_eq!(fine.audit.gap_tol, 1e-9);
        assert!(matches!(
            audited_clusters(&values, &[1e-6]),
            Err(Error::AuditFailed { .. })
        ));
    }

    #[test]
    fn no_convergence_is_reported() {
        let spec = CirculantSpec::new(9, vec![1, 2]).unwrap();
        let opts = JacobiOptions {
            max_sweeps: 1,
            ..JacobiOptions::default()
        };
        assert!(matches!(
            jacobi_eigendecompose(&spec.adjacency_matrix(), &opts),
            Err(Error::NoConvergence { sweeps: 1, .. })
        ));
    }

    #[test]
    fn order_cap() {
        let a = DenseSymMatrix::identity(10);
        let opts = JacobiOptions {
            max_order: 8,
            ..JacobiOptions::default()
        };
        assert_eq!(
            jacobi_eigenvalues(&a, &opts),
            Err(Error::OrderTooLarge { n: 10, cap: 8 })
        );
    }
}
