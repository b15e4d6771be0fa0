//! Spectra and eigenvector equidistribution for circulant graphs.
//!
//! * [`graph`]: `C_n(a_1, ..., a_m)`, adjacency and Laplacian matrices.
//! * [`multiplicity`]: exact eigenvalue classes for prime-order 4-regular graphs.
//! * [`spectral`]: closed-form eigenvalues; Fourier, cosine/sine and rotated bases.
//! * [`oracle`]: dense Jacobi eigensolver and eigenvalue clustering.
//! * [`ergodicity`]: vertex measures, arc subsets and equidistribution sweeps.

pub mod arith;
pub mod ergodicity;
pub mod error;
pub mod graph;
pub mod multiplicity;
pub mod oracle;
pub mod spectral;

pub use ergodicity::{
    cubic_density_bound, dque_sweep, finite_order_bound, measure, shifted_arc, symmetric_arc,
    witness_limit, BasisRule, EigvecSelector, SubsetKind, SubsetRule, SweepConfig, SweepRecord,
    SweepSeries, ThetaSchedule, VertexSubset,
};
pub use error::{Error, Result};
pub use graph::{CirculantSpec, DenseSymMatrix};
pub use multiplicity::{
    admissible_primes, divides_sum_of_squares, index_classes, max_multiplicity, IndexClassPartition,
};
pub use oracle::{
    audited_clusters, cluster_eigenvalues, jacobi_eigendecompose, jacobi_eigenvalues,
    spectral_gap_audit, EigenDecomposition, JacobiOptions,
};
pub use spectral::{
    analytic_eigenvalue, fourier_basis, full_spectrum, real_canonical_basis, rotated_basis,
    verify_eigenpair, BasisFamily, BasisLabel, EigenBasis, FourierTable, SpectrumTable,
};

/// Size caps for anything that materializes dense `n × n` data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: usize,
    pub oracle_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_n: 20_000,
            oracle_max_n: 512,
        }
    }
}

impl Limits {
    pub fn check_order(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::OrderTooLarge {
                n: n as u64,
                cap: self.max_n as u64,
            });
        }
        Ok(())
    }

    pub fn check_oracle_order(&self, n: usize) -> Result<()> {
        if n > self.oracle_max_n {
            return Err(Error::OrderTooLarge {
                n: n as u64,
                cap: self.oracle_max_n as u64,
            });
        }
        Ok(())
    }
}
