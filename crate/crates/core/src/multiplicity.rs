//! Exact eigenvalue coincidences of 4-regular circulant graphs of prime order.
//!
//! For prime `n` and `C_n(a1, a2)`, the eigenvalues satisfy `λ_j = λ_k` iff
//! `n | j + k`, or `n | a1² + a2²` and `n | j² + k²`. Indices are grouped
//! with a union-find over those two relations; everything here is integer
//! arithmetic, no floating point.

use crate::arith::{inverse_mod, is_prime, primes_up_to};
use crate::error::{Error, Result};

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Groups as sorted lists, ordered by smallest member.
    pub fn groups(&mut self) -> Vec<Vec<usize>> {
        let len = self.parent.len();
        let mut slot = vec![usize::MAX; len];
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for x in 0..len {
            let root = self.find(x);
            if slot[root] == usize::MAX {
                slot[root] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[root]].push(x);
        }
        groups
    }
}

/// Partition of `{0, ..., n-1}` into classes of indices sharing an eigenvalue.
///
/// Classes are sorted internally and ordered by their minimum element, so
/// `{0}` is always first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexClassPartition {
    n: usize,
    classes: Vec<Vec<usize>>,
}

impl IndexClassPartition {
    /// Canonicalizes an arbitrary grouping of `0..n`; returns `None` unless it
    /// is a true partition.
    pub fn from_groups(n: usize, groups: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; n];
        let mut classes = groups;
        for class in &mut classes {
            if class.is_empty() {
                return None;
            }
            class.sort_unstable();
            for &j in class.iter() {
                if j >= n || std::mem::replace(&mut seen[j], true) {
                    return None;
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Some(Self { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Class id of every index, `ids[j]` being the position of `j`'s class.
    pub fn class_ids(&self) -> Vec<usize> {
        let mut ids = vec![0; self.n];
        for (id, class) in self.classes.iter().enumerate() {
            for &j in class {
                ids[j] = id;
            }
        }
        ids
    }
}

fn check_prime_order(n: u64) -> Result<()> {
    if n >= 1 << 32 {
        return Err(Error::ArithmeticOverflow { n });
    }
    if !is_prime(n) {
        return Err(Error::NotPrime { n });
    }
    Ok(())
}

fn check_pair(n: u64, a1: u64, a2: u64) -> Result<()> {
    check_prime_order(n)?;
    if a1 >= a2 {
        return Err(Error::InvalidPair {
            offsets: vec![a1, a2],
        });
    }
    for a in [a1, a2] {
        if a < 1 || 2 * a > n {
            return Err(Error::OffsetOutOfRange { n, offset: a });
        }
    }
    Ok(())
}

/// Whether `n | a1² + a2²`, for prime `n` and a valid pair.
pub fn divides_sum_of_squares(n: u64, a1: u64, a2: u64) -> Result<bool> {
    check_pair(n, a1, a2)?;
    Ok(sum_of_squares_residue(n, a1, a2) == 0)
}

fn sum_of_squares_residue(n: u64, a1: u64, a2: u64) -> u64 {
    // a < n < 2^32, so the squares fit in u64.
    ((a1 % n).pow(2) % n + (a2 % n).pow(2) % n) % n
}

/// Eigenvalue-index classes of `A(C_n(a1, a2))` for prime `n`.
pub fn index_classes(n: u64, a1: u64, a2: u64) -> Result<IndexClassPartition> {
    check_pair(n, a1, a2)?;
    let len = n as usize;
    let mut uf = UnionFind::new(len);
    for j in 1..len {
        uf.union(j, len - j);
    }
    if sum_of_squares_residue(n, a1, a2) == 0 {
        // roots[r] lists every k with k² ≡ r (mod n); at most two for prime n.
        let mut roots: Vec<Vec<usize>> = vec![Vec::new(); len];
        for k in 1..len {
            roots[(k * k) % len].push(k);
        }
        for j in 1..len {
            let target = (len - (j * j) % len) % len;
            for &k in &roots[target] {
                uf.union(j, k);
            }
        }
    }
    Ok(IndexClassPartition::from_groups(len, uf.groups()).expect("union-find yields a partition"))
}

/// Largest eigenvalue multiplicity of `A(C_n(a1, a2))` for prime `n`.
pub fn max_multiplicity(n: u64, a1: u64, a2: u64) -> Result<usize> {
    Ok(index_classes(n, a1, a2)?.max_class_size())
}

/// Primes `n <= n_max` with `2 a2 <= n` and `n ∤ a1² + a2²`, ascending.
///
/// These orders give graphs whose eigenvalues have multiplicity at most two.
pub fn admissible_primes(a1: u64, a2: u64, n_max: u64) -> Result<Vec<u64>> {
    if a1 < 1 || a1 >= a2 {
        return Err(Error::InvalidPair {
            offsets: vec![a1, a2],
        });
    }
    let sum = a1 * a1 + a2 * a2;
    Ok(primes_up_to(n_max)
        .into_iter()
        .filter(|&n| 2 * a2 <= n && !sum.is_multiple_of(n))
        .collect())
}

/// Representative `b` such that `C_n(a1, a2)` is isomorphic to `C_n(1, b)`.
///
/// Relabelling vertices by `i -> u i` (a unit `u` mod `n`) is a permutation
/// similarity of adjacency matrices. Taking `u = ±a1⁻¹` maps `{±a1, ±a2}`
/// onto `{±1, ±a2/a1}`, and `u = ±a2⁻¹` onto `{±1, ±a1/a2}`; the smaller of
/// the two normalized ratios is returned, so isomorphic pairs share a
/// representative. `b` lies in `2..=(n-1)/2`.
pub fn unit_normal_form(n: u64, a1: u64, a2: u64) -> Result<u64> {
    check_pair(n, a1, a2)?;
    let fold = |x: u64| x.min(n - x);
    let ratio = |num: u64, den: u64| fold(num * inverse_mod(den, n).expect("prime modulus") % n);
    Ok(ratio(a2, a1).min(ratio(a1, a2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_flag() {
        assert!(divides_sum_of_squares(13, 2, 3).unwrap());
        assert!(!divides_sum_of_squares(7, 1, 2).unwrap());
        assert!(divides_sum_of_squares(5, 1, 2).unwrap());
        assert_eq!(
            divides_sum_of_squares(9, 1, 2),
            Err(Error::NotPrime { n: 9 })
        );
    }

    #[test]
    fn worked_example_classes() {
        let p = index_classes(13, 2, 3).unwrap();
        assert_eq!(
            p.classes(),
            &[
                vec![0],
                vec![1, 5, 8, 12],
                vec![2, 3, 10, 11],
                vec![4, 6, 7, 9]
            ]
        );
        assert_eq!(max_multiplicity(13, 2, 3).unwrap(), 4);
    }

    #[test]
    fn small_prime_classes() {
        // Frozen from a numpy eigvalsh clustering of the adjacency matrices.
        let p = index_classes(7, 1, 2).unwrap();
        assert_eq!(p.classes(), &[vec![0], vec![1, 6], vec![2, 5], vec![3, 4]]);
        let k5 = index_classes(5, 1, 2).unwrap();
        assert_eq!(k5.classes(), &[vec![0], vec![1, 2, 3, 4]]);
        assert_eq!(max_multiplicity(7, 1, 2).unwrap(), 2);
        assert_eq!(max_multiplicity(11, 1, 2).unwrap(), 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(index_classes(15, 1, 2), Err(Error::NotPrime { n: 15 }));
        assert!(matches!(
            index_classes(13, 3, 2),
            Err(Error::InvalidPair { .. })
        ));
        assert!(matches!(
            index_classes(13, 2, 7),
            Err(Error::OffsetOutOfRange { offset: 7, .. })
        ));
        assert!(matches!(
            index_classes(1 << 33, 1, 2),
            Err(Error::ArithmeticOverflow { .. })
        ));
    }

    #[test]
    fn admissible_prime_lists() {
        assert_eq!(admissible_primes(2, 3, 20).unwrap(), vec![7, 11, 17, 19]);
        assert_eq!(admissible_primes(1, 2, 12).unwrap(), vec![7, 11]);
        assert!(admissible_primes(1, 1, 50).is_err());
    }

    #[test]
    fn class_structure_on_primes() {
        for n in primes_up_to(200).into_iter().filter(|&n| n >= 5) {
            for a1 in 1..=(n - 1) / 2 {
                for a2 in (a1 + 1)..=(n - 1) / 2 {
                    let p = index_classes(n, a1, a2).unwrap();
                    assert_eq!(p.classes()[0], vec![0]);
                    let ids = p.class_ids();
                    let nu = n as usize;
                    for j in 1..nu {
                        assert_eq!(ids[j], ids[nu - j]);
                    }
                    let divides = divides_sum_of_squares(n, a1, a2).unwrap();
                    for s in &p.sizes()[1..] {
                        if divides {
                            assert!(*s == 2 || *s == 4, "n={n} a=({a1},{a2}) size {s}");
                        } else {
                            assert_eq!(*s, 2, "n={n} a=({a1},{a2})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normal_form_is_isomorphic_offset_set() {
        for n in [5u64, 13, 29, 97] {
            for a1 in 1..=(n - 1) / 2 {
                for a2 in (a1 + 1)..=(n - 1) / 2 {
                    let b = unit_normal_form(n, a1, a2).unwrap();
                    assert!(b >= 2 && 2 * b < n);
                    let mut target = vec![1, n - 1, b, n - b];
                    target.sort_unstable();
                    let maps_onto = |u: u64| {
                        let mut mapped: Vec<u64> =
                            [a1, n - a1, a2, n - a2].iter().map(|x| x * u % n).collect();
                        mapped.sort_unstable();
                        mapped == target
                    };
                    assert!((1..n).any(maps_onto), "n={n} a=({a1},{a2}) b={b}");
                }
            }
        }
    }

    #[test]
    fn partition_rejects_overlap() {
        assert!(IndexClassPartition::from_groups(3, vec![vec![0, 1], vec![1, 2]]).is_none());
        assert!(IndexClassPartition::from_groups(3, vec![vec![0, 1]]).is_none());
        let p = IndexClassPartition::from_groups(3, vec![vec![2, 1], vec![0]]).unwrap();
        assert_eq!(p.classes(), &[vec![0], vec![1, 2]]);
    }
}
