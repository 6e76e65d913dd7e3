//! Cayley–Sylvester dimension counts, Poincaré series and their numerators
//! over a system of parameters.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("series known through degree {have}, need degree {need} to pin down the numerator")]
    TooShort { have: usize, need: usize },
    #[error("parameter degrees must be positive")]
    ZeroDegree,
}

/// Coefficients of the Gaussian binomial `[m+n choose m]_q` up to `q^limit`.
/// Entry `k` counts partitions of `k` into at most `m` parts, each at most `n`.
pub fn gaussian_binomial(m: u32, n: u32, limit: usize) -> Vec<BigInt> {
    let top = (m as usize * n as usize).min(limit);
    let mut c = vec![BigInt::zero(); top + 1];
    c[0] = BigInt::from(1);
    // After step i the vector holds [n+i choose i]_q.
    for i in 1..=m as usize {
        let up = n as usize + i;
        for k in (up..=top).rev() {
            let t = c[k - up].clone();
            c[k] -= t;
        }
        for k in i..=top {
            let t = c[k - i].clone();
            c[k] += t;
        }
    }
    c
}

/// Partitions of `k` into at most `max_parts` parts, each at most `max_part`.
pub fn partition_count(k: u64, max_parts: u32, max_part: u32) -> BigInt {
    if k > max_parts as u64 * max_part as u64 {
        return BigInt::zero();
    }
    gaussian_binomial(max_parts, max_part, k as usize).swap_remove(k as usize)
}

/// Dimension of the covariants of order `order` and degree `d` of the binary
/// form of order `n`.
pub fn dim_covariants(n: u32, d: u32, order: u32) -> BigInt {
    let total = n as u64 * d as u64;
    if (order as u64) > total || (total - order as u64) % 2 == 1 {
        return BigInt::zero();
    }
    let w = (total - order as u64) / 2;
    let g = gaussian_binomial(d, n, w as usize);
    let at = |k: u64| g.get(k as usize).cloned().unwrap_or_default();
    if w == 0 {
        return at(0);
    }
    at(w) - at(w - 1)
}

/// `dim I_m` for the binary form of order `n`.
pub fn dim_invariants(n: u32, m: u32) -> BigInt {
    dim_covariants(n, m, 0)
}

/// `dim I_m - dim I_(m-2)`, the dimension of `I_m / j2 I_(m-2)` when a
/// quadratic invariant exists.
pub fn quotient_dim(n: u32, m: u32) -> BigInt {
    let below = if m >= 2 {
        dim_invariants(n, m - 2)
    } else {
        BigInt::zero()
    };
    dim_invariants(n, m) - below
}

/// Coefficients of the Poincaré series `sum dim I_m t^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionTable {
    pub n: u32,
    pub coeffs: Vec<BigInt>,
}

impl DimensionTable {
    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn get(&self, m: usize) -> Option<&BigInt> {
        self.coeffs.get(m)
    }
}

pub fn poincare_table(n: u32, max_degree: u32) -> DimensionTable {
    DimensionTable {
        n,
        coeffs: (0..=max_degree).map(|m| dim_invariants(n, m)).collect(),
    }
}

/// `a(t) = P(t) * prod (1 - t^d)` for a system of parameters of degrees `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorTable {
    pub degrees: Vec<u32>,
    /// Coefficients through the last degree at which the series was known.
    pub coeffs: Vec<BigInt>,
}

impl NumeratorTable {
    /// Index of the last nonzero coefficient.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Whether `a_k = a_(D-k)` where `D` is the degree bound.
    pub fn is_palindromic(&self) -> bool {
        let d = self.degree_bound();
        (0..=d).all(|k| self.coeffs[k] == self.coeffs[d - k])
    }

    /// Smallest positive multiple of `step` whose coefficient is known to be zero.
    pub fn smallest_zero_multiple(&self, step: usize) -> Option<usize> {
        (1..)
            .map(|i| i * step)
            .take_while(|&k| k < self.coeffs.len())
            .find(|&k| self.coeffs[k].is_zero())
    }

    /// Expands `a(t) / prod (1 - t^d)` through `max_degree`.
    pub fn series(&self, max_degree: usize) -> Vec<BigInt> {
        let mut s = vec![BigInt::zero(); max_degree + 1];
        for (k, c) in self.coeffs.iter().enumerate().take(max_degree + 1) {
            s[k] = c.clone();
        }
        for &d in &self.degrees {
            let d = d as usize;
            for k in d..=max_degree {
                let t = s[k - d].clone();
                s[k] += t;
            }
        }
        s
    }
}

/// Multiplies the series by `prod (1 - t^d)`. The table must reach degree
/// `sum d - 1`, past which the numerator of a Cohen–Macaulay ring vanishes.
pub fn numerator(table: &DimensionTable, degrees: &[u32]) -> Result<NumeratorTable, HilbertError> {
    if degrees.contains(&0) {
        return Err(HilbertError::ZeroDegree);
    }
    let need = degrees
        .iter()
        .map(|&d| d as usize)
        .sum::<usize>()
        .saturating_sub(1);
    if table.max_degree() < need {
        return Err(HilbertError::TooShort {
            have: table.max_degree(),
            need,
        });
    }
    let mut a = table.coeffs.clone();
    for &d in degrees {
        let d = d as usize;
        for k in (d..a.len()).rev() {
            let t = a[k - d].clone();
            a[k] -= t;
        }
    }
    Ok(NumeratorTable {
        degrees: degrees.to_vec(),
        coeffs: a,
    })
}

pub fn to_usize(x: &BigInt) -> usize {
    x.to_usize().expect("dimension fits in usize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(k: u64, parts: u32, max: u32) -> u64 {
        // Nonincreasing sequences of at most `parts` parts bounded by `max`.
        fn go(k: u64, parts: u32, max: u32) -> u64 {
            if k == 0 {
                return 1;
            }
            if parts == 0 {
                return 0;
            }
            (1..=max.min(k as u32))
                .map(|p| go(k - p as u64, parts - 1, p))
                .sum()
        }
        go(k, parts, max)
    }

    #[test]
    fn partitions_against_enumeration() {
        assert_eq!(partition_count(0, 3, 4), BigInt::from(1));
        assert_eq!(partition_count(5, 1, 10), BigInt::from(1));
        assert_eq!(partition_count(6, 3, 4), BigInt::from(5));
        for k in 0..30 {
            for parts in 0..7 {
                for max in 0..7 {
                    assert_eq!(
                        partition_count(k, parts, max),
                        BigInt::from(brute(k, parts, max)),
                        "{k} {parts} {max}"
                    );
                }
            }
        }
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dim_invariants(10, 1), BigInt::from(0));
        assert_eq!(dim_invariants(3, 3), BigInt::from(0));
        assert_eq!(dim_invariants(10, 0), BigInt::from(1));
        assert_eq!(dim_invariants(4, 3), BigInt::from(1));
        // covariants of the quartic: f itself, the Hessian, the sextic
        assert_eq!(dim_covariants(4, 1, 4), BigInt::from(1));
        assert_eq!(dim_covariants(4, 2, 4), BigInt::from(1));
        assert_eq!(dim_covariants(4, 3, 6), BigInt::from(1));
        assert_eq!(dim_covariants(4, 1, 3), BigInt::from(0));
    }

    #[test]
    fn hermite_reciprocity() {
        for n in 1..=12 {
            for m in 1..=12 {
                assert_eq!(dim_invariants(n, m), dim_invariants(m, n), "{n} {m}");
            }
        }
    }

    #[test]
    fn numerator_short_table_rejected() {
        let t = poincare_table(10, 40);
        let err = numerator(&t, &[2, 4, 6, 6, 8, 9, 10, 14]).unwrap_err();
        assert_eq!(err, HilbertError::TooShort { have: 40, need: 58 });
    }

    #[test]
    fn quadratic_numerator_is_one() {
        let t = poincare_table(2, 10);
        let a = numerator(&t, &[2]).unwrap();
        assert_eq!(a.degree_bound(), 0);
        assert_eq!(a.coeffs[0], BigInt::from(1));
        assert_eq!(a.series(10), t.coeffs);
    }
}
