//! Published numbers for the binary decimic, kept as oracles for the checks.

/// `dim I_m` for `m = 0..=48`.
pub const POINCARE_48: [u64; 49] = [
    1, 0, 1, 0, 2, 0, 6, 0, 12, 5, 24, 13, 52, 33, 97, 80, 177, 160, 319, 301, 540, 547, 887, 926,
    1429, 1512, 2219, 2402, 3367, 3681, 5015, 5502, 7294, 8064, 10419, 11550, 14664, 16253, 20287,
    22531, 27682, 30738, 37319, 41378, 49671, 55060, 65390, 72391, 85250,
];

/// Degrees of the system of parameters of the decimic.
pub const HSOP_DEGREES: [u32; 8] = [2, 4, 6, 6, 8, 9, 10, 14];

/// Nonzero coefficients `(k, a_k)` of the numerator `a(t)` over the system
/// of parameters.
pub const NUMERATOR: [(usize, u64); 37] = [
    (0, 1),
    (6, 2),
    (8, 4),
    (9, 4),
    (10, 7),
    (11, 8),
    (12, 15),
    (13, 15),
    (14, 20),
    (15, 27),
    (16, 29),
    (17, 35),
    (18, 40),
    (19, 44),
    (20, 47),
    (21, 55),
    (22, 52),
    (23, 57),
    (24, 56),
    (25, 57),
    (26, 52),
    (27, 55),
    (28, 47),
    (29, 44),
    (30, 40),
    (31, 35),
    (32, 29),
    (33, 27),
    (34, 20),
    (35, 15),
    (36, 15),
    (37, 8),
    (38, 7),
    (39, 4),
    (40, 4),
    (42, 2),
    (48, 1),
];

/// Nonzero numbers `(m, d_m)` of basic invariants of degree `m`.
pub const BASIC_COUNTS: [(u32, usize); 16] = [
    (2, 1),
    (4, 1),
    (6, 4),
    (8, 5),
    (9, 5),
    (10, 8),
    (11, 8),
    (12, 12),
    (13, 15),
    (14, 13),
    (15, 19),
    (16, 5),
    (17, 5),
    (18, 1),
    (19, 2),
    (21, 2),
];

/// Total number of basic invariants.
pub const BASIC_TOTAL: usize = 106;

/// `d_m`, zero where none is listed.
pub fn basic_count(m: u32) -> usize {
    BASIC_COUNTS
        .iter()
        .find(|(d, _)| *d == m)
        .map_or(0, |(_, c)| *c)
}

/// `dim I_48 / j2 I_46`.
pub const QUOTIENT_48: usize = 19860;

/// Smallest positive multiple of 6 at which `a(t)` has a zero coefficient.
pub const FIRST_ZERO_MULTIPLE_OF_SIX: usize = 54;

/// `j2 = (f,f)_10` for `f = sum C(10,i) a_i x^(10-i) y^i`.
pub const J2: &str = "-252*a5^2 + 420*a4*a6 - 240*a3*a7 + 90*a2*a8 - 20*a1*a9 + 2*a0*a10";

/// `k = (f,f)_8`; entry `i` is the coefficient of `x^(4-i) y^i`.
pub const K: [&str; 5] = [
    "70*a4^2 - 112*a3*a5 + 56*a2*a6 - 16*a1*a7 + 2*a0*a8",
    "56*a4*a5 - 112*a3*a6 + 80*a2*a7 - 28*a1*a8 + 4*a0*a9",
    "168*a5^2 - 252*a4*a6 + 96*a3*a7 - 6*a2*a8 - 8*a1*a9 + 2*a0*a10",
    "56*a5*a6 - 112*a4*a7 + 80*a3*a8 - 28*a2*a9 + 4*a1*a10",
    "70*a6^2 - 112*a5*a7 + 56*a4*a8 - 16*a3*a9 + 2*a2*a10",
];

/// `q = (f,f)_6`; entry `i` is the coefficient of `x^(8-i) y^i`.
pub const Q: [&str; 9] = [
    "-20*a3^2 + 30*a2*a4 - 12*a1*a5 + 2*a0*a6",
    "-40*a3*a4 + 72*a2*a5 - 40*a1*a6 + 8*a0*a7",
    "-140*a4^2 + 168*a3*a5 - 40*a1*a7 + 12*a0*a8",
    "-168*a4*a5 + 280*a3*a6 - 120*a2*a7 + 8*a0*a9",
    "-252*a5^2 + 280*a4*a6 + 40*a3*a7 - 90*a2*a8 + 20*a1*a9 + 2*a0*a10",
    "-168*a5*a6 + 280*a4*a7 - 120*a3*a8 + 8*a1*a10",
    "-140*a6^2 + 168*a5*a7 - 40*a3*a9 + 12*a2*a10",
    "-40*a6*a7 + 72*a5*a8 - 40*a4*a9 + 8*a3*a10",
    "-20*a7^2 + 30*a6*a8 - 12*a5*a9 + 2*a4*a10",
];

/// `(f, x^4)_4`, coefficients of `x^(6-i) y^i`.
pub const F_X4: [&str; 7] = ["a4", "6*a5", "15*a6", "20*a7", "15*a8", "6*a9", "a10"];

/// `(f, x^3 y)_4`, coefficients of `x^(6-i) y^i`.
pub const F_X3Y: [&str; 7] = ["-a3", "-6*a4", "-15*a5", "-20*a6", "-15*a7", "-6*a8", "-a9"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_add_up() {
        assert_eq!(
            BASIC_COUNTS.iter().map(|(_, c)| c).sum::<usize>(),
            BASIC_TOTAL
        );
        assert_eq!(basic_count(7), 0);
        assert_eq!(basic_count(21), 2);
    }
}
