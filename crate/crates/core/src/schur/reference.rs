//! Reference minimum-copy scans at success threshold 0.7, one entry per d.

/// (k, first d, step, minimum copies)
pub const SCANS: [(usize, usize, usize, &[usize]); 3] = [
    (2, 6, 2, &[9, 12, 15, 18, 20, 24, 26, 29, 32, 35, 38, 41, 44, 47, 50, 53, 56, 59, 62, 64, 68, 71]),
    (3, 6, 3, &[21, 37, 56, 76, 97, 120, 145, 171, 196, 223, 253, 281, 312, 342, 376]),
    (4, 4, 4, &[19, 51, 95, 147, 209, 274, 347, 426, 511, 598]),
];

/// Exponents for the fixed-exponent overlay.
pub const FIXED_EXPONENTS: [(usize, f64); 3] = [(2, 1.0), (3, 4.0 / 3.0), (4, 1.5)];

/// (d, n_min) points for family k.
pub fn scan_points(k: usize) -> Option<Vec<(f64, f64)>> {
    SCANS
        .iter()
        .find(|s| s.0 == k)
        .map(|&(_, d0, step, ns)| ns.iter().enumerate().map(|(i, &n)| ((d0 + i * step) as f64, n as f64)).collect())
}

pub fn fixed_exponent(k: usize) -> Option<f64> {
    FIXED_EXPONENTS.iter().find(|e| e.0 == k).map(|e| e.1)
}
