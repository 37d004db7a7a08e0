//! Principal-value wrapping and branch continuation for angles.

use std::f64::consts::{PI, TAU};

/// Reduces an angle to the half-open interval (−π, π].
pub fn wrap(angle: f64) -> f64 {
    if !angle.is_finite() {
        return angle;
    }
    let mut r = angle.rem_euclid(TAU); // [0, 2π)
    if r > PI {
        r -= TAU;
    }
    if r <= -PI {
        r += TAU;
    }
    r
}

/// Nearest-branch continuation of an ordered sequence of wrapped angles.
pub fn unwrap(angles: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(angles.len());
    let mut prev: Option<(f64, f64)> = None;
    for &a in angles {
        let value = match prev {
            None => a,
            Some((raw, cont)) => cont + wrap(a - raw),
        };
        out.push(value);
        prev = Some((a, value));
    }
    out
}

/// Signed distance between two angles on the circle, in (−π, π].
pub fn circular_diff(a: f64, b: f64) -> f64 {
    wrap(a - b)
}

/// `n` points evenly spaced over the closed interval [lo, hi].
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_boundaries_are_half_open() {
        assert_eq!(wrap(PI), PI);
        assert_eq!(wrap(-PI), PI);
        assert_eq!(wrap(0.0), 0.0);
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-15);
        assert!((wrap(-TAU - 0.5) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn unwrap_follows_a_full_turn() {
        let raw: Vec<f64> = (0..=64)
            .map(|i| wrap(-PI + TAU * i as f64 / 64.0 + 0.1))
            .collect();
        let cont = unwrap(&raw);
        assert!((cont[64] - cont[0] - TAU).abs() < 1e-12);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let g = linspace(-PI, PI, 101);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], -PI);
        assert_eq!(g[100], PI);
        assert_eq!(g[50], 0.0);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }

    proptest! {
        #[test]
        fn wrap_lands_in_principal_interval(x in -1.0e4f64..1.0e4) {
            let w = wrap(x);
            prop_assert!(w > -PI && w <= PI);
            let k = ((x - w) / TAU).round();
            prop_assert!((x - w - k * TAU).abs() < 1e-9);
        }
    }
}
