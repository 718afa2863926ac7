//! Angle wrapping helpers. All public APIs normalize angles to [0, 2*pi);
//! orbit computations carry unwrapped lifts and reduce only at the edges.

use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Wrap into [0, 2*pi).
#[inline]
pub fn wrap_2pi(t: f64) -> f64 {
    let mut r = t % TWO_PI;
    if r < 0.0 {
        r += TWO_PI;
    }
    // `t % TWO_PI` can return exactly TWO_PI after the correction when t is a
    // tiny negative number.
    if r >= TWO_PI {
        r -= TWO_PI;
    }
    r
}

/// Wrap into [center - pi, center + pi).
#[inline]
pub fn wrap_near(t: f64, center: f64) -> f64 {
    let mut r = (t - center + PI) % TWO_PI;
    if r < 0.0 {
        r += TWO_PI;
    }
    r + center - PI
}

/// Distance between two angles modulo 2*pi, in [0, pi].
#[inline]
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_2pi(a - b);
    d.min(TWO_PI - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert!((wrap_2pi(-0.5) - (TWO_PI - 0.5)).abs() < 1e-15);
        assert_eq!(wrap_2pi(0.0), 0.0);
        assert!(wrap_2pi(TWO_PI) < 1e-15);
        assert!((wrap_near(6.0, 0.0) - (6.0 - TWO_PI)).abs() < 1e-15);
        assert!((circular_distance(0.1, TWO_PI - 0.1) - 0.2).abs() < 1e-15);
    }
}
