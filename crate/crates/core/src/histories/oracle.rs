//! Leading-order predictions for the coarse and full decoherence functionals.
//! Error terms are bounds with unknown constants and are not modelled.

use super::FullHistory;
use crate::bits::BitString;
use crate::error::{Error, Result};

/// `2^{-k} δ(x, y)` for initial string `α·x` and coarse history `y·β`.
pub fn theorem1_value(x: &BitString, y: &BitString, steps: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!("|x| = {} but |y| = {}", x.len(), y.len())));
    }
    Ok(if x == y { 0.5f64.powi(steps as i32) } else { 0.0 })
}

/// `2^{-k} [y⃗ = z⃗] [y^1_{1:γ-1} = x_{2:γ}] Π_j [y^{j+1}_{1:γ-1} = y^j_{2:γ}]`.
pub fn theorem2_value(x: &BitString, y: &FullHistory, z: &FullHistory) -> Result<f64> {
    check_widths(x, y)?;
    check_widths(x, z)?;
    if y.len() != z.len() {
        return Err(Error::invalid(format!("histories have {} and {} steps", y.len(), z.len())));
    }
    if y != z || !is_shift_consistent(x, y)? {
        return Ok(0.0);
    }
    Ok(0.5f64.powi(y.len() as i32))
}

/// Whether every entry of `path` is its predecessor (starting from `x`)
/// shifted one place to the left.
pub fn is_shift_consistent(x: &BitString, path: &FullHistory) -> Result<bool> {
    check_widths(x, path)?;
    let g = x.len();
    let mut prev = x;
    for y in path.steps() {
        if y.slice(1, g - 1) != prev.slice(2, g) {
            return Ok(false);
        }
        prev = y;
    }
    Ok(true)
}

fn check_widths(x: &BitString, path: &FullHistory) -> Result<()> {
    if path.width() != x.len() {
        return Err(Error::invalid(format!("|x| = {} but history entries have width {}", x.len(), path.width())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn h(s: &str) -> FullHistory {
        FullHistory::parse(s).unwrap()
    }

    #[test]
    fn coarse_leading_term() {
        assert_eq!(theorem1_value(&bs("01"), &bs("01"), 2).unwrap(), 0.25);
        assert_eq!(theorem1_value(&bs("01"), &bs("10"), 2).unwrap(), 0.0);
        assert_eq!(theorem1_value(&bs("1"), &bs("1"), 1).unwrap(), 0.5);
        assert_eq!(theorem1_value(&BitString::EMPTY, &BitString::EMPTY, 2).unwrap(), 0.25);
        assert!(theorem1_value(&bs("1"), &bs("10"), 1).is_err());
    }

    #[test]
    fn full_leading_term() {
        assert_eq!(theorem2_value(&bs("011"), &h("110"), &h("110")).unwrap(), 0.5);
        assert_eq!(theorem2_value(&bs("011"), &h("010"), &h("010")).unwrap(), 0.0);
        assert_eq!(theorem2_value(&bs("011"), &h("110"), &h("111")).unwrap(), 0.0);
        assert_eq!(theorem2_value(&bs("011"), &h("110;101"), &h("110;101")).unwrap(), 0.25);
        assert_eq!(theorem2_value(&bs("011"), &h("110;001"), &h("110;001")).unwrap(), 0.0);
        assert!(theorem2_value(&bs("01"), &h("110"), &h("110")).is_err());
    }

    /// First displayed form: per-step deltas on the leading bit plus the k-th shift.
    fn first_form(x: &BitString, y: &FullHistory, z: &FullHistory) -> f64 {
        let g = x.len();
        let k = y.len();
        let ys = y.steps();
        let mut v = if y == z { 0.5f64.powi(k as i32) } else { 0.0 };
        for j in 1..k {
            if ys[j].slice(1, g - 1) != ys[j - 1].slice(2, g) || ys[j - 1].bit(1) != x.bit(j + 1) {
                v = 0.0;
            }
        }
        if ys[k - 1].slice(1, g - k) != x.slice(k + 1, g) {
            v = 0.0;
        }
        v
    }

    #[test]
    fn both_forms_agree_on_every_path() {
        let (g, k) = (3, 2);
        for xi in 0..8 {
            let x = BitString::from_index(xi, g).unwrap();
            for yc in 0..64 {
                let y = FullHistory::from_code(yc, g, k).unwrap();
                for zc in [yc, (yc + 1) % 64, yc ^ 0b100000] {
                    let z = FullHistory::from_code(zc, g, k).unwrap();
                    assert_eq!(theorem2_value(&x, &y, &z).unwrap(), first_form(&x, &y, &z), "x={x} y={y} z={z}");
                }
            }
        }
    }

    #[test]
    fn exactly_two_to_the_k_supported_paths() {
        let x = bs("0110");
        for k in 1..=3 {
            let count = (0..1u64 << (4 * k))
                .map(|c| FullHistory::from_code(c, 4, k).unwrap())
                .filter(|p| theorem2_value(&x, p, p).unwrap() > 0.0)
                .count();
            assert_eq!(count, 1 << k);
        }
    }
}
