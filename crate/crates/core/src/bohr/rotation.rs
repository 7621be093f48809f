//! Hits of the rotation `x ↦ x·a mod m` in a window, found one at a time with a
//! Euclid-style recursion instead of a scan.

/// Smallest `k >= 0` with `l <= (a·k) mod m <= r`, for `0 <= l <= r < m`.
///
/// Requires `m <= 2^62` so intermediate products fit in `u128`.
pub fn min_multiple_in(a: u128, m: u128, l: u128, r: u128) -> Option<u128> {
    debug_assert!(l <= r && r < m);
    if l == 0 {
        return Some(0);
    }
    let a = a % m;
    if a == 0 {
        return None;
    }
    let k = l.div_ceil(a);
    if a * k <= r {
        return Some(k);
    }
    // [l, r] sits strictly between two multiples of a; recurse on m·y mod a
    let l2 = a - r % a;
    let r2 = a - l % a;
    let y = min_multiple_in(m % a, a, l2, r2)?;
    Some((l + m * y).div_ceil(a))
}

/// Smallest `k >= 0` with `(a·k + b) mod m` in the (possibly wrapping) window `[l, r]`.
pub fn first_hit(a: u128, b: u128, m: u128, l: u128, r: u128) -> Option<u128> {
    let b = b % m;
    let shift = |v: u128| (v + m - b) % m;
    let (l, r) = (shift(l), shift(r));
    if l <= r {
        min_multiple_in(a, m, l, r)
    } else {
        let first = min_multiple_in(a, m, 0, r);
        let second = min_multiple_in(a, m, l, m - 1);
        match (first, second) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }
}

/// Fixed-point rotation by `frac(ξ)` with modulus `2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Rotation {
    pub step: u128,
}

pub const MOD_BITS: u32 = 62;
pub const MODULUS: u128 = 1 << MOD_BITS;

impl Rotation {
    /// From `floor(frac(ξ)·2^128)`.
    pub fn from_fixed128(fixed: u128) -> Self {
        Self { step: fixed >> (128 - MOD_BITS) }
    }

    /// Every `x` in `[lo, hi]` whose true `‖xξ‖` can be `<= t_units / 2^62`, in increasing order.
    ///
    /// The truncated step underestimates `x·ξ·2^62` by less than `x`, so the
    /// window is widened on the low side by `hi`.
    pub fn candidates(&self, lo: u64, hi: u64, t_units: u128) -> Vec<u64> {
        let mut out = Vec::new();
        if lo > hi {
            return out;
        }
        let span = t_units.saturating_mul(2).saturating_add(hi as u128 + 1);
        if span >= MODULUS {
            return (lo..=hi).collect();
        }
        let wl = (MODULUS - t_units - hi as u128 - 1) % MODULUS;
        let wr = t_units;
        let mut x = lo as u128;
        while x <= hi as u128 {
            let b = (self.step * (x % MODULUS)) % MODULUS;
            match first_hit(self.step, b, MODULUS, wl, wr) {
                Some(k) if x + k <= hi as u128 => {
                    out.push((x + k) as u64);
                    x += k + 1;
                }
                _ => break,
            }
        }
        out
    }
}
