//! Closed-form limits on excluded pivot-minors for rank-width at most `k`.
//!
//! All arithmetic is exact; `None` means the value overflows `u64` or the
//! bound is not defined for that `k`.

/// Vertex bound for `k = 2` obtained from the chain theorem.
pub const RANK_WIDTH_2_SIZE_BOUND: usize = 16;

/// Vertex bound for `k = 2` when the graph is also `3^{+1}`.
pub const RANK_WIDTH_2_THREE_PLUS_ONE_BOUND: usize = 14;

/// `21 * 6^e`, i.e. `(7/12) * 6^(e + 2)`.
fn seven_twelfths_six_pow(exp_plus_two: u32) -> Option<u64> {
    let e = exp_plus_two.checked_sub(2)?;
    6u64.checked_pow(e)?.checked_mul(21)
}

/// `l` such that every excluded pivot-minor of rank-width greater than `k`
/// is `(k+1)^{+l}`, for `k >= 2`: `((7/12) 6^k - 1)/5 - k`.
pub fn conngen_ell(k: u32) -> Option<u64> {
    if k < 2 {
        return None;
    }
    let top = seven_twelfths_six_pow(k)?;
    (top - 1).checked_div(5)?.checked_sub(u64::from(k))
}

/// `(k + 1, l)` from [`conngen_ell`].
pub fn excluded_minor_connectivity(k: u32) -> Option<(u64, u64)> {
    Some((u64::from(k) + 1, conngen_ell(k)?))
}

/// `((7/12) 6^(k+1) - 1)/5`, the general vertex bound for `k >= 2`.
pub fn upper_vertex_bound(k: u32) -> Option<u64> {
    if k < 2 {
        return None;
    }
    Some((seven_twelfths_six_pow(k + 1)? - 1) / 5)
}

/// Largest vertex count an excluded pivot-minor for rank-width `k` may have,
/// using the sharpest bound that applies.
pub fn max_excluded_vertices(k: u32, three_plus_one: bool) -> Option<u64> {
    match k {
        2 if three_plus_one => Some(RANK_WIDTH_2_THREE_PLUS_ONE_BOUND as u64),
        2 => Some(RANK_WIDTH_2_SIZE_BOUND as u64),
        _ => upper_vertex_bound(k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_two() {
        assert_eq!(upper_vertex_bound(2), Some(25));
        assert_eq!(conngen_ell(2), Some(2));
        assert_eq!(excluded_minor_connectivity(2), Some((3, 2)));
        assert_eq!(max_excluded_vertices(2, false), Some(16));
        assert_eq!(max_excluded_vertices(2, true), Some(14));
    }

    #[test]
    fn recurrence_holds() {
        // l(k+1) = 6 l(k) + 5(k+1) - 5.
        for k in 2..10 {
            let l = conngen_ell(k).unwrap();
            assert_eq!(conngen_ell(k + 1).unwrap(), 6 * l + 5 * u64::from(k + 1) - 5);
            // n <= 6(N + k) + 1 with N = l(k).
            assert_eq!(upper_vertex_bound(k).unwrap(), 6 * (l + u64::from(k)) + 1);
        }
    }

    #[test]
    fn undefined_and_overflow() {
        assert_eq!(upper_vertex_bound(1), None);
        assert_eq!(conngen_ell(0), None);
        assert_eq!(upper_vertex_bound(40), None);
        assert_eq!(max_excluded_vertices(1, false), None);
    }
}
