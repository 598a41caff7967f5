//! Index arithmetic for tensor powers of a based vector space.

use crate::error::{Error, Result};

/// Largest ambient dimension a tensor power may have.
pub const TENSOR_LIMIT: usize = 1 << 20;

/// `d^n`, refusing anything above [`TENSOR_LIMIT`].
pub fn power_dim(d: usize, n: usize) -> Result<usize> {
    let too_big = || Error::ResourceBound {
        what: format!("tensor power {d}^{n}"),
        size: usize::MAX,
        limit: TENSOR_LIMIT,
    };
    let size = d.checked_pow(n as u32).ok_or_else(too_big)?;
    if size > TENSOR_LIMIT {
        return Err(Error::ResourceBound { what: format!("tensor power {d}^{n}"), size, limit: TENSOR_LIMIT });
    }
    Ok(size)
}

/// Big-endian flattening of a multi-index.
pub fn flatten(index: &[usize], d: usize) -> usize {
    index.iter().fold(0, |acc, i| acc * d + i)
}

pub fn unflatten(mut flat: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = flat % d;
        flat /= d;
    }
    out
}

/// All multi-indices of length `n` in lexicographic (= flattened) order.
pub fn multi_indices(d: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = d.pow(n as u32);
    (0..total).map(move |f| unflatten(f, d, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        for (f, idx) in multi_indices(3, 3).enumerate() {
            assert_eq!(flatten(&idx, 3), f);
            assert_eq!(unflatten(f, 3, 3), idx);
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(power_dim(5, 4).unwrap(), 625);
        assert_eq!(power_dim(0, 0).unwrap(), 1);
        assert!(matches!(power_dim(64, 5), Err(Error::ResourceBound { .. })));
        assert!(power_dim(usize::MAX, 3).is_err());
    }
}
