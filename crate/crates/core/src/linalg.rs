//! Exact rank of integer matrices by fraction-free (Bareiss) elimination.

use crate::scalar::ExactInt;
use crate::{Error, Result};

/// Rank over the rationals of an integer matrix given by rows, computed in
/// the exact ring `T`. Every intermediate entry is a minor of the input, so
/// the divisions by the previous pivot are exact.
pub fn rank<T: ExactInt>(rows: &[Vec<i64>]) -> Result<usize> {
    let mut m: Vec<Vec<T>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| T::from_i64(x).ok_or(Error::Overflow("matrix entry")))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<_>>()?;
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid("ragged matrix".into()));
    }
    let mut prev = T::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let a = pivot.checked_mul(&row[j]).ok_or(Error::Overflow("rank"))?;
                let b = lead.checked_mul(&pivot_row[j]).ok_or(Error::Overflow("rank"))?;
                row[j] = a.checked_sub(&b).ok_or(Error::Overflow("rank"))? / prev.clone();
            }
            row[c] = T::zero();
        }
        prev = pivot;
        r += 1;
    }
    Ok(r)
}

/// [`rank`] with arbitrary-precision integers.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    rank::<num_bigint::BigInt>(rows).expect("big integers do not overflow")
}
