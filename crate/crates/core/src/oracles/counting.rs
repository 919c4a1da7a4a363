use std::collections::HashMap;

use crate::error::{invalid, Error, Result};

/// Largest `n` accepted by [`enumerate_with_degrees`].
pub const MAX_DEGREE_ENUMERATION_N: usize = 10;

/// Exact number of simple labeled graphs on `[n]` with degree sequence `d`.
///
/// Backtracking over the neighbor sets of one vertex at a time. The count only
/// depends on the multiset of residual degrees, so subproblems are memoized on
/// the sorted residual sequence; choosing neighbors then reduces to choosing
/// how many to take from each residual-degree class.
pub fn enumerate_with_degrees(d: &[usize]) -> Result<u128> {
    if d.len() > MAX_DEGREE_ENUMERATION_N {
        return Err(Error::Resource(format!(
            "degree-sequence enumeration supports n <= {MAX_DEGREE_ENUMERATION_N}, got {}",
            d.len()
        )));
    }
    if d.iter().any(|&k| k >= d.len()) && d.iter().any(|&k| k > 0) {
        return Ok(0);
    }
    let mut key: Vec<u8> = d.iter().map(|&k| k as u8).collect();
    key.sort_unstable_by(|a, b| b.cmp(a));
    let mut memo = HashMap::new();
    Ok(count_sorted(key, &mut memo))
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn count_sorted(mut rem: Vec<u8>, memo: &mut HashMap<Vec<u8>, u128>) -> u128 {
    while rem.last() == Some(&0) {
        rem.pop();
    }
    if rem.is_empty() {
        return 1;
    }
    if let Some(&c) = memo.get(&rem) {
        return c;
    }
    // remove the first vertex (largest residual degree) and connect it to `k` others
    let k = rem[0] as usize;
    let others = &rem[1..];
    let result = if k > others.len() {
        0
    } else {
        // group the others into runs of equal residual degree
        let mut groups: Vec<(u8, usize)> = Vec::new();
        for &x in others {
            match groups.last_mut() {
                Some((v, c)) if *v == x => *c += 1,
                _ => groups.push((x, 1)),
            }
        }
        let mut total = 0u128;
        let mut take = vec![0usize; groups.len()];
        distribute(&groups, &mut take, 0, k, 1, memo, &mut total);
        total
    };
    memo.insert(rem, result);
    result
}

fn distribute(
    groups: &[(u8, usize)],
    take: &mut [usize],
    gi: usize,
    left: usize,
    ways: u128,
    memo: &mut HashMap<Vec<u8>, u128>,
    total: &mut u128,
) {
    if gi == groups.len() {
        if left == 0 {
            let mut next = Vec::new();
            for (&(v, c), &t) in groups.iter().zip(take.iter()) {
                next.extend(std::iter::repeat_n(v - 1, t));
                next.extend(std::iter::repeat_n(v, c - t));
            }
            next.sort_unstable_by(|a, b| b.cmp(a));
            *total += ways * count_sorted(next, memo);
        }
        return;
    }
    let (v, c) = groups[gi];
    let max = if v == 0 { 0 } else { c.min(left) };
    for t in 0..=max {
        take[gi] = t;
        distribute(groups, take, gi + 1, left - t, ways * binom(c, t), memo, total);
    }
    take[gi] = 0;
}

/// Erdős–Gallai test for graphic sequences.
pub fn is_graphic(d: &[usize]) -> bool {
    let mut s: Vec<usize> = d.to_vec();
    s.sort_unstable_by(|a, b| b.cmp(a));
    let total: usize = s.iter().sum();
    if total % 2 == 1 {
        return false;
    }
    let n = s.len();
    let mut prefix = 0usize;
    for k in 1..=n {
        prefix += s[k - 1];
        let tail: usize = s[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

pub(crate) fn check_degree_input(d: &[usize]) -> Result<()> {
    if !is_graphic(d) {
        return invalid(format!("degree sequence {d:?} is not graphic"));
    }
    Ok(())
}
