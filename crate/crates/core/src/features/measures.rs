//! Entropy, KL divergence and the overlap coefficient (natural log).

use std::collections::HashSet;
use std::hash::Hash;

/// Shannon entropy of the empirical distribution given by `counts`.
pub fn entropy_of_counts<I: IntoIterator<Item = u64>>(counts: I) -> f64 {
    let counts: Vec<u64> = counts.into_iter().filter(|&c| c > 0).collect();
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    let h = -counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>();
    h.max(0.0)
}

pub fn entropy(probs: &[f64]) -> f64 {
    let h = -probs.iter().filter(|&&p| p > 0.0).map(|&p| p * p.ln()).sum::<f64>();
    h.max(0.0)
}

/// KL(p || q). Terms with `p = 0` contribute nothing; `p > 0, q = 0` is infinite.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    p.iter()
        .zip(q)
        .filter(|(&pi, _)| pi > 0.0)
        .map(|(&pi, &qi)| if qi > 0.0 { pi * (pi / qi).ln() } else { f64::INFINITY })
        .sum()
}

/// `|A ∩ B| / min(|A|, |B|)`, or 0 when either set is empty.
pub fn overlap_coefficient<T: Eq + Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let smaller = a.len().min(b.len());
    if smaller == 0 {
        return 0.0;
    }
    a.intersection(b).count() as f64 / smaller as f64
}
