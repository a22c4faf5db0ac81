use rand::Rng;

/// Number of columns kept when sampling `rate` of `n` candidates.
pub fn sample_size(n: usize, rate: f64) -> usize {
    ((rate * n as f64).round() as usize).clamp(1, n.max(1))
}

/// Uniform sample without replacement of `max(1, round(rate * n))`
/// candidates, returned in ascending order. `rate >= 1` returns the
/// candidates unchanged without touching the stream.
pub fn sample_columns<R: Rng + ?Sized>(candidates: &[usize], rate: f64, rng: &mut R) -> Vec<usize> {
    if rate >= 1.0 || candidates.len() <= 1 {
        return candidates.to_vec();
    }
    let k = sample_size(candidates.len(), rate);
    let mut picked: Vec<usize> = rand::seq::index::sample(rng, candidates.len(), k)
        .into_iter()
        .map(|i| candidates[i])
        .collect();
    picked.sort_unstable();
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_from_seed;

    #[test]
    fn full_rate_is_identity() {
        let cands: Vec<usize> = vec![3, 1, 4, 1, 5];
        let mut rng = stream_from_seed(0);
        assert_eq!(sample_columns(&cands, 1.0, &mut rng), cands);
    }

    #[test]
    fn sizes() {
        let cands: Vec<usize> = (0..122).collect();
        let mut rng = stream_from_seed(1);
        let s = sample_columns(&cands, 0.4, &mut rng);
        assert_eq!(s.len(), 49);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_columns(&[7], 0.4, &mut rng), vec![7]);
        assert_eq!(sample_size(3, 0.01), 1);
    }

    #[test]
    fn nested_subset() {
        let mut rng = stream_from_seed(2);
        let all: Vec<usize> = (0..50).collect();
        let level = sample_columns(&all, 0.6, &mut rng);
        let node = sample_columns(&level, 0.5, &mut rng);
        assert_eq!(node.len(), 15);
        assert!(node.iter().all(|c| level.contains(c)));
    }
}
