//! Set partitions of mode indices and exhaustive minimisation over them.

use std::fmt;

use crate::error::{Error, Result};

/// Largest mode count accepted by the exhaustive enumeration (Bell(12) ≈ 4.2·10⁶).
pub const MAX_ENUMERATED_MODES: usize = 12;

/// Disjoint, non-empty blocks covering `0..m` (zero-based indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(m: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; m];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::InvalidInput(
                    "partition contains an empty block".into(),
                ));
            }
            block.sort_unstable();
            for &i in block.iter() {
                if i >= m || seen[i] {
                    return Err(Error::InvalidInput(format!(
                        "index {i} is out of range or repeated in a partition of {m} modes"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidInput(
                "partition does not cover every mode".into(),
            ));
        }
        blocks.sort();
        Ok(Partition { blocks })
    }

    fn from_labels(labels: &[usize], count: usize) -> Self {
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i);
        }
        Partition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// One-based set notation, e.g. `{{1,2},{3}}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (b, block) in self.blocks.iter().enumerate() {
            if b > 0 {
                write!(f, ",")?;
            }
            let inner: Vec<String> = block.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", inner.join(","))?;
        }
        write!(f, "}}")
    }
}

/// Minimum of `Σ_q |Σ_{I∈A_q} w_I|` over partitions with at least `k` blocks.
///
/// Walks restricted growth strings depth first, carrying block sums, and
/// prunes branches that can no longer reach `k` blocks. The first minimiser
/// in lexicographic order is returned.
pub fn min_block_sum(weights: &[f64], k: usize) -> Result<(f64, Partition)> {
    let m = weights.len();
    if m > MAX_ENUMERATED_MODES {
        return Err(Error::Size {
            what: "modes",
            got: m,
            limit: MAX_ENUMERATED_MODES,
        });
    }
    if k < 1 || k > m {
        return Err(Error::Domain(format!(
            "block count k = {k} must lie in [1, {m}]"
        )));
    }

    struct Search<'a> {
        weights: &'a [f64],
        k: usize,
        labels: Vec<usize>,
        sums: Vec<f64>,
        best: f64,
        best_labels: Vec<usize>,
        best_count: usize,
    }

    impl Search<'_> {
        fn visit(&mut self, i: usize, used: usize) {
            let m = self.weights.len();
            if used + (m - i) < self.k {
                return;
            }
            if i == m {
                let value: f64 = self.sums[..used].iter().map(|s| s.abs()).sum();
                if value < self.best {
                    self.best = value;
                    self.best_labels.clone_from(&self.labels);
                    self.best_count = used;
                }
                return;
            }
            for b in 0..=used.min(m - 1) {
                self.labels[i] = b;
                self.sums[b] += self.weights[i];
                self.visit(i + 1, used.max(b + 1));
                self.sums[b] -= self.weights[i];
            }
        }
    }

    let mut search = Search {
        weights,
        k,
        labels: vec![0; m],
        sums: vec![0.0; m],
        best: f64::INFINITY,
        best_labels: Vec::new(),
        best_count: 0,
    };
    search.visit(0, 0);
    let partition = Partition::from_labels(&search.best_labels, search.best_count);
    Ok((search.best, partition))
}

/// Bell number `B_m`: the number of set partitions of `m` elements.
pub fn bell_number(m: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().expect("row is never empty"));
        for v in &row {
            let prev = *next.last().expect("just pushed");
            next.push(prev + v);
        }
        row = next;
    }
    row[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_partitions(m: usize, k: usize) -> usize {
        // count by brute force through a weight vector of distinct powers of two
        let mut n = 0usize;
        fn rec(i: usize, used: usize, m: usize, k: usize, n: &mut usize) {
            if i == m {
                if used >= k {
                    *n += 1;
                }
                return;
            }
            for b in 0..=used.min(m - 1) {
                rec(i + 1, used.max(b + 1), m, k, n);
            }
        }
        rec(0, 0, m, k, &mut n);
        n
    }

    #[test]
    fn bell_numbers() {
        let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (m, &b) in expected.iter().enumerate() {
            assert_eq!(bell_number(m), b);
            assert_eq!(count_partitions(m, 0) as u64, b);
        }
    }

    #[test]
    fn display_and_validation() {
        let p = Partition::new(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(p.to_string(), "{{1,2},{3}}");
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![1]]).is_err());
        assert!(Partition::new(2, vec![vec![0, 1], vec![]]).is_err());
    }

    #[test]
    fn singletons_forced_when_k_equals_m() {
        let (v, p) = min_block_sum(&[1.0, -1.0, 2.0], 3).unwrap();
        assert_eq!(v, 4.0);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn cancellation_is_found() {
        let (v, p) = min_block_sum(&[1.0, -1.0, 2.0], 2).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(p.to_string(), "{{1,2},{3}}");
    }

    #[test]
    fn size_limit() {
        assert!(matches!(
            min_block_sum(&[1.0; 13], 2),
            Err(Error::Size { got: 13, .. })
        ));
        assert!(min_block_sum(&[1.0; 3], 4).is_err());
    }
}
