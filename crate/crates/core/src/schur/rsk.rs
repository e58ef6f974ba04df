use rand::Rng;

use crate::error::{Error, Result};

/// Partition with non-increasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct YoungDiagram {
    parts: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("{parts:?} is not a partition")));
        }
        Ok(YoungDiagram { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// All partitions of n, in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<YoungDiagram> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if rest == 0 {
                out.push(YoungDiagram { parts: cur.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

/// Shape of the RSK insertion tableau of a word over 1..=d (row bumping:
/// x displaces the leftmost entry strictly greater than x).
pub fn shrsk_shape(word: &[usize], d: usize) -> Result<YoungDiagram> {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &letter in word {
        if letter == 0 || letter > d {
            return Err(Error::LetterOutOfRange { letter, d });
        }
        let mut x = letter;
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&y| y <= x);
            if pos == row.len() {
                row.push(x);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut x);
        }
        if !placed {
            rows.push(vec![x]);
        }
    }
    Ok(YoungDiagram { parts: rows.iter().map(Vec::len).collect() })
}

/// Weak Schur sample: shape of an iid word of length n with letter law gamma.
pub fn sample_sw<R: Rng + ?Sized>(gamma: &[f64], n: usize, rng: &mut R) -> Result<YoungDiagram> {
    let s: f64 = gamma.iter().sum();
    if gamma.iter().any(|x| !(*x >= 0.0)) || (s - 1.0).abs() > 1e-9 {
        return Err(Error::ProbabilityMismatch { sum: s });
    }
    let word = crate::classical::sample_categorical(gamma, n, rng);
    let word: Vec<usize> = word.into_iter().map(|i| i + 1).collect();
    shrsk_shape(&word, gamma.len())
}
