//! Set partitions of {0..m} with their Moebius weights and contracted
//! cyclic label words, tabulated once per m.

use std::sync::OnceLock;

pub const MAX_ORDER: usize = 8;

#[derive(Clone, Debug)]
pub(crate) struct PartitionTerm {
    /// prod over blocks of (-1)^(|B|-1) (|B|-1)!
    pub mobius: f64,
    /// Block labels around the cycle with equal neighbours merged.
    pub word: Vec<u8>,
}

fn restricted_growth(m: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, max: u8, m: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            rec(prefix, max.max(b), m, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return vec![vec![]];
    }
    let mut p = vec![0u8];
    rec(&mut p, 0, m, &mut out);
    out
}

pub(crate) fn contract_cyclic(word: &[u8]) -> Vec<u8> {
    let mut w = word.to_vec();
    loop {
        if w.len() <= 1 {
            return w;
        }
        let l = w.len();
        match (0..l).find(|&i| w[i] == w[(i + 1) % l]) {
            Some(i) => {
                w.remove(i);
            }
            None => return w,
        }
    }
}

fn build(m: usize) -> Vec<PartitionTerm> {
    restricted_growth(m)
        .into_iter()
        .map(|labels| {
            let blocks = labels.iter().copied().max().map_or(0, |b| b as usize + 1);
            let mut mobius = 1.0;
            for b in 0..blocks {
                let size = labels.iter().filter(|&&x| x as usize == b).count();
                let f: f64 = (1..size).map(|x| x as f64).product();
                mobius *= if size % 2 == 1 { f } else { -f };
            }
            PartitionTerm { mobius, word: contract_cyclic(&labels) }
        })
        .collect()
}

static TABLES: [OnceLock<Vec<PartitionTerm>>; MAX_ORDER + 1] = [const { OnceLock::new() }; MAX_ORDER + 1];

pub(crate) fn partitions(m: usize) -> &'static [PartitionTerm] {
    assert!(m <= MAX_ORDER);
    TABLES[m].get_or_init(|| build(m))
}
