use serde::Serialize;

/// A set partition of {1..n}; blocks are sorted by least element and each
/// block is stored as a bitmask over 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetPartition {
    pub n: usize,
    pub blocks: Vec<u32>,
}

impl SetPartition {
    pub fn block_members(&self, b: usize) -> Vec<usize> {
        (0..self.n).filter(|j| self.blocks[b] & (1 << j) != 0).map(|j| j + 1).collect()
    }
}

/// All set partitions of {1..n} via restricted growth strings, in
/// lexicographic order of the strings.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    assert!(n <= 16);
    let mut out = Vec::new();
    if n == 0 {
        out.push(SetPartition { n, blocks: Vec::new() });
        return out;
    }
    let mut a = vec![0usize; n];
    fn rec(i: usize, maxb: usize, a: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        let n = a.len();
        if i == n {
            let k = a.iter().max().unwrap() + 1;
            let mut blocks = vec![0u32; k];
            for (j, &b) in a.iter().enumerate() {
                blocks[b] |= 1 << j;
            }
            out.push(SetPartition { n, blocks });
            return;
        }
        for b in 0..=maxb + 1 {
            a[i] = b;
            rec(i + 1, maxb.max(b), a, out);
        }
    }
    a[0] = 0;
    rec(1, 0, &mut a, &mut out);
    out
}
