//! Integer partitions, hooks, Maya diagrams and t-cores.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.0
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Which characterization `is_t_core` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoreTest {
    /// no hook length divisible by t
    AllHooks,
    /// no hook length equal to t
    HookEqualsT,
    /// no 1 at i with a 0 at i + t in the Maya diagram
    MayaPairs,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Partition> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Partition {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// λ_i with 1-based index; zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.part(1);
        Partition((1..=w).map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32).collect())
    }

    /// Boxes (j, k), 1-based, row by row.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().flat_map(|(j, &p)| (1..=p as usize).map(move |k| (j + 1, k)))
    }

    /// Hook length of every box, in row order.
    pub fn hook_lengths(&self) -> Vec<((usize, usize), u32)> {
        let c = self.conjugate();
        self.boxes()
            .map(|(j, k)| ((j, k), self.part(j) + c.part(k) + 1 - j as u32 - k as u32))
            .collect()
    }

    /// Σ contents (k − j) over boxes.
    pub fn content_sum(&self) -> i64 {
        self.boxes().map(|(j, k)| k as i64 - j as i64).sum()
    }

    /// κ(λ) = 2·Σ contents.
    pub fn kappa(&self) -> i64 {
        2 * self.content_sum()
    }

    /// n(λ) = Σ (i − 1) λ_i.
    pub fn n_statistic(&self) -> u64 {
        self.0.iter().enumerate().map(|(i, &p)| i as u64 * p as u64).sum()
    }

    /// Whether the Young diagram of `eta` fits inside this one.
    pub fn contains(&self, eta: &Partition) -> bool {
        eta.len() <= self.len() && eta.0.iter().enumerate().all(|(i, &p)| p <= self.0[i])
    }

    /// Partitions contained in this one.
    pub fn subpartitions(&self) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(lam: &[u32], bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition(cur.clone()));
            let i = cur.len();
            if i == lam.len() {
                return;
            }
            for p in 1..=lam[i].min(bound) {
                cur.push(p);
                rec(lam, p, cur, out);
                cur.pop();
            }
        }
        rec(&self.0, u32::MAX, &mut cur, &mut out);
        out
    }

    pub fn maya(&self, lo: i64, hi: i64) -> MayaWindow {
        assert!(lo <= hi);
        let zeros: Vec<i64> = self.maya_zeros(lo);
        let bits = (lo..=hi).map(|i| u8::from(!zeros.contains(&i))).collect();
        MayaWindow { lo, hi, bits }
    }

    /// Elements λ_j − j that are ≥ lo.
    fn maya_zeros(&self, lo: i64) -> Vec<i64> {
        let mut z = Vec::new();
        let mut j = 1i64;
        loop {
            let v = self.part(j as usize) as i64 - j;
            if v < lo {
                break;
            }
            z.push(v);
            j += 1;
        }
        z
    }

    /// A window wide enough that every hook appears as a 1→0 pair inside it.
    pub fn full_maya(&self, margin: i64) -> MayaWindow {
        self.maya(-(self.len() as i64) - 1 - margin, self.part(1) as i64 + margin)
    }

    pub fn is_t_core(&self, t: u32, method: CoreTest) -> bool {
        assert!(t >= 2);
        match method {
            CoreTest::AllHooks => self.hook_lengths().iter().all(|(_, h)| h % t != 0),
            CoreTest::HookEqualsT => self.hook_lengths().iter().all(|(_, h)| *h != t),
            CoreTest::MayaPairs => {
                let w = self.full_maya(t as i64 + 1);
                w.bits
                    .iter()
                    .zip(w.bits.iter().skip(t as usize))
                    .all(|(&a, &b)| !(a == 1 && b == 0))
            }
        }
    }
}

/// A finite window lo..=hi of a Maya diagram. Outside the window the diagram
/// is 0 below `lo` and 1 above `hi`, which is the only completion for which a
/// partition's charge-zero condition can hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MayaWindow {
    pub lo: i64,
    pub hi: i64,
    pub bits: Vec<u8>,
}

impl MayaWindow {
    pub fn bit(&self, i: i64) -> u8 {
        if i < self.lo {
            0
        } else if i > self.hi {
            1
        } else {
            self.bits[(i - self.lo) as usize]
        }
    }

    /// #{i < 0 : bit 1} − #{i ≥ 0 : bit 0}, zero for a partition.
    pub fn charge(&self) -> i64 {
        let ones_neg = (self.lo..0.min(self.hi + 1)).filter(|&i| self.bit(i) == 1).count() as i64;
        let zeros_pos = (0.max(self.lo)..=self.hi).filter(|&i| self.bit(i) == 0).count() as i64;
        // completion: 0..lo are zeros when lo > 0, hi+1..−1 are ones when hi < −1
        ones_neg - zeros_pos - self.lo.max(0) + (-1 - self.hi).max(0)
    }

    /// Inverse of [`Partition::maya`].
    pub fn to_partition(&self) -> Result<Partition> {
        if self.charge() != 0 {
            return Err(Error::Invalid("Maya window has nonzero charge".into()));
        }
        // zeros in decreasing order, then λ_j = z_j + j
        let mut zeros: Vec<i64> = (self.lo..=self.hi).rev().filter(|&i| self.bit(i) == 0).collect();
        let mut next = self.lo - 1;
        let mut parts = Vec::new();
        let mut j = 1i64;
        loop {
            let z = if zeros.is_empty() {
                let v = next;
                next -= 1;
                v
            } else {
                zeros.remove(0)
            };
            let p = z + j;
            if p <= 0 {
                break;
            }
            parts.push(p as u32);
            j += 1;
        }
        Partition::new(parts)
    }

    /// Multiset of j₂ − j₁ over pairs with bit 1 at j₁ < j₂ with bit 0.
    pub fn one_zero_gaps(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for a in self.lo..=self.hi {
            if self.bit(a) != 1 {
                continue;
            }
            for b in a + 1..=self.hi {
                if self.bit(b) == 0 {
                    out.push((b - a) as u32);
                }
            }
        }
        out
    }
}

impl fmt::Display for MayaWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.lo..=self.hi {
            if i == 0 && self.lo < 0 {
                write!(f, "|")?;
            }
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rest: u32, bound: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(bound)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// Calls `f` on every partition of size ≤ `max`, without collecting them.
pub fn for_each_partition_up_to(max: u32, mut f: impl FnMut(&Partition)) {
    let mut cur = Partition(Vec::new());
    fn rec(rest: u32, bound: u32, cur: &mut Partition, f: &mut dyn FnMut(&Partition)) {
        f(cur);
        for p in (1..=rest.min(bound)).rev() {
            cur.0.push(p);
            rec(rest - p, p, cur, f);
            cur.0.pop();
        }
    }
    rec(max, max, &mut cur, &mut f);
}

/// t-cores grouped by size, found by filtering every partition.
pub fn t_cores_by_filter(t: u32, max_size: u32) -> Vec<Vec<Partition>> {
    (0..=max_size)
        .map(|n| partitions_of(n).into_iter().filter(|p| p.is_t_core(t, CoreTest::HookEqualsT)).collect())
        .collect()
}

/// t-cores grouped by size (reverse lexicographic within a size), generated
/// directly from their Maya diagrams.
///
/// On each residue class mod t a t-core's Maya diagram reads 0…0 1…1; runner
/// r switches at position r + t·b_r with Σ b_r = 0 and
/// |λ| = Σ_r (t·b_r²/2 + r·b_r).
pub fn enumerate_t_cores(t: u32, max_size: u32) -> Vec<Vec<Partition>> {
    assert!(t >= 2);
    let ti = t as i64;
    let max = max_size as i64;
    // any runner with |b| ≥ bound forces the size past max
    let floor = (ti - 1) * (ti - 1) * (ti - 1) / (2 * ti) + ti;
    let mut bound = 1i64;
    while ti * bound * bound / 2 - (ti - 1) * bound - floor <= max {
        bound += 1;
    }
    let mut out = vec![Vec::new(); max_size as usize + 1];
    let mut b = vec![0i64; t as usize];
    fn rec(r: usize, b: &mut Vec<i64>, bound: i64, t: i64, max: i64, out: &mut Vec<Vec<Partition>>) {
        let last = b.len() - 1;
        if r == last {
            b[last] = -b[..last].iter().sum::<i64>();
            let size2: i64 = b.iter().enumerate().map(|(r, &v)| t * v * v + 2 * (r as i64) * v).sum();
            let size = size2 / 2;
            if size <= max {
                out[size as usize].push(core_from_runners(b, t));
            }
            return;
        }
        for v in -bound..=bound {
            b[r] = v;
            rec(r + 1, b, bound, t, max, out);
        }
    }
    rec(0, &mut b, bound, ti, max, &mut out);
    for v in out.iter_mut() {
        v.sort_by(|a, b| b.cmp(a));
    }
    out
}

fn core_from_runners(b: &[i64], t: i64) -> Partition {
    let top = b.iter().map(|v| v.abs()).max().unwrap_or(0) + 1;
    let lo = -t * (top + 1);
    let mut zeros: Vec<i64> = Vec::new();
    for (r, &br) in b.iter().enumerate() {
        let mut m = (lo - r as i64).div_euclid(t);
        while m < br {
            let pos = r as i64 + t * m;
            if pos >= lo {
                zeros.push(pos);
            }
            m += 1;
        }
    }
    zeros.sort_unstable_by(|a, b| b.cmp(a));
    let mut parts = Vec::new();
    for (j, z) in zeros.iter().enumerate() {
        let p = z + j as i64 + 1;
        if p <= 0 {
            break;
        }
        parts.push(p as u32);
    }
    Partition(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[6, 4, 4, 2, 1]).conjugate(), p(&[5, 4, 3, 3, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(p(&[4]).conjugate(), p(&[1, 1, 1, 1]));
    }

    #[test]
    fn hooks() {
        assert_eq!(p(&[1]).hook_lengths(), vec![((1, 1), 1)]);
        assert_eq!(p(&[2, 1]).hook_lengths(), vec![((1, 1), 3), ((1, 2), 1), ((2, 1), 1)]);
        let lam = p(&[3, 2]);
        let total: u32 = lam.hook_lengths().iter().map(|(_, h)| h).sum();
        assert_eq!(lam.n_statistic(), 2);
        assert_eq!(lam.conjugate().n_statistic(), 4);
        assert_eq!(total, 11);
    }

    #[test]
    fn kappa_values() {
        assert_eq!(Partition::empty().kappa(), 0);
        assert_eq!(p(&[2]).kappa(), 2);
        assert_eq!(p(&[2, 1]).kappa(), 0);
    }

    #[test]
    fn maya_examples() {
        let w = p(&[6, 4, 4, 2, 1]).maya(-7, 7);
        assert_eq!(w.to_string(), "0010101|10011011");
        assert_eq!(w.charge(), 0);
        let v = Partition::empty().maya(-3, 2);
        assert_eq!(v.to_string(), "000|111");
        assert_eq!(v.to_partition().unwrap(), Partition::empty());
        assert_eq!(w.to_partition().unwrap(), p(&[6, 4, 4, 2, 1]));
    }

    #[test]
    fn core_examples() {
        assert!(!p(&[2]).is_t_core(2, CoreTest::AllHooks));
        for k in 1..=8u32 {
            let stair: Vec<u32> = (1..=k).rev().collect();
            for m in [CoreTest::AllHooks, CoreTest::HookEqualsT, CoreTest::MayaPairs] {
                assert!(p(&stair).is_t_core(2, m));
            }
        }
        assert!(Partition::empty().is_t_core(7, CoreTest::MayaPairs));
    }

    #[test]
    fn two_cores_are_staircases() {
        let cores = enumerate_t_cores(2, 10);
        for (n, c) in cores.iter().enumerate() {
            let expect = usize::from([0, 1, 3, 6, 10].contains(&n));
            assert_eq!(c.len(), expect, "size {n}");
        }
        assert_eq!(enumerate_t_cores(5, 0), vec![vec![Partition::empty()]]);
    }

    #[test]
    fn three_cores_agree_with_filter() {
        assert_eq!(enumerate_t_cores(3, 10), t_cores_by_filter(3, 10));
    }

    #[test]
    fn subpartition_count() {
        // partitions inside a 2×2 box
        assert_eq!(p(&[2, 2]).subpartitions().len(), 6);
    }
}
