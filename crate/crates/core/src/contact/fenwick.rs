/// Fenwick tree over nonnegative integer rates with prefix search.
#[derive(Debug, Clone)]
pub(crate) struct Fenwick {
    tree: Vec<u64>,
    top: usize,
}

impl Fenwick {
    pub fn new(n: usize) -> Self {
        let top = if n == 0 { 0 } else { 1usize << (usize::BITS - 1 - n.leading_zeros()) };
        Fenwick { tree: vec![0; n + 1], top }
    }

    pub fn add(&mut self, i: usize, delta: i64) {
        let mut i = i + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    pub fn total(&self) -> u64 {
        self.prefix(self.tree.len() - 1)
    }

    /// Sum of the first `i` entries.
    pub fn prefix(&self, mut i: usize) -> u64 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    pub fn find(&self, mut target: u64) -> usize {
        let mut pos = 0;
        let mut step = self.top;
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                pos = next;
                target -= self.tree[next];
            }
            step >>= 1;
        }
        pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn find_matches_linear_scan() {
        let rates = [0u64, 3, 0, 1, 5, 0, 2];
        let mut f = Fenwick::new(rates.len());
        for (i, r) in rates.iter().enumerate() {
            f.add(i, *r as i64);
        }
        assert_eq!(f.total(), 11);
        let mut expected = Vec::new();
        for (i, r) in rates.iter().enumerate() {
            expected.extend(std::iter::repeat_n(i, *r as usize));
        }
        for (t, want) in expected.iter().enumerate() {
            assert_eq!(f.find(t as u64), *want);
        }
        f.add(4, -5);
        assert_eq!(f.find(4), 6);
    }
}
