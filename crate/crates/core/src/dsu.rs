//! Union-find, plain and with a sign carried along each parent link.

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense class index per element, numbered by first appearance.
    pub fn classes(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[x] = label[r];
        }
        (out, count)
    }
}

/// Union-find where each element is `±` its root. `union(a, b, s)` records
/// `a = s * b`; a contradicting record sets the `conflict` flag.
#[derive(Debug, Clone)]
pub(crate) struct SignedUnionFind {
    parent: Vec<usize>,
    sign: Vec<i8>,
    pub conflict: bool,
}

impl SignedUnionFind {
    pub fn new(n: usize) -> SignedUnionFind {
        SignedUnionFind {
            parent: (0..n).collect(),
            sign: vec![1; n],
            conflict: false,
        }
    }

    pub fn find(&mut self, x: usize) -> (usize, i8) {
        let p = self.parent[x];
        if p == x {
            return (x, 1);
        }
        let (r, s) = self.find(p);
        self.parent[x] = r;
        self.sign[x] *= s;
        (r, self.sign[x])
    }

    pub fn union(&mut self, a: usize, b: usize, s: i8) {
        let (ra, sa) = self.find(a);
        let (rb, sb) = self.find(b);
        if ra == rb {
            if sa != s * sb {
                self.conflict = true;
            }
            return;
        }
        // a = sa*ra, b = sb*rb, a = s*b  =>  ra = sa*s*sb*rb
        let (child, root) = if ra > rb { (ra, rb) } else { (rb, ra) };
        self.parent[child] = root;
        self.sign[child] = sa * s * sb;
    }

    /// Dense class index and sign relative to the class root per element.
    pub fn classes(&mut self) -> (Vec<(usize, i8)>, usize) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![(0, 1); n];
        let mut count = 0;
        for x in 0..n {
            let (r, s) = self.find(x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[x] = (label[r], s);
        }
        (out, count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_classes() {
        let mut u = SignedUnionFind::new(4);
        u.union(0, 1, -1);
        u.union(2, 1, 1);
        let (c, k) = u.classes();
        assert_eq!(k, 2);
        assert_eq!(c[0].0, c[2].0);
        assert_eq!(c[0].1, -c[2].1);
        assert!(!u.conflict);
        u.union(0, 2, 1);
        assert!(u.conflict);
    }

    #[test]
    fn plain_classes() {
        let mut u = UnionFind::new(5);
        u.union(3, 1);
        u.union(4, 3);
        let (c, k) = u.classes();
        assert_eq!(k, 3);
        assert_eq!(c, vec![0, 1, 2, 1, 1]);
    }
}
