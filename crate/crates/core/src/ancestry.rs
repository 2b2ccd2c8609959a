//! Constant-time lowest common ancestor and level ancestor queries over a
//! rooted forest-free parent array.
//!
//! LCA uses an Euler tour with a sparse table over depths. Level ancestor
//! uses jump pointers combined with doubled long-path ladders. Both take
//! `O(n log n)` space.

use crate::tree::NONE;

#[derive(Debug, Clone)]
pub struct AncestryIndex {
    parent: Vec<usize>,
    depth: Vec<usize>,
    root: usize,
    first: Vec<usize>,
    sparse: Vec<Vec<usize>>,
    jump: Vec<Vec<usize>>,
    ladder_of: Vec<usize>,
    ladder_pos: Vec<usize>,
    ladders: Vec<Vec<usize>>,
}

impl AncestryIndex {
    /// `parent[v]` is `NONE` for exactly one vertex, the root.
    pub fn new(parent: &[usize]) -> Self {
        let n = parent.len();
        assert!(n > 0, "empty tree");
        let mut children = vec![Vec::new(); n];
        let mut root = NONE;
        for (v, &p) in parent.iter().enumerate() {
            if p == NONE {
                assert_eq!(root, NONE, "more than one root");
                root = v;
            } else {
                children[p].push(v);
            }
        }
        assert_ne!(root, NONE, "no root");

        // preorder, depths and Euler tour
        let mut depth = vec![0; n];
        let mut order = Vec::with_capacity(n);
        let mut first = vec![0; n];
        let mut euler = Vec::with_capacity(2 * n);
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next == 0 {
                first[v] = euler.len();
                order.push(v);
            }
            euler.push(v);
            if *next < children[v].len() {
                let c = children[v][*next];
                *next += 1;
                depth[c] = depth[v] + 1;
                stack.push((c, 0));
            } else {
                stack.pop();
            }
        }
        assert_eq!(order.len(), n, "parent array is not a single tree");

        let m = euler.len();
        let mut sparse = vec![euler];
        let mut span = 1;
        while 2 * span <= m {
            let prev = sparse.last().unwrap();
            let row: Vec<usize> = (0..=m - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if depth[a] <= depth[b] {
                        a
                    } else {
                        b
                    }
                })
                .collect();
            sparse.push(row);
            span *= 2;
        }

        let max_depth = depth.iter().copied().max().unwrap_or(0);
        let mut jump = vec![parent.to_vec()];
        let mut reach = 1;
        while 2 * reach <= max_depth {
            let prev = jump.last().unwrap();
            let row = (0..n)
                .map(|v| if prev[v] == NONE { NONE } else { prev[prev[v]] })
                .collect();
            jump.push(row);
            reach *= 2;
        }

        // long-path decomposition: height in vertices, heaviest child first
        let mut height = vec![1usize; n];
        for &v in order.iter().rev() {
            if parent[v] != NONE {
                let p = parent[v];
                height[p] = height[p].max(height[v] + 1);
            }
        }
        let mut ladder_of = vec![NONE; n];
        let mut ladder_pos = vec![0; n];
        let mut ladders = Vec::new();
        for &top in &order {
            if ladder_of[top] != NONE {
                continue;
            }
            let mut path = vec![top];
            let mut v = top;
            while let Some(&c) = children[v].iter().max_by_key(|&&c| (height[c], std::cmp::Reverse(c))) {
                path.push(c);
                v = c;
            }
            let ext = path.len().min(depth[top]);
            let mut ladder = Vec::with_capacity(ext + path.len());
            let mut a = top;
            for _ in 0..ext {
                a = parent[a];
                ladder.push(a);
            }
            ladder.reverse();
            let id = ladders.len();
            for (j, &p) in path.iter().enumerate() {
                ladder_of[p] = id;
                ladder_pos[p] = ext + j;
            }
            ladder.extend(path);
            ladders.push(ladder);
        }

        AncestryIndex {
            parent: parent.to_vec(),
            depth,
            root,
            first,
            sparse,
            jump,
            ladder_of,
            ladder_pos,
            ladders,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p)
    }

    pub fn lca(&self, a: usize, b: usize) -> usize {
        let (mut i, mut j) = (self.first[a], self.first[b]);
        if i > j {
            std::mem::swap(&mut i, &mut j);
        }
        let len = j - i + 1;
        let r = usize::BITS as usize - 1 - len.leading_zeros() as usize;
        let (x, y) = (self.sparse[r][i], self.sparse[r][j + 1 - (1 << r)]);
        if self.depth[x] <= self.depth[y] {
            x
        } else {
            y
        }
    }

    /// Ancestor of `v` at depth `level`, or `None` if `level > depth(v)`.
    pub fn level_ancestor(&self, v: usize, level: usize) -> Option<usize> {
        let d = self.depth[v];
        if level > d {
            return None;
        }
        let delta = d - level;
        if delta == 0 {
            return Some(v);
        }
        let i = usize::BITS as usize - 1 - delta.leading_zeros() as usize;
        let u = self.jump[i][v];
        let rest = delta - (1 << i);
        let ladder = &self.ladders[self.ladder_of[u]];
        Some(ladder[self.ladder_pos[u] - rest])
    }

    /// Child of `a` on the path towards its descendant `b`.
    pub fn child_towards(&self, a: usize, b: usize) -> Option<usize> {
        if self.depth[b] <= self.depth[a] {
            return None;
        }
        let c = self.level_ancestor(b, self.depth[a] + 1)?;
        (self.parent[c] == a).then_some(c)
    }

    /// Neighbour of `a` on the tree path from `a` to `b` (`a != b`).
    pub fn step_towards(&self, a: usize, b: usize) -> usize {
        debug_assert_ne!(a, b);
        if self.lca(a, b) == a {
            self.level_ancestor(b, self.depth[a] + 1).expect("descendant is deeper")
        } else {
            self.parent[a]
        }
    }

    #[cfg(test)]
    fn euler_len(&self) -> usize {
        self.sparse[0].len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_ancestors(parent: &[usize], mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while parent[v] != NONE {
            v = parent[v];
            out.push(v);
        }
        out.reverse();
        out
    }

    fn check(parent: &[usize]) {
        let idx = AncestryIndex::new(parent);
        let n = parent.len();
        let anc: Vec<Vec<usize>> = (0..n).map(|v| naive_ancestors(parent, v)).collect();
        for a in 0..n {
            assert_eq!(idx.depth(a), anc[a].len() - 1);
            for (lvl, &x) in anc[a].iter().enumerate() {
                assert_eq!(idx.level_ancestor(a, lvl), Some(x));
            }
            assert_eq!(idx.level_ancestor(a, anc[a].len()), None);
            for b in 0..n {
                let common = anc[a].iter().zip(&anc[b]).take_while(|(x, y)| x == y).count();
                assert_eq!(idx.lca(a, b), anc[a][common - 1], "lca({a}, {b})");
            }
        }
        assert!(idx.euler_len() <= 2 * n);
    }

    #[test]
    fn single_vertex() {
        let idx = AncestryIndex::new(&[NONE]);
        assert_eq!(idx.lca(0, 0), 0);
        assert_eq!(idx.level_ancestor(0, 0), Some(0));
    }

    #[test]
    fn path_and_star() {
        let mut path = vec![NONE];
        path.extend(0..99);
        check(&path);
        let mut star = vec![NONE];
        star.extend(std::iter::repeat(0).take(50));
        check(&star);
    }

    #[test]
    fn random_trees_match_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 3, 10, 57, 200] {
            for _ in 0..5 {
                // random parent array with root somewhere in the middle
                let perm: Vec<usize> = {
                    let mut p: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        p.swap(i, rng.gen_range(0..=i));
                    }
                    p
                };
                let mut parent = vec![NONE; n];
                for i in 1..n {
                    parent[perm[i]] = perm[rng.gen_range(0..i)];
                }
                check(&parent);
            }
        }
    }

    #[test]
    fn step_towards_both_directions() {
        // 0 - 1 - 2, 0 - 3
        let parent = [NONE, 0, 1, 0];
        let idx = AncestryIndex::new(&parent);
        assert_eq!(idx.step_towards(0, 2), 1);
        assert_eq!(idx.step_towards(2, 3), 1);
        assert_eq!(idx.step_towards(3, 2), 0);
        assert_eq!(idx.child_towards(0, 2), Some(1));
        assert_eq!(idx.child_towards(2, 0), None);
    }
}
