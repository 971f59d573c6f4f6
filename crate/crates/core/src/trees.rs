//! Rooted labeled trees on `{0,..,n}`, their maximal decreasing subtrees,
//! and the exhaustive enumeration used as the oracle for every closed-form
//! count.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::{Method, TriangleRow};
use crate::error::{Error, Result};

/// Default bound on `n` for exhaustive tree enumeration; `(n+1)^n` trees are
/// visited, about 4.3e7 at the default.
pub const DEFAULT_ENUM_CAP: usize = 8;

/// A rooted tree on the labels `{0,..,n}`, stored as a parent array with
/// `parent[root] = None`. Construction goes through [`RootedLabeledTree::new`],
/// which checks all structural invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct RootedLabeledTree {
    n: usize,
    root: usize,
    parent: Vec<Option<usize>>,
}

/// Wire form of a tree: `{"n": 10, "root": 9, "parent": [10, 3, ..., null, 7]}`
/// with `null` at the root index.
#[derive(Serialize, Deserialize)]
struct TreeRepr {
    n: usize,
    root: usize,
    parent: Vec<Option<usize>>,
}

impl TryFrom<TreeRepr> for RootedLabeledTree {
    type Error = Error;

    fn try_from(repr: TreeRepr) -> Result<Self> {
        if repr.parent.len() != repr.n + 1 {
            return Err(Error::BadLabelRange {
                label: repr.parent.len().saturating_sub(1),
                max: repr.n,
            });
        }
        RootedLabeledTree::new(repr.parent, repr.root)
    }
}

impl From<RootedLabeledTree> for TreeRepr {
    fn from(t: RootedLabeledTree) -> TreeRepr {
        TreeRepr {
            n: t.n,
            root: t.root,
            parent: t.parent,
        }
    }
}

impl RootedLabeledTree {
    /// Validates a parent array and root choice: the root (and only the
    /// root) carries the `None` marker, labels are in range, and every
    /// parent chain reaches the root.
    pub fn new(parent: Vec<Option<usize>>, root: usize) -> Result<Self> {
        if parent.is_empty() {
            return Err(Error::DomainError(
                "parent array must have length n+1 >= 1".into(),
            ));
        }
        let n = parent.len() - 1;
        if root > n {
            return Err(Error::BadLabelRange {
                label: root,
                max: n,
            });
        }
        for (v, &p) in parent.iter().enumerate() {
            match p {
                Some(p) if p > n => return Err(Error::BadLabelRange { label: p, max: n }),
                None if v != root => return Err(Error::MultipleRoots { vertex: v, root }),
                _ => {}
            }
        }
        // Walk parent chains with three-color marking. Any vertex that fails
        // to reach the root sits on (or hangs off) a cycle.
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; n + 1];
        color[root] = if parent[root].is_none() { BLACK } else { WHITE };
        for start in 0..=n {
            if color[start] != WHITE {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            loop {
                match color[v] {
                    BLACK => break,
                    GRAY => return Err(Error::CycleDetected(start)),
                    _ => {}
                }
                color[v] = GRAY;
                path.push(v);
                match parent[v] {
                    Some(p) => v = p,
                    // a None off the root was rejected above; reaching it
                    // here means v == root with no marker conflict
                    None => break,
                }
            }
            for w in path {
                color[w] = BLACK;
            }
        }
        Ok(RootedLabeledTree { n, root, parent })
    }

    /// Internal constructor for trees already known to be valid.
    fn from_parts(parent: Vec<Option<usize>>, root: usize) -> Self {
        debug_assert!(RootedLabeledTree::new(parent.clone(), root).is_ok());
        RootedLabeledTree {
            n: parent.len() - 1,
            root,
            parent,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parent_array(&self) -> &[Option<usize>] {
        &self.parent
    }

    /// Children lists indexed by vertex, derived from the parent array.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.n + 1];
        for (v, &p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[p].push(v);
            }
        }
        children
    }

    /// The maximal subtree containing the root in which every edge goes from
    /// a larger parent to a smaller child.
    pub fn maximal_decreasing_subtree(&self) -> MdResult {
        let children = self.children();
        let mut vertices = BTreeSet::new();
        vertices.insert(self.root);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &c in &children[v] {
                if c < v {
                    vertices.insert(c);
                    stack.push(c);
                }
            }
        }
        let k = vertices.len() - 1;
        MdResult { vertices, k }
    }

    /// Shorthand for the refinement statistic `|MD(T)| - 1`.
    pub fn md_statistic(&self) -> usize {
        self.maximal_decreasing_subtree().k
    }

    /// True when the maximal decreasing subtree is the root alone, i.e.
    /// every child of the root exceeds the root.
    pub fn is_local_minimum(&self) -> bool {
        self.parent
            .iter()
            .enumerate()
            .all(|(v, &p)| p != Some(self.root) || v > self.root)
    }

    /// Cuts the edges of the maximal decreasing subtree, producing one local
    /// minimum tree per MD vertex. Pieces are ordered by increasing root
    /// label; labels inside each piece are compressed to `0..=m` while the
    /// original labels are kept alongside.
    pub fn decompose(&self) -> Vec<TreePiece> {
        let md = self.maximal_decreasing_subtree();
        // assign every vertex to the MD vertex whose piece it falls in
        let mut owner = vec![usize::MAX; self.n + 1];
        for &v in &md.vertices {
            owner[v] = v;
        }
        let children = self.children();
        let mut roots: Vec<usize> = md.vertices.iter().copied().collect();
        roots.sort_unstable();
        for &r in &roots {
            let mut stack = vec![r];
            while let Some(v) = stack.pop() {
                for &c in &children[v] {
                    // edges between two MD vertices are the cut edges
                    if !md.vertices.contains(&c) {
                        owner[c] = r;
                        stack.push(c);
                    }
                }
            }
        }
        roots
            .iter()
            .map(|&r| {
                // ascending scan keeps the label list sorted
                let labels: Vec<usize> = (0..=self.n).filter(|&v| owner[v] == r).collect();
                let index_of = |label: usize| labels.binary_search(&label).unwrap();
                let parent = labels
                    .iter()
                    .map(|&v| {
                        if v == r {
                            None
                        } else {
                            Some(index_of(self.parent[v].unwrap()))
                        }
                    })
                    .collect();
                let tree = RootedLabeledTree::from_parts(parent, index_of(r));
                let md_parent = if r == self.root {
                    None
                } else {
                    self.parent[r]
                };
                TreePiece {
                    labels,
                    tree,
                    md_parent,
                }
            })
            .collect()
    }
}

/// The vertex set of the maximal decreasing subtree and the statistic
/// `k = |MD(T)| - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdResult {
    pub vertices: BTreeSet<usize>,
    pub k: usize,
}

/// One local minimum tree cut out of a larger tree. `labels[i]` is the
/// original label of the piece's vertex `i`; `md_parent` is the original
/// parent of the piece's root (`None` for the piece holding the overall
/// root).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePiece {
    pub labels: Vec<usize>,
    pub tree: RootedLabeledTree,
    pub md_parent: Option<usize>,
}

impl TreePiece {
    /// The piece root under its original label.
    pub fn original_root(&self) -> usize {
        self.labels[self.tree.root()]
    }

    /// The label set of the piece, ascending.
    pub fn label_set(&self) -> &[usize] {
        &self.labels
    }
}

/// Rebuilds the original tree from its decomposition by re-attaching each
/// piece root to its recorded parent.
pub fn reassemble(pieces: &[TreePiece]) -> Result<RootedLabeledTree> {
    let total: usize = pieces.iter().map(|p| p.labels.len()).sum();
    if total == 0 {
        return Err(Error::DomainError("no pieces to reassemble".into()));
    }
    let n = total - 1;
    let mut parent = vec![None; total];
    let mut root = None;
    for piece in pieces {
        for (i, &label) in piece.labels.iter().enumerate() {
            if label > n {
                return Err(Error::BadLabelRange { label, max: n });
            }
            parent[label] = match piece.tree.parent(i) {
                Some(p) => Some(piece.labels[p]),
                None => piece.md_parent,
            };
        }
        if piece.md_parent.is_none() {
            root = Some(piece.original_root());
        }
    }
    let root = root.ok_or_else(|| Error::DomainError("no root piece present".into()))?;
    RootedLabeledTree::new(parent, root)
}

/// Decodes a Prüfer sequence over `0..m` into the edge list of a labeled
/// tree on `m` vertices, repeatedly joining the smallest remaining leaf to
/// the next sequence element.
fn decode_pruefer(seq: &[usize], m: usize, edges: &mut Vec<(usize, usize)>) {
    edges.clear();
    if m <= 1 {
        return;
    }
    debug_assert_eq!(seq.len(), m - 2);
    let mut degree = vec![1u32; m];
    for &s in seq {
        degree[s] += 1;
    }
    let mut ptr = (0..m).find(|&v| degree[v] == 1).unwrap();
    let mut leaf = ptr;
    for &s in seq {
        edges.push((leaf, s));
        degree[leaf] = 0;
        degree[s] -= 1;
        if degree[s] == 1 && s < ptr {
            leaf = s;
        } else {
            ptr = (ptr + 1..m).find(|&v| degree[v] == 1).unwrap();
            leaf = ptr;
        }
    }
    let u = (0..m).find(|&v| degree[v] == 1).unwrap();
    let v = (u + 1..m).find(|&v| degree[v] == 1).unwrap();
    edges.push((u, v));
}

/// Streams every rooted labeled tree on `{0,..,n}` exactly once: all
/// `(n+1)^(n-1)` Prüfer codes crossed with all `n+1` root choices, root
/// varying slowest, the code's last position fastest.
pub struct TreeEnumerator {
    n: usize,
    root: usize,
    seq: Vec<usize>,
    exhausted: bool,
    edges: Vec<(usize, usize)>,
}

impl TreeEnumerator {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        if n > cap {
            return Err(Error::LimitExceeded { n, cap });
        }
        Ok(TreeEnumerator {
            n,
            root: 0,
            seq: vec![0; n.saturating_sub(1)],
            exhausted: false,
            edges: Vec::with_capacity(n),
        })
    }

    fn build_current(&mut self) -> RootedLabeledTree {
        let m = self.n + 1;
        decode_pruefer(&self.seq, m, &mut self.edges);
        let mut adjacency = vec![Vec::new(); m];
        for &(a, b) in &self.edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        let mut parent = vec![None; m];
        let mut seen = vec![false; m];
        seen[self.root] = true;
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    stack.push(w);
                }
            }
        }
        RootedLabeledTree::from_parts(parent, self.root)
    }

    fn step(&mut self) {
        for slot in self.seq.iter_mut().rev() {
            if *slot < self.n {
                *slot += 1;
                return;
            }
            *slot = 0;
        }
        self.root += 1;
        if self.root > self.n {
            self.exhausted = true;
        }
    }
}

impl Iterator for TreeEnumerator {
    type Item = RootedLabeledTree;

    fn next(&mut self) -> Option<RootedLabeledTree> {
        if self.exhausted {
            return None;
        }
        let tree = self.build_current();
        self.step();
        Some(tree)
    }
}

/// Convenience wrapper around [`TreeEnumerator`].
pub fn enumerate_trees(n: usize, cap: usize) -> Result<TreeEnumerator> {
    TreeEnumerator::new(n, cap)
}

/// Classifies every tree on `{0,..,n}` by its MD statistic. This is the
/// brute-force oracle for all closed-form counts.
pub fn brute_force_triangle(n: usize, cap: usize) -> Result<TriangleRow> {
    let mut counts = vec![0u64; n + 1];
    for tree in enumerate_trees(n, cap)? {
        counts[tree.md_statistic()] += 1;
    }
    let values = counts.into_iter().map(BigInt::from).collect();
    Ok(TriangleRow::new(n, values, Method::Enumerate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    /// The eleven-vertex tree used as the running fixture: root 9, with
    /// decreasing edges down to {3, 6, 7, 1, 2} and the rest hanging below.
    pub(crate) fn fixture_tree() -> RootedLabeledTree {
        let mut parent = vec![None; 11];
        for (v, p) in [
            (3, 9),
            (6, 9),
            (7, 9),
            (1, 3),
            (4, 1),
            (8, 1),
            (2, 7),
            (10, 7),
            (0, 10),
            (5, 10),
        ] {
            parent[v] = Some(p);
        }
        RootedLabeledTree::new(parent, 9).unwrap()
    }

    #[test]
    fn validate_single_vertex() {
        let t = RootedLabeledTree::new(vec![None], 0).unwrap();
        assert_eq!(t.n(), 0);
        assert_eq!(t.root(), 0);
    }

    #[test]
    fn validate_fixture() {
        let t = fixture_tree();
        assert_eq!(t.n(), 10);
        assert_eq!(t.parent(0), Some(10));
        assert_eq!(t.parent(9), None);
    }

    #[test]
    fn validate_rejects_cycle() {
        let err = RootedLabeledTree::new(vec![Some(1), Some(0)], 0).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_)));
    }

    #[test]
    fn validate_rejects_second_root_marker() {
        let err = RootedLabeledTree::new(vec![None, None, Some(0)], 0).unwrap_err();
        assert!(matches!(err, Error::MultipleRoots { vertex: 1, .. }));
    }

    #[test]
    fn validate_rejects_out_of_range() {
        let err = RootedLabeledTree::new(vec![None, Some(5)], 0).unwrap_err();
        assert!(matches!(err, Error::BadLabelRange { label: 5, .. }));
        let err = RootedLabeledTree::new(vec![None, Some(0)], 7).unwrap_err();
        assert!(matches!(err, Error::BadLabelRange { label: 7, .. }));
    }

    #[test]
    fn validate_rejects_detached_cycle() {
        // 0 is a valid root but 1 and 2 point at each other
        let err = RootedLabeledTree::new(vec![None, Some(2), Some(1)], 0).unwrap_err();
        assert!(matches!(err, Error::CycleDetected(_)));
    }

    #[test]
    fn md_of_fixture() {
        let md = fixture_tree().maximal_decreasing_subtree();
        let expected: BTreeSet<usize> = [9, 3, 6, 7, 1, 2].into_iter().collect();
        assert_eq!(md.vertices, expected);
        assert_eq!(md.k, 5);
    }

    #[test]
    fn md_of_single_vertex() {
        let t = RootedLabeledTree::new(vec![None], 0).unwrap();
        let md = t.maximal_decreasing_subtree();
        assert_eq!(md.vertices, [0].into_iter().collect());
        assert_eq!(md.k, 0);
    }

    #[test]
    fn md_of_decreasing_path() {
        for n in 1..=6 {
            let mut parent: Vec<Option<usize>> = (0..=n).map(|v| Some(v + 1)).collect();
            parent[n] = None;
            let t = RootedLabeledTree::new(parent, n).unwrap();
            assert_eq!(t.md_statistic(), n);
        }
    }

    #[test]
    fn local_minimum_cases() {
        let single = RootedLabeledTree::new(vec![None], 0).unwrap();
        assert!(single.is_local_minimum());

        let star = RootedLabeledTree::new(vec![None, Some(0), Some(0)], 0).unwrap();
        assert!(star.is_local_minimum());

        let path = RootedLabeledTree::new(vec![Some(1), Some(2), None], 2).unwrap();
        assert!(!path.is_local_minimum());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(0, 8).unwrap().count(), 1);
        assert_eq!(enumerate_trees(1, 8).unwrap().count(), 2);
        assert_eq!(enumerate_trees(3, 8).unwrap().count(), 64);
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(
            enumerate_trees(9, 8),
            Err(Error::LimitExceeded { n: 9, cap: 8 })
        ));
    }

    #[test]
    fn enumeration_yields_distinct_trees() {
        for n in 0..=4 {
            let all: Vec<_> = enumerate_trees(n, 8).unwrap().collect();
            let distinct: std::collections::HashSet<_> = all
                .iter()
                .map(|t| (t.root(), t.parent_array().to_vec()))
                .collect();
            assert_eq!(distinct.len(), all.len(), "n={n}");
        }
    }

    #[test]
    fn brute_force_rows() {
        let row2 = brute_force_triangle(2, 8).unwrap();
        assert_eq!(
            row2.values(),
            &[BigInt::from(4), BigInt::from(3), BigInt::from(2)]
        );
        let row3 = brute_force_triangle(3, 8).unwrap();
        assert_eq!(
            row3.values(),
            &[
                BigInt::from(27),
                BigInt::from(19),
                BigInt::from(12),
                BigInt::from(6)
            ]
        );
        let row0 = brute_force_triangle(0, 8).unwrap();
        assert_eq!(row0.values(), &[BigInt::one()]);
    }

    #[test]
    fn decompose_fixture() {
        let pieces = fixture_tree().decompose();
        let roots: Vec<usize> = pieces.iter().map(|p| p.original_root()).collect();
        assert_eq!(roots, vec![1, 2, 3, 6, 7, 9]);
        let sets: Vec<Vec<usize>> = pieces.iter().map(|p| p.labels.clone()).collect();
        assert_eq!(
            sets,
            vec![
                vec![1, 4, 8],
                vec![2],
                vec![3],
                vec![6],
                vec![0, 5, 7, 10],
                vec![9],
            ]
        );
        assert!(pieces.iter().all(|p| p.tree.is_local_minimum()));
    }

    #[test]
    fn decompose_local_minimum_is_identity() {
        let star = RootedLabeledTree::new(vec![None, Some(0), Some(0)], 0).unwrap();
        let pieces = star.decompose();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].labels, vec![0, 1, 2]);
        assert_eq!(pieces[0].tree, star);
        assert_eq!(pieces[0].md_parent, None);
    }

    #[test]
    fn decompose_decreasing_path() {
        let t = RootedLabeledTree::new(vec![Some(1), Some(2), None], 2).unwrap();
        let pieces = t.decompose();
        assert_eq!(pieces.len(), 3);
        let sets: Vec<Vec<usize>> = pieces.iter().map(|p| p.labels.clone()).collect();
        assert_eq!(sets, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn reassemble_round_trip() {
        let t = fixture_tree();
        assert_eq!(reassemble(&t.decompose()).unwrap(), t);
    }

    #[test]
    fn tree_json_round_trip() {
        let t = fixture_tree();
        let json = serde_json::to_string(&t).unwrap();
        assert!(json.contains("\"root\":9"));
        assert!(json.contains("null"));
        let back: RootedLabeledTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tree_json_rejects_invalid() {
        let bad = r#"{"n":1,"root":0,"parent":[1,0]}"#;
        assert!(serde_json::from_str::<RootedLabeledTree>(bad).is_err());
    }
}
