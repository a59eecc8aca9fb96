use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::word::{letter, Word};
use crate::simplicial::{OrientedTriangulation, SimplicialComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("relator {relator} uses generator {generator} but only {count} generators exist")]
    GeneratorOutOfRange {
        relator: usize,
        generator: usize,
        count: usize,
    },
    #[error("{labels} edge labels given for {count} generators")]
    LabelCount { labels: usize, count: usize },
}

/// A finite presentation. Relators are stored cyclically reduced; trivial
/// relators are dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generator_count: usize,
    relators: Vec<Word>,
    /// For presentations read off a complex: generator i is the oriented
    /// edge `labels[i] = (u, v)` with `u < v`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<(usize, usize)>>,
}

impl Presentation {
    pub fn new(generator_count: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator().filter(|&g| g >= generator_count) {
                return Err(PresentationError::GeneratorOutOfRange {
                    relator: i,
                    generator: g,
                    count: generator_count,
                });
            }
        }
        let relators = relators
            .iter()
            .map(Word::cyclically_reduced)
            .filter(|r| !r.is_identity())
            .collect();
        Ok(Presentation {
            generator_count,
            relators,
            labels: None,
        })
    }

    /// Convenience constructor from signed 1-based letter lists.
    pub fn from_letters(generator_count: usize, relators: &[&[i32]]) -> Result<Self, PresentationError> {
        Self::new(
            generator_count,
            relators.iter().map(|r| Word::from_letters(r.iter().copied())).collect(),
        )
    }

    pub fn with_labels(mut self, labels: Vec<(usize, usize)>) -> Result<Self, PresentationError> {
        if labels.len() != self.generator_count {
            return Err(PresentationError::LabelCount {
                labels: labels.len(),
                count: self.generator_count,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn labels(&self) -> Option<&[(usize, usize)]> {
        self.labels.as_deref()
    }

    /// Exponent-sum matrix, one row per relator.
    pub fn relator_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generator_count))
            .collect()
    }

    /// Edge-to-word lookup for labelled presentations.
    pub fn edge_words(&self) -> Option<EdgeWords> {
        let labels = self.labels.as_ref()?;
        Some(EdgeWords {
            generator: labels.iter().enumerate().map(|(g, &e)| (e, g)).collect(),
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} generators | ", self.generator_count)?;
        let rs: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "{}>", rs.join(", "))
    }
}

/// Maps oriented edges of a complex to group words: labelled edges give
/// their generator, every other edge (the spanning tree) the identity.
#[derive(Clone, Debug)]
pub struct EdgeWords {
    generator: HashMap<(usize, usize), usize>,
}

impl EdgeWords {
    /// Generator carried by the edge `u -> v`, with its direction.
    pub fn edge_letter(&self, u: usize, v: usize) -> Option<i32> {
        if u < v {
            self.generator.get(&(u, v)).map(|&g| letter(g, false))
        } else {
            self.generator.get(&(v, u)).map(|&g| letter(g, true))
        }
    }

    pub fn edge_word(&self, u: usize, v: usize) -> Word {
        Word::from_letters(self.edge_letter(u, v))
    }

    /// Word of the edge path through the given vertices.
    pub fn path_word(&self, path: &[usize]) -> Word {
        Word::from_letters(path.windows(2).filter_map(|w| self.edge_letter(w[0], w[1])))
    }
}

/// BFS spanning tree of the 1-skeleton, visiting neighbours in increasing
/// order. `parent[v]` is `None` for the root and unreached vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
}

impl SpanningTree {
    pub fn bfs(vertex_count: usize, edges: &[(usize, usize)], root: usize) -> Self {
        let mut adj = vec![Vec::new(); vertex_count];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let mut parent = vec![None; vertex_count];
        let mut seen = vec![false; vertex_count];
        let mut queue = VecDeque::new();
        if root < vertex_count {
            seen[root] = true;
            queue.push_back(root);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        SpanningTree { root, parent }
    }

    pub fn is_tree_edge(&self, u: usize, v: usize) -> bool {
        self.parent[v] == Some(u) || self.parent[u] == Some(v)
    }

    /// Vertices on the tree path from the root to `v`.
    pub fn path_from_root(&self, v: usize) -> Vec<usize> {
        let mut p = vec![v];
        let mut x = v;
        while let Some(u) = self.parent[x] {
            p.push(u);
            x = u;
        }
        p.reverse();
        p
    }
}

/// Fundamental group presentation of a simplicial complex's 2-skeleton:
/// generators are the non-tree edges (oriented low to high), one relator per
/// triangle.
pub fn presentation_from_complex(t: &OrientedTriangulation, base_vertex: usize) -> Presentation {
    presentation_from_skeleton(&t.complex(), base_vertex).0
}

/// As [`presentation_from_complex`], for any simplicial complex; also
/// returns the spanning tree used.
pub fn presentation_from_skeleton(
    complex: &SimplicialComplex,
    base_vertex: usize,
) -> (Presentation, SpanningTree) {
    let vertex_count = complex.count(0);
    let edges: Vec<(usize, usize)> = complex
        .simplices(1)
        .iter()
        .map(|e| (e.vertices()[0], e.vertices()[1]))
        .collect();
    let tree = SpanningTree::bfs(vertex_count, &edges, base_vertex);
    let labels: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|&(u, v)| !tree.is_tree_edge(u, v))
        .collect();
    let lookup: HashMap<(usize, usize), usize> =
        labels.iter().enumerate().map(|(g, &e)| (e, g)).collect();
    let ew = EdgeWords { generator: lookup };
    let relators = complex
        .simplices(2)
        .iter()
        .map(|s| {
            let v = s.vertices();
            ew.path_word(&[v[0], v[1], v[2], v[0]])
        })
        .collect();
    let p = Presentation::new(labels.len(), relators)
        .expect("edge generators in range")
        .with_labels(labels)
        .expect("one label per generator");
    (p, tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::validate_triangulation;

    #[test]
    fn rejects_out_of_range_generator() {
        assert!(Presentation::from_letters(1, &[&[1, 2]]).is_err());
    }

    #[test]
    fn relators_are_cyclically_reduced_and_trivial_ones_dropped() {
        let p = Presentation::from_letters(2, &[&[2, 1, -2], &[1, -1]]).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].letters(), &[1]);
    }

    #[test]
    fn triangle_boundary_circle_has_one_generator() {
        let t = validate_triangulation(vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap();
        let p = presentation_from_complex(&t, 0);
        assert_eq!(p.generator_count(), 1);
        assert!(p.relators().is_empty());
        assert_eq!(p.labels().unwrap(), &[(1, 2)]);
    }

    #[test]
    fn tree_is_bfs_with_smallest_first() {
        let tree = SpanningTree::bfs(4, &[(0, 2), (0, 1), (1, 3), (2, 3)], 0);
        assert_eq!(tree.parent, vec![None, Some(0), Some(0), Some(1)]);
        assert_eq!(tree.path_from_root(3), vec![0, 1, 3]);
    }
}
