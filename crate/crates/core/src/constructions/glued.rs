//! The complex obtained from one copy of the standard simplex per term of an
//! integral cycle, with codimension-one faces identified whenever they lie
//! over the same face of the triangulation.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ConstructionError, DEFAULT_COSET_LIMIT};
use crate::groups::{presentation_from_complex, tietze_simplify, todd_coxeter, Presentation, Word};
use crate::simplicial::{IntegerChain, OrientedTriangulation};

/// One simplex of the glued complex: the base simplex it maps onto (sorted
/// vertices, so local vertex i maps to `base[i]`) and its coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedCell {
    pub base: Vec<usize>,
    pub coefficient: BigInt,
    /// Vertex class of each local vertex.
    pub vertices: Vec<usize>,
    /// Edge class of each local edge (a, b), a < b, in lexicographic order.
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedComplex {
    pub dimension: usize,
    pub cells: Vec<GluedCell>,
    /// Number of face classes in each dimension 0..=n.
    pub face_counts: Vec<usize>,
    /// Base vertex of each vertex class.
    pub vertex_base: Vec<usize>,
    /// Edge classes as (tail, head) vertex classes, tail the lower local vertex.
    pub edges: Vec<(usize, usize)>,
    /// Triangle classes as edge classes (01, 12, 02).
    pub triangles: Vec<[usize; 3]>,
    /// Edges added between vertex classes of different components.
    pub bridges: Vec<(usize, usize)>,
    /// Fundamental group of the 2-skeleton (plus bridges): one generator per
    /// non-tree edge, one relator per triangle.
    pub presentation: Presentation,
    /// Edge class of each generator.
    pub generator_edges: Vec<usize>,
    /// Per edge class: `Some(g)` for generators, `None` for tree edges.
    pub edge_generator: Vec<Option<usize>>,
    /// Tree path from the root vertex class, as signed edge steps
    /// `(edge, forward)`; bridges are omitted since they map trivially.
    pub root_paths: Vec<Vec<(usize, bool)>>,
    /// Cellular boundary of the glued cycle vanishes.
    pub cycle_is_closed: bool,
    /// Pushing the glued cycle to the base reproduces the input chain.
    pub pushforward_matches: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

/// Position of the pair (a, b), a < b, among pairs from 0..=n in
/// lexicographic order.
fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * (2 * n + 1 - a) / 2 + (b - a - 1)
}

fn mask_of(cell: &[usize], vertices: &[usize]) -> usize {
    vertices
        .iter()
        .map(|v| 1usize << cell.binary_search(v).expect("sub-face vertex lies in the cell"))
        .fold(0, |a, b| a | b)
}

fn vertices_of(cell: &[usize], mask: usize) -> Vec<usize> {
    cell.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect()
}

fn check_chain(t: &OrientedTriangulation, c: &IntegerChain) -> Result<(), ConstructionError> {
    let n = t.dimension();
    if c.degree() != n {
        return Err(ConstructionError::DimensionMismatch {
            expected: n,
            found: c.degree(),
        });
    }
    let complex = t.complex();
    for (s, _) in c.iter() {
        if complex.index_of(s).is_none() || s.len() != n + 1 {
            return Err(ConstructionError::NotSupported(s.vertices().to_vec()));
        }
    }
    if !c.boundary().is_zero() {
        return Err(ConstructionError::NotACycle);
    }
    Ok(())
}

/// Glues one simplex per term of `c` along codimension-one faces lying over
/// the same base face. Components left separate are joined by bridge edges,
/// which is homotopy equivalent to identifying one vertex of each.
pub fn build_glued_complex(t: &OrientedTriangulation, c: &IntegerChain) -> Result<GluedComplex, ConstructionError> {
    check_chain(t, c)?;
    let n = t.dimension();
    let stride = 1usize << (n + 1);
    let full = stride - 1;
    let cells: Vec<(Vec<usize>, BigInt)> = c.iter().map(|(s, a)| (s.vertices().to_vec(), a.clone())).collect();
    let m = cells.len();

    let mut by_face: HashMap<Vec<usize>, Vec<(usize, usize)>> = HashMap::new();
    for (j, (vs, _)) in cells.iter().enumerate() {
        for i in 0..=n {
            let mask = full ^ (1 << i);
            by_face.entry(vertices_of(vs, mask)).or_default().push((j, mask));
        }
    }
    let mut uf = UnionFind::new(m * stride);
    let mut cell_uf = UnionFind::new(m);
    let mut groups: Vec<_> = by_face.into_iter().collect();
    groups.sort();
    for (_, members) in &groups {
        let (j0, mask0) = members[0];
        for &(j, mask) in &members[1..] {
            cell_uf.union(j0, j);
            // carry every sub-face along, matched by base vertices
            for sub in 1..=mask0 {
                if sub & !mask0 != 0 {
                    continue;
                }
                let vs = vertices_of(&cells[j0].0, sub);
                let other = mask_of(&cells[j].0, &vs);
                debug_assert_eq!(other & !mask, 0);
                uf.union(j0 * stride + sub, j * stride + other);
            }
        }
    }

    // compact class ids per dimension
    let mut class_id: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n + 1];
    let mut class_of = |uf: &mut UnionFind, j: usize, mask: usize| -> usize {
        let root = uf.find(j * stride + mask);
        let map = &mut class_id[mask.count_ones() as usize - 1];
        let next = map.len();
        *map.entry(root).or_insert(next)
    };
    let mut vertex_base = Vec::new();
    let mut glued_cells = Vec::with_capacity(m);
    for (j, (vs, a)) in cells.iter().enumerate() {
        let mut classes = Vec::with_capacity(n + 1);
        for (i, &v) in vs.iter().enumerate() {
            let id = class_of(&mut uf, j, 1 << i);
            if id == vertex_base.len() {
                vertex_base.push(v);
            }
            classes.push(id);
        }
        glued_cells.push(GluedCell {
            base: vs.clone(),
            coefficient: a.clone(),
            vertices: classes,
            edges: Vec::new(),
        });
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (j, cell) in glued_cells.iter_mut().enumerate() {
        for a in 0..=n {
            for b in a + 1..=n {
                let id = class_of(&mut uf, j, (1 << a) | (1 << b));
                if id == edges.len() {
                    edges.push((cell.vertices[a], cell.vertices[b]));
                }
                cell.edges.push(id);
            }
        }
    }
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    if n >= 2 {
        for j in 0..m {
            for a in 0..=n {
                for b in a + 1..=n {
                    for d in b + 1..=n {
                        let id = class_of(&mut uf, j, (1 << a) | (1 << b) | (1 << d));
                        if id == triangles.len() {
                            let e = &glued_cells[j].edges;
                            triangles.push([e[pair_index(n, a, b)], e[pair_index(n, b, d)], e[pair_index(n, a, d)]]);
                        }
                    }
                }
            }
        }
    }
    // remaining dimensions are only counted
    for j in 0..m {
        for mask in 1..=full {
            if mask.count_ones() > 3 {
                class_of(&mut uf, j, mask);
            }
        }
    }
    let face_counts: Vec<usize> = class_id.iter().map(HashMap::len).collect();

    let mut bridges = Vec::new();
    let root_cell = 0;
    for j in 1..m {
        if cell_uf.union(root_cell, j) {
            bridges.push((glued_cells[root_cell].vertices[0], glued_cells[j].vertices[0]));
        }
    }

    // cellular boundary of the glued cycle
    let mut boundary: HashMap<usize, BigInt> = HashMap::new();
    for (j, cell) in glued_cells.iter().enumerate() {
        for i in 0..=n {
            let root = uf.find(j * stride + (full ^ (1 << i)));
            let sign = if i % 2 == 0 { 1 } else { -1 };
            *boundary.entry(root).or_default() += &cell.coefficient * sign;
        }
    }
    let cycle_is_closed = n == 0 || boundary.values().all(Zero::is_zero);
    let mut pushed = IntegerChain::new(n);
    for cell in &glued_cells {
        let vs: Vec<usize> = cell.vertices.iter().map(|&v| vertex_base[v]).collect();
        pushed.add_ordered(&vs, cell.coefficient.clone());
    }
    let pushforward_matches = &pushed == c;

    let (presentation, generator_edges, edge_generator, root_paths) =
        skeleton_presentation(vertex_base.len(), &edges, &triangles, &bridges);
    Ok(GluedComplex {
        dimension: n,
        cells: glued_cells,
        face_counts,
        vertex_base,
        edges,
        triangles,
        bridges,
        presentation,
        generator_edges,
        edge_generator,
        root_paths,
        cycle_is_closed,
        pushforward_matches,
    })
}

type SkeletonData = (Presentation, Vec<usize>, Vec<Option<usize>>, Vec<Vec<(usize, bool)>>);

fn skeleton_presentation(
    vertex_count: usize,
    edges: &[(usize, usize)],
    triangles: &[[usize; 3]],
    bridges: &[(usize, usize)],
) -> SkeletonData {
    // adjacency: (neighbour, Some((edge, forward))) or None for bridges
    let mut adj: Vec<Vec<(usize, Option<(usize, bool)>)>> = vec![Vec::new(); vertex_count];
    for (e, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((b, Some((e, true))));
        adj[b].push((a, Some((e, false))));
    }
    for &(a, b) in bridges {
        adj[a].push((b, None));
        adj[b].push((a, None));
    }
    let mut tree_edge = vec![false; edges.len()];
    let mut root_paths: Vec<Option<Vec<(usize, bool)>>> = vec![None; vertex_count];
    let mut queue = VecDeque::new();
    if vertex_count > 0 {
        root_paths[0] = Some(Vec::new());
        queue.push_back(0);
    }
    while let Some(u) = queue.pop_front() {
        for &(v, step) in &adj[u] {
            if root_paths[v].is_none() {
                let mut path = root_paths[u].clone().expect("visited");
                if let Some((e, fwd)) = step {
                    tree_edge[e] = true;
                    path.push((e, fwd));
                }
                root_paths[v] = Some(path);
                queue.push_back(v);
            }
        }
    }
    let generator_edges: Vec<usize> = (0..edges.len()).filter(|&e| !tree_edge[e]).collect();
    let mut edge_generator = vec![None; edges.len()];
    for (g, &e) in generator_edges.iter().enumerate() {
        edge_generator[e] = Some(g);
    }
    let letter = |e: usize, inverse: bool| edge_generator[e].map(|g| if inverse { -(g as i32 + 1) } else { g as i32 + 1 });
    let relators = triangles
        .iter()
        .map(|&[e01, e12, e02]| Word::from_letters([letter(e01, false), letter(e12, false), letter(e02, true)].into_iter().flatten()))
        .collect();
    let p = Presentation::new(generator_edges.len(), relators).expect("generators in range");
    let root_paths = root_paths.into_iter().map(|p| p.expect("bridges connect the complex")).collect();
    (p, generator_edges, edge_generator, root_paths)
}

impl GluedComplex {
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Edge class of the local edge (a, b), a < b, of cell j.
    pub fn cell_edge(&self, j: usize, a: usize, b: usize) -> usize {
        self.cells[j].edges[pair_index(self.dimension, a, b)]
    }

    /// Image in the base of the loop through generator g, as a word in the
    /// base presentation `presentation_from_complex(t, base_vertex)`.
    pub fn generator_images(&self, base: &Presentation) -> Vec<Word> {
        let words = base.edge_words().expect("base presentation is edge-labelled");
        let edge_image = |e: usize, fwd: bool| {
            let (a, b) = self.edges[e];
            let (u, v) = (self.vertex_base[a], self.vertex_base[b]);
            if fwd {
                words.edge_word(u, v)
            } else {
                words.edge_word(v, u)
            }
        };
        let path_image = |v: usize| {
            let mut w = Word::identity();
            for &(e, fwd) in &self.root_paths[v] {
                w = w.concat(&edge_image(e, fwd));
            }
            w
        };
        self.generator_edges
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                path_image(a).concat(&edge_image(e, true)).concat(&path_image(b).inverse())
            })
            .collect()
    }
}

/// Outcome of the rank and surjectivity checks on a glued complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluedCertificate {
    pub dimension: usize,
    pub cells: usize,
    /// `dimension * cells`.
    pub rank_target: usize,
    /// Generators left after eliminating every edge not incident to a
    /// cell's first vertex.
    pub guided_rank: usize,
    /// Generators left after further greedy elimination.
    pub achieved_rank: usize,
    pub rank_flag: bool,
    /// Images of the glued complex's generators in the base group.
    pub images: Vec<Word>,
    pub image_index: usize,
    pub cycle_is_closed: bool,
    pub pushforward_matches: bool,
}

impl GluedCertificate {
    pub fn passed(&self) -> bool {
        !self.rank_flag && self.image_index == 1 && self.cycle_is_closed && self.pushforward_matches
    }
}

/// Guided elimination: every edge (i, k) with 0 < i of some cell equals
/// `e(0,i)^-1 e(0,k)` by the triangle (0, i, k) of that cell, leaving only
/// edges incident to first vertices, at most n per cell.
fn guided_elimination(x: &GluedComplex) -> Presentation {
    let n = x.dimension;
    let gens = x.presentation.generator_count();
    let mut protected = vec![false; gens];
    let mut first_edges: Vec<Vec<usize>> = Vec::with_capacity(x.cells.len());
    for j in 0..x.cells.len() {
        let es: Vec<usize> = (1..=n).map(|i| x.cell_edge(j, 0, i)).collect();
        for &e in &es {
            if let Some(g) = x.edge_generator[e] {
                protected[g] = true;
            }
        }
        first_edges.push(es);
    }
    let letter = |e: usize| x.edge_generator[e].map(Word::generator).unwrap_or_default();
    let mut expr: Vec<Option<Word>> = vec![None; gens];
    for j in 0..x.cells.len() {
        for i in 1..=n {
            for k in i + 1..=n {
                let e = x.cell_edge(j, i, k);
                if let Some(g) = x.edge_generator[e] {
                    if !protected[g] && expr[g].is_none() {
                        expr[g] = Some(letter(first_edges[j][i - 1]).inverse().concat(&letter(first_edges[j][k - 1])));
                    }
                }
            }
        }
    }
    let kept: Vec<usize> = (0..gens).filter(|&g| expr[g].is_none()).collect();
    let mut new_index = vec![usize::MAX; gens];
    for (i, &g) in kept.iter().enumerate() {
        new_index[g] = i;
    }
    let relators = x
        .presentation
        .relators()
        .iter()
        .map(|r| {
            r.substitute(|h| match &expr[h] {
                Some(w) => w.clone(),
                None => Word::generator(h),
            })
            .relabel(|h| new_index[h])
        })
        .collect();
    Presentation::new(kept.len(), relators).expect("kept generators relabelled in range")
}

/// Checks the rank bound `n * cells` for the glued complex's group and that
/// its image in the base group is everything.
pub fn verify_lemma_4_1(t: &OrientedTriangulation, x: &GluedComplex) -> Result<GluedCertificate, ConstructionError> {
    verify_glued_with_limit(t, x, DEFAULT_COSET_LIMIT)
}

pub fn verify_glued_with_limit(
    t: &OrientedTriangulation,
    x: &GluedComplex,
    max_cosets: usize,
) -> Result<GluedCertificate, ConstructionError> {
    let guided = guided_elimination(x);
    let further = tietze_simplify(&guided, 100_000);
    let target = x.dimension * x.cells.len();
    let base = presentation_from_complex(t, 0);
    let images = x.generator_images(&base);
    let simp = tietze_simplify(&base, 100_000);
    let reduced: Vec<Word> = images.iter().map(|w| w.substitute(|h| simp.images[h].clone())).collect();
    let table = todd_coxeter(&simp.presentation, &reduced, max_cosets)
        .map_err(|_| ConstructionError::SurjectivityUnresolved { limit: max_cosets })?;
    if table.degree() != 1 {
        return Err(ConstructionError::NotSurjective { index: table.degree() });
    }
    Ok(GluedCertificate {
        dimension: x.dimension,
        cells: x.cells.len(),
        rank_target: target,
        guided_rank: guided.generator_count(),
        achieved_rank: further.presentation.generator_count(),
        rank_flag: guided.generator_count() > target,
        images,
        image_index: table.degree(),
        cycle_is_closed: x.cycle_is_closed,
        pushforward_matches: x.pushforward_matches,
    })
}
