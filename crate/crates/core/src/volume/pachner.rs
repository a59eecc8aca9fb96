//! Triangulation simplification by bistellar moves under simulated
//! annealing.
//!
//! A move on a face `A` whose link is the boundary of a simplex `B` (with
//! `|A| + |B| = n + 2` and `B` not already a face) replaces the star
//! `A * dB` by `dA * B`. The facet count changes by `2|A| - n - 2`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::simplicial::{validate_triangulation, OrientedTriangulation, Simplex};

/// Annealing parameters. Temperatures are on the facet-count scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealConfig {
    pub restarts: usize,
    pub start_temperature: f64,
    pub floor_temperature: f64,
    /// Probability of proposing a facet subdivision while above the floor.
    pub insertion_rate: f64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            restarts: 1,
            start_temperature: 0.5,
            floor_temperature: 0.05,
            insertion_rate: 0.02,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimplifyOutcome {
    pub triangulation: OrientedTriangulation,
    pub initial_facets: usize,
    pub final_facets: usize,
    pub proposals: u64,
    pub accepted: u64,
    /// Dimension 4 or higher: the input is returned unchanged.
    pub unsupported_dimension: bool,
}

#[derive(Clone, Debug)]
struct Facet {
    verts: Vec<usize>,
    sign: i8,
}

#[derive(Clone, Debug)]
struct Mesh {
    n: usize,
    facets: Vec<Option<Facet>>,
    free: Vec<usize>,
    star: Vec<BTreeSet<usize>>,
    alive: Vec<usize>,
    alive_pos: Vec<usize>,
    facet_count: usize,
}

const DEAD: usize = usize::MAX;

impl Mesh {
    fn new(t: &OrientedTriangulation) -> Self {
        let mut m = Mesh {
            n: t.dimension(),
            facets: Vec::new(),
            free: Vec::new(),
            star: vec![BTreeSet::new(); t.vertex_count()],
            alive: (0..t.vertex_count()).collect(),
            alive_pos: (0..t.vertex_count()).collect(),
            facet_count: 0,
        };
        for j in 0..t.facet_count() {
            let (s, c) = t.oriented_facet(j);
            m.insert(s.into_vertices(), c as i8);
        }
        m
    }

    fn insert(&mut self, verts: Vec<usize>, sign: i8) {
        let id = self.free.pop().unwrap_or_else(|| {
            self.facets.push(None);
            self.facets.len() - 1
        });
        for &v in &verts {
            self.star[v].insert(id);
        }
        self.facets[id] = Some(Facet { verts, sign });
        self.facet_count += 1;
    }

    fn remove(&mut self, id: usize) -> Facet {
        let f = self.facets[id].take().expect("live facet");
        for &v in &f.verts {
            self.star[v].remove(&id);
        }
        self.free.push(id);
        self.facet_count -= 1;
        f
    }

    fn add_vertex(&mut self) -> usize {
        let v = self.star.len();
        self.star.push(BTreeSet::new());
        self.alive_pos.push(self.alive.len());
        self.alive.push(v);
        v
    }

    fn kill_vertex(&mut self, v: usize) {
        let p = self.alive_pos[v];
        let last = *self.alive.last().expect("nonempty");
        self.alive.swap_remove(p);
        if last != v {
            self.alive_pos[last] = p;
        }
        self.alive_pos[v] = DEAD;
    }

    fn facet(&self, id: usize) -> &Facet {
        self.facets[id].as_ref().expect("live facet")
    }

    /// Facets containing every vertex of `a` (sorted).
    fn star_of(&self, a: &[usize]) -> Vec<usize> {
        let pivot = *a.iter().min_by_key(|&&v| self.star[v].len()).expect("nonempty face");
        self.star[pivot]
            .iter()
            .copied()
            .filter(|&id| {
                let f = &self.facet(id).verts;
                a.iter().all(|v| f.binary_search(v).is_ok())
            })
            .collect()
    }

    fn is_face(&self, b: &[usize]) -> bool {
        !self.star_of(b).is_empty()
    }

    /// Checks the move on face `a`; returns the star and the complementary
    /// simplex `B` (empty when a new vertex is needed).
    fn plan(&self, a: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
        let star = self.star_of(a);
        let b_size = self.n + 2 - a.len();
        if a.len() == self.n + 1 {
            return (star.len() == 1).then(|| (star, Vec::new()));
        }
        if star.len() != b_size {
            return None;
        }
        let mut b: Vec<usize> = star
            .iter()
            .flat_map(|&id| self.facet(id).verts.iter().copied().filter(|v| a.binary_search(v).is_err()))
            .collect();
        b.sort_unstable();
        b.dedup();
        if b.len() != b_size || self.is_face(&b) {
            return None;
        }
        Some((star, b))
    }

    /// Applies a planned move. New facets are oriented to agree with the
    /// removed ones along the boundary of the replaced ball.
    fn apply(&mut self, a: &[usize], star: Vec<usize>, mut b: Vec<usize>) {
        if b.is_empty() {
            b.push(self.add_vertex());
        }
        let old: Vec<Facet> = star.into_iter().map(|id| self.remove(id)).collect();
        let b0 = b[0];
        for &x in a {
            let mut g: Vec<usize> = a.iter().copied().filter(|&y| y != x).chain(b.iter().copied()).collect();
            g.sort_unstable();
            // outer face of g: drop b0; it lies in the old facet (g - b0) + x
            let mut f: Vec<usize> = g.iter().copied().filter(|&y| y != b0).chain([x]).collect();
            f.sort_unstable();
            let old_f = old.iter().find(|o| o.verts == f).expect("old facet over outer face");
            let pos = |s: &[usize], v: usize| s.binary_search(&v).expect("vertex present");
            let inc_old = if pos(&f, x) % 2 == 0 { 1 } else { -1 };
            let inc_new = if pos(&g, b0) % 2 == 0 { 1 } else { -1 };
            self.insert(g, old_f.sign * inc_old * inc_new);
        }
        for &x in a {
            if self.star[x].is_empty() {
                self.kill_vertex(x);
            }
        }
    }

    fn to_triangulation(&self) -> OrientedTriangulation {
        let facets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .flatten()
            .map(|f| {
                let mut v = f.verts.clone();
                if f.sign < 0 {
                    v.swap(0, 1);
                }
                v
            })
            .collect();
        validate_triangulation(facets).expect("bistellar moves preserve closed oriented manifolds")
    }
}

struct Schedule {
    start: f64,
    floor: f64,
    decay: f64,
}

impl Schedule {
    fn new(cfg: &AnnealConfig, budget: u64) -> Self {
        let start = cfg.start_temperature.max(cfg.floor_temperature);
        let ratio = (cfg.floor_temperature / start).max(1e-12);
        let decay = if budget == 0 { 1.0 } else { ratio.powf(1.0 / budget as f64) };
        Schedule {
            start,
            floor: cfg.floor_temperature,
            decay,
        }
    }

    /// Position between floor (0) and start (1).
    fn heat(&self, t: f64) -> f64 {
        if self.start <= self.floor {
            0.0
        } else {
            ((t - self.floor) / (self.start - self.floor)).clamp(0.0, 1.0)
        }
    }
}

fn run_once(t: &OrientedTriangulation, rng: &mut ChaCha8Rng, budget: u64, cfg: &AnnealConfig) -> (Mesh, u64) {
    let mut mesh = Mesh::new(t);
    let n = mesh.n;
    let schedule = Schedule::new(cfg, budget);
    let mut temp = schedule.start;
    let mut best = mesh.clone();
    let mut accepted = 0u64;
    for _ in 0..budget {
        let heat = schedule.heat(temp);
        temp = (temp * schedule.decay).max(schedule.floor);
        let above_floor = heat > 0.0;
        let face: Vec<usize> = if above_floor && rng.gen_bool(cfg.insertion_rate.clamp(0.0, 1.0)) {
            let ids: Vec<usize> = mesh.star[mesh.alive[rng.gen_range(0..mesh.alive.len())]].iter().copied().collect();
            mesh.facet(ids[rng.gen_range(0..ids.len())]).verts.clone()
        } else {
            // tournament: the lower-degree of two random vertices
            let v1 = mesh.alive[rng.gen_range(0..mesh.alive.len())];
            let v2 = mesh.alive[rng.gen_range(0..mesh.alive.len())];
            let v = if mesh.star[v2].len() < mesh.star[v1].len() { v2 } else { v1 };
            if n == 1 || mesh.plan(&[v]).is_some() {
                vec![v]
            } else {
                let ids: Vec<usize> = mesh.star[v].iter().copied().collect();
                let f = &mesh.facet(ids[rng.gen_range(0..ids.len())]).verts;
                let size = rng.gen_range(2..=n);
                let mut others: Vec<usize> = f.iter().copied().filter(|&u| u != v).collect();
                let mut a = vec![v];
                for _ in 1..size {
                    let i = rng.gen_range(0..others.len());
                    a.push(others.swap_remove(i));
                }
                a.sort_unstable();
                a
            }
        };
        let Some((star, b)) = mesh.plan(&face) else {
            continue;
        };
        let delta = 2 * face.len() as i64 - n as i64 - 2;
        let lateral = delta == 0 || (n == 3 && delta == 1);
        let accept = if delta < 0 {
            true
        } else if lateral {
            rng.gen_bool(0.5 + 0.5 * heat)
        } else {
            above_floor && rng.gen_bool((-(delta as f64) / temp.max(1e-9)).exp().min(1.0))
        };
        if !accept {
            continue;
        }
        mesh.apply(&face, star, b);
        accepted += 1;
        if mesh.facet_count < best.facet_count {
            best = mesh.clone();
        }
    }
    (best, accepted)
}

/// Simplifies `t` with at most `move_budget` proposals per restart.
/// Deterministic for fixed `(t, seed, move_budget, cfg)`.
pub fn pachner_simplify(t: &OrientedTriangulation, seed: u64, move_budget: u64, cfg: &AnnealConfig) -> SimplifyOutcome {
    let initial = t.facet_count();
    if t.dimension() > 3 {
        return SimplifyOutcome {
            triangulation: t.clone(),
            initial_facets: initial,
            final_facets: initial,
            proposals: 0,
            accepted: 0,
            unsupported_dimension: true,
        };
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Mesh> = None;
    let mut accepted = 0;
    for _ in 0..cfg.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(master.gen());
        let (m, acc) = run_once(t, &mut rng, move_budget, cfg);
        accepted += acc;
        if best.as_ref().is_none_or(|b| m.facet_count < b.facet_count) {
            best = Some(m);
        }
    }
    let best = best.expect("at least one restart");
    let triangulation = if best.facet_count < initial {
        best.to_triangulation()
    } else {
        t.clone()
    };
    SimplifyOutcome {
        final_facets: triangulation.facet_count(),
        triangulation,
        initial_facets: initial,
        proposals: move_budget * cfg.restarts.max(1) as u64,
        accepted,
        unsupported_dimension: false,
    }
}

/// All faces of `t` on which a bistellar move is currently possible, as
/// sorted vertex lists. Exhaustive; intended for small complexes and tests.
pub fn available_moves(t: &OrientedTriangulation) -> Vec<Vec<usize>> {
    let mesh = Mesh::new(t);
    let mut out = Vec::new();
    let complex = t.complex();
    for k in 0..=t.dimension() {
        for s in complex.simplices(k) {
            if mesh.plan(s.vertices()).is_some() {
                out.push(s.vertices().to_vec());
            }
        }
    }
    out
}

/// Applies one bistellar move on face `a`, if possible.
pub fn apply_move(t: &OrientedTriangulation, a: &[usize]) -> Option<OrientedTriangulation> {
    let mut mesh = Mesh::new(t);
    let a = Simplex::from_ordered(a)?.0.into_vertices();
    let (star, b) = mesh.plan(&a)?;
    mesh.apply(&a, star, b);
    Some(mesh.to_triangulation())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::CatalogName;

    fn hexagon() -> OrientedTriangulation {
        validate_triangulation((0..6).map(|i| vec![i, (i + 1) % 6]).collect()).unwrap()
    }

    #[test]
    fn circle_subdivision_reduces_to_three_edges() {
        let out = pachner_simplify(&hexagon(), 1, 1000, &AnnealConfig::default());
        assert_eq!(out.final_facets, 3);
    }

    #[test]
    fn sphere_boundary_cannot_shrink() {
        let t = CatalogName::Sphere(3).triangulation();
        let out = pachner_simplify(&t, 7, 2000, &AnnealConfig::default());
        assert!(out.final_facets <= 5);
        assert_eq!(out.triangulation.complex().homology(3).betti, 1);
    }

    #[test]
    fn moves_preserve_homology_and_orientation() {
        let t = CatalogName::Torus(2).triangulation();
        let h = t.complex().homology_all();
        for a in available_moves(&t) {
            let u = apply_move(&t, &a).unwrap();
            assert_eq!(u.complex().homology_all(), h);
            assert_eq!(u.facet_count() as i64 - 14, 2 * a.len() as i64 - 4);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let t = CatalogName::Surface(2).triangulation();
        let a = pachner_simplify(&t, 42, 3000, &AnnealConfig::default());
        let b = pachner_simplify(&t, 42, 3000, &AnnealConfig::default());
        assert_eq!(a.triangulation, b.triangulation);
        assert!(a.final_facets < 72);
    }

    #[test]
    fn three_dimensional_moves_keep_validity() {
        let t = CatalogName::Torus(3).triangulation();
        let out = pachner_simplify(&t, 3, 5000, &AnnealConfig::default());
        assert!(out.final_facets <= 162);
        let betti: Vec<usize> = out.triangulation.complex().homology_all().iter().map(|g| g.betti).collect();
        assert_eq!(betti, vec![1, 3, 3, 1]);
    }

    #[test]
    fn four_dimensional_input_is_returned_unchanged() {
        let t = CatalogName::Sphere(4).triangulation();
        let out = pachner_simplify(&t, 0, 100, &AnnealConfig::default());
        assert!(out.unsupported_dimension);
        assert_eq!(out.triangulation, t);
    }
}
