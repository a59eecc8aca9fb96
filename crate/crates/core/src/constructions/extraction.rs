//! One group element per simplex of a fundamental cycle, and the check that
//! these elements generate the whole fundamental group.
//!
//! With a spanning tree contracted, the lift of each vertex through the tree
//! is a fixed section of the universal cover. For a simplex with sorted
//! vertices v0 < v1 < ..., the element g carries the section's lift of v1
//! to the lift adjacent to the section's lift of v0; in edge-labelled
//! generators this is the word of the edge v0 -> v1. The inverse convention
//! generates the same subgroup.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{ConstructionError, DEFAULT_COSET_LIMIT};
use crate::covers::{build_cover_with, facet_index};
use crate::groups::{presentation_from_skeleton, tietze_simplify, todd_coxeter, CosetTable, Presentation, SpanningTree, Word};
use crate::simplicial::{IntegerChain, OrientedTriangulation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorExtraction {
    pub base_vertex: usize,
    pub tree: SpanningTree,
    pub presentation: Presentation,
    /// One word per term of the cycle, in chain order.
    pub words: Vec<Word>,
    /// Distinct nontrivial words among `words`.
    pub generators: Vec<Word>,
}

pub fn extract_generators(
    t: &OrientedTriangulation,
    c: &IntegerChain,
    base_vertex: usize,
) -> GeneratorExtraction {
    let (presentation, tree) = presentation_from_skeleton(&t.complex(), base_vertex);
    let edge_words = presentation.edge_words().expect("skeleton presentations are labelled");
    let words: Vec<Word> = c
        .iter()
        .map(|(s, _)| {
            let v = s.vertices();
            let mut path = tree.path_from_root(v[0]);
            let mut back = tree.path_from_root(v[1]);
            back.reverse();
            path.extend(back);
            edge_words.path_word(&path)
        })
        .collect();
    let mut seen = BTreeSet::new();
    let generators = words
        .iter()
        .filter(|w| !w.is_identity() && seen.insert((*w).clone()))
        .cloned()
        .collect();
    GeneratorExtraction {
        base_vertex,
        tree,
        presentation,
        words,
        generators,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupCertificate {
    pub index: usize,
    pub generator_count: usize,
    pub cycle_terms: usize,
    pub table: CosetTable,
    /// Sum of the lifts of the cycle's terms with first vertex on sheet 0.
    pub lifted: IntegerChain,
    pub lifted_is_cycle: bool,
    /// The lifted chain pushes forward to `multiplicity` times the input.
    pub multiplicity: Option<i64>,
    /// The lifted chain is this multiple of the cover's fundamental cycle.
    pub cover_multiple: Option<BigInt>,
    /// Each lifted simplex is a cover facet over its base simplex, with
    /// first vertex on sheet 0.
    pub lifts_recomputed: bool,
}

impl SubgroupCertificate {
    pub fn passed(&self) -> bool {
        self.index == 1 && self.lifted_is_cycle && self.multiplicity == Some(1) && self.lifts_recomputed
    }
}

fn chain_ratio(a: &IntegerChain, b: &IntegerChain) -> Option<BigInt> {
    let (s, coeff) = b.iter().next()?;
    let k = a.coefficient(s);
    if &(&k / coeff) * coeff != k {
        return None;
    }
    let k = k / coeff;
    (b.scaled(&k) == *a).then_some(k)
}

/// Enumerates the cosets of the subgroup generated by the extraction, lifts
/// the cycle into the corresponding cover and checks it projects back with
/// multiplicity one. Fails with `IndexNotOne` if the subgroup is proper.
pub fn verify_lemma_4_2(
    t: &OrientedTriangulation,
    c: &IntegerChain,
    extraction: &GeneratorExtraction,
) -> Result<SubgroupCertificate, ConstructionError> {
    verify_extraction_with_limit(t, c, extraction, DEFAULT_COSET_LIMIT)
}

pub fn verify_extraction_with_limit(
    t: &OrientedTriangulation,
    c: &IntegerChain,
    extraction: &GeneratorExtraction,
    max_cosets: usize,
) -> Result<SubgroupCertificate, ConstructionError> {
    let p = &extraction.presentation;
    let simp = tietze_simplify(p, 100_000);
    let reduced: Vec<Word> = extraction
        .generators
        .iter()
        .map(|w| w.substitute(|h| simp.images[h].clone()))
        .collect();
    let q_table = todd_coxeter(&simp.presentation, &reduced, max_cosets)
        .map_err(|_| ConstructionError::Unresolved { limit: max_cosets })?;
    let table = q_table
        .pull_back(&simp.images)
        .expect("tables of the simplified presentation pull back");
    let cover = build_cover_with(t, p, &table)?;

    let mut lifted = IntegerChain::new(c.degree());
    for (s, a) in c.iter() {
        lifted.add(cover.lift_simplex(s, 0), a.clone());
    }
    let lifted_is_cycle = lifted.boundary().is_zero();
    let pushed = cover.project_chain(&lifted);
    let multiplicity = chain_ratio(&pushed, c).and_then(|k| i64::try_from(k).ok());
    let cover_multiple = chain_ratio(&lifted, &cover.total.fundamental_cycle().chain);

    // recompute each lift from the stored cover facets
    let base_index = facet_index(t);
    let cover_index = facet_index(&cover.total);
    let lifts_recomputed = c.iter().all(|(s, _)| {
        let l = cover.lift_simplex(s, 0);
        let first = l.vertices().iter().copied().find(|&v| cover.project_vertex(v) == s.vertices()[0]);
        match (cover_index.get(&l), base_index.get(s), first) {
            (Some(&i), Some(&j), Some(v)) => cover.facet_map[i] == j && cover.vertex_map[v].1 == 0,
            _ => false,
        }
    });

    let index = table.degree();
    if index != 1 {
        return Err(ConstructionError::IndexNotOne { index });
    }
    Ok(SubgroupCertificate {
        index,
        generator_count: extraction.generators.len(),
        cycle_terms: c.len(),
        table,
        lifted,
        lifted_is_cycle,
        multiplicity,
        cover_multiple,
        lifts_recomputed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::CatalogName;

    fn run(name: CatalogName) -> (GeneratorExtraction, Result<SubgroupCertificate, ConstructionError>) {
        let t = name.triangulation();
        let c = t.fundamental_cycle().chain;
        let e = extract_generators(&t, &c, 0);
        let cert = verify_lemma_4_2(&t, &c, &e);
        (e, cert)
    }

    #[test]
    fn simply_connected_words_are_trivial() {
        let (e, cert) = run(CatalogName::Sphere(3));
        assert_eq!(e.words.len(), 5);
        // trivial as group elements: the simplified presentation has no generators
        let simp = tietze_simplify(&e.presentation, 1000);
        assert_eq!(simp.presentation.generator_count(), 0);
        assert!(e.words.iter().all(|w| w.substitute(|h| simp.images[h].clone()).is_identity()));
        assert!(cert.unwrap().passed());
    }

    #[test]
    fn torus_generators_give_everything() {
        let (e, cert) = run(CatalogName::Torus(2));
        assert!(e.generators.len() <= 14);
        let cert = cert.unwrap();
        assert!(cert.passed());
        assert_eq!(cert.cover_multiple, Some(BigInt::from(1)));
    }

    #[test]
    fn truncated_generators_do_not_certify() {
        let t = CatalogName::Torus(2).triangulation();
        let c = t.fundamental_cycle().chain;
        let mut e = extract_generators(&t, &c, 0);
        e.generators.truncate(1);
        let err = verify_extraction_with_limit(&t, &c, &e, 2000).unwrap_err();
        assert!(matches!(
            err,
            ConstructionError::Unresolved { .. } | ConstructionError::IndexNotOne { .. }
        ));
    }
}
