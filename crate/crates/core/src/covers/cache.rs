//! On-disk cache of covers.
//!
//! Layout: `<root>/<base hash>/<key>.tri` holds the cover in the plain
//! triangulation format and `<key>.map` the projection data:
//!
//! ```text
//! # rankvol-cover-map v1
//! degree 2
//! table <sha256 of the coset table>
//! presentation <sha256 of the presentation>
//! facet 0 0
//! facet 1 0
//! ...
//! ```
//!
//! `facet i j` says cover facet i lies over base facet j. Vertex
//! projections are implied by the numbering (`v * degree + sheet`). Files are
//! written to a temporary name and renamed into place.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{build_cover_with, CoverComplex, CoverError};
use crate::groups::{CosetTable, Presentation};
use crate::simplicial::io::{parse_triangulation, write_triangulation};
use crate::simplicial::OrientedTriangulation;

pub const CACHE_DIR_ENV: &str = "RANKVOL_CACHE_DIR";
const MAP_HEADER: &str = "# rankvol-cover-map v1";

#[derive(Clone, Debug)]
pub struct CoverCache {
    root: PathBuf,
}

fn presentation_hash(p: &Presentation) -> String {
    let json = serde_json::to_string(p).expect("presentations serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let nanos = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos());
    let tmp = path.with_extension(format!("tmp-{}-{nanos}", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

impl CoverCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        CoverCache { root: root.into() }
    }

    /// Cache rooted at `$RANKVOL_CACHE_DIR`, if set and nonempty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_DIR_ENV)
            .filter(|v| !v.is_empty())
            .map(CoverCache::new)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn paths(&self, t: &OrientedTriangulation, p: &Presentation, table: &CosetTable) -> (PathBuf, PathBuf, String, String) {
        let dir = self.root.join(&t.content_hash()[..32]);
        let th = table.content_hash();
        let ph = presentation_hash(p);
        let key = hex::encode(Sha256::digest(format!("{th}{ph}").as_bytes()));
        (dir.join(format!("{}.tri", &key[..32])), dir.join(format!("{}.map", &key[..32])), th, ph)
    }

    /// Loads a cached cover; `None` when absent or unreadable.
    pub fn load(&self, t: &OrientedTriangulation, p: &Presentation, table: &CosetTable) -> Option<CoverComplex> {
        let (tri, map, th, ph) = self.paths(t, p, table);
        let total = parse_triangulation(&fs::read_to_string(tri).ok()?).ok()?;
        let text = fs::read_to_string(map).ok()?;
        let mut lines = text.lines();
        if lines.next()? != MAP_HEADER {
            return None;
        }
        let mut degree = None;
        let mut facet_map = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["degree", d] => degree = d.parse().ok(),
                ["table", h] if *h == th => {}
                ["presentation", h] if *h == ph => {}
                ["facet", i, j] => {
                    let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
                    if i != facet_map.len() {
                        return None;
                    }
                    facet_map.push(j);
                }
                _ => return None,
            }
        }
        let degree: usize = degree?;
        if degree != table.degree() || facet_map.len() != total.facet_count() || total.vertex_count() != t.vertex_count() * degree {
            return None;
        }
        let vertex_map = (0..t.vertex_count()).flat_map(|v| (0..degree).map(move |c| (v, c))).collect();
        Some(CoverComplex {
            total,
            base: t.clone(),
            degree,
            vertex_map,
            facet_map,
            presentation: p.clone(),
            table: table.clone(),
        })
    }

    pub fn store(&self, cover: &CoverComplex) -> io::Result<()> {
        let (tri, map, th, ph) = self.paths(&cover.base, &cover.presentation, &cover.table);
        fs::create_dir_all(tri.parent().expect("cache files live in a directory"))?;
        let mut m = format!("{MAP_HEADER}\ndegree {}\ntable {th}\npresentation {ph}\n", cover.degree);
        for (i, j) in cover.facet_map.iter().enumerate() {
            m.push_str(&format!("facet {i} {j}\n"));
        }
        write_atomic(&tri, &write_triangulation(&cover.total))?;
        write_atomic(&map, &m)
    }

    /// Returns the cached cover or builds and stores it. Storage failures
    /// are ignored: the cache is an optimisation only.
    pub fn get_or_build(
        &self,
        t: &OrientedTriangulation,
        p: &Presentation,
        table: &CosetTable,
    ) -> Result<CoverComplex, CoverError> {
        if let Some(c) = self.load(t, p, table) {
            return Ok(c);
        }
        let c = build_cover_with(t, p, table)?;
        let _ = self.store(&c);
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::verify_covering;
    use crate::groups::{low_index_subgroups, presentation_from_complex, tietze_simplify};
    use crate::pipeline::CatalogName;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CoverCache::new(dir.path());
        let t = CatalogName::Torus(2).triangulation();
        let p = presentation_from_complex(&t, 0);
        let simp = tietze_simplify(&p, 100);
        let q = &low_index_subgroups(&simp.presentation, 2)[1];
        let table = q.pull_back(&simp.images).unwrap();
        assert!(cache.load(&t, &p, &table).is_none());
        let built = cache.get_or_build(&t, &p, &table).unwrap();
        let loaded = cache.load(&t, &p, &table).unwrap();
        assert_eq!(loaded.total, built.total);
        assert_eq!(loaded.facet_map, built.facet_map);
        assert!(verify_covering(&loaded).passed());
    }
}
