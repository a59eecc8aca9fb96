//! Built-in triangulated manifolds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplicial::{validate_triangulation, OrientedTriangulation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown manifold `{0}` (expected circle, sphere(n), torus(n), surface(g))")]
    UnknownName(String),
    #[error("bad parameters for {name}: {msg}")]
    BadParams { name: String, msg: String },
}

/// A catalog manifold name with its parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CatalogName {
    Circle,
    Sphere(usize),
    Torus(usize),
    Surface(usize),
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::Circle => write!(f, "circle"),
            CatalogName::Sphere(n) => write!(f, "sphere({n})"),
            CatalogName::Torus(n) => write!(f, "torus({n})"),
            CatalogName::Surface(g) => write!(f, "surface({g})"),
        }
    }
}

impl FromStr for CatalogName {
    type Err = CatalogError;

    /// Accepts `sphere(3)`, `sphere3`, `sphere:3` and `sphere 3`.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let s = s.trim().to_ascii_lowercase();
        let split = s.find(|c: char| c.is_ascii_digit() || "(: ".contains(c)).unwrap_or(s.len());
        let (word, rest) = s.split_at(split);
        let arg = rest.trim_matches(|c: char| "(): ".contains(c));
        let param = |name: &str| -> Result<usize, CatalogError> {
            arg.parse().map_err(|_| CatalogError::BadParams {
                name: name.into(),
                msg: format!("expected an integer parameter, found `{arg}`"),
            })
        };
        let bad = |name: &str, msg: &str| CatalogError::BadParams {
            name: name.into(),
            msg: msg.into(),
        };
        match word {
            "circle" if arg.is_empty() => Ok(CatalogName::Circle),
            "circle" => Err(bad("circle", "takes no parameter")),
            "sphere" => match param("sphere")? {
                0 => Err(bad("sphere", "dimension must be positive")),
                n => Ok(CatalogName::Sphere(n)),
            },
            "torus" => match param("torus")? {
                n @ 1..=3 => Ok(CatalogName::Torus(n)),
                _ => Err(bad("torus", "dimension must be 1, 2 or 3")),
            },
            "surface" => match param("surface")? {
                0 => Err(bad("surface", "genus must be at least 1 (use sphere(2) for genus 0)")),
                g => Ok(CatalogName::Surface(g)),
            },
            _ => Err(CatalogError::UnknownName(s.clone())),
        }
    }
}

impl TryFrom<String> for CatalogName {
    type Error = CatalogError;
    fn try_from(s: String) -> Result<Self, CatalogError> {
        s.parse()
    }
}

impl From<CatalogName> for String {
    fn from(n: CatalogName) -> String {
        n.to_string()
    }
}

/// A reference value for a catalog manifold, with the reason it is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KnownValue {
    pub quantity: String,
    pub value: f64,
    pub basis: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub dimension: usize,
    pub known: Vec<KnownValue>,
}

impl CatalogName {
    pub fn dimension(&self) -> usize {
        match *self {
            CatalogName::Circle => 1,
            CatalogName::Sphere(n) | CatalogName::Torus(n) => n,
            CatalogName::Surface(_) => 2,
        }
    }

    pub fn triangulation(&self) -> OrientedTriangulation {
        let facets = match *self {
            CatalogName::Circle | CatalogName::Torus(1) => circle(),
            CatalogName::Sphere(n) => simplex_boundary(n),
            CatalogName::Torus(2) => seven_vertex_torus(),
            CatalogName::Torus(_) => cubical_torus(3, 3),
            CatalogName::Surface(g) => polygon_surface(g),
        };
        validate_triangulation(facets).expect("catalog triangulations are valid")
    }

    pub fn entry(&self) -> CatalogEntry {
        let known = |quantity: &str, value: f64, basis: &str| KnownValue {
            quantity: quantity.into(),
            value,
            basis: basis.into(),
        };
        let mut v = Vec::new();
        match *self {
            CatalogName::Circle | CatalogName::Torus(_) => {
                let basis = "infinite residually finite amenable fundamental group";
                v.push(known("rank_gradient", 0.0, basis));
                v.push(known("stable_integral_volume", 0.0, basis));
            }
            CatalogName::Sphere(n) => {
                let basis = "simply connected";
                v.push(known("rank", 0.0, basis));
                if n >= 2 {
                    v.push(known("first_betti", 0.0, basis));
                }
            }
            CatalogName::Surface(g) => {
                let basis = "closed orientable surface of genus g";
                v.push(known("rank_gradient", 2.0 * g as f64 - 2.0, basis));
                v.push(known("stable_integral_volume", 4.0 * g as f64 - 4.0, basis));
                v.push(known("rank", 2.0 * g as f64, basis));
            }
        }
        CatalogEntry {
            name: *self,
            dimension: self.dimension(),
            known: v,
        }
    }
}

/// Builds a catalog manifold by name.
pub fn generate_catalog_manifold(name: &str) -> Result<OrientedTriangulation, CatalogError> {
    Ok(name.parse::<CatalogName>()?.triangulation())
}

/// The names used by the acceptance runs, in a fixed order.
pub fn standard_catalog() -> Vec<CatalogName> {
    vec![
        CatalogName::Circle,
        CatalogName::Sphere(2),
        CatalogName::Sphere(3),
        CatalogName::Torus(2),
        CatalogName::Torus(3),
        CatalogName::Surface(2),
        CatalogName::Surface(3),
    ]
}

fn circle() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![1, 2], vec![2, 0]]
}

fn simplex_boundary(n: usize) -> Vec<Vec<usize>> {
    (0..n + 2)
        .map(|skip| (0..n + 2).filter(|&v| v != skip).collect())
        .collect()
}

/// Vertex-minimal torus on Z/7.
fn seven_vertex_torus() -> Vec<Vec<usize>> {
    (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect()
}

/// Periodic `side^dim` grid, each cube cut into `dim!` simplices along
/// monotone lattice paths.
fn cubical_torus(dim: usize, side: usize) -> Vec<Vec<usize>> {
    let cells = side.pow(dim as u32);
    let id = |c: &[usize]| c.iter().rev().fold(0, |acc, &x| acc * side + x % side);
    let mut perms = vec![Vec::new()];
    for k in 0..dim {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    perms.sort();
    let mut facets = Vec::with_capacity(cells * perms.len());
    for cell in 0..cells {
        let corner: Vec<usize> = (0..dim).map(|a| cell / side.pow(a as u32) % side).collect();
        for p in &perms {
            let mut x = corner.clone();
            let mut f = vec![id(&x)];
            for &axis in p {
                x[axis] += 1;
                f.push(id(&x));
            }
            facets.push(f);
        }
    }
    facets
}

/// Genus-g surface from the 4g-gon `a1 b1 a1^-1 b1^-1 ...`: every side is
/// cut in three, an inner ring of 12g vertices follows the boundary, and a
/// centre vertex closes the disk. 16g + 2 vertices, 36g triangles.
fn polygon_surface(g: usize) -> Vec<Vec<usize>> {
    let sides = 4 * g;
    let corner = 0;
    let p = |label: usize| 1 + 2 * label;
    let q = |label: usize| 2 + 2 * label;
    let mut boundary = Vec::with_capacity(3 * sides);
    for s in 0..sides {
        let handle = s / 4;
        let label = 2 * handle + (s % 2);
        boundary.push(corner);
        if s % 4 < 2 {
            boundary.extend([p(label), q(label)]);
        } else {
            boundary.extend([q(label), p(label)]);
        }
    }
    let m = boundary.len();
    let ring = |t: usize| 1 + 4 * g + t % m;
    let centre = 1 + 4 * g + m;
    let mut facets = Vec::with_capacity(3 * m);
    for t in 0..m {
        let (b0, b1) = (boundary[t], boundary[(t + 1) % m]);
        facets.push(vec![b0, b1, ring(t)]);
        facets.push(vec![b1, ring(t + 1), ring(t)]);
        facets.push(vec![ring(t), ring(t + 1), centre]);
    }
    facets
}
