//! Synthetic graphs, edge-list files and distribution over PEs.

use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, GraphError, Partition, VertexId};
use crate::num::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator parameter: {0}")]
    Parameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn param(msg: impl Into<String>) -> GenError {
    GenError::Parameter(msg.into())
}

/// Graph 500 default quadrant probabilities.
pub const RMAT_DEFAULT: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

pub const DEFAULT_EDGE_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Gnm,
    Rgg2d,
    Rmat,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Gnm => "gnm",
            Family::Rgg2d => "rgg2d",
            Family::Rmat => "rmat",
        })
    }
}

/// Parameters of a synthetic graph, written on the command line as
/// `family=gnm,n=65536,m=1048576,seed=42`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    /// Number of vertices; R-MAT uses `2^scale` instead.
    pub n: u64,
    /// R-MAT only.
    pub scale: u32,
    /// Exact edge count for GNM; derived from the edge factor when absent.
    pub m: Option<u64>,
    pub edgefactor: f64,
    /// RGG only; derived from the edge factor when absent.
    pub radius: Option<f64>,
    /// R-MAT quadrant probabilities `a, b, c, d`.
    pub probs: [f64; 4],
    pub seed: u64,
}

impl GeneratorSpec {
    fn base(family: Family, seed: u64) -> Self {
        Self {
            family,
            n: 0,
            scale: 0,
            m: None,
            edgefactor: DEFAULT_EDGE_FACTOR,
            radius: None,
            probs: RMAT_DEFAULT,
            seed,
        }
    }

    pub fn gnm(n: u64, m: u64, seed: u64) -> Self {
        Self {
            n,
            m: Some(m),
            ..Self::base(Family::Gnm, seed)
        }
    }

    pub fn rgg2d(n: u64, edgefactor: f64, seed: u64) -> Self {
        Self {
            n,
            edgefactor,
            ..Self::base(Family::Rgg2d, seed)
        }
    }

    pub fn rmat(scale: u32, edgefactor: f64, seed: u64) -> Self {
        Self {
            n: 1 << scale,
            scale,
            edgefactor,
            ..Self::base(Family::Rmat, seed)
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if !(self.edgefactor > 0.0 && self.edgefactor.is_finite()) {
            return Err(param(format!(
                "edge factor must be positive, got {}",
                self.edgefactor
            )));
        }
        match self.family {
            Family::Gnm => {
                let m = self.edge_count();
                if m > max_edges(self.n) {
                    return Err(param(format!(
                        "{m} edges do not fit on {} vertices",
                        self.n
                    )));
                }
            }
            Family::Rgg2d => {
                if let Some(r) = self.radius {
                    if !(0.0..=std::f64::consts::SQRT_2).contains(&r) {
                        return Err(param(format!("radius {r} outside [0, sqrt 2]")));
                    }
                }
            }
            Family::Rmat => {
                check_probs(&self.probs)?;
                if self.scale > 40 {
                    return Err(param(format!("scale {} too large", self.scale)));
                }
            }
        }
        Ok(())
    }

    fn edge_count(&self) -> u64 {
        self.m
            .unwrap_or_else(|| (self.edgefactor * self.n as f64).round() as u64)
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={}", self.family)?;
        match self.family {
            Family::Gnm => write!(f, ",n={},m={}", self.n, self.edge_count())?,
            Family::Rgg2d => match self.radius {
                Some(r) => write!(f, ",n={},radius={r}", self.n)?,
                None => write!(f, ",n={},edgefactor={}", self.n, self.edgefactor)?,
            },
            Family::Rmat => {
                let [a, b, c, d] = self.probs;
                write!(
                    f,
                    ",scale={},edgefactor={},a={a},b={b},c={c},d={d}",
                    self.scale, self.edgefactor
                )?
            }
        }
        write!(f, ",seed={}", self.seed)
    }
}

impl FromStr for GeneratorSpec {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut fields = std::collections::BTreeMap::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| param(format!("expected key=value, got '{part}'")))?;
            fields.insert(key.trim().to_ascii_lowercase(), value.trim().to_string());
        }
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T, GenError> {
            value
                .parse()
                .map_err(|_| param(format!("cannot parse {key}='{value}'")))
        }
        let family = match fields.remove("family").as_deref() {
            Some("gnm") => Family::Gnm,
            Some("rgg2d") | Some("rgg") => Family::Rgg2d,
            Some("rmat") => Family::Rmat,
            Some(other) => return Err(param(format!("unknown family '{other}'"))),
            None => return Err(param("missing family")),
        };
        let seed = match fields.remove("seed") {
            Some(v) => num("seed", &v)?,
            None => 0,
        };
        let mut spec = Self::base(family, seed);
        for (key, value) in fields {
            match key.as_str() {
                "n" => spec.n = num(&key, &value)?,
                "m" => spec.m = Some(num(&key, &value)?),
                "scale" => spec.scale = num(&key, &value)?,
                "edgefactor" | "ef" => spec.edgefactor = num(&key, &value)?,
                "radius" | "r" => spec.radius = Some(num(&key, &value)?),
                "a" => spec.probs[0] = num(&key, &value)?,
                "b" => spec.probs[1] = num(&key, &value)?,
                "c" => spec.probs[2] = num(&key, &value)?,
                "d" => spec.probs[3] = num(&key, &value)?,
                _ => return Err(param(format!("unknown key '{key}'"))),
            }
        }
        if family == Family::Rmat {
            if spec.scale == 0 && spec.n > 1 {
                spec.scale = 64 - (spec.n - 1).leading_zeros();
            }
            spec.n = 1u64
                .checked_shl(spec.scale)
                .ok_or_else(|| param("scale too large"))?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// A normalized graph: simple, undirected, ids dense in `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n: u64,
    /// `(u, v)` with `u < v`, sorted.
    pub edges: Vec<Edge>,
    /// Original id of every vertex, when ids were renumbered.
    pub remap: Option<Vec<VertexId>>,
}

/// Generates the graph described by `spec`. GNM and RGG graphs keep all `n`
/// vertices; R-MAT samples are normalized, which drops isolated vertices.
pub fn generate(spec: &GeneratorSpec) -> Result<Graph, GenError> {
    spec.validate()?;
    match spec.family {
        Family::Gnm => Ok(Graph {
            n: spec.n,
            edges: gen_gnm(spec.n, spec.edge_count(), spec.seed)?,
            remap: None,
        }),
        Family::Rgg2d => {
            let r = spec
                .radius
                .unwrap_or_else(|| rgg_radius(spec.n, spec.edgefactor));
            Ok(Graph {
                n: spec.n,
                edges: gen_rgg2d::<f64>(spec.n, r, spec.seed)?.edges,
                remap: None,
            })
        }
        Family::Rmat => {
            let samples = gen_rmat(spec.scale, spec.edgefactor, spec.probs, spec.seed)?;
            Ok(normalize(&samples))
        }
    }
}

fn max_edges(n: u64) -> u64 {
    n.saturating_mul(n.saturating_sub(1)) / 2
}

/// Maps an index in `0..C(n,2)` to the pair `(u, v)`, `u < v`, enumerating
/// pairs by increasing `v`.
fn unrank_pair(k: u64) -> Edge {
    // v = floor((1 + sqrt(1 + 8k)) / 2), corrected for rounding.
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

/// Uniform graph with exactly `m` edges on `n` vertices.
pub fn gen_gnm(n: u64, m: u64, seed: u64) -> Result<Vec<Edge>, GenError> {
    let total = max_edges(n);
    if m > total {
        return Err(param(format!("{m} edges do not fit on {n} vertices")));
    }
    let total = usize::try_from(total).map_err(|_| param("vertex count too large"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = sample(&mut rng, total, m as usize)
        .into_iter()
        .map(|k| unrank_pair(k as u64))
        .collect();
    edges.sort_unstable();
    Ok(edges)
}

/// Radius giving `edgefactor * n` expected edges on the unit square, from
/// `C(n,2) * pi r^2 = edgefactor * n` (boundary effects ignored).
pub fn rgg_radius(n: u64, edgefactor: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    (2.0 * edgefactor / (std::f64::consts::PI * (n - 1) as f64)).sqrt()
}

/// Random geometric graph with its vertex coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph<S: Real = f64> {
    /// Coordinates of vertex `i`.
    pub points: Vec<[S; 2]>,
    pub edges: Vec<Edge>,
}

fn spread_bits(mut x: u64) -> u64 {
    x &= 0xffff_ffff;
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

fn morton<S: Real>(p: &[S; 2]) -> u64 {
    let scale = (1u64 << 32) as f64;
    let q = |c: S| ((c.as_f64() * scale) as u64).min(u32::MAX as u64);
    spread_bits(q(p[0])) | (spread_bits(q(p[1])) << 1)
}

/// `n` uniform points in the unit square, adjacent when closer than `radius`.
/// Vertex ids follow a Z-order curve over the points, so contiguous id ranges
/// cover compact regions.
pub fn gen_rgg2d<S: Real>(n: u64, radius: S, seed: u64) -> Result<GeometricGraph<S>, GenError> {
    let r = radius.as_f64();
    if !(0.0..=std::f64::consts::SQRT_2).contains(&r) {
        return Err(param(format!("radius {r} outside [0, sqrt 2]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<[S; 2]> = (0..n)
        .map(|_| {
            [
                S::of_f64(rng.random::<f64>()),
                S::of_f64(rng.random::<f64>()),
            ]
        })
        .collect();
    points.sort_by_key(morton);
    if r == 0.0 || n < 2 {
        return Ok(GeometricGraph {
            points,
            edges: Vec::new(),
        });
    }

    let max_cells = ((n as f64).sqrt() as usize).max(1);
    let cells = ((1.0 / r) as usize).clamp(1, max_cells);
    let cell_of = |c: S| ((c.as_f64() * cells as f64) as usize).min(cells - 1);
    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); cells * cells];
    for (i, p) in points.iter().enumerate() {
        buckets[cell_of(p[1]) * cells + cell_of(p[0])].push(i as u64);
    }
    let r2 = radius * radius;
    let mut edges = Vec::new();
    for cy in 0..cells {
        for cx in 0..cells {
            let here = &buckets[cy * cells + cx];
            for ny in cy.saturating_sub(1)..=(cy + 1).min(cells - 1) {
                for nx in cx.saturating_sub(1)..=(cx + 1).min(cells - 1) {
                    for &i in here {
                        for &j in &buckets[ny * cells + nx] {
                            if i >= j {
                                continue;
                            }
                            let (a, b) = (points[i as usize], points[j as usize]);
                            let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
                            if dx * dx + dy * dy < r2 {
                                edges.push((i, j));
                            }
                        }
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(GeometricGraph { points, edges })
}

fn check_probs(probs: &[f64; 4]) -> Result<(), GenError> {
    let sum: f64 = probs.iter().sum();
    if probs.iter().any(|&x| !(0.0..=1.0).contains(&x)) || (sum - 1.0).abs() > 1e-9 {
        return Err(param(format!(
            "R-MAT probabilities must be in [0, 1] and sum to 1, got {probs:?}"
        )));
    }
    Ok(())
}

/// `round(edgefactor * 2^scale)` directed samples by recursive descent into
/// quadrants. The result is a raw multigraph; see [`normalize`].
pub fn gen_rmat(
    scale: u32,
    edgefactor: f64,
    probs: [f64; 4],
    seed: u64,
) -> Result<Vec<Edge>, GenError> {
    check_probs(&probs)?;
    if edgefactor.is_nan() || edgefactor <= 0.0 {
        return Err(param("edge factor must be positive"));
    }
    if scale > 40 {
        return Err(param(format!("scale {scale} too large")));
    }
    let [a, b, c, _] = probs;
    let (ab, abc) = (a + b, a + b + c);
    let samples = (edgefactor * (1u64 << scale) as f64).round() as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..samples)
        .map(|_| {
            let (mut u, mut v) = (0u64, 0u64);
            for _ in 0..scale {
                let x: f64 = rng.random();
                let (bu, bv) = if x < a {
                    (0, 0)
                } else if x < ab {
                    (0, 1)
                } else if x < abc {
                    (1, 0)
                } else {
                    (1, 1)
                };
                u = (u << 1) | bu;
                v = (v << 1) | bv;
            }
            (u, v)
        })
        .collect())
}

/// Makes edges undirected, drops self-loops and duplicates and renumbers the
/// remaining vertices densely in order of their original ids.
pub fn normalize(edges: &[Edge]) -> Graph {
    let mut simple: Vec<Edge> = edges
        .iter()
        .filter(|(u, v)| u != v)
        .map(|&(u, v)| (u.min(v), u.max(v)))
        .collect();
    simple.sort_unstable();
    simple.dedup();
    let mut ids: Vec<VertexId> = simple.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let new_id = |x: VertexId| ids.binary_search(&x).unwrap() as VertexId;
    let mut renumbered: Vec<Edge> = simple
        .iter()
        .map(|&(u, v)| (new_id(u), new_id(v)))
        .collect();
    renumbered.sort_unstable();
    Graph {
        n: ids.len() as u64,
        edges: renumbered,
        remap: Some(ids),
    }
}

/// Parses `u v` lines. Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(reader: impl BufRead) -> Result<Vec<Edge>, GenError> {
    let mut edges = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| GenError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| GenError::Parse {
            line: line_no,
            message,
        };
        let mut tokens = line.split_whitespace();
        let (Some(u), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(bad(format!("expected two vertex ids, got '{line}'")));
        };
        let id = |t: &str| -> Result<VertexId, GenError> {
            t.parse::<i64>()
                .ok()
                .filter(|&x| x >= 0)
                .map(|x| x as VertexId)
                .ok_or_else(|| bad(format!("'{t}' is not a vertex id")))
        };
        edges.push((id(u)?, id(v)?));
    }
    Ok(edges)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Vec<Edge>, GenError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| GenError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_edge_list(std::io::BufReader::new(file))
}

/// Balanced contiguous ranges; the first `n mod p` PEs get one extra vertex.
pub fn partition_contiguous(n: u64, p: usize) -> Result<Partition, GenError> {
    if p == 0 || p as u64 > n {
        return Err(param(format!("cannot split {n} vertices over {p} PEs")));
    }
    Ok(Partition::balanced(n, p)?)
}

/// Per-PE edge lists: every edge goes to the owners of both endpoints.
pub fn distribute(edges: &[Edge], part: &Partition) -> Result<Vec<Vec<Edge>>, GenError> {
    let mut parts = vec![Vec::new(); part.num_pes()];
    for &(u, v) in edges {
        let (ru, rv) = (part.rank_of(u)?, part.rank_of(v)?);
        parts[ru].push((u, v));
        if rv != ru {
            parts[rv].push((u, v));
        }
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn unrank_is_a_bijection() {
        let n = 40u64;
        let pairs: Vec<Edge> = (0..max_edges(n)).map(unrank_pair).collect();
        let set: BTreeSet<Edge> = pairs.iter().copied().collect();
        assert_eq!(set.len() as u64, max_edges(n));
        assert!(pairs.iter().all(|&(u, v)| u < v && v < n));
        assert_eq!(unrank_pair(0), (0, 1));
        assert_eq!(unrank_pair(1), (0, 2));
        assert_eq!(unrank_pair(2), (1, 2));
    }

    #[test]
    fn gnm_small_cases() {
        assert_eq!(
            gen_gnm(4, 6, 1).unwrap(),
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        );
        assert!(gen_gnm(10, 0, 1).unwrap().is_empty());
        assert!(matches!(gen_gnm(4, 7, 1), Err(GenError::Parameter(_))));
    }

    #[test]
    fn spec_strings() {
        let s: GeneratorSpec = "family=gnm,n=65536,m=1048576,seed=42".parse().unwrap();
        assert_eq!(s, GeneratorSpec::gnm(65536, 1 << 20, 42));
        assert_eq!(s.to_string().parse::<GeneratorSpec>().unwrap(), s);
        let r: GeneratorSpec = "family=rmat,scale=5,seed=1".parse().unwrap();
        assert_eq!((r.n, r.scale, r.edgefactor), (32, 5, 16.0));
        assert_eq!(r.to_string().parse::<GeneratorSpec>().unwrap(), r);
        let g: GeneratorSpec = "family=rgg2d,n=100,radius=0.1".parse().unwrap();
        assert_eq!(g.to_string().parse::<GeneratorSpec>().unwrap(), g);
        assert!("family=gnm,n=3,m=4".parse::<GeneratorSpec>().is_err());
        assert!("family=rmat,scale=3,a=0.5"
            .parse::<GeneratorSpec>()
            .is_err());
        assert!("family=foo".parse::<GeneratorSpec>().is_err());
        assert!("n=3".parse::<GeneratorSpec>().is_err());
        assert!("family=gnm,n=3,edgefactor=-1"
            .parse::<GeneratorSpec>()
            .is_err());
    }

    #[test]
    fn rgg_extremes() {
        let full = gen_rgg2d::<f64>(30, std::f64::consts::SQRT_2, 3).unwrap();
        assert_eq!(full.edges.len(), 30 * 29 / 2);
        assert!(gen_rgg2d::<f64>(30, 0.0, 3).unwrap().edges.is_empty());
        assert!(gen_rgg2d::<f64>(30, 1.5, 3).is_err());
    }

    #[test]
    fn rgg_matches_pairwise_check() {
        for (seed, r) in [(1u64, 0.05f64), (2, 0.2), (3, 0.33)] {
            let g = gen_rgg2d::<f64>(300, r, seed).unwrap();
            let mut expected = Vec::new();
            for i in 0..g.points.len() {
                for j in i + 1..g.points.len() {
                    let (a, b) = (g.points[i], g.points[j]);
                    if (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) < r * r {
                        expected.push((i as u64, j as u64));
                    }
                }
            }
            assert_eq!(g.edges, expected);
        }
        let g32 = gen_rgg2d::<f32>(200, 0.1, 5).unwrap();
        assert_eq!(g32.points.len(), 200);
    }

    #[test]
    fn rmat_degenerate_and_range() {
        let raw = gen_rmat(1, 4.0, [1.0, 0.0, 0.0, 0.0], 1).unwrap();
        assert_eq!(raw.len(), 8);
        assert!(raw.iter().all(|&e| e == (0, 0)));
        assert!(normalize(&raw).edges.is_empty());
        let raw = gen_rmat(6, 8.0, RMAT_DEFAULT, 2).unwrap();
        assert_eq!(raw.len(), 512);
        assert!(raw.iter().all(|&(u, v)| u < 64 && v < 64));
        assert!(gen_rmat(3, 1.0, [0.5, 0.5, 0.5, 0.0], 1).is_err());
    }

    #[test]
    fn normalize_examples() {
        let g = normalize(&[(0, 1), (1, 0), (2, 2)]);
        assert_eq!(g.edges, vec![(0, 1)]);
        assert_eq!(g.n, 2);
        let simple = vec![(0, 1), (0, 2), (1, 2)];
        let g = normalize(&simple);
        assert_eq!(g.edges, simple);
        assert_eq!(g.remap, Some(vec![0, 1, 2]));
        let g = normalize(&[(10, 30), (30, 20)]);
        assert_eq!(g.edges, vec![(0, 2), (1, 2)]);
        assert_eq!(g.remap, Some(vec![10, 20, 30]));
    }

    #[test]
    fn edge_list_parsing() {
        let text = "# header\n\n0 1\n  1\t2  \n# trailing\n2 0\n";
        assert_eq!(
            parse_edge_list(text.as_bytes()).unwrap(),
            vec![(0, 1), (1, 2), (2, 0)]
        );
        let err = parse_edge_list("0 1\n1 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GenError::Parse { line: 2, .. }));
        let err = parse_edge_list("0 1 2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GenError::Parse { line: 1, .. }));
        assert!(parse_edge_list("-1 2\n".as_bytes()).is_err());
        assert_eq!(
            parse_edge_list("9223372036854775807 0".as_bytes()).unwrap(),
            vec![(i64::MAX as u64, 0)]
        );
        assert!(matches!(
            read_edge_list("/nonexistent/edges.txt"),
            Err(GenError::Io { .. })
        ));
    }

    #[test]
    fn partition_and_distribute() {
        let part = partition_contiguous(10, 4).unwrap();
        assert_eq!(part.boundaries(), &[0, 3, 6, 8, 10]);
        assert!(partition_contiguous(3, 4).is_err());
        assert!(partition_contiguous(3, 0).is_err());
        let edges = vec![(0, 1), (2, 9), (5, 6)];
        let parts = distribute(&edges, &part).unwrap();
        assert_eq!(parts[0], vec![(0, 1), (2, 9)]);
        assert_eq!(parts[1], vec![(5, 6)]);
        assert_eq!(parts[2], vec![(5, 6)]);
        assert_eq!(parts[3], vec![(2, 9)]);
    }
}
