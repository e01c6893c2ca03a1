use std::collections::VecDeque;
use std::fmt;
use std::io::{BufRead, Write};

use crate::graph::Graph;

use super::StructureError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpacingMode {
    /// Consecutive centres within `spacing_bound`.
    Chain,
    /// The graph on centres joining pairs within `spacing_bound` is connected.
    Connected,
}

impl fmt::Display for SpacingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpacingMode::Chain => "chain",
            SpacingMode::Connected => "connected",
        })
    }
}

impl std::str::FromStr for SpacingMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(SpacingMode::Chain),
            "connected" => Ok(SpacingMode::Connected),
            _ => Err(format!("unknown mode `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Star {
    pub center: u32,
    pub leaves: Vec<u32>,
}

impl Star {
    /// Vertex count including the centre.
    pub fn size(&self) -> usize {
        self.leaves.len() + 1
    }
}

/// Claimed family of disjoint stars of size at least `m` with spaced centres.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarCertificate {
    pub m: usize,
    pub mode: SpacingMode,
    pub spacing_bound: u32,
    pub stars: Vec<Star>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoStars,
    VertexOutOfRange { vertex: u32 },
    /// Vertex used more than once across centres and leaves.
    Overlap { vertex: u32 },
    LeafNotAdjacent { center: u32, leaf: u32 },
    StarTooSmall { center: u32, size: usize, required: usize },
    /// Chain mode: `d(a, b)` exceeds the bound.
    SpacingExceeded { a: u32, b: u32 },
    /// Connected mode: number of components of the thresholded centre graph.
    Disconnected { components: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoStars => write!(f, "certificate lists no stars"),
            Violation::VertexOutOfRange { vertex } => write!(f, "vertex {vertex} is out of range"),
            Violation::Overlap { vertex } => write!(f, "disjointness: vertex {vertex} appears more than once"),
            Violation::LeafNotAdjacent { center, leaf } => write!(f, "adjacency: leaf {leaf} is not a neighbour of {center}"),
            Violation::StarTooSmall { center, size, required } => {
                write!(f, "size: star at {center} has {size} vertices, needs {required}")
            }
            Violation::SpacingExceeded { a, b } => write!(f, "distance: d({a}, {b}) exceeds the spacing bound"),
            Violation::Disconnected { components } => {
                write!(f, "distance: centre graph splits into {components} components")
            }
        }
    }
}

/// Validator verdict; empty `violations` means accepted.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Vertices within distance `radius` of `source`.
fn ball(g: &Graph, source: u32, radius: u32, stamp: &mut [u32], mark: u32) -> Vec<u32> {
    let mut out = vec![source];
    stamp[source as usize] = mark;
    let mut queue = VecDeque::from([(source, 0u32)]);
    while let Some((x, d)) = queue.pop_front() {
        if d == radius {
            continue;
        }
        for &y in g.neighbors(x) {
            if stamp[y as usize] != mark {
                stamp[y as usize] = mark;
                out.push(y);
                queue.push_back((y, d + 1));
            }
        }
    }
    out
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Checks every clause of the certificate against `g` directly.
pub fn validate_certificate(g: &Graph, cert: &StarCertificate) -> Verdict {
    let n = g.n();
    let mut v = Vec::new();
    if cert.stars.is_empty() {
        v.push(Violation::NoStars);
    }
    let mut used = vec![false; n];
    let mut in_range = true;
    for star in &cert.stars {
        for &x in std::iter::once(&star.center).chain(&star.leaves) {
            if x as usize >= n {
                v.push(Violation::VertexOutOfRange { vertex: x });
                in_range = false;
            } else if std::mem::replace(&mut used[x as usize], true) {
                v.push(Violation::Overlap { vertex: x });
            }
        }
        if star.size() < cert.m {
            v.push(Violation::StarTooSmall { center: star.center, size: star.size(), required: cert.m });
        }
        if (star.center as usize) < n {
            for &l in &star.leaves {
                if (l as usize) < n && !g.has_edge(star.center, l) {
                    v.push(Violation::LeafNotAdjacent { center: star.center, leaf: l });
                }
            }
        }
    }
    if !in_range || cert.stars.is_empty() {
        return Verdict { violations: v };
    }
    let centers: Vec<u32> = cert.stars.iter().map(|s| s.center).collect();
    let mut stamp = vec![0u32; n];
    match cert.mode {
        SpacingMode::Chain => {
            for (i, pair) in centers.windows(2).enumerate() {
                let reach = ball(g, pair[0], cert.spacing_bound, &mut stamp, i as u32 + 1);
                if !reach.contains(&pair[1]) {
                    v.push(Violation::SpacingExceeded { a: pair[0], b: pair[1] });
                }
            }
        }
        SpacingMode::Connected => {
            let mut index = vec![usize::MAX; n];
            for (i, &c) in centers.iter().enumerate() {
                index[c as usize] = i;
            }
            let mut parent: Vec<usize> = (0..centers.len()).collect();
            let mut components = centers.len();
            for (i, &c) in centers.iter().enumerate() {
                if components == 1 {
                    break;
                }
                for y in ball(g, c, cert.spacing_bound, &mut stamp, i as u32 + 1) {
                    let j = index[y as usize];
                    if j != usize::MAX {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a] = b;
                            components -= 1;
                        }
                    }
                }
            }
            if components > 1 {
                v.push(Violation::Disconnected { components });
            }
        }
    }
    Verdict { violations: v }
}

/// Writes `M,mode,spacing_bound,count`, its values, then one
/// `center,leaf,…` line per star.
pub fn write_certificate<W: Write>(cert: &StarCertificate, header: &[String], out: W) -> std::io::Result<()> {
    let mut out = std::io::BufWriter::new(out);
    for line in header {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "M,mode,spacing_bound,count")?;
    writeln!(out, "{},{},{},{}", cert.m, cert.mode, cert.spacing_bound, cert.stars.len())?;
    for s in &cert.stars {
        write!(out, "{}", s.center)?;
        for l in &s.leaves {
            write!(out, ",{l}")?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn read_certificate<R: BufRead>(input: R) -> Result<StarCertificate, StructureError> {
    let mut lines = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| StructureError::Parse { line: i + 1, message: e.to_string() })?;
        let t = line.trim().to_string();
        if !t.is_empty() && !t.starts_with('#') {
            lines.push((i + 1, t));
        }
    }
    let err = |line: usize, message: &str| StructureError::Parse { line, message: message.into() };
    let mut it = lines.into_iter();
    match it.next() {
        Some((_, h)) if h.replace(' ', "") == "M,mode,spacing_bound,count" => {}
        Some((l, _)) => return Err(err(l, "expected header `M,mode,spacing_bound,count`")),
        None => return Err(err(0, "empty certificate file")),
    }
    let (l, values) = it.next().ok_or_else(|| err(0, "missing certificate parameters"))?;
    let f: Vec<&str> = values.split(',').map(str::trim).collect();
    if f.len() != 4 {
        return Err(err(l, "expected 4 parameter fields"));
    }
    let m = f[0].parse().map_err(|_| err(l, "bad M"))?;
    let mode = f[1].parse().map_err(|e: String| err(l, &e))?;
    let spacing_bound = f[2].parse().map_err(|_| err(l, "bad spacing bound"))?;
    let count: usize = f[3].parse().map_err(|_| err(l, "bad count"))?;
    let mut stars = Vec::with_capacity(count);
    for (l, line) in it {
        let ids = line
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err(l, "bad vertex index"))?;
        stars.push(Star { center: ids[0], leaves: ids[1..].to_vec() });
    }
    if stars.len() != count {
        return Err(err(0, &format!("count says {count} stars, found {}", stars.len())));
    }
    Ok(StarCertificate { m, mode, spacing_bound, stars })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{glue_star_path, glued_leaf};

    fn glued_cert(ell: usize, m: usize) -> (Graph, StarCertificate) {
        let g = glue_star_path(ell, m).unwrap();
        let stars = (0..ell)
            .map(|i| Star { center: i as u32, leaves: (0..m - 1).map(|j| glued_leaf(ell, m, i, j)).collect() })
            .collect();
        (g, StarCertificate { m, mode: SpacingMode::Chain, spacing_bound: 1, stars })
    }

    #[test]
    fn accepts_glued_chain() {
        let (g, cert) = glued_cert(4, 3);
        assert!(validate_certificate(&g, &cert).is_valid());
        let connected = StarCertificate { mode: SpacingMode::Connected, ..cert };
        assert!(validate_certificate(&g, &connected).is_valid());
    }

    #[test]
    fn rejects_overlap_and_spacing() {
        let (g, mut cert) = glued_cert(4, 3);
        cert.stars[1].leaves[0] = cert.stars[0].leaves[0];
        let v = validate_certificate(&g, &cert);
        assert!(v.violations.iter().any(|x| matches!(x, Violation::Overlap { .. })));

        let (g, mut cert) = glued_cert(4, 3);
        cert.stars.swap(1, 3);
        let v = validate_certificate(&g, &cert);
        assert!(v.violations.iter().any(|x| matches!(x, Violation::SpacingExceeded { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let (_, cert) = glued_cert(3, 4);
        let mut buf = Vec::new();
        write_certificate(&cert, &["provenance".into()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("M,mode,spacing_bound,count\n4,chain,1,3\n0,3,4,5\n"));
        assert_eq!(read_certificate(text.as_bytes()).unwrap(), cert);
    }
}
