//! Region graph: map regions as nodes, ground passages as weighted edges.
//!
//! Region ids are dense indices `0..region_count`. An edge's length is the
//! ground travel distance between its two regions in abstract map units.
//! Regions without any edge can only be entered by flying squads; the air
//! metric between two regions is the Euclidean distance between their
//! positions when the map carries positions, and the longest ground edge of
//! the map otherwise.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type RegionId = usize;

/// Undirected ground passage between two regions, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: RegionId,
    pub b: RegionId,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionGraph {
    region_count: usize,
    edges: Vec<Edge>,
    positions: Option<Vec<(f64, f64)>>,
    adjacency: Vec<Vec<(RegionId, f64)>>,
    max_edge_length: f64,
}

impl RegionGraph {
    /// Builds and validates a graph from raw parts.
    pub fn new(
        region_count: usize,
        edges: Vec<(RegionId, RegionId, f64)>,
        positions: Option<Vec<(f64, f64)>>,
    ) -> Result<Self> {
        if region_count == 0 {
            return Err(Error::InvalidMap("region count must be positive".into()));
        }
        if let Some(pos) = &positions {
            if pos.len() != region_count {
                return Err(Error::InvalidMap(format!(
                    "{} positions given for {} regions",
                    pos.len(),
                    region_count
                )));
            }
            if pos.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                return Err(Error::InvalidMap("positions must be finite".into()));
            }
        }
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for (a, b, length) in edges {
            if a >= region_count || b >= region_count {
                return Err(Error::InvalidMap(format!(
                    "edge ({a}, {b}) references a region outside 0..{region_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidMap(format!("self-loop on region {a}")));
            }
            if length <= 0.0 || !length.is_finite() {
                return Err(Error::InvalidMap(format!(
                    "edge ({a}, {b}) has non-positive length {length}"
                )));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(Error::InvalidMap(format!("duplicate edge ({a}, {b})")));
            }
            normalized.push(Edge { a: key.0, b: key.1, length });
        }
        let mut adjacency = vec![Vec::new(); region_count];
        for e in &normalized {
            adjacency[e.a].push((e.b, e.length));
            adjacency[e.b].push((e.a, e.length));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(region, _)| region);
        }
        let max_edge_length = normalized.iter().map(|e| e.length).fold(0.0, f64::max);
        Ok(Self { region_count, edges: normalized, positions, adjacency, max_edge_length })
    }

    /// Parses the plain-text map format:
    ///
    /// ```text
    /// regions <N>
    /// pos <id> <x> <y>        # optional, all regions or none
    /// edge <a> <b> <length>
    /// ```
    ///
    /// `#` starts a comment; directives after `regions` may appear in any
    /// order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut region_count: Option<usize> = None;
        let mut edges: Vec<(RegionId, RegionId, f64)> = Vec::new();
        let mut positions: Vec<Option<(f64, f64)>> = Vec::new();
        let mut saw_pos = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            let mut tokens = line.split_whitespace();
            let Some(directive) = tokens.next() else { continue };
            let parse_err =
                |message: String| Error::Parse { line: line_no, message };
            match directive {
                "regions" => {
                    if region_count.is_some() {
                        return Err(parse_err("duplicate `regions` directive".into()));
                    }
                    let n: usize = next_token(&mut tokens, line_no, "region count")?;
                    if n == 0 {
                        return Err(parse_err("region count must be positive".into()));
                    }
                    region_count = Some(n);
                    positions = vec![None; n];
                }
                "pos" => {
                    let n = region_count
                        .ok_or_else(|| parse_err("`pos` before `regions`".into()))?;
                    let id: usize = next_token(&mut tokens, line_no, "region id")?;
                    let x: f64 = next_token(&mut tokens, line_no, "x coordinate")?;
                    let y: f64 = next_token(&mut tokens, line_no, "y coordinate")?;
                    if id >= n {
                        return Err(Error::InvalidMap(format!(
                            "line {line_no}: pos for region {id}, map has {n} regions"
                        )));
                    }
                    if positions[id].is_some() {
                        return Err(Error::InvalidMap(format!(
                            "line {line_no}: duplicate pos for region {id}"
                        )));
                    }
                    positions[id] = Some((x, y));
                    saw_pos = true;
                }
                "edge" => {
                    region_count
                        .ok_or_else(|| parse_err("`edge` before `regions`".into()))?;
                    let a: usize = next_token(&mut tokens, line_no, "region id")?;
                    let b: usize = next_token(&mut tokens, line_no, "region id")?;
                    let length: f64 = next_token(&mut tokens, line_no, "edge length")?;
                    edges.push((a, b, length));
                }
                other => {
                    return Err(parse_err(format!("unknown directive `{other}`")));
                }
            }
            if tokens.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("trailing tokens after `{directive}` directive"),
                });
            }
        }

        let region_count = region_count
            .ok_or_else(|| Error::InvalidMap("missing `regions` directive".into()))?;
        let positions = if saw_pos {
            let filled: Vec<(f64, f64)> = positions
                .iter()
                .enumerate()
                .map(|(id, p)| {
                    p.ok_or_else(|| {
                        Error::InvalidMap(format!("region {id} has no pos but others do"))
                    })
                })
                .collect::<Result<_>>()?;
            Some(filled)
        } else {
            None
        };
        Self::new(region_count, edges, positions)
    }

    /// Serializes to the map file format; `parse` reproduces the graph
    /// exactly (floats are printed with round-trip precision).
    pub fn to_map_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "regions {}", self.region_count);
        if let Some(positions) = &self.positions {
            for (id, (x, y)) in positions.iter().enumerate() {
                let _ = writeln!(out, "pos {id} {x} {y}");
            }
        }
        for e in &self.edges {
            let _ = writeln!(out, "edge {} {} {}", e.a, e.b, e.length);
        }
        out
    }

    /// Deterministically generates a random map: `regions - isolated`
    /// regions (ids `0..regions-isolated`) form one connected component via
    /// a random spanning tree plus a few extra passages, and the remaining
    /// ids are edge-free regions reachable only by air. Positions are drawn
    /// uniformly from `[0, 100)^2` and edge lengths are the Euclidean
    /// distances between endpoint positions.
    pub fn generate(seed: u64, regions: usize, isolated: usize) -> Result<Self> {
        if regions == 0 {
            return Err(Error::InvalidConfig("regions must be positive".into()));
        }
        if isolated >= regions {
            return Err(Error::InvalidConfig(format!(
                "isolated ({isolated}) must be smaller than regions ({regions})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<(f64, f64)> = (0..regions)
            .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
            .collect();
        let distance = |a: usize, b: usize| -> f64 {
            let (ax, ay) = positions[a];
            let (bx, by) = positions[b];
            ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt().max(0.001)
        };
        let connected = regions - isolated;
        let mut edges: Vec<(RegionId, RegionId, f64)> = Vec::new();
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        for i in 1..connected {
            let j = rng.gen_range(0..i);
            used.insert((j.min(i), j.max(i)));
            edges.push((j, i, distance(j, i)));
        }
        // A handful of extra passages so the component is not a bare tree.
        for _ in 0..connected {
            let a = rng.gen_range(0..connected);
            let b = rng.gen_range(0..connected);
            if a == b || !used.insert((a.min(b), a.max(b))) {
                continue;
            }
            edges.push((a.min(b), a.max(b), distance(a, b)));
        }
        Self::new(regions, edges, Some(positions))
    }

    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn positions(&self) -> Option<&[(f64, f64)]> {
        self.positions.as_deref()
    }

    /// Ground neighbors of `region` with edge lengths, ascending by id.
    pub fn neighbors(&self, region: RegionId) -> Result<&[(RegionId, f64)]> {
        self.check_region(region)?;
        Ok(&self.adjacency[region])
    }

    /// Length of the ground edge between `a` and `b`, if one exists.
    pub fn edge_length(&self, a: RegionId, b: RegionId) -> Result<Option<f64>> {
        self.check_region(a)?;
        self.check_region(b)?;
        Ok(self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|(_, length)| *length))
    }

    /// Connected components over ground edges, each sorted ascending,
    /// ordered by their smallest member.
    pub fn connected_components(&self) -> Vec<Vec<RegionId>> {
        let mut visited = vec![false; self.region_count];
        let mut components = Vec::new();
        for start in 0..self.region_count {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut component = vec![start];
            let mut queue = vec![start];
            while let Some(r) = queue.pop() {
                for &(n, _) in &self.adjacency[r] {
                    if !visited[n] {
                        visited[n] = true;
                        component.push(n);
                        queue.push(n);
                    }
                }
            }
            component.sort_unstable();
            components.push(component);
        }
        components
    }

    /// Shortest ground travel distance from `a` to `b` (sum of edge
    /// lengths), or `None` when they lie in different components.
    pub fn ground_distance(&self, a: RegionId, b: RegionId) -> Result<Option<f64>> {
        Ok(self.shortest_path(a, b)?.map(|(distance, _)| distance))
    }

    /// Shortest ground path from `a` to `b` as `(distance, regions)`, the
    /// path including both endpoints. Ties are broken deterministically.
    pub fn shortest_path(&self, a: RegionId, b: RegionId) -> Result<Option<(f64, Vec<RegionId>)>> {
        self.check_region(a)?;
        self.check_region(b)?;
        if a == b {
            return Ok(Some((0.0, vec![a])));
        }
        let mut dist = vec![f64::INFINITY; self.region_count];
        let mut prev = vec![usize::MAX; self.region_count];
        let mut heap = BinaryHeap::new();
        dist[a] = 0.0;
        heap.push(QueueEntry { dist: 0.0, node: a });
        while let Some(QueueEntry { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            if node == b {
                break;
            }
            for &(n, length) in &self.adjacency[node] {
                let candidate = d + length;
                if candidate < dist[n] {
                    dist[n] = candidate;
                    prev[n] = node;
                    heap.push(QueueEntry { dist: candidate, node: n });
                }
            }
        }
        if dist[b].is_infinite() {
            return Ok(None);
        }
        let mut path = vec![b];
        let mut cursor = b;
        while cursor != a {
            cursor = prev[cursor];
            path.push(cursor);
        }
        path.reverse();
        Ok(Some((dist[b], path)))
    }

    /// Air travel distance between two regions: Euclidean between positions
    /// when the map has them, otherwise the longest ground edge of the map
    /// (1.0 on maps with no edges at all).
    pub fn air_length(&self, a: RegionId, b: RegionId) -> Result<f64> {
        self.check_region(a)?;
        self.check_region(b)?;
        match &self.positions {
            Some(positions) => {
                let (ax, ay) = positions[a];
                let (bx, by) = positions[b];
                Ok(((ax - bx).powi(2) + (ay - by).powi(2)).sqrt())
            }
            None if self.max_edge_length > 0.0 => Ok(self.max_edge_length),
            None => Ok(1.0),
        }
    }

    /// Errors unless `region` is a valid id on this map.
    pub fn check_region(&self, region: RegionId) -> Result<()> {
        if region < self.region_count {
            Ok(())
        } else {
            Err(Error::RegionOutOfRange { region, count: self.region_count })
        }
    }
}

fn next_token<T: std::str::FromStr>(
    tokens: &mut std::str::SplitWhitespace<'_>,
    line: usize,
    what: &str,
) -> Result<T> {
    let token = tokens.next().ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse {what} from `{token}`"),
    })
}

#[derive(PartialEq)]
struct QueueEntry {
    dist: f64,
    node: RegionId,
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on distance; ties pop the smaller region id first so
        // path reconstruction is deterministic.
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
