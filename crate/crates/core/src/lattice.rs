//! Finite honeycomb geometry: torus or open brick-wall patch, with the
//! vertex bipartition, stars, hexagonal plaquettes, loop/region partitions
//! and open edge paths used by the lattice model.
//!
//! Embedding conventions (deterministic, so serialized site ids and golden
//! outputs are reproducible):
//!
//! * **Torus** `l1 × l2`: one unit cell per `(i, j)` holds an A-vertex, a
//!   B-vertex and three edges. Edge kinds: `K1 = A(i,j)–B(i,j)`,
//!   `K2 = A(i,j)–B(i-1,j)`, `K3 = A(i,j)–B(i,j-1)` (indices wrap). Every
//!   vertex has exactly one incident edge of each kind. Hexagon boundaries
//!   are stored as 6-slot walks; on degenerate tori (`l1 = 1` or `l2 = 1`)
//!   a walk may traverse an edge twice, and operator-level supports reduce
//!   those multiplicities mod 2.
//! * **Patch** `w × h`: staggered bricks of width 2; the brick `(i, j)`
//!   spans columns `2i + (j mod 2) ..= 2i + 2 + (j mod 2)` between rows `j`
//!   and `j+1`. Vertices sit on integer points, sublattice A at even
//!   `x + y`. Boundary vertices may have degree < 3.
//!
//! Site ids place all edge qubits first (`SiteId(edge)`) and vertex qubits
//! after (`SiteId(n_edges + vertex)`).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::SiteId;

/// Integer embedding coordinate of a patch vertex.
type Coord = (i64, i64);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlaquetteId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

/// Per-vertex-unique incident-edge selector; see the module docs for the
/// geometric meaning of each kind.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    K1,
    K2,
    K3,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice dimensions must be at least 1")]
    ZeroSize,
    #[error("vertex {0:?} is out of range")]
    BadVertex(VertexId),
    #[error("edge {0:?} is out of range")]
    BadEdge(EdgeId),
    #[error("plaquette {0:?} is out of range")]
    BadPlaquette(PlaquetteId),
    #[error("loop edges do not form a single closed simple walk")]
    NotAClosedWalk,
    #[error("inconsistent interior: {0}")]
    InconsistentInterior(String),
    #[error("no incident edge of the requested kind at vertex {0:?}")]
    InvalidStep(VertexId),
    #[error("path revisits vertex {0:?} but a simple path was requested")]
    SelfCrossing(VertexId),
    #[error("path start must be a B-sublattice vertex")]
    BadPathStart,
    #[error("no simple path of the requested length exists")]
    NoSimplePath,
    #[error("interior computation requires an open patch")]
    NeedsPatch,
}

#[derive(Clone, Debug)]
struct VertexInfo {
    sublattice: Sublattice,
    /// Incident edges indexed by kind; `None` on patch boundaries.
    by_kind: [Option<EdgeId>; 3],
}

#[derive(Clone, Debug)]
struct EdgeInfo {
    /// A-sublattice endpoint.
    a: VertexId,
    /// B-sublattice endpoint.
    b: VertexId,
    kind: EdgeKind,
}

#[derive(Clone, Debug)]
struct PlaquetteInfo {
    /// Boundary walk, 6 edge slots (may repeat on degenerate tori).
    edge_walk: Vec<EdgeId>,
    vertex_walk: Vec<VertexId>,
    /// Odd-multiplicity edges of the walk.
    support: BTreeSet<EdgeId>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeSpec {
    Torus { cells: [u32; 2] },
    Patch { size: [u32; 2] },
}

#[derive(Clone, Debug)]
pub struct HoneycombLattice {
    spec: LatticeSpec,
    vertices: Vec<VertexInfo>,
    edges: Vec<EdgeInfo>,
    plaquettes: Vec<PlaquetteInfo>,
    /// Bricks containing each edge (≤ 2); a missing slot is the outer face.
    edge_faces: Vec<Vec<PlaquetteId>>,
}

impl HoneycombLattice {
    /// Periodic lattice with `l1 × l2` unit cells: `2·l1·l2` vertices,
    /// `3·l1·l2` edges and `l1·l2` hexagons.
    pub fn torus(l1: u32, l2: u32) -> Result<Self, LatticeError> {
        if l1 == 0 || l2 == 0 {
            return Err(LatticeError::ZeroSize);
        }
        let cell = |i: u32, j: u32| -> u32 { (j % l2) * l1 + (i % l1) };
        let va = |i: u32, j: u32| VertexId(2 * cell(i, j));
        let vb = |i: u32, j: u32| VertexId(2 * cell(i, j) + 1);
        let e1 = |i: u32, j: u32| EdgeId(3 * cell(i, j));
        let e2 = |i: u32, j: u32| EdgeId(3 * cell(i, j) + 1);
        let e3 = |i: u32, j: u32| EdgeId(3 * cell(i, j) + 2);

        let n_cells = (l1 * l2) as usize;
        let mut vertices = vec![
            VertexInfo {
                sublattice: Sublattice::A,
                by_kind: [None; 3],
            };
            2 * n_cells
        ];
        let mut edges = Vec::with_capacity(3 * n_cells);
        for j in 0..l2 {
            for i in 0..l1 {
                vertices[va(i, j).0 as usize].sublattice = Sublattice::A;
                vertices[vb(i, j).0 as usize].sublattice = Sublattice::B;
                // Kinds in id order: K1, K2, K3.
                edges.push(EdgeInfo {
                    a: va(i, j),
                    b: vb(i, j),
                    kind: EdgeKind::K1,
                });
                edges.push(EdgeInfo {
                    a: va(i, j),
                    b: vb(i + l1 - 1, j),
                    kind: EdgeKind::K2,
                });
                edges.push(EdgeInfo {
                    a: va(i, j),
                    b: vb(i, j + l2 - 1),
                    kind: EdgeKind::K3,
                });
            }
        }
        for j in 0..l2 {
            for i in 0..l1 {
                vertices[va(i, j).0 as usize].by_kind =
                    [Some(e1(i, j)), Some(e2(i, j)), Some(e3(i, j))];
                vertices[vb(i, j).0 as usize].by_kind =
                    [Some(e1(i, j)), Some(e2(i + 1, j)), Some(e3(i, j + 1))];
            }
        }

        let mut plaquettes = Vec::with_capacity(n_cells);
        for j in 0..l2 {
            for i in 0..l1 {
                // Face walk A(i,j) → B(i,j) → A(i+1,j) → B(i+1,j-1)
                //          → A(i+1,j-1) → B(i,j-1) → A(i,j).
                let jm = j + l2 - 1;
                let edge_walk = vec![
                    e1(i, j),
                    e2(i + 1, j),
                    e3(i + 1, j),
                    e1(i + 1, jm),
                    e2(i + 1, jm),
                    e3(i, j),
                ];
                let vertex_walk = vec![
                    va(i, j),
                    vb(i, j),
                    va(i + 1, j),
                    vb(i + 1, jm),
                    va(i + 1, jm),
                    vb(i, jm),
                ];
                plaquettes.push(PlaquetteInfo {
                    support: walk_support(&edge_walk),
                    edge_walk,
                    vertex_walk,
                });
            }
        }

        let edge_faces = faces_from_plaquettes(edges.len(), &plaquettes);
        Ok(HoneycombLattice {
            spec: LatticeSpec::Torus { cells: [l1, l2] },
            vertices,
            edges,
            plaquettes,
            edge_faces,
        })
    }

    /// Open brick-wall patch of `w × h` complete hexagons.
    pub fn patch(w: u32, h: u32) -> Result<Self, LatticeError> {
        if w == 0 || h == 0 {
            return Err(LatticeError::ZeroSize);
        }
        let brick_x0 = |i: u32, j: u32| -> i64 { 2 * i as i64 + (j % 2) as i64 };

        // Collect vertex positions and undirected edges as coordinate pairs.
        let mut vset: BTreeSet<Coord> = BTreeSet::new();
        let mut eset: BTreeSet<(Coord, Coord)> = BTreeSet::new();
        let mut brick_edges: Vec<Vec<(Coord, Coord)>> = Vec::new();
        for j in 0..h {
            for i in 0..w {
                let x0 = brick_x0(i, j);
                let y = j as i64;
                let corners = [
                    (x0, y),
                    (x0 + 1, y),
                    (x0 + 2, y),
                    (x0, y + 1),
                    (x0 + 1, y + 1),
                    (x0 + 2, y + 1),
                ];
                vset.extend(corners);
                // Walk order: along the bottom, up the right side, back along
                // the top, down the left side.
                let walk = vec![
                    ((x0, y), (x0 + 1, y)),
                    ((x0 + 1, y), (x0 + 2, y)),
                    ((x0 + 2, y), (x0 + 2, y + 1)),
                    ((x0 + 1, y + 1), (x0 + 2, y + 1)),
                    ((x0, y + 1), (x0 + 1, y + 1)),
                    ((x0, y), (x0, y + 1)),
                ];
                eset.extend(walk.iter().copied());
                brick_edges.push(walk);
            }
        }

        // Deterministic numbering: vertices by (y, x), edges by sorted
        // endpoint positions.
        let vpos: Vec<Coord> = {
            let mut v: Vec<_> = vset.into_iter().collect();
            v.sort_by_key(|&(x, y)| (y, x));
            v
        };
        let vid: BTreeMap<Coord, VertexId> = vpos
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, VertexId(k as u32)))
            .collect();
        let epos: Vec<(Coord, Coord)> = {
            let mut e: Vec<_> = eset.into_iter().collect();
            e.sort_by_key(|&((x1, y1), (x2, y2))| (y1, x1, y2, x2));
            e
        };
        let eid: BTreeMap<(Coord, Coord), EdgeId> = epos
            .iter()
            .enumerate()
            .map(|(k, &p)| (p, EdgeId(k as u32)))
            .collect();

        let sub = |&(x, y): &Coord| {
            if (x + y).rem_euclid(2) == 0 {
                Sublattice::A
            } else {
                Sublattice::B
            }
        };

        let mut vertices: Vec<VertexInfo> = vpos
            .iter()
            .map(|p| VertexInfo {
                sublattice: sub(p),
                by_kind: [None; 3],
            })
            .collect();

        let mut edges = Vec::with_capacity(epos.len());
        for (k, &(p1, p2)) in epos.iter().enumerate() {
            let (pa, pb) = if sub(&p1) == Sublattice::A {
                (p1, p2)
            } else {
                (p2, p1)
            };
            let kind = if p1.1 != p2.1 {
                EdgeKind::K3
            } else if pa.0 < pb.0 {
                EdgeKind::K1 // A-endpoint on the left
            } else {
                EdgeKind::K2
            };
            let e = EdgeId(k as u32);
            edges.push(EdgeInfo {
                a: vid[&pa],
                b: vid[&pb],
                kind,
            });
            for p in [p1, p2] {
                vertices[vid[&p].0 as usize].by_kind[kind as usize] = Some(e);
            }
        }

        let mut plaquettes = Vec::with_capacity(brick_edges.len());
        for walk in &brick_edges {
            // Reorder into a closed walk: bottom two, right vertical, top two
            // reversed, left vertical (matching the corner cycle).
            let ew = vec![
                eid[&walk[0]],
                eid[&walk[1]],
                eid[&walk[2]],
                eid[&walk[3]],
                eid[&walk[4]],
                eid[&walk[5]],
            ];
            let (c0, _) = walk[0];
            let (x0, y) = c0;
            let vw = vec![
                vid[&(x0, y)],
                vid[&(x0 + 1, y)],
                vid[&(x0 + 2, y)],
                vid[&(x0 + 2, y + 1)],
                vid[&(x0 + 1, y + 1)],
                vid[&(x0, y + 1)],
            ];
            plaquettes.push(PlaquetteInfo {
                support: walk_support(&ew),
                edge_walk: ew,
                vertex_walk: vw,
            });
        }

        let edge_faces = faces_from_plaquettes(edges.len(), &plaquettes);
        Ok(HoneycombLattice {
            spec: LatticeSpec::Patch { size: [w, h] },
            vertices,
            edges,
            plaquettes,
            edge_faces,
        })
    }

    pub fn from_spec(spec: &LatticeSpec) -> Result<Self, LatticeError> {
        match *spec {
            LatticeSpec::Torus { cells: [l1, l2] } => Self::torus(l1, l2),
            LatticeSpec::Patch { size: [w, h] } => Self::patch(w, h),
        }
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.spec, LatticeSpec::Torus { .. })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    /// Total qubit count: one per edge plus one per vertex.
    pub fn n_sites(&self) -> usize {
        self.n_edges() + self.n_vertices()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len() as u32).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn plaquette_ids(&self) -> impl Iterator<Item = PlaquetteId> {
        (0..self.plaquettes.len() as u32).map(PlaquetteId)
    }

    pub fn sublattice(&self, v: VertexId) -> Sublattice {
        self.vertices[v.0 as usize].sublattice
    }

    /// Endpoints of an edge as `(A-vertex, B-vertex)`.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let info = &self.edges[e.0 as usize];
        (info.a, info.b)
    }

    pub fn edge_kind(&self, e: EdgeId) -> EdgeKind {
        self.edges[e.0 as usize].kind
    }

    /// The set `s(v)` of edges incident to `v` (≤ 3; exactly 3 on a torus).
    pub fn star(&self, v: VertexId) -> Vec<EdgeId> {
        self.vertices[v.0 as usize]
            .by_kind
            .iter()
            .flatten()
            .copied()
            .collect()
    }

    pub fn incident(&self, v: VertexId, kind: EdgeKind) -> Option<EdgeId> {
        self.vertices[v.0 as usize].by_kind[kind as usize]
    }

    /// Boundary walk of a hexagon: 6 edge slots.
    pub fn plaquette_walk(&self, p: PlaquetteId) -> &[EdgeId] {
        &self.plaquettes[p.0 as usize].edge_walk
    }

    pub fn plaquette_vertices(&self, p: PlaquetteId) -> &[VertexId] {
        &self.plaquettes[p.0 as usize].vertex_walk
    }

    /// Odd-multiplicity edges of the hexagon walk; equals the 6 boundary
    /// edges away from degenerate wraparounds.
    pub fn plaquette_support(&self, p: PlaquetteId) -> &BTreeSet<EdgeId> {
        &self.plaquettes[p.0 as usize].support
    }

    pub fn edge_site(&self, e: EdgeId) -> SiteId {
        SiteId(e.0)
    }

    pub fn vertex_site(&self, v: VertexId) -> SiteId {
        SiteId(self.n_edges() as u32 + v.0)
    }

    /// Inverse of the site map.
    pub fn site_kind(&self, s: SiteId) -> Site {
        if (s.0 as usize) < self.n_edges() {
            Site::Edge(EdgeId(s.0))
        } else {
            Site::Vertex(VertexId(s.0 - self.n_edges() as u32))
        }
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e);
        if v == a {
            b
        } else {
            a
        }
    }

    /// Graph distance between vertices (BFS).
    pub fn vertex_distance(&self, from: VertexId, to: VertexId) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut seen = vec![false; self.n_vertices()];
        let mut queue = VecDeque::from([(from, 0usize)]);
        seen[from.0 as usize] = true;
        while let Some((v, d)) = queue.pop_front() {
            for e in self.star(v) {
                let w = self.other_endpoint(e, v);
                if w == to {
                    return Some(d + 1);
                }
                if !seen[w.0 as usize] {
                    seen[w.0 as usize] = true;
                    queue.push_back((w, d + 1));
                }
            }
        }
        None
    }

    /// All sites (vertex and edge qubits) within graph distance `radius` of
    /// the given vertex set. An edge site is as close as its nearer endpoint.
    pub fn sites_within(&self, seeds: &BTreeSet<VertexId>, radius: usize) -> BTreeSet<SiteId> {
        let mut dist: Vec<Option<usize>> = vec![None; self.n_vertices()];
        let mut queue = VecDeque::new();
        for &v in seeds {
            dist[v.0 as usize] = Some(0);
            queue.push_back(v);
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v.0 as usize].unwrap();
            if d == radius {
                continue;
            }
            for e in self.star(v) {
                let w = self.other_endpoint(e, v);
                if dist[w.0 as usize].is_none() {
                    dist[w.0 as usize] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        let mut sites = BTreeSet::new();
        for v in self.vertex_ids() {
            if dist[v.0 as usize].is_some() {
                sites.insert(self.vertex_site(v));
            }
        }
        for e in self.edge_ids() {
            let (a, b) = self.endpoints(e);
            if dist[a.0 as usize].is_some() || dist[b.0 as usize].is_some() {
                sites.insert(self.edge_site(e));
            }
        }
        sites
    }

    fn faces_of_edge(&self, e: EdgeId) -> &[PlaquetteId] {
        &self.edge_faces[e.0 as usize]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Site {
    Edge(EdgeId),
    Vertex(VertexId),
}

fn walk_support(walk: &[EdgeId]) -> BTreeSet<EdgeId> {
    let mut support = BTreeSet::new();
    for &e in walk {
        if !support.remove(&e) {
            support.insert(e);
        }
    }
    support
}

fn faces_from_plaquettes(n_edges: usize, plaquettes: &[PlaquetteInfo]) -> Vec<Vec<PlaquetteId>> {
    let mut faces = vec![Vec::new(); n_edges];
    for (k, p) in plaquettes.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &e in &p.edge_walk {
            if seen.insert(e) {
                faces[e.0 as usize].push(PlaquetteId(k as u32));
            }
        }
    }
    faces
}

/// A closed simple loop of edges together with its explicit interior region.
///
/// The interior is builder-supplied (or flood-filled on patches). On a torus
/// "the region surrounded by a loop" has no canonical meaning for
/// non-contractible loops, so only explicit interiors are accepted there.
/// Edges both of whose endpoints lie on the loop but which are not loop
/// edges (chords) are classified by the supplied interior edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loop {
    edges: Vec<EdgeId>,
    interior_vertices: BTreeSet<VertexId>,
    interior_edges: BTreeSet<EdgeId>,
}

impl Loop {
    /// Validating constructor from raw parts. `edges` must be orderable into
    /// a single closed simple walk; the interior must satisfy the region
    /// partition invariants.
    pub fn from_parts(
        lat: &HoneycombLattice,
        edges: Vec<EdgeId>,
        interior_vertices: BTreeSet<VertexId>,
        interior_edges: BTreeSet<EdgeId>,
    ) -> Result<Self, LatticeError> {
        let ordered = order_cycle(lat, &edges)?;
        let l = Loop {
            edges: ordered,
            interior_vertices,
            interior_edges,
        };
        RegionPartition::new(lat, &l)?;
        Ok(l)
    }

    /// The hexagon around a single plaquette: empty interior.
    pub fn hexagon(lat: &HoneycombLattice, p: PlaquetteId) -> Result<Self, LatticeError> {
        Self::from_plaquettes(lat, &[p])
    }

    /// Boundary of a union of plaquettes. Boundary edges are those covered an
    /// odd number of times by the hexagon walks; evenly covered edges and the
    /// vertices not touching the boundary form the interior.
    pub fn from_plaquettes(
        lat: &HoneycombLattice,
        plaqs: &[PlaquetteId],
    ) -> Result<Self, LatticeError> {
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let mut verts: BTreeSet<VertexId> = BTreeSet::new();
        for &p in plaqs {
            if p.0 as usize >= lat.n_plaquettes() {
                return Err(LatticeError::BadPlaquette(p));
            }
            for &e in lat.plaquette_walk(p) {
                *count.entry(e).or_insert(0) += 1;
            }
            verts.extend(lat.plaquette_vertices(p).iter().copied());
        }
        let boundary: Vec<EdgeId> = count
            .iter()
            .filter(|(_, &c)| c % 2 == 1)
            .map(|(&e, _)| e)
            .collect();
        let interior_edges: BTreeSet<EdgeId> = count
            .iter()
            .filter(|(_, &c)| c % 2 == 0)
            .map(|(&e, _)| e)
            .collect();
        let mut boundary_vertices = BTreeSet::new();
        for &e in &boundary {
            let (a, b) = lat.endpoints(e);
            boundary_vertices.insert(a);
            boundary_vertices.insert(b);
        }
        let interior_vertices: BTreeSet<VertexId> =
            verts.difference(&boundary_vertices).copied().collect();
        Self::from_parts(lat, boundary, interior_vertices, interior_edges)
    }

    /// Interior computation for an edge cycle on an open patch, via a face
    /// flood fill from the outer face. Fails on tori.
    pub fn flood_fill(lat: &HoneycombLattice, edges: Vec<EdgeId>) -> Result<Self, LatticeError> {
        if lat.is_torus() {
            return Err(LatticeError::NeedsPatch);
        }
        let ordered = order_cycle(lat, &edges)?;
        let loop_set: BTreeSet<EdgeId> = ordered.iter().copied().collect();

        // Face graph: plaquettes plus the outer face; cross any edge not on
        // the loop. Faces unreachable from the outer face are interior.
        let n = lat.n_plaquettes();
        let mut outside = vec![false; n];
        let mut queue: VecDeque<PlaquetteId> = VecDeque::new();
        for e in lat.edge_ids() {
            if loop_set.contains(&e) {
                continue;
            }
            let faces = lat.faces_of_edge(e);
            if faces.len() < 2 {
                // Touches the outer face.
                for &p in faces {
                    if !outside[p.0 as usize] {
                        outside[p.0 as usize] = true;
                        queue.push_back(p);
                    }
                }
            }
        }
        while let Some(p) = queue.pop_front() {
            let mut seen = BTreeSet::new();
            for &e in lat.plaquette_walk(p) {
                if !seen.insert(e) || loop_set.contains(&e) {
                    continue;
                }
                for &q in lat.faces_of_edge(e) {
                    if q != p && !outside[q.0 as usize] {
                        outside[q.0 as usize] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        let interior_plaqs: Vec<PlaquetteId> = (0..n as u32)
            .map(PlaquetteId)
            .filter(|p| !outside[p.0 as usize])
            .collect();

        let mut interior_edges: BTreeSet<EdgeId> = BTreeSet::new();
        for e in lat.edge_ids() {
            if loop_set.contains(&e) {
                continue;
            }
            let faces = lat.faces_of_edge(e);
            if !faces.is_empty() && faces.iter().all(|p| !outside[p.0 as usize]) {
                interior_edges.insert(e);
            }
        }
        let mut boundary_vertices = BTreeSet::new();
        for &e in &loop_set {
            let (a, b) = lat.endpoints(e);
            boundary_vertices.insert(a);
            boundary_vertices.insert(b);
        }
        let mut interior_vertices = BTreeSet::new();
        for &p in &interior_plaqs {
            for &v in lat.plaquette_vertices(p) {
                if !boundary_vertices.contains(&v) {
                    interior_vertices.insert(v);
                }
            }
        }
        Self::from_parts(lat, ordered, interior_vertices, interior_edges)
    }

    /// Cyclically ordered boundary edges.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    pub fn interior_vertices(&self) -> &BTreeSet<VertexId> {
        &self.interior_vertices
    }

    pub fn interior_edges(&self) -> &BTreeSet<EdgeId> {
        &self.interior_edges
    }
}

fn order_cycle(lat: &HoneycombLattice, edges: &[EdgeId]) -> Result<Vec<EdgeId>, LatticeError> {
    if edges.is_empty() {
        return Err(LatticeError::NotAClosedWalk);
    }
    let set: BTreeSet<EdgeId> = edges.iter().copied().collect();
    if set.len() != edges.len() {
        return Err(LatticeError::NotAClosedWalk);
    }
    for &e in &set {
        if e.0 as usize >= lat.n_edges() {
            return Err(LatticeError::BadEdge(e));
        }
    }
    // Each incident vertex must meet exactly two loop edges.
    let mut incident: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in &set {
        let (a, b) = lat.endpoints(e);
        incident.entry(a).or_default().push(e);
        incident.entry(b).or_default().push(e);
    }
    if incident.values().any(|v| v.len() != 2) {
        return Err(LatticeError::NotAClosedWalk);
    }
    // Walk from the smallest edge id.
    let start = *set.iter().next().unwrap();
    let (va, _) = lat.endpoints(start);
    let mut ordered = vec![start];
    let mut seen: BTreeSet<EdgeId> = BTreeSet::from([start]);
    let mut at = lat.other_endpoint(start, va);
    while ordered.len() < set.len() {
        let next = incident[&at]
            .iter()
            .copied()
            .find(|e| !seen.contains(e))
            .ok_or(LatticeError::NotAClosedWalk)?;
        at = lat.other_endpoint(next, at);
        seen.insert(next);
        ordered.push(next);
    }
    // The walk must close back at the start vertex.
    if at != va {
        return Err(LatticeError::NotAClosedWalk);
    }
    Ok(ordered)
}

/// Vertex and edge classification induced by a loop: interior / boundary /
/// exterior, with `E = E_int ∪ E_ext ∪ E_bd` disjointly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    pub v_int: BTreeSet<VertexId>,
    pub v_bd: BTreeSet<VertexId>,
    pub v_ext: BTreeSet<VertexId>,
    pub e_int: BTreeSet<EdgeId>,
    pub e_bd: BTreeSet<EdgeId>,
    pub e_ext: BTreeSet<EdgeId>,
}

impl RegionPartition {
    pub fn new(lat: &HoneycombLattice, l: &Loop) -> Result<Self, LatticeError> {
        Self::from_sets(
            lat,
            l.edge_set(),
            l.interior_vertices.clone(),
            l.interior_edges.clone(),
        )
    }

    /// Partition of a plaquette union without requiring the boundary to be
    /// a single closed walk. On small tori a union can wrap into a band
    /// whose boundary splits into several cycles (or degenerates entirely);
    /// the classification below stays valid in those cases.
    pub fn from_plaquettes(
        lat: &HoneycombLattice,
        plaqs: &[PlaquetteId],
    ) -> Result<Self, LatticeError> {
        let mut count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        let mut covered: BTreeSet<VertexId> = BTreeSet::new();
        for &p in plaqs {
            if p.0 as usize >= lat.n_plaquettes() {
                return Err(LatticeError::BadPlaquette(p));
            }
            for &e in lat.plaquette_walk(p) {
                *count.entry(e).or_insert(0) += 1;
            }
            covered.extend(lat.plaquette_vertices(p).iter().copied());
        }
        let e_bd: BTreeSet<EdgeId> = count
            .iter()
            .filter(|(_, &c)| c % 2 == 1)
            .map(|(&e, _)| e)
            .collect();
        let mut v_bd = BTreeSet::new();
        for &e in &e_bd {
            let (a, b) = lat.endpoints(e);
            v_bd.insert(a);
            v_bd.insert(b);
        }
        let v_int: BTreeSet<VertexId> = covered.difference(&v_bd).copied().collect();
        // Every non-boundary edge whose endpoints both lie in the closed
        // region is interior (covers evenly-counted edges and chords).
        let region: BTreeSet<VertexId> = v_int.union(&v_bd).copied().collect();
        let e_int: BTreeSet<EdgeId> = lat
            .edge_ids()
            .filter(|&e| {
                let (a, b) = lat.endpoints(e);
                !e_bd.contains(&e) && region.contains(&a) && region.contains(&b)
            })
            .collect();
        Self::from_sets(lat, e_bd, v_int, e_int)
    }

    /// Validating constructor from raw classification sets.
    pub fn from_sets(
        lat: &HoneycombLattice,
        e_bd: BTreeSet<EdgeId>,
        v_int: BTreeSet<VertexId>,
        e_int: BTreeSet<EdgeId>,
    ) -> Result<Self, LatticeError> {
        let mut v_bd = BTreeSet::new();
        for &e in &e_bd {
            let (a, b) = lat.endpoints(e);
            v_bd.insert(a);
            v_bd.insert(b);
        }
        if !v_int.is_disjoint(&v_bd) {
            return Err(LatticeError::InconsistentInterior(
                "interior vertices meet the loop".into(),
            ));
        }
        let v_ext: BTreeSet<VertexId> = lat
            .vertex_ids()
            .filter(|v| !v_bd.contains(v) && !v_int.contains(v))
            .collect();

        if !e_int.is_disjoint(&e_bd) {
            return Err(LatticeError::InconsistentInterior(
                "interior edges meet the loop".into(),
            ));
        }
        let mut e_ext = BTreeSet::new();
        for e in lat.edge_ids() {
            let (a, b) = lat.endpoints(e);
            let touches_int = v_int.contains(&a) || v_int.contains(&b);
            let touches_ext = v_ext.contains(&a) || v_ext.contains(&b);
            if touches_int && touches_ext {
                return Err(LatticeError::InconsistentInterior(format!(
                    "edge {e:?} joins interior and exterior"
                )));
            }
            if e_bd.contains(&e) {
                if touches_int {
                    return Err(LatticeError::InconsistentInterior(format!(
                        "loop edge {e:?} touches the interior"
                    )));
                }
                continue;
            }
            if touches_int {
                // Forced interior by the endpoint rule.
                if !e_int.contains(&e) {
                    return Err(LatticeError::InconsistentInterior(format!(
                        "edge {e:?} touches interior vertices but is not an interior edge"
                    )));
                }
            } else if e_int.contains(&e) {
                // A chord: allowed, but both endpoints must be on the loop.
                if !(v_bd.contains(&a) && v_bd.contains(&b)) {
                    return Err(LatticeError::InconsistentInterior(format!(
                        "interior edge {e:?} has an exterior endpoint"
                    )));
                }
            } else if touches_ext {
                e_ext.insert(e);
            } else {
                return Err(LatticeError::InconsistentInterior(format!(
                    "edge {e:?} is classified by no region"
                )));
            }
        }
        Ok(RegionPartition {
            v_int,
            v_bd,
            v_ext,
            e_int,
            e_bd,
            e_ext,
        })
    }

    /// Edges of the closed region: `E_int ∪ E_bd`.
    pub fn region_edges(&self) -> BTreeSet<EdgeId> {
        self.e_int.union(&self.e_bd).copied().collect()
    }

    /// Vertices of the closed region: `V_int ∪ V_bd`.
    pub fn region_vertices(&self) -> BTreeSet<VertexId> {
        self.v_int.union(&self.v_bd).copied().collect()
    }
}

/// Open, alternating-sublattice walk of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePath {
    edges: Vec<EdgeId>,
    vertices: Vec<VertexId>,
}

impl EdgePath {
    /// Walks from `v0 ∈ V_B` following one incident-edge kind per step.
    pub fn from_steps(
        lat: &HoneycombLattice,
        v0: VertexId,
        steps: &[EdgeKind],
        require_simple: bool,
    ) -> Result<Self, LatticeError> {
        if lat.sublattice(v0) != Sublattice::B {
            return Err(LatticeError::BadPathStart);
        }
        let mut vertices = vec![v0];
        let mut edges = Vec::with_capacity(steps.len());
        let mut at = v0;
        for &k in steps {
            let e = lat.incident(at, k).ok_or(LatticeError::InvalidStep(at))?;
            if edges.last() == Some(&e) {
                // Immediate backtracking never produces a valid open walk.
                return Err(LatticeError::InvalidStep(at));
            }
            at = lat.other_endpoint(e, at);
            edges.push(e);
            vertices.push(at);
        }
        if require_simple {
            let mut seen = BTreeSet::new();
            for &v in &vertices {
                if !seen.insert(v) {
                    return Err(LatticeError::SelfCrossing(v));
                }
            }
        }
        Ok(EdgePath { edges, vertices })
    }

    /// First simple path of the given even length, scanning B start
    /// vertices and step-kind sequences in id order. Degenerate lattices
    /// (the 1×1 torus) admit none.
    pub fn first_simple(lat: &HoneycombLattice, len: u32) -> Result<Self, LatticeError> {
        let kinds = [EdgeKind::K1, EdgeKind::K2, EdgeKind::K3];
        for v in lat.vertex_ids() {
            if lat.sublattice(v) != Sublattice::B {
                continue;
            }
            for combo in 0..3usize.pow(len) {
                let steps: Vec<EdgeKind> = (0..len)
                    .map(|i| kinds[(combo / 3usize.pow(i)) % 3])
                    .collect();
                if let Ok(path) = EdgePath::from_steps(lat, v, &steps, true) {
                    return Ok(path);
                }
            }
        }
        Err(LatticeError::NoSimplePath)
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// Vertices visited, start to end (`edges.len() + 1` entries).
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// `|edges(self) ∩ other|`, the crossing count used for braiding phases.
    pub fn crossing_edges(&self, other: &BTreeSet<EdgeId>) -> usize {
        self.edges.iter().filter(|e| other.contains(e)).count()
    }
}

/// Serialized loop description: edge ids plus an optional explicit interior.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoopSpec {
    pub edges: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interior: Option<InteriorSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize, Default)]
pub struct InteriorSpec {
    #[serde(default)]
    pub vertices: Vec<u32>,
    #[serde(default)]
    pub edges: Vec<u32>,
}

impl LoopSpec {
    /// Resolves against a lattice: with an explicit interior it validates it;
    /// without one, the interior is flood-filled (patches only).
    pub fn resolve(&self, lat: &HoneycombLattice) -> Result<Loop, LatticeError> {
        let edges: Vec<EdgeId> = self.edges.iter().map(|&e| EdgeId(e)).collect();
        match &self.interior {
            Some(int) => Loop::from_parts(
                lat,
                edges,
                int.vertices.iter().map(|&v| VertexId(v)).collect(),
                int.edges.iter().map(|&e| EdgeId(e)).collect(),
            ),
            None => Loop::flood_fill(lat, edges),
        }
    }
}

/// Serialized path description: start vertex plus step kinds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathSpec {
    pub start: u32,
    pub steps: Vec<EdgeKind>,
}

impl PathSpec {
    pub fn resolve(&self, lat: &HoneycombLattice) -> Result<EdgePath, LatticeError> {
        EdgePath::from_steps(lat, VertexId(self.start), &self.steps, true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        assert_eq!(lat.n_vertices(), 8);
        assert_eq!(lat.n_edges(), 12);
        assert_eq!(lat.n_plaquettes(), 4);

        let lat = HoneycombLattice::torus(1, 1).unwrap();
        assert_eq!(lat.n_vertices(), 2);
        assert_eq!(lat.n_edges(), 3);
        assert_eq!(lat.n_plaquettes(), 1);

        assert!(matches!(
            HoneycombLattice::torus(0, 2),
            Err(LatticeError::ZeroSize)
        ));
    }

    #[test]
    fn torus_regularity() {
        for (l1, l2) in [(1, 1), (1, 2), (2, 2), (3, 3), (3, 2)] {
            let lat = HoneycombLattice::torus(l1, l2).unwrap();
            for v in lat.vertex_ids() {
                let star = lat.star(v);
                assert_eq!(star.len(), 3, "torus vertex degree");
                let set: BTreeSet<_> = star.iter().collect();
                assert_eq!(set.len(), 3, "star edges distinct");
            }
            for p in lat.plaquette_ids() {
                assert_eq!(lat.plaquette_walk(p).len(), 6);
            }
        }
    }

    #[test]
    fn edge_bipartition() {
        for lat in [
            HoneycombLattice::torus(3, 2).unwrap(),
            HoneycombLattice::patch(3, 2).unwrap(),
        ] {
            for e in lat.edge_ids() {
                let (a, b) = lat.endpoints(e);
                assert_eq!(lat.sublattice(a), Sublattice::A);
                assert_eq!(lat.sublattice(b), Sublattice::B);
            }
        }
    }

    #[test]
    fn patch_counts() {
        let lat = HoneycombLattice::patch(1, 1).unwrap();
        assert_eq!(lat.n_vertices(), 6);
        assert_eq!(lat.n_edges(), 6);
        assert_eq!(lat.n_plaquettes(), 1);

        // Two fused hexagons share one edge and two vertices.
        let lat = HoneycombLattice::patch(2, 1).unwrap();
        assert_eq!(lat.n_vertices(), 10);
        assert_eq!(lat.n_edges(), 11);

        assert!(matches!(
            HoneycombLattice::patch(2, 0),
            Err(LatticeError::ZeroSize)
        ));
    }

    #[test]
    fn patch_degrees_bounded() {
        let lat = HoneycombLattice::patch(3, 3).unwrap();
        for v in lat.vertex_ids() {
            let d = lat.star(v).len();
            assert!((1..=3).contains(&d));
        }
    }

    #[test]
    fn hexagon_loop_partition_on_torus() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        let l = Loop::hexagon(&lat, PlaquetteId(0)).unwrap();
        assert_eq!(l.edges().len(), 6);
        assert!(l.interior_vertices().is_empty());
        assert!(l.interior_edges().is_empty());
        let part = RegionPartition::new(&lat, &l).unwrap();
        assert_eq!(part.v_bd.len(), 6);
        assert!(part.v_int.is_empty());
        assert_eq!(part.v_ext.len(), 2);
        assert_eq!(part.e_bd.len(), 6);
        assert!(part.e_int.is_empty());
        assert_eq!(part.e_ext.len(), 6);
        // Idempotent construction.
        assert_eq!(Loop::hexagon(&lat, PlaquetteId(0)).unwrap(), l);
        assert_eq!(l.edge_set(), lat.plaquette_support(PlaquetteId(0)).clone());
    }

    #[test]
    fn two_hexagon_loop_partition() {
        let lat = HoneycombLattice::torus(3, 3).unwrap();
        // Plaquettes 0 and (1,0) are horizontally adjacent and share an edge.
        let l = Loop::from_plaquettes(&lat, &[PlaquetteId(0), PlaquetteId(1)]).unwrap();
        assert_eq!(l.edges().len(), 10);
        // Direct enumeration: the union of two edge-sharing hexagons has all
        // ten vertices on its boundary walk, so the shared edge is a chord
        // with both endpoints on the loop and the strict interior is empty.
        assert_eq!(l.interior_edges().len(), 1);
        assert!(l.interior_vertices().is_empty());
        let shared = *l.interior_edges().iter().next().unwrap();
        let (a, b) = lat.endpoints(shared);

        let part = RegionPartition::new(&lat, &l).unwrap();
        assert!(part.v_bd.contains(&a) && part.v_bd.contains(&b));
        // The derived partition covers everything exactly once.
        assert_eq!(
            part.e_int.len() + part.e_bd.len() + part.e_ext.len(),
            lat.n_edges()
        );
        assert_eq!(
            part.v_int.len() + part.v_bd.len() + part.v_ext.len(),
            lat.n_vertices()
        );
    }

    #[test]
    fn full_patch_boundary_loop_has_no_exterior() {
        let lat = HoneycombLattice::patch(2, 1).unwrap();
        // Boundary of both bricks = outer cycle of the patch.
        let l = Loop::from_plaquettes(&lat, &[PlaquetteId(0), PlaquetteId(1)]).unwrap();
        let part = RegionPartition::new(&lat, &l).unwrap();
        assert!(part.v_ext.is_empty());
        assert!(part.e_ext.is_empty());
        // The shared middle edge is a chord: both endpoints on the loop.
        assert_eq!(part.e_int.len(), 1);
        assert!(part.v_int.is_empty());
    }

    #[test]
    fn flood_fill_matches_plaquette_interior() {
        let lat = HoneycombLattice::patch(3, 2).unwrap();
        for plaqs in [vec![PlaquetteId(0)], vec![PlaquetteId(0), PlaquetteId(1)]] {
            let by_plaq = Loop::from_plaquettes(&lat, &plaqs).unwrap();
            let by_fill = Loop::flood_fill(&lat, by_plaq.edges().to_vec()).unwrap();
            assert_eq!(by_plaq, by_fill);
        }
    }

    #[test]
    fn flood_fill_rejected_on_torus() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        let l = Loop::hexagon(&lat, PlaquetteId(0)).unwrap();
        assert_eq!(
            Loop::flood_fill(&lat, l.edges().to_vec()),
            Err(LatticeError::NeedsPatch)
        );
    }

    #[test]
    fn bad_interior_rejected() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        let hex = Loop::hexagon(&lat, PlaquetteId(0)).unwrap();
        // Claiming an exterior vertex as interior must fail.
        let part = RegionPartition::new(&lat, &hex).unwrap();
        let v = *part.v_ext.iter().next().unwrap();
        let result = Loop::from_parts(
            &lat,
            hex.edges().to_vec(),
            BTreeSet::from([v]),
            BTreeSet::new(),
        );
        assert!(matches!(result, Err(LatticeError::InconsistentInterior(_))));
    }

    #[test]
    fn path_from_steps() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        let b0 = VertexId(1);
        assert_eq!(lat.sublattice(b0), Sublattice::B);

        // Single step: one edge from v0.
        let p = EdgePath::from_steps(&lat, b0, &[EdgeKind::K1], true).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.endpoints().0, b0);

        // Alternation: even-length paths end on the B sublattice.
        let steps = [EdgeKind::K1, EdgeKind::K3, EdgeKind::K1, EdgeKind::K2];
        let p = EdgePath::from_steps(&lat, b0, &steps, true).unwrap();
        assert_eq!(p.len(), 4);
        let (start, end) = p.endpoints();
        assert_eq!(lat.sublattice(end), Sublattice::B);
        assert_ne!(start, end);
        // Interior vertices are visited by exactly two path edges.
        for v in &p.vertices()[1..p.vertices().len() - 1] {
            let count = p
                .edges()
                .iter()
                .filter(|&&e| {
                    let (a, b) = lat.endpoints(e);
                    a == *v || b == *v
                })
                .count();
            assert_eq!(count, 2);
        }

        // A-start is rejected.
        assert_eq!(
            EdgePath::from_steps(&lat, VertexId(0), &[EdgeKind::K1], true),
            Err(LatticeError::BadPathStart)
        );
        // Backtracking is rejected.
        assert!(EdgePath::from_steps(&lat, b0, &[EdgeKind::K1, EdgeKind::K1], true).is_err());
    }

    #[test]
    fn crossing_counts() {
        let lat = HoneycombLattice::torus(3, 3).unwrap();
        let b0 = VertexId(1);
        let p = EdgePath::from_steps(&lat, b0, &[EdgeKind::K1, EdgeKind::K2, EdgeKind::K1], true)
            .unwrap();
        assert_eq!(p.crossing_edges(&BTreeSet::new()), 0);
        assert_eq!(p.crossing_edges(&BTreeSet::from([p.edges()[0]])), 1);
        let two: BTreeSet<EdgeId> = p.edges()[..2].iter().copied().collect();
        assert_eq!(p.crossing_edges(&two), 2);
    }

    #[test]
    fn loop_and_path_specs_resolve() {
        let lat = HoneycombLattice::patch(2, 1).unwrap();
        let hex = Loop::hexagon(&lat, PlaquetteId(0)).unwrap();
        // Explicit interior.
        let spec = LoopSpec {
            edges: hex.edges().iter().map(|e| e.0).collect(),
            interior: Some(InteriorSpec::default()),
        };
        assert_eq!(spec.resolve(&lat).unwrap(), hex);
        // Flood-filled interior on a patch.
        let spec = LoopSpec {
            edges: hex.edges().iter().map(|e| e.0).collect(),
            interior: None,
        };
        assert_eq!(spec.resolve(&lat).unwrap(), hex);

        let torus = HoneycombLattice::torus(2, 2).unwrap();
        let path = PathSpec {
            start: 1,
            steps: vec![EdgeKind::K1, EdgeKind::K3],
        };
        let resolved = path.resolve(&torus).unwrap();
        assert_eq!(resolved.len(), 2);
        let json = serde_json::to_string(&path).unwrap();
        assert_eq!(json, r#"{"start":1,"steps":["k1","k3"]}"#);
    }

    #[test]
    fn first_simple_path_search() {
        let lat = HoneycombLattice::torus(2, 2).unwrap();
        let p = EdgePath::first_simple(&lat, 4).unwrap();
        assert_eq!(p.len(), 4);
        // The 1×1 torus has only two vertices: no simple 4-walk exists.
        let tiny = HoneycombLattice::torus(1, 1).unwrap();
        assert!(EdgePath::first_simple(&tiny, 4).is_err());
    }

    #[test]
    fn lattice_spec_round_trip() {
        let spec = LatticeSpec::Torus { cells: [2, 2] };
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"torus","cells":[2,2]}"#);
        let back: LatticeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let patch: LatticeSpec = serde_json::from_str(r#"{"kind":"patch","size":[3,2]}"#).unwrap();
        assert_eq!(patch, LatticeSpec::Patch { size: [3, 2] });
    }

    #[test]
    fn site_map_is_bijective() {
        let lat = HoneycombLattice::torus(2, 3).unwrap();
        let mut seen = BTreeSet::new();
        for e in lat.edge_ids() {
            assert!(seen.insert(lat.edge_site(e)));
        }
        for v in lat.vertex_ids() {
            assert!(seen.insert(lat.vertex_site(v)));
        }
        assert_eq!(seen.len(), lat.n_sites());
        assert_eq!(
            seen.iter().map(|s| s.index()).max().unwrap(),
            lat.n_sites() - 1
        );
    }
}
