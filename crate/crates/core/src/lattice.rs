//! Oriented square lattices.
//!
//! Vertices sit on a `rows × cols` grid, row 0 at the bottom. Horizontal edges
//! point rightward (+col) and vertical edges point upward (+row). Spins live
//! on edges.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlaquetteId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "open" => Ok(Boundary::Open),
            "periodic" => Ok(Boundary::Periodic),
            _ => Err(Error::Parse(format!("unknown boundary `{s}`"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

/// How an edge meets a vertex: `Head` when the edge orientation points into it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Attachment {
    Head,
    Tail,
}

/// Traversal direction of an edge relative to its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    With,
    Against,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::With => Direction::Against,
            Direction::Against => Direction::With,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rows: usize,
    cols: usize,
    boundary: Boundary,
    edges: Vec<Edge>,
    incidence: Vec<Vec<(EdgeId, Attachment)>>,
    plaquettes: Vec<[(EdgeId, Direction); 4]>,
}

impl Lattice {
    /// Builds a grid with the canonical right/up orientation.
    pub fn grid(rows: usize, cols: usize, boundary: Boundary) -> Result<Self, Error> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidDimension { rows, cols });
        }
        let vid = |r: usize, c: usize| VertexId(r * cols + c);
        let periodic = boundary == Boundary::Periodic;
        let h_cols = if periodic { cols } else { cols - 1 };
        let v_rows = if periodic { rows } else { rows - 1 };

        let mut edges = Vec::with_capacity(rows * h_cols + v_rows * cols);
        for r in 0..rows {
            for c in 0..h_cols {
                edges.push(Edge { tail: vid(r, c), head: vid(r, (c + 1) % cols) });
            }
        }
        let v_offset = edges.len();
        for r in 0..v_rows {
            for c in 0..cols {
                edges.push(Edge { tail: vid(r, c), head: vid((r + 1) % rows, c) });
            }
        }
        let h_edge = |r: usize, c: usize| EdgeId(r * h_cols + c);
        let v_edge = |r: usize, c: usize| EdgeId(v_offset + r * cols + c);

        let mut incidence = vec![Vec::with_capacity(4); rows * cols];
        for (i, e) in edges.iter().enumerate() {
            incidence[e.tail.0].push((EdgeId(i), Attachment::Tail));
            incidence[e.head.0].push((EdgeId(i), Attachment::Head));
        }
        for list in &mut incidence {
            list.sort_by_key(|&(e, _)| e);
        }

        let mut plaquettes = Vec::new();
        let (p_rows, p_cols) = if periodic { (rows, cols) } else { (rows - 1, cols - 1) };
        for r in 0..p_rows {
            for c in 0..p_cols {
                plaquettes.push([
                    (h_edge(r, c), Direction::With),
                    (v_edge(r, (c + 1) % cols), Direction::With),
                    (h_edge((r + 1) % rows, c), Direction::Against),
                    (v_edge(r, c), Direction::Against),
                ]);
            }
        }

        Ok(Self { rows, cols, boundary, edges, incidence, plaquettes })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn num_vertices(&self) -> usize {
        self.rows * self.cols
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_plaquettes(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.num_vertices()).map(VertexId)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.num_edges()).map(EdgeId)
    }

    pub fn plaquette_ids(&self) -> impl Iterator<Item = PlaquetteId> {
        (0..self.num_plaquettes()).map(PlaquetteId)
    }

    /// Vertex at grid position `(row, col)`.
    pub fn vertex(&self, row: usize, col: usize) -> Result<VertexId, Error> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::OutOfRange { kind: "vertex", index: row * self.cols + col, len: self.num_vertices() });
        }
        Ok(VertexId(row * self.cols + col))
    }

    pub fn coords(&self, v: VertexId) -> (usize, usize) {
        (v.0 / self.cols, v.0 % self.cols)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), Error> {
        if v.0 < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::OutOfRange { kind: "vertex", index: v.0, len: self.num_vertices() })
        }
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<(), Error> {
        if e.0 < self.num_edges() {
            Ok(())
        } else {
            Err(Error::OutOfRange { kind: "edge", index: e.0, len: self.num_edges() })
        }
    }

    pub fn check_plaquette(&self, p: PlaquetteId) -> Result<(), Error> {
        if p.0 < self.num_plaquettes() {
            Ok(())
        } else {
            Err(Error::OutOfRange { kind: "plaquette", index: p.0, len: self.num_plaquettes() })
        }
    }

    pub fn edge(&self, e: EdgeId) -> Result<Edge, Error> {
        self.check_edge(e)?;
        Ok(self.edges[e.0])
    }

    /// Edges meeting `v`, each tagged with how it attaches.
    pub fn incident_edges(&self, v: VertexId) -> Result<&[(EdgeId, Attachment)], Error> {
        self.check_vertex(v)?;
        Ok(&self.incidence[v.0])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v.0].len()
    }

    /// Boundary of a plaquette in counterclockwise order from its bottom-left vertex.
    pub fn plaquette_edges(&self, p: PlaquetteId) -> Result<&[(EdgeId, Direction); 4], Error> {
        self.check_plaquette(p)?;
        Ok(&self.plaquettes[p.0])
    }

    /// Manhattan distance on the grid, ignoring wrap-around.
    pub fn distance(&self, a: VertexId, b: VertexId) -> usize {
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        ra.abs_diff(rb) + ca.abs_diff(cb)
    }

    /// An edge joining grid-adjacent vertices, preferring the non-wrapping one.
    fn edge_between(&self, a: VertexId, b: VertexId) -> Option<(EdgeId, Direction)> {
        let (ra, ca) = self.coords(a);
        let (rb, cb) = self.coords(b);
        let adjacent = ra.abs_diff(rb) + ca.abs_diff(cb) == 1;
        let candidates = self.incidence[a.0].iter().filter_map(|&(e, att)| {
            let edge = self.edges[e.0];
            match att {
                Attachment::Tail if edge.head == b => Some((e, Direction::With)),
                Attachment::Head if edge.tail == b => Some((e, Direction::Against)),
                _ => None,
            }
        });
        let mut fallback = None;
        for (e, dir) in candidates {
            let edge = self.edges[e.0];
            let (rt, ct) = self.coords(edge.tail);
            let (rh, ch) = self.coords(edge.head);
            let wraps = rt.abs_diff(rh) + ct.abs_diff(ch) != 1;
            if adjacent && !wraps || !adjacent {
                return Some((e, dir));
            }
            fallback.get_or_insert((e, dir));
        }
        fallback
    }

    /// L-shaped path from `from` to `to`: along the row first, then along the column.
    pub fn path_between(&self, from: VertexId, to: VertexId) -> Result<Path, Error> {
        self.check_vertex(from)?;
        self.check_vertex(to)?;
        if from == to {
            return Err(Error::SameVertex(from.0));
        }
        let (r0, c0) = self.coords(from);
        let (r1, c1) = self.coords(to);
        let mut walk = vec![from];
        let mut c = c0;
        while c != c1 {
            c = if c1 > c { c + 1 } else { c - 1 };
            walk.push(VertexId(r0 * self.cols + c));
        }
        let mut r = r0;
        while r != r1 {
            r = if r1 > r { r + 1 } else { r - 1 };
            walk.push(VertexId(r * self.cols + c1));
        }
        Path::through(self, &walk)
    }
}

/// An ordered simple edge walk between two vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    start: VertexId,
    end: VertexId,
    steps: Vec<(EdgeId, Direction)>,
}

impl Path {
    /// Path visiting the given grid-adjacent vertices in order.
    pub fn through(lat: &Lattice, vertices: &[VertexId]) -> Result<Self, Error> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        for &v in vertices {
            lat.check_vertex(v)?;
        }
        let mut steps = Vec::with_capacity(vertices.len() - 1);
        for pair in vertices.windows(2) {
            let step = lat
                .edge_between(pair[0], pair[1])
                .ok_or_else(|| Error::InvalidPath(format!("vertices {} and {} are not adjacent", pair[0].0, pair[1].0)))?;
            steps.push(step);
        }
        Self::from_steps(lat, vertices[0], steps)
    }

    /// Validates an explicit step list starting at `start`.
    pub fn from_steps(lat: &Lattice, start: VertexId, steps: Vec<(EdgeId, Direction)>) -> Result<Self, Error> {
        lat.check_vertex(start)?;
        if steps.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        let mut at = start;
        let mut seen = rustc_hash::FxHashSet::default();
        for &(e, dir) in &steps {
            let edge = lat.edge(e)?;
            if !seen.insert(e) {
                return Err(Error::InvalidPath(format!("edge {} repeated", e.0)));
            }
            at = match dir {
                Direction::With if edge.tail == at => edge.head,
                Direction::Against if edge.head == at => edge.tail,
                _ => return Err(Error::InvalidPath(format!("edge {} does not continue from vertex {}", e.0, at.0))),
            };
        }
        Ok(Self { start, end: at, steps })
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn steps(&self) -> &[(EdgeId, Direction)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().map(|&(e, _)| e)
    }

    pub fn reversed(&self) -> Self {
        Self {
            start: self.end,
            end: self.start,
            steps: self.steps.iter().rev().map(|&(e, d)| (e, d.flipped())).collect(),
        }
    }
}
