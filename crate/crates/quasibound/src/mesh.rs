//! Conforming simplicial meshes of intervals and axis-aligned rectangles,
//! with piecewise-linear basis data and quadrature of degree at least two on
//! cells and boundary facets.

use alloc::vec::Vec;

use crate::fmath::{abs, sqrt};

/// Descriptor of the supported computational domains.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    Interval {
        start: f64,
        end: f64,
        cells: usize,
    },
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
        nx: usize,
        ny: usize,
    },
}

impl Domain {
    pub fn dimension(&self) -> usize {
        match self {
            Domain::Interval { .. } => 1,
            Domain::Rectangle { .. } => 2,
        }
    }
}

/// A mesh cell: a segment in 1D, a triangle in 2D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Segment([usize; 2]),
    Triangle([usize; 3]),
}

/// A boundary facet: a single vertex in 1D (point measure 1), an edge in 2D
/// (surface measure = length). The normal is the outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Facet {
    pub nodes: [usize; 2],
    pub nnodes: usize,
    pub normal: [f64; 2],
    pub measure: f64,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub domain: Domain,
    pub vertices: Vec<[f64; 2]>,
    pub cells: Vec<Cell>,
    pub boundary: Vec<Facet>,
    boundary_vertex: Vec<bool>,
    interior_measure: f64,
    boundary_measure: f64,
    bandwidth: usize,
}

/// One quadrature point on a cell with the P1 basis values there.
#[derive(Debug, Clone, Copy)]
pub struct CellQuadPoint {
    pub x: [f64; 2],
    pub weight: f64,
    pub basis: [f64; 3],
}

/// Per-cell geometry: node ids, constant P1 gradients, measure and the
/// degree-2 quadrature rule (2-point Gauss on segments, edge midpoints on
/// triangles).
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry {
    pub nodes: [usize; 3],
    pub nnodes: usize,
    pub grads: [[f64; 2]; 3],
    pub measure: f64,
    pub quad: [CellQuadPoint; 3],
    pub nquad: usize,
}

/// One quadrature point on a boundary facet.
#[derive(Debug, Clone, Copy)]
pub struct FacetQuadPoint {
    pub x: [f64; 2],
    pub weight: f64,
    pub basis: [f64; 2],
}

#[derive(Debug, Clone, Copy)]
pub struct FacetGeometry {
    pub nodes: [usize; 2],
    pub nnodes: usize,
    pub normal: [f64; 2],
    pub measure: f64,
    pub quad: [FacetQuadPoint; 2],
    pub nquad: usize,
}

impl Mesh {
    /// Uniform mesh of the interval `[start, end]` with `cells` segments.
    pub fn interval(start: f64, end: f64, cells: usize) -> Mesh {
        assert!(cells >= 1, "need at least one cell");
        assert!(end > start, "empty interval");
        let h = (end - start) / cells as f64;
        let vertices: Vec<[f64; 2]> = (0..=cells).map(|i| [start + i as f64 * h, 0.0]).collect();
        let cell_list: Vec<Cell> = (0..cells).map(|i| Cell::Segment([i, i + 1])).collect();
        let boundary = alloc::vec![
            Facet {
                nodes: [0, 0],
                nnodes: 1,
                normal: [-1.0, 0.0],
                measure: 1.0,
            },
            Facet {
                nodes: [cells, cells],
                nnodes: 1,
                normal: [1.0, 0.0],
                measure: 1.0,
            },
        ];
        Mesh::build(
            Domain::Interval {
                start,
                end,
                cells,
            },
            vertices,
            cell_list,
            boundary,
        )
    }

    /// Uniform triangulation of the rectangle `[x0, x1] x [y0, y1]` with
    /// `nx * ny` squares, each split into two triangles.
    pub fn rectangle(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Mesh {
        assert!(nx >= 1 && ny >= 1, "need at least one cell per direction");
        assert!(x1 > x0 && y1 > y0, "empty rectangle");
        let hx = (x1 - x0) / nx as f64;
        let hy = (y1 - y0) / ny as f64;
        let vid = |ix: usize, iy: usize| iy * (nx + 1) + ix;
        let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
        for iy in 0..=ny {
            for ix in 0..=nx {
                vertices.push([x0 + ix as f64 * hx, y0 + iy as f64 * hy]);
            }
        }
        let mut cells = Vec::with_capacity(2 * nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let (v00, v10) = (vid(ix, iy), vid(ix + 1, iy));
                let (v01, v11) = (vid(ix, iy + 1), vid(ix + 1, iy + 1));
                cells.push(Cell::Triangle([v00, v10, v11]));
                cells.push(Cell::Triangle([v00, v11, v01]));
            }
        }
        let mut boundary = Vec::with_capacity(2 * (nx + ny));
        for ix in 0..nx {
            boundary.push(edge_facet(vid(ix, 0), vid(ix + 1, 0), [0.0, -1.0], hx));
            boundary.push(edge_facet(vid(ix, ny), vid(ix + 1, ny), [0.0, 1.0], hx));
        }
        for iy in 0..ny {
            boundary.push(edge_facet(vid(0, iy), vid(0, iy + 1), [-1.0, 0.0], hy));
            boundary.push(edge_facet(vid(nx, iy), vid(nx, iy + 1), [1.0, 0.0], hy));
        }
        Mesh::build(
            Domain::Rectangle {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
            },
            vertices,
            cells,
            boundary,
        )
    }

    /// Builds the mesh described by a domain descriptor.
    pub fn from_domain(domain: &Domain) -> Mesh {
        match *domain {
            Domain::Interval { start, end, cells } => Mesh::interval(start, end, cells),
            Domain::Rectangle {
                x0,
                x1,
                y0,
                y1,
                nx,
                ny,
            } => Mesh::rectangle(x0, x1, y0, y1, nx, ny),
        }
    }

    fn build(domain: Domain, vertices: Vec<[f64; 2]>, cells: Vec<Cell>, boundary: Vec<Facet>) -> Mesh {
        let mut mesh = Mesh {
            domain,
            vertices,
            cells,
            boundary,
            boundary_vertex: Vec::new(),
            interior_measure: 0.0,
            boundary_measure: 0.0,
            bandwidth: 1,
        };
        let mut flags = alloc::vec![false; mesh.vertices.len()];
        for f in &mesh.boundary {
            for k in 0..f.nnodes {
                flags[f.nodes[k]] = true;
            }
            mesh.boundary_measure += f.measure;
        }
        mesh.boundary_vertex = flags;
        let mut bw = 1usize;
        for i in 0..mesh.cells.len() {
            let g = mesh.cell_geometry(i);
            mesh.interior_measure += g.measure;
            for a in 0..g.nnodes {
                for b in 0..g.nnodes {
                    bw = bw.max(g.nodes[a].abs_diff(g.nodes[b]));
                }
            }
        }
        mesh.bandwidth = bw;
        mesh
    }

    pub fn dimension(&self) -> usize {
        self.domain.dimension()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Total measure of the domain (length or area).
    pub fn interior_measure(&self) -> f64 {
        self.interior_measure
    }

    /// Total surface measure of the boundary; in 1D each endpoint carries a
    /// unit point measure.
    pub fn boundary_measure(&self) -> f64 {
        self.boundary_measure
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    /// Maximal node index distance within any cell; used for banded storage.
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn cell_geometry(&self, idx: usize) -> CellGeometry {
        match self.cells[idx] {
            Cell::Segment([a, b]) => {
                let xa = self.vertices[a][0];
                let xb = self.vertices[b][0];
                let h = xb - xa;
                let inv = 1.0 / h;
                let mut quad = [CellQuadPoint {
                    x: [0.0; 2],
                    weight: 0.0,
                    basis: [0.0; 3],
                }; 3];
                for (i, &t) in GAUSS2.iter().enumerate() {
                    quad[i] = CellQuadPoint {
                        x: [xa + t * h, 0.0],
                        weight: 0.5 * h,
                        basis: [1.0 - t, t, 0.0],
                    };
                }
                CellGeometry {
                    nodes: [a, b, usize::MAX],
                    nnodes: 2,
                    grads: [[-inv, 0.0], [inv, 0.0], [0.0, 0.0]],
                    measure: h,
                    quad,
                    nquad: 2,
                }
            }
            Cell::Triangle([a, b, c]) => {
                let pa = self.vertices[a];
                let pb = self.vertices[b];
                let pc = self.vertices[c];
                let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]);
                let area = 0.5 * abs(det);
                // gradients of the barycentric basis functions
                let grads = [
                    [(pb[1] - pc[1]) / det, (pc[0] - pb[0]) / det],
                    [(pc[1] - pa[1]) / det, (pa[0] - pc[0]) / det],
                    [(pa[1] - pb[1]) / det, (pb[0] - pa[0]) / det],
                ];
                let mid = |u: [f64; 2], v: [f64; 2]| [0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1])];
                let w = area / 3.0;
                let quad = [
                    CellQuadPoint {
                        x: mid(pa, pb),
                        weight: w,
                        basis: [0.5, 0.5, 0.0],
                    },
                    CellQuadPoint {
                        x: mid(pb, pc),
                        weight: w,
                        basis: [0.0, 0.5, 0.5],
                    },
                    CellQuadPoint {
                        x: mid(pc, pa),
                        weight: w,
                        basis: [0.5, 0.0, 0.5],
                    },
                ];
                CellGeometry {
                    nodes: [a, b, c],
                    nnodes: 3,
                    grads,
                    measure: area,
                    quad,
                    nquad: 3,
                }
            }
        }
    }

    /// Higher-order quadrature on a cell (degree 5 on segments, degree 4 on
    /// triangles); used to measure errors against smooth exact solutions.
    pub fn cell_error_quadrature(&self, idx: usize) -> ([CellQuadPoint; 6], usize) {
        let mut out = [CellQuadPoint {
            x: [0.0; 2],
            weight: 0.0,
            basis: [0.0; 3],
        }; 6];
        match self.cells[idx] {
            Cell::Segment([a, b]) => {
                let xa = self.vertices[a][0];
                let h = self.vertices[b][0] - xa;
                let r = sqrt(0.6) / 2.0;
                let pts = [0.5 - r, 0.5, 0.5 + r];
                let wts = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];
                for i in 0..3 {
                    let t = pts[i];
                    out[i] = CellQuadPoint {
                        x: [xa + t * h, 0.0],
                        weight: wts[i] * h,
                        basis: [1.0 - t, t, 0.0],
                    };
                }
                (out, 3)
            }
            Cell::Triangle([a, b, c]) => {
                let pa = self.vertices[a];
                let pb = self.vertices[b];
                let pc = self.vertices[c];
                let det = (pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]);
                let area = 0.5 * abs(det);
                // degree-4 rule: two symmetric orbits of three points
                const A1: f64 = 0.816_847_572_980_459;
                const B1: f64 = 0.091_576_213_509_771;
                const W1: f64 = 0.109_951_743_655_322;
                const A2: f64 = 0.108_103_018_168_070;
                const B2: f64 = 0.445_948_490_915_965;
                const W2: f64 = 0.223_381_589_678_011;
                let orbits = [
                    ([A1, B1, B1], W1),
                    ([B1, A1, B1], W1),
                    ([B1, B1, A1], W1),
                    ([A2, B2, B2], W2),
                    ([B2, A2, B2], W2),
                    ([B2, B2, A2], W2),
                ];
                for (i, (lambda, w)) in orbits.iter().enumerate() {
                    let x = [
                        lambda[0] * pa[0] + lambda[1] * pb[0] + lambda[2] * pc[0],
                        lambda[0] * pa[1] + lambda[1] * pb[1] + lambda[2] * pc[1],
                    ];
                    out[i] = CellQuadPoint {
                        x,
                        weight: w * area,
                        basis: *lambda,
                    };
                }
                (out, 6)
            }
        }
    }

    pub fn facet_geometry(&self, idx: usize) -> FacetGeometry {
        let f = self.boundary[idx];
        let mut quad = [FacetQuadPoint {
            x: [0.0; 2],
            weight: 0.0,
            basis: [0.0; 2],
        }; 2];
        if f.nnodes == 1 {
            quad[0] = FacetQuadPoint {
                x: self.vertices[f.nodes[0]],
                weight: f.measure,
                basis: [1.0, 0.0],
            };
            FacetGeometry {
                nodes: f.nodes,
                nnodes: 1,
                normal: f.normal,
                measure: f.measure,
                quad,
                nquad: 1,
            }
        } else {
            let pa = self.vertices[f.nodes[0]];
            let pb = self.vertices[f.nodes[1]];
            for (i, &t) in GAUSS2.iter().enumerate() {
                quad[i] = FacetQuadPoint {
                    x: [
                        pa[0] + t * (pb[0] - pa[0]),
                        pa[1] + t * (pb[1] - pa[1]),
                    ],
                    weight: 0.5 * f.measure,
                    basis: [1.0 - t, t],
                };
            }
            FacetGeometry {
                nodes: f.nodes,
                nnodes: 2,
                normal: f.normal,
                measure: f.measure,
                quad,
                nquad: 2,
            }
        }
    }
}

fn edge_facet(a: usize, b: usize, normal: [f64; 2], length: f64) -> Facet {
    Facet {
        nodes: [a, b],
        nnodes: 2,
        normal,
        measure: length,
    }
}

/// 2-point Gauss nodes on the unit interval.
const GAUSS2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];
