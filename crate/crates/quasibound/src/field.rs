//! Nodal fields over a mesh: piecewise-linear functions identified with one
//! value per vertex.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::fmath::{fmax, sqrt};
use crate::mesh::Mesh;

/// A piecewise-linear function given by one value per mesh vertex.
///
/// Fields are immutable after construction and share their mesh through an
/// `Arc`, so they are cheap to clone and safe to use from several threads.
#[derive(Debug, Clone)]
pub struct Field {
    mesh: Arc<Mesh>,
    values: Vec<f64>,
}

impl Field {
    pub fn new(mesh: Arc<Mesh>, values: Vec<f64>) -> Field {
        assert_eq!(
            values.len(),
            mesh.vertex_count(),
            "one nodal value per vertex required"
        );
        Field { mesh, values }
    }

    pub fn zeros(mesh: Arc<Mesh>) -> Field {
        let n = mesh.vertex_count();
        Field {
            mesh,
            values: alloc::vec![0.0; n],
        }
    }

    /// Interpolates a function of the vertex coordinates.
    pub fn from_fn(mesh: Arc<Mesh>, f: impl Fn(&[f64; 2]) -> f64) -> Field {
        let values = mesh.vertices.iter().map(f).collect();
        Field { mesh, values }
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest nodal value of `|u|`.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .fold(0.0, |m, &v| fmax(m, crate::fmath::abs(v)))
    }

    /// Largest nodal value (not the absolute value).
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::NEG_INFINITY, |m, &v| fmax(m, v))
    }

    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::INFINITY, |m, &v| crate::fmath::fmin(m, v))
    }

    /// Checks that two fields live on structurally identical meshes.
    pub fn same_mesh(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) || self.mesh.domain == other.mesh.domain
    }

    /// Nodal values restricted to the boundary, paired with the facet
    /// measures needed for boundary quadrature.
    pub fn trace_restrict(&self) -> TraceField {
        let mesh = &self.mesh;
        let mut seen = alloc::vec![false; mesh.vertex_count()];
        let mut vertices = Vec::new();
        let mut values = Vec::new();
        let mut facets = Vec::new();
        for f in &mesh.boundary {
            for k in 0..f.nnodes {
                let v = f.nodes[k];
                if !seen[v] {
                    seen[v] = true;
                    vertices.push(v);
                    values.push(self.values[v]);
                }
            }
            facets.push((f.nodes, f.measure));
        }
        TraceField {
            vertices,
            values,
            facets,
        }
    }
}

/// Restriction of a field to the boundary: the boundary vertices in facet
/// traversal order, their values, and per-facet node pairs with measures.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceField {
    pub vertices: Vec<usize>,
    pub values: Vec<f64>,
    pub facets: Vec<([usize; 2], f64)>,
}

/// L2 distance between a field and a smooth function, measured with the
/// higher-order error quadrature.
pub fn l2_error(field: &Field, exact: impl Fn(&[f64; 2]) -> f64) -> f64 {
    let mesh = field.mesh();
    let mut sum = 0.0;
    for ci in 0..mesh.cells.len() {
        let g = mesh.cell_geometry(ci);
        let (quad, nq) = mesh.cell_error_quadrature(ci);
        for qp in &quad[..nq] {
            let mut uh = 0.0;
            for k in 0..g.nnodes {
                uh += field.values()[g.nodes[k]] * qp.basis[k];
            }
            let d = uh - exact(&qp.x);
            sum += qp.weight * d * d;
        }
    }
    sqrt(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Mesh;

    #[test]
    fn trace_restrict_constant_field() {
        let mesh = Arc::new(Mesh::rectangle(0.0, 1.0, 0.0, 1.0, 3, 3));
        let field = Field::from_fn(mesh, |_| 7.5);
        let trace = field.trace_restrict();
        assert!(trace.values.iter().all(|&v| v == 7.5));
        assert_eq!(trace.vertices.len(), 12);
    }

    #[test]
    fn trace_restrict_interval_endpoints() {
        let mesh = Arc::new(Mesh::interval(0.0, 1.0, 4));
        let field = Field::from_fn(mesh, |x| x[0] + 1.0);
        let trace = field.trace_restrict();
        assert_eq!(trace.vertices, alloc::vec![0, 4]);
        assert_eq!(trace.values, alloc::vec![1.0, 2.0]);
        assert!(trace.facets.iter().all(|&(_, m)| m == 1.0));
    }

    #[test]
    fn trace_restrict_linear_field_is_exact() {
        let mesh = Arc::new(Mesh::rectangle(0.0, 1.0, 0.0, 1.0, 2, 2));
        let field = Field::from_fn(mesh.clone(), |x| 3.0 * x[0] - 2.0 * x[1]);
        let trace = field.trace_restrict();
        for (v, val) in trace.vertices.iter().zip(&trace.values) {
            let x = mesh.vertices[*v];
            assert_eq!(*val, 3.0 * x[0] - 2.0 * x[1]);
        }
    }

    #[test]
    fn l2_error_of_interpolant_is_small() {
        let mesh = Arc::new(Mesh::interval(0.0, 1.0, 64));
        let f = |x: &[f64; 2]| x[0] * (1.0 - x[0]);
        let field = Field::from_fn(mesh, f);
        // interpolation error of a smooth function is O(h^2)
        let err = l2_error(&field, f);
        assert!(err < 1e-3, "err = {err}");
        assert!(err > 0.0);
    }
}
