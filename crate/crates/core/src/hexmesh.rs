//! Structured hexahedral box meshes and trilinear cell geometry.
//!
//! Local vertex numbering follows the usual reference-cube convention
//! (one-based in the docs, zero-based in code):
//!
//! ```text
//!   1 = (0,0,0)  2 = (1,0,0)  3 = (1,1,0)  4 = (0,1,0)
//!   5 = (0,0,1)  6 = (1,0,1)  7 = (1,1,1)  8 = (0,1,1)
//! ```
//!
//! Each face is stored as a vertex loop whose right-hand normal points out
//! of the cell.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Cartesian direction, also used to name a face family: the x family holds
/// the two faces normal to the ξ axis of the reference cube, and so on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    X,
    Y,
    Z,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::X, Direction::Y, Direction::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::X => "x",
            Direction::Y => "y",
            Direction::Z => "z",
        }
    }
}

/// The six faces of a hexahedron.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// Loop 4-3-2-1, ζ = 0.
    ZetaMin,
    /// Loop 5-6-7-8, ζ = 1.
    ZetaMax,
    /// Loop 3-4-8-7, η = 1.
    EtaMax,
    /// Loop 1-2-6-5, η = 0.
    EtaMin,
    /// Loop 4-1-5-8, ξ = 0.
    XiMin,
    /// Loop 2-3-7-6, ξ = 1.
    XiMax,
}

/// Outward vertex loops, zero-based, in `Face` order.
pub const FACE_LOOPS: [[usize; 4]; 6] = [
    [3, 2, 1, 0],
    [4, 5, 6, 7],
    [2, 3, 7, 6],
    [0, 1, 5, 4],
    [3, 0, 4, 7],
    [1, 2, 6, 5],
];

impl Face {
    pub const ALL: [Face; 6] = [
        Face::ZetaMin,
        Face::ZetaMax,
        Face::EtaMax,
        Face::EtaMin,
        Face::XiMin,
        Face::XiMax,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Face {
        Face::ALL[i]
    }

    pub fn vertex_loop(self) -> [usize; 4] {
        FACE_LOOPS[self.index()]
    }

    /// Face family (the reference axis the face is normal to).
    pub fn direction(self) -> Direction {
        match self {
            Face::XiMin | Face::XiMax => Direction::X,
            Face::EtaMin | Face::EtaMax => Direction::Y,
            Face::ZetaMin | Face::ZetaMax => Direction::Z,
        }
    }

    /// Whether the face lies on the positive side of its axis.
    pub fn is_max(self) -> bool {
        matches!(self, Face::XiMax | Face::EtaMax | Face::ZetaMax)
    }

    pub fn opposite(self) -> Face {
        match self {
            Face::ZetaMin => Face::ZetaMax,
            Face::ZetaMax => Face::ZetaMin,
            Face::EtaMin => Face::EtaMax,
            Face::EtaMax => Face::EtaMin,
            Face::XiMin => Face::XiMax,
            Face::XiMax => Face::XiMin,
        }
    }

    /// Conventional one-based label, e.g. "2376".
    pub fn label(self) -> &'static str {
        match self {
            Face::ZetaMin => "4321",
            Face::ZetaMax => "5678",
            Face::EtaMax => "3487",
            Face::EtaMin => "1265",
            Face::XiMin => "4158",
            Face::XiMax => "2376",
        }
    }
}

/// Gather the four vertices of a face from a cell's eight.
#[inline]
pub fn face_vertices(r: &[Vec3; 8], face: Face) -> [Vec3; 4] {
    let l = face.vertex_loop();
    [r[l[0]], r[l[1]], r[l[2]], r[l[3]]]
}

/// Contribution of one outward loop (i, j, k, l) to the hexahedron volume.
#[inline]
pub fn face_volume_term(q: &[Vec3; 4]) -> f64 {
    let [ri, rj, rk, rl] = *q;
    (rj + rk).dot(&(ri + rl).cross(&(ri + rj))) / 12.0
}

/// Exact volume of the trilinear hexahedron.
pub fn hex_volume(r: &[Vec3; 8]) -> f64 {
    // the sum is translation invariant; working relative to a corner keeps
    // cancellation proportional to the cell size, not its distance from 0
    let o = r[0];
    let local = r.map(|p| p - o);
    Face::ALL
        .iter()
        .map(|&f| face_volume_term(&face_vertices(&local, f)))
        .sum()
}

/// Integral of the outward normal over a bilinear face: half the cross
/// product of its diagonals.
#[inline]
pub fn quad_area_vector(q: &[Vec3; 4]) -> Vec3 {
    0.5 * (q[2] - q[0]).cross(&(q[3] - q[1]))
}

pub fn face_area_vectors(r: &[Vec3; 8]) -> [Vec3; 6] {
    Face::ALL.map(|f| quad_area_vector(&face_vertices(r, f)))
}

/// Jacobian matrix of the trilinear map at reference point (ξ, η, ζ).
pub fn jacobian(r: &[Vec3; 8], xi: f64, eta: f64, zeta: f64) -> Matrix3<f64> {
    let (a, b, c) = (xi, eta, zeta);
    let (ma, mb, mc) = (1.0 - a, 1.0 - b, 1.0 - c);
    let d_xi = mb * mc * (r[1] - r[0]) + b * mc * (r[2] - r[3]) + mb * c * (r[5] - r[4])
        + b * c * (r[6] - r[7]);
    let d_eta = ma * mc * (r[3] - r[0]) + a * mc * (r[2] - r[1]) + ma * c * (r[7] - r[4])
        + a * c * (r[6] - r[5]);
    let d_zeta = ma * mb * (r[4] - r[0]) + a * mb * (r[5] - r[1]) + a * b * (r[6] - r[2])
        + ma * b * (r[7] - r[3]);
    Matrix3::from_columns(&[d_xi, d_eta, d_zeta])
}

/// det J at the eight reference-cube corners, in local vertex order.
pub fn corner_jacobians(r: &[Vec3; 8]) -> [f64; 8] {
    const CORNERS: [(f64, f64, f64); 8] = [
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (1.0, 1.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 0.0, 1.0),
        (1.0, 1.0, 1.0),
        (0.0, 1.0, 1.0),
    ];
    CORNERS.map(|(a, b, c)| jacobian(r, a, b, c).determinant())
}

/// Geometry of one cell in one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry {
    pub volume: f64,
    pub face_area_vectors: [Vec3; 6],
    pub corner_jacobians: [f64; 8],
}

impl CellGeometry {
    pub fn new(r: &[Vec3; 8]) -> Self {
        CellGeometry {
            volume: hex_volume(r),
            face_area_vectors: face_area_vectors(r),
            corner_jacobians: corner_jacobians(r),
        }
    }

    /// Positive volume and positive Jacobian at every corner.
    pub fn is_valid(&self) -> bool {
        self.volume > 0.0 && self.corner_jacobians.iter().all(|&j| j > 0.0)
    }
}

/// Uniform structured box mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct HexMesh {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub lengths: [f64; 3],
    pub vertices: Vec<Vec3>,
    pub cells: Vec<[usize; 8]>,
}

/// Build a uniform mesh spanning [0,Lx]×[0,Ly]×[0,Lz].
pub fn build_box_mesh(nx: usize, ny: usize, nz: usize, lx: f64, ly: f64, lz: f64) -> Result<HexMesh> {
    if nx == 0 || ny == 0 || nz == 0 {
        return Err(Error::InvalidMesh(format!(
            "cell counts must be positive, got {nx}x{ny}x{nz}"
        )));
    }
    for (name, l) in [("Lx", lx), ("Ly", ly), ("Lz", lz)] {
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::InvalidMesh(format!("{name} must be positive and finite, got {l}")));
        }
    }
    let (dx, dy, dz) = (lx / nx as f64, ly / ny as f64, lz / nz as f64);
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1) * (nz + 1));
    for k in 0..=nz {
        for j in 0..=ny {
            for i in 0..=nx {
                vertices.push(Vec3::new(i as f64 * dx, j as f64 * dy, k as f64 * dz));
            }
        }
    }
    let vid = |i: usize, j: usize, k: usize| i + (nx + 1) * (j + (ny + 1) * k);
    let mut cells = Vec::with_capacity(nx * ny * nz);
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                cells.push([
                    vid(i, j, k),
                    vid(i + 1, j, k),
                    vid(i + 1, j + 1, k),
                    vid(i, j + 1, k),
                    vid(i, j, k + 1),
                    vid(i + 1, j, k + 1),
                    vid(i + 1, j + 1, k + 1),
                    vid(i, j + 1, k + 1),
                ]);
            }
        }
    }
    Ok(HexMesh {
        nx,
        ny,
        nz,
        lengths: [lx, ly, lz],
        vertices,
        cells,
    })
}

impl HexMesh {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn spacing(&self) -> [f64; 3] {
        [
            self.lengths[0] / self.nx as f64,
            self.lengths[1] / self.ny as f64,
            self.lengths[2] / self.nz as f64,
        ]
    }

    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx * (j + self.ny * k)
    }

    pub fn cell_ijk(&self, c: usize) -> (usize, usize, usize) {
        (c % self.nx, (c / self.nx) % self.ny, c / (self.nx * self.ny))
    }

    pub fn vertex_ijk(&self, v: usize) -> (usize, usize, usize) {
        let (sx, sy) = (self.nx + 1, self.ny + 1);
        (v % sx, (v / sx) % sy, v / (sx * sy))
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        let (i, j, k) = self.vertex_ijk(v);
        i == 0 || j == 0 || k == 0 || i == self.nx || j == self.ny || k == self.nz
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.n_vertices())
            .filter(|&v| self.is_boundary_vertex(v))
            .collect()
    }

    /// Cell across `face`, or `None` on the boundary. `steps` walks further
    /// along the same line (1 = direct neighbour).
    pub fn neighbor(&self, c: usize, face: Face, steps: usize) -> Option<usize> {
        let (i, j, k) = self.cell_ijk(c);
        let (pos, n) = match face.direction() {
            Direction::X => (i, self.nx),
            Direction::Y => (j, self.ny),
            Direction::Z => (k, self.nz),
        };
        let target = if face.is_max() {
            pos.checked_add(steps).filter(|&p| p < n)?
        } else {
            pos.checked_sub(steps)?
        };
        Some(match face.direction() {
            Direction::X => self.cell_index(target, j, k),
            Direction::Y => self.cell_index(i, target, k),
            Direction::Z => self.cell_index(i, j, target),
        })
    }

    /// The eight corner positions of cell `c` taken from `positions`.
    #[inline]
    pub fn cell_points(&self, c: usize, positions: &[Vec3]) -> [Vec3; 8] {
        self.cells[c].map(|v| positions[v])
    }

    /// Cells with a nonpositive corner Jacobian or nonpositive volume.
    pub fn detect_degenerate(&self, positions: &[Vec3]) -> Vec<usize> {
        (0..self.n_cells())
            .filter(|&c| !CellGeometry::new(&self.cell_points(c, positions)).is_valid())
            .collect()
    }

    pub fn cell_volumes(&self, positions: &[Vec3]) -> Vec<f64> {
        (0..self.n_cells())
            .map(|c| hex_volume(&self.cell_points(c, positions)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_cube() -> [Vec3; 8] {
        let m = build_box_mesh(1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        m.cell_points(0, &m.vertices)
    }

    #[test]
    fn paper_mesh_counts_and_volumes() {
        let m = build_box_mesh(10, 10, 10, 3.2, 2.8, 2.4).unwrap();
        assert_eq!(m.n_cells(), 1000);
        assert_eq!(m.n_vertices(), 1331);
        for v in m.cell_volumes(&m.vertices) {
            assert_relative_eq!(v, 0.021504, max_relative = 1e-13);
        }
        assert_eq!(m.boundary_vertices().len(), 602);
    }

    #[test]
    fn two_cell_partition() {
        let m = build_box_mesh(2, 1, 1, 2.0, 1.0, 1.0).unwrap();
        let v = m.cell_volumes(&m.vertices);
        assert_eq!(v.len(), 2);
        assert_relative_eq!(v[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(v[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(build_box_mesh(0, 1, 1, 1.0, 1.0, 1.0).is_err());
        assert!(build_box_mesh(1, 1, 1, -1.0, 1.0, 1.0).is_err());
        assert!(build_box_mesh(1, 1, 1, 1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn cube_volume_and_scaling() {
        let r = unit_cube();
        assert_relative_eq!(hex_volume(&r), 1.0, epsilon = 1e-15);
        let r2 = r.map(|p| 2.0 * p);
        assert_relative_eq!(hex_volume(&r2), 8.0, epsilon = 1e-14);
    }

    #[test]
    fn cube_face_vectors_point_outward() {
        let s = face_area_vectors(&unit_cube());
        let expect = [
            Vec3::new(0.0, 0.0, -1.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, -1.0, 0.0),
            Vec3::new(-1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        ];
        for (a, b) in s.iter().zip(expect.iter()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn planar_face_area() {
        // a planar trapezoid in the plane z = 0.3, normal +z
        let q = [
            Vec3::new(0.0, 0.0, 0.3),
            Vec3::new(2.0, 0.0, 0.3),
            Vec3::new(1.5, 1.0, 0.3),
            Vec3::new(0.5, 1.0, 0.3),
        ];
        let s = quad_area_vector(&q);
        assert_relative_eq!(s.z, 1.5, epsilon = 1e-15);
        assert!(s.x.abs() < 1e-15 && s.y.abs() < 1e-15);
    }

    #[test]
    fn face_families() {
        assert_eq!(Face::XiMax.direction(), Direction::X);
        assert_eq!(Face::EtaMin.direction(), Direction::Y);
        assert_eq!(Face::ZetaMin.direction(), Direction::Z);
        for f in Face::ALL {
            assert_eq!(f.opposite().opposite(), f);
            assert_eq!(Face::from_index(f.index()), f);
        }
    }

    #[test]
    fn neighbours_on_structured_lines() {
        let m = build_box_mesh(3, 2, 2, 3.0, 2.0, 2.0).unwrap();
        let c = m.cell_index(1, 0, 1);
        assert_eq!(m.neighbor(c, Face::XiMax, 1), Some(m.cell_index(2, 0, 1)));
        assert_eq!(m.neighbor(c, Face::XiMax, 2), None);
        assert_eq!(m.neighbor(c, Face::XiMin, 1), Some(m.cell_index(0, 0, 1)));
        assert_eq!(m.neighbor(c, Face::EtaMin, 1), None);
        assert_eq!(m.neighbor(c, Face::ZetaMin, 1), Some(m.cell_index(1, 0, 0)));
        assert_eq!(m.neighbor(c, Face::ZetaMax, 1), None);
    }

    #[test]
    fn undeformed_box_is_not_degenerate() {
        let m = build_box_mesh(4, 3, 2, 1.0, 1.0, 1.0).unwrap();
        assert!(m.detect_degenerate(&m.vertices).is_empty());
    }

    #[test]
    fn pushed_vertex_flags_incident_cells() {
        let m = build_box_mesh(3, 3, 3, 3.0, 3.0, 3.0).unwrap();
        // interior vertex (1,1,1) pushed past the far face of its cells
        let v = 1 + 4 * (1 + 4);
        let mut p = m.vertices.clone();
        p[v] += Vec3::new(2.5, 0.0, 0.0);
        let bad = m.detect_degenerate(&p);
        let incident: Vec<usize> = (0..m.n_cells()).filter(|&c| m.cells[c].contains(&v)).collect();
        assert_eq!(incident.len(), 8);
        // the four cells on the +x side of the vertex are now inverted
        for c in incident {
            let (i, _, _) = m.cell_ijk(c);
            if i == 1 {
                assert!(bad.contains(&c), "cell {c} should be flagged");
            }
        }
        assert!(!bad.is_empty());
    }
}
