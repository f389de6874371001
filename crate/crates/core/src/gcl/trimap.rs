//! Closed-form volume rate and face fluxes of the trilinear map.

use crate::hexmesh::{face_vertices, Face, Vec3};

/// The five terms of the face flux: the total-velocity term followed by
/// the vertex terms for `j`, `k`, `l`, `i`. Their sum divided by 12 is the
/// integrated face mesh velocity.
#[inline]
pub fn face_ifmv_terms(q: &[Vec3; 4], u: &[Vec3; 4]) -> [f64; 5] {
    // the face integral is translation invariant; shift to the first vertex
    let o = q[0];
    let [ri, rj, rk, rl] = q.map(|p| p - o);
    let [vi, vj, vk, vl] = *u;
    let (ij, jk, kl, li) = (ri.cross(&rj), rj.cross(&rk), rk.cross(&rl), rl.cross(&ri));
    let (ki, lj) = (rk.cross(&ri), rl.cross(&rj));
    let s_ijkl = ij + jk + kl + li;
    let s_ijk = ij + jk + ki;
    let s_jkl = jk + kl + lj;
    let s_kli = kl + li - ki;
    let s_lij = li + ij - lj;
    [
        (vi + vj + vk + vl).dot(&s_ijkl),
        vj.dot(&s_ijk),
        vk.dot(&s_jkl),
        vl.dot(&s_kli),
        vi.dot(&s_lij),
    ]
}

/// Integrated mesh velocity of one bilinear face with vertex velocities.
#[inline]
pub fn face_ifmv(q: &[Vec3; 4], u: &[Vec3; 4]) -> f64 {
    face_ifmv_terms(q, u).iter().sum::<f64>() / 12.0
}

/// Face fluxes of a whole cell, in `Face::ALL` order.
pub fn ifmv_cell(r: &[Vec3; 8], u: &[Vec3; 8]) -> [f64; 6] {
    Face::ALL.map(|f| face_ifmv(&face_vertices(r, f), &face_vertices(u, f)))
}

/// Exact `dV/dt` by the product rule on each face's volume term.
pub fn dvoldt_trimap(r: &[Vec3; 8], u: &[Vec3; 8]) -> f64 {
    let o = r[0];
    let local = r.map(|p| p - o);
    Face::ALL
        .iter()
        .map(|&f| {
            let [ri, rj, rk, rl] = face_vertices(&local, f);
            let [vi, vj, vk, vl] = face_vertices(u, f);
            let (a, b, c) = (rj + rk, ri + rl, ri + rj);
            let (da, db, dc) = (vj + vk, vi + vl, vi + vj);
            da.dot(&b.cross(&c)) + a.dot(&db.cross(&c)) + a.dot(&b.cross(&dc))
        })
        .sum::<f64>()
        / 12.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexmesh::{build_box_mesh, hex_volume};

    fn cube() -> [Vec3; 8] {
        let m = build_box_mesh(1, 1, 1, 1.0, 1.0, 1.0).unwrap();
        m.cell_points(0, &m.vertices)
    }

    #[test]
    fn zero_velocity() {
        let z = [Vec3::zeros(); 8];
        assert_eq!(ifmv_cell(&cube(), &z), [0.0; 6]);
        assert_eq!(dvoldt_trimap(&cube(), &z), 0.0);
    }

    #[test]
    fn unit_face_sweep() {
        let r = cube();
        // top face moving up at unit speed
        let mut u = [Vec3::zeros(); 8];
        for v in &mut u[4..] {
            *v = Vec3::new(0.0, 0.0, 1.0);
        }
        let g = ifmv_cell(&r, &u);
        assert!((g[Face::ZetaMax.index()] - 1.0).abs() < 1e-15);
        assert!((dvoldt_trimap(&r, &u) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_scaling() {
        let (s, sd) = (1.3, 0.7);
        let r0 = cube().map(|p| p + Vec3::new(0.2, -0.1, 0.4));
        let r = r0.map(|p| s * p);
        let u = r0.map(|p| sd * p);
        let v0 = hex_volume(&r0);
        assert!((dvoldt_trimap(&r, &u) - 3.0 * s * s * sd * v0).abs() < 1e-13);
    }

    #[test]
    fn rigid_motion_keeps_volume() {
        let r = cube().map(|p| p + Vec3::new(0.05 * p.y, 0.1 * p.z * p.x, 0.0));
        let w = Vec3::new(0.3, -0.2, 0.9);
        let c = Vec3::new(0.1, 0.4, -0.3);
        let u = r.map(|p| c + w.cross(&p));
        assert!(dvoldt_trimap(&r, &u).abs() < 1e-14);
        assert!(ifmv_cell(&r, &u).iter().sum::<f64>().abs() < 1e-14);
    }
}
