//! Self-checks over every module, run by the `verify` command.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::flow::{jst_dissipation, nlfd_unsteady_residual, FlowField, FreestreamConfig, JstParams};
use crate::gcl::{
    aevi_increments, dvoldt_trimap, face_ifmv_terms, ifmv_nlfd, ifmv_ts, lvi_increments, volume_history, Method,
};
use crate::hexmesh::{build_box_mesh, face_area_vectors, face_vertices, hex_volume, jacobian, Face, HexMesh, Vec3};
use crate::metrics::abs_err_sum_vs_dvoldt;
use crate::motion::{
    analytic_increment_case3, analytic_increment_rate_case3, sample_motion, CaseId, MotionCase, PreparedMotion,
};
use crate::rbf::build_system;
use crate::spectral::{ts_matrix, SpectralOperator};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Drop one term of the trilinear face flux to check that the suite
    /// notices.
    pub mutate_trimap: bool,
    /// Number of random hexahedra per geometric property.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { mutate_trimap: false, samples: 1000, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// A random hexahedron: a box with edges in `[0.5, 2]` whose corners are
/// moved by up to 0.2 of the shortest edge.
pub fn random_hex(rng: &mut impl Rng) -> [Vec3; 8] {
    let e = Vec3::new(rng.random_range(0.5..2.0), rng.random_range(0.5..2.0), rng.random_range(0.5..2.0));
    let h = 0.2 * e.min();
    let corners = [
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (1.0, 1.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
        (1.0, 0.0, 1.0),
        (1.0, 1.0, 1.0),
        (0.0, 1.0, 1.0),
    ];
    corners.map(|(a, b, c)| {
        Vec3::new(a * e.x, b * e.y, c * e.z)
            + Vec3::new(rng.random_range(-h..h), rng.random_range(-h..h), rng.random_range(-h..h))
    })
}

fn random_velocities(rng: &mut impl Rng) -> [Vec3; 8] {
    std::array::from_fn(|_| Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn gauss_volume(r: &[Vec3; 8]) -> f64 {
    let g = 0.5 * (0.6f64).sqrt();
    let pts = [(0.5 - g, 5.0 / 18.0), (0.5, 8.0 / 18.0), (0.5 + g, 5.0 / 18.0)];
    let mut v = 0.0;
    for &(a, wa) in &pts {
        for &(b, wb) in &pts {
            for &(c, wc) in &pts {
                v += wa * wb * wc * jacobian(r, a, b, c).determinant();
            }
        }
    }
    v
}

fn cell_flux_sum(r: &[Vec3; 8], u: &[Vec3; 8], mutate: bool) -> f64 {
    Face::ALL
        .iter()
        .map(|&f| {
            let t = face_ifmv_terms(&face_vertices(r, f), &face_vertices(u, f));
            let keep = if mutate { 4 } else { 5 };
            t[..keep].iter().sum::<f64>() / 12.0
        })
        .sum()
}

fn check(name: &'static str, worst: f64, tol: f64) -> PropertyResult {
    PropertyResult { name, passed: worst <= tol, detail: format!("worst {worst:.3e}, tolerance {tol:.1e}") }
}

fn small_mesh() -> HexMesh {
    build_box_mesh(4, 4, 4, 3.2, 2.8, 2.4).expect("valid mesh")
}

/// Run every property and report each outcome.
pub fn run_all(opts: &VerifyOptions) -> Vec<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let hexes: Vec<([Vec3; 8], [Vec3; 8])> =
        (0..opts.samples).map(|_| (random_hex(&mut rng), random_velocities(&mut rng))).collect();
    let mut out = Vec::new();

    // geometry
    let worst = hexes.iter().fold(0.0f64, |m, (r, _)| {
        let v = hex_volume(r);
        m.max((v - gauss_volume(r)).abs() / v.abs())
    });
    out.push(check("volume matches Gauss quadrature", worst, 1e-13));

    let worst = hexes.iter().fold(0.0f64, |m, (r, _)| {
        let s = face_area_vectors(r);
        let smax = s.iter().fold(0.0f64, |a, v| a.max(v.norm()));
        m.max(s.iter().sum::<Vec3>().norm() / smax)
    });
    out.push(check("face area vectors close", worst, 1e-13));

    {
        let mesh = small_mesh();
        let tr = sample_motion(&mesh, &MotionCase::default_for(CaseId::Case3), 3).expect("case 3 sample");
        let total: f64 = mesh.lengths.iter().product();
        let worst = tr.positions.iter().fold(0.0f64, |m, p| {
            m.max((mesh.cell_volumes(p).iter().sum::<f64>() - total).abs() / total)
        });
        out.push(check("deformed cells partition the box", worst, 1e-12));
    }

    // trilinear flux
    let worst = hexes.iter().fold(0.0f64, |m, (r, u)| {
        let d = dvoldt_trimap(r, u);
        let s = cell_flux_sum(r, u, opts.mutate_trimap);
        let scale = d.abs().max(hex_volume(r));
        m.max((s - d).abs() / scale)
    });
    out.push(check("trilinear closure", worst, 1e-13));

    let worst = hexes.iter().take(200).fold(0.0f64, |m, (r, u)| {
        let h = 1e-6;
        let at = |s: f64| hex_volume(&std::array::from_fn(|i| r[i] + s * u[i]));
        let fd = (at(h) - at(-h)) / (2.0 * h);
        let d = dvoldt_trimap(r, u);
        m.max((fd - d).abs() / d.abs().max(1e-3))
    });
    out.push(check("volume rate matches finite differences", worst, 1e-6));

    // spectral
    let mut worst_rt: f64 = 0.0;
    let mut worst_parseval: f64 = 0.0;
    let mut worst_equiv: f64 = 0.0;
    let mut worst_skew: f64 = 0.0;
    let mut worst_const: f64 = 0.0;
    for n in 1..=20 {
        let op = SpectralOperator::new(n, 1.0).expect("valid operator");
        let nts = op.sample_count();
        let s: Vec<f64> = (0..nts).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = op.dft(&s).expect("dft");
        let back = op.idft(&c).expect("idft");
        for (a, b) in back.iter().zip(&s) {
            worst_rt = worst_rt.max((a.re - b).abs()).max(a.im.abs());
        }
        let lhs: f64 = s.iter().map(|x| x * x).sum::<f64>() / nts as f64;
        let rhs: f64 = c.iter().map(|x| x.norm_sqr()).sum();
        worst_parseval = worst_parseval.max((lhs - rhs).abs() / lhs);
        for _ in 0..5 {
            let s: Vec<f64> = (0..nts).map(|_| rng.random_range(-1.0..1.0)).collect();
            let a = op.differentiate(&s).expect("fourier");
            let b = op.apply_ts(&s).expect("ts");
            for (x, y) in a.iter().zip(&b) {
                worst_equiv = worst_equiv.max((x - y).abs());
            }
        }
        let d = ts_matrix(n, 1.0).expect("ts matrix");
        for i in 0..nts {
            worst_skew = worst_skew.max(d[i * nts + i].abs());
            for j in 0..nts {
                worst_skew = worst_skew.max((d[i * nts + j] + d[j * nts + i]).abs());
            }
            worst_const = worst_const.max(d[i * nts..(i + 1) * nts].iter().sum::<f64>().abs());
        }
    }
    out.push(check("DFT round trip", worst_rt, 1e-13));
    out.push(check("Parseval identity", worst_parseval, 1e-12));
    out.push(check("Fourier and matrix derivatives agree", worst_equiv, 1e-12));
    out.push(check("differentiation matrix is skew", worst_skew, 0.0));
    out.push(check("differentiation matrix kills constants", worst_const, 1e-12));
    out.push(PropertyResult {
        name: "even sample counts rejected",
        passed: matches!(SpectralOperator::from_samples(4, 1.0), Err(Error::EvenSampleCount(4))),
        detail: "requested 4 samples".into(),
    });

    // rbf
    {
        let mesh = build_box_mesh(3, 3, 3, 1.0, 1.0, 1.0).expect("valid mesh");
        let ids = mesh.boundary_vertices();
        let pts: Vec<Vec3> = ids.iter().map(|&v| mesh.vertices[v]).collect();
        let sys = build_system(&pts, &pts, 2.0).expect("rbf system");
        let u: Vec<f64> = (0..pts.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..pts.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let iu = sys.interpolate(&u).expect("interpolate");
        let worst = iu.iter().zip(&u).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        out.push(check("RBF reproduces control values", worst, 1e-10));
        let iv = sys.interpolate(&v).expect("interpolate");
        let mix: Vec<f64> = u.iter().zip(&v).map(|(a, b)| 0.3 * a - 1.7 * b).collect();
        let im = sys.interpolate(&mix).expect("interpolate");
        let worst = (0..im.len()).fold(0.0f64, |m, i| m.max((im[i] - (0.3 * iu[i] - 1.7 * iv[i])).abs()));
        out.push(check("RBF interpolation is linear", worst, 1e-13 * 10.0));
    }

    // motion
    {
        let mesh = small_mesh();
        let mut closure: f64 = 0.0;
        let mut velocity: f64 = 0.0;
        for id in CaseId::STUDY {
            let case = MotionCase::default_for(id);
            let prep = PreparedMotion::new(&mesh, &case).expect("prepare");
            let tr = prep.sample(&mesh, 2).expect("sample");
            let last = tr.positions.len() - 1;
            for (a, b) in tr.positions[0].iter().zip(&tr.positions[last]) {
                closure = closure.max((a - b).amax());
            }
            let h = 1e-6;
            for &t in &[0.13, 0.61] {
                let (_, u) = prep.state_at(t);
                let (a, _) = prep.state_at(t + h);
                let (b, _) = prep.state_at(t - h);
                let scale = u.iter().fold(1e-3f64, |s, v| s.max(v.amax()));
                for i in 0..u.len() {
                    velocity = velocity.max(((a[i] - b[i]) / (2.0 * h) - u[i]).amax() / scale);
                }
            }
        }
        out.push(check("motions close over one period", closure, 0.0));
        out.push(check("velocities match position differences", velocity, 1e-6));
        let (r, y, d) = (0.05, 0.28, 0.24);
        let worst = [0.1, 0.3, 0.55, 0.8].iter().fold(0.0f64, |m, &t| {
            let h = 1e-3;
            let f = |s: f64| analytic_increment_case3(r, y, d, s, 1.0);
            // fourth-order central difference
            let fd = (8.0 * (f(t + h) - f(t - h)) - (f(t + 2.0 * h) - f(t - 2.0 * h))) / (12.0 * h);
            m.max((fd - analytic_increment_rate_case3(r, y, d, t, 1.0)).abs())
        });
        out.push(check("case 3 increment rate", worst, 1e-12));
    }

    // gcl
    {
        let mesh = small_mesh();
        let mut gcl: f64 = 0.0;
        let mut equiv: f64 = 0.0;
        for id in CaseId::STUDY {
            for n in 1..=4 {
                let tr = sample_motion(&mesh, &MotionCase::default_for(id), n).expect("sample");
                let vols = volume_history(&mesh, &tr);
                for lvi in [true, false] {
                    let d = if lvi { lvi_increments(&mesh, &tr) } else { aevi_increments(&mesh, &tr) }.decompose();
                    let nl = ifmv_nlfd(&d);
                    gcl = gcl.max(abs_err_sum_vs_dvoldt(&nl, &vols, tr.period).expect("abs err"));
                    equiv = equiv.max(ifmv_ts(&d).max_abs_diff(&nl, None).expect("same shape"));
                }
            }
        }
        out.push(check("spectral increments satisfy the GCL", gcl, 1e-10));
        out.push(check("Time-Spectral equals NLFD", equiv, 1e-12));

        let tr = sample_motion(&mesh, &MotionCase::default_for(CaseId::Case1), 3).expect("sample");
        let (a, l) = (aevi_increments(&mesh, &tr), lvi_increments(&mesh, &tr));
        let worst = a.values.iter().zip(&l.values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        out.push(check("LVI equals AEVI on straight paths", worst, 1e-13));
    }

    // flow
    {
        let mesh = build_box_mesh(3, 3, 3, 3.2, 2.8, 2.4).expect("valid mesh");
        let tr = sample_motion(&mesh, &MotionCase::default_for(CaseId::Case2), 2).expect("sample");
        let cfg = FreestreamConfig::default();
        let field = FlowField::uniform(&cfg.w0, mesh.n_cells(), 2);
        let g = crate::gcl::compute_ifmv(Method::NlfdAevi, &mesh, &tr);
        let r = nlfd_unsteady_residual(&mesh, &tr, &field, Some(&g), &cfg).expect("residual");
        let worst = r.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        out.push(check("uniform flow is steady with spectral increments", worst, 1e-12));
        let w = cfg.w0.to_vector();
        let d = jst_dissipation([&w, &w, &w, &w], [1.0; 4], 2.0, &JstParams::default());
        let worst = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        out.push(check("JST vanishes on uniform flow", worst, 0.0));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let opts = VerifyOptions { samples: 200, ..Default::default() };
        for r in run_all(&opts) {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn mutation_is_caught() {
        let opts = VerifyOptions { samples: 50, mutate_trimap: true, ..Default::default() };
        let res = run_all(&opts);
        let closure = res.iter().find(|r| r.name == "trilinear closure").unwrap();
        assert!(!closure.passed);
        assert!(res.iter().filter(|r| r.name != "trilinear closure").all(|r| r.passed));
    }
}
