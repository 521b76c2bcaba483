#![allow(dead_code)]

use garland_core::analysis::default_level;
use garland_core::generators::{
    cross_polytope, cube, cube_skeleton, cycle, from_simplices, moment_angle, random_complex,
    torus_cubical, torus_simplicial, Model, RandomModelParams, DEFAULT_REJECTION_CAP,
};
use garland_core::{build_garland, face_poset, CellComplex};

pub struct Instance {
    pub name: String,
    pub complex: CellComplex,
    pub level: usize,
}

fn at_top(name: &str, complex: CellComplex) -> Instance {
    let level = default_level(&face_poset(&complex).unwrap());
    Instance {
        name: name.to_string(),
        complex,
        level,
    }
}

/// First seed at or after `seed` whose sample validates and carries a
/// Garland poset at level `dim - 1`.
pub fn usable_sample(model: Model, h: usize, d: usize, k: usize, seed: u64) -> (u64, CellComplex) {
    for s in seed..seed + 10_000 {
        let p = RandomModelParams {
            model,
            h,
            d,
            k,
            seed: s,
        };
        let c = random_complex(&p, DEFAULT_REJECTION_CAP).unwrap().complex;
        let Ok(fp) = face_poset(&c) else { continue };
        if build_garland(&fp, default_level(&fp)).is_ok() {
            return (s, c);
        }
    }
    panic!("no usable {model} sample near seed {seed}");
}

/// The named instances used by the structure checks.
pub fn suite() -> Vec<Instance> {
    let c4 = from_simplices(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]);
    let triangle_boundary = from_simplices(&[vec![0, 1], vec![1, 2], vec![0, 2]]);
    vec![
        at_top("torus_cubical(4,4)", torus_cubical(4, 4).unwrap()),
        at_top("torus_simplicial(4,4)", torus_simplicial(4, 4).unwrap()),
        at_top("single square", cube(2)),
        at_top("moment_angle(C4)", moment_angle(&c4).unwrap()),
        at_top(
            "ydelta h4 d3 k3",
            usable_sample(Model::Ydelta, 4, 3, 3, 1).1,
        ),
        at_top("ybox h4 d3 k2", usable_sample(Model::Ybox, 4, 3, 2, 1).1),
        at_top("zbox h6 d2 k1", usable_sample(Model::Zbox, 6, 2, 1, 1).1),
        at_top("torus_cubical(3,5)", torus_cubical(3, 5).unwrap()),
        at_top("octahedron", cross_polytope(3).unwrap()),
        at_top(
            "moment_angle(boundary of triangle)",
            moment_angle(&triangle_boundary).unwrap(),
        ),
        at_top("cycle(5)", cycle(5).unwrap()),
        at_top("cube_skeleton(3)", cube_skeleton(3).unwrap()),
    ]
}

/// Eigenvalues of the random-walk Laplacian `I - D^{-1} A` by shifted QR
/// iteration on the dense nonsymmetric matrix. Loops add 2 to the degree and
/// to the diagonal of `A`.
pub fn random_walk_spectrum(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut adj = vec![vec![0.0; n]; n];
    let mut deg = vec![0.0; n];
    for &(u, v) in edges {
        if u == v {
            adj[u][u] += 2.0;
        } else {
            adj[u][v] += 1.0;
            adj[v][u] += 1.0;
        }
        deg[u] += 1.0;
        deg[v] += 1.0;
    }
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { 1.0 } else { 0.0 };
            m[i][j] = if deg[i] > 0.0 {
                id - adj[i][j] / deg[i]
            } else {
                id
            };
        }
    }
    let mut out = qr_eigenvalues(m);
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[allow(clippy::needless_range_loop)]
fn qr_step(a: &mut [Vec<f64>], shift: f64) {
    let n = a.len();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= shift;
    }
    // Householder QR: accumulate Q explicitly
    let mut r: Vec<Vec<f64>> = a.to_vec();
    let mut q = vec![vec![0.0; n]; n];
    for (i, row) in q.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for k in 0..n.saturating_sub(1) {
        let norm: f64 = (k..n).map(|i| r[i][k] * r[i][k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if r[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..n).map(|i| r[i][k]).collect();
        v[0] -= alpha;
        let vn: f64 = v.iter().map(|x| x * x).sum();
        if vn == 0.0 {
            continue;
        }
        for j in 0..n {
            let s: f64 = (k..n).map(|i| v[i - k] * r[i][j]).sum::<f64>() * 2.0 / vn;
            for i in k..n {
                r[i][j] -= s * v[i - k];
            }
        }
        for row in q.iter_mut() {
            let s: f64 = (k..n).map(|i| row[i] * v[i - k]).sum::<f64>() * 2.0 / vn;
            for i in k..n {
                row[i] -= s * v[i - k];
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            a[i][j] = (0..n).map(|k| r[i][k] * q[k][j]).sum::<f64>();
        }
        a[i][i] += shift;
    }
}

fn qr_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let mut out = Vec::new();
    let mut stalled = 0usize;
    let mut iterations = 0usize;
    while !a.is_empty() {
        let n = a.len();
        if n == 1 {
            out.push(a[0][0]);
            break;
        }
        let off = (0..n - 1).fold(0.0f64, |m, j| m.max(a[n - 1][j].abs()));
        if off <= 1e-14 * scale {
            out.push(a[n - 1][n - 1]);
            a.truncate(n - 1);
            for row in a.iter_mut() {
                row.truncate(n - 1);
            }
            stalled = 0;
            continue;
        }
        iterations += 1;
        assert!(iterations < 100_000, "QR iteration did not converge");
        stalled += 1;
        let shift = if stalled.is_multiple_of(17) {
            a[n - 1][n - 1] + 0.37 * off
        } else {
            let (p, q, r, s) = (
                a[n - 2][n - 2],
                a[n - 2][n - 1],
                a[n - 1][n - 2],
                a[n - 1][n - 1],
            );
            let tr = p + s;
            let disc = (p - s) * (p - s) / 4.0 + q * r;
            if disc >= 0.0 {
                let l1 = tr / 2.0 + disc.sqrt();
                let l2 = tr / 2.0 - disc.sqrt();
                if (l1 - s).abs() < (l2 - s).abs() {
                    l1
                } else {
                    l2
                }
            } else {
                tr / 2.0
            }
        };
        qr_step(&mut a, shift);
    }
    out
}

/// Whether a multigraph's vertices can be 2-colored along its edges.
pub fn is_bipartite(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let cu = color[u].unwrap();
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!cu);
                        stack.push(v);
                    }
                    Some(cv) if cv == cu => return false,
                    _ => {}
                }
            }
        }
    }
    true
}
