use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use garland_core::analysis::default_level;
use garland_core::cohomology::CochainData;
use garland_core::generators::{
    from_simplices, moment_angle, random_complex, Model, RandomModelParams,
};
use garland_core::linalg::rational::{bareiss_rank, modular_rank};
use garland_core::linalg::{IntMatrix, RankMode};
use garland_core::spectral::{classify, spectrum, Multigraph, Status};
use garland_core::{build_garland, check_axioms, face_poset, parse_complex, validate, CellComplex};

fn model_params() -> impl Strategy<Value = RandomModelParams> {
    let model = prop_oneof![
        (2usize..=3).prop_map(|k| (Model::Ydelta, k)),
        (1usize..=2).prop_map(|k| (Model::Ybox, k)),
        Just((Model::Zbox, 1)),
    ];
    (model, 1usize..=4, 1usize..=3, any::<u64>()).prop_map(|((model, k), h, d, seed)| {
        let h = if model == Model::Zbox { h.max(2) } else { h };
        RandomModelParams {
            model,
            h,
            d,
            k,
            seed,
        }
    })
}

fn draw(p: &RandomModelParams) -> CellComplex {
    random_complex(p, 10_000).unwrap().complex
}

/// Multigraph without isolated vertices: every vertex gets one edge to a
/// random other vertex, plus extra edges.
fn graphs() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..=9).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(0..n - 1, n),
            prop::collection::vec((0..n, 0..n - 1), 0..12),
        )
            .prop_map(|(n, partners, extra)| {
                let other = |u: usize, r: usize| (u + 1 + r) % n;
                let mut edges: Vec<(usize, usize)> = partners
                    .iter()
                    .enumerate()
                    .map(|(u, &r)| (u, other(u, r)))
                    .collect();
                edges.extend(extra.iter().map(|&(u, r)| (u, other(u, r))));
                (n, edges)
            })
    })
}

/// Components of a multigraph, each with whether it is 2-colorable.
fn components(n: usize, edges: &[(usize, usize)]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut out = Vec::new();
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut bipartite = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                match color[v] {
                    None => {
                        color[v] = Some(!color[u].unwrap());
                        stack.push(v);
                    }
                    Some(c) if c == color[u].unwrap() => bipartite = false,
                    _ => {}
                }
            }
        }
        out.push(bipartite);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn samples_round_trip_through_json(p in model_params()) {
        let c = draw(&p);
        prop_assert_eq!(&parse_complex(&c.to_json()).unwrap(), &c);
        prop_assert_eq!(&draw(&p), &c);
    }

    #[test]
    fn coboundary_squares_to_zero(p in model_params()) {
        let c = draw(&p);
        prop_assume!(validate(&c).ok);
        let fp = face_poset(&c).unwrap();
        prop_assert_eq!(CochainData::new(&fp).delta_squared_defect(), 0);
    }

    #[test]
    fn euler_characteristic(p in model_params()) {
        let c = draw(&p);
        prop_assume!(validate(&c).ok);
        let fp = face_poset(&c).unwrap();
        let chi: i64 = c.f_vector().iter().enumerate().map(|(d, &f)| if d % 2 == 0 { f as i64 } else { -(f as i64) }).sum();
        let reduced: i64 = CochainData::new(&fp)
            .betti_all(RankMode::Exact)
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        prop_assert_eq!(chi - 1, reduced);
    }

    #[test]
    fn link_graph_covers_every_lower_incidence(p in model_params()) {
        let c = draw(&p);
        prop_assume!(validate(&c).ok);
        let fp = face_poset(&c).unwrap();
        let Ok(g) = build_garland(&fp, default_level(&fp)) else { return Ok(()) };
        prop_assert!(check_axioms(&g).all_pass());
        let mut seen: HashMap<usize, usize> = HashMap::new();
        for comp in &g.link.components {
            let distinct: BTreeSet<usize> = comp.vertices.iter().copied().collect();
            prop_assert_eq!(distinct.len(), comp.vertices.len());
            for &b in &comp.vertices {
                *seen.entry(b).or_default() += 1;
            }
            for e in &comp.edges {
                prop_assert!(e.ends.0 < comp.vertices.len() && e.ends.1 < comp.vertices.len());
            }
        }
        for &b in &g.s_zero {
            prop_assert_eq!(seen.get(&b).copied().unwrap_or(0), g.constants.n0);
        }
    }

    #[test]
    fn spectrum_invariants((n, edges) in graphs()) {
        let eig = spectrum(&Multigraph::new(n, edges.clone())).unwrap();
        prop_assert!(eig.iter().all(|&x| (-1e-9..=2.0 + 1e-9).contains(&x)));
        let trace: f64 = eig.iter().sum();
        prop_assert!((trace - n as f64).abs() < 1e-8);
        let comps = components(n, &edges);
        let zeros = eig.iter().filter(|x| x.abs() < 1e-8).count();
        prop_assert_eq!(zeros, comps.len());
        let twos = eig.iter().filter(|x| (*x - 2.0).abs() < 1e-8).count();
        prop_assert_eq!(twos, comps.iter().filter(|&&b| b).count());
    }

    #[test]
    fn modular_rank_matches_exact(rows in 1usize..=7, cols in 1usize..=7, data in prop::collection::vec(-3i64..=3, 49)) {
        let m = IntMatrix::from_rows(&(0..rows).map(|i| data[i * 7..i * 7 + cols].to_vec()).collect::<Vec<_>>());
        prop_assert_eq!(bareiss_rank(&m), modular_rank(&m, 1_000_000_007));
        prop_assert_eq!(bareiss_rank(&m), bareiss_rank(&m.transpose()));
    }

    #[test]
    fn moment_angle_cell_count(n in 1usize..=6, masks in prop::collection::vec(1u32..64, 1..6)) {
        let facets: Vec<Vec<usize>> = masks
            .iter()
            .map(|&m| (0..n).filter(|v| m >> v & 1 == 1).collect::<Vec<_>>())
            .filter(|f| !f.is_empty())
            .collect();
        prop_assume!(!facets.is_empty());
        let k = from_simplices(&facets);
        let vertices: Vec<usize> = facets.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let is_face = |s: &BTreeSet<usize>| s.is_empty() || facets.iter().any(|f| s.iter().all(|v| f.contains(v)));
        // every word in {0, 1, *}^V whose free letters span a face
        let mut expected = 0usize;
        for word in 0..3usize.pow(vertices.len() as u32) {
            let free: BTreeSet<usize> = (0..vertices.len())
                .filter(|&i| word / 3usize.pow(i as u32) % 3 == 2)
                .map(|i| vertices[i])
                .collect();
            if is_face(&free) {
                expected += 1;
            }
        }
        let x = moment_angle(&k).unwrap();
        prop_assert_eq!(x.cells.len(), expected);
        prop_assert!(validate(&x).ok);
    }

    #[test]
    fn classification_respects_the_band(gap in 0.0f64..2.0, thr in 0.0f64..1.0, tol_exp in 6i32..12) {
        let tol = 10f64.powi(-tol_exp);
        let band = tol * 100.0;
        let s = classify(gap, thr, tol, band);
        if gap > thr + band {
            prop_assert_eq!(s, Status::Holds);
        }
        if gap < thr - band || (gap - thr).abs() <= tol {
            prop_assert_eq!(s, Status::Fails);
        }
        if s == Status::Holds {
            prop_assert!(gap > thr);
        }
    }
}
