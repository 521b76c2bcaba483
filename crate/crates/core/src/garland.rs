//! Level-`k` Garland posets of simplicial and cubical face posets.
//!
//! `S⁰` is `P^k`, `S¹` is `P^{k+1}` and `S⁻¹` indexes the connected components
//! of the graph `Γ` whose vertices are pairs `(p, b)` with `p` a facet of the
//! `k`-cell `b` (or the sentinel `φ` in the cubical case) and whose edges are
//! the pairs of distinct facets `{b, b'}` of each `(k+1)`-cell `c`, attached
//! over the lower element both facets share.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::ComplexKind;
use crate::error::{GarlandError, Result};
use crate::poset::FacePoset;
use crate::spectral::Multigraph;
use crate::unionfind::UnionFind;

/// Lower element `p` of a `Γ` vertex `(p, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LowerFace {
    /// A `(k-1)`-cell, by poset index.
    Cell(usize),
    /// The empty face below every vertex (simplicial level 0).
    Empty,
    /// The sentinel `φ` for pairs of facets with no infimum in `P^{k-1}`.
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Geometric,
    Transversal,
}

/// An edge of `Γ`: the cell `c` joining two of its facets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkEdge {
    pub label: usize,
    /// Endpoints as positions in the component's vertex list.
    pub ends: (usize, usize),
}

#[derive(Debug, Clone)]
pub struct LinkComponent {
    pub id: usize,
    pub kind: ComponentKind,
    pub pi: LowerFace,
    /// The `k`-cells `b` of the vertices `(pi, b)`, ascending by poset index.
    pub vertices: Vec<usize>,
    pub edges: Vec<LinkEdge>,
}

impl LinkComponent {
    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::new(
            self.vertices.len(),
            self.edges.iter().map(|e| e.ends).collect(),
        )
    }

    pub fn position(&self, b: usize) -> Option<usize> {
        self.vertices.binary_search(&b).ok()
    }
}

#[derive(Debug, Clone)]
pub struct LinkGraph {
    pub level: usize,
    pub kind: ComplexKind,
    pub components: Vec<LinkComponent>,
}

impl LinkGraph {
    pub fn edge_count(&self) -> usize {
        self.components.iter().map(|c| c.edges.len()).sum()
    }

    pub fn count(&self, kind: ComponentKind) -> usize {
        self.components.iter().filter(|c| c.kind == kind).count()
    }
}

/// Garland constants `(n₀, n₁, n₀₁₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Constants {
    pub n0: usize,
    pub n1: usize,
    pub n010: usize,
}

impl Constants {
    pub fn for_level(kind: ComplexKind, k: usize) -> Self {
        match kind {
            ComplexKind::Simplicial => Constants {
                n0: k + 1,
                n1: (k + 2) * (k + 1) / 2,
                n010: 1,
            },
            ComplexKind::Cubical => Constants {
                n0: 2 * k + 1,
                n1: (2 * k + 2) * (2 * k + 1) / 2,
                n010: 1,
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct GarlandPoset {
    pub level: usize,
    pub kind: ComplexKind,
    pub constants: Constants,
    /// `S⁻¹`: one entry per link-graph component, with `π(a)`.
    pub s_minus: Vec<(ComponentKind, LowerFace)>,
    /// `S⁰ = P^k` as poset indices.
    pub s_zero: Vec<usize>,
    /// `S¹ = P^{k+1}` as poset indices.
    pub s_one: Vec<usize>,
    /// For each position in `s_zero`: the `a < b` with `w(a, b)`.
    pub below_zero: Vec<Vec<(usize, i8)>>,
    /// For each position in `s_one`: the positions `b` in `s_zero` with
    /// `b < c` and `w(b, c)`.
    pub below_one: Vec<Vec<(usize, i8)>>,
    /// Original ids for reporting.
    pub zero_ids: Vec<u64>,
    pub one_ids: Vec<u64>,
    pub link: LinkGraph,
}

impl GarlandPoset {
    /// `a < c` relations as `(a, c)` position pairs, each once.
    pub fn minus_below_one(&self, c: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.below_one[c]
            .iter()
            .flat_map(|&(b, _)| self.below_zero[b].iter().map(|&(a, _)| a))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of `c > b`.
    pub fn up_degree(&self) -> Vec<usize> {
        let mut deg = vec![0; self.s_zero.len()];
        for below in &self.below_one {
            for &(b, _) in below {
                deg[b] += 1;
            }
        }
        deg
    }

    pub fn w_ab(&self, a: usize, b: usize) -> Option<i8> {
        self.below_zero[b]
            .iter()
            .find(|(x, _)| *x == a)
            .map(|(_, w)| *w)
    }
}

fn check_level(fp: &FacePoset, k: usize) -> Result<()> {
    let dim = fp.max_dim().unwrap_or(0);
    if fp.is_empty() || k + 1 > dim {
        return Err(GarlandError::Level { level: k, dim });
    }
    for b in fp.rank_cells(k) {
        if !fp
            .cofacets(b)
            .iter()
            .any(|&(c, _)| fp.rank_of(c) == Some(k + 1))
        {
            return Err(GarlandError::Purity {
                level: k,
                cell: fp.id(b),
            });
        }
    }
    Ok(())
}

/// Lower element over which the `Γ` edge between facets `b` and `b'` runs.
fn route(fp: &FacePoset, k: usize, b: usize, b2: usize) -> Result<LowerFace> {
    if k == 0 {
        return Ok(match fp.kind() {
            ComplexKind::Simplicial => LowerFace::Empty,
            ComplexKind::Cubical => LowerFace::Phi,
        });
    }
    let common: Vec<usize> = fp
        .facets(b)
        .iter()
        .map(|(p, _)| *p)
        .filter(|p| fp.facets(b2).iter().any(|(q, _)| q == p))
        .collect();
    match fp.kind() {
        ComplexKind::Simplicial => match common.as_slice() {
            [p] => Ok(LowerFace::Cell(*p)),
            _ => Err(GarlandError::LinkGraph(format!(
                "cells {} and {} share {} codimension-one faces",
                fp.id(b),
                fp.id(b2),
                common.len()
            ))),
        },
        ComplexKind::Cubical => {
            let [p] = common.as_slice() else {
                return Ok(LowerFace::Phi);
            };
            // p is the infimum only if every common lower bound lies below it
            let below_p = fp.down_set(*p);
            let down_b2 = fp.down_set(b2);
            let is_inf = fp
                .down_set(b)
                .into_iter()
                .filter(|x| down_b2.contains(x))
                .all(|x| below_p.contains(&x));
            Ok(if is_inf {
                LowerFace::Cell(*p)
            } else {
                LowerFace::Phi
            })
        }
    }
}

/// Builds `Γ` and its connected components at level `k`.
pub fn link_components(fp: &FacePoset, k: usize) -> Result<LinkGraph> {
    check_level(fp, k)?;
    let s_zero = fp.rank_cells(k);
    let s_one = fp.rank_cells(k + 1);

    let mut vertex_index: HashMap<(LowerFace, usize), usize> = HashMap::new();
    let mut vertices: Vec<(LowerFace, usize)> = Vec::new();
    let mut push = |v: (LowerFace, usize), vertices: &mut Vec<(LowerFace, usize)>| {
        vertex_index.entry(v).or_insert_with(|| {
            vertices.push(v);
            vertices.len() - 1
        });
    };
    for &b in &s_zero {
        if k == 0 {
            let p = match fp.kind() {
                ComplexKind::Simplicial => LowerFace::Empty,
                ComplexKind::Cubical => LowerFace::Phi,
            };
            push((p, b), &mut vertices);
            continue;
        }
        for &(p, _) in fp.facets(b) {
            push((LowerFace::Cell(p), b), &mut vertices);
        }
        if fp.kind() == ComplexKind::Cubical {
            push((LowerFace::Phi, b), &mut vertices);
        }
    }

    let mut uf = UnionFind::new(vertices.len());
    let mut edges = Vec::new();
    for &c in &s_one {
        let facets = fp.facets(c);
        for i in 0..facets.len() {
            for j in (i + 1)..facets.len() {
                let (b, b2) = (facets[i].0, facets[j].0);
                let p = route(fp, k, b, b2)?;
                let (Some(&u), Some(&v)) = (vertex_index.get(&(p, b)), vertex_index.get(&(p, b2)))
                else {
                    return Err(GarlandError::LinkGraph(format!(
                        "cell {} has a facet outside P^{k}",
                        fp.id(c)
                    )));
                };
                uf.union(u, v);
                edges.push((c, u, v));
            }
        }
    }

    let (labels, count) = uf.labels();
    let mut components: Vec<LinkComponent> = (0..count)
        .map(|id| LinkComponent {
            id,
            kind: ComponentKind::Geometric,
            pi: LowerFace::Empty,
            vertices: Vec::new(),
            edges: Vec::new(),
        })
        .collect();
    for (v, &(p, b)) in vertices.iter().enumerate() {
        let comp = &mut components[labels[v]];
        comp.pi = p;
        comp.kind = if p == LowerFace::Phi {
            ComponentKind::Transversal
        } else {
            ComponentKind::Geometric
        };
        comp.vertices.push(b);
    }
    for comp in &mut components {
        comp.vertices.sort_unstable();
    }
    for (c, u, v) in edges {
        let comp = &mut components[labels[u]];
        let eu = comp.position(vertices[u].1).expect("vertex in component");
        let ev = comp.position(vertices[v].1).expect("vertex in component");
        comp.edges.push(LinkEdge {
            label: c,
            ends: (eu, ev),
        });
    }

    Ok(LinkGraph {
        level: k,
        kind: fp.kind(),
        components,
    })
}

type OrientedVertex = ((usize, usize), i8);

/// Sign assignment `w(a, b)` on a transversal component, keyed by
/// `(component id, b)`.
pub type TransversalOrientation = HashMap<(usize, usize), i8>;

/// Orients every transversal component so that (P5) holds.
///
/// From the vertex with the smallest cell id, signs propagate breadth-first
/// by `w(a, b') = -w(a, b) · [b : c] · [b' : c]`; every non-tree edge is then
/// checked against the same relation.
pub fn orient_transversal(
    fp: &FacePoset,
    _k: usize,
    lg: &LinkGraph,
) -> Result<TransversalOrientation> {
    if fp.kind() != ComplexKind::Cubical {
        return Err(GarlandError::Parameter(
            "transversal orientation applies to cubical complexes only".into(),
        ));
    }
    let per_component: Vec<Result<Vec<OrientedVertex>>> = lg
        .components
        .par_iter()
        .filter(|c| c.kind == ComponentKind::Transversal)
        .map(|comp| orient_component(fp, comp))
        .collect();
    let mut out = HashMap::new();
    for r in per_component {
        out.extend(r?);
    }
    Ok(out)
}

/// Adjacency lists `(neighbor, edge index)` in edge order.
fn adjacency(comp: &LinkComponent) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); comp.vertices.len()];
    for (e, edge) in comp.edges.iter().enumerate() {
        let (u, v) = edge.ends;
        adj[u].push((v, e));
        if u != v {
            adj[v].push((u, e));
        }
    }
    adj
}

type Parents = Vec<Option<(usize, usize)>>;

/// BFS spanning tree from the vertex with the smallest cell id: the root,
/// the parent `(vertex, edge)` of every vertex and the tree-edge flags.
pub(crate) fn spanning_tree(fp: &FacePoset, comp: &LinkComponent) -> (usize, Parents, Vec<bool>) {
    let n = comp.vertices.len();
    let root = (0..n)
        .min_by_key(|&v| fp.id(comp.vertices[v]))
        .expect("components are nonempty");
    let adj = adjacency(comp);
    let mut parent: Parents = vec![None; n];
    let mut seen = vec![false; n];
    let mut tree_edge = vec![false; comp.edges.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, e));
                tree_edge[e] = true;
                queue.push_back(v);
            }
        }
    }
    (root, parent, tree_edge)
}

fn bfs_order(comp: &LinkComponent, root: usize) -> Vec<usize> {
    let adj = adjacency(comp);
    let mut seen = vec![false; comp.vertices.len()];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &(v, _) in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                order.push(v);
            }
        }
        i += 1;
    }
    order
}

fn orient_component(fp: &FacePoset, comp: &LinkComponent) -> Result<Vec<((usize, usize), i8)>> {
    let (root, parent, tree_edge) = spanning_tree(fp, comp);
    let mut w = vec![0i8; comp.vertices.len()];
    w[root] = 1;
    let propagate = |wu: i8, e: &LinkEdge, from: usize, to: usize| -> i8 {
        let c = e.label;
        let sb = fp.sign(comp.vertices[from], c).expect("facet of c");
        let sb2 = fp.sign(comp.vertices[to], c).expect("facet of c");
        -wu * sb * sb2
    };
    for v in bfs_order(comp, root) {
        if let Some((u, e)) = parent[v] {
            w[v] = propagate(w[u], &comp.edges[e], u, v);
        }
    }
    for (e, edge) in comp.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (u, v) = edge.ends;
        if u == v || w[v] != propagate(w[u], edge, u, v) {
            return Err(GarlandError::Obstruction {
                component: comp.id,
                cell: fp.id(edge.label),
                b: fp.id(comp.vertices[u]),
                b_prime: fp.id(comp.vertices[v]),
            });
        }
    }
    Ok(comp
        .vertices
        .iter()
        .zip(&w)
        .map(|(&b, &s)| ((comp.id, b), s))
        .collect())
}

/// Element of a Garland poset, for counterexamples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Element {
    /// A member of `S⁻¹` by component id.
    Component(usize),
    /// A member of `S⁰` or `S¹` by cell id.
    Cell(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub pass: bool,
    pub counterexample: Option<Vec<Element>>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == axiom)
    }

    pub fn first_failure(&self) -> Option<String> {
        self.axioms.iter().find(|a| !a.pass).map(|a| {
            format!(
                "{} fails: {}",
                a.axiom,
                a.detail.clone().unwrap_or_default()
            )
        })
    }
}

/// Exhaustive check of (P1)–(P5) from the stored relations alone.
pub fn check_axioms(g: &GarlandPoset) -> AxiomReport {
    let Constants { n0, n1, n010 } = g.constants;
    let comp = Element::Component;
    let zero = |b: usize| Element::Cell(g.zero_ids[b]);
    let one = |c: usize| Element::Cell(g.one_ids[c]);
    let lower = |b: usize| -> Vec<usize> {
        let mut v: Vec<usize> = g.below_zero[b].iter().map(|(a, _)| *a).collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut results = Vec::new();

    let p1 = (0..g.s_zero.len()).find(|&b| lower(b).len() != n0);
    results.push(AxiomResult {
        axiom: "P1",
        pass: p1.is_none(),
        counterexample: p1.map(|b| vec![zero(b)]),
        detail: p1.map(|b| format!("{} elements below b, expected {n0}", lower(b).len())),
    });

    let p2 = (0..g.s_one.len()).find(|&c| g.minus_below_one(c).len() != n1);
    results.push(AxiomResult {
        axiom: "P2",
        pass: p2.is_none(),
        counterexample: p2.map(|c| vec![one(c)]),
        detail: p2.map(|c| {
            format!(
                "{} elements of S⁻¹ below c, expected {n1}",
                g.minus_below_one(c).len()
            )
        }),
    });

    let mut p3 = None;
    'p3: for (c, below) in g.below_one.iter().enumerate() {
        for (i, &(b, _)) in below.iter().enumerate() {
            for &(b2, _) in &below[i + 1..] {
                if b == b2 {
                    continue;
                }
                let lb = lower(b);
                let shared = lower(b2).iter().filter(|a| lb.contains(a)).count();
                if shared != n010 {
                    p3 = Some((b, c, b2, shared));
                    break 'p3;
                }
            }
        }
    }
    results.push(AxiomResult {
        axiom: "P3",
        pass: p3.is_none(),
        counterexample: p3.map(|(b, c, b2, _)| vec![zero(b), one(c), zero(b2)]),
        detail: p3.map(|(.., s)| format!("{s} common lower elements, expected {n010}")),
    });

    // S_{>a} as a graph on its S⁰ and S¹ members
    let n_minus = g.s_minus.len();
    let mut up_zero: Vec<Vec<usize>> = vec![Vec::new(); n_minus];
    for (b, below) in g.below_zero.iter().enumerate() {
        for &(a, _) in below {
            up_zero[a].push(b);
        }
    }
    let mut above_b: Vec<Vec<(usize, i8)>> = vec![Vec::new(); g.s_zero.len()];
    for (c, below) in g.below_one.iter().enumerate() {
        for &(b, w) in below {
            above_b[b].push((c, w));
        }
    }
    let mut p4 = None;
    for (a, bs) in up_zero.iter().enumerate() {
        if bs.is_empty() {
            p4 = Some((a, "S_{>a} is empty".to_string()));
            break;
        }
        let mut cs: Vec<usize> = bs
            .iter()
            .flat_map(|&b| above_b[b].iter().map(|(c, _)| *c))
            .collect();
        cs.sort_unstable();
        cs.dedup();
        let mut uf = UnionFind::new(bs.len() + cs.len());
        for (i, &b) in bs.iter().enumerate() {
            for &(c, _) in &above_b[b] {
                let j = cs.binary_search(&c).expect("c above b");
                uf.union(i, bs.len() + j);
            }
        }
        let (_, parts) = uf.labels();
        if parts != 1 {
            p4 = Some((a, format!("S_{{>a}} has {parts} connected components")));
            break;
        }
    }
    results.push(AxiomResult {
        axiom: "P4",
        pass: p4.is_none(),
        counterexample: p4.as_ref().map(|(a, _)| vec![comp(*a)]),
        detail: p4.map(|(_, d)| d),
    });

    let mut p5 = None;
    'p5: for (c, below) in g.below_one.iter().enumerate() {
        for a in g.minus_below_one(c) {
            let middles: Vec<(usize, i8, i8)> = below
                .iter()
                .filter_map(|&(b, wbc)| g.w_ab(a, b).map(|wab| (b, wab, wbc)))
                .collect();
            if middles.len() != 2 {
                p5 = Some((
                    a,
                    c,
                    format!("{} middle elements, expected 2", middles.len()),
                ));
                break 'p5;
            }
            let (_, wab, wbc) = middles[0];
            let (_, wab2, wb2c) = middles[1];
            if wab * wbc != -(wab2 * wb2c) {
                p5 = Some((a, c, "orientation relation violated".to_string()));
                break 'p5;
            }
        }
    }
    results.push(AxiomResult {
        axiom: "P5",
        pass: p5.is_none(),
        counterexample: p5.as_ref().map(|(a, c, _)| vec![comp(*a), one(*c)]),
        detail: p5.map(|(.., d)| d),
    });

    AxiomReport { axioms: results }
}

/// Builds the level-`k` Garland poset and verifies the axioms.
pub fn build_garland(fp: &FacePoset, k: usize) -> Result<GarlandPoset> {
    let link = link_components(fp, k)?;
    let g = assemble_poset(fp, k, link)?;
    let report = check_axioms(&g);
    if !report.all_pass() {
        return Err(GarlandError::Axiom(Box::new(report)));
    }
    Ok(g)
}

/// Assembles the poset from a link graph without checking the axioms.
pub fn assemble_poset(fp: &FacePoset, k: usize, link: LinkGraph) -> Result<GarlandPoset> {
    let orientation = match fp.kind() {
        ComplexKind::Cubical => orient_transversal(fp, k, &link)?,
        ComplexKind::Simplicial => HashMap::new(),
    };
    let s_zero = fp.rank_cells(k);
    let s_one = fp.rank_cells(k + 1);
    let zero_pos: HashMap<usize, usize> = s_zero.iter().enumerate().map(|(i, &b)| (b, i)).collect();

    let mut below_zero: Vec<Vec<(usize, i8)>> = vec![Vec::new(); s_zero.len()];
    for comp in &link.components {
        for &b in &comp.vertices {
            let w = match (comp.kind, comp.pi) {
                (ComponentKind::Transversal, _) => orientation[&(comp.id, b)],
                (ComponentKind::Geometric, LowerFace::Cell(p)) => {
                    fp.sign(p, b).expect("π(a) is a facet of b")
                }
                (ComponentKind::Geometric, _) => 1,
            };
            below_zero[zero_pos[&b]].push((comp.id, w));
        }
    }

    let below_one: Vec<Vec<(usize, i8)>> = s_one
        .iter()
        .map(|&c| {
            fp.facets(c)
                .iter()
                .filter_map(|&(b, s)| zero_pos.get(&b).map(|&pos| (pos, s)))
                .collect()
        })
        .collect();

    Ok(GarlandPoset {
        level: k,
        kind: fp.kind(),
        constants: Constants::for_level(fp.kind(), k),
        s_minus: link.components.iter().map(|c| (c.kind, c.pi)).collect(),
        zero_ids: s_zero.iter().map(|&b| fp.id(b)).collect(),
        one_ids: s_one.iter().map(|&c| fp.id(c)).collect(),
        s_zero,
        s_one,
        below_zero,
        below_one,
        link,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentSummary {
    pub id: usize,
    pub kind: ComponentKind,
    /// Cell id of `π(a)`; `None` for `φ` and for the empty face.
    pub pi: Option<u64>,
    pub vertices: usize,
    pub edges: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GarlandSummary {
    pub level: usize,
    pub kind: ComplexKind,
    pub constants: Constants,
    pub s_minus: usize,
    pub s_zero: usize,
    pub s_one: usize,
    pub geometric: usize,
    pub transversal: usize,
    pub components: Vec<ComponentSummary>,
}

impl GarlandPoset {
    pub fn summary(&self, fp: &FacePoset) -> GarlandSummary {
        GarlandSummary {
            level: self.level,
            kind: self.kind,
            constants: self.constants,
            s_minus: self.s_minus.len(),
            s_zero: self.s_zero.len(),
            s_one: self.s_one.len(),
            geometric: self.link.count(ComponentKind::Geometric),
            transversal: self.link.count(ComponentKind::Transversal),
            components: self
                .link
                .components
                .iter()
                .map(|c| ComponentSummary {
                    id: c.id,
                    kind: c.kind,
                    pi: match c.pi {
                        LowerFace::Cell(p) => Some(fp.id(p)),
                        _ => None,
                    },
                    vertices: c.vertices.len(),
                    edges: c.edges.len(),
                })
                .collect(),
        }
    }
}
