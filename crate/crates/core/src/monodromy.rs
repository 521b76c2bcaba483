//! Holonomy of facet frames around transversal link-graph components.
//!
//! A frame of a `k`-cube `b` is the labelling of its `2k` facets by slots.
//! Crossing a `(k+1)`-cube `c` from `b` to the opposite facet `b'` carries a
//! facet `f` of `b` to the facet `f'` of `b'` that lies in the same
//! side-facet `g` of `c` (the second middle element of `[f, c]`).

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::ComplexKind;
use crate::error::{GarlandError, Result};
use crate::garland::{spanning_tree, ComponentKind, LinkComponent, LinkGraph};
use crate::poset::FacePoset;

/// A `Γ` edge by cell ids: the cube `c` and the two facets it joins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessEdge {
    pub c: u64,
    pub b: u64,
    pub b_prime: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentHolonomy {
    pub free: bool,
    /// Order of the group generated by the holonomies of the fundamental
    /// cycles; 0 when transport is undefined somewhere on the component.
    pub holonomy_group_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MonodromyReport {
    pub free: bool,
    pub witness_cycle: Option<Vec<WitnessEdge>>,
    pub per_component: BTreeMap<usize, ComponentHolonomy>,
}

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    // (p ∘ q)(i) = p(q(i))
    q.iter().map(|&i| p[i]).collect()
}

fn invert(p: &Perm) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Slot map across `c`: slot `s` of `from` goes to `slot[s]` of `to`.
fn transport(fp: &FacePoset, c: usize, from: usize, to: usize) -> Option<Perm> {
    let to_facets = fp.facets(to);
    fp.facets(from)
        .iter()
        .map(|&(f, _)| {
            let sides: Vec<usize> = fp
                .facets(c)
                .iter()
                .map(|&(g, _)| g)
                .filter(|&g| g != from && fp.facets(g).iter().any(|&(x, _)| x == f))
                .collect();
            let [g] = sides.as_slice() else {
                return None;
            };
            let matches: Vec<usize> = to_facets
                .iter()
                .enumerate()
                .filter(|(_, (x, _))| fp.facets(*g).iter().any(|(y, _)| y == x))
                .map(|(slot, _)| slot)
                .collect();
            match matches.as_slice() {
                [slot] => Some(*slot),
                _ => None,
            }
        })
        .collect::<Option<Vec<usize>>>()
        .filter(|p| {
            let distinct: HashSet<&usize> = p.iter().collect();
            distinct.len() == p.len()
        })
}

fn group_order(generators: &[Perm], n: usize) -> usize {
    let id: Perm = (0..n).collect();
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.len()
}

struct ComponentResult {
    holonomy: ComponentHolonomy,
    witness: Option<Vec<WitnessEdge>>,
}

fn component_holonomy(fp: &FacePoset, comp: &LinkComponent) -> ComponentResult {
    let n = comp.vertices.len();
    let slots = fp.facets(comp.vertices[0]).len();
    let (root, parent, tree_edge) = spanning_tree(fp, comp);

    let edge_ids = |e: usize| {
        let edge = &comp.edges[e];
        WitnessEdge {
            c: fp.id(edge.label),
            b: fp.id(comp.vertices[edge.ends.0]),
            b_prime: fp.id(comp.vertices[edge.ends.1]),
        }
    };
    // tree path from v up to the root, as edge indices
    let path_to_root = |mut v: usize| {
        let mut out = Vec::new();
        while let Some((u, e)) = parent[v] {
            out.push(e);
            v = u;
        }
        out
    };
    let cycle_of = |e: usize| {
        let (u, v) = comp.edges[e].ends;
        let mut pu = path_to_root(u);
        let mut pv = path_to_root(v);
        while let (Some(x), Some(y)) = (pu.last(), pv.last()) {
            if x != y {
                break;
            }
            pu.pop();
            pv.pop();
        }
        let mut cycle: Vec<WitnessEdge> = pu.into_iter().map(edge_ids).collect();
        cycle.push(edge_ids(e));
        cycle.extend(pv.into_iter().rev().map(edge_ids));
        cycle
    };
    let undefined = |e: usize| ComponentResult {
        holonomy: ComponentHolonomy {
            free: false,
            holonomy_group_size: 0,
        },
        witness: Some(if tree_edge[e] {
            vec![edge_ids(e)]
        } else {
            cycle_of(e)
        }),
    };

    // frame[v][s] = slot of v that base slot s is carried to
    let mut frame: Vec<Option<Perm>> = vec![None; n];
    frame[root] = Some((0..slots).collect());
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for v in 0..n {
            if let Some((pu, e)) = parent[v] {
                if pu == u && frame[v].is_none() {
                    let edge = &comp.edges[e];
                    let (from, to) = if edge.ends.0 == u {
                        (edge.ends.0, edge.ends.1)
                    } else {
                        (edge.ends.1, edge.ends.0)
                    };
                    let Some(t) = transport(fp, edge.label, comp.vertices[from], comp.vertices[to])
                    else {
                        return undefined(e);
                    };
                    frame[v] = Some(compose(&t, frame[u].as_ref().expect("parent framed")));
                    order.push(v);
                }
            }
        }
    }

    let mut generators = Vec::new();
    let mut first_bad = None;
    for (e, edge) in comp.edges.iter().enumerate() {
        if tree_edge[e] {
            continue;
        }
        let (u, v) = edge.ends;
        let Some(t) = transport(fp, edge.label, comp.vertices[u], comp.vertices[v]) else {
            return undefined(e);
        };
        let fu = frame[u].as_ref().expect("all vertices framed");
        let fv = frame[v].as_ref().expect("all vertices framed");
        let hol = compose(&invert(fv), &compose(&t, fu));
        if hol.iter().enumerate().any(|(i, &j)| i != j) {
            first_bad.get_or_insert(e);
            generators.push(hol);
        }
    }
    ComponentResult {
        holonomy: ComponentHolonomy {
            free: first_bad.is_none(),
            holonomy_group_size: group_order(&generators, slots),
        },
        witness: first_bad.map(cycle_of),
    }
}

/// Transports facet frames around every transversal component and reports
/// whether all holonomies are trivial.
pub fn check_monodromy_free(fp: &FacePoset, lg: &LinkGraph) -> Result<MonodromyReport> {
    if fp.kind() != ComplexKind::Cubical {
        return Err(GarlandError::Parameter(
            "monodromy applies to cubical complexes only".into(),
        ));
    }
    let results: Vec<(usize, ComponentResult)> = lg
        .components
        .par_iter()
        .filter(|c| c.kind == ComponentKind::Transversal)
        .map(|c| (c.id, component_holonomy(fp, c)))
        .collect();
    let mut per_component = BTreeMap::new();
    let mut witness_cycle = None;
    for (id, r) in results {
        if witness_cycle.is_none() {
            witness_cycle = r.witness;
        }
        per_component.insert(id, r.holonomy);
    }
    Ok(MonodromyReport {
        free: per_component.values().all(|h| h.free),
        witness_cycle,
        per_component,
    })
}
