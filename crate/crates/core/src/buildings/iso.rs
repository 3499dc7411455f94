use std::collections::{BTreeSet, HashMap};

use crate::error::{HdxError, Result};
use crate::simplicial::{Complex, Simplex};

struct Side<'a> {
    x: &'a Complex,
    adj: Vec<Vec<usize>>,
    inv: Vec<(usize, usize)>,
    colors: Option<Vec<u32>>,
}

impl<'a> Side<'a> {
    fn new(x: &'a Complex, colors: Option<&HashMap<u32, u32>>) -> Result<Side<'a>> {
        let adj = x.adjacency();
        let mut facet_deg = vec![0usize; x.num_vertices()];
        for f in x.facets() {
            for v in f {
                facet_deg[x.vertex_index(*v).unwrap()] += 1;
            }
        }
        let inv = (0..x.num_vertices()).map(|i| (adj[i].len(), facet_deg[i])).collect();
        let colors = match colors {
            None => None,
            Some(c) => Some(
                x.vertices()
                    .iter()
                    .map(|v| c.get(v).copied().ok_or_else(|| HdxError::Domain(format!("vertex {v} has no type"))))
                    .collect::<Result<Vec<u32>>>()?,
            ),
        };
        Ok(Side { x, adj, inv, colors })
    }
}

/// Searches for a simplicial isomorphism `x → y`, optionally mapping the
/// vertex types of `x` bijectively onto those of `y`. Returns the vertex map.
pub fn complexes_isomorphic(
    x: &Complex,
    y: &Complex,
    types: Option<(&HashMap<u32, u32>, &HashMap<u32, u32>)>,
    node_cap: u64,
) -> Result<Option<HashMap<u32, u32>>> {
    isomorphism_with_pins(x, y, types, &[], node_cap)
}

/// As [`complexes_isomorphic`], with some vertex images fixed in advance.
pub fn isomorphism_with_pins(
    x: &Complex,
    y: &Complex,
    types: Option<(&HashMap<u32, u32>, &HashMap<u32, u32>)>,
    pins: &[(u32, u32)],
    node_cap: u64,
) -> Result<Option<HashMap<u32, u32>>> {
    let mut nodes = 0u64;
    pinned_search(x, y, types, pins, &mut nodes, node_cap)
}

fn pinned_search(
    x: &Complex,
    y: &Complex,
    types: Option<(&HashMap<u32, u32>, &HashMap<u32, u32>)>,
    pins: &[(u32, u32)],
    nodes: &mut u64,
    node_cap: u64,
) -> Result<Option<HashMap<u32, u32>>> {
    if x.face_counts() != y.face_counts() || x.facets().len() != y.facets().len() {
        return Ok(None);
    }
    let a = Side::new(x, types.map(|t| t.0))?;
    let b = Side::new(y, types.map(|t| t.1))?;
    let mut ia = a.inv.clone();
    let mut ib = b.inv.clone();
    ia.sort_unstable();
    ib.sort_unstable();
    if ia != ib {
        return Ok(None);
    }
    let n = x.num_vertices();
    let mut forced = vec![None; n];
    for &(u, v) in pins {
        let (Some(i), Some(j)) = (x.vertex_index(u), y.vertex_index(v)) else {
            return Err(HdxError::Domain(format!("pinned pair ({u}, {v}) is not a pair of vertices")));
        };
        forced[i] = Some(j);
    }
    let order = search_order(&a, &forced);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut color_map: HashMap<u32, u32> = HashMap::new();
    let mut color_back: HashMap<u32, u32> = HashMap::new();
    let yfacets: BTreeSet<&Simplex> = y.facets().iter().collect();
    let found = extend(
        0,
        &order,
        &forced,
        &a,
        &b,
        &mut map,
        &mut used,
        &mut color_map,
        &mut color_back,
        &yfacets,
        nodes,
        node_cap,
    )?;
    Ok(found.then(|| (0..n).map(|i| (x.vertices()[i], y.vertices()[map[i]])).collect()))
}

fn search_order(a: &Side, forced: &[Option<usize>]) -> Vec<usize> {
    let n = a.x.num_vertices();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&i| (forced[i].is_none(), std::cmp::Reverse(a.inv[i])));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &a.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    forced: &[Option<usize>],
    a: &Side,
    b: &Side,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    color_map: &mut HashMap<u32, u32>,
    color_back: &mut HashMap<u32, u32>,
    yfacets: &BTreeSet<&Simplex>,
    nodes: &mut u64,
    cap: u64,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > cap {
        return Err(HdxError::Resource(format!("isomorphism search exceeded {cap} nodes")));
    }
    if depth == order.len() {
        return Ok(facets_match(a.x, b.x, map, yfacets));
    }
    let v = order[depth];
    for c in 0..b.x.num_vertices() {
        if used[c] || a.inv[v] != b.inv[c] || forced[v].is_some_and(|f| f != c) {
            continue;
        }
        let mut new_color = None;
        if let (Some(ca), Some(cb)) = (&a.colors, &b.colors) {
            match (color_map.get(&ca[v]), color_back.get(&cb[c])) {
                (Some(&t), _) if t != cb[c] => continue,
                (None, Some(_)) => continue,
                (None, None) => new_color = Some((ca[v], cb[c])),
                _ => {}
            }
        }
        let consistent = order[..depth].iter().all(|&u| {
            let adj_a = a.adj[v].binary_search(&u).is_ok();
            let adj_b = b.adj[c].binary_search(&map[u]).is_ok();
            adj_a == adj_b
        });
        if !consistent {
            continue;
        }
        if let Some((p, q)) = new_color {
            color_map.insert(p, q);
            color_back.insert(q, p);
        }
        map[v] = c;
        used[c] = true;
        if extend(depth + 1, order, forced, a, b, map, used, color_map, color_back, yfacets, nodes, cap)? {
            return Ok(true);
        }
        used[c] = false;
        map[v] = usize::MAX;
        if let Some((p, q)) = new_color {
            color_map.remove(&p);
            color_back.remove(&q);
        }
    }
    Ok(false)
}

fn facets_match(x: &Complex, y: &Complex, map: &[usize], yfacets: &BTreeSet<&Simplex>) -> bool {
    x.facets().iter().all(|f| {
        let mut img: Simplex = f.iter().map(|v| y.vertices()[map[x.vertex_index(*v).unwrap()]]).collect();
        img.sort_unstable();
        yfacets.contains(&img)
    })
}

/// Whether the automorphism group of `x` acts transitively on its facets.
/// Grows the orbit of the first facet under automorphisms found by pinned
/// searches, one search per facet not yet reached. `node_cap` bounds the
/// total work over all searches.
pub fn facet_transitive(x: &Complex, node_cap: u64) -> Result<bool> {
    let mut nodes = 0u64;
    let facets = x.facets();
    let Some(f0) = facets.first() else {
        return Ok(true);
    };
    if !x.is_pure() {
        return Ok(false);
    }
    let all: BTreeSet<&Simplex> = facets.iter().collect();
    let mut autos: Vec<HashMap<u32, u32>> = Vec::new();
    let mut orbit: BTreeSet<Simplex> = BTreeSet::from([f0.clone()]);
    for target in facets {
        if orbit.contains(target) {
            continue;
        }
        let mut found = None;
        for perm in permutations(target) {
            let pins: Vec<(u32, u32)> = f0.iter().copied().zip(perm).collect();
            if let Some(m) = pinned_search(x, x, None, &pins, &mut nodes, node_cap)? {
                found = Some(m);
                break;
            }
        }
        let Some(m) = found else {
            return Ok(false);
        };
        autos.push(m);
        let mut queue: Vec<Simplex> = orbit.iter().cloned().collect();
        while let Some(f) = queue.pop() {
            for a in &autos {
                let mut img: Simplex = f.iter().map(|v| a[v]).collect();
                img.sort_unstable();
                debug_assert!(all.contains(&img));
                if orbit.insert(img.clone()) {
                    queue.push(img);
                }
            }
        }
    }
    Ok(true)
}

fn permutations(s: &[u32]) -> Vec<Vec<u32>> {
    if s.len() <= 1 {
        return vec![s.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..s.len() {
        let mut rest = s.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard;

    #[test]
    fn octahedron_relabelled() {
        let o = standard::octahedron();
        let p = Complex::from_labelled_faces(&[
            vec!["1", "3", "5"],
            vec!["1", "3", "6"],
            vec!["1", "4", "5"],
            vec!["1", "4", "6"],
            vec!["2", "3", "5"],
            vec!["2", "3", "6"],
            vec!["2", "4", "5"],
            vec!["2", "4", "6"],
        ])
        .unwrap();
        assert!(complexes_isomorphic(&o, &p, None, 1 << 20).unwrap().is_some());
        let cube = standard::cycle(8).unwrap();
        assert!(complexes_isomorphic(&o, &cube, None, 1 << 20).unwrap().is_none());
    }

    #[test]
    fn transitivity() {
        assert!(facet_transitive(&standard::octahedron(), 1 << 20).unwrap());
        assert!(facet_transitive(&standard::cycle(7).unwrap(), 1 << 20).unwrap());
        assert!(!facet_transitive(&standard::path(4).unwrap(), 1 << 20).unwrap());
    }
}
