use super::{Graph, UnionFind};
use crate::error::{invalid, Result};

/// A family of acyclic edge subsets of a host graph together with the
/// probability `r(e)` that a uniformly drawn member contains edge `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestFamily {
    members: Vec<Vec<usize>>,
    inclusion: Vec<f64>,
}

impl ForestFamily {
    /// Builds a family from explicit members (lists of host edge indices).
    /// Members may overlap; each must be acyclic and together they must
    /// cover every host edge.
    pub fn new(host: &Graph, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut count = vec![0usize; host.m()];
        let mut members = members;
        for (i, member) in members.iter_mut().enumerate() {
            member.sort_unstable();
            member.dedup();
            if let Some(&e) = member.iter().find(|&&e| e >= host.m()) {
                return invalid(format!("member {i} references edge {e} not in host"));
            }
            if !host.edge_subgraph(member).is_acyclic() {
                return invalid(format!("member {i} contains a cycle"));
            }
            for &e in member.iter() {
                count[e] += 1;
            }
        }
        if let Some(e) = count.iter().position(|&c| c == 0) {
            return invalid(format!("edge {:?} is not covered by any member", host.edges()[e]));
        }
        let k = members.len() as f64;
        let inclusion = count.iter().map(|&c| c as f64 / k).collect();
        Ok(ForestFamily { members, inclusion })
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `r(e)` per host edge index.
    pub fn inclusion(&self) -> &[f64] {
        &self.inclusion
    }

    /// Smallest inclusion probability; `None` for an empty host.
    pub fn r_min(&self) -> Option<f64> {
        self.inclusion.iter().copied().reduce(f64::min)
    }

    pub fn member_edges(&self, host: &Graph, i: usize) -> Vec<(usize, usize)> {
        self.members[i].iter().map(|&e| host.edges()[e]).collect()
    }

    /// Serializes as one line per member: space-separated edge indices.
    pub fn to_text(&self) -> String {
        self.members
            .iter()
            .map(|m| m.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }
}

/// Edge-disjoint forests covering `g`.
///
/// The number of forests `k` is the peel count: each round peels a DFS
/// spanning forest of the edges that remain, which is maximal in the
/// remaining graph, so `k` is an upper bound on the arboricity. Edges are
/// then dealt into `k` forests one at a time, each going to the forest
/// where it closes no cycle and joins the smallest component. Small
/// components matter to the census: on a long path member with a single
/// admissible agreement count, the parity of the disagreements fixes
/// whether the two path ends agree, so they agree either always or never.
/// If some edge fits no forest, the peeled forests are kept instead, with
/// a rebalancing pass that moves edges from the largest to the smallest
/// forest while it stays acyclic.
pub fn forest_partition(g: &Graph) -> ForestFamily {
    let mut remaining = vec![true; g.m()];
    let mut left = g.m();
    let mut forests: Vec<Vec<usize>> = Vec::new();
    while left > 0 {
        let forest = dfs_forest(g, &remaining);
        for &e in &forest {
            remaining[e] = false;
        }
        left -= forest.len();
        forests.push(forest);
    }
    let mut forests = match deal(g, forests.len()) {
        Some(dealt) => dealt,
        None => {
            rebalance(g, &mut forests);
            forests
        }
    };
    for f in &mut forests {
        f.sort_unstable();
    }
    let k = forests.len() as f64;
    ForestFamily { inclusion: vec![1.0 / k; g.m()], members: forests }
}

/// Deals edges in host order into `k` forests, smallest merged component
/// first (ties: fewer edges, then lower index). `None` if an edge fits
/// nowhere.
fn deal(g: &Graph, k: usize) -> Option<Vec<Vec<usize>>> {
    let mut forests = vec![Vec::new(); k];
    let mut uf: Vec<UnionFind> = (0..k).map(|_| UnionFind::new(g.n())).collect();
    let mut size = vec![vec![1usize; g.n()]; k];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut best: Option<(usize, usize, usize)> = None;
        for j in 0..k {
            let (ru, rv) = (uf[j].find(u), uf[j].find(v));
            if ru == rv {
                continue;
            }
            let key = (size[j][ru] + size[j][rv], forests[j].len(), j);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (merged, _, j) = best?;
        uf[j].union(u, v);
        let root = uf[j].find(u);
        size[j][root] = merged;
        forests[j].push(e);
    }
    Some(forests)
}

fn dfs_forest(g: &Graph, alive: &[bool]) -> Vec<usize> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut picked = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (u, pos) = *top;
            let nbrs = g.neighbors(u);
            if pos == nbrs.len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let v = nbrs[pos];
            let e = g.edge_index(u, v).unwrap();
            if alive[e] && !seen[v] {
                seen[v] = true;
                picked.push(e);
                stack.push((v, 0));
            }
        }
    }
    picked
}

fn rebalance(g: &Graph, forests: &mut [Vec<usize>]) {
    if forests.len() < 2 {
        return;
    }
    loop {
        let big = (0..forests.len()).max_by_key(|&i| (forests[i].len(), usize::MAX - i)).unwrap();
        let small = (0..forests.len()).min_by_key(|&i| (forests[i].len(), i)).unwrap();
        if forests[big].len() <= forests[small].len() + 1 {
            return;
        }
        let mut uf = UnionFind::new(g.n());
        let mut touched = vec![false; g.n()];
        for &e in &forests[small] {
            let (u, v) = g.edges()[e];
            uf.union(u, v);
            touched[u] = true;
            touched[v] = true;
        }
        let fits = |uf: &mut UnionFind, e: usize| {
            let (u, v) = g.edges()[e];
            uf.find(u) != uf.find(v)
        };
        let candidates = &forests[big];
        // Prefer an edge that extends the smaller forest's existing trees.
        let pick = candidates
            .iter()
            .position(|&e| {
                let (u, v) = g.edges()[e];
                (touched[u] || touched[v]) && fits(&mut uf, e)
            })
            .or_else(|| candidates.iter().position(|&e| fits(&mut uf, e)));
        match pick {
            Some(pos) => {
                let e = forests[big].remove(pos);
                forests[small].push(e);
            }
            None => return,
        }
    }
}
