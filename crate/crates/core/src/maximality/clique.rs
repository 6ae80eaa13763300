//! Maximum and maximal clique search on small dense graphs.
//!
//! Cliques of a graph decompose over the connected components of its
//! complement: a clique is a union of one clique per component, maximal
//! exactly when every part is maximal. Both searches therefore run per
//! co-component, which turns vertices adjacent to everything into trivial
//! singleton components.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|wi| wi * 64 + self.words[wi].trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Undirected simple graph on `0..len` with bitset rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<BitSet>,
}

impl Graph {
    pub fn new(len: usize) -> Self {
        Graph {
            rows: vec![BitSet::new(len); len],
        }
    }

    pub fn from_rows(rows: Vec<BitSet>) -> Self {
        Graph { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.rows[a].insert(b);
            self.rows[b].insert(a);
        }
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.rows[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &BitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count()
    }

    pub fn is_complete(&self) -> bool {
        (0..self.len()).all(|v| self.degree(v) + 1 == self.len())
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &a)| vertices[i + 1..].iter().all(|&b| self.adjacent(a, b)))
    }

    /// Induced subgraph on `vertices` (in that order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if self.adjacent(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Connected components of the complement, each sorted, ordered by
    /// smallest vertex.
    pub fn co_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for (u, flag) in seen.iter_mut().enumerate() {
                    if !*flag && u != v && !self.adjacent(u, v) {
                        *flag = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Vertices in degeneracy order: repeatedly strip a vertex of minimum
    /// remaining degree (smallest index on ties) and reverse the strip order,
    /// so the densest core comes first.
    pub fn degeneracy_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| !removed[v])
                .min_by_key(|&v| (deg[v], v))
                .unwrap();
            removed[v] = true;
            order.push(v);
            for u in self.rows[v].iter() {
                if !removed[u] {
                    deg[u] -= 1;
                }
            }
        }
        order.reverse();
        order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    /// Vertex indices, sorted.
    pub vertices: Vec<usize>,
    /// True when the search finished, so no larger clique exists.
    pub optimal: bool,
    pub expansions: u64,
}

/// Maximum clique by branch and bound with greedy-coloring bounds, capped
/// at `budget` node expansions. `seed`, when given, must be a clique and
/// serves as the starting incumbent.
pub fn max_clique(graph: &Graph, budget: u64, seed: Option<&[usize]>) -> CliqueResult {
    let seed_set: BTreeSet<usize> = seed.unwrap_or(&[]).iter().copied().collect();
    debug_assert!(graph.is_clique(&seed_set.iter().copied().collect::<Vec<_>>()));
    let mut vertices = Vec::new();
    let mut optimal = true;
    let mut expansions = 0u64;
    for comp in graph.co_components() {
        if comp.len() == 1 {
            vertices.push(comp[0]);
            continue;
        }
        let sub = graph.induced(&comp);
        let local_seed: Vec<usize> = comp
            .iter()
            .enumerate()
            .filter(|(_, v)| seed_set.contains(v))
            .map(|(i, _)| i)
            .collect();
        let left = budget.saturating_sub(expansions);
        let res = with_deep_stack(sub.len(), || branch_and_bound(&sub, left, &local_seed));
        expansions += res.expansions;
        optimal &= res.optimal;
        vertices.extend(res.vertices.iter().map(|&i| comp[i]));
    }
    vertices.sort_unstable();
    CliqueResult {
        vertices,
        optimal,
        expansions,
    }
}

// Both searches recurse once per clique vertex, so depth tracks the graph size.
fn with_deep_stack<T: Send>(vertices: usize, f: impl FnOnce() -> T + Send) -> T {
    let stack = (1 << 20) + vertices * 4096;
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(stack)
            .spawn_scoped(s, f)
            .expect("spawn search thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

struct Search<'a> {
    graph: &'a Graph,
    best: Vec<usize>,
    budget: u64,
    expansions: u64,
    aborted: bool,
}

fn branch_and_bound(graph: &Graph, budget: u64, seed: &[usize]) -> CliqueResult {
    let order = graph.degeneracy_order();
    let relabeled = graph.induced(&order);
    let mut position = vec![0; graph.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut best: Vec<usize> = seed.iter().map(|&v| position[v]).collect();
    let greedy = greedy_clique(&relabeled);
    if greedy.len() > best.len() {
        best = greedy;
    }
    let mut search = Search {
        graph: &relabeled,
        best,
        budget,
        expansions: 0,
        aborted: false,
    };
    let mut all = BitSet::new(relabeled.len());
    for v in 0..relabeled.len() {
        all.insert(v);
    }
    search.expand(&mut Vec::new(), all);
    let mut vertices: Vec<usize> = search.best.iter().map(|&i| order[i]).collect();
    vertices.sort_unstable();
    CliqueResult {
        vertices,
        optimal: !search.aborted,
        expansions: search.expansions,
    }
}

fn greedy_clique(graph: &Graph) -> Vec<usize> {
    let mut clique = Vec::new();
    let mut cand = BitSet::new(graph.len());
    for v in 0..graph.len() {
        cand.insert(v);
    }
    while let Some(v) = cand.first() {
        clique.push(v);
        cand = cand.intersect(graph.neighbors(v));
    }
    clique
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, mut cand: BitSet) {
        if self.aborted {
            return;
        }
        self.expansions += 1;
        if self.expansions > self.budget {
            self.aborted = true;
            return;
        }
        let (order, colors) = self.color(&cand);
        for idx in (0..order.len()).rev() {
            if current.len() + colors[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            current.push(v);
            let next = cand.intersect(self.graph.neighbors(v));
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            cand.remove(v);
            if self.aborted {
                return;
            }
        }
    }

    /// Greedy sequential coloring of `cand` in index order; returns the
    /// vertices sorted by color with the color number (1-based) of each,
    /// which bounds the clique size inside any prefix.
    fn color(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = cand.clone();
        let mut order = Vec::with_capacity(cand.count());
        let mut colors = Vec::with_capacity(order.capacity());
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.remove(v);
                avail = avail.difference(self.graph.neighbors(v));
                uncolored.remove(v);
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}

/// Outcome of enumerating maximal cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalCliqueSizes {
    /// Every size a maximal clique can have; complete only when `exhaustive`.
    pub sizes: BTreeSet<usize>,
    pub exhaustive: bool,
    /// Maximal cliques visited, summed over co-components.
    pub visited: u64,
}

/// Sizes of all maximal cliques, by Bron-Kerbosch with pivoting inside each
/// co-component and a sumset across components.
pub fn maximal_clique_sizes(graph: &Graph, budget: u64) -> MaximalCliqueSizes {
    let mut sizes = BTreeSet::from([0usize]);
    let mut exhaustive = true;
    let mut visited = 0u64;
    for comp in graph.co_components() {
        let local: BTreeSet<usize> = if comp.len() == 1 {
            visited += 1;
            BTreeSet::from([1])
        } else {
            let sub = graph.induced(&comp);
            let mut bk = BronKerbosch {
                graph: &sub,
                sizes: BTreeSet::new(),
                budget: budget.saturating_sub(visited),
                calls: 0,
                found: 0,
                aborted: false,
            };
            let mut all = BitSet::new(sub.len());
            for v in 0..sub.len() {
                all.insert(v);
            }
            with_deep_stack(sub.len(), || bk.run(0, all, BitSet::new(sub.len())));
            visited += bk.found;
            exhaustive &= !bk.aborted;
            bk.sizes
        };
        sizes = sizes
            .iter()
            .flat_map(|a| local.iter().map(move |b| a + b))
            .collect();
    }
    MaximalCliqueSizes {
        sizes,
        exhaustive,
        visited,
    }
}

struct BronKerbosch<'a> {
    graph: &'a Graph,
    sizes: BTreeSet<usize>,
    budget: u64,
    calls: u64,
    found: u64,
    aborted: bool,
}

impl BronKerbosch<'_> {
    fn run(&mut self, depth: usize, mut cand: BitSet, mut excluded: BitSet) {
        if self.aborted {
            return;
        }
        self.calls += 1;
        if self.calls > self.budget {
            self.aborted = true;
            return;
        }
        if cand.is_empty() {
            if excluded.is_empty() {
                self.sizes.insert(depth);
                self.found += 1;
            }
            return;
        }
        let pivot = cand
            .iter()
            .chain(excluded.iter())
            .max_by_key(|&u| {
                (
                    cand.intersect(self.graph.neighbors(u)).count(),
                    std::cmp::Reverse(u),
                )
            })
            .unwrap();
        let branch = cand.difference(self.graph.neighbors(pivot));
        for v in branch.iter() {
            let nb = self.graph.neighbors(v);
            self.run(depth + 1, cand.intersect(nb), excluded.intersect(nb));
            cand.remove(v);
            excluded.insert(v);
            if self.aborted {
                return;
            }
        }
    }
}
