use super::decomposition::validate_decomposition;
use super::nice::{NiceTreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::graph::{build_cluster_graph, ClusterGraph, ColoredGraph, Realization};
use crate::par;

pub const DEFAULT_MAX_TABLE_CELLS: u64 = 1 << 24;

#[derive(Clone, Copy, Debug)]
pub struct TreewidthOptions {
    /// Upper limit on the cells of any single bag table.
    pub max_table_cells: u64,
    /// Evaluate sibling subtrees under a join concurrently.
    pub parallel: bool,
}

impl Default for TreewidthOptions {
    fn default() -> Self {
        TreewidthOptions {
            max_table_cells: DEFAULT_MAX_TABLE_CELLS,
            parallel: true,
        }
    }
}

/// Table of one nice node: one boolean per selection of a vertex for every
/// bag class. Selections are indexed in mixed radix over the sorted bag,
/// last class least significant.
#[derive(Clone, Debug)]
pub struct BagTable {
    pub node: usize,
    pub classes: Vec<usize>,
    radices: Vec<usize>,
    pub entries: Vec<bool>,
    /// Forget nodes only: member index of the least witness per true entry.
    witness: Vec<u32>,
}

impl BagTable {
    fn empty(node: usize, classes: Vec<usize>, q: &ClusterGraph) -> Self {
        let radices: Vec<usize> = classes.iter().map(|&c| q.class_members(c).len()).collect();
        let cells = radices.iter().product();
        BagTable {
            node,
            classes,
            radices,
            entries: vec![false; cells],
            witness: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Member indices of the selection at `idx`, aligned with `classes`.
    pub fn digits(&self, mut idx: usize) -> Vec<usize> {
        let mut d = vec![0; self.radices.len()];
        for (slot, &r) in d.iter_mut().zip(&self.radices).rev() {
            *slot = idx % r;
            idx /= r;
        }
        d
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&d, &r)| acc * r + d)
    }

    /// `(class, vertex)` pairs of the selection at `idx`.
    pub fn selection(&self, q: &ClusterGraph, idx: usize) -> Vec<(usize, usize)> {
        self.classes
            .iter()
            .zip(self.digits(idx))
            .map(|(&c, d)| (c, q.class_members(c)[d]))
            .collect()
    }
}

#[derive(Clone, Debug, Default)]
pub struct TreewidthStats {
    /// Cells per nice node, indexed by node id.
    pub table_sizes: Vec<usize>,
    /// Adjacency lookups done at introduce nodes.
    pub adjacency_tests: u64,
    pub cells_computed: u64,
}

impl TreewidthStats {
    pub fn max_table_size(&self) -> usize {
        self.table_sizes.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct TreewidthOutcome {
    pub realization: Option<Realization>,
    pub stats: TreewidthStats,
    /// Every bag table, indexed by node id.
    pub tables: Vec<BagTable>,
}

pub fn solve_treewidth_dp(
    g: &ColoredGraph,
    nt: &NiceTreeDecomposition,
) -> Result<Option<Realization>> {
    Ok(solve_treewidth_dp_with(g, nt, &TreewidthOptions::default())?.realization)
}

pub fn solve_treewidth_dp_with(
    g: &ColoredGraph,
    nt: &NiceTreeDecomposition,
    opts: &TreewidthOptions,
) -> Result<TreewidthOutcome> {
    let q = build_cluster_graph(g);
    let mut problems = validate_decomposition(&q, &nt.to_tree_decomposition()).violations;
    problems.extend(nt.kind_violations());
    if !problems.is_empty() {
        return Err(Error::InvalidDecomposition(problems));
    }
    let mut table_sizes = Vec::with_capacity(nt.len());
    for node in &nt.nodes {
        let cells = node
            .bag
            .iter()
            .try_fold(1u64, |acc, &c| {
                acc.checked_mul(q.class_members(c).len() as u64)
            })
            .unwrap_or(u64::MAX);
        if cells > opts.max_table_cells {
            return Err(Error::BudgetExceeded {
                budget: "max-table-cells",
                limit: opts.max_table_cells,
            });
        }
        table_sizes.push(cells as usize);
    }

    let eval = Eval {
        g,
        q: &q,
        nt,
        parallel: opts.parallel,
    };
    let (list, counters) = eval.subtree(nt.root);
    let mut slots: Vec<Option<BagTable>> = vec![None; nt.len()];
    for t in list {
        let id = t.node;
        slots[id] = Some(t);
    }
    let tables: Vec<BagTable> = slots
        .into_iter()
        .map(|t| t.expect("every node evaluated"))
        .collect();

    let stats = TreewidthStats {
        table_sizes,
        adjacency_tests: counters.adjacency_tests,
        cells_computed: counters.cells,
    };
    let realization = tables[nt.root]
        .entries
        .iter()
        .position(|&b| b)
        .map(|idx| reconstruct(g, &q, nt, &tables, idx));
    Ok(TreewidthOutcome {
        realization,
        stats,
        tables,
    })
}

#[derive(Clone, Copy, Default)]
struct Counters {
    adjacency_tests: u64,
    cells: u64,
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        self.adjacency_tests += o.adjacency_tests;
        self.cells += o.cells;
    }
}

struct Eval<'a> {
    g: &'a ColoredGraph,
    q: &'a ClusterGraph,
    nt: &'a NiceTreeDecomposition,
    parallel: bool,
}

impl Eval<'_> {
    /// Tables of the subtree at `node`, with `node`'s own table last. Chains
    /// of introduce and forget nodes are walked iteratively; only joins recurse.
    fn subtree(&self, node: usize) -> (Vec<BagTable>, Counters) {
        let mut chain = Vec::new();
        let mut cur = node;
        while let NodeKind::Introduce(_) | NodeKind::Forget(_) = self.nt.nodes[cur].kind {
            chain.push(cur);
            cur = self.nt.nodes[cur].children[0];
        }
        let mut counters = Counters::default();
        let mut out = match self.nt.nodes[cur].kind {
            NodeKind::Join => {
                let [a, b] = self.nt.nodes[cur].children[..] else {
                    unreachable!("validated join")
                };
                let ((mut ta, ca), (tb, cb)) =
                    par::join(self.parallel, || self.subtree(a), || self.subtree(b));
                counters += ca;
                counters += cb;
                let left = ta.last().expect("non-empty subtree");
                let right = tb.last().expect("non-empty subtree");
                let mut t = BagTable::empty(cur, left.classes.clone(), self.q);
                for (e, (&x, &y)) in t
                    .entries
                    .iter_mut()
                    .zip(left.entries.iter().zip(&right.entries))
                {
                    *e = x && y;
                }
                counters.cells += t.len() as u64;
                ta.extend(tb);
                ta.push(t);
                ta
            }
            NodeKind::Start => {
                let mut t = BagTable::empty(cur, self.nt.nodes[cur].bag.clone(), self.q);
                t.entries.fill(true);
                counters.cells += t.len() as u64;
                vec![t]
            }
            _ => unreachable!("chain walk stops at join or start"),
        };
        for &id in chain.iter().rev() {
            let child = out.last().expect("child table present");
            let t = match self.nt.nodes[id].kind {
                NodeKind::Introduce(c) => self.introduce(id, c, child, &mut counters),
                NodeKind::Forget(c) => self.forget(id, c, child),
                _ => unreachable!(),
            };
            counters.cells += t.len() as u64;
            out.push(t);
        }
        (out, counters)
    }

    fn introduce(
        &self,
        id: usize,
        class: usize,
        child: &BagTable,
        counters: &mut Counters,
    ) -> BagTable {
        let mut t = BagTable::empty(id, self.nt.nodes[id].bag.clone(), self.q);
        let pos = t
            .classes
            .binary_search(&class)
            .expect("introduced class in bag");
        let members = self.q.class_members(class);
        let adjacent: Vec<usize> = (0..t.classes.len())
            .filter(|&j| j != pos && self.q.has_edge(class, t.classes[j]))
            .collect();
        for idx in 0..t.len() {
            let mut digits = t.digits(idx);
            let x = members[digits[pos]];
            let mut ok = true;
            for &j in &adjacent {
                counters.adjacency_tests += 1;
                if !self
                    .g
                    .has_edge(x, self.q.class_members(t.classes[j])[digits[j]])
                {
                    ok = false;
                    break;
                }
            }
            if ok {
                digits.remove(pos);
                ok = child.entries[child.index_of(&digits)];
            }
            t.entries[idx] = ok;
        }
        t
    }

    fn forget(&self, id: usize, class: usize, child: &BagTable) -> BagTable {
        let mut t = BagTable::empty(id, self.nt.nodes[id].bag.clone(), self.q);
        t.witness = vec![0; t.len()];
        let pos = child
            .classes
            .binary_search(&class)
            .expect("forgotten class in child");
        for idx in 0..t.len() {
            let mut digits = t.digits(idx);
            digits.insert(pos, 0);
            for x in 0..child.radices[pos] {
                digits[pos] = x;
                if child.entries[child.index_of(&digits)] {
                    t.entries[idx] = true;
                    t.witness[idx] = x as u32;
                    break;
                }
            }
        }
        t
    }
}

fn reconstruct(
    g: &ColoredGraph,
    q: &ClusterGraph,
    nt: &NiceTreeDecomposition,
    tables: &[BagTable],
    root_idx: usize,
) -> Realization {
    let mut choice: Vec<Option<usize>> = vec![None; g.num_colors()];
    for (c, v) in tables[nt.root].selection(q, root_idx) {
        choice[c] = Some(v);
    }
    let mut stack = vec![(nt.root, root_idx)];
    while let Some((id, idx)) = stack.pop() {
        let node = &nt.nodes[id];
        match node.kind {
            NodeKind::Start => {}
            NodeKind::Join => {
                stack.push((node.children[0], idx));
                stack.push((node.children[1], idx));
            }
            NodeKind::Introduce(c) => {
                let mut digits = tables[id].digits(idx);
                let pos = tables[id].classes.binary_search(&c).unwrap();
                digits.remove(pos);
                let child = node.children[0];
                stack.push((child, tables[child].index_of(&digits)));
            }
            NodeKind::Forget(c) => {
                let x = tables[id].witness[idx] as usize;
                choice[c] = Some(q.class_members(c)[x]);
                let child = node.children[0];
                let mut digits = tables[id].digits(idx);
                let pos = tables[child].classes.binary_search(&c).unwrap();
                digits.insert(pos, x);
                stack.push((child, tables[child].index_of(&digits)));
            }
        }
    }
    Realization::new(
        choice
            .into_iter()
            .map(|v| v.expect("every class is in the root bag or forgotten"))
            .collect(),
    )
}
