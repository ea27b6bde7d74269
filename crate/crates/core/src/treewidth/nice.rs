use std::collections::BTreeSet;

use super::decomposition::{structural_violations, TreeDecomposition};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Start,
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    /// Sorted color ids.
    pub bag: Vec<usize>,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// A nice tree decomposition. Children always have smaller ids than their
/// parent, so ascending id order is a valid bottom-up schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        TreeDecomposition {
            bags: self.nodes.iter().map(|n| n.bag.clone()).collect(),
            edges: self
                .nodes
                .iter()
                .enumerate()
                .flat_map(|(p, n)| n.children.iter().map(move |&c| (p, c)))
                .collect(),
            root: self.root,
        }
    }

    /// Classes appearing in any bag of the subtree rooted at `node`.
    pub fn subtree_classes(&self, node: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            seen.extend(self.nodes[v].bag.iter().copied());
            stack.extend(self.nodes[v].children.iter().copied());
        }
        seen.into_iter().collect()
    }

    /// Every node whose kind does not match its bag relations.
    pub fn kind_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            let bag: BTreeSet<usize> = node.bag.iter().copied().collect();
            let child_bag = |i: usize| -> BTreeSet<usize> {
                self.nodes[node.children[i]].bag.iter().copied().collect()
            };
            let ok = match node.kind {
                NodeKind::Start => node.children.is_empty() && bag.len() == 1,
                NodeKind::Introduce(c) => {
                    node.children.len() == 1 && {
                        let child = child_bag(0);
                        child.is_subset(&bag)
                            && bag.len() == child.len() + 1
                            && bag.contains(&c)
                            && !child.contains(&c)
                    }
                }
                NodeKind::Forget(c) => {
                    node.children.len() == 1 && {
                        let child = child_bag(0);
                        bag.is_subset(&child)
                            && child.len() == bag.len() + 1
                            && child.contains(&c)
                            && !bag.contains(&c)
                    }
                }
                NodeKind::Join => {
                    node.children.len() == 2 && child_bag(0) == bag && child_bag(1) == bag
                }
            };
            if !ok {
                out.push(format!(
                    "node {id} is not a well-formed {:?} node",
                    node.kind
                ));
            }
            if node.children.iter().any(|&c| c >= id) {
                out.push(format!("node {id} has a child with a larger id"));
            }
        }
        out
    }
}

struct Builder<'a> {
    t: &'a TreeDecomposition,
    children: Vec<Vec<usize>>,
    nodes: Vec<NiceNode>,
}

impl Builder<'_> {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            bag,
            kind,
            children,
        });
        self.nodes.len() - 1
    }

    /// Forget what `to` lacks, then introduce what it adds, one class at a time.
    fn chain(&mut self, mut top: usize, to: &[usize]) -> usize {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &c in from.iter().filter(|c| !to.contains(c)) {
            bag.retain(|&x| x != c);
            top = self.push(bag.clone(), NodeKind::Forget(c), vec![top]);
        }
        for &c in to.iter().filter(|c| !from.contains(c)) {
            bag.push(c);
            bag.sort_unstable();
            top = self.push(bag.clone(), NodeKind::Introduce(c), vec![top]);
        }
        top
    }

    /// Nice subtree for `node`; its top bag equals `node`'s bag. `None` when
    /// the whole subtree has empty bags.
    fn build(&mut self, node: usize) -> Option<usize> {
        let mut bag = self.t.bags[node].clone();
        bag.sort_unstable();
        let mut tops = Vec::new();
        for c in self.children[node].clone() {
            if let Some(top) = self.build(c) {
                tops.push(self.chain(top, &bag));
            }
        }
        if tops.is_empty() {
            let (&first, rest) = bag.split_first()?;
            let mut top = self.push(vec![first], NodeKind::Start, vec![]);
            let mut cur = vec![first];
            for &c in rest {
                cur.push(c);
                cur.sort_unstable();
                top = self.push(cur.clone(), NodeKind::Introduce(c), vec![top]);
            }
            return Some(top);
        }
        let mut acc = tops[0];
        for &t in &tops[1..] {
            acc = self.push(bag.clone(), NodeKind::Join, vec![acc, t]);
        }
        Some(acc)
    }
}

/// Converts a rooted decomposition into a nice one of the same width. The
/// root keeps its bag.
pub fn make_nice(t: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let violations = structural_violations(t);
    if !violations.is_empty() {
        return Err(Error::InvalidDecomposition(violations));
    }
    let mut b = Builder {
        t,
        children: t.children(),
        nodes: Vec::new(),
    };
    let root = b
        .build(t.root)
        .ok_or_else(|| Error::InvalidDecomposition(vec!["every bag is empty".to_string()]))?;
    Ok(NiceTreeDecomposition {
        nodes: b.nodes,
        root,
    })
}
