//! File formats: JSON instances, realizations and decompositions, plus DOT export.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    build_cluster_graph, validate_instance, ClusterGraph, ColoredGraph, InstanceData, Realization,
};
use crate::reductions::{GeneratedInstance, GeneratorMeta};
use crate::treewidth::TreeDecomposition;

const INSTANCE_KEYS: [&str; 6] = [
    "num_vertices",
    "colors",
    "edges",
    "meta",
    "x_order",
    "cluster_edges",
];

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct InstanceFile {
    pub num_vertices: usize,
    pub colors: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<GeneratorMeta>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_order: Option<Vec<usize>>,
    /// Optional declared cluster graph; checked against the computed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster_edges: Option<Vec<[usize; 2]>>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Reject unknown top-level keys.
    pub strict: bool,
    /// Renumber arbitrary color labels to `0..k`.
    pub reindex: bool,
}

#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub graph: ColoredGraph,
    pub meta: Option<GeneratorMeta>,
    pub x_order: Option<Vec<usize>>,
    /// Original color label of every class when reindexed.
    pub labels: Option<Vec<usize>>,
}

impl LoadedInstance {
    /// The generator provenance, if the file carries one.
    pub fn generated(&self) -> Result<GeneratedInstance> {
        let meta = self.meta.clone().ok_or(Error::MissingProvenance)?;
        Ok(GeneratedInstance {
            graph: self.graph.clone(),
            meta,
        })
    }

    /// Explicit x-order, falling back to the generator's.
    pub fn x_order(&self) -> Option<&[usize]> {
        self.x_order
            .as_deref()
            .or_else(|| self.meta.as_ref().and_then(|m| m.x_order.as_deref()))
    }
}

pub fn parse_instance(text: &str, opts: LoadOptions) -> Result<LoadedInstance> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Format("instance must be a JSON object".into()))?;
    if opts.strict {
        if let Some(key) = obj.keys().find(|k| !INSTANCE_KEYS.contains(&k.as_str())) {
            return Err(Error::Format(format!("unknown field `{key}`")));
        }
    }
    let file: InstanceFile = serde_json::from_value(value)?;
    let mut data = InstanceData {
        num_vertices: file.num_vertices,
        colors: file.colors,
        edges: file.edges,
    };
    let mut labels = None;
    if opts.reindex {
        let (d, l) = data.reindex_colors();
        data = d;
        labels = Some(l);
    }
    let violations = validate_instance(&data);
    if !violations.is_empty() {
        return Err(Error::InvalidInstance(violations));
    }
    let graph = ColoredGraph::from_data(&data)?;
    if let Some(declared) = &file.cluster_edges {
        let q = build_cluster_graph(&graph);
        let mut declared: Vec<(usize, usize)> = declared
            .iter()
            .map(|&[a, b]| (a.min(b), a.max(b)))
            .collect();
        declared.sort_unstable();
        declared.dedup();
        if declared != q.edges() {
            let missing = q.edges().iter().find(|e| !declared.contains(e));
            let extra = declared.iter().find(|e| !q.edges().contains(e));
            let detail = match (missing, extra) {
                (_, Some(&(a, b))) => format!("declared cluster edge ({a},{b}) has no cross links"),
                (Some(&(a, b)), _) => format!("cluster edge ({a},{b}) is not declared"),
                _ => unreachable!(),
            };
            return Err(Error::Format(detail));
        }
    }
    Ok(LoadedInstance {
        graph,
        meta: file.meta,
        x_order: file.x_order,
        labels,
    })
}

pub fn instance_json(
    g: &ColoredGraph,
    meta: Option<&GeneratorMeta>,
    x_order: Option<&[usize]>,
) -> String {
    let data = g.to_data();
    let file = InstanceFile {
        num_vertices: data.num_vertices,
        colors: data.colors,
        edges: data.edges,
        meta: meta.cloned(),
        x_order: x_order.map(<[usize]>::to_vec),
        cluster_edges: None,
    };
    serde_json::to_string_pretty(&file).expect("instance serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RealizationFile {
    choice: BTreeMap<usize, usize>,
}

pub fn parse_realization(text: &str, num_classes: usize) -> Result<Realization> {
    let file: RealizationFile = serde_json::from_str(text)?;
    Realization::from_map(&file.choice, num_classes)
}

pub fn realization_json(r: &Realization) -> String {
    serde_json::to_string_pretty(&RealizationFile { choice: r.to_map() }).expect("serializes")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionFile {
    bags: BTreeMap<usize, Vec<usize>>,
    edges: Vec<[usize; 2]>,
    root: usize,
}

/// Bag ids must be `0..len` without gaps.
pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    let file: DecompositionFile = serde_json::from_str(text)?;
    let n = file.bags.len();
    if let Some((&id, _)) = file
        .bags
        .iter()
        .enumerate()
        .find(|(i, (&id, _))| *i != id)
        .map(|(_, e)| e)
    {
        return Err(Error::Format(format!(
            "bag ids must be 0..{n} without gaps; found {id}"
        )));
    }
    Ok(TreeDecomposition {
        bags: file.bags.into_values().collect(),
        edges: file.edges.into_iter().map(|[p, c]| (p, c)).collect(),
        root: file.root,
    })
}

pub fn decomposition_json(t: &TreeDecomposition) -> String {
    let file = DecompositionFile {
        bags: t.bags.iter().cloned().enumerate().collect(),
        edges: t.edges.iter().map(|&(p, c)| [p, c]).collect(),
        root: t.root,
    };
    serde_json::to_string_pretty(&file).expect("serializes")
}

/// The graph with one DOT cluster per color class.
pub fn graph_dot(g: &ColoredGraph) -> String {
    let mut out = String::from("graph G {\n");
    for (c, members) in g.classes().iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{c} {{\n    label=\"{c}\";");
        for v in members {
            let _ = writeln!(out, "    v{v};");
        }
        out.push_str("  }\n");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  v{u} -- v{v};");
    }
    out.push_str("}\n");
    out
}

pub fn quotient_dot(q: &ClusterGraph) -> String {
    let mut out = String::from("graph Q {\n");
    for c in 0..q.num_classes() {
        let _ = writeln!(
            out,
            "  c{c} [label=\"{c} ({})\"];",
            q.class_members(c).len()
        );
    }
    for &(a, b) in q.edges() {
        let _ = writeln!(out, "  c{a} -- c{b};");
    }
    out.push_str("}\n");
    out
}
