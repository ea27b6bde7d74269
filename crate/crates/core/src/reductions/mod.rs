//! Instance generators from exactly-1-in-3 SAT and transforms between
//! problem variants.
//!
//! Every generator returns the graph together with the formula and a role
//! for each class, so a realization can be decoded back to an assignment
//! and an assignment encoded as a realization.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula1in3};
use crate::graph::{build_cluster_graph, first_unrealized_edge, ColoredGraph, Realization};

mod chordal;
mod grid;
mod transform;

pub use chordal::{gen_biconvex, gen_chordal};
pub use grid::gen_grid;
pub use transform::{msgr_to_mgr, pad_to_size, MsgrOutcome, SubgraphTarget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Chordal,
    Biconvex,
    Grid,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Chordal => "chordal",
            ReductionKind::Biconvex => "biconvex",
            ReductionKind::Grid => "grid",
        }
    }
}

/// What a color class stands for. Variables and clauses are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Role {
    /// Two vertices: bit 0 then bit 1.
    Variable {
        var: usize,
    },
    /// Three vertices, one per variable of the clause that may be true.
    Clause {
        clause: usize,
    },
    Pad,
    /// Grid variable gadget; member index is the bit.
    Var {
        var: usize,
    },
    /// Grid clause border gadget; member index is the position.
    Cl {
        clause: usize,
    },
    /// Grid gadget for a variable occurring in the clause at `slot` (0..3).
    VarInCl {
        var: usize,
        clause: usize,
        slot: usize,
    },
    /// Grid gadget for a variable absent from the clause; member `2q + bit`.
    VarNotInCl {
        var: usize,
        clause: usize,
    },
}

/// Provenance carried alongside a generated graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub reduction: ReductionKind,
    pub formula: Formula1in3,
    pub roles: BTreeMap<usize, Role>,
    /// Grid only: `[row, col]` of every class.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_coords: Option<BTreeMap<usize, [usize; 2]>>,
    /// Biconvex only: x-classes in convex order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_order: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub graph: ColoredGraph,
    pub meta: GeneratorMeta,
}

impl GeneratedInstance {
    /// Class holding variable `var` whose member index is its bit.
    fn variable_class(&self, var: usize) -> usize {
        self.meta
            .roles
            .iter()
            .filter(
                |(_, r)| matches!(r, Role::Variable { var: v } | Role::Var { var: v } if *v == var),
            )
            .map(|(&c, _)| c)
            .next()
            .expect("every variable has a class")
    }

    /// Realization witnessing a 1-in-3 satisfying assignment.
    pub fn encode_assignment(&self, a: &Assignment) -> Result<Realization> {
        let f = &self.meta.formula;
        if !a.satisfies_1in3(f) {
            return Err(Error::Precondition(
                "assignment does not satisfy the formula".into(),
            ));
        }
        // Position of the true variable within each clause.
        let slot = |clause: usize| -> usize {
            f.clauses()[clause - 1]
                .iter()
                .position(|&x| a.var(x))
                .expect("satisfying assignment")
        };
        let k = self.graph.num_colors();
        let mut choice = Vec::with_capacity(k);
        for c in 0..k {
            let idx = match self.meta.roles[&c] {
                Role::Variable { var } | Role::Var { var } => a.var(var) as usize,
                Role::Clause { clause } | Role::Cl { clause } => slot(clause),
                Role::VarInCl { clause, .. } => slot(clause),
                Role::VarNotInCl { var, clause } => 2 * slot(clause) + a.var(var) as usize,
                Role::Pad => 0,
            };
            choice.push(self.graph.class_members(c)[idx]);
        }
        Ok(Realization::new(choice))
    }
}

/// Reads the assignment off the variable classes of a verified realization.
pub fn extract_assignment(gi: &GeneratedInstance, r: &Realization) -> Result<Assignment> {
    let q = build_cluster_graph(&gi.graph);
    if let Some((a, b)) = first_unrealized_edge(&gi.graph, &q, r)? {
        return Err(Error::NotRealized(format!(
            "cluster edge ({a},{b}) is not realized"
        )));
    }
    let n = gi.meta.formula.num_vars();
    let values = (1..=n)
        .map(|var| {
            let c = gi.variable_class(var);
            let members = gi.graph.class_members(c);
            let pos = members.iter().position(|&v| v == r.vertex(c)).unwrap();
            pos == 1
        })
        .collect();
    let a = Assignment::new(values);
    assert!(
        a.satisfies_1in3(&gi.meta.formula),
        "decoded assignment violates the formula"
    );
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{solve_1in3_bruteforce, solve_bruteforce};
    use crate::sample::random_formula;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn generators() -> [fn(&Formula1in3) -> Result<GeneratedInstance>; 3] {
        [gen_chordal, gen_biconvex, gen_grid]
    }

    #[test]
    fn generated_instances_match_sat_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let n = rng.random_range(3..=5);
            let m = rng.random_range(0..=2);
            let f = random_formula(&mut rng, n, m, false).unwrap();
            let sat = solve_1in3_bruteforce(&f).unwrap();
            for gen in generators() {
                let gi = gen(&f).unwrap();
                let r = solve_bruteforce(&gi.graph).unwrap();
                assert_eq!(
                    r.is_some(),
                    sat.is_some(),
                    "{:?} on {f:?}",
                    gi.meta.reduction
                );
                if let Some(r) = r {
                    let a = extract_assignment(&gi, &r).unwrap();
                    assert!(a.satisfies_1in3(&f));
                }
            }
        }
    }

    #[test]
    fn encode_then_extract_is_identity() {
        let f = Formula1in3::new(4, vec![[1, 2, 3], [2, 3, 4]]).unwrap();
        let a = Assignment::from_bits(&[0, 1, 0, 0]);
        for gen in generators() {
            let gi = gen(&f).unwrap();
            let r = gi.encode_assignment(&a).unwrap();
            assert_eq!(extract_assignment(&gi, &r).unwrap(), a);
        }
    }

    #[test]
    fn extract_rejects_unverified_choice() {
        let f = Formula1in3::new(3, vec![[1, 2, 3]]).unwrap();
        let gi = gen_chordal(&f).unwrap();
        let r = Realization::new(vec![0, 2, 4, 6]);
        assert!(matches!(
            extract_assignment(&gi, &r),
            Err(Error::NotRealized(_))
        ));
    }

    #[test]
    fn meta_roundtrips_through_json() {
        let f = Formula1in3::new(4, vec![[1, 2, 3], [2, 3, 4]]).unwrap();
        let gi = gen_grid(&f).unwrap();
        let text = serde_json::to_string(&gi.meta).unwrap();
        let back: GeneratorMeta = serde_json::from_str(&text).unwrap();
        assert_eq!(back, gi.meta);
    }
}
