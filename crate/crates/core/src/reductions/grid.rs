use std::collections::BTreeMap;

use super::{GeneratedInstance, GeneratorMeta, ReductionKind, Role};
use crate::error::Result;
use crate::formula::Formula1in3;
use crate::graph::ColoredGraph;

// Member layouts:
//   Var        [bit 0 (right), bit 1 (left)]
//   Cl, VarInCl [upper, middle, lower]        index q
//   VarNotInCl [q0b0, q0b1, q1b0, q1b1, q2b0, q2b1]  index 2q + bit
//   Pad        [single]

struct Cell {
    role: Role,
    first: usize,
}

impl Cell {
    fn size(&self) -> usize {
        match self.role {
            Role::Pad => 1,
            Role::Var { .. } => 2,
            Role::VarNotInCl { .. } => 6,
            _ => 3,
        }
    }

    fn member(&self, i: usize) -> usize {
        self.first + i
    }
}

/// Gadget grid with `2m + 1` rows and `n + 2` columns; class id is
/// `row * (n + 2) + col`. Row 0 and every even row carry the variables
/// between two pads; row `2j - 1` encodes clause `j` between two clause
/// borders. The selected position q in a clause row names the true variable.
pub fn gen_grid(f: &Formula1in3) -> Result<GeneratedInstance> {
    let n = f.num_vars();
    let m = f.num_clauses();
    let rows = 2 * m + 1;
    let cols = n + 2;
    let mut cells: Vec<Cell> = Vec::with_capacity(rows * cols);
    let mut colors = Vec::new();
    let mut coords = BTreeMap::new();
    for row in 0..rows {
        for col in 0..cols {
            let border = col == 0 || col == cols - 1;
            let role = if row % 2 == 0 {
                if border {
                    Role::Pad
                } else {
                    Role::Var { var: col }
                }
            } else {
                let clause = row.div_ceil(2);
                if border {
                    Role::Cl { clause }
                } else {
                    match f.clauses()[clause - 1].iter().position(|&x| x == col) {
                        Some(slot) => Role::VarInCl {
                            var: col,
                            clause,
                            slot,
                        },
                        None => Role::VarNotInCl { var: col, clause },
                    }
                }
            };
            let id = cells.len();
            let cell = Cell {
                role,
                first: colors.len(),
            };
            colors.extend(std::iter::repeat_n(id, cell.size()));
            coords.insert(id, [row, col]);
            cells.push(cell);
        }
    }
    let at = |row: usize, col: usize| &cells[row * cols + col];
    let mut edges = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            let a = at(row, col);
            if col + 1 < cols {
                horizontal(a, at(row, col + 1), &mut edges);
            }
            if row + 1 < rows {
                vertical(a, at(row + 1, col), &mut edges);
            }
        }
    }
    let graph = ColoredGraph::new(colors.len(), colors, edges)?;
    Ok(GeneratedInstance {
        graph,
        meta: GeneratorMeta {
            reduction: ReductionKind::Grid,
            formula: f.clone(),
            roles: cells.iter().enumerate().map(|(i, c)| (i, c.role)).collect(),
            grid_coords: Some(coords),
            x_order: None,
        },
    })
}

fn complete(a: &Cell, b: &Cell, edges: &mut Vec<[usize; 2]>) {
    for i in 0..a.size() {
        for j in 0..b.size() {
            edges.push([a.member(i), b.member(j)]);
        }
    }
}

/// Left-right neighbors agree on the position q.
fn horizontal(a: &Cell, b: &Cell, edges: &mut Vec<[usize; 2]>) {
    use Role::*;
    match (a.role, b.role) {
        (VarNotInCl { .. }, VarNotInCl { .. }) => {
            for q in 0..3 {
                for s in 0..2 {
                    for t in 0..2 {
                        edges.push([a.member(2 * q + s), b.member(2 * q + t)]);
                    }
                }
            }
        }
        (VarNotInCl { .. }, _) => {
            for q in 0..3 {
                for s in 0..2 {
                    edges.push([a.member(2 * q + s), b.member(q)]);
                }
            }
        }
        (_, VarNotInCl { .. }) => horizontal(b, a, edges),
        (Cl { .. } | VarInCl { .. }, Cl { .. } | VarInCl { .. }) => {
            for q in 0..3 {
                edges.push([a.member(q), b.member(q)]);
            }
        }
        _ => complete(a, b, edges),
    }
}

/// Upper-lower neighbors agree on the variable's bit.
fn vertical(a: &Cell, b: &Cell, edges: &mut Vec<[usize; 2]>) {
    use Role::*;
    match (a.role, b.role) {
        (Var { .. }, VarInCl { slot, .. }) => {
            for q in 0..3 {
                edges.push([a.member((q == slot) as usize), b.member(q)]);
            }
        }
        (Var { .. }, VarNotInCl { .. }) => {
            for q in 0..3 {
                for bit in 0..2 {
                    edges.push([a.member(bit), b.member(2 * q + bit)]);
                }
            }
        }
        (VarInCl { .. } | VarNotInCl { .. }, Var { .. }) => vertical(b, a, edges),
        _ => complete(a, b, edges),
    }
}
