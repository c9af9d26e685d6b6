// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Back-substitution through the redundancy systems and assembly of the
//! complete orbit adjacency set.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::count::{matmul, CountMatrix, WalkMatrix};
use crate::dag::degree_order;
use crate::enumerate::{accumulate_rhs, count_chordal_cycle, count_clique, count_three_node, RhsAccumulators};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orbit::{keys, walk_terms, OrbitAdjacencySet, OrbitKey};

/// `A^3` is refused above this many nodes.
pub const TRIPLE_HOP_NODE_LIMIT: usize = 50_000;

/// Matrices known so far, by key.
pub type PartialSet = BTreeMap<OrbitKey, CountMatrix>;

/// Wall time per pipeline phase.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PhaseTimings {
    pub enumeration: Duration,
    pub rhs: Duration,
    pub solve: Duration,
    pub a3: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.enumeration + self.rhs + self.solve + self.a3
    }

    pub fn accumulate(&mut self, other: &PhaseTimings) {
        self.enumeration += other.enumeration;
        self.rhs += other.rhs;
        self.solve += other.solve;
        self.a3 += other.a3;
    }
}

impl fmt::Display for PhaseTimings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "enumeration={:.3}s rhs={:.3}s solve={:.3}s a3={:.3}s",
            self.enumeration.as_secs_f64(),
            self.rhs.as_secs_f64(),
            self.solve.as_secs_f64(),
            self.a3.as_secs_f64()
        )
    }
}

/// Outcome of a successful solve. Both counters are zero on success; they
/// are reported rather than assumed.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveReport {
    /// Largest absolute residual of the redundant single-hop equation.
    pub consistency_residual: i64,
    pub negative_entry_count: usize,
    pub timings: PhaseTimings,
}

/// Solutions of the single-hop system.
#[derive(Debug, Clone)]
pub struct SingleHop {
    pub a12_13: CountMatrix,
    pub a13_13: CountMatrix,
    pub a10_10: CountMatrix,
    pub a10_11: CountMatrix,
    pub a6_7: CountMatrix,
    pub a9_11: CountMatrix,
    pub a5_5: CountMatrix,
    pub a4_5: CountMatrix,
    pub a8_8: CountMatrix,
}

/// Solutions of the double-hop system.
#[derive(Debug, Clone)]
pub struct DoubleHop {
    pub a9_10: CountMatrix,
    pub a6_6: CountMatrix,
    pub a8_8: CountMatrix,
    pub a4_5: CountMatrix,
}

fn non_negative(m: CountMatrix, equation: &str) -> Result<CountMatrix> {
    match m.first_negative() {
        Some((r, c, v)) => Err(Error::inconsistent(equation, r, c, format!("negative count {v}"))),
        None => Ok(m),
    }
}

/// Solves the single-hop system given the clique counts. Equation (h) is
/// redundant and its residual is returned.
pub fn solve_single_hop(rhs: &RhsAccumulators, a1414: &CountMatrix) -> Result<(SingleHop, i64)> {
    let r = |eq| rhs.single(eq);
    let a12_13 = non_negative(r('a').add(a1414, -2)?, "single-hop (a)")?;
    let a13_12 = a12_13.transpose();
    let a13_13 = non_negative(r('b').add(a1414, -2)?.div_exact(2, "single-hop (b)")?, "single-hop (b)")?;
    let a8_8 = non_negative(r('j').sub(&a12_13)?, "single-hop (j)")?;
    let a10_10 = non_negative(r('c').sub(&a13_12)?, "single-hop (c)")?;
    let a11_10 = non_negative(r('d').add(&a13_13, -2)?, "single-hop (d)")?;
    let a7_6 = non_negative(r('e').sub(&a11_10)?.div_exact(2, "single-hop (e)")?, "single-hop (e)")?;
    let a11_9 = non_negative(r('g').add(&a7_6, -2)?.div_exact(2, "single-hop (g)")?, "single-hop (g)")?;
    let a5_5 = non_negative(r('f').sub(&a8_8)?, "single-hop (f)")?;
    let a5_4 = non_negative(r('i').sub(&a8_8)?, "single-hop (i)")?;

    let residual = a11_9.scale(2)?.add(&a13_12, 1)?.sub(r('h'))?;
    let worst = residual.iter().max_by_key(|&(_, _, v)| v.abs());
    let max_residual = worst.map_or(0, |(_, _, v)| v.abs());
    if let Some((row, col, v)) = worst {
        return Err(Error::inconsistent(
            "single-hop (h)",
            row,
            col,
            format!("residual {v}"),
        ));
    }
    Ok((
        SingleHop {
            a12_13,
            a13_13,
            a10_10,
            a10_11: a11_10.transpose(),
            a6_7: a7_6.transpose(),
            a9_11: a11_9.transpose(),
            a5_5,
            a4_5: a5_4.transpose(),
            a8_8,
        },
        max_residual,
    ))
}

/// Solves the double-hop system given the diamond counts.
pub fn solve_double_hop(rhs: &RhsAccumulators, a1212: &CountMatrix) -> Result<DoubleHop> {
    let r = |eq| rhs.double(eq);
    let a8_8 = non_negative(r('a').add(a1212, -2)?.div_exact(2, "double-hop (a)")?, "double-hop (a)")?;
    let a9_10 = non_negative(r('c').add(a1212, -2)?, "double-hop (c)")?;
    let a6_6 = non_negative(r('b').sub(&a9_10)?, "double-hop (b)")?;
    let a4_5 = non_negative(r('d').add(&a8_8, -2)?, "double-hop (d)")?;
    if let Some((row, col, a, b)) = a6_6.first_difference(&a6_6.transpose()) {
        return Err(Error::inconsistent(
            "double-hop (b)",
            row,
            col,
            format!("A6..6 is not symmetric ({a} vs {b})"),
        ));
    }
    Ok(DoubleHop {
        a9_10,
        a6_6,
        a8_8,
        a4_5,
    })
}

/// `A^3` of `g` as an exact integer product.
pub fn adjacency_cube(g: &Graph) -> Result<WalkMatrix> {
    if g.n() > TRIPLE_HOP_NODE_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "A^3 is limited to {TRIPLE_HOP_NODE_LIMIT} nodes, graph has {}",
            g.n()
        )));
    }
    let a = WalkMatrix::adjacency(g);
    matmul(&matmul(&a, &a)?, &a)
}

/// `A_{4::4}` as what remains of `offdiag(A^3)` after removing every other
/// walk term.
pub fn compute_triple_hop(g: &Graph, known: &PartialSet) -> Result<CountMatrix> {
    let a3 = adjacency_cube(g)?;
    triple_hop_from_cube(&a3, known)
}

pub(crate) fn triple_hop_from_cube(a3: &WalkMatrix, known: &PartialSet) -> Result<CountMatrix> {
    let mut rest = a3.offdiag.clone();
    for (key, coeff) in walk_terms(3) {
        if key == keys::A4_4_3 {
            assert_eq!(coeff, 1);
            continue;
        }
        let m = known.get(&key).ok_or(Error::MissingKey(key))?;
        rest = rest.add(m, -coeff)?;
    }
    non_negative(rest, "triple-hop")
}

/// Every matrix of `g` plus the solver report.
pub fn compute_all(g: &Graph) -> Result<(OrbitAdjacencySet, SolveReport)> {
    let mut timings = PhaseTimings::default();
    let clock = Instant::now();
    let dag = degree_order(g);
    let three = count_three_node(&dag);
    let a1212 = count_chordal_cycle(&dag);
    let a1414 = count_clique(&dag);
    timings.enumeration = clock.elapsed();

    let clock = Instant::now();
    let rhs = accumulate_rhs(&dag, &three);
    timings.rhs = clock.elapsed();

    let clock = Instant::now();
    let (single, residual) = solve_single_hop(&rhs, &a1414)?;
    let double = solve_double_hop(&rhs, &a1212)?;
    drop(rhs);
    let mut known = PartialSet::new();
    let mut put = |key: OrbitKey, m: CountMatrix| {
        if !key.is_symmetric() {
            known.insert(key.transpose(), m.transpose());
        }
        known.insert(key, m);
    };
    put(keys::A00, CountMatrix::adjacency(g));
    put(keys::A1_2, three.a12);
    put(keys::A1_1, three.a11_2);
    put(keys::A33, three.a33);
    put(keys::A12_12_2, a1212);
    put(keys::A14_14, a1414);
    put(keys::A12_13, single.a12_13);
    put(keys::A13_13, single.a13_13);
    put(keys::A10_10, single.a10_10);
    put(keys::A10_11, single.a10_11);
    put(keys::A6_7, single.a6_7);
    put(keys::A9_11, single.a9_11);
    put(keys::A5_5, single.a5_5);
    put(keys::A4_5, single.a4_5);
    put(keys::A8_8, single.a8_8);
    put(keys::A9_10_2, double.a9_10);
    put(keys::A6_6_2, double.a6_6);
    put(keys::A8_8_2, double.a8_8);
    put(keys::A4_5_2, double.a4_5);
    timings.solve = clock.elapsed();

    let clock = Instant::now();
    let a44 = compute_triple_hop(g, &known)?;
    known.insert(keys::A4_4_3, a44);
    timings.a3 = clock.elapsed();

    let set = OrbitAdjacencySet::from_map(g.n(), known)?;
    set.check_invariants()?;
    Ok((
        set,
        SolveReport {
            consistency_residual: residual,
            negative_entry_count: 0,
            timings,
        },
    ))
}
