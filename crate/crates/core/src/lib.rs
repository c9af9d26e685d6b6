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

//! Exact graphlet-orbit adjacency counting for graphlets on up to four nodes.

// Index loops read closer to the matrix formulas than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod api;
pub mod count;
pub mod dag;
pub mod derived;
pub mod embed;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod manifest;
pub mod netgen;
pub mod oracle;
pub mod orbit;
pub mod solve;
pub mod sparse;
pub mod stream;
pub mod verify;

pub use count::{CountMatrix, WalkMatrix};
pub use dag::{degree_order, DegreeOrderedDag};
pub use error::{Error, Result};
pub use graph::{graph_from_pairs, parse_edge_list, Graph, ParseWarnings};
pub use orbit::{OrbitAdjacencySet, OrbitKey, ALL_KEYS};
pub use embed::{Embedding, PmiMatrix};

pub type PmiMatrix64 = PmiMatrix<f64>;
pub type PmiMatrix32 = PmiMatrix<f32>;
pub type Embedding64 = Embedding<f64>;
pub type Embedding32 = Embedding<f32>;
