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

//! Embedding a twofold triple system of order `u` into one of order `v`
//! whose 2-BIG stays bipartite and becomes connected.

pub mod circulant;
pub mod construction;
pub mod difference;
pub mod pipeline;

use thiserror::Error;

use crate::design::{DesignError, Point};

pub use circulant::{
    cone, is_hamilton_pair, one_factorize, one_factorize_with_ham_pair, CirculantGraph, Edge,
    OneFactor, OneFactorization,
};
pub use construction::{build_halves, Construction, ConstructionMeta, ConstructionParams};
pub use difference::{
    develop, diff_construction, is_orbit_connected, orbit_graph, shift_path, DifferenceFamily,
    DifferenceTriple,
};
pub use pipeline::{embed_system, EmbeddingResult, TradeQuadruple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbedError {
    #[error("({0},{1},{2}) is not a difference triple")]
    BadTriple(u32, u32, u32),
    #[error("difference {0} occurs in two triples")]
    RepeatedDifference(u32),
    #[error("family {n} is not defined for t={t}, k={k}")]
    ConstructionRange { n: u8, t: u32, k: u32 },
    #[error("triple ({0},{1},{2}) does not fit modulus {3}")]
    TripleTooLarge(u32, u32, u32, u32),
    #[error("path context (a,b,c)=({0},{1},{2}) is degenerate")]
    BadPathContext(u32, u32, u32),
    #[error("family lacks a triple with elements {{{0},{1},{2}}}")]
    MissingTriple(u32, u32, u32),
    #[error("difference {0} is outside 1..={1}/2")]
    DifferenceRange(u32, u32),
    #[error("factor {0} is not a perfect matching")]
    NotAFactor(usize),
    #[error("edge {0:?} lies in two factors or outside the host")]
    FactorOverlap((u32, u32)),
    #[error("factors do not cover the host graph")]
    FactorsIncomplete,
    #[error("modulus {0} is odd")]
    OddModulus(u32),
    #[error("no difference of even order among {0:?}")]
    NoEvenOrder(Vec<u32>),
    #[error("difference {0} is not in the generating set")]
    MissingDifference(u32),
    #[error("difference {0} is not coprime to {1}")]
    NotCoprime(u32, u32),
    #[error("cone point {0} is a vertex of Z_w")]
    ConeCollision(Point),
    #[error("(u, v) = ({u}, {v}) not covered: {why}")]
    Params { u: u32, v: u32, why: String },
    #[error("one-factor balance violated: {0}")]
    Balance(String),
    #[error("coverage check failed: {0}")]
    Coverage(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error("seed system: {0}")]
    Seed(String),
    #[error("no trade quadruple found after {tried} candidates")]
    NoTrade { tried: usize },
    #[error("final system check failed: {0}")]
    Final(String),
}
