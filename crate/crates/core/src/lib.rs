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

//! Twofold triple systems whose 2-block-intersection graphs are bipartite,
//! connected and non-Hamiltonian.
//!
//! The crate builds and checks triple systems ([`design`]), their block
//! intersection graphs ([`graph`], [`hamilton`]), proves forced-edge
//! properties of boundaried subgraphs ([`linkage`], [`configurations`]),
//! embeds small systems into larger ones ([`embedding`]) and enumerates
//! small Steiner systems ([`enumeration`]).

pub mod configurations;
pub mod design;
pub mod embedding;
pub mod enumeration;
pub mod format;
pub mod graph;
pub mod hamilton;
pub mod linkage;
