//! Builders for stable event configurations.

pub mod basic;
pub mod community;
pub mod dense;
pub mod hypergraph;

pub use basic::{
    add_clique, build_clique, build_complete_single_host, build_h32, build_hkp, clique_configuration,
    h32_configuration, h32_targets, hkp_sides, H32_U, H32_V, H32_W, H32_X,
};
pub use community::{build_community_graph, CommunityNetwork, CommunitySkeleton, Join, JoinMode};
pub use dense::{build_dense_k_supportable, DenseNetwork};
pub use hypergraph::{build_hypergraph_network, HypergraphNetwork, HypergraphSampler, HypergraphSpec};
