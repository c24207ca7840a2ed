//! Symmetric TSP: TSPLIB input, 2-opt/3-opt with don't-look bits and
//! candidate lists, double-bridge kicks and coordinate-noise perturbation.

mod construct;
mod instance;
mod local_search;
mod perturb;
mod tour;
mod tsplib;

pub use construct::{greedy_edge_tour, nearest_neighbor_tour};
pub use instance::{euc_2d, TspInstance, DEFAULT_CANDIDATES};
pub use local_search::{local_search_2opt, local_search_3opt, Neighborhood, TourSearch};
pub use perturb::{
    biased_double_bridge, coordinate_noise_perturbation, double_bridge, double_bridge_with_cuts,
    k_double_bridge, random_tour, reset_dont_look_after_perturbation, Kicked,
    MIN_DOUBLE_BRIDGE_SIZE,
};
pub use tour::{tour_distance, tour_length, Tour};
pub use tsplib::{parse_tsplib, read_tour, write_tour};

/// Default number of nearest neighbours whose don't-look bits are cleared
/// around each breakpoint of a kick.
pub const DEFAULT_RESET_RADIUS: usize = 25;

/// Greedy-edge construction; the deterministic greedy start.
pub fn greedy_tour(inst: &TspInstance) -> Tour {
    greedy_edge_tour(inst)
}
