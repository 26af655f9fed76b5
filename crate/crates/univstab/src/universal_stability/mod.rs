//! The universal stability space: coordinates, evaluation on graphs, the
//! wall arrangement, chambers, and the action of the extended Picard group.

mod action;
mod arrangement;
mod chambers;
mod space;
mod walls;

pub use action::{
    act_on_sheaf, check_integer_degree, degree_preserving_inversion, lambda_action, normalize,
    normalize_fixed_degree, GroupElement,
};
pub use arrangement::{chambers_in_box, Cell};
pub use chambers::{
    base_degrees, chamber_key, chamber_of, d_walls_in_cell, d_walls_meeting_cell, enumerate_chambers, family_count,
    fundamental_chambers, is_free, is_isomorphic_over_mbar, is_transitive, orbit_count,
    orbit_count_fixed_degree, orbit_summary, orbit_summary_fixed_degree, same_chamber, Chamber,
    ChamberKey, ChamberRep, OrbitSummary,
};
pub use space::{cell_widths, d_indices, eval_vine, evaluate, Evaluator, period, random_phi, Space, UniversalPhi};
pub use walls::{
    all_families, c_offset, d_families, exists_nondegenerate, family_functional,
    is_nondegenerate, vine_walls_meeting_box, walls_meeting_box, Affine, BoxRegion, Wall,
    WallFamily,
};
