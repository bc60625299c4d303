//! ε-nets, exact precompactness decisions for polyhedra, and K-Cauchy analysis.

mod cauchy;
mod cover;
mod decide;
mod net;

pub use cauchy::{extract_left_k_cauchy, hereditary_spot_check, left_k_cauchy, KCauchyVerdict};
pub use cover::{bilinear_image_net, cover_polytope, ImageNet, Polytope};
pub use decide::{
    escaping_ray, is_bounded, linf_comparison_constant, polyhedron_precompact, sample_polyhedron, EscapingRay,
    PolytopeNet, PrecompactVerdict, MAX_NET_POINTS,
};
pub use net::{
    certify_cover, exact_min_eps_net, find_witnesses, greedy_eps_net, CoverageFailure, CoverageReport,
    EpsNetCertificate, NetLocation,
};
