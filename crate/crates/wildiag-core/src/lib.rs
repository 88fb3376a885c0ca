//! Formal data of algebraic connections on the Riemann sphere: exponential
//! factors, circles, Jordan classes, the Stokes diagram with its Cartan
//! matrix and moduli dimension, and the SL₂ action (Fourier, twists,
//! scalings) on formal data.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

mod cyclo;
mod diagram;
mod error;
mod expfactor;
mod formal;
mod jordan;
mod numeric;
mod readings;
mod sl2;

pub use cyclo::{
    cyclotomic_polynomial, divisors, euler_phi, rat, rat_int, rat_to_f64, BigRat, CycNum,
    MAX_ORDER,
};
pub use error::{Error, Result};
pub use expfactor::{
    b_infinity_gcd, circle_eq, circle_of, common_part_index, hom_rank, irr_hom_bruteforce, Circle,
    ExpFactor, Monomial, PointP1,
};
pub use formal::{
    compatible, modify, rank_of, unmodify, FormalData, LocalEntry, ModifiedFormalData, PointData,
};
pub use jordan::{chain_form, JordanClass, Leg, Marking};
pub use diagram::{
    assemble, b_general, b_infinity, cartan, check_even_loops, core_diagram, dimension,
    full_diagram, quadratic_form, CoreNode, Diagram, MarkingStrategy, Node, NodeKind,
};
pub use numeric::{
    num_b_infinity, num_irr_hom, numeric_fourier, numeric_legendre, numeric_legendre_raw,
    numeric_scale, numeric_twist, NumFactor, NumPoint, TOLERANCE,
};
pub use sl2::{
    apply_op, apply_op_skeleton, apply_sl2, apply_sl2_transformed, classify_type, compose,
    describe, factor_sl2, fourier_circle, fourier_formal, fourier_rank, fourier_skeleton,
    homography, legendre_skeleton, normalize_to_infinity, scale, scale_skeleton, sends_to_finite,
    skeleton_b, skeleton_type, slope2_coefficient, transport, twist, twist_skeleton,
    CircleSkeleton, ElementaryOp, FourierSphereCoeff, SL2Matrix, SkEntry, TransformedData,
};
pub use readings::{
    canonical_witness, enumerate_readings, partition_nodes, partition_transformed, LambdaGroup,
    NodePartition, Reading, ReadingNode,
};
