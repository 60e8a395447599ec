//! Exact unit minimal annihilating polynomials of square matrices.
//!
//! For `A ∈ K^{n×n}` with `χ_A = f_1^{m_1}⋯f_q^{m_q}` the library computes,
//! for every unit vector `e_j`, the exponents `r_{i,j}` of the monic
//! generator `π_{A,j} = Π f_i^{r_{i,j}}` of `{p : p(A)e_j = 0}`, and the
//! minimal polynomial `π_A` as their lcm.
//!
//! Arithmetic runs over GF(p) ([`PrimeField`]) or ℚ ([`Rationals`]). Every
//! field context can carry an [`OpCounter`], which makes the cost of each
//! stage observable.

pub mod annihilators;
pub mod error;
pub mod fields;
pub mod generators;
pub mod instrumentation;
pub mod matrices;
pub mod polynomials;

pub use annihilators::{
    build_split_tree, minimal_polynomial, naive_unit_annihilator, naive_unit_annihilators, random_projection,
    unit_minimal_annih, unit_minimal_annih_with, unit_pseudo_annih, verify_column, verify_minimal_polynomial,
    AnnihOptions, AnnihilatorReport, Bounds, ExponentTable, Mode, RunStats, SplitTreeNode, TableKind,
};
pub use error::{Error, Result};
pub use fields::{parse_rational, Field, FieldKind, PrimeField, Rationals, Residue};
pub use generators::{assemble, companion, jordan_like_block, Assembled, Block, BlockSpec, GroundTruth, Similarity};
pub use instrumentation::{measure, CostProfile, OpCounter, PhaseCounts};
pub use matrices::{char_poly, matrix_vector_horner, vector_matrix_horner, ColVector, DenseMatrix, RowVector};
pub use polynomials::{factor_irreducible, FactorOptions, FactoredPoly, Factorize, Poly};

pub use num_rational::BigRational;
