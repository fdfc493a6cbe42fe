//! Exact integer linear algebra: matrices, normal forms, kernels, and
//! characteristic and cyclotomic polynomials.

mod matrix;
mod normal_form;
mod poly;

pub use matrix::IntMatrix;
pub(crate) use matrix::{add, dot};
pub use normal_form::{
    coordinates_in_basis, ext_gcd, gcd, hermite_normal_form, kernel_basis, pivot_columns,
    quotient_structure, rank, smith_normal_form, SmithForm,
};
pub use poly::{
    char_poly, cyclo_factorize, cyclotomic, divisors, euler_phi, CycloFactorization,
    IntPolynomial,
};
