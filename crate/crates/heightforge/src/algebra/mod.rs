//! Exact base arithmetic: rationals and prime fields, univariate
//! polynomials in t, rational functions, binary and bihomogeneous forms,
//! resultants, and base substitutions t -> u(t).

mod binform;
mod dense;
mod field;
mod poly;
mod ratfunc;

pub use binform::{
    binary_resultant, form_pair_resultant, forms_have_common_factor, BiForm, BinaryForm, VarPair,
};
pub use field::{BaseField, Scalar};
pub use poly::{poly_gcd, Poly};
pub use ratfunc::RatFunc;

pub(crate) use binform::{join_signed_terms, normalize_coeff_list, render_signed_term, scalar_normalize_list};
pub(crate) use poly::write_terms;
