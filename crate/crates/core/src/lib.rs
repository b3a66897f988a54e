// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod functionals;
pub mod par;
pub mod polyroots;
pub mod radii;
pub mod series;
pub mod witnesses;
