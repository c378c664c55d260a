//! Closed-form main terms.
//!
//! The kernel is
//!
//! ```text
//!     F_{α,h,k}(T) = (T/2π) [ 1_{k=1} h^{−α} ζ′/ζ(1+α)
//!                             − Λ(k) / (h^α Φ(1+α,k))
//!                             − (k/φ(k)) Φ(α,k) ζ(1−α) (T/2πk)^{−α} / (1−α) ]
//! ```
//!
//! and its α-derivatives at 0 are expressed through the polynomial families
//! P, Q and the arithmetic weights A, B, G in [`polys`].

mod assembly;
mod curly_f;
pub mod polys;

pub use assembly::{corollary1_main_term, theorem1_main_term, MainTermReport, ShiftParameters};
pub use curly_f::{
    big_z, curly_f, curly_f_via_z_derivative, f_derivative_closed_form, phi_factor, CurlyF,
};
pub use polys::{a_m, b_m, poly_p, poly_q, script_g};
