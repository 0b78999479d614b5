//! Polyhedral fundamental domains for the action of `Γ₁ × Γ₂` on the
//! universal cover of SU(1,1) by `(g, h)·x = g x h⁻¹`.

pub mod carve;
pub mod config;
pub mod cover;
pub mod error;
pub mod export;
pub mod figures;
pub mod groups;
pub mod identify;
pub mod pipeline;
pub mod polyhedron;
pub mod polytope;
pub mod util;
pub mod verify;
