//! Exact computation with slowly oscillating functions on the half-line
//! `H = [0, oo)`.
//!
//! A function is slowly oscillating when, for every window length `R > 0`
//! and tolerance `eps > 0`, there is a horizon `M` past which every window
//! `[x, x+R]` has image diameter below `eps`. This crate provides:
//!
//! - [`realfn`]: an expression algebra (constants, `tau(x) = x+1`,
//!   `tau^alpha`, the canonical concave `eta_a` functions, finite
//!   piecewise-linear atoms) closed under `+`, rational scaling, join, meet,
//!   and absolute value, with exact rational evaluation on the
//!   piecewise-linear fragment;
//! - [`somod`]: structural certification of slow oscillation via composable
//!   `M(R, eps)` moduli, plus empirical window scanning and uniform
//!   continuity checks;
//! - [`eta`]: the constructive toolkit around `eta_a` — growth envelopes
//!   `|f| <= L * eta_a`, dominating sequences with `eta_b / eta_a`
//!   unbounded, and sequence merges;
//! - [`hom`]: the lattice homomorphisms of the algebra, which are exactly
//!   the scaled evaluations `c * delta_x` and zero; axiom checking,
//!   black-box classification, and vanishing demonstrations;
//! - [`topology`]: the identification of nonzero homomorphisms with
//!   `H x (0, oo)`, neighborhood membership, the neighborhood base at zero,
//!   convergence reports, and continuity radii;
//! - [`acceptance`]: the self-check suite run by `slowosc verify`.

pub mod acceptance;
pub mod corpus;
pub mod eta;
pub mod hom;
pub mod realfn;
pub mod somod;
pub mod topology;
