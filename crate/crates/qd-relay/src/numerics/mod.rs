//! Special functions and quadrature shared by the physics layers.

mod faddeeva;
mod grid;
mod hermite;

pub use faddeeva::{dawson, erfcx, faddeeva_w};
pub use grid::TimeGrid;
pub use hermite::{gauss_hermite_nodes, gaussian_average, gaussian_average_n};
