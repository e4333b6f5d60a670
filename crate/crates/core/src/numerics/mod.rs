//! Small numerical kernels: finite differences, root finding, interpolation,
//! quadrature and sample grids.

pub mod fd;
pub mod grid;
pub mod interp;
pub mod quad;
pub mod roots;
