//! Landscape builders for the problem families under study.

pub mod benchmark;
pub mod lipschitz;
pub mod sat2;
pub mod tsp;

pub use benchmark::{benchmark_distribution, benchmark_kernel, benchmark_space, BenchmarkClassSpec, Interpolation};
pub use lipschitz::{lipschitz_kernel, lipschitz_space, LipschitzSpaceSpec, Window};
pub use sat2::{sat2_distribution, sat2_distribution_exact, sat2_kernel, sat2_kernel_exact, Sat2ClassSpec};
pub use tsp::{tsp_enumerate, tsp_enumerate_counts, tsp_sample, tsp_sample_counts, TourCounts, TspInstance};
