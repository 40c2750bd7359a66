pub mod descent;
pub mod rates;
pub mod sat2;
pub mod simulate;
pub mod toy;
pub mod tsp;
