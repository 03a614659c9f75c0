mod circle;
mod interpolate;
mod interval;
mod line;
mod periodic;
mod phi;
mod segments;

pub use circle::CircleMap;
pub use interpolate::{interpolate, standard_pieces};
pub use interval::IntervalMap;
pub use line::LineMap;
pub use periodic::PeriodicTailMap;
pub use phi::{phi, phi_from_line, phi_inv, phi_to_line};
pub use segments::{Knot, Segments};
