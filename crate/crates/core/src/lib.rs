pub mod affine;
pub mod cartography;
pub mod cli;
pub mod numerics;
pub mod region;
pub mod systems;
