pub mod exactla;
pub mod oscillator;
pub mod uea;
pub mod weights;
pub mod modules;
pub mod dirac;
pub mod analysis;
pub mod cli;
