pub mod config;
pub mod error;
pub mod funceq;
pub mod heatflow;
pub mod homog;
pub mod jet;
pub mod params;
pub mod phspace;
pub mod poly;
pub mod quad;
pub mod report;
pub mod runner;
pub mod symbolkern;
pub mod special;
pub mod testfn;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use testfn::{FourierConvention, TestFunction};
