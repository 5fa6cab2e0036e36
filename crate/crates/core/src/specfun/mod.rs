//! Scalar special functions: Gamma, error function, Wright M-function,
//! Mittag-Leffler function and a fixed-Talbot Laplace inversion.

mod erf;
mod gamma;
mod mittag_leffler;
mod sum;
mod talbot;
mod wright;

pub use erf::{erf, erfc, erfcx};
pub use gamma::{gamma, ln_gamma, reciprocal_gamma, sin_pi};
pub use mittag_leffler::{mittag_leffler, MITTAG_LEFFLER_MAX_ABS_Z};
pub use sum::NeumaierSum;
pub use talbot::{talbot_invert, DEFAULT_TALBOT_NODES};
pub use wright::{wright_m, wright_m_scaled, SeriesControl};
