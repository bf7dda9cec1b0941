//! Exact arithmetic in cyclotomic fields `Q(zeta_m)` and certified numeric
//! embeddings into `C`.

pub mod ball;
mod cyclotomic;
mod embedding;
pub(crate) mod modular;
pub mod ntheory;

pub use ball::{exp_2pi_i, CertifiedInterval, RealBall};
pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};
pub use embedding::{embed_numeric, embeddings_g0, real_sign, real_sign_with, Embedding};
pub(crate) use embedding::twisted_sign;
