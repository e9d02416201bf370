//! Low-degree testing over finite fields against online erasure and corruption adversaries.
//!
//! The crate is layered bottom-up: [`gf`] field arithmetic, [`poly`] functions on
//! `F_q^n`, [`linalg`] elimination, [`space`] affine maps, [`charfind`] local
//! characterizations, [`oracle`] the adversarial query model, [`tester`] the
//! testers, and [`harness`] Monte-Carlo experiments.

pub mod charfind;
pub mod gf;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod space;
pub mod tester;
pub mod harness;
pub mod cli;
