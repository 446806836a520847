pub mod acceptance;
pub mod asym;
pub mod cli;
pub mod combinatorics;
pub mod constants;
pub mod exact_sums;
pub mod hankel;
pub mod numeric;
pub mod orders;
pub mod primesums;
pub mod report;
pub mod sieve;
