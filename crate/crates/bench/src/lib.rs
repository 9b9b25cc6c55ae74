//! Shared fixtures for the stage benchmarks.

use hyperham::instances::{gen_complete, gen_split_colouring};
use hyperham::{Colouring, Hypergraph};

/// Complete split-coloured host of the given size.
pub fn split_instance(n: usize) -> (Hypergraph, Colouring) {
    let g = gen_complete(n, 3).expect("n >= 3");
    let a: Vec<usize> = (0..n / 2).collect();
    let c = gen_split_colouring(&g, &a).expect("valid split");
    (g, c)
}
