//! Small example tensors used throughout tests and experiments. All are
//! given as lists of frontal slices; see [`DenseTensor3::from_frontal_slices`].

use super::DenseTensor3;

fn build(slices: [[[f64; 3]; 3]; 3]) -> DenseTensor3 {
    let s: Vec<Vec<Vec<f64>>> = slices
        .iter()
        .map(|m| m.iter().map(|r| r.to_vec()).collect())
        .collect();
    DenseTensor3::from_frontal_slices(&s)
        .and_then(DenseTensor3::into_stochastic)
        .expect("builtin tensors are stochastic")
}

/// Sparse 3x3x3 tensor whose 1-norm coefficient is 1/2 while its Birkhoff
/// coefficient saturates at 2.
pub fn example61() -> DenseTensor3 {
    build([
        [[0.0, 0.5, 0.5], [0.5, 0.0, 0.0], [0.5, 0.5, 0.5]],
        [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
        [[0.0, 0.0, 0.0], [1.0, 0.0, 0.5], [0.0, 1.0, 0.5]],
    ])
}

/// First multilinear PageRank benchmark tensor.
pub fn p1() -> DenseTensor3 {
    let t = 1.0 / 3.0;
    build([
        [[t, t, t], [t, t, t], [t, t, t]],
        // Entry (3, 2, 2) is 1: column (2, 2) must sum to one.
        [[t, 0.0, 0.0], [t, 0.0, 0.5], [t, 1.0, 0.5]],
        [[0.0, 0.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]],
    ])
}

/// Second multilinear PageRank benchmark tensor.
pub fn p2() -> DenseTensor3 {
    let t = 1.0 / 3.0;
    build([
        [[0.0, 0.0, t], [0.0, 0.0, t], [1.0, 1.0, t]],
        [[t, 0.0, 0.0], [t, 0.0, 0.0], [t, 1.0, 1.0]],
        [[0.5, 0.5, 0.5], [0.0, 0.0, 0.5], [0.5, 0.5, 0.0]],
    ])
}

/// Looks up a builtin by its CLI name (case-insensitive).
pub fn by_name(name: &str) -> Option<DenseTensor3> {
    match name.to_ascii_lowercase().as_str() {
        "p1" => Some(p1()),
        "p2" => Some(p2()),
        "example61" => Some(example61()),
        _ => None,
    }
}
