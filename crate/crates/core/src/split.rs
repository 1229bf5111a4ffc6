//! Seeded k-fold partitioning shared by cross-validation and feature selection.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Shuffle `0..n` with `seed` and deal the indices round-robin into `k`
/// folds. Fold sizes differ by at most one; each fold is returned sorted.
pub fn kfold(n: usize, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::domain(format!("need at least 2 folds, got {k}")));
    }
    if n < k {
        return Err(Error::domain(format!(
            "cannot split {n} rows into {k} folds"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut folds = vec![Vec::with_capacity(n / k + 1); k];
    for (position, index) in order.into_iter().enumerate() {
        folds[position % k].push(index);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Indices of every row not in `folds[held_out]`, ascending.
pub fn complement(folds: &[Vec<usize>], held_out: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = folds
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != held_out)
        .flat_map(|(_, fold)| fold.iter().copied())
        .collect();
    rest.sort_unstable();
    rest
}
