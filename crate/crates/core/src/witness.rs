//! Seeded witness tensors: random sums of rank-one tensors and the
//! matrix-multiplication tensors.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::scalar::{Field, Scalar};
use crate::tensor::Tensor3;

/// Radius of the integer coordinates of rational random-sum witnesses.
pub const WITNESS_RADIUS: u64 = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// `sum_{i<r} u_i (x) v_i (x) w_i` with seeded coordinates.
    RandomSum,
    /// Structure tensor of `(m x n) . (n x p)` matrix multiplication.
    Matmul { m: usize, n: usize, p: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessRecipe {
    pub rank: usize,
    pub dims: [usize; 3],
    pub seed: u64,
    pub field: Field,
    pub kind: WitnessKind,
}

impl WitnessRecipe {
    pub fn random_sum(rank: usize, dims: [usize; 3], seed: u64, field: Field) -> Self {
        WitnessRecipe {
            rank,
            dims,
            seed,
            field,
            kind: WitnessKind::RandomSum,
        }
    }

    /// Matrix multiplication `<m, n, p>`; its dims are `(mn, np, pm)` and its
    /// rank field holds the trivial upper bound `mnp`.
    pub fn matmul(m: usize, n: usize, p: usize, field: Field) -> Self {
        WitnessRecipe {
            rank: m * n * p,
            dims: [m * n, n * p, p * m],
            seed: 0,
            field,
            kind: WitnessKind::Matmul { m, n, p },
        }
    }
}

/// Builds the tensor described by a recipe. The same recipe always yields
/// the same tensor.
pub fn make_witness(recipe: &WitnessRecipe) -> Result<Tensor3> {
    let field = recipe.field;
    match recipe.kind {
        WitnessKind::RandomSum => {
            if recipe.rank == 0 {
                return Err(Error::InvalidParameter("witness rank must be at least 1".into()));
            }
            if recipe.dims.contains(&0) {
                return Err(Error::InvalidParameter(format!("empty dims {:?}", recipe.dims)));
            }
            let mut t = Tensor3::zeros(field, recipe.dims);
            for [u, v, w] in random_terms(recipe)? {
                t = t.add(&Tensor3::outer(&u, &v, &w))?;
            }
            Ok(t)
        }
        WitnessKind::Matmul { m, n, p } => {
            if m == 0 || n == 0 || p == 0 {
                return Err(Error::InvalidParameter(format!(
                    "matmul sizes ({m},{n},{p}) must be positive"
                )));
            }
            let dims = [m * n, n * p, p * m];
            if recipe.dims != dims {
                return Err(Error::Dimension(format!(
                    "matmul({m},{n},{p}) needs dims {dims:?}, got {:?}",
                    recipe.dims
                )));
            }
            let mut t = Tensor3::zeros(field, dims);
            for i in 0..m {
                for k in 0..n {
                    for j in 0..p {
                        t.set(i * n + k, k * p + j, j * m + i, field.one());
                    }
                }
            }
            Ok(t)
        }
    }
}

/// The rank-one terms `[u_i, v_i, w_i]` of a random-sum recipe, in the
/// order they are drawn.
pub fn random_terms(recipe: &WitnessRecipe) -> Result<Vec<[Vec<Scalar>; 3]>> {
    if recipe.kind != WitnessKind::RandomSum {
        return Err(Error::InvalidParameter(
            "only random-sum recipes have drawn terms".into(),
        ));
    }
    let mut rng = SplitMix64::new(recipe.seed);
    let field = recipe.field;
    Ok((0..recipe.rank)
        .map(|_| {
            recipe
                .dims
                .map(|n| (0..n).map(|_| field.sample(&mut rng, WITNESS_RADIUS)).collect())
        })
        .collect())
}
