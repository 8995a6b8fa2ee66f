//! Small named example spaces used across tests and documentation.

use crate::rat::Rat;
use crate::space::Space;

/// One point.
pub fn singleton() -> Space {
    Space::from_ints(&[&[0]], &["p"])
}

/// Three points `x, y, z` with `d(x,y) = 1` and `d(x,z) = d(y,z) = 2`.
pub fn t3() -> Space {
    Space::from_ints(
        &[&[0, 1, 2], &[1, 0, 2], &[2, 2, 0]],
        &["x", "y", "z"],
    )
}

/// `k` points at pairwise distance `d`.
pub fn equilateral(k: usize, d: Rat) -> Space {
    assert!(k >= 1);
    let rows: Vec<Vec<Rat>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Rat::zero() } else { d }).collect())
        .collect();
    Space::new(rows, None).expect("equilateral space is ultrametric")
}

/// Five points in two blocks: `{p,q,t}` pairwise 1, `{r,s}` pairwise 1,
/// cross distance 2. The smaller block cannot absorb the larger one, which
/// makes one-point extension of partial maps fail.
pub fn two_sons() -> Space {
    Space::from_ints(
        &[
            &[0, 1, 1, 2, 2],
            &[1, 0, 1, 2, 2],
            &[1, 1, 0, 2, 2],
            &[2, 2, 2, 0, 1],
            &[2, 2, 2, 1, 0],
        ],
        &["p", "q", "t", "r", "s"],
    )
}

/// Four points in two blocks of two: `{x,y}` and `{z1,z2}` at inner
/// distance 1, cross distance 2. Both diameter-1 balls look alike, which
/// exercises ball-exchange isometries.
pub fn doubled_far_pair() -> Space {
    Space::from_ints(
        &[
            &[0, 1, 2, 2],
            &[1, 0, 2, 2],
            &[2, 2, 0, 1],
            &[2, 2, 1, 0],
        ],
        &["x", "y", "z1", "z2"],
    )
}

/// A three-level chain of balls: `{a,b}` at 1, joined by `c` at 2, joined
/// by `e` at 4. Distinct diameters on every level.
pub fn three_level_chain() -> Space {
    Space::from_ints(
        &[
            &[0, 1, 2, 4],
            &[1, 0, 2, 4],
            &[2, 2, 0, 4],
            &[4, 4, 4, 0],
        ],
        &["a", "b", "c", "e"],
    )
}
