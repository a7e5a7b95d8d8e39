//! Progression-free sets in F_p^n: verification, sumsets, extremal search.
//!
//! A set is progression-free when it contains no three distinct points
//! `a, b, c` with `a + b = 2c`.

mod pointset;
mod search;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use pointset::PointSet;
pub use search::{max_progression_free, SearchOptions, SearchResult, DEFAULT_EXHAUSTIVE_CEILING};

use crate::error::{Error, Result};
use crate::gf::{Point, PrimeField, Space};

/// Three distinct points with `a + b = 2c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionWitness {
    pub a: Point,
    pub b: Point,
    pub c: Point,
}

impl ProgressionWitness {
    fn from_indices(space: &Space, a: usize, b: usize, c: usize) -> Self {
        let decode = |i| space.decode(i).expect("index in range");
        Self {
            a: decode(a),
            b: decode(b),
            c: decode(c),
        }
    }

    pub fn into_error(self) -> Error {
        Error::NotProgressionFree {
            a: self.a.coords,
            b: self.b.coords,
            c: self.c.coords,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressionCheck {
    pub progression_free: bool,
    pub witness: Option<ProgressionWitness>,
}

/// For every pair `a < b` of members, looks up the midpoint `(a + b)/2`.
pub fn is_progression_free(set: &PointSet) -> ProgressionCheck {
    let space = set.space();
    let members: Vec<usize> = set.indices().collect();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let c = space.midpoint(a, b);
            if c != a && c != b && set.contains(c) {
                return ProgressionCheck {
                    progression_free: false,
                    witness: Some(ProgressionWitness::from_indices(space, a, b, c)),
                };
            }
        }
    }
    ProgressionCheck {
        progression_free: true,
        witness: None,
    }
}

/// `B = {a + b : a ≠ b}` and `C = {2a}` for members of `A`.
pub fn pair_sums(set: &PointSet) -> (PointSet, PointSet) {
    let space = set.space();
    let members: Vec<usize> = set.indices().collect();
    let mut sums = PointSet::empty(space);
    let mut doubles = PointSet::empty(space);
    for (i, &a) in members.iter().enumerate() {
        doubles.insert(space.double(a));
        for &b in &members[i + 1..] {
            sums.insert(space.add(a, b));
        }
    }
    (sums, doubles)
}

/// Marks every point that would complete a 3-term progression with `x` and
/// some `y` already chosen: `(x+y)/2`, `2x - y`, and `2y - x`.
pub(crate) fn forbid_with(space: &Space, forbidden: &mut [u64], chosen: &[usize], x: usize) {
    let mut mark = |i: usize| forbidden[i / 64] |= 1 << (i % 64);
    mark(x);
    for &y in chosen {
        mark(space.midpoint(x, y));
        mark(space.reflect(x, y));
        mark(space.reflect(y, x));
    }
}

/// Scans the points in a seeded pseudo-random order and keeps each one that
/// leaves the set progression-free. The result is maximal by inclusion.
pub fn greedy_progression_free(field: PrimeField, n: usize, seed: u64) -> Result<PointSet> {
    let space = Space::new(field, n)?;
    let mut order: Vec<usize> = (0..space.size()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut forbidden = vec![0u64; space.size().div_ceil(64)];
    let mut chosen = Vec::new();
    for x in order {
        if forbidden[x / 64] >> (x % 64) & 1 == 1 {
            continue;
        }
        forbid_with(&space, &mut forbidden, &chosen, x);
        chosen.push(x);
    }
    let set = PointSet::from_indices(&space, chosen)?;
    let check = is_progression_free(&set);
    assert!(
        check.progression_free,
        "greedy produced a progression: {:?}",
        check.witness
    );
    Ok(set)
}

/// The two predicates whose agreement identifies progression-free sets with
/// affine caps in F_3^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapEquivalence {
    /// No distinct `a, b, c` with `a + b = 2c`.
    pub progression_free: bool,
    /// No three distinct collinear points, i.e. no `a + b + c = 0`.
    pub cap: bool,
}

impl CapEquivalence {
    pub fn agree(&self) -> bool {
        self.progression_free == self.cap
    }
}

pub fn cap_equivalence_check(set: &PointSet) -> Result<CapEquivalence> {
    let space = set.space();
    if space.p() != 3 {
        return Err(Error::CapEquivalenceRequiresThree(space.p()));
    }
    let members: Vec<usize> = set.indices().collect();
    let mut cap = true;
    'outer: for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            // c = -(a + b)
            let c = space.combine(2, a, 2, b);
            if c > b && set.contains(c) {
                cap = false;
                break 'outer;
            }
        }
    }
    Ok(CapEquivalence {
        progression_free: is_progression_free(set).progression_free,
        cap,
    })
}
