//! Exact branch-and-bound search for a largest progression-free set.
//!
//! Points are decided in index order (include first, then exclude). Each
//! inclusion marks the points that would now close a progression. A branch
//! is cut when its size plus the number of still-available candidates cannot
//! beat the incumbent. Translation lets us fix `0 ∈ A`.
//!
//! The subtrees "second-smallest member is `x`" are disjoint and are handed
//! out to worker threads; the incumbent size is shared and only increases.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{forbid_with, is_progression_free, PointSet};
use crate::error::{Error, Result};
use crate::gf::{PrimeField, Space};

/// Largest ambient size accepted for exhaustive search by default (3^6).
pub const DEFAULT_EXHAUSTIVE_CEILING: usize = 729;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Stop after roughly this many nodes; the result is then not optimal.
    pub node_budget: Option<u64>,
    pub threads: usize,
    pub ceiling: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            node_budget: None,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            ceiling: DEFAULT_EXHAUSTIVE_CEILING,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_size: usize,
    pub witness: PointSet,
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(with = "duration_secs")]
    pub elapsed: Duration,
}

mod duration_secs {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)?.max(0.0)))
    }
}

struct Shared {
    incumbent: AtomicUsize,
    nodes: AtomicU64,
    stopped: AtomicBool,
    budget: Option<u64>,
}

struct Worker<'a> {
    space: &'a Space,
    shared: &'a Shared,
    chosen: Vec<usize>,
    best: Vec<usize>,
    local_nodes: u64,
}

impl Worker<'_> {
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if let Some(budget) = self.shared.budget {
            if self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1 > budget {
                self.shared.stopped.store(true, Ordering::Relaxed);
            }
        }
        !self.shared.stopped.load(Ordering::Relaxed)
    }

    fn record(&mut self) {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            self.shared
                .incumbent
                .fetch_max(self.chosen.len(), Ordering::Relaxed);
        }
    }

    fn available(&self, forbidden: &[u64], from: usize) -> usize {
        let size = self.space.size();
        if from >= size {
            return 0;
        }
        let (w0, b0) = (from / 64, from % 64);
        let mut count = (!forbidden[w0] & (!0u64 << b0)).count_ones() as usize;
        for &w in &forbidden[w0 + 1..] {
            count += (!w).count_ones() as usize;
        }
        // padding bits past `size` are never marked
        count - (forbidden.len() * 64 - size)
    }

    /// Depth-first search for the first set (in include-first order) of
    /// exactly `target` points; leaves it in `best`.
    fn first_of_size(&mut self, forbidden: &[u64], from: usize, target: usize) -> bool {
        if self.chosen.len() == target {
            self.best = self.chosen.clone();
            return true;
        }
        if self.chosen.len() + self.available(forbidden, from) < target {
            return false;
        }
        let size = self.space.size();
        let Some(x) = (from..size).find(|&i| forbidden[i / 64] >> (i % 64) & 1 == 0) else {
            return false;
        };
        let mut with_x = forbidden.to_vec();
        forbid_with(self.space, &mut with_x, &self.chosen, x);
        self.chosen.push(x);
        if self.first_of_size(&with_x, x + 1, target) {
            return true;
        }
        self.chosen.pop();
        self.first_of_size(forbidden, x + 1, target)
    }

    fn branch(&mut self, forbidden: &[u64], from: usize) {
        if !self.tick() {
            return;
        }
        let size = self.space.size();
        let avail = self.available(forbidden, from);
        if self.chosen.len() + avail <= self.shared.incumbent.load(Ordering::Relaxed) {
            return;
        }
        let next = (from..size).find(|&i| forbidden[i / 64] >> (i % 64) & 1 == 0);
        let Some(x) = next else {
            self.record();
            return;
        };
        let mut with_x = forbidden.to_vec();
        forbid_with(self.space, &mut with_x, &self.chosen, x);
        self.chosen.push(x);
        self.record();
        self.branch(&with_x, x + 1);
        self.chosen.pop();
        self.branch(forbidden, x + 1);
    }
}

/// Exhaustive search for a largest progression-free subset of F_p^n.
pub fn max_progression_free(
    field: PrimeField,
    n: usize,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let start = Instant::now();
    let space = Space::new(field, n)?;
    if space.size() > options.ceiling {
        return Err(Error::SizeCeiling {
            p: field.modulus(),
            n,
            limit: options.ceiling,
        });
    }
    let shared = Shared {
        incumbent: AtomicUsize::new(1),
        nodes: AtomicU64::new(0),
        stopped: AtomicBool::new(false),
        budget: options.node_budget,
    };
    let words = space.size().div_ceil(64);
    let mut root = vec![0u64; words];
    forbid_with(&space, &mut root, &[], 0);

    // Task `x` explores sets whose second-smallest member is `x`.
    let next_task = AtomicUsize::new(1);
    let results = Mutex::new(vec![(vec![0usize], 0u64)]);
    let threads = options.threads.clamp(1, space.size().max(1));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| {
                let mut worker = Worker {
                    space: &space,
                    shared: &shared,
                    chosen: vec![0],
                    best: vec![0],
                    local_nodes: 0,
                };
                loop {
                    let x = next_task.fetch_add(1, Ordering::Relaxed);
                    if x >= space.size() || shared.stopped.load(Ordering::Relaxed) {
                        break;
                    }
                    let mut forbidden = root.clone();
                    for skipped in 1..x {
                        forbidden[skipped / 64] |= 1 << (skipped % 64);
                    }
                    if forbidden[x / 64] >> (x % 64) & 1 == 1 {
                        continue;
                    }
                    forbid_with(&space, &mut forbidden, &[0], x);
                    worker.chosen = vec![0, x];
                    worker.record();
                    worker.branch(&forbidden, x + 1);
                }
                results
                    .lock()
                    .expect("results lock")
                    .push((worker.best, worker.local_nodes));
            });
        }
    });

    let results = results.into_inner().expect("results lock");
    let nodes_explored = results.iter().map(|(_, n)| n).sum();
    let mut best = results
        .into_iter()
        .map(|(b, _)| b)
        .max_by(|a, b| a.len().cmp(&b.len()).then_with(|| b.cmp(a)))
        .unwrap_or_default();
    let optimal = !shared.stopped.load(Ordering::Relaxed);
    if optimal {
        // Which optimum the workers stumble on depends on scheduling; report
        // the first one in search order instead.
        let mut worker = Worker {
            space: &space,
            shared: &shared,
            chosen: vec![0],
            best: Vec::new(),
            local_nodes: 0,
        };
        if worker.first_of_size(&root, 1, best.len()) {
            best = worker.best;
        }
    }
    let witness = PointSet::from_indices(&space, best)?;
    let check = is_progression_free(&witness);
    assert!(
        check.progression_free,
        "search produced a progression: {:?}",
        check.witness
    );
    Ok(SearchResult {
        best_size: witness.len(),
        witness,
        optimal,
        nodes_explored,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(p: u32, n: usize, threads: usize) -> SearchResult {
        let options = SearchOptions {
            threads,
            ..SearchOptions::default()
        };
        max_progression_free(PrimeField::new(p).unwrap(), n, &options).unwrap()
    }

    #[test]
    fn small_maxima() {
        for threads in [1, 4] {
            assert_eq!(run(3, 0, threads).best_size, 1);
            assert_eq!(run(3, 1, threads).best_size, 2);
            assert_eq!(run(3, 2, threads).best_size, 4);
            assert_eq!(run(5, 1, threads).best_size, 2);
            assert!(run(3, 2, threads).optimal);
        }
    }

    /// Largest progression-free subset of Z_p by scanning all bitmasks.
    fn brute_cyclic(p: usize) -> usize {
        (0u32..1 << p)
            .filter(|&mask| {
                let has = |i: usize| mask >> (i % p) & 1 == 1;
                !(0..p).any(|a| has(a) && (1..p).any(|d| has(a + d) && has(a + 2 * d)))
            })
            .map(u32::count_ones)
            .max()
            .unwrap() as usize
    }

    #[test]
    fn cyclic_groups_match_brute_force() {
        for p in [3u32, 5, 7, 11, 13] {
            assert_eq!(run(p, 1, 2).best_size, brute_cyclic(p as usize), "Z_{p}");
        }
    }

    #[test]
    fn witness_does_not_depend_on_threads() {
        let one = run(3, 3, 1).witness;
        for threads in [2, 3, 8] {
            assert_eq!(run(3, 3, threads).witness, one);
        }
    }

    #[test]
    fn ceiling_and_budget() {
        let f3 = PrimeField::new(3).unwrap();
        let err = max_progression_free(f3, 7, &SearchOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SizeCeiling { limit: 729, .. }));
        let limited = SearchOptions {
            node_budget: Some(50),
            threads: 1,
            ..SearchOptions::default()
        };
        let r = max_progression_free(f3, 4, &limited).unwrap();
        assert!(!r.optimal);
        assert!(is_progression_free(&r.witness).progression_free);
        assert_eq!(r.best_size, r.witness.len());
    }
}
