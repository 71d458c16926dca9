//! Bootstrap averaging across worker threads.
//!
//! Replicate `i` always learns on the resample drawn from
//! `(master_seed, i)`; graphs are tallied in replicate order after all
//! workers finish, so the result does not depend on the worker count.

use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use bnstruct_core::averaging::{learn_replicate, Algorithm, AveragedNetwork, EdgeTally};
use bnstruct_core::constraints::ConstraintSet;
use bnstruct_core::dataset::Dataset;
use bnstruct_core::graph::Pdag;
use bnstruct_core::pc_stable::PcConfig;

use crate::error::Result;

/// Learns replicates `1..=replicates` on up to `workers` threads and returns
/// the graphs in replicate order.
pub fn replicate_graphs_parallel(
    d: &Dataset,
    algorithm: Algorithm,
    cfg: &PcConfig,
    c: &ConstraintSet,
    replicates: u64,
    master_seed: u64,
    workers: usize,
) -> Result<Vec<Pdag>> {
    let workers = workers.clamp(1, replicates.max(1) as usize);
    let next = AtomicU64::new(1);
    let mut results: Vec<(u64, bnstruct_core::Result<Pdag>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i > replicates {
                            break;
                        }
                        done.push((i, learn_replicate(d, algorithm, cfg, c, i, master_seed)));
                    }
                    done
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("replicate worker panicked"))
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);
    Ok(results
        .into_iter()
        .map(|(_, g)| g)
        .collect::<bnstruct_core::Result<Vec<_>>>()?)
}

/// Bootstrap model averaging on `workers` threads.
pub fn averaged_network_parallel(
    d: &Dataset,
    algorithm: Algorithm,
    cfg: &PcConfig,
    c: &ConstraintSet,
    replicates: u64,
    master_seed: u64,
    workers: usize,
) -> Result<AveragedNetwork> {
    cfg.validate()?;
    if replicates == 0 {
        return Err(
            bnstruct_core::Error::InvalidParameter("replicates must be at least 1".into()).into(),
        );
    }
    let graphs = replicate_graphs_parallel(d, algorithm, cfg, c, replicates, master_seed, workers)?;
    let mut tally = EdgeTally::new(d.names());
    for g in &graphs {
        tally.add(g)?;
    }
    Ok(tally.finish(algorithm, master_seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bnstruct_core::averaging::averaged_network;
    use bnstruct_core::benchmarks::chain;
    use bnstruct_core::params_sim::ancestral_sample;

    #[test]
    fn matches_sequential_for_any_worker_count() {
        let d = ancestral_sample(&chain(), 500, 3).unwrap();
        let cfg = PcConfig::default();
        let c = ConstraintSet::none();
        let seq = averaged_network(&d, Algorithm::PcStable, &cfg, &c, 12, 9).unwrap();
        for w in [1, 2, 5, 64] {
            assert_eq!(
                averaged_network_parallel(&d, Algorithm::PcStable, &cfg, &c, 12, 9, w).unwrap(),
                seq
            );
        }
    }
}
