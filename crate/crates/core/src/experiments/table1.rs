//! The pair-classification harness: classify every pair of a population of
//! ordered partitions (a full profile or a seeded sample of it) into
//! equivalent / pseudo-only / homometric-only.
//!
//! Partitions are bucketed by their self-difference multisets first; only
//! pairs inside a bucket can be homometric, and only those get the full
//! cross-difference comparison. Orbit representatives of whole partitions
//! and of single blocks are computed once per partition, so equivalence and
//! pseudo-equivalence are key comparisons during the scan.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{homometry_key, self_difference_key, VerifyMode, SCHEMA};
use crate::dihedral::{canonical_bits, canonical_partition};
use crate::domain::{OrderedPartition, RingSize};
use crate::error::{Error, Result};
use crate::experiments::enumerate::{
    enumerate_partitions, population, sample_partitions, SizeProfile,
};
use crate::relation::{choose2, classes};
use crate::spectral::autocorr_form;

/// Sample size for rows that are not enumerated exhaustively.
pub const TABLE_SAMPLE_SIZE: usize = 300;

/// Column order of [`ExperimentReport::csv_record`].
pub const CSV_HEADER: [&str; 6] = [
    "N",
    "sizes",
    "equivalent",
    "pseudo_only",
    "homometric_only",
    "total_homometric",
];

/// Pair counts by taxonomy class over one population.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCounts {
    pub pairs: u64,
    pub equivalent: u64,
    pub pseudo_only: u64,
    pub homometric_only: u64,
}

impl PairCounts {
    pub fn total_homometric(&self) -> u64 {
        self.equivalent + self.pseudo_only + self.homometric_only
    }

    fn merge(self, other: PairCounts) -> PairCounts {
        PairCounts {
            pairs: self.pairs + other.pairs,
            equivalent: self.equivalent + other.equivalent,
            pseudo_only: self.pseudo_only + other.pseudo_only,
            homometric_only: self.homometric_only + other.homometric_only,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub n: usize,
    pub profile: SizeProfile,
    pub population: u128,
    pub sampled: bool,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
    pub pairs_checked: u64,
    pub equivalent_pairs: u64,
    pub pseudo_only_pairs: u64,
    pub homometric_only_pairs: u64,
    pub total_homometric: u64,
}

impl ExperimentReport {
    /// Values in [`CSV_HEADER`] order.
    pub fn csv_record(&self) -> [String; 6] {
        [
            self.n.to_string(),
            self.profile.to_string(),
            self.equivalent_pairs.to_string(),
            self.pseudo_only_pairs.to_string(),
            self.homometric_only_pairs.to_string(),
            self.total_homometric.to_string(),
        ]
    }
}

struct Features {
    self_key: Vec<u32>,
    full_key: Vec<u32>,
    orbit: Vec<u64>,
    block_orbits: Vec<u64>,
    form: Vec<u32>,
}

fn features(p: &OrderedPartition) -> Features {
    let ring = p.ring();
    Features {
        self_key: self_difference_key(p),
        full_key: homometry_key(p),
        orbit: canonical_partition(p),
        block_orbits: p
            .blocks()
            .iter()
            .map(|b| canonical_bits(b.bits(), ring))
            .collect(),
        form: autocorr_form(p).coefficients().to_vec(),
    }
}

fn scan_bucket(members: &[usize], feats: &[Features]) -> Result<PairCounts> {
    let mut counts = PairCounts::default();
    for (x, &i) in members.iter().enumerate() {
        for &j in &members[x + 1..] {
            let (a, b) = (&feats[i], &feats[j]);
            if a.full_key != b.full_key {
                continue;
            }
            if a.form != b.form {
                return Err(Error::CrossCheck(format!(
                    "items {i} and {j} are homometric but their coefficient forms differ"
                )));
            }
            if a.orbit == b.orbit {
                counts.equivalent += 1;
            } else if a.block_orbits == b.block_orbits {
                counts.pseudo_only += 1;
            } else {
                counts.homometric_only += 1;
            }
        }
    }
    Ok(counts)
}

/// Run `job` on a dedicated pool of `workers` threads, or on the global pool
/// for `None`.
pub fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => match rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
        {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        },
        None => job(),
    }
}

/// Classify all `C(m, 2)` pairs of `parts`. Counts do not depend on the
/// order of `parts` or on `workers` (`None` uses the global pool).
///
/// Every homometric pair also has its coefficient forms compared; a mismatch
/// is reported as [`Error::CrossCheck`].
pub fn scan_pairs(parts: &[OrderedPartition], workers: Option<usize>) -> Result<PairCounts> {
    with_workers(workers, || {
        let feats: Vec<Features> = parts.par_iter().map(features).collect();
        let keys: Vec<&[u32]> = feats.iter().map(|f| f.self_key.as_slice()).collect();
        let buckets: Vec<Vec<usize>> = classes(&keys).into_iter().filter(|c| c.len() > 1).collect();
        let counts = buckets
            .par_iter()
            .map(|b| scan_bucket(b, &feats))
            .try_reduce(PairCounts::default, |a, b| Ok(a.merge(b)))?;
        Ok(PairCounts {
            pairs: choose2(parts.len() as u64),
            ..counts
        })
    })
}

/// One row of the table: classify every pair in the full population of
/// `profile` (exhaustive) or in a seeded uniform sample of it.
pub fn run_table1(
    ring: RingSize,
    profile: &SizeProfile,
    mode: VerifyMode,
    workers: Option<usize>,
) -> Result<ExperimentReport> {
    let parts: Vec<OrderedPartition> = match mode {
        VerifyMode::Exhaustive => enumerate_partitions(ring, profile)?.collect(),
        VerifyMode::Sampled { count, seed } => sample_partitions(ring, profile, count, seed)?,
    };
    let counts = scan_pairs(&parts, workers)?;
    let (sample_size, seed) = match mode {
        VerifyMode::Exhaustive => (None, None),
        VerifyMode::Sampled { count, seed } => (Some(count), Some(seed)),
    };
    Ok(ExperimentReport {
        schema: SCHEMA.to_string(),
        n: ring.get(),
        profile: profile.clone(),
        population: population(profile),
        sampled: sample_size.is_some(),
        sample_size,
        seed,
        pairs_checked: counts.pairs,
        equivalent_pairs: counts.equivalent,
        pseudo_only_pairs: counts.pseudo_only,
        homometric_only_pairs: counts.homometric_only,
        total_homometric: counts.total_homometric(),
    })
}

/// Default row mode: exhaustive up to N = 7, a sample of 300 above.
pub fn default_mode(ring: RingSize, seed: u64) -> VerifyMode {
    if ring.get() <= 7 {
        VerifyMode::Exhaustive
    } else {
        VerifyMode::Sampled {
            count: TABLE_SAMPLE_SIZE,
            seed,
        }
    }
}
