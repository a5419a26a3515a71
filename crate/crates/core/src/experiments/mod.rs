//! Partition enumeration and sampling, and the pair-classification harness
//! that reproduces the equivalent / pseudo-equivalent / homometric table.

pub mod enumerate;
pub mod table1;

pub use enumerate::{
    all_partitions, enumerate_partitions, multinomial, population, profile_for_n, rank_partition,
    sample_partitions, unrank_partition, SizeProfile, ENUMERATION_BUDGET,
};
pub use table1::{
    default_mode, run_table1, scan_pairs, with_workers, ExperimentReport, PairCounts, CSV_HEADER,
    TABLE_SAMPLE_SIZE,
};
