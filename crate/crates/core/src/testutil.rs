//! Shared helpers for in-crate unit tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::rng::CounterRng;
use crate::sample::{MetricSample, RawSample};

pub(crate) fn random_unit_square(n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = CounterRng::new(seed).stream(0x5153);
    (0..n).map(|_| vec![rng.next_f64(), rng.next_f64()]).collect()
}

pub(crate) fn sample_from_coords(coords: Vec<Vec<f64>>) -> MetricSample {
    let ids: Vec<String> = (0..coords.len()).map(|i| format!("p{i}")).collect();
    let raw = RawSample::from_points(ids, coords, None).unwrap();
    MetricSample::from_raw(&raw, 0).unwrap()
}

pub(crate) fn sample_1d(xs: &[f64]) -> MetricSample {
    sample_from_coords(xs.iter().map(|&x| vec![x]).collect())
}
