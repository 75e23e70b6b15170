//! Balanced projection of `q` colours onto `s` buckets of consecutive colours.

use std::ops::RangeInclusive;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProjectionError {
    #[error("colour count q must be at least 1, got {0}")]
    InvalidQ(u32),
    #[error("image size s must lie in 1..={q}, got {s}")]
    InvalidImageSize { q: u32, s: u32 },
    #[error("colour {colour} outside 1..={q}")]
    ColourOutOfRange { colour: u32, q: u32 },
    #[error("bucket {bucket} outside 1..={s}")]
    BucketOutOfRange { bucket: u32, s: u32 },
}

/// The map `h: [q] → [s]` sending colour `i` to the index of the interval
/// containing it.
///
/// The first `q mod s` intervals hold `⌈q/s⌉` colours, the rest `⌊q/s⌋`.
/// Colours and buckets are both 1-indexed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionScheme {
    q: u32,
    s: u32,
    /// `starts[j - 1]` is the first colour of bucket `j`; `starts[s] = q + 1`.
    starts: Vec<u32>,
}

/// `⌈√q⌉` in exact integer arithmetic.
pub fn ceil_sqrt(q: u32) -> u32 {
    let mut r = (q as f64).sqrt() as u64;
    let q = q as u64;
    while r * r > q {
        r -= 1;
    }
    while r * r < q {
        r += 1;
    }
    r as u32
}

impl ProjectionScheme {
    /// Scheme with the standard image size `s = ⌈√q⌉`.
    pub fn build(q: u32) -> Result<Self, ProjectionError> {
        if q < 1 {
            return Err(ProjectionError::InvalidQ(q));
        }
        Self::with_image_size(q, ceil_sqrt(q))
    }

    /// Scheme with an explicit image size, for experiments off the standard
    /// parameter path.
    pub fn with_image_size(q: u32, s: u32) -> Result<Self, ProjectionError> {
        if q < 1 {
            return Err(ProjectionError::InvalidQ(q));
        }
        if s < 1 || s > q {
            return Err(ProjectionError::InvalidImageSize { q, s });
        }
        let small = q / s;
        let big_count = q % s;
        let mut starts = Vec::with_capacity(s as usize + 1);
        let mut next = 1;
        for j in 0..s {
            starts.push(next);
            next += if j < big_count { small + 1 } else { small };
        }
        starts.push(next);
        debug_assert_eq!(next, q + 1);
        Ok(Self { q, s, starts })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// The `s + 1` interval boundaries.
    pub fn starts(&self) -> &[u32] {
        &self.starts
    }

    /// `h(i)`.
    pub fn evaluate(&self, colour: u32) -> Result<u32, ProjectionError> {
        if colour < 1 || colour > self.q {
            return Err(ProjectionError::ColourOutOfRange { colour, q: self.q });
        }
        Ok(self.bucket_of(colour))
    }

    /// `h(i)` without the range check. Callers guarantee `1 <= colour <= q`.
    #[inline]
    pub fn bucket_of(&self, colour: u32) -> u32 {
        self.starts[1..].partition_point(|&end| end <= colour) as u32 + 1
    }

    /// Colours `h^{-1}(j)` as an inclusive range.
    pub fn interval(&self, bucket: u32) -> Result<RangeInclusive<u32>, ProjectionError> {
        self.check_bucket(bucket)?;
        Ok(self.interval_unchecked(bucket))
    }

    #[inline]
    pub(crate) fn interval_unchecked(&self, bucket: u32) -> RangeInclusive<u32> {
        let j = bucket as usize;
        self.starts[j - 1]..=self.starts[j] - 1
    }

    /// `|h^{-1}(j)|`.
    pub fn bucket_size(&self, bucket: u32) -> Result<u32, ProjectionError> {
        self.check_bucket(bucket)?;
        let j = bucket as usize;
        Ok(self.starts[j] - self.starts[j - 1])
    }

    /// Uniform element of `h^{-1}(j)`.
    pub fn invert_uniform<R: Rng + ?Sized>(
        &self,
        bucket: u32,
        rng: &mut R,
    ) -> Result<u32, ProjectionError> {
        self.check_bucket(bucket)?;
        Ok(rng.random_range(self.interval_unchecked(bucket)))
    }

    fn check_bucket(&self, bucket: u32) -> Result<(), ProjectionError> {
        if bucket < 1 || bucket > self.s {
            return Err(ProjectionError::BucketOutOfRange {
                bucket,
                s: self.s,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sizes(h: &ProjectionScheme) -> Vec<u32> {
        (1..=h.s()).map(|j| h.bucket_size(j).unwrap()).collect()
    }

    #[test]
    fn build_q100() {
        let h = ProjectionScheme::build(100).unwrap();
        assert_eq!(h.s(), 10);
        assert!(sizes(&h).iter().all(|&c| c == 10));
    }

    #[test]
    fn build_q10() {
        let h = ProjectionScheme::build(10).unwrap();
        assert_eq!(h.s(), 4);
        assert_eq!(sizes(&h), vec![3, 3, 2, 2]);
        let intervals: Vec<_> = (1..=4).map(|j| h.interval(j).unwrap()).collect();
        assert_eq!(intervals, vec![1..=3, 4..=6, 7..=8, 9..=10]);
    }

    #[test]
    fn build_q1_and_errors() {
        let h = ProjectionScheme::build(1).unwrap();
        assert_eq!(h.s(), 1);
        assert_eq!(h.interval(1).unwrap(), 1..=1);
        assert_eq!(ProjectionScheme::build(0), Err(ProjectionError::InvalidQ(0)));
        assert!(ProjectionScheme::with_image_size(4, 5).is_err());
        assert!(ProjectionScheme::with_image_size(4, 0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ProjectionScheme::build(100).unwrap().evaluate(17), Ok(2));
        assert_eq!(ProjectionScheme::build(10).unwrap().evaluate(5), Ok(2));
        for q in 1..50 {
            assert_eq!(ProjectionScheme::build(q).unwrap().evaluate(1), Ok(1));
        }
        let h = ProjectionScheme::build(10).unwrap();
        assert!(h.evaluate(0).is_err());
        assert!(h.evaluate(11).is_err());
    }

    #[test]
    fn invert_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h1 = ProjectionScheme::build(1).unwrap();
        assert_eq!(h1.invert_uniform(1, &mut rng), Ok(1));
        let h = ProjectionScheme::build(10).unwrap();
        assert!(h.invert_uniform(5, &mut rng).is_err());
        assert!(h.invert_uniform(0, &mut rng).is_err());
    }

    #[test]
    fn ceil_sqrt_matches_definition() {
        for q in 1..5000u32 {
            let s = ceil_sqrt(q);
            assert!(s * s >= q && (s - 1) * (s - 1) < q, "q={q}");
        }
    }

    #[test]
    fn balance_exhaustive() {
        for q in 1..=1_000_000u32 {
            let h = ProjectionScheme::build(q).unwrap();
            let s = h.s();
            let st = h.starts();
            let (mut lo, mut hi, mut big) = (u32::MAX, 0, 0);
            for j in 0..s as usize {
                let size = st[j + 1] - st[j];
                lo = lo.min(size);
                hi = hi.max(size);
                if size == q.div_ceil(s) && q % s != 0 {
                    big += 1;
                }
            }
            assert!(hi - lo <= 1, "q={q}");
            assert!(lo >= q / s && hi <= q.div_ceil(s), "q={q}");
            assert_eq!(big, q % s, "q={q}");
            assert_eq!(st[s as usize], q + 1);
        }
    }

    #[test]
    fn push_forward_of_uniform_is_exact() {
        for q in 1..=200u32 {
            let h = ProjectionScheme::build(q).unwrap();
            let mut counts = vec![0u32; h.s() as usize];
            for i in 1..=q {
                counts[h.evaluate(i).unwrap() as usize - 1] += 1;
            }
            for j in 1..=h.s() {
                assert_eq!(counts[j as usize - 1], h.bucket_size(j).unwrap());
            }
        }
    }

    proptest! {
        #[test]
        fn inversion_round_trips(q in 1u32..2000, seed: u64, pick: u32) {
            let h = ProjectionScheme::build(q).unwrap();
            let j = pick % h.s() + 1;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = h.invert_uniform(j, &mut rng).unwrap();
            prop_assert_eq!(h.evaluate(c).unwrap(), j);
        }
    }
}
