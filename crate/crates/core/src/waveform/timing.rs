// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::waveform::SensorConfig;

/// Order in which directions are assigned to consecutive firing slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanOrder {
    /// Consecutive azimuth bins of one channel fire together.
    #[default]
    RowMajor,
    /// Consecutive channels of one azimuth bin fire together.
    ColumnMajor,
}

/// Per-direction scan start timestamps.
///
/// Directions sharing a timestamp are sensed simultaneously and therefore
/// observe the same external jamming waveform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanTimingMatrix {
    channels: usize,
    azimuth_bins: usize,
    group_size: usize,
    timestamps: Vec<u32>,
}

/// Directions grouped by timestamp, stored as offsets into a flat member list.
#[derive(Debug, Clone)]
pub struct TimingGroups {
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl TimingGroups {
    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat direction indices (`i * W + j`) with timestamp `g`, ascending.
    pub fn members(&self, g: usize) -> &[usize] {
        &self.members[self.offsets[g]..self.offsets[g + 1]]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[usize]> + '_ {
        (0..self.len()).map(move |g| self.members(g))
    }
}

impl ScanTimingMatrix {
    pub fn build(sc: &SensorConfig, group_size: usize, order: ScanOrder) -> Result<Self> {
        let (h, w) = (sc.channels, sc.azimuth_bins);
        if group_size == 0 || group_size > h * w {
            return Err(Error::invalid(format!(
                "group size must be in 1..={}, got {group_size}",
                h * w
            )));
        }
        let mut timestamps = vec![0u32; h * w];
        for i in 0..h {
            for j in 0..w {
                let f = match order {
                    ScanOrder::RowMajor => i * w + j,
                    ScanOrder::ColumnMajor => j * h + i,
                };
                timestamps[i * w + j] = (f / group_size) as u32;
            }
        }
        Ok(Self {
            channels: h,
            azimuth_bins: w,
            group_size,
            timestamps,
        })
    }

    /// Validate externally supplied timestamps (e.g. read from a file).
    pub fn from_raw(
        channels: usize,
        azimuth_bins: usize,
        group_size: usize,
        timestamps: Vec<u32>,
    ) -> Result<Self> {
        if timestamps.len() != channels * azimuth_bins {
            return Err(Error::invalid("timing matrix length does not match H*W"));
        }
        if group_size == 0 {
            return Err(Error::invalid("group size must be >= 1"));
        }
        let n_groups = timestamps
            .iter()
            .map(|&t| t as usize + 1)
            .max()
            .unwrap_or(0);
        let mut sizes = vec![0usize; n_groups];
        for &t in &timestamps {
            sizes[t as usize] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::invalid("timestamps are not contiguous from 0"));
        }
        if sizes.iter().any(|&s| s > group_size) {
            return Err(Error::invalid(format!(
                "a timestamp group exceeds size {group_size}"
            )));
        }
        if sizes.iter().filter(|&&s| s < group_size).count() > 1 {
            return Err(Error::invalid("more than one undersized timestamp group"));
        }
        Ok(Self {
            channels,
            azimuth_bins,
            group_size,
            timestamps,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.channels, self.azimuth_bins)
    }

    pub fn group_size(&self) -> usize {
        self.group_size
    }

    pub fn timestamps(&self) -> &[u32] {
        &self.timestamps
    }

    pub fn timestamp(&self, i: usize, j: usize) -> u32 {
        self.timestamps[i * self.azimuth_bins + j]
    }

    pub fn num_groups(&self) -> usize {
        self.timestamps
            .iter()
            .map(|&t| t as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Singleton groups carry no simultaneous-sensing information.
    pub fn is_degenerate(&self) -> bool {
        self.group_size == 1
    }

    pub fn groups(&self) -> TimingGroups {
        let n = self.num_groups();
        let mut offsets = vec![0usize; n + 1];
        for &t in &self.timestamps {
            offsets[t as usize + 1] += 1;
        }
        for g in 0..n {
            offsets[g + 1] += offsets[g];
        }
        let mut cursor = offsets.clone();
        let mut members = vec![0usize; self.timestamps.len()];
        for (cell, &t) in self.timestamps.iter().enumerate() {
            members[cursor[t as usize]] = cell;
            cursor[t as usize] += 1;
        }
        TimingGroups { offsets, members }
    }

    pub fn check_matches(&self, sc: &SensorConfig) -> Result<()> {
        if self.dims() != (sc.channels, sc.azimuth_bins) {
            return Err(Error::invalid(format!(
                "timing matrix is {}x{}, sensor is {}x{}",
                self.channels, self.azimuth_bins, sc.channels, sc.azimuth_bins
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rows_group_together() {
        let sc = SensorConfig::with_dims(2, 4, 8);
        let tm = ScanTimingMatrix::build(&sc, 4, ScanOrder::RowMajor).unwrap();
        assert_eq!(tm.timestamps(), &[0, 0, 0, 0, 1, 1, 1, 1]);
    }

    #[test]
    fn singleton_groups_are_distinct() {
        let sc = SensorConfig::with_dims(3, 5, 8);
        let tm = ScanTimingMatrix::build(&sc, 1, ScanOrder::RowMajor).unwrap();
        let mut ts = tm.timestamps().to_vec();
        ts.sort_unstable();
        ts.dedup();
        assert_eq!(ts.len(), 15);
        assert!(tm.is_degenerate());
    }

    #[test]
    fn trailing_group_is_short() {
        let sc = SensorConfig::with_dims(1, 7, 8);
        let tm = ScanTimingMatrix::build(&sc, 3, ScanOrder::RowMajor).unwrap();
        assert_eq!(tm.timestamps(), &[0, 0, 0, 1, 1, 1, 2]);
        assert_eq!(tm.groups().members(2), &[6]);
    }

    #[test]
    fn column_major_groups_channels() {
        let sc = SensorConfig::with_dims(2, 3, 8);
        let tm = ScanTimingMatrix::build(&sc, 2, ScanOrder::ColumnMajor).unwrap();
        // each azimuth column is one group
        assert_eq!(tm.timestamps(), &[0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn zero_group_size_rejected() {
        let sc = SensorConfig::with_dims(2, 4, 8);
        assert!(ScanTimingMatrix::build(&sc, 0, ScanOrder::RowMajor).is_err());
    }

    #[test]
    fn from_raw_rejects_gaps() {
        assert!(ScanTimingMatrix::from_raw(1, 3, 2, vec![0, 0, 2]).is_err());
        assert!(ScanTimingMatrix::from_raw(1, 3, 2, vec![0, 0, 1]).is_ok());
        assert!(ScanTimingMatrix::from_raw(1, 3, 1, vec![0, 0, 1]).is_err());
    }

    proptest! {
        #[test]
        fn group_sizes_partition(h in 1usize..12, w in 1usize..40, phi_seed in 0usize..1000,
                                 col in any::<bool>()) {
            let phi = 1 + phi_seed % (h * w);
            let sc = SensorConfig::with_dims(h, w, 4);
            let order = if col { ScanOrder::ColumnMajor } else { ScanOrder::RowMajor };
            let tm = ScanTimingMatrix::build(&sc, phi, order).unwrap();
            let mut sizes: Vec<usize> = tm.groups().iter().map(|g| g.len()).collect();
            sizes.sort_unstable();
            let r = (h * w) % phi;
            let mut expected = vec![phi; (h * w) / phi];
            if r > 0 {
                expected.insert(0, r);
            }
            prop_assert_eq!(sizes, expected);
        }
    }
}
