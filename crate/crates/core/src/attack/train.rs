// SPDX-License-Identifier: Apache-2.0

use log::warn;
use rayon::prelude::*;

use crate::attack::AttackConfig;
use crate::error::Result;
use crate::rng;
use crate::waveform::{
    accumulate_pulse, PulseModel, ScanTimingMatrix, SensorConfig, WaveformTensor,
};

const JITTER_STREAM: u64 = 1;
const AMPLITUDE_STREAM: u64 = 2;

/// One pulse of the jamming train as seen by a timestamp group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackPulse {
    /// Pulse index, starting at 1.
    pub k: usize,
    pub center_ns: f64,
    pub amplitude: f64,
}

/// Jittered pulse centers and amplitudes for timestamp `ts`.
///
/// Draws depend only on `(seed, ts, k)`.
pub fn pulse_schedule(ac: &AttackConfig, ts: u32, window_ns: f64) -> Vec<AttackPulse> {
    let count = ac.pulse_count(window_ns);
    let [amp_lo, amp_hi] = ac.amplitude_range;
    (1..=count)
        .map(|k| {
            let keys_j = [ts as u64, k as u64, JITTER_STREAM];
            let keys_a = [ts as u64, k as u64, AMPLITUDE_STREAM];
            let jitter = rng::uniform(ac.seed, &keys_j, -ac.jitter_ns, ac.jitter_ns);
            let amplitude = rng::uniform(ac.seed, &keys_a, amp_lo, amp_hi);
            AttackPulse {
                k,
                center_ns: k as f64 * ac.pulse_interval_ns + jitter,
                amplitude,
            }
        })
        .collect()
}

/// Render the jamming waveform for every in-sector direction.
///
/// All directions sharing a timestamp receive a bitwise-identical row;
/// directions outside the sector stay zero.
pub fn generate_attack_train(
    tm: &ScanTimingMatrix,
    ac: &AttackConfig,
    pm: &PulseModel,
    sc: &SensorConfig,
) -> Result<WaveformTensor> {
    sc.validate()?;
    pm.validate()?;
    ac.validate()?;
    tm.check_matches(sc)?;
    let window = sc.window_ns();
    if ac.pulse_count(window) == 0 {
        warn!(
            "attack interval {} ns does not fit in the {window} ns window; attack train is empty",
            ac.pulse_interval_ns
        );
    }
    let w = sc.azimuth_bins;
    let d = sc.time_bins;
    let in_sector: Vec<bool> = (0..w).map(|j| sc.in_sector(j, ac.sector_deg)).collect();

    let mut out = WaveformTensor::zeros(sc);
    out.data_mut().par_chunks_mut(d).enumerate().for_each_init(
        || vec![0f64; d],
        |scratch, (cell, row)| {
            if !in_sector[cell % w] {
                return;
            }
            scratch.fill(0.0);
            for p in pulse_schedule(ac, tm.timestamps()[cell], window) {
                accumulate_pulse(scratch, p.center_ns, p.amplitude, pm.sigma_ns, sc.bin_ns);
            }
            for (o, &s) in row.iter_mut().zip(scratch.iter()) {
                *o = s as f32;
            }
        },
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{pulse, ScanOrder};

    fn small() -> SensorConfig {
        SensorConfig::with_dims(2, 8, 800)
    }

    #[test]
    fn ten_mhz_gives_eight_pulses() {
        let ac = AttackConfig::default();
        assert_eq!(ac.pulse_count(800.0), 8);
        assert_eq!(pulse_schedule(&ac, 0, 800.0).len(), 8);
        let slow = AttackConfig {
            pulse_interval_ns: AttackConfig::interval_for_mhz(1.0),
            ..ac
        };
        assert_eq!(slow.pulse_count(800.0), 0);
    }

    #[test]
    fn jitter_free_train_is_periodic() {
        let mut sc = small();
        sc.horizontal_fov = [-10.0, 10.0];
        let tm = ScanTimingMatrix::build(&sc, 4, ScanOrder::RowMajor).unwrap();
        let ac = AttackConfig {
            amplitude_range: [5.0, 5.0],
            jitter_ns: 0.0,
            ..AttackConfig::default()
        };
        let f = generate_attack_train(&tm, &ac, &PulseModel::default(), &sc).unwrap();
        let row = f.row(0, 0);
        for k in 1..8 {
            assert_eq!(row[k * 100], 5.0);
        }
        // k = 8 sits at 800 ns, one bin past the window
        assert_eq!(row[799], (5.0 * pulse(1.0, 2.0)) as f32);
        assert_eq!(row[50], 0.0);
    }

    #[test]
    fn out_of_sector_rows_are_zero() {
        let sc = small(); // full circle, 45° bins
        let tm = ScanTimingMatrix::build(&sc, 4, ScanOrder::RowMajor).unwrap();
        let f = generate_attack_train(&tm, &AttackConfig::default(), &PulseModel::default(), &sc)
            .unwrap();
        for j in 0..8 {
            let nonzero = f.row(0, j).iter().any(|&v| v != 0.0);
            assert_eq!(nonzero, sc.in_sector(j, [-45.0, 45.0]), "bin {j}");
        }
    }

    #[test]
    fn groups_share_rows() {
        let mut sc = small();
        sc.horizontal_fov = [-40.0, 40.0];
        let tm = ScanTimingMatrix::build(&sc, 4, ScanOrder::RowMajor).unwrap();
        let f = generate_attack_train(&tm, &AttackConfig::default(), &PulseModel::default(), &sc)
            .unwrap();
        assert_eq!(f.row(0, 0), f.row(0, 3));
        assert_ne!(f.row(0, 0), f.row(0, 4));
    }

    #[test]
    fn rejects_non_positive_interval() {
        let sc = small();
        let tm = ScanTimingMatrix::build(&sc, 4, ScanOrder::RowMajor).unwrap();
        let ac = AttackConfig {
            pulse_interval_ns: 0.0,
            ..AttackConfig::default()
        };
        assert!(generate_attack_train(&tm, &ac, &PulseModel::default(), &sc).is_err());
    }
}
