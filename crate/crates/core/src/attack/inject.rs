// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::attack::NoiseConfig;
use crate::error::Result;
use crate::rng;
use crate::waveform::WaveformTensor;

const CHUNK: usize = 1 << 14;

/// Superpose benign and attack waveforms with Gaussian noise, clamped at 0.
///
/// Equal to `superpose(&add_noise(benign, nc)?, attack)`; the noise sample
/// for flat voxel index `n` is keyed by `(seed, n)`.
pub fn inject(
    benign: &WaveformTensor,
    attack: &WaveformTensor,
    nc: &NoiseConfig,
) -> Result<WaveformTensor> {
    benign.check_same_dims(attack)?;
    superpose(&add_noise(benign, nc)?, attack)
}

/// `benign + noise`, not clamped.
pub fn add_noise(benign: &WaveformTensor, nc: &NoiseConfig) -> Result<WaveformTensor> {
    nc.validate()?;
    let mut out = benign.clone();
    if nc.std == 0.0 {
        return Ok(out);
    }
    let std = nc.std;
    let stream = rng::NormalStream::new(nc.seed);
    out.data_mut()
        .par_chunks_mut(CHUNK)
        .enumerate()
        .for_each(|(c, dst)| {
            let base = (c * CHUNK) as u64;
            for (p, pair) in dst.chunks_mut(2).enumerate() {
                let (a, b) = stream.pair((base >> 1) + p as u64);
                pair[0] += (std * a) as f32;
                if let Some(v) = pair.get_mut(1) {
                    *v += (std * b) as f32;
                }
            }
        });
    Ok(out)
}

/// `max(0, noisy + attack)` elementwise.
pub fn superpose(noisy: &WaveformTensor, attack: &WaveformTensor) -> Result<WaveformTensor> {
    noisy.check_same_dims(attack)?;
    let mut out = noisy.clone();
    out.data_mut()
        .par_chunks_mut(CHUNK)
        .zip(attack.data().par_chunks(CHUNK))
        .for_each(|(dst, f)| {
            for (v, &a) in dst.iter_mut().zip(f) {
                *v = (*v + a).max(0.0);
            }
        });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::SensorConfig;

    fn pair() -> (WaveformTensor, WaveformTensor) {
        let sc = SensorConfig::with_dims(2, 3, 16);
        let l: Vec<f32> = (0..96).map(|n| (n % 7) as f32 * 0.5).collect();
        let f: Vec<f32> = (0..96).map(|n| (n % 5) as f32).collect();
        (
            WaveformTensor::from_vec(&sc, l).unwrap(),
            WaveformTensor::from_vec(&sc, f).unwrap(),
        )
    }

    #[test]
    fn noiseless_zero_attack_is_identity() {
        let (l, f) = pair();
        let zero = WaveformTensor::zeros(f.sensor());
        let out = inject(&l, &zero, &NoiseConfig { std: 0.0, seed: 1 }).unwrap();
        assert_eq!(out, l);
    }

    #[test]
    fn noiseless_sum() {
        let (l, f) = pair();
        let out = inject(&l, &f, &NoiseConfig { std: 0.0, seed: 1 }).unwrap();
        for ((o, a), b) in out.data().iter().zip(l.data()).zip(f.data()) {
            assert_eq!(*o, a + b);
        }
    }

    #[test]
    fn single_voxel() {
        let sc = SensorConfig::with_dims(1, 1, 1);
        let l = WaveformTensor::from_vec(&sc, vec![6.0]).unwrap();
        let f = WaveformTensor::from_vec(&sc, vec![5.0]).unwrap();
        let out = inject(&l, &f, &NoiseConfig { std: 0.0, seed: 0 }).unwrap();
        assert_eq!(out.data(), &[11.0]);
    }

    #[test]
    fn noise_is_seeded_and_clamped() {
        let (l, f) = pair();
        let zero = WaveformTensor::zeros(f.sensor());
        let nc = NoiseConfig { std: 1.0, seed: 9 };
        let a = inject(&zero, &zero, &nc).unwrap();
        let b = inject(&zero, &zero, &nc).unwrap();
        assert_eq!(a, b);
        assert!(a.min() >= 0.0);
        assert!(a.max() > 0.0);
        let c = inject(&l, &f, &NoiseConfig { std: 1.0, seed: 10 }).unwrap();
        assert_ne!(c, inject(&l, &f, &nc).unwrap());
    }

    #[test]
    fn noise_is_keyed_by_voxel_index() {
        let (l, f) = pair();
        let nc = NoiseConfig { std: 0.5, seed: 3 };
        let out = inject(&l, &f, &nc).unwrap();
        for (n, ((o, a), b)) in out.data().iter().zip(l.data()).zip(f.data()).enumerate() {
            let noise = (0.5 * rng::normal(3, n as u64)) as f32;
            assert_eq!(*o, ((a + noise) + b).max(0.0));
        }
    }

    #[test]
    fn mismatched_dims_rejected() {
        let (l, _) = pair();
        let other = WaveformTensor::zeros(&SensorConfig::with_dims(2, 3, 8));
        assert!(inject(&l, &other, &NoiseConfig::default()).is_err());
    }
}
