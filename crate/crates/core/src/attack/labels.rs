// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;

use crate::error::Result;
use crate::mask::{Label, SegMask};
use crate::waveform::{PulseModel, WaveformTensor};

/// Samples below this are not considered pulse peaks.
const PEAK_FLOOR: f32 = 1e-6;

/// Half-width of a pulse's label window in bins: `⌈2σ/Δt⌉`.
pub fn label_half_width(pm: &PulseModel, bin_ns: f64) -> usize {
    (2.0 * pm.sigma_ns / bin_ns).ceil() as usize
}

/// Recover the centers (in fractional bins) of the isolated Gaussian
/// pulses in a noise-free row.
///
/// Interior peaks use the three-point log-parabola fit, which is exact for
/// a sampled Gaussian. Peaks on the first or last bin belong to pulses
/// truncated by the window; their centers come from the two edge samples
/// and the known width.
pub fn pulse_centers(row: &[f32], sigma_bins: f64) -> Vec<f64> {
    let n = row.len();
    let mut centers = Vec::new();
    if n == 0 {
        return centers;
    }
    if n == 1 {
        if row[0] > PEAK_FLOOR {
            centers.push(0.0);
        }
        return centers;
    }
    let two_point = |t1: usize, t2: usize| -> f64 {
        let (a, b) = (row[t1] as f64, row[t2] as f64);
        let mid = (t1 + t2) as f64 / 2.0;
        if a > 0.0 && b > 0.0 {
            mid - sigma_bins * sigma_bins * (a.ln() - b.ln())
        } else if a > b {
            t1 as f64
        } else {
            t2 as f64
        }
    };
    for t in 0..n {
        let v = row[t];
        if v <= PEAK_FLOOR {
            continue;
        }
        let rises = t == 0 || v > row[t - 1];
        let holds = t == n - 1 || v >= row[t + 1];
        if !(rises && holds) {
            continue;
        }
        let c = if t == 0 {
            two_point(0, 1)
        } else if t == n - 1 {
            two_point(n - 2, n - 1)
        } else {
            let (l0, l1, l2) = (row[t - 1] as f64, v as f64, row[t + 1] as f64);
            if l0 > 0.0 && l2 > 0.0 {
                let (a, b, c) = (l0.ln(), l1.ln(), l2.ln());
                let denom = a - 2.0 * b + c;
                if denom < 0.0 {
                    t as f64 + 0.5 * (a - c) / denom
                } else {
                    t as f64
                }
            } else {
                t as f64
            }
        };
        centers.push(c);
    }
    centers
}

fn mark(row: &mut [u8], center: f64, half: usize, label: Label) {
    let c = center.round();
    let lo = (c - half as f64).max(0.0);
    let hi = (c + half as f64).min(row.len() as f64 - 1.0);
    if lo > hi {
        return;
    }
    for v in &mut row[lo as usize..=hi as usize] {
        if label == Label::Attack || *v == Label::Background as u8 {
            *v = label as u8;
        }
    }
}

/// Ground-truth voxel classes from the noise-free benign and attack
/// components of an attacked tensor.
///
/// Bins within `±⌈2σ/Δt⌉` of a pulse center take that pulse's class;
/// where legitimate and attack windows overlap the attack class wins.
pub fn label_ground_truth(
    benign: &WaveformTensor,
    attack: &WaveformTensor,
    pm: &PulseModel,
) -> Result<SegMask> {
    benign.check_same_dims(attack)?;
    pm.validate()?;
    let (h, w, d) = benign.dims();
    let bin_ns = benign.sensor().bin_ns;
    let half = label_half_width(pm, bin_ns);
    let sigma_bins = pm.sigma_ns / bin_ns;
    let mut mask = SegMask::zeros(h, w, d);
    mask.labels_mut()
        .par_chunks_mut(d)
        .zip(benign.data().par_chunks(d).zip(attack.data().par_chunks(d)))
        .for_each(|(out, (l, f))| {
            for c in pulse_centers(l, sigma_bins) {
                mark(out, c, half, Label::Legitimate);
            }
            for c in pulse_centers(f, sigma_bins) {
                mark(out, c, half, Label::Attack);
            }
        });
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::waveform::{accumulate_pulse, SensorConfig};

    fn row_with(centers: &[(f64, f64)], d: usize) -> Vec<f32> {
        let mut acc = vec![0f64; d];
        for &(c, a) in centers {
            accumulate_pulse(&mut acc, c, a, 2.0, 1.0);
        }
        acc.into_iter().map(|v| v as f32).collect()
    }

    #[test]
    fn centers_are_recovered() {
        let row = row_with(&[(100.3, 2.0), (250.0, 5.0), (401.5, 1.0)], 800);
        let c = pulse_centers(&row, 2.0);
        assert_eq!(c.len(), 3);
        for (got, want) in c.iter().zip([100.3, 250.0, 401.5]) {
            assert!((got - want).abs() < 1e-3, "{got} vs {want}");
        }
    }

    #[test]
    fn truncated_tail_center_is_extrapolated() {
        let row = row_with(&[(801.5, 5.0)], 800);
        let c = pulse_centers(&row, 2.0);
        assert_eq!(c.len(), 1);
        assert!((c[0] - 801.5).abs() < 1e-2, "{}", c[0]);
    }

    fn tensors(l: Vec<f32>, f: Vec<f32>) -> (WaveformTensor, WaveformTensor) {
        let sc = SensorConfig::with_dims(1, 1, l.len());
        (
            WaveformTensor::from_vec(&sc, l).unwrap(),
            WaveformTensor::from_vec(&sc, f).unwrap(),
        )
    }

    #[test]
    fn legit_window_is_plus_minus_four() {
        let (l, f) = tensors(row_with(&[(100.0, 1.0)], 800), vec![0.0; 800]);
        let m = label_ground_truth(&l, &f, &PulseModel::default()).unwrap();
        for t in 0..800 {
            let want = if (96..=104).contains(&t) {
                Label::Legitimate
            } else {
                Label::Background
            };
            assert_eq!(m.get(0, 0, t), want, "bin {t}");
        }
    }

    #[test]
    fn attack_wins_overlap() {
        let (l, f) = tensors(
            row_with(&[(102.0, 1.0)], 800),
            row_with(&[(100.0, 5.0)], 800),
        );
        let m = label_ground_truth(&l, &f, &PulseModel::default()).unwrap();
        for t in 96..=104 {
            assert_eq!(m.get(0, 0, t), Label::Attack, "bin {t}");
        }
        assert_eq!(m.get(0, 0, 105), Label::Legitimate);
        assert_eq!(m.get(0, 0, 106), Label::Legitimate);
        assert_eq!(m.get(0, 0, 107), Label::Background);
    }

    #[test]
    fn empty_inputs_give_background() {
        let (l, f) = tensors(vec![0.0; 64], vec![0.0; 64]);
        let m = label_ground_truth(&l, &f, &PulseModel::default()).unwrap();
        assert_eq!(m.count(Label::Background), 64);
    }
}
