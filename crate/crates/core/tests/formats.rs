// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;

use pulsar_core::io::{
    decode_mask, decode_waveform, decode_weights, encode_mask, encode_waveform, encode_weights,
};
use pulsar_core::neural::{NamedTensor, WeightBundle};
use pulsar_core::waveform::{peak_detect, synthesize_benign};
use pulsar_core::{
    PulseModel, RangeImage, Return, ScanOrder, ScanTimingMatrix, SegMask, SensorConfig,
    WaveformTensor,
};

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..9, 1usize..33)
}

fn tensor_case() -> impl Strategy<Value = (SensorConfig, Vec<f32>, usize, bool)> {
    dims().prop_flat_map(|(h, w, d)| {
        (
            Just(SensorConfig::with_dims(h, w, d)),
            prop::collection::vec(
                any::<f32>().prop_filter("finite", |v| v.is_finite()),
                h * w * d,
            ),
            1..=(h * w),
            any::<bool>(),
        )
    })
}

fn bits(v: &[f32]) -> Vec<u32> {
    v.iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn waveform_files_round_trip_bitwise((sc, data, phi, col) in tensor_case()) {
        let order = if col { ScanOrder::ColumnMajor } else { ScanOrder::RowMajor };
        let tm = ScanTimingMatrix::build(&sc, phi, order).unwrap();
        let t = WaveformTensor::from_vec(&sc, data).unwrap();
        let bytes = encode_waveform(&t, &tm).unwrap();
        let back = decode_waveform(&bytes, &sc).unwrap();
        prop_assert_eq!(bits(back.tensor.data()), bits(t.data()));
        prop_assert_eq!(&back.timing, &tm);
        prop_assert_eq!(encode_waveform(&back.tensor, &back.timing).unwrap(), bytes);
    }

    #[test]
    fn mask_files_round_trip_bitwise(
        (d, labels) in dims().prop_flat_map(|(h, w, d)| {
            (Just((h, w, d)), prop::collection::vec(0u8..3, h * w * d))
        })
    ) {
        let m = SegMask::from_vec(d, labels).unwrap();
        let bytes = encode_mask(&m).unwrap();
        let back = decode_mask(&bytes).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(encode_mask(&back).unwrap(), bytes);
    }

    #[test]
    fn weight_files_round_trip_bitwise(
        shapes in prop::collection::vec(prop::collection::vec(1usize..5, 0..4), 0..6),
        seed in any::<u64>(),
    ) {
        let tensors: Vec<NamedTensor> = shapes
            .iter()
            .enumerate()
            .map(|(n, shape)| {
                let len: usize = shape.iter().product();
                let data = (0..len)
                    .map(|k| pulsar_core::rng::uniform(seed, &[n as u64, k as u64], -1e3, 1e3) as f32)
                    .collect();
                NamedTensor { name: format!("layer{n}.w"), shape: shape.clone(), data }
            })
            .collect();
        let wb = WeightBundle::new(tensors).unwrap();
        let bytes = encode_weights(&wb).unwrap();
        let back = decode_weights(&bytes).unwrap();
        prop_assert_eq!(back.tensors().len(), wb.tensors().len());
        for (a, b) in back.tensors().iter().zip(wb.tensors()) {
            prop_assert_eq!(&a.name, &b.name);
            prop_assert_eq!(&a.shape, &b.shape);
            prop_assert_eq!(bits(&a.data), bits(&b.data));
        }
        prop_assert_eq!(encode_weights(&back).unwrap(), bytes);
    }

    /// Isolated pulses come back within half a range bin.
    #[test]
    fn synthesis_then_peak_detection_recovers_range(
        returns in prop::collection::vec(
            prop::option::of((1.0f64..110.0, 0.3f64..3.0)), 12),
        sigma in 1.0f64..4.0,
        gamma in 0.2f64..12.0,
    ) {
        let sc = SensorConfig::with_dims(3, 4, 800);
        let cells: Vec<Option<Return>> = returns
            .iter()
            .map(|r| r.map(|(distance, intensity)| Return { distance, intensity }))
            .collect();
        let ri = RangeImage::from_cells(3, 4, cells).unwrap();
        let pm = PulseModel { sigma_ns: sigma, gamma };
        let w = synthesize_benign(&ri, &pm, &sc).unwrap();
        let out = peak_detect(&w, 0.05, &pm).unwrap();
        let half_bin = sc.meters_per_bin() / 2.0;
        for (a, b) in ri.cells().iter().zip(out.cells()) {
            match (a, b) {
                (Some(a), Some(b)) => prop_assert!((a.distance - b.distance).abs() <= half_bin + 1e-9,
                    "{} vs {}", a.distance, b.distance),
                (None, None) => {}
                _ => prop_assert!(false, "presence changed: {a:?} -> {b:?}"),
            }
        }
    }
}

#[test]
fn corrupt_headers_are_rejected() {
    let sc = SensorConfig::with_dims(1, 2, 4);
    let tm = ScanTimingMatrix::build(&sc, 2, ScanOrder::RowMajor).unwrap();
    let t = WaveformTensor::zeros(&sc);
    let bytes = encode_waveform(&t, &tm).unwrap();
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(decode_waveform(&bad, &sc).is_err());
    assert!(decode_waveform(&bytes[..bytes.len() - 1], &sc).is_err());
    let mut long = bytes;
    long.push(0);
    assert!(decode_waveform(&long, &sc).is_err());
    assert!(decode_mask(b"PMSK").is_err());
    assert!(decode_weights(b"").is_err());
}
