use mdlp::index::{FeatureIndex, HEADER_LEN, MAGIC, VERSION};
use mdlp::Error;
use mdlp_core::{DescriptorMode, FeatureConfig, FeatureVector, IndexEntry, PatternParams};
use proptest::prelude::*;

fn layout_strategy() -> impl Strategy<Value = FeatureConfig> {
    (
        prop::sample::select(vec![8u32, 10, 12]),
        1u32..4,
        prop::sample::select(DescriptorMode::ALL.to_vec()),
        any::<bool>(),
    )
        .prop_map(|(nb, r, mode, normalize)| FeatureConfig {
            params: PatternParams::new(nb, r).unwrap(),
            mode,
            normalize,
        })
}

fn index_strategy() -> impl Strategy<Value = FeatureIndex> {
    (layout_strategy(), 1usize..3, 0usize..6).prop_flat_map(|(config, channels, count)| {
        let layout = config.layout(channels);
        let entry = (
            "\\PC{0,12}",
            any::<u32>(),
            prop::collection::vec(0f32..1e3, layout.dimension()),
        );
        prop::collection::vec(entry, count).prop_map(move |raw| {
            let entries = raw
                .into_iter()
                .map(|(id, category, values)| IndexEntry {
                    id,
                    category,
                    feature: FeatureVector::from_parts(
                        layout,
                        config.normalize,
                        values.into_iter().map(f64::from).collect(),
                    )
                    .unwrap(),
                })
                .collect();
            FeatureIndex::new(layout, config.normalize, entries).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bytes_round_trip(index in index_strategy()) {
        let bytes = index.to_bytes();
        prop_assert_eq!(&bytes[..4], MAGIC);
        prop_assert_eq!(FeatureIndex::from_bytes(&bytes).unwrap(), index.clone());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.idx");
        prop_assert_eq!(index.save(&path).unwrap(), bytes.len() as u64);
        prop_assert_eq!(FeatureIndex::load(&path).unwrap(), index);
    }

    #[test]
    fn truncation_is_typed(index in index_strategy(), frac in 0.0f64..1.0) {
        let bytes = index.to_bytes();
        let cut = ((bytes.len() as f64) * frac) as usize;
        let truncated = matches!(FeatureIndex::from_bytes(&bytes[..cut]), Err(Error::Truncated { .. }));
        prop_assert!(truncated);
    }
}

fn small_index() -> FeatureIndex {
    let config = FeatureConfig::default();
    let layout = config.layout(1);
    let values = vec![1.0 / 1280.0; layout.dimension()];
    let entry = IndexEntry {
        id: "a".into(),
        category: 3,
        feature: FeatureVector::from_parts(layout, true, values).unwrap(),
    };
    FeatureIndex::new(layout, true, vec![entry]).unwrap()
}

#[test]
fn header_fields_are_little_endian() {
    let bytes = small_index().to_bytes();
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), VERSION);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
    assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 8);
    assert_eq!(u32::from_le_bytes(bytes[16..20].try_into().unwrap()), 1);
    assert_eq!(bytes[20], 1);
    assert_eq!(u64::from_le_bytes(bytes[21..29].try_into().unwrap()), 1);
    assert_eq!(u64::from_le_bytes(bytes[29..37].try_into().unwrap()), 1280);
    assert_eq!(HEADER_LEN, 37);
}

#[test]
fn corrupt_headers_are_rejected() {
    let good = small_index().to_bytes();

    let mut bad = good.clone();
    bad[0] = b'X';
    assert!(matches!(FeatureIndex::from_bytes(&bad), Err(Error::BadMagic { .. })));

    let mut bad = good.clone();
    bad[4] = 9;
    assert!(matches!(
        FeatureIndex::from_bytes(&bad),
        Err(Error::Version { found: 9, .. })
    ));

    let mut bad = good.clone();
    bad[29] = 7; // dimension no longer fits the layout
    assert!(FeatureIndex::from_bytes(&bad).is_err());

    let mut bad = good.clone();
    bad.push(0);
    assert!(FeatureIndex::from_bytes(&bad).is_err());
}

#[test]
fn missing_file_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(
        FeatureIndex::load(&dir.path().join("none.idx")),
        Err(Error::Io { .. })
    ));
}
