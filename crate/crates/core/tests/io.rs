mod common;

use common::*;
use hybzono::io::*;
use hybzono::relu::demo_network;
use hybzono::{Error, FactorForm};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn reads_minimal_zonotope() {
    let h = hybrid_from_json(r#"{"type":"zono","form":"pm1","Gc":[[1,0],[0,2]],"c":[0,1]}"#).unwrap();
    assert_eq!((h.n_g(), h.n_b(), h.n_c()), (2, 0, 0));
    assert_eq!(h.form(), FactorForm::Pm1);
}

#[test]
fn rejects_unknown_keys_and_bad_shapes() {
    assert!(matches!(
        hybrid_from_json(r#"{"type":"hz","form":"pm1","c":[0],"extra":1}"#),
        Err(Error::Json(_))
    ));
    assert!(matches!(
        hybrid_from_json(r#"{"type":"hz","form":"pm1","Gc":[[1],[2]],"c":[0]}"#),
        Err(Error::InvalidInput(_) | Error::DimensionMismatch { .. })
    ));
}

#[test]
fn network_round_trip() {
    let net = demo_network();
    let back = network_from_json(&network_to_json(&net)).unwrap();
    assert_eq!(back.evaluate(&[0.3, -1.7]), net.evaluate(&[0.3, -1.7]));
}

#[test]
fn file_round_trip() {
    let mut rng = rng(61);
    let h = random_hz(&mut rng, 2, 3, 2, 1, FactorForm::Zo);
    let dir = std::env::temp_dir().join(format!("hybzono-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("set.json");
    write_hybrid(&path, &h).unwrap();
    assert_eq!(read_hybrid(&path).unwrap(), h);
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_exact(seed in 0u64..1_000_000) {
        let mut rng = rng(seed);
        let form = random_form(&mut rng);
        let (n, g, b, c) = (rng.gen_range(1..4), rng.gen_range(0..4), rng.gen_range(0..3), rng.gen_range(0..3));
        let h = random_hz(&mut rng, n, g, b, c, form);
        prop_assert_eq!(hybrid_from_json(&hybrid_to_json(&h)).unwrap(), h);
    }
}
