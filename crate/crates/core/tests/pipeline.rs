use memtune_core::domain::{MemorySize, PricingModel};
use memtune_core::features::{group_by_function, training_set, FeatureSet, FunctionMeasurements};
use memtune_core::model::{
    cross_validate, from_json, load_model, save_model, to_json, train, CvConfig, Hyperparameters, RegressionModel,
};
use memtune_core::optimizer::{optimize_from_monitoring, TradeoffParameter};
use memtune_core::parallel::Workers;
use memtune_core::simgen::{generate_dataset, generate_profiles, ProfileConfig, WorkloadSpec};
use memtune_core::Error;

fn small_hp() -> Hyperparameters {
    Hyperparameters {
        epochs: 30,
        neurons_per_layer: 16,
        hidden_layers: 2,
        ..Hyperparameters::default()
    }
}

fn groups(workers: Workers) -> Vec<FunctionMeasurements> {
    let profiles = generate_profiles(40, 11, &ProfileConfig { noise_cv: 0.1 }).unwrap();
    let rows = generate_dataset(&profiles, &WorkloadSpec::new(5.0, 60.0).unwrap(), workers).unwrap();
    group_by_function(&rows).unwrap()
}

fn model() -> (Vec<FunctionMeasurements>, RegressionModel) {
    let g = groups(Workers::SEQUENTIAL);
    let set = training_set(&g, MemorySize::MB_256, &FeatureSet::default_model()).unwrap();
    let m = train(&set, &small_hp()).unwrap();
    (g, m)
}

#[test]
fn dataset_independent_of_workers() {
    assert_eq!(groups(Workers::SEQUENTIAL), groups(Workers::new(4).unwrap()));
}

#[test]
fn cross_validation_independent_of_workers() {
    let g = groups(Workers::SEQUENTIAL);
    let set = training_set(&g, MemorySize::MB_256, &FeatureSet::default_model()).unwrap();
    let run = |workers| {
        let cv = CvConfig { folds: 3, repetitions: 2, workers };
        cross_validate(&set, &small_hp(), &cv).unwrap()
    };
    assert_eq!(run(Workers::SEQUENTIAL), run(Workers::new(3).unwrap()));
}

#[test]
fn saved_model_predicts_identically() {
    let (g, m) = model();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    save_model(&m, &path).unwrap();
    let loaded = load_model(&path).unwrap();
    for f in &g {
        let s = f.at(MemorySize::MB_256);
        assert_eq!(m.predict(s).unwrap(), loaded.predict(s).unwrap());
    }
    assert_eq!(to_json(&m), to_json(&loaded));
}

#[test]
fn other_format_versions_rejected() {
    let (_, m) = model();
    let mut doc: serde_json::Value = serde_json::from_str(&to_json(&m)).unwrap();
    doc["version"] = serde_json::json!(2);
    match from_json(&doc.to_string(), "test") {
        Err(Error::IncompatibleVersion { found: 2, expected: 1 }) => {}
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(from_json("{\"version\": 1}", "test"), Err(Error::Format { .. })));
    assert!(matches!(from_json("not json", "test"), Err(Error::Format { .. })));
}

#[test]
fn recommendation_needs_base_size_summary() {
    let (g, m) = model();
    let p = PricingModel::aws_default();
    let t = TradeoffParameter::DEFAULT;
    let rec = optimize_from_monitoring(g[0].at(MemorySize::MB_256), &m, &p, t).unwrap();
    assert!(MemorySize::ALL.contains(&rec.chosen));
    assert_eq!(rec.scores.len(), 6);
    assert!(optimize_from_monitoring(g[0].at(MemorySize::MB_512), &m, &p, t).is_err());
}
