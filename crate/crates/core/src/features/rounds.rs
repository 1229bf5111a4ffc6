use crate::domain::MemorySize;
use crate::parallel::Workers;
use crate::{seed, Error, Result};

use super::{
    sequential_forward_selection, training_set, Feature, FeatureSet, FeatureStage, FitPredict, FunctionMeasurements,
    SelectionConfig, SelectionData, SelectionTrace,
};

/// Budgets and evaluation settings of the three selection rounds.
#[derive(Clone, Copy, Debug)]
pub struct RoundsConfig {
    pub base: MemorySize,
    /// Max features kept from F0 (F1 size upper bound).
    pub f1_budget: usize,
    /// Max features kept from F2 (F3 size upper bound).
    pub f3_budget: usize,
    /// Max features kept from F4 in the final round.
    pub final_budget: usize,
    pub folds: usize,
    pub seed: u64,
    pub workers: Workers,
}

impl Default for RoundsConfig {
    fn default() -> Self {
        RoundsConfig {
            base: MemorySize::MB_256,
            f1_budget: 13,
            f3_budget: 11,
            final_budget: 11,
            folds: 5,
            seed: 0,
            workers: Workers::default(),
        }
    }
}

/// Outcome of the F0 -> F1 -> F2 -> F3 -> F4 pipeline.
#[derive(Clone, Debug)]
pub struct FeatureRounds {
    /// Selection traces of the three rounds, labelled by their input stage.
    pub traces: Vec<(FeatureStage, SelectionTrace)>,
    pub f1: FeatureSet,
    pub f2: FeatureSet,
    pub f3: FeatureSet,
    pub f4: FeatureSet,
    /// The chosen prefix of the final round.
    pub selected: FeatureSet,
}

fn selection_data(groups: &[FunctionMeasurements], base: MemorySize, set: &FeatureSet) -> Result<SelectionData> {
    let ts = training_set(groups, base, set)?;
    Ok(SelectionData {
        names: set.names(),
        rows: ts.inputs(),
        targets: ts.outputs(),
    })
}

fn run_round(
    groups: &[FunctionMeasurements],
    config: &RoundsConfig,
    candidates: &FeatureSet,
    budget: usize,
    round: usize,
    trainer: &dyn FitPredict,
) -> Result<SelectionTrace> {
    let data = selection_data(groups, config.base, candidates)?;
    let selection = SelectionConfig {
        budget: budget.min(candidates.len()),
        folds: config.folds,
        seed: seed::derive(config.seed, &format!("selection/{round}")),
        workers: config.workers,
    };
    sequential_forward_selection(&candidates.names(), &data, trainer, &selection)
}

/// Three rounds of forward selection with feature construction in between.
///
/// The F2 -> F3 round only considers features derived from the six base
/// metrics and execution time, so every F4 feature is computable from them.
pub fn run_feature_rounds(
    groups: &[FunctionMeasurements],
    trainer: &dyn FitPredict,
    config: &RoundsConfig,
) -> Result<FeatureRounds> {
    let f0 = FeatureSet::f0();
    let round1 = run_round(groups, config, &f0, config.f1_budget, 1, trainer)?;
    let f1 = f0.select(FeatureStage::F1, &round1.chosen())?;

    let f2 = FeatureSet::relative_from(&f1)?;
    let base_only: Vec<Feature> = f2.restricted_to_base_metrics();
    if base_only.is_empty() {
        return Err(Error::domain(
            "no F1 feature derives from the base metrics; F3 would be empty",
        ));
    }
    let f2_base = FeatureSet::new(FeatureStage::F3, base_only)?;
    let round2 = run_round(groups, config, &f2_base, config.f3_budget, 2, trainer)?;
    let f3 = f2_base.select(FeatureStage::F3, &round2.chosen())?;

    let f4 = FeatureSet::dispersion_from(&f3)?;
    let round3 = run_round(groups, config, &f4, config.final_budget, 3, trainer)?;
    let selected = f4.select(FeatureStage::F4, &round3.chosen())?;

    Ok(FeatureRounds {
        traces: vec![
            (FeatureStage::F0, round1),
            (FeatureStage::F2, round2),
            (FeatureStage::F4, round3),
        ],
        f1,
        f2,
        f3,
        f4,
        selected,
    })
}
