//! Bundled example models.

use crate::model::GameModel;

pub const TWO_MASKS_JSON: &str = include_str!("../fixtures/two_masks.json");
pub const ONE_MASK_JSON: &str = include_str!("../fixtures/one_mask.json");

/// Two agents, two masks: a total, deterministic, independent model.
pub fn two_masks() -> GameModel {
    GameModel::from_json(TWO_MASKS_JSON).expect("bundled fixture")
}

/// Two agents, one mask: neither serial, independent nor deterministic.
pub fn one_mask() -> GameModel {
    GameModel::from_json(ONE_MASK_JSON).expect("bundled fixture")
}

/// Looks a bundled model up by name.
pub fn by_name(name: &str) -> Option<GameModel> {
    match name {
        "two_masks" => Some(two_masks()),
        "one_mask" => Some(one_mask()),
        _ => None,
    }
}

pub const NAMES: [&str; 2] = ["two_masks", "one_mask"];
