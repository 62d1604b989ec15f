//! Unit types and the per-scenario catalog they live in.

use crate::error::{Error, Result};

/// Index into a [`UnitTypeCatalog`].
pub type UnitTypeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitType {
    pub name: String,
    pub max_hp: f64,
    /// Damage per second against non-flying squads.
    pub dps_ground: f64,
    /// Damage per second against flying squads.
    pub dps_air: f64,
    pub flyer: bool,
    /// Travel speed in map units per second.
    pub speed: f64,
    /// Material value of one unit, used by the evaluation function.
    pub destroy_score: f64,
}

impl UnitType {
    /// A type that can hurt nothing never belongs in a scenario.
    pub fn is_combat(&self) -> bool {
        self.dps_ground > 0.0 || self.dps_air > 0.0
    }

    fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScenario(msg));
        if self.name.is_empty() {
            return fail("unit type with empty name".into());
        }
        if self.max_hp <= 0.0 || !self.max_hp.is_finite() {
            return fail(format!("{}: max_hp must be positive", self.name));
        }
        if self.speed <= 0.0 || !self.speed.is_finite() {
            return fail(format!("{}: speed must be positive", self.name));
        }
        if self.destroy_score <= 0.0 || !self.destroy_score.is_finite() {
            return fail(format!("{}: destroy_score must be positive", self.name));
        }
        for (field, value) in [("dps_ground", self.dps_ground), ("dps_air", self.dps_air)] {
            if value < 0.0 || !value.is_finite() {
                return fail(format!("{}: {field} must be non-negative", self.name));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitTypeCatalog {
    types: Vec<UnitType>,
}

impl UnitTypeCatalog {
    pub fn new(types: Vec<UnitType>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::InvalidScenario("catalog has no unit types".into()));
        }
        for (i, ty) in types.iter().enumerate() {
            ty.validate()?;
            if types[..i].iter().any(|other| other.name == ty.name) {
                return Err(Error::InvalidScenario(format!(
                    "duplicate unit type name `{}`",
                    ty.name
                )));
            }
        }
        Ok(Self { types })
    }

    /// Panics on an out-of-range id; ids are only minted by this catalog.
    pub fn get(&self, id: UnitTypeId) -> &UnitType {
        &self.types[id]
    }

    pub fn index_of(&self, name: &str) -> Option<UnitTypeId> {
        self.types.iter().position(|ty| ty.name == name)
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &UnitType> {
        self.types.iter()
    }
}
