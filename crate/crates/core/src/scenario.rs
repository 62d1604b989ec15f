//! Scenario files: unit-type definitions plus starting squads.
//!
//! A scenario is line-oriented text with `#` comments and three directives:
//!
//! ```text
//! horizon <seconds>
//! unittype <name> <max_hp> <dps_ground> <dps_air> <flyer:0|1> <speed> <destroy_score>
//! squad <player:0|1> <typename> <count> <region_id>
//! ```
//!
//! Unit types may be declared in any order relative to the squads that use
//! them. Squads must reference combat-capable types (positive damage against
//! ground or air); one side may field no squads at all, in which case a
//! match starting from the scenario is already decided.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{RegionGraph, RegionId};
use crate::state::{merge_idle_squads, GameState, Player, Squad};
use crate::units::{UnitType, UnitTypeCatalog, UnitTypeId};

/// One `squad` directive: a full-health group awaiting its first order.
#[derive(Debug, Clone, PartialEq)]
pub struct SquadSpec {
    pub owner: Player,
    pub unit_type: UnitTypeId,
    pub count: u32,
    pub region: RegionId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub horizon: f64,
    pub catalog: UnitTypeCatalog,
    pub squads: Vec<SquadSpec>,
}

impl Scenario {
    pub fn new(horizon: f64, catalog: UnitTypeCatalog, squads: Vec<SquadSpec>) -> Result<Scenario> {
        if horizon <= 0.0 || !horizon.is_finite() {
            return Err(Error::InvalidScenario(
                "horizon must be positive and finite".into(),
            ));
        }
        for (i, s) in squads.iter().enumerate() {
            if s.unit_type >= catalog.len() {
                return Err(Error::InvalidScenario(format!(
                    "squad {i} references unknown unit type"
                )));
            }
            if s.count == 0 {
                return Err(Error::InvalidScenario(format!("squad {i} has zero units")));
            }
            if !catalog.get(s.unit_type).is_combat() {
                return Err(Error::InvalidScenario(format!(
                    "squad {i} uses non-combat type {:?}",
                    catalog.get(s.unit_type).name
                )));
            }
        }
        Ok(Scenario { horizon, catalog, squads })
    }

    /// Parses scenario text. Directives may appear in any order; squads may
    /// use types declared later in the file.
    pub fn parse(text: &str) -> Result<Scenario> {
        let lines: Vec<(usize, Vec<&str>)> = text
            .lines()
            .enumerate()
            .map(|(i, raw)| {
                let body = raw.split('#').next().unwrap_or("");
                (i + 1, body.split_whitespace().collect::<Vec<_>>())
            })
            .filter(|(_, tokens)| !tokens.is_empty())
            .collect();

        // First pass: directive-name validation plus the catalog, so squads
        // can reference types by name regardless of declaration order.
        let mut types = Vec::new();
        for (line, tokens) in &lines {
            match tokens[0] {
                "unittype" => {}
                "horizon" | "squad" => continue,
                other => {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("unknown directive {other:?}"),
                    })
                }
            }
            if tokens.len() != 8 {
                return Err(Error::Parse {
                    line: *line,
                    message: "expected: unittype <name> <max_hp> <dps_ground> <dps_air> \
                              <flyer:0|1> <speed> <destroy_score>"
                        .into(),
                });
            }
            types.push(UnitType {
                name: tokens[1].to_string(),
                max_hp: field(*line, tokens[2], "max_hp")?,
                dps_ground: field(*line, tokens[3], "dps_ground")?,
                dps_air: field(*line, tokens[4], "dps_air")?,
                flyer: flag(*line, tokens[5], "flyer")?,
                speed: field(*line, tokens[6], "speed")?,
                destroy_score: field(*line, tokens[7], "destroy_score")?,
            });
        }
        let catalog = UnitTypeCatalog::new(types)?;

        let mut horizon: Option<f64> = None;
        let mut squads = Vec::new();
        for (line, tokens) in &lines {
            match tokens[0] {
                "unittype" => {}
                "horizon" => {
                    if tokens.len() != 2 {
                        return Err(Error::Parse {
                            line: *line,
                            message: "expected: horizon <seconds>".into(),
                        });
                    }
                    if horizon.replace(field(*line, tokens[1], "horizon")?).is_some() {
                        return Err(Error::Parse {
                            line: *line,
                            message: "duplicate horizon directive".into(),
                        });
                    }
                }
                "squad" => {
                    if tokens.len() != 5 {
                        return Err(Error::Parse {
                            line: *line,
                            message: "expected: squad <player:0|1> <typename> <count> <region_id>"
                                .into(),
                        });
                    }
                    let owner = match tokens[1] {
                        "0" => Player::P0,
                        "1" => Player::P1,
                        other => {
                            return Err(Error::Parse {
                                line: *line,
                                message: format!("player must be 0 or 1, got {other:?}"),
                            })
                        }
                    };
                    let unit_type = catalog.index_of(tokens[2]).ok_or_else(|| Error::Parse {
                        line: *line,
                        message: format!("unknown unit type {:?}", tokens[2]),
                    })?;
                    let count: u32 = field(*line, tokens[3], "count")?;
                    let region: RegionId = field(*line, tokens[4], "region_id")?;
                    squads.push(SquadSpec { owner, unit_type, count, region });
                }
                other => {
                    return Err(Error::Parse {
                        line: *line,
                        message: format!("unknown directive {other:?}"),
                    })
                }
            }
        }
        let horizon = horizon.ok_or(Error::Parse {
            line: lines.last().map_or(1, |(l, _)| *l),
            message: "missing horizon directive".into(),
        })?;
        Scenario::new(horizon, catalog, squads)
    }

    /// Renders the scenario back to directive text; `parse` round-trips it.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "horizon {}", self.horizon);
        for ty in self.catalog.iter() {
            let _ = writeln!(
                out,
                "unittype {} {} {} {} {} {} {}",
                ty.name,
                ty.max_hp,
                ty.dps_ground,
                ty.dps_air,
                u8::from(ty.flyer),
                ty.speed,
                ty.destroy_score
            );
        }
        for s in &self.squads {
            let _ = writeln!(
                out,
                "squad {} {} {} {}",
                s.owner.index(),
                self.catalog.get(s.unit_type).name,
                s.count,
                s.region
            );
        }
        out
    }

    /// Confirms every squad's region exists on `graph`.
    pub fn validate_against(&self, graph: &RegionGraph) -> Result<()> {
        for s in &self.squads {
            graph.check_region(s.region)?;
        }
        Ok(())
    }

    /// Builds the starting state: clock 0, every squad idle at full health,
    /// duplicates merged.
    pub fn initial_state(&self) -> GameState {
        let squads = self
            .squads
            .iter()
            .map(|s| {
                Squad::at_full_health(
                    s.owner,
                    s.unit_type,
                    s.count,
                    self.catalog.get(s.unit_type).max_hp,
                    s.region,
                )
            })
            .collect();
        merge_idle_squads(&GameState::new(0.0, self.horizon, squads))
    }
}

fn field<T: FromStr>(line: usize, token: &str, name: &str) -> Result<T> {
    token.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {name} value {token:?}"),
    })
}

fn flag(line: usize, token: &str, name: &str) -> Result<bool> {
    match token {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::Parse {
            line,
            message: format!("{name} must be 0 or 1, got {other:?}"),
        }),
    }
}
