use thiserror::Error;

use crate::state::Player;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed directive while reading a map or scenario file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("region {region} out of range: map has {count} regions")]
    RegionOutOfRange { region: usize, count: usize },

    #[error("illegal order: {0}")]
    IllegalOrder(String),

    /// `forward` was called while a player still has unordered idle squads.
    #[error("cannot forward: player {0} has squads awaiting orders")]
    OrdersPending(Player),

    #[error("state is terminal ({0})")]
    Terminal(&'static str),

    #[error("player {0} has no idle squads")]
    NoIdleSquads(Player),

    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
