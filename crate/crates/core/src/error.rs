//! Error type shared by all modules.

use core::fmt;

use crate::partition::PlayerId;

/// Invalid-argument and invariant-violation errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Player count outside the supported `1..=MAX_PLAYERS` range.
    InvalidPlayerCount { given: usize },
    /// An operation over a player set received an empty set.
    EmptyPlayerSet,
    /// Coalitions must contain at least one player.
    EmptyCoalition,
    /// The same player appeared twice in one coalition or structure.
    DuplicatePlayer(PlayerId),
    /// A coalition member is not part of the given universe.
    PlayerOutsideUniverse(PlayerId),
    /// The given blocks do not partition the player set.
    NotAPartition(&'static str),
    /// A structure label could not be parsed.
    BadStructureLabel(&'static str),
    /// A player id does not index into the known-user set.
    UnknownPlayer(PlayerId),
    /// The user is not a member of the coalition it is evaluated in.
    UserNotInCoalition(PlayerId),
    /// A numeric parameter violated its constraint; `name` is the config key
    /// suffix, `constraint` the human-readable bound.
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
    },
    /// Link distances must be strictly positive (log-distance singularity).
    NonPositiveDistance,
    /// Payoff vectors or evaluations cover different player sets.
    MismatchedPlayers,
    /// Sweep specification rejected (empty or not strictly monotonic).
    InvalidSweep(&'static str),
    /// Scenario assembly rejected.
    InvalidScenario(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidPlayerCount { given } => write!(
                f,
                "player count {given} outside the supported range 1..={}",
                crate::partition::MAX_PLAYERS
            ),
            Error::EmptyPlayerSet => write!(f, "player set is empty"),
            Error::EmptyCoalition => write!(f, "coalition must be non-empty"),
            Error::DuplicatePlayer(p) => write!(f, "duplicate player {p}"),
            Error::PlayerOutsideUniverse(p) => {
                write!(f, "player {p} is outside the given universe")
            }
            Error::NotAPartition(reason) => write!(f, "not a partition: {reason}"),
            Error::BadStructureLabel(reason) => {
                write!(f, "bad coalition-structure label: {reason}")
            }
            Error::UnknownPlayer(p) => write!(f, "player {p} does not index a known user"),
            Error::UserNotInCoalition(p) => {
                write!(f, "user {p} is not a member of the coalition")
            }
            Error::InvalidParameter { name, constraint } => {
                write!(f, "{name} must be {constraint}")
            }
            Error::NonPositiveDistance => write!(f, "distance must be strictly positive"),
            Error::MismatchedPlayers => {
                write!(f, "payoff vectors cover different player sets")
            }
            Error::InvalidSweep(reason) => write!(f, "invalid sweep: {reason}"),
            Error::InvalidScenario(reason) => write!(f, "invalid scenario: {reason}"),
        }
    }
}

impl core::error::Error for Error {}
