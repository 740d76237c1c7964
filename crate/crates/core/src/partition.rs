//! Players, coalitions, and coalition structures (set partitions).
//!
//! A coalition structure partitions one base station's known users into
//! disjoint detection groups. Enumeration walks restricted growth strings in
//! lexicographic order, which yields every partition exactly once, in canonical
//! form, with a stable ordering across runs. Structures render in the compact
//! `12|3` notation (1-based user digits, blocks separated by `|`) while the
//! player set has at most nine users, and as comma-separated member lists
//! otherwise.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::{Error, Result};

/// Hard cap on the player set size; B_12 ≈ 4.2 million structures is the
/// largest exhaustive analysis this crate will attempt.
pub const MAX_PLAYERS: usize = 12;

/// Index of a known user within one base station's player set.
///
/// Indices are dense: a station with `m` users has players `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlayerId(usize);

impl PlayerId {
    pub fn new(index: usize) -> Self {
        PlayerId(index)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PlayerId {
    /// Players print 1-based to match structure labels like `12|3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// A non-empty set of players that are detected jointly.
///
/// Members are kept sorted ascending without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition {
    members: Vec<PlayerId>,
}

impl Coalition {
    /// Builds a coalition from arbitrary member order; sorts and rejects
    /// duplicates and the empty set.
    pub fn new(mut members: Vec<PlayerId>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyCoalition);
        }
        members.sort_unstable();
        for pair in members.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicatePlayer(pair[0]));
            }
        }
        Ok(Coalition { members })
    }

    pub fn singleton(player: PlayerId) -> Self {
        Coalition {
            members: vec![player],
        }
    }

    pub fn members(&self) -> &[PlayerId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn contains(&self, player: PlayerId) -> bool {
        self.members.binary_search(&player).is_ok()
    }

    /// Players of `universe` that are not members of this coalition.
    ///
    /// Errors if any member lies outside `universe`.
    pub fn complement(&self, universe: &[PlayerId]) -> Result<Vec<PlayerId>> {
        for member in &self.members {
            if !universe.contains(member) {
                return Err(Error::PlayerOutsideUniverse(*member));
            }
        }
        Ok(universe
            .iter()
            .copied()
            .filter(|p| !self.contains(*p))
            .collect())
    }

    fn write_label(&self, f: &mut impl fmt::Write, compact: bool) -> fmt::Result {
        for (i, member) in self.members.iter().enumerate() {
            if i > 0 && !compact {
                f.write_char(',')?;
            }
            write!(f, "{member}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Digit form is unambiguous only while every member is a single digit.
        let compact = self.members.last().is_none_or(|p| p.index() < 9);
        self.write_label(f, compact)
    }
}

/// A partition of the full player set into disjoint coalitions.
///
/// Blocks are kept sorted by their smallest member, so equality and rendering
/// are canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoalitionStructure {
    blocks: Vec<Coalition>,
    player_count: usize,
}

impl CoalitionStructure {
    /// Validates that `blocks` partition `0..player_count` and canonicalizes
    /// the block order.
    pub fn new(mut blocks: Vec<Coalition>, player_count: usize) -> Result<Self> {
        if player_count == 0 {
            return Err(Error::InvalidPlayerCount { given: 0 });
        }
        let mut seen = vec![false; player_count];
        for block in &blocks {
            for member in block.members() {
                let i = member.index();
                if i >= player_count {
                    return Err(Error::PlayerOutsideUniverse(*member));
                }
                if seen[i] {
                    return Err(Error::NotAPartition("blocks overlap"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|covered| !covered) {
            return Err(Error::NotAPartition("blocks do not cover the player set"));
        }
        blocks.sort_unstable_by_key(|b| b.members()[0]);
        Ok(CoalitionStructure {
            blocks,
            player_count,
        })
    }

    /// The single-block structure containing every player.
    pub fn grand(player_count: usize) -> Result<Self> {
        if player_count == 0 {
            return Err(Error::InvalidPlayerCount { given: 0 });
        }
        Ok(CoalitionStructure {
            blocks: vec![Coalition {
                members: (0..player_count).map(PlayerId).collect(),
            }],
            player_count,
        })
    }

    /// The all-singleton (non-cooperative) structure.
    pub fn singletons(player_count: usize) -> Result<Self> {
        if player_count == 0 {
            return Err(Error::InvalidPlayerCount { given: 0 });
        }
        Ok(CoalitionStructure {
            blocks: (0..player_count)
                .map(|i| Coalition::singleton(PlayerId(i)))
                .collect(),
            player_count,
        })
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn player_count(&self) -> usize {
        self.player_count
    }

    /// The block containing `player`.
    pub fn block_of(&self, player: PlayerId) -> Result<&Coalition> {
        self.blocks
            .iter()
            .find(|b| b.contains(player))
            .ok_or(Error::UnknownPlayer(player))
    }

    pub fn is_noncooperative(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn label(&self) -> String {
        let mut s = String::new();
        // Infallible: String's fmt::Write never errors.
        let _ = write!(s, "{self}");
        s
    }

    /// Parses a label produced by [`Self::label`] back into a structure.
    ///
    /// Digit form (`12|3`) is accepted for player sets of at most nine users;
    /// the comma form (`1,2|3`) works for any size. Members are 1-based.
    pub fn parse_label(text: &str, player_count: usize) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::BadStructureLabel("empty label"));
        }
        let mut blocks = Vec::new();
        for segment in text.split('|') {
            if segment.is_empty() {
                return Err(Error::BadStructureLabel("empty block"));
            }
            let mut members = Vec::new();
            if segment.contains(',') || player_count > 9 {
                for token in segment.split(',') {
                    let value: usize = token
                        .trim()
                        .parse()
                        .map_err(|_| Error::BadStructureLabel("member is not a number"))?;
                    if value == 0 {
                        return Err(Error::BadStructureLabel("members are 1-based"));
                    }
                    members.push(PlayerId(value - 1));
                }
            } else {
                for ch in segment.chars() {
                    let digit = ch
                        .to_digit(10)
                        .ok_or(Error::BadStructureLabel("member is not a digit"))?;
                    if digit == 0 {
                        return Err(Error::BadStructureLabel("members are 1-based"));
                    }
                    members.push(PlayerId(digit as usize - 1));
                }
            }
            blocks.push(Coalition::new(members)?);
        }
        CoalitionStructure::new(blocks, player_count)
    }
}

impl fmt::Display for CoalitionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.player_count <= 9;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_char('|')?;
            }
            block.write_label(f, compact)?;
        }
        Ok(())
    }
}

/// Enumerates every coalition structure of `player_count` players, in
/// restricted-growth-string lexicographic order. The list length is the Bell
/// number B_player_count.
pub fn enumerate_structures(player_count: usize) -> Result<Vec<CoalitionStructure>> {
    if player_count == 0 || player_count > MAX_PLAYERS {
        return Err(Error::InvalidPlayerCount {
            given: player_count,
        });
    }
    let mut rgs = vec![0usize; player_count];
    let mut out = Vec::new();
    loop {
        out.push(structure_from_rgs(&rgs));
        if !next_rgs(&mut rgs) {
            break;
        }
    }
    Ok(out)
}

/// Advances `rgs` to the lexicographic successor; false once exhausted.
///
/// A restricted growth string satisfies `rgs[0] = 0` and
/// `rgs[i] <= 1 + max(rgs[..i])`.
fn next_rgs(rgs: &mut [usize]) -> bool {
    let mut i = rgs.len();
    while i > 1 {
        i -= 1;
        let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
        if rgs[i] <= prefix_max {
            rgs[i] += 1;
            for v in rgs[i + 1..].iter_mut() {
                *v = 0;
            }
            return true;
        }
    }
    false
}

fn structure_from_rgs(rgs: &[usize]) -> CoalitionStructure {
    let block_count = rgs.iter().copied().max().unwrap_or(0) + 1;
    let mut members: Vec<Vec<PlayerId>> = vec![Vec::new(); block_count];
    for (player, &block) in rgs.iter().enumerate() {
        members[block].push(PlayerId(player));
    }
    // Growth strings list blocks by first occurrence, so blocks are already
    // ordered by smallest member and each member list is ascending.
    CoalitionStructure {
        blocks: members
            .into_iter()
            .map(|m| Coalition { members: m })
            .collect(),
        player_count: rgs.len(),
    }
}

/// All `2^n - 1` non-empty subsets of `players`, ordered by the bitmask over
/// the sorted player list. Deterministic and canonical.
pub fn subsets(players: &[PlayerId]) -> Result<Vec<Coalition>> {
    if players.is_empty() {
        return Err(Error::EmptyPlayerSet);
    }
    if players.len() > MAX_PLAYERS {
        return Err(Error::InvalidPlayerCount {
            given: players.len(),
        });
    }
    let mut sorted = players.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicatePlayer(pair[0]));
        }
    }
    let n = sorted.len();
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for mask in 1usize..(1 << n) {
        let members = sorted
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, p)| *p)
            .collect();
        out.push(Coalition { members });
    }
    Ok(out)
}
