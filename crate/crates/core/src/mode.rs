use std::fmt;

use serde::{Deserialize, Serialize};

/// Role of an optical mode in the absorber geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModeKind {
    /// Travelling wave incident from the left.
    K,
    /// Travelling wave incident from the right.
    MinusK,
    /// Cosine standing wave.
    C,
    /// Sine standing wave.
    S,
    /// Absorber degree of freedom fed by the absorbed standing wave.
    EnvC,
}

impl ModeKind {
    pub fn is_travelling(self) -> bool {
        matches!(self, ModeKind::K | ModeKind::MinusK)
    }

    pub fn is_standing(self) -> bool {
        matches!(self, ModeKind::C | ModeKind::S)
    }
}

/// Internal photon label used by the dual-rail encoding of labelled photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rail {
    A,
    B,
}

/// A mode is a spatial role plus an optional internal label.
///
/// Unlabelled modes carry indistinguishable photons. Railed modes come in
/// pairs (`K:A`, `K:B`, ...) and every path operation acts on each rail
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub kind: ModeKind,
    pub rail: Option<Rail>,
}

impl ModeLabel {
    pub const K: ModeLabel = ModeLabel::new(ModeKind::K);
    pub const MINUS_K: ModeLabel = ModeLabel::new(ModeKind::MinusK);
    pub const C: ModeLabel = ModeLabel::new(ModeKind::C);
    pub const S: ModeLabel = ModeLabel::new(ModeKind::S);
    pub const ENV_C: ModeLabel = ModeLabel::new(ModeKind::EnvC);

    pub const fn new(kind: ModeKind) -> Self {
        ModeLabel { kind, rail: None }
    }

    pub const fn railed(kind: ModeKind, rail: Rail) -> Self {
        ModeLabel {
            kind,
            rail: Some(rail),
        }
    }

    /// Same rail, different role.
    pub const fn with_kind(self, kind: ModeKind) -> Self {
        ModeLabel {
            kind,
            rail: self.rail,
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            ModeKind::K => "K",
            ModeKind::MinusK => "-K",
            ModeKind::C => "C",
            ModeKind::S => "S",
            ModeKind::EnvC => "ENV_C",
        };
        match self.rail {
            None => f.write_str(name),
            Some(Rail::A) => write!(f, "{name}:A"),
            Some(Rail::B) => write!(f, "{name}:B"),
        }
    }
}

/// Rejects duplicate labels.
pub(crate) fn check_distinct(modes: &[ModeLabel]) -> crate::Result<()> {
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(crate::CpaError::DuplicateMode(*m));
        }
    }
    Ok(())
}

/// Rails present among modes of the given kind, in first-seen order.
pub(crate) fn rails_of(modes: &[ModeLabel], kind: ModeKind) -> Vec<Option<Rail>> {
    let mut rails = Vec::new();
    for m in modes.iter().filter(|m| m.kind == kind) {
        if !rails.contains(&m.rail) {
            rails.push(m.rail);
        }
    }
    rails
}
