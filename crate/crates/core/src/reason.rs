//! Machine-readable reasons attached to every partial outcome.

use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    /// A derivative on a Langlands datum falls outside the certified rule set.
    DerivativeRules,
    /// Neither vanishing rule decides.
    VanishingUndetermined,
    /// A lowered block meets another block of the same line.
    LoweringCollision,
    /// A tempered summand `S_1` would be lowered past zero outside the certified case.
    TemperedZeroCrossing,
    /// A tempered summand `S_2` would be lowered past ½.
    TemperedHalfCrossing,
    /// Two tempered summands would merge outside the certified case.
    TemperedMerge,
    /// No extended multi-segment witness is available for the Aubert dual.
    AubertOutsideImage,
    /// The candidate dual extended multi-segment fails its own checks.
    AubertUncertified,
    /// Packet candidates whose evaluation needs the nonvanishing criterion.
    PacketNeedsOracle,
    /// A derivative required by the initial-shape hypotheses is undetermined.
    InitialDerivative,
    /// The irreducibility oracle did not decide.
    IrreducibilityOracle,
    /// The general case of the initial-shape construction needs evaluation the rules cannot certify.
    InitialLowering,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::DerivativeRules => "derivative-outside-rules",
            Reason::VanishingUndetermined => "vanishing-undetermined",
            Reason::LoweringCollision => "lowering-collision",
            Reason::TemperedZeroCrossing => "tempered-zero-crossing",
            Reason::TemperedHalfCrossing => "tempered-half-crossing",
            Reason::TemperedMerge => "tempered-merge",
            Reason::AubertOutsideImage => "aubert-outside-image",
            Reason::AubertUncertified => "aubert-uncertified",
            Reason::PacketNeedsOracle => "packet-needs-oracle",
            Reason::InitialDerivative => "initial-derivative-unknown",
            Reason::IrreducibilityOracle => "irreducibility-oracle",
            Reason::InitialLowering => "initial-lowering",
        }
    }

    pub const ALL: [Reason; 12] = [
        Reason::DerivativeRules,
        Reason::VanishingUndetermined,
        Reason::LoweringCollision,
        Reason::TemperedZeroCrossing,
        Reason::TemperedHalfCrossing,
        Reason::TemperedMerge,
        Reason::AubertOutsideImage,
        Reason::AubertUncertified,
        Reason::PacketNeedsOracle,
        Reason::InitialDerivative,
        Reason::IrreducibilityOracle,
        Reason::InitialLowering,
    ];
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Reason {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}
