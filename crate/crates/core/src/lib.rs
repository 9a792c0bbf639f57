//! Boolean networks, Boolean control networks and Boolean P systems, with
//! translations between them, equivalence checking and control sequence
//! inference.

pub mod bcn;
pub mod bits;
pub mod bn;
pub mod boolp;
pub mod cofase;
pub mod equivalence;
pub mod error;
pub mod formula;
pub mod random;
pub mod syntax;
pub mod translate;

pub use bcn::{BooleanControlNetwork, Control};
pub use bits::{BitSet, RuleSet, StateSet};
pub use bn::{BooleanMode, BooleanNetwork, Trajectory};
pub use boolp::{BooleanPSystem, ModeView, Quasimode, Rule, Semantics};
pub use cofase::{CoFaSeInstance, CoFaSeSolution, Outcome, Policy};
pub use equivalence::{EquivalenceReport, TransitionRelation, Verdict};
pub use error::{Error, Limits, Result};
pub use formula::{parse_formula, Formula, VarTable};
pub use translate::{ControlRegime, ControlledComposite, Reaction, ReactionSystem};
