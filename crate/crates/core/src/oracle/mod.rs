//! Brute-force ground truth: ball tables, exact diameters, hypothesis checks.

pub mod ball;
pub mod verify;

pub use ball::{closure, directed_diameter, symmetrize, undirected_diameter, DirectedBallTable, DEFAULT_BFS_THRESHOLD};
pub use verify::{exhaustive_residue_check, oracle_ok, verify_hypotheses, CheckCount, HypothesisReport, LevelReport, ResidueReport};
