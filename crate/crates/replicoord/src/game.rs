//! Payoff matrices for the base 2x2 coordination game and the extended 2x3 game
//! in which the column player gains a third action.
//!
//! Player A is the row player with actions `A1`, `A2`; player B is the column
//! player with actions `B1`, `B2` and, in the extended game, `B3`. Payoff
//! indices are 1-based throughout the public API, matching the usual
//! `a_ij` / `b_ij` notation for "row i against column j".

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Strict inequalities closer to equality than this are flagged as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// One strict payoff inequality, evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    /// Human-readable name, e.g. `"a11-a21>0"`.
    pub name: String,
    /// Value of the left-hand side minus the right-hand side.
    pub margin: f64,
    pub satisfied: bool,
    /// True when `|margin| <= DEGENERACY_TOL`: a tie the model's genericity
    /// assumptions exclude.
    pub degenerate: bool,
}

impl InequalityCheck {
    fn strict(name: &str, margin: f64) -> Self {
        InequalityCheck {
            name: name.to_string(),
            margin,
            satisfied: margin > 0.0,
            degenerate: margin.abs() <= DEGENERACY_TOL,
        }
    }
}

/// Result of checking the four coordination inequalities on a 2x2 game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoordinationCheck {
    pub checks: Vec<InequalityCheck>,
    /// Informational only: whether the two pure Nash equilibria give each
    /// player distinct payoffs. Nothing downstream depends on it.
    pub equal_nash_payoff_note: Option<String>,
}

impl CoordinationCheck {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn is_degenerate(&self) -> bool {
        self.checks.iter().any(|c| c.degenerate)
    }

    pub fn violations(&self) -> Vec<&InequalityCheck> {
        self.checks.iter().filter(|c| !c.satisfied).collect()
    }
}

/// A 2x2 bimatrix game. `a[i][j]` / `b[i][j]` are the payoffs to the row and
/// column player when row `i+1` meets column `j+1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameTwoByTwo {
    a: [[f64; 2]; 2],
    b: [[f64; 2]; 2],
}

impl GameTwoByTwo {
    pub fn new(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> Self {
        GameTwoByTwo { a, b }
    }

    /// Row player's payoff for `(A_i, B_j)`, 1-based.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i - 1][j - 1]
    }

    /// Column player's payoff for `(A_i, B_j)`, 1-based.
    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.b[i - 1][j - 1]
    }

    pub fn a_rows(&self) -> [[f64; 2]; 2] {
        self.a
    }

    pub fn b_rows(&self) -> [[f64; 2]; 2] {
        self.b
    }

    /// Checks the four strict inequalities that make `(A1,B1)` and `(A2,B2)`
    /// strict pure Nash equilibria. Ties within [`DEGENERACY_TOL`] are flagged
    /// as degenerate rather than silently accepted.
    pub fn validate_coordination(&self) -> CoordinationCheck {
        let checks = vec![
            InequalityCheck::strict("a11-a21>0", self.a(1, 1) - self.a(2, 1)),
            InequalityCheck::strict("a22-a12>0", self.a(2, 2) - self.a(1, 2)),
            InequalityCheck::strict("b11-b12>0", self.b(1, 1) - self.b(1, 2)),
            InequalityCheck::strict("b22-b21>0", self.b(2, 2) - self.b(2, 1)),
        ];
        let mut note = None;
        let da = (self.a(1, 1) - self.a(2, 2)).abs();
        let db = (self.b(1, 1) - self.b(2, 2)).abs();
        if da <= DEGENERACY_TOL || db <= DEGENERACY_TOL {
            note = Some(format!(
                "equal payoffs across the two pure Nash equilibria (|a11-a22|={da:e}, |b11-b22|={db:e}); \
                 neither player strictly prefers one equilibrium"
            ));
        }
        CoordinationCheck {
            checks,
            equal_nash_payoff_note: note,
        }
    }
}

/// Payoffs attached to the column player's new third action: `b13`, `b23` are
/// what B earns using it against `A1` / `A2`, and `a13`, `a23` what A earns
/// responding to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewActionPayoffs {
    pub a13: f64,
    pub a23: f64,
    pub b13: f64,
    pub b23: f64,
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("base game is not a coordination game; violated: {0:?}")]
    BaseNotCoordination(Vec<String>),
    #[error(
        "the new action offers B no benefit: requires b13>b11 or b23>b22, got b13={b13} vs b11={b11}, b23={b23} vs b22={b22}"
    )]
    NoBenefit {
        b13: f64,
        b11: f64,
        b23: f64,
        b22: f64,
    },
}

/// The extended 2x3 game. Columns 1-2 form the base coordination game; column
/// 3 is B's new action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameTwoByThree {
    a: [[f64; 3]; 2],
    b: [[f64; 3]; 2],
}

impl GameTwoByThree {
    /// Builds directly from full 2x3 matrices without validity checks.
    pub fn from_matrices(a: [[f64; 3]; 2], b: [[f64; 3]; 2]) -> Self {
        GameTwoByThree { a, b }
    }

    /// Embeds a valid 2x2 coordination game, attaching the new-action payoffs
    /// as a third column. Rejects invalid base games and extensions under
    /// which B would never consider the new action.
    pub fn embed(base: &GameTwoByTwo, ext: NewActionPayoffs) -> Result<Self, EmbedError> {
        let check = base.validate_coordination();
        if !check.is_valid() {
            return Err(EmbedError::BaseNotCoordination(
                check.violations().iter().map(|v| v.name.clone()).collect(),
            ));
        }
        if !(ext.b13 > base.b(1, 1) || ext.b23 > base.b(2, 2)) {
            return Err(EmbedError::NoBenefit {
                b13: ext.b13,
                b11: base.b(1, 1),
                b23: ext.b23,
                b22: base.b(2, 2),
            });
        }
        Ok(GameTwoByThree {
            a: [
                [base.a(1, 1), base.a(1, 2), ext.a13],
                [base.a(2, 1), base.a(2, 2), ext.a23],
            ],
            b: [
                [base.b(1, 1), base.b(1, 2), ext.b13],
                [base.b(2, 1), base.b(2, 2), ext.b23],
            ],
        })
    }

    pub fn a(&self, i: usize, j: usize) -> f64 {
        self.a[i - 1][j - 1]
    }

    pub fn b(&self, i: usize, j: usize) -> f64 {
        self.b[i - 1][j - 1]
    }

    pub fn a_rows(&self) -> [[f64; 3]; 2] {
        self.a
    }

    pub fn b_rows(&self) -> [[f64; 3]; 2] {
        self.b
    }

    /// Restriction to columns 1-2: recovers the base 2x2 game.
    pub fn base(&self) -> GameTwoByTwo {
        GameTwoByTwo::new(
            [[self.a(1, 1), self.a(1, 2)], [self.a(2, 1), self.a(2, 2)]],
            [[self.b(1, 1), self.b(1, 2)], [self.b(2, 1), self.b(2, 2)]],
        )
    }

    /// Validity of the extended game: coordination sub-game plus the
    /// third-column benefit condition.
    pub fn validate(&self) -> CoordinationCheck {
        let mut check = self.base().validate_coordination();
        let benefit = self.b(1, 3) > self.b(1, 1) || self.b(2, 3) > self.b(2, 2);
        let margin = (self.b(1, 3) - self.b(1, 1)).max(self.b(2, 3) - self.b(2, 2));
        check.checks.push(InequalityCheck {
            name: "b13>b11 or b23>b22".to_string(),
            margin,
            satisfied: benefit,
            degenerate: margin.abs() <= DEGENERACY_TOL,
        });
        check
    }

    pub fn deviations(&self) -> DeviationTable {
        DeviationTable { game: *self }
    }
}

/// Pairwise payoff differences `a_ij - a_kl` and `b_ij - b_kl`, the quantities
/// in which the whole vector field and all equilibrium formulas are written.
#[derive(Debug, Clone, Copy)]
pub struct DeviationTable {
    game: GameTwoByThree,
}

impl DeviationTable {
    /// `a_ij - a_kl`, 1-based indices.
    pub fn a_dev(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.game.a(i, j) - self.game.a(k, l)
    }

    /// `b_ij - b_kl`, 1-based indices.
    pub fn b_dev(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.game.b(i, j) - self.game.b(k, l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario;

    #[test]
    fn stag_hunt_and_bos_are_coordination_games() {
        assert!(scenario::stag_hunt().validate_coordination().is_valid());
        assert!(scenario::battle_of_the_sexes()
            .validate_coordination()
            .is_valid());
    }

    #[test]
    fn tie_in_first_inequality_is_reported_by_name() {
        let g = GameTwoByTwo::new([[1.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]);
        let check = g.validate_coordination();
        assert!(!check.is_valid());
        let names: Vec<_> = check.violations().iter().map(|v| v.name.clone()).collect();
        assert!(names.contains(&"a11-a21>0".to_string()));
        // a11 - a21 == 0 is also a degenerate tie
        assert!(check.checks[0].degenerate);
    }

    #[test]
    fn embed_accepts_both_stag_hunt_scenarios() {
        assert!(scenario::stag_hunt_a().b(1, 3) > scenario::stag_hunt_a().b(1, 1));
        assert!(scenario::stag_hunt_b().b(1, 3) > scenario::stag_hunt_b().b(1, 1));
    }

    #[test]
    fn embed_rejects_extension_without_benefit() {
        let err = GameTwoByThree::embed(
            &scenario::stag_hunt(),
            NewActionPayoffs {
                a13: 0.0,
                a23: 2.0,
                b13: 5.0,
                b23: 10.0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, EmbedError::NoBenefit { .. }));
    }

    #[test]
    fn embed_rejects_invalid_base() {
        let g = GameTwoByTwo::new([[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 1.0]]);
        let err = GameTwoByThree::embed(
            &g,
            NewActionPayoffs {
                a13: 0.0,
                a23: 0.0,
                b13: 5.0,
                b23: 0.0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, EmbedError::BaseNotCoordination(_)));
    }

    #[test]
    fn deviations_match_direct_subtraction() {
        let g = scenario::stag_hunt_a();
        let d = g.deviations();
        assert_eq!(d.b_dev(2, 1, 2, 3), 8.0 - 9.0);
        assert_eq!(d.a_dev(1, 3, 2, 3), 0.0 - 2.0);
        assert_eq!(d.a_dev(1, 1, 1, 1), 0.0);
    }

    #[test]
    fn restriction_inverts_embedding() {
        let base = scenario::stag_hunt();
        let g = scenario::stag_hunt_a();
        assert_eq!(g.base(), base);
    }
}
