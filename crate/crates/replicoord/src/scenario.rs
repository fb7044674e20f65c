//! Bundled example games: the Stag Hunt and Battle of the Sexes base games and
//! the extended variants used throughout the test suite and the `scenarios/`
//! directory.

use crate::game::{GameTwoByThree, GameTwoByTwo, NewActionPayoffs};

/// Stag Hunt base game. Actions are (Hare, Stag) for both players; hunting
/// stag together pays 10 to each, hunting hare alone is safe.
pub fn stag_hunt() -> GameTwoByTwo {
    GameTwoByTwo::new([[5.0, 8.0], [1.0, 10.0]], [[5.0, 1.0], [8.0, 10.0]])
}

/// Battle of the Sexes base game: actions (Football, Opera).
pub fn battle_of_the_sexes() -> GameTwoByTwo {
    GameTwoByTwo::new([[10.0, 0.0], [0.0, 7.0]], [[7.0, 0.0], [0.0, 10.0]])
}

/// Stag Hunt with a third hunting option for B, payoffs chosen so the
/// sufficient conditions for global convergence to `(A2,B2)` hold (Q = -6).
pub fn stag_hunt_a() -> GameTwoByThree {
    GameTwoByThree::embed(
        &stag_hunt(),
        NewActionPayoffs {
            a13: 0.0,
            a23: 2.0,
            b13: 6.0,
            b23: 9.0,
        },
    )
    .expect("stag hunt A extension is valid")
}

/// Stag Hunt variant with Q = +3: the assumptions hold but the sign condition
/// on Q fails, so an attracting center plane survives and some interior
/// trajectories never settle.
pub fn stag_hunt_b() -> GameTwoByThree {
    GameTwoByThree::embed(
        &stag_hunt(),
        NewActionPayoffs {
            a13: 0.0,
            a23: 2.0,
            b13: 5.5,
            b23: 7.0,
        },
    )
    .expect("stag hunt B extension is valid")
}

/// Battle of the Sexes with a Cinema option for B; satisfies the convergence
/// conditions with Q = -3.
pub fn battle_of_the_sexes_ext() -> GameTwoByThree {
    GameTwoByThree::embed(
        &battle_of_the_sexes(),
        NewActionPayoffs {
            a13: 1.0,
            a23: 2.0,
            b13: 8.0,
            b23: -1.0,
        },
    )
    .expect("battle of the sexes extension is valid")
}
