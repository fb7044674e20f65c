//! Closed-form enumeration of every equilibrium of the replicator flow on the
//! wedge: the six corners, the mixed equilibrium of the base game inside the
//! plane where the new action is unused, and at most one further equilibrium
//! inside one of the other two invariant planes. A damped Newton search over
//! interior grid points double-checks that nothing was missed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics;
use crate::game::{GameTwoByThree, DEGENERACY_TOL};

/// Coordinate agreement tolerance when attaching a face label to a point.
pub const FACE_TOL: f64 = 1e-12;
/// Two equilibria closer than this in max-norm are considered the same.
pub const DEDUP_TOL: f64 = 1e-9;

/// A point of the state space: `x` is A's weight on `A1`, `y1`/`y2` are B's
/// weights on `B1`/`B2`, and `1 - y1 - y2` is the weight on the new action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub x: f64,
    pub y1: f64,
    pub y2: f64,
}

impl State {
    pub fn new(x: f64, y1: f64, y2: f64) -> Self {
        State { x, y1, y2 }
    }

    /// Weight on the column player's third action.
    pub fn y3(&self) -> f64 {
        1.0 - self.y1 - self.y2
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y1, self.y2]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        State::new(v[0], v[1], v[2])
    }

    /// Max-norm distance to another point.
    pub fn dist_max(&self, other: &State) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y1 - other.y1).abs())
            .max((self.y2 - other.y2).abs())
    }

    /// Largest violation of the wedge constraints; zero inside the wedge.
    pub fn wedge_violation(&self) -> f64 {
        let mut v: f64 = 0.0;
        for c in [self.x, self.y1, self.y2] {
            v = v.max(-c).max(c - 1.0);
        }
        v.max(self.y1 + self.y2 - 1.0)
    }

    pub fn in_wedge(&self, tol: f64) -> bool {
        self.wedge_violation() <= tol
    }

    /// Smallest distance to any of the five bounding faces; where the point
    /// sits relative to the interior.
    pub fn face_margin(&self) -> f64 {
        self.x
            .min(1.0 - self.x)
            .min(self.y1)
            .min(self.y2)
            .min(1.0 - self.y1 - self.y2)
    }

    /// Clamps coordinates to `[0,1]` and rescales `(y1, y2)` onto the wedge
    /// when their sum exceeds one.
    pub fn project_into_wedge(&self) -> State {
        let x = self.x.clamp(0.0, 1.0);
        let mut y1 = self.y1.clamp(0.0, 1.0);
        let mut y2 = self.y2.clamp(0.0, 1.0);
        let s = y1 + y2;
        if s > 1.0 {
            y1 /= s;
            y2 /= s;
        }
        State::new(x, y1, y2)
    }

    /// Which flow-invariant subset the point lies in, within `tol`.
    pub fn face(&self, tol: f64) -> FaceLabel {
        let on_x0 = self.x.abs() <= tol;
        let on_x1 = (1.0 - self.x).abs() <= tol;
        let on_y1 = self.y1.abs() <= tol;
        let on_y2 = self.y2.abs() <= tol;
        let on_y3 = (1.0 - self.y1 - self.y2).abs() <= tol;
        let face_count =
            [on_x0, on_x1, on_y1, on_y2, on_y3].iter().filter(|&&f| f).count();
        if face_count >= 2 {
            FaceLabel::Corner
        } else if on_y1 {
            FaceLabel::Sy1
        } else if on_y2 {
            FaceLabel::Sy2
        } else if on_y3 {
            FaceLabel::Sy3
        } else if on_x0 {
            FaceLabel::X0
        } else if on_x1 {
            FaceLabel::X1
        } else {
            FaceLabel::Interior
        }
    }
}

/// Flow-invariant subsets of the wedge. `Sy1`, `Sy2`, `Sy3` are the planes
/// where B abstains from `B1`, `B2`, `B3` respectively; `X0`/`X1` are the
/// planes where A plays a pure action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceLabel {
    Corner,
    Sy1,
    Sy2,
    Sy3,
    X0,
    X1,
    Interior,
}

/// One sign condition from the existence analysis, evaluated on a game.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignCondition {
    pub name: String,
    pub value: f64,
    pub satisfied: bool,
}

impl SignCondition {
    fn positive(name: &str, value: f64) -> Self {
        SignCondition {
            name: name.to_string(),
            value,
            satisfied: value > 0.0,
        }
    }

    fn negative(name: &str, value: f64) -> Self {
        SignCondition {
            name: name.to_string(),
            value,
            satisfied: value < 0.0,
        }
    }
}

/// An equilibrium of the replicator flow with its location, invariant-set
/// label, action-pair name when it is a corner, and the sign conditions that
/// certify its existence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquilibriumRecord {
    pub point: State,
    pub face: FaceLabel,
    pub name: String,
    pub certificate: Vec<SignCondition>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DegenerateGame {
    #[error("denominator {name} = {value:e} is within {tol:e} of zero; the game violates genericity")]
    VanishingDenominator { name: String, value: f64, tol: f64 },
    #[error("sub-game is not a coordination game: {0}")]
    NotCoordination(String),
    #[error("existence product {name} = {value:e} sits on the genericity boundary")]
    BoundaryExistence { name: String, value: f64 },
}

fn checked_fraction(num: f64, den: f64, name: &str) -> Result<f64, DegenerateGame> {
    if den.abs() <= DEGENERACY_TOL {
        return Err(DegenerateGame::VanishingDenominator {
            name: name.to_string(),
            value: den,
            tol: DEGENERACY_TOL,
        });
    }
    Ok(num / den)
}

/// The six corners of the wedge, each a pure-action profile, in a fixed order.
pub fn corner_equilibria(_g: &GameTwoByThree) -> Vec<EquilibriumRecord> {
    let corners = [
        (0.0, 0.0, 0.0, "(A2,B3)"),
        (1.0, 0.0, 0.0, "(A1,B3)"),
        (0.0, 1.0, 0.0, "(A2,B1)"),
        (0.0, 0.0, 1.0, "(A2,B2)"),
        (1.0, 1.0, 0.0, "(A1,B1)"),
        (1.0, 0.0, 1.0, "(A1,B2)"),
    ];
    corners
        .iter()
        .map(|&(x, y1, y2, name)| EquilibriumRecord {
            point: State::new(x, y1, y2),
            face: FaceLabel::Corner,
            name: name.to_string(),
            certificate: Vec::new(),
        })
        .collect()
}

/// The mixed equilibrium of the base coordination game, living in the plane
/// where the new action is unused. Requires the coordination property, which
/// places it strictly inside that plane.
pub fn mixed_sy3_equilibrium(g: &GameTwoByThree) -> Result<EquilibriumRecord, DegenerateGame> {
    let check = g.base().validate_coordination();
    if !check.is_valid() || check.is_degenerate() {
        let names: Vec<_> = check
            .checks
            .iter()
            .filter(|c| !c.satisfied || c.degenerate)
            .map(|c| c.name.clone())
            .collect();
        return Err(DegenerateGame::NotCoordination(names.join(", ")));
    }
    let d = g.deviations();
    let p = checked_fraction(
        d.b_dev(2, 2, 2, 1),
        d.b_dev(2, 2, 2, 1) + d.b_dev(1, 1, 1, 2),
        "b2221+b1112",
    )?;
    let q = checked_fraction(
        d.a_dev(2, 2, 1, 2),
        d.a_dev(2, 2, 1, 2) + d.a_dev(1, 1, 2, 1),
        "a2212+a1121",
    )?;
    Ok(EquilibriumRecord {
        point: State::new(p, q, 1.0 - q),
        face: FaceLabel::Sy3,
        name: "mixed".to_string(),
        certificate: vec![
            SignCondition::positive("b22-b21>0", d.b_dev(2, 2, 2, 1)),
            SignCondition::positive("b11-b12>0", d.b_dev(1, 1, 1, 2)),
            SignCondition::positive("a22-a12>0", d.a_dev(2, 2, 1, 2)),
            SignCondition::positive("a11-a21>0", d.a_dev(1, 1, 2, 1)),
        ],
    })
}

/// Outcome of looking for an equilibrium inside one of the two new invariant
/// planes: absence is a normal answer, with the failed condition named.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum FaceEquilibrium {
    Present(EquilibriumRecord),
    Absent { reason: String },
}

impl FaceEquilibrium {
    pub fn record(&self) -> Option<&EquilibriumRecord> {
        match self {
            FaceEquilibrium::Present(r) => Some(r),
            FaceEquilibrium::Absent { .. } => None,
        }
    }
}

/// Equilibrium inside the plane where B abstains from `B1`; exists iff
/// `a13-a23 > 0` and `(b22-b23)(b13-b12) > 0`.
pub fn face_equilibrium_sy1(g: &GameTwoByThree) -> Result<FaceEquilibrium, DegenerateGame> {
    let d = g.deviations();
    let a1323 = d.a_dev(1, 3, 2, 3);
    let b2223 = d.b_dev(2, 2, 2, 3);
    let b1312 = d.b_dev(1, 3, 1, 2);
    let product = b2223 * b1312;
    for (name, v) in [("a1323", a1323), ("b2223", b2223), ("b1312", b1312)] {
        if v.abs() <= DEGENERACY_TOL {
            return Err(DegenerateGame::BoundaryExistence {
                name: name.to_string(),
                value: v,
            });
        }
    }
    if a1323 <= 0.0 {
        return Ok(FaceEquilibrium::Absent {
            reason: "a1323>0 fails".to_string(),
        });
    }
    if product <= 0.0 {
        return Ok(FaceEquilibrium::Absent {
            reason: "b2223*b1312>0 fails".to_string(),
        });
    }
    let x = checked_fraction(b2223, b2223 + b1312, "b2223+b1312")?;
    let y2 = checked_fraction(a1323, a1323 + d.a_dev(2, 2, 1, 2), "a1323+a2212")?;
    Ok(FaceEquilibrium::Present(EquilibriumRecord {
        point: State::new(x, 0.0, y2),
        face: FaceLabel::Sy1,
        name: "sy1-interior".to_string(),
        certificate: vec![
            SignCondition::positive("a1323>0", a1323),
            SignCondition::positive("b2223*b1312>0", product),
        ],
    }))
}

/// Equilibrium inside the plane where B abstains from `B2`; exists iff
/// `a13-a23 < 0` and `(b21-b23)(b13-b11) > 0`.
pub fn face_equilibrium_sy2(g: &GameTwoByThree) -> Result<FaceEquilibrium, DegenerateGame> {
    let d = g.deviations();
    let a1323 = d.a_dev(1, 3, 2, 3);
    let b2123 = d.b_dev(2, 1, 2, 3);
    let b1311 = d.b_dev(1, 3, 1, 1);
    let product = b2123 * b1311;
    for (name, v) in [("a1323", a1323), ("b2123", b2123), ("b1311", b1311)] {
        if v.abs() <= DEGENERACY_TOL {
            return Err(DegenerateGame::BoundaryExistence {
                name: name.to_string(),
                value: v,
            });
        }
    }
    if a1323 >= 0.0 {
        return Ok(FaceEquilibrium::Absent {
            reason: "a1323<0 fails".to_string(),
        });
    }
    if product <= 0.0 {
        return Ok(FaceEquilibrium::Absent {
            reason: "b2123*b1311>0 fails".to_string(),
        });
    }
    let x = checked_fraction(b2123, b2123 + b1311, "b2123+b1311")?;
    let y1 = checked_fraction(a1323, a1323 + d.a_dev(2, 1, 1, 1), "a1323+a2111")?;
    Ok(FaceEquilibrium::Present(EquilibriumRecord {
        point: State::new(x, y1, 0.0),
        face: FaceLabel::Sy2,
        name: "sy2-interior".to_string(),
        certificate: vec![
            SignCondition::negative("a1323<0", a1323),
            SignCondition::positive("b2123*b1311>0", product),
        ],
    }))
}

/// Every equilibrium of the flow: the six corners, the mixed equilibrium, and
/// whichever face equilibrium exists. Always 7 or 8 records; the two face
/// equilibria are mutually exclusive because their existence conditions demand
/// opposite signs of `a13-a23`.
pub fn all_equilibria(g: &GameTwoByThree) -> Result<Vec<EquilibriumRecord>, DegenerateGame> {
    let mut out = corner_equilibria(g);
    out.push(mixed_sy3_equilibrium(g)?);
    if let FaceEquilibrium::Present(r) = face_equilibrium_sy1(g)? {
        out.push(r);
    }
    if let FaceEquilibrium::Present(r) = face_equilibrium_sy2(g)? {
        out.push(r);
    }
    // Dedup defensively; distinct closed forms never coincide off the
    // genericity boundary.
    let mut deduped: Vec<EquilibriumRecord> = Vec::with_capacity(out.len());
    for r in out {
        if !deduped.iter().any(|p| p.point.dist_max(&r.point) < DEDUP_TOL) {
            deduped.push(r);
        }
    }
    Ok(deduped)
}

/// Margin from every face below which a Newton root is attributed to a known
/// boundary equilibrium and discarded.
const INTERIOR_MARGIN: f64 = 1e-6;

/// Damped Newton search for zeros of the full vector field, started from a
/// jittered `resolution^3` grid of interior points. Returns converged roots
/// strictly interior to the wedge; the expected answer is an empty list.
pub fn interior_root_search(g: &GameTwoByThree, resolution: usize, seed: u64) -> Vec<State> {
    assert!(resolution >= 8, "grid resolution must be at least 8");
    let n = resolution;
    let starts: Vec<State> = (0..n * n * n)
        .filter_map(|idx| {
            let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64);
            let jitter = 0.25 / n as f64;
            let coord = |m: usize, r: &mut ChaCha8Rng| {
                ((m as f64 + 0.5) / n as f64 + r.random_range(-jitter..jitter)).clamp(1e-3, 1.0 - 1e-3)
            };
            let s = State::new(coord(i, &mut rng), coord(j, &mut rng), coord(k, &mut rng));
            (s.y1 + s.y2 < 1.0 - 1e-3).then_some(s)
        })
        .collect();

    let mut roots: Vec<State> = starts
        .par_iter()
        .filter_map(|s0| newton_root(g, *s0))
        .filter(|root| root.face_margin() >= INTERIOR_MARGIN)
        .collect();

    // Deterministic merge independent of thread scheduling.
    roots.sort_by(|a, b| {
        a.as_array()
            .partial_cmp(&b.as_array())
            .expect("finite coordinates")
    });
    let mut deduped: Vec<State> = Vec::new();
    for r in roots {
        if !deduped.iter().any(|p| p.dist_max(&r) < DEDUP_TOL) {
            deduped.push(r);
        }
    }
    deduped
}

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_RHS_TOL: f64 = 1e-12;

fn newton_root(g: &GameTwoByThree, mut s: State) -> Option<State> {
    for _ in 0..NEWTON_MAX_ITER {
        let f = dynamics::rhs(g, &s);
        let norm = f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm < NEWTON_RHS_TOL {
            return Some(s);
        }
        let j = crate::stability::jacobian(g, &s);
        let step = solve3(&j.entries(), &f)?;
        // Halve the step while it would leave the wedge.
        let mut lambda = 1.0;
        let mut next = s;
        for _ in 0..60 {
            next = State::new(s.x - lambda * step[0], s.y1 - lambda * step[1], s.y2 - lambda * step[2]);
            if next.in_wedge(0.0) {
                break;
            }
            lambda *= 0.5;
        }
        if !next.in_wedge(0.0) {
            return None;
        }
        if next.dist_max(&s) < 1e-16 {
            // Stalled without reaching the residual tolerance.
            return None;
        }
        s = next;
    }
    None
}

/// Direct 3x3 linear solve with partial pivoting; `None` on (near-)singular systems.
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = m[i][3];
        for k in i + 1..3 {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::rhs;
    use crate::game::{GameTwoByThree, NewActionPayoffs};
    use crate::scenario;

    fn rhs_max_norm(g: &GameTwoByThree, s: &State) -> f64 {
        rhs(g, s).iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    #[test]
    fn corners_are_fixed_and_labelled() {
        let g = scenario::stag_hunt_a();
        let corners = corner_equilibria(&g);
        assert_eq!(corners.len(), 6);
        for c in &corners {
            assert_eq!(rhs_max_norm(&g, &c.point), 0.0);
        }
        let b2 = corners
            .iter()
            .find(|c| c.point == State::new(0.0, 0.0, 1.0))
            .unwrap();
        assert_eq!(b2.name, "(A2,B2)");
        // all six are distinct
        for (i, a) in corners.iter().enumerate() {
            for b in &corners[i + 1..] {
                assert!(a.point.dist_max(&b.point) > 0.5);
            }
        }
    }

    #[test]
    fn stag_hunt_mixed_equilibrium_is_one_third() {
        let eq = mixed_sy3_equilibrium(&scenario::stag_hunt_a()).unwrap();
        assert!((eq.point.x - 1.0 / 3.0).abs() < 1e-15);
        assert!((eq.point.y1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((eq.point.y2 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(eq.face, FaceLabel::Sy3);
    }

    #[test]
    fn bos_mixed_equilibrium() {
        let eq = mixed_sy3_equilibrium(&scenario::battle_of_the_sexes_ext()).unwrap();
        assert!((eq.point.x - 10.0 / 17.0).abs() < 1e-15);
        assert!((eq.point.y1 - 7.0 / 17.0).abs() < 1e-15);
        assert!((eq.point.y2 - 10.0 / 17.0).abs() < 1e-15);
    }

    #[test]
    fn symmetric_pure_coordination_mixed_is_midpoint() {
        let g = GameTwoByThree::from_matrices(
            [[1.0, 0.0, 0.25], [0.0, 1.0, 0.25]],
            [[1.0, 0.0, 1.5], [0.0, 1.0, 0.25]],
        );
        let eq = mixed_sy3_equilibrium(&g).unwrap();
        assert_eq!(eq.point, State::new(0.5, 0.5, 0.5));
    }

    #[test]
    fn scenario_a_has_no_face_equilibria() {
        let g = scenario::stag_hunt_a();
        match face_equilibrium_sy1(&g).unwrap() {
            FaceEquilibrium::Absent { reason } => assert_eq!(reason, "a1323>0 fails"),
            other => panic!("expected absent, got {other:?}"),
        }
        match face_equilibrium_sy2(&g).unwrap() {
            FaceEquilibrium::Absent { reason } => assert_eq!(reason, "b2123*b1311>0 fails"),
            other => panic!("expected absent, got {other:?}"),
        }
        assert_eq!(all_equilibria(&g).unwrap().len(), 7);
    }

    #[test]
    fn scenario_b_has_the_sy2_equilibrium() {
        let g = scenario::stag_hunt_b();
        let eq = match face_equilibrium_sy2(&g).unwrap() {
            FaceEquilibrium::Present(r) => r,
            other => panic!("expected present, got {other:?}"),
        };
        assert!((eq.point.x - 2.0 / 3.0).abs() < 1e-15);
        assert!((eq.point.y1 - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(eq.point.y2, 0.0);
        assert!(rhs_max_norm(&g, &eq.point) < 1e-15);
        assert_eq!(all_equilibria(&g).unwrap().len(), 8);
    }

    #[test]
    fn sy1_equilibrium_appears_when_a13_exceeds_a23() {
        let g = GameTwoByThree::embed(
            &scenario::stag_hunt(),
            NewActionPayoffs {
                a13: 3.0,
                a23: 1.0,
                b13: 6.0,
                b23: 9.0,
            },
        )
        .unwrap();
        let eq = match face_equilibrium_sy1(&g).unwrap() {
            FaceEquilibrium::Present(r) => r,
            other => panic!("expected present, got {other:?}"),
        };
        assert!((eq.point.x - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(eq.point.y1, 0.0);
        assert!((eq.point.y2 - 0.5).abs() < 1e-15);
        assert!(rhs_max_norm(&g, &eq.point) < 1e-15);
        assert_eq!(all_equilibria(&g).unwrap().len(), 8);
        // Sy2 is then impossible: its first condition needs the opposite sign.
        assert!(matches!(
            face_equilibrium_sy2(&g).unwrap(),
            FaceEquilibrium::Absent { .. }
        ));
    }

    #[test]
    fn tied_third_column_is_degenerate() {
        // b23 == b22 puts the Sy1 existence product on the boundary.
        let g = GameTwoByThree::embed(
            &scenario::stag_hunt(),
            NewActionPayoffs {
                a13: 3.0,
                a23: 1.0,
                b13: 6.0,
                b23: 10.0,
            },
        )
        .unwrap();
        assert!(face_equilibrium_sy1(&g).is_err());
    }

    #[test]
    fn interior_search_finds_nothing_on_the_examples() {
        for g in [
            scenario::stag_hunt_a(),
            scenario::stag_hunt_b(),
            scenario::battle_of_the_sexes_ext(),
        ] {
            assert!(interior_root_search(&g, 8, 7).is_empty());
        }
    }

    #[test]
    fn face_labels() {
        assert_eq!(State::new(0.5, 0.0, 0.3).face(FACE_TOL), FaceLabel::Sy1);
        assert_eq!(State::new(0.5, 0.3, 0.0).face(FACE_TOL), FaceLabel::Sy2);
        assert_eq!(State::new(0.5, 0.3, 0.7).face(FACE_TOL), FaceLabel::Sy3);
        assert_eq!(State::new(0.0, 0.3, 0.3).face(FACE_TOL), FaceLabel::X0);
        assert_eq!(State::new(1.0, 0.3, 0.3).face(FACE_TOL), FaceLabel::X1);
        assert_eq!(State::new(0.5, 0.3, 0.3).face(FACE_TOL), FaceLabel::Interior);
        assert_eq!(State::new(1.0, 1.0, 0.0).face(FACE_TOL), FaceLabel::Corner);
    }
}
