//! Deep Sea Treasure: a submarine starts at the top-left of an 11 x 10 grid
//! and trades treasure value against the time spent reaching it.

use super::{TabularMomdp, Transition};

const ROWS: usize = 11;
const COLS: usize = 10;
const HORIZON: usize = 50;

/// `(row, column, value)` of each treasure. Cells below a treasure are rock.
pub const DST_TREASURES: [(usize, usize, f64); 10] = [
    (1, 0, 1.0),
    (2, 1, 2.0),
    (3, 2, 3.0),
    (4, 3, 5.0),
    (4, 4, 8.0),
    (4, 5, 16.0),
    (7, 6, 24.0),
    (7, 7, 50.0),
    (9, 8, 74.0),
    (10, 9, 124.0),
];

/// Maximal points used to initialise the search on this instance.
pub const DST_MAX_POINTS: [[f64; 2]; 2] = [[124.0, -50.0], [1.0, -1.0]];
pub const DST_MIN_POINT: [f64; 2] = [0.0, -50.0];

fn treasure_depth(col: usize) -> usize {
    DST_TREASURES[col].0
}

fn treasure_at(row: usize, col: usize) -> Option<f64> {
    DST_TREASURES
        .iter()
        .find(|(r, c, _)| *r == row && *c == col)
        .map(|t| t.2)
}

fn is_rock(row: usize, col: usize) -> bool {
    row > treasure_depth(col)
}

/// Canonical instance: actions up, down, left, right; reward (treasure, -1)
/// per step; treasures are terminal; γ = 1 and H = 50.
pub fn dst_env() -> TabularMomdp {
    let index = |r: usize, c: usize| r * COLS + c;
    let moves: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];
    let mut transitions = Vec::with_capacity(ROWS * COLS);
    let mut terminals = Vec::new();
    for r in 0..ROWS {
        for c in 0..COLS {
            if treasure_at(r, c).is_some() {
                terminals.push(index(r, c));
            }
            let row = moves
                .iter()
                .map(|(dr, dc)| {
                    if is_rock(r, c) {
                        return vec![Transition {
                            next: index(r, c),
                            prob: 1.0,
                            reward: vec![0.0, 0.0],
                        }];
                    }
                    let nr = r as isize + dr;
                    let nc = c as isize + dc;
                    let (nr, nc) = if nr < 0
                        || nc < 0
                        || nr >= ROWS as isize
                        || nc >= COLS as isize
                        || is_rock(nr as usize, nc as usize)
                    {
                        (r, c)
                    } else {
                        (nr as usize, nc as usize)
                    };
                    vec![Transition {
                        next: index(nr, nc),
                        prob: 1.0,
                        reward: vec![treasure_at(nr, nc).unwrap_or(0.0), -1.0],
                    }]
                })
                .collect();
            transitions.push(row);
        }
    }
    let mut mu = vec![0.0; ROWS * COLS];
    mu[0] = 1.0;
    TabularMomdp::new(ROWS * COLS, 4, 2, transitions, mu, 1.0, HORIZON, &terminals)
        .expect("Deep Sea Treasure is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ValueVec;
    use crate::momdp::{enumerate_returns, DEFAULT_ENUMERATION_CAP};
    use std::collections::VecDeque;

    /// Shortest path to every treasure by BFS; the front is then
    /// `(value, -steps)` for each treasure plus never surfacing `(0, -H)`.
    fn brute_force_front() -> Vec<ValueVec> {
        let mut dist = vec![vec![usize::MAX; COLS]; ROWS];
        dist[0][0] = 0;
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        while let Some((r, c)) = queue.pop_front() {
            if treasure_at(r, c).is_some() {
                continue;
            }
            for (dr, dc) in [(-1isize, 0isize), (1, 0), (0, -1), (0, 1)] {
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr >= ROWS as isize || nc >= COLS as isize {
                    continue;
                }
                let (nr, nc) = (nr as usize, nc as usize);
                if !is_rock(nr, nc) && dist[nr][nc] == usize::MAX {
                    dist[nr][nc] = dist[r][c] + 1;
                    queue.push_back((nr, nc));
                }
            }
        }
        let mut pts: Vec<ValueVec> = DST_TREASURES
            .iter()
            .filter(|(r, c, _)| dist[*r][*c] <= HORIZON)
            .map(|(r, c, v)| ValueVec::new(vec![*v, -(dist[*r][*c] as f64)]).unwrap())
            .collect();
        pts.push(ValueVec::new(vec![0.0, -(HORIZON as f64)]).unwrap());
        crate::geometry::pprune(&pts).unwrap()
    }

    #[test]
    fn front_matches_shortest_paths() {
        let mut expected = brute_force_front();
        let mut got: Vec<ValueVec> = enumerate_returns(&dst_env(), DEFAULT_ENUMERATION_CAP)
            .unwrap()
            .into_iter()
            .map(|(v, _)| v)
            .collect();
        expected.sort_by(|a, b| a.lex_cmp(b));
        got.sort_by(|a, b| a.lex_cmp(b));
        assert_eq!(got, expected);
        let times: Vec<f64> = got.iter().map(|v| v[1]).collect();
        assert_eq!(times, vec![-1., -3., -5., -7., -8., -9., -13., -14., -17., -19.]);
    }

    #[test]
    fn layout() {
        let m = dst_env();
        assert_eq!(m.num_states(), 110);
        assert_eq!(m.num_actions(), 4);
        assert_eq!(m.horizon(), 50);
        assert_eq!(m.gamma(), 1.0);
        assert!(m.is_terminal(10));
        assert!(m.is_terminal(10 * COLS + 9));
        assert!(m.has_deterministic_transitions());
        assert_eq!(m.deterministic_start(), Some(0));
    }
}
