use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::model::{Alignment, Cell};

const MAX_DRAWS: usize = 64;

/// A reference alignment with a known number of injected relocations.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedAlignment {
    pub alignment: Alignment,
    pub injected_moves: usize,
    pub seed: u64,
}

/// Applies `moves` random single-occurrence relocations to `reference`.
///
/// Each move picks an occupied cell uniformly and slides it left or right
/// into one of the gap cells reachable without passing another activity of
/// the same row. If neither side has a reachable gap, a fresh gap column is
/// inserted next to the cell and the activity moves into it. All-gap columns
/// are dropped after every move. A draw that leaves the grid unchanged is
/// redrawn (up to 64 times; a single-row alignment can never change).
pub fn perturb(reference: &Alignment, moves: usize, seed: u64) -> Result<PerturbedAlignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<Vec<Cell>> = reference.rows().to_vec();
    for _ in 0..moves {
        // a lone activity stepping into a fresh column of its own leaves the
        // grid unchanged; draw again so every move counts
        for _ in 0..MAX_DRAWS {
            let mut next = rows.clone();
            relocate_one(&mut next, &mut rng);
            compact(&mut next);
            if next != rows {
                rows = next;
                break;
            }
        }
    }
    let alignment = Alignment::new(reference.source_arc().clone(), rows)?;
    Ok(PerturbedAlignment {
        alignment,
        injected_moves: moves,
        seed,
    })
}

fn reachable_gaps(row: &[Cell], col: usize, rightwards: bool) -> Vec<usize> {
    let mut out = Vec::new();
    if rightwards {
        for (j, cell) in row.iter().enumerate().skip(col + 1) {
            if !cell.is_gap() {
                break;
            }
            out.push(j);
        }
    } else {
        for j in (0..col).rev() {
            if !row[j].is_gap() {
                break;
            }
            out.push(j);
        }
    }
    out
}

fn relocate_one(rows: &mut [Vec<Cell>], rng: &mut ChaCha8Rng) {
    let occupied: usize = rows.iter().map(|r| r.iter().filter(|c| !c.is_gap()).count()).sum();
    let mut pick = rng.gen_range(0..occupied);
    let (mut r, mut c) = (0, 0);
    'find: for (ri, row) in rows.iter().enumerate() {
        for (ci, cell) in row.iter().enumerate() {
            if !cell.is_gap() {
                if pick == 0 {
                    (r, c) = (ri, ci);
                    break 'find;
                }
                pick -= 1;
            }
        }
    }

    let rightwards = rng.gen_bool(0.5);
    let mut targets = reachable_gaps(&rows[r], c, rightwards);
    if targets.is_empty() {
        targets = reachable_gaps(&rows[r], c, !rightwards);
    }
    if targets.is_empty() {
        let at = if rightwards { c + 1 } else { c };
        for row in rows.iter_mut() {
            row.insert(at, Cell::Gap);
        }
        if !rightwards {
            c += 1;
        }
        targets.push(at);
    }
    let to = targets[rng.gen_range(0..targets.len())];
    rows[r].swap(c, to);
}

fn compact(rows: &mut [Vec<Cell>]) {
    let width = rows.first().map_or(0, Vec::len);
    let keep: Vec<bool> = (0..width).map(|j| rows.iter().any(|r| !r[j].is_gap())).collect();
    for row in rows.iter_mut() {
        let mut j = 0;
        row.retain(|_| {
            j += 1;
            keep[j - 1]
        });
    }
}
