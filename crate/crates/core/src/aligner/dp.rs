//! Needleman-Wunsch style global DP shared by trace and profile alignment.

use std::ops::Add;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Step {
    /// Column pairs item `i` of the first input with item `j` of the second.
    Both(usize, usize),
    /// Item of the first input against a gap.
    First(usize),
    /// Item of the second input against a gap.
    Second(usize),
}

#[derive(Clone, Copy)]
enum Dir {
    Diag,
    Up,
    Left,
}

/// Full global alignment of `n` against `m` items. Traceback ties prefer the
/// diagonal, then a gap in the second input, then a gap in the first.
pub(crate) fn global_align<T, S, D, I>(
    n: usize,
    m: usize,
    zero: T,
    pair: S,
    first_vs_gap: D,
    second_vs_gap: I,
) -> (Vec<Step>, T)
where
    T: Copy + Add<Output = T> + PartialOrd,
    S: Fn(usize, usize) -> T,
    D: Fn(usize) -> T,
    I: Fn(usize) -> T,
{
    let w = m + 1;
    let mut score = vec![zero; (n + 1) * w];
    let mut dir = vec![Dir::Diag; (n + 1) * w];
    for i in 1..=n {
        score[i * w] = score[(i - 1) * w] + first_vs_gap(i - 1);
        dir[i * w] = Dir::Up;
    }
    for j in 1..=m {
        score[j] = score[j - 1] + second_vs_gap(j - 1);
        dir[j] = Dir::Left;
    }
    let second_gap: Vec<T> = (0..m).map(&second_vs_gap).collect();
    for i in 1..=n {
        let del = first_vs_gap(i - 1);
        for j in 1..=m {
            let diag = score[(i - 1) * w + j - 1] + pair(i - 1, j - 1);
            let up = score[(i - 1) * w + j] + del;
            let left = score[i * w + j - 1] + second_gap[j - 1];
            let (best, d) = if diag >= up && diag >= left {
                (diag, Dir::Diag)
            } else if up >= left {
                (up, Dir::Up)
            } else {
                (left, Dir::Left)
            };
            score[i * w + j] = best;
            dir[i * w + j] = d;
        }
    }

    let mut steps = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        match dir[i * w + j] {
            Dir::Diag => {
                steps.push(Step::Both(i - 1, j - 1));
                i -= 1;
                j -= 1;
            }
            Dir::Up => {
                steps.push(Step::First(i - 1));
                i -= 1;
            }
            Dir::Left => {
                steps.push(Step::Second(j - 1));
                j -= 1;
            }
        }
    }
    steps.reverse();
    (steps, score[n * w + m])
}
