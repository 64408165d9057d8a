//! Lower envelopes of affine functions `slope * t + offset` on a parameter
//! interval.

use num_traits::Zero;

use crate::fm::LinearValue;
use crate::prevariety::ParamBound;
use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line<T> {
    pub slope: Q,
    pub offset: T,
}

impl<T: LinearValue> Line<T> {
    pub fn new(slope: Q, offset: T) -> Self {
        Line { slope, offset }
    }

    pub fn at(&self, t: &T) -> T {
        self.offset.clone() + t.scale(&self.slope)
    }
}

/// A maximal parameter range on which one group of identical lines is
/// minimal. `from`/`to` are `None` when unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvPiece<T> {
    /// Indices of the (identical) lines attaining the minimum.
    pub lines: Vec<usize>,
    pub from: Option<T>,
    pub to: Option<T>,
}

impl<T: LinearValue> EnvPiece<T> {
    /// The single line winning strictly on the piece's interior, if any.
    pub fn strict_winner(&self) -> Option<usize> {
        match self.lines.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// A parameter strictly inside the piece.
    pub fn interior(&self) -> T {
        let one = T::from_q(Q::from_integer(1.into()));
        match (&self.from, &self.to) {
            (Some(a), Some(b)) => (a.clone() + b.clone()).scale(&Q::new(1.into(), 2.into())),
            (Some(a), None) => a.clone() + one,
            (None, Some(b)) => b.clone() - one,
            (None, None) => T::from_q(Q::zero()),
        }
    }
}

/// Breakpoint between consecutive pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvVertex<T> {
    pub t: T,
    pub value: T,
    /// Representative lines of the pieces to the left and right.
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Envelope<T> {
    pub lines: Vec<Line<T>>,
    pub pieces: Vec<EnvPiece<T>>,
    pub vertices: Vec<EnvVertex<T>>,
}

impl<T: LinearValue> Envelope<T> {
    /// Lines whose value at `t` equals the envelope.
    pub fn ties_at(&self, t: &T) -> Vec<usize> {
        let vals: Vec<T> = self.lines.iter().map(|l| l.at(t)).collect();
        let Some(min) = vals.iter().min().cloned() else {
            return Vec::new();
        };
        (0..vals.len()).filter(|&i| vals[i] == min).collect()
    }

    pub fn value_at(&self, t: &T) -> Option<T> {
        self.lines.iter().map(|l| l.at(t)).min()
    }

    /// First piece on which `line` alone is minimal.
    pub fn winning_piece(&self, line: usize) -> Option<&EnvPiece<T>> {
        self.pieces.iter().find(|p| p.strict_winner() == Some(line))
    }
}

fn crossing<T: LinearValue>(a: &Line<T>, b: &Line<T>) -> T {
    // a.slope > b.slope; b undercuts a to the right of the crossing
    let ds = &a.slope - &b.slope;
    (b.offset.clone() - a.offset.clone()).scale(&ds.recip())
}

fn bound_value<T: LinearValue>(b: &ParamBound) -> Option<T> {
    b.finite().map(|v| T::from_q(v.clone()))
}

/// Lower envelope on `[lo, hi]`. Lines with infinite offsets must be filtered
/// out by the caller.
pub fn lower_envelope<T: LinearValue>(lines: Vec<Line<T>>, lo: &ParamBound, hi: &ParamBound) -> Envelope<T> {
    let lo_v: Option<T> = bound_value(lo);
    let hi_v: Option<T> = bound_value(hi);

    // group identical lines; among equal slopes keep the smallest offset
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| {
        lines[b]
            .slope
            .cmp(&lines[a].slope)
            .then_with(|| lines[a].offset.cmp(&lines[b].offset))
            .then(a.cmp(&b))
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if lines[g[0]].slope == lines[i].slope => {
                if lines[g[0]].offset == lines[i].offset {
                    g.push(i);
                }
            }
            _ => groups.push(vec![i]),
        }
    }

    // convex hull trick: slopes strictly decreasing
    let mut stack: Vec<Vec<usize>> = Vec::new();
    for g in groups {
        let l = &lines[g[0]];
        while stack.len() >= 2 {
            let top = &lines[stack[stack.len() - 1][0]];
            let below = &lines[stack[stack.len() - 2][0]];
            if crossing(below, l) <= crossing(below, top) {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(g);
    }

    let mut pieces: Vec<EnvPiece<T>> = Vec::new();
    for (idx, g) in stack.iter().enumerate() {
        let from = (idx > 0).then(|| crossing(&lines[stack[idx - 1][0]], &lines[g[0]]));
        let to = (idx + 1 < stack.len()).then(|| crossing(&lines[g[0]], &lines[stack[idx + 1][0]]));
        // clip to [lo, hi]
        let from = match (from, &lo_v) {
            (Some(f), Some(l)) => Some(if &f > l { f } else { l.clone() }),
            (f, l) => f.or_else(|| l.clone()),
        };
        let to = match (to, &hi_v) {
            (Some(t), Some(h)) => Some(if &t < h { t } else { h.clone() }),
            (t, h) => t.or_else(|| h.clone()),
        };
        let nonempty = match (&from, &to) {
            (Some(a), Some(b)) => a < b,
            _ => true,
        };
        if nonempty {
            pieces.push(EnvPiece {
                lines: g.clone(),
                from,
                to,
            });
        }
    }
    // degenerate interval (single point): keep the minimizers there
    if pieces.is_empty() {
        if let Some(t) = lo_v.clone().or(hi_v.clone()) {
            let vals: Vec<T> = lines.iter().map(|l| l.at(&t)).collect();
            if let Some(min) = vals.iter().min() {
                let winners: Vec<usize> = (0..lines.len()).filter(|&i| &vals[i] == min).collect();
                pieces.push(EnvPiece {
                    lines: winners,
                    from: Some(t.clone()),
                    to: Some(t),
                });
            }
        }
    }
    let vertices = pieces
        .windows(2)
        .map(|w| {
            let t = w[0].to.clone().expect("interior breakpoint is finite");
            let left = w[0].lines[0];
            EnvVertex {
                value: lines[left].at(&t),
                t,
                left,
                right: w[1].lines[0],
            }
        })
        .collect();
    Envelope {
        lines,
        pieces,
        vertices,
    }
}
