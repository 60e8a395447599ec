//! Binary splitting over factor-index ranges.
//!
//! The root covers all factors and carries `u`. A child `J` of `I` receives
//! the parent payload multiplied by the blocks `F_l^{m_l}` for `l ∈ I∖J`, so
//! leaf `{p}` ends up holding `u·Π_{l≠p} F_l^{m_l} = u·G_p`. Each level of the
//! tree applies at most `q` blocks.

use super::Context;
use crate::error::Result;
use crate::fields::Field;
use crate::matrices::RowVector;

/// A node of the splitting tree over the 0-based factor range `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitTreeNode<E> {
    pub lo: usize,
    pub hi: usize,
    pub payload: RowVector<E>,
    pub children: Option<Box<[SplitTreeNode<E>; 2]>>,
}

/// Split point of `lo..=hi`: the left child covers `lo..=mid`.
pub fn split_point(lo: usize, hi: usize) -> usize {
    lo + (hi - lo) / 2
}

impl<E: Clone> SplitTreeNode<E> {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some(c) => 1 + c[0].depth().max(c[1].depth()),
        }
    }

    /// Leaf payloads in factor order.
    pub fn leaves(&self) -> Vec<&RowVector<E>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'s>(&'s self, out: &mut Vec<&'s RowVector<E>>) {
        match &self.children {
            None => out.push(&self.payload),
            Some(c) => {
                c[0].collect_leaves(out);
                c[1].collect_leaves(out);
            }
        }
    }

    pub fn into_leaves(self) -> Vec<RowVector<E>> {
        let mut out = Vec::new();
        self.into_leaves_inner(&mut out);
        out
    }

    fn into_leaves_inner(self, out: &mut Vec<RowVector<E>>) {
        match self.children {
            None => out.push(self.payload),
            Some(c) => {
                let [l, r] = *c;
                l.into_leaves_inner(out);
                r.into_leaves_inner(out);
            }
        }
    }

    /// Blocks applied while building this subtree: each internal node over
    /// `I` applies `|I|` blocks across its two outgoing edges.
    pub fn block_applications(&self) -> u64 {
        match &self.children {
            None => 0,
            Some(c) => (self.hi - self.lo + 1) as u64 + c[0].block_applications() + c[1].block_applications(),
        }
    }
}

pub(super) fn build<F: Field>(
    ctx: &Context<'_, F>,
    lo: usize,
    hi: usize,
    payload: RowVector<F::Elem>,
) -> Result<SplitTreeNode<F::Elem>> {
    if lo == hi {
        return Ok(SplitTreeNode { lo, hi, payload, children: None });
    }
    let mid = split_point(lo, hi);
    let (left, right) = rayon::join(
        || -> Result<_> {
            let w = ctx.apply_blocks_row(mid + 1..=hi, &payload)?;
            build(ctx, lo, mid, w)
        },
        || -> Result<_> {
            let w = ctx.apply_blocks_row(lo..=mid, &payload)?;
            build(ctx, mid + 1, hi, w)
        },
    );
    Ok(SplitTreeNode { lo, hi, payload, children: Some(Box::new([left?, right?])) })
}
