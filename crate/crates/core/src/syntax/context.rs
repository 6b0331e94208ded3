//! One-hole bunched contexts as frame paths, and the decomposition
//! calculus relating `Δ`, `Π(−)` and `Δ′` with `Δ = Π(Δ′)`.

use super::{Atom, Bunch, Conn, Formula, SyntaxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A direction step of a context path: which child of which connective
/// the hole descends into.
pub type Dir = (Conn, Side);

/// One frame of a bunched context. The side letter names the position of
/// the hole; the stored bunch is the sibling. `CommaL(b)` is `(− , b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    CommaL(Bunch),
    CommaR(Bunch),
    SemiL(Bunch),
    SemiR(Bunch),
}

impl Frame {
    pub fn new(conn: Conn, hole: Side, sibling: Bunch) -> Frame {
        match (conn, hole) {
            (Conn::Comma, Side::Left) => Frame::CommaL(sibling),
            (Conn::Comma, Side::Right) => Frame::CommaR(sibling),
            (Conn::Semi, Side::Left) => Frame::SemiL(sibling),
            (Conn::Semi, Side::Right) => Frame::SemiR(sibling),
        }
    }

    pub fn dir(&self) -> Dir {
        match self {
            Frame::CommaL(_) => (Conn::Comma, Side::Left),
            Frame::CommaR(_) => (Conn::Comma, Side::Right),
            Frame::SemiL(_) => (Conn::Semi, Side::Left),
            Frame::SemiR(_) => (Conn::Semi, Side::Right),
        }
    }

    pub fn sibling(&self) -> &Bunch {
        match self {
            Frame::CommaL(b) | Frame::CommaR(b) | Frame::SemiL(b) | Frame::SemiR(b) => b,
        }
    }

    /// Wraps `inner` with this frame.
    pub fn fill(&self, inner: Bunch) -> Bunch {
        match self {
            Frame::CommaL(sib) => Bunch::comma(inner, sib.clone()),
            Frame::CommaR(sib) => Bunch::comma(sib.clone(), inner),
            Frame::SemiL(sib) => Bunch::semi(inner, sib.clone()),
            Frame::SemiR(sib) => Bunch::semi(sib.clone(), inner),
        }
    }
}

/// A bunched context `Π(−)`: a list of frames, outermost first. The empty
/// list is the identity context.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BunchCtx {
    frames: Vec<Frame>,
}

impl BunchCtx {
    pub fn identity() -> BunchCtx {
        BunchCtx { frames: Vec::new() }
    }

    pub fn from_frames(frames: Vec<Frame>) -> BunchCtx {
        BunchCtx { frames }
    }

    pub fn is_identity(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    /// Replaces the hole with `b`. Filling a concatenation composes fills:
    /// `fill(Π ++ Π', b) = fill(Π, fill(Π', b))`.
    pub fn fill(&self, b: Bunch) -> Bunch {
        self.frames.iter().rev().fold(b, |acc, f| f.fill(acc))
    }

    /// Context composition: `self` outside, `inner` towards the hole.
    pub fn then(&self, inner: &BunchCtx) -> BunchCtx {
        let mut frames = self.frames.clone();
        frames.extend(inner.frames.iter().cloned());
        BunchCtx { frames }
    }

    /// Pushes a frame at the hole end (innermost position).
    pub fn pushed(&self, frame: Frame) -> BunchCtx {
        let mut frames = self.frames.clone();
        frames.push(frame);
        BunchCtx { frames }
    }

    /// The direction path of the hole, ignoring sibling contents.
    pub fn path(&self) -> Vec<Dir> {
        self.frames.iter().map(Frame::dir).collect()
    }
}

/// Renders a direction path in the compact form `L,R;` (hole side letter
/// followed by the connective symbol, one pair per frame).
pub fn format_path(path: &[Dir]) -> String {
    path.iter()
        .map(|(conn, side)| {
            let s = match side {
                Side::Left => 'L',
                Side::Right => 'R',
            };
            let c = match conn {
                Conn::Comma => ',',
                Conn::Semi => ';',
            };
            format!("{s}{c}")
        })
        .collect()
}

/// Parses the compact path form produced by [`format_path`].
pub fn parse_path(text: &str) -> Result<Vec<Dir>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().filter(|c| !c.is_whitespace());
    while let Some(s) = chars.next() {
        let side = match s {
            'L' => Side::Left,
            'R' => Side::Right,
            other => {
                return Err(SyntaxError::Malformed(format!(
                    "expected `L` or `R` in context path, found {other:?}"
                )))
            }
        };
        let conn = match chars.next() {
            Some(',') => Conn::Comma,
            Some(';') => Conn::Semi,
            other => {
                return Err(SyntaxError::Malformed(format!(
                    "expected `,` or `;` in context path, found {other:?}"
                )))
            }
        };
        out.push((conn, side));
    }
    Ok(out)
}

/// The sub-bunch of `b` at the end of `path`.
pub fn subtree_at<'a>(b: &'a Bunch, path: &[Dir]) -> Result<&'a Bunch, SyntaxError> {
    let mut cur = b;
    for (at, (conn, side)) in path.iter().enumerate() {
        let (c, l, r) = cur.node().ok_or(SyntaxError::PathMismatch { at })?;
        if c != *conn {
            return Err(SyntaxError::PathMismatch { at });
        }
        cur = match side {
            Side::Left => l,
            Side::Right => r,
        };
    }
    Ok(cur)
}

/// Rebuilds the full context (frames with siblings) addressing the
/// position `path` inside `b`.
pub fn ctx_at_path(b: &Bunch, path: &[Dir]) -> Result<BunchCtx, SyntaxError> {
    let mut frames = Vec::with_capacity(path.len());
    let mut cur = b;
    for (at, (conn, side)) in path.iter().enumerate() {
        let (c, l, r) = cur.node().ok_or(SyntaxError::PathMismatch { at })?;
        if c != *conn {
            return Err(SyntaxError::PathMismatch { at });
        }
        let (next, sib) = match side {
            Side::Left => (l, r),
            Side::Right => (r, l),
        };
        frames.push(Frame::new(*conn, *side, sib.clone()));
        cur = next;
    }
    Ok(BunchCtx { frames })
}

/// One way of writing a bunch as `Π(Δ′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub ctx: BunchCtx,
    pub sub: Bunch,
}

/// Every decomposition of `b` into a context and the sub-bunch at its
/// hole: the identity at the root plus one congruence step per child.
pub fn decompositions(b: &Bunch) -> Vec<Decomposition> {
    let mut out = vec![Decomposition {
        ctx: BunchCtx::identity(),
        sub: b.clone(),
    }];
    if let Some((conn, l, r)) = b.node() {
        for d in decompositions(l) {
            let frame = Frame::new(conn, Side::Left, r.clone());
            out.push(Decomposition {
                ctx: BunchCtx::from_frames(std::iter::once(frame).chain(d.ctx.frames).collect()),
                sub: d.sub,
            });
        }
        for d in decompositions(r) {
            let frame = Frame::new(conn, Side::Right, l.clone());
            out.push(Decomposition {
                ctx: BunchCtx::from_frames(std::iter::once(frame).chain(d.ctx.frames).collect()),
                sub: d.sub,
            });
        }
    }
    out
}

/// All contexts addressing a leaf with formula `f` inside `b`.
pub fn leaf_positions(b: &Bunch, f: &Formula) -> Vec<BunchCtx> {
    decompositions(b)
        .into_iter()
        .filter(|d| matches!(&d.sub, Bunch::Leaf(g) if g == f))
        .map(|d| d.ctx)
        .collect()
}

/// A context with two independent holes, recorded as the frames above the
/// node where the holes diverge plus the relative contexts below each of
/// its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoHoleCtx {
    common: BunchCtx,
    conn: Conn,
    outer_side: Side,
    outer_rel: BunchCtx,
    target_rel: BunchCtx,
}

impl TwoHoleCtx {
    /// `Π0(Λ)`: the context addressing the target formula inside
    /// `fill(outer, Λ)`.
    pub fn outer_ctx_at_target(&self, lam: &Bunch) -> BunchCtx {
        let divergence = Frame::new(
            self.conn,
            self.outer_side.flip(),
            self.outer_rel.fill(lam.clone()),
        );
        let mut frames = self.common.frames.clone();
        frames.push(divergence);
        frames.extend(self.target_rel.frames.iter().cloned());
        BunchCtx { frames }
    }

    /// `Π1(Λ′)`: the context addressing the filled slot inside
    /// `fill(whole_ctx, Λ′)`.
    pub fn whole_ctx_at_filled(&self, lam2: &Bunch) -> BunchCtx {
        let divergence = Frame::new(
            self.conn,
            self.outer_side,
            self.target_rel.fill(lam2.clone()),
        );
        let mut frames = self.common.frames.clone();
        frames.push(divergence);
        frames.extend(self.outer_rel.frames.iter().cloned());
        BunchCtx { frames }
    }
}

/// Classification returned by [`locate_in_filled`].
#[derive(Clone, Debug)]
pub enum Located {
    /// The target formula sits inside the filled sub-bunch; the payload
    /// addresses it there, so `whole_ctx = outer ∘ ctx0`.
    InsideFilled(BunchCtx),
    /// The target formula sits inside the outer context's frames; the two
    /// context builders satisfy
    /// `fill(Π0(Λ), target) = fill(outer, Λ)`,
    /// `fill(Π1(Λ′), filled) = fill(whole_ctx, Λ′)`, and
    /// `fill(Π0(Λ), Λ′) = fill(Π1(Λ′), Λ)`.
    InsideOuter(TwoHoleCtx),
}

/// Given `fill(whole_ctx, target) = fill(outer, filled)`, decides whether
/// the target occurrence lies inside `filled` or inside the frames of
/// `outer`, returning the evidence either way.
pub fn locate_in_filled(
    outer: &BunchCtx,
    filled: &Bunch,
    target: &Formula,
    whole_ctx: &BunchCtx,
) -> Result<Located, SyntaxError> {
    let target_leaf = Bunch::Leaf(target.clone());
    if whole_ctx.fill(target_leaf.clone()) != outer.fill(filled.clone()) {
        return Err(SyntaxError::Malformed(
            "locate_in_filled: contexts do not address the same bunch".into(),
        ));
    }
    let k = outer
        .frames
        .iter()
        .zip(whole_ctx.frames.iter())
        .take_while(|(a, b)| a == b)
        .count();
    if k == outer.frames.len() {
        let inner = BunchCtx::from_frames(whole_ctx.frames[k..].to_vec());
        if inner.fill(target_leaf) != *filled {
            return Err(SyntaxError::Malformed(
                "locate_in_filled: inner context does not address the target".into(),
            ));
        }
        return Ok(Located::InsideFilled(inner));
    }
    if k == whole_ctx.frames.len() {
        // The target context stops above the outer hole, which would put a
        // whole bunch inside a single leaf.
        return Err(SyntaxError::Malformed(
            "locate_in_filled: target context ends above the filled hole".into(),
        ));
    }
    let (conn_o, side_o) = outer.frames[k].dir();
    let (conn_t, side_t) = whole_ctx.frames[k].dir();
    if conn_o != conn_t || side_o == side_t {
        return Err(SyntaxError::Malformed(
            "locate_in_filled: contexts disagree on a shared node".into(),
        ));
    }
    let two = TwoHoleCtx {
        common: BunchCtx::from_frames(outer.frames[..k].to_vec()),
        conn: conn_o,
        outer_side: side_o,
        outer_rel: BunchCtx::from_frames(outer.frames[k + 1..].to_vec()),
        target_rel: BunchCtx::from_frames(whole_ctx.frames[k + 1..].to_vec()),
    };
    // The sibling stored at the divergence frame of each context must be
    // the subtree containing the other hole.
    if outer.frames[k].sibling() != &two.target_rel.fill(target_leaf)
        || whole_ctx.frames[k].sibling() != &two.outer_rel.fill(filled.clone())
    {
        return Err(SyntaxError::Malformed(
            "locate_in_filled: divergence siblings are inconsistent".into(),
        ));
    }
    Ok(Located::InsideOuter(two))
}

/// Given `□Δ = fill(ctx, box target)`, produces `Π′` with
/// `Δ = fill(Π′, target)` and `box_bunch(fill(Π′, Γ)) = fill(ctx, box_bunch(Γ))`
/// for every `Γ`.
pub fn unbox_decompose(
    boxed: &Bunch,
    ctx: &BunchCtx,
    target: &Formula,
) -> Result<BunchCtx, SyntaxError> {
    let boxed_leaf = Bunch::Leaf(Formula::boxed(target.clone()));
    if ctx.fill(boxed_leaf) != *boxed {
        return Err(SyntaxError::Malformed(
            "unbox_decompose: hole does not sit at a boxed occurrence of the target".into(),
        ));
    }
    if super::unbox_bunch(boxed).is_none() {
        return Err(SyntaxError::NotBoxImage);
    }
    let mut frames = Vec::with_capacity(ctx.frames.len());
    for frame in &ctx.frames {
        let (conn, side) = frame.dir();
        let sibling = super::unbox_bunch(frame.sibling()).ok_or(SyntaxError::NotBoxImage)?;
        frames.push(Frame::new(conn, side, sibling));
    }
    Ok(BunchCtx { frames })
}

/// Carries a hole over the structural equivalence: given
/// `fill(ctx, leaf f) = src` and `dst ≡ src`, finds `ctx′` in `dst` over
/// the same leaf such that `fill(ctx, Γ) ≡ fill(ctx′, Γ)` for every `Γ`.
///
/// The uniformity in `Γ` is decided with a marker atom that occurs
/// nowhere else: normal forms treat the marked leaf as an opaque item, so
/// agreement at the marker transfers to every filling.
pub fn transport_leaf_ctx(ctx: &BunchCtx, f: &Formula, dst: &Bunch) -> Option<BunchCtx> {
    let marker = Bunch::Leaf(Formula::Atom(Atom::internal("hole")));
    let want = super::normalize(&ctx.fill(marker.clone()));
    leaf_positions(dst, f)
        .into_iter()
        .find(|cand| super::normalize(&cand.fill(marker.clone())) == want)
}
