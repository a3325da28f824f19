//! Orbit combinatorics on the parameter spaces: involutions with block
//! constraints, incidence-matrix invariants and decision procedures, the
//! dictionaries involution ↔ real L-parameter and multisegment ↔ p-adic
//! orbit, and the full-rank predicate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{signed_skew_lift, HalfInteger, Permutation};
use crate::correspond::iota_l;
use crate::params::{
    InfinitesimalCharacter, Multisegment, PAdicInfChar, Parity, RealLParameter, Segment,
};
use crate::{Error, Result};

/// The partition of {1..n} into the maximal runs where λ is constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    /// cumulative sums m_a = |J_1| + … + |J_a|
    cum: Vec<usize>,
    values: Vec<HalfInteger>,
}

impl BlockStructure {
    pub fn from_inf_char(lambda: &InfinitesimalCharacter) -> Self {
        let mut sizes = Vec::new();
        let mut values = Vec::new();
        for &e in lambda.entries() {
            if values.last() == Some(&e) {
                *sizes.last_mut().unwrap() += 1;
            } else {
                values.push(e);
                sizes.push(1);
            }
        }
        let mut cum = Vec::with_capacity(sizes.len());
        let mut acc = 0;
        for &s in &sizes {
            acc += s;
            cum.push(acc);
        }
        BlockStructure { sizes, cum, values }
    }

    pub fn r(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        *self.cum.last().unwrap_or(&0)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn cumulative(&self) -> &[usize] {
        &self.cum
    }

    pub fn values(&self) -> &[HalfInteger] {
        &self.values
    }

    /// 0-based block index of the 1-based position i.
    pub fn block_of(&self, i: usize) -> usize {
        self.cum.partition_point(|&m| m < i)
    }

    /// The 1-based positions of block u (0-based).
    pub fn members(&self, u: usize) -> Vec<usize> {
        let start = if u == 0 { 1 } else { self.cum[u - 1] + 1 };
        (start..=self.cum[u]).collect()
    }

    pub fn value_of_entry(&self, i: usize) -> HalfInteger {
        self.values[self.block_of(i)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvolutionKind {
    /// s ∈ 𝕴_λ: involutions with s(i) = i whenever λ_i = λ_{s(i)}
    Good,
    /// fixed-point-free involutions (bad parity)
    Skew,
}

impl InvolutionKind {
    pub fn for_parity(parity: Parity) -> InvolutionKind {
        match parity {
            Parity::Good => InvolutionKind::Good,
            Parity::Bad => InvolutionKind::Skew,
        }
    }
}

/// An involution compatible with a block structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockInvolution {
    s: Permutation,
    blocks: BlockStructure,
    kind: InvolutionKind,
}

impl BlockInvolution {
    pub fn new(s: Permutation, blocks: BlockStructure, kind: InvolutionKind) -> Result<Self> {
        if s.n() != blocks.n() {
            return Err(Error::SizeMismatch(s.n(), blocks.n()));
        }
        if !s.is_involution() {
            return Err(Error::Invalid("not an involution".into()));
        }
        match kind {
            InvolutionKind::Good => {
                for i in 1..=s.n() {
                    let j = s.apply(i);
                    if j != i && blocks.block_of(i) == blocks.block_of(j) {
                        return Err(Error::Invalid(format!(
                            "transposition ({i} {j}) stays within a constant block of λ"
                        )));
                    }
                }
            }
            InvolutionKind::Skew => {
                if !s.is_fixed_point_free() {
                    return Err(Error::Invalid(
                        "skew kind requires a fixed-point-free involution".into(),
                    ));
                }
            }
        }
        Ok(BlockInvolution { s, blocks, kind })
    }

    pub fn permutation(&self) -> &Permutation {
        &self.s
    }

    pub fn blocks(&self) -> &BlockStructure {
        &self.blocks
    }

    pub fn kind(&self) -> InvolutionKind {
        self.kind
    }

    /// A_{u,v}(s) = #{i ∈ J_u : s(i) ∈ J_v}.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let r = self.blocks.r();
        let mut a = vec![vec![0usize; r]; r];
        for i in 1..=self.s.n() {
            let u = self.blocks.block_of(i);
            let v = self.blocks.block_of(self.s.apply(i));
            a[u][v] += 1;
        }
        a
    }

    /// d_{a,b}(ṡ) = #{i ≤ m_a : s(i) > m_b} by direct counting.
    pub fn d_counts(&self) -> Vec<Vec<usize>> {
        let r = self.blocks.r();
        let cum = self.blocks.cumulative();
        let mut d = vec![vec![0usize; r]; r];
        for (a, &ma) in cum.iter().enumerate() {
            for (b, &mb) in cum.iter().enumerate() {
                d[a][b] = (1..=ma).filter(|&i| self.s.apply(i) > mb).count();
            }
        }
        d
    }

    /// The same numbers realized as m_a − rank of the leading m_a × m_b
    /// block of the (signed) lift of s, computed by exact linear algebra.
    pub fn d_counts_via_rank(&self) -> Result<Vec<Vec<usize>>> {
        let lift = match self.kind {
            InvolutionKind::Good => self.s.matrix(),
            InvolutionKind::Skew => signed_skew_lift(&self.s)?,
        };
        let r = self.blocks.r();
        let cum = self.blocks.cumulative();
        let mut d = vec![vec![0usize; r]; r];
        for (a, &ma) in cum.iter().enumerate() {
            for (b, &mb) in cum.iter().enumerate() {
                d[a][b] = ma - lift.leading_block(ma, mb).exact_rank();
            }
        }
        Ok(d)
    }
}

/// Equality of incidence matrices decides W^M-conjugacy.
pub fn same_orbit(s: &BlockInvolution, t: &BlockInvolution) -> Result<bool> {
    if s.blocks != t.blocks {
        return Err(Error::Invalid(
            "involutions live over different block structures".into(),
        ));
    }
    if s.kind != t.kind {
        return Err(Error::Invalid("involutions have different kinds".into()));
    }
    Ok(s.incidence() == t.incidence())
}

const BRUTE_FORCE_LIMIT: usize = 40_320; // 8!

/// Decide conjugacy by enumerating W^M = ∏ Sym(J_u) directly.
pub fn brute_force_same_orbit(s: &BlockInvolution, t: &BlockInvolution) -> Result<bool> {
    if s.blocks != t.blocks {
        return Err(Error::Invalid(
            "involutions live over different block structures".into(),
        ));
    }
    if s.kind != t.kind {
        return Err(Error::Invalid("involutions have different kinds".into()));
    }
    let order: usize = s.blocks.sizes().iter().map(|&k| factorial(k)).product();
    if order > BRUTE_FORCE_LIMIT {
        return Err(Error::Invalid(format!(
            "brute-force conjugacy over a group of order {order} exceeds the guard"
        )));
    }
    for w in levi_weyl_group(&s.blocks) {
        let conj = w.compose(s.permutation())?.compose(&w.inverse())?;
        if conj == *t.permutation() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

/// All elements of ∏ Sym(J_u) as permutations of {1..n}.
pub fn levi_weyl_group(blocks: &BlockStructure) -> Vec<Permutation> {
    let n = blocks.n();
    let mut result = vec![Permutation::identity(n)];
    for u in 0..blocks.r() {
        let members = blocks.members(u);
        let locals = crate::arith::permutations_of_subset(n, &members);
        let mut next = Vec::with_capacity(result.len() * locals.len());
        for w in &result {
            for loc in &locals {
                next.push(w.compose(loc).expect("same n"));
            }
        }
        result = next;
    }
    result
}

/// Enumerate one canonical representative per orbit, via admissible
/// incidence matrices in lexicographic order.
pub fn enumerate_orbits(lambda: &InfinitesimalCharacter) -> Result<Vec<BlockInvolution>> {
    let blocks = BlockStructure::from_inf_char(lambda);
    let kind = InvolutionKind::for_parity(lambda.parity());
    let matrices = admissible_incidence_matrices(&blocks, kind);
    matrices
        .into_iter()
        .map(|a| canonical_fill(&blocks, &a, kind))
        .collect()
}

/// All symmetric matrices with row sums |J_u| and the diagonal parity of the
/// kind (even diagonal for skew; diagonal = fixed points for good).
pub fn admissible_incidence_matrices(
    blocks: &BlockStructure,
    kind: InvolutionKind,
) -> Vec<Vec<Vec<usize>>> {
    let r = blocks.r();
    let sizes = blocks.sizes();
    let mut out = Vec::new();
    let mut a = vec![vec![0usize; r]; r];
    let mut remaining: Vec<usize> = sizes.to_vec();

    fn rec(
        u: usize,
        v: usize,
        r: usize,
        kind: InvolutionKind,
        a: &mut Vec<Vec<usize>>,
        remaining: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if u == r {
            out.push(a.clone());
            return;
        }
        let (nu, nv) = if v == r - 1 {
            (u + 1, u + 1)
        } else {
            (u, v + 1)
        };
        if v == r - 1 {
            // the final entry of row u is forced by the row sum
            let forced = remaining[u];
            if u == v {
                let ok = match kind {
                    InvolutionKind::Skew => forced.is_multiple_of(2),
                    InvolutionKind::Good => true,
                };
                if ok {
                    a[u][v] = forced;
                    remaining[u] = 0;
                    rec(nu, nv, r, kind, a, remaining, out);
                    remaining[u] = forced;
                    a[u][v] = 0;
                }
            } else if forced <= remaining[v] {
                a[u][v] = forced;
                a[v][u] = forced;
                remaining[u] = 0;
                remaining[v] -= forced;
                rec(nu, nv, r, kind, a, remaining, out);
                remaining[v] += forced;
                remaining[u] = forced;
                a[u][v] = 0;
                a[v][u] = 0;
            }
            return;
        }
        if u == v {
            let step = match kind {
                InvolutionKind::Skew => 2,
                InvolutionKind::Good => 1,
            };
            let mut c = 0;
            while c <= remaining[u] {
                a[u][u] = c;
                remaining[u] -= c;
                rec(nu, nv, r, kind, a, remaining, out);
                remaining[u] += c;
                a[u][u] = 0;
                c += step;
            }
        } else {
            let max = remaining[u].min(remaining[v]);
            for c in 0..=max {
                a[u][v] = c;
                a[v][u] = c;
                remaining[u] -= c;
                remaining[v] -= c;
                rec(nu, nv, r, kind, a, remaining, out);
                remaining[u] += c;
                remaining[v] += c;
                a[u][v] = 0;
                a[v][u] = 0;
            }
        }
    }

    if r > 0 {
        rec(0, 0, r, kind, &mut a, &mut remaining, &mut out);
    }
    out.sort();
    out
}

/// The canonical representative of an incidence matrix: transpositions pair
/// the smallest unused index of J_u with the smallest unused index of J_v,
/// processing (u,v) lexicographically; fixed points take what remains.
pub fn canonical_fill(
    blocks: &BlockStructure,
    a: &[Vec<usize>],
    kind: InvolutionKind,
) -> Result<BlockInvolution> {
    let n = blocks.n();
    let r = blocks.r();
    let mut images: Vec<usize> = (1..=n).collect();
    let mut pools: Vec<Vec<usize>> = (0..r).map(|u| blocks.members(u)).collect();
    for u in 0..r {
        for v in u..r {
            if u == v {
                if kind == InvolutionKind::Skew {
                    if !a[u][u].is_multiple_of(2) {
                        return Err(Error::Invalid("skew diagonal entries must be even".into()));
                    }
                    for _ in 0..a[u][u] / 2 {
                        let i = pools[u].remove(0);
                        let j = pools[u].remove(0);
                        images[i - 1] = j;
                        images[j - 1] = i;
                    }
                }
                // good kind: the diagonal counts fixed points, left in place
            } else {
                for _ in 0..a[u][v] {
                    let i = pools[u].remove(0);
                    let j = pools[v].remove(0);
                    images[i - 1] = j;
                    images[j - 1] = i;
                }
            }
        }
    }
    BlockInvolution::new(Permutation::new(images)?, blocks.clone(), kind)
}

/// The L-parameter attached to an involution: index i carries the exponent
/// pair (t, s) = ((λ_i + λ_{s(i)})/2, (λ_i − λ_{s(i)})/2).
pub fn l_param_of_involution(
    s: &BlockInvolution,
    lambda: &InfinitesimalCharacter,
) -> RealLParameter {
    let entries = lambda.entries();
    let chars: Vec<(HalfInteger, HalfInteger)> = (1..=s.permutation().n())
        .map(|i| {
            let li = entries[i - 1];
            let lj = entries[s.permutation().apply(i) - 1];
            (
                HalfInteger::from_twice((li.twice() + lj.twice()) / 2),
                HalfInteger::from_twice((li.twice() - lj.twice()) / 2),
            )
        })
        .collect();
    RealLParameter::new(chars).expect("involutions yield conjugate self-dual parameters")
}

/// Recover the admissible involution of an L-parameter: pair each character
/// with its conjugate dual, normalized into 𝕴_λ (good) or 𝕵^S (bad).
pub fn involution_of_l_param(
    phi: &RealLParameter,
    lambda: &InfinitesimalCharacter,
) -> Result<BlockInvolution> {
    if phi.content() != lambda.entries() {
        return Err(Error::Invalid(format!(
            "{phi:?} does not have infinitesimal character {lambda:?}"
        )));
    }
    let blocks = BlockStructure::from_inf_char(lambda);
    let kind = InvolutionKind::for_parity(lambda.parity());
    let r = blocks.r();
    let value_block: BTreeMap<HalfInteger, usize> = blocks
        .values()
        .iter()
        .enumerate()
        .map(|(u, &v)| (v, u))
        .collect();

    let mut counts: BTreeMap<(HalfInteger, HalfInteger), usize> = BTreeMap::new();
    for &(t, s) in phi.characters() {
        *counts.entry((t, s)).or_insert(0) += 1;
    }
    let mut a = vec![vec![0usize; r]; r];
    for (&(t, s), &mult) in &counts {
        if s.twice() > 0 {
            let hi_val = t + s;
            let lo_val = t - s;
            let u = *value_block
                .get(&hi_val)
                .ok_or_else(|| Error::Invalid(format!("exponent {hi_val} not a value of λ")))?;
            let v = *value_block
                .get(&lo_val)
                .ok_or_else(|| Error::Invalid(format!("exponent {lo_val} not a value of λ")))?;
            a[u][v] += mult;
            a[v][u] += mult;
        } else if s.twice() == 0 {
            let u = *value_block
                .get(&t)
                .ok_or_else(|| Error::Invalid(format!("exponent {t} not a value of λ")))?;
            if kind == InvolutionKind::Skew && mult % 2 != 0 {
                return Err(Error::Invalid(format!(
                    "no admissible involution: self-dual component at {t} has odd multiplicity {mult} in bad parity"
                )));
            }
            a[u][u] += mult;
        }
    }
    canonical_fill(&blocks, &a, kind)
}

/// Verdict of matching a multisegment against a p-adic infinitesimal
/// character by degree content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitContentCheck {
    pub matches: bool,
    pub expected: Vec<(HalfInteger, usize)>,
    pub got: Vec<(HalfInteger, usize)>,
}

pub fn multisegment_orbit(m: &Multisegment, lambdap: &PAdicInfChar) -> OrbitContentCheck {
    let got_map = m.degree_content();
    let expected: Vec<(HalfInteger, usize)> = lambdap
        .multiplicities()
        .iter()
        .map(|(&x, &c)| (x, c))
        .collect();
    let got: Vec<(HalfInteger, usize)> = got_map.iter().map(|(&x, &c)| (x, c)).collect();
    OrbitContentCheck {
        matches: expected == got,
        expected,
        got,
    }
}

/// Full rank: for every adjacent degree pair (x, x+1) in the support, the
/// number of segments containing both equals min(dim W_x, dim W_{x+1}).
pub fn is_full_rank(m: &Multisegment, lambdap: &PAdicInfChar) -> Result<bool> {
    let check = multisegment_orbit(m, lambdap);
    if !check.matches {
        return Err(Error::Invalid(format!(
            "content mismatch: expected {:?}, got {:?}",
            check.expected, check.got
        )));
    }
    let one = HalfInteger::from_int(1);
    for (&x, &cx) in lambdap.multiplicities() {
        let next = x + one;
        let cn = lambdap.multiplicity(next);
        if cn == 0 {
            continue;
        }
        if m.link_count(x) != cx.min(cn) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The multisegment of an orbit representative: each index pair {i, s(i)}
/// contributes the segment assigned to its exponent pair.
pub fn iota_orbit(
    s: &BlockInvolution,
    lambda: &InfinitesimalCharacter,
    delta: i64,
) -> Result<Multisegment> {
    if s.permutation().n() != lambda.n() {
        return Err(Error::SizeMismatch(s.permutation().n(), lambda.n()));
    }
    iota_l(&l_param_of_involution(s, lambda), delta)
}

/// All multisegments with the prescribed degree content, by a depth-first
/// scan over degrees tracking the alive segments' left endpoints.
pub fn enumerate_multisegments_with_content(
    content: &BTreeMap<HalfInteger, usize>,
) -> Vec<Multisegment> {
    let degrees: Vec<HalfInteger> = content.keys().copied().collect();
    let counts: Vec<usize> = content.values().copied().collect();
    let mut out = Vec::new();
    let mut segments: Vec<Segment> = Vec::new();
    let one = HalfInteger::from_int(1);

    // alive: per left-endpoint degree index, how many segments are open
    fn rec(
        i: usize,
        alive: &BTreeMap<usize, usize>,
        degrees: &[HalfInteger],
        counts: &[usize],
        one: HalfInteger,
        segments: &mut Vec<Segment>,
        out: &mut Vec<Multisegment>,
    ) {
        if i == degrees.len() {
            debug_assert!(alive.is_empty());
            out.push(Multisegment::new(segments.clone()));
            return;
        }
        let incoming: usize = alive.values().sum();
        if incoming > counts[i] {
            return; // cannot absorb all continuing segments
        }
        // new segments start here
        let mut alive_now = alive.clone();
        let fresh = counts[i] - incoming;
        if fresh > 0 {
            *alive_now.entry(i).or_insert(0) += fresh;
        }
        let consecutive = i + 1 < degrees.len() && degrees[i] + one == degrees[i + 1];
        if !consecutive {
            // everything dies at this degree
            let closed = segments.len();
            for (&start, &c) in &alive_now {
                for _ in 0..c {
                    segments.push(Segment::new(degrees[start], degrees[i]).expect("ordered"));
                }
            }
            rec(i + 1, &BTreeMap::new(), degrees, counts, one, segments, out);
            segments.truncate(closed);
            return;
        }
        // choose, per left endpoint, how many continue
        let keys: Vec<usize> = alive_now.keys().copied().collect();
        let mut choice: Vec<usize> = Vec::with_capacity(keys.len());

        #[allow(clippy::too_many_arguments)]
        fn choose(
            k: usize,
            keys: &[usize],
            alive_now: &BTreeMap<usize, usize>,
            choice: &mut Vec<usize>,
            i: usize,
            degrees: &[HalfInteger],
            counts: &[usize],
            one: HalfInteger,
            segments: &mut Vec<Segment>,
            out: &mut Vec<Multisegment>,
        ) {
            if k == keys.len() {
                let mut next_alive = BTreeMap::new();
                let closed = segments.len();
                for (idx, &key) in keys.iter().enumerate() {
                    let total = alive_now[&key];
                    let cont = choice[idx];
                    if cont > 0 {
                        next_alive.insert(key, cont);
                    }
                    for _ in 0..total - cont {
                        segments.push(Segment::new(degrees[key], degrees[i]).expect("ordered"));
                    }
                }
                rec(i + 1, &next_alive, degrees, counts, one, segments, out);
                segments.truncate(closed);
                return;
            }
            for c in 0..=alive_now[&keys[k]] {
                choice.push(c);
                choose(
                    k + 1,
                    keys,
                    alive_now,
                    choice,
                    i,
                    degrees,
                    counts,
                    one,
                    segments,
                    out,
                );
                choice.pop();
            }
        }

        choose(
            0,
            &keys,
            &alive_now,
            &mut choice,
            i,
            degrees,
            counts,
            one,
            segments,
            out,
        );
    }

    rec(
        0,
        &BTreeMap::new(),
        &degrees,
        &counts,
        one,
        &mut segments,
        &mut out,
    );
    out.sort_by(|x, y| x.segments().cmp(y.segments()));
    out.dedup();
    out
}

/// A negation-closed multisegment underlies a parameter of Ĥ iff every
/// centered segment whose dimension parity differs from the self-duality
/// type of Ĥ (odd for orthogonal, even for symplectic) occurs with even
/// multiplicity, so that those components can pair up. In good parity the
/// types always match; in bad parity every centered segment needs even
/// multiplicity, mirroring the fixed-point-free condition on involutions.
pub fn is_dual_admissible(m: &Multisegment, dual: crate::params::DualType) -> bool {
    let mut counts: BTreeMap<Segment, usize> = BTreeMap::new();
    for &seg in m.segments() {
        if seg.is_self_dual() {
            *counts.entry(seg).or_insert(0) += 1;
        }
    }
    for (seg, c) in counts {
        let type_matches = (seg.len() % 2 == 1) == (dual == crate::params::DualType::Orth);
        if !type_matches && c % 2 == 1 {
            return false;
        }
    }
    true
}

/// All full-rank multisegments with the prescribed content: the link count
/// between consecutive degrees is forced to min(dim W_x, dim W_{x+1}), so
/// only the distribution of continuing segments over left endpoints varies.
pub fn enumerate_full_rank_multisegments(
    content: &BTreeMap<HalfInteger, usize>,
) -> Vec<Multisegment> {
    let degrees: Vec<HalfInteger> = content.keys().copied().collect();
    let counts: Vec<usize> = content.values().copied().collect();
    let one = HalfInteger::from_int(1);
    let mut out = Vec::new();
    let mut segments: Vec<Segment> = Vec::new();

    fn rec(
        i: usize,
        alive: &BTreeMap<usize, usize>,
        degrees: &[HalfInteger],
        counts: &[usize],
        one: HalfInteger,
        segments: &mut Vec<Segment>,
        out: &mut Vec<Multisegment>,
    ) {
        if i == degrees.len() {
            out.push(Multisegment::new(segments.clone()));
            return;
        }
        let incoming: usize = alive.values().sum();
        if incoming > counts[i] {
            return;
        }
        let mut alive_now = alive.clone();
        let fresh = counts[i] - incoming;
        if fresh > 0 {
            *alive_now.entry(i).or_insert(0) += fresh;
        }
        let consecutive = i + 1 < degrees.len() && degrees[i] + one == degrees[i + 1];
        if !consecutive {
            let closed = segments.len();
            for (&start, &c) in &alive_now {
                for _ in 0..c {
                    segments.push(Segment::new(degrees[start], degrees[i]).expect("ordered"));
                }
            }
            rec(i + 1, &BTreeMap::new(), degrees, counts, one, segments, out);
            segments.truncate(closed);
            return;
        }
        let must_continue = counts[i].min(counts[i + 1]);
        // distribute `must_continue` over the alive left endpoints
        let keys: Vec<usize> = alive_now.keys().copied().collect();
        let mut choice: Vec<usize> = Vec::with_capacity(keys.len());

        #[allow(clippy::too_many_arguments)]
        fn choose(
            k: usize,
            still_needed: usize,
            keys: &[usize],
            alive_now: &BTreeMap<usize, usize>,
            choice: &mut Vec<usize>,
            i: usize,
            degrees: &[HalfInteger],
            counts: &[usize],
            one: HalfInteger,
            segments: &mut Vec<Segment>,
            out: &mut Vec<Multisegment>,
        ) {
            if k == keys.len() {
                if still_needed != 0 {
                    return;
                }
                let mut next_alive = BTreeMap::new();
                let closed = segments.len();
                for (idx, &key) in keys.iter().enumerate() {
                    let total = alive_now[&key];
                    let cont = choice[idx];
                    if cont > 0 {
                        next_alive.insert(key, cont);
                    }
                    for _ in 0..total - cont {
                        segments.push(Segment::new(degrees[key], degrees[i]).expect("ordered"));
                    }
                }
                rec(i + 1, &next_alive, degrees, counts, one, segments, out);
                segments.truncate(closed);
                return;
            }
            let cap = alive_now[&keys[k]].min(still_needed);
            for c in 0..=cap {
                choice.push(c);
                choose(
                    k + 1,
                    still_needed - c,
                    keys,
                    alive_now,
                    choice,
                    i,
                    degrees,
                    counts,
                    one,
                    segments,
                    out,
                );
                choice.pop();
            }
        }

        choose(
            0,
            must_continue,
            &keys,
            &alive_now,
            &mut choice,
            i,
            degrees,
            counts,
            one,
            segments,
            &mut *out,
        );
    }

    rec(
        0,
        &BTreeMap::new(),
        &degrees,
        &counts,
        one,
        &mut segments,
        &mut out,
    );
    out.sort_by(|x, y| x.segments().cmp(y.segments()));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspond::lambda_to_lambdap;

    fn hi(t: i64) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    fn lam(twices: &[i64]) -> InfinitesimalCharacter {
        InfinitesimalCharacter::new(twices.iter().map(|&t| hi(t)).collect()).unwrap()
    }

    fn inv(lambda: &InfinitesimalCharacter, images: Vec<usize>) -> BlockInvolution {
        let blocks = BlockStructure::from_inf_char(lambda);
        let kind = InvolutionKind::for_parity(lambda.parity());
        BlockInvolution::new(Permutation::new(images).unwrap(), blocks, kind).unwrap()
    }

    #[test]
    fn incidence_examples() {
        // λ=(1,1,0,0) is bad parity (n even, ℤ): skew kind
        let l = lam(&[2, 2, 0, 0]);
        let s = inv(&l, vec![3, 4, 1, 2]); // (13)(24)
        assert_eq!(s.incidence(), vec![vec![0, 2], vec![2, 0]]);

        // good-parity variant of the same block structure
        let l = lam(&[3, 3, 1, 1]);
        let e = inv(&l, vec![1, 2, 3, 4]);
        assert_eq!(e.incidence(), vec![vec![2, 0], vec![0, 2]]);
        let s = inv(&l, vec![3, 2, 1, 4]); // (13)
        assert_eq!(s.incidence(), vec![vec![1, 1], vec![1, 1]]);

        let l = lam(&[4, 2, 0]);
        let e = inv(&l, vec![1, 2, 3]);
        assert_eq!(
            e.incidence(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn same_orbit_examples() {
        let l = lam(&[2, 2, 0, 0]);
        let s = inv(&l, vec![3, 4, 1, 2]); // (13)(24)
        let t = inv(&l, vec![4, 3, 2, 1]); // (14)(23)
        assert!(same_orbit(&s, &t).unwrap());
        assert!(brute_force_same_orbit(&s, &t).unwrap());
        assert!(same_orbit(&s, &s).unwrap());

        let l = lam(&[3, 3, 1, 1]);
        let a = inv(&l, vec![3, 2, 1, 4]); // (13)
        let b = inv(&l, vec![3, 4, 1, 2]); // (13)(24)
        assert!(!same_orbit(&a, &b).unwrap());
        assert!(!brute_force_same_orbit(&a, &b).unwrap());
    }

    #[test]
    fn enumerate_orbit_examples() {
        // all-distinct λ, n=3: the four involutions of S_3
        let orbits = enumerate_orbits(&lam(&[2, 0, -2])).unwrap();
        assert_eq!(orbits.len(), 4);

        // λ=(1,1,0,0) in good parity: 3 orbits
        let orbits = enumerate_orbits(&lam(&[3, 3, 1, 1])).unwrap();
        assert_eq!(orbits.len(), 3);

        // λ=(1,1) bad: the unique fixed-point-free involution
        let orbits = enumerate_orbits(&lam(&[2, 2])).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].permutation().images(), &[2, 1]);
    }

    #[test]
    fn involution_counts_for_distinct_lambda() {
        let expected = [1usize, 2, 4, 10, 26];
        for (n, &count) in (1..=5).zip(&expected) {
            let entries: Vec<i64> = (0..n).map(|i| 2 * (n as i64 - i as i64)).collect();
            let lambda = if n % 2 == 1 {
                lam(&entries)
            } else {
                lam(&entries.iter().map(|e| e + 1).collect::<Vec<_>>())
            };
            assert_eq!(enumerate_orbits(&lambda).unwrap().len(), count, "n = {n}");
        }
    }

    #[test]
    fn involution_of_l_param_examples() {
        let l = lam(&[3, 1]);
        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        let s = involution_of_l_param(&phi, &l).unwrap();
        assert!(s.permutation().is_identity());

        let phi = RealLParameter::new(vec![(hi(2), hi(1)), (hi(2), hi(-1))]).unwrap();
        let s = involution_of_l_param(&phi, &l).unwrap();
        assert_eq!(s.permutation().images(), &[2, 1]);

        // round-trip through l_param_of_involution
        let back = l_param_of_involution(&s, &l);
        assert_eq!(back, phi);
    }

    #[test]
    fn multisegment_orbit_and_full_rank() {
        let lp = lambda_to_lambdap(&lam(&[3, 1]), 1).unwrap();
        let m = Multisegment::new(vec![
            Segment::new(hi(-1), hi(3)).unwrap(),
            Segment::new(hi(-3), hi(1)).unwrap(),
        ]);
        assert!(multisegment_orbit(&m, &lp).matches);
        assert!(is_full_rank(&m, &lp).unwrap());

        let m = Multisegment::new(vec![
            Segment::new(hi(-3), hi(3)).unwrap(),
            Segment::new(hi(-1), hi(1)).unwrap(),
        ]);
        assert!(is_full_rank(&m, &lp).unwrap());

        let m = Multisegment::new(vec![Segment::new(hi(-3), hi(3)).unwrap()]);
        assert!(!multisegment_orbit(&m, &lp).matches);
        assert!(is_full_rank(&m, &lp).is_err());

        let m = Multisegment::new(vec![
            Segment::new(hi(-3), hi(-1)).unwrap(),
            Segment::new(hi(-1), hi(1)).unwrap(),
            Segment::new(hi(1), hi(3)).unwrap(),
        ]);
        assert!(multisegment_orbit(&m, &lp).matches);
        assert!(!is_full_rank(&m, &lp).unwrap());
    }

    #[test]
    fn iota_orbit_examples() {
        let l = lam(&[3, 1]);
        let blocks = BlockStructure::from_inf_char(&l);
        let e = BlockInvolution::new(
            Permutation::identity(2),
            blocks.clone(),
            InvolutionKind::Good,
        )
        .unwrap();
        let m = iota_orbit(&e, &l, 1).unwrap();
        assert_eq!(
            m,
            Multisegment::new(vec![
                Segment::new(hi(-1), hi(1)).unwrap(),
                Segment::new(hi(-3), hi(3)).unwrap(),
            ])
        );

        let s = BlockInvolution::new(
            Permutation::new(vec![2, 1]).unwrap(),
            blocks,
            InvolutionKind::Good,
        )
        .unwrap();
        let m = iota_orbit(&s, &l, 1).unwrap();
        assert_eq!(
            m,
            Multisegment::new(vec![
                Segment::new(hi(-1), hi(3)).unwrap(),
                Segment::new(hi(-3), hi(1)).unwrap(),
            ])
        );
        assert!(m.is_negation_closed());
    }

    #[test]
    fn d_counts_examples() {
        let l = lam(&[4, 2, 0]);
        let s = inv(&l, vec![3, 2, 1]); // (13)
        let d = s.d_counts();
        assert_eq!(d[0][0], 1);
        assert_eq!(d, s.d_counts_via_rank().unwrap());

        let e = inv(&l, vec![1, 2, 3]);
        let d = e.d_counts();
        for (a, &ma) in e.blocks().cumulative().iter().enumerate() {
            for (b, &mb) in e.blocks().cumulative().iter().enumerate() {
                assert_eq!(d[a][b], ma.saturating_sub(mb));
            }
        }
        let r = e.blocks().r();
        assert_eq!(d[r - 1][r - 1], 0);
    }

    #[test]
    fn involution_of_l_param_rejects_bad_inputs() {
        // content mismatch
        let l = lam(&[3, 1]);
        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(1), hi(0))]).unwrap();
        assert!(involution_of_l_param(&phi, &l).is_err());

        // bad parity with an odd-multiplicity self-dual component has no
        // fixed-point-free pairing
        let l = lam(&[2, 2]);
        let phi = RealLParameter::new(vec![(hi(2), hi(0)), (hi(2), hi(0))]).unwrap();
        assert!(involution_of_l_param(&phi, &l).is_ok());
        let l4 = lam(&[2, 2, 0, 0]);
        let phi = RealLParameter::new(vec![
            (hi(2), hi(0)),
            (hi(1), hi(1)),
            (hi(1), hi(-1)),
            (hi(0), hi(0)),
        ])
        .unwrap();
        assert!(involution_of_l_param(&phi, &l4).is_err());
    }

    #[test]
    fn dual_admissibility() {
        use crate::params::DualType;
        // odd-dimensional centered segments against a symplectic dual must pair up
        let m = Multisegment::new(vec![
            Segment::new(hi(-4), hi(4)).unwrap(),
            Segment::new(hi(-2), hi(2)).unwrap(),
        ]);
        assert!(!is_dual_admissible(&m, DualType::Symp));
        assert!(is_dual_admissible(&m, DualType::Orth));
        let doubled = Multisegment::new(vec![
            Segment::new(hi(-2), hi(2)).unwrap(),
            Segment::new(hi(-2), hi(2)).unwrap(),
        ]);
        assert!(is_dual_admissible(&doubled, DualType::Symp));
    }

    #[test]
    fn multisegment_enumeration_small() {
        // content {−1/2: 1, 1/2: 1}: either the bridge [−1/2,1/2] or two points
        let content: BTreeMap<HalfInteger, usize> = [(hi(-1), 1), (hi(1), 1)].into_iter().collect();
        let all = enumerate_multisegments_with_content(&content);
        assert_eq!(all.len(), 2);
    }

    #[test]
    fn full_rank_enumerator_agrees_with_filtered_general_one() {
        for (lam_twices, delta) in [
            (vec![3i64, 1], 1i64),
            (vec![3, 3, 1, 1], 1),
            (vec![2, 0], 2),
            (vec![4, 2, 0], 2),
        ] {
            let lambda = lam(&lam_twices);
            let lp = lambda_to_lambdap(&lambda, delta).unwrap();
            let via_general: Vec<Multisegment> =
                enumerate_multisegments_with_content(lp.multiplicities())
                    .into_iter()
                    .filter(|m| is_full_rank(m, &lp).unwrap())
                    .collect();
            let via_forced = enumerate_full_rank_multisegments(lp.multiplicities());
            assert_eq!(via_general, via_forced, "λ = {lambda:?}, δ = {delta}");
        }
    }
}
