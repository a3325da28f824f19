//! Infinitesimal characters, Arthur parameters, and Langlands parameters on
//! the real and p-adic sides, with parity classification and the table
//! selecting the split p-adic target group.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::HalfInteger;
use crate::{Error, Result};

/// Which coset of ℤ the entries live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupportClass {
    /// all entries in ℤ
    Integer,
    /// all entries in ½ℤ∖ℤ
    HalfOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Good,
    Bad,
}

/// A dominant integral infinitesimal character λ = (λ_1 ≥ … ≥ λ_n) with all
/// entries in ℤ or all in ½ℤ∖ℤ; n odd forces ℤ.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInfChar", into = "RawInfChar")]
pub struct InfinitesimalCharacter {
    entries: Vec<HalfInteger>,
}

#[derive(Serialize, Deserialize)]
struct RawInfChar {
    entries_x2: Vec<i64>,
}

impl TryFrom<RawInfChar> for InfinitesimalCharacter {
    type Error = Error;
    fn try_from(raw: RawInfChar) -> Result<Self> {
        InfinitesimalCharacter::new(
            raw.entries_x2
                .into_iter()
                .map(HalfInteger::from_twice)
                .collect(),
        )
    }
}

impl From<InfinitesimalCharacter> for RawInfChar {
    fn from(l: InfinitesimalCharacter) -> RawInfChar {
        RawInfChar {
            entries_x2: l.entries.iter().map(|e| e.twice()).collect(),
        }
    }
}

impl InfinitesimalCharacter {
    pub fn new(entries: Vec<HalfInteger>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Invalid(
                "infinitesimal character must be nonempty".into(),
            ));
        }
        for w in entries.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Invalid(
                    "infinitesimal character must be weakly decreasing".into(),
                ));
            }
        }
        let class = support_class(&entries)?;
        if entries.len() % 2 == 1 && class == SupportClass::HalfOdd {
            return Err(Error::Invalid(
                "odd rank admits no half-integral infinitesimal character".into(),
            ));
        }
        Ok(InfinitesimalCharacter { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[HalfInteger] {
        &self.entries
    }

    pub fn support(&self) -> SupportClass {
        support_class(&self.entries).expect("validated at construction")
    }

    /// Good iff (n odd, ℤ entries) or (n even, ½ℤ∖ℤ entries).
    pub fn parity(&self) -> Parity {
        match (self.n() % 2 == 1, self.support()) {
            (true, SupportClass::Integer) => Parity::Good,
            (false, SupportClass::HalfOdd) => Parity::Good,
            (false, SupportClass::Integer) => Parity::Bad,
            (true, SupportClass::HalfOdd) => unreachable!("rejected at construction"),
        }
    }

    /// Strictly decreasing entries.
    pub fn is_regular(&self) -> bool {
        self.entries.windows(2).all(|w| w[0] > w[1])
    }

    /// λ_n > (1−δ)/2, the condition on an admissible shift δ.
    pub fn validate_delta(&self, delta: i64) -> bool {
        let last = *self.entries.last().expect("nonempty");
        last.twice() > 1 - delta
    }

    /// N = Σ(2λ_i + δ).
    pub fn big_n(&self, delta: i64) -> i64 {
        self.entries.iter().map(|e| e.twice() + delta).sum()
    }
}

impl fmt::Debug for InfinitesimalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

fn support_class(entries: &[HalfInteger]) -> Result<SupportClass> {
    let first_integer = entries[0].is_integer();
    if entries.iter().any(|e| e.is_integer() != first_integer) {
        return Err(Error::Invalid(
            "entries must all lie in ℤ or all in ½ℤ∖ℤ".into(),
        ));
    }
    Ok(if first_integer {
        SupportClass::Integer
    } else {
        SupportClass::HalfOdd
    })
}

/// One Jordan block (z/z̄)^{k/2} ⊠ S_m of a real Arthur parameter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize, Hash)]
pub struct RealBlock {
    pub k: i64,
    pub m: usize,
}

impl RealBlock {
    /// A = (m−1)/2 + k/2.
    pub fn a(&self) -> HalfInteger {
        HalfInteger::from_twice(self.k + self.m as i64 - 1)
    }

    /// B = −(m−1)/2 + k/2.
    pub fn b(&self) -> HalfInteger {
        HalfInteger::from_twice(self.k - self.m as i64 + 1)
    }
}

/// A real Arthur parameter ψ of U(p,q) in good or bad parity, as the multiset
/// of its Jordan blocks (k_i, m_i). Blocks are kept sorted with A_i (then
/// B_i) descending.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRealArthur", into = "RawRealArthur")]
pub struct RealArthurParameter {
    blocks: Vec<RealBlock>,
    parity: Parity,
}

#[derive(Serialize, Deserialize)]
struct RawRealArthur {
    n: usize,
    blocks: Vec<RealBlock>,
    parity: Parity,
}

impl TryFrom<RawRealArthur> for RealArthurParameter {
    type Error = Error;
    fn try_from(raw: RawRealArthur) -> Result<Self> {
        let psi = RealArthurParameter::new(raw.blocks, raw.parity)?;
        if psi.n() != raw.n {
            return Err(Error::Invalid(format!(
                "declared n={} but blocks sum to {}",
                raw.n,
                psi.n()
            )));
        }
        Ok(psi)
    }
}

impl From<RealArthurParameter> for RawRealArthur {
    fn from(psi: RealArthurParameter) -> RawRealArthur {
        RawRealArthur {
            n: psi.n(),
            blocks: psi.blocks,
            parity: psi.parity,
        }
    }
}

impl RealArthurParameter {
    pub fn new(mut blocks: Vec<RealBlock>, parity: Parity) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Invalid(
                "Arthur parameter needs at least one block".into(),
            ));
        }
        if blocks.iter().any(|b| b.m == 0) {
            return Err(Error::Invalid("block sizes m must be positive".into()));
        }
        let n: usize = blocks.iter().map(|b| b.m).sum();
        match parity {
            Parity::Good => {
                for b in &blocks {
                    if (b.k + b.m as i64 - n as i64).rem_euclid(2) != 0 {
                        return Err(Error::Invalid(format!(
                            "good parity requires k+m ≡ n (mod 2); block ({}, {}) fails for n={}",
                            b.k, b.m, n
                        )));
                    }
                }
            }
            Parity::Bad => {
                if !n.is_multiple_of(2) {
                    return Err(Error::Invalid("bad parity requires even n".into()));
                }
                for b in &blocks {
                    if (b.k + b.m as i64).rem_euclid(2) != 1 {
                        return Err(Error::Invalid(format!(
                            "bad parity requires k+m odd; block ({}, {}) fails",
                            b.k, b.m
                        )));
                    }
                }
            }
        }
        blocks.sort_by_key(|x| std::cmp::Reverse((x.a(), x.b())));
        Ok(RealArthurParameter { blocks, parity })
    }

    pub fn blocks(&self) -> &[RealBlock] {
        &self.blocks
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.m).sum()
    }

    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    /// The sorted concatenation of the segments {B_i, …, A_i}.
    pub fn inf_char(&self) -> InfinitesimalCharacter {
        let mut entries = Vec::with_capacity(self.n());
        for b in &self.blocks {
            let mut t = b.a().twice();
            while t >= b.b().twice() {
                entries.push(HalfInteger::from_twice(t));
                t -= 2;
            }
        }
        entries.sort_by(|x, y| y.cmp(x));
        InfinitesimalCharacter::new(entries).expect("block expansion is always valid")
    }

    /// The intervals [B_i, A_i] are pairwise disjoint.
    pub fn is_ddr(&self) -> bool {
        // Sorted with A descending: disjointness reduces to B_i > A_{i+1}.
        self.blocks.windows(2).all(|w| w[0].b() > w[1].a())
    }
}

impl fmt::Debug for RealArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("({},{})", b.k, b.m))
            .collect();
        write!(f, "ψℝ{{{}}}", blocks.join(","))
    }
}

/// The type of the dual group Ĥ as a classical group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DualType {
    /// Ĥ ⊆ O(N,ℂ): blocks have a+b even
    Orth,
    /// Ĥ = Sp(N,ℂ): blocks have a+b odd
    Symp,
}

/// One factor 1 ⊠ S_a ⊠ S_b of a p-adic Arthur parameter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize, Hash)]
pub struct PadicBlock {
    pub a: usize,
    pub b: usize,
}

impl PadicBlock {
    /// Ã = (a+b)/2 − 1.
    pub fn a_tilde(&self) -> HalfInteger {
        HalfInteger::from_twice(self.a as i64 + self.b as i64 - 2)
    }

    /// B̃ = (a−b)/2.
    pub fn b_tilde(&self) -> HalfInteger {
        HalfInteger::from_twice(self.a as i64 - self.b as i64)
    }
}

/// A p-adic Arthur parameter, as the multiset of blocks (a_i, b_i) together
/// with the type of Ĥ. Blocks sorted with Ã (then B̃) descending.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPadicArthur", into = "RawPadicArthur")]
pub struct PAdicArthurParameter {
    blocks: Vec<PadicBlock>,
    dual: DualType,
}

#[derive(Serialize, Deserialize)]
struct RawPadicArthur {
    blocks: Vec<PadicBlock>,
    dual: DualType,
}

impl TryFrom<RawPadicArthur> for PAdicArthurParameter {
    type Error = Error;
    fn try_from(raw: RawPadicArthur) -> Result<Self> {
        PAdicArthurParameter::new(raw.blocks, raw.dual)
    }
}

impl From<PAdicArthurParameter> for RawPadicArthur {
    fn from(psi: PAdicArthurParameter) -> RawPadicArthur {
        RawPadicArthur {
            blocks: psi.blocks,
            dual: psi.dual,
        }
    }
}

impl PAdicArthurParameter {
    pub fn new(mut blocks: Vec<PadicBlock>, dual: DualType) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Invalid(
                "Arthur parameter needs at least one block".into(),
            ));
        }
        if blocks.iter().any(|b| b.a == 0 || b.b == 0) {
            return Err(Error::Invalid("block sizes a, b must be positive".into()));
        }
        // All blocks share the parity of a+b. Matching the self-duality type
        // of Ĥ (even for orthogonal, odd for symplectic) is good parity; the
        // opposite is bad parity.
        let first_even = (blocks[0].a + blocks[0].b).is_multiple_of(2);
        if blocks.iter().any(|b| ((b.a + b.b) % 2 == 0) != first_even) {
            return Err(Error::Invalid("blocks mix the two parities of a+b".into()));
        }
        blocks.sort_by_key(|x| std::cmp::Reverse((x.a_tilde(), x.b_tilde())));
        Ok(PAdicArthurParameter { blocks, dual })
    }

    pub fn parity(&self) -> Parity {
        let even = (self.blocks[0].a + self.blocks[0].b).is_multiple_of(2);
        if even == (self.dual == DualType::Orth) {
            Parity::Good
        } else {
            Parity::Bad
        }
    }

    pub fn blocks(&self) -> &[PadicBlock] {
        &self.blocks
    }

    pub fn dual(&self) -> DualType {
        self.dual
    }

    pub fn big_n(&self) -> usize {
        self.blocks.iter().map(|b| b.a * b.b).sum()
    }

    /// Discrete diagonal restriction: the [B̃_i, Ã_i] are pairwise disjoint.
    pub fn is_ddr(&self) -> bool {
        self.blocks
            .windows(2)
            .all(|w| w[0].b_tilde() > w[1].a_tilde())
    }

    /// The target is H = Sp(N−1), whose members are cut out by ∏ε_i = 1.
    pub fn has_epsilon_product_constraint(&self) -> bool {
        self.dual == DualType::Orth && self.big_n() % 2 == 1
    }
}

impl fmt::Debug for PAdicArthurParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("({},{})", b.a, b.b))
            .collect();
        write!(f, "ψQp{{{}}}", blocks.join(","))
    }
}

/// A real Langlands parameter as the multiset of character exponents (t, s)
/// of its base change ⊕ (z/z̄)^t (zz̄)^s, closed under (t,s) ↦ (t,−s).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRealLParam", into = "RawRealLParam")]
pub struct RealLParameter {
    chars: Vec<(HalfInteger, HalfInteger)>,
}

#[derive(Serialize, Deserialize)]
struct RawRealLParam {
    characters: Vec<RawExponent>,
}

#[derive(Serialize, Deserialize)]
struct RawExponent {
    t_x2: i64,
    s_x2: i64,
}

impl TryFrom<RawRealLParam> for RealLParameter {
    type Error = Error;
    fn try_from(raw: RawRealLParam) -> Result<Self> {
        RealLParameter::new(
            raw.characters
                .into_iter()
                .map(|c| {
                    (
                        HalfInteger::from_twice(c.t_x2),
                        HalfInteger::from_twice(c.s_x2),
                    )
                })
                .collect(),
        )
    }
}

impl From<RealLParameter> for RawRealLParam {
    fn from(phi: RealLParameter) -> RawRealLParam {
        RawRealLParam {
            characters: phi
                .chars
                .into_iter()
                .map(|(t, s)| RawExponent {
                    t_x2: t.twice(),
                    s_x2: s.twice(),
                })
                .collect(),
        }
    }
}

impl RealLParameter {
    pub fn new(mut chars: Vec<(HalfInteger, HalfInteger)>) -> Result<Self> {
        if chars.is_empty() {
            return Err(Error::Invalid(
                "L-parameter needs at least one character".into(),
            ));
        }
        let mut counts: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        for (t, s) in &chars {
            *counts.entry((t.twice(), s.twice())).or_insert(0) += 1;
        }
        for (&(t, s), &c) in &counts {
            let dual = counts.get(&(t, -s)).copied().unwrap_or(0);
            if c != dual {
                return Err(Error::Invalid(format!(
                    "not conjugate self-dual: multiplicity of (t,s)=({t},{s})/2 is {c} but of (t,−s) is {dual}"
                )));
            }
        }
        chars.sort_by_key(|x| std::cmp::Reverse((x.0 + x.1, x.1)));
        Ok(RealLParameter { chars })
    }

    pub fn characters(&self) -> &[(HalfInteger, HalfInteger)] {
        &self.chars
    }

    pub fn n(&self) -> usize {
        self.chars.len()
    }

    /// The multiset {t_i + s_i}, sorted decreasing: the infinitesimal
    /// character content.
    pub fn content(&self) -> Vec<HalfInteger> {
        let mut c: Vec<HalfInteger> = self.chars.iter().map(|&(t, s)| t + s).collect();
        c.sort_by(|x, y| y.cmp(x));
        c
    }

    pub fn inf_char(&self) -> Result<InfinitesimalCharacter> {
        InfinitesimalCharacter::new(self.content())
    }
}

impl fmt::Debug for RealLParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self
            .chars
            .iter()
            .map(|(t, s)| format!("({t},{s})"))
            .collect();
        write!(f, "φℝ{{{}}}", cs.join(","))
    }
}

/// A segment [lo, hi] = {lo, lo+1, …, hi} with hi − lo ∈ ℤ≥0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSegment", into = "RawSegment")]
pub struct Segment {
    pub lo: HalfInteger,
    pub hi: HalfInteger,
}

#[derive(Serialize, Deserialize)]
struct RawSegment {
    lo_x2: i64,
    hi_x2: i64,
}

impl TryFrom<RawSegment> for Segment {
    type Error = Error;
    fn try_from(raw: RawSegment) -> Result<Self> {
        Segment::new(
            HalfInteger::from_twice(raw.lo_x2),
            HalfInteger::from_twice(raw.hi_x2),
        )
    }
}

impl From<Segment> for RawSegment {
    fn from(s: Segment) -> RawSegment {
        RawSegment {
            lo_x2: s.lo.twice(),
            hi_x2: s.hi.twice(),
        }
    }
}

impl Segment {
    pub fn new(lo: HalfInteger, hi: HalfInteger) -> Result<Self> {
        let diff = hi - lo;
        if diff.is_negative() || !diff.is_integer() {
            return Err(Error::Invalid(format!(
                "[{lo}, {hi}] is not a segment: endpoints must differ by a nonnegative integer"
            )));
        }
        Ok(Segment { lo, hi })
    }

    /// Number of lattice points hi − lo + 1; a segment is never empty.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        ((self.hi - self.lo).twice() / 2 + 1) as usize
    }

    pub fn contains(&self, x: HalfInteger) -> bool {
        self.lo <= x && x <= self.hi && (x - self.lo).is_integer()
    }

    pub fn negated(&self) -> Segment {
        Segment {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Centered at 0, i.e. lo = −hi.
    pub fn is_self_dual(&self) -> bool {
        self.lo == -self.hi
    }

    pub fn points(&self) -> impl Iterator<Item = HalfInteger> {
        let lo = self.lo.twice();
        let hi = self.hi.twice();
        (0..)
            .map(move |j| HalfInteger::from_twice(lo + 2 * j))
            .take_while(move |x| x.twice() <= hi)
    }
}

impl fmt::Debug for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// A multiset of segments: Zelevinsky's model for p-adic L-parameters.
/// Canonically sorted by (hi, lo) descending.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct Multisegment {
    segments: Vec<Segment>,
}

impl From<Vec<Segment>> for Multisegment {
    fn from(v: Vec<Segment>) -> Self {
        Multisegment::new(v)
    }
}

impl From<Multisegment> for Vec<Segment> {
    fn from(m: Multisegment) -> Vec<Segment> {
        m.segments
    }
}

impl Multisegment {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort_by_key(|x| std::cmp::Reverse((x.hi, x.lo)));
        Multisegment { segments }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total number of lattice points: the dimension N.
    pub fn dim(&self) -> usize {
        self.segments.iter().map(|s| s.len()).sum()
    }

    /// Multiplicity of each degree across all segments.
    pub fn degree_content(&self) -> BTreeMap<HalfInteger, usize> {
        let mut content = BTreeMap::new();
        for seg in &self.segments {
            for x in seg.points() {
                *content.entry(x).or_insert(0) += 1;
            }
        }
        content
    }

    /// Closed under [lo,hi] ↦ [−hi,−lo].
    pub fn is_negation_closed(&self) -> bool {
        let negated = Multisegment::new(self.segments.iter().map(|s| s.negated()).collect());
        *self == negated
    }

    /// Number of segments containing both x and x+1.
    pub fn link_count(&self, x: HalfInteger) -> usize {
        let next = x + HalfInteger::from_int(1);
        self.segments
            .iter()
            .filter(|s| s.contains(x) && s.contains(next))
            .count()
    }
}

impl fmt::Debug for Multisegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.segments)
    }
}

/// An unramified p-adic infinitesimal character: the multiplicity of each
/// Frobenius-eigenvalue exponent, symmetric about 0.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPadicInfChar", into = "RawPadicInfChar")]
pub struct PAdicInfChar {
    mult: BTreeMap<HalfInteger, usize>,
    support: SupportClass,
}

#[derive(Serialize, Deserialize)]
struct RawPadicInfChar {
    mult: Vec<(i64, usize)>,
    support: SupportClass,
}

impl TryFrom<RawPadicInfChar> for PAdicInfChar {
    type Error = Error;
    fn try_from(raw: RawPadicInfChar) -> Result<Self> {
        PAdicInfChar::new(
            raw.mult
                .into_iter()
                .map(|(x2, c)| (HalfInteger::from_twice(x2), c))
                .collect(),
        )
    }
}

impl From<PAdicInfChar> for RawPadicInfChar {
    fn from(l: PAdicInfChar) -> RawPadicInfChar {
        RawPadicInfChar {
            mult: l.mult.iter().map(|(x, &c)| (x.twice(), c)).collect(),
            support: l.support,
        }
    }
}

impl PAdicInfChar {
    pub fn new(mult: BTreeMap<HalfInteger, usize>) -> Result<Self> {
        let mult: BTreeMap<HalfInteger, usize> = mult.into_iter().filter(|&(_, c)| c > 0).collect();
        if mult.is_empty() {
            return Err(Error::Invalid(
                "empty p-adic infinitesimal character".into(),
            ));
        }
        let entries: Vec<HalfInteger> = mult.keys().copied().collect();
        let first_integer = entries[0].is_integer();
        if entries.iter().any(|e| e.is_integer() != first_integer) {
            return Err(Error::Invalid("mixed support classes".into()));
        }
        for (x, &c) in &mult {
            if mult.get(&-*x).copied().unwrap_or(0) != c {
                return Err(Error::Invalid(format!("dim W_{x} ≠ dim W_{}", -*x)));
            }
        }
        let support = if first_integer {
            SupportClass::Integer
        } else {
            SupportClass::HalfOdd
        };
        Ok(PAdicInfChar { mult, support })
    }

    pub fn multiplicities(&self) -> &BTreeMap<HalfInteger, usize> {
        &self.mult
    }

    pub fn multiplicity(&self, x: HalfInteger) -> usize {
        self.mult.get(&x).copied().unwrap_or(0)
    }

    pub fn support(&self) -> SupportClass {
        self.support
    }

    pub fn big_n(&self) -> usize {
        self.mult.values().sum()
    }

    /// Multiplicities weakly increase toward 0 on each side.
    pub fn is_unimodal(&self) -> bool {
        let mut prev: Option<(HalfInteger, usize)> = None;
        for (&x, &c) in &self.mult {
            if let Some((px, pc)) = prev {
                if x.twice() <= 0 && c < pc {
                    return false;
                }
                if px.twice() >= 0 && c > pc {
                    return false;
                }
            }
            prev = Some((x, c));
        }
        true
    }
}

impl fmt::Debug for PAdicInfChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mult.iter().map(|(x, c)| format!("{x}:{c}")).collect();
        write!(f, "λQp{{{}}}", parts.join(","))
    }
}

/// The family of the split p-adic target group H.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HFamily {
    /// Sp(N−1); Ĥ = SO(N,ℂ)
    Sp,
    /// SO(N+1); Ĥ = Sp(N,ℂ)
    SO,
    /// full even orthogonal O(N); Ĥ = O(N,ℂ)
    O,
}

/// The target group descriptor produced by the six-row table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetGroup {
    pub family: HFamily,
    /// Argument of the group: N−1 for Sp, N+1 for SO, N for O.
    pub size: i64,
    /// N, the dimension of the standard representation of Ĥ.
    pub big_n: i64,
    pub dual: DualType,
    pub parity: Parity,
}

impl TargetGroup {
    /// Members of Π_ψ(H) are cut out by ∏ε_i = 1 exactly for H = Sp(N−1).
    pub fn has_epsilon_product_constraint(&self) -> bool {
        self.family == HFamily::Sp
    }

    pub fn describe(&self) -> String {
        match self.family {
            HFamily::Sp => format!("Sp({})", self.size),
            HFamily::SO => format!("SO({})", self.size),
            HFamily::O => format!("O({})", self.size),
        }
    }
}

/// The six-row table keyed by (parity of n, support class of λ, parity of δ).
pub fn target_group(lambda: &InfinitesimalCharacter, delta: i64) -> Result<TargetGroup> {
    if !lambda.validate_delta(delta) {
        return Err(Error::Invalid(format!(
            "δ={delta} violates λ_n > (1−δ)/2 for λ={lambda:?}"
        )));
    }
    let n_odd = lambda.n() % 2 == 1;
    let delta_odd = delta.rem_euclid(2) == 1;
    let big_n = lambda.big_n(delta);
    let parity = lambda.parity();
    let (family, size, dual) = match (n_odd, lambda.support(), delta_odd) {
        (true, SupportClass::Integer, true) => (HFamily::Sp, big_n - 1, DualType::Orth),
        (true, SupportClass::Integer, false) => (HFamily::SO, big_n + 1, DualType::Symp),
        (false, SupportClass::HalfOdd, true) => (HFamily::SO, big_n + 1, DualType::Symp),
        (false, SupportClass::Integer, false) => (HFamily::O, big_n, DualType::Orth),
        (false, SupportClass::Integer, true) => (HFamily::SO, big_n + 1, DualType::Symp),
        (false, SupportClass::HalfOdd, false) => (HFamily::O, big_n, DualType::Orth),
        (true, SupportClass::HalfOdd, _) => unreachable!("rejected at construction"),
    };
    Ok(TargetGroup {
        family,
        size,
        big_n,
        dual,
        parity,
    })
}

/// φ_ψ(w) = ψ(w, diag(|w|^{1/2}, |w|^{−1/2})): block (k,m) restricts to the
/// characters (t = k/2, s = (m−1)/2 − j) for j = 0..m−1.
pub fn associated_l_param_real(psi: &RealArthurParameter) -> RealLParameter {
    let mut chars = Vec::with_capacity(psi.n());
    for b in psi.blocks() {
        let t = HalfInteger::from_twice(b.k);
        for j in 0..b.m {
            let s = HalfInteger::from_twice(b.m as i64 - 1 - 2 * j as i64);
            chars.push((t, s));
        }
    }
    RealLParameter::new(chars).expect("associated parameter is conjugate self-dual")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(twices: &[i64]) -> InfinitesimalCharacter {
        InfinitesimalCharacter::new(twices.iter().map(|&t| HalfInteger::from_twice(t)).collect())
            .unwrap()
    }

    #[test]
    fn classify_parity_examples() {
        assert_eq!(lam(&[2, 0, -2]).parity(), Parity::Good);
        assert_eq!(lam(&[3, 1]).parity(), Parity::Good);
        assert_eq!(lam(&[2, 0]).parity(), Parity::Bad);
        // n odd with half-integer entries is impossible
        assert!(InfinitesimalCharacter::new(vec![HalfInteger::from_twice(1)]).is_err());
    }

    #[test]
    fn inf_char_of_real_a_examples() {
        let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good).unwrap();
        assert_eq!(psi.inf_char(), lam(&[3, 1]));

        let psi = RealArthurParameter::new(vec![RealBlock { k: 0, m: 1 }], Parity::Good).unwrap();
        assert_eq!(psi.inf_char(), lam(&[0]));

        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 4, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        assert_eq!(psi.inf_char(), lam(&[5, 3, 3, 1]));
    }

    #[test]
    fn validate_delta_examples() {
        assert!(lam(&[3, 1]).validate_delta(1));
        assert!(!lam(&[3, 1]).validate_delta(0));
        assert!(lam(&[0]).validate_delta(2));
        assert!(!lam(&[0]).validate_delta(1));
    }

    #[test]
    fn target_group_examples() {
        // n=3, λ∈ℤ³, δ odd → Sp(N−1), dual SO(N,ℂ)
        let l = lam(&[2, 0, -2]);
        let tg = target_group(&l, 5).unwrap();
        assert_eq!(tg.family, HFamily::Sp);
        assert_eq!(tg.dual, DualType::Orth);
        assert_eq!(tg.big_n, (2 + 5) + 5 + (-2 + 5));

        // n=2, λ=(3/2,1/2), δ=1 → SO(7), dual Sp(6,ℂ)
        let l = lam(&[3, 1]);
        let tg = target_group(&l, 1).unwrap();
        assert_eq!(tg.family, HFamily::SO);
        assert_eq!(tg.size, 7);
        assert_eq!(tg.big_n, 6);
        assert_eq!(tg.dual, DualType::Symp);

        // n=2, λ=(1,0) bad, δ=2 → O(N), dual O(N,ℂ)
        let l = lam(&[2, 0]);
        let tg = target_group(&l, 2).unwrap();
        assert_eq!(tg.family, HFamily::O);
        assert_eq!(tg.big_n, 6);
        assert_eq!(tg.dual, DualType::Orth);
        assert_eq!(tg.parity, Parity::Bad);
    }

    #[test]
    fn associated_l_param_examples() {
        let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good).unwrap();
        let phi = associated_l_param_real(&psi);
        let expect = RealLParameter::new(vec![
            (HalfInteger::from_twice(2), HalfInteger::from_twice(1)),
            (HalfInteger::from_twice(2), HalfInteger::from_twice(-1)),
        ])
        .unwrap();
        assert_eq!(phi, expect);

        let psi = RealArthurParameter::new(vec![RealBlock { k: 0, m: 1 }], Parity::Good).unwrap();
        assert_eq!(
            associated_l_param_real(&psi).characters(),
            &[(HalfInteger::ZERO, HalfInteger::ZERO)]
        );

        let psi = RealArthurParameter::new(vec![RealBlock { k: 4, m: 3 }], Parity::Good).unwrap();
        let phi = associated_l_param_real(&psi);
        let expect = RealLParameter::new(vec![
            (HalfInteger::from_int(2), HalfInteger::from_int(1)),
            (HalfInteger::from_int(2), HalfInteger::from_int(0)),
            (HalfInteger::from_int(2), HalfInteger::from_int(-1)),
        ])
        .unwrap();
        assert_eq!(phi, expect);
    }

    #[test]
    fn regular_and_ddr_examples() {
        assert!(lam(&[3, 1]).is_regular());
        assert!(!lam(&[4, 4, 2]).is_regular());

        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 4, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        assert!(!psi.is_ddr());

        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 6, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        assert!(psi.is_ddr());
    }

    #[test]
    fn padic_parameter_validation() {
        let psi =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 2 }], DualType::Symp).unwrap();
        assert_eq!(psi.big_n(), 6);
        assert!(psi.is_ddr());
        assert!(!psi.has_epsilon_product_constraint());

        // a+b odd against an orthogonal dual is the bad-parity configuration
        let bad =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 2 }], DualType::Orth).unwrap();
        assert_eq!(bad.parity(), Parity::Bad);
        assert!(PAdicArthurParameter::new(
            vec![PadicBlock { a: 3, b: 2 }, PadicBlock { a: 3, b: 1 }],
            DualType::Symp
        )
        .is_err());

        // single (3,1) block: a+b even, N=3 odd: H = Sp(2), constrained
        let psi =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 1 }], DualType::Orth).unwrap();
        assert!(psi.has_epsilon_product_constraint());
    }

    #[test]
    fn l_param_duality_enforced() {
        assert!(
            RealLParameter::new(vec![(HalfInteger::from_int(1), HalfInteger::from_twice(1))])
                .is_err()
        );
    }

    #[test]
    fn multisegment_content_and_negation() {
        let m = Multisegment::new(vec![
            Segment::new(HalfInteger::from_twice(-1), HalfInteger::from_twice(3)).unwrap(),
            Segment::new(HalfInteger::from_twice(-3), HalfInteger::from_twice(1)).unwrap(),
        ]);
        assert_eq!(m.dim(), 6);
        assert!(m.is_negation_closed());
        let content = m.degree_content();
        assert_eq!(content[&HalfInteger::from_twice(3)], 1);
        assert_eq!(content[&HalfInteger::from_twice(1)], 2);
    }
}
