//! The verification suites behind the `check` command and the acceptance
//! tests: each suite runs a family of inputs through an identity and
//! reports one pass/fail line per criterion.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::arith::{signed_skew_lift, HalfInteger, Permutation, RationalMatrix};
use crate::coherent::{
    verify_commutation, verify_factorization, verify_schedule, verify_trans_srs, verify_two_step,
};
use crate::correspond::{iota_l, lambda_to_lambdap, psi_real_to_padic};
use crate::orbits::{
    brute_force_same_orbit, enumerate_full_rank_multisegments, enumerate_orbits, iota_orbit,
    is_full_rank, same_orbit, BlockInvolution, BlockStructure, InvolutionKind,
};
use crate::packets::{
    associated_multisegment_padic, complete_param_regular_real, complete_param_via_appendix_b,
    epsilon_of_label, epsilon_q_form, leta_to_pq, packet_ddr_padic, packet_regular_real,
    packet_singular_labels, pq_to_leta, regularize, verify_regular_correspondence, PureFormLabel,
};
use crate::params::{
    associated_l_param_real, target_group, HFamily, InfinitesimalCharacter, Parity,
    RealArthurParameter, RealBlock, SupportClass,
};
use crate::Result;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub criteria: Vec<Criterion>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

fn criterion(name: &str, passed: bool, detail: String) -> Criterion {
    Criterion {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Deterministic xorshift sampler for the randomized invariants.
struct Sampler(u64);

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler(seed.max(1))
    }

    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn hi(twice: i64) -> HalfInteger {
    HalfInteger::from_twice(twice)
}

// ---------------------------------------------------------------------------
// families

/// All good-parity ψℝ with Σm ≤ max_n, r ≤ max_r, |k| ≤ max_abs_k.
pub fn good_parity_psis(
    max_n: usize,
    max_r: usize,
    max_abs_k: i64,
    regular_only: bool,
) -> Vec<RealArthurParameter> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let pool: Vec<(i64, usize)> = (1..=n)
            .flat_map(|m| {
                (-max_abs_k..=max_abs_k)
                    .filter(move |k| (k + m as i64 - n as i64).rem_euclid(2) == 0)
                    .map(move |k| (k, m))
            })
            .collect();
        let mut blocks: Vec<(i64, usize)> = Vec::new();
        fn rec(
            start: usize,
            remaining: usize,
            max_r: usize,
            pool: &[(i64, usize)],
            blocks: &mut Vec<(i64, usize)>,
            out: &mut Vec<Vec<(i64, usize)>>,
        ) {
            if remaining == 0 {
                out.push(blocks.clone());
                return;
            }
            if blocks.len() == max_r {
                return;
            }
            for i in start..pool.len() {
                let (_, m) = pool[i];
                if m > remaining {
                    continue;
                }
                blocks.push(pool[i]);
                rec(i, remaining - m, max_r, pool, blocks, out);
                blocks.pop();
            }
        }
        let mut multisets = Vec::new();
        rec(0, n, max_r, &pool, &mut blocks, &mut multisets);
        for ms in multisets {
            let psi = RealArthurParameter::new(
                ms.iter().map(|&(k, m)| RealBlock { k, m }).collect(),
                Parity::Good,
            )
            .expect("pool guarantees parity");
            if regular_only && !psi.is_ddr() {
                continue;
            }
            out.push(psi);
        }
    }
    out
}

/// Smallest δ of each parity with k_i + δ > m_i for all blocks.
pub fn minimal_deltas(psi: &RealArthurParameter) -> (i64, i64) {
    let min = psi
        .blocks()
        .iter()
        .map(|b| b.m as i64 - b.k + 1)
        .max()
        .expect("nonempty");
    let odd = if min.rem_euclid(2) == 1 { min } else { min + 1 };
    let even = if min.rem_euclid(2) == 0 { min } else { min + 1 };
    (odd, even)
}

fn all_involutions(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut images: Vec<usize> = vec![0; n];
    fn rec(pos: usize, n: usize, images: &mut Vec<usize>, out: &mut Vec<Permutation>) {
        let i = match (pos..n).find(|&i| images[i] == 0) {
            None => {
                out.push(Permutation::new(images.to_vec()).unwrap());
                return;
            }
            Some(i) => i,
        };
        images[i] = i + 1;
        rec(i + 1, n, images, out);
        images[i] = 0;
        for j in i + 1..n {
            if images[j] == 0 {
                images[i] = j + 1;
                images[j] = i + 1;
                rec(i + 1, n, images, out);
                images[i] = 0;
                images[j] = 0;
            }
        }
    }
    rec(0, n, &mut images, &mut out);
    out
}

/// Representative λ for each block-size composition, in the requested class.
fn lambda_for_composition(sizes: &[usize], support: SupportClass) -> InfinitesimalCharacter {
    let r = sizes.len();
    let mut entries = Vec::new();
    for (u, &sz) in sizes.iter().enumerate() {
        let twice = match support {
            SupportClass::Integer => 2 * (r - u) as i64,
            SupportClass::HalfOdd => 2 * (r - u) as i64 + 1,
        };
        entries.extend(std::iter::repeat_n(hi(twice), sz));
    }
    InfinitesimalCharacter::new(entries).expect("decreasing by construction")
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// Dominant weakly decreasing integer tuples of length n from a window of
/// values [lo, lo+width).
fn dominant_tuples(n: usize, lo: i64, width: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn rec(n: usize, max: i64, lo: i64, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        let mut v = max;
        while v >= lo {
            current.push(v);
            rec(n, v, lo, current, out);
            current.pop();
            v -= 1;
        }
    }
    rec(n, lo + width - 1, lo, &mut current, &mut out);
    out
}

/// All coarsenings of a dominant tuple: collapse any subset of its strict
/// gaps (yielding every facet in the closure touched by the chosen lattice).
fn coarsenings(lambda: &[HalfInteger]) -> Vec<Vec<HalfInteger>> {
    let n = lambda.len();
    let gaps: Vec<usize> = (0..n.saturating_sub(1))
        .filter(|&i| lambda[i] > lambda[i + 1])
        .collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << gaps.len()) {
        let mut collapsed = vec![false; n];
        for (bit, &g) in gaps.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                collapsed[g] = true;
            }
        }
        let mut mu = vec![HalfInteger::ZERO; n];
        mu[n - 1] = lambda[n - 1];
        for i in (0..n - 1).rev() {
            let gap = if lambda[i] == lambda[i + 1] || collapsed[i] {
                HalfInteger::ZERO
            } else {
                lambda[i] - lambda[i + 1]
            };
            mu[i] = mu[i + 1] + gap;
        }
        out.push(mu);
    }
    out.sort();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// module invariant suites

pub fn suite_arith() -> SuiteResult {
    let mut criteria = Vec::new();

    // transpose of a permutation matrix is its inverse, n ≤ 6
    let mut ok = true;
    let mut cases = 0;
    'outer: for n in 1..=6usize {
        for p in permutations_upto(n) {
            let m = p.matrix();
            if m.transpose() != p.inverse().matrix() {
                ok = false;
                break 'outer;
            }
            cases += 1;
        }
    }
    criteria.push(criterion(
        "permutation transpose = inverse",
        ok,
        format!("{cases} permutations, n ≤ 6"),
    ));

    // rank agrees with the minor-expansion oracle
    let mut ok = true;
    let mut cases = 0;
    for n in 1..=3usize {
        let total = 3usize.pow((n * n) as u32);
        for code in 0..total {
            let mut c = code;
            let mut rows = vec![vec![0i64; n]; n];
            for item in rows.iter_mut().flat_map(|r| r.iter_mut()) {
                *item = (c % 3) as i64 - 1;
                c /= 3;
            }
            let m = RationalMatrix::from_i64_rows(&rows);
            if m.exact_rank() != m.rank_by_minors() {
                ok = false;
            }
            cases += 1;
        }
    }
    let mut sampler = Sampler::new(0x5eed);
    for n in 4..=5usize {
        for _ in 0..1000 {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| sampler.below(3) as i64 - 1).collect())
                .collect();
            let m = RationalMatrix::from_i64_rows(&rows);
            if m.exact_rank() != m.rank_by_minors() {
                ok = false;
            }
            cases += 1;
        }
    }
    criteria.push(criterion(
        "exact rank = minor-expansion oracle",
        ok,
        format!("{cases} matrices: exhaustive n ≤ 3, sampled n = 4, 5"),
    ));

    // skew lift squares to −I
    let mut ok = true;
    let mut cases = 0;
    for n in [2usize, 4, 6] {
        for s in all_involutions(n)
            .into_iter()
            .filter(|s| s.is_fixed_point_free())
        {
            let m = signed_skew_lift(&s).unwrap();
            let minus_id = RationalMatrix::identity(n).neg();
            if m.mul(&m).unwrap() != minus_id || !m.is_skew_symmetric() {
                ok = false;
            }
            cases += 1;
        }
    }
    criteria.push(criterion(
        "skew lift squares to −I",
        ok,
        format!("{cases} fixed-point-free involutions, n ≤ 6"),
    ));

    SuiteResult {
        suite: "arith".into(),
        criteria,
    }
}

fn permutations_upto(n: usize) -> Vec<Permutation> {
    crate::arith::permutations_of_subset(n, &(1..=n).collect::<Vec<_>>())
}

pub fn suite_parameters() -> SuiteResult {
    let mut criteria = Vec::new();
    let family = good_parity_psis(8, 3, 8, false);

    let mut ok = true;
    for psi in &family {
        let lam = psi.inf_char();
        if lam.parity() != psi.parity() {
            ok = false;
        }
        if lam.n() != psi.n() {
            ok = false;
        }
        let content = associated_l_param_real(psi).content();
        if content != lam.entries() {
            ok = false;
        }
    }
    criteria.push(criterion(
        "inf char validity and content conservation",
        ok,
        format!("{} parameters, Σm ≤ 8", family.len()),
    ));

    let mut ok = true;
    let mut cases = 0;
    for psi in &family {
        let lam = psi.inf_char();
        let (od, ev) = minimal_deltas(psi);
        for delta in [od, ev] {
            if !lam.validate_delta(delta) {
                ok = false;
                continue;
            }
            let n_cap = lam.big_n(delta);
            if delta.rem_euclid(2) == 1 {
                if n_cap.rem_euclid(2) != (lam.n() as i64).rem_euclid(2) {
                    ok = false;
                }
            } else if n_cap.rem_euclid(2) != 0 {
                ok = false;
            }
            cases += 1;
        }
    }
    criteria.push(criterion(
        "N parity law",
        ok,
        format!("{cases} (ψ, δ) pairs"),
    ));

    SuiteResult {
        suite: "parameters".into(),
        criteria,
    }
}

pub fn suite_correspondence() -> SuiteResult {
    let mut criteria = Vec::new();
    let family = good_parity_psis(8, 3, 8, false);

    // dimension conservation and infinitesimal-character compatibility
    let mut ok_dim = true;
    let mut ok_content = true;
    let mut ok_dual = true;
    let mut ok_funct = true;
    let mut cases = 0;
    for psi in &family {
        let lam = psi.inf_char();
        let (od, ev) = minimal_deltas(psi);
        for delta in [od, ev] {
            let phi = associated_l_param_real(psi);
            let m = match iota_l(&phi, delta) {
                Ok(m) => m,
                Err(_) => {
                    ok_dim = false;
                    continue;
                }
            };
            let lp = lambda_to_lambdap(&lam, delta).expect("valid δ");
            let n_cap = lam.big_n(delta) as usize;
            if m.dim() != n_cap || lp.big_n() != n_cap {
                ok_dim = false;
            }
            if !lp.is_unimodal() {
                ok_content = false;
            }
            let content = m.degree_content();
            if content != *lp.multiplicities() {
                ok_content = false;
            }
            if !m.is_negation_closed() {
                ok_dual = false;
            }
            let psi_p = psi_real_to_padic(psi, delta).expect("valid δ");
            if psi_p.big_n() != n_cap {
                ok_dim = false;
            }
            if associated_multisegment_padic(&psi_p) != m {
                ok_funct = false;
            }
            cases += 1;
        }
    }
    criteria.push(criterion(
        "dimension conservation",
        ok_dim,
        format!("{cases} (ψ, δ) pairs"),
    ));
    criteria.push(criterion(
        "infinitesimal-character compatibility",
        ok_content,
        format!("{cases} pairs"),
    ));
    criteria.push(criterion(
        "duality: images negation-closed",
        ok_dual,
        format!("{cases} pairs"),
    ));
    criteria.push(criterion(
        "functoriality ι(φ_ψℝ) = φ_ψQp",
        ok_funct,
        format!("{cases} pairs"),
    ));

    // injectivity on L-parameters at fixed (λ, δ), n ≤ 6
    let mut ok = true;
    let mut cases = 0;
    for lambda in small_lambda_family(6, false) {
        for delta in [1i64, 2] {
            if !lambda.validate_delta(delta) {
                continue;
            }
            let orbits = enumerate_orbits(&lambda).expect("valid λ");
            let mut seen = BTreeSet::new();
            for s in &orbits {
                let m = iota_orbit(s, &lambda, delta).expect("valid");
                if !seen.insert(format!("{m:?}")) {
                    ok = false;
                }
            }
            cases += orbits.len();
        }
    }
    criteria.push(criterion(
        "injectivity of ι on L-parameters",
        ok,
        format!("{cases} parameters over the n ≤ 6 family"),
    ));

    SuiteResult {
        suite: "correspondence".into(),
        criteria,
    }
}

// ---------------------------------------------------------------------------
// acceptance criteria

/// Criterion 1: regular-case correspondence, zero mismatches.
pub fn criterion_regular_correspondence() -> Criterion {
    let family = good_parity_psis(8, 3, 8, true);
    let mut mismatches = 0usize;
    let mut cases = 0usize;
    let mut count_violation = false;
    for psi in &family {
        let (od, ev) = minimal_deltas(psi);
        for delta in [od, ev] {
            match verify_regular_correspondence(psi, delta) {
                Err(_) => {
                    mismatches += 1;
                }
                Ok(report) => {
                    mismatches += report.mismatches;
                    let expected_padic = if report.target.family == HFamily::Sp {
                        report.real_members / 2
                    } else {
                        report.real_members
                    };
                    if report.padic_members != expected_padic {
                        count_violation = true;
                    }
                }
            }
            cases += 1;
        }
    }
    criterion(
        "1. regular correspondence ι̃(π(ψℝ;l,η)) = π(ψQp;l,η)",
        mismatches == 0 && !count_violation,
        format!(
            "{} regular ψ (Σm ≤ 8, r ≤ 3, |k| ≤ 8) × minimal δ of each parity: {cases} checks, {mismatches} mismatches",
            family.len()
        ),
    )
}

/// Criterion 2: endoscopic-character compatibility and the ε identities.
pub fn criterion_endoscopic_compatibility() -> Criterion {
    let family = good_parity_psis(8, 3, 8, true);
    let mut ok = true;
    let mut cases = 0usize;
    for psi in &family {
        let (od, ev) = minimal_deltas(psi);
        for delta in [od, ev] {
            match verify_regular_correspondence(psi, delta) {
                Err(_) => ok = false,
                Ok(report) => {
                    if !report.epsilon_compatible {
                        ok = false;
                    }
                }
            }
            cases += 1;
        }
        for member in packet_regular_real(psi).expect("regular") {
            if !member.central_sign_consistent {
                ok = false;
            }
        }
    }

    // two-formula agreement, exhaustive over Σm ≤ 10 (regularity not needed)
    let wide = good_parity_psis(10, 3, 4, false);
    let mut formula_cases = 0usize;
    for psi in &wide {
        let ms: Vec<usize> = psi.blocks().iter().map(|b| b.m).collect();
        let mut stack = vec![0usize; ms.len()];
        loop {
            let p: Vec<usize> = stack.clone();
            let q: Vec<usize> = p.iter().zip(&ms).map(|(&pi, &m)| m - pi).collect();
            let pq = PureFormLabel::new(p, q, &ms).unwrap();
            let label = pq_to_leta(&pq, psi);
            if epsilon_of_label(&label, psi) != epsilon_q_form(&pq, psi) {
                ok = false;
            }
            if leta_to_pq(&label, psi) != pq {
                ok = false;
            }
            formula_cases += 1;
            let mut i = 0;
            loop {
                if i == ms.len() {
                    break;
                }
                if stack[i] < ms[i] {
                    stack[i] += 1;
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
            if i == ms.len() {
                break;
            }
        }
    }
    criterion(
        "2. endoscopic ε compatibility and ε identities",
        ok,
        format!(
            "{cases} correspondence checks; {formula_cases} labels for the two-formula and round-trip identities (Σm ≤ 10)"
        ),
    )
}

/// Criterion 3: the Appendix-B pipeline equals the closed form, every label.
pub fn criterion_cross_derivation() -> Criterion {
    let family = good_parity_psis(8, 3, 8, true);
    let mut ok = true;
    let mut cases = 0usize;
    for psi in &family {
        let ms: Vec<usize> = psi.blocks().iter().map(|b| b.m).collect();
        let mut stack = vec![0usize; ms.len()];
        loop {
            let p: Vec<usize> = stack.clone();
            let q: Vec<usize> = p.iter().zip(&ms).map(|(&pi, &m)| m - pi).collect();
            let pq = PureFormLabel::new(p, q, &ms).unwrap();
            let via_b = complete_param_via_appendix_b(psi, &pq);
            let via_thm = complete_param_regular_real(psi, &pq_to_leta(&pq, psi));
            match (via_b, via_thm) {
                (Ok(x), Ok(y)) if x == y => {}
                _ => ok = false,
            }
            cases += 1;
            let mut i = 0;
            loop {
                if i == ms.len() {
                    break;
                }
                if stack[i] < ms[i] {
                    stack[i] += 1;
                    break;
                }
                stack[i] = 0;
                i += 1;
            }
            if i == ms.len() {
                break;
            }
        }
    }
    criterion(
        "3. standard-module oracle equals closed-form parameter",
        ok,
        format!("{} regular ψ, {cases} labels", family.len()),
    )
}

/// Criterion 4: orbit decision procedures against brute force, the rank
/// realization of d_{a,b}, and the involution counts.
pub fn criterion_orbit_theory() -> Criterion {
    let mut ok = true;
    let mut pair_cases = 0usize;
    let mut d_cases = 0usize;

    let mut lambdas: Vec<InfinitesimalCharacter> = Vec::new();
    for n in 1..=6usize {
        for sizes in compositions(n) {
            if n % 2 == 1 {
                lambdas.push(lambda_for_composition(&sizes, SupportClass::Integer));
            } else {
                lambdas.push(lambda_for_composition(&sizes, SupportClass::HalfOdd));
                lambdas.push(lambda_for_composition(&sizes, SupportClass::Integer));
            }
        }
    }

    for lambda in &lambdas {
        let blocks = BlockStructure::from_inf_char(lambda);
        let kind = InvolutionKind::for_parity(lambda.parity());
        let n = lambda.n();
        let valid: Vec<BlockInvolution> = all_involutions(n)
            .into_iter()
            .filter_map(|s| BlockInvolution::new(s, blocks.clone(), kind).ok())
            .collect();
        for s in &valid {
            for t in &valid {
                let fast = same_orbit(s, t).expect("same structure");
                let slow = brute_force_same_orbit(s, t).expect("within guard");
                if fast != slow {
                    ok = false;
                }
                pair_cases += 1;
            }
            if s.d_counts() != s.d_counts_via_rank().expect("liftable") {
                ok = false;
            }
            d_cases += 1;
        }
        // enumerated representatives cover exactly the classes seen
        let orbits = enumerate_orbits(lambda).expect("valid λ");
        let mut seen = BTreeSet::new();
        for s in &valid {
            seen.insert(s.incidence());
        }
        if orbits.len() != seen.len() {
            ok = false;
        }
        for rep in &orbits {
            if !seen.contains(&rep.incidence()) {
                ok = false;
            }
            if kind == InvolutionKind::Skew {
                let a = rep.incidence();
                let total: usize = a.iter().flatten().sum();
                if total != n || a.iter().enumerate().any(|(u, row)| row[u] % 2 != 0) {
                    ok = false;
                }
            }
        }
    }

    // involution counts for all-distinct λ
    let expected = [1usize, 2, 4, 10, 26];
    for (n, &count) in (1..=5).zip(&expected) {
        let support = if n % 2 == 1 {
            SupportClass::Integer
        } else {
            SupportClass::HalfOdd
        };
        let lambda = lambda_for_composition(&vec![1; n], support);
        if enumerate_orbits(&lambda).expect("valid").len() != count {
            ok = false;
        }
    }

    criterion(
        "4. orbit decision = brute force; d_{a,b} = rank realization; involution counts",
        ok,
        format!("{pair_cases} conjugacy pairs, {d_cases} d-matrix checks over all block shapes n ≤ 6, both parities"),
    )
}

fn small_lambda_family(max_n: usize, require_small: bool) -> Vec<InfinitesimalCharacter> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        // integer class: windows starting at 1 (δ=1 valid) and 0 (δ=2 valid)
        for lo in [0i64, 1] {
            for tuple in dominant_tuples(n, lo, 3) {
                let entries: Vec<HalfInteger> = tuple.iter().map(|&v| hi(2 * v)).collect();
                if let Ok(l) = InfinitesimalCharacter::new(entries) {
                    out.push(l);
                }
            }
        }
        // half-integer class (n even)
        if n % 2 == 0 {
            for tuple in dominant_tuples(n, 0, 3) {
                let entries: Vec<HalfInteger> = tuple.iter().map(|&v| hi(2 * v + 1)).collect();
                if let Ok(l) = InfinitesimalCharacter::new(entries) {
                    out.push(l);
                }
            }
        }
        // all-distinct representative
        let support = if n % 2 == 1 {
            SupportClass::Integer
        } else {
            SupportClass::HalfOdd
        };
        out.push(lambda_for_composition(&vec![1; n], support));
    }
    out.sort_by_key(|l| {
        (
            l.n(),
            l.entries().iter().map(|e| e.twice()).collect::<Vec<_>>(),
        )
    });
    out.dedup();
    if require_small {
        // regular λ stay cheap under the forced-link enumeration; otherwise
        // bound the content size
        out.retain(|l| l.big_n(2) <= 22 || l.is_regular());
    }
    out
}

/// Criterion 5: ι is injective on orbits, lands in the full-rank
/// negation-closed locus, and exhausts it.
pub fn criterion_geometric_consistency() -> Criterion {
    let mut ok = true;
    let mut orbit_cases = 0usize;
    let mut count_cases = 0usize;
    for lambda in small_lambda_family(6, true) {
        for delta in [1i64, 2] {
            if !lambda.validate_delta(delta) {
                continue;
            }
            let tg = target_group(&lambda, delta).expect("valid δ");
            let lp = lambda_to_lambdap(&lambda, delta).expect("valid δ");
            let orbits = enumerate_orbits(&lambda).expect("valid λ");
            let mut images = BTreeSet::new();
            for s in &orbits {
                let m = iota_orbit(s, &lambda, delta).expect("valid");
                match is_full_rank(&m, &lp) {
                    Ok(true) => {}
                    _ => ok = false,
                }
                if !m.is_negation_closed() || !crate::orbits::is_dual_admissible(&m, tg.dual) {
                    ok = false;
                }
                if !images.insert(m) {
                    ok = false; // injectivity
                }
                orbit_cases += 1;
            }
            let full_rank = enumerate_full_rank_multisegments(lp.multiplicities());
            let admissible = |m: &&crate::params::Multisegment| {
                m.is_negation_closed() && crate::orbits::is_dual_admissible(m, tg.dual)
            };
            let closed = full_rank.iter().filter(admissible).count();
            if closed != orbits.len() {
                ok = false;
            }
            // the enumerated images are exactly the admissible full-rank locus
            for m in full_rank.iter().filter(admissible) {
                if !images.contains(m) {
                    ok = false;
                }
            }
            count_cases += 1;
        }
    }
    criterion(
        "5. orbit count = negation-closed full-rank multisegments",
        ok,
        format!("{orbit_cases} orbits over {count_cases} (λ, δ) pairs, n ≤ 6, δ ∈ {{1,2}}"),
    )
}

/// Criterion 6: the translation calculus identities, exhaustively for
/// dominant integral λ with n ≤ 5 and entries in [0,4].
pub fn criterion_translation_calculus() -> Criterion {
    let mut ok = true;
    let mut fact_cases = 0usize;
    let mut comm_cases = 0usize;
    let mut step_cases = 0usize;
    for n in 1..=5usize {
        for tuple in dominant_tuples(n, 0, 5) {
            let lambda: Vec<HalfInteger> =
                tuple.iter().map(|&v| HalfInteger::from_int(v)).collect();
            // factorization over every nonempty index subset
            for mask in 1u32..(1 << n) {
                let indices: Vec<usize> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| i + 1)
                    .collect();
                match verify_factorization(&lambda, &indices) {
                    Ok(rep) => {
                        if !rep.passed {
                            ok = false;
                        }
                        fact_cases += rep.cases;
                    }
                    Err(_) => ok = false,
                }
            }
            // commutation for every applicable pair
            for j1 in 1..=n {
                for j2 in j1 + 1..=n {
                    let gap = (lambda[j1 - 1] - lambda[j2 - 1]).abs();
                    if gap == HalfInteger::from_int(1) {
                        continue;
                    }
                    match verify_commutation(&lambda, j1, j2) {
                        Ok(rep) => {
                            if !rep.passed {
                                ok = false;
                            }
                            comm_cases += rep.cases;
                        }
                        Err(_) => ok = false,
                    }
                }
            }
            // two-step decomposition for every admissible j
            for j in 1..=n {
                if j < n && lambda[j - 1] == lambda[j] {
                    continue;
                }
                match verify_two_step(&lambda, j) {
                    Ok(rep) => {
                        if !rep.passed {
                            ok = false;
                        }
                        step_cases += rep.cases;
                    }
                    Err(_) => ok = false,
                }
            }
        }
    }

    // the composite rule over facet triples, n ≤ 4, exhaustive coarsenings
    let mut srs_cases = 0usize;
    for n in 1..=4usize {
        for tuple in dominant_tuples(n, 0, 4) {
            let lambda: Vec<HalfInteger> =
                tuple.iter().map(|&v| HalfInteger::from_int(v)).collect();
            let coarse = coarsenings(&lambda);
            for lp in &coarse {
                for ldp in &coarse {
                    match verify_trans_srs(&lambda, lp, ldp) {
                        Ok(rep) => {
                            if !rep.passed {
                                ok = false;
                            }
                            srs_cases += rep.cases;
                        }
                        Err(_) => ok = false,
                    }
                }
            }
        }
    }

    // translation schedules for the singular ψ family
    let mut sched_cases = 0usize;
    for psi in good_parity_psis(6, 3, 6, false) {
        let (_, shifts) = regularize(&psi);
        match verify_schedule(&psi, &shifts) {
            Ok(rep) => {
                if !rep.passed {
                    ok = false;
                }
                sched_cases += 1;
            }
            Err(_) => ok = false,
        }
    }

    criterion(
        "6. translation calculus: factorization, commutation, two-step, composite rule",
        ok,
        format!(
            "{fact_cases} factorization, {comm_cases} commutation, {step_cases} two-step, {srs_cases} composite, {sched_cases} schedule cases"
        ),
    )
}

/// Criterion 7: the real and p-adic nonvanishing predicates agree.
pub fn criterion_singular_agreement() -> Criterion {
    let family = good_parity_psis(8, 3, 8, false);
    let mut ok = true;
    let mut label_cases = 0usize;
    for psi in &family {
        let (od, ev) = minimal_deltas(psi);
        for delta in [od, ev] {
            match packet_singular_labels(psi, delta) {
                Err(_) => ok = false,
                Ok(report) => {
                    for entry in &report.labels {
                        if !entry.predicates_agree {
                            ok = false;
                        }
                        label_cases += 1;
                    }
                    if psi.is_ddr() && report.labels.iter().any(|l| l.vanishes) {
                        ok = false; // regular parameters lose no label
                    }
                }
            }
        }
    }
    criterion(
        "7. singular nonvanishing equivalence",
        ok,
        format!("{} ψ (Σm ≤ 8), {label_cases} labels", family.len()),
    )
}

/// The worked fixture: ψ = {(k=2, m=2)}, δ = 1.
pub fn golden_fixture_report() -> Result<serde_json::Value> {
    let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good)?;
    let delta = 1i64;
    let lam = psi.inf_char();
    let tg = target_group(&lam, delta)?;
    let psi_p = psi_real_to_padic(&psi, delta)?;
    let real_packet = packet_regular_real(&psi)?;
    let padic_packet = packet_ddr_padic(&psi_p)?;
    let report = verify_regular_correspondence(&psi, delta)?;
    Ok(serde_json::json!({
        "psi": psi,
        "delta": delta,
        "lambda": lam,
        "target": tg,
        "psi_padic": psi_p,
        "real_packet": real_packet,
        "padic_packet": padic_packet,
        "report": report,
    }))
}

pub const GOLDEN_FIXTURE: &str = include_str!("golden/fixture_psi_k2_m2_delta1.json");

/// Criterion 8: the stored fixture reproduces bit-exactly, with the
/// Appendix-B oracle recomputing every complete parameter in it.
pub fn criterion_golden_fixture() -> Criterion {
    let computed = match golden_fixture_report() {
        Ok(v) => v,
        Err(e) => {
            return criterion(
                "8. golden fixture",
                false,
                format!("failed to compute: {e}"),
            )
        }
    };
    let rendered = match serde_json::to_string_pretty(&computed) {
        Ok(s) => s,
        Err(e) => return criterion("8. golden fixture", false, format!("serialization: {e}")),
    };
    let stored = GOLDEN_FIXTURE.trim_end();
    let bit_exact = rendered == stored;

    // recompute the fixture's complete parameters through the oracle
    let psi = RealArthurParameter::new(vec![RealBlock { k: 2, m: 2 }], Parity::Good).unwrap();
    let mut oracle_ok = true;
    let mut fixture_size = 0;
    if let Ok(members) = packet_regular_real(&psi) {
        fixture_size = members.len();
        for member in &members {
            match complete_param_via_appendix_b(&psi, &member.pq) {
                Ok(cp) if cp == member.complete => {}
                _ => oracle_ok = false,
            }
        }
    }
    criterion(
        "8. golden fixture reproduces bit-exactly",
        bit_exact && oracle_ok && fixture_size == 3,
        format!(
            "packet of size {fixture_size}; stored JSON {}; oracle recomputation {}",
            if bit_exact { "matches" } else { "DIFFERS" },
            if oracle_ok { "agrees" } else { "DISAGREES" }
        ),
    )
}

pub fn suite_regular() -> SuiteResult {
    SuiteResult {
        suite: "regular".into(),
        criteria: vec![
            criterion_regular_correspondence(),
            criterion_endoscopic_compatibility(),
            criterion_cross_derivation(),
        ],
    }
}

pub fn suite_orbits() -> SuiteResult {
    SuiteResult {
        suite: "orbits".into(),
        criteria: vec![criterion_orbit_theory()],
    }
}

pub fn suite_geometry() -> SuiteResult {
    SuiteResult {
        suite: "geometry".into(),
        criteria: vec![criterion_geometric_consistency()],
    }
}

pub fn suite_translation() -> SuiteResult {
    SuiteResult {
        suite: "translation".into(),
        criteria: vec![criterion_translation_calculus()],
    }
}

pub fn suite_singular() -> SuiteResult {
    SuiteResult {
        suite: "singular".into(),
        criteria: vec![criterion_singular_agreement()],
    }
}

pub fn suite_golden() -> SuiteResult {
    SuiteResult {
        suite: "golden".into(),
        criteria: vec![criterion_golden_fixture()],
    }
}

pub fn suite_by_name(name: &str) -> Option<Vec<SuiteResult>> {
    match name {
        "arith" => Some(vec![suite_arith()]),
        "parameters" => Some(vec![suite_parameters()]),
        "correspondence" => Some(vec![suite_correspondence()]),
        "regular" => Some(vec![suite_regular()]),
        "orbits" => Some(vec![suite_orbits()]),
        "geometry" => Some(vec![suite_geometry()]),
        "translation" => Some(vec![suite_translation()]),
        "singular" => Some(vec![suite_singular()]),
        "golden" => Some(vec![suite_golden()]),
        "all" => Some(all_suites()),
        _ => None,
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "arith",
        "parameters",
        "correspondence",
        "regular",
        "orbits",
        "geometry",
        "translation",
        "singular",
        "golden",
        "all",
    ]
}

pub fn all_suites() -> Vec<SuiteResult> {
    vec![
        suite_arith(),
        suite_parameters(),
        suite_correspondence(),
        suite_regular(),
        suite_orbits(),
        suite_geometry(),
        suite_translation(),
        suite_singular(),
        suite_golden(),
    ]
}
