//! A symbolic calculus of coherent-family symbols Θ(ν) and translation
//! operators, acting on ℤ-linear combinations by the coset-sum rules, with
//! machine verification of the factorization, commutation, and two-step
//! decomposition identities.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::HalfInteger;
use crate::params::RealArthurParameter;
use crate::{Error, Result};

/// A point ν of the translate lattice λ + Λ, stored exactly.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightSymbol(pub Vec<HalfInteger>);

impl fmt::Debug for WeightSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "Θ({})", parts.join(","))
    }
}

/// A finitely supported ℤ-linear combination of weight symbols.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FormalCombination {
    terms: BTreeMap<WeightSymbol, i64>,
}

impl FormalCombination {
    pub fn zero() -> Self {
        FormalCombination::default()
    }

    pub fn symbol(nu: Vec<HalfInteger>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(WeightSymbol(nu), 1);
        FormalCombination { terms }
    }

    pub fn add_term(&mut self, nu: Vec<HalfInteger>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(WeightSymbol(nu)).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&WeightSymbol(vec![]));
            self.terms.retain(|_, &mut c| c != 0);
        }
    }

    pub fn add(&self, other: &FormalCombination) -> FormalCombination {
        let mut out = self.clone();
        for (sym, &c) in &other.terms {
            let entry = out.terms.entry(sym.clone()).or_insert(0);
            *entry += c;
        }
        out.terms.retain(|_, &mut c| c != 0);
        out
    }

    pub fn scale(&self, factor: i64) -> FormalCombination {
        if factor == 0 {
            return FormalCombination::zero();
        }
        FormalCombination {
            terms: self
                .terms
                .iter()
                .map(|(s, &c)| (s.clone(), c * factor))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<WeightSymbol, i64> {
        &self.terms
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|&c| c >= 0)
    }
}

impl fmt::Debug for FormalCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| format!("{c}·{s:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The stabilizer W_λ as a partition of the 1-based positions by value.
pub fn stabilizer(lambda: &[HalfInteger]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<HalfInteger, Vec<usize>> = BTreeMap::new();
    for (i, &v) in lambda.iter().enumerate() {
        groups.entry(v).or_default().push(i + 1);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

fn stabilizer_order(lambda: &[HalfInteger]) -> u64 {
    stabilizer(lambda)
        .iter()
        .map(|g| (1..=g.len() as u64).product::<u64>())
        .product()
}

/// |W_λ ∩ W_μ|: the common refinement of the two value partitions.
fn joint_stabilizer_order(lambda: &[HalfInteger], mu: &[HalfInteger]) -> u64 {
    let mut groups: BTreeMap<(HalfInteger, HalfInteger), u64> = BTreeMap::new();
    for (&a, &b) in lambda.iter().zip(mu) {
        *groups.entry((a, b)).or_insert(0) += 1;
    }
    groups.values().map(|&c| (1..=c).product::<u64>()).product()
}

/// The orbit of `mu` under W_λ: all tuples obtained by permuting the entries
/// of `mu` within the equal-value groups of `lambda`.
fn orbit_under_stabilizer(lambda: &[HalfInteger], mu: &[HalfInteger]) -> Vec<Vec<HalfInteger>> {
    let groups = stabilizer(lambda);
    let mut results: Vec<Vec<HalfInteger>> = vec![mu.to_vec()];
    for group in &groups {
        let values: Vec<HalfInteger> = group.iter().map(|&i| mu[i - 1]).collect();
        let arrangements = distinct_arrangements(&values);
        let mut next = Vec::with_capacity(results.len() * arrangements.len());
        for base in &results {
            for arr in &arrangements {
                let mut t = base.clone();
                for (&pos, &val) in group.iter().zip(arr) {
                    t[pos - 1] = val;
                }
                next.push(t);
            }
        }
        results = next;
    }
    results.sort();
    results.dedup();
    results
}

fn distinct_arrangements(values: &[HalfInteger]) -> Vec<Vec<HalfInteger>> {
    let mut sorted = values.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(values.len());
    fn rec(
        remaining: &mut Vec<HalfInteger>,
        current: &mut Vec<HalfInteger>,
        out: &mut Vec<Vec<HalfInteger>>,
    ) {
        if remaining.is_empty() {
            out.push(current.clone());
            return;
        }
        let mut last: Option<HalfInteger> = None;
        for i in 0..remaining.len() {
            if last == Some(remaining[i]) {
                continue;
            }
            last = Some(remaining[i]);
            let v = remaining.remove(i);
            current.push(v);
            rec(remaining, current, out);
            current.pop();
            remaining.insert(i, v);
        }
    }
    rec(&mut sorted, &mut current, &mut out);
    out
}

/// Find some w with wλ = ν, as the image array of positions (out[i−1] = w(i)
/// means entry i of λ lands at position w(i) of ν).
fn find_permutation(lambda: &[HalfInteger], nu: &[HalfInteger]) -> Option<Vec<usize>> {
    let n = lambda.len();
    if nu.len() != n {
        return None;
    }
    let mut slots: BTreeMap<HalfInteger, Vec<usize>> = BTreeMap::new();
    for (j, &v) in nu.iter().enumerate() {
        slots.entry(v).or_default().push(j + 1);
    }
    let mut w = vec![0usize; n];
    for (i, &v) in lambda.iter().enumerate() {
        let bucket = slots.get_mut(&v)?;
        w[i] = bucket.pop()?;
    }
    Some(w)
}

fn apply_permutation(w: &[usize], tuple: &[HalfInteger]) -> Vec<HalfInteger> {
    let mut out = vec![HalfInteger::ZERO; tuple.len()];
    for (i, &target) in w.iter().enumerate() {
        out[target - 1] = tuple[i];
    }
    out
}

fn check_lattice(lambda: &[HalfInteger], mu: &[HalfInteger]) -> Result<()> {
    for (&a, &b) in lambda.iter().zip(mu) {
        if !(a - b).is_integer() {
            return Err(Error::Invalid(format!(
                "{b} is not in the translate lattice of {a}"
            )));
        }
    }
    Ok(())
}

/// ψ^μ_λ on symbols: μ = λ − Σ e_{j_k} with distinct j_k; each Θ(wλ) maps
/// to Σ over the W_λ-orbit of μ of Θ(w·orbit element).
pub fn translate(
    lambda: &[HalfInteger],
    mu: &[HalfInteger],
    x: &FormalCombination,
) -> Result<FormalCombination> {
    if mu.len() != lambda.len() {
        return Err(Error::SizeMismatch(mu.len(), lambda.len()));
    }
    check_lattice(lambda, mu)?;
    for (&l, &m) in lambda.iter().zip(mu) {
        let diff = (l - m).twice();
        if diff != 0 && diff != 2 {
            return Err(Error::Invalid(format!(
                "μ must be λ minus a sum of distinct coordinate vectors; offset {l} − {m} is not 0 or 1"
            )));
        }
    }
    let orbit = orbit_under_stabilizer(lambda, mu);
    let mut out = FormalCombination::zero();
    for (sym, &coeff) in x.terms() {
        let w = find_permutation(lambda, &sym.0).ok_or_else(|| {
            Error::Invalid(format!(
                "{sym:?} is not in the Weyl orbit of the base weight"
            ))
        })?;
        for mu_prime in &orbit {
            out.add_term(apply_permutation(&w, mu_prime), coeff);
        }
    }
    Ok(out)
}

/// 𝒯_j = ψ^{λ−e_j}_λ.
pub fn t_op(j: usize, lambda: &[HalfInteger], x: &FormalCombination) -> Result<FormalCombination> {
    if j == 0 || j > lambda.len() {
        return Err(Error::Invalid(format!(
            "index {j} out of range 1..={}",
            lambda.len()
        )));
    }
    let mut mu = lambda.to_vec();
    mu[j - 1] = mu[j - 1] - HalfInteger::from_int(1);
    translate(lambda, &mu, x)
}

/// Translation out of the wall ψ^{λ'}_λ with W_{λ'} ⊆ W_λ and λ' in the
/// more regular facet: Θ(wλ) ↦ Σ_{s ∈ W_λ/W_{λ'}} Θ(wsλ').
pub fn translate_from_wall(
    lambda: &[HalfInteger],
    lambda_reg: &[HalfInteger],
    x: &FormalCombination,
) -> Result<FormalCombination> {
    check_facet_compat(lambda_reg, lambda)?;
    let orbit = orbit_under_stabilizer(lambda, lambda_reg);
    let mut out = FormalCombination::zero();
    for (sym, &coeff) in x.terms() {
        let w = find_permutation(lambda, &sym.0).ok_or_else(|| {
            Error::Invalid(format!(
                "{sym:?} is not in the Weyl orbit of the base weight"
            ))
        })?;
        for l in &orbit {
            out.add_term(apply_permutation(&w, l), coeff);
        }
    }
    Ok(out)
}

/// Translation into the wall ψ^{λ''}_λ with W_λ ⊆ W_{λ''}: Θ(wλ) ↦ Θ(wλ'').
pub fn translate_to_wall(
    lambda: &[HalfInteger],
    lambda_sing: &[HalfInteger],
    x: &FormalCombination,
) -> Result<FormalCombination> {
    check_facet_compat(lambda, lambda_sing)?;
    let mut out = FormalCombination::zero();
    for (sym, &coeff) in x.terms() {
        let w = find_permutation(lambda, &sym.0).ok_or_else(|| {
            Error::Invalid(format!(
                "{sym:?} is not in the Weyl orbit of the base weight"
            ))
        })?;
        out.add_term(apply_permutation(&w, lambda_sing), coeff);
    }
    Ok(out)
}

/// The singular weight must lie in the closure of the regular weight's
/// facet: equal entries stay equal and the order is weakly preserved.
fn check_facet_compat(regular: &[HalfInteger], singular: &[HalfInteger]) -> Result<()> {
    if regular.len() != singular.len() {
        return Err(Error::SizeMismatch(regular.len(), singular.len()));
    }
    check_lattice(regular, singular)?;
    let n = regular.len();
    for i in 0..n {
        for j in 0..n {
            if regular[i] == regular[j] && singular[i] != singular[j] {
                return Err(Error::Invalid(
                    "stabilizer does not grow: equal entries split".into(),
                ));
            }
            if regular[i] > regular[j] && singular[i] < singular[j] {
                return Err(Error::Invalid(
                    "weights are not in compatible facets: order reverses".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Result of one verified identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl VerifyReport {
    fn pass(cases: usize, detail: impl Into<String>) -> Self {
        VerifyReport {
            passed: true,
            cases,
            detail: detail.into(),
        }
    }

    fn fail(cases: usize, detail: impl Into<String>) -> Self {
        VerifyReport {
            passed: false,
            cases,
            detail: detail.into(),
        }
    }
}

/// All symbols Θ(wλ), one per distinct arrangement of λ.
pub fn weyl_orbit_symbols(lambda: &[HalfInteger]) -> Vec<Vec<HalfInteger>> {
    distinct_arrangements(lambda)
}

/// Apply 𝒯_{j_1} ∘ ⋯ ∘ 𝒯_{j_r} (rightmost first) starting at base weight λ,
/// tracking the base weight through the composition.
pub fn apply_word(
    word: &[usize],
    lambda: &[HalfInteger],
    x: &FormalCombination,
) -> Result<FormalCombination> {
    let mut current = lambda.to_vec();
    let mut value = x.clone();
    for &j in word.iter().rev() {
        value = t_op(j, &current, &value)?;
        if j == 0 || j > current.len() {
            return Err(Error::Invalid(format!("index {j} out of range")));
        }
        current[j - 1] = current[j - 1] - HalfInteger::from_int(1);
    }
    Ok(value)
}

/// m · ψ^μ_λ = 𝒯_{j_1} ∘ ⋯ ∘ 𝒯_{j_r} with m = |Stab_{S_r}(λ_{j_1},…,λ_{j_r})|,
/// verified on every Θ(wλ), for every admissible order of the indices.
pub fn verify_factorization(lambda: &[HalfInteger], indices: &[usize]) -> Result<VerifyReport> {
    if indices.is_empty() {
        return Err(Error::Invalid("index set must be nonempty".into()));
    }
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != indices.len() {
        return Err(Error::Invalid("indices must be distinct".into()));
    }
    let mut mu = lambda.to_vec();
    for &j in &sorted {
        if j == 0 || j > lambda.len() {
            return Err(Error::Invalid(format!("index {j} out of range")));
        }
        mu[j - 1] = mu[j - 1] - HalfInteger::from_int(1);
    }
    let selected: Vec<HalfInteger> = sorted.iter().map(|&j| lambda[j - 1]).collect();
    let mut m = 1i64;
    {
        let mut counts: BTreeMap<HalfInteger, i64> = BTreeMap::new();
        for &v in &selected {
            *counts.entry(v).or_insert(0) += 1;
        }
        for &c in counts.values() {
            m *= (1..=c).product::<i64>();
        }
    }

    let mut cases = 0;
    for start in weyl_orbit_symbols(lambda) {
        let theta = FormalCombination::symbol(start.clone());
        let lhs = translate(lambda, &mu, &theta)?.scale(m);
        for order in admissible_orders(lambda, &sorted) {
            let rhs = apply_word(&order, lambda, &theta)?;
            cases += 1;
            if lhs != rhs {
                return Ok(VerifyReport::fail(
                    cases,
                    format!(
                        "factorization fails at Θ({start:?}) with order {order:?}: {lhs:?} ≠ {rhs:?}"
                    ),
                ));
            }
        }
    }
    Ok(VerifyReport::pass(
        cases,
        format!("m = {m}, indices {sorted:?}"),
    ))
}

/// Orders of the index set along which the selected λ-entries are weakly
/// decreasing (the proposition's hypothesis and its corollary's variants).
fn admissible_orders(lambda: &[HalfInteger], sorted_indices: &[usize]) -> Vec<Vec<usize>> {
    let mut orders = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; sorted_indices.len()];
    fn rec(
        lambda: &[HalfInteger],
        idx: &[usize],
        used: &mut Vec<bool>,
        current: &mut Vec<usize>,
        orders: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == idx.len() {
            orders.push(current.clone());
            return;
        }
        let last: Option<HalfInteger> = current.last().map(|&j| lambda[j - 1]);
        for k in 0..idx.len() {
            if used[k] {
                continue;
            }
            let v = lambda[idx[k] - 1];
            if let Some(prev) = last {
                if v > prev {
                    continue;
                }
            }
            used[k] = true;
            current.push(idx[k]);
            rec(lambda, idx, used, current, orders);
            current.pop();
            used[k] = false;
        }
    }
    rec(lambda, sorted_indices, &mut used, &mut current, &mut orders);
    orders
}

/// 𝒯_{j_1} ∘ 𝒯_{j_2} = 𝒯_{j_2} ∘ 𝒯_{j_1} when |λ_{j_1} − λ_{j_2}| ≠ 1.
pub fn verify_commutation(lambda: &[HalfInteger], j1: usize, j2: usize) -> Result<VerifyReport> {
    if j1 == j2 || j1 == 0 || j2 == 0 || j1 > lambda.len() || j2 > lambda.len() {
        return Err(Error::Invalid(format!("bad index pair ({j1}, {j2})")));
    }
    let gap = (lambda[j1 - 1] - lambda[j2 - 1]).abs();
    if gap == HalfInteger::from_int(1) {
        return Err(Error::Invalid(format!(
            "|λ_{j1} − λ_{j2}| = 1: the commutation lemma does not apply"
        )));
    }
    let mut cases = 0;
    for start in weyl_orbit_symbols(lambda) {
        let theta = FormalCombination::symbol(start.clone());
        let lhs = apply_word(&[j1, j2], lambda, &theta)?;
        let rhs = apply_word(&[j2, j1], lambda, &theta)?;
        cases += 1;
        if lhs != rhs {
            return Ok(VerifyReport::fail(
                cases,
                format!("commutation fails at Θ({start:?}): {lhs:?} ≠ {rhs:?}"),
            ));
        }
    }
    Ok(VerifyReport::pass(cases, format!("indices ({j1}, {j2})")))
}

/// ψ^{λ−e_j}_λ = ψ^{λ−e_j}_{λ'} ∘ ψ^{λ'}_λ with λ' = λ + (e_1 + ⋯ + e_{j−1}),
/// and the normalizing factor |W_λ ∩ W_{λ−e_j} / W_{λ'}| = 1.
pub fn verify_two_step(lambda: &[HalfInteger], j: usize) -> Result<VerifyReport> {
    let n = lambda.len();
    if j == 0 || j > n {
        return Err(Error::Invalid(format!("index {j} out of range 1..={n}")));
    }
    for w in lambda.windows(2) {
        if w[0] < w[1] {
            return Err(Error::Invalid("λ must be dominant".into()));
        }
    }
    if j < n && lambda[j - 1] == lambda[j] {
        return Err(Error::Invalid(format!("need λ_{j} > λ_{} or j = n", j + 1)));
    }
    let one = HalfInteger::from_int(1);
    let mut lambda_prime = lambda.to_vec();
    for item in lambda_prime.iter_mut().take(j - 1) {
        *item += one;
    }
    let mut lambda_minus = lambda.to_vec();
    lambda_minus[j - 1] = lambda_minus[j - 1] - one;
    let mut mu_from_prime = lambda_prime.clone();
    for item in mu_from_prime.iter_mut().take(j) {
        *item = *item - one;
    }
    debug_assert_eq!(mu_from_prime, lambda_minus);

    let factor = joint_stabilizer_order(lambda, &lambda_minus) / stabilizer_order(&lambda_prime);
    if factor != 1 {
        return Ok(VerifyReport::fail(
            0,
            format!("normalizing factor is {factor}, not 1"),
        ));
    }

    let mut cases = 0;
    for start in weyl_orbit_symbols(lambda) {
        let theta = FormalCombination::symbol(start.clone());
        let lhs = translate(lambda, &lambda_minus, &theta)?;
        let up = translate_from_wall(lambda, &lambda_prime, &theta)?;
        let rhs = translate(&lambda_prime, &lambda_minus, &up)?;
        cases += 1;
        if lhs != rhs {
            return Ok(VerifyReport::fail(
                cases,
                format!("two-step decomposition fails at Θ({start:?}): {lhs:?} ≠ {rhs:?}"),
            ));
        }
    }
    Ok(VerifyReport::pass(cases, format!("j = {j}, factor 1")))
}

/// ψ^{λ''}_λ ∘ ψ^λ_{λ'} = |W_{λ'} ∩ W_{λ''}/W_λ| Σ_{s ∈ W_{λ'}/(W_{λ'}∩W_{λ''})} Θ(s λ''),
/// for λ', λ'' in the closure of the facet of λ.
pub fn verify_trans_srs(
    lambda: &[HalfInteger],
    lambda_prime: &[HalfInteger],
    lambda_dprime: &[HalfInteger],
) -> Result<VerifyReport> {
    check_facet_compat(lambda, lambda_prime)?;
    check_facet_compat(lambda, lambda_dprime)?;
    let factor =
        (joint_stabilizer_order(lambda_prime, lambda_dprime) / stabilizer_order(lambda)) as i64;
    let mut cases = 0;
    for start in weyl_orbit_symbols(lambda_prime) {
        let theta = FormalCombination::symbol(start.clone());
        let up = translate_from_wall(lambda_prime, lambda, &theta)?;
        let lhs = translate_to_wall(lambda, lambda_dprime, &up)?;
        // right side: factor · Σ over the W_{λ'}-orbit of λ''
        let w = find_permutation(lambda_prime, &start)
            .ok_or_else(|| Error::Invalid("symbol outside orbit".into()))?;
        let mut rhs = FormalCombination::zero();
        for l in orbit_under_stabilizer(lambda_prime, lambda_dprime) {
            rhs.add_term(apply_permutation(&w, &l), 1);
        }
        let rhs = rhs.scale(factor);
        cases += 1;
        if lhs != rhs {
            return Ok(VerifyReport::fail(
                cases,
                format!("composition rule fails at Θ({start:?}): {lhs:?} ≠ {rhs:?}"),
            ));
        }
    }
    Ok(VerifyReport::pass(cases, format!("factor {factor}")))
}

/// One step of the singular-parameter translation word: the interval of
/// indices spanned by a block and its repetition count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleStep {
    pub from: usize,
    pub to: usize,
    pub reps: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranslationSchedule {
    pub steps: Vec<ScheduleStep>,
    pub lambda_gg: Vec<HalfInteger>,
}

/// The operator word ∘_i (𝒯_{1+Σ_{j<i}m_j} ∘ ⋯ ∘ 𝒯_{Σ_{j≤i}m_j})^{t_i}
/// taking Θ(λ≫) towards λ.
pub fn translation_schedule(
    psi: &RealArthurParameter,
    shifts: &[i64],
) -> Result<TranslationSchedule> {
    if shifts.len() != psi.r() {
        return Err(Error::SizeMismatch(shifts.len(), psi.r()));
    }
    let mut steps = Vec::new();
    let mut start = 1usize;
    for (b, &t) in psi.blocks().iter().zip(shifts) {
        let end = start + b.m - 1;
        if t > 0 {
            steps.push(ScheduleStep {
                from: start,
                to: end,
                reps: t,
            });
        }
        start = end + 1;
    }
    let shifted: Vec<crate::params::RealBlock> = psi
        .blocks()
        .iter()
        .zip(shifts)
        .map(|(b, &t)| crate::params::RealBlock {
            k: b.k + 2 * t,
            m: b.m,
        })
        .collect();
    let psi_gg = RealArthurParameter::new(shifted, psi.parity())?;
    let lambda_gg: Vec<HalfInteger> = psi_gg.inf_char().entries().to_vec();
    Ok(TranslationSchedule { steps, lambda_gg })
}

/// Verify the word against the single multi-index translate of each block
/// interval (eq. factorization at trivial stabilizer), starting from Θ(λ≫).
pub fn verify_schedule(psi: &RealArthurParameter, shifts: &[i64]) -> Result<VerifyReport> {
    let schedule = translation_schedule(psi, shifts)?;
    let one = HalfInteger::from_int(1);
    let mut via_word = FormalCombination::symbol(schedule.lambda_gg.clone());
    let mut via_interval = via_word.clone();
    let mut lam_word = schedule.lambda_gg.clone();
    let mut lam_interval = schedule.lambda_gg.clone();
    let mut cases = 0;
    for step in schedule.steps.iter().rev() {
        for _ in 0..step.reps {
            // expanded word, rightmost index applied first
            for j in (step.from..=step.to).rev() {
                via_word = t_op(j, &lam_word, &via_word)?;
                lam_word[j - 1] = lam_word[j - 1] - one;
            }
            // single multi-index translate of the block interval
            let mut mu = lam_interval.clone();
            for item in mu.iter_mut().take(step.to).skip(step.from - 1) {
                *item = *item - one;
            }
            via_interval = translate(&lam_interval, &mu, &via_interval)?;
            lam_interval = mu;
            cases += 1;
            if via_word != via_interval {
                return Ok(VerifyReport::fail(
                    cases,
                    format!(
                        "word and interval translate disagree at block [{}, {}]",
                        step.from, step.to
                    ),
                ));
            }
        }
    }
    Ok(VerifyReport::pass(
        cases,
        format!("{} interval steps", cases),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ints: &[i64]) -> Vec<HalfInteger> {
        ints.iter().map(|&x| HalfInteger::from_int(x)).collect()
    }

    #[test]
    fn stabilizer_examples() {
        assert_eq!(stabilizer(&w(&[1, 1, 0])), vec![vec![1, 2], vec![3]]);
        assert_eq!(stabilizer(&w(&[2, 1, 0])), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(stabilizer(&w(&[1, 1, 1])), vec![vec![1, 2, 3]]);
    }

    #[test]
    fn translate_examples() {
        // regular λ: a single symbol
        let lam = w(&[2, 1, 0]);
        let x = FormalCombination::symbol(lam.clone());
        let out = translate(&lam, &w(&[1, 1, 0]), &x).unwrap();
        assert_eq!(out, FormalCombination::symbol(w(&[1, 1, 0])));

        // λ = (1,1): two cosets
        let lam = w(&[1, 1]);
        let x = FormalCombination::symbol(lam.clone());
        let out = translate(&lam, &w(&[1, 0]), &x).unwrap();
        let mut expect = FormalCombination::symbol(w(&[1, 0]));
        expect = expect.add(&FormalCombination::symbol(w(&[0, 1])));
        assert_eq!(out, expect);

        // identity translation
        let out = translate(&lam, &lam, &x).unwrap();
        assert_eq!(out, x);
    }

    #[test]
    fn t_chain_example() {
        // T_1 ∘ T_2 at λ=(1,1) gives 2Θ(0,0)
        let lam = w(&[1, 1]);
        let x = FormalCombination::symbol(lam.clone());
        let out = apply_word(&[1, 2], &lam, &x).unwrap();
        assert_eq!(out, FormalCombination::symbol(w(&[0, 0])).scale(2));

        // T on the empty combination is empty
        let out = apply_word(&[1], &lam, &FormalCombination::zero()).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn factorization_examples() {
        let rep = verify_factorization(&w(&[1, 1]), &[1, 2]).unwrap();
        assert!(rep.passed, "{}", rep.detail);

        let rep = verify_factorization(&w(&[2, 1]), &[1, 2]).unwrap();
        assert!(rep.passed, "{}", rep.detail);

        let rep = verify_factorization(&w(&[2, 1]), &[1]).unwrap();
        assert!(rep.passed, "{}", rep.detail);
    }

    #[test]
    fn commutation_examples() {
        assert!(verify_commutation(&w(&[3, 1]), 1, 2).unwrap().passed);
        assert!(verify_commutation(&w(&[1, 1]), 1, 2).unwrap().passed);
        assert!(verify_commutation(&w(&[2, 1]), 1, 2).is_err());
    }

    #[test]
    fn two_step_examples() {
        assert!(verify_two_step(&w(&[2, 1, 1]), 1).unwrap().passed);
        assert!(verify_two_step(&w(&[1, 1]), 2).unwrap().passed);
        assert!(verify_two_step(&w(&[1]), 1).unwrap().passed);
    }

    #[test]
    fn trans_srs_example() {
        let lam = w(&[2, 1, 0]);
        assert!(
            verify_trans_srs(&lam, &w(&[1, 1, 0]), &w(&[2, 2, 0]))
                .unwrap()
                .passed
        );
        assert!(verify_trans_srs(&lam, &lam, &w(&[2, 1, 1])).unwrap().passed);
    }

    #[test]
    fn schedule_examples() {
        use crate::params::{Parity, RealBlock};
        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 4, m: 2 }, RealBlock { k: 2, m: 2 }],
            Parity::Good,
        )
        .unwrap();
        let schedule = translation_schedule(&psi, &[1, 0]).unwrap();
        assert_eq!(
            schedule.steps,
            vec![ScheduleStep {
                from: 1,
                to: 2,
                reps: 1
            }]
        );
        assert_eq!(
            schedule.lambda_gg,
            [7, 5, 3, 1]
                .iter()
                .map(|&t| HalfInteger::from_twice(t))
                .collect::<Vec<_>>()
        );
        assert!(verify_schedule(&psi, &[1, 0]).unwrap().passed);

        // empty word for zero shifts
        let schedule = translation_schedule(&psi, &[0, 0]).unwrap();
        assert!(schedule.steps.is_empty());
    }

    #[test]
    fn translate_is_weyl_equivariant() {
        // translating Θ(wλ) equals relabeling the translate of Θ(λ) by w
        let lam = w(&[2, 1, 1, 0]);
        let mu = w(&[2, 1, 0, 0]);
        let base = translate(&lam, &mu, &FormalCombination::symbol(lam.clone())).unwrap();
        for arrangement in weyl_orbit_symbols(&lam) {
            let translated =
                translate(&lam, &mu, &FormalCombination::symbol(arrangement.clone())).unwrap();
            let wperm = find_permutation(&lam, &arrangement).unwrap();
            let mut relabeled = FormalCombination::zero();
            for (sym, &c) in base.terms() {
                relabeled.add_term(apply_permutation(&wperm, &sym.0), c);
            }
            assert_eq!(translated, relabeled);
        }
    }

    #[test]
    fn mass_multiplies_by_index() {
        let lam = w(&[1, 1, 0]);
        let mu = w(&[1, 0, 0]);
        let x = FormalCombination::symbol(lam.clone());
        let out = translate(&lam, &mu, &x).unwrap();
        assert!(out.is_nonnegative());
        assert_eq!(out.mass(), 2); // |W_λ/(W_λ∩W_μ)| = 2
    }
}
