//! Packet parametrizations: Adams-Johnson packets over ℝ in (p̲,q̲) and
//! (l̲,η̲) coordinates, the standard-module route to the same complete
//! parameters, Moeglin's packets for p-adic parameters with discrete
//! diagonal restriction, and the label bookkeeping for singular
//! infinitesimal characters.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::HalfInteger;
use crate::correspond::{
    iota_l, transfer_character, PadicCharacter, PadicCompleteParameter, RealCharacter,
    RealCompleteParameter,
};
use crate::params::{
    target_group, Multisegment, PAdicArthurParameter, Parity, RealArthurParameter, RealBlock,
    RealLParameter, Segment, TargetGroup,
};
use crate::{Error, Result};

/// Moeglin coordinates (l̲, η̲) on a packet, indexed by the blocks of ψ.
/// Canonical form stores η_i = +1 whenever l_i = m_i/2 (where the sign is
/// immaterial).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PacketLabel {
    pub l: Vec<usize>,
    pub eta: Vec<i8>,
}

impl PacketLabel {
    pub fn new(l: Vec<usize>, eta: Vec<i8>, ms: &[usize]) -> Result<Self> {
        if l.len() != ms.len() || eta.len() != ms.len() {
            return Err(Error::SizeMismatch(l.len(), ms.len()));
        }
        for (i, (&li, &m)) in l.iter().zip(ms).enumerate() {
            if li > m / 2 {
                return Err(Error::Invalid(format!(
                    "l_{} = {li} exceeds ⌊m/2⌋ = {}",
                    i + 1,
                    m / 2
                )));
            }
        }
        if eta.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Invalid("η entries must be ±1".into()));
        }
        let mut label = PacketLabel { l, eta };
        label.canonicalize(ms);
        Ok(label)
    }

    fn canonicalize(&mut self, ms: &[usize]) {
        for (i, &m) in ms.iter().enumerate() {
            if 2 * self.l[i] == m {
                self.eta[i] = 1;
            }
        }
    }

    pub fn flipped(&self, ms: &[usize]) -> PacketLabel {
        let mut out = PacketLabel {
            l: self.l.clone(),
            eta: self.eta.iter().map(|&e| -e).collect(),
        };
        out.canonicalize(ms);
        out
    }
}

/// Pure-form coordinates (p̲, q̲) with p_i + q_i = m_i.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PureFormLabel {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl PureFormLabel {
    pub fn new(p: Vec<usize>, q: Vec<usize>, ms: &[usize]) -> Result<Self> {
        if p.len() != ms.len() || q.len() != ms.len() {
            return Err(Error::SizeMismatch(p.len(), ms.len()));
        }
        for (i, ((&pi, &qi), &m)) in p.iter().zip(&q).zip(ms).enumerate() {
            if pi + qi != m {
                return Err(Error::Invalid(format!(
                    "p_{0} + q_{0} = {1} must equal m_{0} = {2}",
                    i + 1,
                    pi + qi,
                    m
                )));
            }
        }
        Ok(PureFormLabel { p, q })
    }

    /// Aggregate (Σp_i, Σq_i).
    pub fn aggregate(&self) -> (usize, usize) {
        (self.p.iter().sum(), self.q.iter().sum())
    }
}

fn block_sizes(psi: &RealArthurParameter) -> Vec<usize> {
    psi.blocks().iter().map(|b| b.m).collect()
}

/// l_i = min{p_i, q_i}, η_i = (−1)^{1+Σ_{j>i} m_j} sgn(p_i − q_i), with
/// η_i = +1 canonically when p_i = q_i.
pub fn pq_to_leta(pq: &PureFormLabel, psi: &RealArthurParameter) -> PacketLabel {
    let ms = block_sizes(psi);
    let r = ms.len();
    let mut l = Vec::with_capacity(r);
    let mut eta = Vec::with_capacity(r);
    for i in 0..r {
        let (pi, qi) = (pq.p[i], pq.q[i]);
        l.push(pi.min(qi));
        if pi == qi {
            eta.push(1);
        } else {
            let tail: usize = ms[i + 1..].iter().sum();
            let sign_prefix: i8 = if (1 + tail).is_multiple_of(2) { 1 } else { -1 };
            let sgn: i8 = if pi > qi { 1 } else { -1 };
            eta.push(sign_prefix * sgn);
        }
    }
    PacketLabel::new(l, eta, &ms).expect("pq coordinates produce a valid label")
}

/// Inverse of `pq_to_leta` on equivalence classes.
pub fn leta_to_pq(label: &PacketLabel, psi: &RealArthurParameter) -> PureFormLabel {
    let ms = block_sizes(psi);
    let r = ms.len();
    let mut p = Vec::with_capacity(r);
    let mut q = Vec::with_capacity(r);
    for i in 0..r {
        let m = ms[i];
        let li = label.l[i];
        if 2 * li == m {
            p.push(li);
            q.push(li);
        } else {
            let tail: usize = ms[i + 1..].iter().sum();
            let sign_prefix: i8 = if (1 + tail).is_multiple_of(2) { 1 } else { -1 };
            let sgn = label.eta[i] * sign_prefix;
            if sgn > 0 {
                p.push(m - li);
                q.push(li);
            } else {
                p.push(li);
                q.push(m - li);
            }
        }
    }
    PureFormLabel::new(p, q, &ms).expect("label coordinates produce a valid pure form")
}

/// ε_i = η_i^{m_i} (−1)^{(m_i − 2l_i)(m_i − 1 − 2l_i)/2}.
pub fn epsilon_of_label(label: &PacketLabel, psi: &RealArthurParameter) -> Vec<i8> {
    let ms = block_sizes(psi);
    label
        .l
        .iter()
        .zip(&label.eta)
        .zip(&ms)
        .map(|((&l, &eta), &m)| {
            let eta_pow: i8 = if m % 2 == 0 { 1 } else { eta };
            let d = (m - 2 * l) as i64;
            let exp = d * (d - 1) / 2;
            let sign: i8 = if exp % 2 == 0 { 1 } else { -1 };
            eta_pow * sign
        })
        .collect()
}

/// The other displayed form ε_i = (−1)^{m_i(1 + Σ_{j>i} m_j) + m_i(m_i−1)/2 + q_i}.
pub fn epsilon_q_form(pq: &PureFormLabel, psi: &RealArthurParameter) -> Vec<i8> {
    let ms = block_sizes(psi);
    (0..ms.len())
        .map(|i| {
            let m = ms[i] as i64;
            let tail: i64 = ms[i + 1..].iter().map(|&x| x as i64).sum();
            let exp = m * (1 + tail) + m * (m - 1) / 2 + pq.q[i] as i64;
            if exp % 2 == 0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

fn require_regular(psi: &RealArthurParameter) -> Result<()> {
    if !psi.inf_char().is_regular() {
        return Err(Error::Invalid(format!(
            "{psi:?} has singular infinitesimal character; regular case required"
        )));
    }
    Ok(())
}

/// The complete Langlands parameter of π(ψ; l̲, η̲) in the regular case:
/// each block contributes l_i dual pairs (t = k_i/2, s = ±((m_i−1)/2 − j))
/// and the tempered exponents t = B_i + l_i + j (s = 0) carrying the
/// alternating signs η_i(−1)^j.
pub fn complete_param_regular_real(
    psi: &RealArthurParameter,
    label: &PacketLabel,
) -> Result<RealCompleteParameter> {
    require_regular(psi)?;
    let mut chars = Vec::with_capacity(psi.n());
    let mut eps = RealCharacter::new();
    for (i, b) in psi.blocks().iter().enumerate() {
        let li = label.l[i];
        let t = HalfInteger::from_twice(b.k);
        for j in 0..li {
            let s = HalfInteger::from_twice(b.m as i64 - 1 - 2 * j as i64);
            chars.push((t, s));
            chars.push((t, -s));
        }
        let span = b.m as i64 - 1 - 2 * li as i64;
        for j in 0..=span.max(-1) {
            let tj = HalfInteger::from_twice(b.b().twice() + 2 * li as i64 + 2 * j);
            chars.push((tj, HalfInteger::ZERO));
            let sign = if j % 2 == 0 {
                label.eta[i]
            } else {
                -label.eta[i]
            };
            eps.insert(tj, sign);
        }
    }
    let phi = RealLParameter::new(chars)?;
    RealCompleteParameter::new(phi, eps, psi.parity())
}

/// Standard-module data for π(ψ; p̲, q̲): the split-torus character ν, the
/// compact-torus character χ, the Harish-Chandra parameter μ of the
/// discrete-series part (in dominant order), and its component character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardModuleData {
    pub nu: Vec<i64>,
    pub chi: Vec<i64>,
    pub mu: Vec<HalfInteger>,
    pub eps_minus: Vec<i8>,
}

/// The Appendix-B pipeline: index partitions P_d, Q_d, B_d, D_d, C_d, the
/// order-preserving σ from the dominant arrangement to the blockwise one,
/// and the discrete-series component character.
pub fn standard_module_data(
    psi: &RealArthurParameter,
    pq: &PureFormLabel,
) -> Result<StandardModuleData> {
    require_regular(psi)?;
    let blocks = psi.blocks();
    let r = blocks.len();
    let n = psi.n();
    let p_total: usize = pq.p.iter().sum();

    // Index sets: P_d fills {1..p} blockwise, Q_d fills {p+1..n} from the top.
    let mut p_start = 0usize;
    let mut q_end = n;
    let mut d_sets: Vec<Vec<usize>> = Vec::with_capacity(r);
    let mut d_in_plus: Vec<bool> = Vec::with_capacity(r);
    for d in 0..r {
        let (pd, qd) = (pq.p[d], pq.q[d]);
        let ld = pd.min(qd);
        let p_set: Vec<usize> = (p_start + 1..=p_start + pd).collect();
        let q_set: Vec<usize> = (q_end - qd + 1..=q_end).collect();
        p_start += pd;
        q_end -= qd;
        // B_d = first l_d of P_d, C_d = last l_d of Q_d; D_d is what remains.
        if pd > qd {
            d_sets.push(p_set[ld..].to_vec());
            d_in_plus.push(true);
        } else {
            d_sets.push(q_set[..qd - ld].to_vec());
            d_in_plus.push(false);
        }
    }

    let mut nu = Vec::new();
    let mut chi = Vec::new();
    for (d, b) in blocks.iter().enumerate() {
        let ld = pq.p[d].min(pq.q[d]);
        for j in 0..ld {
            nu.push(b.m as i64 - 1 - 2 * j as i64);
            chi.push(b.k);
        }
    }

    // μ_Std: blockwise decreasing runs A_d − l_d, …, B_d + l_d.
    let mut mu = Vec::new();
    let mut chunk_of_position: Vec<usize> = Vec::new();
    for (d, b) in blocks.iter().enumerate() {
        let ld = pq.p[d].min(pq.q[d]);
        let len = b.m - 2 * ld;
        let mut t = b.a().twice() - 2 * ld as i64;
        for _ in 0..len {
            mu.push(HalfInteger::from_twice(t));
            chunk_of_position.push(d);
            t -= 2;
        }
    }

    // σ maps the c-th smallest element of D into D_{chunk(c)}; only the
    // P-or-Q side of the target matters for the sign.
    let cardinality = mu.len();
    let mut eps_minus = Vec::with_capacity(cardinality);
    for (idx, &d) in chunk_of_position.iter().enumerate() {
        let c = idx + 1; // 1-based position in D
        let target_in_plus = d_in_plus[d];
        debug_assert!({
            // σ sends the Δ_d chunk into D_d; membership in {1..p} is
            // constant on D_d.
            let all_le_p = d_sets[d].iter().all(|&x| x <= p_total);
            let all_gt_p = d_sets[d].iter().all(|&x| x > p_total);
            d_sets[d].is_empty() || (target_in_plus && all_le_p) || (!target_in_plus && all_gt_p)
        });
        let exp = if target_in_plus {
            cardinality as i64 + 1 - c as i64
        } else {
            cardinality as i64 - c as i64
        };
        eps_minus.push(if exp.rem_euclid(2) == 0 { 1 } else { -1 });
    }

    Ok(StandardModuleData {
        nu,
        chi,
        mu,
        eps_minus,
    })
}

/// Assemble the complete Langlands parameter from the standard-module data.
/// This retraces the construction independently of `complete_param_regular_real`.
pub fn complete_param_via_appendix_b(
    psi: &RealArthurParameter,
    pq: &PureFormLabel,
) -> Result<RealCompleteParameter> {
    let data = standard_module_data(psi, pq)?;
    let mut chars = Vec::with_capacity(psi.n());
    for (&k, &nu) in data.chi.iter().zip(&data.nu) {
        let t = HalfInteger::from_twice(k);
        let s = HalfInteger::from_twice(nu);
        chars.push((t, s));
        chars.push((t, -s));
    }
    let mut eps = RealCharacter::new();
    for (&t, &sign) in data.mu.iter().zip(&data.eps_minus) {
        chars.push((t, HalfInteger::ZERO));
        eps.insert(t, sign);
    }
    let phi = RealLParameter::new(chars)?;
    RealCompleteParameter::new(phi, eps, psi.parity())
}

/// One member of a regular real pure packet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealPacketMember {
    pub label: PacketLabel,
    pub pq: PureFormLabel,
    /// Aggregate signature (p, q) of the pure inner form carrying the member.
    pub pure_form: (usize, usize),
    pub epsilon: Vec<i8>,
    pub complete: RealCompleteParameter,
    /// ∏ε_i agrees with the central-sign law (−1)^{(p−q)/2} (n even) or
    /// (−1)^{(p−q+1)/2} (n odd).
    pub central_sign_consistent: bool,
}

/// Enumerate the full pure packet of a regular good-parity ψ: all
/// (p̲, q̲) with p_i + q_i = m_i.
pub fn packet_regular_real(psi: &RealArthurParameter) -> Result<Vec<RealPacketMember>> {
    require_regular(psi)?;
    let ms = block_sizes(psi);
    let n = psi.n();
    let mut members = Vec::new();
    let mut stack = vec![0usize; ms.len()];
    loop {
        let p: Vec<usize> = stack.clone();
        let q: Vec<usize> = p.iter().zip(&ms).map(|(&pi, &m)| m - pi).collect();
        let pq = PureFormLabel::new(p, q, &ms)?;
        let label = pq_to_leta(&pq, psi);
        let epsilon = epsilon_of_label(&label, psi);
        let complete = complete_param_regular_real(psi, &label)?;
        let (pa, qa) = pq.aggregate();
        let product: i8 = epsilon.iter().product();
        let law_exp = if n.is_multiple_of(2) {
            (pa as i64 - qa as i64) / 2
        } else {
            (pa as i64 - qa as i64 + 1) / 2
        };
        let law: i8 = if law_exp.rem_euclid(2) == 0 { 1 } else { -1 };
        members.push(RealPacketMember {
            label,
            pq,
            pure_form: (pa, qa),
            epsilon,
            complete,
            central_sign_consistent: product == law,
        });

        // next splitting
        let mut i = 0;
        loop {
            if i == ms.len() {
                members.sort_by(|x, y| (&x.label, &x.pq).cmp(&(&y.label, &y.pq)));
                return Ok(members);
            }
            if stack[i] < ms[i] {
                stack[i] += 1;
                break;
            }
            stack[i] = 0;
            i += 1;
        }
    }
}

/// Enumerate the canonical label classes (l̲, η̲) for block sizes ms.
pub fn enumerate_labels(ms: &[usize]) -> Vec<PacketLabel> {
    let mut per_block: Vec<Vec<(usize, i8)>> = Vec::with_capacity(ms.len());
    for &m in ms {
        let mut opts = Vec::new();
        for l in 0..=m / 2 {
            if 2 * l == m {
                opts.push((l, 1));
            } else {
                opts.push((l, 1));
                opts.push((l, -1));
            }
        }
        per_block.push(opts);
    }
    let mut labels = Vec::new();
    let mut idx = vec![0usize; ms.len()];
    loop {
        let l: Vec<usize> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| per_block[i][j].0)
            .collect();
        let eta: Vec<i8> = idx
            .iter()
            .enumerate()
            .map(|(i, &j)| per_block[i][j].1)
            .collect();
        labels.push(PacketLabel { l, eta });
        let mut i = 0;
        loop {
            if i == ms.len() {
                labels.sort();
                return labels;
            }
            if idx[i] + 1 < per_block[i].len() {
                idx[i] += 1;
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// One member of a p-adic DDR packet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicPacketMember {
    pub label: PacketLabel,
    pub epsilon: Vec<i8>,
    pub complete: PadicCompleteParameter,
}

fn epsilon_for_padic_label(label: &PacketLabel, bs: &[usize]) -> Vec<i8> {
    label
        .l
        .iter()
        .zip(&label.eta)
        .zip(bs)
        .map(|((&l, &eta), &b)| {
            let eta_pow: i8 = if b % 2 == 0 { 1 } else { eta };
            let d = (b - 2 * l) as i64;
            let exp = d * (d - 1) / 2;
            let sign: i8 = if exp % 2 == 0 { 1 } else { -1 };
            eta_pow * sign
        })
        .collect()
}

/// Moeglin's packet for a p-adic parameter with discrete diagonal
/// restriction. For H = Sp(N−1) only the labels with ∏ε_i = 1 occur.
pub fn packet_ddr_padic(psi: &PAdicArthurParameter) -> Result<Vec<PadicPacketMember>> {
    if !psi.is_ddr() {
        return Err(Error::Invalid(format!(
            "{psi:?} is not of discrete diagonal restriction"
        )));
    }
    let bs: Vec<usize> = psi.blocks().iter().map(|b| b.b).collect();
    let constrained = psi.has_epsilon_product_constraint();
    let mut members = Vec::new();
    for label in enumerate_labels(&bs) {
        let epsilon = epsilon_for_padic_label(&label, &bs);
        if constrained && epsilon.iter().product::<i8>() != 1 {
            continue;
        }
        let mut segments = Vec::new();
        let mut eps = PadicCharacter::new();
        for (i, blk) in psi.blocks().iter().enumerate() {
            let li = label.l[i];
            let half = HalfInteger::from_twice(blk.a as i64 - 1);
            for j in 0..li {
                let s = HalfInteger::from_twice(blk.b as i64 - 1 - 2 * j as i64);
                segments.push(Segment::new(s - half, s + half)?);
                segments.push(Segment::new(-s - half, -s + half)?);
            }
            let span = blk.b as i64 - 1 - 2 * li as i64;
            for j in 0..=span.max(-1) {
                let c = HalfInteger::from_twice(blk.b_tilde().twice() + 2 * li as i64 + 2 * j);
                segments.push(Segment::new(-c, c)?);
                let sign = if j % 2 == 0 {
                    label.eta[i]
                } else {
                    -label.eta[i]
                };
                eps.insert(c, sign);
            }
        }
        members.push(PadicPacketMember {
            label,
            epsilon,
            complete: PadicCompleteParameter {
                multisegment: Multisegment::new(segments),
                epsilon: eps,
            },
        });
    }
    members.sort_by(|x, y| x.label.cmp(&y.label));
    Ok(members)
}

/// The multisegment of the associated L-parameter φ_ψ of a p-adic Arthur
/// parameter: block (a, b) contributes |·|^{(b−1)/2 − j} ⊠ S_a for
/// j = 0..b−1.
pub fn associated_multisegment_padic(psi: &PAdicArthurParameter) -> Multisegment {
    let mut segments = Vec::new();
    for blk in psi.blocks() {
        let half = HalfInteger::from_twice(blk.a as i64 - 1);
        for j in 0..blk.b {
            let s = HalfInteger::from_twice(blk.b as i64 - 1 - 2 * j as i64);
            segments.push(Segment::new(s - half, s + half).expect("a ≥ 1"));
        }
    }
    Multisegment::new(segments)
}

/// Per-member outcome of the regular correspondence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberMatch {
    pub label: PacketLabel,
    pub pure_form: (usize, usize),
    pub matched: bool,
    /// The match needed the global η-flip (symplectic targets only).
    pub flipped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub target: TargetGroup,
    pub real_members: usize,
    pub padic_members: usize,
    pub members: Vec<MemberMatch>,
    pub mismatches: usize,
    /// ε of each real member equals the matched p-adic member's ε (for
    /// symplectic targets, as characters of A, i.e. up to the global flip).
    pub epsilon_compatible: bool,
}

/// Check ι̃(π(ψℝ; l̲,η̲)) = π(ψQp; l̲,η̲) member by member. Orthogonal
/// targets match label-for-label; for H = Sp(N−1) the p-adic label is the
/// η-flip representative satisfying ∏ε_i = 1.
pub fn verify_regular_correspondence(
    psi: &RealArthurParameter,
    delta: i64,
) -> Result<CorrespondenceReport> {
    let lambda = psi.inf_char();
    let tg = target_group(&lambda, delta)?;
    let psi_p = crate::correspond::psi_real_to_padic(psi, delta)?;

    if psi.parity() == Parity::Bad {
        // Singleton packets on both sides: the match is
        // ι(φ_ψℝ) = φ_ψQp with trivial component groups.
        let phi = crate::params::associated_l_param_real(psi);
        let m_real = iota_l(&phi, delta)?;
        let m_padic = associated_multisegment_padic(&psi_p);
        let matched = m_real == m_padic;
        return Ok(CorrespondenceReport {
            target: tg,
            real_members: 1,
            padic_members: 1,
            mismatches: usize::from(!matched),
            members: vec![MemberMatch {
                label: PacketLabel {
                    l: vec![],
                    eta: vec![],
                },
                pure_form: (0, 0),
                matched,
                flipped: false,
            }],
            epsilon_compatible: true,
        });
    }

    let real_packet = packet_regular_real(psi)?;
    let padic_packet = packet_ddr_padic(&psi_p)?;
    let padic_by_label: BTreeMap<&PacketLabel, &PadicPacketMember> =
        padic_packet.iter().map(|m| (&m.label, m)).collect();
    let ms = block_sizes(psi);

    let mut members = Vec::new();
    let mut mismatches = 0;
    let mut epsilon_compatible = true;
    for rm in &real_packet {
        let (target_label, flipped) = if tg.has_epsilon_product_constraint() {
            let eps: i8 = rm.epsilon.iter().product();
            if eps == 1 {
                (rm.label.clone(), false)
            } else {
                (rm.label.flipped(&ms), true)
            }
        } else {
            (rm.label.clone(), false)
        };
        let matched = match padic_by_label.get(&target_label) {
            None => false,
            Some(pm) => {
                let transferred =
                    transfer_character(&rm.complete.epsilon, &rm.complete.phi, delta, &tg)?;
                let m_real = iota_l(&rm.complete.phi, delta)?;
                let character_matches = if flipped {
                    transferred
                        .flipped_twin
                        .as_ref()
                        .map(|tw| *tw == pm.complete.epsilon)
                        .unwrap_or(false)
                } else {
                    transferred.signs == pm.complete.epsilon
                };
                // Endoscopic ε compatibility under the component bijection:
                // exact equality, or equality after the determinant-kernel
                // flip for symplectic targets.
                let pm_eps = &pm.epsilon;
                let eps_ok = if flipped {
                    rm.epsilon
                        .iter()
                        .zip(pm_eps)
                        .zip(psi_p.blocks())
                        .all(|((&a, &b), blk)| {
                            let kappa: i8 = if (blk.a * blk.b) % 2 == 1 { -1 } else { 1 };
                            a * kappa == b
                        })
                } else {
                    rm.epsilon == *pm_eps
                };
                if !eps_ok {
                    epsilon_compatible = false;
                }
                m_real == pm.complete.multisegment && character_matches
            }
        };
        if !matched {
            mismatches += 1;
        }
        members.push(MemberMatch {
            label: rm.label.clone(),
            pure_form: rm.pure_form,
            matched,
            flipped,
        });
    }

    Ok(CorrespondenceReport {
        target: tg,
        real_members: real_packet.len(),
        padic_members: padic_packet.len(),
        members,
        mismatches,
        epsilon_compatible,
    })
}

/// Minimal shifts t̲ making the intervals [B_i + t_i, A_i + t_i] disjoint
/// and strictly ordered; ψ≫ has blocks (k_i + 2t_i, m_i).
pub fn regularize(psi: &RealArthurParameter) -> (RealArthurParameter, Vec<i64>) {
    let blocks = psi.blocks();
    let r = blocks.len();
    let mut shifts = vec![0i64; r];
    for i in (0..r.saturating_sub(1)).rev() {
        let gap = blocks[i + 1].a().twice() + 2 * shifts[i + 1] + 2 - blocks[i].b().twice();
        shifts[i] = (gap / 2).max(0);
    }
    let shifted: Vec<RealBlock> = blocks
        .iter()
        .zip(&shifts)
        .map(|(b, &t)| RealBlock {
            k: b.k + 2 * t,
            m: b.m,
        })
        .collect();
    let psi_gg = RealArthurParameter::new(shifted, psi.parity())
        .expect("shifting by even integers preserves parity");
    (psi_gg, shifts)
}

/// ε descends along A_{ψ≫} → A_ψ iff it is constant on the fibers of the
/// block-merging map (blocks of ψ with equal (k, m) fuse into one
/// component).
pub fn descends_real(eps: &[i8], psi: &RealArthurParameter) -> Result<bool> {
    if eps.len() != psi.r() {
        return Err(Error::SizeMismatch(eps.len(), psi.r()));
    }
    let mut by_component: BTreeMap<(i64, usize), i8> = BTreeMap::new();
    for (b, &e) in psi.blocks().iter().zip(eps) {
        match by_component.get(&(b.k, b.m)) {
            None => {
                by_component.insert((b.k, b.m), e);
            }
            Some(&prev) if prev != e => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// The p-adic descent predicate: constant on fibers of the (a, b) block
/// merging, and ∏ε_i = 1 when H = Sp(N−1).
pub fn descends_padic(eps: &[i8], psi: &PAdicArthurParameter) -> Result<bool> {
    if eps.len() != psi.blocks().len() {
        return Err(Error::SizeMismatch(eps.len(), psi.blocks().len()));
    }
    if psi.has_epsilon_product_constraint() && eps.iter().product::<i8>() != 1 {
        return Ok(false);
    }
    let mut by_component: BTreeMap<(usize, usize), i8> = BTreeMap::new();
    for (b, &e) in psi.blocks().iter().zip(eps) {
        match by_component.get(&(b.a, b.b)) {
            None => {
                by_component.insert((b.a, b.b), e);
            }
            Some(&prev) if prev != e => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// One label of the singular-case bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularLabel {
    pub label: PacketLabel,
    pub epsilon: Vec<i8>,
    pub vanishes: bool,
    /// The real and p-adic nonvanishing predicates agree on this label.
    pub predicates_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularReport {
    pub psi_gg: RealArthurParameter,
    pub shifts: Vec<i64>,
    pub target: TargetGroup,
    pub labels: Vec<SingularLabel>,
}

/// Enumerate the labels of ψ≫ and mark which vanish, via the descent
/// predicates on both sides; the two verdicts are recorded and compared.
pub fn packet_singular_labels(psi: &RealArthurParameter, delta: i64) -> Result<SingularReport> {
    if psi.parity() != Parity::Good {
        return Err(Error::Invalid(
            "singular label bookkeeping needs good parity".into(),
        ));
    }
    let (psi_gg, shifts) = regularize(psi);
    let tg = target_group(&psi.inf_char(), delta)?;
    let psi_p = crate::correspond::psi_real_to_padic(psi, delta)?;
    let ms = block_sizes(&psi_gg);
    let mut labels = Vec::new();
    for label in enumerate_labels(&ms) {
        let epsilon = epsilon_of_label(&label, &psi_gg);
        let real_survives = descends_real(&epsilon, psi)?;
        let padic_survives = if tg.has_epsilon_product_constraint() {
            // The p-adic representative of the class is the η-flip with
            // ∏ε_i = 1.
            let rep_eps = if epsilon.iter().product::<i8>() == 1 {
                epsilon.clone()
            } else {
                epsilon_of_label(&label.flipped(&ms), &psi_gg)
            };
            descends_padic(&rep_eps, &psi_p)?
        } else {
            descends_padic(&epsilon, &psi_p)?
        };
        labels.push(SingularLabel {
            label,
            epsilon,
            vanishes: !real_survives,
            predicates_agree: real_survives == padic_survives,
        });
    }
    Ok(SingularReport {
        psi_gg,
        shifts,
        target: tg,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{DualType, PadicBlock};

    fn hi(t: i64) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    fn psi_good(blocks: &[(i64, usize)]) -> RealArthurParameter {
        RealArthurParameter::new(
            blocks.iter().map(|&(k, m)| RealBlock { k, m }).collect(),
            Parity::Good,
        )
        .unwrap()
    }

    #[test]
    fn pq_leta_examples() {
        let psi = psi_good(&[(2, 2)]);
        let ms = [2];

        let pq = PureFormLabel::new(vec![2], vec![0], &ms).unwrap();
        let label = pq_to_leta(&pq, &psi);
        assert_eq!(label, PacketLabel::new(vec![0], vec![-1], &ms).unwrap());
        assert_eq!(leta_to_pq(&label, &psi), pq);

        let pq = PureFormLabel::new(vec![1], vec![1], &ms).unwrap();
        let label = pq_to_leta(&pq, &psi);
        assert_eq!(label, PacketLabel::new(vec![1], vec![1], &ms).unwrap());
        assert_eq!(leta_to_pq(&label, &psi), pq);

        let pq = PureFormLabel::new(vec![0], vec![2], &ms).unwrap();
        let label = pq_to_leta(&pq, &psi);
        assert_eq!(label, PacketLabel::new(vec![0], vec![1], &ms).unwrap());
        assert_eq!(leta_to_pq(&label, &psi), pq);
    }

    #[test]
    fn epsilon_examples() {
        let psi = psi_good(&[(2, 2)]);
        let ms = [2];
        let l0_minus = PacketLabel::new(vec![0], vec![-1], &ms).unwrap();
        let l0_plus = PacketLabel::new(vec![0], vec![1], &ms).unwrap();
        let l1 = PacketLabel::new(vec![1], vec![1], &ms).unwrap();
        assert_eq!(epsilon_of_label(&l0_minus, &psi), vec![-1]);
        assert_eq!(epsilon_of_label(&l0_plus, &psi), vec![-1]);
        assert_eq!(epsilon_of_label(&l1, &psi), vec![1]);

        let pq = PureFormLabel::new(vec![1], vec![1], &ms).unwrap();
        assert_eq!(epsilon_q_form(&pq, &psi), vec![1]);
        let pq = PureFormLabel::new(vec![2], vec![0], &ms).unwrap();
        assert_eq!(epsilon_q_form(&pq, &psi), vec![-1]);
    }

    #[test]
    fn complete_param_examples() {
        let psi = psi_good(&[(2, 2)]);
        let ms = [2];

        let l1 = PacketLabel::new(vec![1], vec![1], &ms).unwrap();
        let cp = complete_param_regular_real(&psi, &l1).unwrap();
        let phi = RealLParameter::new(vec![(hi(2), hi(1)), (hi(2), hi(-1))]).unwrap();
        assert_eq!(cp.phi, phi);
        assert!(cp.epsilon.is_empty());

        let l0 = PacketLabel::new(vec![0], vec![1], &ms).unwrap();
        let cp = complete_param_regular_real(&psi, &l0).unwrap();
        let phi = RealLParameter::new(vec![(hi(1), hi(0)), (hi(3), hi(0))]).unwrap();
        assert_eq!(cp.phi, phi);
        assert_eq!(cp.epsilon[&hi(1)], 1);
        assert_eq!(cp.epsilon[&hi(3)], -1);

        let psi1 = psi_good(&[(0, 1)]);
        let l = PacketLabel::new(vec![0], vec![1], &[1]).unwrap();
        let cp = complete_param_regular_real(&psi1, &l).unwrap();
        assert_eq!(cp.phi.characters(), &[(hi(0), hi(0))]);
        assert_eq!(cp.epsilon[&hi(0)], 1);
    }

    #[test]
    fn standard_module_examples() {
        let psi = psi_good(&[(2, 2)]);
        let ms = [2];

        let pq = PureFormLabel::new(vec![1], vec![1], &ms).unwrap();
        let data = standard_module_data(&psi, &pq).unwrap();
        assert_eq!(data.nu, vec![1]);
        assert_eq!(data.chi, vec![2]);
        assert!(data.mu.is_empty());
        assert!(data.eps_minus.is_empty());

        let pq = PureFormLabel::new(vec![2], vec![0], &ms).unwrap();
        let data = standard_module_data(&psi, &pq).unwrap();
        assert!(data.nu.is_empty());
        assert_eq!(data.mu, vec![hi(3), hi(1)]);
        // alternating with η = −1 at the lower end B + l = 1/2
        assert_eq!(data.eps_minus, vec![1, -1]);

        let psi1 = psi_good(&[(0, 1)]);
        let pq = PureFormLabel::new(vec![1], vec![0], &[1]).unwrap();
        let data = standard_module_data(&psi1, &pq).unwrap();
        assert_eq!(data.mu, vec![hi(0)]);
        assert_eq!(data.eps_minus, vec![-1]);
    }

    #[test]
    fn appendix_b_agrees_with_theorem_route() {
        let psi = psi_good(&[(2, 2)]);
        let ms = [2];
        for p in 0..=2usize {
            let pq = PureFormLabel::new(vec![p], vec![2 - p], &ms).unwrap();
            let via_b = complete_param_via_appendix_b(&psi, &pq).unwrap();
            let via_thm = complete_param_regular_real(&psi, &pq_to_leta(&pq, &psi)).unwrap();
            assert_eq!(via_b, via_thm, "mismatch at p = {p}");
        }
    }

    #[test]
    fn packet_sizes() {
        assert_eq!(packet_regular_real(&psi_good(&[(2, 2)])).unwrap().len(), 3);
        assert_eq!(packet_regular_real(&psi_good(&[(0, 1)])).unwrap().len(), 2);
        assert_eq!(
            packet_regular_real(&psi_good(&[(6, 2), (2, 2)]))
                .unwrap()
                .len(),
            9
        );
        assert!(packet_regular_real(&psi_good(&[(4, 2), (2, 2)])).is_err());
        assert!(packet_regular_real(&psi_good(&[(2, 2)]))
            .unwrap()
            .iter()
            .all(|m| m.central_sign_consistent));
    }

    #[test]
    fn ddr_padic_packets() {
        // SO(7) target: no filter, 3 members
        let psi =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 2 }], DualType::Symp).unwrap();
        let packet = packet_ddr_padic(&psi).unwrap();
        assert_eq!(packet.len(), 3);
        let l1 = packet.iter().find(|m| m.label.l == vec![1]).unwrap();
        let expect = Multisegment::new(vec![
            Segment::new(hi(-1), hi(3)).unwrap(),
            Segment::new(hi(-3), hi(1)).unwrap(),
        ]);
        assert_eq!(l1.complete.multisegment, expect);
        assert!(l1.complete.epsilon.is_empty());

        // Sp(2) target: (3,1) block, a·b odd: only ε = +1 survives
        let psi =
            PAdicArthurParameter::new(vec![PadicBlock { a: 3, b: 1 }], DualType::Orth).unwrap();
        let packet = packet_ddr_padic(&psi).unwrap();
        assert_eq!(packet.len(), 1);
        assert_eq!(packet[0].label.eta, vec![1]);

        // O(N) target: (4,1) block wants a+b odd → dual symp, SO target...
        let psi =
            PAdicArthurParameter::new(vec![PadicBlock { a: 4, b: 1 }], DualType::Symp).unwrap();
        let packet = packet_ddr_padic(&psi).unwrap();
        assert_eq!(packet.len(), 2);
    }

    #[test]
    fn regular_correspondence_fixture() {
        let psi = psi_good(&[(2, 2)]);
        let report = verify_regular_correspondence(&psi, 1).unwrap();
        assert_eq!(report.real_members, 3);
        assert_eq!(report.padic_members, 3);
        assert_eq!(report.mismatches, 0);
        assert!(report.epsilon_compatible);
        assert!(report.members.iter().all(|m| !m.flipped));

        let psi = psi_good(&[(0, 1)]);
        let report = verify_regular_correspondence(&psi, 2).unwrap();
        assert_eq!(report.real_members, 2);
        assert_eq!(report.mismatches, 0);
    }

    #[test]
    fn symplectic_target_correspondence() {
        // n = 1, δ odd → H = Sp(N−1): filtered packet, flip matching
        let psi = psi_good(&[(0, 1)]);
        let report = verify_regular_correspondence(&psi, 3).unwrap();
        assert_eq!(report.target.family, crate::params::HFamily::Sp);
        assert_eq!(report.real_members, 2);
        assert_eq!(report.padic_members, 1);
        assert_eq!(report.mismatches, 0);
        assert_eq!(report.members.iter().filter(|m| m.flipped).count(), 1);
    }

    #[test]
    fn bad_parity_singleton_correspondence() {
        let psi = RealArthurParameter::new(
            vec![RealBlock { k: 2, m: 1 }, RealBlock { k: 0, m: 1 }],
            Parity::Bad,
        )
        .unwrap();
        let report = verify_regular_correspondence(&psi, 2).unwrap();
        assert_eq!(report.real_members, 1);
        assert_eq!(report.padic_members, 1);
        assert_eq!(report.mismatches, 0);
    }

    #[test]
    fn regularize_examples() {
        let psi = psi_good(&[(4, 2), (2, 2)]);
        let (gg, t) = regularize(&psi);
        assert_eq!(t, vec![1, 0]);
        assert_eq!(gg, psi_good(&[(6, 2), (2, 2)]));
        assert!(gg.is_ddr());

        let psi = psi_good(&[(6, 2), (2, 2)]);
        let (gg, t) = regularize(&psi);
        assert_eq!(t, vec![0, 0]);
        assert_eq!(gg, psi);

        // equal blocks need a shift of 2 to become disjoint
        let psi = psi_good(&[(2, 2), (2, 2)]);
        let (gg, t) = regularize(&psi);
        assert_eq!(t, vec![2, 0]);
        assert_eq!(gg, psi_good(&[(6, 2), (2, 2)]));
        assert!(gg.is_ddr());
        assert!(gg.inf_char().is_regular());
    }

    #[test]
    fn descends_examples() {
        let psi = psi_good(&[(2, 2), (2, 2)]);
        assert!(descends_real(&[-1, -1], &psi).unwrap());
        assert!(!descends_real(&[-1, 1], &psi).unwrap());

        let psi = psi_good(&[(6, 2), (2, 2)]);
        assert!(descends_real(&[-1, 1], &psi).unwrap());
    }

    #[test]
    fn singular_labels_example() {
        let psi = psi_good(&[(2, 2), (2, 2)]);
        let report = packet_singular_labels(&psi, 1).unwrap();
        assert!(report.labels.iter().all(|l| l.predicates_agree));
        // survivors are exactly the labels with l1 = l2
        for entry in &report.labels {
            let expect_survive = entry.label.l[0] == entry.label.l[1];
            assert_eq!(!entry.vanishes, expect_survive, "label {:?}", entry.label);
        }

        let psi = psi_good(&[(6, 2), (2, 2)]);
        let report = packet_singular_labels(&psi, 1).unwrap();
        assert!(report.labels.iter().all(|l| !l.vanishes));
    }
}
