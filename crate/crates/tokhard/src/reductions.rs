//! The four polynomial-time reductions and the two gap-instance
//! constructors, with the exact multiplicities and thresholds of the
//! hardness proofs.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

use crate::core::{
    Alphabet, CharString, CoreError, Dataset, GapInstance, Lit, Max2SatInstance, Mode,
    TokenisationInstance, UnaryLength, VcInstance,
};

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("target F = {f} exceeds the clause count {c}")]
    TargetTooLarge { f: u64, c: usize },
    #[error("gap construction needs C = 2016 * n_bk, got C = {c} with n_bk = {n_bk}")]
    NonConformingC { c: usize, n_bk: u64 },
    #[error("epsilon must lie in [0, 1/2], got {0}")]
    EpsilonRange(BigRational),
    #[error("threshold {0} is not an integer; choose epsilon so that epsilon * n_bk is integral")]
    NonIntegralDelta(BigRational),
    #[error("explicit emission requested but target {0} exceeds the cap {1}")]
    ExplicitCapExceeded(u64, u64),
    #[error("structural assert failed: {0}")]
    Structural(String),
}

/// Multiplicities of the two binary reductions. Each level is pinned to
/// its recurrence so a typo cannot silently skew every threshold.
#[derive(Clone, Copy, Debug)]
pub struct ReductionConstants {
    pub direct_c: u64,
    pub direct_c_prime: u64,
    pub direct_c_dprime: u64,
    pub bottomup_c: u64,
    pub bottomup_c_prime: u64,
    pub bottomup_c_dprime: u64,
    pub bottomup_c_tprime: u64,
}

pub const CONSTANTS: ReductionConstants = ReductionConstants {
    direct_c: 63,
    direct_c_prime: 21,
    direct_c_dprime: 7,
    bottomup_c: 575,
    bottomup_c_prime: 115,
    bottomup_c_dprime: 23,
    bottomup_c_tprime: 4,
};

impl ReductionConstants {
    /// Self-check run by every reduction constructor.
    pub fn verify(&self) {
        assert_eq!(self.direct_c_prime, 2 * (self.direct_c_dprime + 3) + 1);
        assert_eq!(self.direct_c, 2 * (self.direct_c_prime + self.direct_c_dprime + 3) + 1);
        assert_eq!(self.bottomup_c_dprime, 2 * (2 * self.bottomup_c_tprime + 3) + 1);
        assert_eq!(
            self.bottomup_c_prime,
            2 * (2 * self.bottomup_c_dprime + 2 * self.bottomup_c_tprime + 3) + 1
        );
        assert_eq!(
            self.bottomup_c,
            2 * (2 * self.bottomup_c_prime + 2 * self.bottomup_c_dprime + 2 * self.bottomup_c_tprime + 3) + 1
        );
    }
}

/// The variable gadgets: y_j = 0^(2j-1) and n_j = 0^(2j), 1-based j.
pub fn y_gadget(j: usize) -> CharString {
    assert!(j >= 1);
    CharString::repeated(0, 2 * j - 1)
}

pub fn n_gadget(j: usize) -> CharString {
    assert!(j >= 1);
    CharString::repeated(0, 2 * j)
}

/// The separator glyphs: '1' and "11".
pub fn sep1() -> CharString {
    CharString::new(vec![1])
}

pub fn sep2() -> CharString {
    CharString::new(vec![1, 1])
}

fn cat(parts: &[&CharString]) -> CharString {
    let mut out = CharString::empty();
    for p in parts {
        out = out.append(p);
    }
    out
}

fn literal_gadget(l: Lit) -> CharString {
    if l.negated {
        n_gadget(l.var + 1)
    } else {
        y_gadget(l.var + 1)
    }
}

fn check_target(inst: &Max2SatInstance) -> Result<(), ReductionError> {
    if inst.target as usize > inst.num_clauses() {
        return Err(ReductionError::TargetTooLarge {
            f: inst.target,
            c: inst.num_clauses(),
        });
    }
    Ok(())
}

/// 3-OCC-MAX2SAT to binary direct tokenisation.
/// kappa = 5J and delta = 329J + 3C - F.
pub fn reduce_max2sat_to_d2tok(
    inst: &Max2SatInstance,
) -> Result<TokenisationInstance, ReductionError> {
    CONSTANTS.verify();
    inst.validate()?;
    check_target(inst)?;
    let j_count = inst.num_vars;
    let c_count = inst.num_clauses();
    let k = &CONSTANTS;
    let s = sep1();

    let mut entries: Vec<(CharString, u64)> = Vec::new();
    for j in 1..=j_count {
        let y = y_gadget(j);
        let n = n_gadget(j);
        for d1 in [cat(&[&s, &y]), cat(&[&y, &s]), cat(&[&s, &n]), cat(&[&n, &s])] {
            entries.push((d1, k.direct_c));
        }
        entries.push((cat(&[&s, &y, &s]), k.direct_c_prime));
        entries.push((cat(&[&s, &n, &s]), k.direct_c_prime));
        entries.push((cat(&[&s, &y, &s, &n, &s]), k.direct_c_dprime));
    }
    for &(l1, l2) in &inst.clauses {
        let g1 = literal_gadget(l1);
        let g2 = literal_gadget(l2);
        entries.push((cat(&[&s, &g1, &s, &g2, &s]), 1));
    }

    let delta = 329 * j_count as u64 + 3 * c_count as u64 - inst.target;
    Ok(TokenisationInstance {
        dataset: Dataset::explicit(Alphabet::BINARY, entries)?,
        kappa: 5 * j_count,
        delta: BigUint::from(delta),
        mode: Mode::Direct,
    })
}

/// 3-OCC-MAX2SAT to binary bottom-up tokenisation.
/// kappa = 10J and delta = 5398J + 575 + 3C - F.
pub fn reduce_max2sat_to_b2tok(
    inst: &Max2SatInstance,
) -> Result<TokenisationInstance, ReductionError> {
    CONSTANTS.verify();
    inst.validate()?;
    check_target(inst)?;
    let j_count = inst.num_vars;
    let c_count = inst.num_clauses();
    let k = &CONSTANTS;
    let s = sep1();
    let ss = sep2();

    let mut entries: Vec<(CharString, u64)> = Vec::new();
    entries.push((ss.clone(), k.bottomup_c));
    for j in 1..=j_count {
        let y = y_gadget(j);
        let n = n_gadget(j);
        for d1 in [
            y.clone(),
            n.clone(),
            cat(&[&s, &y]),
            cat(&[&y, &s]),
            cat(&[&s, &n]),
            cat(&[&n, &s]),
            cat(&[&y, &ss]),
            cat(&[&ss, &n]),
        ] {
            entries.push((d1, k.bottomup_c));
        }
        for d2 in [
            cat(&[&s, &y, &s]),
            cat(&[&s, &n, &s]),
            cat(&[&s, &y, &ss]),
            cat(&[&ss, &n, &s]),
        ] {
            entries.push((d2, k.bottomup_c_prime));
        }
        for d3 in [cat(&[&s, &y, &s, &n, &s]), cat(&[&ss, &n, &s, &y, &ss])] {
            entries.push((d3, k.bottomup_c_dprime));
        }
        for d4 in [cat(&[&s, &n, &s, &y, &ss]), cat(&[&ss, &n, &s, &y, &s])] {
            entries.push((d4, k.bottomup_c_tprime));
        }
    }
    for &(l1, l2) in &inst.clauses {
        let (j1, j2) = (l1.var + 1, l2.var + 1);
        let clause_string = match (l1.negated, l2.negated) {
            (false, true) => cat(&[&s, &y_gadget(j1), &s, &n_gadget(j2), &s]),
            (true, false) => cat(&[&s, &y_gadget(j2), &s, &n_gadget(j1), &s]),
            (true, true) => cat(&[&ss, &n_gadget(j1), &s, &n_gadget(j2), &s]),
            (false, false) => cat(&[&s, &y_gadget(j1), &s, &y_gadget(j2), &ss]),
        };
        entries.push((clause_string, 1));
    }

    let delta = 5398 * j_count as u64 + 575 + 3 * c_count as u64 - inst.target;
    Ok(TokenisationInstance {
        dataset: Dataset::explicit(Alphabet::BINARY, entries)?,
        kappa: 10 * j_count,
        delta: BigUint::from(delta),
        mode: Mode::BottomUp,
    })
}

/// The numeric layout of the vertex-cover reduction: the digit base
/// N = (n+m+1)^4, the
/// vertex encodings enc(j) = j + j^2 N + j^3 N^2, and the offset B = N^4.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VcReductionLayout {
    pub n: usize,
    pub m: usize,
    pub base: BigUint,
    pub big_b: BigUint,
}

impl VcReductionLayout {
    pub fn new(n: usize, m: usize) -> VcReductionLayout {
        let base = BigUint::from(n + m + 1).pow(4);
        let big_b = base.pow(4);
        VcReductionLayout { n, m, base, big_b }
    }

    /// enc(j) for 1-based j.
    pub fn enc(&self, j: usize) -> BigUint {
        assert!(1 <= j && j <= self.n);
        let j = BigUint::from(j);
        &j + &j * &j * &self.base + &j * &j * &j * &self.base * &self.base
    }

    pub fn cover_length(&self, j: usize) -> BigUint {
        self.enc(j) + &self.big_b
    }

    /// Edge endpoints are 0-based, matching `VcInstance`.
    pub fn edge_length(&self, u: usize, v: usize) -> BigUint {
        self.enc(u + 1) + self.enc(v + 1) + &self.big_b
    }

    /// The five base-N digits of a length, least significant first.
    pub fn digits(&self, x: &BigUint) -> Vec<BigUint> {
        let mut digits = Vec::with_capacity(5);
        let mut x = x.clone();
        for _ in 0..5 {
            digits.push(&x % &self.base);
            x /= &self.base;
        }
        assert!(x.is_zero(), "length exceeds five base-N digits");
        digits
    }
}

/// Vertex cover to unary direct tokenisation in the
/// string-length representation. kappa = n + 1 + k, delta = 3n + 2m + 1 - k.
pub fn reduce_vc_to_d1tok(inst: &VcInstance) -> Result<TokenisationInstance, ReductionError> {
    inst.validate()?;
    let layout = VcReductionLayout::new(inst.n, inst.m());
    let mut entries: Vec<(UnaryLength, u64)> = Vec::new();
    for j in 1..=inst.n {
        entries.push((layout.enc(j), 1));
    }
    entries.push((layout.big_b.clone(), 1));
    for j in 1..=inst.n {
        entries.push((layout.cover_length(j), 1));
    }
    for &(u, v) in &inst.edges {
        entries.push((layout.edge_length(u, v), 1));
    }
    let dataset = Dataset::lengths(entries);
    verify_vc_reduction_structure(inst, &layout, &dataset)?;
    Ok(TokenisationInstance {
        dataset,
        kappa: inst.n + 1 + inst.k,
        delta: BigUint::from((3 * inst.n + 2 * inst.m() + 1 - inst.k) as u64),
        mode: Mode::Direct,
    })
}

/// Structural asserts on a vertex-cover-reduction dataset: all lengths pairwise
/// distinct, and every length exhibits its expected base-N digit pattern.
pub fn verify_vc_reduction_structure(
    inst: &VcInstance,
    layout: &VcReductionLayout,
    dataset: &Dataset,
) -> Result<(), ReductionError> {
    let lengths: Vec<BigUint> = dataset
        .entries()
        .iter()
        .map(|e| e.payload.length())
        .collect();
    let distinct: std::collections::BTreeSet<&BigUint> = lengths.iter().collect();
    if distinct.len() != lengths.len() {
        return Err(ReductionError::Structural(
            "emitted lengths are not pairwise distinct".into(),
        ));
    }

    let n = inst.n;
    let m = inst.m();
    let expect = |x: &BigUint, want: [BigUint; 5], what: &str| -> Result<(), ReductionError> {
        let digits = layout.digits(x);
        if digits.as_slice() != &want[..] {
            return Err(ReductionError::Structural(format!(
                "{} has digits {:?}, expected {:?}",
                what, digits, want
            )));
        }
        Ok(())
    };
    let zero = BigUint::zero;
    let bj = |j: usize| BigUint::from(j);

    let mut idx = 0;
    for j in 1..=n {
        expect(
            &lengths[idx],
            [bj(j), bj(j * j), bj(j * j * j), zero(), zero()],
            &format!("enc({})", j),
        )?;
        idx += 1;
    }
    expect(
        &lengths[idx],
        [zero(), zero(), zero(), zero(), BigUint::one()],
        "B",
    )?;
    idx += 1;
    for j in 1..=n {
        expect(
            &lengths[idx],
            [bj(j), bj(j * j), bj(j * j * j), zero(), BigUint::one()],
            &format!("cover({})", j),
        )?;
        idx += 1;
    }
    for &(u, v) in &inst.edges {
        let (a, b) = (u + 1, v + 1);
        expect(
            &lengths[idx],
            [
                bj(a + b),
                bj(a * a + b * b),
                bj(a * a * a + b * b * b),
                zero(),
                BigUint::one(),
            ],
            &format!("edge({},{})", a, b),
        )?;
        idx += 1;
    }
    debug_assert_eq!(idx, 2 * n + m + 1);
    Ok(())
}

/// Reduction 4: addition-chain feasibility to unary OPE tokenisation.
/// kappa = zeta and delta = |targets|. Targets up to `explicit_cap` are
/// emitted as explicit unary strings; larger ones use the length
/// representation (the numeric encoding that makes this hardness weak).
pub fn reduce_addchain_to_uope(
    inst: &crate::core::AddChainInstance,
) -> Result<TokenisationInstance, ReductionError> {
    reduce_addchain_to_uope_with_cap(inst, 10_000)
}

pub fn reduce_addchain_to_uope_with_cap(
    inst: &crate::core::AddChainInstance,
    explicit_cap: u64,
) -> Result<TokenisationInstance, ReductionError> {
    let explicit = inst.targets.iter().all(|&t| t <= explicit_cap);
    let dataset = if explicit {
        Dataset::explicit(
            Alphabet::UNARY,
            inst.targets
                .iter()
                .map(|&t| (CharString::repeated(0, t as usize), 1)),
        )?
    } else {
        Dataset::lengths(inst.targets.iter().map(|&t| (BigUint::from(t), 1)))
    };
    Ok(TokenisationInstance {
        dataset,
        kappa: inst.zeta,
        delta: BigUint::from(inst.targets.len()),
        mode: Mode::Ope,
    })
}

fn rational_u64(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn check_epsilon(epsilon: &BigRational) -> Result<(), ReductionError> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if epsilon.is_negative() || epsilon > &half {
        return Err(ReductionError::EpsilonRange(epsilon.clone()));
    }
    Ok(())
}

fn integral(x: &BigRational) -> Result<BigUint, ReductionError> {
    if !x.is_integer() || x.is_negative() {
        return Err(ReductionError::NonIntegralDelta(x.clone()));
    }
    Ok(x.to_integer()
        .to_biguint()
        .expect("checked nonnegative above"))
}

/// Gap construction over the direct reduction with the Berman-Karpinski
/// MAX2SAT thresholds
/// F- = (2011+eps) n_bk and F+ = (2012-eps) n_bk. Returns the gap instance
/// and the exact inapproximability ratio delta- / delta+, which simplifies
/// to (446213 - eps) / (446212 + eps).
pub fn make_gap_d2tok(
    inst: &Max2SatInstance,
    n_bk: u64,
    epsilon: &BigRational,
) -> Result<(GapInstance, BigRational), ReductionError> {
    check_epsilon(epsilon)?;
    if inst.num_clauses() as u64 != 2016 * n_bk {
        return Err(ReductionError::NonConformingC {
            c: inst.num_clauses(),
            n_bk,
        });
    }
    let base = reduce_max2sat_to_d2tok(&Max2SatInstance {
        target: 0,
        ..inst.clone()
    })?;
    let j = rational_u64(inst.num_vars as u64);
    let c = rational_u64(inst.num_clauses() as u64);
    let nb = rational_u64(n_bk);
    let f_minus = (rational_u64(2011) + epsilon) * &nb;
    let f_plus = (rational_u64(2012) - epsilon) * &nb;
    let body = rational_u64(329) * &j + rational_u64(3) * &c;
    let delta_minus = integral(&(&body - &f_minus))?;
    let delta_plus = integral(&(&body - &f_plus))?;
    let ratio = gap_ratio_d2tok(epsilon);
    debug_assert_eq!(
        ratio,
        BigRational::new(
            BigInt::from(delta_minus.clone()),
            BigInt::from(delta_plus.clone())
        )
    );
    Ok((
        GapInstance {
            dataset: base.dataset,
            kappa: base.kappa,
            mode: Mode::Direct,
            delta_minus,
            delta_plus,
        },
        ratio,
    ))
}

/// The direct-reduction gap ratio as a function of epsilon alone.
pub fn gap_ratio_d2tok(epsilon: &BigRational) -> BigRational {
    (rational_u64(446213) - epsilon) / (rational_u64(446212) + epsilon)
}

/// Gap construction over the bottom-up reduction. The returned ratio bound is the
/// large-J limit (7258949 - eps) / (7258948 + eps); the finite-instance
/// ratio delta- / delta+ is slightly smaller because of the constant 575
/// term but converges to the bound as J grows.
pub fn make_gap_b2tok(
    inst: &Max2SatInstance,
    n_bk: u64,
    epsilon: &BigRational,
) -> Result<(GapInstance, BigRational), ReductionError> {
    check_epsilon(epsilon)?;
    if inst.num_clauses() as u64 != 2016 * n_bk {
        return Err(ReductionError::NonConformingC {
            c: inst.num_clauses(),
            n_bk,
        });
    }
    let base = reduce_max2sat_to_b2tok(&Max2SatInstance {
        target: 0,
        ..inst.clone()
    })?;
    let j = rational_u64(inst.num_vars as u64);
    let c = rational_u64(inst.num_clauses() as u64);
    let nb = rational_u64(n_bk);
    let f_minus = (rational_u64(2011) + epsilon) * &nb;
    let f_plus = (rational_u64(2012) - epsilon) * &nb;
    let body = rational_u64(5398) * &j + rational_u64(575) + rational_u64(3) * &c;
    let delta_minus = integral(&(&body - &f_minus))?;
    let delta_plus = integral(&(&body - &f_plus))?;
    Ok((
        GapInstance {
            dataset: base.dataset,
            kappa: base.kappa,
            mode: Mode::BottomUp,
            delta_minus,
            delta_plus,
        },
        gap_ratio_b2tok(epsilon),
    ))
}

/// The bottom-up-reduction asymptotic gap ratio as a function of epsilon alone.
pub fn gap_ratio_b2tok(epsilon: &BigRational) -> BigRational {
    (rational_u64(7258949) - epsilon) / (rational_u64(7258948) + epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{big, Lit, Payload, Representation};
    use num::BigInt;
    use rand::SeedableRng;

    fn sample_j2() -> Max2SatInstance {
        Max2SatInstance::new(
            2,
            vec![
                (Lit::pos(0), Lit::pos(1)),
                (Lit::pos(0), Lit::neg(1)),
                (Lit::neg(0), Lit::pos(1)),
            ],
            1,
        )
        .unwrap()
    }

    #[test]
    fn constants_satisfy_recurrences() {
        CONSTANTS.verify();
    }

    #[test]
    fn d2tok_shape() {
        let inst = sample_j2();
        let red = reduce_max2sat_to_d2tok(&inst).unwrap();
        // 4 + 2 + 1 entries per variable plus one per clause.
        assert_eq!(red.dataset.len(), 7 * 2 + 3);
        assert_eq!(red.kappa, 10);
        assert_eq!(red.delta, big(329 * 2 + 3 * 3 - 1));
        assert_eq!(red.mode, Mode::Direct);
        // Multiplicity tiers appear exactly as constructed.
        let mults: Vec<u64> = red.dataset.entries().iter().map(|e| e.multiplicity).collect();
        assert_eq!(mults[..7], [63, 63, 63, 63, 21, 21, 7]);
        assert!(mults[14..].iter().all(|&m| m == 1));
    }

    #[test]
    fn b2tok_shape() {
        let inst = sample_j2();
        let red = reduce_max2sat_to_b2tok(&inst).unwrap();
        // The lone separator entry, 16 per variable, one per clause.
        assert_eq!(red.dataset.len(), 1 + 16 * 2 + 3);
        assert_eq!(red.kappa, 20);
        assert_eq!(red.delta, big(5398 * 2 + 575 + 3 * 3 - 1));
        assert_eq!(red.mode, Mode::BottomUp);
    }

    #[test]
    fn clause_entry_reflects_polarities() {
        let inst = sample_j2();
        let red = reduce_max2sat_to_d2tok(&inst).unwrap();
        // Clause (x1 v -x2) renders as 1 y1 1 n2 1.
        let entry = &red.dataset.entries()[15];
        let want = cat(&[&sep1(), &y_gadget(1), &sep1(), &n_gadget(2), &sep1()]);
        assert_eq!(entry.payload, Payload::Explicit(want));
    }

    #[test]
    fn vc_layout_triangle() {
        let tri = VcInstance::new(3, vec![(0, 1), (0, 2), (1, 2)], 2).unwrap();
        let red = reduce_vc_to_d1tok(&tri).unwrap();
        assert_eq!(red.dataset.len(), 3 + 1 + 3 + 3);
        assert_eq!(red.dataset.representation(), Representation::Length);
        assert_eq!(red.kappa, 3 + 1 + 2);
        assert_eq!(red.delta, big(3 * 3 + 2 * 3 + 1 - 2));
        let layout = VcReductionLayout::new(3, 3);
        assert_eq!(layout.base, big(7).pow(4));
        assert_eq!(layout.big_b, big(7).pow(16));
        // enc(j) = j + j^2 N + j^3 N^2 in base-N digits.
        let n = big(7).pow(4);
        assert_eq!(layout.enc(2), big(2) + big(4) * &n + big(8) * &n * &n);
    }

    #[test]
    fn vc_layout_accepts_all_small_graphs() {
        // Structure verification is part of construction; a healthy
        // instance of every shape up to n = 4 must pass.
        for n in 1..=4usize {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v));
                }
            }
            let inst = VcInstance::new(n, edges, n.min(2)).unwrap();
            reduce_vc_to_d1tok(&inst).unwrap();
        }
    }

    #[test]
    fn addchain_reduction_switches_representation() {
        let inst =
            crate::core::AddChainInstance::new([2u64, 3, 5].into_iter().collect(), 2).unwrap();
        let red = reduce_addchain_to_uope(&inst).unwrap();
        assert_eq!(red.dataset.representation(), Representation::Explicit);
        assert_eq!(red.kappa, 2);
        assert_eq!(red.delta, big(3));
        assert_eq!(red.mode, Mode::Ope);
        let red = reduce_addchain_to_uope_with_cap(&inst, 4).unwrap();
        assert_eq!(red.dataset.representation(), Representation::Length);
    }

    #[test]
    fn gap_ratio_values() {
        let zero = BigRational::from(BigInt::from(0));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            gap_ratio_d2tok(&zero),
            BigRational::new(BigInt::from(446213), BigInt::from(446212))
        );
        // At epsilon = 1/2 the two thresholds meet and the gap vanishes.
        assert_eq!(gap_ratio_d2tok(&half), BigRational::from(BigInt::from(1)));
        assert!(gap_ratio_d2tok(&zero) > gap_ratio_d2tok(&half));
        assert_eq!(
            gap_ratio_b2tok(&zero),
            BigRational::new(BigInt::from(7258949), BigInt::from(7258948))
        );
    }

    #[test]
    fn gap_instance_matches_ratio() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let inst = crate::harness::gen_max2sat(1344, &mut rng);
        let zero = BigRational::from(BigInt::from(0));
        let (gap, ratio) = make_gap_d2tok(&inst, 1, &zero).unwrap();
        assert_eq!(gap.delta_minus, big(329 * 1344 + 3 * 2016 - 2011));
        assert_eq!(gap.delta_plus, big(329 * 1344 + 3 * 2016 - 2012));
        assert_eq!(
            ratio,
            BigRational::new(
                BigInt::from(gap.delta_minus.clone()),
                BigInt::from(gap.delta_plus.clone())
            )
        );
        let (gap, _) = make_gap_b2tok(&inst, 1, &zero).unwrap();
        assert_eq!(gap.delta_minus, big(5398 * 1344 + 575 + 3 * 2016 - 2011));
        // Wrong clause count is rejected.
        let small = sample_j2();
        assert!(make_gap_d2tok(&small, 1, &zero).is_err());
        // Epsilon outside [0, 1/2] is rejected.
        let big_eps = BigRational::from(BigInt::from(1));
        assert!(make_gap_d2tok(&inst, 1, &big_eps).is_err());
    }
}
