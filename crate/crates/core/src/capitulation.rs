//! Extensions `L/K`: logarithmic ramification, the extension map `j` on
//! logarithmic divisors, and capitulation of logarithmic classes.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fixtures::{element, ExtensionFixture};
use crate::linalg::det;
use crate::logclass::{GroupInvariants, LogClassGroup, LogContext, LogDivisor};
use crate::numfield::{parse_field, AlgebraicNum, FieldCaps, NumberField, PrimeIdeal};
use crate::padic::{ell_pow, val_biguint, PadicScalar, DEFAULT_SLACK};
use crate::units_classes::{is_saturated, shell, SearchCaps};

/// A prime `P` of `L` above the prime `p` of `K`.
#[derive(Clone, Debug, Serialize)]
pub struct PlacePair {
    #[serde(serialize_with = "crate::ser::display")]
    pub base: PrimeIdeal,
    #[serde(serialize_with = "crate::ser::display")]
    pub ext: PrimeIdeal,
    /// `e~(P/p)`, exact.
    #[serde(serialize_with = "crate::ser::display")]
    pub e_tilde: BigRational,
    /// `f~(P/p) = deg_L(P) / deg_K(p)`.
    #[serde(serialize_with = "crate::ser::display")]
    pub f_tilde: PadicScalar,
}

/// `K ⊂ L` through an embedding of the generator of `K`.
#[derive(Debug)]
pub struct ExtensionData {
    base: LogContext,
    ext: LogContext,
    embedding: AlgebraicNum,
    powers: Vec<AlgebraicNum>,
    relative_degree: usize,
    matching: Mutex<BTreeMap<u64, Arc<Vec<PlacePair>>>>,
}

fn shell_search(l: &NumberField, f: &crate::poly::ZPoly, caps: &SearchCaps) -> Option<AlgebraicNum> {
    let n = l.degree();
    let mut seen = 0usize;
    for b in 1..=caps.max_box.min(4) {
        for c in shell(n, b) {
            seen += 1;
            if seen > caps.max_elements {
                return None;
            }
            let y = AlgebraicNum::from_ints(&c);
            if l.is_root(f, &y) {
                return Some(y);
            }
            let y = AlgebraicNum::from_ints(&c.iter().map(|x| -x).collect::<Vec<_>>());
            if l.is_root(f, &y) {
                return Some(y);
            }
        }
    }
    None
}

/// Builds `L/K` at `l` and precision `prec`. The embedding hint is the
/// image of the generator of `K`, checked by evaluation; without a hint a
/// bounded search is run.
pub fn build_extension(
    base: Arc<NumberField>,
    ext: Arc<NumberField>,
    ell: u64,
    prec: u32,
    hint: Option<AlgebraicNum>,
    caps: &SearchCaps,
) -> Result<ExtensionData> {
    let (m, n) = (base.degree(), ext.degree());
    if n % m != 0 {
        return Err(Error::Invalid(format!("degree {} does not divide degree {}", m, n)));
    }
    let embedding = match hint {
        Some(y) => {
            if y.num().len() != n || !ext.is_root(base.poly(), &y) {
                return Err(Error::Invalid("embedding hint is not a root of the base polynomial".into()));
            }
            y
        }
        None if m == 1 => {
            let c = &base.poly().coeffs()[0];
            ext.from_int(&-c)
        }
        None => shell_search(&ext, base.poly(), caps)
            .ok_or_else(|| Error::CapExceeded("no embedding found in the search box".into()))?,
    };
    let mut powers = vec![ext.one()];
    for i in 1..m {
        let next = ext.mul(&powers[i - 1], &embedding);
        powers.push(next);
    }
    let base_ctx = LogContext::with_caps(base, ell, prec, caps)?;
    let ext_ctx = LogContext::with_caps(ext, ell, prec, caps)?;
    Ok(ExtensionData {
        base: base_ctx,
        ext: ext_ctx,
        embedding,
        powers,
        relative_degree: n / m,
        matching: Mutex::new(BTreeMap::new()),
    })
}

/// Parses the two fields of a fixture and builds the extension.
pub fn extension_from_fixture(fx: &ExtensionFixture, prec: u32, caps: &SearchCaps) -> Result<ExtensionData> {
    let fc = FieldCaps::default();
    let k = Arc::new(parse_field(&fx.base.poly, &fc)?);
    let l = Arc::new(parse_field(&fx.ext.poly, &fc)?);
    let hint = element(&l, &fx.embedding)?;
    build_extension(k, l, fx.ell, prec, Some(hint), caps)
}

impl ExtensionData {
    pub fn base(&self) -> &LogContext {
        &self.base
    }

    pub fn ext(&self) -> &LogContext {
        &self.ext
    }

    pub fn embedding(&self) -> &AlgebraicNum {
        &self.embedding
    }

    pub fn relative_degree(&self) -> usize {
        self.relative_degree
    }

    /// Image of an element of `K` in `L`.
    pub fn embed(&self, x: &AlgebraicNum) -> AlgebraicNum {
        let k = self.base.field();
        let l = self.ext.field();
        let mut acc = AlgebraicNum::zero(l.degree());
        for (c, p) in k.to_power_basis(x).iter().zip(&self.powers) {
            if !c.is_zero() {
                let num = p.num().iter().map(|a| a * c.numer()).collect();
                let term = AlgebraicNum::new(num, p.den() * c.denom());
                acc = l.add(&acc, &term);
            }
        }
        acc
    }

    /// Pairs `P | p` above the rational prime `q`, with `e~` and `f~`.
    pub fn pairs_above(&self, q: u64) -> Result<Arc<Vec<PlacePair>>> {
        if let Some(v) = self.matching.lock().expect("matching cache").get(&q) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.match_prime(q)?);
        self.matching.lock().expect("matching cache").insert(q, v.clone());
        Ok(v)
    }

    fn match_prime(&self, q: u64) -> Result<Vec<PlacePair>> {
        let k = self.base.field();
        let l = self.ext.field();
        let base_primes = k.primes_above(q)?;
        let ext_primes = l.primes_above(q)?;
        let mut below: Vec<Option<usize>> = vec![None; ext_primes.len()];
        for (i, p) in base_primes.iter().enumerate() {
            let gens: Vec<AlgebraicNum> =
                p.hnf().iter().map(|r| self.embed(&AlgebraicNum::new(r.clone(), BigInt::one()))).collect();
            for (j, big) in ext_primes.iter().enumerate() {
                let mut inside = true;
                for g in &gens {
                    if !g.is_zero() && big.valuation(l, g)? < 1 {
                        inside = false;
                        break;
                    }
                }
                if inside {
                    if below[j].is_some() {
                        return Err(Error::Invalid(format!("{} lies above two primes of the base", big)));
                    }
                    below[j] = Some(i);
                }
            }
        }
        let mut out = Vec::new();
        for (j, big) in ext_primes.iter().enumerate() {
            let i = below[j].ok_or_else(|| Error::Invalid(format!("no prime of the base below {}", big)))?;
            out.push(self.make_pair(&base_primes[i], big)?);
        }
        Ok(out)
    }

    fn make_pair(&self, p: &PrimeIdeal, big: &PrimeIdeal) -> Result<PlacePair> {
        let kp = self.base.place(p)?;
        let lp = self.ext.place(big)?;
        let e_tilde = BigRational::new(BigInt::from(lp.e_tilde()), BigInt::from(kp.e_tilde()));
        let measured = self.witness_ratio(p, big)?;
        let exact = PadicScalar::from_rational(self.base.ell(), &e_tilde, self.base.work_precision());
        if !measured.agrees(&exact, DEFAULT_SLACK) {
            return Err(Error::Precision(format!("logarithmic ramification of {} over {} is inconsistent", big, p)));
        }
        let f_tilde = lp.degree().checked_div(kp.degree())?;
        Ok(PlacePair { base: p.clone(), ext: big.clone(), e_tilde, f_tilde })
    }

    /// `nu~_P(x) / nu~_p(x)` for two witnesses with `nu~_p(x)` a unit; the
    /// two ratios must agree.
    fn witness_ratio(&self, p: &PrimeIdeal, big: &PrimeIdeal) -> Result<PadicScalar> {
        let kp = self.base.place(p)?;
        let lp = self.ext.place(big)?;
        let k = self.base.field();
        let mut cands: Vec<AlgebraicNum> = kp.witnesses().to_vec();
        if let Some(x) = kp.witnesses().first() {
            let pp = k.from_int(&(BigInt::from(p.p()) * BigInt::from(p.p())));
            cands.push(k.add(x, &pp));
            for s in [1 + self.base.ell() as i64, 2, 3, 5, 7] {
                cands.push(k.mul(x, &k.from_i64(s)));
            }
        }
        let mut ratios: Vec<PadicScalar> = Vec::new();
        for x in &cands {
            let v = self.base.element_valuation(x, &kp)?;
            if !v.is_unit() {
                continue;
            }
            let w = self.ext.element_valuation(&self.embed(x), &lp)?;
            ratios.push(w.checked_div(&v)?);
            if ratios.len() == 2 {
                break;
            }
        }
        match ratios.as_slice() {
            [] | [_] => Err(Error::Precision(format!("fewer than two unit-valuation witnesses at {}", p))),
            [a, b, ..] => {
                if !a.agrees(b, DEFAULT_SLACK) {
                    return Err(Error::Precision(format!("witnesses disagree for {} over {}", big, p)));
                }
                Ok(a.clone())
            }
        }
    }

    /// `e~(P/p)`.
    pub fn log_ramification(&self, big: &PrimeIdeal, p: &PrimeIdeal) -> Result<BigRational> {
        if big.p() != p.p() {
            return Err(Error::Invalid(format!("{} does not lie above {}", big, p)));
        }
        let pairs = self.pairs_above(p.p())?;
        pairs
            .iter()
            .find(|x| &x.base == p && &x.ext == big)
            .map(|x| x.e_tilde.clone())
            .ok_or_else(|| Error::Invalid(format!("{} does not lie above {}", big, p)))
    }

    /// `j(d) = sum_p c_p sum_{P | p} e~(P/p) P`.
    pub fn extend_divisor(&self, d: &LogDivisor) -> Result<LogDivisor> {
        let ell = self.ext.ell();
        let work = self.ext.work_precision();
        let mut out = LogDivisor::zero(ell);
        for (p, c) in d.iter() {
            for pair in self.pairs_above(p.p())?.iter().filter(|x| &x.base == p) {
                let e = PadicScalar::from_rational(ell, &pair.e_tilde, work + 8);
                out.add_term(pair.ext.clone(), c.checked_mul(&e)?)?;
            }
        }
        Ok(out)
    }

    /// `sum_{P | p} e~ f~` for every prime `p` of `K` above `q`.
    pub fn degree_sums(&self, q: u64) -> Result<Vec<(PrimeIdeal, PadicScalar)>> {
        let pairs = self.pairs_above(q)?;
        let ell = self.ext.ell();
        let mut sums: BTreeMap<PrimeIdeal, PadicScalar> = BTreeMap::new();
        for x in pairs.iter() {
            let e = PadicScalar::from_rational(ell, &x.e_tilde, self.ext.work_precision() + 8);
            let t = e.checked_mul(&x.f_tilde)?;
            let s = match sums.remove(&x.base) {
                Some(s) => s.checked_add(&t)?,
                None => t,
            };
            sums.insert(x.base.clone(), s);
        }
        Ok(sums.into_iter().collect())
    }

    /// Logarithmic ramification over the primes dividing `l disc(L)` and
    /// the rational primes in `extra`.
    pub fn is_log_unramified(&self, extra: &[u64]) -> Result<UnramifiedReport> {
        let l = self.ext.field();
        let mut primes = crate::numfield::factor_primes(l.disc())?;
        primes.push(self.ext.ell());
        primes.extend_from_slice(extra);
        primes.sort_unstable();
        primes.dedup();
        let mut places = Vec::new();
        for q in primes {
            for x in self.pairs_above(q)?.iter() {
                places.push(PlaceVerdict {
                    base: x.base.to_string(),
                    ext: x.ext.to_string(),
                    e_tilde: x.e_tilde.to_string(),
                    unramified: x.e_tilde.is_one(),
                });
            }
        }
        let global = places.iter().all(|p| p.unramified);
        let k = self.base.field();
        let real_places = if self.ext.ell() == 2 && k.signature().0 > 0 {
            "unchecked"
        } else {
            "not_applicable"
        };
        Ok(UnramifiedReport { places, global, real_places })
    }

    /// Table `q -> [e~(P/p)]` over the primes dividing `l disc(L)`, in the
    /// order of the places of `K` and then of `L`.
    pub fn e_tilde_table(&self) -> Result<BTreeMap<u64, Vec<BigRational>>> {
        let mut primes = crate::numfield::factor_primes(self.ext.field().disc())?;
        primes.push(self.ext.ell());
        primes.sort_unstable();
        primes.dedup();
        let mut out = BTreeMap::new();
        for q in primes {
            out.insert(q, self.pairs_above(q)?.iter().map(|x| x.e_tilde.clone()).collect());
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PlaceVerdict {
    pub base: String,
    pub ext: String,
    pub e_tilde: String,
    pub unramified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnramifiedReport {
    pub places: Vec<PlaceVerdict>,
    pub global: bool,
    /// Status of the real places for `l = 2`.
    pub real_places: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Capitulates,
    Survives,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Capitulates => "capitulates",
            Verdict::Survives => "survives",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassResult {
    /// The class has order `l^exponent` in the base.
    pub exponent: u32,
    pub divisor: LogDivisor,
    pub image: LogDivisor,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    /// Number of torsion classes of the base that capitulate, when every
    /// test was conclusive.
    #[serde(serialize_with = "crate::ser::display_opt")]
    pub order: Option<BigUint>,
    /// Invariants `l^a_i` of the kernel, ascending.
    #[serde(serialize_with = "crate::ser::display_vec")]
    pub invariants: Vec<BigUint>,
    pub enumerated: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CapitulationReport {
    pub base: String,
    pub ext: String,
    pub ell: u64,
    pub precision: u32,
    pub relative_degree: usize,
    pub embedding: AlgebraicNum,
    pub e_tilde: Vec<PlacePair>,
    pub log_unramified: UnramifiedReport,
    pub base_log_class_group: GroupInvariants,
    pub ext_log_class_group: GroupInvariants,
    pub classes: Vec<ClassResult>,
    pub kernel: KernelReport,
    pub certified: bool,
}

/// Largest number of classes enumerated for the kernel order.
const KERNEL_ENUMERATION_CAP: usize = 1 << 14;

impl ExtensionData {
    fn divisor_over(&self, g: &LogClassGroup, coords: &[BigUint]) -> LogDivisor {
        let ell = g.ell();
        let work = g.context().work_precision();
        let mut d = LogDivisor::zero(ell);
        for (p, c) in g.places().iter().zip(coords) {
            if !c.is_zero() {
                d.add_term(p.prime().clone(), PadicScalar::from_residue(ell, c, work)).expect("same prime");
            }
        }
        d
    }

    /// Whether the class of `d` (a divisor of `K` supported on the places of
    /// the base group) is trivial in the logarithmic class group of `L`.
    pub fn class_verdict(&self, ext_group: &LogClassGroup, image: &LogDivisor) -> Result<Verdict> {
        let b = ext_group.coordinates(image).map_err(|e| match e {
            Error::Invalid(m) => Error::Unsupported(format!("rewriting over T_L: {}", m)),
            e => e,
        })?;
        let n = ext_group.precision();
        Ok(match ext_group.full().solve(&b) {
            crate::zlmod::Solve::Solution(_) => Verdict::Capitulates,
            crate::zlmod::Solve::Obstructed { found, .. } if found < n => Verdict::Survives,
            crate::zlmod::Solve::Obstructed { .. } => Verdict::Inconclusive,
        })
    }

    /// Images of the torsion of the logarithmic class group of `K` in that
    /// of `L`.
    pub fn capitulation_kernel(&self, base_group: &LogClassGroup, ext_group: &LogClassGroup) -> Result<CapitulationReport> {
        if base_group.field().poly() != self.base.field().poly() || ext_group.field().poly() != self.ext.field().poly() {
            return Err(Error::Invalid("class groups do not match the extension".into()));
        }
        let ell = base_group.ell();
        let gens = base_group.torsion_generators();
        let mut classes = Vec::new();
        for (a, coords) in &gens {
            let divisor = self.divisor_over(base_group, coords);
            let image = self.extend_divisor(&divisor)?;
            let verdict = self.class_verdict(ext_group, &image)?;
            classes.push(ClassResult { exponent: *a, divisor, image, verdict });
        }
        let kernel = self.kernel(base_group, ext_group, &gens)?;
        let mut e_tilde = Vec::new();
        let mut qs: Vec<u64> = base_group.places().iter().map(|p| p.prime().p()).collect();
        qs.push(ell);
        qs.extend(crate::numfield::factor_primes(self.ext.field().disc())?);
        qs.sort_unstable();
        qs.dedup();
        for q in &qs {
            e_tilde.extend(self.pairs_above(*q)?.iter().cloned());
        }
        Ok(CapitulationReport {
            base: self.base.field().poly().to_string(),
            ext: self.ext.field().poly().to_string(),
            ell,
            precision: base_group.precision(),
            relative_degree: self.relative_degree,
            embedding: self.embedding.clone(),
            e_tilde,
            log_unramified: self.is_log_unramified(&qs)?,
            base_log_class_group: base_group.degree_zero_invariants(),
            ext_log_class_group: ext_group.degree_zero_invariants(),
            classes,
            kernel,
            certified: base_group.certified() && ext_group.certified(),
        })
    }

    fn kernel(&self, base_group: &LogClassGroup, ext_group: &LogClassGroup, gens: &[(u32, Vec<BigUint>)]) -> Result<KernelReport> {
        let ell = base_group.ell();
        let work = base_group.context().work_precision();
        let modulus = ell_pow(ell, work);
        let orders: Vec<u64> = gens.iter().map(|(a, _)| ell.saturating_pow(*a)).collect();
        let total = orders.iter().try_fold(1u64, |acc, &o| acc.checked_mul(o));
        if total.is_none_or(|t| t as usize > KERNEL_ENUMERATION_CAP) {
            return Ok(KernelReport { order: None, invariants: vec![], enumerated: 0, inconclusive: 0 });
        }
        let t = base_group.places().len();
        let mut counter = vec![0u64; gens.len()];
        // Elements of the kernel by the largest l-power order dividing them.
        let mut members: Vec<Vec<u64>> = Vec::new();
        let mut enumerated = 0usize;
        let mut inconclusive = 0usize;
        loop {
            let mut coords = vec![BigUint::zero(); t];
            for (k, (_, g)) in counter.iter().zip(gens) {
                for (c, x) in coords.iter_mut().zip(g) {
                    *c = (&*c + x * BigUint::from(*k)) % &modulus;
                }
            }
            let image = self.extend_divisor(&self.divisor_over(base_group, &coords))?;
            match self.class_verdict(ext_group, &image)? {
                Verdict::Capitulates => members.push(counter.clone()),
                Verdict::Inconclusive => inconclusive += 1,
                Verdict::Survives => {}
            }
            enumerated += 1;
            let mut i = 0;
            loop {
                if i == counter.len() {
                    let order = (inconclusive == 0).then(|| BigUint::from(members.len()));
                    let invariants = if inconclusive == 0 { kernel_invariants(ell, &orders, &members) } else { vec![] };
                    return Ok(KernelReport { order, invariants, enumerated, inconclusive });
                }
                counter[i] += 1;
                if counter[i] < orders[i] {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
        }
    }
}

/// Invariants of a finite abelian `l`-group from its elements, written in
/// coordinates of `prod Z/orders_i`: the number of cyclic factors of order
/// at least `l^s` is `log_l |G[l^s]| - log_l |G[l^(s-1)]|`.
fn kernel_invariants(ell: u64, orders: &[u64], members: &[Vec<u64>]) -> Vec<BigUint> {
    let killed_by = |x: &[u64], s: u32| -> bool {
        let m = ell.pow(s);
        x.iter().zip(orders).all(|(c, o)| (c * m).is_multiple_of(*o))
    };
    let mut counts = vec![1usize];
    let mut s = 0u32;
    while counts.last() != Some(&members.len()) {
        s += 1;
        counts.push(members.iter().filter(|x| killed_by(x, s)).count());
    }
    let logs: Vec<u32> = counts.iter().map(|&c| val_biguint(ell, &BigUint::from(c))).collect();
    let mut out = Vec::new();
    for s in 1..logs.len() {
        let at_least_s = logs[s] - logs[s - 1];
        let at_least_next = if s + 1 < logs.len() { logs[s + 1] - logs[s] } else { 0 };
        for _ in 0..(at_least_s - at_least_next) {
            out.push(ell_pow(ell, s as u32));
        }
    }
    out.sort();
    out
}

/// Consistency checks on fixture-supplied data of `L`.
#[derive(Clone, Debug, Serialize)]
pub struct FixtureChecks {
    pub units_are_units: bool,
    /// `|det|` of the divisor matrix of the `S`-units equals `h_L`.
    pub regulator_index_matches: bool,
    pub l_saturated: bool,
}

impl FixtureChecks {
    pub fn all(&self) -> bool {
        self.units_are_units && self.regulator_index_matches && self.l_saturated
    }
}

/// Logarithmic class group of the extension field from fixture-supplied
/// `S`-units and units, with the places above `s_primes` as `T_L`.
pub fn ext_group_from_fixture(e: &ExtensionData, fx: &ExtensionFixture) -> Result<(LogClassGroup, FixtureChecks)> {
    let l = e.ext.field().clone();
    let ell = e.ext.ell();
    let missing = |what: &str| Error::Invalid(format!("fixture {} lacks {}", fx.name, what));
    let s_primes = fx.ext.s_primes.as_ref().ok_or_else(|| missing("s_primes"))?;
    let s_units = fx.ext.s_units.as_ref().ok_or_else(|| missing("s_units"))?;
    let units = fx.ext.units.as_ref().ok_or_else(|| missing("units"))?;
    let h = fx.ext.class_number.ok_or_else(|| missing("class_number"))?;
    let tu = fx.ext.torsion_unit.as_ref().ok_or_else(|| missing("torsion_unit"))?;
    let mut t: Vec<PrimeIdeal> = Vec::new();
    if !s_primes.contains(&ell) {
        t.extend(l.primes_above(ell)?.iter().cloned());
    }
    for &q in s_primes {
        t.extend(l.primes_above(q)?.iter().cloned());
    }
    let su: Vec<AlgebraicNum> = s_units.iter().map(|c| element(&l, c)).collect::<Result<_>>()?;
    let fu: Vec<AlgebraicNum> = units.iter().map(|c| element(&l, c)).collect::<Result<_>>()?;
    let zeta = element(&l, &tu.generator)?;

    let units_are_units = fu.iter().chain(std::iter::once(&zeta)).all(|u| l.norm(u).abs().is_one() && u.is_integral());
    let mut rows = Vec::new();
    for x in &su {
        let div = l.element_divisor(x)?;
        let mut row = vec![BigInt::zero(); t.len()];
        for (pr, v) in div {
            let i = t.iter().position(|q| q == &pr).ok_or_else(|| Error::Invalid(format!("S-unit with support {}", pr)))?;
            row[i] = BigInt::from(v);
        }
        rows.push(row);
    }
    let regulator_index_matches = rows.len() == t.len() && det(&rows).abs() == BigInt::from(h);
    let mut gens = su.clone();
    gens.extend(fu.iter().cloned());
    gens.push(zeta);
    let dim = t.len() + fu.len() + usize::from(tu.order % ell == 0);
    let l_saturated = is_saturated(&l, &gens, &t, ell, dim)?;
    let checks = FixtureChecks { units_are_units, regulator_index_matches, l_saturated };
    let mut witnesses = su;
    witnesses.extend(fu);
    let g = LogClassGroup::from_relations(e.ext.clone(), &t, witnesses, checks.all())?;
    Ok((g, checks))
}

#[cfg(test)]
mod tests;
