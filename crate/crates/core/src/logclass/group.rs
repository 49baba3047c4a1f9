use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use super::{LogContext, LogDivisor, LogPlace};
use crate::error::{Error, Result};
use crate::linalg::hnf;
use crate::numfield::{AlgebraicNum, NumberField, PrimeIdeal};
use crate::padic::ell_pow;
use crate::units_classes::{class_group, s_unit_relations, sunits_saturated, unit_group, ClassGroupData, SearchCaps};
use crate::zlmod::{quotient_presentation, ModuleDecomposition, ZlMatrix};

/// Invariants of a finitely presented `Z_l`-module, with summands of
/// exponent at least the reporting precision counted as free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupInvariants {
    pub free_at_precision: usize,
    /// `l^a_i`, ascending.
    #[serde(serialize_with = "crate::ser::display_vec")]
    pub torsion: Vec<BigUint>,
    pub torsion_exponents: Vec<u32>,
}

impl GroupInvariants {
    pub fn of(dec: &ModuleDecomposition, prec: u32) -> Self {
        let mut exps = Vec::new();
        let mut free = dec.free_rank();
        for a in dec.diagonal().iter().flatten() {
            if *a >= prec {
                free += 1;
            } else if *a > 0 {
                exps.push(*a);
            }
        }
        exps.sort_unstable();
        let torsion = exps.iter().map(|&a| ell_pow(dec.ell(), a)).collect();
        GroupInvariants { free_at_precision: free, torsion, torsion_exponents: exps }
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.iter().product()
    }
}

/// Free-at-precision summands of the degree-zero part. A positive count is
/// a candidate for a failure of the Gross-Kuz'min conjecture, never a proof
/// of one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrossKuzmin {
    pub free_in_degree_zero: usize,
    pub defect_candidates: usize,
    pub status: &'static str,
}

/// Presentation of the logarithmic class group `C_K` on a finite set `T`
/// of places containing every place above `l`.
#[derive(Clone, Debug)]
pub struct LogClassGroup {
    ctx: LogContext,
    places: Vec<LogPlace>,
    base_place: usize,
    witnesses: Vec<AlgebraicNum>,
    relations: ZlMatrix,
    full: ModuleDecomposition,
    degree_zero: ModuleDecomposition,
    epsilon_tilde: u32,
    certified: bool,
    class_group: Option<Vec<BigInt>>,
}

/// JSON form of a [`LogClassGroup`].
#[derive(Clone, Debug, Serialize)]
pub struct LogClassReport<'a> {
    pub field: String,
    pub ell: u64,
    pub precision: u32,
    #[serde(rename = "T")]
    pub places: &'a [LogPlace],
    pub base_place: String,
    pub relation_matrix: &'a ZlMatrix,
    pub full_decomposition: GroupInvariants,
    pub degree_zero_decomposition: GroupInvariants,
    pub epsilon_tilde: u32,
    pub gross_kuzmin_report: GrossKuzmin,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_opt_vec")]
    pub class_group: Option<&'a Vec<BigInt>>,
}

fn ser_opt_vec<S: serde::Serializer>(v: &Option<&Vec<BigInt>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let strings: Vec<String> = v.map(|v| v.iter().map(|x| x.to_string()).collect()).unwrap_or_default();
    strings.serialize(s)
}

impl LogClassGroup {
    /// Builds the presentation from witnesses whose divisors are supported
    /// on `t`. Their logarithmic divisors span the relations; the caller
    /// vouches (through `certified`) that they generate `Z_l ⊗ S`-units.
    pub fn from_relations(
        ctx: LogContext,
        t: &[PrimeIdeal],
        witnesses: Vec<AlgebraicNum>,
        certified: bool,
    ) -> Result<Self> {
        for place in ctx.ell_places() {
            if !t.contains(place.prime()) {
                return Err(Error::Invalid(format!("T must contain the place {} above l", place.prime())));
            }
        }
        let places: Vec<LogPlace> = t.iter().map(|pr| ctx.place(pr)).collect::<Result<_>>()?;
        let work = ctx.work_precision();
        let ell = ctx.ell();
        let columns: Vec<Vec<BigUint>> = witnesses
            .par_iter()
            .map(|x| -> Result<Vec<BigUint>> {
                let d = ctx.element_divisor(x)?;
                coordinates(&d, t, work)
            })
            .collect::<Result<_>>()?;
        let relations = ZlMatrix::from_columns(ell, work, t.len(), &columns);
        let full = quotient_presentation(t.len(), &relations)?;
        let base_place = places
            .iter()
            .enumerate()
            .min_by_key(|(i, p)| (p.degree().valuation().unwrap_or(i64::MAX), *i))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::Invalid("empty set of places".into()))?;
        let keep: Vec<usize> = (0..t.len()).filter(|&i| i != base_place).collect();
        let degree_zero = quotient_presentation(keep.len(), &relations.select_rows(&keep))?;
        let prec = ctx.precision();
        let epsilon_tilde = GroupInvariants::of(&full, prec).torsion_exponents.last().copied().unwrap_or(0);
        Ok(LogClassGroup {
            ctx,
            places,
            base_place,
            witnesses,
            relations,
            full,
            degree_zero,
            epsilon_tilde,
            certified,
            class_group: None,
        })
    }

    pub fn context(&self) -> &LogContext {
        &self.ctx
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.ctx.field()
    }

    pub fn ell(&self) -> u64 {
        self.ctx.ell()
    }

    pub fn precision(&self) -> u32 {
        self.ctx.precision()
    }

    /// The generating places `T`.
    pub fn places(&self) -> &[LogPlace] {
        &self.places
    }

    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.places.iter().map(|p| p.prime().clone()).collect()
    }

    /// Index in `T` of the place whose degree generates the degree image.
    pub fn base_place(&self) -> usize {
        self.base_place
    }

    pub fn witnesses(&self) -> &[AlgebraicNum] {
        &self.witnesses
    }

    /// One column per witness, one row per place of `T`.
    pub fn relations(&self) -> &ZlMatrix {
        &self.relations
    }

    /// Decomposition of `C_K`.
    pub fn full(&self) -> &ModuleDecomposition {
        &self.full
    }

    /// Decomposition of the degree-zero part, presented on the places of
    /// `T` other than the base place.
    pub fn degree_zero(&self) -> &ModuleDecomposition {
        &self.degree_zero
    }

    pub fn full_invariants(&self) -> GroupInvariants {
        GroupInvariants::of(&self.full, self.precision())
    }

    pub fn degree_zero_invariants(&self) -> GroupInvariants {
        GroupInvariants::of(&self.degree_zero, self.precision())
    }

    pub fn epsilon_tilde(&self) -> u32 {
        self.epsilon_tilde
    }

    pub fn certified(&self) -> bool {
        self.certified
    }

    pub fn gross_kuzmin(&self) -> GrossKuzmin {
        let free = self.degree_zero_invariants().free_at_precision;
        GrossKuzmin {
            free_in_degree_zero: free,
            defect_candidates: free,
            status: if free == 0 { "consistent" } else { "defect_candidate" },
        }
    }

    /// Coordinates over `T` of a divisor supported on `T`, modulo `l^work`.
    pub fn coordinates(&self, d: &LogDivisor) -> Result<Vec<BigUint>> {
        coordinates(d, &self.primes(), self.ctx.work_precision())
    }

    /// Torsion classes of `C_K` as `(exponent, divisor over T)`: the class
    /// of the divisor has order `l^exponent`.
    pub fn torsion_generators(&self) -> Vec<(u32, Vec<BigUint>)> {
        let prec = self.precision();
        self.full
            .diagonal()
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match a {
                Some(a) if *a > 0 && *a < prec => Some((*a, self.full.generator(i))),
                _ => None,
            })
            .collect()
    }

    /// Ordinary class group invariants, when known.
    pub fn class_group(&self) -> Option<&Vec<BigInt>> {
        self.class_group.as_ref()
    }

    pub fn report(&self) -> LogClassReport<'_> {
        LogClassReport {
            field: self.field().poly().to_string(),
            ell: self.ell(),
            precision: self.precision(),
            places: &self.places,
            base_place: self.places[self.base_place].prime().to_string(),
            relation_matrix: &self.relations,
            full_decomposition: self.full_invariants(),
            degree_zero_decomposition: self.degree_zero_invariants(),
            epsilon_tilde: self.epsilon_tilde,
            gross_kuzmin_report: self.gross_kuzmin(),
            certified: self.certified,
            class_group: self.class_group.as_ref(),
        }
    }
}

fn coordinates(d: &LogDivisor, t: &[PrimeIdeal], work: u32) -> Result<Vec<BigUint>> {
    let mut col = vec![BigUint::default(); t.len()];
    for (pr, c) in d.iter() {
        let i = t
            .iter()
            .position(|q| q == pr)
            .ok_or_else(|| Error::Invalid(format!("divisor not supported on T (prime {})", pr)))?;
        col[i] = c.residue(work)?;
    }
    Ok(col)
}

/// Places above `l`, then every prime above 2, 3, 5, ... (skipping `l`)
/// until their classes generate the class group.
pub(crate) fn generating_places(
    k: &NumberField,
    cg: &ClassGroupData,
    ell: u64,
    caps: &SearchCaps,
) -> Result<Vec<PrimeIdeal>> {
    let mut t: Vec<PrimeIdeal> = k.primes_above(ell)?.to_vec();
    let divs = &cg.elementary_divisors;
    let r = divs.len();
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut v = vec![BigInt::from(0); r];
            v[i] = divs[i].clone();
            v
        })
        .collect();
    let generates = |rows: &[Vec<BigInt>]| {
        let h = hnf(rows, r, None);
        h.len() == r && (0..r).all(|i| h[i][i].abs().is_one())
    };
    let mut p = 1u64;
    while r > 0 && !generates(&rows) {
        p += 1;
        if p > 100_000 {
            return Err(Error::CapExceeded("no generating set of primes".into()));
        }
        if p == ell || !num_prime::nt_funcs::is_prime64(p) {
            continue;
        }
        for pr in k.primes_above(p)?.iter() {
            rows.push(cg.class_of(k, &[(pr.clone(), 1)], caps)?);
            t.push(pr.clone());
        }
    }
    Ok(t)
}

/// Logarithmic class group of `K` at `l`, presented on the places above
/// `l` together with primes generating the class group.
pub fn log_class_group(k: Arc<NumberField>, ell: u64, prec: u32, caps: &SearchCaps) -> Result<LogClassGroup> {
    let ctx = LogContext::with_caps(k.clone(), ell, prec, caps)?;
    let cg = class_group(&k, caps)?;
    let units = match &cg.units {
        Some(u) => u.clone(),
        None => unit_group(&k)?,
    };
    let t = generating_places(&k, &cg, ell, caps)?;
    let basis = s_unit_relations(&k, &cg, &t, caps)?;
    let saturated = sunits_saturated(&k, &basis, &units, ell)?;
    let mut witnesses = basis.witnesses.clone();
    witnesses.extend(units.fundamental.iter().cloned());
    let mut g = LogClassGroup::from_relations(ctx, &t, witnesses, cg.certified && saturated)?;
    g.class_group = Some(cg.elementary_divisors.clone());
    Ok(g)
}
