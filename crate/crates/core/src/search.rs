//! Enumeration of rings, reproduction of finite classification lists and of
//! the table of smallest Ramanujan triples, and Kronecker-product bundles of
//! equienergetic graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_power, prime_powers_up_to};
use crate::classify::{
    is_isospectral, pair_report, spectral_predicates, triple_report, two_field_bound_radical,
    ClassificationReport, PairKind,
};
use crate::error::{Error, Result};
use crate::oracle::{role_spectrum, DEFAULT_BOUND};
use crate::par::Execution;
use crate::ring_model::{parse_ring_spec, Family, FamilyKind, LocalShape, RingSpec};
use crate::spectra::{closed_form_spectrum, Role};
use crate::spectrum::Spectrum;

const GOLDEN_TABLE: &str = include_str!("../golden/table1.csv");
const GOLDEN_LISTS: &str = include_str!("../golden/lists.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_vertices: u128,
    pub families: Vec<FamilyKind>,
    pub max_factors: usize,
    pub require_odd_type: bool,
    /// Keep one ring per shape `(r, m)` for every factor, preferring fields,
    /// then `Z/p^k`, `F_q[x]/(x^2)`, Galois rings, `F_q[x]/(x^3)`, shapes.
    pub dedup_by_shape: bool,
}

impl SearchConfig {
    /// All constructible families, any number of factors.
    pub fn new(max_vertices: u128) -> Self {
        SearchConfig {
            max_vertices,
            families: FamilyKind::CONSTRUCTIBLE.to_vec(),
            max_factors: 64,
            require_odd_type: false,
            dedup_by_shape: false,
        }
    }

    pub fn families(mut self, families: &[FamilyKind]) -> Self {
        self.families = families.to_vec();
        self
    }

    pub fn max_factors(mut self, s: usize) -> Self {
        self.max_factors = s;
        self
    }

    pub fn odd_type(mut self, on: bool) -> Self {
        self.require_odd_type = on;
        self
    }

    pub fn dedup(mut self, on: bool) -> Self {
        self.dedup_by_shape = on;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.max_vertices < 2 || self.max_factors < 1 {
            return Err(Error::Domain(format!(
                "search bounds need max_vertices >= 2 and max_factors >= 1, got {} and {}",
                self.max_vertices, self.max_factors
            )));
        }
        if self.max_vertices > u64::MAX as u128 {
            return Err(Error::Domain("max_vertices must fit in 64 bits".into()));
        }
        Ok(())
    }
}

fn family_rank(f: Family) -> u8 {
    match f {
        Family::Field => 0,
        Family::ZModPk => 1,
        Family::FieldModX2 => 2,
        Family::GaloisRing { .. } => 3,
        Family::FieldModX3 => 4,
        Family::Shape => 5,
    }
}

/// Local rings of order at most `max` from the given families, ascending by
/// `(r, m, preference)`.
pub fn local_candidates(max: u64, families: &[FamilyKind], dedup_by_shape: bool) -> Vec<LocalShape> {
    let want = |k: FamilyKind| families.contains(&k);
    let pp = prime_powers_up_to(max);
    let mut out = Vec::new();
    for &q in &pp {
        let (p, e) = prime_power(q).expect("prime power");
        if want(FamilyKind::Field) {
            out.extend(LocalShape::field(q));
        }
        if want(FamilyKind::ZModPk) && e >= 2 {
            out.extend(LocalShape::zmod_prime_power(q));
        }
        if want(FamilyKind::FieldModX2) && q.checked_mul(q).is_some_and(|r| r <= max) {
            out.extend(LocalShape::field_mod_x2(q));
        }
        if want(FamilyKind::FieldModX3) && q.checked_mul(q).and_then(|x| x.checked_mul(q)).is_some_and(|r| r <= max) {
            out.extend(LocalShape::field_mod_x3(q));
        }
        if want(FamilyKind::GaloisRing) && is_prime(p) {
            // GR(p^s, t) with s, t >= 2 has order p^(st) = q; q here is p^e.
            for s in 2..e {
                if e % s == 0 && e / s >= 2 {
                    out.extend(LocalShape::galois(p.pow(s), e / s));
                }
            }
        }
        if want(FamilyKind::Shape) {
            // (q^(j+1), q^j) for j >= 1.
            let mut m = q;
            while let Some(r) = m.checked_mul(q).filter(|&r| r <= max) {
                out.extend(LocalShape::shape(r, m));
                m *= q;
            }
        }
    }
    out.sort_by_key(|f| (f.r(), f.m(), family_rank(f.family()), *f));
    out.dedup();
    if dedup_by_shape {
        out.dedup_by_key(|f| (f.r(), f.m()));
    }
    out
}

fn sort_specs(specs: &mut [RingSpec]) {
    specs.sort_by_cached_key(|s| (s.order(), s.len(), s.to_string()));
}

/// Every ring in the configured range, ascending by `(|R|, s, label)`.
pub fn enumerate_specs(cfg: &SearchConfig) -> Result<Vec<RingSpec>> {
    cfg.validate()?;
    let max = cfg.max_vertices as u64;
    let locals = local_candidates(max, &cfg.families, cfg.dedup_by_shape);
    let mut out = Vec::new();
    let mut stack: Vec<LocalShape> = Vec::new();
    fn rec(
        locals: &[LocalShape],
        start: usize,
        order: u64,
        max: u64,
        max_factors: usize,
        stack: &mut Vec<LocalShape>,
        out: &mut Vec<RingSpec>,
    ) -> Result<()> {
        for i in start..locals.len() {
            let r = locals[i].r();
            let Some(next) = order.checked_mul(r).filter(|&n| n <= max) else {
                break;
            };
            stack.push(locals[i]);
            out.push(RingSpec::new(stack.clone())?);
            if stack.len() < max_factors {
                rec(locals, i, next, max, max_factors, stack, out)?;
            }
            stack.pop();
        }
        Ok(())
    }
    rec(&locals, 0, 1, max, cfg.max_factors, &mut stack, &mut out)?;
    if cfg.require_odd_type {
        out.retain(RingSpec::is_odd_type);
    }
    sort_specs(&mut out);
    Ok(out)
}

/// One row of the table of smallest equienergetic Ramanujan triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub label: String,
    pub v: u128,
    pub kappa: i128,
    pub kappabar: i128,
    pub energy: u128,
    /// Some pair among the three graphs is isospectral.
    pub iso: bool,
}

impl Table1Row {
    fn from_report(r: &ClassificationReport) -> Self {
        Table1Row {
            label: r.subject.to_string(),
            v: r.order,
            kappa: r.kappa,
            kappabar: r.kappabar,
            energy: r.energy,
            iso: r.predicate("isospectral_pair").unwrap_or(false),
        }
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.label,
            self.v,
            self.kappa,
            self.kappabar,
            self.energy,
            if self.iso { "*" } else { "" }
        )
    }
}

pub const TABLE1_HEADER: &str = "label,v,kappa,kappabar,energy,iso";

/// Rings with at most `max_vertices` elements, one per shape, whose three
/// graphs are mutually equienergetic and all Ramanujan.
pub fn table1_rows(max_vertices: u128, exec: Execution) -> Result<Vec<Table1Row>> {
    let specs = enumerate_specs(&SearchConfig::new(max_vertices).dedup(true))?;
    let reports = exec.try_map(&specs, triple_report)?;
    Ok(reports
        .iter()
        .filter(|r| r.predicate("equienergetic") == Some(true) && r.predicate("all_ramanujan") == Some(true))
        .map(Table1Row::from_report)
        .collect())
}

pub fn reproduce_table1() -> Result<Vec<Table1Row>> {
    table1_rows(169, Execution::default())
}

pub fn table_csv(rows: &[Table1Row]) -> String {
    let mut s = String::from(TABLE1_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv_line());
        s.push('\n');
    }
    s
}

/// The transcribed table, verbatim.
pub fn golden_table1_csv() -> &'static str {
    GOLDEN_TABLE
}

/// What a pair or triple search looks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// Equienergetic and non-isospectral.
    Pair(PairKind),
    /// As [`Relation::Pair`], with both graphs Ramanujan.
    RamanujanPair(PairKind),
    /// The complement of the difference graph is Ramanujan.
    RamanujanComplement,
    /// Equienergetic non-isospectral pair with the difference graph
    /// Ramanujan and its complement not.
    RamanujanDifferenceOnly,
    Triple,
    RamanujanTriple,
}

impl Relation {
    pub const NAMES: [&'static str; 8] = [
        "pair-plus",
        "pair-bar",
        "ram-pair-plus",
        "ram-pair-bar",
        "ram-complement",
        "ram-difference-only",
        "triple",
        "ram-triple",
    ];

    fn report(self, spec: &RingSpec) -> Result<ClassificationReport> {
        match self {
            Relation::Pair(k) | Relation::RamanujanPair(k) => pair_report(spec, k),
            Relation::RamanujanComplement | Relation::RamanujanDifferenceOnly => {
                pair_report(spec, PairKind::GrVsGrBar)
            }
            Relation::Triple | Relation::RamanujanTriple => triple_report(spec),
        }
    }

    fn holds(self, r: &ClassificationReport) -> bool {
        let p = |name: &str| r.predicate(name) == Some(true);
        match self {
            Relation::Pair(_) | Relation::Triple => r.verdict,
            Relation::RamanujanPair(_) => r.verdict && p("ramanujan_pair"),
            Relation::RamanujanComplement => p("grbar.ramanujan"),
            Relation::RamanujanDifferenceOnly => r.verdict && p("gr.ramanujan") && !p("grbar.ramanujan"),
            Relation::RamanujanTriple => p("ramanujan_triple"),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Relation::Pair(PairKind::GrVsGrPlus) => 0,
            Relation::Pair(PairKind::GrVsGrBar) => 1,
            Relation::RamanujanPair(PairKind::GrVsGrPlus) => 2,
            Relation::RamanujanPair(PairKind::GrVsGrBar) => 3,
            Relation::RamanujanComplement => 4,
            Relation::RamanujanDifferenceOnly => 5,
            Relation::Triple => 6,
            Relation::RamanujanTriple => 7,
        };
        f.write_str(Relation::NAMES[i])
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Relation::Pair(PairKind::GrVsGrPlus),
            Relation::Pair(PairKind::GrVsGrBar),
            Relation::RamanujanPair(PairKind::GrVsGrPlus),
            Relation::RamanujanPair(PairKind::GrVsGrBar),
            Relation::RamanujanComplement,
            Relation::RamanujanDifferenceOnly,
            Relation::Triple,
            Relation::RamanujanTriple,
        ];
        all.into_iter()
            .find(|r| r.to_string() == s)
            .ok_or_else(|| Error::Domain(format!("unknown relation {s:?}; expected one of {:?}", Relation::NAMES)))
    }
}

/// Reports for every enumerated ring satisfying the relation.
pub fn find_pairs(cfg: &SearchConfig, relation: Relation, exec: Execution) -> Result<Vec<ClassificationReport>> {
    let specs = enumerate_specs(cfg)?;
    filter_specs(&specs, relation, exec)
}

fn filter_specs(specs: &[RingSpec], relation: Relation, exec: Execution) -> Result<Vec<ClassificationReport>> {
    let reports = exec.try_map(specs, |s| relation.report(s))?;
    Ok(reports.into_iter().filter(|r| relation.holds(r)).collect())
}

/// Two different rings of the same order whose graphs of one role are
/// equienergetic and not isospectral.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossPair {
    pub a: RingSpec,
    pub b: RingSpec,
    pub role: Role,
    pub energy: u128,
}

pub fn cross_ring_pairs(cfg: &SearchConfig, role: Role, exec: Execution) -> Result<Vec<CrossPair>> {
    if role == Role::GrMinus {
        return Err(Error::Domain("cross-ring search needs a closed-form role".into()));
    }
    let specs = enumerate_specs(cfg)?;
    let spectra = exec.try_map(&specs, |s| closed_form_spectrum(s, role))?;
    let mut groups: BTreeMap<(u128, u128), Vec<usize>> = BTreeMap::new();
    for (i, s) in spectra.iter().enumerate() {
        groups.entry((s.n(), s.energy()?)).or_default().push(i);
    }
    let mut out = Vec::new();
    for ((_, energy), idx) in groups {
        for (x, &i) in idx.iter().enumerate() {
            for &j in &idx[x + 1..] {
                if !is_isospectral(&spectra[i], &spectra[j]).value {
                    out.push(CrossPair { a: specs[i].clone(), b: specs[j].clone(), role, energy });
                }
            }
        }
    }
    Ok(out)
}

/// A transcribed list compared with what the enumeration finds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ListCheck {
    pub name: String,
    pub domain: String,
    pub expected: Vec<String>,
    pub found: Vec<String>,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
}

impl ListCheck {
    fn new(name: &str, domain: impl Into<String>, expected: Vec<String>, found: Vec<String>) -> Self {
        let e: BTreeSet<&String> = expected.iter().collect();
        let f: BTreeSet<&String> = found.iter().collect();
        ListCheck {
            name: name.to_string(),
            domain: domain.into(),
            missing: expected.iter().filter(|x| !f.contains(x)).cloned().collect(),
            extra: found.iter().filter(|x| !e.contains(x)).cloned().collect(),
            expected,
            found,
        }
    }

    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

#[derive(Deserialize)]
struct GoldenLists {
    complement_equienergetic_three_fields: Vec<String>,
    odd_type_ramanujan_sum_pairs: Vec<String>,
    two_field_bound_examples: BTreeMap<u64, Vec<u64>>,
    ramanujan_complement_pairs: Vec<String>,
    ramanujan_complement_field_pairs: Vec<String>,
    ramanujan_triples_non_local: Vec<String>,
    ramanujan_triples_cyclic_odd: Vec<String>,
    ramanujan_triples_prime_field_pairs: Vec<String>,
    ramanujan_difference_non_ramanujan_complement: Vec<String>,
}

fn canonical(labels: &[String]) -> Result<Vec<String>> {
    let mut specs = labels.iter().map(|l| parse_ring_spec(l)).collect::<Result<Vec<_>>>()?;
    sort_specs(&mut specs);
    Ok(specs.iter().map(ToString::to_string).collect())
}

fn labels(reports: &[ClassificationReport]) -> Vec<String> {
    let mut specs: Vec<RingSpec> = reports.iter().map(|r| r.subject.clone()).collect();
    sort_specs(&mut specs);
    specs.iter().map(ToString::to_string).collect()
}

fn field_pairs(max_q: u64, min_q: u64) -> Result<Vec<RingSpec>> {
    let pp = prime_powers_up_to(max_q);
    let mut out = Vec::new();
    for (i, &a) in pp.iter().enumerate() {
        for &b in &pp[i..] {
            if a >= min_q {
                out.push(RingSpec::fields(&[a, b])?);
            }
        }
    }
    Ok(out)
}

/// Every transcribed finite list, re-derived by enumeration.
pub fn reproduce_lists(exec: Execution) -> Result<Vec<ListCheck>> {
    let golden: GoldenLists =
        serde_json::from_str(GOLDEN_LISTS).map_err(|e| Error::Domain(format!("golden lists: {e}")))?;
    let mut checks = Vec::new();

    // Three fields equienergetic with the complement.
    let pp = prime_powers_up_to(100);
    let mut triples = Vec::new();
    for (i, &a) in pp.iter().enumerate() {
        for (j, &b) in pp.iter().enumerate().skip(i) {
            for &c in &pp[j..] {
                triples.push(RingSpec::fields(&[a, b, c])?);
            }
        }
    }
    let hits = exec.try_map(&triples, |s| {
        Ok(pair_report(s, PairKind::GrVsGrBar)?.predicate("gr-grbar.equienergetic") == Some(true))
    })?;
    let found: Vec<RingSpec> = triples.into_iter().zip(hits).filter(|(_, h)| *h).map(|(s, _)| s).collect();
    checks.push(ListCheck::new(
        "complement-equienergetic-three-fields",
        "three fields, each of order <= 100",
        canonical(&golden.complement_equienergetic_three_fields)?,
        found.iter().map(ToString::to_string).collect(),
    ));

    // Odd-type rings with a Ramanujan sum/difference pair.
    let bound = 2500u128;
    let specs: Vec<RingSpec> = enumerate_specs(&SearchConfig::new(bound).odd_type(true))?
        .into_iter()
        .filter(|s| !s.is_local())
        .collect();
    let found = filter_specs(&specs, Relation::RamanujanPair(PairKind::GrVsGrPlus), exec)?;
    let mut expected = golden.odd_type_ramanujan_sum_pairs.clone();
    for s in field_pairs(bound as u64, 3)? {
        let q = s.field_orders().unwrap();
        if s.order() <= bound && (q[0] % 2 == 1 || q[1] % 2 == 1) && two_field_bound_radical(q[0], q[1]) {
            expected.push(s.to_string());
        }
    }
    let mut expected = canonical(&expected)?;
    expected.dedup();
    checks.push(ListCheck::new(
        "odd-type-ramanujan-sum-pairs",
        "non-local odd-type constructible rings of order <= 2500",
        expected,
        labels(&found),
    ));

    // The two-field bound against spectral Ramanujan verdicts.
    let pairs = field_pairs(50, 3)?;
    let found = filter_specs(&pairs, Relation::RamanujanPair(PairKind::GrVsGrBar), exec)?;
    let found_gr: Vec<String> = {
        let reports = exec.try_map(&pairs, |s| pair_report(s, PairKind::GrVsGrPlus))?;
        labels(&reports.into_iter().filter(|r| r.predicate("gr.ramanujan") == Some(true)).collect::<Vec<_>>())
    };
    let _ = found;
    let expected: Vec<String> = pairs
        .iter()
        .filter(|s| {
            let q = s.field_orders().unwrap();
            two_field_bound_radical(q[0], q[1])
        })
        .map(ToString::to_string)
        .collect();
    checks.push(ListCheck::new(
        "two-field-bound-solutions",
        "field pairs 3 <= q1 <= q2 <= 50",
        expected,
        found_gr,
    ));

    for (&q1, qs) in &golden.two_field_bound_examples {
        let candidates: Vec<RingSpec> = prime_powers_up_to(50)
            .into_iter()
            .filter(|&q| q >= q1 && (q % 2 == 1 || q1 % 2 == 1))
            .map(|q| RingSpec::fields(&[q1, q]))
            .collect::<Result<_>>()?;
        let found = filter_specs(&candidates, Relation::RamanujanPair(PairKind::GrVsGrPlus), exec)?;
        let expected: Vec<String> = qs.iter().map(|q| format!("F{q1}xF{q}")).collect();
        checks.push(ListCheck::new(
            &format!("two-field-bound-examples-F{q1}"),
            format!("F{q1} x F_q, q1 <= q <= 50, one order odd"),
            canonical(&expected)?,
            labels(&found),
        ));
    }

    let two_factor: Vec<RingSpec> = enumerate_specs(&SearchConfig::new(400).max_factors(2))?
        .into_iter()
        .filter(|s| s.len() == 2)
        .collect();
    let found = filter_specs(&two_factor, Relation::RamanujanPair(PairKind::GrVsGrBar), exec)?;
    checks.push(ListCheck::new(
        "ramanujan-complement-pairs",
        "two local factors, order <= 400",
        canonical(&golden.ramanujan_complement_pairs)?,
        labels(&found),
    ));

    let fields2: Vec<RingSpec> = two_factor.iter().filter(|s| s.is_field_product()).cloned().collect();
    let found = filter_specs(&fields2, Relation::RamanujanComplement, exec)?;
    checks.push(ListCheck::new(
        "ramanujan-complement-field-pairs",
        "two fields, order <= 400",
        canonical(&golden.ramanujan_complement_field_pairs)?,
        labels(&found),
    ));

    let non_local: Vec<RingSpec> =
        enumerate_specs(&SearchConfig::new(400))?.into_iter().filter(|s| !s.is_local()).collect();
    let found = filter_specs(&non_local, Relation::RamanujanTriple, exec)?;
    checks.push(ListCheck::new(
        "ramanujan-triples-non-local",
        "non-local constructible rings of order <= 400",
        canonical(&golden.ramanujan_triples_non_local)?,
        labels(&found),
    ));

    let cyclic: Vec<RingSpec> = (3..=200u64)
        .step_by(2)
        .map(|n| parse_ring_spec(&format!("Z{n}")))
        .collect::<Result<_>>()?;
    let found = filter_specs(&cyclic, Relation::RamanujanTriple, exec)?;
    checks.push(ListCheck::new(
        "ramanujan-triples-cyclic-odd",
        "Z_n, n odd, 3 <= n <= 200",
        canonical(&golden.ramanujan_triples_cyclic_odd)?,
        labels(&found),
    ));

    let primes: Vec<u64> = (2..=50).filter(|&p| is_prime(p)).collect();
    let mut prime_pairs = Vec::new();
    for (i, &a) in primes.iter().enumerate() {
        for &b in &primes[i..] {
            prime_pairs.push(RingSpec::fields(&[a, b])?);
        }
    }
    let found = filter_specs(&prime_pairs, Relation::RamanujanTriple, exec)?;
    checks.push(ListCheck::new(
        "ramanujan-triples-prime-field-pairs",
        "Z_p x Z_p', primes p <= p' <= 50",
        canonical(&golden.ramanujan_triples_prime_field_pairs)?,
        labels(&found),
    ));

    let locals = local_candidates(400, &[FamilyKind::Shape, FamilyKind::Field], true);
    let local_specs: Vec<RingSpec> = locals.iter().map(|&f| RingSpec::local(f)).collect();
    let found = filter_specs(&local_specs, Relation::RamanujanTriple, exec)?;
    let expected: Vec<String> = locals
        .iter()
        .filter(|f| f.m() * f.m() == f.r() && f.r() % 2 == 1)
        .map(|f| RingSpec::local(*f).to_string())
        .collect();
    checks.push(ListCheck::new(
        "ramanujan-triples-local",
        "local shapes of order <= 400; expected r = m^2 odd",
        expected,
        labels(&found),
    ));

    let small: Vec<RingSpec> = field_pairs(13, 3)?
        .into_iter()
        .filter(|s| s.field_orders().unwrap()[0] <= 5)
        .collect();
    let found = filter_specs(&small, Relation::RamanujanDifferenceOnly, exec)?;
    checks.push(ListCheck::new(
        "ramanujan-difference-non-ramanujan-complement",
        "F_q1 x F_q2, 3 <= q1 <= 5, q1 <= q2 <= 13",
        canonical(&golden.ramanujan_difference_non_ramanujan_complement)?,
        labels(&found),
    ));
    Ok(checks)
}

/// One tensor factor of a bundle member: a role graph over a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Factor {
    pub spec: RingSpec,
    pub role: Role,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.role, self.spec)
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (open, close) = match (s.find('('), s.rfind(')')) {
            (Some(o), Some(c)) if c == s.len() - 1 && o < c => (o, c),
            _ => return Err(Error::Domain(format!("expected role(ring), got {s:?}"))),
        };
        Ok(Factor { role: s[..open].trim().parse()?, spec: parse_ring_spec(&s[open + 1..close])? })
    }
}

fn factor(spec: &RingSpec, role: Role) -> Factor {
    Factor { spec: spec.clone(), role }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BundleMember {
    pub label: String,
    pub factors: Vec<Factor>,
    pub spectrum: Spectrum,
    pub energy: u128,
    /// Number of loops.
    pub trace: i128,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphBundle {
    pub name: String,
    pub n: u128,
    pub members: Vec<BundleMember>,
    /// Members dropped because they are the same graph as an earlier one.
    pub duplicates_removed: usize,
    pub all_equienergetic: bool,
    pub isospectral_pairs: Vec<(usize, usize)>,
    pub theorem_tags: Vec<String>,
}

impl GraphBundle {
    pub fn distinct_spectra(&self) -> usize {
        self.members.iter().map(|m| &m.spectrum).collect::<std::collections::HashSet<_>>().len()
    }
}

/// A description of a bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// Difference and sum graphs of `F9 x R` and `F3 x F3 x R`, for `R`
    /// with `2m_i < r_i` in every factor.
    FourTuple(RingSpec),
    /// Difference and sum graphs of `F9` and `F3 x F3`, tensored with a
    /// connected non-bipartite simple graph.
    FourTupleTensor(Factor),
    /// `F3 x F3` and `F9` against the four role graphs of `F4 x F5`.
    Sixteen,
    /// Role-pair products over the three splittings of `F3 x F4 x F5 x F7`.
    Mixed,
    Custom(Vec<Vec<Factor>>),
}

impl FromStr for Recipe {
    type Err = Error;

    /// `four-tuple:R`, `tensor:role(R)`, `sixteen`, `mixed`, or members
    /// separated by `;` with factors `role(R)` joined by `*`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(r) = s.strip_prefix("four-tuple:") {
            return Ok(Recipe::FourTuple(parse_ring_spec(r)?));
        }
        if let Some(f) = s.strip_prefix("tensor:") {
            return Ok(Recipe::FourTupleTensor(f.parse()?));
        }
        match s {
            "sixteen" => return Ok(Recipe::Sixteen),
            "mixed" => return Ok(Recipe::Mixed),
            _ => {}
        }
        let members = s
            .split(';')
            .map(|m| m.split('*').map(str::parse).collect::<Result<Vec<Factor>>>())
            .collect::<Result<Vec<_>>>()?;
        if members.is_empty() || members.iter().any(Vec::is_empty) {
            return Err(Error::Domain(format!("empty bundle recipe {s:?}")));
        }
        Ok(Recipe::Custom(members))
    }
}

/// Graphs that are literally equal share a key: a tensor product of
/// difference graphs is the difference graph of the product ring, and the
/// same holds for sum graphs.
fn member_key(factors: &[Factor]) -> Result<(Option<RingSpec>, Option<RingSpec>, Vec<Factor>)> {
    let mut gr: Option<RingSpec> = None;
    let mut plus: Option<RingSpec> = None;
    let mut rest = Vec::new();
    for f in factors {
        let slot = match f.role {
            Role::Gr => &mut gr,
            Role::GrPlus => &mut plus,
            _ => {
                rest.push(f.clone());
                continue;
            }
        };
        *slot = Some(match slot.take() {
            None => f.spec.clone(),
            Some(s) => s.product(&f.spec)?,
        });
    }
    rest.sort();
    Ok((gr, plus, rest))
}

fn label(factors: &[Factor]) -> String {
    factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("*")
}

fn f9() -> RingSpec {
    RingSpec::fields(&[9]).expect("F9")
}

fn f3f3() -> RingSpec {
    RingSpec::fields(&[3, 3]).expect("F3xF3")
}

impl Recipe {
    fn name(&self) -> String {
        match self {
            Recipe::FourTuple(r) => format!("four-tuple:{r}"),
            Recipe::FourTupleTensor(f) => format!("tensor:{f}"),
            Recipe::Sixteen => "sixteen".into(),
            Recipe::Mixed => "mixed".into(),
            Recipe::Custom(m) => m.iter().map(|f| label(f)).collect::<Vec<_>>().join(";"),
        }
    }

    fn members(&self) -> Result<Vec<Vec<Factor>>> {
        Ok(match self {
            Recipe::FourTuple(r) => {
                if let Some(f) = r.factors().iter().find(|f| 2 * f.m() >= f.r()) {
                    return Err(Error::Bundle(format!("factor {f} of {r} has 2m >= r")));
                }
                let a = f9().product(r)?;
                let b = f3f3().product(r)?;
                vec![
                    vec![factor(&a, Role::Gr)],
                    vec![factor(&a, Role::GrPlus)],
                    vec![factor(&b, Role::Gr)],
                    vec![factor(&b, Role::GrPlus)],
                ]
            }
            Recipe::FourTupleTensor(g) => {
                let s = role_spectrum(&g.spec, g.role, DEFAULT_BOUND)?;
                let p = spectral_predicates(&s);
                if !p.connected || p.bipartite || s.trace()? != 0 {
                    return Err(Error::Bundle(format!(
                        "{g} must be connected, non-bipartite and loopless"
                    )));
                }
                [f9(), f3f3()]
                    .iter()
                    .flat_map(|r| [Role::Gr, Role::GrPlus].map(|role| vec![factor(r, role), g.clone()]))
                    .collect()
            }
            Recipe::Sixteen => {
                let gamma = RingSpec::fields(&[4, 5])?;
                let mut out = Vec::new();
                for left in [Role::Gr, Role::GrPlus] {
                    for right in [Role::Gr, Role::GrPlus, Role::GrBar, Role::GrMinus] {
                        for ring in [f3f3(), f9()] {
                            out.push(vec![factor(&ring, left), factor(&gamma, right)]);
                        }
                    }
                }
                out
            }
            Recipe::Mixed => {
                let mut out = Vec::new();
                for (a, b) in [([3, 4], [5, 7]), ([3, 5], [4, 7]), ([3, 7], [4, 5])] {
                    let (ra, rb) = (RingSpec::fields(&a)?, RingSpec::fields(&b)?);
                    for x in [Role::Gr, Role::GrPlus, Role::GrBar] {
                        for y in [Role::Gr, Role::GrPlus, Role::GrBar] {
                            out.push(vec![factor(&ra, x), factor(&rb, y)]);
                        }
                    }
                }
                out
            }
            Recipe::Custom(m) => m.clone(),
        })
    }
}

fn tag_check(tags: &mut Vec<String>, subject: &str, tag: &str, ok: bool, detail: String) -> Result<()> {
    if !ok {
        return Err(Error::TheoremMismatch { subject: subject.to_string(), detail: format!("{tag}: {detail}") });
    }
    tags.push(tag.to_string());
    Ok(())
}

/// Builds the members by Kronecker products of role spectra, removes
/// repeated graphs and computes all pairwise relations.
pub fn build_bundle(recipe: &Recipe) -> Result<GraphBundle> {
    let name = recipe.name();
    let mut seen = BTreeSet::new();
    let mut members: Vec<BundleMember> = Vec::new();
    let mut duplicates_removed = 0;
    let mut cache: BTreeMap<Factor, Spectrum> = BTreeMap::new();
    for factors in recipe.members()? {
        if !seen.insert(member_key(&factors)?) {
            duplicates_removed += 1;
            continue;
        }
        let mut s = Spectrum::unit();
        for f in &factors {
            if !cache.contains_key(f) {
                cache.insert(f.clone(), role_spectrum(&f.spec, f.role, DEFAULT_BOUND)?);
            }
            s = s.kron(&cache[f])?;
        }
        members.push(BundleMember {
            label: label(&factors),
            energy: s.energy()?,
            trace: s.trace()?,
            factors,
            spectrum: s,
        });
    }
    let n = members[0].spectrum.n();
    if let Some(m) = members.iter().find(|m| m.spectrum.n() != n) {
        return Err(Error::Bundle(format!(
            "mixed vertex counts: {} has {} vertices, {} has {n}",
            m.label,
            m.spectrum.n(),
            members[0].label
        )));
    }
    let all_equienergetic = members.iter().all(|m| m.energy == members[0].energy);
    let mut isospectral_pairs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].spectrum == members[j].spectrum {
                isospectral_pairs.push((i, j));
            }
        }
    }
    let mut tags = Vec::new();
    match recipe {
        Recipe::FourTuple(r) => {
            let odd = r.order() % 2 == 1;
            for m in &members {
                let has_loops = m.trace > 0;
                let expected = odd && m.factors[0].role == Role::GrPlus;
                tag_check(
                    &mut tags,
                    &name,
                    "four-tuple-loops",
                    has_loops == expected,
                    format!("{} has trace {}, expected loops: {expected}", m.label, m.trace),
                )?;
            }
        }
        Recipe::Sixteen => {
            let loops: Vec<usize> = (0..members.len()).filter(|&i| members[i].trace > 0).collect();
            let k = members.len();
            tag_check(
                &mut tags,
                &name,
                "sixteen-tuple-loops",
                loops == [k - 2, k - 1],
                format!("members with loops: {loops:?}"),
            )?;
        }
        _ => {}
    }
    Ok(GraphBundle {
        name,
        n,
        members,
        duplicates_removed,
        all_equienergetic,
        isospectral_pairs,
        theorem_tags: tags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels_of(specs: &[RingSpec]) -> Vec<String> {
        specs.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn field_enumeration() {
        let cfg = SearchConfig::new(9).families(&[FamilyKind::Field]).max_factors(2);
        let got = labels_of(&enumerate_specs(&cfg).unwrap());
        for want in ["F9", "F3xF3", "F2xF4"] {
            assert!(got.contains(&want.to_string()), "{want} in {got:?}");
        }
        assert!(!got.contains(&"Z9".to_string()));
    }

    #[test]
    fn small_enumeration() {
        let got = labels_of(&enumerate_specs(&SearchConfig::new(4)).unwrap());
        assert_eq!(got, ["F2", "F3", "F2[x]/(x^2)", "F4", "Z4", "F2xF2"]);
    }

    #[test]
    fn odd_type_filter() {
        let cfg = SearchConfig::new(16).families(&[FamilyKind::Field]).odd_type(true);
        let got = labels_of(&enumerate_specs(&cfg).unwrap());
        assert!(got.contains(&"F3xF4".to_string()));
        assert!(!got.contains(&"F4xF4".to_string()));
    }

    #[test]
    fn enumeration_is_deterministic_and_unique() {
        let cfg = SearchConfig::new(200);
        let a = enumerate_specs(&cfg).unwrap();
        assert_eq!(a, enumerate_specs(&cfg).unwrap());
        let set: BTreeSet<_> = a.iter().collect();
        assert_eq!(set.len(), a.len());
        assert!(a.windows(2).all(|w| (w[0].order(), w[0].len()) <= (w[1].order(), w[1].len())));
    }

    #[test]
    fn shape_dedup_prefers_simple_families() {
        let l = local_candidates(81, &FamilyKind::CONSTRUCTIBLE, true);
        let names: Vec<String> = l.iter().map(ToString::to_string).collect();
        assert!(names.contains(&"Z9".to_string()));
        assert!(names.contains(&"F9[x]/(x^2)".to_string()));
        assert!(!names.contains(&"F3[x]/(x^2)".to_string()));
    }

    #[test]
    fn table_rows_have_the_right_columns() {
        let rows = table1_rows(25, Execution::Sequential).unwrap();
        let z9 = rows.iter().find(|r| r.label == "Z9").unwrap();
        assert_eq!(z9.csv_line(), "Z9,9,6,2,12,");
        let f33 = rows.iter().find(|r| r.label == "F3xF3").unwrap();
        assert_eq!(f33.csv_line(), "F3xF3,9,4,4,16,*");
    }

    #[test]
    fn cross_ring_energy() {
        let cfg = SearchConfig::new(9).families(&[FamilyKind::Field]);
        let pairs = cross_ring_pairs(&cfg, Role::Gr, Execution::Sequential).unwrap();
        assert!(pairs.iter().any(|p| p.a.to_string() == "F9" && p.b.to_string() == "F3xF3"
            || p.b.to_string() == "F9" && p.a.to_string() == "F3xF3"));
    }

    #[test]
    fn four_tuple_over_f5() {
        let b = build_bundle(&"four-tuple:F5".parse().unwrap()).unwrap();
        assert_eq!(b.n, 45);
        assert_eq!(b.members.len(), 4);
        assert!(b.all_equienergetic && b.isospectral_pairs.is_empty());
    }

    #[test]
    fn mixed_bundle() {
        let b = build_bundle(&Recipe::Mixed).unwrap();
        assert_eq!((b.n, b.members.len(), b.duplicates_removed), (420, 23, 4));
        assert!(b.all_equienergetic && b.members[0].energy == 2304);
        assert!(b.isospectral_pairs.is_empty());
    }

    #[test]
    fn mixed_counts_rejected() {
        let r: Recipe = "gr(F9);gr(F4)".parse().unwrap();
        assert!(matches!(build_bundle(&r), Err(Error::Bundle(_))));
    }

    #[test]
    fn recipe_parsing() {
        let r: Recipe = "gr(F9)*grplus(F3[x]/(x^2))".parse().unwrap();
        assert_eq!(r.name(), "gr(F9)*grplus(F3[x]/(x^2))");
        assert!("bogus".parse::<Recipe>().is_err());
        assert!(matches!(
            build_bundle(&"four-tuple:F2".parse().unwrap()),
            Err(Error::Bundle(_))
        ));
    }
}
