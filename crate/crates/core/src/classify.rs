//! Pairwise relations, spectral predicates, Ramanujan and strongly regular
//! tests, and the classification criteria for pairs and triples of graphs
//! over a ring.
//!
//! Every report computes its verdicts from spectra and then evaluates the
//! closed-form criteria that are supposed to predict them. A disagreement is
//! returned as [`Error::TheoremMismatch`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring_model::RingSpec;
use crate::spectra::{closed_form_spectrum, Role};
use crate::spectrum::Spectrum;

/// Tag attached when two spectra have different vertex counts.
pub const DIFFERENT_ORDER: &str = "different-order";
/// Flag on reports about rings given only by shape.
pub const NO_ORACLE_WITNESS: &str = "no-oracle-witness";

/// A boolean verdict with the data that proves it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub value: bool,
    pub witness: String,
}

impl Predicate {
    fn new(value: bool, witness: impl Into<String>) -> Self {
        Predicate { value, witness: witness.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnergyComparison {
    pub equienergetic: bool,
    pub energy_a: u128,
    pub energy_b: u128,
    pub same_order: bool,
    pub tag: Option<&'static str>,
}

/// Equal energies. Graphs of different orders are still compared but tagged.
pub fn is_equienergetic(a: &Spectrum, b: &Spectrum) -> Result<EnergyComparison> {
    let (energy_a, energy_b) = (a.energy()?, b.energy()?);
    let same_order = a.n() == b.n();
    Ok(EnergyComparison {
        equienergetic: energy_a == energy_b,
        energy_a,
        energy_b,
        same_order,
        tag: (!same_order).then_some(DIFFERENT_ORDER),
    })
}

/// Exact multiset equality; the witness names the first difference.
pub fn is_isospectral(a: &Spectrum, b: &Spectrum) -> Predicate {
    if a.n() != b.n() {
        return Predicate::new(false, format!("orders {} and {}", a.n(), b.n()));
    }
    if a.degree() != b.degree() {
        return Predicate::new(false, format!("degrees {} and {}", a.degree(), b.degree()));
    }
    let first_diff = a
        .iter()
        .chain(b.iter())
        .map(|(l, _)| l)
        .filter(|&l| a.multiplicity(l) != b.multiplicity(l))
        .max();
    match first_diff {
        None => Predicate::new(true, format!("both spectra are {a}")),
        Some(l) => Predicate::new(
            false,
            format!("eigenvalue {l} has multiplicities {} and {}", a.multiplicity(l), b.multiplicity(l)),
        ),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPredicates {
    pub connected: bool,
    pub bipartite: bool,
    pub integral: bool,
    pub strongly_almost_symmetric: bool,
}

/// Structure read off the spectrum of a regular graph.
///
/// `bipartite` means `-k` is an eigenvalue, so a loop counts as an odd cycle.
pub fn spectral_predicates(s: &Spectrum) -> SpectralPredicates {
    let k = s.degree();
    let symmetric_rest = s
        .iter()
        .filter(|&(l, _)| l.abs() != k)
        .all(|(l, m)| s.multiplicity(-l) == m);
    let (mk, mneg) = (s.multiplicity(k), s.multiplicity(-k));
    SpectralPredicates {
        connected: mk == 1,
        bipartite: mneg >= 1,
        integral: true,
        strongly_almost_symmetric: k > 0 && symmetric_rest && mk.abs_diff(mneg) == 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamanujanVerdict {
    pub ramanujan: bool,
    pub degree: i128,
    /// Largest `|λ|` with `|λ| != degree`, if any.
    pub lambda: Option<i128>,
}

impl RamanujanVerdict {
    pub fn witness(&self) -> String {
        match self.lambda {
            None => format!("every eigenvalue has absolute value {}", self.degree),
            Some(l) => {
                let rel = if self.ramanujan { "<=" } else { ">" };
                format!("lambda={l}, lambda^2={} {rel} 4(k-1)={}", l * l, 4 * (self.degree - 1))
            }
        }
    }
}

/// `λ² <= 4(k-1)` for the largest `|λ|` different from the degree.
///
/// Eigenvalues of absolute value `k` are the trivial ones for every
/// component, including the bipartite `-k`, so connectivity is not required.
pub fn is_ramanujan(s: &Spectrum) -> RamanujanVerdict {
    let k = s.degree();
    let lambda = s.second_largest_abs();
    RamanujanVerdict {
        ramanujan: lambda.is_none_or(|l| l * l <= 4 * (k - 1)),
        degree: k,
        lambda,
    }
}

/// Ramanujan criterion for the difference graph of a local ring of order
/// `r` with maximal ideal of order `m`: `r = 2m`, or `4r >= (m+2)^2` and `m != 2`.
pub fn local_ramanujan_condition(r: u64, m: u64) -> bool {
    let (r, m) = (r as u128, m as u128);
    r == 2 * m || (4 * r >= (m + 2) * (m + 2) && m != 2)
}

/// `q2 <= 2(q1 + sqrt((q1-2) q1)) - 1` with `3 <= q1 <= q2`, decided by
/// comparing `q2 + 1 - 2 q1` against the radical.
pub fn two_field_bound_radical(q1: u64, q2: u64) -> bool {
    if !(3 <= q1 && q1 <= q2) {
        return false;
    }
    let lhs = q2 as i128 + 1 - 2 * q1 as i128;
    let rad = q1 as i128 * (q1 as i128 - 2);
    lhs <= 0 || lhs * lhs <= 4 * rad
}

/// The same bound in the form `(q2+1)^2 / (q2-1) <= 4 q1`.
pub fn two_field_bound_quotient(q1: u64, q2: u64) -> bool {
    if !(3 <= q1 && q1 <= q2) {
        return false;
    }
    let (q1, q2) = (q1 as u128, q2 as u128);
    (q2 + 1) * (q2 + 1) <= 4 * q1 * (q2 - 1)
}

/// `2(q1-2) + q2 <= sqrt((2q1-3)^2 + 4 q1 q2 - 9)` with `3 <= q1 <= q2`,
/// both sides squared.
pub fn complement_bound_radical(q1: u64, q2: u64) -> bool {
    if !(3 <= q1 && q1 <= q2) {
        return false;
    }
    let (a, b) = (q1 as i128, q2 as i128);
    let lhs = 2 * (a - 2) + b;
    lhs * lhs <= (2 * a - 3) * (2 * a - 3) + 4 * a * b - 9
}

/// The same bound as `q2(q2-8) <= 4(q1-4)`.
pub fn complement_bound_reduced(q1: u64, q2: u64) -> bool {
    if !(3 <= q1 && q1 <= q2) {
        return false;
    }
    let (a, b) = (q1 as i128, q2 as i128);
    b * (b - 8) <= 4 * (a - 4)
}

/// Complement of the crown graph `G(F2 x Fq)` is Ramanujan: `q^2 - 8q + 8 <= 0`.
pub fn crown_complement_condition(q: u64) -> bool {
    let q = q as i128;
    q * q - 8 * q + 8 <= 0
}

/// Complement of `G(F_q1 x F_q2)`, `q1 <= q2`, is Ramanujan.
pub fn two_field_complement_ramanujan(q1: u64, q2: u64) -> bool {
    match q1 {
        2 => crown_complement_condition(q2),
        _ => complement_bound_reduced(q1, q2),
    }
}

/// `srg(n, k, e, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgParams {
    pub n: u128,
    pub k: u128,
    pub e: u128,
    pub d: u128,
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "srg({},{},{},{})", self.n, self.k, self.e, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SrgVerdict {
    pub gr: Option<SrgParams>,
    pub grplus: Option<SrgParams>,
}

fn srg(n: u128, k: u128, e: u128, d: u128) -> Option<SrgParams> {
    Some(SrgParams { n, k, e, d })
}

/// Strongly regular difference and sum graphs, from the classification lists.
pub fn strongly_regular_classify(spec: &RingSpec) -> SrgVerdict {
    let f = spec.factors();
    let gr = if spec.is_local() {
        let (r, m) = (f[0].r() as u128, f[0].m() as u128);
        if m == 1 {
            srg(r, r - 1, r.saturating_sub(2), 0)
        } else {
            srg(r, r - m, r - 2 * m, r - m)
        }
    } else if let Some(q) = spec.field_orders() {
        if q.iter().all(|&x| x == 2) {
            srg(spec.order(), 1, 0, 0)
        } else if q.len() == 2 && q[0] == q[1] {
            let q = q[0] as u128;
            srg(q * q, (q - 1) * (q - 1), (q - 2) * (q - 2), (q - 1) * (q - 2))
        } else {
            None
        }
    } else {
        None
    };
    let plus_ok = if spec.is_local() {
        f[0].q().is_multiple_of(2)
    } else {
        match spec.field_orders() {
            Some(q) => q.iter().all(|&x| x == 2) || (q.len() == 2 && q[0] == q[1] && q[0] % 2 == 0),
            None => false,
        }
    };
    SrgVerdict { gr, grplus: if plus_ok { gr } else { None } }
}

/// `2(|R| - |R*| - 1) = ∏ q_i - ∏ (2 - q_i)`, evaluated exactly.
pub fn equienergetic_with_complement(spec: &RingSpec) -> Result<bool> {
    let lhs = 2 * (spec.order() as i128 - spec.units_count() as i128 - 1);
    let mut prod_q: i128 = 1;
    let mut prod_two: i128 = 1;
    for q in spec.q_ratios() {
        prod_q = prod_q.checked_mul(q as i128).ok_or(Error::Overflow("complement energy criterion"))?;
        prod_two = prod_two
            .checked_mul(2 - q as i128)
            .ok_or(Error::Overflow("complement energy criterion"))?;
    }
    Ok(lhs == prod_q - prod_two)
}

/// Which two graphs a pair report compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    #[serde(rename = "gr-grplus")]
    GrVsGrPlus,
    #[serde(rename = "gr-grbar")]
    GrVsGrBar,
}

impl PairKind {
    pub fn name(self) -> &'static str {
        match self {
            PairKind::GrVsGrPlus => "gr-grplus",
            PairKind::GrVsGrBar => "gr-grbar",
        }
    }

    pub fn roles(self) -> [Role; 2] {
        match self {
            PairKind::GrVsGrPlus => [Role::Gr, Role::GrPlus],
            PairKind::GrVsGrBar => [Role::Gr, Role::GrBar],
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gr-grplus" | "grplus" | "plus" => Ok(PairKind::GrVsGrPlus),
            "gr-grbar" | "grbar" | "bar" | "complement" => Ok(PairKind::GrVsGrBar),
            _ => Err(Error::Domain(format!("unknown pair kind {s:?}"))),
        }
    }
}

/// Verdicts about graphs over one ring, each with its witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub subject: RingSpec,
    pub roles: Vec<Role>,
    pub order: u128,
    /// Degree of the difference graph.
    pub kappa: i128,
    /// Degree of its complement.
    pub kappabar: i128,
    pub energy: u128,
    pub spectra: BTreeMap<Role, Spectrum>,
    pub predicates: BTreeMap<String, Predicate>,
    /// The headline relation: equienergetic and pairwise non-isospectral.
    pub verdict: bool,
    /// Criteria whose hypotheses hold and whose prediction was confirmed.
    pub theorem_tags: Vec<String>,
    pub flags: Vec<String>,
}

impl ClassificationReport {
    pub fn predicate(&self, name: &str) -> Option<bool> {
        self.predicates.get(name).map(|p| p.value)
    }
}

struct Builder {
    spec: RingSpec,
    spectra: BTreeMap<Role, Spectrum>,
    predicates: BTreeMap<String, Predicate>,
    tags: Vec<String>,
}

impl Builder {
    fn new(spec: &RingSpec, roles: &[Role]) -> Result<Self> {
        let mut spectra = BTreeMap::new();
        for &role in roles.iter().chain(&[Role::Gr, Role::GrBar]) {
            if let std::collections::btree_map::Entry::Vacant(e) = spectra.entry(role) {
                e.insert(closed_form_spectrum(spec, role)?);
            }
        }
        Ok(Builder { spec: spec.clone(), spectra, predicates: BTreeMap::new(), tags: Vec::new() })
    }

    fn spectrum(&self, role: Role) -> &Spectrum {
        &self.spectra[&role]
    }

    fn put(&mut self, name: impl Into<String>, p: Predicate) -> bool {
        let v = p.value;
        self.predicates.insert(name.into(), p);
        v
    }

    /// Per-role structure and Ramanujan verdicts.
    fn role_predicates(&mut self, role: Role) -> (SpectralPredicates, bool) {
        let s = self.spectrum(role).clone();
        let k = s.degree();
        let sp = spectral_predicates(&s);
        let ram = is_ramanujan(&s);
        let name = role.name();
        self.put(format!("{name}.connected"), Predicate::new(sp.connected, format!("m({k})={}", s.multiplicity(k))));
        self.put(
            format!("{name}.bipartite"),
            Predicate::new(sp.bipartite, format!("m({})={}", -k, s.multiplicity(-k))),
        );
        self.put(format!("{name}.ramanujan"), Predicate::new(ram.ramanujan, ram.witness()));
        (sp, ram.ramanujan)
    }

    fn relation(&mut self, a: Role, b: Role) -> Result<(bool, bool)> {
        let (sa, sb) = (self.spectrum(a).clone(), self.spectrum(b).clone());
        let eq = is_equienergetic(&sa, &sb)?;
        let key = format!("{}-{}", a.name(), b.name());
        self.put(
            format!("{key}.equienergetic"),
            Predicate::new(eq.equienergetic, format!("E({a})={}, E({b})={}", eq.energy_a, eq.energy_b)),
        );
        let iso = self.put(format!("{key}.isospectral"), is_isospectral(&sa, &sb));
        Ok((eq.equienergetic, iso))
    }

    /// Records `tag` when `hypothesis` holds and the criterion agrees with the
    /// spectral verdict; fails when they disagree.
    fn check(&mut self, tag: &str, hypothesis: bool, criterion: bool, spectral: bool, what: &str) -> Result<()> {
        if !hypothesis {
            return Ok(());
        }
        if criterion != spectral {
            return Err(Error::TheoremMismatch {
                subject: self.spec.to_string(),
                detail: format!("{tag}: criterion says {what} = {criterion}, spectra say {spectral}"),
            });
        }
        self.tags.push(tag.to_string());
        Ok(())
    }

    fn finish(self, roles: Vec<Role>, verdict: bool) -> Result<ClassificationReport> {
        let g = self.spectrum(Role::Gr);
        let mut flags = Vec::new();
        if !self.spec.is_constructible() {
            flags.push(NO_ORACLE_WITNESS.to_string());
        }
        Ok(ClassificationReport {
            order: self.spec.order(),
            kappa: g.degree(),
            kappabar: self.spectrum(Role::GrBar).degree(),
            energy: g.energy()?,
            subject: self.spec,
            roles,
            spectra: self.spectra,
            predicates: self.predicates,
            verdict,
            theorem_tags: self.tags,
            flags,
        })
    }
}

/// Two fields `q1 <= q2`, if the ring is exactly that.
fn two_fields(spec: &RingSpec) -> Option<(u64, u64)> {
    match spec.field_orders()?.as_slice() {
        &[a, b] => Some((a, b)),
        _ => None,
    }
}

/// Non-local odd-type rings whose difference graph is Ramanujan: `F3 x F3`,
/// `F3 x F4`, `F3 x F3 x F3`, `F3 x F3 x F4`, `F3` times a local ring of
/// shape `(9, 3)`, and `F_q1 x F_q2` with at least one odd order inside the
/// two-field bound.
pub fn odd_type_ramanujan_criterion(spec: &RingSpec) -> bool {
    if let Some(q) = spec.field_orders() {
        match q.as_slice() {
            &[3, 3] | &[3, 4] | &[3, 3, 3] | &[3, 3, 4] => return true,
            &[a, b] => return (a % 2 == 1 || b % 2 == 1) && two_field_bound_quotient(a, b),
            _ => return false,
        }
    }
    spec.shape_key() == [(3, 1), (9, 3)]
}

/// Whether `is_ramanujan` on the difference graph follows from a criterion,
/// and which one.
fn gr_ramanujan_criterion(spec: &RingSpec) -> Option<(&'static str, bool)> {
    if spec.is_local() {
        let f = &spec.factors()[0];
        return Some(("local-ramanujan-criterion", local_ramanujan_condition(f.r(), f.m())));
    }
    if let Some((q1, q2)) = two_fields(spec) {
        if q1 >= 3 {
            return Some(("two-field-ramanujan-bound", two_field_bound_quotient(q1, q2)));
        }
    }
    if spec.is_odd_type() {
        return Some(("odd-type-ramanujan-types", odd_type_ramanujan_criterion(spec)));
    }
    None
}

/// `1/(q1-1) + 1/(q2-1) + 1/(q3-1) = 1`, cleared of denominators.
pub fn three_field_unit_fraction(q: &[u64]) -> bool {
    let [a, b, c] = [q[0] as u128 - 1, q[1] as u128 - 1, q[2] as u128 - 1];
    a * b + a * c + b * c == a * b * c
}

/// Equality of energies with the complement as predicted by the factor count.
fn complement_equienergy_prediction(spec: &RingSpec) -> Option<(&'static str, bool)> {
    let f = spec.factors();
    if spec.is_local() {
        let (r, m) = (f[0].r() as u128, f[0].m() as u128);
        return Some(("complement-equienergy-local", m > 1 && r == m * m));
    }
    if f.len() == 2 {
        return Some(("complement-equienergy-two-factors", spec.is_field_product()));
    }
    if let Some(q) = spec.field_orders() {
        if q.len() == 3 {
            return Some(("complement-equienergy-three-fields", three_field_unit_fraction(&q)));
        }
    }
    None
}

fn common_checks(b: &mut Builder, gr: &SpectralPredicates, gr_ram: bool) -> Result<()> {
    let spec = b.spec.clone();
    if let Some((tag, crit)) = gr_ramanujan_criterion(&spec) {
        b.check(tag, true, crit, gr_ram, "G Ramanujan")?;
    }
    let parts_connected = spec.factors().iter().filter(|f| f.q() == 2).count() <= 1;
    b.check("unitary-graph-connectivity", true, parts_connected, gr.connected, "G connected")?;
    Ok(())
}

/// Difference graph against its sum graph or its complement.
pub fn pair_report(spec: &RingSpec, kind: PairKind) -> Result<ClassificationReport> {
    let [a, b_role] = kind.roles();
    let mut b = Builder::new(spec, &[a, b_role])?;
    let (gr, gr_ram) = b.role_predicates(Role::Gr);
    let (other, other_ram) = b.role_predicates(b_role);
    let (eq, iso) = b.relation(a, b_role)?;
    let verdict = eq && !iso;
    b.put("verdict", Predicate::new(verdict, "equienergetic and not isospectral"));
    b.put(
        "ramanujan_pair",
        Predicate::new(gr_ram && other_ram, format!("{a}: {gr_ram}, {b_role}: {other_ram}")),
    );
    common_checks(&mut b, &gr, gr_ram)?;
    let odd_type = spec.is_odd_type();
    let odd_order = spec.order() % 2 == 1;
    match kind {
        PairKind::GrVsGrPlus => {
            b.check("sum-difference-equienergy", true, true, eq, "equienergetic")?;
            b.check("odd-type-non-isospectral", odd_type, false, iso, "isospectral")?;
            b.check(
                "odd-type-connected-non-bipartite",
                odd_type,
                true,
                gr.connected && !gr.bipartite && other.connected && !other.bipartite,
                "both connected and non-bipartite",
            )?;
            let s = b.spectrum(Role::GrPlus).clone();
            b.check(
                "odd-order-strong-almost-symmetry",
                odd_order,
                true,
                other.strongly_almost_symmetric && s.trace()? > 0,
                "sum graph strongly almost symmetric with loops",
            )?;
            let lg = is_ramanujan(b.spectrum(Role::Gr)).lambda;
            let lp = is_ramanujan(&s).lambda;
            b.check("sum-difference-same-lambda", true, true, lg == lp, "equal second eigenvalue")?;
            b.check("sum-difference-same-ramanujan", true, gr_ram, other_ram, "sum graph Ramanujan")?;
        }
        PairKind::GrVsGrBar => {
            let identity = equienergetic_with_complement(spec)?;
            b.check("complement-energy-identity", true, identity, eq, "equienergetic")?;
            if let Some((tag, crit)) = complement_equienergy_prediction(spec) {
                b.check(tag, true, crit, eq, "equienergetic")?;
                let exceptional = two_fields(spec) == Some((3, 3));
                b.check("complement-isospectral-exception", eq, exceptional, iso, "isospectral")?;
            }
            b.check("local-complement-ramanujan", spec.is_local(), true, other_ram, "complement Ramanujan")?;
            if let Some((q1, q2)) = two_fields(spec) {
                b.check(
                    "two-field-complement-bound",
                    true,
                    two_field_complement_ramanujan(q1, q2),
                    other_ram,
                    "complement Ramanujan",
                )?;
            }
        }
    }
    b.finish(kind.roles().to_vec(), verdict)
}

/// Whether the three graphs form an equienergetic, pairwise non-isospectral
/// triple, and whether all three are Ramanujan.
pub fn triple_report(spec: &RingSpec) -> Result<ClassificationReport> {
    let roles = [Role::Gr, Role::GrPlus, Role::GrBar];
    let mut b = Builder::new(spec, &roles)?;
    let (gr, gr_ram) = b.role_predicates(Role::Gr);
    let (_, plus_ram) = b.role_predicates(Role::GrPlus);
    let (_, bar_ram) = b.role_predicates(Role::GrBar);
    let (e1, i1) = b.relation(Role::Gr, Role::GrPlus)?;
    let (e2, i2) = b.relation(Role::Gr, Role::GrBar)?;
    let (e3, i3) = b.relation(Role::GrPlus, Role::GrBar)?;
    let equienergetic = e1 && e2 && e3;
    let any_iso = i1 || i2 || i3;
    let all_ram = gr_ram && plus_ram && bar_ram;
    let verdict = equienergetic && !any_iso;
    b.put(
        "equienergetic",
        Predicate::new(equienergetic, format!("pairwise: {e1}, {e2}, {e3}")),
    );
    b.put("isospectral_pair", Predicate::new(any_iso, format!("pairwise: {i1}, {i2}, {i3}")));
    b.put(
        "all_ramanujan",
        Predicate::new(all_ram, format!("gr: {gr_ram}, grplus: {plus_ram}, grbar: {bar_ram}")),
    );
    b.put("verdict", Predicate::new(verdict, "equienergetic and pairwise non-isospectral"));
    let ram_triple = verdict && all_ram;
    b.put("ramanujan_triple", Predicate::new(ram_triple, "verdict and all three Ramanujan"));
    common_checks(&mut b, &gr, gr_ram)?;
    let identity = equienergetic_with_complement(spec)?;
    b.check("complement-energy-identity", true, identity, e2, "equienergetic with complement")?;
    if spec.is_local() {
        let f = &spec.factors()[0];
        let (r, m) = (f.r() as u128, f.m() as u128);
        b.check("local-ramanujan-triple", true, r == m * m && r % 2 == 1, ram_triple, "Ramanujan triple")?;
    } else {
        let crit = match two_fields(spec) {
            Some((q1, q2)) => {
                spec.is_odd_type()
                    && (q1, q2) != (3, 3)
                    && two_field_bound_quotient(q1, q2)
                    && complement_bound_reduced(q1, q2)
            }
            None => false,
        };
        b.check("non-local-ramanujan-triple", true, crit, ram_triple, "Ramanujan triple")?;
        if let (true, Some(_)) = (ram_triple, two_fields(spec)) {
            let e = b.spectrum(Role::Gr).energy()?;
            let d = if spec.order().is_multiple_of(2) { 8 } else { 16 };
            b.put("energy_divisibility", Predicate::new(e % d == 0, format!("E={e}, divisor {d}")));
            b.check("two-field-triple-energy-divisibility", true, true, e % d == 0, "energy divisible")?;
        }
    }
    b.finish(roles.to_vec(), verdict)
}

/// A crown graph `H_{m,m}` realized as the difference graph of `F2 x F_m`.
pub fn crown_spectrum(m: u64) -> Result<Spectrum> {
    closed_form_spectrum(&RingSpec::fields(&[2, m])?, Role::Gr)
}

/// `K_{m x m}`, the difference graph of a local ring of shape `(m^2, m)`.
pub fn complete_multipartite_spectrum(m: u64) -> Result<Spectrum> {
    let r = m.checked_mul(m).ok_or(Error::Overflow("complete multipartite order"))?;
    let shape = crate::ring_model::LocalShape::shape(r, m)?;
    closed_form_spectrum(&RingSpec::local(shape), Role::Gr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_model::{parse_ring_spec, LocalShape};

    fn spec(s: &str) -> RingSpec {
        parse_ring_spec(s).unwrap()
    }

    fn sp(n: u128, k: i128, e: &[(i128, u128)]) -> Spectrum {
        Spectrum::new(n, k, e.iter().copied()).unwrap()
    }

    #[test]
    fn energies_compare() {
        let c4 = sp(4, 2, &[(2, 1), (0, 2), (-2, 1)]);
        let two_k2 = sp(4, 1, &[(1, 2), (-1, 2)]);
        assert!(is_equienergetic(&c4, &two_k2).unwrap().equienergetic);
        let f9 = closed_form_spectrum(&spec("F9"), Role::Gr).unwrap();
        let f33 = closed_form_spectrum(&spec("F3xF3"), Role::Gr).unwrap();
        let c = is_equienergetic(&f9, &f33).unwrap();
        assert!(c.equienergetic && c.same_order && c.energy_a == 16);
        let k2 = sp(2, 1, &[(1, 1), (-1, 1)]);
        let k3 = sp(3, 2, &[(2, 1), (-1, 2)]);
        let c = is_equienergetic(&k2, &k3).unwrap();
        assert!(!c.equienergetic);
        assert_eq!(c.tag, Some(DIFFERENT_ORDER));
    }

    #[test]
    fn isospectrality() {
        let r = spec("F3xF3");
        let g = closed_form_spectrum(&r, Role::Gr).unwrap();
        assert!(is_isospectral(&g, &closed_form_spectrum(&r, Role::GrBar).unwrap()).value);
        let z = spec("Z9");
        let p = is_isospectral(
            &closed_form_spectrum(&z, Role::Gr).unwrap(),
            &closed_form_spectrum(&z, Role::GrPlus).unwrap(),
        );
        assert!(!p.value);
        assert!(p.witness.contains("eigenvalue 3"));
        assert!(is_isospectral(&g, &g).value);
    }

    #[test]
    fn predicates_from_spectra() {
        let zp = closed_form_spectrum(&spec("Z9"), Role::GrPlus).unwrap();
        let p = spectral_predicates(&zp);
        assert!(p.connected && !p.bipartite && p.strongly_almost_symmetric);
        let p = spectral_predicates(&sp(4, 1, &[(1, 2), (-1, 2)]));
        assert!(!p.connected && p.bipartite);
        let p = spectral_predicates(&sp(6, 3, &[(3, 1), (0, 4), (-3, 1)]));
        assert!(p.connected && p.bipartite && !p.strongly_almost_symmetric);
    }

    #[test]
    fn ramanujan_examples() {
        let g = closed_form_spectrum(&spec("Z9"), Role::Gr).unwrap();
        let v = is_ramanujan(&g);
        assert!(v.ramanujan);
        assert_eq!(v.lambda, Some(3));
        assert!(is_ramanujan(&closed_form_spectrum(&spec("F4xF9"), Role::Gr).unwrap()).ramanujan);
        assert!(!is_ramanujan(&closed_form_spectrum(&spec("F4xF9"), Role::GrBar).unwrap()).ramanujan);
    }

    #[test]
    fn local_condition() {
        assert!(local_ramanujan_condition(9, 3));
        assert!(local_ramanujan_condition(8, 4));
        assert!(!local_ramanujan_condition(8, 2));
        assert!(!local_ramanujan_condition(27, 9));
    }

    #[test]
    fn bounds_agree() {
        for q1 in 1..60 {
            for q2 in 1..200 {
                assert_eq!(two_field_bound_radical(q1, q2), two_field_bound_quotient(q1, q2), "{q1} {q2}");
                assert_eq!(complement_bound_radical(q1, q2), complement_bound_reduced(q1, q2), "{q1} {q2}");
            }
        }
        assert!(two_field_bound_quotient(3, 8));
        assert!(!two_field_bound_quotient(3, 9));
        assert!(!complement_bound_reduced(4, 9));
        assert!(!complement_bound_reduced(11, 11));
    }

    #[test]
    fn strongly_regular() {
        let v = strongly_regular_classify(&spec("F3xF3"));
        assert_eq!(v.gr.unwrap().to_string(), "srg(9,4,1,2)");
        assert!(v.grplus.is_none());
        let l = RingSpec::local(LocalShape::shape(16, 4).unwrap());
        let v = strongly_regular_classify(&l);
        assert_eq!(v.gr, srg(16, 12, 8, 12));
        assert_eq!(v.grplus, v.gr);
        assert_eq!(strongly_regular_classify(&spec("F3xF4")).gr, None);
        assert_eq!(strongly_regular_classify(&spec("F2xF2xF2")).gr, srg(8, 1, 0, 0));
    }

    #[test]
    fn complement_equienergy() {
        assert!(equienergetic_with_complement(&spec("Z9")).unwrap());
        assert!(equienergetic_with_complement(&spec("F3xF5xF5")).unwrap());
        assert!(!equienergetic_with_complement(&spec("Z8")).unwrap());
    }

    #[test]
    fn pair_examples() {
        let r = pair_report(&spec("F3xF8"), PairKind::GrVsGrPlus).unwrap();
        assert!(r.verdict && r.predicate("ramanujan_pair").unwrap());
        let r = pair_report(&spec("F4xF9"), PairKind::GrVsGrBar).unwrap();
        assert!(r.verdict && !r.predicate("grbar.ramanujan").unwrap());
        let r = pair_report(&spec("F3xF3"), PairKind::GrVsGrBar).unwrap();
        assert!(!r.verdict && r.predicate("gr-grbar.isospectral").unwrap());
        assert!(r.theorem_tags.iter().any(|t| t == "complement-isospectral-exception"));
    }

    #[test]
    fn triple_examples() {
        let r = triple_report(&spec("Z25")).unwrap();
        assert!(r.predicate("ramanujan_triple").unwrap());
        assert_eq!((r.order, r.kappa, r.kappabar, r.energy), (25, 20, 4, 40));
        assert!(triple_report(&spec("F5xF7")).unwrap().predicate("ramanujan_triple").unwrap());
        let r = triple_report(&spec("F4xF4xF4")).unwrap();
        assert!(r.predicate("gr-grbar.equienergetic").unwrap());
        assert!(!r.verdict);
    }

    #[test]
    fn shape_reports_are_flagged() {
        let r = triple_report(&spec("L(625,25)")).unwrap();
        assert!(r.flags.iter().any(|f| f == NO_ORACLE_WITNESS));
        assert!(r.predicate("ramanujan_triple").unwrap());
    }
}
