//! Instance generation, suite orchestration, and witness persistence.
//!
//! Every theorem-level checker is reachable through exactly one suite id.
//! Each instance is serialized as a text encoding that `eval_instance` can
//! evaluate on its own, which is what makes witness files replayable.

use std::fmt;
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::abgroup::{
    check_chowla_cd, check_etransform_identities, check_kneser, check_pigeonhole_cover,
    chowla_descent_witness, minkowski_sum, stabilizer, ChowlaMode,
    FiniteAbelianGroup, GroupSubset,
};
use crate::density::{congruence_example, EventuallyPeriodicSet};
use crate::dyson::{check_lemmas, default_s_collection, iterate_transform};
use crate::error::{Error, Result};
use crate::intset::{hfold_sumset, rat, BoundedIntSet};
use crate::ranksum::{binomial, check_dyson_bound, check_mann, check_shnirelman_prefix, gamma_star, RankProfile, SetFamily};
use crate::Verdict;

pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Seed for the Lemma-1 S collection when g > 6; fixed so replay is
/// deterministic.
const LEMMA_S_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteId {
    DysonBound,
    Mann,
    ShnirelmanPrefix,
    Basis2,
    TransformLemmas,
    Etransform,
    Pigeonhole,
    ChowlaCd,
    Kneser,
    DensityOracle,
    CongruenceExample,
}

impl SuiteId {
    pub const ALL: [SuiteId; 11] = [
        SuiteId::DysonBound,
        SuiteId::Mann,
        SuiteId::ShnirelmanPrefix,
        SuiteId::Basis2,
        SuiteId::TransformLemmas,
        SuiteId::Etransform,
        SuiteId::Pigeonhole,
        SuiteId::ChowlaCd,
        SuiteId::Kneser,
        SuiteId::DensityOracle,
        SuiteId::CongruenceExample,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteId::DysonBound => "dyson-bound",
            SuiteId::Mann => "mann",
            SuiteId::ShnirelmanPrefix => "shnirelman-prefix",
            SuiteId::Basis2 => "basis2",
            SuiteId::TransformLemmas => "transform-lemmas",
            SuiteId::Etransform => "etransform",
            SuiteId::Pigeonhole => "pigeonhole",
            SuiteId::ChowlaCd => "chowla-cd",
            SuiteId::Kneser => "kneser",
            SuiteId::DensityOracle => "density-oracle",
            SuiteId::CongruenceExample => "congruence-example",
        }
    }

    /// The statement each suite verifies.
    pub fn claim(self) -> &'static str {
        match self {
            SuiteId::DysonBound => "phi_r(m) >= C(n-1,r-1)*min(1,gamma*)*m",
            SuiteId::Mann => "Mann fundamental theorem and finite corollary",
            SuiteId::ShnirelmanPrefix => "(A+B)(m) >= (a+b-ab)*m prefix inequality",
            SuiteId::Basis2 => "A(n) >= n/2 for n <= g implies 2A covers [1,g]",
            SuiteId::TransformLemmas => "Dyson transform lemmas 1-3 and termination",
            SuiteId::Etransform => "e-transform identities 1-3",
            SuiteId::Pigeonhole => "|A|+|B| > |G| implies A+B = G",
            SuiteId::ChowlaCd => "|A+B| >= min(m, |A|+|B|-1)",
            SuiteId::Kneser => "Kneser existence and stabilizer identity",
            SuiteId::DensityOracle => "closed-form densities match brute force",
            SuiteId::CongruenceExample => "d_L(A+B) = (k+l-1)/m congruence example",
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenMode {
    Exhaustive,
    Random { seed: u64, count: u64 },
}

#[derive(Clone)]
pub struct SuiteOptions {
    pub mode: GenMode,
    /// Bound for integer-set suites.
    pub g: usize,
    /// Family size (exhaustive) or maximum family size (random).
    pub n: usize,
    /// Group for group suites; random group suites fall back to a pool of
    /// groups up to `max_group_order` when unset.
    pub group: Option<Arc<FiniteAbelianGroup>>,
    pub max_group_order: usize,
    pub max_threshold: usize,
    pub max_period: usize,
    /// Largest modulus for the congruence-example sweep.
    pub max_modulus: usize,
    pub chowla_mode: ChowlaMode,
    /// Membership density for random instances.
    pub density: f64,
    pub budget: Option<u64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            mode: GenMode::Exhaustive,
            g: 6,
            n: 2,
            group: None,
            max_group_order: 24,
            max_threshold: 20,
            max_period: 12,
            max_modulus: 12,
            chowla_mode: ChowlaMode::Chowla,
            density: 0.5,
            budget: None,
        }
    }
}

impl SuiteOptions {
    pub fn budget(&self) -> u64 {
        if let Some(b) = self.budget {
            return b;
        }
        std::env::var("SUMSETLAB_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_BUDGET)
    }

    fn check_budget(&self, instances: u128) -> Result<()> {
        if instances > self.budget() as u128 {
            return Err(Error::Resource(format!(
                "exhaustive sweep would evaluate {instances} instances, above the budget {}",
                self.budget()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Witness {
    pub suite: SuiteId,
    pub instance: String,
    pub claim: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "v": 1,
            "suite": self.suite.as_str(),
            "instance": self.instance,
            "claim": self.claim,
            "verdict": self.verdict.as_str(),
            "detail": self.detail,
        })
    }
}

/// Append-only JSON-lines sink. Failures are always written; passes are
/// sampled; not-applicable records are opt-in.
pub struct WitnessLog {
    writer: Option<BufWriter<std::fs::File>>,
    pub log_na: bool,
    /// 0 disables pass logging, k logs every k-th pass.
    pub pass_sample_every: u64,
    passes_seen: u64,
}

impl WitnessLog {
    pub fn disabled() -> Self {
        WitnessLog {
            writer: None,
            log_na: false,
            pass_sample_every: 0,
            passes_seen: 0,
        }
    }

    pub fn to_file(path: &Path) -> Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(WitnessLog {
            writer: Some(BufWriter::new(file)),
            log_na: false,
            pass_sample_every: 0,
            passes_seen: 0,
        })
    }

    pub fn log(&mut self, w: &Witness) -> Result<()> {
        let should_write = match w.verdict {
            Verdict::Fail => true,
            Verdict::Pass => {
                self.passes_seen += 1;
                self.pass_sample_every != 0 && self.passes_seen % self.pass_sample_every == 0
            }
            Verdict::NotApplicable => self.log_na,
        };
        if should_write {
            if let Some(writer) = self.writer.as_mut() {
                writeln!(writer, "{}", w.to_json())?;
            }
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        if let Some(writer) = self.writer.as_mut() {
            writer.flush()?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct SuiteReport {
    pub suite: SuiteId,
    pub pass: u64,
    pub fail: u64,
    pub not_applicable: u64,
    pub elapsed_ms: u128,
    pub seed: Option<u64>,
    pub failures: Vec<Witness>,
}

const MAX_STORED_FAILURES: usize = 100;

impl SuiteReport {
    pub fn total(&self) -> u64 {
        self.pass + self.fail + self.not_applicable
    }

    pub fn ok(&self) -> bool {
        self.fail == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "v": 1,
            "suite": self.suite.as_str(),
            "claim": self.suite.claim(),
            "pass": self.pass,
            "fail": self.fail,
            "not_applicable": self.not_applicable,
            "instances": self.total(),
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
            "failures": self.failures.iter().map(|w| w.to_json()).collect::<Vec<_>>(),
        })
    }
}

// ---------------------------------------------------------------------------
// instance generation

/// Exhaustive families: every n-tuple of subsets of [1,g], counter order.
pub fn exhaustive_families(g: usize, n: usize) -> impl Iterator<Item = SetFamily> {
    let total: u128 = 1u128 << (g * n);
    let per_set = (1u64 << g) - 1;
    (0..total).map(move |combined| {
        let sets = (0..n)
            .map(|i| {
                let mask = ((combined >> (i * g)) as u64) & per_set;
                BoundedIntSet::from_mask(g, mask)
            })
            .collect();
        SetFamily::new(sets).expect("n >= 1")
    })
}

pub fn random_family(rng: &mut ChaCha8Rng, g_max: usize, n_max: usize, density: f64) -> SetFamily {
    let g = rng.gen_range(1..=g_max);
    let n = rng.gen_range(1..=n_max);
    let sets = (0..n)
        .map(|_| {
            let elems = (1..=g).filter(|_| rng.gen_bool(density));
            BoundedIntSet::from_elems(g, elems).expect("in range")
        })
        .collect();
    SetFamily::new(sets).expect("n >= 1")
}

/// All nonempty (A, B) pairs of subsets of the group, mask order.
pub fn exhaustive_group_pairs(
    group: &Arc<FiniteAbelianGroup>,
) -> impl Iterator<Item = (GroupSubset, GroupSubset)> + '_ {
    let order = group.order();
    let top = 1u64 << order;
    (1..top).flat_map(move |a| {
        (1..top).map(move |b| {
            (
                GroupSubset::from_mask(group.clone(), a),
                GroupSubset::from_mask(group.clone(), b),
            )
        })
    })
}

pub fn random_group_subset(
    rng: &mut ChaCha8Rng,
    group: &Arc<FiniteAbelianGroup>,
    density: f64,
) -> GroupSubset {
    loop {
        let elems = (0..group.order()).filter(|_| rng.gen_bool(density));
        let s = GroupSubset::from_elems(group.clone(), elems).expect("in range");
        if !s.is_empty() {
            return s;
        }
    }
}

/// The deterministic pool random group suites draw from: cyclic groups and
/// two-factor products up to the order limit.
pub fn group_pool(max_order: usize) -> Vec<Arc<FiniteAbelianGroup>> {
    let mut pool = Vec::new();
    for m in 2..=max_order {
        pool.push(FiniteAbelianGroup::cyclic(m).expect("within cap"));
    }
    for a in 2..=max_order {
        for b in a..=max_order {
            if a * b <= max_order {
                pool.push(FiniteAbelianGroup::new(vec![a, b]).expect("within cap"));
            }
        }
    }
    pool
}

pub fn random_ep_set(
    rng: &mut ChaCha8Rng,
    max_threshold: usize,
    max_period: usize,
    density: f64,
) -> EventuallyPeriodicSet {
    let threshold = rng.gen_range(0..=max_threshold);
    let period = rng.gen_range(1..=max_period);
    let head = (0..=threshold).filter(|_| rng.gen_bool(density)).collect::<Vec<_>>();
    let residues = (0..period).filter(|_| rng.gen_bool(density)).collect::<Vec<_>>();
    EventuallyPeriodicSet::new(threshold, head, period, residues).expect("in range")
}

// ---------------------------------------------------------------------------
// single-instance evaluation (shared by suites and replay)

fn parse_pair(instance: &str) -> Result<(GroupSubset, GroupSubset)> {
    let (a, b) = instance
        .split_once('|')
        .ok_or_else(|| Error::Parse(format!("expected A|B, got `{instance}`")))?;
    Ok((a.parse()?, b.parse()?))
}

/// Evaluate one encoded instance against its suite's claim.
pub fn eval_instance(suite: SuiteId, instance: &str) -> Result<Verdict> {
    match suite {
        SuiteId::DysonBound => {
            let family: SetFamily = instance.parse()?;
            let report = check_dyson_bound(&family)?;
            Ok(verdict(report.holds))
        }
        SuiteId::Mann => {
            let family: SetFamily = instance.parse()?;
            if family.len() != 2 {
                return Err(Error::Parse("mann instance needs exactly two sets".into()));
            }
            let (a, b) = (family.set(1), family.set(2));
            for n in 1..=family.bound() {
                if !check_mann(a, b, n)?.holds() {
                    return Ok(Verdict::Fail);
                }
            }
            Ok(Verdict::Pass)
        }
        SuiteId::ShnirelmanPrefix => {
            let family: SetFamily = instance.parse()?;
            if family.len() != 2 {
                return Err(Error::Parse("prefix instance needs exactly two sets".into()));
            }
            Ok(verdict(
                check_shnirelman_prefix(family.set(1), family.set(2))?.holds,
            ))
        }
        SuiteId::Basis2 => {
            let a: BoundedIntSet = instance.parse()?;
            let g = a.bound();
            let hypothesis = (1..=g).all(|n| 2 * a.count(n).expect("n <= g") >= n);
            if !hypothesis {
                return Ok(Verdict::NotApplicable);
            }
            let two_a = hfold_sumset(&a, 2, g)?;
            Ok(verdict(two_a.count(g)? == g))
        }
        SuiteId::TransformLemmas => {
            let family: SetFamily = instance.parse()?;
            if family.len() < 2 {
                return Err(Error::Parse("transform needs n >= 2".into()));
            }
            let n = family.len();
            let initial = family.set(n).cardinality();
            let trace = iterate_transform(&family)?;
            if trace.steps.len() > initial {
                return Ok(Verdict::Fail);
            }
            for step in &trace.steps {
                let gamma = gamma_star(&step.before)?;
                let coll = default_s_collection(step, LEMMA_S_SEED);
                if !check_lemmas(step, gamma, &coll)?.holds() {
                    return Ok(Verdict::Fail);
                }
                // transform soundness: the theorem bound survives the step
                if !check_dyson_bound(&step.after)?.holds {
                    return Ok(Verdict::Fail);
                }
            }
            Ok(Verdict::Pass)
        }
        SuiteId::Etransform => {
            let mut parts = instance.rsplitn(2, '|');
            let e: usize = parts
                .next()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("expected A|B|e, got `{instance}`")))?;
            let (a, b) = parse_pair(
                parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("expected A|B|e, got `{instance}`")))?,
            )?;
            Ok(verdict(check_etransform_identities(&a, &b, e)?.holds))
        }
        SuiteId::Pigeonhole => {
            let (a, b) = parse_pair(instance)?;
            check_pigeonhole_cover(&a, &b)
        }
        SuiteId::ChowlaCd => {
            let (mode, rest) = instance
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("expected mode|A|B, got `{instance}`")))?;
            let mode = match mode {
                "chowla" => ChowlaMode::Chowla,
                "cd" => ChowlaMode::CauchyDavenport,
                other => return Err(Error::Parse(format!("unknown mode `{other}`"))),
            };
            let (a, b) = parse_pair(rest)?;
            let bound = check_chowla_cd(&a, &b, mode)?;
            if mode == ChowlaMode::Chowla {
                // the descent existence statement from the proof
                let descent = chowla_descent_witness(&a, &b)?;
                if descent == Verdict::Fail {
                    return Ok(Verdict::Fail);
                }
            }
            Ok(bound)
        }
        SuiteId::Kneser => {
            let (a, b) = parse_pair(instance)?;
            let report = check_kneser(&a, &b)?;
            if !report.holds() {
                return Ok(Verdict::Fail);
            }
            if report.existence == Verdict::NotApplicable
                && report.stabilizer_identity == Verdict::NotApplicable
            {
                return Ok(Verdict::NotApplicable);
            }
            Ok(Verdict::Pass)
        }
        SuiteId::DensityOracle => {
            let s: EventuallyPeriodicSet = instance.parse()?;
            Ok(verdict(density_oracle_holds(&s)))
        }
        SuiteId::CongruenceExample => {
            let mut k = None;
            let mut l = None;
            let mut m = None;
            for part in instance.split(';') {
                let (key, val) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected k=..;l=..;m=..: `{instance}`")))?;
                let v: usize = val
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer `{val}`")))?;
                match key {
                    "k" => k = Some(v),
                    "l" => l = Some(v),
                    "m" => m = Some(v),
                    other => return Err(Error::Parse(format!("unknown key `{other}`"))),
                }
            }
            let (k, l, m) = match (k, l, m) {
                (Some(k), Some(l), Some(m)) => (k, l, m),
                _ => return Err(Error::Parse(format!("missing key in `{instance}`"))),
            };
            Ok(verdict(congruence_instance_holds(k, l, m)?))
        }
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Brute-force audit of the closed-form densities for one set.
fn density_oracle_holds(s: &EventuallyPeriodicSet) -> bool {
    let horizon = 10 * (s.threshold() + s.period());
    let sigma = s.shnirelman_density();
    let tail = s.lower_density();
    let mut brute_min = rat(1, 1);
    for n in 1..=horizon.max(1) {
        let q = rat(s.count(n) as i64, n as i64);
        if sigma > q {
            return false; // sigma must lower-bound every prefix quotient
        }
        if q < brute_min {
            brute_min = q;
        }
    }
    if brute_min <= tail && sigma != brute_min {
        return false;
    }
    // prefix averages approach |R|/m: the deficiency is bounded by N + m
    let n0 = 1000 * s.period() + s.threshold();
    let diff = rat(s.count(n0) as i64, n0 as i64) - tail;
    let bound = rat((s.threshold() + s.period()) as i64, n0 as i64);
    diff <= bound && -diff <= bound
}

fn congruence_instance_holds(k: usize, l: usize, m: usize) -> Result<bool> {
    let ex = congruence_example(k, l, m)?;
    let ok_densities = ex.a.lower_density() == rat(k as i64, m as i64)
        && ex.b.lower_density() == rat(l as i64, m as i64)
        && ex.a_plus_b.lower_density() == ex.predicted
        && ex.predicted < ex.a.lower_density() + ex.b.lower_density();
    // residues of A+B must equal the mod-m Minkowski sum of the residues
    let mut brute = vec![false; m];
    for r in ex.a.residues() {
        for s in ex.b.residues() {
            brute[(r + s) % m] = true;
        }
    }
    let brute_set: Vec<usize> = (0..m).filter(|&t| brute[t]).collect();
    let ok_residues = brute_set == ex.a_plus_b.residues().collect::<Vec<_>>();
    Ok(ok_densities && ok_residues)
}

// ---------------------------------------------------------------------------
// suite orchestration

struct Tally<'a> {
    suite: SuiteId,
    pass: u64,
    fail: u64,
    not_applicable: u64,
    failures: Vec<Witness>,
    log: &'a mut WitnessLog,
}

impl<'a> Tally<'a> {
    fn new(suite: SuiteId, log: &'a mut WitnessLog) -> Self {
        Tally {
            suite,
            pass: 0,
            fail: 0,
            not_applicable: 0,
            failures: Vec::new(),
            log,
        }
    }

    fn record(&mut self, instance: String, v: Verdict) {
        match v {
            Verdict::Pass => self.pass += 1,
            Verdict::Fail => self.fail += 1,
            Verdict::NotApplicable => self.not_applicable += 1,
        }
        let witness = Witness {
            suite: self.suite,
            instance,
            claim: self.suite.claim(),
            verdict: v,
            detail: String::new(),
        };
        if v == Verdict::Fail && self.failures.len() < MAX_STORED_FAILURES {
            self.failures.push(witness.clone());
        }
        // I/O failures surface on stderr but the sweep continues in memory
        if let Err(e) = self.log.log(&witness) {
            eprintln!("witness log write failed: {e}");
        }
    }
}

/// Run one suite over generated instances, tallying verdicts.
pub fn run_suite(
    suite: SuiteId,
    opts: &SuiteOptions,
    log: &mut WitnessLog,
) -> Result<SuiteReport> {
    let start = Instant::now();
    let mut tally = Tally::new(suite, log);
    let seed = match opts.mode {
        GenMode::Random { seed, .. } => Some(seed),
        GenMode::Exhaustive => None,
    };

    for instance in generate_instances(suite, opts)? {
        let v = eval_instance(suite, &instance)?;
        tally.record(instance, v);
    }
    tally.log.flush()?;

    Ok(SuiteReport {
        suite,
        pass: tally.pass,
        fail: tally.fail,
        not_applicable: tally.not_applicable,
        elapsed_ms: start.elapsed().as_millis(),
        seed,
        failures: tally.failures,
    })
}

/// The encoded instance stream for one suite, honoring mode and budget.
pub fn generate_instances(suite: SuiteId, opts: &SuiteOptions) -> Result<Vec<String>> {
    let mut out = Vec::new();
    match suite {
        SuiteId::DysonBound | SuiteId::TransformLemmas => match opts.mode {
            GenMode::Exhaustive => {
                let n = if suite == SuiteId::TransformLemmas {
                    opts.n.max(2)
                } else {
                    opts.n
                };
                opts.check_budget(1u128 << (opts.g * n))?;
                for f in exhaustive_families(opts.g, n) {
                    out.push(f.to_string());
                }
            }
            GenMode::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n_min = if suite == SuiteId::TransformLemmas { 2 } else { 1 };
                for _ in 0..count {
                    let mut f = random_family(&mut rng, opts.g, opts.n.max(n_min), opts.density);
                    while f.len() < n_min {
                        f = random_family(&mut rng, opts.g, opts.n.max(n_min), opts.density);
                    }
                    out.push(f.to_string());
                }
            }
        },
        SuiteId::Mann | SuiteId::ShnirelmanPrefix => match opts.mode {
            GenMode::Exhaustive => {
                opts.check_budget(1u128 << (opts.g * 2))?;
                for f in exhaustive_families(opts.g, 2) {
                    out.push(f.to_string());
                }
            }
            GenMode::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let a = random_set(&mut rng, opts.g, opts.density);
                    let b = random_set(&mut rng, opts.g, opts.density);
                    out.push(SetFamily::new(vec![a, b]).expect("two sets").to_string());
                }
            }
        },
        SuiteId::Basis2 => match opts.mode {
            GenMode::Exhaustive => {
                opts.check_budget(1u128 << opts.g)?;
                for mask in 0..(1u64 << opts.g) {
                    out.push(BoundedIntSet::from_mask(opts.g, mask).to_string());
                }
            }
            GenMode::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    out.push(random_set(&mut rng, opts.g, opts.density).to_string());
                }
            }
        },
        SuiteId::Etransform => match opts.mode {
            GenMode::Exhaustive => {
                let group = opts
                    .group
                    .clone()
                    .ok_or_else(|| Error::Usage("etransform needs --group for exhaustive mode".into()))?;
                let nonempty = (1u128 << group.order()) - 1;
                opts.check_budget(nonempty * nonempty * group.order() as u128)?;
                for (a, b) in exhaustive_group_pairs(&group) {
                    for e in a.elements() {
                        out.push(format!("{a}|{b}|{e}"));
                    }
                }
            }
            GenMode::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pool = opts
                    .group
                    .clone()
                    .map(|g| vec![g])
                    .unwrap_or_else(|| group_pool(opts.max_group_order));
                for _ in 0..count {
                    let group = &pool[rng.gen_range(0..pool.len())];
                    let a = random_group_subset(&mut rng, group, opts.density);
                    let b = random_group_subset(&mut rng, group, opts.density);
                    let elems: Vec<usize> = a.elements().collect();
                    let e = elems[rng.gen_range(0..elems.len())];
                    out.push(format!("{a}|{b}|{e}"));
                }
            }
        },
        SuiteId::Pigeonhole | SuiteId::Kneser | SuiteId::ChowlaCd => {
            let prefix = if suite == SuiteId::ChowlaCd {
                match opts.chowla_mode {
                    ChowlaMode::Chowla => "chowla|",
                    ChowlaMode::CauchyDavenport => "cd|",
                }
            } else {
                ""
            };
            match opts.mode {
                GenMode::Exhaustive => {
                    let group = opts
                        .group
                        .clone()
                        .ok_or_else(|| Error::Usage(format!("{suite} needs --group for exhaustive mode")))?;
                    let nonempty = (1u128 << group.order()) - 1;
                    opts.check_budget(nonempty * nonempty)?;
                    for (a, b) in exhaustive_group_pairs(&group) {
                        out.push(format!("{prefix}{a}|{b}"));
                    }
                }
                GenMode::Random { seed, count } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let pool = opts
                        .group
                        .clone()
                        .map(|g| vec![g])
                        .unwrap_or_else(|| group_pool(opts.max_group_order));
                    for _ in 0..count {
                        let group = &pool[rng.gen_range(0..pool.len())];
                        let a = random_group_subset(&mut rng, group, opts.density);
                        let b = random_group_subset(&mut rng, group, opts.density);
                        out.push(format!("{prefix}{a}|{b}"));
                    }
                }
            }
        }
        SuiteId::DensityOracle => match opts.mode {
            GenMode::Exhaustive => {
                return Err(Error::Usage(
                    "density-oracle runs in random mode only; use --random".into(),
                ))
            }
            GenMode::Random { seed, count } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    out.push(
                        random_ep_set(&mut rng, opts.max_threshold, opts.max_period, opts.density)
                            .to_string(),
                    );
                }
            }
        },
        SuiteId::CongruenceExample => {
            for m in 2..=opts.max_modulus {
                for k in 1..m {
                    for l in 1..=(m - k) {
                        out.push(format!("k={k};l={l};m={m}"));
                    }
                }
            }
        }
    }
    Ok(out)
}

fn random_set(rng: &mut ChaCha8Rng, g: usize, density: f64) -> BoundedIntSet {
    BoundedIntSet::from_elems(g, (1..=g).filter(|_| rng.gen_bool(density))).expect("in range")
}

// ---------------------------------------------------------------------------
// tight-instance search

/// Collect instances achieving equality in the suite's inequality.
/// Supported for dyson-bound, chowla-cd, and kneser.
pub fn search_tight(suite: SuiteId, opts: &SuiteOptions) -> Result<Vec<String>> {
    let mut tight = Vec::new();
    for instance in generate_instances(suite, opts)? {
        if is_tight(suite, &instance)? {
            tight.push(instance);
        }
    }
    Ok(tight)
}

fn is_tight(suite: SuiteId, instance: &str) -> Result<bool> {
    match suite {
        SuiteId::DysonBound => {
            let family: SetFamily = instance.parse()?;
            let profile = RankProfile::compute(&family)?;
            let gamma = gamma_star(&family)?;
            let delta = gamma.min(rat(1, 1));
            if delta <= rat(0, 1) {
                return Ok(false);
            }
            let n = family.len();
            for r in 1..=n {
                let coeff = rat(binomial(n - 1, r - 1) as i64, 1);
                for m in 1..=family.bound() {
                    if rat(profile.phi(r, m)? as i64, 1) == coeff * delta * rat(m as i64, 1) {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        SuiteId::ChowlaCd => {
            let (_, rest) = instance
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("expected mode|A|B: `{instance}`")))?;
            let (a, b) = parse_pair(rest)?;
            if eval_instance(suite, instance)? != Verdict::Pass {
                return Ok(false);
            }
            let m = a.group().order();
            let sum = minkowski_sum(&a, &b)?;
            Ok(sum.cardinality() == m.min(a.cardinality() + b.cardinality() - 1))
        }
        SuiteId::Kneser => {
            let (a, b) = parse_pair(instance)?;
            let sum = minkowski_sum(&a, &b)?;
            if sum.cardinality() >= a.cardinality() + b.cardinality() {
                return Ok(false);
            }
            let h = stabilizer(&sum)?;
            Ok(sum.cardinality() == a.cardinality() + b.cardinality() - h.order())
        }
        other => Err(Error::Usage(format!(
            "search-tight is not defined for suite `{other}`"
        ))),
    }
}

// ---------------------------------------------------------------------------
// replay

#[derive(Debug)]
pub struct ReplayOutcome {
    pub records: u64,
    pub mismatches: Vec<String>,
}

/// Re-evaluate every witness line in a log file and compare verdicts.
pub fn replay(path: &Path) -> Result<ReplayOutcome> {
    let content = std::fs::read_to_string(path)?;
    let mut records = 0;
    let mut mismatches = Vec::new();
    for (lineno, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        let suite: SuiteId = v["suite"]
            .as_str()
            .ok_or_else(|| Error::Parse(format!("line {}: missing suite", lineno + 1)))?
            .parse()?;
        let instance = v["instance"]
            .as_str()
            .ok_or_else(|| Error::Parse(format!("line {}: missing instance", lineno + 1)))?;
        let recorded = v["verdict"].as_str().unwrap_or("");
        let fresh = eval_instance(suite, instance)?;
        records += 1;
        if fresh.as_str() != recorded {
            mismatches.push(format!(
                "line {}: recorded {recorded}, replay got {fresh} for {instance}",
                lineno + 1
            ));
        }
    }
    Ok(ReplayOutcome { records, mismatches })
}
