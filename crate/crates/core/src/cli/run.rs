use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use super::ast::{Command, Entry, ModuleExpr, Operand, Ring, Session, Statement};
use super::parser::{parse_chain, ChainElem};
use crate::algebra::{AlgebraBackend, FactorizationMultiset, PrimeIdeal};
use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, MonomialModule, MonomialSubmodule};
use crate::oracle::{Embedding, RpeEnumerator, DEFAULT_BOUND};
use crate::rpe::{
    annihilator_compare, colon_power_check, factor_intersection, factorization, maximal_primes,
    rpe_filtration_with, verify_filtration, FiltrationCheck, RpeFiltration, RpeStep, TieBreak,
};
use crate::zmodule::{ZModule, ZSubmodule};

/// Process exit status, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    /// Parse or input error.
    InputError = 1,
    /// A theorem's asserted conclusion failed under its hypothesis.
    TheoremViolation = 2,
    /// A computed or claimed filtration failed verification, or the finite
    /// oracle disagreed.
    VerificationFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Environment variable overriding the finite oracle's size bound.
pub const ORACLE_BOUND_VAR: &str = "RPE_ORACLE_BOUND";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub oracle: bool,
    pub oracle_bound: usize,
    pub tie_break: TieBreak,
    /// Directory against which `verify` paths are resolved.
    pub base_dir: PathBuf,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle: false,
            oracle_bound: DEFAULT_BOUND,
            tie_break: TieBreak::Canonical,
            base_dir: PathBuf::from("."),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub json: Value,
    pub status: ExitStatus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub outputs: Vec<CommandOutput>,
}

impl RunReport {
    pub fn status(&self) -> ExitStatus {
        self.outputs
            .iter()
            .map(|o| o.status)
            .max()
            .unwrap_or(ExitStatus::Success)
    }

    pub fn text(&self) -> String {
        self.outputs
            .iter()
            .map(|o| format!("{}\n", o.text))
            .collect()
    }

    /// One compact JSON object per line.
    pub fn json_lines(&self) -> String {
        self.outputs
            .iter()
            .map(|o| format!("{}\n", o.json))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Agree,
    /// Some checks ran and agreed; others were out of the oracle's reach.
    Partial(String),
    Disagree(String),
    Skipped(String),
}

impl OracleVerdict {
    fn combine(verdicts: Vec<OracleVerdict>) -> OracleVerdict {
        if let Some(d) = verdicts
            .iter()
            .find(|v| matches!(v, OracleVerdict::Disagree(_)))
        {
            return d.clone();
        }
        let skipped: Vec<&OracleVerdict> = verdicts
            .iter()
            .filter(|v| !matches!(v, OracleVerdict::Agree))
            .collect();
        match skipped.first() {
            None => OracleVerdict::Agree,
            Some(_) if skipped.len() == verdicts.len() => skipped[0].clone(),
            Some(OracleVerdict::Skipped(why) | OracleVerdict::Partial(why)) => {
                OracleVerdict::Partial(why.clone())
            }
            Some(other) => (*other).clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            OracleVerdict::Agree => json!({ "status": "agree" }),
            OracleVerdict::Partial(why) => json!({ "status": "partial", "detail": why }),
            OracleVerdict::Disagree(why) => json!({ "status": "disagree", "detail": why }),
            OracleVerdict::Skipped(why) => json!({ "status": "skipped", "detail": why }),
        }
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Agree => write!(f, "agree"),
            OracleVerdict::Partial(why) => write!(f, "partial agreement ({why})"),
            OracleVerdict::Disagree(why) => write!(f, "disagree ({why})"),
            OracleVerdict::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

/// A claim the finite oracle can re-derive by brute force.
pub(crate) enum OracleQuery<'a, S> {
    Factor {
        n: &'a S,
        factorization: &'a FactorizationMultiset,
    },
    Filtration {
        filtration: &'a RpeFiltration<S>,
    },
    Ass {
        n: &'a S,
        ass: &'a BTreeSet<PrimeIdeal>,
    },
    ColonPrime {
        n: &'a S,
        prime: &'a PrimeIdeal,
        result: &'a S,
    },
    /// `(N : K)` as an ideal of the ring.
    ColonSub {
        n: &'a S,
        k: &'a S,
        ideal: &'a S,
    },
    Intersect {
        n: &'a S,
        k: &'a S,
        meet: &'a S,
    },
    Ann {
        n: &'a S,
        ideal: &'a S,
    },
}

#[derive(Clone, Debug)]
enum Space {
    Mono(MonomialModule),
    Int(ZModule),
}

#[derive(Clone, Debug)]
pub(crate) enum Val {
    Mono(MonomialSubmodule),
    Int(ZSubmodule),
}

/// Backend-specific glue between session values and the generic engine.
pub(crate) trait CliBackend: AlgebraBackend {
    fn unwrap(v: &Val) -> Option<&Self::Sub>;

    /// The prime this ideal of the ring equals, if any.
    fn as_prime(ideal: &Self::Sub) -> Option<PrimeIdeal>;

    fn oracle(&self, _query: &OracleQuery<'_, Self::Sub>, _bound: usize) -> OracleVerdict {
        OracleVerdict::Skipped("no finite model for polynomial modules".into())
    }
}

impl CliBackend for MonomialModule {
    fn unwrap(v: &Val) -> Option<&MonomialSubmodule> {
        match v {
            Val::Mono(s) => Some(s),
            Val::Int(_) => None,
        }
    }

    fn as_prime(ideal: &MonomialSubmodule) -> Option<PrimeIdeal> {
        ideal.as_ideal()?.as_prime().map(PrimeIdeal::Monomial)
    }
}

fn ideal_generator(ideal: &ZSubmodule) -> BigInt {
    ideal
        .basis()
        .first()
        .map_or_else(BigInt::zero, |v| v[0].clone())
}

/// The finite model of `M/base`, or why there is none.
fn quotient_model(
    m: &ZModule,
    base: &ZSubmodule,
    bound: usize,
) -> std::result::Result<Embedding, OracleVerdict> {
    let mut relations = m.relations().to_vec();
    relations.extend(base.basis().iter().cloned());
    let q = ZModule::new(m.rank(), relations).map_err(|e| OracleVerdict::Skipped(e.to_string()))?;
    match Embedding::new(&q, bound) {
        Ok(e) => Ok(e),
        Err(Error::OracleBound { bound, .. }) => Err(OracleVerdict::Skipped(format!(
            "quotient has more than {bound} elements"
        ))),
        Err(_) => Err(OracleVerdict::Skipped("quotient is infinite".into())),
    }
}

fn oracle_factor(
    m: &ZModule,
    n: &ZSubmodule,
    fact: &FactorizationMultiset,
    bound: usize,
) -> OracleVerdict {
    let emb = match quotient_model(m, n, bound) {
        Ok(e) => e,
        Err(v) => return v,
    };
    let mut enumerator = RpeEnumerator::new(&emb.module);
    let zero = emb.module.zero();
    match enumerator.all_rpe_filtrations(&zero) {
        Ok(all) => {
            let found: BTreeSet<FactorizationMultiset> = all.iter().map(|f| f.multiset()).collect();
            if found.len() == 1 && found.contains(fact) {
                OracleVerdict::Agree
            } else {
                let list: Vec<String> = found.iter().map(ToString::to_string).collect();
                OracleVerdict::Disagree(format!(
                    "oracle factorizations {{{}}} vs {fact}",
                    list.join(", ")
                ))
            }
        }
        Err(e) => OracleVerdict::Disagree(e.to_string()),
    }
}

impl CliBackend for ZModule {
    fn unwrap(v: &Val) -> Option<&ZSubmodule> {
        match v {
            Val::Int(s) => Some(s),
            Val::Mono(_) => None,
        }
    }

    fn as_prime(ideal: &ZSubmodule) -> Option<PrimeIdeal> {
        ideal_generator(ideal)
            .to_u64()
            .and_then(|g| PrimeIdeal::integer(g).ok())
    }

    fn oracle(&self, query: &OracleQuery<'_, ZSubmodule>, bound: usize) -> OracleVerdict {
        let model = |base: &ZSubmodule| quotient_model(self, base, bound);
        match query {
            OracleQuery::Factor { n, factorization } => {
                oracle_factor(self, n, factorization, bound)
            }
            OracleQuery::Filtration { filtration } => {
                let emb = match model(&filtration.base) {
                    Ok(e) => e,
                    Err(v) => return v,
                };
                let mut enumerator = RpeEnumerator::new(&emb.module);
                let mut prev = emb.module.zero();
                for (i, step) in filtration.steps.iter().enumerate() {
                    let expected = emb.image(&step.module);
                    match enumerator.maximal_prime_extension(&prev, &step.prime) {
                        Ok(k) if k == expected => prev = k,
                        Ok(_) => {
                            return OracleVerdict::Disagree(format!(
                                "step {} differs from the oracle",
                                i + 1
                            ))
                        }
                        Err(e) => return OracleVerdict::Disagree(format!("step {}: {e}", i + 1)),
                    }
                }
                oracle_factor(self, &filtration.base, &filtration.multiset(), bound)
            }
            OracleQuery::Ass { n, ass } => match model(n) {
                Ok(emb) => {
                    let brute = emb.module.brute_ass(&emb.module.zero());
                    if &brute == *ass {
                        OracleVerdict::Agree
                    } else {
                        OracleVerdict::Disagree(format!("oracle Ass has {} primes", brute.len()))
                    }
                }
                Err(v) => v,
            },
            OracleQuery::ColonPrime { n, prime, result } => match model(n) {
                Ok(emb) => {
                    let q = prime.as_integer().unwrap_or(0);
                    if emb.module.colon_integer(&emb.module.zero(), q) == emb.image(result) {
                        OracleVerdict::Agree
                    } else {
                        OracleVerdict::Disagree(format!("(N : {prime}) differs from the oracle"))
                    }
                }
                Err(v) => v,
            },
            OracleQuery::ColonSub { n, k, ideal } => match model(n) {
                Ok(emb) => {
                    let g = emb
                        .module
                        .colon_generator(&emb.module.zero(), &emb.image(k));
                    if BigInt::from(g) == ideal_generator(ideal) {
                        OracleVerdict::Agree
                    } else {
                        OracleVerdict::Disagree(format!("oracle colon is ({g})"))
                    }
                }
                Err(v) => v,
            },
            OracleQuery::Intersect { n, k, meet } => match model(meet) {
                Ok(emb) => {
                    if emb.image(n).intersect(&emb.image(k)) == emb.module.zero() {
                        OracleVerdict::Agree
                    } else {
                        OracleVerdict::Disagree("intersection is not the oracle's".into())
                    }
                }
                Err(v) => v,
            },
            OracleQuery::Ann { n, ideal } => match model(n) {
                Ok(emb) => {
                    let e = emb.module.exponent();
                    if BigInt::from(e) == ideal_generator(ideal) {
                        OracleVerdict::Agree
                    } else {
                        OracleVerdict::Disagree(format!("oracle annihilator is ({e})"))
                    }
                }
                Err(v) => v,
            },
        }
    }
}

struct Object {
    ambient: String,
    value: Val,
}

struct Env {
    ring: Ring,
    spaces: HashMap<String, Space>,
    objects: HashMap<String, Object>,
}

impl Env {
    fn build(session: &Session) -> Result<Env> {
        let ring = session.ring().cloned().unwrap_or(Ring::Integers);
        let mut env = Env {
            spaces: HashMap::new(),
            objects: HashMap::new(),
            ring: ring.clone(),
        };
        env.spaces.insert(
            ring.symbol().into(),
            env.module_space(&ModuleExpr {
                rank: 1,
                relations: vec![],
            })?,
        );
        for s in &session.statements {
            match s {
                Statement::Ideal { name, gens } => {
                    let value = env.ideal_value(gens)?;
                    env.objects.insert(
                        name.clone(),
                        Object {
                            ambient: ring.symbol().into(),
                            value,
                        },
                    );
                }
                Statement::Module { name, module } => {
                    let space = env.module_space(module)?;
                    env.spaces.insert(name.clone(), space);
                }
                Statement::Sub { name, of, vectors } => {
                    let value = env.sub_value(of, vectors)?;
                    env.objects.insert(
                        name.clone(),
                        Object {
                            ambient: of.clone(),
                            value,
                        },
                    );
                }
                Statement::Ring(_) | Statement::Command(_) => {}
            }
        }
        Ok(env)
    }

    fn nvars(&self) -> usize {
        self.ring.vars().len()
    }

    fn module_space(&self, m: &ModuleExpr) -> Result<Space> {
        Ok(match self.ring {
            Ring::Polynomial { .. } => Space::Mono(MonomialModule::new(self.nvars(), m.rank)?),
            Ring::Integers => Space::Int(ZModule::new(m.rank, m.relations.clone())?),
        })
    }

    fn ideal_value(&self, gens: &[Entry]) -> Result<Val> {
        Ok(match self.ring {
            Ring::Polynomial { .. } => {
                let monos: Vec<Monomial> = gens
                    .iter()
                    .filter_map(|g| match g {
                        Entry::Monomial(m) => Some(m.clone()),
                        _ => None,
                    })
                    .collect();
                Val::Mono(MonomialSubmodule::from_ideal(MonomialIdeal::new(
                    self.nvars(),
                    monos,
                )?))
            }
            Ring::Integers => Val::Int(
                ZModule::free(1)
                    .submodule(gens.iter().map(|g| vec![entry_integer(g)]).collect())?,
            ),
        })
    }

    fn sub_value(&self, of: &str, vectors: &[Vec<Entry>]) -> Result<Val> {
        match self.space(of)? {
            Space::Mono(m) => {
                let mut comps = vec![Vec::new(); m.rank];
                for v in vectors {
                    for (j, e) in v.iter().enumerate() {
                        if let Entry::Monomial(mono) = e {
                            comps[j].push(mono.clone());
                        }
                    }
                }
                let ideals = comps
                    .into_iter()
                    .map(|g| MonomialIdeal::new(m.nvars, g))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Val::Mono(MonomialSubmodule::new(ideals)?))
            }
            Space::Int(z) => Ok(Val::Int(
                z.submodule(
                    vectors
                        .iter()
                        .map(|v| v.iter().map(entry_integer).collect())
                        .collect(),
                )?,
            )),
        }
    }

    fn render_value(&self, ambient: &str, v: &Val) -> Result<String> {
        match (self.space(ambient)?, v) {
            (Space::Mono(m), Val::Mono(s)) => Ok(m.render(s, self.ring.vars())),
            (Space::Int(z), Val::Int(s)) => Ok(z.render_submodule(s)),
            _ => Err(Error::BackendMismatch("value", "module")),
        }
    }

    fn space(&self, name: &str) -> Result<&Space> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown module `{name}`")))
    }

    fn resolve(&self, op: &Operand) -> Result<(String, Val)> {
        match op {
            Operand::Name(n) => {
                let o = self
                    .objects
                    .get(n)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown name `{n}`")))?;
                Ok((o.ambient.clone(), o.value.clone()))
            }
            Operand::Ideal(gens) => Ok((self.ring.symbol().into(), self.ideal_value(gens)?)),
        }
    }

    fn chain_value(&self, ambient: &str, elem: &ChainElem) -> Result<Val> {
        let space = self.space(ambient)?;
        let rank = match space {
            Space::Mono(m) => m.rank,
            Space::Int(z) => z.rank(),
        };
        let is_ring = ambient == self.ring.symbol();
        Ok(match elem {
            ChainElem::Whole(r) => {
                if r.is_some_and(|r| r != rank) {
                    return Err(Error::AmbientMismatch(format!(
                        "rank {} in a chain of rank-{rank} modules",
                        r.unwrap()
                    )));
                }
                match space {
                    Space::Mono(m) => Val::Mono(m.whole()),
                    Space::Int(z) => Val::Int(z.whole()),
                }
            }
            ChainElem::Zero => match space {
                Space::Mono(m) => {
                    Val::Mono(MonomialSubmodule::new(vec![
                        MonomialIdeal::zero(m.nvars);
                        rank
                    ])?)
                }
                Space::Int(z) => Val::Int(z.zero_submodule()),
            },
            ChainElem::Name(n) => {
                let o = &self.objects[n];
                if o.ambient != ambient {
                    return Err(Error::AmbientMismatch(format!(
                        "`{n}` is not a submodule of {ambient}"
                    )));
                }
                o.value.clone()
            }
            ChainElem::Ideal(gens) => {
                if !is_ring {
                    return Err(Error::AmbientMismatch(format!(
                        "an ideal cannot stand for a submodule of {ambient}"
                    )));
                }
                self.ideal_value(gens)?
            }
            ChainElem::Components(parts) => {
                let Space::Mono(_) = space else {
                    return Err(Error::InvalidInput(
                        "component lists need a polynomial ring".into(),
                    ));
                };
                if parts.len() != rank {
                    return Err(Error::AmbientMismatch(format!(
                        "{} components for rank {rank}",
                        parts.len()
                    )));
                }
                let ring_name = self.ring.symbol();
                let ideals = parts
                    .iter()
                    .map(|p| match self.chain_value(ring_name, p)? {
                        Val::Mono(s) if s.rank() == 1 => Ok(s.components()[0].clone()),
                        _ => Err(Error::InvalidInput(
                            "each component must be an ideal".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Val::Mono(MonomialSubmodule::new(ideals)?)
            }
            ChainElem::Span(vectors) => {
                let Space::Int(z) = space else {
                    return Err(Error::InvalidInput("integer spans need ring Z".into()));
                };
                Val::Int(z.submodule(vectors.clone())?)
            }
            ChainElem::DirectSum(ds) => {
                let Space::Int(z) = space else {
                    return Err(Error::InvalidInput("direct sums need ring Z".into()));
                };
                if ds.len() != rank {
                    return Err(Error::AmbientMismatch(format!(
                        "{} summands for rank {rank}",
                        ds.len()
                    )));
                }
                let gens = ds
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        let mut v = vec![BigInt::zero(); rank];
                        v[i] = d.clone();
                        v
                    })
                    .collect();
                Val::Int(z.submodule(gens)?)
            }
        })
    }
}

fn entry_integer(e: &Entry) -> BigInt {
    match e {
        Entry::Integer(n) => n.clone(),
        _ => BigInt::zero(),
    }
}

pub(crate) fn prime_json(p: &PrimeIdeal, names: &[String]) -> Value {
    match p {
        PrimeIdeal::Monomial(m) => json!(m
            .vars()
            .iter()
            .map(|&i| crate::algebra::var_name(names, i))
            .collect::<Vec<_>>()),
        PrimeIdeal::Integer(q) => json!(q),
    }
}

pub(crate) fn multiset_json(m: &FactorizationMultiset, names: &[String]) -> Value {
    Value::Array(
        m.iter()
            .map(|(p, k)| json!({ "prime": prime_json(p, names), "multiplicity": k }))
            .collect(),
    )
}

fn primes_text(primes: &BTreeSet<PrimeIdeal>, names: &[String]) -> String {
    let parts: Vec<String> = primes.iter().map(|p| p.render(names)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn primes_json(primes: &BTreeSet<PrimeIdeal>, names: &[String]) -> Value {
    Value::Array(primes.iter().map(|p| prime_json(p, names)).collect())
}

/// Result of one command before it is rendered.
struct Outcome {
    summary: String,
    result: Map<String, Value>,
    verdicts: Map<String, Value>,
    status: ExitStatus,
    oracle: Vec<OracleVerdict>,
}

impl Outcome {
    fn new(summary: String) -> Self {
        Outcome {
            summary,
            result: Map::new(),
            verdicts: Map::new(),
            status: ExitStatus::Success,
            oracle: Vec::new(),
        }
    }

    fn fail(&mut self, status: ExitStatus) {
        self.status = self.status.max(status);
    }
}

struct Ctx<'a> {
    names: &'a [String],
    opts: &'a RunOptions,
    env: &'a Env,
}

fn exec<B: CliBackend>(
    b: &B,
    ring: &B,
    cmd: &Command,
    ops: &[Val],
    ctx: &Dispatch<'_>,
) -> Result<Outcome> {
    let names = ctx.names;
    let arg = |i: usize| -> Result<&B::Sub> {
        B::unwrap(&ops[i]).ok_or(Error::BackendMismatch("operand", "ring"))
    };
    let oracle = |q: OracleQuery<'_, B::Sub>| b.oracle(&q, ctx.opts.oracle_bound);
    let tie = ctx.opts.tie_break;
    let mut out;
    match cmd {
        Command::Factor(_) => {
            let n = arg(0)?;
            let f = rpe_filtration_with(b, n, tie)?;
            let fact = f.multiset();
            out = Outcome::new(fact.render(names));
            out.result
                .insert("factorization".into(), multiset_json(&fact, names));
            out.result.insert("text".into(), json!(fact.render(names)));
            out.result.insert("degree".into(), json!(fact.degree()));
            record_check(&mut out, verify_filtration(b, &f)?);
            if ctx.opts.oracle {
                out.oracle.push(oracle(OracleQuery::Factor {
                    n,
                    factorization: &fact,
                }));
            }
        }
        Command::Filtration(_) => {
            let n = arg(0)?;
            let f = rpe_filtration_with(b, n, tie)?;
            out = Outcome::new(f.render(b, names));
            out.result
                .insert("base".into(), json!(b.render(&f.base, names)));
            out.result.insert(
                "steps".into(),
                Value::Array(
                    f.steps
                        .iter()
                        .map(|s| json!({ "prime": prime_json(&s.prime, names), "module": b.render(&s.module, names) }))
                        .collect(),
                ),
            );
            out.result.insert("text".into(), json!(f.render(b, names)));
            record_check(&mut out, verify_filtration(b, &f)?);
            if ctx.opts.oracle {
                out.oracle
                    .push(oracle(OracleQuery::Filtration { filtration: &f }));
            }
        }
        Command::Ass(_) => {
            let n = arg(0)?;
            let ass = b.ass(n)?;
            out = Outcome::new(primes_text(&ass, names));
            out.result.insert("primes".into(), primes_json(&ass, names));
            out.result
                .insert("text".into(), json!(primes_text(&ass, names)));
            if ctx.opts.oracle {
                out.oracle.push(oracle(OracleQuery::Ass { n, ass: &ass }));
            }
        }
        Command::Colon(..) => {
            let n = arg(0)?;
            let second = &ops[1];
            let prime = match (B::unwrap(second), ctx.second_is_ring) {
                (Some(s), true) => B::as_prime(s),
                _ => None,
            };
            if let Some(p) = prime {
                let k = b.colon_prime(n, &p)?;
                out = Outcome::new(b.render(&k, names));
                out.result.insert("kind".into(), json!("prime"));
                out.result.insert("prime".into(), prime_json(&p, names));
                out.result
                    .insert("module".into(), json!(b.render(&k, names)));
                if ctx.opts.oracle {
                    out.oracle.push(oracle(OracleQuery::ColonPrime {
                        n,
                        prime: &p,
                        result: &k,
                    }));
                }
            } else {
                if !ctx.same_ambient {
                    return Err(Error::AmbientMismatch(
                        "the second operand must be a prime ideal or a submodule of the same module".into(),
                    ));
                }
                let k = arg(1)?;
                let c = b.colon_submodule(n, k)?;
                out = Outcome::new(ring.render(&c, names));
                out.result.insert("kind".into(), json!("submodule"));
                out.result
                    .insert("ideal".into(), json!(ring.render(&c, names)));
                if b.leq(n, k)? && !b.is_whole(n)? {
                    let v = colon_power_check(b, n, k)?;
                    out.verdicts
                        .insert("ass_included".into(), json!(v.ass_included));
                    out.verdicts.insert("power_ok".into(), json!(v.power_ok));
                    out.verdicts.insert(
                        "prime_power".into(),
                        v.prime_power.as_ref().map_or(
                            Value::Null,
                            |(p, m)| json!({ "prime": prime_json(p, names), "exponent": m }),
                        ),
                    );
                    if !v.holds() {
                        out.fail(ExitStatus::TheoremViolation);
                    }
                }
                if ctx.opts.oracle {
                    out.oracle
                        .push(oracle(OracleQuery::ColonSub { n, k, ideal: &c }));
                }
            }
        }
        Command::Intersect(..) => {
            let (n, k) = (arg(0)?, arg(1)?);
            let meet = b.intersect(n, k)?;
            out = Outcome::new(b.render(&meet, names));
            out.result
                .insert("module".into(), json!(b.render(&meet, names)));
            if ctx.opts.oracle {
                out.oracle
                    .push(oracle(OracleQuery::Intersect { n, k, meet: &meet }));
            }
        }
        Command::Ann(_) => {
            let n = arg(0)?;
            let a = b.annihilator(n)?;
            out = Outcome::new(ring.render(&a, names));
            out.result
                .insert("ideal".into(), json!(ring.render(&a, names)));
            if ctx.opts.oracle {
                out.oracle.push(oracle(OracleQuery::Ann { n, ideal: &a }));
            }
        }
        Command::CompareAnn(_) => {
            let n = arg(0)?;
            let v = annihilator_compare(b, n)?;
            out = Outcome::new(format!(
                "ann = {}; P_M(N) = {}; P_R(ann) = {}; Ass(R/ann) = {}; multiple = {}; isolated = {}; equal = {}",
                ring.render(&v.annihilator, names),
                v.module_factorization.render(names),
                v.ring_factorization.render(names),
                primes_text(&v.ring_ass, names),
                v.multiple,
                v.isolated,
                v.equal
            ));
            out.result.insert(
                "annihilator".into(),
                json!(ring.render(&v.annihilator, names)),
            );
            out.result
                .insert("pm".into(), json!(v.module_factorization.render(names)));
            out.result
                .insert("pr".into(), json!(v.ring_factorization.render(names)));
            out.result
                .insert("ass_module".into(), primes_json(&v.module_ass, names));
            out.result
                .insert("ass_ring".into(), primes_json(&v.ring_ass, names));
            out.verdicts.insert("multiple".into(), json!(v.multiple));
            out.verdicts
                .insert("ass_included".into(), json!(v.ass_included));
            out.verdicts.insert("isolated".into(), json!(v.isolated));
            out.verdicts.insert("equal".into(), json!(v.equal));
            if !v.holds() {
                out.fail(ExitStatus::TheoremViolation);
            }
            if ctx.opts.oracle {
                out.oracle.push(oracle(OracleQuery::Factor {
                    n,
                    factorization: &v.module_factorization,
                }));
                out.oracle.push(oracle(OracleQuery::Ann {
                    n,
                    ideal: &v.annihilator,
                }));
            }
        }
        Command::CompareIntersection(..) => {
            let (n, k) = (arg(0)?, arg(1)?);
            let v = factor_intersection(b, n, k).map_err(|e| match e {
                Error::NotComparable(_) => match (factorization(b, n), factorization(b, k)) {
                    (Ok(pn), Ok(pk)) => Error::NotComparable(format!(
                        "{} differs from {}",
                        pn.render(names),
                        pk.render(names)
                    )),
                    _ => e,
                },
                e => e,
            })?;
            out = Outcome::new(format!(
                "P = {}; P(intersection) = {}; equal = {}; guaranteed = {}",
                v.factorization.render(names),
                v.intersection_factorization.render(names),
                v.equal,
                v.guaranteed
            ));
            out.result.insert(
                "intersection".into(),
                json!(b.render(&v.intersection, names)),
            );
            out.result
                .insert("p_n".into(), json!(v.factorization.render(names)));
            out.result.insert(
                "p_intersection".into(),
                json!(v.intersection_factorization.render(names)),
            );
            out.verdicts.insert("equal".into(), json!(v.equal));
            out.verdicts
                .insert("guaranteed".into(), json!(v.guaranteed));
            if !v.holds() {
                out.fail(ExitStatus::TheoremViolation);
            }
            if ctx.opts.oracle {
                out.oracle.push(oracle(OracleQuery::Factor {
                    n,
                    factorization: &v.factorization,
                }));
                out.oracle.push(oracle(OracleQuery::Factor {
                    n: k,
                    factorization: &v.factorization,
                }));
                out.oracle.push(oracle(OracleQuery::Factor {
                    n: &v.intersection,
                    factorization: &v.intersection_factorization,
                }));
            }
        }
        Command::Verify(_) => unreachable!("verify is handled by verify_chain"),
    }
    Ok(out)
}

fn record_check(out: &mut Outcome, check: FiltrationCheck) {
    match check {
        FiltrationCheck::Valid => {
            out.verdicts.insert("verified".into(), json!(true));
        }
        FiltrationCheck::Invalid { step, reason } => {
            out.verdicts.insert("verified".into(), json!(false));
            out.verdicts
                .insert("failure".into(), json!({ "step": step, "reason": reason }));
            out.fail(ExitStatus::VerificationFailure);
        }
    }
}

/// A filtration, or the index and reason of the first step that fails.
type Inferred<S> = std::result::Result<RpeFiltration<S>, (usize, String)>;

/// Fills in omitted primes: the prime at a step is the maximal associated
/// prime whose colon gives the next module.
fn infer_filtration<B: CliBackend>(
    b: &B,
    modules: &[B::Sub],
    primes: &[Option<PrimeIdeal>],
) -> Result<Inferred<B::Sub>> {
    let mut steps = Vec::new();
    for (i, pair) in modules.windows(2).enumerate() {
        let prime = match &primes[i] {
            Some(p) => p.clone(),
            None => {
                if b.is_whole(&pair[0])? {
                    return Ok(Err((i + 1, "extends the whole module".into())));
                }
                let mut found = None;
                for p in maximal_primes(&b.ass(&pair[0])?)? {
                    if b.eq(&b.colon_prime(&pair[0], &p)?, &pair[1])? {
                        found = Some(p);
                        break;
                    }
                }
                match found {
                    Some(p) => p,
                    None => {
                        return Ok(Err((
                            i + 1,
                            "no regular prime extension gives the next module".into(),
                        )))
                    }
                }
            }
        };
        steps.push(RpeStep {
            prime,
            module: pair[1].clone(),
        });
    }
    Ok(Ok(RpeFiltration {
        base: modules[0].clone(),
        steps,
    }))
}

fn verify_chain<B: CliBackend>(
    b: &B,
    modules: &[Val],
    primes: &[Option<PrimeIdeal>],
    ctx: &Ctx<'_>,
) -> Result<Outcome> {
    let names = ctx.names;
    let subs = modules
        .iter()
        .map(|m| {
            B::unwrap(m)
                .cloned()
                .ok_or(Error::BackendMismatch("chain", "ring"))
        })
        .collect::<Result<Vec<_>>>()?;
    let (check, filtration) = match infer_filtration(b, &subs, primes)? {
        Ok(f) => (verify_filtration(b, &f)?, Some(f)),
        Err((step, reason)) => (FiltrationCheck::Invalid { step, reason }, None),
    };
    let mut out = Outcome::new(match &check {
        FiltrationCheck::Valid => "valid".to_string(),
        FiltrationCheck::Invalid { step, reason } => format!("invalid at step {step}: {reason}"),
    });
    if let Some(f) = &filtration {
        out.result.insert("text".into(), json!(f.render(b, names)));
        out.result.insert(
            "primes".into(),
            Value::Array(
                f.steps
                    .iter()
                    .map(|s| prime_json(&s.prime, names))
                    .collect(),
            ),
        );
    }
    out.verdicts.insert("valid".into(), json!(check.is_valid()));
    let valid = check.is_valid();
    record_check(&mut out, check);
    out.verdicts.remove("verified");
    if let (true, Some(f)) = (valid, &filtration) {
        if !f.is_empty() {
            let computed = rpe_filtration_with(b, &f.base, ctx.opts.tie_break)?.multiset();
            let same = computed == f.multiset();
            out.verdicts
                .insert("matches_factorization".into(), json!(same));
            if !same {
                out.fail(ExitStatus::TheoremViolation);
            }
            if ctx.opts.oracle {
                let q = OracleQuery::Filtration { filtration: f };
                out.oracle.push(b.oracle(&q, ctx.opts.oracle_bound));
            }
        }
    }
    Ok(out)
}

impl Ctx<'_> {
    fn ring_prime(&self, gens: &[Entry]) -> Result<PrimeIdeal> {
        let v = self.env.ideal_value(gens)?;
        let p = match &v {
            Val::Mono(s) => MonomialModule::as_prime(s),
            Val::Int(s) => ZModule::as_prime(s),
        };
        p.ok_or_else(|| {
            Error::InvalidPrime(format!(
                "({}) is not a prime ideal",
                render_gens(gens, self.names)
            ))
        })
    }
}

fn render_gens(gens: &[Entry], names: &[String]) -> String {
    gens.iter()
        .map(|g| g.render(names))
        .collect::<Vec<_>>()
        .join(",")
}

fn run_verify(path: &str, ctx: &Ctx<'_>, session: &Session) -> Result<Outcome> {
    let full = ctx.opts.base_dir.join(path);
    let text = std::fs::read_to_string(&full)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", full.display())))?;
    let chain = parse_chain(&text, session).map_err(|e| match e {
        Error::Parse { line, col, message } => {
            Error::InvalidInput(format!("{path}:{line}:{col}: {message}"))
        }
        other => other,
    })?;
    let ambient = chain
        .module
        .clone()
        .unwrap_or_else(|| ctx.env.ring.symbol().to_string());
    let modules = chain
        .elements
        .iter()
        .map(|e| ctx.env.chain_value(&ambient, e))
        .collect::<Result<Vec<_>>>()?;
    let primes = chain
        .primes
        .iter()
        .map(|p| p.as_ref().map(|g| ctx.ring_prime(g)).transpose())
        .collect::<Result<Vec<_>>>()?;
    let mut out = match ctx.env.space(&ambient)? {
        Space::Mono(m) => verify_chain(m, &modules, &primes, ctx)?,
        Space::Int(z) => verify_chain(z, &modules, &primes, ctx)?,
    };
    out.result.insert("file".into(), json!(path));
    Ok(out)
}

struct Dispatch<'a> {
    ctx: Ctx<'a>,
    second_is_ring: bool,
    same_ambient: bool,
}

impl<'a> std::ops::Deref for Dispatch<'a> {
    type Target = Ctx<'a>;
    fn deref(&self) -> &Ctx<'a> {
        &self.ctx
    }
}

fn run_command(
    cmd: &Command,
    env: &Env,
    session: &Session,
    opts: &RunOptions,
) -> Result<(Outcome, Vec<(String, String)>)> {
    let names = env.ring.vars();
    let ctx = Ctx { names, opts, env };
    if let Command::Verify(path) = cmd {
        return Ok((run_verify(path, &ctx, session)?, Vec::new()));
    }
    let resolved = cmd
        .operands()
        .into_iter()
        .map(|op| env.resolve(op))
        .collect::<Result<Vec<_>>>()?;
    let ambient = resolved[0].0.clone();
    let ring_name = env.ring.symbol();
    let same_ambient = resolved.iter().all(|(a, _)| *a == ambient);
    let second_is_ring = resolved.get(1).is_some_and(|(a, _)| a == ring_name);
    if !same_ambient && !matches!(cmd, Command::Colon(..)) {
        return Err(Error::AmbientMismatch(
            "operands live in different modules".into(),
        ));
    }
    let values: Vec<Val> = resolved.iter().map(|(_, v)| v.clone()).collect();
    let dispatch = Dispatch {
        ctx,
        second_is_ring,
        same_ambient,
    };
    let inputs = cmd
        .operands()
        .iter()
        .zip(&resolved)
        .map(|(op, (amb, v))| Ok((op.render(names), env.render_value(amb, v)?)))
        .collect::<Result<Vec<_>>>()?;
    let outcome = match (env.space(&ambient)?, env.space(ring_name)?) {
        (Space::Mono(m), Space::Mono(r)) => exec(m, r, cmd, &values, &dispatch)?,
        (Space::Int(z), Space::Int(r)) => exec(z, r, cmd, &values, &dispatch)?,
        _ => return Err(Error::BackendMismatch("module", "ring")),
    };
    Ok((outcome, inputs))
}

/// Exit status for an error raised while executing a command.
fn error_status(e: &Error) -> ExitStatus {
    match e {
        Error::Verification(_) | Error::StepCapExceeded(_) => ExitStatus::VerificationFailure,
        _ => ExitStatus::InputError,
    }
}

/// Executes every command of `session` in order. Errors in one command are
/// reported in its output and do not stop later commands.
pub fn run(session: &Session, opts: &RunOptions) -> RunReport {
    let names = session
        .ring()
        .map(|r| r.vars().to_vec())
        .unwrap_or_default();
    let env = match Env::build(session) {
        Ok(env) => env,
        Err(e) => {
            return RunReport {
                outputs: vec![CommandOutput {
                    text: format!("error: {e}"),
                    json: json!({ "command": "session", "inputs": [], "result": null, "verdicts": {}, "error": e.to_string(), "status": 1 }),
                    status: ExitStatus::InputError,
                }],
            }
        }
    };
    let mut outputs = Vec::new();
    for (cmd, pos) in session.commands() {
        let label = cmd.render(&names);
        let output = match run_command(cmd, &env, session, opts) {
            Ok((mut out, inputs)) => {
                let mut text = format!("{label}: {}", out.summary);
                let mut verdicts = std::mem::take(&mut out.verdicts);
                if opts.oracle {
                    let v = OracleVerdict::combine(std::mem::take(&mut out.oracle));
                    if matches!(v, OracleVerdict::Disagree(_)) {
                        out.fail(ExitStatus::VerificationFailure);
                    }
                    text.push_str(&format!(" [oracle: {v}]"));
                    verdicts.insert("oracle".into(), v.to_json());
                }
                if out.status == ExitStatus::TheoremViolation {
                    text.push_str(" [THEOREM VIOLATED]");
                } else if out.status == ExitStatus::VerificationFailure {
                    text.push_str(" [VERIFICATION FAILED]");
                }
                let inputs: Vec<Value> = if let Command::Verify(path) = cmd {
                    vec![json!({ "operand": path })]
                } else {
                    inputs
                        .into_iter()
                        .map(|(op, value)| json!({ "operand": op, "value": value }))
                        .collect()
                };
                CommandOutput {
                    text,
                    json: json!({
                        "command": cmd.keyword(),
                        "inputs": inputs,
                        "result": Value::Object(out.result),
                        "verdicts": Value::Object(verdicts),
                        "status": out.status.code(),
                    }),
                    status: out.status,
                }
            }
            Err(e) => {
                let status = error_status(&e);
                CommandOutput {
                    text: format!("{label}: error at {pos}: {e}"),
                    json: json!({
                        "command": cmd.keyword(),
                        "inputs": cmd.operands().iter().map(|o| json!({ "operand": o.render(&names) })).collect::<Vec<_>>(),
                        "result": null,
                        "verdicts": {},
                        "error": e.to_string(),
                        "status": status.code(),
                    }),
                    status,
                }
            }
        };
        outputs.push(output);
    }
    RunReport { outputs }
}
