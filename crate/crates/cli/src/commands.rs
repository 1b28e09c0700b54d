use std::path::Path;
use std::sync::Arc;

use rankmet::code::{rank_from_system, rank_weight, RankCode};
use rankmet::geometry::QSystem;
use rankmet::gf::{prime_power, FieldCtx};
use rankmet::hamming::{associated_code, associated_weight, HammingCode};
use rankmet::identities::{pless_values, total_weight_stats};
use rankmet::io::{parse_document, CodeFile, Document, SystemFile, SCHEMA_VERSION};
use rankmet::linalg::{Budget, Level, Subspace};
use rankmet::minimal::{
    bounds_ledger, construct_k_minus_1_m, construct_scattered_633, construct_simplex, extend_minimal,
    is_minimal, search_minimal, Strategy,
};
use rankmet::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::{ConstructArgs, FieldArgs, Kind, MethodArg, SearchArgs, Suite};

pub struct Output {
    pub report: Value,
    pub status: u8,
}

pub struct Failure {
    pub code: u8,
    pub error: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::InternalInconsistency(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            error: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<Output, Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        error: msg.into(),
    }
}

fn read_document(path: &Path) -> std::result::Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

/// Report fields computed independently, so one over-budget field leaves the rest intact.
struct Fields {
    map: Map<String, Value>,
    status: Map<String, Value>,
    budget_hit: bool,
}

impl Fields {
    fn new() -> Self {
        Fields {
            map: Map::new(),
            status: Map::new(),
            budget_hit: false,
        }
    }

    fn put(&mut self, name: &str, v: Value) {
        self.map.insert(name.to_string(), v);
    }

    fn try_put<T: Serialize>(&mut self, name: &str, r: rankmet::Result<T>) -> std::result::Result<Option<T>, Failure> {
        match r {
            Ok(x) => {
                self.map.insert(name.to_string(), to_value(&x));
                self.status.insert(name.to_string(), json!("ok"));
                Ok(Some(x))
            }
            Err(e @ Error::BudgetExceeded { .. }) => {
                self.map.insert(name.to_string(), Value::Null);
                self.status.insert(name.to_string(), json!(format!("budget exceeded: {e}")));
                self.budget_hit = true;
                Ok(None)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn finish(mut self) -> Output {
        let status = if self.budget_hit { 3 } else { 0 };
        self.map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        self.map.insert("status".into(), Value::Object(self.status));
        Output {
            report: Value::Object(self.map),
            status,
        }
    }
}

fn parameters(c: &RankCode) -> Value {
    json!({"q": c.q(), "m": c.m(), "n": c.n(), "k": c.k(), "field": c.ctx().spec()})
}

fn analyze_rank(c: &RankCode, method: MethodArg, budget: Budget, f: &mut Fields) -> std::result::Result<(), Failure> {
    if c.k() == 0 {
        return Err(input_error("the zero code has nothing to analyze"));
    }
    f.put("parameters", parameters(c));
    f.put("effective_length", json!(c.effective_length()));
    f.put("nondegeneracy", to_value(&c.nondegeneracy(budget)));
    if let Some(dist) = f.try_put("weight_distribution", c.weight_distribution(budget).map(|d| d.0))? {
        let d = dist.iter().enumerate().skip(1).find(|(_, &a)| a > 0).map(|(i, _)| i);
        let w = dist.iter().enumerate().rev().find(|(_, &a)| a > 0).map(|(i, _)| i);
        f.put("d", json!(d));
        f.put("max_rank", json!(w));
    }
    let eff = c.effective_embedding()?;
    f.try_put("generalized_weights", eff.generalized_rank_weights(budget))?;
    f.try_put("one_weight", c.classify_one_weight(budget))?;
    let sys = QSystem::from_code(&eff)?;
    if let Some(rep) = f.try_put("linearity", sys.linearity_report(budget))? {
        f.put("linearity_index", json!(rep.direct));
    }
    let reports: Vec<_> = method.methods().into_iter().map(|m| is_minimal(c, m, budget)).collect();
    f.try_put("minimality", reports.into_iter().collect::<rankmet::Result<Vec<_>>>())?;
    f.try_put("bounds_ledger", bounds_ledger(c, budget))?;
    Ok(())
}

pub fn analyze(path: &Path, method: MethodArg, budget: Budget) -> CmdResult {
    let mut f = Fields::new();
    match read_document(path)? {
        Document::Rank(c) => {
            f.put("kind", json!("code"));
            analyze_rank(&c, method, budget, &mut f)?;
        }
        Document::System(u) => {
            f.put("kind", json!("system"));
            f.put("system", json!({"n": u.dim(), "k": u.k()}));
            if let Some(ls) = f.try_put("linear_set", u.linear_set(budget).map(|l| l.report()))? {
                f.put("scattered", json!(ls.iter().all(|e| e.weight == 1)));
            }
            analyze_rank(&u.psi(), method, budget, &mut f)?;
        }
        Document::Hamming(h) => {
            f.put("kind", json!("hamming"));
            f.put("parameters", json!({"n": h.n(), "k": h.k(), "field": h.ctx().spec()}));
            f.put("nondegenerate", json!(h.is_nondegenerate()));
            f.try_put("weight_distribution", h.weight_distribution(budget).map(|d| d.0))?;
            f.try_put("d", h.min_distance(budget))?;
            f.try_put("minimality", h.minimality(budget))?;
            f.try_put("total_weight", h.total_weight(budget))?;
        }
    }
    Ok(f.finish())
}

fn field_for(q: Option<u64>, m: Option<u32>) -> std::result::Result<Arc<FieldCtx>, Failure> {
    let q = q.ok_or_else(|| input_error("--q is required"))?;
    let m = m.ok_or_else(|| input_error("--m is required"))?;
    let (p, e) = prime_power(q).ok_or_else(|| input_error(format!("{q} is not a prime power")))?;
    Ok(Arc::new(FieldCtx::new(p, e, m, None)?))
}

fn code_output(c: &RankCode, as_system: bool) -> std::result::Result<Output, Failure> {
    let report = if as_system {
        to_value(&SystemFile::from_system(&QSystem::from_code(c)?))
    } else {
        to_value(&CodeFile::from_rank(c))
    };
    Ok(Output { report, status: 0 })
}

pub fn construct(args: &ConstructArgs, budget: Budget) -> CmdResult {
    let code = match args.kind {
        Kind::Simplex => {
            let k = args.k.ok_or_else(|| input_error("--k is required"))?;
            construct_simplex(field_for(args.q, args.m)?, k)?
        }
        Kind::Scattered633 => construct_scattered_633(budget)?.code,
        Kind::Km1m => {
            let k = args.k.ok_or_else(|| input_error("--k is required"))?;
            construct_k_minus_1_m(field_for(args.q, args.m)?, k, budget)?.code
        }
        Kind::Extend => {
            let path = args.input.as_ref().ok_or_else(|| input_error("--input is required"))?;
            let Document::Rank(c) = read_document(path)? else {
                return Err(input_error("extend needs a rank-metric code file"));
            };
            let column = args.column.as_ref().ok_or_else(|| input_error("--column is required"))?;
            let v = column
                .split(',')
                .map(|s| c.ctx().parse_elem(s))
                .collect::<rankmet::Result<Vec<_>>>()?;
            extend_minimal(&c, &v, budget)?
        }
    };
    code_output(&code, args.system)
}

#[derive(Serialize)]
struct Check {
    suite: &'static str,
    name: String,
    expected: Value,
    actual: Value,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Value>,
}

struct Checks {
    list: Vec<Check>,
    skipped: Vec<Value>,
}

impl Checks {
    fn add(&mut self, suite: &'static str, name: impl Into<String>, expected: Value, actual: Value) {
        let pass = expected == actual;
        self.list.push(Check {
            suite,
            name: name.into(),
            expected,
            actual,
            pass,
            detail: None,
        });
    }

    fn add_with(&mut self, suite: &'static str, name: impl Into<String>, expected: Value, actual: Value, detail: Value) {
        self.add(suite, name, expected, actual);
        self.list.last_mut().expect("just pushed").detail = Some(detail);
    }

    /// Runs `f`, recording an over-budget suite as skipped.
    fn guard(&mut self, suite: &'static str, f: impl FnOnce(&mut Self) -> rankmet::Result<()>) -> std::result::Result<(), Failure> {
        match f(self) {
            Ok(()) => Ok(()),
            Err(e @ Error::BudgetExceeded { .. }) => {
                self.skipped.push(json!({"suite": suite, "reason": e.to_string()}));
                Ok(())
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn correspondence_suite(c: &RankCode, budget: Budget, out: &mut Checks) -> rankmet::Result<()> {
    const S: &str = "correspondence";
    let ctx = c.ctx();
    let sys = QSystem::from_code(c)?;
    let back = sys.psi();
    let params = |x: &RankCode| -> rankmet::Result<Value> {
        Ok(json!([x.n(), x.k(), x.min_rank_distance(budget)?]))
    };
    out.add(S, "system round trip preserves (n, k, d)", params(c)?, params(&back)?);
    let mismatches = Subspace::full(Level::Ext, c.k())
        .elements(ctx, budget)?
        .iter()
        .filter(|u| rank_weight(ctx, &c.encode(u)) != rank_from_system(&sys, u))
        .count();
    out.add(S, "rk(vG) = n - dim(U ∩ <v>^perp)", json!(0), json!(mismatches));
    for r in 1..c.k() {
        let st = sys.standard_equations(r, budget)?;
        out.add(S, format!("standard equations r = {r}"), to_value(&st.rhs), to_value(&st.lhs));
    }
    let h = associated_code(c, budget)?;
    let rank = c.weight_distribution(budget)?;
    let mut expected = vec![0u64; h.n() + 1];
    for (i, &a) in rank.counts().iter().enumerate() {
        expected[associated_weight(c.q(), c.n(), i) as usize] += a;
    }
    out.add(S, "associated Hamming weight distribution", json!(expected), json!(h.weight_distribution(budget)?.0));
    let grw = c.generalized_rank_weights(budget)?;
    let expected: Vec<u64> = grw.iter().map(|&d| associated_weight(c.q(), c.n(), d)).collect();
    let actual: Vec<u64> = (1..=c.k())
        .map(|r| h.generalized_weight(r, budget).map(|x| x as u64))
        .collect::<rankmet::Result<_>>()?;
    out.add(S, "associated generalized weights", json!(expected), json!(actual));
    let rank_min = is_minimal(c, rankmet::minimal::Method::Cutting, budget)?.verdict;
    out.add(S, "associated Hamming code minimal iff code minimal", json!(rank_min), json!(h.is_minimal(budget)?));
    let tw = h.total_weight(budget)?;
    out.add(S, "associated total weight", to_value(&tw.expected), to_value(&tw.total));
    let ow = c.classify_one_weight(budget)?;
    if ow.one_weight && c.k() >= 2 {
        out.add(S, "one-weight code has effective length km", json!(c.k() * c.m()), json!(ow.effective_length));
    }
    Ok(())
}

fn identities_suite(c: &RankCode, budget: Budget, out: &mut Checks) -> rankmet::Result<()> {
    const S: &str = "identities";
    let dist = c.weight_distribution(budget)?;
    let dual = c.dual().weight_distribution(budget)?;
    for r in 0..=c.n() {
        let p = pless_values(c, &dist, &dual, r)?;
        out.add(S, format!("Pless identity r = {r}"), json!(p.rhs.to_string()), json!(p.lhs.to_string()));
    }
    let stats = total_weight_stats(c, budget)?;
    out.add(S, "mean of q^(n-rk)", json!(stats.formula_mean.to_string()), json!(stats.mean.to_string()));
    out.add_with(
        S,
        "variance bound attained iff rank-2-nondegenerate",
        json!(stats.rank2_nondegenerate),
        json!(stats.variance_attains_bound && stats.variance >= stats.formula_var_bound),
        json!({"variance": stats.variance.to_string(), "bound": stats.formula_var_bound.to_string()}),
    );
    Ok(())
}

fn minimality_suite(c: &RankCode, method: MethodArg, budget: Budget, out: &mut Checks) -> rankmet::Result<()> {
    const S: &str = "minimality";
    let mut verdicts = Vec::new();
    for m in method.methods() {
        let r = is_minimal(c, m, budget)?;
        verdicts.push(r.verdict);
        out.add_with(S, format!("minimal ({})", method_name(m)), json!(true), json!(r.verdict), to_value(&r));
    }
    if verdicts.len() > 1 {
        let agree = verdicts.iter().all(|&v| v == verdicts[0]);
        out.add(S, "methods agree", json!(true), json!(agree));
    }
    let ledger = bounds_ledger(c, budget)?;
    out.add_with(S, "bounds consistent", json!([]), json!(ledger.inconsistencies), to_value(&ledger));
    Ok(())
}

fn method_name(m: rankmet::minimal::Method) -> &'static str {
    match m {
        rankmet::minimal::Method::Pairwise => "pairwise",
        rankmet::minimal::Method::Cutting => "cutting",
        rankmet::minimal::Method::LambdaSum => "lambda-sum",
    }
}

pub fn verify(path: &Path, suite: Suite, method: MethodArg, budget: Budget) -> CmdResult {
    let c = match read_document(path)? {
        Document::Rank(c) => c,
        Document::System(u) => u.psi(),
        Document::Hamming(_) => return Err(input_error("verify needs a rank-metric code or system file")),
    };
    if c.k() == 0 {
        return Err(input_error("the zero code has nothing to verify"));
    }
    if !c.is_nondegenerate() && suite != Suite::Minimality {
        return Err(Error::Degenerate.into());
    }
    let mut checks = Checks {
        list: Vec::new(),
        skipped: Vec::new(),
    };
    if matches!(suite, Suite::Correspondence | Suite::All) {
        checks.guard("correspondence", |o| correspondence_suite(&c, budget, o))?;
    }
    if matches!(suite, Suite::Identities | Suite::All) {
        checks.guard("identities", |o| identities_suite(&c, budget, o))?;
    }
    if matches!(suite, Suite::Minimality | Suite::All) {
        checks.guard("minimality", |o| minimality_suite(&c, method, budget, o))?;
    }
    let mut info = Map::new();
    if let Ok(h) = HammingCode::new(c.ctx_arc().clone(), c.n(), c.generator().clone()) {
        if let Ok(m) = h.is_minimal(budget) {
            info.insert("raw_hamming_minimal".into(), json!(m));
        }
    }
    if let Ok(ow) = c.classify_one_weight(budget) {
        info.insert("one_weight".into(), json!(ow.one_weight));
    }
    let passed = checks.list.iter().all(|c| c.pass);
    let status = if !passed {
        1
    } else if !checks.skipped.is_empty() {
        3
    } else {
        0
    };
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "parameters": parameters(&c),
        "checks": checks.list,
        "skipped": checks.skipped,
        "info": info,
        "passed": passed && checks.skipped.is_empty(),
    });
    Ok(Output { report, status })
}

pub fn search(args: &SearchArgs, budget: Budget, seed: u64) -> CmdResult {
    let strategy = if args.random {
        Strategy::Random {
            trials: args.trials,
            seed,
        }
    } else if args.exhaustive {
        Strategy::Exhaustive
    } else {
        return Err(input_error("choose --exhaustive or --random"));
    };
    let out = search_minimal(args.q, args.m, args.n, args.k, strategy, budget)?;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "found": out.code.is_some(),
        "code": out.code.as_ref().map(CodeFile::from_rank),
        "minimality": out.report,
        "certificate": out.certificate,
    });
    Ok(Output { report, status: 0 })
}

fn parse_coeffs(s: &str) -> std::result::Result<Vec<u32>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| input_error(format!("bad coefficient {t:?}"))))
        .collect()
}

pub fn field(args: &FieldArgs) -> CmdResult {
    let (p, e) = match (args.q, args.p) {
        (Some(q), _) => prime_power(q).ok_or_else(|| input_error(format!("{q} is not a prime power")))?,
        (None, Some(p)) => (p, args.e),
        (None, None) => return Err(input_error("give --q or --p")),
    };
    let modulus = args.modulus.as_deref().map(parse_coeffs).transpose()?;
    let ctx = FieldCtx::new(p, e, args.m, modulus.as_deref())?;
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "field": ctx.spec(),
        "q": ctx.q(),
        "size": ctx.size(),
        "generator": ctx.generator(),
        "subfield_stride": ctx.subfield_stride(),
        "gamma": ctx.gamma(),
        "subfield": ctx.subfield(),
    });
    if args.table {
        let table: Vec<Value> = (0..ctx.size())
            .map(|x| {
                let x = rankmet::Elem(x);
                json!({"elem": x, "log": ctx.log(x), "notation": ctx.format_elem(x)})
            })
            .collect();
        report["table"] = Value::Array(table);
    }
    Ok(Output { report, status: 0 })
}
