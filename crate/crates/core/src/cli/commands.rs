use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{parse_point, Format, RunConfig, EXIT_FALSIFIED, EXIT_PASS, EXIT_PRECISION, EXIT_USAGE};
use crate::dynamics::{Classification, DynError, Itinerary, OrbitStatus, PottsSystem, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::hensel::{fixed_point_b1, HenselError};
use crate::padic::{NormExp, Padic, Separation};
use crate::potts::{classify_fixed, MapError, RegimeTag};
use crate::sampling::{random_ep, random_in_ball, random_nonintegral, random_zp, rng_from};
use crate::VERSION;

/// What a command produced: exit code, report text and an optional
/// diagnostic for stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
    pub message: Option<String>,
}

impl Outcome {
    fn report(code: i32, value: &Value) -> Self {
        Outcome { code, body: to_line(value), message: None }
    }

    fn usage(msg: impl ToString) -> Self {
        Outcome { code: EXIT_USAGE, body: String::new(), message: Some(msg.to_string()) }
    }
}

fn to_line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("reports are plain JSON");
    s.push('\n');
    s
}

fn header(cfg: &RunConfig) -> Value {
    json!({ "version": VERSION, "config": cfg })
}

fn with_header(cfg: &RunConfig, body: Value) -> Value {
    let mut h = header(cfg);
    if let (Some(h), Value::Object(b)) = (h.as_object_mut(), body) {
        h.extend(b);
    }
    h
}

fn separation_json(s: Separation) -> Value {
    match s {
        Separation::Known(NormExp::Infinite) => json!("inf"),
        Separation::Known(NormExp::Finite(e)) => json!(e),
        Separation::Beyond(b) => json!(format!(">={b}")),
    }
}

fn system(cfg: &RunConfig) -> Result<PottsSystem, Outcome> {
    let params = cfg.params().map_err(Outcome::usage)?;
    match PottsSystem::new(params) {
        Ok(s) => Ok(s),
        Err(DynError::Map(e @ MapError::Degenerate(_))) => Err(Outcome::usage(e)),
        Err(e) if e.is_precision() => {
            Err(Outcome { code: EXIT_PRECISION, body: String::new(), message: Some(e.to_string()) })
        }
        Err(e) => Err(Outcome { code: EXIT_FALSIFIED, body: String::new(), message: Some(e.to_string()) }),
    }
}

pub fn cmd_classify(cfg: &RunConfig) -> Outcome {
    let params = match cfg.params() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let regime = match params.classify_regime() {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let lam = params.multiplier(&params.one());
    let mut body = json!({
        "regime": regime.tag,
        "kappa": regime.kappa,
        "pole": params.pole().to_string(),
        "norms": {
            "k": params.v_k(),
            "q": params.v_q(),
            "theta_minus_one": params.norm_theta_minus_one().to_string(),
            "q_plus_theta_minus_one": params.norm_shifted().to_string(),
        },
        "multiplier_at_one": match &lam {
            Ok(l) => json!({
                "value": l.to_string(),
                "norm_exp": l.norm_exp().to_string(),
                "kind": classify_fixed(l.norm_exp()),
            }),
            Err(e) => json!({ "error": e.to_string() }),
        },
    });
    let mut code = EXIT_PASS;
    match regime.tag {
        RegimeTag::Unclassified => {
            body["violated"] = json!(params.gap_violation());
        }
        RegimeTag::A => {}
        RegimeTag::B1 | RegimeTag::B2 => match params.build_partition() {
            Ok(part) => body["partition"] = serde_json::to_value(part.to_json(&params)).unwrap(),
            Err(e) => {
                body["partition"] = json!({ "error": e.to_string() });
                code = EXIT_FALSIFIED;
            }
        },
    }
    if regime.tag == RegimeTag::B1 {
        body["fixed_point"] = match fixed_point_b1(&params) {
            Ok(x) => {
                let lam = params.multiplier(&x);
                json!({
                    "x": x.to_string(),
                    "multiplier_norm_exp": lam.as_ref().map(|l| l.norm_exp().to_string()).ok(),
                    "kind": lam.as_ref().map(|l| classify_fixed(l.norm_exp())).ok(),
                })
            }
            Err(e) => {
                code = EXIT_PRECISION.max(code);
                json!({ "error": e.to_string() })
            }
        };
    }
    Outcome::report(code, &with_header(cfg, body))
}

fn status_name(s: &OrbitStatus) -> &'static str {
    match s {
        OrbitStatus::ConvergedTo1 { .. } => "ConvergedTo1",
        OrbitStatus::StayedInX { .. } => "StayedInX",
        OrbitStatus::PoleHit { .. } => "PoleHit",
        OrbitStatus::Undecided { .. } => "Undecided",
    }
}

pub fn cmd_orbit(cfg: &RunConfig) -> Outcome {
    let sys = match system(cfg) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let x0 = match parse_point(cfg.x0.as_deref().unwrap_or_default(), cfg.p, cfg.precision) {
        Ok(x) => x,
        Err(e) => return Outcome::usage(e),
    };
    let r = sys.orbit(&x0, DEFAULT_MAX_ITER, DEFAULT_TOL);
    let classification = sys.basin_classify(&x0, cfg.depth);
    let code = match (&r.status, &classification) {
        (_, Err(e)) if e.is_precision() => EXIT_PRECISION,
        (OrbitStatus::Undecided { reason: crate::dynamics::UndecidedReason::Precision }, _) => EXIT_PRECISION,
        _ => EXIT_PASS,
    };
    let body = json!({
        "input": x0.to_string(),
        "status": status_name(&r.status),
        "detail": r.status,
        "steps": r.trajectory.len() - 1,
        "final_distance_to_one": r.final_distance_to_one().map(separation_json),
        "classification": classification.as_ref().ok(),
        "trajectory": r.trajectory.iter().map(Padic::to_compact).collect::<Vec<_>>(),
    });
    Outcome::report(code, &with_header(cfg, body))
}

#[derive(Debug, Clone, Serialize)]
struct SweepRecord {
    index: usize,
    family: &'static str,
    input: String,
    status: &'static str,
    step: Option<usize>,
    itinerary: Option<Itinerary>,
    final_distance_to_one: Option<Value>,
    reason: Option<String>,
}

const FAMILIES: [&str; 4] = ["zp", "ep", "nonintegral", "ball"];
const POLE_TREE_MAX_LEVEL: usize = 6;

fn sweep_point(sys: &PottsSystem, cfg: &RunConfig, index: usize) -> (&'static str, Padic) {
    let key = sys.params().digest_key();
    let mut rng = rng_from(&[b"sweep", key.as_bytes(), &cfg.seed.to_le_bytes(), &(index as u64).to_le_bytes()]);
    let (p, n) = (cfg.p, cfg.precision);
    let families = if sys.partition().is_some() { 4 } else { 3 };
    let family = FAMILIES[index % families];
    let x = match family {
        "zp" => random_zp(&mut rng, p, n),
        "ep" => random_ep(&mut rng, p, n),
        "nonintegral" => random_nonintegral(&mut rng, p, n),
        _ => {
            let part = sys.partition().unwrap();
            let b = &part.balls[rng.gen_range(0..part.len())];
            random_in_ball(&mut rng, &b.ball, n)
        }
    };
    (family, x)
}

fn sweep_record(sys: &PottsSystem, depth: usize, index: usize, family: &'static str, x: &Padic) -> SweepRecord {
    let mut rec = SweepRecord {
        index,
        family,
        input: x.to_compact(),
        status: "Error",
        step: None,
        itinerary: None,
        final_distance_to_one: None,
        reason: None,
    };
    match sys.basin_classify(x, depth) {
        Ok(Classification::Basin { step }) => {
            rec.status = "Basin";
            rec.step = Some(step);
            let r = sys.orbit(x, DEFAULT_MAX_ITER, DEFAULT_TOL);
            rec.final_distance_to_one = r.final_distance_to_one().map(separation_json);
        }
        Ok(Classification::JuliaCandidate { itinerary, depth }) => {
            rec.status = "JuliaCandidate";
            rec.step = Some(depth);
            rec.itinerary = Some(itinerary);
        }
        Ok(Classification::PolePreimage { n }) => {
            rec.status = "PolePreimage";
            rec.step = Some(n);
        }
        Ok(Classification::Undecided { reason, step }) => {
            rec.status = "Undecided";
            rec.step = Some(step);
            rec.reason = Some(format!("{reason:?}").to_lowercase());
        }
        Err(e) => {
            rec.reason = Some(if e.is_precision() { "precision".into() } else { e.to_string() });
        }
    }
    rec
}

pub fn cmd_sweep(cfg: &RunConfig) -> Outcome {
    let sys = match system(cfg) {
        Ok(s) => s,
        Err(o) => return o,
    };
    if sys.regime().tag == RegimeTag::Unclassified {
        return Outcome::usage(DynError::Unclassified(sys.params().gap_violation().unwrap_or_default()));
    }
    let mut seeds: Vec<(&'static str, Padic)> = (0..cfg.samples).map(|i| sweep_point(&sys, cfg, i)).collect();
    if cfg.include_pole_tree {
        match sys.pole_preimage_tree(cfg.depth.min(POLE_TREE_MAX_LEVEL)) {
            Ok(levels) => seeds.extend(levels.into_iter().flatten().map(|x| ("pole_tree", x))),
            Err(e) => {
                let code = if e.is_precision() { EXIT_PRECISION } else { EXIT_FALSIFIED };
                return Outcome { code, body: String::new(), message: Some(e.to_string()) };
            }
        }
    }
    let records: Vec<SweepRecord> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, (family, x))| sweep_record(&sys, cfg.depth, i, family, x))
        .collect();
    let mut histogram: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.status).or_default() += 1;
    }
    let body = match cfg.format {
        Format::Json => {
            let mut out = to_line(&with_header(cfg, json!({ "regime": sys.regime().tag, "records": records.len() })));
            for r in &records {
                out.push_str(&to_line(&serde_json::to_value(r).unwrap()));
            }
            out.push_str(&to_line(&json!({ "summary": histogram })));
            out
        }
        Format::Csv => sweep_csv(cfg, &sys, &records),
    };
    Outcome { code: EXIT_PASS, body, message: None }
}

fn sweep_csv(cfg: &RunConfig, sys: &PottsSystem, records: &[SweepRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["version", "p", "k", "q", "theta", "precision", "depth", "seed", "regime", "status", "count"]).unwrap();
    let mut histogram: BTreeMap<&str, usize> = BTreeMap::new();
    for r in records {
        *histogram.entry(r.status).or_default() += 1;
    }
    for (status, count) in histogram {
        w.write_record([
            VERSION.to_string(),
            cfg.p.to_string(),
            cfg.k.to_string(),
            cfg.q.clone(),
            cfg.theta.clone(),
            cfg.precision.to_string(),
            cfg.depth.to_string(),
            cfg.seed.to_string(),
            sys.regime().tag.to_string(),
            status.to_string(),
            count.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

#[derive(Debug, Clone, Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: Value,
}

enum Fail {
    Falsified(String),
    Precision(String),
}

impl From<DynError> for Fail {
    fn from(e: DynError) -> Self {
        // no verified object here is a pole preimage, so hitting the pole means digits ran out
        if e.is_precision() || e == DynError::Map(MapError::PoleHit) {
            Fail::Precision(e.to_string())
        } else {
            Fail::Falsified(e.to_string())
        }
    }
}

impl From<MapError> for Fail {
    fn from(e: MapError) -> Self {
        DynError::from(e).into()
    }
}

impl From<HenselError> for Fail {
    fn from(e: HenselError) -> Self {
        MapError::from(e).into()
    }
}

const ISOMETRY_PAIR_CAP: usize = 1 << 16;
const PERIOD_MAX: usize = 4;

pub fn cmd_julia_verify(cfg: &RunConfig) -> Outcome {
    let sys = match system(cfg) {
        Ok(s) => s,
        Err(o) => return o,
    };
    if !sys.regime().is_b() {
        return Outcome::usage(DynError::NotRegimeB(sys.regime().tag));
    }
    let mut checks = Vec::new();
    let mut failure = None;
    if cfg.depth > 0 {
        for (name, f) in julia_checks() {
            match f(&sys, cfg) {
                Ok((pass, detail)) => checks.push(Check { name: name.into(), pass, detail }),
                Err(Fail::Falsified(m)) => {
                    checks.push(Check { name: name.into(), pass: false, detail: json!({ "error": m }) })
                }
                Err(Fail::Precision(m)) => {
                    checks.push(Check { name: name.into(), pass: false, detail: json!({ "precision": m }) });
                    failure.get_or_insert(EXIT_PRECISION);
                }
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    let code = match (pass, failure) {
        (true, _) => EXIT_PASS,
        (false, Some(c)) if checks.iter().filter(|c| !c.pass).all(|c| c.detail.get("precision").is_some()) => c,
        _ => EXIT_FALSIFIED,
    };
    let body = json!({
        "regime": sys.regime().tag,
        "kappa": sys.regime().kappa,
        "depth": cfg.depth,
        "pass": pass,
        "checks": checks,
    });
    Outcome::report(code, &with_header(cfg, body))
}

type CheckFn = fn(&PottsSystem, &RunConfig) -> Result<(bool, Value), Fail>;

fn julia_checks() -> Vec<(&'static str, CheckFn)> {
    vec![
        ("incidence_matrix", check_incidence),
        ("fixed_point", check_fixed_point),
        ("realizability", check_realizability),
        ("shift_equivariance", check_shift),
        ("isometry", check_isometry),
        ("periodic_points", check_periodic),
        ("expansion_laws", check_expansion),
        ("pole_tree", check_pole_tree),
    ]
}

fn check_incidence(sys: &PottsSystem, _: &RunConfig) -> Result<(bool, Value), Fail> {
    let a = sys.incidence_matrix()?;
    Ok((a.is_all_ones() && a.is_irreducible(), json!(a.rows)))
}

fn check_fixed_point(sys: &PottsSystem, _: &RunConfig) -> Result<(bool, Value), Fail> {
    if sys.regime().tag != RegimeTag::B1 {
        return Ok((true, json!("not applicable")));
    }
    let params = sys.params();
    let x = fixed_point_b1(params)?;
    let agree = params.eval_f(&x)?.separation(&x).lower_bound();
    let lam = params.multiplier(&x)?;
    let kind = classify_fixed(lam.norm_exp());
    Ok((
        agree >= sys.verify_digits() && kind == crate::potts::FixedPointKind::Repelling,
        json!({ "x": x.to_string(), "digits": agree, "kind": kind }),
    ))
}

fn words_up_to(kappa: usize, depth: usize) -> Vec<Itinerary> {
    (1..=depth).flat_map(|n| Itinerary::all_words(kappa, n)).collect()
}

fn check_realizability(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let kappa = sys.regime().kappa as usize;
    let words = words_up_to(kappa, cfg.depth);
    let bad: Vec<String> = words
        .par_iter()
        .map(|w| -> Result<Option<String>, DynError> {
            let (x, _) = sys.cylinder_point(w)?;
            let back = sys.itinerary_of(&x, w.len())?;
            Ok((back != *w).then(|| w.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok((bad.is_empty(), json!({ "words": words.len(), "failures": bad })))
}

fn check_shift(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let kappa = sys.regime().kappa as usize;
    let words = Itinerary::all_words(kappa, cfg.depth);
    let bad = words
        .par_iter()
        .filter(|w| w.len() >= 2)
        .map(|w| -> Result<bool, DynError> {
            let (x, _) = sys.cylinder_point(w)?;
            let full = sys.itinerary_of(&x, w.len())?;
            let tail = sys.itinerary_of(&sys.params().eval_f(&x)?, w.len() - 1)?;
            Ok(tail.symbols() != &full.symbols()[1..])
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok((bad == 0, json!({ "words": words.len(), "failures": bad })))
}

fn check_isometry(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let kappa = sys.regime().kappa as usize;
    if kappa < 2 {
        return Ok((true, json!("not applicable")));
    }
    let words = Itinerary::all_words(kappa, cfg.depth);
    let points: Vec<Padic> = words
        .par_iter()
        .map(|w| sys.cylinder_point(w).map(|(x, _)| x))
        .collect::<Result<_, _>>()?;
    let n = words.len();
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    if pairs.len() > ISOMETRY_PAIR_CAP {
        let step = pairs.len().div_ceil(ISOMETRY_PAIR_CAP);
        pairs = pairs.into_iter().step_by(step).collect();
    }
    let bad = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<bool, DynError> {
            let d = points[a].sub(&points[b])?.norm_exp();
            Ok(d != NormExp::Finite(sys.df_exponent(&words[a], &words[b])?))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|&b| b)
        .count();
    Ok((bad == 0, json!({ "pairs": pairs.len(), "failures": bad })))
}

fn check_periodic(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let kappa = sys.regime().kappa as usize;
    let part = sys.partition().unwrap();
    let words = words_up_to(kappa, cfg.depth.min(PERIOD_MAX));
    let results: Vec<(i64, bool)> = words
        .par_iter()
        .map(|w| -> Result<(i64, bool), DynError> {
            let x = sys.periodic_point(w)?;
            let back = sys.iterate(&x, w.len())?;
            let digits = back.separation(&x).lower_bound();
            let lam = sys.cycle_multiplier(&x, w.len())?;
            let expect: i64 = w.symbols().iter().map(|&s| part.tau(s)).sum();
            Ok((digits, lam.norm_exp() == NormExp::Finite(-expect)))
        })
        .collect::<Result<_, _>>()?;
    let min_digits = results.iter().map(|r| r.0).min().unwrap_or(i64::MAX);
    let pass = min_digits >= sys.verify_digits() && results.iter().all(|r| r.1);
    Ok((pass, json!({ "words": words.len(), "min_digits": min_digits })))
}

fn check_expansion(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let part = sys.partition().unwrap();
    let params = sys.params();
    let key = params.digest_key();
    let mut failures = 0;
    let mut tested = 0;
    for b in &part.balls {
        let mut rng = rng_from(&[b"expansion", key.as_bytes(), &cfg.seed.to_le_bytes(), &(b.symbol as u64).to_le_bytes()]);
        for _ in 0..cfg.samples {
            let x = random_in_ball(&mut rng, &b.ball, cfg.precision);
            let y = random_in_ball(&mut rng, &b.ball, cfg.precision);
            let dx = x.sub(&y).map_err(DynError::from)?;
            let dy = params.eval_f(&x)?.sub(&params.eval_f(&y)?).map_err(DynError::from)?;
            tested += 1;
            if dy.norm_exp() != dx.norm_exp().finite().map(|e| e - b.tau).map_or(NormExp::Infinite, NormExp::Finite) {
                failures += 1;
            }
        }
    }
    Ok((failures == 0, json!({ "pairs": tested, "failures": failures })))
}

fn check_pole_tree(sys: &PottsSystem, cfg: &RunConfig) -> Result<(bool, Value), Fail> {
    let levels = sys.pole_preimage_tree(cfg.depth.min(POLE_TREE_MAX_LEVEL))?;
    let sizes: Vec<usize> = levels.iter().map(Vec::len).collect();
    let kappa = sys.regime().kappa as usize;
    let pass = sizes.iter().enumerate().all(|(n, &s)| s == kappa.pow(n as u32 + 1));
    Ok((pass, json!({ "levels": sizes })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::Common;

    fn cfg(command: &str, p: u64, k: u64, q: &str, theta: &str) -> RunConfig {
        let c = Common {
            p,
            k,
            q: q.into(),
            theta: theta.into(),
            precision: 64,
            depth: 3,
            samples: 12,
            seed: 7,
            format: Format::Json,
            out: None,
        };
        RunConfig::new(command, &c)
    }

    fn parse(o: &Outcome) -> Value {
        serde_json::from_str(o.body.lines().next().unwrap()).unwrap()
    }

    #[test]
    fn classify_three_regimes() {
        {
            let (k, theta, tag) = (3, "1+9", "A");
            let o = cmd_classify(&cfg("classify", 3, k, "3", theta));
            assert_eq!(parse(&o)["regime"], tag);
        }
        let o = cmd_classify(&cfg("classify", 5, 3, "5", "1+5^3"));
        let v = parse(&o);
        assert_eq!(v["regime"], "B1");
        assert_eq!(v["fixed_point"]["kind"], "Repelling");
        let v = parse(&cmd_classify(&cfg("classify", 5, 2, "5", "1+5^3")));
        assert_eq!(v["regime"], "B2");
        assert_eq!(v["partition"]["balls"].as_array().unwrap().len(), 2);
        assert_eq!(v["config"]["seed"], 7);
        assert_eq!(v["version"], VERSION);
    }

    #[test]
    fn classify_rejects() {
        let o = cmd_classify(&cfg("classify", 2, 2, "2", "1"));
        assert_eq!(o.code, EXIT_USAGE);
        assert!(o.message.unwrap().contains("p≥3 required"));
        assert_eq!(cmd_classify(&cfg("classify", 5, 2, "5", "1+x")).code, EXIT_USAGE);
        let gap = parse(&cmd_classify(&cfg("classify", 5, 2, "5", "1+5^2")));
        assert_eq!(gap["regime"], "Unclassified");
        assert!(gap["violated"].as_str().unwrap().contains("|θ−1|_p"));
    }

    #[test]
    fn sweep_regime_a_all_basin() {
        let o = cmd_sweep(&cfg("sweep", 3, 3, "3", "1+9"));
        let last: Value = serde_json::from_str(o.body.lines().last().unwrap()).unwrap();
        assert_eq!(last["summary"]["Basin"], 12);
        assert_eq!(last["summary"].as_object().unwrap().len(), 1);
    }

    #[test]
    fn sweep_with_pole_tree() {
        let mut c = cfg("sweep", 5, 2, "5", "1+5^3");
        c.include_pole_tree = true;
        let o = cmd_sweep(&c);
        let last: Value = serde_json::from_str(o.body.lines().last().unwrap()).unwrap();
        assert_eq!(last["summary"]["PolePreimage"], 2 + 4 + 8);
    }

    #[test]
    fn empty_sweep() {
        let mut c = cfg("sweep", 5, 2, "5", "1+5^3");
        c.samples = 0;
        let o = cmd_sweep(&c);
        assert_eq!(o.body.lines().count(), 2);
        assert!(o.body.ends_with("{\"summary\":{}}\n"));
    }

    #[test]
    fn sweep_is_deterministic() {
        let c = cfg("sweep", 5, 4, "5", "1+5^3");
        assert_eq!(cmd_sweep(&c), cmd_sweep(&c));
        let mut csv = c.clone();
        csv.format = Format::Csv;
        let body = cmd_sweep(&csv).body;
        assert!(body.starts_with("version,p,k,q,theta"));
    }

    #[test]
    fn julia_verify_passes() {
        let o = cmd_julia_verify(&cfg("julia-verify", 5, 2, "5", "1+5^3"));
        assert_eq!(o.code, EXIT_PASS, "{}", o.body);
        let o = cmd_julia_verify(&cfg("julia-verify", 5, 3, "5", "1+5^3"));
        assert_eq!(o.code, EXIT_PASS, "{}", o.body);
        let mut c = cfg("julia-verify", 5, 2, "5", "1+5^3");
        c.depth = 0;
        let v = parse(&cmd_julia_verify(&c));
        assert_eq!(v["pass"], true);
        assert!(v["checks"].as_array().unwrap().is_empty());
    }

    #[test]
    fn julia_verify_needs_regime_b() {
        assert_eq!(cmd_julia_verify(&cfg("julia-verify", 3, 3, "3", "1+9")).code, EXIT_USAGE);
    }

    #[test]
    fn julia_verify_low_precision() {
        let mut c = cfg("julia-verify", 5, 2, "5", "1+5^3");
        c.precision = 12;
        c.depth = 6;
        assert_eq!(cmd_julia_verify(&c).code, EXIT_PRECISION);
    }

    #[test]
    fn orbit_of_one() {
        let mut c = cfg("orbit", 3, 3, "3", "1+9");
        c.x0 = Some("1".into());
        let v = parse(&cmd_orbit(&c));
        assert_eq!(v["status"], "ConvergedTo1");
        assert_eq!(v["steps"], 0);
    }
}
