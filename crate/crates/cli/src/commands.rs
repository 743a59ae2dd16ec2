//! One handler per subcommand. Each returns the command-specific result,
//! its verification clauses and the engine traces it ran.

use std::path::{Path, PathBuf};

use latinv::geomset::{self, PointSet, Relation, SelfRespect};
use latinv::graph::{self, families, Caps, ForbiddenPredicate, Graph};
use latinv::group::{self, ClassTester, FiniteGroup, Law, Layer, NormalLattice, Word};
use latinv::oracle::{self, negatives, LawConfig, LawReport};
use latinv::{iterate_f, Clause, CofiniteLattice, Codim, EngineTrace, Error, IdSet, Predicate};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{trace_clauses, Failure, Inputs, Order};

pub struct Outcome {
    pub result: Value,
    pub clauses: Vec<Clause>,
    pub traces: Vec<(String, EngineTrace<Vec<usize>>, Order)>,
}

type Run = Result<Outcome, Failure>;

fn caps(cap: Option<usize>) -> Caps {
    match cap {
        Some(c) => Caps { orbit: c, automorphism_nodes: c },
        None => Caps::default(),
    }
}

fn read_graph(inputs: &mut Inputs, path: &Path) -> Result<Graph, Error> {
    Graph::from_json(&inputs.read("input", path)?)
}

/// A named small graph, or a path to a JSON graph or array of graphs.
fn forbidden_family(inputs: &mut Inputs, specs: &[String]) -> Result<Vec<Graph>, Error> {
    let mut out = Vec::new();
    for spec in specs {
        match spec.as_str() {
            "triangle" => out.push(families::triangle()),
            "c4" => out.push(families::cycle(4)),
            "c5" => out.push(families::cycle(5)),
            "k4" => out.push(families::complete(4)),
            "k5" => out.push(families::complete(5)),
            "k33" => out.push(families::complete_bipartite(3, 3)),
            "p3" => out.push(families::path(3)),
            path => {
                let text = inputs.read("forbidden", Path::new(path))?;
                if text.trim_start().starts_with('[') {
                    let many: Vec<Graph> = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                    out.extend(many);
                } else {
                    out.push(Graph::from_json(&text)?);
                }
            }
        }
    }
    if out.is_empty() {
        out.push(families::triangle());
    }
    Ok(out)
}

pub fn graph_forbid(inputs: &mut Inputs, input: &Path, removed: &str, forbidden: &[String], cap: Option<usize>) -> Run {
    let g = read_graph(inputs, input)?;
    let removed = inputs.id_list("removed", removed)?;
    let family = forbidden_family(inputs, forbidden)?;
    match graph::forbid_invariant(&g, &removed, &family, caps(cap)) {
        Ok(out) => {
            let trace = out.trace.clone();
            Ok(Outcome {
                result: json!({
                    "removed": out.removed,
                    "arity": out.arity,
                    "codim_n": removed.len(),
                    "codim_h": out.removed.len(),
                    "bound": out.bound,
                    "group_order": out.group_order.to_string(),
                }),
                clauses: out.clauses,
                traces: vec![("engine".into(), trace, Order::Removed)],
            })
        }
        Err(error @ Error::PreconditionViolated(_)) => {
            let witness = g.positions_of(&removed).ok().and_then(|n| {
                let p = ForbiddenPredicate::new(&g, &family).ok()?;
                let (member, emb) = p.violation(&vec![n; p.arity()])?;
                Some(json!({ "member": member, "embedding": emb }))
            });
            Err(Failure { error, witness })
        }
        Err(e) => Err(e.into()),
    }
}

fn layered_outcome(out: graph::LayeredOutcome, removed_n: usize) -> Outcome {
    let traces = out
        .rounds
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("round {}", i + 1), r.trace.clone(), Order::Removed))
        .collect();
    let rounds: Vec<Value> = out
        .rounds
        .iter()
        .map(|r| json!({ "obstruction": r.obstruction, "removed": r.removed }))
        .collect();
    Outcome {
        result: json!({
            "removed": out.removed,
            "codim_n": removed_n,
            "codim_h": out.removed.len(),
            "group_order": out.group_order.to_string(),
            "rounds": rounds,
        }),
        clauses: out.clauses,
        traces,
    }
}

pub fn graph_planarize(inputs: &mut Inputs, input: &Path, removed: &str, cap: Option<usize>) -> Run {
    let g = read_graph(inputs, input)?;
    let removed = inputs.id_list("removed", removed)?;
    let out = graph::planarize_invariant(&g, &removed, caps(cap))?;
    Ok(layered_outcome(out, removed.len()))
}

pub fn graph_local_embed(inputs: &mut Inputs, input: &Path, removed: &str, size_cap: usize, cap: Option<usize>) -> Run {
    let g = read_graph(inputs, input)?;
    let removed = inputs.id_list("removed", removed)?;
    let out = graph::local_embed_invariant(&g, &removed, size_cap, caps(cap))?;
    Ok(layered_outcome(out, removed.len()))
}

pub fn graph_gn(inputs: &mut Inputs, n: usize, planarize: bool, cap: Option<usize>) -> Run {
    inputs.inline("n", &n.to_string());
    if n == 0 {
        return Err(Error::PreconditionViolated("n must be positive".into()).into());
    }
    let inst = graph::gen_gn(n);
    let g = &inst.graph;
    let designated = g.positions_of(&inst.designated)?;
    let orbits = graph::edge_orbits(g, &[inst.rotation.clone()])?;
    let auts = graph::automorphism_group(g, caps(cap).automorphism_nodes)?;
    let full_orbits = graph::edge_orbits(g, &auts.vertex_generators)?;
    let min_orbit = full_orbits.iter().map(Vec::len).min().unwrap_or(0);
    let mut clauses = vec![
        Clause::with_detail("edge_count", g.edge_count() == 10 * n, format!("{} edges", g.edge_count())),
        Clause::new("nonplanar", !graph::planarity_test(g)),
        Clause::new("designated_planarize", graph::planarity_test(&g.without_positions(&designated))),
        Clause::new("rotation_automorphism", graph::is_automorphism(g, &inst.rotation)),
        Clause::with_detail("orbits_at_least_n", min_orbit >= n, format!("smallest edge orbit {min_orbit}")),
    ];
    let mut result = json!({
        "n": n,
        "graph": g,
        "designated": inst.designated,
        "rotation": inst.rotation,
        "rotation_edge_orbits": orbits,
        "automorphism_order": auts.order.to_string(),
    });
    let mut traces = Vec::new();
    if planarize {
        let out = graph::planarize_invariant(g, &inst.designated, caps(cap))?;
        let layered = layered_outcome(out, inst.designated.len());
        let removed = layered.result["removed"].as_array().map_or(0, Vec::len);
        clauses.push(Clause::with_detail("nonempty_invariant_set", removed >= n, format!("{removed} edges removed")));
        clauses.extend(layered.clauses);
        traces = layered.traces;
        result["planarization"] = layered.result;
    }
    Ok(Outcome { result, clauses, traces })
}

fn read_group(inputs: &mut Inputs, input: Option<&Path>, name: Option<&str>) -> Result<FiniteGroup, Error> {
    match (input, name) {
        (Some(path), None) => FiniteGroup::parse(&inputs.read("input", path)?),
        (None, Some(name)) => {
            inputs.inline("group", name);
            group::corpus()
                .into_iter()
                .find(|(n, _)| n.eq_ignore_ascii_case(name))
                .map(|(_, g)| g)
                .ok_or_else(|| Error::Parse(format!("unknown group {name:?}")))
        }
        _ => Err(Error::Parse("give exactly one of --input, --group".into())),
    }
}

fn group_outcome(g: &FiniteGroup, n: &IdSet, out: &group::GroupOutcome, order: Order, extra: Value) -> Outcome {
    let mut result = json!({
        "subgroup": out.subgroup,
        "order": out.order,
        "index": out.index,
        "arity": out.arity,
        "codim_n": if matches!(order, Order::Reversed) {
            Codim::log2_ratio(n.len() as u64, 1)
        } else {
            Codim::log2_ratio(g.order() as u64, n.len() as u64)
        },
        "codim_h": out.codim,
        "bound": out.bound,
        "automorphism_order": out.automorphism_order,
    });
    if let (Value::Object(r), Value::Object(e)) = (&mut result, extra) {
        r.extend(e);
    }
    Outcome { result, clauses: out.clauses.clone(), traces: vec![("engine".into(), out.trace.clone(), order)] }
}

pub struct GroupArgs<'a> {
    pub input: Option<&'a Path>,
    pub group: Option<&'a str>,
    pub subgroup: &'a str,
}

fn group_and_subgroup(inputs: &mut Inputs, a: &GroupArgs<'_>) -> Result<(FiniteGroup, IdSet), Error> {
    let g = read_group(inputs, a.input, a.group)?;
    let ids = inputs.id_list("subgroup", a.subgroup)?;
    let n = group::parse_subgroup(&g, &ids)?;
    Ok((g, n))
}

pub fn group_law(inputs: &mut Inputs, a: &GroupArgs<'_>, words: &[String], classes: &[String]) -> Run {
    let (g, n) = group_and_subgroup(inputs, a)?;
    let words: Vec<String> = if words.is_empty() { vec!["[x1,x2]".into()] } else { words.to_vec() };
    let classes: Vec<String> = if classes.is_empty() { vec!["trivial".into()] } else { classes.to_vec() };
    if classes.len() != 1 && classes.len() != words.len() {
        return Err(Error::Parse(format!("{} classes for {} words", classes.len(), words.len())).into());
    }
    for w in &words {
        inputs.inline("word", w);
    }
    for c in &classes {
        inputs.inline("class", c);
    }
    let laws = words
        .iter()
        .enumerate()
        .map(|(i, w)| {
            Ok(Law {
                word: Word::parse(w)?,
                class: classes[if classes.len() == 1 { 0 } else { i }].parse::<ClassTester>()?,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let out = group::khm_run(&g, &n, &laws)?;
    let laws: Vec<String> = laws.iter().map(|l| format!("{} in {}", l.word, l.class)).collect();
    Ok(group_outcome(&g, &n, &out, Order::Included, json!({ "laws": laws })))
}

pub fn group_spectrum(inputs: &mut Inputs, a: &GroupArgs<'_>) -> Run {
    let (g, n) = group_and_subgroup(inputs, a)?;
    let out = group::spectrum_run(&g, &n)?;
    let extra = json!({ "spectrum_n": out.spectrum_n, "spectrum_h": out.spectrum_h });
    Ok(group_outcome(&g, &n, &out.run, Order::Reversed, extra))
}

pub fn group_series(inputs: &mut Inputs, a: &GroupArgs<'_>, series: &str, cap: Option<usize>) -> Run {
    let (g, n) = group_and_subgroup(inputs, a)?;
    let text = if series.trim_start().starts_with('[') {
        inputs.inline("series", series);
        series.to_string()
    } else {
        inputs.read("series", Path::new(series))?
    };
    let layers = Layer::parse_series(&text)?;
    let out = group::series_run(&g, &n, &layers, cap.unwrap_or(1_000_000))?;
    let layers: Vec<String> = layers.iter().map(Layer::to_string).collect();
    Ok(group_outcome(&g, &n, &out, Order::Included, json!({ "layers": layers })))
}

fn set_outcome(out: geomset::SetOutcome, removed_n: usize) -> Outcome {
    Outcome {
        result: json!({
            "removed": out.removed,
            "remaining": out.remaining,
            "arity": out.arity,
            "codim_n": removed_n,
            "codim_h": out.removed.len(),
            "bound": out.bound,
            "group_order": out.group_order.to_string(),
        }),
        clauses: out.clauses,
        traces: vec![("engine".into(), out.trace, Order::Removed)],
    }
}

pub fn set_sphere(inputs: &mut Inputs, input: &Path, removed: &str, k: usize, allow_planes: bool, cap: Option<usize>) -> Run {
    let points = PointSet::parse(&inputs.read("input", input)?)?;
    let removed = inputs.id_list("removed", removed)?;
    let out = geomset::sphere_invariant_run(&points, &removed, k, allow_planes, caps(cap))?;
    Ok(set_outcome(out, removed.len()))
}

pub fn set_team(inputs: &mut Inputs, input: &Path, expel: &str, k: usize, self_respect: SelfRespect, cap: Option<usize>) -> Run {
    let relation = Relation::parse(&inputs.read("input", input)?)?;
    let expel = inputs.id_list("expel", expel)?;
    let out = geomset::team_invariant_run(&relation, &expel, k, self_respect, caps(cap))?;
    Ok(set_outcome(out, expel.len()))
}

/// Parses a nonnegative integer written plainly or as `a^b`.
fn parse_big(text: &str) -> Result<BigUint, Error> {
    let bad = || Error::Parse(format!("bad integer {text:?}"));
    match text.split_once('^') {
        Some((a, b)) => {
            let a: BigUint = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().parse().map_err(|_| bad())?;
            Ok(a.pow(b))
        }
        None => text.trim().parse().map_err(|_| bad()),
    }
}

/// `f^k(x)` exactly, with the estimate `x (x+1)^(2^k - 1)` and, given a
/// pool size, whether the pool outlasts the iterate.
pub fn bound(inputs: &mut Inputs, x: &str, k: u32, pool: Option<&str>) -> Run {
    inputs.inline("x", x);
    inputs.inline("k", &k.to_string());
    let xv = parse_big(x)?;
    if k > 20 {
        return Err(Error::PreconditionViolated("k above 20 is out of range".into()).into());
    }
    let iterate = iterate_f(&num_rational::BigRational::from_integer(xv.clone().into()), k).to_integer();
    let iterate = iterate.to_biguint().expect("nonnegative");
    let exponent = (1u64 << k) - 1;
    let estimate = &xv * (&xv + 1u32).pow(exponent as u32);
    let mut clauses = vec![Clause::with_detail(
        "below_estimate",
        iterate <= estimate,
        format!("f^{k}({xv}) <= {xv}·{}^{exponent}", &xv + 1u32),
    )];
    let mut result = json!({
        "x": xv.to_string(),
        "k": k,
        "iterate": iterate.to_string(),
        "estimate": estimate.to_string(),
        "estimate_form": format!("{}^{exponent}·{xv}", &xv + 1u32),
        "strictly_below_estimate": iterate < estimate,
    });
    if let Some(p) = pool {
        inputs.inline("pool", p);
        let pool = parse_big(p)?;
        let remains = pool > iterate;
        result["pool"] = json!(pool.to_string());
        result["pool_exceeds_iterate"] = json!(remains);
        clauses.push(Clause::new("pool_exceeds_iterate", remains));
    }
    Ok(Outcome { result, clauses, traces: vec![] })
}

fn all_subsets(n: usize) -> Result<Vec<IdSet>, Error> {
    if n > 12 {
        return Err(Error::PreconditionViolated(format!("ground set of {n} exceeds 12 for law checks")));
    }
    Ok((0..1usize << n).map(|m| IdSet::from_iter_with_len(n, (0..n).filter(|i| m >> i & 1 == 1))).collect())
}

fn law_pair<L, P>(lattice: &L, p: &P, universe: &[L::Elem], cfg: &LawConfig) -> (Vec<Clause>, Value)
where
    L: latinv::Lattice,
    L::Elem: Serialize,
    P: Predicate<L::Elem> + ?Sized,
{
    let mono: LawReport<L::Elem> = oracle::check_monotone(lattice, p, universe, cfg);
    let multi: LawReport<L::Elem> = oracle::check_multilinear(lattice, p, universe, cfg);
    let clauses = vec![
        Clause::new("monotone_counterexample_revalidates", mono.revalidate(p)),
        Clause::new("multilinear_counterexample_revalidates", multi.revalidate(p)),
    ];
    let result = json!({
        "predicate": p.name(),
        "arity": p.arity(),
        "universe": universe.len(),
        "monotone": mono,
        "multilinear": multi,
    });
    (clauses, result)
}

pub struct LawArgs<'a> {
    pub predicate: &'a str,
    pub input: Option<&'a PathBuf>,
    pub group: Option<&'a str>,
    pub subgroup: Option<&'a str>,
    pub arity: Option<usize>,
    pub size: usize,
    pub seed: u64,
    pub self_respect: SelfRespect,
    pub allow_planes: bool,
}

pub fn verify_laws(inputs: &mut Inputs, a: &LawArgs<'_>) -> Run {
    inputs.inline("predicate", a.predicate);
    let cfg = LawConfig { seed: a.seed, ..LawConfig::default() };
    let need_input = || a.input.map(PathBuf::as_path).ok_or_else(|| Error::Parse("--input is required".into()));
    let (clauses, result) = match a.predicate {
        "forbidden" | "triangle" => {
            let g = read_graph(inputs, need_input()?)?;
            let family = [families::triangle()];
            let p = ForbiddenPredicate::new(&g, &family)?;
            let lattice = CofiniteLattice::new(g.edge_count(), vec![]);
            law_pair(&lattice, &p, &all_subsets(g.edge_count())?, &cfg)
        }
        "spectrum" => {
            let g = read_group(inputs, a.input.map(PathBuf::as_path), a.group)?;
            let n = match a.subgroup {
                Some(s) => group::parse_subgroup(&g, &inputs.id_list("subgroup", s)?)?,
                None => g.trivial_subgroup(),
            };
            let exps = g.spectrum_of_quotient(&n)?;
            let p = group::spectrum_predicate(&g, exps);
            let lattice = latinv::dualize(NormalLattice::new(&g, vec![]), |h: &IdSet| Codim::log2_ratio(h.len() as u64, 1));
            law_pair(&lattice, &p, &g.normal_subgroups(), &cfg)
        }
        "team" => {
            let r = Relation::parse(&inputs.read("input", need_input()?)?)?;
            let k = a.arity.unwrap_or(3);
            let all: Vec<usize> = (0..r.n).collect();
            let p = geomset::ForbiddenTuples::new(
                format!("every {k} candidates efficient"),
                k,
                geomset::inefficient_groups(&r, &all, k, a.self_respect),
            );
            law_pair(&CofiniteLattice::new(r.n, vec![]), &p, &all_subsets(r.n)?, &cfg)
        }
        "sphere" => {
            let pts = PointSet::parse(&inputs.read("input", need_input()?)?)?;
            let k = a.arity.unwrap_or(4);
            let p = geomset::ForbiddenTuples::new(
                format!("no {k} points on a common sphere"),
                k,
                geomset::cospherical_subsets(&pts, k, a.allow_planes)?,
            );
            law_pair(&CofiniteLattice::new(pts.len(), vec![]), &p, &all_subsets(pts.len())?, &cfg)
        }
        "even-kept" => {
            let p = negatives::even_kept(a.arity.unwrap_or(1));
            law_pair(&CofiniteLattice::new(a.size, vec![]), &p, &all_subsets(a.size)?, &cfg)
        }
        "at-most-one-kept" => {
            let p = negatives::at_most_one_kept(a.arity.unwrap_or(1));
            law_pair(&CofiniteLattice::new(a.size, vec![]), &p, &all_subsets(a.size)?, &cfg)
        }
        other => return Err(Error::Parse(format!("unknown predicate {other:?}")).into()),
    };
    Ok(Outcome { result, clauses, traces: vec![] })
}

/// Extra clauses for `--verify`: the trace inequalities of every run.
pub fn verify_traces(outcome: &Outcome) -> Vec<Clause> {
    outcome.traces.iter().flat_map(|(label, t, order)| trace_clauses(label, t, *order)).collect()
}
