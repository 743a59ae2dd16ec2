//! Characteristic subgroups from the engine: verbal laws, spectra and
//! normal series.

use serde::{Deserialize, Serialize};

use super::aut::{automorphism_group, DEFAULT_AUT_CAP};
use super::class::ClassTester;
use super::table::{FiniteGroup, Subgroup};
use super::word::{verbal_unchecked, Word};
use crate::clause::{ensure_all, Clause};
use crate::codim::Codim;
use crate::engine::{engine_run, orbit_closure, trace_predicate_failures, EngineTrace, DEFAULT_ORBIT_CAP};
use crate::error::{Error, Result};
use crate::lattice::{dualize, Lattice};
use crate::perm::Perm;
use crate::predicate::{
    compose_predicates, FnPredicate, FnRowPredicate, Predicate, RowPredicate, DEFAULT_COMPOSITION_BUDGET,
};

/// Normal subgroups under inclusion; join is the product, meet the
/// intersection, codimension `log2 |G : H|`, generators act as automorphisms.
pub struct NormalLattice<'a> {
    group: &'a FiniteGroup,
    automorphisms: Vec<Perm>,
}

impl<'a> NormalLattice<'a> {
    pub fn new(group: &'a FiniteGroup, automorphisms: Vec<Perm>) -> Self {
        NormalLattice { group, automorphisms }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    pub fn automorphisms(&self) -> &[Perm] {
        &self.automorphisms
    }

    pub fn is_characteristic(&self, h: &Subgroup) -> bool {
        self.automorphisms.iter().all(|p| self.group.image(p, h) == *h)
    }
}

impl Lattice for NormalLattice<'_> {
    type Elem = Subgroup;

    fn leq(&self, a: &Subgroup, b: &Subgroup) -> bool {
        a.is_subset(b)
    }
    fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.group.product(a, b)
    }
    fn meet(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        a.intersection(b)
    }
    fn codim(&self, a: &Subgroup) -> Codim {
        Codim::log2_ratio(self.group.order() as u64, a.len() as u64)
    }
    fn generator_count(&self) -> usize {
        self.automorphisms.len()
    }
    fn apply(&self, generator: usize, a: &Subgroup) -> Subgroup {
        self.group.image(&self.automorphisms[generator], a)
    }
    fn top(&self) -> Option<Subgroup> {
        Some(self.group.whole())
    }
    fn bottom(&self) -> Option<Subgroup> {
        Some(self.group.trivial_subgroup())
    }
}

/// Every characteristic subgroup, by filtering the normal subgroups.
pub fn characteristic_subgroups(g: &FiniteGroup, automorphisms: &[Perm]) -> Vec<Subgroup> {
    g.normal_subgroups()
        .into_iter()
        .filter(|h| automorphisms.iter().all(|p| g.image(p, h) == *h))
        .collect()
}

/// A verbal condition: `w(K_1..K_d)` lies in the class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Law {
    pub word: Word,
    pub class: ClassTester,
}

impl Law {
    pub fn holds(&self, g: &FiniteGroup, args: &[Subgroup]) -> bool {
        self.class.contains(g, &verbal_unchecked(g, &self.word, &args[..self.word.weight()]))
    }
}

/// Conjunction of laws; a law of weight `d` reads the first `d` arguments.
pub fn law_predicate<'a>(g: &'a FiniteGroup, laws: &'a [Law]) -> impl Predicate<Subgroup> + 'a {
    let t = laws.iter().map(|l| l.word.weight()).max().unwrap_or(0);
    FnPredicate::new("verbal laws", t, move |args: &[Subgroup]| laws.iter().all(|l| l.holds(g, args)))
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupOutcome {
    /// Member ids of the resulting subgroup.
    pub subgroup: Vec<usize>,
    pub order: usize,
    pub index: usize,
    pub arity: usize,
    pub codim: String,
    pub bound: String,
    pub automorphism_order: usize,
    pub trace: EngineTrace<Vec<usize>>,
    pub clauses: Vec<Clause>,
}

fn require_normal(g: &FiniteGroup, n: &Subgroup) -> Result<()> {
    if n.universe_len() != g.order() || !g.is_subgroup(n) {
        return Err(Error::PreconditionViolated("not a subgroup".into()));
    }
    if !g.is_normal(n) {
        return Err(Error::NotNormal);
    }
    Ok(())
}

fn subgroup_from_ids(g: &FiniteGroup, ids: &[usize]) -> Result<Subgroup> {
    if let Some(bad) = ids.iter().find(|&&x| x >= g.order()) {
        return Err(Error::Parse(format!("element {bad} out of range")));
    }
    Ok(g.subset(ids.iter().copied()))
}

/// Parses a member-id list into a subgroup, checking closure.
pub fn parse_subgroup(g: &FiniteGroup, ids: &[usize]) -> Result<Subgroup> {
    let s = subgroup_from_ids(g, ids)?;
    if !g.is_subgroup(&s) {
        return Err(Error::PreconditionViolated("element set is not a subgroup".into()));
    }
    Ok(s)
}

fn finish(
    g: &FiniteGroup,
    h: &Subgroup,
    arity: usize,
    codim: &Codim,
    bound: String,
    automorphism_order: usize,
    trace: &EngineTrace<Subgroup>,
    clauses: Vec<Clause>,
) -> Result<GroupOutcome> {
    ensure_all(&clauses)?;
    Ok(GroupOutcome {
        subgroup: h.to_vec(),
        order: h.len(),
        index: g.order() / h.len(),
        arity,
        codim: codim.to_string(),
        bound,
        automorphism_order,
        trace: trace.map(|s| s.to_vec()),
        clauses,
    })
}

/// Characteristic `H` satisfying every law, with
/// `log2 |G : H| <= f^{t-1}(log2 |G : N|)` for `t` the largest weight.
pub fn khm_run(g: &FiniteGroup, n: &Subgroup, laws: &[Law]) -> Result<GroupOutcome> {
    require_normal(g, n)?;
    if laws.is_empty() {
        return Err(Error::PreconditionViolated("no laws given".into()));
    }
    let predicate = law_predicate(g, laws);
    let t = predicate.arity();
    for law in laws {
        if !law.holds(g, &vec![n.clone(); t]) {
            return Err(Error::PreconditionViolated(format!(
                "{}(N, ..., N) is not {}",
                law.word, law.class
            )));
        }
    }
    let auts = automorphism_group(g, DEFAULT_AUT_CAP)?;
    let lattice = NormalLattice::new(g, auts.generators.clone());
    let run = engine_run(&lattice, n, t, DEFAULT_ORBIT_CAP)?;
    let h = &run.result;
    let start = lattice.codim(n);
    let bound_ok = run.codim.le_f_iterate(&start, (t - 1) as u32)?;
    let core = orbit_closure(&lattice, n, DEFAULT_ORBIT_CAP)?
        .iter()
        .fold(g.whole(), |acc, x| acc.intersection(x));
    let mut clauses = vec![Clause::new("characteristic", lattice.is_characteristic(h))];
    for law in laws {
        clauses.push(Clause::with_detail(
            "law_holds",
            law.holds(g, &vec![h.clone(); t]),
            format!("{} in {}", law.word, law.class),
        ));
    }
    clauses.push(Clause::with_detail(
        "codim_bound",
        bound_ok,
        format!("{} <= f^{}({start})", run.codim, t - 1),
    ));
    // G/H embeds in a direct power of G/N when H contains the core of N.
    clauses.push(Clause::new("contains_core_of_n", core.is_subset(h)));
    let failures = trace_predicate_failures(&run.trace, &predicate);
    clauses.push(Clause::with_detail("trace_predicate", failures.is_empty(), format!("failing steps {failures:?}")));
    finish(g, h, t, &run.codim, format!("f^{}({start})", t - 1), auts.order, &run.trace, clauses)
}

/// `∀x ∃i: x^{n_i} ∈ N_i` for the given exponents.
pub fn spectrum_predicate<'a>(g: &'a FiniteGroup, exponents: Vec<usize>) -> impl Predicate<Subgroup> + 'a {
    let t = exponents.len();
    FnPredicate::new(format!("spectrum {exponents:?}"), t, move |args: &[Subgroup]| {
        (0..g.order()).all(|x| exponents.iter().zip(args).any(|(&k, a)| a.contains(g.pow(x, k))))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumOutcome {
    #[serde(flatten)]
    pub run: GroupOutcome,
    pub spectrum_n: Vec<usize>,
    pub spectrum_h: Vec<usize>,
}

/// Characteristic `H` with `spectrum(G/H) ⊆ spectrum(G/N)` and
/// `log2 |H| <= f^{t-1}(log2 |N|)`, `t = |spectrum(G/N)|`, from the engine
/// on the order dual of the normal-subgroup lattice.
pub fn spectrum_run(g: &FiniteGroup, n: &Subgroup) -> Result<SpectrumOutcome> {
    require_normal(g, n)?;
    let spectrum_n = g.spectrum_of_quotient(n)?;
    let t = spectrum_n.len();
    let auts = automorphism_group(g, DEFAULT_AUT_CAP)?;
    let lattice = dualize(NormalLattice::new(g, auts.generators.clone()), |h: &Subgroup| {
        Codim::log2_ratio(h.len() as u64, 1)
    });
    let run = engine_run(&lattice, n, t, DEFAULT_ORBIT_CAP)?;
    let h = &run.result;
    let spectrum_h = g.spectrum_of_quotient(h)?;
    let start = lattice.codim(n);
    let bound_ok = run.codim.le_f_iterate(&start, (t - 1) as u32)?;
    let predicate = spectrum_predicate(g, spectrum_n.clone());
    let failures = trace_predicate_failures(&run.trace, &predicate);
    let clauses = vec![
        Clause::new("characteristic", lattice.inner().is_characteristic(h)),
        Clause::with_detail(
            "spectrum_contained",
            spectrum_h.iter().all(|x| spectrum_n.contains(x)),
            format!("{spectrum_h:?} within {spectrum_n:?}"),
        ),
        Clause::with_detail("codim_bound", bound_ok, format!("{} <= f^{}({start})", run.codim, t - 1)),
        Clause::with_detail("trace_predicate", failures.is_empty(), format!("failing steps {failures:?}")),
    ];
    let out = finish(g, h, t, &run.codim, format!("f^{}({start})", t - 1), auts.order, &run.trace, clauses)?;
    Ok(SpectrumOutcome { run: out, spectrum_n, spectrum_h })
}

/// Requirement on one quotient of a normal series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layer {
    /// The quotient satisfies `w = 1`.
    Word(Word),
    /// The quotient lies in the class.
    Class(ClassTester),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    word: Option<String>,
    class: Option<String>,
}

impl Layer {
    /// Number of argument slots the layer contributes to the series arity.
    pub fn weight(&self) -> usize {
        match self {
            Layer::Word(w) => w.weight(),
            Layer::Class(_) => 1,
        }
    }

    /// Whether `upper / lower` meets the requirement.
    pub fn holds(&self, g: &FiniteGroup, upper: &Subgroup, lower: &Subgroup) -> bool {
        match self {
            Layer::Word(w) => verbal_unchecked(g, w, &vec![upper.clone(); w.weight()]).is_subset(lower),
            Layer::Class(c) => c.contains_quotient(g, upper, lower),
        }
    }

    /// JSON array of `{"word": "..."}` or `{"class": "..."}`, bottom layer first.
    pub fn parse_series(text: &str) -> Result<Vec<Layer>> {
        let raw: Vec<RawLayer> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_iter()
            .map(|r| match (r.word, r.class) {
                (Some(w), None) => Ok(Layer::Word(Word::parse(&w)?)),
                (None, Some(c)) => Ok(Layer::Class(c.parse()?)),
                _ => Err(Error::Parse("each layer needs exactly one of word, class".into())),
            })
            .collect()
    }
}

impl std::fmt::Display for Layer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Layer::Word(w) => write!(f, "{w} = 1"),
            Layer::Class(c) => write!(f, "in {c}"),
        }
    }
}

/// Whether `N` has a series `1 = A_0 ⊆ ... ⊆ A_k = N` of subgroups normal in
/// `G` with `A_i / A_{i-1}` meeting `layers[i-1]`, by exhaustive search.
pub fn series_predicate(g: &FiniteGroup, n: &Subgroup, layers: &[Layer], cap: usize) -> Result<bool> {
    require_normal(g, n)?;
    let normals: Vec<Subgroup> = g.normal_subgroups().into_iter().filter(|a| a.is_subset(n)).collect();
    let mut nodes = 0usize;
    fn search(
        g: &FiniteGroup,
        normals: &[Subgroup],
        upper: &Subgroup,
        layers: &[Layer],
        nodes: &mut usize,
        cap: usize,
    ) -> Result<bool> {
        *nodes += 1;
        if *nodes > cap {
            return Err(Error::cap("series search nodes", cap));
        }
        let Some((top, rest)) = layers.split_last() else {
            return Ok(upper.len() == 1);
        };
        for lower in normals.iter().filter(|a| a.is_subset(upper)) {
            if (!rest.is_empty() || lower.len() == 1)
                && top.holds(g, upper, lower)
                && search(g, normals, lower, rest, nodes, cap)?
            {
                return Ok(true);
            }
        }
        Ok(false)
    }
    search(g, &normals, n, layers, &mut nodes, cap)
}

/// The series property as a single monotone multilinear predicate of arity
/// `∏ weight(layer)`, built by composing one existential layer at a time
/// over all normal subgroups.
pub fn series_composed_predicate<'a>(
    g: &'a FiniteGroup,
    layers: &'a [Layer],
    budget: usize,
) -> Result<Box<dyn Predicate<Subgroup> + 'a>> {
    let normals = g.normal_subgroups();
    let mut current: Box<dyn Predicate<Subgroup> + 'a> =
        Box::new(FnPredicate::new("trivial", 1, |a: &[Subgroup]| a[0].len() == 1));
    for layer in layers {
        let k = current.arity();
        let d = layer.weight();
        let rows: Vec<Box<dyn RowPredicate<Subgroup> + 'a>> = (0..k)
            .map(|_| -> Box<dyn RowPredicate<Subgroup> + 'a> {
                Box::new(FnRowPredicate::new(d, move |row: &[Subgroup], m: &Subgroup| match layer {
                    Layer::Word(w) => verbal_unchecked(g, w, row).is_subset(m),
                    Layer::Class(c) => c.contains_quotient(g, &row[0], &row[0].intersection(m)),
                }))
            })
            .collect();
        current = Box::new(compose_predicates(current, rows, normals.clone(), budget)?);
    }
    Ok(current)
}

/// Characteristic `H` with a series of the same shape as `N`'s and
/// `log2 |G : H| <= f^{t-1}(log2 |G : N|)`, `t = ∏ weight(layer)`.
pub fn series_run(g: &FiniteGroup, n: &Subgroup, layers: &[Layer], cap: usize) -> Result<GroupOutcome> {
    if layers.is_empty() {
        return Err(Error::PreconditionViolated("empty series specification".into()));
    }
    if !series_predicate(g, n, layers, cap)? {
        return Err(Error::PreconditionViolated("N has no series of the requested shape".into()));
    }
    let t: usize = layers.iter().map(Layer::weight).product();
    let auts = automorphism_group(g, DEFAULT_AUT_CAP)?;
    let lattice = NormalLattice::new(g, auts.generators.clone());
    let run = engine_run(&lattice, n, t, DEFAULT_ORBIT_CAP)?;
    let h = &run.result;
    let start = lattice.codim(n);
    let bound_ok = run.codim.le_f_iterate(&start, (t - 1) as u32)?;
    let mut clauses = vec![
        Clause::new("characteristic", lattice.is_characteristic(h)),
        Clause::new("series_holds", series_predicate(g, h, layers, cap)?),
        Clause::with_detail("codim_bound", bound_ok, format!("{} <= f^{}({start})", run.codim, t - 1)),
    ];
    if let Ok(p) = series_composed_predicate(g, layers, DEFAULT_COMPOSITION_BUDGET) {
        let failures = trace_predicate_failures(&run.trace, &p);
        clauses.push(Clause::with_detail("trace_predicate", failures.is_empty(), format!("failing steps {failures:?}")));
    }
    finish(g, h, t, &run.codim, format!("f^{}({start})", t - 1), auts.order, &run.trace, clauses)
}
