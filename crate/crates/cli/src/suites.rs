use std::path::PathBuf;

use lhtw::bounds::appendix::{
    appendix_a_candidates, appendix_a_grid_check, appendix_b_min_check, appendix_c_min_check, sample_triples, MAX_ENUM_DEGREE,
    MAX_ENUM_N,
};
use lhtw::bounds::{cor_3_4_lower, thm_1_3_lower, Bound};
use lhtw::corpus::{self, CorpusInput, RunManifest};
use lhtw::derivations::{two_section, witness_lemma_1_1, witness_lemma_1_2};
use lhtw::generators::{cycle_power_dual, graph_dual, path_power_dual, random_graph};
use lhtw::solvers::{brute_force_treewidth, exact_treewidth, BRUTE_FORCE_LIMIT};
use lhtw::Rational;

use crate::{emit, Suite};

pub struct Options {
    pub seed: u64,
    pub max_n: usize,
    pub manifest: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

struct Tally {
    failed: usize,
    total: usize,
}

impl Tally {
    fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        emit(&format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" }));
    }
}

/// Runs the chosen suite and prints one line per check. `Err` means the
/// options themselves were unusable.
pub fn run(suite: Suite, opts: &Options) -> Result<bool, String> {
    let mut t = Tally { failed: 0, total: 0 };
    let all = suite == Suite::All;
    if all || suite == Suite::Core {
        core(&mut t, opts);
    }
    if all || suite == Suite::Bounds {
        bounds(&mut t, opts)?;
    }
    if all || suite == Suite::Appendix {
        appendix(&mut t, opts);
    }
    if all || suite == Suite::Sharpness {
        sharpness(&mut t);
    }
    emit(&format!("{} of {} checks passed\n", t.total - t.failed, t.total));
    Ok(t.failed == 0)
}

fn core(t: &mut Tally, opts: &Options) {
    let mut mismatches = Vec::new();
    let mut count = 0;
    let mut s = opts.seed;
    while count < 200 {
        let n = 2 + (s as usize % (BRUTE_FORCE_LIMIT - 1));
        let g = random_graph(n, 0.5, s);
        s += 1;
        if !g.is_connected() {
            continue;
        }
        count += 1;
        let exact = exact_treewidth(&g, None).map(|r| r.width);
        if exact.as_ref().ok() != brute_force_treewidth(&g).as_ref().ok() {
            mismatches.push(s - 1);
        }
    }
    t.check("oracle", mismatches.is_empty(), format!("{count} connected graphs on <= {BRUTE_FORCE_LIMIT} vertices, mismatching seeds {mismatches:?}"));

    let graphs = corpus::random_min_degree_two_graphs(100, 8, opts.seed);
    let bad = graphs
        .iter()
        .filter(|g| {
            let h = graph_dual(g).expect("minimum degree 2");
            !(witness_lemma_1_1(&h).is_ok() && witness_lemma_1_2(&h).is_ok())
        })
        .count();
    t.check("witnesses", bad == 0, format!("{} graph duals, {bad} failures", graphs.len()));

    let manifest = RunManifest {
        command: "verify --suite core".into(),
        inputs: vec![CorpusInput::Random { count: 24, max_n: opts.max_n.min(14) }],
        seed: opts.seed,
        exact_limit: lhtw::solvers::exact_limit(),
        outputs: vec![],
    };
    let report = corpus::run(&manifest);
    for name in ["tw_certificate", "stw_identity", "td_to_supertree", "supertree_to_td"] {
        let failing: Vec<&str> = report
            .rows
            .iter()
            .filter(|r| r.checks.get(name) == Some(&false))
            .map(|r| r.id.as_str())
            .collect();
        t.check(name, failing.is_empty(), format!("{} instances, failing {failing:?}", report.rows.len()));
    }
}

fn bounds(t: &mut Tally, opts: &Options) -> Result<(), String> {
    let manifest = match &opts.manifest {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", p.display()))?
        }
        None => {
            let mut m = RunManifest::default_with_seed(opts.seed);
            m.inputs[0] = CorpusInput::Random { count: corpus::DEFAULT_CORPUS_SIZE, max_n: opts.max_n };
            m
        }
    };
    let report = corpus::run(&manifest);
    for row in report.failures() {
        let failed: Vec<&String> = row.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k).collect();
        t.check(&row.id, false, format!("failed {failed:?}; {}", row.notes.join("; ")));
    }
    t.check("corpus", report.pass(), format!("{} rows, {} failing", report.rows.len(), report.failures().len()));
    if let Some(p) = &opts.json {
        std::fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    if let Some(p) = &opts.csv {
        std::fs::write(p, report.to_csv()).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    Ok(())
}

fn appendix(t: &mut Tally, opts: &Options) {
    let mut bad_b = Vec::new();
    let mut cases = 0;
    for n in 0..=MAX_ENUM_N {
        for d in 2..=MAX_ENUM_DEGREE {
            for big in d..=MAX_ENUM_DEGREE {
                cases += 1;
                if !appendix_b_min_check(n, d, big).is_ok_and(|c| c.holds) {
                    bad_b.push((n, d, big));
                }
            }
        }
    }
    t.check("program-b", bad_b.is_empty(), format!("{cases} cases, failing {bad_b:?}"));

    let mut bad_c = Vec::new();
    cases = 0;
    for n in 0..=MAX_ENUM_N {
        for n1 in 0..=n {
            for n2 in 0..=n {
                for big in 2..=MAX_ENUM_DEGREE {
                    cases += 1;
                    if !appendix_c_min_check(n, n1, n2, big).is_ok_and(|c| c.holds) {
                        bad_c.push((n, n1, n2, big));
                    }
                }
            }
        }
    }
    t.check("program-c", bad_c.is_empty(), format!("{cases} cases, failing {bad_c:?}"));

    let triples = sample_triples(100, opts.seed);
    let mut envelope = 0;
    let mut branch = 0;
    for &(s, d, big) in &triples {
        let c = appendix_a_candidates(s, d, big).expect("sampled inside the domain");
        envelope += usize::from(!appendix_a_grid_check(&c, 200, 1e-9).holds);
        branch += usize::from(c.branch_condition != (c.f_half_s > c.f_halfminus_s));
    }
    t.check("envelope", envelope == 0, format!("{} triples, {envelope} grid violations", triples.len()));
    t.check("branch-condition", branch == 0, format!("{} triples, {branch} disagreements", triples.len()));
}

fn sharpness(t: &mut Tally) {
    for (k, n) in [(1, 6), (1, 8), (2, 8), (2, 10), (2, 12)] {
        let h = cycle_power_dual(n, k, false).expect("valid family");
        let tw = exact_treewidth(&two_section(&h), None).expect("small").width;
        let target = k * k + 2 * k - 1;
        let bound = thm_1_3_lower(2 * k);
        let ok = tw == target && bound == Rational::from_integer(target as i64);
        t.check(&format!("even-n{n}-k{k}"), ok, format!("tw {tw}, lower bound {bound}, expected {target}"));
    }
    for n in [10, 12] {
        let h = cycle_power_dual(n, 2, true).expect("valid family");
        let tw = exact_treewidth(&two_section(&h), None).expect("small").width;
        let ok = h.anti_rank() == 3 && tw == 5;
        t.check(&format!("odd-n{n}-k2"), ok, format!("s {}, tw {tw}, expected s 3 and tw 5", h.anti_rank()));
    }
    for n in [10, 14] {
        let h = path_power_dual(n, 2).expect("valid family");
        let tw = exact_treewidth(&two_section(&h), None).expect("small").width;
        let cor = Bound::strict_lower(cor_3_4_lower(2, h.avg_rank()).expect("h = 2"));
        let ok = tw >= 3 && cor.admits(tw);
        t.check(&format!("path-n{n}-k2"), ok, format!("tw {tw}, strict lower bound {}", cor.value));
    }
}
