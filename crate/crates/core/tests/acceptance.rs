//! Acceptance suite: one line per criterion, exit status 1 if any fails.

mod common;

use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{connected, iso, rational, rng, union};
use reebflow::flowops::{
    backward_view, band_intersection, smooth, truncate, truncated_smooth, FlowFamily, FlowParams,
};
use reebflow::metrics::{
    estimate_distance, transfer_interleaving, verify_interleaving, Certificate, DistanceBracket, DistanceError,
};
use reebflow::morphisms::{compose, equal_maps, flow_functor, flow_map_between, FlowMapKind, ReebMorphism};
use reebflow::properties::tail_report;
use reebflow::reeb::{image, is_connected, Interval};
use reebflow::tooling::{generate, Family};
use reebflow::{h, Bound, Height, ReebGraph};

const IMAGE_CASES: usize = 500;
const IMAGE_LIMIT: Duration = Duration::from_secs(10);
const ORACLE_CASES: usize = 100;
const COMMUTE_CASES: usize = 100;
const ADDITIVE_CASES: usize = 100;
const FLOW_CASES: usize = 50;
const SEGMENT_TOL: (i64, i64) = (1, 1000);
const SEGMENT_LIMIT: Duration = Duration::from_secs(30);
const SANDWICH_PAIRS: usize = 20;
const SANDWICH_TOL: (i64, i64) = (1, 8);
const SANDWICH_BUDGET: u64 = 200_000;
const TRUNCATE_EDGES: usize = 100_000;
const TRUNCATE_LIMIT: Duration = Duration::from_secs(1);
const SMOOTH_EDGES: usize = 10_000;
const SMOOTH_LIMIT: Duration = Duration::from_secs(2);
const DOUBLING_RATIO: f64 = 2.5;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {n:>2} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn endpoints(iv: &Interval) -> Option<(Height, Height)> {
    match iv {
        Interval::Closed(a, b) => Some((a.clone(), b.clone())),
        Interval::Empty => None,
    }
}

fn corpus(seed: u64, count: usize, max_n: usize) -> Vec<ReebGraph> {
    let mut r = rng(seed);
    (0..count).map(|_| connected(&mut r, max_n)).collect()
}

fn add(b: &Bound, x: &Height) -> Bound {
    match b {
        Bound::Finite(v) => Bound::Finite(v + x),
        Bound::Infinite => Bound::Infinite,
    }
}

fn image_law(rep: &mut Report) {
    let graphs = corpus(1, IMAGE_CASES, 10);
    let mut r = rng(11);
    let start = Instant::now();
    let mut good = 0;
    for g in &graphs {
        let eps = rational(&mut r, &h(0, 1), &h(5, 1));
        let (a, b) = endpoints(&image(g).1).unwrap();
        let s = smooth(g, &eps).unwrap();
        if image(&s.graph).1 == Interval::new(&a - &eps, &b + &eps) {
            good += 1;
        }
    }
    let t = start.elapsed();
    rep.line(
        1,
        "image law",
        good == IMAGE_CASES && t < IMAGE_LIMIT,
        format!("{good}/{IMAGE_CASES} exact, {:.2} s (limit {} s)", t.as_secs_f64(), IMAGE_LIMIT.as_secs()),
    );
}

fn truncated_image_and_connectivity(rep: &mut Report) {
    let graphs = corpus(1, IMAGE_CASES, 10);
    let mut r = rng(12);
    let mut images = 0;
    let mut empties = 0;
    let mut linked = 0;
    for g in &graphs {
        let eps = rational(&mut r, &h(0, 1), &h(5, 1));
        let tau = rational(&mut r, &h(0, 1), &(&eps + &eps));
        let (a, b) = endpoints(&image(g).1).unwrap();
        let out = truncated_smooth(g, &FlowParams::new(eps.clone(), tau.clone()).unwrap()).unwrap();
        let shrink = &tau - &eps;
        let expect_empty = &b - &a < &shrink + &shrink;
        let ok = if expect_empty {
            empties += 1;
            out.is_empty()
        } else {
            image(&out).1 == Interval::new(&a + &shrink, &b - &shrink)
        };
        if ok {
            images += 1;
        }
        if is_connected(&out) || out.is_empty() {
            linked += 1;
        }
    }
    rep.line(
        2,
        "truncated image law",
        images == IMAGE_CASES,
        format!("{images}/{IMAGE_CASES} exact ({empties} predicted empty)"),
    );
    rep.line(3, "connectivity", linked == IMAGE_CASES, format!("{linked}/{IMAGE_CASES} connected"));
}

fn tail_propagation(rep: &mut Report) {
    let graphs = corpus(4, IMAGE_CASES, 10);
    let mut r = rng(14);
    let (mut smooth_ok, mut trunc_ok, mut trunc_checked) = (0, 0, 0);
    for g in &graphs {
        let eps = rational(&mut r, &h(0, 1), &h(3, 1));
        let base = tail_report(g);
        let s = smooth(g, &eps).unwrap();
        let rs = tail_report(&s.graph);
        let two = &eps + &eps;
        let safe_s = rs.max_safe.clone().unwrap();
        let safe_g = base.max_safe.clone().unwrap();
        if rs.max_tailed >= add(&base.max_tailed, &two)
            && rs.max_tailed >= Bound::Finite(two.clone())
            && safe_s >= &safe_g + &eps
            && safe_s >= eps
        {
            smooth_ok += 1;
        }
        // truncation below both parameters of the smoothed graph
        let top = match &rs.max_tailed {
            Bound::Finite(t) => t.min_of(&safe_s).clone(),
            Bound::Infinite => safe_s.clone(),
        };
        let tau = rational(&mut r, &h(0, 1), &top);
        let t = truncate(&s.graph, &tau).unwrap();
        let rt = tail_report(&t.graph);
        trunc_checked += 1;
        let tailed = rt.max_tailed >= add(&rs.max_tailed, &-&tau);
        let safe = rt.max_safe.as_ref().is_some_and(|x| x >= &(&safe_s - &tau));
        if tailed && safe {
            trunc_ok += 1;
        }
    }
    rep.line(
        4,
        "tailed/safe propagation",
        smooth_ok == IMAGE_CASES && trunc_ok == trunc_checked,
        format!("smoothing {smooth_ok}/{IMAGE_CASES}, truncation {trunc_ok}/{trunc_checked}"),
    );
}

fn oracle_equivalences(rep: &mut Report) {
    let graphs = corpus(5, ORACLE_CASES, 8);
    let mut r = rng(15);
    let (mut back, mut band) = (0, 0);
    for g in &graphs {
        let eps = rational(&mut r, &h(0, 1), &h(3, 1));
        let tau_b = rational(&mut r, &h(0, 1), &eps);
        let p = FlowParams::new(eps.clone(), tau_b).unwrap();
        if iso(&backward_view(g, &p).unwrap(), &truncated_smooth(g, &p).unwrap()) {
            back += 1;
        }
        let tau = rational(&mut r, &h(0, 1), &(&eps + &eps));
        let p = FlowParams::new(eps.clone(), tau.clone()).unwrap();
        let s = smooth(g, &eps).unwrap();
        if iso(&band_intersection(&s, &tau).unwrap().graph, &truncated_smooth(g, &p).unwrap()) {
            band += 1;
        }
    }
    rep.line(
        5,
        "oracle equivalences",
        back == ORACLE_CASES && band == ORACLE_CASES,
        format!("backward view {back}/{ORACLE_CASES}, band intersection {band}/{ORACLE_CASES}"),
    );
}

// Smoothed random graphs, so that the safety margin is positive.
fn safe_inputs(seed: u64, count: usize) -> Vec<(ReebGraph, Height)> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let g = connected(&mut r, 7);
            let e0 = rational(&mut r, &h(0, 1), &h(2, 1));
            let s = smooth(&g, &e0).unwrap();
            let safe = tail_report(&s.graph).max_safe.unwrap();
            let tau = rational(&mut r, &h(0, 1), &safe);
            ((*s.graph).clone(), tau)
        })
        .collect()
}

fn commutation(rep: &mut Report) {
    let inputs = safe_inputs(6, COMMUTE_CASES);
    let mut r = rng(16);
    let mut good = 0;
    let mut positive = 0;
    for (g, tau) in &inputs {
        let eps = rational(&mut r, &h(0, 1), &h(2, 1));
        if tau.is_positive() {
            positive += 1;
        }
        let st = smooth(&truncate(g, tau).unwrap().graph, &eps).unwrap();
        let ts = truncate(&smooth(g, &eps).unwrap().graph, tau).unwrap();
        if iso(&st.graph, &ts.graph) {
            good += 1;
        }
    }
    rep.line(
        6,
        "commutation",
        good == COMMUTE_CASES,
        format!("{good}/{COMMUTE_CASES} isomorphic with verified witness ({positive} with tau > 0)"),
    );
}

fn additivity(rep: &mut Report) {
    let graphs = corpus(7, ADDITIVE_CASES, 7);
    let mut r = rng(17);
    let mut good = 0;
    for g in &graphs {
        let e1 = rational(&mut r, &h(0, 1), &h(2, 1));
        let t1 = rational(&mut r, &h(0, 1), &e1);
        let e2 = rational(&mut r, &h(0, 1), &h(2, 1));
        let t2 = rational(&mut r, &h(0, 1), &(&e2 + &e2));
        let p1 = FlowParams::new(e1.clone(), t1.clone()).unwrap();
        let p2 = FlowParams::new(e2.clone(), t2.clone()).unwrap();
        let p12 = FlowParams::new(&e1 + &e2, &t1 + &t2).unwrap();
        let twice = truncated_smooth(&truncated_smooth(g, &p1).unwrap(), &p2).unwrap();
        if iso(&twice, &truncated_smooth(g, &p12).unwrap()) {
            good += 1;
        }
    }
    rep.line(7, "additivity", good == ADDITIVE_CASES, format!("{good}/{ADDITIVE_CASES} isomorphic"));
}

// A map out of a fixture graph: either η into a smoothing or the inclusion of a truncation.
fn fixture_map(r: &mut rand_chacha::ChaCha8Rng, i: usize) -> ReebMorphism {
    let g = Arc::new(connected(r, 6));
    if i % 2 == 0 {
        let d = rational(r, &h(0, 1), &h(3, 2));
        FlowFamily::new(g).smoothing(&d).unwrap().eta.clone()
    } else {
        let s = Arc::new((*smooth(&g, &h(1, 1)).unwrap().graph).clone());
        let tau = rational(r, &h(0, 1), &h(1, 1));
        let t = truncate(&s, &tau).unwrap();
        t.sub.inclusion()
    }
}

fn flow_laws(rep: &mut Report) {
    let slopes = [h(0, 1), h(1, 4), h(1, 2), h(3, 4)];
    let mut r = rng(8);
    let (mut identity, mut semigroup, mut natural, mut total) = (0, 0, 0, 0);
    for i in 0..FLOW_CASES {
        let phi = fixture_map(&mut r, i);
        let g = phi.domain().clone();
        let hg = phi.codomain().clone();
        let a = rational(&mut r, &h(0, 1), &h(3, 2));
        let b = &a + &rational(&mut r, &h(1, 6), &h(3, 2));
        for m in &slopes {
            total += 1;
            let p = |e: &Height| FlowParams::slope(e.clone(), m).unwrap();
            if iso(&truncated_smooth(&g, &p(&h(0, 1))).unwrap(), &g) {
                identity += 1;
            }
            let ab = truncated_smooth(&truncated_smooth(&g, &p(&a)).unwrap(), &p(&b)).unwrap();
            if iso(&ab, &truncated_smooth(&g, &p(&(&a + &b))).unwrap()) {
                semigroup += 1;
            }
            let fg = FlowFamily::new(g.clone());
            let fh = FlowFamily::new(hg.clone());
            let square = || -> Option<bool> {
                let (ga, gb) = (fg.level(&p(&a)).ok()?, fg.level(&p(&b)).ok()?);
                let (ha, hb) = (fh.level(&p(&a)).ok()?, fh.level(&p(&b)).ok()?);
                let h0 = fh.level(&FlowParams::zero()).ok()?;
                let fa = flow_functor(&phi, &ga, &h0, &ha).ok()?;
                let fb = flow_functor(&phi, &gb, &h0, &hb).ok()?;
                let rg = flow_map_between(FlowMapKind::Rho, &ga, &gb).ok()?;
                let rh = flow_map_between(FlowMapKind::Rho, &ha, &hb).ok()?;
                equal_maps(&compose(&fa, &rh).ok()?, &compose(&rg, &fb).ok()?).ok()
            };
            if square() == Some(true) {
                natural += 1;
            }
        }
    }
    rep.line(
        8,
        "flow laws",
        identity == total && semigroup == total && natural == total,
        format!("identity {identity}/{total}, semigroup {semigroup}/{total}, naturality {natural}/{total}"),
    );
}

fn segment(a: i64, b: i64) -> Arc<ReebGraph> {
    Arc::new(generate(&Family::Segment(Height::int(a), Height::int(b))).unwrap().graph)
}

fn segment_distance(rep: &mut Report) {
    let tol = h(SEGMENT_TOL.0, SEGMENT_TOL.1);
    let (g, hh) = (segment(-1, 1), segment(-2, 2));
    let mut parts = Vec::new();
    let mut ok = true;
    for m in [h(0, 1), h(1, 4), h(1, 2)] {
        let want = Bound::Finite(&Height::one() / &(&Height::one() - &m));
        let start = Instant::now();
        let br = estimate_distance(&g, &hh, &m, &tol, 2_000_000);
        let t = start.elapsed();
        match br {
            Ok(br) => {
                let width = match (&br.lo, &br.hi) {
                    (Bound::Finite(lo), Bound::Finite(hi)) => hi - lo,
                    _ => Height::int(1 << 20),
                };
                let good = br.lo <= want && want <= br.hi && width <= tol && t < SEGMENT_LIMIT;
                ok &= good;
                parts.push(format!("m={m}: [{}, {}] {:.2} s", br.lo, br.hi, t.as_secs_f64()));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("m={m}: {e}"));
            }
        }
    }
    rep.line(9, "segment distance", ok, format!("{} (tol {tol})", parts.join("; ")));
}

fn bracket(g: &Arc<ReebGraph>, hh: &Arc<ReebGraph>, m: &Height) -> DistanceBracket {
    match estimate_distance(g, hh, m, &h(SANDWICH_TOL.0, SANDWICH_TOL.1), SANDWICH_BUDGET) {
        Ok(b) => b,
        Err(DistanceError::BudgetExceeded(b)) => *b,
        Err(e) => panic!("{e}"),
    }
}

fn scale(b: &Bound, k: &Height) -> Bound {
    match b {
        Bound::Finite(x) => Bound::Finite(x * k),
        Bound::Infinite => Bound::Infinite,
    }
}

// A pair sharing combinatorics, the second with perturbed heights.
fn perturbed_pair(r: &mut rand_chacha::ChaCha8Rng) -> (Arc<ReebGraph>, Arc<ReebGraph>) {
    let g = connected(r, 6);
    for _ in 0..100 {
        let heights: Vec<Height> =
            g.vertices().iter().map(|v| &v.height + &rational(r, &h(-1, 1), &h(1, 1))).collect();
        let pairs: Vec<(u32, u32)> = (0..g.edge_count())
            .map(|ei| {
                let (x, y) = g.ends_at(ei);
                (x as u32, y as u32)
            })
            .collect();
        if let Ok(hh) = ReebGraph::from_heights(heights, &pairs) {
            return (Arc::new(g), Arc::new(hh));
        }
    }
    let c = Arc::new(g);
    (c.clone(), c)
}

fn sandwich(rep: &mut Report) {
    let mut r = rng(10);
    let pairs: Vec<_> = (0..SANDWICH_PAIRS).map(|_| perturbed_pair(&mut r)).collect();
    let one = Height::one();
    let (mut ineq, mut checks, mut transfers, mut verified, mut exhausted) = (0, 0, 0, 0, 0);
    for (g, hh) in &pairs {
        let slopes = [h(0, 1), h(1, 4), h(1, 2)];
        let brs: Vec<DistanceBracket> = slopes.iter().map(|m| bracket(g, hh, m)).collect();
        exhausted += brs.iter().filter(|b| b.hi.is_infinite()).count();
        for (i, j) in [(0, 1), (1, 2)] {
            let (m, mp) = (&slopes[i], &slopes[j]);
            let k = &(&one - m) / &(&one - mp);
            checks += 1;
            if brs[i].lo <= brs[j].hi && brs[j].lo <= scale(&brs[i].hi, &k) {
                ineq += 1;
            }
            for (w, target) in [(&brs[i].witness, mp), (&brs[j].witness, m)] {
                if let Some(w) = w {
                    transfers += 1;
                    if let Ok(t) = transfer_interleaving(w, target) {
                        if verify_interleaving(g, hh, &t).is_ok() {
                            verified += 1;
                        }
                    }
                }
            }
        }
    }
    rep.line(
        10,
        "strong equivalence sandwich",
        ineq == checks && verified == transfers && transfers > 0,
        format!(
            "inequalities {ineq}/{checks}, transfers verified {verified}/{transfers}, {exhausted} brackets without witness"
        ),
    );
}

fn infiniteness(rep: &mut Report) {
    let tol = h(1, 100);
    let seg = segment(0, 2);
    let two = Arc::new(union(&segment(0, 2), &segment(5, 7)));
    let mut ok = true;
    let mut parts = Vec::new();
    for m in [h(0, 1), h(1, 2), h(3, 4)] {
        let br = estimate_distance(&seg, &two, &m, &tol, 100_000).unwrap();
        let good = br.lo.is_infinite() && matches!(br.certificate, Certificate::ComponentMismatch { .. });
        ok &= good;
        parts.push(format!("mismatch m={m}: {}", br.lo));
    }
    let other = segment(0, 3);
    let br = estimate_distance(&seg, &other, &Height::one(), &tol, 100_000).unwrap();
    ok &= br.lo.is_infinite() && br.certificate == Certificate::ImageMismatch;
    parts.push(format!("m=1 unequal images: {}", br.lo));
    let zig = Arc::new(generate(&Family::Zigzag(vec![h(0, 1), h(2, 1), h(1, 1), h(3, 1)])).unwrap().graph);
    let line = segment(0, 3);
    let br = estimate_distance(&zig, &line, &Height::one(), &tol, 1_000_000).unwrap();
    let good = br.hi <= Bound::Finite(Height::int(3));
    ok &= good;
    parts.push(format!("m=1 equal images: [{}, {}] <= 3", br.lo, br.hi));
    rep.line(11, "infiniteness certificates", ok, parts.join("; "));
}

fn goldens(rep: &mut Report) {
    let zig = generate(&Family::Zigzag(vec![h(0, 1), h(2, 1), h(1, 1), h(3, 1)])).unwrap().graph;
    let gone = truncate(&zig, &h(6, 5)).unwrap().graph.is_empty();
    let mut cycles = 0;
    let mut total = 0;
    for top in [h(1, 1), h(2, 1), h(5, 2), h(4, 1)] {
        let c = generate(&Family::Cycle(Height::zero(), top.clone())).unwrap().graph;
        let half = &top / &Height::int(2);
        for eps in [&half - &h(1, 100), half.clone(), &half + &h(1, 3), &half / &Height::int(3)] {
            total += 1;
            let s = smooth(&c, &eps).unwrap();
            let tree = s.graph.edge_count() + 1 == s.graph.vertex_count();
            let want = &eps + &eps >= top;
            let seg = generate(&Family::Segment(-&eps, &top + &eps)).unwrap().graph;
            if tree == want && (!want || iso(&s.graph, &seg)) {
                cycles += 1;
            }
        }
    }
    rep.line(
        12,
        "fixture goldens",
        gone && cycles == total,
        format!("zigzag truncated at 6/5 empty: {gone}; cycle collapse threshold {cycles}/{total}"),
    );
}

fn ladder(edges: usize) -> ReebGraph {
    generate(&Family::Ladder(edges.div_ceil(3) + 1)).unwrap().graph
}

fn best_of<T>(runs: usize, mut f: impl FnMut() -> T) -> Duration {
    (0..runs)
        .map(|_| {
            let s = Instant::now();
            std::hint::black_box(f());
            s.elapsed()
        })
        .min()
        .unwrap()
}

fn performance(rep: &mut Report) {
    let big = ladder(TRUNCATE_EDGES);
    let tt = best_of(3, || truncate(&big, &h(7, 2)).unwrap());
    let small = ladder(SMOOTH_EDGES);
    let double = ladder(2 * SMOOTH_EDGES);
    let eps = h(3, 2);
    let ts = best_of(3, || smooth(&small, &eps).unwrap());
    let td = best_of(3, || smooth(&double, &eps).unwrap());
    let ratio = td.as_secs_f64() / ts.as_secs_f64();
    rep.line(
        13,
        "performance",
        tt < TRUNCATE_LIMIT && ts < SMOOTH_LIMIT && ratio <= DOUBLING_RATIO,
        format!(
            "truncate {} edges {:.3} s (limit {} s); smooth {} edges {:.3} s (limit {} s); doubling ratio {ratio:.2} (limit {DOUBLING_RATIO})",
            big.edge_count(),
            tt.as_secs_f64(),
            TRUNCATE_LIMIT.as_secs(),
            small.edge_count(),
            ts.as_secs_f64(),
            SMOOTH_LIMIT.as_secs(),
        ),
    );
}

fn main() {
    let mut rep = Report { failures: 0 };
    image_law(&mut rep);
    truncated_image_and_connectivity(&mut rep);
    tail_propagation(&mut rep);
    oracle_equivalences(&mut rep);
    commutation(&mut rep);
    additivity(&mut rep);
    flow_laws(&mut rep);
    segment_distance(&mut rep);
    sandwich(&mut rep);
    infiniteness(&mut rep);
    goldens(&mut rep);
    performance(&mut rep);
    if rep.failures > 0 {
        println!("{} criteria failed", rep.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
