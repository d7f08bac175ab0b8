//! Function-preserving isomorphism by backtracking over the graphs with regular points
//! (one edge up, one edge down) smoothed away.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::height::Height;
use crate::morphisms::{compose, equal_maps, from_point_fn, MorphismError, ReebMorphism};
use crate::reeb::{PointRef, ReebGraph};

pub const DEFAULT_ISO_BUDGET: u64 = 1_000_000;

/// A homeomorphism and its inverse.
#[derive(Clone, Debug)]
pub struct IsoWitness {
    pub forward: ReebMorphism,
    pub backward: ReebMorphism,
}

impl IsoWitness {
    /// Both maps verify and compose to identities.
    pub fn verify(&self) -> bool {
        let round = |a: &ReebMorphism, b: &ReebMorphism| {
            compose(a, b)
                .and_then(|c| equal_maps(&c, &ReebMorphism::identity(a.domain().clone())))
                .unwrap_or(false)
        };
        self.forward.is_valid()
            && self.backward.is_valid()
            && round(&self.forward, &self.backward)
            && round(&self.backward, &self.forward)
    }
}

#[derive(Clone, Debug)]
pub enum IsoOutcome {
    Isomorphic(IsoWitness),
    NotIsomorphic,
    Exhausted,
}

impl IsoOutcome {
    /// `None` when the budget ran out.
    pub fn decided(&self) -> Option<bool> {
        match self {
            IsoOutcome::Isomorphic(_) => Some(true),
            IsoOutcome::NotIsomorphic => Some(false),
            IsoOutcome::Exhausted => None,
        }
    }

    pub fn witness(&self) -> Option<&IsoWitness> {
        match self {
            IsoOutcome::Isomorphic(w) => Some(w),
            _ => None,
        }
    }
}

struct Chain {
    lo: usize,
    hi: usize,
    // edge positions from bottom to top
    edges: Vec<usize>,
}

type Signature = (Height, Vec<Height>, Vec<Height>);

struct Reduced {
    // position in the original graph of each reduced vertex
    verts: Vec<usize>,
    chains: Vec<Chain>,
    // reduced vertex -> chains touching it
    adj: Vec<Vec<usize>>,
    // original edge position -> chain
    chain_of_edge: Vec<usize>,
    // original vertex position -> chain, for regular vertices
    chain_of_vertex: Vec<Option<usize>>,
    // original vertex position -> reduced vertex
    reduced_of: Vec<Option<usize>>,
    sigs: Vec<Signature>,
}

impl Reduced {
    fn new(g: &ReebGraph) -> Reduced {
        let n = g.vertex_count();
        let ud: Vec<(Vec<usize>, Vec<usize>)> = (0..n).map(|v| g.up_down_at(v)).collect();
        let regular = |v: usize| ud[v].0.len() == 1 && ud[v].1.len() == 1;
        let mut reduced_of = vec![None; n];
        let mut verts = Vec::new();
        for v in 0..n {
            if !regular(v) {
                reduced_of[v] = Some(verts.len());
                verts.push(v);
            }
        }
        let mut chains = Vec::new();
        let mut adj = vec![Vec::new(); verts.len()];
        let mut chain_of_edge = vec![usize::MAX; g.edge_count()];
        let mut chain_of_vertex = vec![None; n];
        for (r, &v) in verts.iter().enumerate() {
            for &e0 in &ud[v].0 {
                let id = chains.len();
                let mut edges = vec![e0];
                chain_of_edge[e0] = id;
                let mut x = g.ends_at(e0).1;
                while regular(x) {
                    chain_of_vertex[x] = Some(id);
                    let e = ud[x].0[0];
                    edges.push(e);
                    chain_of_edge[e] = id;
                    x = g.ends_at(e).1;
                }
                let hi = reduced_of[x].expect("chain ends at a critical vertex");
                adj[r].push(id);
                adj[hi].push(id);
                chains.push(Chain { lo: r, hi, edges });
            }
        }
        let sigs = (0..verts.len())
            .map(|r| {
                let mut up = Vec::new();
                let mut down = Vec::new();
                for &c in &adj[r] {
                    let ch = &chains[c];
                    if ch.lo == r {
                        up.push(g.height_at(verts[ch.hi]).clone());
                    } else {
                        down.push(g.height_at(verts[ch.lo]).clone());
                    }
                }
                up.sort();
                down.sort();
                (g.height_at(verts[r]).clone(), up, down)
            })
            .collect();
        Reduced { verts, chains, adj, chain_of_edge, chain_of_vertex, reduced_of, sigs }
    }

    fn other(&self, c: usize, r: usize) -> usize {
        let ch = &self.chains[c];
        if ch.lo == r {
            ch.hi
        } else {
            ch.lo
        }
    }

    // chains between r and each neighbour, oriented (r is the low end or not)
    fn neighbour_counts(&self, r: usize) -> HashMap<(usize, bool), usize> {
        let mut out = HashMap::new();
        for &c in &self.adj[r] {
            *out.entry((self.other(c, r), self.chains[c].lo == r)).or_insert(0) += 1;
        }
        out
    }
}

struct Search<'a> {
    a: &'a Reduced,
    b: &'a Reduced,
    order: Vec<usize>,
    sigma: Vec<Option<usize>>,
    used: Vec<bool>,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn run(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let v = self.order[k];
        let counts = self.a.neighbour_counts(v);
        for w in 0..self.b.verts.len() {
            if self.used[w] || self.a.sigs[v] != self.b.sigs[w] {
                continue;
            }
            if self.budget == 0 {
                self.exhausted = true;
                return false;
            }
            self.budget -= 1;
            let other = self.b.neighbour_counts(w);
            let consistent = counts.iter().all(|(&(u, low), &cnt)| match self.sigma[u] {
                Some(x) => other.get(&(x, low)) == Some(&cnt),
                None => true,
            });
            if !consistent {
                continue;
            }
            self.sigma[v] = Some(w);
            self.used[w] = true;
            if self.run(k + 1) {
                return true;
            }
            self.sigma[v] = None;
            self.used[w] = false;
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

// Breadth-first order so every vertex after the first of its component has an assigned neighbour.
fn search_order(r: &Reduced) -> Vec<usize> {
    let n = r.verts.len();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &c in &r.adj[v] {
                let u = r.other(c, v);
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    order
}

pub fn are_isomorphic(g: &ReebGraph, h: &ReebGraph) -> IsoOutcome {
    find_isomorphism(&Arc::new(g.clone()), &Arc::new(h.clone()), DEFAULT_ISO_BUDGET)
}

/// Decides whether `g` and `h` are function-preservingly isomorphic, with at most `budget`
/// candidate vertex assignments.
pub fn find_isomorphism(g: &Arc<ReebGraph>, h: &Arc<ReebGraph>, budget: u64) -> IsoOutcome {
    let a = Reduced::new(g);
    let b = Reduced::new(h);
    if a.verts.len() != b.verts.len() || a.chains.len() != b.chains.len() {
        return IsoOutcome::NotIsomorphic;
    }
    let mut sa = a.sigs.clone();
    let mut sb = b.sigs.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return IsoOutcome::NotIsomorphic;
    }
    let mut search = Search {
        a: &a,
        b: &b,
        order: search_order(&a),
        sigma: vec![None; a.verts.len()],
        used: vec![false; b.verts.len()],
        budget,
        exhausted: false,
    };
    if !search.run(0) {
        return if search.exhausted { IsoOutcome::Exhausted } else { IsoOutcome::NotIsomorphic };
    }
    let sigma: Vec<usize> = search.sigma.iter().map(|s| s.unwrap()).collect();
    let mut inverse = vec![0; sigma.len()];
    for (v, &w) in sigma.iter().enumerate() {
        inverse[w] = v;
    }
    let forward_chains = match_chains(&a, &b, &sigma);
    let backward_chains = match_chains(&b, &a, &inverse);
    let forward = transport(g, h, &a, &b, &sigma, &forward_chains).expect("matched chains");
    let backward = transport(h, g, &b, &a, &inverse, &backward_chains).expect("matched chains");
    IsoOutcome::Isomorphic(IsoWitness { forward, backward })
}

// Pairs chains of `a` with chains of `b` joining the corresponding vertices, in index order.
fn match_chains(a: &Reduced, b: &Reduced, sigma: &[usize]) -> Vec<usize> {
    let mut pool: HashMap<(usize, usize), VecDeque<usize>> = HashMap::new();
    for (c, ch) in b.chains.iter().enumerate() {
        pool.entry((ch.lo, ch.hi)).or_default().push_back(c);
    }
    a.chains
        .iter()
        .map(|ch| pool.get_mut(&(sigma[ch.lo], sigma[ch.hi])).and_then(|q| q.pop_front()).expect("consistent counts"))
        .collect()
}

fn point_on_chain(g: &ReebGraph, ch: &Chain, x: &Height) -> PointRef {
    for &e in &ch.edges {
        let (lo, hi) = g.ends_at(e);
        let (a, b) = g.span_at(e);
        if x == a {
            return PointRef::Vertex(g.vertices()[lo].id);
        }
        if x < b {
            return PointRef::EdgeInterior(g.edges()[e].id, x.clone());
        }
        if x == b {
            return PointRef::Vertex(g.vertices()[hi].id);
        }
    }
    panic!("height {x} outside the chain")
}

fn transport(
    g: &Arc<ReebGraph>,
    h: &Arc<ReebGraph>,
    a: &Reduced,
    b: &Reduced,
    sigma: &[usize],
    chains: &[usize],
) -> Result<ReebMorphism, MorphismError> {
    let image = |p: &PointRef| -> Result<PointRef, MorphismError> {
        Ok(match p {
            PointRef::Vertex(v) => {
                let vi = g.vertex_index(*v);
                match a.reduced_of[vi] {
                    Some(r) => PointRef::Vertex(h.vertices()[b.verts[sigma[r]]].id),
                    None => {
                        let c = a.chain_of_vertex[vi].expect("regular vertex lies on a chain");
                        point_on_chain(h, &b.chains[chains[c]], g.height_at(vi))
                    }
                }
            }
            PointRef::EdgeInterior(e, x) => {
                let c = a.chain_of_edge[g.edge_index(*e)];
                point_on_chain(h, &b.chains[chains[c]], x)
            }
        })
    };
    from_point_fn(g.clone(), h.clone(), image, || MorphismError::LeavesTarget)
}
