//! Correctness of LDC circuits by boxing.
//!
//! The circuit is first flattened into a graph of *cells* joined by *links*.
//! Symmetry nodes disappear by identifying the wires they cross. Every
//! seeding node (⊗-intro, ⊕-elim, ⊥-elim, ⊤-intro, generators, dagger boxes)
//! is a cell. A thinning unit becomes a cell spliced into its anchor wire:
//! a ⊤-elim cell has inputs `[anchor, ⊤]` and output `[anchor]`, a ⊥-intro
//! cell has input `[anchor]` and outputs `[anchor, ⊥]`. A wire whose two ends
//! are both non-seeding (boundary, ⊗-elim, ⊕-intro) gets a wire cell of its
//! own. ⊗-elim and ⊕-intro nodes are never cells; boxes absorb them.
//!
//! Rules, in priority order:
//!
//! * `a1`/`a2`: box a ⊗-intro / ⊕-elim cell.
//! * `b1`: a box absorbs a ⊗-elim whose two outputs both enter it.
//! * `b2`: a box absorbs a ⊕-intro whose two inputs both leave it.
//! * `c`: two boxes joined by exactly one link merge.
//! * `d1`/`d2`/`d3`: box a ⊥-elim, ⊤-intro, or wire cell.
//! * `e1`/`e2`: box a ⊤-elim / ⊥-intro thinning cell.
//! * `e3`/`e4`: a `c` merge in which one side is a still unmerged ⊤-elim /
//!   ⊥-intro thinning cell.
//!
//! Generators and dagger boxes are boxed from the start without a trace
//! entry. The circuit is valid iff the process ends with one box and no
//! unabsorbed node.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, CircuitError, NodeKind, Source, Target, WireId};

/// One rule application. `boxes` holds cell ids: node indices for node
/// cells, `|nodes| + k` for the k-th wire cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: String,
    pub boxes: Vec<usize>,
}

/// A residual box of a stuck run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSummary {
    /// Smallest cell id in the box.
    pub id: usize,
    /// Circuit node indices inside the box.
    pub nodes: Vec<usize>,
    /// Wire cells inside the box, named by their wire.
    pub wires: Vec<WireId>,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

/// Terminal state of a run that did not reach a single box.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxState {
    pub boxes: Vec<BoxSummary>,
    /// Nodes never boxed or absorbed.
    pub pending: Vec<usize>,
    /// Wires joining two different residual parts.
    pub cut: Vec<WireId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub trace: Vec<TraceStep>,
    pub stuck: Option<BoxState>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Boundary,
    Item(usize),
}

#[derive(Clone, Debug)]
struct Link {
    name: WireId,
    src: End,
    dst: End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ItemKind {
    /// A cell boxed by the given rule, or from the start when `None`.
    Cell(Option<&'static str>),
    TensorElim,
    ParIntro,
    /// A symmetry node, removed by wire identification.
    Gone,
}

struct Graph {
    items: Vec<ItemKind>,
    /// Node index for node items, `None` for wire cells.
    node_of: Vec<Option<usize>>,
    links: Vec<Link>,
}

fn build_graph(c: &Circuit) -> Graph {
    let nodes = c.nodes();
    let n_nodes = nodes.len();
    let sources = c.sources();
    let targets = c.targets();
    let is_sym = |n: usize| matches!(nodes[n].kind, NodeKind::Symmetry);

    // Chains of wires joined through symmetries become one link.
    let mut link_of: HashMap<WireId, usize> = HashMap::new();
    let mut links: Vec<Link> = Vec::new();
    for w in c.wires() {
        let starts_at_sym = matches!(sources[&w.id], Source::Node(n, _) if is_sym(n));
        if starts_at_sym {
            continue;
        }
        let src = match sources[&w.id] {
            Source::Boundary(_) => End::Boundary,
            Source::Node(n, _) => End::Item(n),
        };
        let idx = links.len();
        let mut cur = w.id.clone();
        let dst = loop {
            link_of.insert(cur.clone(), idx);
            match targets[&cur] {
                Target::Boundary(_) => break End::Boundary,
                Target::Node(n, p) if is_sym(n) => cur = nodes[n].outputs[1 - p].clone(),
                Target::Node(n, _) => break End::Item(n),
            }
        };
        links.push(Link {
            name: w.id.clone(),
            src,
            dst,
        });
    }

    let mut items: Vec<ItemKind> = nodes
        .iter()
        .map(|n| match &n.kind {
            NodeKind::TensorIntro => ItemKind::Cell(Some("a1")),
            NodeKind::ParElim => ItemKind::Cell(Some("a2")),
            NodeKind::BotElim => ItemKind::Cell(Some("d1")),
            NodeKind::TopIntro => ItemKind::Cell(Some("d2")),
            NodeKind::TopElim { .. } => ItemKind::Cell(Some("e1")),
            NodeKind::BotIntro { .. } => ItemKind::Cell(Some("e2")),
            NodeKind::Generator { .. } | NodeKind::DaggerBox { .. } => ItemKind::Cell(None),
            NodeKind::Symmetry => ItemKind::Gone,
            NodeKind::TensorElim => ItemKind::TensorElim,
            NodeKind::ParIntro => ItemKind::ParIntro,
        })
        .collect();
    let mut node_of: Vec<Option<usize>> = (0..n_nodes).map(Some).collect();

    // Splice thinning cells into their anchor links, in node order.
    for (i, n) in nodes.iter().enumerate() {
        if let Some(anchor) = n.kind.thin() {
            let l = link_of[anchor];
            let old_dst = links[l].dst;
            links[l].dst = End::Item(i);
            links.push(Link {
                name: links[l].name.clone(),
                src: End::Item(i),
                dst: old_dst,
            });
            // Later anchors on the same wire attach to the lower segment.
            let new_idx = links.len() - 1;
            for v in link_of.values_mut() {
                if *v == l {
                    *v = new_idx;
                }
            }
        }
    }

    // Wire cells on links with two non-seeding ends.
    let seeding = |e: End, items: &[ItemKind]| matches!(e, End::Item(k) if matches!(items[k], ItemKind::Cell(_)));
    let mut extra = Vec::new();
    for (l, link) in links.iter().enumerate() {
        if !seeding(link.src, &items) && !seeding(link.dst, &items) {
            extra.push(l);
        }
    }
    for l in extra {
        let k = items.len();
        items.push(ItemKind::Cell(Some("d3")));
        node_of.push(None);
        let old_dst = links[l].dst;
        links[l].dst = End::Item(k);
        links.push(Link {
            name: links[l].name.clone(),
            src: End::Item(k),
            dst: old_dst,
        });
    }

    Graph { items, node_of, links }
}

#[derive(Clone, Debug)]
struct Candidate {
    priority: u8,
    rule: &'static str,
    boxes: Vec<usize>,
    action: Action,
}

#[derive(Clone, Debug)]
enum Action {
    Open(usize),
    Absorb(usize, usize),
    Merge(usize, usize),
}

struct Run<'a> {
    g: &'a Graph,
    /// Box id of each item, if boxed or absorbed.
    owner: Vec<Option<usize>>,
    /// Whether a thinning cell has not yet been merged with anything.
    pristine: Vec<bool>,
    trace: Vec<TraceStep>,
}

impl<'a> Run<'a> {
    fn new(g: &'a Graph) -> Self {
        let mut owner = vec![None; g.items.len()];
        for (i, k) in g.items.iter().enumerate() {
            if *k == ItemKind::Cell(None) {
                owner[i] = Some(i);
            }
        }
        Run {
            g,
            owner,
            pristine: vec![false; g.items.len()],
            trace: Vec::new(),
        }
    }

    fn end_owner(&self, e: End) -> Option<usize> {
        match e {
            End::Boundary => None,
            End::Item(k) => self.owner[k],
        }
    }

    fn candidates(&self) -> Vec<Candidate> {
        let g = self.g;
        let mut out = Vec::new();
        for (i, kind) in g.items.iter().enumerate() {
            if self.owner[i].is_some() {
                continue;
            }
            match kind {
                ItemKind::Cell(Some(rule)) => out.push(Candidate {
                    priority: rule.as_bytes()[0] - b'a',
                    rule,
                    boxes: vec![i],
                    action: Action::Open(i),
                }),
                ItemKind::Cell(None) | ItemKind::Gone => {}
                ItemKind::TensorElim | ItemKind::ParIntro => {
                    let outgoing = *kind == ItemKind::TensorElim;
                    let ends: Vec<Option<usize>> = g
                        .links
                        .iter()
                        .filter_map(|l| {
                            if outgoing && l.src == End::Item(i) {
                                Some(self.end_owner(l.dst))
                            } else if !outgoing && l.dst == End::Item(i) {
                                Some(self.end_owner(l.src))
                            } else {
                                None
                            }
                        })
                        .collect();
                    if ends.len() == 2 && ends[0].is_some() && ends[0] == ends[1] {
                        let b = ends[0].unwrap();
                        out.push(Candidate {
                            priority: 1,
                            rule: if outgoing { "b1" } else { "b2" },
                            boxes: vec![b, i],
                            action: Action::Absorb(b, i),
                        });
                    }
                }
            }
        }
        let mut between: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for l in &g.links {
            if let (Some(x), Some(y)) = (self.end_owner(l.src), self.end_owner(l.dst)) {
                if x != y {
                    *between.entry((x.min(y), x.max(y))).or_insert(0) += 1;
                }
            }
        }
        for ((x, y), n) in between {
            if n != 1 {
                continue;
            }
            let thin_rule = |b: usize| -> Option<&'static str> {
                if !self.pristine[b] {
                    return None;
                }
                match g.items[b] {
                    ItemKind::Cell(Some("e1")) => Some("e3"),
                    ItemKind::Cell(Some("e2")) => Some("e4"),
                    _ => None,
                }
            };
            let (priority, rule) = match thin_rule(x).or_else(|| thin_rule(y)) {
                Some(r) => (4, r),
                None => (2, "c"),
            };
            out.push(Candidate {
                priority,
                rule,
                boxes: vec![x, y],
                action: Action::Merge(x, y),
            });
        }
        out
    }

    fn apply(&mut self, cand: &Candidate) {
        match cand.action {
            Action::Open(i) => {
                self.owner[i] = Some(i);
                self.pristine[i] = matches!(self.g.items[i], ItemKind::Cell(Some("e1" | "e2")));
            }
            Action::Absorb(b, i) => self.owner[i] = Some(b),
            Action::Merge(x, y) => {
                let (keep, gone) = (x.min(y), x.max(y));
                for o in self.owner.iter_mut() {
                    if *o == Some(gone) {
                        *o = Some(keep);
                    }
                }
                self.pristine[x] = false;
                self.pristine[y] = false;
            }
        }
        self.trace.push(TraceStep {
            rule: cand.rule.to_string(),
            boxes: cand.boxes.clone(),
        });
    }

    fn finish(self) -> ValidityReport {
        let g = self.g;
        let live: Vec<usize> = (0..g.items.len()).filter(|&i| g.items[i] != ItemKind::Gone).collect();
        let pending: Vec<usize> = live.iter().copied().filter(|&i| self.owner[i].is_none()).collect();
        let boxes: BTreeSet<usize> = live.iter().filter_map(|&i| self.owner[i]).collect();
        let valid = pending.is_empty() && boxes.len() <= 1;
        if valid {
            return ValidityReport {
                valid,
                trace: self.trace,
                stuck: None,
            };
        }
        let part = |e: End| -> Option<(bool, usize)> {
            match e {
                End::Boundary => None,
                End::Item(k) => Some(match self.owner[k] {
                    Some(b) => (true, b),
                    None => (false, k),
                }),
            }
        };
        let mut cut = BTreeSet::new();
        for l in &g.links {
            if let (Some(a), Some(b)) = (part(l.src), part(l.dst)) {
                if a != b {
                    cut.insert(l.name.clone());
                }
            }
        }
        let summaries = boxes
            .iter()
            .map(|&b| {
                let members: Vec<usize> = live.iter().copied().filter(|&i| self.owner[i] == Some(b)).collect();
                let inside = |e: End| matches!(e, End::Item(k) if self.owner[k] == Some(b));
                let mut inputs = Vec::new();
                let mut outputs = Vec::new();
                for l in &g.links {
                    if inside(l.dst) && !inside(l.src) {
                        inputs.push(l.name.clone());
                    }
                    if inside(l.src) && !inside(l.dst) {
                        outputs.push(l.name.clone());
                    }
                }
                BoxSummary {
                    id: b,
                    nodes: members.iter().filter_map(|&i| g.node_of[i]).collect(),
                    wires: members
                        .iter()
                        .filter(|&&i| g.node_of[i].is_none())
                        .map(|&i| wire_cell_name(g, i))
                        .collect(),
                    inputs,
                    outputs,
                }
            })
            .collect();
        ValidityReport {
            valid,
            trace: self.trace,
            stuck: Some(BoxState {
                boxes: summaries,
                pending: pending.iter().filter_map(|&i| g.node_of[i]).collect(),
                cut: cut.into_iter().collect(),
            }),
        }
    }
}

fn wire_cell_name(g: &Graph, item: usize) -> WireId {
    g.links
        .iter()
        .find(|l| l.src == End::Item(item))
        .map(|l| l.name.clone())
        .unwrap_or_default()
}

fn run(c: &Circuit, mut choose: impl FnMut(&[Candidate]) -> usize) -> Result<ValidityReport, CircuitError> {
    c.check()?;
    if c.nodes().is_empty() && c.wires().len() <= 1 {
        return Ok(ValidityReport {
            valid: true,
            trace: Vec::new(),
            stuck: None,
        });
    }
    let g = build_graph(c);
    let mut st = Run::new(&g);
    loop {
        let cands = st.candidates();
        if cands.is_empty() {
            break;
        }
        let pick = choose(&cands);
        st.apply(&cands[pick]);
    }
    Ok(st.finish())
}

/// Runs the boxing procedure with the deterministic rule order.
pub fn validate(c: &Circuit) -> Result<ValidityReport, CircuitError> {
    run(c, |cands| {
        (0..cands.len())
            .min_by(|&i, &j| (cands[i].priority, &cands[i].boxes).cmp(&(cands[j].priority, &cands[j].boxes)))
            .unwrap()
    })
}

/// Runs the procedure once per seed, each time picking the next applicable
/// rule uniformly at random, and reports whether every run agrees with
/// [`validate`].
pub fn validate_all_orders(c: &Circuit, seeds: &[u64]) -> bool {
    let Ok(reference) = validate(c) else {
        return false;
    };
    seeds.iter().all(|&seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match run(c, |cands| rng.gen_range(0..cands.len())) {
            Ok(r) => r.valid == reference.valid,
            Err(_) => false,
        }
    })
}

/// One JSON object per trace step, newline separated.
pub fn trace_json_lines(report: &ValidityReport) -> String {
    report
        .trace
        .iter()
        .map(|s| serde_json::to_string(s).expect("trace steps serialize") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compose, tensor_parallel, Wire};
    use crate::object::ObjectExpr;

    fn a() -> ObjectExpr {
        ObjectExpr::atom("A")
    }
    fn b() -> ObjectExpr {
        ObjectExpr::atom("B")
    }

    #[test]
    fn single_wire_is_valid_with_empty_trace() {
        let r = validate(&Circuit::id_wire(a())).unwrap();
        assert!(r.valid);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn two_parallel_wires_are_invalid() {
        let c = tensor_parallel(&Circuit::id_wire(a()), &Circuit::id_wire(b()));
        let r = validate(&c).unwrap();
        assert!(!r.valid);
        assert_eq!(r.stuck.unwrap().boxes.len(), 2);
    }

    #[test]
    fn single_tensor_intro_is_valid() {
        let r = validate(&Circuit::tensor_intro(a(), b())).unwrap();
        assert!(r.valid);
        assert_eq!(r.trace[0].rule, "a1");
    }

    #[test]
    fn elim_then_intro_is_valid() {
        let c = compose(&Circuit::tensor_elim(a(), b()), &Circuit::tensor_intro(a(), b())).unwrap();
        let r = validate(&c).unwrap();
        assert!(r.valid, "{r:?}");
        assert!(r.trace.iter().any(|s| s.rule == "b1"));
    }

    #[test]
    fn mix_map_is_invalid() {
        let c = compose(&Circuit::tensor_elim(a(), b()), &Circuit::par_intro(a(), b())).unwrap();
        assert!(!validate(&c).unwrap().valid);
    }

    #[test]
    fn unit_thinning_on_a_wire_is_valid() {
        let top = ObjectExpr::Top;
        let c = Circuit::new(
            vec![
                Wire {
                    id: "x".into(),
                    ty: a(),
                },
                Wire {
                    id: "t".into(),
                    ty: top,
                },
            ],
            vec![
                crate::circuit::Node {
                    kind: NodeKind::TopIntro,
                    inputs: vec![],
                    outputs: vec!["t".into()],
                },
                crate::circuit::Node {
                    kind: NodeKind::TopElim { thin: "x".into() },
                    inputs: vec!["t".into()],
                    outputs: vec![],
                },
            ],
            vec!["x".into()],
            vec!["x".into()],
        )
        .unwrap();
        let r = validate(&c).unwrap();
        assert!(r.valid, "{r:?}");
        let rules: Vec<&str> = r.trace.iter().map(|s| s.rule.as_str()).collect();
        assert!(rules.contains(&"e1"));
        assert!(rules.contains(&"e3"));
    }

    #[test]
    fn symmetry_of_a_tensor_is_valid() {
        let c = compose(
            &compose(&Circuit::tensor_elim(a(), b()), &Circuit::symmetry(a(), b())).unwrap(),
            &Circuit::tensor_intro(b(), a()),
        )
        .unwrap();
        assert!(validate(&c).unwrap().valid);
        assert!(validate_all_orders(&c, &[1, 2, 3]));
    }

    #[test]
    fn trace_lines_are_json() {
        let r = validate(&Circuit::tensor_intro(a(), b())).unwrap();
        assert_eq!(trace_json_lines(&r), "{\"rule\":\"a1\",\"boxes\":[0]}\n");
    }
}
