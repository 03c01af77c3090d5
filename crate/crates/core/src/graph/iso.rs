//! Isomorphism of attributed scene/problem graphs.
//!
//! Only object nodes are searched over; a proposition node is pinned down
//! by its predicate, scene and argument objects, so an object bijection
//! determines the proposition bijection. Objects are first partitioned by
//! colour refinement over both graphs at once, then matched by
//! backtracking in a connectivity-driven order with deterministic candidate
//! order (colour, then name).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{AttributedGraph, Scene};

type Label = u32;
type Color = u32;

struct Compact<'a> {
    names: Vec<&'a str>,
    /// Deduplicated, sorted facts.
    facts: Vec<(Label, Vec<usize>)>,
    /// Per object: indices of facts it takes part in (once per fact).
    incident: Vec<Vec<usize>>,
}

impl<'a> Compact<'a> {
    fn build<G: AttributedGraph + ?Sized>(
        g: &'a G,
        labels: &mut BTreeMap<(Scene, &'a str), Label>,
    ) -> Compact<'a> {
        let names = g.object_names();
        let mut facts: Vec<(Label, Vec<usize>)> = g
            .labelled_facts()
            .into_iter()
            .map(|(scene, pred, args)| {
                let next = labels.len() as Label;
                (*labels.entry((scene, pred)).or_insert(next), args)
            })
            .collect();
        facts.sort_unstable();
        facts.dedup();
        let mut incident = alloc::vec![Vec::new(); names.len()];
        for (i, (_, args)) in facts.iter().enumerate() {
            for &o in args {
                if incident[o].last() != Some(&i) {
                    incident[o].push(i);
                }
            }
        }
        Compact {
            names,
            facts,
            incident,
        }
    }
}

/// True iff an object bijection maps the propositions of `a` exactly onto
/// those of `b` (same predicate, scene and argument positions).
pub fn is_isomorphic<G: AttributedGraph + ?Sized>(a: &G, b: &G) -> bool {
    let mut labels = BTreeMap::new();
    let ca = Compact::build(a, &mut labels);
    let cb = Compact::build(b, &mut labels);
    if ca.names.len() != cb.names.len() || ca.facts.len() != cb.facts.len() {
        return false;
    }
    let mut la: Vec<Label> = ca.facts.iter().map(|f| f.0).collect();
    let mut lb: Vec<Label> = cb.facts.iter().map(|f| f.0).collect();
    la.sort_unstable();
    lb.sort_unstable();
    if la != lb {
        return false;
    }
    let Some((col_a, col_b)) = refine(&ca, &cb) else {
        return false;
    };
    Matcher::new(&ca, &cb, col_a, col_b).run()
}

type Signature = (Color, Vec<(Label, Vec<(usize, Color)>)>);

fn signature(g: &Compact<'_>, colors: &[Color], o: usize) -> Signature {
    let mut around: Vec<(Label, Vec<(usize, Color)>)> = g.incident[o]
        .iter()
        .map(|&f| {
            let (label, args) = &g.facts[f];
            // Positions of `o` are marked with u32::MAX so that the
            // signature records where in the fact the object sits.
            let slots = args
                .iter()
                .enumerate()
                .map(|(pos, &x)| (pos, if x == o { Color::MAX } else { colors[x] }))
                .collect();
            (*label, slots)
        })
        .collect();
    around.sort_unstable();
    (colors[o], around)
}

/// Colour refinement run on both graphs with one shared palette. Returns
/// `None` as soon as the colour histograms differ.
fn refine(a: &Compact<'_>, b: &Compact<'_>) -> Option<(Vec<Color>, Vec<Color>)> {
    let mut ca: Vec<Color> = alloc::vec![0; a.names.len()];
    let mut cb: Vec<Color> = alloc::vec![0; b.names.len()];
    let mut classes = 1;
    loop {
        let mut palette: BTreeMap<Signature, Color> = BTreeMap::new();
        let sa: Vec<Signature> = (0..a.names.len()).map(|o| signature(a, &ca, o)).collect();
        let sb: Vec<Signature> = (0..b.names.len()).map(|o| signature(b, &cb, o)).collect();
        for s in sa.iter().chain(&sb) {
            let next = palette.len() as Color;
            palette.entry(s.clone()).or_insert(next);
        }
        // Renumber in signature order so colours do not depend on node order.
        for (i, c) in palette.values_mut().enumerate() {
            *c = i as Color;
        }
        let na: Vec<Color> = sa.iter().map(|s| palette[s]).collect();
        let nb: Vec<Color> = sb.iter().map(|s| palette[s]).collect();
        let mut ha = na.clone();
        let mut hb = nb.clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        ca = na;
        cb = nb;
        if palette.len() == classes {
            return Some((ca, cb));
        }
        classes = palette.len();
    }
}

struct Matcher<'g, 'a> {
    a: &'g Compact<'a>,
    b: &'g Compact<'a>,
    col_a: Vec<Color>,
    col_b: Vec<Color>,
    order: Vec<usize>,
    /// Facts of `a` that become fully mapped when `order[k]` is placed.
    closing: Vec<Vec<usize>>,
    b_facts: BTreeSet<(Label, Vec<usize>)>,
    /// B objects per colour, sorted by name.
    candidates: BTreeMap<Color, Vec<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNMAPPED: usize = usize::MAX;

impl<'g, 'a> Matcher<'g, 'a> {
    fn new(a: &'g Compact<'a>, b: &'g Compact<'a>, col_a: Vec<Color>, col_b: Vec<Color>) -> Self {
        let n = a.names.len();
        let mut class_size: BTreeMap<Color, usize> = BTreeMap::new();
        for &c in &col_a {
            *class_size.entry(c).or_default() += 1;
        }

        let mut placed = alloc::vec![false; n];
        let mut links = alloc::vec![0usize; n];
        let mut order = Vec::with_capacity(n);
        for _ in 0..n {
            let next = (0..n)
                .filter(|&o| !placed[o])
                .min_by_key(|&o| (core::cmp::Reverse(links[o]), class_size[&col_a[o]], col_a[o], a.names[o]))
                .expect("an unplaced object remains");
            placed[next] = true;
            order.push(next);
            for &f in &a.incident[next] {
                for &x in &a.facts[f].1 {
                    if !placed[x] {
                        links[x] += 1;
                    }
                }
            }
        }

        let mut step = alloc::vec![0usize; n];
        for (k, &o) in order.iter().enumerate() {
            step[o] = k;
        }
        let mut closing = alloc::vec![Vec::new(); n];
        for (i, (_, args)) in a.facts.iter().enumerate() {
            if let Some(last) = args.iter().map(|&x| step[x]).max() {
                closing[last].push(i);
            }
        }

        let mut candidates: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
        for (o, &c) in col_b.iter().enumerate() {
            candidates.entry(c).or_default().push(o);
        }
        for list in candidates.values_mut() {
            list.sort_by_key(|&o| b.names[o]);
        }

        Matcher {
            a,
            b,
            col_a,
            col_b,
            order,
            closing,
            b_facts: b.facts.iter().cloned().collect(),
            candidates,
            map: alloc::vec![UNMAPPED; n],
            used: alloc::vec![false; n],
        }
    }

    fn run(mut self) -> bool {
        self.extend(0)
    }

    fn extend(&mut self, k: usize) -> bool {
        if k == self.order.len() {
            return true;
        }
        let x = self.order[k];
        let options = self.candidates.get(&self.col_a[x]).cloned().unwrap_or_default();
        for y in options {
            if self.used[y] {
                continue;
            }
            debug_assert_eq!(self.col_a[x], self.col_b[y]);
            self.map[x] = y;
            self.used[y] = true;
            if self.consistent(k, y) && self.extend(k + 1) {
                return true;
            }
            self.used[y] = false;
            self.map[x] = UNMAPPED;
        }
        false
    }

    /// Every `a` fact closed at step `k` must map into `b`, and `b` must not
    /// have extra facts closed by `y`.
    fn consistent(&self, k: usize, y: usize) -> bool {
        for &f in &self.closing[k] {
            let (label, args) = &self.a.facts[f];
            let image: Vec<usize> = args.iter().map(|&x| self.map[x]).collect();
            if !self.b_facts.contains(&(*label, image)) {
                return false;
            }
        }
        let closed_in_b = self.b.incident[y]
            .iter()
            .filter(|&&f| self.b.facts[f].1.iter().all(|&z| self.used[z]))
            .count();
        closed_in_b == self.closing[k].len()
    }
}
