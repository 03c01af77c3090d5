//! Scene graphs and problem graphs.
//!
//! A scene graph holds one node per object and one node per proposition.
//! Each proposition node points at its argument objects through edges
//! labelled with the predicate, the argument position and the scene
//! (`init` or `goal`). A problem graph is the union of an init scene and a
//! goal scene over the same object nodes.

mod iso;

pub use iso::is_isomorphic;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::pddl::{ProblemModel, Proposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scene {
    Init,
    Goal,
}

impl fmt::Display for Scene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scene::Init => "init",
            Scene::Goal => "goal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SceneNode {
    Object { name: String },
    /// The scene is kept on the node as well as on its edges so that
    /// zero-arity propositions, which have no edges, still carry it.
    Proposition { predicate: String, scene: Scene },
}

impl SceneNode {
    pub fn is_object(&self) -> bool {
        matches!(self, SceneNode::Object { .. })
    }

    pub fn predicate(&self) -> Option<&str> {
        match self {
            SceneNode::Object { .. } => None,
            SceneNode::Proposition { predicate, .. } => Some(predicate),
        }
    }
}

/// Edge from a proposition node to the object in argument slot `position`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SceneEdge {
    pub from: usize,
    pub to: usize,
    pub predicate: String,
    pub position: usize,
    pub scene: Scene,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("scene graphs are built over different object sets")]
    ObjectSetMismatch,
}

/// Node/edge storage shared by both graph kinds. Object nodes always come
/// first, so ids `0..num_objects` are objects.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Store {
    nodes: Vec<SceneNode>,
    edges: Vec<SceneEdge>,
    num_objects: usize,
}

impl Store {
    fn with_objects<'a>(objects: impl IntoIterator<Item = &'a String>) -> Store {
        let nodes: Vec<SceneNode> = objects
            .into_iter()
            .map(|o| SceneNode::Object { name: o.clone() })
            .collect();
        Store {
            num_objects: nodes.len(),
            nodes,
            edges: Vec::new(),
        }
    }

    fn object_index(&self) -> BTreeMap<String, usize> {
        self.object_names()
            .enumerate()
            .map(|(i, n)| (String::from(n), i))
            .collect()
    }

    fn push_proposition(&mut self, p: &Proposition, scene: Scene, index: &BTreeMap<String, usize>) {
        let id = self.nodes.len();
        self.nodes.push(SceneNode::Proposition {
            predicate: p.predicate.clone(),
            scene,
        });
        for (position, arg) in p.arguments.iter().enumerate() {
            let to = *index
                .get(arg.as_str())
                .unwrap_or_else(|| panic!("proposition {p} names undeclared object `{arg}`"));
            self.edges.push(SceneEdge {
                from: id,
                to,
                predicate: p.predicate.clone(),
                position,
                scene,
            });
        }
    }

    fn object_names(&self) -> impl Iterator<Item = &str> {
        self.nodes[..self.num_objects].iter().map(|n| match n {
            SceneNode::Object { name } => name.as_str(),
            SceneNode::Proposition { .. } => unreachable!("object nodes come first"),
        })
    }

    /// Rebuilds `(scene, proposition)` pairs from nodes and edges.
    fn facts(&self) -> Vec<(Scene, Proposition)> {
        let mut args: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for e in &self.edges {
            args.entry(e.from).or_default().push((e.position, e.to));
        }
        let names: Vec<&str> = self.object_names().collect();
        self.nodes
            .iter()
            .enumerate()
            .skip(self.num_objects)
            .map(|(id, node)| {
                let SceneNode::Proposition { predicate, scene } = node else {
                    unreachable!("only proposition nodes follow the objects")
                };
                let mut slots = args.remove(&id).unwrap_or_default();
                slots.sort_unstable();
                let arguments = slots.into_iter().map(|(_, o)| names[o]);
                (*scene, Proposition::new(predicate.clone(), arguments))
            })
            .collect()
    }

    fn dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{name}\" {{");
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                SceneNode::Object { name } => {
                    let _ = writeln!(out, "  n{i} [shape=box, kind=object, label=\"{name}\"];");
                }
                SceneNode::Proposition { predicate, scene } => {
                    let _ = writeln!(
                        out,
                        "  n{i} [shape=ellipse, kind=proposition, scene={scene}, label=\"{predicate}\"];"
                    );
                }
            }
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  n{} -> n{} [label=\"{}#{}\", scene={}];",
                e.from, e.to, e.predicate, e.position, e.scene
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Graph of a single state description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SceneGraph {
    scene: Scene,
    store: Store,
}

impl SceneGraph {
    /// Builds a scene over `objects`. Every proposition argument must be
    /// one of `objects`.
    pub fn new<'a>(
        scene: Scene,
        objects: impl IntoIterator<Item = &'a String>,
        propositions: impl IntoIterator<Item = &'a Proposition>,
    ) -> SceneGraph {
        let mut store = Store::with_objects(objects);
        let index = store.object_index();
        for p in propositions {
            store.push_proposition(p, scene, &index);
        }
        SceneGraph { scene, store }
    }

    pub fn scene(&self) -> Scene {
        self.scene
    }

    pub fn nodes(&self) -> &[SceneNode] {
        &self.store.nodes
    }

    pub fn edges(&self) -> &[SceneEdge] {
        &self.store.edges
    }

    pub fn num_objects(&self) -> usize {
        self.store.num_objects
    }

    pub fn num_propositions(&self) -> usize {
        self.store.nodes.len() - self.store.num_objects
    }

    pub fn object_names(&self) -> impl Iterator<Item = &str> {
        self.store.object_names()
    }

    pub fn propositions(&self) -> BTreeSet<Proposition> {
        self.store.facts().into_iter().map(|(_, p)| p).collect()
    }

    /// Graphviz rendering, for inspection only.
    pub fn to_dot(&self) -> String {
        self.store.dot(match self.scene {
            Scene::Init => "init",
            Scene::Goal => "goal",
        })
    }
}

/// Union of an init scene and a goal scene sharing object nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemGraph {
    store: Store,
}

impl ProblemGraph {
    pub fn nodes(&self) -> &[SceneNode] {
        &self.store.nodes
    }

    pub fn edges(&self) -> &[SceneEdge] {
        &self.store.edges
    }

    pub fn num_objects(&self) -> usize {
        self.store.num_objects
    }

    pub fn num_propositions(&self) -> usize {
        self.store.nodes.len() - self.store.num_objects
    }

    pub fn propositions(&self, scene: Scene) -> BTreeSet<Proposition> {
        self.store
            .facts()
            .into_iter()
            .filter(|(s, _)| *s == scene)
            .map(|(_, p)| p)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        self.store.dot("problem")
    }
}

/// Scene graphs for a problem's initial state and goal, in that order.
pub fn to_scene_graphs(problem: &ProblemModel) -> (SceneGraph, SceneGraph) {
    (
        SceneGraph::new(Scene::Init, &problem.objects, &problem.init),
        SceneGraph::new(Scene::Goal, &problem.objects, &problem.goal),
    )
}

/// Merges two scenes over the same objects into one problem graph.
pub fn join(init: &SceneGraph, goal: &SceneGraph) -> Result<ProblemGraph, GraphError> {
    let a: BTreeSet<&str> = init.object_names().collect();
    let b: BTreeSet<&str> = goal.object_names().collect();
    if a != b || a.len() != init.num_objects() || b.len() != goal.num_objects() {
        return Err(GraphError::ObjectSetMismatch);
    }
    let mut store = init.store.clone();
    let index = store.object_index();
    for (scene, p) in goal.store.facts() {
        store.push_proposition(&p, scene, &index);
    }
    Ok(ProblemGraph { store })
}

/// Read-only view used by the isomorphism test so that scene graphs and
/// problem graphs share one implementation.
pub trait AttributedGraph {
    fn object_names(&self) -> Vec<&str>;
    /// Propositions tagged with their scene; arguments are object indices.
    fn labelled_facts(&self) -> Vec<(Scene, &str, Vec<usize>)>;
}

fn store_facts(store: &Store) -> Vec<(Scene, &str, Vec<usize>)> {
    let mut args: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); store.nodes.len()];
    for e in &store.edges {
        args[e.from].push((e.position, e.to));
    }
    store
        .nodes
        .iter()
        .enumerate()
        .skip(store.num_objects)
        .map(|(id, node)| {
            let SceneNode::Proposition { predicate, scene } = node else {
                unreachable!("only proposition nodes follow the objects")
            };
            let slots = &mut args[id];
            slots.sort_unstable();
            (*scene, predicate.as_str(), slots.iter().map(|&(_, o)| o).collect())
        })
        .collect()
}

impl AttributedGraph for SceneGraph {
    fn object_names(&self) -> Vec<&str> {
        self.store.object_names().collect()
    }

    fn labelled_facts(&self) -> Vec<(Scene, &str, Vec<usize>)> {
        store_facts(&self.store)
    }
}

impl AttributedGraph for ProblemGraph {
    fn object_names(&self) -> Vec<&str> {
        self.store.object_names().collect()
    }

    fn labelled_facts(&self) -> Vec<(Scene, &str, Vec<usize>)> {
        store_facts(&self.store)
    }
}
