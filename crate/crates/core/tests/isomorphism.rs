//! Graph isomorphism against brute force over object bijections.

use std::collections::{BTreeMap, BTreeSet};

use pddleq_core::graph::{is_isomorphic, join, Scene, SceneGraph};
use pddleq_core::Proposition;
use proptest::prelude::*;

const PREDICATES: [(&str, usize); 4] = [("p", 1), ("q", 1), ("r", 2), ("s", 2)];

fn objects(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("o{i}")).collect()
}

fn arb_props(n: usize) -> impl Strategy<Value = BTreeSet<Proposition>> {
    let atom = (0..PREDICATES.len(), 0..n, 0..n).prop_map(move |(k, x, y)| {
        let (name, arity) = PREDICATES[k];
        let args = [format!("o{x}"), format!("o{y}")];
        Proposition::new(name, args.into_iter().take(arity))
    });
    proptest::collection::btree_set(atom, 0..10)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn rename(props: &BTreeSet<Proposition>, perm: &[usize]) -> BTreeSet<Proposition> {
    let map: BTreeMap<String, String> = perm.iter().enumerate().map(|(i, &j)| (format!("o{i}"), format!("o{j}"))).collect();
    props.iter().map(|p| p.renamed(&map)).collect()
}

fn brute(a: &[&BTreeSet<Proposition>], b: &[&BTreeSet<Proposition>], n: usize) -> bool {
    permutations(n).iter().any(|perm| a.iter().zip(b).all(|(x, y)| rename(x, perm) == **y))
}

fn scene(n: usize, props: &BTreeSet<Proposition>, s: Scene) -> SceneGraph {
    SceneGraph::new(s, &objects(n), props)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn scene_isomorphism_matches_brute_force(n in 1usize..=6, seed in any::<u64>(), a in arb_props(6), b in arb_props(6)) {
        let keep = |s: &BTreeSet<Proposition>| -> BTreeSet<Proposition> {
            s.iter().filter(|p| p.arguments.iter().all(|x| x[1..].parse::<usize>().unwrap() < n)).cloned().collect()
        };
        let (a, b) = (keep(&a), keep(&b));
        // Half the time compare against a renamed copy so positives are common.
        let b = if seed % 2 == 0 {
            let perms = permutations(n);
            rename(&a, &perms[(seed / 2) as usize % perms.len()])
        } else {
            b
        };
        let expected = brute(&[&a], &[&b], n);
        prop_assert_eq!(is_isomorphic(&scene(n, &a, Scene::Init), &scene(n, &b, Scene::Init)), expected);
    }

    #[test]
    fn problem_graph_isomorphism_matches_brute_force(
        seed in any::<u64>(),
        ia in arb_props(4), ga in arb_props(4), ib in arb_props(4), gb in arb_props(4),
    ) {
        let n = 4;
        let (ib, gb) = if seed % 2 == 0 {
            let perms = permutations(n);
            let perm = &perms[(seed / 2) as usize % perms.len()];
            (rename(&ia, perm), rename(&ga, perm))
        } else if seed % 4 == 1 {
            // Same init, goal renamed on its own: scenes match, the join may not.
            let perms = permutations(n);
            (ia.clone(), rename(&ga, &perms[(seed / 4) as usize % perms.len()]))
        } else {
            (ib, gb)
        };
        let expected = brute(&[&ia, &ga], &[&ib, &gb], n);
        let pa = join(&scene(n, &ia, Scene::Init), &scene(n, &ga, Scene::Goal)).unwrap();
        let pb = join(&scene(n, &ib, Scene::Init), &scene(n, &gb, Scene::Goal)).unwrap();
        prop_assert_eq!(is_isomorphic(&pa, &pb), expected);
    }
}

#[test]
fn regular_graphs_are_told_apart() {
    // Two 3-regular graphs on 6 vertices: the prism and K3,3. Colour
    // refinement alone cannot separate them.
    let edges = |pairs: &[(usize, usize)]| -> BTreeSet<Proposition> {
        pairs
            .iter()
            .flat_map(|&(x, y)| {
                [
                    Proposition::new("r", [format!("o{x}"), format!("o{y}")]),
                    Proposition::new("r", [format!("o{y}"), format!("o{x}")]),
                ]
            })
            .collect()
    };
    let prism = edges(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]);
    let k33 = edges(&[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]);
    assert!(!is_isomorphic(&scene(6, &prism, Scene::Init), &scene(6, &k33, Scene::Init)));
    assert!(!brute(&[&prism], &[&k33], 6));
    let shuffled = rename(&k33, &[5, 3, 1, 0, 2, 4]);
    assert!(is_isomorphic(&scene(6, &shuffled, Scene::Init), &scene(6, &k33, Scene::Init)));
}
