//! Text-to-PDDL corpora: records, manifests and generation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use pddleq_core::equivalence::{equivalent, EquivalenceMode};
use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::gen::{self, generate_problem, render_text, GenError, Role, Task, TaskConfig, Usage};
use pddleq_core::pddl::{parse_problem, serialize_problem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Abstractness {
    Abstract,
    Explicit,
}

impl From<Abstractness> for gen::Abstraction {
    fn from(a: Abstractness) -> Self {
        match a {
            Abstractness::Abstract => gen::Abstraction::Abstract,
            Abstractness::Explicit => gen::Abstraction::Explicit,
        }
    }
}

impl Abstractness {
    pub fn as_str(self) -> &'static str {
        gen::Abstraction::from(self).as_str()
    }
}

/// One of the four pairings of initial-state and goal abstractness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Category {
    pub init: Abstractness,
    pub goal: Abstractness,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::new(Abstractness::Abstract, Abstractness::Abstract),
        Category::new(Abstractness::Abstract, Abstractness::Explicit),
        Category::new(Abstractness::Explicit, Abstractness::Abstract),
        Category::new(Abstractness::Explicit, Abstractness::Explicit),
    ];

    pub const fn new(init: Abstractness, goal: Abstractness) -> Category {
        Category { init, goal }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_to_{}", self.init.as_str(), self.goal.as_str())
    }
}

impl FromStr for Category {
    type Err = String;
    fn from_str(s: &str) -> Result<Category, String> {
        Category::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown abstractness category `{s}`"))
    }
}

impl Serialize for Category {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Category {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Category, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One corpus line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecord {
    pub id: String,
    pub domain_id: String,
    pub init_abstraction: Abstractness,
    pub goal_abstraction: Abstractness,
    pub is_placeholder: bool,
    pub natural_language: String,
    pub ground_truth_pddl: String,
    pub num_propositions: usize,
}

impl DatasetRecord {
    pub fn category(&self) -> Category {
        Category::new(self.init_abstraction, self.goal_abstraction)
    }
}

pub const SIZE_BINS: [&str; 5] = ["1-20", "21-40", "41-60", "61-80", ">80"];

/// Size bin of a problem with `n` init and goal propositions in total.
pub fn size_bin(n: usize) -> &'static str {
    match n {
        0..=20 => SIZE_BINS[0],
        21..=40 => SIZE_BINS[1],
        41..=60 => SIZE_BINS[2],
        61..=80 => SIZE_BINS[3],
        _ => SIZE_BINS[4],
    }
}

/// A size parameter: fixed, or drawn uniformly from an inclusive range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SizeSpec {
    Fixed(u32),
    Range([u32; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub domain: String,
    pub init: String,
    pub goal: String,
    /// Problems to attempt; failed and duplicate draws are skipped.
    pub count: usize,
    #[serde(default = "default_split")]
    pub split: String,
    #[serde(default)]
    pub sizes: BTreeMap<String, SizeSpec>,
    /// Renderings per problem; all four when absent.
    #[serde(default)]
    pub categories: Option<Vec<Category>>,
}

fn default_split() -> String {
    "test".into()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, rename = "entry")]
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn from_toml(text: &str) -> Result<Manifest, Error> {
        toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Manifest, Error> {
        Manifest::from_toml(&std::fs::read_to_string(path).map_err(Error::io(path))?)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub records: usize,
    pub problems: usize,
    /// Draws whose size parameters admitted no solvable instance.
    pub failed: usize,
    /// Draws that repeated an earlier problem of the same entry.
    pub duplicates: usize,
    pub by_category: BTreeMap<String, usize>,
    pub by_size_bin: BTreeMap<String, usize>,
    pub by_domain: BTreeMap<String, usize>,
    pub by_split: BTreeMap<String, usize>,
}

struct EntryPlan {
    domain: DomainId,
    init: Task,
    goal: Task,
}

fn resolve(entry: &ManifestEntry) -> Result<EntryPlan, Error> {
    let domain: DomainId = entry
        .domain
        .parse()
        .map_err(|_| Error::Manifest(format!("unknown domain `{}`", entry.domain)))?;
    let task = |name: &str| {
        Task::lookup(domain, name).ok_or_else(|| Error::Manifest(format!("`{name}` is not a {domain} task")))
    };
    let (init, goal) = (task(&entry.init)?, task(&entry.goal)?);
    if !Task::compatible(init, goal) {
        return Err(Error::Manifest(format!("`{init}` cannot be paired with `{goal}` in {domain}")));
    }
    for (key, spec) in &entry.sizes {
        if let SizeSpec::Range([lo, hi]) = spec {
            if lo > hi {
                return Err(Error::Manifest(format!("empty range for `{key}`")));
            }
        }
    }
    Ok(EntryPlan { domain, init, goal })
}

struct EntryOutput {
    records: Vec<DatasetRecord>,
    problems: usize,
    failed: usize,
    duplicates: usize,
}

fn run_entry(index: usize, entry: &ManifestEntry, plan: &EntryPlan, seed: u64) -> Result<EntryOutput, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let domain = fixtures::domain(plan.domain);
    let (init_role, goal_role) = if plan.init.usage() == Usage::Tied {
        (Role::Tied, Role::Tied)
    } else {
        (Role::Init, Role::Goal)
    };
    let categories = entry.categories.clone().unwrap_or_else(|| Category::ALL.to_vec());
    let mut out = EntryOutput {
        records: Vec::new(),
        problems: 0,
        failed: 0,
        duplicates: 0,
    };
    let mut seen = BTreeSet::new();
    for k in 0..entry.count {
        let mut init_cfg = TaskConfig::new(plan.init, init_role);
        let mut goal_cfg = TaskConfig::new(plan.goal, goal_role);
        for (key, spec) in &entry.sizes {
            let v = match *spec {
                SizeSpec::Fixed(v) => v,
                SizeSpec::Range([lo, hi]) => rng.gen_range(lo..=hi),
            };
            init_cfg = init_cfg.with(key, v);
            goal_cfg = goal_cfg.with(key, v);
        }
        let problem_seed: u64 = rng.gen();
        let problem = match generate_problem(&init_cfg, &goal_cfg, problem_seed) {
            Ok(p) => p,
            Err(GenError::GenerationFailed(_) | GenError::IncompatibleConfigs(_)) => {
                out.failed += 1;
                continue;
            }
        };
        let text = serialize_problem(&problem);
        if !seen.insert(text.clone()) {
            out.duplicates += 1;
            continue;
        }
        let reparsed = parse_problem(&text, &domain, false)
            .map_err(|e| Error::Invariant(format!("{} does not parse back: {e}", problem.name)))?;
        for category in &categories {
            let mode = EquivalenceMode {
                is_placeholder: category.goal == Abstractness::Abstract,
            };
            let self_equal = equivalent(&reparsed, &problem, mode).map(|v| v.equal).unwrap_or(false);
            if !self_equal {
                return Err(Error::Invariant(format!("{} is not self-equivalent", problem.name)));
            }
            out.records.push(DatasetRecord {
                id: format!("{}-{}-{index:03}-{k:04}-{category}", entry.split, plan.domain),
                domain_id: plan.domain.name().to_string(),
                init_abstraction: category.init,
                goal_abstraction: category.goal,
                is_placeholder: mode.is_placeholder,
                natural_language: render_text(&problem, &init_cfg, &goal_cfg, category.init.into(), category.goal.into()),
                ground_truth_pddl: text.clone(),
                num_propositions: problem.num_propositions(),
            });
        }
        out.problems += 1;
    }
    Ok(out)
}

/// Generates every manifest entry (in parallel) and returns the records in
/// manifest order with their statistics. `seed` overrides the manifest's.
pub fn generate_corpus(manifest: &Manifest, seed: Option<u64>) -> Result<(Vec<DatasetRecord>, CorpusStats), Error> {
    let seed = seed.or(manifest.seed).unwrap_or(0);
    let plans = manifest.entries.iter().map(resolve).collect::<Result<Vec<_>, _>>()?;
    let outputs: Vec<EntryOutput> = manifest
        .entries
        .par_iter()
        .zip(plans.par_iter())
        .enumerate()
        .map(|(i, (entry, plan))| run_entry(i, entry, plan, seed))
        .collect::<Result<_, _>>()?;

    let mut stats = CorpusStats::default();
    let mut records = Vec::new();
    for (entry, out) in manifest.entries.iter().zip(outputs) {
        stats.problems += out.problems;
        stats.failed += out.failed;
        stats.duplicates += out.duplicates;
        for r in &out.records {
            *stats.by_category.entry(r.category().to_string()).or_default() += 1;
            *stats.by_size_bin.entry(size_bin(r.num_propositions).to_string()).or_default() += 1;
            *stats.by_domain.entry(r.domain_id.clone()).or_default() += 1;
            *stats.by_split.entry(entry.split.clone()).or_default() += 1;
        }
        records.extend(out.records);
    }
    stats.records = records.len();
    Ok((records, stats))
}

/// Writes one JSON object per line.
pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<(), Error> {
    let file = std::fs::File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e.into(),
        })?;
        w.write_all(b"\n").map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Reads one JSON object per non-blank line, reporting the line number of
/// the first malformed one.
pub fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, Error> {
    let file = std::fs::File::open(path).map_err(Error::io(path))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(Error::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins() {
        assert_eq!(size_bin(14), "1-20");
        assert_eq!(size_bin(20), "1-20");
        assert_eq!(size_bin(21), "21-40");
        assert_eq!(size_bin(80), "61-80");
        assert_eq!(size_bin(81), ">80");
    }

    #[test]
    fn categories_round_trip() {
        for c in Category::ALL {
            assert_eq!(c.to_string().parse::<Category>().unwrap(), c);
        }
        assert_eq!(Category::ALL[1].to_string(), "abstract_to_explicit");
    }

    #[test]
    fn empty_manifest_gives_empty_corpus() {
        let (records, stats) = generate_corpus(&Manifest::from_toml("").unwrap(), None).unwrap();
        assert!(records.is_empty());
        assert_eq!(stats, CorpusStats::default());
    }

    #[test]
    fn manifest_errors() {
        let bad = |t: &str| generate_corpus(&Manifest::from_toml(t).unwrap(), None).unwrap_err();
        assert!(matches!(
            bad("[[entry]]\ndomain='blocksworld'\ninit='stacked'\ngoal='juggle'\ncount=1"),
            Error::Manifest(_)
        ));
        assert!(matches!(
            bad("[[entry]]\ndomain='gripper'\ninit='pickup'\ngoal='pickup'\ncount=1"),
            Error::Manifest(_)
        ));
        assert!(Manifest::from_toml("[[entry]]\ndomain='gripper'").is_err());
    }

    #[test]
    fn records_follow_the_format() {
        let manifest = Manifest::from_toml(
            "seed = 3\n[[entry]]\ndomain = 'blocksworld'\ninit = 'equal_towers'\ngoal = 'equal_towers'\ncount = 1\n\
             [entry.sizes]\nblocks = 5\ntowers = 1\n",
        )
        .unwrap();
        let (records, stats) = generate_corpus(&manifest, None).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(stats.problems, 1);
        for r in &records {
            assert_eq!(r.num_propositions, 14);
            assert_eq!(r.is_placeholder, r.goal_abstraction == Abstractness::Abstract);
        }
        let line = serde_json::to_string(&records[0]).unwrap();
        let keys = [
            "id",
            "domain_id",
            "init_abstraction",
            "goal_abstraction",
            "is_placeholder",
            "natural_language",
            "ground_truth_pddl",
            "num_propositions",
        ];
        let mut last = 0;
        for k in keys {
            let at = line.find(&format!("\"{k}\":")).unwrap();
            assert!(at >= last, "{k} out of order");
            last = at;
        }
    }
}
