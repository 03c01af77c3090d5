//! Domain lookup by PDDL name: the bundled domains, optionally replaced or
//! extended by the `.pddl` files of a directory.

use std::collections::BTreeMap;
use std::path::Path;

use pddleq_core::fixtures::{self, DomainId};
use pddleq_core::pddl::parse_domain;
use pddleq_core::DomainModel;

use crate::Error;

#[derive(Debug, Clone)]
pub struct DomainSet {
    domains: BTreeMap<String, DomainModel>,
}

impl Default for DomainSet {
    fn default() -> Self {
        DomainSet {
            domains: DomainId::ALL.iter().map(|&d| (d.name().to_string(), fixtures::domain(d))).collect(),
        }
    }
}

impl DomainSet {
    /// Bundled domains plus every `*.pddl` file in `dir`; a file whose
    /// domain name matches a bundled one replaces it.
    pub fn with_dir(dir: &Path) -> Result<DomainSet, Error> {
        let mut set = DomainSet::default();
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(Error::io(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == "pddl"))
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(Error::io(&path))?;
            let domain = parse_domain(&text).map_err(|e| Error::Malformed {
                path: path.clone(),
                line: 0,
                message: e.to_string(),
            })?;
            set.domains.insert(domain.name.clone(), domain);
        }
        Ok(set)
    }

    pub fn get(&self, name: &str) -> Result<&DomainModel, Error> {
        self.domains.get(name).ok_or_else(|| Error::UnknownDomain(name.to_string()))
    }
}

/// The name after `(:domain` in a problem text, without parsing the rest.
pub fn declared_domain(problem_text: &str) -> Option<String> {
    let lower = problem_text.to_ascii_lowercase();
    let start = lower.find("(:domain")? + "(:domain".len();
    let name: String = lower[start..]
        .trim_start()
        .chars()
        .take_while(|c| !c.is_whitespace() && *c != ')' && *c != '(')
        .collect();
    (!name.is_empty()).then_some(name)
}
