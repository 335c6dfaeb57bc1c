//! A loaded amalgam with a cache of built subgroup graphs.

use std::collections::HashMap;
use std::path::Path;

use crate::amalgam::Amalgam;
use crate::error::{Error, Result};
use crate::pipeline::{build_subgroup_graph, verify_precover, BuildOptions, SubgroupGraph};
use crate::presentation::parse_amalgam;
use crate::todd_coxeter::DEFAULT_COSET_CAP;
use crate::word::Word;

#[derive(Debug, Clone)]
pub struct Session {
    pub amalgam: Amalgam,
    cache: HashMap<Vec<Word>, SubgroupGraph>,
}

impl Session {
    pub fn new(amalgam: Amalgam) -> Self {
        Session {
            amalgam,
            cache: HashMap::new(),
        }
    }

    pub fn from_text(text: &str, coset_cap: usize) -> Result<Self> {
        Ok(Session::new(Amalgam::with_cap(parse_amalgam(text)?, coset_cap)?))
    }

    /// Reads an amalgam file. I/O failures are reported as a syntax error on
    /// line 0.
    pub fn load(path: &Path, coset_cap: Option<usize>) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Syntax {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Session::from_text(&text, coset_cap.unwrap_or(DEFAULT_COSET_CAP))
    }

    pub fn parse_words(&self, texts: &[String]) -> Result<Vec<Word>> {
        texts.iter().map(|t| self.amalgam.parse_word(t)).collect()
    }

    /// `Γ(H)` for the given generators, built once per generator list.
    pub fn subgroup(&mut self, generators: &[Word]) -> Result<&SubgroupGraph> {
        self.subgroup_with(generators, &BuildOptions::default())
    }

    /// As [`subgroup`](Self::subgroup); traced builds bypass the cache.
    pub fn subgroup_with(&mut self, generators: &[Word], options: &BuildOptions) -> Result<&SubgroupGraph> {
        let key = generators.to_vec();
        if options.trace || options.order_seed.is_some() || !self.cache.contains_key(&key) {
            let sg = build_subgroup_graph(&self.amalgam, generators, options);
            let report = verify_precover(&sg.graph, &self.amalgam);
            if !report.ok() {
                return Err(Error::Invariant(report.diagnostics.join("; ")));
            }
            self.cache.insert(key.clone(), sg);
        }
        Ok(&self.cache[&key])
    }

    pub fn cached(&self) -> usize {
        self.cache.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::sl2z_spec;

    #[test]
    fn cache_reuses_builds() {
        let mut s = Session::from_text(&sl2z_spec().to_file_text(), DEFAULT_COSET_CAP).unwrap();
        let gens = s.parse_words(&["x y".to_string()]).unwrap();
        let v = s.subgroup(&gens).unwrap().graph.num_vertices;
        assert_eq!(v, 6);
        s.subgroup(&gens).unwrap();
        assert_eq!(s.cached(), 1);
    }

    #[test]
    fn bad_file_reports_line() {
        let err = Session::from_text("factor1.generators x", 100).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
    }
}
