//! Presentation files:
//!
//! ```toml
//! generators = ["a", "b"]
//! relators = ["a^2", "b^3", "(a*b)^2"]
//! subgroup = ["a"]
//! ```

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::word::{Presentation, Word};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default)]
    pub subgroup: Vec<String>,
}

impl PresentationFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn build(&self) -> Result<(Presentation, Vec<Word>)> {
        let p = Presentation::parse(&self.generators, &self.relators)?;
        let sub = self.subgroup.iter().map(|s| p.parse_word(s)).collect::<Result<_>>()?;
        Ok((p, sub))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_s3_file() {
        let f = PresentationFile::parse(
            "generators = [\"a\", \"b\"]\nrelators = [\"a^2\", \"b^3\", \"(a*b)^2\"]\nsubgroup = [\"a\"]\n",
        )
        .unwrap();
        let (p, sub) = f.build().unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.relators.len(), 3);
        assert_eq!(sub, vec![Word::gen(0)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PresentationFile::parse("generators = 3").is_err());
        assert!(PresentationFile::parse("generators = [\"a\"]\nextra = 1").is_err());
        let f = PresentationFile::parse("generators = [\"a\"]\nrelators = [\"c^2\"]").unwrap();
        assert!(f.build().is_err());
    }
}
