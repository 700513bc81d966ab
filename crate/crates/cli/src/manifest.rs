use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

/// Plain-text record of one invocation, written next to its output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the config file bytes; of the empty string without one.
    pub config_digest: String,
    pub seed: u64,
    pub version: &'static str,
    pub outputs: Vec<PathBuf>,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunManifest {
    pub fn new(command: String, config_bytes: &[u8], seed: u64) -> Self {
        Self {
            command,
            config_digest: digest(config_bytes),
            seed,
            version: env!("CARGO_PKG_VERSION"),
            outputs: Vec::new(),
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "command: {}", self.command).unwrap();
        writeln!(s, "config_sha256: {}", self.config_digest).unwrap();
        writeln!(s, "seed: {}", self.seed).unwrap();
        writeln!(s, "version: {}", self.version).unwrap();
        for o in &self.outputs {
            writeln!(s, "output: {}", o.display()).unwrap();
        }
        s
    }

    /// `<out>.manifest.txt`
    pub fn path_for(out: &Path) -> PathBuf {
        let mut name = out.as_os_str().to_owned();
        name.push(".manifest.txt");
        PathBuf::from(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
        let a = RunManifest::new("tables".into(), b"[link]\n", 3);
        let b = RunManifest::new("tables".into(), b"[link]\n", 3);
        assert_eq!(a.render(), b.render());
    }

    #[test]
    fn manifest_path() {
        assert_eq!(RunManifest::path_for(Path::new("out/run.csv")), PathBuf::from("out/run.csv.manifest.txt"));
    }
}
