use std::path::{Path, PathBuf};

use super::PdbError;

/// Environment variable overriding the PDB cache directory.
pub const CACHE_ENV: &str = "CHAINPAIR_PDB_CACHE";

/// Checks the `[0-9][A-Za-z0-9]{3}` shape and lowercases the id.
pub fn validate_pdb_id(id: &str) -> Result<String, PdbError> {
    let b = id.as_bytes();
    let ok = b.len() == 4 && b[0].is_ascii_digit() && b[1..].iter().all(u8::is_ascii_alphanumeric);
    if ok {
        Ok(id.to_ascii_lowercase())
    } else {
        Err(PdbError::InvalidId(id.to_owned()))
    }
}

/// `$CHAINPAIR_PDB_CACHE`, else `$XDG_CACHE_HOME/chainpair/pdb`, else
/// `$HOME/.cache/chainpair/pdb`, else `./.pdb-cache`.
pub fn default_cache_dir() -> PathBuf {
    let var = |name: &str| std::env::var_os(name).filter(|v| !v.is_empty()).map(PathBuf::from);
    if let Some(dir) = var(CACHE_ENV) {
        return dir;
    }
    if let Some(dir) = var("XDG_CACHE_HOME") {
        return dir.join("chainpair").join("pdb");
    }
    if let Some(home) = var("HOME") {
        return home.join(".cache").join("chainpair").join("pdb");
    }
    PathBuf::from(".pdb-cache")
}

pub fn cache_path(dir: &Path, id: &str) -> Result<PathBuf, PdbError> {
    Ok(dir.join(format!("{}.pdb", validate_pdb_id(id)?)))
}

/// The cached entry for `id`, if present.
pub fn cached_pdb(dir: &Path, id: &str) -> Result<Option<String>, PdbError> {
    let path = cache_path(dir, id)?;
    match std::fs::read_to_string(&path) {
        Ok(text) => Ok(Some(text)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(PdbError::io(&path, e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids() {
        assert_eq!(validate_pdb_id("107J").unwrap(), "107j");
        assert_eq!(validate_pdb_id("1hfj").unwrap(), "1hfj");
        for bad in ["XY", "abcd", "1ab", "1abcd", "1a-c", ""] {
            assert!(validate_pdb_id(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cache_lookup() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(cached_pdb(dir.path(), "1abc").unwrap(), None);
        std::fs::write(dir.path().join("1abc.pdb"), "END\n").unwrap();
        assert_eq!(cached_pdb(dir.path(), "1ABC").unwrap().as_deref(), Some("END\n"));
    }
}
