use std::io::Write;
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Duration;

use super::cache::{cache_path, cached_pdb, default_cache_dir, validate_pdb_id};
use super::PdbError;

pub const DEFAULT_BASE_URL: &str = "https://files.rcsb.org/download";

/// Largest entry accepted from the archive.
const MAX_BYTES: u64 = 256 << 20;

/// Cache writes from this process go through one lock.
static CACHE_WRITE: Mutex<()> = Mutex::new(());

/// Downloads PDB entries, keeping a copy of each in a cache directory.
#[derive(Debug, Clone)]
pub struct PdbFetcher {
    pub base_url: String,
    pub cache_dir: PathBuf,
    pub timeout: Duration,
}

impl Default for PdbFetcher {
    fn default() -> Self {
        PdbFetcher {
            base_url: DEFAULT_BASE_URL.to_owned(),
            cache_dir: default_cache_dir(),
            timeout: Duration::from_secs(60),
        }
    }
}

impl PdbFetcher {
    /// The entry text, from the cache when present.
    pub fn fetch(&self, id: &str) -> Result<String, PdbError> {
        let id = validate_pdb_id(id)?;
        if let Some(text) = cached_pdb(&self.cache_dir, &id)? {
            return Ok(text);
        }
        let text = self.download(&id)?;
        self.store(&id, &text)?;
        Ok(text)
    }

    fn download(&self, id: &str) -> Result<String, PdbError> {
        let url = format!("{}/{}.pdb", self.base_url.trim_end_matches('/'), id.to_ascii_uppercase());
        let agent: ureq::Agent = ureq::Agent::config_builder().timeout_global(Some(self.timeout)).build().into();
        let response = agent.get(&url).call().map_err(|e| match e {
            ureq::Error::StatusCode(404) => PdbError::NotFound(id.to_owned()),
            other => PdbError::Network(format!("{url}: {other}")),
        })?;
        let bytes = response
            .into_body()
            .with_config()
            .limit(MAX_BYTES)
            .read_to_vec()
            .map_err(|e| PdbError::Network(format!("{url}: {e}")))?;
        String::from_utf8(bytes).map_err(|_| PdbError::Format(format!("{url}: response is not text")))
    }

    /// Writes to a temporary file and renames it into place, so readers
    /// never see a partial entry.
    fn store(&self, id: &str, text: &str) -> Result<(), PdbError> {
        let _guard = CACHE_WRITE.lock().unwrap_or_else(|e| e.into_inner());
        let dir = &self.cache_dir;
        std::fs::create_dir_all(dir).map_err(|e| PdbError::io(dir, e))?;
        let path = cache_path(dir, id)?;
        let tmp = dir.join(format!(".{id}.{}.tmp", std::process::id()));
        let mut file = std::fs::File::create(&tmp).map_err(|e| PdbError::io(&tmp, e))?;
        file.write_all(text.as_bytes()).map_err(|e| PdbError::io(&tmp, e))?;
        file.sync_all().map_err(|e| PdbError::io(&tmp, e))?;
        std::fs::rename(&tmp, &path).map_err(|e| PdbError::io(&path, e))
    }
}

/// [`PdbFetcher::fetch`] with the default archive and cache directory.
pub fn fetch_pdb(id: &str) -> Result<String, PdbError> {
    PdbFetcher::default().fetch(id)
}
