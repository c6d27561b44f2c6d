//! JSON config-file defaults: a flat object whose keys mirror the long
//! flag names. Explicit flags always win over file values.

use std::path::PathBuf;

use crate::CommandError;

pub struct FileConfig {
    value: serde_json::Map<String, serde_json::Value>,
}

impl FileConfig {
    pub fn load(path: &Option<PathBuf>) -> Result<FileConfig, CommandError> {
        let value = match path {
            None => serde_json::Map::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CommandError::Io(format!("read {p:?}: {e}")))?;
                let parsed: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| CommandError::Usage(format!("config {p:?}: {e}")))?;
                match parsed {
                    serde_json::Value::Object(map) => map,
                    _ => {
                        return Err(CommandError::Usage(format!(
                            "config {p:?}: expected a JSON object"
                        )))
                    }
                }
            }
        };
        Ok(FileConfig { value })
    }

    /// Flag value if set, else the file value, else `None`.
    pub fn u64_field(&self, flag: Option<u64>, key: &str) -> Result<Option<u64>, CommandError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .map(Some)
                .ok_or_else(|| CommandError::Usage(format!("config key {key:?}: expected integer"))),
        }
    }

    pub fn usize_field(
        &self,
        flag: Option<usize>,
        key: &str,
    ) -> Result<Option<usize>, CommandError> {
        Ok(self.u64_field(flag.map(|v| v as u64), key)?.map(|v| v as usize))
    }

    pub fn f64_field(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CommandError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| CommandError::Usage(format!("config key {key:?}: expected number"))),
        }
    }

    pub fn string_field(
        &self,
        flag: Option<String>,
        key: &str,
    ) -> Result<Option<String>, CommandError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.value.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(|s| Some(s.to_string()))
                .ok_or_else(|| CommandError::Usage(format!("config key {key:?}: expected string"))),
        }
    }
}

/// A required parameter after merging flag and file sources.
pub fn require<T>(value: Option<T>, what: &str) -> Result<T, CommandError> {
    value.ok_or_else(|| CommandError::Usage(format!("missing required parameter: {what}")))
}
