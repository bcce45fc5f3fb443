use serde::Serialize;

/// Collected check failures and notes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Diagnostics {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
    pub fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }
    pub fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(msg());
        }
    }
    pub fn absorb(&mut self, prefix: &str, other: Diagnostics) {
        self.failures.extend(other.failures.into_iter().map(|f| format!("{prefix}: {f}")));
        self.notes.extend(other.notes.into_iter().map(|f| format!("{prefix}: {f}")));
    }
    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(String::as_str)
    }
}
