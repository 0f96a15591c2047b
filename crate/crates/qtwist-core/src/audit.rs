//! Residual reports shared by the verification routines.

use alloc::string::String;
use alloc::vec::Vec;

/// Something that can be checked for vanishing.
pub trait Residual {
    fn vanishes(&self) -> bool;
}

impl Residual for crate::Element {
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

impl Residual for bool {
    fn vanishes(&self) -> bool {
        *self
    }
}

/// A labelled list of residuals; a check passes when every residual
/// vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport<T> {
    pub entries: Vec<(String, T)>,
}

impl<T> Default for AuditReport<T> {
    fn default() -> Self {
        AuditReport { entries: Vec::new() }
    }
}

impl<T: Residual> AuditReport<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, residual: T) {
        self.entries.push((label.into(), residual));
    }

    pub fn extend(&mut self, other: AuditReport<T>) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every residual vanishes.
    pub fn is_clean(&self) -> bool {
        self.entries.iter().all(|(_, r)| r.vanishes())
    }

    /// Entries whose residual does not vanish.
    pub fn failures(&self) -> impl Iterator<Item = &(String, T)> {
        self.entries.iter().filter(|(_, r)| !r.vanishes())
    }

    /// The residual recorded under `label`, if any.
    pub fn get(&self, label: &str) -> Option<&T> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, r)| r)
    }
}
