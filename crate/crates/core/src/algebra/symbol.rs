//! Interned variable symbols.
//!
//! A `Symbol` is a cheap copyable handle to a variable name. Interning keeps
//! polynomial arithmetic free of string allocation, and ordering symbols by
//! their names (not by interning order) makes every canonical form stable
//! across runs regardless of which symbol was created first.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

static INTERNER: Lazy<Mutex<HashMap<String, &'static str>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// An interned variable name. `Copy`, and ordered by name.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Symbol(&'static str);

impl Symbol {
    pub fn new(name: &str) -> Symbol {
        let mut table = INTERNER.lock().unwrap();
        if let Some(s) = table.get(name) {
            return Symbol(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.insert(name.to_owned(), leaked);
        Symbol(leaked)
    }

    pub fn name(&self) -> &'static str {
        self.0
    }

    /// The conventional correlator variables z1, z2, ...
    pub fn z(i: usize) -> Symbol {
        Symbol::new(&format!("z{i}"))
    }

    /// Fresh slot variables s1, s2, ... used while assembling weights.
    pub fn slot(i: usize) -> Symbol {
        Symbol::new(&format!("s{i}"))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp(other.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_identity_preserving() {
        let a = Symbol::new("z1");
        let b = Symbol::new("z1");
        assert_eq!(a, b);
        assert_eq!(a.name(), "z1");
    }

    #[test]
    fn ordering_is_by_name_not_creation() {
        let later = Symbol::new("aaa_created_later");
        let earlier = Symbol::new("zzz_created_earlier");
        assert!(later < earlier);
    }
}
