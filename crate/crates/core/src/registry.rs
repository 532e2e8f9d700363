//! Name-keyed registries of interchangeable algorithm implementations.
//!
//! Each numerical family (time integrators, least-squares solvers, 1-D
//! minimum refiners) exposes a trait; concrete variants are registered under
//! a stable name so that configs and the command line can select them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Anything that can be stored in a [`Registry`].
pub trait Named {
    fn name(&self) -> &'static str;
}

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    default: &'static str,
    entries: BTreeMap<&'static str, Arc<T>>,
}

impl<T: ?Sized + Named> Registry<T> {
    pub fn new(kind: &'static str, default: &'static str) -> Self {
        Self {
            kind,
            default,
            entries: BTreeMap::new(),
        }
    }

    /// Registers `item` under its own name, replacing any previous entry.
    pub fn register(&mut self, item: Arc<T>) -> &mut Self {
        self.entries.insert(item.name(), item);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().join(", "),
            })
    }

    pub fn default_entry(&self) -> Arc<T> {
        self.entries
            .get(self.default)
            .cloned()
            .expect("registry default is always registered")
    }

    pub fn default_name(&self) -> &'static str {
        self.default
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    trait Greeter: Named + Send + Sync {
        fn greet(&self) -> String;
    }

    struct Hello;
    impl Named for Hello {
        fn name(&self) -> &'static str {
            "hello"
        }
    }
    impl Greeter for Hello {
        fn greet(&self) -> String {
            "hi".into()
        }
    }

    #[test]
    fn lookup_and_unknown() {
        let mut reg: Registry<dyn Greeter> = Registry::new("greeter", "hello");
        reg.register(Arc::new(Hello));
        assert_eq!(reg.get("hello").unwrap().greet(), "hi");
        assert_eq!(reg.default_entry().name(), "hello");
        let err = reg.get("nope").err().unwrap();
        assert!(err.to_string().contains("available: hello"), "{err}");
    }
}
