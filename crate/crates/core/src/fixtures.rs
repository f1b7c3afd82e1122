//! Bundled manifold fixtures, embedded at compile time.

use crate::error::{Error, Result};
use crate::specfile::{parse_manifold_spec, ManifoldSpec};

/// A named, embedded spec file.
#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

/// All bundled fixtures, in catalog order.
pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "euclidean-r3",
        text: include_str!("../fixtures/euclidean-r3.gvspec"),
    },
    Fixture {
        name: "example1-r5-g1",
        text: include_str!("../fixtures/example1-r5-g1.gvspec"),
    },
    Fixture {
        name: "example1-r5-g2",
        text: include_str!("../fixtures/example1-r5-g2.gvspec"),
    },
    Fixture {
        name: "example2-r3",
        text: include_str!("../fixtures/example2-r3.gvspec"),
    },
    Fixture {
        name: "trivial-ps-r1",
        text: include_str!("../fixtures/trivial-ps-r1.gvspec"),
    },
];

/// Look up a bundled fixture by name.
pub fn bundled(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Parse a bundled fixture.
pub fn load_bundled(name: &str) -> Result<ManifoldSpec> {
    let f = bundled(name)
        .ok_or_else(|| Error::spec(format!("no bundled fixture named `{name}`")))?;
    parse_manifold_spec(f.text)
}
