//! Guide chapters compiled as doc-tests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}

#[doc = include_str!("../../../book/src/schedule.md")]
pub mod schedule {}

#[doc = include_str!("../../../book/src/explicit.md")]
pub mod explicit {}

#[doc = include_str!("../../../book/src/central.md")]
pub mod central {}

#[doc = include_str!("../../../book/src/compression.md")]
pub mod compression {}

#[doc = include_str!("../../../book/src/ghz.md")]
pub mod ghz {}

#[doc = include_str!("../../../book/src/resources.md")]
pub mod resources {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
