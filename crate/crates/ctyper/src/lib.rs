//! Filesystem, file-format and orchestration layer over `ctyper-core`:
//! corpus walking, JSONL/TSV/JSON artifacts, the bundled registry and API
//! signature list, a deterministic benchmark generator, and the CLI.

pub mod cli;
pub mod formats;
pub mod generate;
pub mod pipeline;

/// The bundled c-type registry shipped with the tool.
pub const BUNDLED_REGISTRY: &str = include_str!("../data/registry.txt");

/// The bundled Java API signature list used to seed the package tree.
pub const BUNDLED_SIGNATURES: &str = include_str!("../data/java-api.sig");
