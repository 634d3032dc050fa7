//! The c-type catalog: which API method arguments carry which conceptual
//! type. Loaded from a plain-text file, one method per line:
//!
//! ```text
//! # comment
//! java.io.File.<init>(LString;)V 0=PATH
//! java.awt.Dimension.<init>(II)V 0=WIDTH 1=HEIGHT
//! ```

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::resolve::MethodId;

/// The 12 conceptual-type labels plus OTHER for unmapped argument positions
/// of matched calls.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "UPPERCASE")]
pub enum CType {
    Path,
    Url,
    Sql,
    Host,
    Port,
    XCoord,
    YCoord,
    Width,
    Height,
    Year,
    Month,
    Day,
    Other,
}

impl CType {
    pub const ALL: [CType; 13] = [
        CType::Path,
        CType::Url,
        CType::Sql,
        CType::Host,
        CType::Port,
        CType::XCoord,
        CType::YCoord,
        CType::Width,
        CType::Height,
        CType::Year,
        CType::Month,
        CType::Day,
        CType::Other,
    ];

    /// The 12 proper c-types, OTHER excluded.
    pub const CONCEPTS: [CType; 12] = [
        CType::Path,
        CType::Url,
        CType::Sql,
        CType::Host,
        CType::Port,
        CType::XCoord,
        CType::YCoord,
        CType::Width,
        CType::Height,
        CType::Year,
        CType::Month,
        CType::Day,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CType::Path => "PATH",
            CType::Url => "URL",
            CType::Sql => "SQL",
            CType::Host => "HOST",
            CType::Port => "PORT",
            CType::XCoord => "XCOORD",
            CType::YCoord => "YCOORD",
            CType::Width => "WIDTH",
            CType::Height => "HEIGHT",
            CType::Year => "YEAR",
            CType::Month => "MONTH",
            CType::Day => "DAY",
            CType::Other => "OTHER",
        }
    }

    pub fn parse(s: &str) -> Option<CType> {
        CType::ALL.iter().copied().find(|c| c.name() == s)
    }

    /// The primitive type the label rides on (`String` or `int`).
    pub fn carrier(self) -> &'static str {
        match self {
            CType::Path | CType::Url | CType::Sql | CType::Host => "String",
            CType::Other => "any",
            _ => "int",
        }
    }
}

impl core::fmt::Display for CType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Mapping from argument positions of one method to their c-types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegistryEntry {
    pub method: MethodId,
    pub arg_ctypes: BTreeMap<usize, CType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegistryError {
    Format { line: usize, message: String },
    DuplicateEntry { id: String },
}

impl core::fmt::Display for RegistryError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            RegistryError::Format { line, message } => {
                write!(f, "registry line {line}: {message}")
            }
            RegistryError::DuplicateEntry { id } => {
                write!(f, "duplicate registry entry for {id}")
            }
        }
    }
}

/// Immutable catalog keyed by MethodId.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Registry {
    entries: BTreeMap<MethodId, RegistryEntry>,
}

impl Registry {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &MethodId) -> Option<&RegistryEntry> {
        self.entries.get(id)
    }

    pub fn entries(&self) -> impl Iterator<Item = &RegistryEntry> {
        self.entries.values()
    }

    /// The entry of the first (lexicographically smallest) candidate present
    /// in the registry, if any.
    pub fn lookup(&self, candidates: &BTreeSet<MethodId>) -> Option<&RegistryEntry> {
        candidates.iter().find_map(|id| self.entries.get(id))
    }

    /// Number of registered argument positions per c-type.
    pub fn counts_by_ctype(&self) -> BTreeMap<CType, usize> {
        let mut counts = BTreeMap::new();
        for e in self.entries.values() {
            for ct in e.arg_ctypes.values() {
                *counts.entry(*ct).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Serialize back to the textual format (sorted, comment-free).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.entries.values() {
            out.push_str(&e.method.text());
            for (pos, ct) in &e.arg_ctypes {
                out.push_str(&format!(" {pos}={}", ct.name()));
            }
            out.push('\n');
        }
        out
    }
}

/// Parse the registry format. Malformed rows and out-of-range positions are
/// format errors with line numbers; a repeated MethodId is a load error.
pub fn load_registry(text: &str) -> Result<Registry, RegistryError> {
    let mut entries: BTreeMap<MethodId, RegistryEntry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let id_text = parts.next().expect("nonempty line");
        let method = MethodId::parse(id_text)
            .map_err(|message| RegistryError::Format { line: lineno, message })?;
        let arity = method.arity();
        let mut arg_ctypes = BTreeMap::new();
        for part in parts {
            let (pos, label) = part.split_once('=').ok_or_else(|| RegistryError::Format {
                line: lineno,
                message: format!("expected `<pos>=<CTYPE>`, found `{part}`"),
            })?;
            let pos: usize = pos.parse().map_err(|_| RegistryError::Format {
                line: lineno,
                message: format!("bad argument position `{pos}`"),
            })?;
            if pos >= arity {
                return Err(RegistryError::Format {
                    line: lineno,
                    message: format!(
                        "argument position {pos} out of range for arity {arity}"
                    ),
                });
            }
            let ct = CType::parse(label).ok_or_else(|| RegistryError::Format {
                line: lineno,
                message: format!("unknown c-type `{label}`"),
            })?;
            if ct == CType::Other {
                return Err(RegistryError::Format {
                    line: lineno,
                    message: "OTHER cannot be registered explicitly".to_owned(),
                });
            }
            arg_ctypes.insert(pos, ct);
        }
        if arg_ctypes.is_empty() {
            return Err(RegistryError::Format {
                line: lineno,
                message: "entry maps no argument position".to_owned(),
            });
        }
        if entries.contains_key(&method) {
            return Err(RegistryError::DuplicateEntry { id: method.text() });
        }
        entries.insert(method.clone(), RegistryEntry { method, arg_ctypes });
    }
    Ok(Registry { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# spot checks
java.io.File.<init>(LString;)V 0=PATH
java.net.URI.<init>(LString;)V 0=URL
java.sql.Statement.execute(LString;)Z 0=SQL
java.net.InetAddress.getByName(LString;)LInetAddress; 0=HOST
java.net.Socket.<init>(LString;I)V 0=HOST 1=PORT
java.awt.Point.<init>(II)V 0=XCOORD 1=YCOORD
java.awt.Dimension.<init>(II)V 0=WIDTH 1=HEIGHT
java.util.Date.<init>(III)V 0=YEAR 1=MONTH 2=DAY
java.util.Date.setYear(I)V 0=YEAR
java.time.LocalDate.of(III)LLocalDate; 0=YEAR 1=MONTH 2=DAY
";

    #[test]
    fn parses_catalog_rows() {
        let reg = load_registry(SAMPLE).unwrap();
        assert_eq!(reg.len(), 10);
        let file_ctor = MethodId::parse("java.io.File.<init>(LString;)V").unwrap();
        let entry = reg.get(&file_ctor).unwrap();
        assert_eq!(entry.arg_ctypes.get(&0), Some(&CType::Path));
        let socket = MethodId::parse("java.net.Socket.<init>(LString;I)V").unwrap();
        let entry = reg.get(&socket).unwrap();
        assert_eq!(entry.arg_ctypes.get(&0), Some(&CType::Host));
        assert_eq!(entry.arg_ctypes.get(&1), Some(&CType::Port));
    }

    #[test]
    fn counts_by_ctype_totals() {
        let reg = load_registry(SAMPLE).unwrap();
        let counts = reg.counts_by_ctype();
        assert_eq!(counts.get(&CType::Year), Some(&3));
        assert_eq!(counts.get(&CType::Host), Some(&2));
        assert_eq!(counts.get(&CType::Sql), Some(&1));
        assert_eq!(counts.get(&CType::Other), None);
        let total: usize = counts.values().sum();
        assert_eq!(total, 17);
    }

    #[test]
    fn rejects_out_of_range_position() {
        let err = load_registry("java.io.File.<init>(LString;)V 1=PATH").unwrap_err();
        assert!(matches!(err, RegistryError::Format { line: 1, .. }));
    }

    #[test]
    fn rejects_bad_label_and_other() {
        assert!(load_registry("a.B.m(I)V 0=NOPE").is_err());
        assert!(load_registry("a.B.m(I)V 0=OTHER").is_err());
        assert!(load_registry("a.B.m(I)V").is_err());
        assert!(load_registry("a.B.m(I)V x=PATH").is_err());
    }

    #[test]
    fn rejects_duplicate_entries() {
        let text = "a.B.m(I)V 0=PORT\na.B.m(I)V 0=YEAR\n";
        let err = load_registry(text).unwrap_err();
        assert!(matches!(err, RegistryError::DuplicateEntry { .. }));
    }

    #[test]
    fn round_trips_through_text() {
        let reg = load_registry(SAMPLE).unwrap();
        let text = reg.to_text();
        let back = load_registry(&text).unwrap();
        assert_eq!(back, reg);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn lookup_prefers_first_candidate() {
        let reg = load_registry("a.A.m(I)V 0=PORT\nz.Z.m(I)V 0=YEAR\n").unwrap();
        let set: BTreeSet<MethodId> = ["z.Z.m(I)V", "a.A.m(I)V", "q.Q.m(I)V"]
            .iter()
            .map(|s| MethodId::parse(s).unwrap())
            .collect();
        let entry = reg.lookup(&set).unwrap();
        assert_eq!(entry.method.class_fqname, "a.A");
        let miss: BTreeSet<MethodId> =
            [MethodId::parse("q.Q.m(I)V").unwrap()].into_iter().collect();
        assert!(reg.lookup(&miss).is_none());
    }

    #[test]
    fn ctype_names_and_order() {
        assert_eq!(CType::ALL.len(), 13);
        assert_eq!(CType::CONCEPTS.len(), 12);
        assert!(!CType::CONCEPTS.contains(&CType::Other));
        for c in CType::ALL {
            assert_eq!(CType::parse(c.name()), Some(c));
        }
        assert_eq!(CType::Path.carrier(), "String");
        assert_eq!(CType::Port.carrier(), "int");
    }
}
