//! From an argument expression to the four token-set features: build the
//! data-dependency graph, rank identifiers by distance from the top,
//! segment identifiers into lowercase words, and collect first/last words
//! of the primary and secondary layers.

use alloc::borrow::ToOwned;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::frontend::{ExprKind, ExprNode};
use crate::registry::CType;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepNodeKind {
    Identifier,
    Operator,
    Constant,
}

#[derive(Debug, Clone)]
pub struct DepNode {
    pub kind: DepNodeKind,
    pub text: String,
    /// Display form keeps the `()` suffix on calls, like the graph figures.
    pub is_call: bool,
}

/// Data-dependency graph of one expression. Edges point from value
/// producers to consumers; `top` produces the expression's value.
#[derive(Debug, Clone, Default)]
pub struct DepGraph {
    pub nodes: Vec<DepNode>,
    /// (producer, consumer) pairs.
    pub edges: Vec<(usize, usize)>,
    pub top: usize,
}

impl DepGraph {
    fn add(&mut self, kind: DepNodeKind, text: &str, is_call: bool) -> usize {
        self.nodes.push(DepNode { kind, text: text.to_owned(), is_call });
        self.nodes.len() - 1
    }

    fn edge(&mut self, producer: usize, consumer: usize) {
        self.edges.push((producer, consumer));
    }

    /// Producers feeding each node.
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = alloc::vec![Vec::new(); self.nodes.len()];
        for &(p, c) in &self.edges {
            preds[c].push(p);
        }
        preds
    }

    /// True iff no node is reachable from itself. Holds by construction;
    /// exposed for property checks.
    pub fn is_acyclic(&self) -> bool {
        let mut succs = alloc::vec![Vec::new(); self.nodes.len()];
        for &(p, c) in &self.edges {
            succs[p].push(c);
        }
        // Kahn's algorithm
        let mut indeg = alloc::vec![0usize; self.nodes.len()];
        for &(_, c) in &self.edges {
            indeg[c] += 1;
        }
        let mut queue: Vec<usize> =
            (0..self.nodes.len()).filter(|&n| indeg[n] == 0).collect();
        let mut seen = 0;
        while let Some(n) = queue.pop() {
            seen += 1;
            for &s in &succs[n] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    queue.push(s);
                }
            }
        }
        seen == self.nodes.len()
    }
}

/// Apply the dependency rules recursively over the syntax tree.
///
/// Constants, variable accesses and calls become nodes; field access and
/// instance calls get an edge from the receiver; operators collect their
/// operands; every call argument feeds the call node.
pub fn build_dependency_graph(expr: &ExprNode) -> DepGraph {
    let mut g = DepGraph::default();
    g.top = build_node(expr, &mut g);
    g
}

fn build_node(expr: &ExprNode, g: &mut DepGraph) -> usize {
    match expr.kind {
        ExprKind::Constant => g.add(
            DepNodeKind::Constant,
            expr.literal.as_deref().unwrap_or(""),
            false,
        ),
        ExprKind::VarRef => g.add(
            DepNodeKind::Identifier,
            expr.name.as_deref().unwrap_or(""),
            false,
        ),
        ExprKind::FieldAccess => {
            let base = build_node(&expr.children[0], g);
            let n = g.add(DepNodeKind::Identifier, expr.name.as_deref().unwrap_or(""), false);
            g.edge(base, n);
            n
        }
        ExprKind::MethodCall => {
            let n = g.add(DepNodeKind::Identifier, expr.name.as_deref().unwrap_or(""), true);
            if let Some(recv) = expr.receiver() {
                let r = build_node(recv, g);
                g.edge(r, n);
            }
            for arg in expr.call_args() {
                let a = build_node(arg, g);
                g.edge(a, n);
            }
            n
        }
        ExprKind::NewObject => {
            let simple = crate::resolve::simple_type_name(expr.name.as_deref().unwrap_or(""));
            let n = g.add(DepNodeKind::Identifier, simple, true);
            for arg in &expr.children {
                let a = build_node(arg, g);
                g.edge(a, n);
            }
            n
        }
        ExprKind::UnaryOp | ExprKind::BinaryOp => {
            let n = g.add(DepNodeKind::Operator, expr.op.as_deref().unwrap_or(""), false);
            for c in &expr.children {
                let cn = build_node(c, g);
                g.edge(cn, n);
            }
            n
        }
        ExprKind::Assignment => {
            let rhs = build_node(&expr.children[1], g);
            let lhs = build_node(&expr.children[0], g);
            g.edge(rhs, lhs);
            lhs
        }
        ExprKind::Cast => build_node(&expr.children[0], g),
        ExprKind::Conditional => {
            let n = g.add(DepNodeKind::Operator, expr.op.as_deref().unwrap_or("?:"), false);
            for c in &expr.children {
                let cn = build_node(c, g);
                g.edge(cn, n);
            }
            n
        }
        ExprKind::ArrayAccess => {
            let n = g.add(DepNodeKind::Operator, "[]", false);
            for c in &expr.children {
                let cn = build_node(c, g);
                g.edge(cn, n);
            }
            n
        }
    }
}

/// Identifier texts by rank of first discovery from the top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RankedIdentifiers {
    pub primary: BTreeSet<String>,
    pub secondary: BTreeSet<String>,
    pub ternary: BTreeSet<String>,
}

/// Traverse from the top along reversed edges. Operator and constant nodes
/// are transparent; the nearest identifier layer is primary, the next
/// secondary, then ternary; anything deeper is discarded.
pub fn rank_identifiers(g: &DepGraph) -> RankedIdentifiers {
    let mut ranked = RankedIdentifiers::default();
    if g.nodes.is_empty() {
        return ranked;
    }
    let preds = g.predecessors();
    // rank(n) = min over top→n traversals of identifier nodes on the way,
    // n included; 0/1 node weights, so a deque BFS finds minima.
    let mut rank = alloc::vec![usize::MAX; g.nodes.len()];
    let top_cost = usize::from(g.nodes[g.top].kind == DepNodeKind::Identifier);
    rank[g.top] = top_cost;
    let mut queue = alloc::collections::VecDeque::new();
    queue.push_back(g.top);
    while let Some(n) = queue.pop_front() {
        for &p in &preds[n] {
            let cost = usize::from(g.nodes[p].kind == DepNodeKind::Identifier);
            let cand = rank[n] + cost;
            if cand < rank[p] {
                rank[p] = cand;
                if cost == 0 {
                    queue.push_front(p);
                } else {
                    queue.push_back(p);
                }
            }
        }
    }
    for (n, node) in g.nodes.iter().enumerate() {
        if node.kind != DepNodeKind::Identifier {
            continue;
        }
        match rank[n] {
            1 => ranked.primary.insert(node.text.clone()),
            2 => ranked.secondary.insert(node.text.clone()),
            3 => ranked.ternary.insert(node.text.clone()),
            _ => false,
        };
    }
    ranked
}

/// Identifier word-splitting behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentationMode {
    /// Longest-match `([A-Z][a-z]+|[A-Z]+)` chunks, lowercase runs between
    /// them also tokens: `URLString` → `urls`, `tring`.
    #[default]
    Literal,
    /// Conventional camel-case: an uppercase run followed by lowercase
    /// splits before its last letter: `URLString` → `url`, `string`.
    Camel,
}

impl SegmentationMode {
    pub fn parse(s: &str) -> Option<SegmentationMode> {
        match s {
            "literal" => Some(SegmentationMode::Literal),
            "camel" => Some(SegmentationMode::Camel),
            _ => None,
        }
    }
}

/// Split an identifier into ordered lowercase tokens. Digits, `_` and `$`
/// are separators and never appear in tokens.
pub fn segment_identifier(name: &str, mode: SegmentationMode) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_lowercase() {
                i += 1;
            }
            tokens.push(chars[start..i].iter().collect::<String>());
        } else if c.is_ascii_uppercase() {
            let mut upper_end = i;
            while upper_end < chars.len() && chars[upper_end].is_ascii_uppercase() {
                upper_end += 1;
            }
            let upper_len = upper_end - i;
            let lower_follows =
                upper_end < chars.len() && chars[upper_end].is_ascii_lowercase();
            match mode {
                SegmentationMode::Literal => {
                    // longest of [A-Z][a-z]+ and [A-Z]+ at this position
                    let mut alt1 = 0;
                    if upper_len == 1 && lower_follows {
                        let mut j = upper_end;
                        while j < chars.len() && chars[j].is_ascii_lowercase() {
                            j += 1;
                        }
                        alt1 = j - i;
                    }
                    let take = if alt1 >= upper_len { alt1 } else { upper_len };
                    let token: String =
                        chars[i..i + take].iter().map(|c| c.to_ascii_lowercase()).collect();
                    tokens.push(token);
                    i += take;
                }
                SegmentationMode::Camel => {
                    if upper_len > 1 && lower_follows {
                        // URLString → url + string
                        let token: String = chars[i..upper_end - 1]
                            .iter()
                            .map(|c| c.to_ascii_lowercase())
                            .collect();
                        tokens.push(token);
                        i = upper_end - 1;
                    } else {
                        let mut j = upper_end;
                        while j < chars.len() && chars[j].is_ascii_lowercase() {
                            j += 1;
                        }
                        let token: String =
                            chars[i..j].iter().map(|c| c.to_ascii_lowercase()).collect();
                        tokens.push(token);
                        i = j;
                    }
                }
            }
        } else {
            i += 1;
        }
    }
    tokens
}

/// The four token-set features of Table-style first/last word extraction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub primary_first_words: BTreeSet<String>,
    pub primary_last_words: BTreeSet<String>,
    pub secondary_first_words: BTreeSet<String>,
    pub secondary_last_words: BTreeSet<String>,
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum FeatureKind {
    PrimaryFirstWords,
    PrimaryLastWords,
    SecondaryFirstWords,
    SecondaryLastWords,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 4] = [
        FeatureKind::PrimaryFirstWords,
        FeatureKind::PrimaryLastWords,
        FeatureKind::SecondaryFirstWords,
        FeatureKind::SecondaryLastWords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::PrimaryFirstWords => "PrimaryFirstWords",
            FeatureKind::PrimaryLastWords => "PrimaryLastWords",
            FeatureKind::SecondaryFirstWords => "SecondaryFirstWords",
            FeatureKind::SecondaryLastWords => "SecondaryLastWords",
        }
    }
}

impl core::fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl FeatureVector {
    pub fn words(&self, kind: FeatureKind) -> &BTreeSet<String> {
        match kind {
            FeatureKind::PrimaryFirstWords => &self.primary_first_words,
            FeatureKind::PrimaryLastWords => &self.primary_last_words,
            FeatureKind::SecondaryFirstWords => &self.secondary_first_words,
            FeatureKind::SecondaryLastWords => &self.secondary_last_words,
        }
    }

    pub fn contains(&self, kind: FeatureKind, word: &str) -> bool {
        self.words(kind).contains(word)
    }

    pub fn is_empty(&self) -> bool {
        FeatureKind::ALL.iter().all(|&k| self.words(k).is_empty())
    }
}

/// Compose graph ranking with word segmentation: the first and last tokens
/// of every primary identifier fill the primary features, likewise for
/// secondary identifiers; ternary identifiers feed nothing.
pub fn featurize(expr: &ExprNode, mode: SegmentationMode) -> FeatureVector {
    let ranked = rank_identifiers(&build_dependency_graph(expr));
    let mut fv = FeatureVector::default();
    for ident in &ranked.primary {
        let tokens = segment_identifier(ident, mode);
        if let (Some(first), Some(last)) = (tokens.first(), tokens.last()) {
            fv.primary_first_words.insert(first.clone());
            fv.primary_last_words.insert(last.clone());
        }
    }
    for ident in &ranked.secondary {
        let tokens = segment_identifier(ident, mode);
        if let (Some(first), Some(last)) = (tokens.first(), tokens.last()) {
            fv.secondary_first_words.insert(first.clone());
            fv.secondary_last_words.insert(last.clone());
        }
    }
    fv
}

/// Words used for a c-type, ranked by the number of distinct projects that
/// use them (descending, then lexicographic).
pub fn top_words(
    occurrences: &[crate::extract::Occurrence],
    label: CType,
) -> Vec<(String, usize)> {
    let mut projects_by_word: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for occ in occurrences.iter().filter(|o| o.label == label) {
        let Some(fv) = &occ.features else { continue };
        for kind in FeatureKind::ALL {
            for word in fv.words(kind) {
                projects_by_word
                    .entry(word.clone())
                    .or_default()
                    .insert(occ.project.as_str());
            }
        }
    }
    let mut ranked: Vec<(String, usize)> = projects_by_word
        .into_iter()
        .map(|(w, ps)| (w, ps.len()))
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_expression;
    use alloc::format;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| (*s).to_owned()).collect()
    }

    fn ranked_of(src: &str) -> RankedIdentifiers {
        rank_identifiers(&build_dependency_graph(&parse_expression(src).unwrap()))
    }

    #[test]
    fn ranking_reference_example() {
        // the canonical worked example: a call with a receiver and an index
        let r = ranked_of("config.getPath(i)");
        assert_eq!(r.primary, set(&["getPath"]));
        assert_eq!(r.secondary, set(&["config", "i"]));
        assert!(r.ternary.is_empty());
    }

    #[test]
    fn operators_are_transparent() {
        let r = ranked_of("leftButtonWidth + leftWidth");
        assert_eq!(r.primary, set(&["leftButtonWidth", "leftWidth"]));
        assert!(r.secondary.is_empty());
    }

    #[test]
    fn deep_identifiers_discarded() {
        let r = ranked_of("a.b().c().d().e()");
        assert_eq!(r.primary, set(&["e"]));
        assert_eq!(r.secondary, set(&["d"]));
        assert_eq!(r.ternary, set(&["c"]));
        // b and a sit at ranks 4 and 5: dropped
        for id in ["a", "b"] {
            assert!(!r.primary.contains(id) && !r.secondary.contains(id) && !r.ternary.contains(id));
        }
    }

    #[test]
    fn constants_and_casts_transparent() {
        let r = ranked_of("(int)(bounds.getWidth() * percent)");
        assert_eq!(r.primary, set(&["getWidth", "percent"]));
        assert_eq!(r.secondary, set(&["bounds"]));
        let r = ranked_of("width + 5");
        assert_eq!(r.primary, set(&["width"]));
    }

    #[test]
    fn new_object_uses_simple_name() {
        let r = ranked_of("new java.io.File(name)");
        assert_eq!(r.primary, set(&["File"]));
        assert_eq!(r.secondary, set(&["name"]));
    }

    #[test]
    fn conditional_and_array_access_transparent() {
        let r = ranked_of("flag ? xs[i] : fallback");
        assert_eq!(r.primary, set(&["flag", "xs", "i", "fallback"]));
    }

    #[test]
    fn literal_segmentation_golden() {
        let s = |n: &str| segment_identifier(n, SegmentationMode::Literal);
        assert_eq!(s("getConfigPath"), vec!["get", "config", "path"]);
        assert_eq!(s("URLString"), vec!["urls", "tring"]);
        assert_eq!(s("parseURL"), vec!["parse", "url"]);
        assert_eq!(s("x"), vec!["x"]);
        assert_eq!(s("file_name"), vec!["file", "name"]);
        assert_eq!(s("HTML"), vec!["html"]);
        assert_eq!(s("a2b"), vec!["a", "b"]);
        assert_eq!(s("$ref"), vec!["ref"]);
        assert!(s("_123").is_empty());
    }

    #[test]
    fn camel_segmentation_golden() {
        let s = |n: &str| segment_identifier(n, SegmentationMode::Camel);
        assert_eq!(s("URLString"), vec!["url", "string"]);
        assert_eq!(s("getConfigPath"), vec!["get", "config", "path"]);
        assert_eq!(s("parseURL"), vec!["parse", "url"]);
        assert_eq!(s("HTML"), vec!["html"]);
    }

    #[test]
    fn literal_segmentation_matches_reference_regex() {
        // independent oracle: scan with the reference pattern
        // ([A-Z][a-z]+|[A-Z]+) greedily, plus lowercase runs between matches
        let re = regex::Regex::new("[A-Z][a-z]+|[A-Z]+|[a-z]+").unwrap();
        for name in [
            "getConfigPath", "URLString", "parseURL", "openFileDialog", "x",
            "leftButtonWidth", "HTMLParser", "toURI", "serverNamePort",
            "dbQueryString",
        ] {
            let expected: Vec<String> = re
                .find_iter(name)
                .map(|m| m.as_str().to_ascii_lowercase())
                .collect();
            assert_eq!(
                segment_identifier(name, SegmentationMode::Literal),
                expected,
                "mismatch for {name}"
            );
        }
    }

    #[test]
    fn featurize_reference_example() {
        let fv = featurize(
            &parse_expression("config.getPath(i)").unwrap(),
            SegmentationMode::Literal,
        );
        assert_eq!(fv.primary_first_words, set(&["get"]));
        assert_eq!(fv.primary_last_words, set(&["path"]));
        assert_eq!(fv.secondary_first_words, set(&["config", "i"]));
        assert_eq!(fv.secondary_last_words, set(&["config", "i"]));
    }

    #[test]
    fn single_token_fills_first_and_last() {
        let fv = featurize(&parse_expression("path").unwrap(), SegmentationMode::Literal);
        assert_eq!(fv.primary_first_words, set(&["path"]));
        assert_eq!(fv.primary_last_words, set(&["path"]));
        assert!(fv.secondary_first_words.is_empty());
    }

    #[test]
    fn constants_have_empty_features() {
        let fv = featurize(&parse_expression("42").unwrap(), SegmentationMode::Literal);
        assert!(fv.is_empty());
    }

    fn expr_strategy() -> impl Strategy<Value = String> {
        let ident = prop_oneof![
            Just("path"), Just("getConfigPath"), Just("URLString"), Just("f"),
            Just("serverName"), Just("leftButtonWidth"),
        ];
        ident.prop_flat_map(|base| {
            prop_oneof![
                Just(base.to_owned()),
                Just(format!("obj.{base}(i)")),
                Just(format!("{base} + other")),
                Just(format!("new File({base})")),
                Just(format!("arr[{base}]")),
                Just(format!("cond ? {base} : alt")),
                Just(format!("(String) helper.{base}(a, b)")),
            ]
        })
    }

    proptest! {
        #[test]
        fn graphs_are_acyclic(src in expr_strategy()) {
            let g = build_dependency_graph(&parse_expression(&src).unwrap());
            prop_assert!(g.is_acyclic());
        }

        #[test]
        fn ranks_are_disjoint(src in expr_strategy()) {
            let r = ranked_of(&src);
            prop_assert!(r.primary.is_disjoint(&r.secondary));
            prop_assert!(r.primary.is_disjoint(&r.ternary));
            prop_assert!(r.secondary.is_disjoint(&r.ternary));
        }

        #[test]
        fn tokens_are_subsequences(name in "[A-Za-z_$0-9]{0,12}") {
            for mode in [SegmentationMode::Literal, SegmentationMode::Camel] {
                let tokens = segment_identifier(&name, mode);
                let lower = name.to_ascii_lowercase();
                // every token is a contiguous lowercase slice; their total
                // letter count equals the identifier's letter count
                let mut cursor = 0;
                for t in &tokens {
                    prop_assert!(!t.is_empty());
                    prop_assert!(t.chars().all(|c| c.is_ascii_lowercase()));
                    let at = lower[cursor..].find(t.as_str());
                    prop_assert!(at.is_some(), "{t} not found in order in {name}");
                    cursor += at.unwrap() + t.len();
                }
                let letters = name.chars().filter(|c| c.is_ascii_alphabetic()).count();
                let token_letters: usize = tokens.iter().map(|t| t.len()).sum();
                prop_assert_eq!(letters, token_letters);
            }
        }

        #[test]
        fn snake_case_modes_agree(words in proptest::collection::vec("[a-z]{1,6}", 1..4)) {
            let snake = words.join("_");
            prop_assert_eq!(
                segment_identifier(&snake, SegmentationMode::Literal),
                segment_identifier(&snake, SegmentationMode::Camel)
            );
            prop_assert_eq!(segment_identifier(&snake, SegmentationMode::Literal), words);
        }
    }

    #[test]
    fn segmentation_mode_flags() {
        assert_eq!(SegmentationMode::parse("literal"), Some(SegmentationMode::Literal));
        assert_eq!(SegmentationMode::parse("camel"), Some(SegmentationMode::Camel));
        assert_eq!(SegmentationMode::parse("other"), None);
        assert_eq!(SegmentationMode::default(), SegmentationMode::Literal);
    }
}
