//! ID3 decision-tree induction over (feature, word)-membership tests.
//!
//! Each internal node asks whether a word is present in one of the four
//! token-set features; the split minimizing average entropy is chosen
//! greedily. Nodes with fewer than `min_items` samples, pure nodes, and
//! nodes where no test reduces entropy become majority-label leaves.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::{FeatureKind, FeatureVector};
use crate::registry::CType;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub features: FeatureVector,
    pub label: CType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecisionTree {
    Leaf {
        label: CType,
    },
    Node {
        feature: FeatureKind,
        word: String,
        present: Box<DecisionTree>,
        absent: Box<DecisionTree>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LearnerConfig {
    pub min_items: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig { min_items: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyTrainingSet;

impl core::fmt::Display for EmptyTrainingSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("cannot train on an empty sample set")
    }
}

/// Shannon entropy of a label multiset, in bits.
pub fn set_entropy(labels: &[CType]) -> f64 {
    assert!(!labels.is_empty(), "entropy of an empty set is undefined");
    let mut counts: BTreeMap<CType, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(*l).or_insert(0) += 1;
    }
    let total = labels.len() as f64;
    let mut h = 0.0;
    for &count in counts.values() {
        let p = count as f64 / total;
        h -= p * libm::log2(p);
    }
    h
}

/// Size-weighted mean entropy of a two-way split; empty sides contribute
/// nothing.
pub fn split_entropy(left: &[CType], right: &[CType]) -> f64 {
    let total = (left.len() + right.len()) as f64;
    assert!(total > 0.0, "split entropy of an empty partition is undefined");
    let mut h = 0.0;
    for side in [left, right] {
        if !side.is_empty() {
            h += side.len() as f64 / total * set_entropy(side);
        }
    }
    h
}

fn partition_labels(samples: &[&Sample], feature: FeatureKind, word: &str) -> (Vec<CType>, Vec<CType>) {
    let mut present = Vec::new();
    let mut absent = Vec::new();
    for s in samples {
        if s.features.contains(feature, word) {
            present.push(s.label);
        } else {
            absent.push(s.label);
        }
    }
    (present, absent)
}

/// The (feature, word) test minimizing split entropy, or None when no test
/// strictly improves on the parent entropy. Ties break by feature order
/// then lexicographic word.
pub fn best_split(samples: &[&Sample]) -> Option<(FeatureKind, String)> {
    assert!(!samples.is_empty());
    let parent: Vec<CType> = samples.iter().map(|s| s.label).collect();
    let parent_entropy = set_entropy(&parent);
    let mut candidates: BTreeSet<(usize, &str)> = BTreeSet::new();
    for s in samples {
        for (idx, kind) in FeatureKind::ALL.iter().enumerate() {
            for word in s.features.words(*kind) {
                candidates.insert((idx, word.as_str()));
            }
        }
    }
    let mut best: Option<(f64, FeatureKind, String)> = None;
    for (idx, word) in candidates {
        let kind = FeatureKind::ALL[idx];
        let (present, absent) = partition_labels(samples, kind, word);
        let h = split_entropy(&present, &absent);
        // strict `<` keeps the first minimum in (feature, word) order
        if best.as_ref().is_none_or(|(bh, _, _)| h < *bh) {
            best = Some((h, kind, word.to_owned()));
        }
    }
    match best {
        Some((h, kind, word)) if h < parent_entropy - 1e-12 => Some((kind, word)),
        _ => None,
    }
}

/// Majority label; ties resolve to the earliest label in declaration order.
pub fn majority_label(labels: &[CType]) -> CType {
    let mut counts: BTreeMap<CType, usize> = BTreeMap::new();
    for l in labels {
        *counts.entry(*l).or_insert(0) += 1;
    }
    let best = counts.values().copied().max().unwrap_or(0);
    CType::ALL
        .iter()
        .copied()
        .find(|c| counts.get(c) == Some(&best))
        .unwrap_or(CType::Other)
}

pub fn id3_train(
    samples: &[Sample],
    config: &LearnerConfig,
) -> Result<DecisionTree, EmptyTrainingSet> {
    if samples.is_empty() {
        return Err(EmptyTrainingSet);
    }
    let refs: Vec<&Sample> = samples.iter().collect();
    Ok(build(&refs, config))
}

fn build(samples: &[&Sample], config: &LearnerConfig) -> DecisionTree {
    let labels: Vec<CType> = samples.iter().map(|s| s.label).collect();
    let pure = labels.windows(2).all(|w| w[0] == w[1]);
    if samples.len() < config.min_items || pure {
        return DecisionTree::Leaf { label: majority_label(&labels) };
    }
    let Some((feature, word)) = best_split(samples) else {
        return DecisionTree::Leaf { label: majority_label(&labels) };
    };
    let (present, absent): (Vec<&Sample>, Vec<&Sample>) = samples
        .iter()
        .partition(|s| s.features.contains(feature, &word));
    DecisionTree::Node {
        feature,
        word,
        present: Box::new(build(&present, config)),
        absent: Box::new(build(&absent, config)),
    }
}

/// Total classification: descend membership tests to a leaf.
pub fn classify(tree: &DecisionTree, fv: &FeatureVector) -> CType {
    match tree {
        DecisionTree::Leaf { label } => *label,
        DecisionTree::Node { feature, word, present, absent } => {
            if fv.contains(*feature, word) {
                classify(present, fv)
            } else {
                classify(absent, fv)
            }
        }
    }
}

impl DecisionTree {
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 0,
            DecisionTree::Node { present, absent, .. } => {
                1 + present.depth().max(absent.depth())
            }
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, DecisionTree::Leaf { .. })
    }

    /// Human-readable if/elif rule listing.
    pub fn to_rules_text(&self) -> String {
        let mut out = String::new();
        render(self, 0, &mut out);
        out
    }
}

fn render(tree: &DecisionTree, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match tree {
        DecisionTree::Leaf { label } => {
            out.push_str(&format!("{pad}ctype = {label}\n"));
        }
        DecisionTree::Node { feature, word, present, absent } => {
            out.push_str(&format!("{pad}if \"{word}\" in {feature}:\n"));
            render(present, indent + 1, out);
            out.push_str(&format!("{pad}else:\n"));
            render(absent, indent + 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_expression;
    use crate::features::{featurize, SegmentationMode};
    use alloc::vec;

    fn sample(src: &str, label: CType) -> Sample {
        Sample {
            features: featurize(&parse_expression(src).unwrap(), SegmentationMode::Literal),
            label,
        }
    }

    #[test]
    fn entropy_reference_values() {
        assert_eq!(set_entropy(&[CType::Path; 5]), 0.0);
        let even = [CType::Path, CType::Url];
        assert!((set_entropy(&even) - 1.0).abs() < 1e-12);
        // {PATH×3, URL×1}
        let mixed = [CType::Path, CType::Path, CType::Path, CType::Url];
        assert!((set_entropy(&mixed) - 0.8113).abs() < 1e-4);
        // closed form oracle: -(3/4)log2(3/4) - (1/4)log2(1/4)
        let expect = -(0.75f64 * libm::log2(0.75) + 0.25 * libm::log2(0.25));
        assert!((set_entropy(&mixed) - expect).abs() < 1e-12);
    }

    #[test]
    fn split_entropy_reference_value() {
        // ({PATH×3, URL×1}, {URL×2}) → (4/6)·0.8113 + (2/6)·0 ≈ 0.5409
        let left = [CType::Path, CType::Path, CType::Path, CType::Url];
        let right = [CType::Url, CType::Url];
        assert!((split_entropy(&left, &right) - 0.5409).abs() < 1e-4);
        assert_eq!(split_entropy(&[], &[CType::Path]), 0.0);
        let whole = [CType::Path, CType::Url];
        assert!((split_entropy(&whole, &[]) - 1.0).abs() < 1e-12);
    }

    #[test]
    #[should_panic]
    fn entropy_of_empty_set_panics() {
        set_entropy(&[]);
    }

    /// Brute-force oracle: enumerate every (feature, word) pair and take the
    /// minimum split entropy independently of `best_split`'s iteration.
    fn brute_force_best(samples: &[&Sample]) -> Option<f64> {
        let mut best: Option<f64> = None;
        for s in samples {
            for kind in FeatureKind::ALL {
                for word in s.features.words(kind) {
                    let (mut p, mut a) = (Vec::new(), Vec::new());
                    for t in samples {
                        if t.features.contains(kind, word) {
                            p.push(t.label);
                        } else {
                            a.push(t.label);
                        }
                    }
                    let h = split_entropy(&p, &a);
                    if best.is_none_or(|b| h < b) {
                        best = Some(h);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn best_split_matches_brute_force() {
        let samples = [sample("getPath()", CType::Path),
            sample("config.getPath(i)", CType::Path),
            sample("fileName", CType::Path),
            sample("toURL()", CType::Url),
            sample("urlString", CType::Url),
            sample("server.getHost()", CType::Host)];
        let refs: Vec<&Sample> = samples.iter().collect();
        let (kind, word) = best_split(&refs).expect("split exists");
        let (mut p, mut a) = (Vec::new(), Vec::new());
        for s in &refs {
            if s.features.contains(kind, &word) {
                p.push(s.label);
            } else {
                a.push(s.label);
            }
        }
        let h = split_entropy(&p, &a);
        let oracle = brute_force_best(&refs).unwrap();
        assert!((h - oracle).abs() < 1e-12, "{h} vs {oracle}");
    }

    #[test]
    fn best_split_none_when_uninformative() {
        // identical features, different labels: no split reduces entropy
        let samples = [sample("path", CType::Path),
            sample("path", CType::Url)];
        let refs: Vec<&Sample> = samples.iter().collect();
        assert!(best_split(&refs).is_none());
    }

    #[test]
    fn tie_breaks_are_deterministic() {
        // two words separate equally well; the winner must be stable
        let samples = [sample("pathName", CType::Path),
            sample("urlSpec", CType::Url)];
        let refs: Vec<&Sample> = samples.iter().collect();
        let first = best_split(&refs).unwrap();
        for _ in 0..10 {
            assert_eq!(best_split(&refs).unwrap(), first);
        }
        // first feature kind in declaration order wins the tie
        assert_eq!(first.0, FeatureKind::PrimaryFirstWords);
    }

    #[test]
    fn majority_label_ties_use_declaration_order() {
        assert_eq!(majority_label(&[CType::Url, CType::Path]), CType::Path);
        assert_eq!(majority_label(&[CType::Day, CType::Day, CType::Port]), CType::Day);
        assert_eq!(majority_label(&[]), CType::Other);
    }

    #[test]
    fn small_node_becomes_leaf() {
        // nine separable samples still collapse to a leaf at min_items=10
        let mut samples = Vec::new();
        for _ in 0..5 {
            samples.push(sample("filePath", CType::Path));
        }
        for _ in 0..4 {
            samples.push(sample("pageURL", CType::Url));
        }
        let tree = id3_train(&samples, &LearnerConfig { min_items: 10 }).unwrap();
        assert!(tree.is_leaf());
        assert_eq!(classify(&tree, &samples[0].features), CType::Path);
        // a tenth sample lets the learner split
        samples.push(sample("pageURL", CType::Url));
        let tree = id3_train(&samples, &LearnerConfig { min_items: 10 }).unwrap();
        assert!(!tree.is_leaf());
    }

    #[test]
    fn pure_node_is_leaf_regardless_of_size() {
        let samples = vec![sample("filePath", CType::Path); 50];
        let tree = id3_train(&samples, &LearnerConfig::default()).unwrap();
        assert!(tree.is_leaf());
    }

    #[test]
    fn separable_data_learns_depth_one() {
        let mut samples = Vec::new();
        for _ in 0..10 {
            samples.push(sample("filePath", CType::Path));
            samples.push(sample("pageURL", CType::Url));
        }
        let tree = id3_train(&samples, &LearnerConfig::default()).unwrap();
        assert_eq!(tree.depth(), 1);
        assert_eq!(classify(&tree, &sample("filePath", CType::Other).features), CType::Path);
        assert_eq!(classify(&tree, &sample("pageURL", CType::Other).features), CType::Url);
    }

    #[test]
    fn min_items_one_memorizes_training_data() {
        let samples = vec![
            sample("getPath()", CType::Path),
            sample("toURL()", CType::Url),
            sample("query", CType::Sql),
            sample("hostName", CType::Host),
            sample("portNumber", CType::Port),
        ];
        let tree = id3_train(&samples, &LearnerConfig { min_items: 1 }).unwrap();
        for s in &samples {
            assert_eq!(classify(&tree, &s.features), s.label);
        }
    }

    #[test]
    fn empty_training_set_is_an_error() {
        assert_eq!(id3_train(&[], &LearnerConfig::default()), Err(EmptyTrainingSet));
    }

    #[test]
    fn rules_text_reflects_structure() {
        let mut samples = Vec::new();
        for _ in 0..10 {
            samples.push(sample("filePath", CType::Path));
            samples.push(sample("pageURL", CType::Url));
        }
        let tree = id3_train(&samples, &LearnerConfig::default()).unwrap();
        let text = tree.to_rules_text();
        assert!(text.contains("if \""));
        assert!(text.contains("ctype = PATH"));
        assert!(text.contains("ctype = URL"));
        assert!(text.contains("else:"));
    }

    #[test]
    fn tree_serializes_round_trip() {
        let samples = vec![
            sample("filePath", CType::Path),
            sample("pageURL", CType::Url),
        ];
        let tree = id3_train(&samples, &LearnerConfig { min_items: 1 }).unwrap();
        let json = serde_json::to_string(&tree).unwrap();
        let back: DecisionTree = serde_json::from_str(&json).unwrap();
        assert_eq!(back, tree);
    }
}
