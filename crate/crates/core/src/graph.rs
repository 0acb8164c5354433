//! Gower distances and the minimum spanning tree over ranked pairs.
//!
//! A similarity s in [0, 1] converts to the metric distance
//! `d = sqrt(2 * (1 - s))`, so identical words coincide and maximally
//! dissimilar words sit at sqrt(2). The spanning tree is built with
//! Kruskal's algorithm over the ranked pairs; equal-weight edges are taken
//! in lexicographic pair order so the output is reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::similarity::SimilarityRecord;

/// Convert a similarity in [0, 1] to a Gower distance.
pub fn gower_distance(s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain {
            what: "similarity",
            value: s,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok((2.0 * (1.0 - s)).sqrt())
}

/// One tree edge with its Gower distance, pair in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceEdge {
    pub word1: String,
    pub word2: String,
    pub distance: f64,
}

/// Spanning tree (or forest, when the ranked pairs do not connect all
/// mentioned words). Edges are stored in the order Kruskal accepted them:
/// ascending (distance, pair).
#[derive(Debug, Clone, PartialEq)]
pub struct SpanningTree {
    nodes: BTreeSet<String>,
    edges: Vec<DistanceEdge>,
    components: usize,
}

impl SpanningTree {
    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn edges(&self) -> &[DistanceEdge] {
        &self.edges
    }

    /// Number of connected components; 1 for a true spanning tree.
    pub fn components(&self) -> usize {
        self.components
    }

    pub fn is_connected(&self) -> bool {
        self.components == 1
    }

    /// Sum of edge distances, in accepted-edge order.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.distance).sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            self.parent[x] = self.find(self.parent[x]);
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Kruskal over the ranked pairs, weighting each edge by the Gower distance
/// of its similarity. Returns a forest (components > 1) when the pairs do
/// not connect every mentioned word.
pub fn minimum_spanning_tree(records: &[SimilarityRecord]) -> Result<SpanningTree> {
    if records.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut candidates = Vec::with_capacity(records.len());
    for r in records {
        candidates.push(DistanceEdge {
            word1: r.word1.clone(),
            word2: r.word2.clone(),
            distance: gower_distance(r.similarity)?,
        });
    }
    candidates.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then_with(|| a.word1.cmp(&b.word1))
            .then_with(|| a.word2.cmp(&b.word2))
    });

    let mut nodes: BTreeSet<String> = BTreeSet::new();
    for e in &candidates {
        nodes.insert(e.word1.clone());
        nodes.insert(e.word2.clone());
    }
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();

    let mut uf = UnionFind::new(nodes.len());
    let mut edges = Vec::with_capacity(nodes.len().saturating_sub(1));
    for e in candidates {
        if uf.union(index[e.word1.as_str()], index[e.word2.as_str()]) {
            edges.push(e);
        }
    }
    let components = nodes.len() - edges.len();
    Ok(SpanningTree {
        nodes,
        edges,
        components,
    })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Render the tree as an undirected DOT graph. Nodes are labeled with their
/// surface plus the gloss in parentheses when the lexicon knows the word;
/// edge labels carry distances to 3 decimals. Output is byte-stable for
/// identical inputs.
pub fn export_dot(tree: &SpanningTree, lexicon: Option<&Lexicon>) -> String {
    let mut out = String::from("graph word_similarity {\n");
    for node in &tree.nodes {
        let label = match lexicon.and_then(|lex| lex.get(node)) {
            Some(entry) => format!("{node} ({})", entry.display()),
            None => node.clone(),
        };
        writeln!(out, "    \"{}\" [label=\"{}\"];", dot_escape(node), dot_escape(&label))
            .unwrap();
    }
    let mut edges: Vec<&DistanceEdge> = tree.edges.iter().collect();
    edges.sort_by(|a, b| (&a.word1, &a.word2).cmp(&(&b.word1, &b.word2)));
    for e in edges {
        writeln!(
            out,
            "    \"{}\" -- \"{}\" [label=\"{:.3}\"];",
            dot_escape(&e.word1),
            dot_escape(&e.word2),
            e.distance
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Render the tree as a `word1<TAB>word2<TAB>distance` edge list, rows in
/// lexicographic pair order, distances to 6 decimals.
pub fn export_edge_list(tree: &SpanningTree) -> String {
    let mut out = String::from("word1\tword2\tdistance\n");
    let mut edges: Vec<&DistanceEdge> = tree.edges.iter().collect();
    edges.sort_by(|a, b| (&a.word1, &a.word2).cmp(&(&b.word1, &b.word2)));
    for e in edges {
        writeln!(out, "{}\t{}\t{:.6}", e.word1, e.word2, e.distance).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(w1: &str, w2: &str, s: f64) -> SimilarityRecord {
        SimilarityRecord::new(w1, w2, s, 3, 3)
    }

    #[test]
    fn gower_endpoints() {
        assert_eq!(gower_distance(1.0).unwrap(), 0.0);
        assert!((gower_distance(0.98).unwrap() - 0.2).abs() < 1e-12);
        assert_eq!(gower_distance(0.0).unwrap(), 2.0f64.sqrt());
        assert!(gower_distance(-0.1).is_err());
        assert!(gower_distance(1.1).is_err());
    }

    #[test]
    fn gower_is_strictly_decreasing() {
        let mut prev = gower_distance(0.0).unwrap();
        for i in 1..=100 {
            let d = gower_distance(i as f64 / 100.0).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn triangle_drops_the_heaviest_edge() {
        // distances are sqrt(2(1-s)); pick similarities giving weights 1 < 2-ish order
        let records = vec![
            record("a", "b", 0.5),   // d = 1.0
            record("b", "c", 0.82),  // d = 0.6
            record("a", "c", 0.995), // d = 0.1
        ];
        let tree = minimum_spanning_tree(&records).unwrap();
        assert!(tree.is_connected());
        assert_eq!(tree.edges().len(), 2);
        let pairs: Vec<(&str, &str)> = tree
            .edges()
            .iter()
            .map(|e| (e.word1.as_str(), e.word2.as_str()))
            .collect();
        assert!(pairs.contains(&("a", "c")));
        assert!(pairs.contains(&("b", "c")));
        let expected = gower_distance(0.995).unwrap() + gower_distance(0.82).unwrap();
        assert_eq!(tree.total_weight(), expected);
    }

    #[test]
    fn star_keeps_all_hub_edges() {
        let records = vec![
            record("hub", "a", 0.9),
            record("hub", "b", 0.8),
            record("hub", "c", 0.7),
        ];
        let tree = minimum_spanning_tree(&records).unwrap();
        assert!(tree.is_connected());
        assert_eq!(tree.edges().len(), 3);
    }

    #[test]
    fn equal_weights_break_ties_lexicographically() {
        // triangle with all-equal weights: the two lexicographically
        // smallest pairs win
        let records = vec![
            record("c", "b", 0.75),
            record("a", "c", 0.75),
            record("b", "a", 0.75),
        ];
        let tree = minimum_spanning_tree(&records).unwrap();
        let pairs: Vec<(&str, &str)> = tree
            .edges()
            .iter()
            .map(|e| (e.word1.as_str(), e.word2.as_str()))
            .collect();
        assert_eq!(pairs, vec![("a", "b"), ("a", "c")]);
    }

    #[test]
    fn disconnected_input_yields_a_flagged_forest() {
        let records = vec![record("a", "b", 0.9), record("c", "d", 0.9)];
        let tree = minimum_spanning_tree(&records).unwrap();
        assert!(!tree.is_connected());
        assert_eq!(tree.components(), 2);
        assert_eq!(tree.edges().len(), 2);
        assert_eq!(tree.nodes().len(), 4);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            minimum_spanning_tree(&[]),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn out_of_range_similarity_is_a_domain_error() {
        let records = vec![record("a", "b", 1.25)];
        assert!(matches!(
            minimum_spanning_tree(&records),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn dot_export_is_labeled_and_stable() {
        let lex = Lexicon::parse("abr\tman\tknown\nkdi\twoman\tknown\n").unwrap();
        let tree = minimum_spanning_tree(&[record("kdi", "abr", 1.0)]).unwrap();
        let dot = export_dot(&tree, Some(&lex));
        let expected = "graph word_similarity {\n    \"abr\" [label=\"abr (man)\"];\n    \"kdi\" [label=\"kdi (woman)\"];\n    \"abr\" -- \"kdi\" [label=\"0.000\"];\n}\n";
        assert_eq!(dot, expected);
        assert_eq!(dot, export_dot(&tree, Some(&lex)));
        // two node lines, one edge line, plus braces
        assert_eq!(dot.lines().count(), 5);
    }

    #[test]
    fn unknown_words_get_bare_labels() {
        let tree = minimum_spanning_tree(&[record("x", "y", 0.98)]).unwrap();
        let dot = export_dot(&tree, None);
        assert!(dot.contains("\"x\" [label=\"x\"];"));
        assert!(dot.contains("[label=\"0.200\"]"));
    }

    #[test]
    fn edge_list_export_is_sorted_and_six_decimal() {
        let tree =
            minimum_spanning_tree(&[record("x", "y", 0.98), record("w", "x", 0.5)]).unwrap();
        let tsv = export_edge_list(&tree);
        assert_eq!(tsv, "word1\tword2\tdistance\nw\tx\t1.000000\nx\ty\t0.200000\n");
    }

    #[test]
    fn cut_property_holds_on_a_small_graph() {
        let records = vec![
            record("a", "b", 0.99),
            record("a", "c", 0.55),
            record("b", "c", 0.97),
            record("b", "d", 0.61),
            record("c", "d", 0.96),
            record("a", "d", 0.52),
        ];
        let tree = minimum_spanning_tree(&records).unwrap();
        let tree_weight = tree.total_weight();
        // swapping any tree edge for any non-tree edge that reconnects the
        // cut never reduces total weight
        for (i, removed) in tree.edges().iter().enumerate() {
            for r in &records {
                let d = gower_distance(r.similarity).unwrap();
                let in_tree = tree
                    .edges()
                    .iter()
                    .any(|e| e.word1 == r.word1 && e.word2 == r.word2);
                if in_tree {
                    continue;
                }
                // does this edge reconnect the two sides?
                let mut kept: Vec<(&str, &str)> = tree
                    .edges()
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, e)| (e.word1.as_str(), e.word2.as_str()))
                    .collect();
                kept.push((r.word1.as_str(), r.word2.as_str()));
                let mut uf = UnionFind::new(4);
                let idx = |w: &str| match w {
                    "a" => 0,
                    "b" => 1,
                    "c" => 2,
                    _ => 3,
                };
                let mut joined = 0;
                for (u, v) in &kept {
                    if uf.union(idx(u), idx(v)) {
                        joined += 1;
                    }
                }
                if joined == 3 {
                    let alt_weight = tree_weight - removed.distance + d;
                    assert!(alt_weight >= tree_weight - 1e-12);
                }
            }
        }
    }
}
