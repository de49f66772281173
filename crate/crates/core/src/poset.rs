//! Posets of evaluation subgroups over families of fibrations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::complex::GradedSubspace;
use crate::error::{Error, Result};
use crate::gca::SullivanModel;
use crate::linalg::{SparseVec, Subspace};
use crate::relative::{FibreHomology, RelativeModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub label: String,
    pub model: RelativeModel,
}

/// Labeled relative models sharing one fibre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibrationFamily {
    name: String,
    fibre: SullivanModel,
    members: Vec<FamilyMember>,
}

impl FibrationFamily {
    /// Checks that every member is valid and has fibre `fibre`.
    pub fn new(
        name: impl Into<String>,
        fibre: SullivanModel,
        members: Vec<(String, RelativeModel)>,
    ) -> Result<Self> {
        let mut out = Vec::with_capacity(members.len());
        for (label, model) in members {
            if model.fibre() != &fibre {
                return Err(Error::Invalid(format!("member {label} has a different fibre")));
            }
            if let Err(w) = model.validate() {
                return Err(Error::Invalid(format!("member {label}: {w}")));
            }
            out.push(FamilyMember { label, model });
        }
        Ok(FibrationFamily {
            name: name.into(),
            fibre,
            members: out,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn fibre(&self) -> &SullivanModel {
        &self.fibre
    }

    pub fn members(&self) -> &[FamilyMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&FamilyMember> {
        self.members.iter().find(|m| m.label == label)
    }

    pub fn fibre_homology(&self) -> FibreHomology {
        FibreHomology::new(&self.fibre)
    }

    /// All products `ξ_i × η_j`, labeled `label_i x label_j`.
    pub fn product(&self, other: &FibrationFamily, suffix: &str) -> Result<FibrationFamily> {
        let mut members = Vec::with_capacity(self.len() * other.len());
        for a in &self.members {
            for b in &other.members {
                members.push((
                    format!("{} x {}", a.label, b.label),
                    a.model.fibre_product(&b.model, suffix)?,
                ));
            }
        }
        let fibre = crate::relative::tensor_models(&self.fibre, &other.fibre, suffix)?;
        FibrationFamily::new(format!("{} x {}", self.name, other.name), fibre, members)
    }

    /// Restricts to the listed labels, in the given order.
    pub fn select(&self, labels: &[&str]) -> Result<FibrationFamily> {
        let members = labels
            .iter()
            .map(|l| {
                self.get(l)
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("no member labeled {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FibrationFamily {
            name: self.name.clone(),
            fibre: self.fibre.clone(),
            members,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetNode {
    pub subgroup: GradedSubspace,
    pub labels: Vec<String>,
    pub classes: Vec<String>,
}

/// Distinct subgroups ordered by inclusion; `covers` holds `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupPoset {
    pub nodes: Vec<PosetNode>,
    pub covers: Vec<(usize, usize)>,
}

impl SubgroupPoset {
    /// Deduplicates `(label, subgroup, classes)` triples and computes covers.
    pub fn from_subgroups(items: Vec<(String, GradedSubspace, Vec<String>)>) -> Self {
        let mut grouped: BTreeMap<(usize, GradedSubspace), PosetNode> = BTreeMap::new();
        for (label, g, classes) in items {
            let g = g.normalized();
            grouped
                .entry((g.total_dim(), g.clone()))
                .or_insert_with(|| PosetNode {
                    subgroup: g,
                    labels: Vec::new(),
                    classes,
                })
                .labels
                .push(label);
        }
        let nodes: Vec<PosetNode> = grouped.into_values().collect();
        let covers = cover_relation(nodes.len(), |i, j| {
            nodes[i].subgroup.is_proper_subspace_of(&nodes[j].subgroup)
        });
        SubgroupPoset { nodes, covers }
    }

    /// Subsets of `{0..k}` given as 0/1 vectors, realized as coordinate
    /// subspaces of `Q^k` in degree 0.
    pub fn coordinate_lattice(vectors: &[Vec<bool>]) -> Self {
        let items = vectors
            .iter()
            .map(|v| {
                let label = vector_label(v);
                let units: Vec<SparseVec> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| **b)
                    .map(|(i, _)| SparseVec::unit(i))
                    .collect();
                let mut parts = BTreeMap::new();
                parts.insert(0, Subspace::span(v.len(), units.iter()));
                (label.clone(), GradedSubspace { parts }, vec![label])
            })
            .collect();
        Self::from_subgroups(items)
    }

    /// The Boolean lattice of rank `k`.
    pub fn boolean_lattice(k: usize) -> Self {
        let vectors: Vec<Vec<bool>> = (0..1usize << k)
            .map(|m| (0..k).map(|i| m >> (k - 1 - i) & 1 == 1).collect())
            .collect();
        Self::coordinate_lattice(&vectors)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of(&self, label: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n.labels.iter().any(|l| l == label))
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.nodes[i]
            .subgroup
            .is_proper_subspace_of(&self.nodes[j].subgroup)
    }

    /// Longest chain length minus one.
    pub fn depth(&self) -> usize {
        self.maximal_chain().len().saturating_sub(1)
    }

    /// A longest chain, listed from the smallest subgroup upwards.
    pub fn maximal_chain(&self) -> Vec<usize> {
        if self.nodes.is_empty() {
            return Vec::new();
        }
        // Nodes are sorted by total dimension, so covers go forwards.
        let n = self.nodes.len();
        let mut best = vec![0usize; n];
        let mut next: Vec<Option<usize>> = vec![None; n];
        for i in (0..n).rev() {
            for &(lo, hi) in &self.covers {
                if lo == i && best[hi] + 1 > best[i] {
                    best[i] = best[hi] + 1;
                    next[i] = Some(hi);
                }
            }
        }
        let start = (0..n).max_by_key(|&i| (best[i], std::cmp::Reverse(i))).unwrap();
        let mut chain = vec![start];
        while let Some(k) = next[*chain.last().unwrap()] {
            chain.push(k);
        }
        chain
    }

    /// Graphviz digraph with edges pointing from larger to smaller subgroups.
    pub fn hasse_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=TB;\n  node [shape=box];\n");
        for (i, node) in self.nodes.iter().enumerate() {
            let label = format!("{}\\n{}", node.labels.join(" "), node.classes.join(", "));
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", label.replace('"', "'"));
        }
        let mut edges = self.covers.clone();
        edges.sort_by_key(|&(lo, hi)| (hi, lo));
        for (lo, hi) in edges {
            let _ = writeln!(out, "  n{hi} -> n{lo};");
        }
        out.push_str("}\n");
        out
    }

    /// One line per node of `chain`: labels and classes.
    pub fn render_chain(&self, chain: &[usize]) -> String {
        let mut out = String::new();
        for &i in chain {
            let n = &self.nodes[i];
            let _ = writeln!(out, "{} | {}", n.labels.join(" "), n.classes.join(", "));
        }
        out
    }

    pub fn render(&self) -> String {
        let mut out = format!("nodes: {}\ncovers: {}\ndepth: {}\n", self.len(), self.covers.len(), self.depth());
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "n{i} [{}] {}", n.labels.join(" "), n.classes.join(", "));
        }
        for (lo, hi) in &self.covers {
            let _ = writeln!(out, "n{lo} < n{hi}");
        }
        out
    }
}

/// Evaluation subgroups of every member, deduplicated.
pub fn build_poset(fam: &FibrationFamily) -> SubgroupPoset {
    let fh = fam.fibre_homology();
    build_poset_with(fam, &fh)
}

pub fn build_poset_with(fam: &FibrationFamily, fh: &FibreHomology) -> SubgroupPoset {
    let items = fam
        .members()
        .iter()
        .map(|m| {
            let g = m.model.evaluation_subgroup(fh);
            let classes = fh.member_classes(&g);
            (m.label.clone(), g, classes)
        })
        .collect();
    SubgroupPoset::from_subgroups(items)
}

/// Yamaguchi groups of every member, deduplicated. Classes are named by
/// the dual generators they contain.
pub fn build_yamaguchi_poset(fam: &FibrationFamily) -> SubgroupPoset {
    let fa = &fam.fibre().algebra;
    let items = fam
        .members()
        .iter()
        .map(|m| {
            let g = m.model.yamaguchi_group();
            let mut classes = Vec::new();
            for (n, s) in &g.parts {
                for (j, &i) in fa.generators_of_degree(*n as u32).iter().enumerate() {
                    if s.contains(&SparseVec::unit(j)) {
                        classes.push(format!("{}*", fa.generators()[i].name));
                    }
                }
            }
            classes.reverse();
            (m.label.clone(), g, classes)
        })
        .collect();
    SubgroupPoset::from_subgroups(items)
}

/// Membership of the named classes in each node's subgroup.
pub fn membership_vectors(p: &SubgroupPoset, classes: &[&str]) -> Vec<Vec<bool>> {
    p.nodes
        .iter()
        .map(|n| {
            classes
                .iter()
                .map(|c| n.classes.iter().any(|k| k == c))
                .collect()
        })
        .collect()
}

pub fn vector_label(v: &[bool]) -> String {
    let parts: Vec<&str> = v.iter().map(|b| if *b { "1" } else { "0" }).collect();
    format!("({})", parts.join(","))
}

/// Both sides of `depth(X × Y) ≥ depth(X) + depth(Y)` together with the
/// Yamaguchi depths of the three families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthBoundReport {
    pub depth_x: usize,
    pub depth_y: usize,
    pub depth_product: usize,
    pub yamaguchi_x: usize,
    pub yamaguchi_y: usize,
    pub yamaguchi_product: usize,
}

impl DepthBoundReport {
    pub fn holds(&self) -> bool {
        self.depth_product >= self.depth_x + self.depth_y
    }

    pub fn render(&self) -> String {
        format!(
            "depth: product {} >= {} + {} : {}\nyamaguchi depth: product {}, factors {} + {}\n",
            self.depth_product,
            self.depth_x,
            self.depth_y,
            if self.holds() { "holds" } else { "FAILS" },
            self.yamaguchi_product,
            self.yamaguchi_x,
            self.yamaguchi_y,
        )
    }
}

/// Compares the poset of a product family with those of its factors.
pub fn product_depth_bound(
    x: &FibrationFamily,
    y: &FibrationFamily,
    product: &FibrationFamily,
) -> DepthBoundReport {
    DepthBoundReport {
        depth_x: build_poset(x).depth(),
        depth_y: build_poset(y).depth(),
        depth_product: build_poset(product).depth(),
        yamaguchi_x: build_yamaguchi_poset(x).depth(),
        yamaguchi_y: build_yamaguchi_poset(y).depth(),
        yamaguchi_product: build_yamaguchi_poset(product).depth(),
    }
}

/// Transitive reduction of a strict order on `0..n`.
pub fn cover_relation(n: usize, less: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let lt: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && less(i, j)).collect())
        .collect();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if lt[i][j] && !(0..n).any(|k| lt[i][k] && lt[k][j]) {
                covers.push((i, j));
            }
        }
    }
    covers
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gca::Algebra;

    #[test]
    fn boolean_lattices() {
        for k in 0..=4 {
            let p = SubgroupPoset::boolean_lattice(k);
            assert_eq!(p.len(), 1 << k);
            assert_eq!(p.depth(), k);
            assert_eq!(p.covers.len(), k * (1 << k) / 2);
        }
    }

    #[test]
    fn chain_of_three_is_a_path() {
        let vs = vec![vec![false, false], vec![true, false], vec![true, true]];
        let p = SubgroupPoset::coordinate_lattice(&vs);
        assert_eq!(p.covers, vec![(0, 1), (1, 2)]);
        assert_eq!(p.depth(), 2);
        assert_eq!(p.maximal_chain(), vec![0, 1, 2]);
        let dot = p.hasse_dot();
        assert!(dot.contains("n2 -> n1;") && dot.contains("n1 -> n0;"));
        assert_eq!(dot, p.hasse_dot());
    }

    #[test]
    fn duplicates_share_a_node() {
        let vs = vec![vec![true, false], vec![true, false], vec![false, false]];
        let p = SubgroupPoset::coordinate_lattice(&vs);
        assert_eq!(p.len(), 2);
        assert_eq!(p.nodes[1].labels, vec!["(1,0)", "(1,0)"]);
    }

    #[test]
    fn single_member_family() {
        let fibre = SullivanModel::free(Algebra::from_pairs(&[("x", 3), ("y", 5)]).unwrap());
        let base = SullivanModel::free(Algebra::from_pairs(&[("a", 4)]).unwrap());
        let rm = RelativeModel::product(base, fibre.clone()).unwrap();
        let fam = FibrationFamily::new("one", fibre, vec![("p".into(), rm)]).unwrap();
        let p = build_poset(&fam);
        assert_eq!(p.len(), 1);
        assert_eq!(p.depth(), 0);
        assert!(p.covers.is_empty());
        let r = product_depth_bound(&fam, &fam, &fam.product(&fam, "'").unwrap());
        assert!(r.holds());
        assert_eq!(r.depth_product, 0);
    }
}
