//! Architecture spaces: families of model-graph variants generated from one
//! template by fusion-depth and sharing-scheme decisions.
//!
//! The template is a stack of backbone blocks between per-modality entry nets
//! and per-output heads. A fusion-depth choice fixes the block at which the
//! modality branches concatenate; a sharing choice fixes how the post-fusion
//! blocks are shared across outputs. Every full choice vector deterministically
//! yields one `ModelGraph` plus the measured `QualityRecord` for that variant.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::graph::{Component, ComponentKind, Edge, ModelGraph, Sink, SinkKind};
use crate::model::quality::QualityRecord;

/// An input modality: its entry net's work and output volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalitySpec {
    pub id: String,
    pub work: f64,
    pub volume: f64,
}

/// Work and output volume of one backbone block or of the fusion stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub work: f64,
    pub volume: f64,
}

/// One model output and the work of its head component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeadSpec {
    pub id: String,
    pub kind: SinkKind,
    pub work: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchedSpec {
    /// Block index from which blocks are duplicated per output.
    pub split: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossSpec {
    pub split: usize,
    /// Volume in MB carried by each cross edge between sibling branches.
    pub extra_volume: f64,
    /// Work added to each component that receives cross edges.
    pub extra_work: f64,
}

/// How post-fusion blocks are shared across outputs.
///
/// `Soft`, `Adaptive`, and `Modular` are reserved tags: they parse so that
/// documents using them are understood, but validation rejects them as
/// unsupported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingChoice {
    Hard,
    Branched(BranchedSpec),
    Cross(CrossSpec),
    Soft,
    Adaptive,
    Modular,
}

impl SharingChoice {
    /// Stable label used in quality tables, CLI flags, and reports.
    pub fn label(&self) -> String {
        match self {
            SharingChoice::Hard => "hard".to_string(),
            SharingChoice::Branched(b) => format!("branched@{}", b.split),
            SharingChoice::Cross(c) => format!("cross@{}", c.split),
            SharingChoice::Soft => "soft".to_string(),
            SharingChoice::Adaptive => "adaptive".to_string(),
            SharingChoice::Modular => "modular".to_string(),
        }
    }

    fn supported(&self) -> bool {
        matches!(
            self,
            SharingChoice::Hard | SharingChoice::Branched(_) | SharingChoice::Cross(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FusionDepthDecision {
    pub id: String,
    /// Candidate block indices at which the modality branches concatenate.
    pub choices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SharingDecision {
    pub id: String,
    pub choices: Vec<SharingChoice>,
}

/// One architectural decision. A space holds at most one of each kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionPoint {
    FusionDepth(FusionDepthDecision),
    SharingScheme(SharingDecision),
}

impl DecisionPoint {
    pub fn id(&self) -> &str {
        match self {
            DecisionPoint::FusionDepth(d) => &d.id,
            DecisionPoint::SharingScheme(d) => &d.id,
        }
    }

    pub fn choice_count(&self) -> usize {
        match self {
            DecisionPoint::FusionDepth(d) => d.choices.len(),
            DecisionPoint::SharingScheme(d) => d.choices.len(),
        }
    }

    /// Label of choice `index`, used to address variants in files and flags.
    pub fn choice_label(&self, index: usize) -> String {
        match self {
            DecisionPoint::FusionDepth(d) => d.choices[index].to_string(),
            DecisionPoint::SharingScheme(d) => d.choices[index].label(),
        }
    }
}

/// Quality table entry for one variant, keyed by its choice labels in
/// decision-point order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantQuality {
    pub alpha: Vec<String>,
    pub quality: QualityRecord,
}

/// A family of model variants over one template.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureSpace {
    pub modalities: Vec<ModalitySpec>,
    pub fusion: StageSpec,
    pub blocks: Vec<StageSpec>,
    pub heads: Vec<HeadSpec>,
    /// Fusion depth used when no fusion-depth decision point exists.
    #[serde(default)]
    pub fusion_depth: usize,
    /// Sharing scheme used when no sharing decision point exists.
    #[serde(default = "default_sharing")]
    pub sharing: SharingChoice,
    #[serde(default)]
    pub decision_points: Vec<DecisionPoint>,
    pub quality: Vec<VariantQuality>,
}

fn default_sharing() -> SharingChoice {
    SharingChoice::Hard
}

impl ArchitectureSpace {
    /// Product of choice-list sizes; 1 for a space with no decisions.
    pub fn variant_count(&self) -> u128 {
        self.decision_points
            .iter()
            .map(|d| d.choice_count() as u128)
            .product()
    }

    /// All choice vectors in lexicographic order (first decision slowest).
    pub fn alphas(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for d in &self.decision_points {
            let mut next = Vec::with_capacity(out.len() * d.choice_count());
            for prefix in &out {
                for c in 0..d.choice_count() {
                    let mut a = prefix.clone();
                    a.push(c);
                    next.push(a);
                }
            }
            out = next;
        }
        out
    }

    /// Choice labels for `alpha`, keyed by decision id.
    pub fn alpha_labels(&self, alpha: &[usize]) -> Result<BTreeMap<String, String>> {
        self.check_alpha(alpha)?;
        Ok(self
            .decision_points
            .iter()
            .zip(alpha)
            .map(|(d, &c)| (d.id().to_string(), d.choice_label(c)))
            .collect())
    }

    /// Resolves a label vector (quality-table or CLI form) to choice indices.
    pub fn alpha_from_labels(&self, labels: &[String]) -> Result<Vec<usize>> {
        if labels.len() != self.decision_points.len() {
            return Err(Error::AlphaLength {
                expected: self.decision_points.len(),
                got: labels.len(),
            });
        }
        self.decision_points
            .iter()
            .zip(labels)
            .map(|(d, label)| {
                (0..d.choice_count())
                    .find(|&c| d.choice_label(c) == *label)
                    .ok_or_else(|| Error::UnknownChoiceLabel {
                        decision: d.id().to_string(),
                        label: label.clone(),
                    })
            })
            .collect()
    }

    fn check_alpha(&self, alpha: &[usize]) -> Result<()> {
        if alpha.len() != self.decision_points.len() {
            return Err(Error::AlphaLength {
                expected: self.decision_points.len(),
                got: alpha.len(),
            });
        }
        for (index, (d, &c)) in self.decision_points.iter().zip(alpha).enumerate() {
            if c >= d.choice_count() {
                return Err(Error::AlphaOutOfRange {
                    index,
                    decision: d.id().to_string(),
                    got: c,
                    available: d.choice_count(),
                });
            }
        }
        Ok(())
    }

    /// Fusion depth and sharing scheme selected by `alpha`.
    fn resolve(&self, alpha: &[usize]) -> Result<(usize, SharingChoice)> {
        self.check_alpha(alpha)?;
        let mut depth = self.fusion_depth;
        let mut sharing = self.sharing.clone();
        for (d, &c) in self.decision_points.iter().zip(alpha) {
            match d {
                DecisionPoint::FusionDepth(f) => depth = f.choices[c],
                DecisionPoint::SharingScheme(s) => sharing = s.choices[c].clone(),
            }
        }
        Ok((depth, sharing))
    }

    /// Quality record for `alpha` from the per-variant table.
    pub fn quality_of(&self, alpha: &[usize]) -> Result<&QualityRecord> {
        self.check_alpha(alpha)?;
        let labels: Vec<String> = self
            .decision_points
            .iter()
            .zip(alpha)
            .map(|(d, &c)| d.choice_label(c))
            .collect();
        self.quality
            .iter()
            .find(|v| v.alpha == labels)
            .map(|v| &v.quality)
            .ok_or_else(|| Error::Semantic {
                message: format!("no quality entry for variant [{}]", labels.join(", ")),
            })
    }

    /// Structural checks on the space itself; per-variant graph validity is
    /// checked by `validate_variants`.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let blocks = self.blocks.len();

        if self.modalities.is_empty() {
            issues.push("space declares no modalities".to_string());
        }
        if self.heads.is_empty() {
            issues.push("space declares no heads".to_string());
        }
        for (name, value) in self
            .modalities
            .iter()
            .flat_map(|m| {
                [
                    (format!("modality `{}` work", m.id), m.work),
                    (format!("modality `{}` volume", m.id), m.volume),
                ]
            })
            .chain([
                ("fusion work".to_string(), self.fusion.work),
                ("fusion volume".to_string(), self.fusion.volume),
            ])
            .chain(self.blocks.iter().enumerate().flat_map(|(i, b)| {
                [
                    (format!("block {i} work"), b.work),
                    (format!("block {i} volume"), b.volume),
                ]
            }))
            .chain(self.heads.iter().map(|h| (format!("head `{}` work", h.id), h.work)))
        {
            if !(value >= 0.0 && value.is_finite()) {
                issues.push(format!("{name} must be >= 0 and finite, got {value}"));
            }
        }

        let mut fusion_points = 0;
        let mut sharing_points = 0;
        for d in &self.decision_points {
            match d {
                DecisionPoint::FusionDepth(f) => {
                    fusion_points += 1;
                    if f.choices.is_empty() {
                        issues.push(format!("decision `{}` has an empty choice list", f.id));
                    }
                    for &c in &f.choices {
                        if c > blocks {
                            issues.push(format!(
                                "decision `{}`: fusion depth {c} exceeds block count {blocks}",
                                f.id
                            ));
                        }
                    }
                }
                DecisionPoint::SharingScheme(s) => {
                    sharing_points += 1;
                    if s.choices.is_empty() {
                        issues.push(format!("decision `{}` has an empty choice list", s.id));
                    }
                    for c in &s.choices {
                        if !c.supported() {
                            issues.push(
                                Error::UnsupportedScheme {
                                    decision: s.id.clone(),
                                    scheme: c.label(),
                                }
                                .to_string(),
                            );
                        }
                        if let Some(split) = sharing_split(c) {
                            if split > blocks {
                                issues.push(format!(
                                    "decision `{}`: split {split} exceeds block count {blocks}",
                                    s.id
                                ));
                            }
                        }
                        if let SharingChoice::Cross(cr) = c {
                            for (name, v) in [
                                ("extra_volume", cr.extra_volume),
                                ("extra_work", cr.extra_work),
                            ] {
                                if !(v >= 0.0 && v.is_finite()) {
                                    issues.push(format!(
                                        "decision `{}`: {name} must be >= 0 and finite, got {v}",
                                        s.id
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        if fusion_points > 1 {
            issues.push("at most one fusion_depth decision point is allowed".to_string());
        }
        if sharing_points > 1 {
            issues.push("at most one sharing_scheme decision point is allowed".to_string());
        }
        if !self.sharing.supported() {
            issues.push(
                Error::UnsupportedScheme {
                    decision: "default sharing".to_string(),
                    scheme: self.sharing.label(),
                }
                .to_string(),
            );
        }
        if self.fusion_depth > blocks {
            issues.push(format!(
                "default fusion depth {} exceeds block count {blocks}",
                self.fusion_depth
            ));
        }

        // Every (fusion depth, split) combination must be realizable: blocks
        // can only branch per output after the modalities have fused.
        if issues.is_empty() {
            for alpha in self.alphas() {
                let (depth, sharing) = self.resolve(&alpha).expect("alpha from alphas()");
                if let Some(split) = sharing_split(&sharing) {
                    if split < depth {
                        issues.push(format!(
                            "variant [{}]: split {split} precedes fusion depth {depth}",
                            self.labels_of(&alpha).join(", ")
                        ));
                    }
                }
            }
        }

        // Quality table must cover every variant exactly once with matching keys.
        let mut seen: BTreeMap<Vec<String>, usize> = BTreeMap::new();
        for v in &self.quality {
            *seen.entry(v.alpha.clone()).or_insert(0) += 1;
        }
        for alpha in self.alphas() {
            let labels = self.labels_of(&alpha);
            match seen.get(&labels) {
                None => issues.push(format!(
                    "quality table has no entry for variant [{}]",
                    labels.join(", ")
                )),
                Some(1) => {}
                Some(n) => issues.push(format!(
                    "quality table has {n} entries for variant [{}]",
                    labels.join(", ")
                )),
            }
        }
        let valid_labels: Vec<Vec<String>> =
            self.alphas().iter().map(|a| self.labels_of(a)).collect();
        for v in &self.quality {
            if !valid_labels.contains(&v.alpha) {
                issues.push(format!(
                    "quality table entry [{}] matches no variant",
                    v.alpha.join(", ")
                ));
            }
        }

        issues
    }

    fn labels_of(&self, alpha: &[usize]) -> Vec<String> {
        self.decision_points
            .iter()
            .zip(alpha)
            .map(|(d, &c)| d.choice_label(c))
            .collect()
    }

    /// Choice labels for `alpha` in decision order, after bounds checks.
    pub fn choice_labels(&self, alpha: &[usize]) -> Result<Vec<String>> {
        self.check_alpha(alpha)?;
        Ok(self.labels_of(alpha))
    }
}

fn sharing_split(choice: &SharingChoice) -> Option<usize> {
    match choice {
        SharingChoice::Branched(b) => Some(b.split),
        SharingChoice::Cross(c) => Some(c.split),
        _ => None,
    }
}

/// Expands choice vector `alpha` into the concrete graph variant and its
/// quality record. Deterministic: the same alpha always yields the same graph.
pub fn apply_architecture(
    space: &ArchitectureSpace,
    alpha: &[usize],
) -> Result<(ModelGraph, QualityRecord)> {
    let (depth, sharing) = space.resolve(alpha)?;
    let blocks = space.blocks.len();
    if depth > blocks {
        return Err(Error::Semantic {
            message: format!("fusion depth {depth} exceeds block count {blocks}"),
        });
    }
    let (split, cross) = match &sharing {
        SharingChoice::Hard => (blocks, None),
        SharingChoice::Branched(b) => (b.split, None),
        SharingChoice::Cross(c) => (c.split, Some(c.clone())),
        other => {
            return Err(Error::UnsupportedScheme {
                decision: "sharing".to_string(),
                scheme: other.label(),
            })
        }
    };
    if split > blocks || split < depth {
        return Err(Error::Semantic {
            message: format!(
                "split {split} must lie between fusion depth {depth} and block count {blocks}"
            ),
        });
    }

    let mut components = Vec::new();
    let mut edges = Vec::new();
    let mut modalities = BTreeMap::new();
    let mut sinks = BTreeMap::new();

    // Per-modality entry nets plus pre-fusion block copies, chained into fusion.
    let mut fusion_feeds: Vec<(String, f64)> = Vec::new();
    for m in &space.modalities {
        let net_id = format!("{}_net", m.id);
        components.push(Component {
            id: net_id.clone(),
            kind: ComponentKind::ModalityNet,
            work: m.work,
        });
        modalities.insert(m.id.clone(), net_id.clone());
        let mut prev = (net_id, m.volume);
        for (j, b) in space.blocks[..depth].iter().enumerate() {
            let id = format!("{}_blk{j}", m.id);
            components.push(Component {
                id: id.clone(),
                kind: ComponentKind::ModalityNet,
                work: b.work,
            });
            edges.push(Edge {
                src: prev.0,
                dst: id.clone(),
                volume: prev.1,
            });
            prev = (id, b.volume);
        }
        fusion_feeds.push(prev);
    }

    components.push(Component {
        id: "fusion".to_string(),
        kind: ComponentKind::Fusion,
        work: space.fusion.work,
    });
    for (src, volume) in fusion_feeds {
        edges.push(Edge {
            src,
            dst: "fusion".to_string(),
            volume,
        });
    }

    // Shared trunk: blocks depth..split.
    let mut trunk = ("fusion".to_string(), space.fusion.volume);
    for (j, b) in space.blocks.iter().enumerate().take(split).skip(depth) {
        let id = format!("blk{j}");
        components.push(Component {
            id: id.clone(),
            kind: ComponentKind::SharedBackbone,
            work: b.work,
        });
        edges.push(Edge {
            src: trunk.0,
            dst: id.clone(),
            volume: trunk.1,
        });
        trunk = (id, b.volume);
    }

    // Per-output branches: blocks split..blocks, then the head.
    let cross_volume = cross.as_ref().map(|c| c.extra_volume).unwrap_or(0.0);
    let cross_work = cross.as_ref().map(|c| c.extra_work).unwrap_or(0.0);
    let branched_levels = blocks - split;
    for h in &space.heads {
        let mut prev = trunk.clone();
        for (j, b) in space.blocks.iter().enumerate().skip(split) {
            let id = format!("{}_blk{j}", h.id);
            // Blocks after the first duplicated level receive cross edges and
            // carry the declared combination work.
            let receives_cross = cross.is_some() && j > split;
            components.push(Component {
                id: id.clone(),
                kind: ComponentKind::SharedBackbone,
                work: b.work + if receives_cross { cross_work } else { 0.0 },
            });
            edges.push(Edge {
                src: prev.0,
                dst: id.clone(),
                volume: prev.1,
            });
            if receives_cross {
                for other in &space.heads {
                    if other.id != h.id {
                        edges.push(Edge {
                            src: format!("{}_blk{}", other.id, j - 1),
                            dst: id.clone(),
                            volume: cross_volume,
                        });
                    }
                }
            }
            prev = (id, b.volume);
        }
        let head_id = format!("{}_head", h.id);
        let receives_cross = cross.is_some() && branched_levels > 0;
        components.push(Component {
            id: head_id.clone(),
            kind: match h.kind {
                SinkKind::Task => ComponentKind::TaskHead,
                SinkKind::Control => ComponentKind::ControlHead,
            },
            work: h.work + if receives_cross { cross_work } else { 0.0 },
        });
        edges.push(Edge {
            src: prev.0,
            dst: head_id.clone(),
            volume: prev.1,
        });
        if receives_cross {
            for other in &space.heads {
                if other.id != h.id {
                    edges.push(Edge {
                        src: format!("{}_blk{}", other.id, blocks - 1),
                        dst: head_id.clone(),
                        volume: cross_volume,
                    });
                }
            }
        }
        sinks.insert(
            h.id.clone(),
            Sink {
                component: head_id,
                kind: h.kind,
            },
        );
    }

    let graph = ModelGraph {
        components,
        edges,
        modalities,
        sinks,
    };
    let quality = space.quality_of(alpha)?.clone();
    Ok((graph, quality))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::graph::validate_graph;

    pub(crate) fn demo_space() -> ArchitectureSpace {
        let quality = |alpha: &[&str], t0: f64, k0: f64| VariantQuality {
            alpha: alpha.iter().map(|s| s.to_string()).collect(),
            quality: QualityRecord {
                control_losses: [("K0".to_string(), k0)].into(),
                task_losses: [("T0".to_string(), t0)].into(),
            },
        };
        ArchitectureSpace {
            modalities: vec![
                ModalitySpec {
                    id: "M0".into(),
                    work: 4.0,
                    volume: 8.0,
                },
                ModalitySpec {
                    id: "M1".into(),
                    work: 2.0,
                    volume: 8.0,
                },
            ],
            fusion: StageSpec {
                work: 6.0,
                volume: 4.0,
            },
            blocks: vec![
                StageSpec {
                    work: 5.0,
                    volume: 4.0,
                },
                StageSpec {
                    work: 5.0,
                    volume: 4.0,
                },
            ],
            heads: vec![
                HeadSpec {
                    id: "T0".into(),
                    kind: SinkKind::Task,
                    work: 2.0,
                },
                HeadSpec {
                    id: "K0".into(),
                    kind: SinkKind::Control,
                    work: 2.0,
                },
            ],
            fusion_depth: 0,
            sharing: SharingChoice::Hard,
            decision_points: vec![DecisionPoint::SharingScheme(SharingDecision {
                id: "share".into(),
                choices: vec![
                    SharingChoice::Hard,
                    SharingChoice::Branched(BranchedSpec { split: 1 }),
                    SharingChoice::Cross(CrossSpec {
                        split: 1,
                        extra_volume: 2.0,
                        extra_work: 1.0,
                    }),
                ],
            })],
            quality: vec![
                quality(&["hard"], 0.6, 0.5),
                quality(&["branched@1"], 0.3, 0.4),
                quality(&["cross@1"], 0.2, 0.3),
            ],
        }
    }

    fn total_work(g: &ModelGraph) -> f64 {
        g.components.iter().map(|c| c.work).sum()
    }

    #[test]
    fn space_validates() {
        assert!(demo_space().validate().is_empty(), "{:?}", demo_space().validate());
    }

    #[test]
    fn hard_variant_shares_one_trunk() {
        let space = demo_space();
        let (g, _) = apply_architecture(&space, &[0]).unwrap();
        assert!(validate_graph(&g).is_ok(), "{:?}", validate_graph(&g));
        // Single shared copy of both blocks feeding both heads.
        assert!(g.component("blk0").is_some());
        assert!(g.component("blk1").is_some());
        assert!(g.component("T0_blk1").is_none());
        assert_eq!(g.sinks.len(), 2);
    }

    #[test]
    fn branched_variant_duplicates_blocks_and_adds_work() {
        let space = demo_space();
        let (hard, _) = apply_architecture(&space, &[0]).unwrap();
        let (branched, _) = apply_architecture(&space, &[1]).unwrap();
        assert!(validate_graph(&branched).is_ok());
        assert!(branched.component("blk0").is_some());
        assert!(branched.component("T0_blk1").is_some());
        assert!(branched.component("K0_blk1").is_some());
        assert!(
            total_work(&branched) > total_work(&hard),
            "duplication must add work: {} vs {}",
            total_work(&branched),
            total_work(&hard)
        );
    }

    #[test]
    fn cross_variant_adds_edges_over_branched() {
        let space = demo_space();
        let (branched, _) = apply_architecture(&space, &[1]).unwrap();
        let (cross, _) = apply_architecture(&space, &[2]).unwrap();
        assert!(validate_graph(&cross).is_ok(), "{:?}", validate_graph(&cross));
        assert!(cross.edges.len() > branched.edges.len());
        assert!(total_work(&cross) >= total_work(&branched));
        let cross_edge = cross
            .edges
            .iter()
            .find(|e| e.src == "K0_blk1" && e.dst == "T0_head")
            .expect("sibling branch must feed the other head");
        assert_eq!(cross_edge.volume, 2.0);
    }

    #[test]
    fn work_ordering_holds_across_variants() {
        let space = demo_space();
        let works: Vec<f64> = (0..3)
            .map(|c| total_work(&apply_architecture(&space, &[c]).unwrap().0))
            .collect();
        assert!(works[0] <= works[1] && works[1] <= works[2], "{works:?}");
    }

    #[test]
    fn apply_is_deterministic() {
        let space = demo_space();
        let (g1, q1) = apply_architecture(&space, &[2]).unwrap();
        let (g2, q2) = apply_architecture(&space, &[2]).unwrap();
        assert_eq!(g1, g2);
        assert_eq!(q1, q2);
    }

    #[test]
    fn fusion_depth_moves_the_concat_point() {
        let mut space = demo_space();
        space.decision_points = vec![
            DecisionPoint::FusionDepth(FusionDepthDecision {
                id: "fuse".into(),
                choices: vec![0, 2],
            }),
            DecisionPoint::SharingScheme(SharingDecision {
                id: "share".into(),
                choices: vec![SharingChoice::Branched(BranchedSpec { split: 2 })],
            }),
        ];
        space.quality = vec![
            VariantQuality {
                alpha: vec!["0".into(), "branched@2".into()],
                quality: space.quality[0].quality.clone(),
            },
            VariantQuality {
                alpha: vec!["2".into(), "branched@2".into()],
                quality: space.quality[0].quality.clone(),
            },
        ];
        assert!(space.validate().is_empty(), "{:?}", space.validate());

        let (early, _) = apply_architecture(&space, &[0, 0]).unwrap();
        assert!(early.component("blk0").is_some(), "early fusion shares blocks");
        let (late, _) = apply_architecture(&space, &[1, 0]).unwrap();
        assert!(late.component("M0_blk0").is_some(), "late fusion duplicates per modality");
        assert!(late.component("blk0").is_none());
        assert!(validate_graph(&early).is_ok());
        assert!(validate_graph(&late).is_ok());
        // Late fusion duplicates pre-fusion blocks across two modalities.
        assert!(total_work(&late) > total_work(&early));
    }

    #[test]
    fn split_before_fusion_is_rejected() {
        let mut space = demo_space();
        space.fusion_depth = 2;
        // Default depth 2 with branched split 1 cannot be realized.
        let issues = space.validate();
        assert!(
            issues.iter().any(|s| s.contains("precedes fusion depth")),
            "{issues:?}"
        );
    }

    #[test]
    fn reserved_schemes_are_rejected() {
        let mut space = demo_space();
        if let DecisionPoint::SharingScheme(s) = &mut space.decision_points[0] {
            s.choices.push(SharingChoice::Soft);
        }
        let issues = space.validate();
        assert!(issues.iter().any(|s| s.contains("unsupported")), "{issues:?}");
    }

    #[test]
    fn quality_table_must_cover_every_variant() {
        let mut space = demo_space();
        space.quality.pop();
        let issues = space.validate();
        assert!(issues.iter().any(|s| s.contains("has no entry")), "{issues:?}");
    }

    #[test]
    fn alpha_errors_name_the_problem() {
        let space = demo_space();
        assert!(matches!(
            apply_architecture(&space, &[]),
            Err(Error::AlphaLength { expected: 1, got: 0 })
        ));
        assert!(matches!(
            apply_architecture(&space, &[7]),
            Err(Error::AlphaOutOfRange { got: 7, .. })
        ));
    }

    #[test]
    fn labels_round_trip() {
        let space = demo_space();
        let alpha = space
            .alpha_from_labels(&["branched@1".to_string()])
            .unwrap();
        assert_eq!(alpha, vec![1]);
        let labels = space.alpha_labels(&alpha).unwrap();
        assert_eq!(labels["share"], "branched@1");
    }
}
