use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::genome::MechanismGenome;
use crate::policies::Charging;
use crate::softmax::{sample_index, softmax};

/// A candidate block under an or-node, with its bandit statistics.
///
/// A policy arm may carry parameter or-nodes, which together form the
/// and-node assembling the parameterized policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arm {
    pub label: String,
    pub quality: f64,
    pub count: u64,
    pub params: Vec<OrNode>,
}

impl Arm {
    fn leaf(label: impl Into<String>) -> Self {
        Arm { label: label.into(), quality: 0.0, count: 0, params: Vec::new() }
    }

    fn with(label: &str, params: Vec<OrNode>) -> Self {
        Arm { params, ..Arm::leaf(label) }
    }

    fn reward(&mut self, score: f64) {
        self.count += 1;
        self.quality += (score - self.quality) / self.count as f64;
    }
}

/// An n-armed bandit choosing one of its children.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrNode {
    pub name: String,
    pub arms: Vec<Arm>,
}

impl OrNode {
    fn new(name: &str, arms: Vec<Arm>) -> Self {
        OrNode { name: name.to_string(), arms }
    }

    fn grid<T: ToString>(name: &str, values: impl IntoIterator<Item = T>) -> Self {
        OrNode::new(name, values.into_iter().map(|v| Arm::leaf(v.to_string())).collect())
    }

    pub fn probabilities(&self, temperature: f64) -> Vec<f64> {
        let q: Vec<f64> = self.arms.iter().map(|a| a.quality).collect();
        softmax(&q, temperature)
    }

    pub fn select<R: Rng + ?Sized>(&self, temperature: f64, rng: &mut R) -> usize {
        sample_index(&self.probabilities(temperature), rng)
    }

    fn arm_mut(&mut self, label: &str) -> Option<&mut Arm> {
        self.arms.iter_mut().find(|a| label_matches(&a.label, label))
    }
}

fn label_matches(arm: &str, value: &str) -> bool {
    match (arm.parse::<f64>(), value.parse::<f64>()) {
        (Ok(a), Ok(b)) => (a - b).abs() < 1e-9,
        _ => arm.eq_ignore_ascii_case(value),
    }
}

fn tenths() -> impl Iterator<Item = f64> {
    (0..=10).map(|i| i as f64 / 10.0)
}

/// The space of mechanisms: an and-node over one or-node per searched
/// family. Charging is held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyTree {
    pub families: Vec<OrNode>,
    pub charging: Charging,
}

impl Default for PolicyTree {
    fn default() -> Self {
        PolicyTree::new(Charging::fixed_profit_fee(0.1))
    }
}

impl PolicyTree {
    pub fn new(charging: Charging) -> Self {
        let window = || OrNode::grid("w", [2, 4, 8, 16]);
        let families = vec![
            OrNode::new(
                "M",
                vec![
                    Arm::leaf("ME"),
                    Arm::leaf("MV"),
                    Arm::with("MT", vec![OrNode::grid("theta", [-1.0, -0.5, 0.0, 0.5, 1.0])]),
                ],
            ),
            OrNode::new("Q", vec![Arm::leaf("QT"), Arm::leaf("QO"), Arm::leaf("QS")]),
            OrNode::new(
                "A",
                vec![
                    Arm::leaf("AA"),
                    Arm::leaf("AN"),
                    Arm::leaf("AQ"),
                    Arm::leaf("AS"),
                    Arm::with("AE", vec![window(), OrNode::grid("delta", [0, 5, 10, 20, 30])]),
                    Arm::with("AD", vec![window()]),
                    Arm::with("AH", vec![OrNode::grid("tau", tenths())]),
                    Arm::with("AT", vec![window()]),
                    Arm::with("AY", vec![OrNode::grid("side", ["ask", "bid", "both"])]),
                ],
            ),
            OrNode::new(
                "C",
                vec![Arm::leaf("CC"), Arm::leaf("CR"), Arm::with("CP", vec![OrNode::grid("p", tenths())])],
            ),
            OrNode::new(
                "P",
                vec![
                    Arm::with("PD", vec![OrNode::grid("k", tenths())]),
                    Arm::with("PU", vec![OrNode::grid("k", tenths())]),
                    Arm::with("PN", vec![OrNode::grid("n", [1, 3, 5, 9, 11])]),
                    Arm::leaf("PB"),
                ],
            ),
        ];
        PolicyTree { families, charging }
    }

    /// Walks the tree top-down, choosing at every or-node by softmax.
    pub fn sample<R: Rng + ?Sized>(&self, temperature: f64, rng: &mut R) -> MechanismGenome {
        let mut parts = Vec::with_capacity(self.families.len() + 1);
        for family in &self.families {
            let arm = &family.arms[family.select(temperature, rng)];
            if arm.params.is_empty() {
                parts.push(arm.label.clone());
                continue;
            }
            let params: Vec<String> = arm
                .params
                .iter()
                .map(|p| format!("{}={}", p.name, p.arms[p.select(temperature, rng)].label))
                .collect();
            parts.push(format!("{}({})", arm.label, params.join(",")));
        }
        parts.push(self.charging.to_string());
        parts.join(" + ").parse().expect("every tree path is a valid genome")
    }

    /// Running-mean update of every block the genome uses.
    ///
    /// Parameter values outside the grids have no block and are skipped.
    pub fn update_block_scores(&mut self, genome: &MechanismGenome, score: f64) {
        let text = genome.to_string();
        for component in text.split(" + ") {
            let (token, params) = split_component(component);
            let Some(family) = self.families.iter_mut().find(|f| token.starts_with(f.name.as_str())) else {
                continue;
            };
            let Some(arm) = family.arm_mut(token) else { continue };
            arm.reward(score);
            for (key, value) in params {
                if let Some(leaf) = arm.params.iter_mut().find(|p| p.name == key).and_then(|p| p.arm_mut(value)) {
                    leaf.reward(score);
                }
            }
        }
    }

    pub fn family(&self, name: &str) -> Option<&OrNode> {
        self.families.iter().find(|f| f.name == name)
    }
}

/// `AE(w=4,delta=10)` → (`AE`, [(`w`, `4`), (`delta`, `10`)]).
fn split_component(component: &str) -> (&str, Vec<(&str, &str)>) {
    let component = component.trim();
    let Some((token, rest)) = component.split_once('(') else { return (component, Vec::new()) };
    let params = rest
        .trim_end_matches(')')
        .split(',')
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.trim(), v.trim()))
        .collect();
    (token.trim(), params)
}
