//! A complete mechanism: one policy per family, with its canonical string form.
//!
//! Grammar: six components joined by `+`, in the order M, Q, A, C, P, G.
//! Each component is a policy token optionally followed by a parenthesised,
//! comma-separated parameter list, e.g.
//!
//! ```text
//! MV + QO + AH(tau=0.4) + CP(p=0.3) + PN(n=11) + GF(fp=0.1)
//! ```
//!
//! A single-parameter policy also accepts a bare positional value, so
//! `GF(0.1)` and `GF(fp=0.1)` are equivalent. Printing always produces the
//! keyed form.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GenomeError;
use crate::policies::{
    Accepting, Charging, Clearing, Family, FeeSchedule, Matching, Pricing, Quoting, RangeViolation, SideFilter,
    DEFAULT_SPREAD,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MechanismGenome {
    pub matching: Matching,
    pub quoting: Quoting,
    pub accepting: Accepting,
    pub clearing: Clearing,
    pub pricing: Pricing,
    pub charging: Charging,
}

impl MechanismGenome {
    pub fn validate(&self) -> Result<(), GenomeError> {
        let wrap = |policy: String, r: Result<(), RangeViolation>| {
            r.map_err(|(param, value)| GenomeError::OutOfRange { policy, param, value })
        };
        wrap(self.matching.to_string(), self.matching.check())?;
        wrap(self.quoting.to_string(), self.quoting.check())?;
        wrap(self.accepting.to_string(), self.accepting.check())?;
        wrap(self.clearing.to_string(), self.clearing.check())?;
        wrap(self.pricing.to_string(), self.pricing.check())?;
        wrap(self.charging.to_string(), self.charging.check())?;
        Ok(())
    }

    /// Canonical string; equal genomes have equal keys.
    pub fn key(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for MechanismGenome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {} + {} + {} + {} + {}",
            self.matching, self.quoting, self.accepting, self.clearing, self.pricing, self.charging
        )
    }
}

impl Serialize for MechanismGenome {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MechanismGenome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One parsed component: `NAME(key=value, ...)`.
struct Component<'a> {
    text: &'a str,
    name: String,
    args: Vec<(Option<String>, String)>,
}

impl<'a> Component<'a> {
    fn parse(text: &'a str) -> Result<Self, GenomeError> {
        let text = text.trim();
        let (name, rest) = match text.find('(') {
            Some(i) => (&text[..i], Some(&text[i + 1..])),
            None => (text, None),
        };
        let name = name.trim().to_ascii_uppercase();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(GenomeError::Malformed(text.to_string()));
        }
        let mut args = Vec::new();
        if let Some(rest) = rest {
            let inner = rest.strip_suffix(')').ok_or_else(|| GenomeError::Malformed(text.to_string()))?;
            for raw in inner.split(',').map(str::trim).filter(|a| !a.is_empty()) {
                match raw.split_once('=') {
                    Some((k, v)) => args.push((Some(k.trim().to_ascii_lowercase()), v.trim().to_string())),
                    None => args.push((None, raw.to_string())),
                }
            }
        }
        Ok(Component { text, name, args })
    }

    /// Resolves arguments against the policy's parameter names.
    fn bind(&self, names: &[&'static str]) -> Result<Vec<Option<String>>, GenomeError> {
        let mut values: Vec<Option<String>> = vec![None; names.len()];
        for (i, (key, value)) in self.args.iter().enumerate() {
            let slot = match key {
                Some(k) => names
                    .iter()
                    .position(|n| n == k || alias(n) == Some(k.as_str()))
                    .ok_or_else(|| GenomeError::UnknownParam { policy: self.name.clone(), param: k.clone() })?,
                None if names.len() == 1 && self.args.len() == 1 => 0,
                None if i < names.len() => i,
                None => return Err(GenomeError::Malformed(self.text.to_string())),
            };
            values[slot] = Some(value.clone());
        }
        Ok(values)
    }

    fn number(&self, names: &[&'static str], values: &[Option<String>], idx: usize, default: Option<f64>) -> Result<f64, GenomeError> {
        match &values[idx] {
            Some(v) => v.parse::<f64>().map_err(|_| GenomeError::Malformed(self.text.to_string())),
            None => default.ok_or(GenomeError::MissingParam { policy: self.name.clone(), param: names[idx] }),
        }
    }

    fn count(&self, names: &[&'static str], values: &[Option<String>], idx: usize) -> Result<usize, GenomeError> {
        let x = self.number(names, values, idx, None)?;
        if x.fract() != 0.0 || x < 0.0 {
            return Err(GenomeError::OutOfRange { policy: self.name.clone(), param: names[idx], value: x });
        }
        Ok(x as usize)
    }

    fn no_args(&self) -> Result<(), GenomeError> {
        if self.args.is_empty() {
            Ok(())
        } else {
            Err(GenomeError::Malformed(self.text.to_string()))
        }
    }
}

fn alias(name: &str) -> Option<&'static str> {
    match name {
        "theta" => Some("θ"),
        "tau" => Some("τ"),
        "delta" => Some("δ"),
        "r" => Some("rate"),
        _ => None,
    }
}

fn family_of(name: &str) -> Option<Family> {
    Some(match name {
        "ME" | "MV" | "MT" => Family::Matching,
        "QT" | "QO" | "QS" => Family::Quoting,
        "AA" | "AN" | "AQ" | "AS" | "AE" | "AD" | "AH" | "AT" | "AY" => Family::Accepting,
        "CC" | "CR" | "CP" => Family::Clearing,
        "PD" | "PU" | "PN" | "PB" => Family::Pricing,
        "GF" | "GB" | "GC" | "GL" => Family::Charging,
        _ => return None,
    })
}

const FEE_KEYS: [&str; 5] = ["fr", "fi", "fs", "ft", "fp"];
const DEFAULT_PROFIT_FEE: f64 = 0.1;

fn parse_fees(c: &Component<'_>, leading: &[&'static str]) -> Result<(Vec<f64>, FeeSchedule), GenomeError> {
    let mut names: Vec<&'static str> = leading.to_vec();
    names.extend(FEE_KEYS);
    // positional arguments for charging policies address only the profit fee
    // when the policy has no other parameters (e.g. GF(0.1))
    let values = if leading.is_empty() && c.args.len() == 1 && c.args[0].0.is_none() {
        let mut v = vec![None; names.len()];
        v[names.len() - 1] = Some(c.args[0].1.clone());
        v
    } else {
        c.bind(&names)?
    };
    let mut lead = Vec::new();
    for i in 0..leading.len() {
        lead.push(c.number(&names, &values, i, None)?);
    }
    let o = leading.len();
    let fees = FeeSchedule {
        registration: c.number(&names, &values, o, Some(0.0))?,
        information: c.number(&names, &values, o + 1, Some(0.0))?,
        shout: c.number(&names, &values, o + 2, Some(0.0))?,
        transaction: c.number(&names, &values, o + 3, Some(0.0))?,
        profit: c.number(&names, &values, o + 4, Some(DEFAULT_PROFIT_FEE))?,
    };
    Ok((lead, fees))
}

fn parse_matching(c: &Component<'_>) -> Result<Matching, GenomeError> {
    Ok(match c.name.as_str() {
        "ME" => c.no_args().map(|_| Matching::Equilibrium)?,
        "MV" => c.no_args().map(|_| Matching::MaxVolume)?,
        _ => {
            let names = ["theta"];
            let v = c.bind(&names)?;
            Matching::Theta { theta: c.number(&names, &v, 0, None)? }
        }
    })
}

fn parse_quoting(c: &Component<'_>) -> Result<Quoting, GenomeError> {
    Ok(match c.name.as_str() {
        "QT" => c.no_args().map(|_| Quoting::TwoSided)?,
        "QO" => c.no_args().map(|_| Quoting::OneSided)?,
        _ => {
            let names = ["spread"];
            let v = c.bind(&names)?;
            Quoting::Spread { spread: c.number(&names, &v, 0, Some(DEFAULT_SPREAD))? }
        }
    })
}

fn parse_accepting(c: &Component<'_>) -> Result<Accepting, GenomeError> {
    Ok(match c.name.as_str() {
        "AA" => c.no_args().map(|_| Accepting::Always)?,
        "AN" => c.no_args().map(|_| Accepting::Never)?,
        "AQ" => c.no_args().map(|_| Accepting::QuoteBeating)?,
        "AS" => c.no_args().map(|_| Accepting::SelfBeating)?,
        "AE" => {
            let names = ["w", "delta"];
            let v = c.bind(&names)?;
            Accepting::EquilibriumBeating { window: c.count(&names, &v, 0)?, delta: c.number(&names, &v, 1, None)? }
        }
        "AD" => {
            let names = ["w"];
            let v = c.bind(&names)?;
            Accepting::DeviationBeating { window: c.count(&names, &v, 0)? }
        }
        "AH" => {
            let names = ["tau"];
            let v = c.bind(&names)?;
            Accepting::HistoryBased { tau: c.number(&names, &v, 0, None)? }
        }
        "AT" => {
            let names = ["w"];
            let v = c.bind(&names)?;
            Accepting::TransactionBased { window: c.count(&names, &v, 0)? }
        }
        _ => {
            let names = ["side"];
            let v = c.bind(&names)?;
            let side = match &v[0] {
                None => SideFilter::Both,
                Some(s) => SideFilter::from_token(s).ok_or_else(|| GenomeError::Malformed(c.text.to_string()))?,
            };
            Accepting::SideBased { side }
        }
    })
}

fn parse_clearing(c: &Component<'_>) -> Result<Clearing, GenomeError> {
    Ok(match c.name.as_str() {
        "CC" => c.no_args().map(|_| Clearing::Continuous)?,
        "CR" => c.no_args().map(|_| Clearing::Round)?,
        _ => {
            let names = ["p"];
            let v = c.bind(&names)?;
            Clearing::Probabilistic { p: c.number(&names, &v, 0, None)? }
        }
    })
}

fn parse_pricing(c: &Component<'_>) -> Result<Pricing, GenomeError> {
    Ok(match c.name.as_str() {
        "PD" | "PU" => {
            let names = ["k"];
            let v = c.bind(&names)?;
            let k = c.number(&names, &v, 0, None)?;
            if c.name == "PD" {
                Pricing::Discriminatory { k }
            } else {
                Pricing::Uniform { k }
            }
        }
        "PN" => {
            let names = ["n"];
            let v = c.bind(&names)?;
            Pricing::NPricing { n: c.count(&names, &v, 0)? }
        }
        _ => c.no_args().map(|_| Pricing::SideBiased)?,
    })
}

fn parse_charging(c: &Component<'_>) -> Result<Charging, GenomeError> {
    Ok(match c.name.as_str() {
        "GF" => Charging::Fixed { fees: parse_fees(c, &[])?.1 },
        "GB" => Charging::BaitAndSwitch { fees: parse_fees(c, &[])?.1 },
        "GC" => {
            let (lead, fees) = parse_fees(c, &["scale"])?;
            Charging::ChargeCutting { scale: lead[0], fees }
        }
        _ => {
            let (lead, fees) = parse_fees(c, &["r", "tau"])?;
            Charging::LearnOrLure { rate: lead[0], tau: lead[1], fees }
        }
    })
}

impl FromStr for MechanismGenome {
    type Err = GenomeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().is_empty() {
            return Err(GenomeError::Empty);
        }
        let parts: Vec<&str> = s.split('+').collect();
        if parts.len() != Family::ALL.len() {
            return Err(GenomeError::ComponentCount(parts.len()));
        }
        let comps = parts.iter().map(|p| Component::parse(p)).collect::<Result<Vec<_>, _>>()?;
        for (c, expected) in comps.iter().zip(Family::ALL) {
            let found = family_of(&c.name).ok_or_else(|| GenomeError::UnknownPolicy(c.name.clone()))?;
            if found != expected {
                return Err(GenomeError::WrongFamily { policy: c.name.clone(), expected: expected.name(), found: found.name() });
            }
        }
        let genome = MechanismGenome {
            matching: parse_matching(&comps[0])?,
            quoting: parse_quoting(&comps[1])?,
            accepting: parse_accepting(&comps[2])?,
            clearing: parse_clearing(&comps[3])?,
            pricing: parse_pricing(&comps[4])?,
            charging: parse_charging(&comps[5])?,
        };
        genome.validate()?;
        Ok(genome)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_listing() {
        let g: MechanismGenome = "MV + QO + AH(tau=0.4) + CP(p=0.3) + PN(n=11) + GF(0.1)".parse().unwrap();
        assert_eq!(g.matching, Matching::MaxVolume);
        assert_eq!(g.quoting, Quoting::OneSided);
        assert_eq!(g.accepting, Accepting::HistoryBased { tau: 0.4 });
        assert_eq!(g.clearing, Clearing::Probabilistic { p: 0.3 });
        assert_eq!(g.pricing, Pricing::NPricing { n: 11 });
        assert_eq!(g.charging, Charging::fixed_profit_fee(0.1));
        assert_eq!(g.to_string(), "MV + QO + AH(tau=0.4) + CP(p=0.3) + PN(n=11) + GF(fp=0.1)");
    }

    #[test]
    fn round_trips_every_policy() {
        let all = [
            "ME + QT + AA + CC + PD(k=0.5) + GF(fp=0)",
            "MT(theta=-0.5) + QS(spread=20) + AE(w=4,delta=10) + CR + PU(k=0.7) + GB(fp=0.2)",
            "MV + QO + AD(w=8) + CP(p=1) + PB + GC(scale=0.8,fp=0.5)",
            "ME + QT + AT(w=16) + CC + PN(n=4) + GL(r=0.1,tau=0.3,fs=1,fp=0.1)",
            "ME + QT + AY(side=ask) + CC + PD(k=0) + GF(fr=2,fi=0.5,ft=1,fp=1)",
            "ME + QT + AN + CC + PD(k=1) + GF(fp=0.1)",
            "ME + QT + AQ + CC + PD(k=1) + GF(fp=0.1)",
            "ME + QT + AS + CC + PD(k=1) + GF(fp=0.1)",
        ];
        for s in all {
            let g: MechanismGenome = s.parse().unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(g.to_string(), s);
            assert_eq!(g.to_string().parse::<MechanismGenome>().unwrap(), g);
        }
    }

    #[test]
    fn lenient_spacing_and_case() {
        let g: MechanismGenome = "me+qt+aq+cr+pu(0.5)+gf(fp = 1.0)".parse().unwrap();
        assert_eq!(g.to_string(), "ME + QT + AQ + CR + PU(k=0.5) + GF(fp=1)");
    }

    #[test]
    fn defaults() {
        let g: MechanismGenome = "MV + QS + AY + CC + PB + GB".parse().unwrap();
        assert_eq!(g.quoting, Quoting::Spread { spread: DEFAULT_SPREAD });
        assert_eq!(g.accepting, Accepting::SideBased { side: SideFilter::Both });
        assert_eq!(g.charging.initial_fees().profit, 0.1);
    }

    #[test]
    fn errors() {
        use GenomeError::*;
        let e = |s: &str| s.parse::<MechanismGenome>().unwrap_err();
        assert_eq!(e(""), Empty);
        assert_eq!(e("ME + QT"), ComponentCount(2));
        assert!(matches!(e("ME + QT + AQ + CR + PX + GF(0.1)"), UnknownPolicy(_)));
        assert!(matches!(e("QT + ME + AQ + CR + PD(k=0.5) + GF(0.1)"), WrongFamily { .. }));
        assert!(matches!(e("MT(theta=2) + QT + AQ + CR + PD(k=0.5) + GF(0.1)"), OutOfRange { .. }));
        assert!(matches!(e("MT + QT + AQ + CR + PD(k=0.5) + GF(0.1)"), MissingParam { .. }));
        assert!(matches!(e("ME + QT + AQ + CR + PD(q=0.5) + GF(0.1)"), UnknownParam { .. }));
        assert!(matches!(e("ME + QT + AQ + CR + PD(k=0.5 + GF(0.1)"), ComponentCount(_) | Malformed(_)));
        assert!(matches!(e("ME + QT + AE(w=2.5,delta=1) + CR + PD(k=0.5) + GF(0.1)"), OutOfRange { .. }));
        assert!(matches!(e("ME(1) + QT + AQ + CR + PD(k=0.5) + GF(0.1)"), Malformed(_)));
        assert!(matches!(e("ME + QT + AQ + CR + PD(k=0.5) + GF(fp=1.5)"), OutOfRange { .. }));
    }
}
