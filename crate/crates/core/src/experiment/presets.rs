//! Named mechanisms: the fixed baselines and the evolved examples.

use crate::error::ConfigError;
use crate::genome::MechanismGenome;

pub const PRESETS: &[(&str, &str)] = &[
    ("CH_l", "ME + QT + AQ + CR + PU(k=0.5) + GF(fp=0.1)"),
    ("CH_h", "ME + QT + AQ + CR + PU(k=0.5) + GF(fp=1)"),
    ("CDA_l", "ME + QT + AQ + CC + PD(k=0.5) + GF(fp=0.1)"),
    ("CDA_h", "ME + QT + AQ + CC + PD(k=0.5) + GF(fp=1)"),
    ("CDA", "ME + QT + AQ + CC + PD(k=0.5) + GF(fp=0.1)"),
    ("NCDAEE_d0", "ME + QT + AE(w=4,delta=0) + CC + PN(n=4) + GF(fp=0.1)"),
    ("NCDAEE_d10", "ME + QT + AE(w=4,delta=10) + CC + PN(n=4) + GF(fp=0.1)"),
    ("NCDAEE_d20", "ME + QT + AE(w=4,delta=20) + CC + PN(n=4) + GF(fp=0.1)"),
    ("NCDAEE_d30", "ME + QT + AE(w=4,delta=30) + CC + PN(n=4) + GF(fp=0.1)"),
    ("SM7.1", "MV + QO + AH(tau=0.4) + CP(p=0.3) + PN(n=11) + GF(fp=0.1)"),
    ("SM88.0", "MT(theta=0.4) + QT + AA + CP(p=0.4) + PU(k=0.7) + GF(fp=0.1)"),
    ("SM127.1", "MV + QS + AS + CP(p=0.4) + PU(k=0.7) + GF(fp=0.1)"),
];

/// The four fixed markets every search game includes.
pub const BASELINES: [&str; 4] = ["CH_l", "CH_h", "CDA_l", "CDA_h"];

/// Mechanisms of the isolation table, in row order.
pub const ISOLATION_ROWS: [&str; 8] =
    ["CDA", "NCDAEE_d0", "NCDAEE_d10", "NCDAEE_d20", "NCDAEE_d30", "SM7.1", "SM88.0", "SM127.1"];

pub fn preset(name: &str) -> Result<MechanismGenome, ConfigError> {
    let (_, genome) = PRESETS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))?;
    genome.parse().map_err(|source| ConfigError::Genome { name: name.to_string(), source })
}

/// A preset name or a literal genome string.
pub fn resolve(spec: &str) -> Result<MechanismGenome, ConfigError> {
    match preset(spec) {
        Err(ConfigError::UnknownPreset(_)) if spec.contains('+') => {
            spec.parse().map_err(|source| ConfigError::Genome { name: spec.to_string(), source })
        }
        other => other,
    }
}
