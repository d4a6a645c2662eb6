use super::config::SweepConfig;
use crate::error::{Error, Result};
use crate::noise::PhaseFlipChannel;
use crate::states::{Family, FamilySpec};

/// Samples per random campaign in a preset; full-scale runs override this.
pub const PRESET_SAMPLES: u64 = 2000;

pub const FIGURE_IDS: [&str; 12] = ["2", "3a", "3b", "4a", "4b", "5a", "5b", "5c", "6", "7a", "7b", "7c"];

fn campaign(label: String, spec: FamilySpec) -> SweepConfig {
    let samples = if spec.family.is_random() { PRESET_SAMPLES } else { 1 };
    SweepConfig::new(spec).with_samples(samples).with_label(label)
}

fn markovian(q: f64) -> PhaseFlipChannel {
    PhaseFlipChannel::markovian(q).expect("preset noise strength lies in [0, 1]")
}

/// Exact and Pauli-restricted copies of a campaign.
fn with_pauli(cfg: SweepConfig) -> [SweepConfig; 2] {
    let mut pauli = cfg.clone();
    pauli.pauli_only = true;
    pauli.label = cfg.label.as_ref().map(|l| format!("{l}/pauli"));
    [cfg, pauli]
}

/// Campaigns behind one published scatter plot, at reduced sample count.
pub fn figure_data(id: &str) -> Result<Vec<SweepConfig>> {
    let sector = |nq: usize, n: usize| FamilySpec::new(Family::MagnetizationSector, nq).with_n(n);
    let out = match id {
        "2" => vec![
            campaign("2/symmetric".into(), FamilySpec::new(Family::SymmetricSuperposition, 6)),
            campaign("2/pair_m4".into(), FamilySpec::new(Family::MagnetizationPair, 6).with_n(5)).with_samples(200),
            campaign("2/pair_m2".into(), FamilySpec::new(Family::MagnetizationPair, 6).with_n(4)).with_samples(200),
            campaign("2/dicke_m0".into(), FamilySpec::new(Family::Dicke, 6).with_n(3)),
        ],
        "3a" => vec![
            campaign("3a/gw".into(), FamilySpec::new(Family::Gw, 5)),
            campaign("3a/sector_n2".into(), sector(5, 2)),
        ],
        "3b" => vec![campaign("3b/ghz_class".into(), FamilySpec::new(Family::GhzClass3q, 3))],
        "4a" | "4b" => {
            let nq = if id == "4a" { 4 } else { 6 };
            [
                campaign(format!("{id}/gw"), FamilySpec::new(Family::Gw, nq)).with_n0(1),
                campaign(format!("{id}/sector_n2"), sector(nq, 2)).with_n0(1),
            ]
            .into_iter()
            .flat_map(with_pauli)
            .collect()
        }
        "5a" => {
            let base = [
                campaign("5a/symmetric".into(), FamilySpec::new(Family::SymmetricSuperposition, 4)),
                campaign("5a/pair_m2".into(), FamilySpec::new(Family::MagnetizationPair, 4).with_n(3)).with_samples(200),
                campaign("5a/dicke_m0".into(), FamilySpec::new(Family::Dicke, 4).with_n(2)),
            ];
            let noisy = base.clone().map(|c| {
                let label = format!("{}/q0.2", c.label.as_deref().unwrap_or_default());
                c.with_channel(markovian(0.2)).with_label(label)
            });
            base.into_iter().chain(noisy).collect()
        }
        "5b" => {
            let mut out = Vec::new();
            for nq in 3..=12 {
                let dicke = FamilySpec::new(Family::Dicke, nq).with_n(2);
                out.push(campaign(format!("5b/N{nq}"), dicke.clone()));
                for eta in [0.0, 0.9] {
                    for q in [0.2, 0.4, 1.0] {
                        let ch = PhaseFlipChannel::new(q, eta)?;
                        out.push(campaign(format!("5b/N{nq}/q{q}/eta{eta}"), dicke.clone()).with_channel(ch));
                    }
                }
            }
            out
        }
        "5c" => [(1, vec![1, 3, 4]), (2, vec![1])]
            .into_iter()
            .map(|(n, props)| {
                let mut cfg = campaign(format!("5c/sector_n{n}/q0.2"), sector(4, n)).with_channel(markovian(0.2));
                cfg.propositions = Some(props);
                cfg
            })
            .collect(),
        "6" => (3..=5)
            .flat_map(|nq| {
                let pure = campaign(format!("6/N{nq}"), FamilySpec::new(Family::Haar, nq));
                let noisy = pure.clone().with_channel(markovian(0.2)).with_label(format!("6/N{nq}/q0.2"));
                let [exact, pauli] = with_pauli(noisy);
                [pure, exact, pauli]
            })
            .collect(),
        "7a" | "7b" | "7c" => {
            let nq = match id {
                "7a" => 4,
                "7b" => 5,
                _ => 6,
            };
            with_pauli(campaign(format!("{id}/haar"), FamilySpec::new(Family::Haar, nq))).to_vec()
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown figure `{other}`; expected one of {}",
                FIGURE_IDS.join(", ")
            )))
        }
    };
    Ok(out)
}
