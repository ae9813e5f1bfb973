//! Per-class evidence for one built-in sequence: bounded (automatic),
//! synchronized, strongly recursive, recursive, regular.
//!
//! Every field is finite-scale evidence. Nothing here decides class
//! membership; in particular a missing machine is reported as
//! "not established", never as a refutation.

use serde::Serialize;

use crate::corpus::identities::{g_two_level, ResidueSampling};
use crate::corpus::{CorpusError, OracleSpec, SequenceOracle};
use crate::recsolve::{search, Certificate, RecError, RecursionScheme, SearchBounds, SearchMode};
use crate::syncverify::{
    build_fig2, build_figk, build_identity, build_tm, sync_growth_screen, verify_sync,
    GrowthScreen, SyncDfa,
};

pub const EVIDENCE: &str = "EVIDENCE (finite-scale)";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Rec(#[from] RecError),
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub spec: OracleSpec,
    pub k: u32,
    /// Range for the boundedness check.
    pub n_max: u64,
    /// Range for machine, relation and search verification.
    pub check_n: u64,
    pub max_t: u32,
    pub max_band: u32,
    pub seed: u64,
    /// Depth of the growth screen.
    pub depth: u32,
    pub jobs: usize,
}

impl ReportConfig {
    pub fn new(spec: OracleSpec, k: u32) -> Self {
        ReportConfig {
            spec,
            k,
            n_max: 100_000,
            check_n: 10_000,
            max_t: 3,
            max_band: 8,
            seed: 0,
            depth: 12,
            jobs: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub oracle: String,
    pub k: u32,
    pub label: &'static str,
    pub automatic: Bounded,
    pub synchronized: SyncEvidence,
    pub strongly_recursive: SearchEvidence,
    pub recursive: SearchEvidence,
    pub regular: RegularEvidence,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounded {
    pub evidence: &'static str,
    pub n_max: u64,
    pub min: String,
    pub max: String,
    pub distinct_values: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SyncStatus {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "counterexample")]
    Counterexample,
    #[serde(rename = "not synchronized (growth screen)")]
    NotSynchronized,
    #[serde(rename = "not established")]
    NotEstablished,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyncEvidence {
    pub evidence: &'static str,
    pub status: SyncStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub machine: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_screen: Option<GrowthScreen>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    #[serde(rename = "found")]
    Found,
    #[serde(rename = "exhausted")]
    Exhausted,
    #[serde(rename = "implied by the strong scheme")]
    ImpliedByStrong,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchEvidence {
    pub evidence: &'static str,
    pub status: SearchStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme: Option<RecursionScheme>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RegularStatus {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "counterexample")]
    Counterexample,
    #[serde(rename = "not established")]
    NotEstablished,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularEvidence {
    pub evidence: &'static str,
    pub status: RegularStatus,
    pub detail: String,
}

/// A known machine for the graph of the sequence, if there is one.
pub fn machine_for(spec: &OracleSpec, k: u32) -> Option<SyncDfa> {
    let ell = spec.params.get("ell").copied();
    match spec.name.as_str() {
        "g" if ell == Some(k as i64) && k == 2 => Some(build_fig2()),
        "g" if ell == Some(k as i64) => build_figk(k).ok(),
        "id" | "n" => build_identity(k).ok(),
        "tm" if k == 2 => Some(build_tm()),
        _ => None,
    }
}

fn search_evidence(
    oracle: &dyn SequenceOracle,
    cfg: &ReportConfig,
    mode: SearchMode,
) -> Result<SearchEvidence, RecError> {
    let mut bounds = SearchBounds::new(cfg.k, cfg.max_t, cfg.max_band, mode);
    bounds.verify_max = cfg.check_n;
    let res = search(oracle, bounds)?;
    Ok(SearchEvidence {
        evidence: EVIDENCE,
        status: if res.scheme.is_some() {
            SearchStatus::Found
        } else {
            SearchStatus::Exhausted
        },
        scheme: res.scheme,
        certificate: Some(res.certificate),
    })
}

fn bounded(oracle: &dyn SequenceOracle, n_max: u64) -> Bounded {
    let values = oracle.table(n_max as usize + 1);
    let mut distinct: Vec<_> = values.iter().collect();
    distinct.sort();
    distinct.dedup();
    Bounded {
        evidence: EVIDENCE,
        n_max,
        min: distinct.first().map(|v| v.to_string()).unwrap_or_default(),
        max: distinct.last().map(|v| v.to_string()).unwrap_or_default(),
        distinct_values: distinct.len(),
    }
}

fn sync_evidence(oracle: &dyn SequenceOracle, cfg: &ReportConfig) -> SyncEvidence {
    let base = SyncEvidence {
        evidence: EVIDENCE,
        status: SyncStatus::NotEstablished,
        machine: None,
        certificate: None,
        growth_screen: None,
        detail: None,
    };
    if let Some(dfa) = machine_for(&cfg.spec, cfg.k) {
        let cert = verify_sync(&dfa, oracle, cfg.check_n, 4, cfg.seed, cfg.jobs);
        return SyncEvidence {
            status: if cert.is_verified() {
                SyncStatus::Verified
            } else {
                SyncStatus::Counterexample
            },
            machine: Some(dfa.name().to_string()),
            certificate: Some(cert),
            ..base
        };
    }
    match sync_growth_screen(oracle, cfg.k, cfg.depth) {
        Ok(screen) if screen.is_not_synchronized() => SyncEvidence {
            status: SyncStatus::NotSynchronized,
            growth_screen: Some(screen),
            ..base
        },
        Ok(screen) => SyncEvidence {
            growth_screen: Some(screen),
            detail: Some("no machine supplied; growth is compatible with synchronization".into()),
            ..base
        },
        Err(e) => SyncEvidence {
            detail: Some(format!("growth screen not applicable: {e}")),
            ..base
        },
    }
}

fn regular_evidence(
    cfg: &ReportConfig,
    recursive_found: bool,
) -> Result<RegularEvidence, ReportError> {
    if cfg.spec.name == "g" {
        let ell = cfg.spec.params.get("ell").copied().unwrap_or_default();
        let ell =
            u32::try_from(ell).map_err(|_| CorpusError::Parameter(format!("bad ell {ell}")))?;
        let sampling = if cfg.k <= 3 {
            ResidueSampling::Exhaustive
        } else {
            ResidueSampling::Boundary
        };
        return Ok(match g_two_level(cfg.k, ell, cfg.check_n, sampling) {
            Ok(count) => RegularEvidence {
                evidence: EVIDENCE,
                status: RegularStatus::Verified,
                detail: format!(
                    "kernel relations between consecutive levels hold in {count} instances, n <= {}",
                    cfg.check_n
                ),
            },
            Err(f) => RegularEvidence {
                evidence: EVIDENCE,
                status: RegularStatus::Counterexample,
                detail: f.to_string(),
            },
        });
    }
    Ok(if recursive_found {
        RegularEvidence {
            evidence: EVIDENCE,
            status: RegularStatus::Verified,
            detail: "a verified recursion scheme spans every kernel level by a fixed finite set"
                .into(),
        }
    } else {
        RegularEvidence {
            evidence: EVIDENCE,
            status: RegularStatus::NotEstablished,
            detail: "no relations checked".into(),
        }
    })
}

pub fn build_report(cfg: &ReportConfig) -> Result<Report, ReportError> {
    let oracle = cfg.spec.build()?;
    let automatic = bounded(&*oracle, cfg.n_max);
    let synchronized = sync_evidence(&*oracle, cfg);
    let strongly_recursive = search_evidence(&*oracle, cfg, SearchMode::Strong)?;
    let recursive = if strongly_recursive.scheme.is_some() {
        SearchEvidence {
            evidence: EVIDENCE,
            status: SearchStatus::ImpliedByStrong,
            scheme: None,
            certificate: None,
        }
    } else {
        search_evidence(&*oracle, cfg, SearchMode::General)?
    };
    let found = strongly_recursive.scheme.is_some() || recursive.scheme.is_some();
    let regular = regular_evidence(cfg, found)?;
    Ok(Report {
        oracle: oracle.name(),
        k: cfg.k,
        label: EVIDENCE,
        automatic,
        synchronized,
        strongly_recursive,
        recursive,
        regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digit_sum_row() {
        let mut cfg = ReportConfig::new(OracleSpec::new("s").with("k", 2), 2);
        cfg.n_max = 1000;
        cfg.check_n = 1000;
        let r = build_report(&cfg).unwrap();
        assert_eq!(r.synchronized.status, SyncStatus::NotEstablished);
        assert_eq!(r.strongly_recursive.status, SearchStatus::Found);
        assert_eq!(r.recursive.status, SearchStatus::ImpliedByStrong);
        assert_eq!(r.regular.status, RegularStatus::Verified);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["synchronized"]["status"], "not established");
        assert_eq!(json["label"], EVIDENCE);
    }
}
