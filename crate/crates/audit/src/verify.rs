use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::{
    AuditTrail, COMPONENT_APP_LAUNCHER, COMPONENT_MIDDLEWARE, COMPONENT_NORMAL_WORLD_OS,
    COMPONENT_SANITIZER_FE, COMPONENT_SECURITY_LAYER,
};

/// Expected measurement per component, as distributed to citizens.
pub type MeasurementDb = BTreeMap<String, String>;

/// What the citizen checks a trail against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditPolicy {
    /// Topics carrying raw captured footage.
    pub sensitive_topics: BTreeSet<String>,
    /// The one application allowed to consume them.
    pub sanitizer_id: String,
    /// The sanitized stream the sanitizer must publish, and nothing else.
    pub sanitized_topic: String,
    /// Vetted applications additionally allowed raw access.
    #[serde(default)]
    pub raw_consumer_allowlist: BTreeSet<String>,
    /// Component name to expected measurement hex.
    #[serde(default)]
    pub measurements: MeasurementDb,
}

impl Default for AuditPolicy {
    fn default() -> Self {
        Self {
            sensitive_topics: ["VideoFeed".to_string()].into(),
            sanitizer_id: "Sanitizer-FE".to_string(),
            sanitized_topic: "PrivVideoFeed".to_string(),
            raw_consumer_allowlist: BTreeSet::new(),
            measurements: MeasurementDb::new(),
        }
    }
}

impl AuditPolicy {
    pub fn validate(&self) -> Result<(), String> {
        if self.sensitive_topics.contains(&self.sanitized_topic) {
            return Err(format!(
                "sanitized topic '{}' is itself marked sensitive",
                self.sanitized_topic
            ));
        }
        Ok(())
    }
}

/// One concrete policy violation: which subject (component or app) and
/// why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl CheckResult {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            passed: violations.is_empty(),
            violations,
        }
    }

    fn untrusted() -> Self {
        Self {
            passed: false,
            violations: vec![Violation {
                subject: "trail".into(),
                reason: "untrusted trail".into(),
            }],
        }
    }
}

/// The three-check verdict. Overall pass means all three passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub check1_integrity: CheckResult,
    pub check2_trusted_components: CheckResult,
    pub check3_pubsub: CheckResult,
}

impl VerdictReport {
    pub fn overall_pass(&self) -> bool {
        self.check1_integrity.passed
            && self.check2_trusted_components.passed
            && self.check3_pubsub.passed
    }

    fn all_untrusted() -> Self {
        Self {
            check1_integrity: CheckResult::untrusted(),
            check2_trusted_components: CheckResult::untrusted(),
            check3_pubsub: CheckResult::untrusted(),
        }
    }
}

fn check_measurements(
    trail: &AuditTrail,
    policy: &AuditPolicy,
    components: &[&str],
) -> CheckResult {
    let mut violations = Vec::new();
    for (idx, entry) in trail.entries.iter().enumerate() {
        for &component in components {
            let expected = match policy.measurements.get(component) {
                Some(e) => e,
                None => {
                    violations.push(Violation {
                        subject: component.to_string(),
                        reason: "no expected measurement in policy database".into(),
                    });
                    continue;
                }
            };
            match entry.attestation.measurement(component) {
                Some(actual) if actual == expected => {}
                Some(_) => violations.push(Violation {
                    subject: component.to_string(),
                    reason: format!("measurement mismatch at entry {idx}"),
                }),
                None => violations.push(Violation {
                    subject: component.to_string(),
                    reason: format!("measurement missing at entry {idx}"),
                }),
            }
        }
    }
    CheckResult::from_violations(violations)
}

fn check_pubsub(trail: &AuditTrail, policy: &AuditPolicy) -> CheckResult {
    let mut violations = Vec::new();
    for entry in &trail.entries {
        let m = &entry.manifest;
        if m.app_id == policy.sanitizer_id {
            let subscribes: BTreeSet<&str> = m.subscribes.iter().map(String::as_str).collect();
            let expected: BTreeSet<&str> =
                policy.sensitive_topics.iter().map(String::as_str).collect();
            if subscribes != expected {
                violations.push(Violation {
                    subject: m.app_id.clone(),
                    reason: format!(
                        "sanitizer must subscribe to exactly the sensitive topics, found [{}]",
                        m.subscribes.join(", ")
                    ),
                });
            }
            if m.publishes.len() != 1 || m.publishes[0] != policy.sanitized_topic {
                violations.push(Violation {
                    subject: m.app_id.clone(),
                    reason: format!(
                        "sanitizer must publish exactly '{}', found [{}]",
                        policy.sanitized_topic,
                        m.publishes.join(", ")
                    ),
                });
            }
        } else if !policy.raw_consumer_allowlist.contains(&m.app_id) {
            for topic in &m.subscribes {
                if policy.sensitive_topics.contains(topic) {
                    violations.push(Violation {
                        subject: m.app_id.clone(),
                        reason: format!("sensitive-topic subscription '{topic}'"),
                    });
                }
            }
        }
    }
    CheckResult::from_violations(violations)
}

/// Run the citizen's three checks. The signature is verified first: if the
/// trail is not authentic, every check fails as untrusted.
pub fn verify_trail(trail: &AuditTrail, policy: &AuditPolicy) -> VerdictReport {
    match trail.signature_valid() {
        Ok(true) => {}
        _ => return VerdictReport::all_untrusted(),
    }
    VerdictReport {
        check1_integrity: check_measurements(
            trail,
            policy,
            &[
                COMPONENT_NORMAL_WORLD_OS,
                COMPONENT_MIDDLEWARE,
                COMPONENT_SECURITY_LAYER,
            ],
        ),
        check2_trusted_components: check_measurements(
            trail,
            policy,
            &[COMPONENT_SANITIZER_FE, COMPONENT_APP_LAUNCHER],
        ),
        check3_pubsub: check_pubsub(trail, policy),
    }
}
