//! Verifier fixtures: a compliant trail, the three tamper classes, and a
//! whole-file mutation sweep.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use skyveil_audit::{
    keygen, record_launch, verify_trail, AttestationReport, AuditPolicy, AuditTrail, DeviceKey,
    Manifest, MeasurementDb, COMPONENT_LAUNCHED_APP, COMPONENT_MIDDLEWARE, REQUIRED_COMPONENTS,
};

fn expected_db() -> MeasurementDb {
    REQUIRED_COMPONENTS
        .iter()
        .map(|c| {
            let h: String = c
                .bytes()
                .cycle()
                .take(32)
                .map(|b| format!("{b:02x}"))
                .collect();
            (c.to_string(), h)
        })
        .collect()
}

fn policy() -> AuditPolicy {
    AuditPolicy {
        measurements: expected_db(),
        ..AuditPolicy::default()
    }
}

fn good_report(app_hash: &str) -> AttestationReport {
    let mut components: BTreeMap<String, String> = expected_db();
    components.insert(COMPONENT_LAUNCHED_APP.into(), app_hash.into());
    AttestationReport { components }
}

fn manifest(app: &str, publishes: &[&str], subscribes: &[&str]) -> Manifest {
    Manifest {
        app_id: app.into(),
        publishes: publishes.iter().map(|s| s.to_string()).collect(),
        subscribes: subscribes.iter().map(|s| s.to_string()).collect(),
        cert_fingerprint: format!("{:08x}", app.len() * 7919),
    }
}

/// Camera, sanitizer and a downstream consumer, all compliant.
fn compliant_trail(key: &DeviceKey) -> AuditTrail {
    let mut trail = AuditTrail::new(key).unwrap();
    trail = record_launch(
        &trail,
        manifest("camera", &["VideoFeed"], &[]),
        good_report("aa11"),
        1_000,
        key,
    )
    .unwrap();
    trail = record_launch(
        &trail,
        manifest("Sanitizer-FE", &["PrivVideoFeed"], &["VideoFeed"]),
        good_report("bb22"),
        2_000,
        key,
    )
    .unwrap();
    trail = record_launch(
        &trail,
        manifest("navigator", &[], &["PrivVideoFeed"]),
        good_report("cc33"),
        3_000,
        key,
    )
    .unwrap();
    trail
}

#[test]
fn compliant_fixture_passes_all_three_checks() {
    let key = keygen(11);
    let trail = compliant_trail(&key);
    let verdict = verify_trail(&trail, &policy());
    assert!(verdict.check1_integrity.passed, "{verdict:?}");
    assert!(verdict.check2_trusted_components.passed);
    assert!(verdict.check3_pubsub.passed);
    assert!(verdict.overall_pass());
}

#[test]
fn rogue_subscriber_fails_exactly_check3() {
    let key = keygen(12);
    let mut trail = compliant_trail(&key);
    trail = record_launch(
        &trail,
        manifest("rogue", &[], &["VideoFeed"]),
        good_report("dd44"),
        4_000,
        &key,
    )
    .unwrap();
    let verdict = verify_trail(&trail, &policy());
    assert!(verdict.check1_integrity.passed);
    assert!(verdict.check2_trusted_components.passed);
    assert!(!verdict.check3_pubsub.passed);
    let v = &verdict.check3_pubsub.violations;
    assert!(v.iter().any(|v| v.subject == "rogue" && v.reason.contains("VideoFeed")));
}

#[test]
fn allowlisted_raw_consumer_is_tolerated() {
    let key = keygen(13);
    let mut trail = compliant_trail(&key);
    trail = record_launch(
        &trail,
        manifest("vetted-recorder", &[], &["VideoFeed"]),
        good_report("ee55"),
        4_000,
        &key,
    )
    .unwrap();
    let mut p = policy();
    p.raw_consumer_allowlist.insert("vetted-recorder".into());
    assert!(verify_trail(&trail, &p).overall_pass());
}

#[test]
fn measurement_flip_fails_exactly_the_right_check() {
    let key = keygen(14);
    // The device signs an entry whose middleware measurement differs from
    // the expected database by one flipped nibble.
    let mut report = good_report("aa11");
    let tampered = {
        let mut h = report.components[COMPONENT_MIDDLEWARE].clone();
        let flipped = if h.as_bytes()[0] == b'0' { "1" } else { "0" };
        h.replace_range(0..1, flipped);
        h
    };
    report
        .components
        .insert(COMPONENT_MIDDLEWARE.into(), tampered);
    let mut trail = compliant_trail(&key);
    trail = record_launch(
        &trail,
        manifest("camera2", &["Telemetry"], &[]),
        report,
        5_000,
        &key,
    )
    .unwrap();

    let verdict = verify_trail(&trail, &policy());
    assert!(!verdict.check1_integrity.passed);
    assert!(verdict.check2_trusted_components.passed);
    assert!(verdict.check3_pubsub.passed);
    assert_eq!(verdict.check1_integrity.violations.len(), 1);
    assert_eq!(
        verdict.check1_integrity.violations[0].subject,
        COMPONENT_MIDDLEWARE
    );
}

#[test]
fn sanitizer_measurement_flip_hits_check2() {
    let key = keygen(15);
    let mut report = good_report("aa11");
    let mut h = report.components["sanitizer-fe"].clone();
    h.replace_range(0..1, if h.as_bytes()[0] == b'f' { "e" } else { "f" });
    report.components.insert("sanitizer-fe".into(), h);
    let trail = record_launch(
        &AuditTrail::new(&key).unwrap(),
        manifest("camera", &["VideoFeed"], &[]),
        report,
        1,
        &key,
    )
    .unwrap();
    let verdict = verify_trail(&trail, &policy());
    assert!(verdict.check1_integrity.passed);
    assert!(!verdict.check2_trusted_components.passed);
    assert_eq!(
        verdict.check2_trusted_components.violations[0].subject,
        "sanitizer-fe"
    );
}

#[test]
fn signature_flip_fails_everything_as_untrusted() {
    let key = keygen(16);
    let mut trail = compliant_trail(&key);
    let mut sig = trail.signature.clone();
    let flipped = if sig.as_bytes()[3] == b'0' { "1" } else { "0" };
    sig.replace_range(3..4, flipped);
    trail.signature = sig;
    let verdict = verify_trail(&trail, &policy());
    assert!(!verdict.overall_pass());
    for check in [
        &verdict.check1_integrity,
        &verdict.check2_trusted_components,
        &verdict.check3_pubsub,
    ] {
        assert!(!check.passed);
        assert_eq!(check.violations[0].reason, "untrusted trail");
    }
}

#[test]
fn every_single_byte_mutation_is_detected() {
    let key = keygen(17);
    let trail = compliant_trail(&key);
    let bytes = trail.to_json_bytes().unwrap();
    // Sanity: the untampered bytes verify.
    assert!(verify_trail(&AuditTrail::from_json_bytes(&bytes).unwrap(), &policy()).overall_pass());

    for mask in [0x01u8, 0x20, 0x80] {
        for idx in 0..bytes.len() {
            let mut mutated = bytes.clone();
            mutated[idx] ^= mask;
            let detected = match AuditTrail::from_json_bytes(&mutated) {
                Err(_) => true,
                Ok(t) => !verify_trail(&t, &policy()).overall_pass(),
            };
            assert!(
                detected,
                "mutation mask {mask:#04x} at byte {idx} went undetected"
            );
        }
    }
}

#[test]
fn check3_matches_a_brute_force_subscription_scan() {
    let key = keygen(18);
    let p = policy();
    let topics = ["VideoFeed", "PrivVideoFeed", "Telemetry", "NavGrid", "MapTiles"];
    let mut rng = ChaCha20Rng::seed_from_u64(0xC3);

    for _ in 0..200 {
        let mut trail = AuditTrail::new(&key).unwrap();
        let n_apps = rng.gen_range(1..6);
        for a in 0..n_apps {
            let is_sanitizer = rng.gen_bool(0.3);
            let app_id = if is_sanitizer {
                "Sanitizer-FE".to_string()
            } else {
                format!("app-{a}")
            };
            let subscribes: Vec<&str> = topics
                .iter()
                .filter(|_| rng.gen_bool(0.4))
                .copied()
                .collect();
            let publishes: Vec<&str> = topics
                .iter()
                .filter(|_| rng.gen_bool(0.3))
                .copied()
                .collect();
            trail = record_launch(
                &trail,
                manifest(&app_id, &publishes, &subscribes),
                good_report("99"),
                a as u64,
                &key,
            )
            .unwrap();
        }

        // Independent re-derivation of the check-3 verdict.
        let mut expect_pass = true;
        for entry in &trail.entries {
            let m = &entry.manifest;
            if m.app_id == p.sanitizer_id {
                let subs: std::collections::BTreeSet<&str> =
                    m.subscribes.iter().map(String::as_str).collect();
                let want: std::collections::BTreeSet<&str> =
                    p.sensitive_topics.iter().map(String::as_str).collect();
                if subs != want || m.publishes != vec![p.sanitized_topic.clone()] {
                    expect_pass = false;
                }
            } else if !p.raw_consumer_allowlist.contains(&m.app_id) {
                for t in &m.subscribes {
                    if p.sensitive_topics.contains(t) {
                        expect_pass = false;
                    }
                }
            }
        }

        let verdict = verify_trail(&trail, &p);
        assert_eq!(verdict.check3_pubsub.passed, expect_pass);
    }
}
