use skyveil_audit::{
    keygen, record_launch, verify_trail, AuditEntry, AuditPolicy, AuditTrail, MeasurementDb,
};

use crate::Result;

pub fn run_sign(args: &crate::args::AuditSignArgs) -> Result<()> {
    let entries: Vec<AuditEntry> =
        serde_json::from_slice(&std::fs::read(&args.entries)?)?;
    let key = keygen(args.key_seed);
    let mut trail = AuditTrail::new(&key)?;
    for entry in entries {
        trail = record_launch(
            &trail,
            entry.manifest,
            entry.attestation,
            entry.timestamp_ms,
            &key,
        )?;
    }
    std::fs::write(&args.out, trail.to_json_bytes()?)?;
    eprintln!(
        "signed trail with {} entries under key {}",
        trail.entries.len(),
        trail.device_pubkey
    );
    Ok(())
}

/// Exit 0 when all three checks pass, 3 otherwise; the verdict report goes
/// to stdout as JSON either way.
pub fn run_verify(args: &crate::args::AuditVerifyArgs) -> Result<i32> {
    let trail = AuditTrail::from_json_bytes(&std::fs::read(&args.trail)?)?;
    let mut policy = match &args.policy {
        Some(path) => serde_json::from_slice::<AuditPolicy>(&std::fs::read(path)?)?,
        None => AuditPolicy::default(),
    };
    if let Some(path) = &args.measurements {
        let db: MeasurementDb = serde_json::from_slice(&std::fs::read(path)?)?;
        policy.measurements = db;
    }
    policy
        .validate()
        .map_err(crate::CliError::Parse)?;
    let verdict = verify_trail(&trail, &policy);
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    Ok(if verdict.overall_pass() { 0 } else { 3 })
}
