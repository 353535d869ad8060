use clap::Subcommand;
use serde_json::{json, Value};
use signlab_core::roots::{
    chamber_involution_certificate, chamber_samples, check_involution_conditions, fixtures,
    CertificateReport, HypothesisReport,
};
use signlab_core::{LatticeInvolution, ParabolicDatum, RootDatum};

use crate::config::{config_error, Format, RunConfig};
use crate::output::{Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum RootsCommand {
    /// Check an involution against a parabolic: order two, root permutation,
    /// nilradical swap, Levi stability and the modulus identity
    Check,
    /// Certify that ν ↦ −tν preserves the chamber, structurally and on exact samples.
    /// Without --family, runs every shipped fixture that is expected to pass
    ChamberCert,
}

impl RootsCommand {
    fn name(self) -> &'static str {
        match self {
            RootsCommand::Check => "roots check",
            RootsCommand::ChamberCert => "roots chamber-cert",
        }
    }
}

struct Triple {
    datum: RootDatum,
    involution: LatticeInvolution,
    parabolic: ParabolicDatum,
}

fn triple(cfg: &RunConfig, name: &str) -> anyhow::Result<Triple> {
    let (Some(family), Some(rank)) = (cfg.family, cfg.rank) else {
        return Err(config_error(format!("`{name}` needs --family and --rank")));
    };
    let datum = RootDatum::build(family, rank).map_err(|e| config_error(format!("--rank: {e}")))?;
    let involution = match cfg.theta.as_deref().unwrap_or("neg-id") {
        "neg-id" => LatticeInvolution::negative_identity(rank),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| config_error(format!("cannot read involution {path}: {e}")))?;
            LatticeInvolution::parse(&text).map_err(|e| config_error(format!("{path}: {e}")))?
        }
    };
    if involution.size() != rank {
        return Err(config_error(format!(
            "--theta is {}×{} but the datum has rank {rank}",
            involution.size(),
            involution.size()
        )));
    }
    let subset = cfg.parabolic.clone().unwrap_or_default();
    let parabolic = ParabolicDatum::new(&datum, &subset)
        .map_err(|e| config_error(format!("--parabolic: {e}")))?;
    Ok(Triple {
        datum,
        involution,
        parabolic,
    })
}

fn validate(cmd: RootsCommand, cfg: &RunConfig) -> anyhow::Result<()> {
    let name = cmd.name();
    cfg.forbid(
        name,
        &[
            ("n", cfg.n.is_some()),
            ("q", cfg.q.is_some()),
            ("involution", cfg.involution.is_some()),
            ("theta-subset", cfg.theta_subset.is_some()),
            ("h", cfg.h.is_some()),
        ],
    )?;
    cfg.require_format(name, &[Format::Json, Format::Pretty])
}

fn check_table(r: &HypothesisReport) -> Table {
    let mut t = Table::new(&["condition", "holds"]);
    for (k, v) in [
        ("order_two", r.order_two),
        ("permutes_roots", r.permutes_roots),
        ("swaps_nilradicals", r.swaps_nilradicals),
        ("levi_stable", r.levi_stable),
        ("modulus_identity", r.modulus_identity),
    ] {
        t.push(vec![k.to_string(), v.to_string()]);
    }
    t
}

fn parameters(cmd: RootsCommand, cfg: &RunConfig) -> Value {
    json!({
        "command": cmd.name(),
        "family": cfg.family.map(|f| f.to_string()),
        "rank": cfg.rank,
        "theta": cfg.theta.clone().unwrap_or_else(|| "neg-id".into()),
        "parabolic": cfg.parabolic.as_ref().map(|p| p.to_string()),
        "samples": cfg.samples,
        "seed": cfg.seed,
    })
}

pub fn run(cmd: RootsCommand, cfg: &RunConfig) -> anyhow::Result<Report> {
    validate(cmd, cfg)?;
    let params = parameters(cmd, cfg);
    match cmd {
        RootsCommand::Check => {
            let t = triple(cfg, cmd.name())?;
            let r = check_involution_conditions(&t.datum, &t.involution, &t.parabolic)
                .map_err(|e| config_error(e.to_string()))?;
            let headline = format!(
                "{}{} with Θ = {{{}}}: {}",
                r.family,
                r.rank,
                r.theta,
                if r.all_pass {
                    "all conditions hold"
                } else {
                    "some condition fails"
                }
            );
            let table = check_table(&r);
            Ok(Report::bare("hypothesis-report", r.all_pass, params, &r)?
                .with_headline(headline)
                .with_table(table))
        }
        RootsCommand::ChamberCert if cfg.family.is_some() || cfg.rank.is_some() => {
            let t = triple(cfg, cmd.name())?;
            let report = certify(&t.datum, &t.involution, &t.parabolic, cfg.samples, cfg.seed)?;
            let headline = format!(
                "{}{} with Θ = {{{}}}: {} of {} samples checked, {} failures",
                report.family,
                report.rank,
                report.theta,
                report.checked,
                report.samples,
                report.failures.len()
            );
            Ok(
                Report::bare("chamber-certificate", report.ok, params, &report)?
                    .with_headline(headline),
            )
        }
        RootsCommand::ChamberCert => {
            if cfg.theta.is_some() || cfg.parabolic.is_some() {
                return Err(config_error(
                    "--theta and --parabolic need --family and --rank",
                ));
            }
            let mut reports = Vec::new();
            let mut table = Table::new(&["fixture", "structural", "checked", "failures", "ok"]);
            for (i, f) in fixtures()?
                .into_iter()
                .filter(|f| f.expect_pass)
                .enumerate()
            {
                let seed = cfg.seed.wrapping_add(i as u64);
                let r = certify(&f.datum, &f.involution, &f.parabolic, cfg.samples, seed)?;
                table.push(vec![
                    f.name.clone(),
                    r.structural_ok.to_string(),
                    r.checked.to_string(),
                    r.failures.len().to_string(),
                    r.ok.to_string(),
                ]);
                reports.push(json!({ "fixture": f.name, "certificate": r }));
            }
            let ok = table.rows.iter().all(|r| r[4] == "true");
            let headline = format!("{} fixtures certified", reports.len());
            Ok(Report::new(
                "chamber-certificates",
                ok,
                params,
                json!({ "fixtures": reports }),
            )?
            .with_headline(headline)
            .with_table(table))
        }
    }
}

/// Runs the certificate; a triple that fails the hypotheses is an assertion failure, not a config error.
pub fn certify(
    datum: &RootDatum,
    t: &LatticeInvolution,
    p: &ParabolicDatum,
    samples: usize,
    seed: u64,
) -> anyhow::Result<CertificateReport> {
    let nus = chamber_samples(datum, p, samples, seed)?;
    Ok(chamber_involution_certificate(datum, t, p, &nus)?)
}
