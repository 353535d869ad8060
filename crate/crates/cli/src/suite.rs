use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use signlab_core::group::gl_catalog;
use signlab_core::roots::{check_involution_conditions, fixtures, Fixture};
use signlab_core::signs::FixedLineOutcome;
use signlab_core::{
    CharacterTable, FiniteMatrixGroup, GroupAutomorphism, GroupFamily, SignLab, SignValue,
    SimpleSubset, SubgroupTag,
};

use crate::config::{config_error, Format, RunConfig};
use crate::finite::{descent_records, DescentSummary};
use crate::output::{Report, Table};
use crate::roots_cmd::certify;

pub const SUITE_SCHEMA: &str = "signlab.suite-summary/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    /// Every catalog GL_n(F_q): all transpose-inverse signs +1, twist = dual, counting identities
    GowMacdonaldSweep,
    /// Every shipped root-datum fixture: verdicts and chamber certificates
    PaperHypotheses,
    /// Every catalog GL_n(F_q): seeded sign shifts, descent, fixed-line certificates
    SignLaws,
    /// No members
    Empty,
}

impl SuiteName {
    fn name(self) -> &'static str {
        match self {
            SuiteName::GowMacdonaldSweep => "gow-macdonald-sweep",
            SuiteName::PaperHypotheses => "paper-hypotheses",
            SuiteName::SignLaws => "sign-laws",
            SuiteName::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Member {
    pub name: String,
    pub ok: bool,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub schema: &'static str,
    pub suite: &'static str,
    pub seed: u64,
    pub members: Vec<Member>,
    pub passed: usize,
    pub failed: usize,
    pub ok: bool,
}

fn validate(cfg: &RunConfig) -> anyhow::Result<()> {
    cfg.forbid(
        "suite",
        &[
            ("n", cfg.n.is_some()),
            ("q", cfg.q.is_some()),
            ("involution", cfg.involution.is_some()),
            ("theta-subset", cfg.theta_subset.is_some()),
            ("h", cfg.h.is_some()),
            ("family", cfg.family.is_some()),
            ("rank", cfg.rank.is_some()),
            ("theta", cfg.theta.is_some()),
            ("parabolic", cfg.parabolic.is_some()),
        ],
    )?;
    cfg.require_format("suite", &[Format::Json, Format::Pretty])
}

/// Seed for member `index`, independent of scheduling.
fn member_seed(seed: u64, index: usize) -> u64 {
    seed ^ (index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn run(name: SuiteName, cfg: &RunConfig) -> anyhow::Result<Report> {
    validate(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| config_error(format!("--threads: {e}")))?;
    let members = pool.install(|| -> anyhow::Result<Vec<Member>> {
        match name {
            SuiteName::Empty => Ok(Vec::new()),
            SuiteName::GowMacdonaldSweep => gl_catalog(cfg.cap)
                .into_par_iter()
                .map(|(n, q)| sweep_member(n, q, cfg))
                .collect(),
            SuiteName::SignLaws => gl_catalog(cfg.cap)
                .into_par_iter()
                .enumerate()
                .map(|(i, (n, q))| sign_law_member(n, q, cfg, member_seed(cfg.seed, i)))
                .collect(),
            SuiteName::PaperHypotheses => fixtures()?
                .into_par_iter()
                .enumerate()
                .map(|(i, f)| fixture_member(&f, cfg.samples, member_seed(cfg.seed, i)))
                .collect(),
        }
    })?;
    let passed = members.iter().filter(|m| m.ok).count();
    let summary = SuiteSummary {
        schema: SUITE_SCHEMA,
        suite: name.name(),
        seed: cfg.seed,
        failed: members.len() - passed,
        passed,
        ok: passed == members.len(),
        members,
    };
    let mut table = Table::new(&["member", "ok"]);
    for m in &summary.members {
        table.push(vec![m.name.clone(), m.ok.to_string()]);
    }
    let headline = format!(
        "suite {}: {} passed, {} failed",
        summary.suite, summary.passed, summary.failed
    );
    let params =
        json!({ "suite": name.name(), "seed": cfg.seed, "samples": cfg.samples, "cap": cfg.cap });
    Ok(Report::bare("suite-summary", summary.ok, params, &summary)?
        .with_headline(headline)
        .with_table(table))
}

fn load(n: usize, q: u32, cfg: &RunConfig) -> anyhow::Result<(FiniteMatrixGroup, CharacterTable)> {
    let cache = cfg.cache.as_deref();
    let group = FiniteMatrixGroup::load_or_build(GroupFamily::Gl, n, q, cfg.cap, cache)?;
    let table = CharacterTable::load_or_compute(&group, cache)?;
    Ok((group, table))
}

fn sweep_member(n: usize, q: u32, cfg: &RunConfig) -> anyhow::Result<Member> {
    let (group, table) = load(n, q, cfg)?;
    let lab = SignLab::new(&group, &table)?;
    let ti = GroupAutomorphism::transpose_inverse(&group)?;
    let id = GroupAutomorphism::identity(&group);
    let signs = lab.sign_report(&ti)?;
    let gk = lab.gelfand_kazhdan_check(&ti)?;
    let count_ti = lab.fs_counting_check(&ti)?;
    let count_id = lab.fs_counting_check(&id)?;
    let all_plus = signs.summary.plus == signs.rows.len();
    Ok(Member {
        name: group.label().to_string(),
        ok: all_plus && gk.ok && count_ti.ok && count_id.ok,
        details: json!({
            "order": group.order(),
            "irreducibles": table.len(),
            "all_plus": all_plus,
            "summary": signs.summary,
            "twist_is_dual": gk.ok,
            "counting_transpose_inverse": count_ti,
            "counting_identity": count_id,
        }),
    })
}

fn sign_law_member(n: usize, q: u32, cfg: &RunConfig, seed: u64) -> anyhow::Result<Member> {
    let (group, table) = load(n, q, cfg)?;
    let lab = SignLab::new(&group, &table)?;
    let ti = GroupAutomorphism::transpose_inverse(&group)?;
    let shifts = lab.seeded_shift_checks(&ti, cfg.count, seed)?;
    let shift_ok = shifts.len() == cfg.count && shifts.iter().all(|c| c.ok);
    let records = descent_records(&lab, &ti, &SimpleSubset::all(n - 1), cfg.cache.as_deref())?;
    let descent = DescentSummary::of(&records);
    let borel = group.require_tag(&SubgroupTag::Borel)?.to_vec();
    let (mut certified, mut contradictions) = (0usize, 0usize);
    for outcome in lab.fixed_line_certificates(&ti, &borel)? {
        if let FixedLineOutcome::Certified { agrees, .. } = outcome {
            certified += 1;
            contradictions += usize::from(!agrees);
        }
    }
    let minus = lab
        .sign_report(&ti)?
        .rows
        .iter()
        .filter(|r| r.indicator == SignValue::Minus)
        .count();
    Ok(Member {
        name: group.label().to_string(),
        ok: shift_ok && descent.disagreed == 0 && contradictions == 0 && minus == 0,
        details: json!({
            "shift_checks": shifts.len(),
            "shift_failures": shifts.iter().filter(|c| !c.ok).count(),
            "descent": descent,
            "fixed_line_certified": certified,
            "fixed_line_contradictions": contradictions,
        }),
    })
}

fn fixture_member(f: &Fixture, samples: usize, seed: u64) -> anyhow::Result<Member> {
    let r = check_involution_conditions(&f.datum, &f.involution, &f.parabolic)?;
    let verdict_ok = r.all_pass == f.expect_pass;
    // Whenever the nilradicals are swapped the modulus identity must follow.
    let modulus_ok = !r.swaps_nilradicals || r.modulus_identity;
    let (cert, cert_ok) = if r.all_pass {
        let c = certify(&f.datum, &f.involution, &f.parabolic, samples, seed)?;
        let ok = c.ok && c.checked == samples;
        (
            json!({ "structural_ok": c.structural_ok, "checked": c.checked, "failures": c.failures.len() }),
            ok,
        )
    } else {
        (Value::Null, true)
    };
    Ok(Member {
        name: f.name.clone(),
        ok: verdict_ok && modulus_ok && cert_ok,
        details: json!({
            "expect_pass": f.expect_pass,
            "all_pass": r.all_pass,
            "swaps_nilradicals": r.swaps_nilradicals,
            "modulus_identity": r.modulus_identity,
            "certificate": cert,
        }),
    })
}
