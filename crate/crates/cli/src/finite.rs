use clap::Subcommand;
use serde::Serialize;
use serde_json::{json, Value};
use signlab_core::group::{gl_order, sl_order};
use signlab_core::signs::{DescentContext, DescentRecord, ShiftCheck};
use signlab_core::{
    CharacterTable, Error, FieldSpec, FiniteMatrixGroup, GroupAutomorphism, GroupFamily,
    ParabolicFunctors, SignLab, SignValue, SimpleSubset,
};

use crate::config::{config_error, Format, GroupKind, RunConfig};
use crate::involution::{read_element, InvolutionSpec};
use crate::output::{Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum FiniteCommand {
    /// Enumerate the group and its conjugacy classes
    Build,
    /// Compute and certify the character table
    Table,
    /// Twisted indicators of every irreducible
    Signs,
    /// Compare signs on G with signs on Levi constituents
    Descent,
    /// Check the sign-shift law for Int(h) ∘ θ
    Shift,
    /// Check Σ ε_θ(χ) χ(1) = #{g : g θ(g) = 1}
    Counting,
}

impl FiniteCommand {
    fn name(self) -> &'static str {
        match self {
            FiniteCommand::Build => "finite build",
            FiniteCommand::Table => "finite table",
            FiniteCommand::Signs => "finite signs",
            FiniteCommand::Descent => "finite descent",
            FiniteCommand::Shift => "finite shift",
            FiniteCommand::Counting => "finite counting",
        }
    }

    fn uses_involution(self) -> bool {
        !matches!(self, FiniteCommand::Build | FiniteCommand::Table)
    }
}

/// Checks every flag against the subcommand before any computation.
fn validate(
    cmd: FiniteCommand,
    cfg: &RunConfig,
) -> anyhow::Result<(usize, u32, Option<InvolutionSpec>)> {
    let name = cmd.name();
    cfg.forbid(
        name,
        &[
            ("family", cfg.family.is_some()),
            ("rank", cfg.rank.is_some()),
            ("theta", cfg.theta.is_some()),
            ("parabolic", cfg.parabolic.is_some()),
            (
                "involution",
                cfg.involution.is_some() && !cmd.uses_involution(),
            ),
            (
                "theta-subset",
                cfg.theta_subset.is_some() && cmd != FiniteCommand::Descent,
            ),
            ("h", cfg.h.is_some() && cmd != FiniteCommand::Shift),
        ],
    )?;
    let flat = matches!(
        cmd,
        FiniteCommand::Signs
            | FiniteCommand::Descent
            | FiniteCommand::Shift
            | FiniteCommand::Counting
    );
    if flat {
        cfg.require_format(name, &[Format::Json, Format::Csv, Format::Pretty])?;
    } else {
        cfg.require_format(name, &[Format::Json, Format::Pretty])?;
    }
    let (n, q) = cfg.group_shape()?;
    FieldSpec::of_order(q).map_err(|e| config_error(format!("--q: {e}")))?;
    if n == 0 {
        return Err(config_error("--n must be at least 1"));
    }
    let order = match cfg.group {
        GroupKind::Gl => gl_order(n, q as u64),
        GroupKind::Sl => sl_order(n, q as u64),
    };
    if order > cfg.cap as u128 {
        return Err(config_error(format!(
            "group order {order} exceeds --cap {}",
            cfg.cap
        )));
    }
    if let Some(theta) = &cfg.theta_subset {
        theta
            .validate(n.saturating_sub(1))
            .map_err(|e| config_error(format!("--theta-subset: {e}")))?;
    }
    let spec = if cmd.uses_involution() {
        Some(InvolutionSpec::parse(
            cfg.involution.as_deref().unwrap_or("transpose-inverse"),
        )?)
    } else {
        None
    };
    Ok((n, q, spec))
}

fn parameters(cmd: FiniteCommand, cfg: &RunConfig, n: usize, q: u32, spec: Option<&str>) -> Value {
    let mut p = json!({
        "command": cmd.name(),
        "group": match cfg.group { GroupKind::Gl => "gl", GroupKind::Sl => "sl" },
        "n": n,
        "q": q,
    });
    if let Some(s) = spec {
        p["involution"] = json!(s);
    }
    match cmd {
        FiniteCommand::Descent => {
            p["theta_subset"] = json!(cfg.theta_subset.as_ref().map(|t| t.to_string()));
        }
        FiniteCommand::Shift => {
            if let Some(h) = &cfg.h {
                p["h"] = json!(h.display().to_string());
            } else {
                p["count"] = json!(cfg.count);
                p["seed"] = json!(cfg.seed);
            }
        }
        _ => {}
    }
    p
}

pub fn run(cmd: FiniteCommand, cfg: &RunConfig) -> anyhow::Result<Report> {
    let (n, q, spec) = validate(cmd, cfg)?;
    let family = match cfg.group {
        GroupKind::Gl => GroupFamily::Gl,
        GroupKind::Sl => GroupFamily::Sl,
    };
    let group = FiniteMatrixGroup::load_or_build(family, n, q, cfg.cap, cfg.cache.as_deref())?;
    let theta = spec.as_ref().map(|s| s.build(&group)).transpose()?;
    let params = parameters(
        cmd,
        cfg,
        n,
        q,
        cfg.involution
            .as_deref()
            .or(spec.as_ref().map(|_| "transpose-inverse")),
    );
    // The h file is validated before the (possibly slow) table computation.
    let h = match (&cfg.h, &theta) {
        (Some(path), Some(theta)) => {
            let h = read_element(&group, path)?;
            if !group.is_central(group.mul(theta.apply(h), h)) {
                return Err(config_error(format!(
                    "{}: θ(h)h is not central, so Int(h)∘θ is not an involution",
                    path.display()
                )));
            }
            Some(h)
        }
        _ => None,
    };
    if cmd == FiniteCommand::Build {
        return build_report(&group, params);
    }
    let table = CharacterTable::load_or_compute(&group, cfg.cache.as_deref())?;
    let lab = SignLab::new(&group, &table)?;
    let gl_ti = cfg.group == GroupKind::Gl
        && spec
            .as_ref()
            .is_some_and(InvolutionSpec::is_transpose_inverse);
    match cmd {
        FiniteCommand::Build => unreachable!(),
        FiniteCommand::Table => table_report(&group, &table, params),
        FiniteCommand::Signs => signs_report(&lab, theta.as_ref().unwrap(), gl_ti, params),
        FiniteCommand::Descent => descent_report(&lab, theta.as_ref().unwrap(), cfg, gl_ti, params),
        FiniteCommand::Shift => shift_report(&lab, theta.as_ref().unwrap(), h, cfg, params),
        FiniteCommand::Counting => {
            let c = lab.fs_counting_check(theta.as_ref().unwrap())?;
            let mut t = Table::new(&["lhs", "rhs", "ok"]);
            t.push(vec![c.lhs.to_string(), c.rhs.to_string(), c.ok.to_string()]);
            Ok(Report::new("counting", c.ok, params, &c)?
                .with_headline(format!(
                    "{}: Σ ε·χ(1) = {}, #{{g : gθ(g) = 1}} = {}",
                    group.label(),
                    c.lhs,
                    c.rhs
                ))
                .with_table(t))
        }
    }
}

#[derive(Serialize)]
struct ClassRow {
    size: usize,
    order: u32,
    centralizer: u64,
}

fn build_report(group: &FiniteMatrixGroup, params: Value) -> anyhow::Result<Report> {
    let s = group.class_structure();
    let classes: Vec<ClassRow> = (0..s.num_classes())
        .map(|c| ClassRow {
            size: s.sizes[c] as usize,
            order: s.element_orders[c],
            centralizer: s.centralizer_order(c),
        })
        .collect();
    let tags: serde_json::Map<String, Value> = group
        .tags()
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v.len())))
        .collect();
    let mut t = Table::new(&["class", "size", "order", "centralizer"]);
    for (i, c) in classes.iter().enumerate() {
        t.push(vec![
            i.to_string(),
            c.size.to_string(),
            c.order.to_string(),
            c.centralizer.to_string(),
        ]);
    }
    let result = json!({
        "label": group.label(),
        "order": group.order(),
        "exponent": s.exponent,
        "classes": classes,
        "subgroups": tags,
    });
    Ok(Report::new("group", true, params, result)?
        .with_headline(format!(
            "{}: order {}, {} classes",
            group.label(),
            group.order(),
            s.num_classes()
        ))
        .with_table(t))
}

fn table_report(
    group: &FiniteMatrixGroup,
    table: &CharacterTable,
    params: Value,
) -> anyhow::Result<Report> {
    let cert = table.certificate().clone();
    let ok = cert.row_orthogonality && cert.column_orthogonality && cert.galois_closed;
    let k = table.len();
    let mut header = vec!["χ".to_string()];
    header.extend((0..k).map(|c| format!("c{c}")));
    let mut t = Table {
        header,
        rows: Vec::new(),
    };
    for (i, chi) in table.irreducibles().iter().enumerate() {
        let mut row = vec![format!("χ{i}")];
        row.extend(chi.values().iter().map(|v| v.to_string()));
        t.push(row);
    }
    let result = json!({
        "table": table.to_document(group),
        "certificate": cert,
    });
    Ok(Report::new("character-table", ok, params, result)?
        .with_headline(format!(
            "{}: {} irreducibles, degrees {:?}",
            group.label(),
            k,
            table.degrees()
        ))
        .with_table(t))
}

fn signs_report(
    lab: &SignLab,
    theta: &GroupAutomorphism,
    gl_ti: bool,
    params: Value,
) -> anyhow::Result<Report> {
    let report = lab.sign_report(theta)?;
    let gk = lab.gelfand_kazhdan_check(theta)?;
    // For GL_n with transpose-inverse every sign is asserted to be +1.
    let ok = !gl_ti || (report.summary.plus == report.rows.len() && gk.ok);
    let mut t = Table::new(&["character", "degree", "indicator", "self_theta_dual"]);
    for r in &report.rows {
        t.push(vec![
            r.character.to_string(),
            r.degree.to_string(),
            r.indicator.to_string(),
            r.self_theta_dual.to_string(),
        ]);
    }
    let headline = format!(
        "{} under {}: +1 × {}, −1 × {}, 0 × {}",
        report.group,
        report.involution,
        report.summary.plus,
        report.summary.minus,
        report.summary.zero
    );
    let result = json!({
        "signs": report,
        "gelfand_kazhdan": gk,
        "asserted": gl_ti,
    });
    Ok(Report::new("sign-report", ok, params, result)?
        .with_headline(headline)
        .with_table(t))
}

#[derive(Debug, Default, Serialize)]
pub struct DescentSummary {
    pub records: usize,
    pub hypothesis_met: usize,
    pub agreed: usize,
    pub disagreed: usize,
}

impl DescentSummary {
    pub fn of(records: &[DescentRecord]) -> Self {
        let mut s = DescentSummary {
            records: records.len(),
            ..Default::default()
        };
        for r in records {
            match r.agrees {
                Some(true) => {
                    s.hypothesis_met += 1;
                    s.agreed += 1;
                }
                Some(false) => {
                    s.hypothesis_met += 1;
                    s.disagreed += 1;
                }
                None => {}
            }
        }
        s
    }
}

/// Descent records for every Θ in `subsets` under `θ`, with Levi tables from `cache`.
pub fn descent_records(
    lab: &SignLab,
    theta: &GroupAutomorphism,
    subsets: &[SimpleSubset],
    cache: Option<&std::path::Path>,
) -> anyhow::Result<Vec<DescentRecord>> {
    let mut records = Vec::new();
    for subset in subsets {
        let hc = ParabolicFunctors::new(lab.group(), subset)?;
        let levi_table = CharacterTable::load_or_compute(hc.levi(), cache)?;
        let ctx = match DescentContext::new(*lab, &hc, &levi_table, theta) {
            Err(Error::Precondition(msg)) => return Err(config_error(msg)),
            other => other?,
        };
        records.extend(ctx.descent_all()?);
    }
    Ok(records)
}

fn descent_report(
    lab: &SignLab,
    theta: &GroupAutomorphism,
    cfg: &RunConfig,
    gl_ti: bool,
    params: Value,
) -> anyhow::Result<Report> {
    let n = lab.group().degree();
    let subsets = match &cfg.theta_subset {
        Some(t) => vec![t.clone()],
        None => SimpleSubset::all(n.saturating_sub(1)),
    };
    let records = descent_records(lab, theta, &subsets, cfg.cache.as_deref())?;
    let summary = DescentSummary::of(&records);
    let ok = !gl_ti || summary.disagreed == 0;
    let mut t = Table::new(&[
        "theta",
        "character",
        "constituent",
        "multiplicity",
        "tau_theta_dual",
        "sign_g",
        "sign_m",
        "hypothesis_met",
        "agrees",
    ]);
    for r in &records {
        t.push(vec![
            format!("{{{}}}", r.theta),
            r.character.to_string(),
            r.constituent.to_string(),
            r.multiplicity.to_string(),
            r.tau_theta_dual.to_string(),
            r.sign_g.to_string(),
            r.sign_m.to_string(),
            r.hypothesis_met.to_string(),
            r.agrees.map_or("-".into(), |a| a.to_string()),
        ]);
    }
    let headline = format!(
        "{}: {} records, {} meet the hypothesis, {} agree, {} disagree",
        lab.group().label(),
        summary.records,
        summary.hypothesis_met,
        summary.agreed,
        summary.disagreed
    );
    let result = json!({ "records": records, "summary": summary, "asserted": gl_ti });
    Ok(Report::new("descent", ok, params, result)?
        .with_headline(headline)
        .with_table(t))
}

fn shift_report(
    lab: &SignLab,
    theta: &GroupAutomorphism,
    h: Option<u32>,
    cfg: &RunConfig,
    params: Value,
) -> anyhow::Result<Report> {
    let checks: Vec<ShiftCheck> = match h {
        Some(h) => {
            let kernel = signlab_core::signs::IndicatorKernel::new(lab.group(), theta)?;
            let mut out = Vec::new();
            for (i, chi) in lab.table().irreducibles().iter().enumerate() {
                if kernel.indicator(chi)? != SignValue::Zero {
                    out.push(lab.sign_shift_with(&kernel, i, h)?);
                }
            }
            out
        }
        None => lab.seeded_shift_checks(theta, cfg.count, cfg.seed)?,
    };
    let ok = checks.iter().all(|c| c.ok);
    let mut t = Table::new(&["character", "h", "base", "factor", "lhs", "rhs", "ok"]);
    for c in &checks {
        t.push(vec![
            c.character.to_string(),
            c.h.to_string(),
            c.base.to_string(),
            c.factor.to_string(),
            c.lhs.to_string(),
            c.rhs.to_string(),
            c.ok.to_string(),
        ]);
    }
    let passed = checks.iter().filter(|c| c.ok).count();
    let headline = format!(
        "{}: {passed}/{} shift checks hold",
        lab.group().label(),
        checks.len()
    );
    Ok(
        Report::new("sign-shift", ok, params, json!({ "checks": checks }))?
            .with_headline(headline)
            .with_table(t),
    )
}
