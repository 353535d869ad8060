//! Twisted Frobenius–Schur indicators and the laws relating them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::character::{CharacterTable, ClassFunction, ParabolicFunctors};
use crate::cyclotomic::{Cyclotomic, Rational};
use crate::error::{Error, Result};
use crate::group::{FiniteMatrixGroup, GroupAutomorphism};

/// The sign of an invariant bilinear form: symmetric, skew, or none.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignValue {
    Minus,
    Zero,
    Plus,
}

impl SignValue {
    pub fn as_i64(self) -> i64 {
        match self {
            SignValue::Minus => -1,
            SignValue::Zero => 0,
            SignValue::Plus => 1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            -1 => Some(SignValue::Minus),
            0 => Some(SignValue::Zero),
            1 => Some(SignValue::Plus),
            _ => None,
        }
    }

    fn from_value(v: &Cyclotomic) -> Option<Self> {
        v.as_integer().and_then(Self::from_i64)
    }
}

impl fmt::Display for SignValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SignValue::Minus => "-1",
            SignValue::Zero => "0",
            SignValue::Plus => "+1",
        };
        f.write_str(s)
    }
}

impl Serialize for SignValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for SignValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        SignValue::from_i64(v)
            .ok_or_else(|| serde::de::Error::custom(format!("sign {v} not in {{-1,0,1}}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignRow {
    pub character: usize,
    pub degree: u64,
    pub indicator: SignValue,
    pub self_theta_dual: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignSummary {
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignReport {
    pub group: String,
    pub involution: String,
    pub rows: Vec<SignRow>,
    pub summary: SignSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftCheck {
    pub character: usize,
    pub h: u32,
    /// `ε_{θ'}(χ)` for `θ' = Int(h) ∘ θ`, computed directly.
    pub lhs: SignValue,
    /// `ε_θ(χ) · ω_χ(θ(h) h)`.
    pub rhs: SignValue,
    pub base: SignValue,
    pub factor: Cyclotomic,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FixedLineOutcome {
    Certified {
        sign: SignValue,
        indicator: SignValue,
        agrees: bool,
    },
    Inapplicable {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentRecord {
    pub character: usize,
    pub theta: String,
    pub constituent: usize,
    pub multiplicity: u64,
    pub tau_theta_dual: bool,
    pub sign_g: SignValue,
    pub sign_m: SignValue,
    pub hypothesis_met: bool,
    /// `Some(sign_g == sign_m)` when the hypothesis holds.
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GelfandKazhdanCheck {
    pub checked: usize,
    pub failures: Vec<usize>,
    pub ok: bool,
}

/// Class histogram of `g ↦ g θ(g)`, the data behind every twisted indicator.
#[derive(Debug, Clone)]
pub struct IndicatorKernel {
    theta: GroupAutomorphism,
    counts: Vec<u64>,
}

impl IndicatorKernel {
    pub fn new(group: &FiniteMatrixGroup, theta: &GroupAutomorphism) -> Result<Self> {
        if theta.group_label() != group.label() {
            return Err(Error::GroupMismatch(
                theta.group_label().into(),
                group.label().into(),
            ));
        }
        if !theta.is_involution() {
            return Err(Error::NotAnInvolution(theta.label().to_string()));
        }
        let mut counts = vec![0u64; group.num_classes()];
        for g in 0..group.order() as u32 {
            counts[group.class_of(group.mul(g, theta.apply(g))) as usize] += 1;
        }
        Ok(IndicatorKernel {
            theta: theta.clone(),
            counts,
        })
    }

    pub fn theta(&self) -> &GroupAutomorphism {
        &self.theta
    }

    /// `counts[c] = #{g : g θ(g) ∈ C_c}`.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `(1/|G|) Σ_g χ(g θ(g))`, checked to lie in `{-1, 0, 1}`.
    pub fn indicator(&self, chi: &ClassFunction) -> Result<SignValue> {
        let order: u64 = self.counts.iter().sum();
        if chi.values().len() != self.counts.len() {
            return Err(Error::GroupMismatch(
                chi.structure().group_label.clone(),
                self.theta.group_label().into(),
            ));
        }
        let sum = Cyclotomic::linear_combination(
            chi.values()
                .iter()
                .zip(&self.counts)
                .map(|(v, &n)| (v, Rational::new(n as i64, order as i64))),
        );
        SignValue::from_value(&sum).ok_or_else(|| {
            Error::Consistency(format!(
                "twisted indicator {sum} of a {} character is not a sign",
                chi.degree()
            ))
        })
    }
}

/// Sign computations over a group and its certified character table.
#[derive(Debug, Clone, Copy)]
pub struct SignLab<'a> {
    group: &'a FiniteMatrixGroup,
    table: &'a CharacterTable,
}

impl<'a> SignLab<'a> {
    pub fn new(group: &'a FiniteMatrixGroup, table: &'a CharacterTable) -> Result<Self> {
        if table.structure().group_label != group.label() {
            return Err(Error::GroupMismatch(
                table.structure().group_label.clone(),
                group.label().into(),
            ));
        }
        Ok(SignLab { group, table })
    }

    pub fn group(&self) -> &'a FiniteMatrixGroup {
        self.group
    }

    pub fn table(&self) -> &'a CharacterTable {
        self.table
    }

    fn character(&self, i: usize) -> Result<&'a ClassFunction> {
        self.table.irreducibles().get(i).ok_or_else(|| {
            Error::Precondition(format!("no irreducible #{i} in {}", self.group.label()))
        })
    }

    pub fn twisted_indicator(&self, chi: usize, theta: &GroupAutomorphism) -> Result<SignValue> {
        IndicatorKernel::new(self.group, theta)?.indicator(self.character(chi)?)
    }

    /// Indicators of every irreducible, with the self-θ-duality each must match.
    pub fn sign_report(&self, theta: &GroupAutomorphism) -> Result<SignReport> {
        let kernel = IndicatorKernel::new(self.group, theta)?;
        let mut rows = Vec::with_capacity(self.table.len());
        let mut summary = SignSummary::default();
        for (i, chi) in self.table.irreducibles().iter().enumerate() {
            let indicator = kernel.indicator(chi)?;
            let self_theta_dual = chi.twist(theta)? == chi.dual();
            if (indicator == SignValue::Zero) == self_theta_dual {
                return Err(Error::Consistency(format!(
                    "character #{i}: indicator {indicator} but self-θ-dual = {self_theta_dual}"
                )));
            }
            match indicator {
                SignValue::Plus => summary.plus += 1,
                SignValue::Minus => summary.minus += 1,
                SignValue::Zero => summary.zero += 1,
            }
            rows.push(SignRow {
                character: i,
                degree: chi.integer_degree().unwrap_or(0),
                indicator,
                self_theta_dual,
            });
        }
        Ok(SignReport {
            group: self.group.label().to_string(),
            involution: theta.label().to_string(),
            rows,
            summary,
        })
    }

    /// Compares `ε_{Int(h)∘θ}(χ)` with `ε_θ(χ) · ω_χ(θ(h) h)`.
    pub fn sign_shift_check(
        &self,
        chi: usize,
        theta: &GroupAutomorphism,
        h: u32,
    ) -> Result<ShiftCheck> {
        let base_kernel = IndicatorKernel::new(self.group, theta)?;
        self.sign_shift_with(&base_kernel, chi, h)
    }

    /// As [`Self::sign_shift_check`], reusing a kernel for `θ`.
    pub fn sign_shift_with(
        &self,
        base_kernel: &IndicatorKernel,
        chi: usize,
        h: u32,
    ) -> Result<ShiftCheck> {
        let g = self.group;
        let theta = base_kernel.theta();
        if h as usize >= g.order() {
            return Err(Error::NotAMember(format!("#{h} in {}", g.label())));
        }
        let z = g.mul(theta.apply(h), h);
        if !g.is_central(z) {
            return Err(Error::NotAnInvolution(format!(
                "Int(#{h})∘{}: θ(h)h is not central",
                theta.label()
            )));
        }
        let shifted = GroupAutomorphism::compose(&GroupAutomorphism::inner(g, h)?, theta)?;
        let character = self.character(chi)?;
        let lhs = IndicatorKernel::new(g, &shifted)?.indicator(character)?;
        let base = base_kernel.indicator(character)?;
        let factor = character.central_character(g, z)?;
        let product = &Cyclotomic::from_integer(base.as_i64()) * &factor;
        let rhs = SignValue::from_value(&product)
            .ok_or_else(|| Error::Consistency(format!("ε_θ · ω = {product} is not a sign")))?;
        Ok(ShiftCheck {
            character: chi,
            h,
            lhs,
            rhs,
            base,
            factor,
            ok: lhs == rhs,
        })
    }

    /// Elements `h` with `θ(h) h` central, in index order.
    pub fn admissible_shifts(&self, theta: &GroupAutomorphism) -> Vec<u32> {
        let g = self.group;
        (0..g.order() as u32)
            .filter(|&h| g.is_central(g.mul(theta.apply(h), h)))
            .collect()
    }

    /// Up to `count` shift checks on seeded random pairs `(χ, h)` with
    /// `ε_θ(χ) ≠ 0` and `h` admissible. The draw depends only on the seed.
    pub fn seeded_shift_checks(
        &self,
        theta: &GroupAutomorphism,
        count: usize,
        seed: u64,
    ) -> Result<Vec<ShiftCheck>> {
        let base = IndicatorKernel::new(self.group, theta)?;
        let admissible = self.admissible_shifts(theta);
        let signed: Vec<usize> = (0..self.table.len())
            .filter(|&i| {
                base.indicator(self.table.get(i))
                    .is_ok_and(|e| e != SignValue::Zero)
            })
            .collect();
        if admissible.is_empty() || signed.is_empty() {
            return Ok(Vec::new());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let h = admissible[rng.gen_range(0..admissible.len())];
            let chi = signed[rng.gen_range(0..signed.len())];
            out.push(self.sign_shift_with(&base, chi, h)?);
        }
        Ok(out)
    }

    /// Class histogram of a subgroup given by sorted member indices.
    fn subgroup_histogram(&self, members: &[u32]) -> Result<Vec<u64>> {
        if !self.group.is_subgroup(members) {
            return Err(Error::Precondition(
                "fixed-space dimension needs a subgroup".into(),
            ));
        }
        let mut hist = vec![0u64; self.group.num_classes()];
        for &k in members {
            hist[self.group.class_of(k) as usize] += 1;
        }
        Ok(hist)
    }

    fn fixed_dimension_from(&self, chi: usize, hist: &[u64]) -> Result<u64> {
        let n: u64 = hist.iter().sum();
        let dim = Cyclotomic::linear_combination(
            self.character(chi)?
                .values()
                .iter()
                .zip(hist)
                .filter(|(_, &c)| c > 0)
                .map(|(v, &c)| (v, Rational::new(c as i64, n as i64))),
        );
        match dim.as_integer() {
            Some(d) if d >= 0 => Ok(d as u64),
            _ => Err(Error::Consistency(format!(
                "fixed-space dimension {dim} is not a natural number"
            ))),
        }
    }

    /// `dim χ^K = (1/|K|) Σ_{k∈K} χ(k)` for a subgroup given by sorted member indices.
    pub fn fixed_space_dimension(&self, chi: usize, members: &[u32]) -> Result<u64> {
        let hist = self.subgroup_histogram(members)?;
        self.fixed_dimension_from(chi, &hist)
    }

    /// A `θ`-stable `K` with a one-dimensional `χ^K` forces `ε_θ(χ) = +1`
    /// whenever `χ^θ ≅ χ∨`: the invariant form is nonzero on the fixed line.
    pub fn fixed_line_certificate(
        &self,
        chi: usize,
        theta: &GroupAutomorphism,
        members: &[u32],
    ) -> Result<FixedLineOutcome> {
        self.fixed_line_certificates_for(&[chi], theta, members)
            .map(|mut v| v.pop().expect("one outcome per character"))
    }

    /// Fixed-line outcomes for every irreducible, checking `K` once.
    pub fn fixed_line_certificates(
        &self,
        theta: &GroupAutomorphism,
        members: &[u32],
    ) -> Result<Vec<FixedLineOutcome>> {
        let all: Vec<usize> = (0..self.table.len()).collect();
        self.fixed_line_certificates_for(&all, theta, members)
    }

    fn fixed_line_certificates_for(
        &self,
        chis: &[usize],
        theta: &GroupAutomorphism,
        members: &[u32],
    ) -> Result<Vec<FixedLineOutcome>> {
        if !theta.is_involution() {
            return Err(Error::NotAnInvolution(theta.label().to_string()));
        }
        let hist = self.subgroup_histogram(members)?;
        let stable = theta.preserves(members);
        let mut kernel = None;
        let mut out = Vec::with_capacity(chis.len());
        for &chi in chis {
            let dim = self.fixed_dimension_from(chi, &hist)?;
            let character = self.character(chi)?;
            let reason = if !stable {
                Some("θ does not preserve K".to_string())
            } else if dim != 1 {
                Some(format!("dim χ^K = {dim}"))
            } else if character.twist(theta)? != character.dual() {
                Some("χ^θ is not the dual of χ".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                out.push(FixedLineOutcome::Inapplicable { reason });
                continue;
            }
            if kernel.is_none() {
                kernel = Some(IndicatorKernel::new(self.group, theta)?);
            }
            let indicator = kernel
                .as_ref()
                .expect("kernel was just built")
                .indicator(character)?;
            out.push(FixedLineOutcome::Certified {
                sign: SignValue::Plus,
                indicator,
                agrees: indicator == SignValue::Plus,
            });
        }
        Ok(out)
    }

    /// `Σ_χ ε_θ(χ) χ(1)` against `#{g : g θ(g) = e}`.
    pub fn fs_counting_check(&self, theta: &GroupAutomorphism) -> Result<CountingCheck> {
        let kernel = IndicatorKernel::new(self.group, theta)?;
        let mut lhs = 0i64;
        for chi in self.table.irreducibles() {
            lhs += kernel.indicator(chi)?.as_i64() * chi.integer_degree().unwrap_or(0) as i64;
        }
        let rhs = kernel.counts()[0] as i64;
        Ok(CountingCheck {
            lhs,
            rhs,
            ok: lhs == rhs,
        })
    }

    /// Whether `χ^θ = χ∨` for every irreducible.
    pub fn gelfand_kazhdan_check(&self, theta: &GroupAutomorphism) -> Result<GelfandKazhdanCheck> {
        let mut failures = Vec::new();
        for (i, chi) in self.table.irreducibles().iter().enumerate() {
            if chi.twist(theta)? != chi.dual() {
                failures.push(i);
            }
        }
        Ok(GelfandKazhdanCheck {
            checked: self.table.len(),
            ok: failures.is_empty(),
            failures,
        })
    }
}

/// Everything needed to compare signs on `G` with signs on a Levi factor `M`.
#[derive(Debug)]
pub struct DescentContext<'a> {
    lab: SignLab<'a>,
    functors: &'a ParabolicFunctors,
    levi_table: &'a CharacterTable,
    theta: GroupAutomorphism,
    theta_levi: GroupAutomorphism,
    group_kernel: IndicatorKernel,
    levi_kernel: IndicatorKernel,
    multiplicities: Vec<Vec<u64>>,
    levi_theta_dual: Vec<bool>,
}

impl<'a> DescentContext<'a> {
    /// Requires `θ(M) = M`; `θ|_M` must then be an involution of `M`.
    pub fn new(
        lab: SignLab<'a>,
        functors: &'a ParabolicFunctors,
        levi_table: &'a CharacterTable,
        theta: &GroupAutomorphism,
    ) -> Result<Self> {
        let levi = functors.levi();
        let members: Vec<u32> = (0..levi.order() as u32)
            .map(|m| functors.levi_to_group(m))
            .collect();
        if !theta.preserves(&members) {
            return Err(Error::Precondition(format!(
                "{} does not preserve {}",
                theta.label(),
                levi.label()
            )));
        }
        let theta_levi = theta.restrict_to(levi, &members)?;
        let group_kernel = IndicatorKernel::new(lab.group, theta)?;
        let levi_kernel = IndicatorKernel::new(levi, &theta_levi)?;
        let multiplicities = functors.restriction_multiplicities(lab.table, levi_table)?;
        let levi_theta_dual = levi_table
            .irreducibles()
            .iter()
            .map(|tau| Ok(tau.twist(&theta_levi)? == tau.dual()))
            .collect::<Result<_>>()?;
        Ok(DescentContext {
            lab,
            functors,
            levi_table,
            theta: theta.clone(),
            theta_levi,
            group_kernel,
            levi_kernel,
            multiplicities,
            levi_theta_dual,
        })
    }

    pub fn theta_levi(&self) -> &GroupAutomorphism {
        &self.theta_levi
    }

    /// `mult[χ][τ] = ⟨R χ, τ⟩`.
    pub fn multiplicities(&self) -> &[Vec<u64>] {
        &self.multiplicities
    }

    /// One record per constituent of `R χ`; requires `χ^θ = χ∨`.
    pub fn descent_check(&self, chi: usize) -> Result<Vec<DescentRecord>> {
        let character = self.lab.character(chi)?;
        if character.twist(&self.theta)? != character.dual() {
            return Err(Error::Precondition(format!(
                "character #{chi} is not θ-self-dual"
            )));
        }
        let sign_g = self.group_kernel.indicator(character)?;
        let theta = self.functors.theta().to_string();
        let mut records = Vec::new();
        for (j, &multiplicity) in self.multiplicities[chi].iter().enumerate() {
            if multiplicity == 0 {
                continue;
            }
            let tau_theta_dual = self.levi_theta_dual[j];
            let sign_m = self.levi_kernel.indicator(self.levi_table.get(j))?;
            let hypothesis_met = multiplicity == 1 && tau_theta_dual;
            records.push(DescentRecord {
                character: chi,
                theta: theta.clone(),
                constituent: j,
                multiplicity,
                tau_theta_dual,
                sign_g,
                sign_m,
                hypothesis_met,
                agrees: hypothesis_met.then_some(sign_g == sign_m),
            });
        }
        Ok(records)
    }

    /// Records for every `θ`-self-dual irreducible of `G`.
    pub fn descent_all(&self) -> Result<Vec<DescentRecord>> {
        let mut out = Vec::new();
        for (i, chi) in self.lab.table.irreducibles().iter().enumerate() {
            if chi.twist(&self.theta)? == chi.dual() {
                out.extend(self.descent_check(i)?);
            }
        }
        Ok(out)
    }
}
