use super::{LatticeInvolution, ParabolicDatum, RootDatum};
use crate::error::Result;
use crate::subset::SimpleSubset;

/// A named (datum, involution, parabolic) triple with its expected verdict.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub datum: RootDatum,
    pub involution: LatticeInvolution,
    pub parabolic: ParabolicDatum,
    /// Whether the triple is expected to satisfy every hypothesis.
    pub expect_pass: bool,
}

fn fixture(
    name: String,
    datum: &RootDatum,
    t: LatticeInvolution,
    theta: &SimpleSubset,
    expect: bool,
) -> Result<Fixture> {
    Ok(Fixture {
        name,
        parabolic: ParabolicDatum::new(datum, theta)?,
        datum: datum.clone(),
        involution: t,
        expect_pass: expect,
    })
}

/// Siegel parabolic of `B_n`: `Θ = {ε_i − ε_{i+1}}`, involution `−1`.
pub fn siegel(n: usize) -> Result<Fixture> {
    let d = RootDatum::type_b(n)?;
    let theta = SimpleSubset::new(1..n);
    fixture(
        format!("siegel B{n}"),
        &d,
        LatticeInvolution::negative_identity(n),
        &theta,
        true,
    )
}

/// The shipped library:
/// - `GL_n`, `−1`, every Θ, `n ≤ 5`
/// - `GL_n`, the longest Weyl element, every Θ stable under `i ↦ n − i`
/// - Siegel parabolics of `B_n`, `n ≤ 4`, and `B_n` with `−1` for every Θ
/// - `GL_2` with `ε_1 ↦ −ε_2`, `ε_2 ↦ −ε_1`, which fixes `Φ⁺` and must fail.
pub fn fixtures() -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for n in 2..=5 {
        let d = RootDatum::type_a(n)?;
        for theta in SimpleSubset::all(n - 1) {
            out.push(fixture(
                format!("GL{n} neg-id {{{theta}}}"),
                &d,
                LatticeInvolution::negative_identity(n),
                &theta,
                true,
            )?);
            if theta.iter().all(|i| theta.contains(n - i)) {
                out.push(fixture(
                    format!("GL{n} reversal {{{theta}}}"),
                    &d,
                    LatticeInvolution::reversal(n),
                    &theta,
                    true,
                )?);
            }
        }
    }
    for n in 1..=4 {
        out.push(siegel(n)?);
        let d = RootDatum::type_b(n)?;
        for theta in SimpleSubset::all(n) {
            out.push(fixture(
                format!("B{n} neg-id {{{theta}}}"),
                &d,
                LatticeInvolution::negative_identity(n),
                &theta,
                true,
            )?);
        }
    }
    let d = RootDatum::type_a(2)?;
    out.push(fixture(
        "GL2 swap-negate {}".into(),
        &d,
        LatticeInvolution::new(vec![vec![0, -1], vec![-1, 0]])?,
        &SimpleSubset::empty(),
        false,
    )?);
    Ok(out)
}
