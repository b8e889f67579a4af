use crate::geometry::ConeRegion;
use crate::worlds::{validate_free_choice, Scenario};

use super::{Comparison, Evaluator, Proposition, SemanticsError, Verdict, Witness};

/// `χ => ψ` for a free choice `χ` made at `r`: ψ holds in every χ-world
/// that agrees with the actual world everywhere outside `F(r)`.
///
/// `choice` must be an atom `var = value` where `var` is a declared choice
/// that passes [`validate_free_choice`] and `value` is not its actual value.
pub fn free_choice_eval(
    s: &Scenario,
    choice: &Proposition,
    psi: &Proposition,
) -> Result<Verdict, SemanticsError> {
    let (variable, value) = match choice {
        Proposition::Atom {
            variable,
            op: Comparison::Eq,
            value,
        } => (variable, value),
        _ => return Err(SemanticsError::NotAChoiceAtom),
    };
    let report = validate_free_choice(s, variable)?;
    if !report.valid {
        let failing: Vec<&str> = report.failing.iter().map(|v| v.as_str()).collect();
        return Err(SemanticsError::ChoiceNotValidated {
            variable: variable.clone(),
            failing: failing.join(", "),
        });
    }
    let chi = choice.compile(s)?;
    let var = s.variable_index(variable).expect("validated choice");
    if s.actual().domain_indices()[var] == s.value_index(var, value).expect("compiled atom") {
        return Err(SemanticsError::NotAnAlternative {
            variable: variable.clone(),
            value: value.clone(),
        });
    }
    let psi_c = psi.compile(s)?;

    let cone = ConeRegion::cone(s.point(report.point).clone());
    let table = s.world_table();
    let within: Vec<usize> = (0..table.worlds.len())
        .filter(|&i| {
            let pw = &table.worlds[i];
            chi.holds(&pw.world) && pw.diff.iter().all(|&p| cone.contains(s.point(p)))
        })
        .collect();
    let truth = within.iter().all(|&i| psi_c.holds(&table.worlds[i].world));

    debug_assert_eq!(Ok(truth), super::dstc_eval(s, choice, psi).map(|v| v.truth));
    Ok(Verdict {
        evaluator: Evaluator::FreeChoice,
        truth,
        vacuous: false,
        primaries: within
            .iter()
            .map(|&i| table.worlds[i].world.clone())
            .collect(),
        witnesses: within
            .iter()
            .filter(|&&i| !psi_c.holds(&table.worlds[i].world))
            .map(|&i| Witness {
                falsifier: table.worlds[i].world.clone(),
                dominated_by: None,
            })
            .collect(),
        frame: None,
    })
}
