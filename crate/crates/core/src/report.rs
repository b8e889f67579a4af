//! Evaluating parsed queries and rendering the results.
//!
//! [`ExplainReport`] is the structured form behind `stc explain
//! --structured`. Its JSON layout is versioned by [`SCHEMA_VERSION`] and
//! documented in `docs/structured-output.md`; the human text is not.

use std::fmt::Write as _;

use serde::Serialize;

use crate::dsl::{QueryExpression, Selector};
use crate::geometry::{Boost, ConeRegion};
use crate::semantics::{
    any_frame_eval, compute_support, dstc_eval, dstc_eval_via_clause2, frame_eval, frame_table,
    free_choice_eval, lewis_alt_eval, FrameWitness, SemanticsError, Verdict,
};
use crate::worlds::{Scenario, World};

pub const SCHEMA_VERSION: u32 = 1;

/// Runs the evaluator named by the query's selector.
pub fn evaluate(s: &Scenario, q: &QueryExpression) -> Result<Verdict, SemanticsError> {
    let (phi, psi) = (&q.antecedent, &q.consequent);
    match &q.selector {
        Selector::Dstc => dstc_eval(s, phi, psi),
        Selector::Clause2 => dstc_eval_via_clause2(s, phi, psi),
        Selector::Footnote => lewis_alt_eval(s, phi, psi),
        Selector::Frame(v) => frame_eval(s, phi, psi, &Boost::new(v.clone())?),
        Selector::AnyFrame => any_frame_eval(s, phi, psi),
        Selector::FreeChoice => free_choice_eval(s, phi, psi),
    }
}

/// Names of the points whose cones make up `region`, in declaration
/// order. Coincident points are named by the first one declared.
pub fn region_apex_names(s: &Scenario, region: &ConeRegion) -> Vec<String> {
    let mut ids: Vec<usize> = region
        .apices()
        .iter()
        .map(|a| {
            s.points()
                .iter()
                .position(|(_, p)| p == a)
                .expect("regions are built from scenario points")
        })
        .collect();
    ids.sort_unstable();
    ids.into_iter().map(|i| s.points()[i].0.clone()).collect()
}

/// `F(A) ∪ F(B)`, or `{}` for the empty region.
pub fn render_region(names: &[String]) -> String {
    if names.is_empty() {
        return "{}".into();
    }
    names
        .iter()
        .map(|n| format!("F({n})"))
        .collect::<Vec<_>>()
        .join(" ∪ ")
}

fn render_order(s: &Scenario, frame: &FrameWitness) -> String {
    frame
        .order
        .iter()
        .map(|group| {
            group
                .iter()
                .map(|&p| s.point_name(p))
                .collect::<Vec<_>>()
                .join(" = ")
        })
        .collect::<Vec<_>>()
        .join(" < ")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionEntry {
    pub apices: Vec<String>,
    pub region: String,
}

impl RegionEntry {
    fn new(s: &Scenario, region: &ConeRegion) -> Self {
        let apices = region_apex_names(s, region);
        RegionEntry {
            region: render_region(&apices),
            apices,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhiWorldEntry {
    pub world: String,
    /// Points where the world differs from the actual world.
    pub diff: Vec<String>,
    pub deviation: RegionEntry,
    /// Minimal deviation region among the φ-worlds.
    pub primary: bool,
    /// Among the worlds the chosen evaluator treats as most similar.
    pub selected: bool,
    pub consequent: bool,
    /// Indices into `phi_worlds` of the strictly more similar φ-worlds.
    pub dominated_by: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessEntry {
    pub falsifier: String,
    pub dominated_by: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrameEntry {
    pub velocity: String,
    pub order: Vec<Vec<String>>,
    pub ordering: String,
    pub truth: bool,
}

impl FrameEntry {
    fn new(s: &Scenario, frame: &FrameWitness, truth: bool) -> Self {
        FrameEntry {
            velocity: frame.velocity.to_string(),
            order: frame
                .order
                .iter()
                .map(|g| g.iter().map(|&p| s.point_name(p).to_string()).collect())
                .collect(),
            ordering: render_order(s, frame),
            truth,
        }
    }
}

/// Everything behind one verdict. All lists follow world enumeration
/// order, so identical inputs give identical reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExplainReport {
    pub schema_version: u32,
    pub query: String,
    pub evaluator: String,
    pub truth: bool,
    pub vacuous: bool,
    pub actual: String,
    pub phi_worlds: Vec<PhiWorldEntry>,
    pub support: Vec<RegionEntry>,
    pub witnesses: Vec<WitnessEntry>,
    pub frame: Option<FrameEntry>,
    pub frames: Vec<FrameEntry>,
}

impl ExplainReport {
    pub fn build(s: &Scenario, q: &QueryExpression) -> Result<Self, SemanticsError> {
        let verdict = evaluate(s, q)?;
        let phi = q.antecedent.compile(s)?;
        let psi = q.consequent.compile(s)?;
        let table = s.world_table();
        let idx: Vec<usize> = (0..table.worlds.len())
            .filter(|&i| phi.holds(&table.worlds[i].world))
            .collect();
        let render = |w: &World| w.render(s);

        let phi_worlds = idx
            .iter()
            .map(|&i| {
                let pw = &table.worlds[i];
                let dominated_by: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|&(_, &j)| table.closer(j, i))
                    .map(|(k, _)| k)
                    .collect();
                PhiWorldEntry {
                    world: render(&pw.world),
                    diff: pw
                        .diff
                        .iter()
                        .map(|&p| s.point_name(p).to_string())
                        .collect(),
                    deviation: RegionEntry::new(s, &pw.region),
                    primary: dominated_by.is_empty(),
                    selected: verdict.primaries.contains(&pw.world),
                    consequent: psi.holds(&pw.world),
                    dominated_by,
                }
            })
            .collect();

        let frames = match &q.selector {
            Selector::Frame(_) | Selector::AnyFrame => {
                frame_table(s, &q.antecedent, &q.consequent)?
                    .iter()
                    .map(|row| {
                        let frame = row
                            .verdict
                            .frame
                            .as_ref()
                            .expect("frame verdicts carry a frame");
                        FrameEntry::new(s, frame, row.verdict.truth)
                    })
                    .collect()
            }
            _ => Vec::new(),
        };

        Ok(ExplainReport {
            schema_version: SCHEMA_VERSION,
            query: q.to_string(),
            evaluator: verdict.evaluator.to_string(),
            truth: verdict.truth,
            vacuous: verdict.vacuous,
            actual: render(s.actual()),
            phi_worlds,
            support: compute_support(s, &q.antecedent)?
                .regions()
                .iter()
                .map(|r| RegionEntry::new(s, r))
                .collect(),
            witnesses: verdict
                .witnesses
                .iter()
                .map(|w| WitnessEntry {
                    falsifier: render(&w.falsifier),
                    dominated_by: w.dominated_by.as_ref().map(render),
                })
                .collect(),
            frame: verdict
                .frame
                .as_ref()
                .map(|f| FrameEntry::new(s, f, verdict.truth)),
            frames,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self, style: &Style) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "query:     {}", self.query);
        let _ = writeln!(out, "evaluator: {}", self.evaluator);
        let _ = writeln!(
            out,
            "verdict:   {}",
            style.verdict(self.truth, self.vacuous)
        );
        let _ = writeln!(out, "actual:    {}", self.actual);
        if self.vacuous {
            let _ = writeln!(out, "no φ-worlds: the antecedent is impossible");
            return out;
        }
        if let Some(f) = &self.frame {
            let _ = writeln!(out, "frame:     v = {}, {}", f.velocity, f.ordering);
        }

        let _ = writeln!(out, "\nφ-worlds ({}):", self.phi_worlds.len());
        let width = self
            .phi_worlds
            .iter()
            .map(|w| w.world.len())
            .max()
            .unwrap_or(0);
        for (k, w) in self.phi_worlds.iter().enumerate() {
            let mut tags = Vec::new();
            if w.primary {
                tags.push("primary".to_string());
            }
            if !w.dominated_by.is_empty() {
                let by: Vec<String> = w
                    .dominated_by
                    .iter()
                    .map(|j| format!("W{}", j + 1))
                    .collect();
                tags.push(format!("dominated by {}", by.join(", ")));
            }
            if w.selected && self.evaluator != "dstc" && self.evaluator != "clause2" {
                tags.push("selected".into());
            }
            tags.push(format!(
                "ψ {}",
                if w.consequent { "holds" } else { "fails" }
            ));
            let _ = writeln!(
                out,
                "  W{:<3} {:width$}  D = {}  [{}]",
                k + 1,
                w.world,
                w.deviation.region,
                tags.join("; "),
            );
        }

        let support: Vec<&str> = self.support.iter().map(|r| r.region.as_str()).collect();
        let _ = writeln!(out, "\nsupport Σ: {{ {} }}", support.join(", "));

        if !self.witnesses.is_empty() {
            let _ = writeln!(out, "\nfalsifying worlds:");
            for w in &self.witnesses {
                match &w.dominated_by {
                    Some(d) => {
                        let _ = writeln!(out, "  {}  (out-ranked by {})", w.falsifier, d);
                    }
                    None => {
                        let _ = writeln!(out, "  {}", w.falsifier);
                    }
                }
            }
        }

        if !self.frames.is_empty() {
            let _ = writeln!(out, "\nframes:");
            let _ = write!(out, "{}", frames_table(&self.frames, style));
        }
        out
    }
}

/// Terminal styling; plain unless colour is requested.
#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub color: bool,
}

impl Style {
    /// Reads `STC_COLOR`. Anything but `1` means no colour.
    pub fn from_env() -> Self {
        Style {
            color: std::env::var("STC_COLOR").is_ok_and(|v| v == "1"),
        }
    }

    pub fn truth(&self, truth: bool) -> String {
        let word = if truth { "TRUE" } else { "FALSE" };
        match (self.color, truth) {
            (false, _) => word.into(),
            (true, true) => format!("\x1b[32m{word}\x1b[0m"),
            (true, false) => format!("\x1b[31m{word}\x1b[0m"),
        }
    }

    pub fn verdict(&self, truth: bool, vacuous: bool) -> String {
        let mut s = self.truth(truth);
        if vacuous {
            s.push_str(" vacuous");
        }
        s
    }
}

fn frames_table(rows: &[FrameEntry], style: &Style) -> String {
    let vw = rows
        .iter()
        .map(|r| r.velocity.len())
        .max()
        .unwrap_or(0)
        .max("velocity".len());
    let ow = rows
        .iter()
        .map(|r| r.ordering.chars().count())
        .max()
        .unwrap_or(0)
        .max("ordering".len());
    let mut out = format!("  {:vw$}  {:ow$}  verdict\n", "velocity", "ordering");
    for r in rows {
        let pad = ow - r.ordering.chars().count();
        let _ = writeln!(
            out,
            "  {:vw$}  {}{}  {}",
            r.velocity,
            r.ordering,
            " ".repeat(pad),
            style.truth(r.truth)
        );
    }
    out
}

/// The `stc frames` table: one row per realizable ordering, then the
/// any-frame verdicts for the query and for its negated-consequent twin.
pub fn frames_report(
    s: &Scenario,
    q: &QueryExpression,
    style: &Style,
) -> Result<String, SemanticsError> {
    let rows: Vec<FrameEntry> = frame_table(s, &q.antecedent, &q.consequent)?
        .iter()
        .map(|row| {
            FrameEntry::new(
                s,
                row.verdict.frame.as_ref().expect("frame"),
                row.verdict.truth,
            )
        })
        .collect();
    let twin = q.consequent.clone().negate();
    let here = any_frame_eval(s, &q.antecedent, &q.consequent)?;
    let there = any_frame_eval(s, &q.antecedent, &twin)?;
    let mut out = frames_table(&rows, style);
    let _ = writeln!(
        out,
        "\nanyframe ({}) => ({}): {}",
        q.antecedent,
        q.consequent,
        style.truth(here.truth)
    );
    let _ = writeln!(
        out,
        "anyframe ({}) => ({}): {}",
        q.antecedent,
        twin,
        style.truth(there.truth)
    );
    Ok(out)
}
