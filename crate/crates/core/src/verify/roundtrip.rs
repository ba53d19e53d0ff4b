use serde::{Deserialize, Serialize};

use super::Verifier;
use crate::target::Target;

/// Representation systems a round trip alternates between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Latex,
    Maple,
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "latex" | "semantic-latex" => Ok(System::Latex),
            "maple" => Ok(System::Maple),
            other => Err(format!("unknown system `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub index: usize,
    pub text: String,
    pub system: System,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepError {
    /// Index of the step that could not be produced.
    pub step: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundTripReport {
    pub steps: Vec<Step>,
    pub fixed_point_found: bool,
    pub fixed_point_step: Option<usize>,
    /// Completed forward-backward cycles.
    pub cycles_used: usize,
    pub error: Option<StepError>,
}

impl RoundTripReport {
    /// One line per step in a two-column layout.
    pub fn table(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let sys = match s.system {
                System::Latex => "latex",
                System::Maple => "maple",
            };
            out.push_str(&format!("{:>4}  {sys:<5}  {}\n", s.index, s.text));
        }
        match (self.fixed_point_step, &self.error) {
            (_, Some(e)) => out.push_str(&format!("error at step {}: {}\n", e.step, e.message)),
            (Some(k), None) => out.push_str(&format!("fixed point at step {k}\n")),
            (None, None) => out.push_str(&format!("no fixed point within {} cycle(s)\n", self.cycles_used)),
        }
        out
    }
}

impl Verifier {
    /// Alternates translations until a representation repeats the one two steps
    /// earlier or `max_cycles` forward-backward cycles have run.
    pub fn round_trip(&self, input: &str, start: System, max_cycles: usize) -> RoundTripReport {
        let mut report = RoundTripReport {
            steps: vec![Step {
                index: 0,
                text: input.to_string(),
                system: start,
            }],
            fixed_point_found: false,
            fixed_point_step: None,
            cycles_used: 0,
            error: None,
        };
        let translator = self.translator(Target::Maple);
        for _ in 0..max_cycles {
            for _ in 0..2 {
                let last = report.steps.last().expect("step 0");
                let index = last.index + 1;
                let next = match last.system {
                    System::Latex => translator
                        .translate_str(&last.text)
                        .map(|r| (r.output, System::Maple))
                        .map_err(|e| e.to_string()),
                    System::Maple => self
                        .index
                        .translate_str(&last.text)
                        .map(|r| (r.output, System::Latex))
                        .map_err(|e| e.to_string()),
                };
                match next {
                    Ok((text, system)) => report.steps.push(Step { index, text, system }),
                    Err(message) => {
                        report.error = Some(StepError { step: index, message });
                        return report;
                    }
                }
                let n = report.steps.len();
                if n >= 3 && report.steps[n - 1].text == report.steps[n - 3].text {
                    report.fixed_point_found = true;
                    report.fixed_point_step = Some(n - 3);
                }
            }
            report.cycles_used += 1;
            if report.fixed_point_found {
                break;
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;

    fn v() -> Verifier {
        Verifier::new(Lexicon::bundled()).unwrap()
    }

    #[test]
    fn fraction_reaches_fixed_point() {
        let r = v().round_trip("\\frac{\\cos@{a\\Theta}}{2}", System::Latex, 4);
        let texts: Vec<_> = r.steps.iter().map(|s| s.text.as_str()).collect();
        assert_eq!(
            texts,
            [
                "\\frac{\\cos@{a\\Theta}}{2}",
                "(cos(a*Theta))/(2)",
                "\\frac{1}{2}\\idot\\cos@{a\\idot\\Theta}",
                "(1)/(2)*cos(a*Theta)",
                "\\frac{1}{2}\\idot\\cos@{a\\idot\\Theta}",
            ]
        );
        assert_eq!(r.fixed_point_step, Some(2));
        assert_eq!(r.cycles_used, 2);
    }

    #[test]
    fn fixed_point_reentry() {
        let r = v().round_trip("\\frac{1}{2}\\idot\\cos@{a\\idot\\Theta}", System::Latex, 4);
        assert_eq!(r.fixed_point_step, Some(0));
        assert_eq!(r.cycles_used, 1);
    }

    #[test]
    fn elliptic_chain() {
        let r = v().round_trip("\\EllIntF@{\\phi}{k}", System::Latex, 3);
        assert!(!r.fixed_point_found);
        assert_eq!(r.steps.len(), 7);
        for k in 1..=3 {
            assert_eq!(r.steps[2 * k].text.matches("\\asin").count(), k);
        }
    }

    #[test]
    fn errors_stop_the_trip() {
        let r = v().round_trip("\\deriv[2]{x^2}{x}", System::Latex, 2);
        assert_eq!(r.error.as_ref().map(|e| e.step), Some(2));
        assert!(!r.fixed_point_found);
    }
}
