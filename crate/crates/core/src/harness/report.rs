use std::fmt::Write as _;

/// What counts as a pass for a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PassCondition {
    /// Every sample satisfies the inequality.
    NoViolations,
    /// The probe is looking for counterexamples and must find at least one.
    CounterexampleFound,
}

/// Outcome of one Monte Carlo or grid check.
///
/// `worst_margin` is the most negative slack seen (slack is `lhs - rhs` of
/// the inequality being checked, so negative means violated) and
/// `worst_case_payload` describes the sample that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationReport {
    pub check_name: String,
    pub total: u64,
    pub violations: u64,
    pub worst_margin: f64,
    pub worst_case_payload: String,
    pub pass_condition: PassCondition,
}

impl ViolationReport {
    pub fn passed(&self) -> bool {
        match self.pass_condition {
            PassCondition::NoViolations => self.violations == 0,
            PassCondition::CounterexampleFound => self.violations >= 1,
        }
    }

    /// `name<TAB>total<TAB>violations<TAB>worst_margin`, then the payload of
    /// the worst sample as indented lines when any sample violated.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}\t{}\t{}\t{:.12e}\n",
            self.check_name, self.total, self.violations, self.worst_margin
        );
        if self.violations > 0 && !self.worst_case_payload.is_empty() {
            for line in self.worst_case_payload.lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }
}

/// Running tally for one check, mergeable in a fixed order.
#[derive(Clone, Debug)]
pub(crate) struct Tally {
    pub total: u64,
    pub violations: u64,
    pub worst_margin: f64,
    pub payload: String,
}

impl Default for Tally {
    fn default() -> Self {
        Self {
            total: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            payload: String::new(),
        }
    }
}

impl Tally {
    pub fn record(&mut self, slack: f64, violated: bool, payload: impl FnOnce() -> String) {
        self.total += 1;
        if violated {
            self.violations += 1;
        }
        if slack < self.worst_margin || (slack.is_nan() && !self.worst_margin.is_nan()) {
            self.worst_margin = slack;
            self.payload = payload();
        }
    }

    /// Appends `later`; ties keep the earlier worst case.
    pub fn merge(&mut self, later: Tally) {
        self.total += later.total;
        self.violations += later.violations;
        if later.worst_margin < self.worst_margin {
            self.worst_margin = later.worst_margin;
            self.payload = later.payload;
        }
    }

    pub fn into_report(self, name: impl Into<String>, pass_condition: PassCondition) -> ViolationReport {
        ViolationReport {
            check_name: name.into(),
            total: self.total,
            violations: self.violations,
            worst_margin: self.worst_margin,
            worst_case_payload: self.payload,
            pass_condition,
        }
    }
}
