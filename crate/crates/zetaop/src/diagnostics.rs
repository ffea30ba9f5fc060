//! Series diagnostics: the artifact's representation of "this series
//! converges / diverges", as a partial-sum trace with term ratios and an
//! evidence-based verdict.

use crate::numerics::Complex;

/// Outcome of an adaptive or fixed-length summation.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Stabilised; `certified` on the parent diagnostics tells whether a
    /// tail bound (or exact termination) backs the value.
    Converged { value: Complex, n_used: usize },
    /// Evidence of divergence; never a proof.
    Diverging { evidence: String },
    /// A term is not a well-defined complex number (non-removable pole).
    UndefinedTerm { index: usize },
}

/// Partial-sum trace, term-ratio trace, and verdict for one series run.
#[derive(Debug, Clone)]
pub struct SeriesDiagnostics {
    pub partial_sums: Vec<Complex>,
    /// Magnitude ratios of consecutive diagnostic terms. For series whose
    /// odd terms vanish identically (the inverse-operator series), these
    /// are the ratios of consecutive even-index terms.
    pub term_ratios: Vec<f64>,
    /// |term_n| per index, aligned with `partial_sums`.
    pub term_magnitudes: Vec<f64>,
    pub verdict: Verdict,
    /// True when a tail bound or exact termination certifies the verdict;
    /// heuristic stops are reported uncertified.
    pub certified: bool,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

impl SeriesDiagnostics {
    /// CSV trace: n, Re partial, Im partial, |term|, ratio. The ratio
    /// column is blank where no ratio is defined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re_partial,im_partial,abs_term,ratio\n");
        for (n, s) in self.partial_sums.iter().enumerate() {
            let term = self.term_magnitudes.get(n).map(|t| fmt(*t)).unwrap_or_default();
            let ratio = self.term_ratios.get(n).map(|r| fmt(*r)).unwrap_or_default();
            out.push_str(&format!("{n},{},{},{term},{ratio}\n", fmt(s.re), fmt(s.im)));
        }
        out
    }

    /// Verdict and metadata as a single JSON object.
    pub fn to_json(&self) -> String {
        let mut fields = vec![format!("\"terms\": {}", self.partial_sums.len())];
        match &self.verdict {
            Verdict::Converged { value, n_used } => {
                fields.push("\"verdict\": \"converged\"".into());
                fields.push(format!(
                    "\"value\": {{\"re\": {}, \"im\": {}}}",
                    fmt(value.re),
                    fmt(value.im)
                ));
                fields.push(format!("\"n_used\": {n_used}"));
            }
            Verdict::Diverging { evidence } => {
                fields.push("\"verdict\": \"diverging\"".into());
                fields.push(format!("\"evidence\": \"{}\"", evidence.replace('"', "'")));
            }
            Verdict::UndefinedTerm { index } => {
                fields.push("\"verdict\": \"undefined_term\"".into());
                fields.push(format!("\"index\": {index}"));
            }
        }
        fields.push(format!("\"certified\": {}", self.certified));
        format!("{{{}}}", fields.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn csv_and_json_shapes() {
        let d = SeriesDiagnostics {
            partial_sums: vec![Complex64::new(1.0, 0.0), Complex64::new(1.5, -0.25)],
            term_ratios: vec![0.5],
            term_magnitudes: vec![1.0, 0.559016994374947],
            verdict: Verdict::Converged { value: Complex64::new(1.5, -0.25), n_used: 1 },
            certified: true,
        };
        let csv = d.to_csv();
        assert!(csv.starts_with("n,re_partial,im_partial,abs_term,ratio\n"));
        assert_eq!(csv.lines().count(), 3);
        let json = d.to_json();
        assert!(json.contains("\"verdict\": \"converged\""));
        assert!(json.contains("\"certified\": true"));

        let e = SeriesDiagnostics {
            partial_sums: vec![],
            term_ratios: vec![],
            term_magnitudes: vec![],
            verdict: Verdict::UndefinedTerm { index: 0 },
            certified: false,
        };
        assert!(e.to_json().contains("\"undefined_term\""));
    }
}
