//! The certificate document: a configuration, a line weighting and its claimed value.
//!
//! ```json
//! {"n": 12, "config": [[5, 6]], "weights": [["R", 1, "1", "2"], ["D+", -3, "2", "3"]], "value": "7/6"}
//! ```
//!
//! Weights are `[tag, index-or-offset, numerator, denominator]` with the
//! rationals kept as decimal integer strings, so nothing is ever rounded.

use std::str::FromStr;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use super::{verify_certificate, weighting_value, CertificateVerdict, LineWeighting};
use crate::board::{LineId, PartialConfig, Square};
use crate::error::{QueensError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub n: usize,
    pub config: Vec<[usize; 2]>,
    pub weights: Vec<(String, i64, String, String)>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentVerdict {
    pub verdict: CertificateVerdict,
    /// Whether the document's `value` field equals the recomputed total.
    pub value_matches: bool,
}

impl DocumentVerdict {
    pub fn passed(&self) -> bool {
        self.verdict.certified && self.value_matches
    }
}

impl CertificateDocument {
    pub fn new(cfg: &PartialConfig, w: &LineWeighting) -> Self {
        CertificateDocument {
            n: cfg.n(),
            config: cfg.queens().iter().map(|q| [q.row, q.col]).collect(),
            weights: w
                .iter()
                .map(|(l, v)| {
                    (
                        l.tag().to_string(),
                        l.coordinate(),
                        v.numer().to_string(),
                        v.denom().to_string(),
                    )
                })
                .collect(),
            value: weighting_value(w).to_string(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QueensError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn config(&self) -> Result<PartialConfig> {
        PartialConfig::new(self.n, self.config.iter().map(|&[r, c]| Square::new(r, c)))
    }

    pub fn weighting(&self) -> Result<LineWeighting> {
        let mut w = LineWeighting::new(self.n);
        for (i, (tag, coord, num, den)) in self.weights.iter().enumerate() {
            let bad = |what: &str| QueensError::Precondition(format!("weight entry {i}: {what}"));
            let line = LineId::from_tag(tag, *coord).ok_or_else(|| bad("unknown line tag"))?;
            let num = BigInt::from_str(num).map_err(|_| bad("numerator is not an integer"))?;
            let den = BigInt::from_str(den).map_err(|_| bad("denominator is not an integer"))?;
            if den == BigInt::from(0) {
                return Err(bad("zero denominator"));
            }
            w.set(line, BigRational::new(num, den))?;
        }
        Ok(w)
    }

    pub fn claimed_value(&self) -> Result<BigRational> {
        BigRational::from_str(&self.value)
            .map_err(|_| QueensError::Precondition(format!("value {:?} is not a rational", self.value)))
    }

    /// Re-checks the certificate from scratch in exact arithmetic.
    pub fn verify(&self) -> Result<DocumentVerdict> {
        let cfg = self.config()?;
        let w = self.weighting()?;
        let verdict = verify_certificate(&cfg, &w)?;
        let value_matches = self.claimed_value()? == verdict.value;
        Ok(DocumentVerdict {
            verdict,
            value_matches,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn round_trip_and_tampering() {
        // an empty 2x2 board: rows weighted 1/2 each cannot cover, rows at 1 can
        let cfg = PartialConfig::empty(2).unwrap();
        let mut w = LineWeighting::new(2);
        w.set(LineId::DiagMinus(0), r(1, 1)).unwrap();
        w.set(LineId::DiagPlus(0), r(1, 1)).unwrap();
        let doc = CertificateDocument::new(&cfg, &w);
        assert_eq!(doc.value, "2");
        let parsed = CertificateDocument::parse(&doc.to_json()).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(parsed.weighting().unwrap(), w);
        // covers everything but the value 2 is not below n - 0 = 2
        let v = parsed.verify().unwrap();
        assert!(v.verdict.cover.covered);
        assert!(!v.passed());

        let mut tampered = doc.clone();
        tampered.weights[0].2 = "1".into();
        tampered.weights[0].3 = "2".into();
        let v = tampered.verify().unwrap();
        assert!(!v.verdict.cover.covered);
        assert!(v.verdict.cover.first_violation.is_some());
        assert!(!v.value_matches);
    }

    #[test]
    fn malformed_entries() {
        let text = r#"{"n":3,"config":[],"weights":[["X",1,"1","1"]],"value":"1"}"#;
        assert!(CertificateDocument::parse(text).unwrap().weighting().is_err());
        let text = r#"{"n":3,"config":[],"weights":[["R",1,"1","0"]],"value":"1"}"#;
        assert!(CertificateDocument::parse(text).unwrap().weighting().is_err());
        assert!(matches!(
            CertificateDocument::parse("{\"n\": 3,"),
            Err(QueensError::Parse { .. })
        ));
    }
}
