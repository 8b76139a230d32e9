use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::Serialize;

use super::corrupt::{Corruption, Noiser};
use super::profile::NoiseOp;
use crate::error::Result;
use crate::types::tokenize;

/// Lines processed per parallel batch.
const CHUNK_LINES: usize = 4096;

/// Realized operation counts for a generated corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct NoiseStats {
    pub lines: u64,
    pub changed_lines: u64,
    pub requested_errors: u64,
    pub realized_errors: u64,
    pub per_op: BTreeMap<String, u64>,
    /// Expected count per operation: at each draw, its weight share among
    /// the operations that had a site.
    pub per_op_target: BTreeMap<String, f64>,
}

impl NoiseStats {
    pub fn record(&mut self, c: &Corruption, changed: bool) {
        self.lines += 1;
        self.changed_lines += u64::from(changed);
        self.requested_errors += c.requested as u64;
        self.realized_errors += c.realized.len() as u64;
        for op in &c.realized {
            *self.per_op.entry(op.key().to_string()).or_insert(0) += 1;
        }
        for op in NoiseOp::ALL {
            let share = c.target_share[op.index()];
            if share > 0.0 {
                *self.per_op_target.entry(op.key().to_string()).or_insert(0.0) += share;
            }
        }
    }

    pub fn merge(&mut self, other: &NoiseStats) {
        self.lines += other.lines;
        self.changed_lines += other.changed_lines;
        self.requested_errors += other.requested_errors;
        self.realized_errors += other.realized_errors;
        for (k, v) in &other.per_op {
            *self.per_op.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.per_op_target {
            *self.per_op_target.entry(k.clone()).or_insert(0.0) += v;
        }
    }

    pub fn count(&self, op: NoiseOp) -> u64 {
        self.per_op.get(op.key()).copied().unwrap_or(0)
    }

    pub fn target(&self, op: NoiseOp) -> f64 {
        self.per_op_target.get(op.key()).copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats always serialize")
    }
}

/// Corrupts each input line, writing `corrupted<TAB>clean`. Line `i` is
/// seeded with `i`, so output does not depend on the worker count.
pub fn generate_corpus(input: impl BufRead, mut output: impl Write, noiser: &Noiser) -> Result<NoiseStats> {
    let mut stats = NoiseStats::default();
    let mut lines = input.lines();
    let mut index = 0u64;
    loop {
        let mut chunk = Vec::with_capacity(CHUNK_LINES);
        for line in lines.by_ref().take(CHUNK_LINES) {
            chunk.push(line?);
        }
        if chunk.is_empty() {
            break;
        }
        let base = index;
        let results: Vec<(String, Corruption, bool)> = chunk
            .par_iter()
            .enumerate()
            .map(|(i, line)| {
                let clean = tokenize(line);
                let c = noiser.corrupt(&clean, base + i as u64);
                let changed = c.sentence != clean;
                (format!("{}\t{}\n", c.sentence, clean), c, changed)
            })
            .collect();
        for (text, c, changed) in &results {
            output.write_all(text.as_bytes())?;
            stats.record(c, *changed);
        }
        index += chunk.len() as u64;
    }
    output.flush()?;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{Lexicon, PatternInventories};
    use crate::noiser::{EditDictionary, NoiseProfile};
    use crate::types::TagSet;

    fn generate(input: &str, profile: &NoiseProfile) -> (String, NoiseStats) {
        let dict = EditDictionary::new();
        let noiser = Noiser::new(
            profile,
            &dict,
            Lexicon::bundled(),
            PatternInventories::bundled(),
            TagSet::default_tagset(),
        )
        .unwrap();
        let mut out = Vec::new();
        let stats = generate_corpus(input.as_bytes(), &mut out, &noiser).unwrap();
        (String::from_utf8(out).unwrap(), stats)
    }

    #[test]
    fn empty_input() {
        let (out, stats) = generate("", &NoiseProfile::bundled());
        assert!(out.is_empty());
        assert_eq!(stats, NoiseStats::default());
    }

    #[test]
    fn reproducible_and_well_formed() {
        let input = "The cat sat on the mat .\nI live in Rome .\n\nHe went to school quickly .\n";
        let (a, sa) = generate(input, &NoiseProfile::bundled());
        let (b, sb) = generate(input, &NoiseProfile::bundled());
        assert_eq!(a, b);
        assert_eq!(sa, sb);
        assert_eq!(a.lines().count(), 4);
        for (out, clean) in a.lines().zip(input.lines()) {
            assert_eq!(out.split_once('\t').unwrap().1, clean);
        }
        assert_eq!(sa.lines, 4);
        assert_eq!(sa.realized_errors, sa.per_op.values().sum::<u64>());
    }
}
