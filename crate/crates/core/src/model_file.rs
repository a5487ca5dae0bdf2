//! Line-oriented, tab-separated model dump.
//!
//! Reals are written with Rust's shortest round-trip formatting, so a dump
//! loads back bit-for-bit. Layout:
//!
//! ```text
//! mpsum-model<TAB>1
//! corpus_hash<TAB><hex>
//! alpha / beta / iterations / burn_in / seed / weighted<TAB><value>
//! meta<TAB><key><TAB><value>          (zero or more)
//! dims<TAB><E><TAB><K><TAB><V>
//! entity<TAB><iri>                    (E lines)
//! predicate<TAB><token>               (K lines)
//! word<TAB><token>                    (V lines)
//! theta<TAB><K reals>                 (E lines)
//! phi<TAB><V reals>                   (K lines)
//! z<TAB><topic indices>               (E lines)
//! end
//! ```

use std::fmt::Write as _;

use crate::lda::{HyperParams, LdaError, LdaModel};

pub const MODEL_MAGIC: &str = "mpsum-model";
pub const MODEL_VERSION: u32 = 1;

fn bad(line: usize, reason: impl Into<String>) -> LdaError {
    LdaError::BadModelFile {
        line,
        reason: reason.into(),
    }
}

fn join<T: std::fmt::Debug>(values: &[T]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push('\t');
        }
        write!(out, "{v:?}").unwrap();
    }
    out
}

impl LdaModel {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.params;
        writeln!(out, "{MODEL_MAGIC}\t{MODEL_VERSION}").unwrap();
        writeln!(out, "corpus_hash\t{}", self.corpus_hash).unwrap();
        writeln!(out, "alpha\t{:?}", p.alpha).unwrap();
        writeln!(out, "beta\t{:?}", p.beta).unwrap();
        writeln!(out, "iterations\t{}", p.iterations).unwrap();
        writeln!(out, "burn_in\t{}", p.burn_in).unwrap();
        writeln!(out, "seed\t{}", p.seed).unwrap();
        writeln!(out, "weighted\t{}", self.weighted).unwrap();
        for (k, v) in &self.meta {
            writeln!(out, "meta\t{k}\t{v}").unwrap();
        }
        writeln!(
            out,
            "dims\t{}\t{}\t{}",
            self.entities.len(),
            self.num_topics,
            self.words.len()
        )
        .unwrap();
        for e in &self.entities {
            writeln!(out, "entity\t{e}").unwrap();
        }
        for p in &self.predicates {
            writeln!(out, "predicate\t{p}").unwrap();
        }
        for w in &self.words {
            writeln!(out, "word\t{w}").unwrap();
        }
        for d in 0..self.entities.len() {
            writeln!(out, "theta\t{}", join(self.theta_row(d))).unwrap();
        }
        for k in 0..self.num_topics {
            writeln!(out, "phi\t{}", join(self.phi_row(k))).unwrap();
        }
        for zs in &self.assignments {
            if zs.is_empty() {
                out.push_str("z\n");
            } else {
                writeln!(out, "z\t{}", join(zs)).unwrap();
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn from_text(text: &str) -> Result<Self, LdaError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |want: &str| -> Result<(usize, Vec<&str>), LdaError> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| bad(0, format!("missing {want}")))?;
            let fields: Vec<&str> = line.split('\t').collect();
            if fields[0] != want {
                return Err(bad(no, format!("expected {want}, found {}", fields[0])));
            }
            Ok((no, fields[1..].to_vec()))
        };
        fn one<'a>(no: usize, f: &[&'a str]) -> Result<&'a str, LdaError> {
            match f {
                [x] => Ok(x),
                _ => Err(bad(no, "expected one value")),
            }
        }
        fn num<T: std::str::FromStr>(no: usize, s: &str) -> Result<T, LdaError> {
            s.parse().map_err(|_| bad(no, format!("bad number {s:?}")))
        }

        let (no, f) = next(MODEL_MAGIC)?;
        if one(no, &f)? != MODEL_VERSION.to_string() {
            return Err(bad(no, "unsupported model version"));
        }
        let (no, f) = next("corpus_hash")?;
        let corpus_hash = one(no, &f)?.to_string();
        let (no, f) = next("alpha")?;
        let alpha = num(no, one(no, &f)?)?;
        let (no, f) = next("beta")?;
        let beta = num(no, one(no, &f)?)?;
        let (no, f) = next("iterations")?;
        let iterations = num(no, one(no, &f)?)?;
        let (no, f) = next("burn_in")?;
        let burn_in = num(no, one(no, &f)?)?;
        let (no, f) = next("seed")?;
        let seed = num(no, one(no, &f)?)?;
        let (no, f) = next("weighted")?;
        let weighted = num(no, one(no, &f)?)?;

        let mut rest: Vec<(usize, &str)> = Vec::new();
        let mut meta = Vec::new();
        for (no, line) in lines.by_ref() {
            if let Some(kv) = line.strip_prefix("meta\t") {
                let (k, v) = kv
                    .split_once('\t')
                    .ok_or_else(|| bad(no, "meta needs key and value"))?;
                meta.push((k.to_string(), v.to_string()));
            } else {
                rest.push((no, line));
                break;
            }
        }
        rest.extend(lines);
        let mut body = rest.into_iter();
        let mut take = |want: &str| -> Result<(usize, Vec<&str>), LdaError> {
            let (no, line) = body
                .next()
                .ok_or_else(|| bad(0, format!("missing {want}")))?;
            let mut fields: Vec<&str> = line.split('\t').collect();
            if fields[0] != want {
                return Err(bad(no, format!("expected {want}, found {}", fields[0])));
            }
            fields.remove(0);
            Ok((no, fields))
        };

        let (no, dims) = take("dims")?;
        let [e, k, v] = dims[..] else {
            return Err(bad(no, "dims needs three values"));
        };
        let (e, k, v): (usize, usize, usize) = (num(no, e)?, num(no, k)?, num(no, v)?);

        let mut labels = |want: &str, n: usize| -> Result<Vec<String>, LdaError> {
            (0..n)
                .map(|_| {
                    let (no, f) = take(want)?;
                    Ok(one(no, &f)?.to_string())
                })
                .collect()
        };
        let entities = labels("entity", e)?;
        let predicates = labels("predicate", k)?;
        let words = labels("word", v)?;

        let mut reals = |want: &str, rows: usize, width: usize| -> Result<Vec<f64>, LdaError> {
            let mut out = Vec::with_capacity(rows * width);
            for _ in 0..rows {
                let (no, f) = take(want)?;
                if f.len() != width {
                    return Err(bad(no, format!("{want} row needs {width} values")));
                }
                for s in f {
                    out.push(num(no, s)?);
                }
            }
            Ok(out)
        };
        let theta = reals("theta", e, k)?;
        let phi = reals("phi", k, v)?;

        let mut assignments = Vec::with_capacity(e);
        for _ in 0..e {
            let (no, f) = take("z")?;
            let zs = f
                .iter()
                .map(|s| {
                    let t: u32 = num(no, s)?;
                    if t as usize >= k {
                        return Err(bad(no, "topic index out of range"));
                    }
                    Ok(t)
                })
                .collect::<Result<Vec<_>, _>>()?;
            assignments.push(zs);
        }
        let (no, f) = take("end")?;
        if !f.is_empty() {
            return Err(bad(no, "trailing fields after end"));
        }
        if let Some((no, _)) = body.next() {
            return Err(bad(no, "content after end"));
        }

        let params = HyperParams {
            alpha,
            beta,
            iterations,
            burn_in,
            seed,
        };
        params.validate()?;
        Ok(LdaModel {
            params,
            weighted,
            num_topics: k,
            theta,
            phi,
            assignments,
            corpus_hash,
            entities,
            predicates,
            words,
            meta,
        })
    }
}
