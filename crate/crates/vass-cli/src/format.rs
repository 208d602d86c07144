//! Line-oriented text formats: VASS documents with named configurations,
//! run files, and thin/thick certificate files. Serialization is a fixed
//! point of parse followed by serialize.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use vass_core::certify::{SeqEnabledCertificate, ThickCertificate, ThinCertificate};
use vass_core::geom::Beam;
use vass_core::{Configuration, IntVector, Run, Transition, Vass};

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("expected {expected} integers, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("duplicate configuration name `{0}`")]
    DuplicateConfigName(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("bad state name `{0}`")]
    BadStateName(String),
    #[error("bad integer `{0}`")]
    BadInteger(String),
    #[error("counter values must be nonnegative, got `{0}`")]
    NegativeCounter(String),
    #[error("the first directive must be `vass dim=<d>`")]
    MissingHeader,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("missing `{0}` directive")]
    MissingDirective(&'static str),
    #[error("duplicate `{0}` directive")]
    DuplicateDirective(&'static str),
    #[error("transition index {index} out of range, the document has {count}")]
    TransitionOutOfRange { index: usize, count: usize },
    #[error("expected {expected} more tokens")]
    MissingTokens { expected: usize },
    #[error("unexpected trailing tokens")]
    TrailingTokens,
}

/// A parsed VASS plus its state names and named configurations.
#[derive(Clone, Debug, PartialEq)]
pub struct VassDocument {
    pub vass: Vass,
    pub state_names: Vec<String>,
    pub configs: BTreeMap<String, Configuration>,
}

impl VassDocument {
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }

    pub fn config(&self, name: &str) -> Option<&Configuration> {
        self.configs.get(name)
    }
}

fn valid_state_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Lines of (1-based number, tokens), comments stripped, blanks dropped.
fn tokenize(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.is_empty() {
                None
            } else {
                Some((i + 1, tokens))
            }
        })
        .collect()
}

fn parse_int(line: usize, token: &str) -> Result<BigInt, ParseError> {
    token.parse().map_err(|_| ParseError {
        line,
        kind: ParseErrorKind::BadInteger(token.to_string()),
    })
}

fn parse_counters(line: usize, dim: usize, tokens: &[&str]) -> Result<IntVector, ParseError> {
    if tokens.len() != dim {
        return Err(ParseError {
            line,
            kind: ParseErrorKind::DimensionMismatch { expected: dim, got: tokens.len() },
        });
    }
    let mut entries = Vec::with_capacity(dim);
    for t in tokens {
        let v = parse_int(line, t)?;
        if v.is_negative() {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::NegativeCounter(t.to_string()),
            });
        }
        entries.push(v);
    }
    Ok(IntVector::new(entries))
}

pub fn parse_vass(text: &str) -> Result<VassDocument, ParseError> {
    let lines = tokenize(text);
    let Some((first_line, first)) = lines.first() else {
        return Err(ParseError { line: 1, kind: ParseErrorKind::MissingHeader });
    };
    let dim: usize = match first.as_slice() {
        ["vass", spec] if spec.starts_with("dim=") => spec["dim=".len()..]
            .parse()
            .map_err(|_| ParseError { line: *first_line, kind: ParseErrorKind::MissingHeader })?,
        _ => return Err(ParseError { line: *first_line, kind: ParseErrorKind::MissingHeader }),
    };

    let mut state_names: Vec<String> = Vec::new();
    let mut transitions: Vec<Transition> = Vec::new();
    let mut raw_configs: Vec<(usize, String, usize, IntVector)> = Vec::new();
    let lookup = |names: &[String], line: usize, token: &str| -> Result<usize, ParseError> {
        names.iter().position(|n| n == token).ok_or(ParseError {
            line,
            kind: ParseErrorKind::UnknownState(token.to_string()),
        })
    };

    for (line, tokens) in &lines[1..] {
        let line = *line;
        match tokens[0] {
            "state" | "states" => {
                if tokens[0] == "state" && tokens.len() != 2 {
                    return Err(ParseError {
                        line,
                        kind: if tokens.len() < 2 {
                            ParseErrorKind::MissingTokens { expected: 1 }
                        } else {
                            ParseErrorKind::TrailingTokens
                        },
                    });
                }
                for name in &tokens[1..] {
                    if !valid_state_name(name) {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::BadStateName(name.to_string()),
                        });
                    }
                    if state_names.iter().any(|n| n == name) {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::DuplicateState(name.to_string()),
                        });
                    }
                    state_names.push(name.to_string());
                }
            }
            "trans" => {
                if tokens.len() < 3 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 3 - tokens.len() + 2 },
                    });
                }
                let src = lookup(&state_names, line, tokens[1])?;
                let dst = lookup(&state_names, line, tokens[2])?;
                let rest = &tokens[3..];
                if rest.len() != dim {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DimensionMismatch { expected: dim, got: rest.len() },
                    });
                }
                let entries = rest
                    .iter()
                    .map(|t| parse_int(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                transitions.push(Transition::new(src, IntVector::new(entries), dst));
            }
            "config" => {
                if tokens.len() < 3 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 3 - tokens.len() + 2 },
                    });
                }
                let name = tokens[1].to_string();
                let state = lookup(&state_names, line, tokens[2])?;
                let counters = parse_counters(line, dim, &tokens[3..])?;
                if raw_configs.iter().any(|(_, n, _, _)| n == &name) {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateConfigName(name),
                    });
                }
                raw_configs.push((line, name, state, counters));
            }
            other => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownDirective(other.to_string()),
                })
            }
        }
    }

    let vass = Vass::new(dim, state_names.len(), transitions)
        .expect("endpoints and dimensions were validated during parsing");
    let mut configs = BTreeMap::new();
    for (_, name, state, counters) in raw_configs {
        configs.insert(name, Configuration::new(state, counters).unwrap());
    }
    Ok(VassDocument { vass, state_names, configs })
}

fn push_entries(out: &mut String, v: &IntVector) {
    for e in v.entries() {
        write!(out, " {}", e).unwrap();
    }
}

/// Canonical text form: one `states` line in declaration order, transitions
/// in document order, configurations sorted by name.
pub fn serialize_vass(doc: &VassDocument) -> String {
    let mut out = format!("vass dim={}\n", doc.vass.dim());
    if !doc.state_names.is_empty() {
        out.push_str("states");
        for name in &doc.state_names {
            write!(out, " {}", name).unwrap();
        }
        out.push('\n');
    }
    for t in doc.vass.transitions() {
        write!(out, "trans {} {}", doc.state_names[t.src], doc.state_names[t.dst]).unwrap();
        push_entries(&mut out, &t.effect);
        out.push('\n');
    }
    for (name, c) in &doc.configs {
        write!(out, "config {} {}", name, doc.state_names[c.state()]).unwrap();
        push_entries(&mut out, c.counters());
        out.push('\n');
    }
    out
}

/// Run files: one `start <state> <d counters>` line, then any number of
/// `word <transition indices>` lines, concatenated in order.
pub fn parse_run(text: &str, doc: &VassDocument) -> Result<Run, ParseError> {
    let dim = doc.vass.dim();
    let mut start: Option<Configuration> = None;
    let mut word: Vec<usize> = Vec::new();
    for (line, tokens) in tokenize(text) {
        match tokens[0] {
            "start" => {
                if start.is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateDirective("start"),
                    });
                }
                if tokens.len() < 2 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 1 + dim },
                    });
                }
                let state = doc.state_index(tokens[1]).ok_or(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownState(tokens[1].to_string()),
                })?;
                let counters = parse_counters(line, dim, &tokens[2..])?;
                start = Some(Configuration::new(state, counters).unwrap());
            }
            "word" => {
                for t in &tokens[1..] {
                    let index: usize = t.parse().map_err(|_| ParseError {
                        line,
                        kind: ParseErrorKind::BadInteger(t.to_string()),
                    })?;
                    let count = doc.vass.transitions().len();
                    if index >= count {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::TransitionOutOfRange { index, count },
                        });
                    }
                    word.push(index);
                }
            }
            other => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownDirective(other.to_string()),
                })
            }
        }
    }
    let start = start.ok_or(ParseError {
        line: 1,
        kind: ParseErrorKind::MissingDirective("start"),
    })?;
    Ok(Run::new(start, word))
}

pub fn serialize_run(run: &Run, doc: &VassDocument) -> String {
    let mut out = format!("start {}", doc.state_names[run.start.state()]);
    push_entries(&mut out, run.start.counters());
    out.push_str("\nword");
    for i in &run.word {
        write!(out, " {}", i).unwrap();
    }
    out.push('\n');
    out
}

/// A certificate file that parsed but cannot construct a valid certificate
/// value; reported as a rejection, not a usage error.
#[derive(Debug, thiserror::Error)]
pub enum CertFileError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: {reason}")]
    Invalid { line: usize, reason: String },
}

/// Thin certificates: `A <n>` once, then `beam <width> <d direction ints>`
/// per beam. A negative width is a certificate defect, not a parse error.
pub fn parse_thin_certificate(text: &str, dim: usize) -> Result<ThinCertificate, CertFileError> {
    let mut a: Option<BigInt> = None;
    let mut beams: Vec<Beam> = Vec::new();
    for (line, tokens) in tokenize(text) {
        match tokens[0] {
            "A" => {
                if a.is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateDirective("A"),
                    }
                    .into());
                }
                if tokens.len() != 2 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 1 },
                    }
                    .into());
                }
                a = Some(parse_int(line, tokens[1])?);
            }
            "beam" => {
                if tokens.len() < 2 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 1 + dim },
                    }
                    .into());
                }
                let width = parse_int(line, tokens[1])?;
                if width.is_negative() {
                    return Err(CertFileError::Invalid {
                        line,
                        reason: format!("beam width {} is negative", width),
                    });
                }
                let rest = &tokens[2..];
                if rest.len() != dim {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DimensionMismatch { expected: dim, got: rest.len() },
                    }
                    .into());
                }
                let entries = rest
                    .iter()
                    .map(|t| parse_int(line, t))
                    .collect::<Result<Vec<_>, _>>()?;
                beams.push(Beam::new(IntVector::new(entries), width));
            }
            other => {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::UnknownDirective(other.to_string()),
                }
                .into())
            }
        }
    }
    let a = a.ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingDirective("A") })?;
    Ok(ThinCertificate { a, beams })
}

pub fn serialize_thin_certificate(cert: &ThinCertificate) -> String {
    let mut out = format!("A {}\n", cert.a);
    for beam in &cert.beams {
        write!(out, "beam {}", beam.width).unwrap();
        push_entries(&mut out, &beam.direction);
        out.push('\n');
    }
    out
}

/// Thick certificates: `A <n>`, `split <k>`, then for each of `forward` and
/// `backward` a `<half>.split <s1> <s2> <s3> <s4>` line and four
/// `<half>.cycle<i> <transition indices>` lines.
pub fn parse_thick_certificate(text: &str) -> Result<ThickCertificate, ParseError> {
    let mut a: Option<BigInt> = None;
    let mut split: Option<usize> = None;
    let mut halves: [[Option<Vec<usize>>; 5]; 2] = Default::default();
    let parse_indices = |line: usize, tokens: &[&str]| -> Result<Vec<usize>, ParseError> {
        tokens
            .iter()
            .map(|t| {
                t.parse().map_err(|_| ParseError {
                    line,
                    kind: ParseErrorKind::BadInteger(t.to_string()),
                })
            })
            .collect()
    };

    for (line, tokens) in tokenize(text) {
        let key = tokens[0];
        match key {
            "A" => {
                if a.replace(parse_int(line, tokens.get(1).copied().unwrap_or(""))?).is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateDirective("A"),
                    });
                }
            }
            "split" => {
                let value = parse_indices(line, &tokens[1..])?;
                if value.len() != 1 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 1 },
                    });
                }
                if split.replace(value[0]).is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateDirective("split"),
                    });
                }
            }
            _ => {
                let (half, field) = match key.split_once('.') {
                    Some(("forward", f)) => (0, f),
                    Some(("backward", f)) => (1, f),
                    _ => {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::UnknownDirective(key.to_string()),
                        })
                    }
                };
                let slot = match field {
                    "split" => 0,
                    "cycle1" => 1,
                    "cycle2" => 2,
                    "cycle3" => 3,
                    "cycle4" => 4,
                    _ => {
                        return Err(ParseError {
                            line,
                            kind: ParseErrorKind::UnknownDirective(key.to_string()),
                        })
                    }
                };
                let value = parse_indices(line, &tokens[1..])?;
                if slot == 0 && value.len() != 4 {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MissingTokens { expected: 4 },
                    });
                }
                if halves[half][slot].replace(value).is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::DuplicateDirective("a certificate field"),
                    });
                }
            }
        }
    }

    let a = a.ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingDirective("A") })?;
    let split =
        split.ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingDirective("split") })?;
    let mut build_half = |idx: usize, name: &'static str| -> Result<SeqEnabledCertificate, ParseError> {
        let fields = &mut halves[idx];
        let splits_vec = fields[0]
            .take()
            .ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingDirective(name) })?;
        let mut splits = [0usize; 4];
        splits.copy_from_slice(&splits_vec);
        let mut cycles: [Vec<usize>; 4] = Default::default();
        for (i, cycle) in cycles.iter_mut().enumerate() {
            *cycle = fields[i + 1]
                .take()
                .ok_or(ParseError { line: 1, kind: ParseErrorKind::MissingDirective(name) })?;
        }
        Ok(SeqEnabledCertificate { a: a.clone(), splits, cycles })
    };
    Ok(ThickCertificate {
        a: a.clone(),
        split,
        forward: build_half(0, "forward.split and forward.cycle1..4")?,
        backward: build_half(1, "backward.split and backward.cycle1..4")?,
    })
}

pub fn serialize_thick_certificate(cert: &ThickCertificate) -> String {
    let mut out = format!("A {}\nsplit {}\n", cert.a, cert.split);
    for (name, half) in [("forward", &cert.forward), ("backward", &cert.backward)] {
        write!(out, "{}.split", name).unwrap();
        for s in half.splits {
            write!(out, " {}", s).unwrap();
        }
        out.push('\n');
        for (i, cycle) in half.cycles.iter().enumerate() {
            write!(out, "{}.cycle{}", name, i + 1).unwrap();
            for t in cycle {
                write!(out, " {}", t).unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# a two-counter producer and consumer
vass dim=2
states p q
trans p p 1 0   # produce
trans p q 0 0
trans q q -1 1
config init p 0 0
config goal q 0 3
";

    #[test]
    fn parse_and_serialize_round_trip() {
        let doc = parse_vass(SAMPLE).unwrap();
        assert_eq!(doc.vass.dim(), 2);
        assert_eq!(doc.state_names, ["p", "q"]);
        assert_eq!(doc.vass.transitions().len(), 3);
        assert_eq!(doc.configs["goal"].state(), 1);
        let canonical = serialize_vass(&doc);
        let reparsed = parse_vass(&canonical).unwrap();
        assert_eq!(reparsed, doc);
        assert_eq!(serialize_vass(&reparsed), canonical);
    }

    #[test]
    fn zero_dimension_and_errors() {
        let doc = parse_vass("vass dim=0\nstate p\ntrans p p\n").unwrap();
        assert_eq!(doc.vass.dim(), 0);
        assert_eq!(doc.vass.transitions().len(), 1);

        let err = parse_vass("vass dim=3\nstates p q\ntrans p q 1 -2\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.kind, ParseErrorKind::DimensionMismatch { expected: 3, got: 2 });

        let err = parse_vass("vass dim=1\nstate p\ntrans p r 1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownState("r".into()));

        let err =
            parse_vass("vass dim=1\nstate p\nconfig a p 0\nconfig a p 1\n").unwrap_err();
        assert_eq!(err.line, 4);
        assert_eq!(err.kind, ParseErrorKind::DuplicateConfigName("a".into()));

        let err = parse_vass("vass dim=1\nstate p\nconfig a p -1\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NegativeCounter("-1".into()));

        assert!(parse_vass("").is_err());
        assert!(parse_vass("states p\n").is_err());
    }

    #[test]
    fn run_files_round_trip() {
        let doc = parse_vass(SAMPLE).unwrap();
        let run = parse_run("start p 1 0\nword 0 0\nword 1 2\n", &doc).unwrap();
        assert_eq!(run.start.state(), 0);
        assert_eq!(run.word, vec![0, 0, 1, 2]);
        let text = serialize_run(&run, &doc);
        assert_eq!(parse_run(&text, &doc).unwrap(), run);

        let err = parse_run("start p 1 0\nword 9\n", &doc).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::TransitionOutOfRange { index: 9, count: 3 });
        assert!(parse_run("word 0\n", &doc).is_err());
    }

    #[test]
    fn thin_certificates() {
        let cert = parse_thin_certificate("A 5\nbeam 2 1 1\nbeam 0 0 0\n", 2).unwrap();
        assert_eq!(cert.a, BigInt::from(5));
        assert_eq!(cert.beams.len(), 2);
        let text = serialize_thin_certificate(&cert);
        assert_eq!(serialize_thin_certificate(&parse_thin_certificate(&text, 2).unwrap()), text);

        match parse_thin_certificate("A 5\nbeam -1 1 1\n", 2) {
            Err(CertFileError::Invalid { line: 2, .. }) => {}
            other => panic!("expected an invalid-certificate report, got {:?}", other),
        }
    }

    #[test]
    fn thick_certificates() {
        let text = "\
A 2
split 2
forward.split 0 1 2 2
forward.cycle1 0
forward.cycle2 1
forward.cycle3 0
forward.cycle4 1
backward.split 0 0 0 0
backward.cycle1 2
backward.cycle2 0
backward.cycle3 2
backward.cycle4 2
";
        let cert = parse_thick_certificate(text).unwrap();
        assert_eq!(cert.split, 2);
        assert_eq!(cert.forward.splits, [0, 1, 2, 2]);
        assert_eq!(cert.backward.cycles[3], vec![2]);
        assert_eq!(cert.forward.a, cert.a);
        assert_eq!(serialize_thick_certificate(&cert), text);
        assert!(parse_thick_certificate("A 2\nsplit 1\n").is_err());
    }
}
