//! Finite group presentations, amalgam specifications and the amalgam file
//! format.

use crate::error::{Error, Result};
use crate::word::{is_identifier, parse_word, Alphabet, Word};

/// `gp< X | R >` with words over the local alphabet `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub alphabet: Alphabet,
    pub relators: Vec<Word>,
}

impl GroupPresentation {
    /// Parses each relator over `generators`. Relators are freely reduced and
    /// empty ones dropped.
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(generators.iter().copied())?;
        let mut parsed = Vec::new();
        for r in relators {
            let w = parse_word(r, &alphabet)?.free_reduce();
            if !w.is_empty() {
                parsed.push(w);
            }
        }
        Ok(GroupPresentation {
            alphabet,
            relators: parsed,
        })
    }

    pub fn num_gens(&self) -> usize {
        self.alphabet.len()
    }
}

/// Two finite factors and the edge group `A = <Y>` with its images `phi1(y)`
/// and `phi2(y)`. Validation against the actual groups happens in
/// [`crate::amalgam::Amalgam::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamSpec {
    pub factor1: GroupPresentation,
    pub factor2: GroupPresentation,
    pub edge: Alphabet,
    /// `phi1[k]` is the image of edge generator `k`, over factor 1's alphabet.
    pub phi1: Vec<Word>,
    pub phi2: Vec<Word>,
}

impl AmalgamSpec {
    /// Checks alphabet disjointness and assembles the spec.
    pub fn new(
        factor1: GroupPresentation,
        factor2: GroupPresentation,
        edge: Alphabet,
        phi1: Vec<Word>,
        phi2: Vec<Word>,
    ) -> Result<Self> {
        for name in factor1.alphabet.names() {
            if factor2.alphabet.index_of(name).is_some() {
                return Err(Error::AlphabetClash(name.clone()));
            }
        }
        if phi1.len() != edge.len() || phi2.len() != edge.len() {
            return Err(Error::Syntax {
                line: 0,
                message: "every edge generator needs an image under phi1 and phi2".into(),
            });
        }
        Ok(AmalgamSpec {
            factor1,
            factor2,
            edge,
            phi1,
            phi2,
        })
    }

    /// Convenience constructor from string slices; `phi` entries are
    /// `(edge generator, image in factor 1, image in factor 2)`.
    pub fn from_strs(
        gens1: &[&str],
        rels1: &[&str],
        gens2: &[&str],
        rels2: &[&str],
        phi: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let factor1 = GroupPresentation::parse(gens1, rels1)?;
        let factor2 = GroupPresentation::parse(gens2, rels2)?;
        let edge = Alphabet::new(phi.iter().map(|p| p.0))?;
        let mut phi1 = Vec::new();
        let mut phi2 = Vec::new();
        for (_, w1, w2) in phi {
            phi1.push(parse_word(w1, &factor1.alphabet)?);
            phi2.push(parse_word(w2, &factor2.alphabet)?);
        }
        AmalgamSpec::new(factor1, factor2, edge, phi1, phi2)
    }

    /// Names of `X1` followed by `X2`; the global generator order.
    pub fn global_alphabet(&self) -> Alphabet {
        Alphabet::new(
            self.factor1
                .alphabet
                .names()
                .iter()
                .chain(self.factor2.alphabet.names())
                .cloned(),
        )
        .expect("factor alphabets are disjoint")
    }

    /// The amalgam file text that parses back to this spec.
    pub fn to_file_text(&self) -> String {
        let join_words = |ws: &[Word], a: &Alphabet| {
            ws.iter()
                .map(|w| w.display(a).to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let images = |ws: &[Word], a: &Alphabet| {
            self.edge
                .names()
                .iter()
                .zip(ws)
                .map(|(y, w)| format!("{y} = {}", w.display(a)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let a1 = &self.factor1.alphabet;
        let a2 = &self.factor2.alphabet;
        format!(
            "factor1.generators: {}\nfactor1.relators: {}\nfactor2.generators: {}\nfactor2.relators: {}\nedge.generators: {}\nphi1: {}\nphi2: {}\n",
            a1.names().join(", "),
            join_words(&self.factor1.relators, a1),
            a2.names().join(", "),
            join_words(&self.factor2.relators, a2),
            self.edge.names().join(", "),
            images(&self.phi1, a1),
            images(&self.phi2, a2),
        )
    }
}

#[derive(Default)]
struct RawSpec {
    gens1: Option<(usize, Vec<String>)>,
    rels1: Option<(usize, Vec<String>)>,
    gens2: Option<(usize, Vec<String>)>,
    rels2: Option<(usize, Vec<String>)>,
    edge: Option<(usize, Vec<String>)>,
    phi1: Option<(usize, Vec<String>)>,
    phi2: Option<(usize, Vec<String>)>,
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn with_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Syntax { .. } => e,
        other => Error::Syntax {
            line,
            message: other.to_string(),
        },
    })
}

/// Parses the line-oriented amalgam file format:
///
/// ```text
/// factor1.generators: x
/// factor1.relators: x^4
/// factor2.generators: y
/// factor2.relators: y^6
/// edge.generators: a
/// phi1: a = x^2
/// phi2: a = y^3
/// ```
pub fn parse_amalgam(text: &str) -> Result<AmalgamSpec> {
    let mut raw = RawSpec::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once(':').ok_or_else(|| Error::Syntax {
            line: lineno,
            message: format!("expected `key: value`, found `{trimmed}`"),
        })?;
        let slot = match key.trim() {
            "factor1.generators" => &mut raw.gens1,
            "factor1.relators" => &mut raw.rels1,
            "factor2.generators" => &mut raw.gens2,
            "factor2.relators" => &mut raw.rels2,
            "edge.generators" => &mut raw.edge,
            "phi1" => &mut raw.phi1,
            "phi2" => &mut raw.phi2,
            other => {
                return Err(Error::Syntax {
                    line: lineno,
                    message: format!("unknown key `{other}`"),
                })
            }
        };
        if slot.is_some() {
            return Err(Error::Syntax {
                line: lineno,
                message: format!("key `{}` appears twice", key.trim()),
            });
        }
        *slot = Some((lineno, split_list(value)));
    }

    let require = |slot: Option<(usize, Vec<String>)>, name: &str| {
        slot.ok_or_else(|| Error::Syntax {
            line: 0,
            message: format!("missing key `{name}`"),
        })
    };
    let (l_g1, gens1) = require(raw.gens1, "factor1.generators")?;
    let (l_g2, gens2) = require(raw.gens2, "factor2.generators")?;
    let (l_r1, rels1) = raw.rels1.unwrap_or((0, Vec::new()));
    let (l_r2, rels2) = raw.rels2.unwrap_or((0, Vec::new()));
    let (l_e, edge) = raw.edge.unwrap_or((0, Vec::new()));
    let (l_p1, phi1) = raw.phi1.unwrap_or((0, Vec::new()));
    let (l_p2, phi2) = raw.phi2.unwrap_or((0, Vec::new()));

    for (line, names) in [(l_g1, &gens1), (l_g2, &gens2), (l_e, &edge)] {
        if let Some(bad) = names.iter().find(|n| !is_identifier(n)) {
            return Err(Error::Syntax {
                line,
                message: format!("`{bad}` is not a valid generator name"),
            });
        }
    }

    let alpha1 = with_line(l_g1, Alphabet::new(gens1.clone()))?;
    let alpha2 = with_line(l_g2, Alphabet::new(gens2.clone()))?;
    if let Some(clash) = gens1.iter().find(|g| alpha2.index_of(g).is_some()) {
        return Err(Error::AlphabetClash(clash.clone()));
    }
    let edge_alpha = with_line(l_e, Alphabet::new(edge.clone()))?;

    let parse_rels = |line: usize, rels: &[String], alpha: &Alphabet| -> Result<Vec<Word>> {
        let mut out = Vec::new();
        for r in rels {
            let w = with_line(line, parse_word(r, alpha))?.free_reduce();
            if !w.is_empty() {
                out.push(w);
            }
        }
        Ok(out)
    };
    let factor1 = GroupPresentation {
        relators: parse_rels(l_r1, &rels1, &alpha1)?,
        alphabet: alpha1,
    };
    let factor2 = GroupPresentation {
        relators: parse_rels(l_r2, &rels2, &alpha2)?,
        alphabet: alpha2,
    };

    let parse_images = |line: usize, entries: &[String], alpha: &Alphabet| -> Result<Vec<Word>> {
        let mut images: Vec<Option<Word>> = vec![None; edge_alpha.len()];
        for entry in entries {
            let (name, image) = entry.split_once('=').ok_or_else(|| Error::Syntax {
                line,
                message: format!("expected `generator = word`, found `{entry}`"),
            })?;
            let name = name.trim();
            let k = edge_alpha.index_of(name).ok_or_else(|| Error::Syntax {
                line,
                message: format!("`{name}` is not an edge generator"),
            })?;
            if images[k].is_some() {
                return Err(Error::Syntax {
                    line,
                    message: format!("`{name}` is mapped twice"),
                });
            }
            images[k] = Some(with_line(line, parse_word(image, alpha))?);
        }
        images
            .into_iter()
            .enumerate()
            .map(|(k, w)| {
                w.ok_or_else(|| Error::Syntax {
                    line,
                    message: format!("no image for edge generator `{}`", edge_alpha.name(k)),
                })
            })
            .collect()
    };
    let phi1 = parse_images(l_p1, &phi1, &factor1.alphabet)?;
    let phi2 = parse_images(l_p2, &phi2, &factor2.alphabet)?;

    AmalgamSpec::new(factor1, factor2, edge_alpha, phi1, phi2)
}

/// The amalgam description for `gp< x, y | x^4, y^6, x^2 = y^3 >`.
pub fn sl2z_spec() -> AmalgamSpec {
    AmalgamSpec::from_strs(&["x"], &["x^4"], &["y"], &["y^6"], &[("a", "x^2", "y^3")])
        .expect("built-in spec is well formed")
}
