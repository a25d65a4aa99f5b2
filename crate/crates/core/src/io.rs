//! Plain-text hypergraph files.
//!
//! ```text
//! # optional comment lines
//! n r m
//! v1 v2 ... vr        (m lines, strictly increasing, lexicographic order)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

/// A hypergraph together with the comment lines that preceded its header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergraphFile {
    /// Comment lines without the leading `#`.
    pub comments: Vec<String>,
    pub graph: Hypergraph,
}

impl Hypergraph {
    /// Canonical text form (no comments).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.m() * self.r() * 4);
        writeln!(out, "{} {} {}", self.n(), self.r(), self.m()).unwrap();
        for e in self.edges() {
            let mut first = true;
            for v in e {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        HypergraphFile::parse(text).map(|f| f.graph)
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_text().as_bytes()))
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        HypergraphFile::read(path).map(|f| f.graph)
    }
}

impl HypergraphFile {
    pub fn new(graph: Hypergraph) -> Self {
        Self {
            comments: Vec::new(),
            graph,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push('#');
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.graph.to_text());
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut lines = text.lines().enumerate().peekable();
        while let Some((_, line)) = lines.peek() {
            match line.strip_prefix('#') {
                Some(rest) => {
                    comments.push(rest.to_string());
                    lines.next();
                }
                None => break,
            }
        }
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: comments.len() + 1,
            msg: "missing header `n r m`".into(),
        })?;
        let nums = parse_ints(header, hline + 1)?;
        let [n, r, m] = nums[..] else {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header must have 3 fields, found {}", nums.len()),
            });
        };
        let (n, r, m) = (to_u32(n, hline + 1)?, r as usize, m as usize);

        let mut flat: Vec<Vertex> = Vec::with_capacity(m.saturating_mul(r).min(1 << 24));
        let mut prev: Option<Vec<Vertex>> = None;
        let mut count = 0usize;
        for (idx, line) in lines {
            let lineno = idx + 1;
            if count == m {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("more than the declared {m} edges"),
                });
            }
            let e = parse_ints(line, lineno)?
                .into_iter()
                .map(|v| to_u32(v, lineno))
                .collect::<Result<Vec<_>>>()?;
            if e.len() != r {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {r} vertices, found {}", e.len()),
                });
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("vertex {v} out of range for n = {n}"),
                });
            }
            if !e.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "vertices must be strictly increasing".into(),
                });
            }
            if let Some(p) = &prev {
                if p >= &e {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "edges must be distinct and in lexicographic order".into(),
                    });
                }
            }
            flat.extend_from_slice(&e);
            prev = Some(e);
            count += 1;
        }
        if count != m {
            return Err(Error::Parse {
                line: hline + 1,
                msg: format!("header declares {m} edges, found {count}"),
            });
        }
        if m > 0 && (r < 2 || r > n as usize) {
            return Err(Error::InvalidUniformity { n, r });
        }
        Ok(Self {
            comments,
            graph: Hypergraph::from_sorted_flat(n, r, flat),
        })
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split(' ')
        .map(|tok| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect()
}

fn to_u32(v: u64, lineno: usize) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("value {v} too large"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hosts;
    use proptest::prelude::*;

    #[test]
    fn text_form() {
        let g = Hypergraph::build(4, 3, [[0, 1, 3], [0, 1, 2]]).unwrap();
        assert_eq!(g.to_text(), "4 3 2\n0 1 2\n0 1 3\n");
        assert_eq!(Hypergraph::empty(5, 3).to_text(), "5 3 0\n");
    }

    #[test]
    fn comments_round_trip() {
        let text = "# template r=3 t=5 A=1,2\n# second\n3 3 1\n0 1 2\n";
        let f = HypergraphFile::parse(text).unwrap();
        assert_eq!(f.comments, vec![" template r=3 t=5 A=1,2", " second"]);
        assert_eq!(f.to_text(), text);
    }

    #[test]
    fn rejects_non_canonical_input() {
        for bad in [
            "4 3 2\n0 1 3\n0 1 2\n",
            "4 3 1\n0 2 1\n",
            "4 3 1\n0 1 4\n",
            "4 3 2\n0 1 2\n",
            "4 3 1\n0 1 2\n0 1 3\n",
            "4 3\n",
            "4 3 1\n0 1  2\n",
            "4 3 1\n0 1 2\n# late comment\n",
            "",
        ] {
            assert!(HypergraphFile::parse(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn digest_is_stable() {
        let g = hosts::complete(6, 3).unwrap();
        assert_eq!(g.digest(), g.clone().digest());
        assert_ne!(g.digest(), hosts::complete(7, 3).unwrap().digest());
        assert_eq!(g.digest().len(), 64);
    }

    proptest! {
        #[test]
        fn random_hosts_round_trip(n in 3u32..12, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = hosts::gnp(n, 3, p, seed).unwrap();
            let text = g.to_text();
            let back = Hypergraph::from_text(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_text(), text);
        }
    }
}
