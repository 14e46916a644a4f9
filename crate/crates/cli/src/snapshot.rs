//! `dla-snapshot v1` text files and `history.csv`.
//!
//! A snapshot is a header line `dla-snapshot v1 dim=<d> n=<sites> seed=<u64>`
//! followed by one site per line, whitespace-separated integers, in growth
//! order. The reader rebuilds the cluster site by site, so every file it
//! accepts is a valid connected aggregate.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use dla_core::{Cluster, GrowthHistory, LatticePoint};
use thiserror::Error;

use crate::error::{CliError, Result};

const MAGIC: &str = "dla-snapshot";
const VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub seed: u64,
    pub cluster: Cluster,
}

/// A malformed snapshot, pointing at the first bad line (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("header mismatch: {0}")]
    Header(String),
    #[error("count mismatch: header declares {declared} sites, file has {found}")]
    CountMismatch { declared: usize, found: usize },
    #[error("arity mismatch: expected {expected} coordinates, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid coordinate {0:?}")]
    Coordinate(String),
    #[error("duplicate site {0}")]
    Duplicate(String),
    #[error("first site must be the origin, found {0}")]
    SeedNotOrigin(String),
    #[error("site {0} is not adjacent to any earlier site")]
    Disconnected(String),
}

impl Snapshot {
    pub fn dim(&self) -> usize {
        self.cluster.dim()
    }

    pub fn to_text(&self) -> String {
        let c = &self.cluster;
        let mut out = String::with_capacity(16 * c.len() + 64);
        let _ = writeln!(
            out,
            "{MAGIC} {VERSION} dim={} n={} seed={}",
            c.dim(),
            c.len(),
            self.seed
        );
        for p in c.order() {
            let _ = writeln!(out, "{p}");
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let err = |line: usize, kind| ParseError { line, kind };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (dim, declared, seed) = match lines.next() {
            Some((_, header)) => parse_header(header).map_err(|k| err(1, k))?,
            None => return Err(err(1, ParseErrorKind::Header("empty file".into()))),
        };

        let mut cluster = Cluster::new(dim).expect("header dimension already checked");
        let mut seen = HashSet::new();
        let mut found = 0usize;
        let mut last_line = 1;
        for (no, line) in lines {
            last_line = no;
            if line.trim().is_empty() {
                continue;
            }
            found += 1;
            if found > declared {
                return Err(err(no, ParseErrorKind::CountMismatch { declared, found }));
            }
            let coords = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i32>()
                        .map_err(|_| ParseErrorKind::Coordinate(t.into()))
                })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|k| err(no, k))?;
            if coords.len() != dim {
                return Err(err(
                    no,
                    ParseErrorKind::Arity {
                        expected: dim,
                        found: coords.len(),
                    },
                ));
            }
            let p = LatticePoint::from_slice(&coords).expect("arity checked");
            if !seen.insert(p) {
                return Err(err(no, ParseErrorKind::Duplicate(line.trim().into())));
            }
            if found == 1 {
                if p != LatticePoint::origin(dim) {
                    return Err(err(no, ParseErrorKind::SeedNotOrigin(line.trim().into())));
                }
            } else if cluster.add_site(p).is_err() {
                return Err(err(no, ParseErrorKind::Disconnected(line.trim().into())));
            }
        }
        if found != declared {
            return Err(err(
                last_line + 1,
                ParseErrorKind::CountMismatch { declared, found },
            ));
        }
        Ok(Snapshot { seed, cluster })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Snapshot::parse(&text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, usize, u64), ParseErrorKind> {
    let bad = |why: &str| ParseErrorKind::Header(why.to_string());
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 5 || tokens[0] != MAGIC {
        return Err(bad(&format!(
            "expected `{MAGIC} {VERSION} dim=<2|3> n=<count> seed=<u64>`"
        )));
    }
    if tokens[1] != VERSION {
        return Err(bad(&format!("unsupported version {}", tokens[1])));
    }
    let field = |token: &str, key: &str| -> std::result::Result<String, ParseErrorKind> {
        token
            .strip_prefix(key)
            .and_then(|v| v.strip_prefix('='))
            .map(str::to_string)
            .ok_or_else(|| bad(&format!("expected {key}=<value>, found {token:?}")))
    };
    let dim: usize = field(tokens[2], "dim")?
        .parse()
        .map_err(|_| bad("dim is not an integer"))?;
    if dim != 2 && dim != 3 {
        return Err(bad(&format!("dim must be 2 or 3, found {dim}")));
    }
    let n: usize = field(tokens[3], "n")?
        .parse()
        .map_err(|_| bad("n is not an integer"))?;
    if n == 0 {
        return Err(bad("n must be at least 1"));
    }
    let seed: u64 = field(tokens[4], "seed")?
        .parse()
        .map_err(|_| bad("seed is not an unsigned integer"))?;
    Ok((dim, n, seed))
}

/// `n,rg,rmax` rows, one per attached particle.
pub fn history_csv(history: &GrowthHistory) -> String {
    let mut out = String::from("n,rg,rmax\n");
    for r in &history.records {
        let _ = writeln!(out, "{},{},{}", r.n, r.rg, r.rmax);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_cluster(len: i32) -> Cluster {
        let order: Vec<LatticePoint> = (0..len).map(|x| LatticePoint::new2(x, 0)).collect();
        Cluster::from_order(2, &order).unwrap()
    }

    #[test]
    fn text_layout() {
        let snap = Snapshot {
            seed: 9,
            cluster: line_cluster(3),
        };
        assert_eq!(
            snap.to_text(),
            "dla-snapshot v1 dim=2 n=3 seed=9\n0 0\n1 0\n2 0\n"
        );
        assert_eq!(Snapshot::parse(&snap.to_text()).unwrap(), snap);
    }

    #[test]
    fn short_file_is_a_count_mismatch() {
        let text = "dla-snapshot v1 dim=2 n=5 seed=0\n0 0\n1 0\n2 0\n3 0\n";
        let e = Snapshot::parse(text).unwrap_err();
        assert!(e.to_string().contains("count mismatch"), "{e}");
        assert_eq!(e.line, 6);
    }

    #[test]
    fn long_file_is_a_count_mismatch() {
        let text = "dla-snapshot v1 dim=2 n=2 seed=0\n0 0\n1 0\n2 0\n";
        let e = Snapshot::parse(text).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::CountMismatch { .. }));
        assert_eq!(e.line, 4);
    }

    #[test]
    fn wrong_arity_names_the_line() {
        let text = "dla-snapshot v1 dim=2 n=3 seed=0\n0 0\n1 2 3\n1 0\n";
        let e = Snapshot::parse(text).unwrap_err();
        assert!(e.to_string().contains("arity"), "{e}");
        assert_eq!(e.line, 3);
    }

    #[test]
    fn duplicates_and_gaps() {
        let dup = "dla-snapshot v1 dim=2 n=3 seed=0\n0 0\n1 0\n1 0\n";
        let e = Snapshot::parse(dup).unwrap_err();
        assert!(e.to_string().contains("duplicate"));
        assert_eq!(e.line, 4);
        let gap = "dla-snapshot v1 dim=2 n=2 seed=0\n0 0\n2 0\n";
        assert!(matches!(
            Snapshot::parse(gap).unwrap_err().kind,
            ParseErrorKind::Disconnected(_)
        ));
        let moved = "dla-snapshot v1 dim=2 n=1 seed=0\n1 0\n";
        assert!(matches!(
            Snapshot::parse(moved).unwrap_err().kind,
            ParseErrorKind::SeedNotOrigin(_)
        ));
    }

    #[test]
    fn bad_headers() {
        for text in [
            "",
            "dla-snapshot v2 dim=2 n=1 seed=0\n0 0\n",
            "dla-snapshot v1 dim=4 n=1 seed=0\n0 0 0 0\n",
            "dla-snapshot v1 n=1 dim=2 seed=0\n0 0\n",
            "snapshot v1 dim=2 n=1 seed=0\n0 0\n",
            "dla-snapshot v1 dim=2 n=1 seed=-1\n0 0\n",
        ] {
            let e = Snapshot::parse(text).unwrap_err();
            assert_eq!(e.line, 1, "{text:?}");
            assert!(e.to_string().contains("header"), "{e}");
        }
    }

    #[test]
    fn bad_integer() {
        let text = "dla-snapshot v1 dim=2 n=2 seed=0\n0 0\n1 x\n";
        let e = Snapshot::parse(text).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, ParseErrorKind::Coordinate(_)));
    }

    #[test]
    fn history_rows() {
        let csv = history_csv(&line_cluster(3).history());
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("n,rg,rmax"));
        assert_eq!(lines.next(), Some("1,0.5,1"));
        assert_eq!(lines.count(), 1);
    }
}
