use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::distances::DistanceKind;
use crate::error::{Error, Result};
use crate::graph::{Graph, MatrixKind};

pub const DEFAULT_GIRT_K: usize = 16;
pub const DEFAULT_BASISNET_LAYERS: usize = 1;

/// Initial pair coloring for the plain 2-IGN refinement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairInit {
    Atomic,
    Projection(MatrixKind),
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmSpec {
    Wl1,
    Epwl(MatrixKind),
    Swl,
    Pswl,
    Gdwl(DistanceKind),
    Fwl2,
    Ign2(PairInit),
    SpectralIgn(MatrixKind),
    SiameseIgn(MatrixKind),
    WeakSpectralIgn(MatrixKind),
    BasisNet { kind: MatrixKind, layers: usize },
    Spe(MatrixKind),
    Peg(MatrixKind),
    Girt { k: usize },
}

impl AlgorithmSpec {
    /// The matrix whose decomposition the spec consumes, if any.
    pub fn matrix_kind(&self) -> Option<MatrixKind> {
        use AlgorithmSpec::*;
        match self {
            Epwl(k) | SpectralIgn(k) | SiameseIgn(k) | WeakSpectralIgn(k) | Spe(k) | Peg(k) => Some(*k),
            BasisNet { kind, .. } => Some(*kind),
            Ign2(PairInit::Projection(k)) => Some(*k),
            _ => None,
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let needs_degrees = self.matrix_kind() == Some(MatrixKind::NormalizedLaplacian)
            || matches!(self, AlgorithmSpec::Girt { .. })
            || matches!(self, AlgorithmSpec::Gdwl(d) if d.needs_no_isolated());
        if needs_degrees && g.has_isolated() {
            return Err(Error::domain(format!("`{self}` is undefined on graphs with isolated vertices")));
        }
        Ok(())
    }

    /// A representative spec of every family, used by scans and isomorphism checks.
    pub fn catalogue() -> Vec<AlgorithmSpec> {
        use AlgorithmSpec::*;
        let mut v = vec![Wl1, Swl, Pswl, Fwl2, Ign2(PairInit::Atomic), Girt { k: DEFAULT_GIRT_K }];
        for k in MatrixKind::MAIN {
            v.push(Epwl(k));
            v.push(SpectralIgn(k));
            v.push(SiameseIgn(k));
            v.push(WeakSpectralIgn(k));
            v.push(BasisNet { kind: k, layers: DEFAULT_BASISNET_LAYERS });
            v.push(Spe(k));
            v.push(Peg(k));
        }
        v.extend(DistanceKind::all_default().into_iter().map(Gdwl));
        v
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AlgorithmSpec::*;
        match self {
            Wl1 => f.write_str("wl1"),
            Epwl(k) => write!(f, "epwl:{k}"),
            Swl => f.write_str("swl"),
            Pswl => f.write_str("pswl"),
            Gdwl(d) => write!(f, "gdwl:{d}"),
            Fwl2 => f.write_str("fwl2"),
            Ign2(PairInit::Atomic) => f.write_str("ign2:atp"),
            Ign2(PairInit::Projection(k)) => write!(f, "ign2:{k}"),
            SpectralIgn(k) => write!(f, "sign:{k}"),
            SiameseIgn(k) => write!(f, "siam:{k}"),
            WeakSpectralIgn(k) => write!(f, "wsign:{k}"),
            BasisNet { kind, layers } => write!(f, "basisnet:{kind}:layers={layers}"),
            Spe(k) => write!(f, "spe:{k}"),
            Peg(k) => write!(f, "peg:{k}"),
            Girt { k } => write!(f, "girt:K={k}"),
        }
    }
}

impl Serialize for AlgorithmSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn kind_arg(name: &str, rest: Option<&str>) -> Result<MatrixKind> {
    rest.ok_or_else(|| Error::usage(format!("`{name}` needs a matrix kind, e.g. `{name}:A`")))?
        .parse()
}

fn keyed_usize(text: &str, key: &str) -> Result<usize> {
    text.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| Error::usage(format!("expected `{key}=<integer>`, got `{text}`")))
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use AlgorithmSpec::*;
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        let no_args = |spec: AlgorithmSpec| match rest {
            None => Ok(spec),
            Some(_) => Err(Error::usage(format!("`{head}` takes no parameters"))),
        };
        match head.to_ascii_lowercase().as_str() {
            "wl1" | "1wl" => no_args(Wl1),
            "swl" => no_args(Swl),
            "pswl" => no_args(Pswl),
            "fwl2" | "2fwl" => no_args(Fwl2),
            "epwl" => Ok(Epwl(kind_arg(head, rest)?)),
            "sign" => Ok(SpectralIgn(kind_arg(head, rest)?)),
            "siam" => Ok(SiameseIgn(kind_arg(head, rest)?)),
            "wsign" => Ok(WeakSpectralIgn(kind_arg(head, rest)?)),
            "spe" => Ok(Spe(kind_arg(head, rest)?)),
            "peg" => Ok(Peg(kind_arg(head, rest)?)),
            "gdwl" => {
                let d = rest.ok_or_else(|| Error::usage("`gdwl` needs a distance, e.g. `gdwl:spd`"))?;
                Ok(Gdwl(d.parse()?))
            }
            "ign2" => match rest {
                Some("atp") => Ok(Ign2(PairInit::Atomic)),
                other => Ok(Ign2(PairInit::Projection(kind_arg(head, other)?))),
            },
            "basisnet" => {
                let rest = rest.ok_or_else(|| Error::usage("`basisnet` needs a matrix kind"))?;
                let (k, layers) = match rest.split_once(':') {
                    Some((k, l)) => (k, keyed_usize(l, "layers")?),
                    None => (rest, DEFAULT_BASISNET_LAYERS),
                };
                Ok(BasisNet { kind: k.parse()?, layers })
            }
            "girt" => {
                let k = match rest {
                    None => DEFAULT_GIRT_K,
                    Some(r) => keyed_usize(r, "K")?,
                };
                Ok(Girt { k })
            }
            _ => Err(Error::usage(format!("unknown algorithm `{head}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for spec in AlgorithmSpec::catalogue() {
            let text = spec.to_string();
            assert_eq!(text.parse::<AlgorithmSpec>().unwrap(), spec, "{text}");
        }
        assert_eq!("ign2:Lhat".parse::<AlgorithmSpec>().unwrap().to_string(), "ign2:Lhat");
    }

    #[test]
    fn parses_parameters() {
        assert_eq!("girt".parse::<AlgorithmSpec>().unwrap(), AlgorithmSpec::Girt { k: 16 });
        assert_eq!("girt:K=3".parse::<AlgorithmSpec>().unwrap(), AlgorithmSpec::Girt { k: 3 });
        assert_eq!(
            "basisnet:L:layers=2".parse::<AlgorithmSpec>().unwrap(),
            AlgorithmSpec::BasisNet { kind: MatrixKind::Laplacian, layers: 2 }
        );
        assert_eq!(
            "gdwl:diffusion:tau=0.5".parse::<AlgorithmSpec>().unwrap(),
            AlgorithmSpec::Gdwl(DistanceKind::Diffusion(0.5))
        );
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "epwl", "epwl:X", "wl1:A", "girt:k=3", "gdwl:foo", "basisnet:A:layers=x", "nope"] {
            assert!(matches!(bad.parse::<AlgorithmSpec>(), Err(Error::Usage(_)) | Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn isolated_vertices_rejected_for_degree_normalized_specs() {
        let g = Graph::empty(3);
        assert!(AlgorithmSpec::Epwl(MatrixKind::NormalizedLaplacian).validate(&g).is_err());
        assert!(AlgorithmSpec::Girt { k: 2 }.validate(&g).is_err());
        assert!(AlgorithmSpec::Epwl(MatrixKind::Adjacency).validate(&g).is_ok());
    }
}
