//! Generator mini-syntax.
//!
//! A spec is a family name followed by its numeric arguments, all separated
//! by `:` or `,`. Combinators take two specs: `strong:path:2,path:3`,
//! `join:complete:2,cycle:5`. Random families take an optional trailing
//! seed (`tree:8` or `tree:8,42`); when it is missing the `--seed` value is
//! used.

use hyperopic::graph::{cartesian, disjoint_union, generate, join, strong, Family, Graph};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SpecError {
    #[error("unexpected end of generator spec")]
    Truncated,
    #[error("unknown generator family `{0}`")]
    Unknown(String),
    #[error("bad number `{0}`")]
    Number(String),
    #[error("trailing input `{0}` in generator spec")]
    Trailing(String),
    #[error(transparent)]
    Graph(#[from] hyperopic::graph::GraphError),
}

struct Tokens<'a> {
    items: Vec<&'a str>,
    pos: usize,
    seed: u64,
}

impl<'a> Tokens<'a> {
    fn next(&mut self) -> Result<&'a str, SpecError> {
        let t = self.items.get(self.pos).copied().ok_or(SpecError::Truncated)?;
        self.pos += 1;
        Ok(t)
    }

    fn int(&mut self) -> Result<usize, SpecError> {
        let t = self.next()?;
        t.parse().map_err(|_| SpecError::Number(t.into()))
    }

    fn float(&mut self) -> Result<f64, SpecError> {
        let t = self.next()?;
        t.parse().map_err(|_| SpecError::Number(t.into()))
    }

    /// An optional numeric token, used for trailing seeds.
    fn seed(&mut self) -> Result<u64, SpecError> {
        match self.items.get(self.pos) {
            Some(t) if t.chars().all(|c| c.is_ascii_digit()) && !t.is_empty() => {
                self.pos += 1;
                t.parse().map_err(|_| SpecError::Number((*t).into()))
            }
            _ => Ok(self.seed),
        }
    }

    fn graph(&mut self) -> Result<Graph, SpecError> {
        let name = self.next()?;
        let family = match name {
            "complete" | "k" => Family::Complete(self.int()?),
            "path" | "p" => Family::Path(self.int()?),
            "cycle" | "c" => Family::Cycle(self.int()?),
            "complete-minus-edge" | "kminuse" => Family::CompleteMinusEdge(self.int()?),
            "leafed-complete" | "gn" => Family::LeafedComplete(self.int()?),
            "empty" => Family::Empty(self.int()?),
            "tree" => Family::TreeRandom { n: self.int()?, seed: self.seed()? },
            "er" => Family::ErConnected { n: self.int()?, p: self.float()?, seed: self.seed()? },
            "join" | "union" | "cartesian" | "strong" => {
                let (a, b) = (self.graph()?, self.graph()?);
                return Ok(match name {
                    "join" => join(&a, &b)?,
                    "union" => disjoint_union(&a, &b)?,
                    "cartesian" => cartesian(&a, &b)?,
                    _ => strong(&a, &b)?,
                });
            }
            other => return Err(SpecError::Unknown(other.into())),
        };
        Ok(generate(family)?)
    }
}

pub fn parse_spec(spec: &str, seed: u64) -> Result<Graph, SpecError> {
    let items: Vec<&str> = spec.split([':', ',']).map(str::trim).collect();
    let mut t = Tokens { items, pos: 0, seed };
    let g = t.graph()?;
    if t.pos < t.items.len() {
        return Err(SpecError::Trailing(t.items[t.pos..].join(",")));
    }
    Ok(g)
}
