use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::QuiverError;

/// Vertex label such as `v:2:1`, `y:3`, `y':1` or a bare integer `4`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub tag: String,
    pub idx: Vec<i64>,
}

impl VertexId {
    pub fn new(tag: &str, idx: &[i64]) -> Self {
        VertexId { tag: tag.to_string(), idx: idx.to_vec() }
    }

    pub fn num(i: i64) -> Self {
        VertexId { tag: String::new(), idx: vec![i] }
    }

    /// `v^s_i`
    pub fn v(s: usize, i: usize) -> Self {
        Self::new("v", &[s as i64, i as i64])
    }

    /// Mirror copy `u^s_i`.
    pub fn u(s: usize, i: usize) -> Self {
        Self::new("u", &[s as i64, i as i64])
    }

    pub fn y(s: usize) -> Self {
        Self::new("y", &[s as i64])
    }

    pub fn y_prime(s: usize) -> Self {
        Self::new("y'", &[s as i64])
    }

    /// Row and column of a `v`/`u` vertex.
    pub fn row_col(&self) -> Option<(usize, usize)> {
        if (self.tag == "v" || self.tag == "u") && self.idx.len() == 2 {
            Some((self.idx[0] as usize, self.idx[1] as usize))
        } else {
            None
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)?;
        for (k, i) in self.idx.iter().enumerate() {
            if k > 0 || !self.tag.is_empty() {
                f.write_str(":")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for VertexId {
    type Err = QuiverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuiverError::Format(format!("bad vertex id {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(bad());
        }
        let (tag, rest) = match parts[0].parse::<i64>() {
            Ok(_) => ("", &parts[..]),
            Err(_) => (parts[0], &parts[1..]),
        };
        if !tag.is_empty() && !tag.chars().all(|c| c.is_alphanumeric() || c == '\'' || c == '_') {
            return Err(bad());
        }
        let idx = rest.iter().map(|p| p.parse::<i64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        if tag.is_empty() && idx.is_empty() {
            return Err(bad());
        }
        Ok(VertexId { tag: tag.to_string(), idx })
    }
}

impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        for s in ["v:2:1", "y:3", "y':1", "4", "y:2:5"] {
            let v: VertexId = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!(VertexId::v(2, 1).to_string(), "v:2:1");
        assert!("v::1".parse::<VertexId>().is_err());
        assert!("".parse::<VertexId>().is_err());
    }
}
