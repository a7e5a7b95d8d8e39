use std::fmt::Write as _;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Point, PrimeField, Space};

/// A subset of F_p^n stored as a dense bitmap over point indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    space: Space,
    words: Vec<u64>,
    size: usize,
}

impl PointSet {
    pub fn empty(space: &Space) -> Self {
        Self {
            space: space.clone(),
            words: vec![0; space.size().div_ceil(64)],
            size: 0,
        }
    }

    pub fn full(space: &Space) -> Self {
        Self::empty(space).complement()
    }

    pub fn from_indices(space: &Space, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(space);
        for i in indices {
            space.check_index(i)?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn from_coords(space: &Space, points: &[Vec<u32>]) -> Result<Self> {
        let indices = points
            .iter()
            .map(|c| space.encode(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, indices)
    }

    pub(crate) fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.size += 1;
        }
        fresh
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.space.size() && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    pub fn points(&self) -> Vec<Point> {
        self.indices()
            .map(|i| self.space.decode(i).expect("member index in range"))
            .collect()
    }

    pub fn coords(&self) -> Vec<Vec<u32>> {
        self.points().into_iter().map(|p| p.coords).collect()
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::InvalidArgument(format!(
                "point sets live in different spaces ({}^{} vs {}^{})",
                self.space.p(),
                self.space.n(),
                other.space.p(),
                other.space.n()
            )));
        }
        Ok(())
    }

    fn from_words(space: &Space, mut words: Vec<u64>) -> Self {
        let tail = space.size() % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Self {
            space: space.clone(),
            words,
            size,
        }
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_same_space(other)?;
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op(a, b))
            .collect();
        Ok(Self::from_words(&self.space, words))
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::from_words(&self.space, self.words.iter().map(|w| !w).collect())
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Plain-text form: a `p=<p> n=<n>` header, then one point per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("p={} n={}\n", self.space.p(), self.space.n());
        for c in self.coords() {
            let line: Vec<String> = c.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `p=<p> n=<n>` header".into()))?;
        let (mut p, mut n) = (None, None);
        for token in header.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header token {token:?}")))?;
            let value = value.trim();
            match key.trim() {
                "p" => {
                    p = Some(
                        value
                            .parse::<u32>()
                            .map_err(|e| Error::Parse(format!("p: {e}")))?,
                    )
                }
                "n" => {
                    n = Some(
                        value
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("n: {e}")))?,
                    )
                }
                other => return Err(Error::Parse(format!("unknown header key {other:?}"))),
            }
        }
        let (p, n) = match (p, n) {
            (Some(p), Some(n)) => (p, n),
            _ => return Err(Error::Parse("header must declare both p and n".into())),
        };
        let space = Space::new(PrimeField::new(p)?, n)?;
        let points = lines
            .map(|line| {
                line.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<u32>()
                            .map_err(|e| Error::Parse(format!("coordinate {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_coords(&space, &points)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Accepts either serialization, choosing by the first character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    p: u32,
    n: usize,
    points: Vec<Vec<u32>>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetRepr {
            p: self.space.p(),
            n: self.space.n(),
            points: self.coords(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PointSetRepr::deserialize(d)?;
        let field = PrimeField::new(repr.p).map_err(D::Error::custom)?;
        let space = Space::new(field, repr.n).map_err(D::Error::custom)?;
        PointSet::from_coords(&space, &repr.points).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn space(p: u32, n: usize) -> Space {
        Space::new(PrimeField::new(p).unwrap(), n).unwrap()
    }

    #[test]
    fn set_algebra() {
        let s = space(3, 4);
        let a = PointSet::from_indices(&s, [0, 5, 64, 80]).unwrap();
        let b = PointSet::from_indices(&s, [5, 6, 80]).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.union(&b).unwrap().len(), 5);
        assert_eq!(
            a.intersection(&b).unwrap().indices().collect::<Vec<_>>(),
            vec![5, 80]
        );
        assert_eq!(
            a.difference(&b).unwrap().indices().collect::<Vec<_>>(),
            vec![0, 64]
        );
        assert_eq!(a.complement().len(), 81 - 4);
        assert_eq!(PointSet::full(&s).len(), 81);
        assert!(PointSet::from_indices(&s, [81]).is_err());
        let other = PointSet::empty(&space(5, 2));
        assert!(a.union(&other).is_err());
    }

    #[test]
    fn text_format() {
        let set = PointSet::from_text("# a line in F_3^2\np=3 n=2\n0 0\n1 1\n\n2,2\n").unwrap();
        assert_eq!(set.len(), 3);
        assert_eq!(set.indices().collect::<Vec<_>>(), vec![0, 4, 8]);
        assert!(PointSet::from_text("0 0\n").is_err());
        assert!(PointSet::from_text("p=3\n0 0\n").is_err());
        assert!(PointSet::from_text("p=4 n=1\n0\n").is_err());
        assert!(PointSet::from_text("p=3 n=2\n0 3\n").is_err());
        assert!(PointSet::from_text("p=3 n=2\n0 0 0\n").is_err());
    }

    #[test]
    fn json_format() {
        let set = PointSet::parse(r#"{"p":5,"n":1,"points":[[0],[1]]}"#).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(set.to_json(), r#"{"p":5,"n":1,"points":[[0],[1]]}"#);
        assert!(PointSet::parse(r#"{"p":2,"n":1,"points":[]}"#).is_err());
    }

    proptest! {
        #[test]
        fn serializations_round_trip(p in prop::sample::select(vec![3u32, 5, 7]), n in 1usize..4, seeds in prop::collection::vec(any::<usize>(), 0..20)) {
            let s = space(p, n);
            let set = PointSet::from_indices(&s, seeds.iter().map(|x| x % s.size())).unwrap();
            prop_assert_eq!(PointSet::parse(&set.to_text()).unwrap(), set.clone());
            prop_assert_eq!(PointSet::parse(&set.to_json()).unwrap(), set.clone());
            prop_assert_eq!(set.indices().count(), set.len());
        }
    }
}
