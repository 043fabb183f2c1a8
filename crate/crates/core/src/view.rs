//! Full-information views of processes in iterated immediate-snapshot runs.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The state of a process after some number of immediate-snapshot rounds.
///
/// The initial view is empty. After a round, a view lists every process seen in
/// that round's snapshot together with the view that process held before the
/// round, sorted by process id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct View(Vec<(usize, View)>);

impl View {
    pub fn initial() -> Self {
        View(Vec::new())
    }

    /// Builds a snapshot view from `(id, previous view)` pairs.
    pub fn snapshot(mut seen: Vec<(usize, View)>) -> Self {
        seen.sort();
        seen.dedup_by(|a, b| a.0 == b.0);
        View(seen)
    }

    pub fn is_initial(&self) -> bool {
        self.0.is_empty()
    }

    pub fn seen(&self) -> &[(usize, View)] {
        &self.0
    }

    /// Number of rounds recorded in this view.
    pub fn depth(&self) -> usize {
        self.0.first().map_or(0, |(_, v)| v.depth() + 1)
    }

    /// Process ids appearing anywhere in the view history, plus `own`.
    pub fn carrier(&self, own: usize) -> Vec<usize> {
        let mut ids = vec![own];
        self.collect_ids(&mut ids);
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    fn collect_ids(&self, out: &mut Vec<usize>) {
        for (id, v) in &self.0 {
            out.push(*id);
            v.collect_ids(out);
        }
    }

    /// Applies an id relabeling throughout the history.
    pub fn relabel(&self, f: &impl Fn(usize) -> usize) -> View {
        View::snapshot(self.0.iter().map(|(id, v)| (f(*id), v.relabel(f))).collect())
    }

    /// Compact textual token, e.g. `(0,1)` after one round or `(0(0,1),2(2))`
    /// after two.
    pub fn token(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for View {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, (id, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}{v}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for View {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let view = parse_view(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing input in view token {s:?}")));
        }
        Ok(view)
    }
}

fn parse_view(b: &[u8], pos: &mut usize) -> Result<View, Error> {
    if *pos >= b.len() || b[*pos] != b'(' {
        return Ok(View::initial());
    }
    *pos += 1;
    let mut seen = Vec::new();
    loop {
        let start = *pos;
        while *pos < b.len() && b[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse("expected process id in view token".into()));
        }
        let id: usize = std::str::from_utf8(&b[start..*pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Parse(format!("bad id in view token: {e}")))?;
        let inner = parse_view(b, pos)?;
        seen.push((id, inner));
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b')') => {
                *pos += 1;
                break;
            }
            _ => return Err(Error::Parse("unterminated view token".into())),
        }
    }
    Ok(View::snapshot(seen))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn token_round_trip() {
        let r1 = View::snapshot(vec![(1, View::initial()), (0, View::initial())]);
        assert_eq!(r1.token(), "(0,1)");
        let r2 = View::snapshot(vec![(2, View::snapshot(vec![(2, View::initial())])), (0, r1.clone())]);
        assert_eq!(r2.token(), "(0(0,1),2(2))");
        assert_eq!(r2.depth(), 2);
        assert_eq!(r2.carrier(0), vec![0, 1, 2]);
        for v in [View::initial(), r1, r2] {
            assert_eq!(v.token().parse::<View>().unwrap(), v);
        }
        assert!("(0,".parse::<View>().is_err());
        assert!("(0)x".parse::<View>().is_err());
    }

    #[test]
    fn relabel_resorts() {
        let v = View::snapshot(vec![(0, View::initial()), (2, View::initial())]);
        let swapped = v.relabel(&|i| 2 - i);
        assert_eq!(swapped, v);
        let shifted = v.relabel(&|i| i + 1);
        assert_eq!(shifted.token(), "(1,3)");
    }
}
