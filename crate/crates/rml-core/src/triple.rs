//! Triples, triple sets and the triple universe of an instance.
//!
//! A triple `(tail1, tail2, head)` records the substitution of the bilinear
//! product `y_tail1 * y_tail2` by the artificial variable `y_head`, where the
//! tails partition the head. A triple set is *proper* when some subset of it
//! derives every monomial head from singletons; proper sets are exactly the
//! linearizations the rest of the crate evaluates and optimizes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::mlp::MlpInstance;

/// Default cap on the monomial degree for universe enumeration; the number of
/// triples of a degree-s monomial grows like 3^s.
pub const DEFAULT_DEGREE_CAP: usize = 10;

/// Ordered partition record: `tail1` and `tail2` partition `head`, with
/// `tail1 < tail2` in the canonical index-set order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    tail1: IndexSet,
    tail2: IndexSet,
    head: IndexSet,
}

impl Triple {
    /// Canonical constructor: orders the tails, forms the head as the union.
    /// Overlapping tails are rejected.
    pub fn canonical(a: IndexSet, b: IndexSet) -> Result<Self> {
        let head = a.union_disjoint(&b)?;
        let (tail1, tail2) = if a < b { (a, b) } else { (b, a) };
        Ok(Self { tail1, tail2, head })
    }

    pub fn tail1(&self) -> &IndexSet {
        &self.tail1
    }

    pub fn tail2(&self) -> &IndexSet {
        &self.tail2
    }

    pub fn head(&self) -> &IndexSet {
        &self.head
    }

    pub fn tails(&self) -> [&IndexSet; 2] {
        [&self.tail1, &self.tail2]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.tail1, self.tail2, self.head)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.tail1, self.tail2, self.head)
    }
}

/// Ordered set of triples; the working representation of a linearization.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TripleSet {
    triples: BTreeSet<Triple>,
}

impl TripleSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Self {
            triples: iter.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, t: Triple) -> bool {
        self.triples.insert(t)
    }

    pub fn remove(&mut self, t: &Triple) -> bool {
        self.triples.remove(t)
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.contains(t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn is_subset_of(&self, other: &TripleSet) -> bool {
        self.triples.is_subset(&other.triples)
    }

    /// Distinct heads, in canonical order.
    pub fn heads(&self) -> Vec<IndexSet> {
        let set: BTreeSet<IndexSet> = self.triples.iter().map(|t| t.head.clone()).collect();
        set.into_iter().collect()
    }

    /// Parses the `.rml` format: one triple per line,
    /// `<tail1>|<tail2>|<head>` with 1-based comma-separated indices.
    /// Tails are re-canonicalized; the head must equal their union.
    pub fn parse(text: &str) -> Result<Self> {
        let mut triples = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let groups: Vec<&str> = line.split('|').collect();
            if groups.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected `<tail1>|<tail2>|<head>`".into(),
                });
            }
            let parse_group = |g: &str| -> Result<IndexSet> {
                let mut idx = Vec::new();
                for f in g.split(',') {
                    let j: usize = f.trim().parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid index `{f}`"),
                    })?;
                    if j == 0 {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "indices are 1-based".into(),
                        });
                    }
                    idx.push(j - 1);
                }
                IndexSet::new(idx).map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })
            };
            let a = parse_group(groups[0])?;
            let b = parse_group(groups[1])?;
            let head = parse_group(groups[2])?;
            let t = Triple::canonical(a, b).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            if *t.head() != head {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("head {} is not the union of the tails", head),
                });
            }
            triples.insert(t);
        }
        Ok(Self { triples })
    }

    pub fn write(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            out.push_str(&t.tail1.to_text());
            out.push('|');
            out.push_str(&t.tail2.to_text());
            out.push('|');
            out.push_str(&t.head.to_text());
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for TripleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.triples.iter()).finish()
    }
}

impl FromIterator<Triple> for TripleSet {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Self::from_triples(iter)
    }
}

/// All triples derivable within one index set: every `(A, B, S)` with
/// `S ⊆ J`, `|S| >= 2` and `{A, B}` a two-part partition of `S`.
pub fn enumerate_monomial_triples(vars: &IndexSet, cap: usize) -> Result<Vec<Triple>> {
    if vars.len() > cap {
        return Err(Error::DegreeCap {
            degree: vars.len(),
            cap,
        });
    }
    let mut out = BTreeSet::new();
    for size in 2..=vars.len() {
        for head in vars.subsets_of_size(size) {
            // enumerate partitions via subsets containing the first element,
            // which picks each unordered partition exactly once
            let first = head.as_slice()[0];
            let rest: Vec<usize> = head.iter().skip(1).collect();
            for mask in 0..(1u64 << rest.len()) {
                let mut a = vec![first];
                let mut b = Vec::new();
                for (k, &j) in rest.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        a.push(j);
                    } else {
                        b.push(j);
                    }
                }
                if b.is_empty() {
                    continue;
                }
                let t = Triple::canonical(IndexSet::new(a)?, IndexSet::new(b)?)?;
                out.insert(t);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The universe of an instance: all triples of all monomials, deduplicated,
/// with per-monomial membership and the family of index sets they touch.
#[derive(Clone, Debug)]
pub struct TripleUniverse {
    all: Vec<Triple>,
    /// triple -> position in `all`
    position: BTreeMap<Triple, usize>,
    /// monomial index -> sorted positions of its triples
    per_monomial: Vec<Vec<usize>>,
    /// singletons of used variables plus every head/tail of a universe triple
    index_sets: Vec<IndexSet>,
}

impl TripleUniverse {
    pub fn build(mlp: &MlpInstance) -> Result<Self> {
        Self::build_with_cap(mlp, DEFAULT_DEGREE_CAP)
    }

    pub fn build_with_cap(mlp: &MlpInstance, cap: usize) -> Result<Self> {
        let mut position: BTreeMap<Triple, usize> = BTreeMap::new();
        let mut per_raw: Vec<Vec<Triple>> = Vec::with_capacity(mlp.monomials().len());
        for m in mlp.monomials() {
            if m.vars.len() < 2 {
                per_raw.push(Vec::new());
                continue;
            }
            per_raw.push(enumerate_monomial_triples(&m.vars, cap)?);
        }
        let mut all: BTreeSet<Triple> = BTreeSet::new();
        for ts in &per_raw {
            all.extend(ts.iter().cloned());
        }
        let all: Vec<Triple> = all.into_iter().collect();
        for (i, t) in all.iter().enumerate() {
            position.insert(t.clone(), i);
        }
        let per_monomial = per_raw
            .iter()
            .map(|ts| ts.iter().map(|t| position[t]).collect())
            .collect();

        let mut index_sets: BTreeSet<IndexSet> = mlp
            .used_variables()
            .into_iter()
            .map(IndexSet::singleton)
            .collect();
        for t in &all {
            index_sets.insert(t.tail1().clone());
            index_sets.insert(t.tail2().clone());
            index_sets.insert(t.head().clone());
        }

        Ok(Self {
            all,
            position,
            per_monomial,
            index_sets: index_sets.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.all.len()
    }

    pub fn is_empty(&self) -> bool {
        self.all.is_empty()
    }

    pub fn triples(&self) -> &[Triple] {
        &self.all
    }

    pub fn position_of(&self, t: &Triple) -> Option<usize> {
        self.position.get(t).copied()
    }

    pub fn monomial_triples(&self, i: usize) -> &[usize] {
        &self.per_monomial[i]
    }

    /// The family N of index sets: used singletons plus all heads and tails.
    pub fn index_sets(&self) -> &[IndexSet] {
        &self.index_sets
    }

    pub fn as_triple_set(&self) -> TripleSet {
        TripleSet::from_triples(self.all.iter().cloned())
    }
}

/// Derivability closure of a triple set: singletons are derivable, and a head
/// becomes derivable once both tails are. Rounds are synchronous, so each
/// derivable set records the canonically first triple whose tails were
/// already derivable in an earlier round. Heads reachable in fewer steps
/// therefore prefer shallower, more shareable producers.
fn derivation_closure(ts: &TripleSet) -> BTreeMap<IndexSet, Triple> {
    let mut producer: BTreeMap<IndexSet, Triple> = BTreeMap::new();
    loop {
        let mut round: BTreeMap<IndexSet, Triple> = BTreeMap::new();
        for t in ts.iter() {
            if producer.contains_key(t.head()) || round.contains_key(t.head()) {
                continue;
            }
            let ready = |s: &IndexSet| s.len() == 1 || producer.contains_key(s);
            if ready(t.tail1()) && ready(t.tail2()) {
                round.insert(t.head().clone(), t.clone());
            }
        }
        if round.is_empty() {
            return producer;
        }
        producer.extend(round);
    }
}

/// Tests whether `ts` is a proper triple set for `mlp`, returning a witness
/// subset that derives every monomial head when it is.
pub fn proper_witness(ts: &TripleSet, mlp: &MlpInstance) -> Option<TripleSet> {
    let producer = derivation_closure(ts);
    let mut needed: Vec<&IndexSet> = Vec::new();
    for m in mlp.monomials() {
        if m.vars.len() > 1 {
            if !producer.contains_key(&m.vars) {
                return None;
            }
            needed.push(&m.vars);
        }
    }
    // backward sweep: collect the producing triples reachable from the heads
    let mut witness = TripleSet::new();
    let mut stack: Vec<IndexSet> = needed.into_iter().cloned().collect();
    while let Some(s) = stack.pop() {
        if s.len() == 1 {
            continue;
        }
        let t = producer.get(&s).expect("closed under derivation").clone();
        if witness.insert(t.clone()) {
            stack.push(t.tail1().clone());
            stack.push(t.tail2().clone());
        }
    }
    Some(witness)
}

pub fn is_proper(ts: &TripleSet, mlp: &MlpInstance) -> bool {
    proper_witness(ts, mlp).is_some()
}

/// A subset-minimal proper subset of `ts`: the triples actually used by the
/// derivation closure, swept backward from the monomial heads.
pub fn minimal_support(ts: &TripleSet, mlp: &MlpInstance) -> Result<TripleSet> {
    proper_witness(ts, mlp).ok_or_else(|| Error::Improper {
        msg: "minimal_support requires a proper triple set".into(),
    })
}

/// Total variable count of the RML induced by `ts`: singletons used by the
/// monomials plus one artificial variable per distinct head.
pub fn count_variables(ts: &TripleSet, mlp: &MlpInstance) -> usize {
    mlp.used_variables().len() + ts.heads().len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::example_instance;

    fn set(v: &[usize]) -> IndexSet {
        IndexSet::new(v.to_vec()).unwrap()
    }

    fn triple(a: &[usize], b: &[usize]) -> Triple {
        Triple::canonical(set(a), set(b)).unwrap()
    }

    use crate::fixtures::{five_triple_set, six_triple_set};

    #[test]
    fn canonical_ordering_of_tails() {
        let t = triple(&[1], &[0]);
        assert_eq!(t.tail1(), &set(&[0]));
        assert_eq!(t.tail2(), &set(&[1]));
        assert_eq!(t.head(), &set(&[0, 1]));

        // length-then-lex: {3} precedes {0,2}
        let t = triple(&[0, 2], &[3]);
        assert_eq!(t.tail1(), &set(&[3]));
        assert_eq!(t.tail2(), &set(&[0, 2]));

        assert!(Triple::canonical(set(&[0]), set(&[0, 1])).is_err());
    }

    #[test]
    fn enumeration_counts_match_the_closed_form() {
        // sum_{k=2}^{s} C(s,k) * (2^{k-1} - 1), computed independently
        let binom = |n: usize, k: usize| -> usize {
            let mut r = 1usize;
            for i in 0..k {
                r = r * (n - i) / (i + 1);
            }
            r
        };
        for s in 2..=6 {
            let expected: usize = (2..=s).map(|k| binom(s, k) * ((1 << (k - 1)) - 1)).sum();
            let vars = set(&(0..s).collect::<Vec<_>>());
            let got = enumerate_monomial_triples(&vars, DEFAULT_DEGREE_CAP).unwrap();
            assert_eq!(got.len(), expected, "degree {s}");
            // and the enumeration is duplicate-free by construction (BTreeSet)
        }
        assert_eq!(
            enumerate_monomial_triples(&set(&[0, 1]), DEFAULT_DEGREE_CAP)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn enumeration_respects_the_cap() {
        let vars = set(&(0..5).collect::<Vec<_>>());
        assert!(matches!(
            enumerate_monomial_triples(&vars, 4),
            Err(Error::DegreeCap { degree: 5, cap: 4 })
        ));
    }

    #[test]
    fn universe_of_the_running_example() {
        let mlp = example_instance();
        let uni = TripleUniverse::build(&mlp).unwrap();
        for i in 0..3 {
            assert_eq!(uni.monomial_triples(i).len(), 6);
        }
        // 6 + 6 + 6 minus the three shared pair triples {1,3}, {2,3}, {3,4}
        assert_eq!(uni.len(), 15);
        // N: four singletons, six pairs, three monomial heads
        assert_eq!(uni.index_sets().len(), 13);
    }

    #[test]
    fn universe_trivial_cases() {
        let single = MlpInstance::parse("2 1 unitbox\n1 1 2\n").unwrap();
        assert_eq!(TripleUniverse::build(&single).unwrap().len(), 1);

        let disjoint = MlpInstance::parse("6 2 unitbox\n1 1 2 3\n1 4 5 6\n").unwrap();
        assert_eq!(TripleUniverse::build(&disjoint).unwrap().len(), 12);
    }

    #[test]
    fn golden_sets_are_proper_with_expected_variable_counts() {
        let mlp = example_instance();
        assert!(is_proper(&six_triple_set(), &mlp));
        assert!(is_proper(&five_triple_set(), &mlp));
        assert_eq!(count_variables(&six_triple_set(), &mlp), 10);
        assert_eq!(count_variables(&five_triple_set(), &mlp), 9);
    }

    #[test]
    fn removing_a_link_breaks_properness() {
        let mlp = example_instance();
        let mut ts = five_triple_set();
        ts.remove(&triple(&[0], &[2]));
        assert!(!is_proper(&ts, &mlp));
    }

    #[test]
    fn properness_is_monotone() {
        let mlp = example_instance();
        let uni = TripleUniverse::build(&mlp).unwrap();
        let mut ts = five_triple_set();
        for extra in uni.triples() {
            ts.insert(extra.clone());
            assert!(is_proper(&ts, &mlp));
        }
        assert!(is_proper(&uni.as_triple_set(), &mlp));
    }

    #[test]
    fn minimal_support_strips_unreachable_triples() {
        let mlp = example_instance();
        let mut ts = five_triple_set();
        ts.insert(triple(&[1], &[3])); // {2,4} never used by the closure
        let min = minimal_support(&ts, &mlp).unwrap();
        assert_eq!(min, five_triple_set());
    }

    #[test]
    fn minimal_support_of_the_full_universe_is_five_triples() {
        let mlp = example_instance();
        let uni = TripleUniverse::build(&mlp).unwrap();
        let min = minimal_support(&uni.as_triple_set(), &mlp).unwrap();
        assert_eq!(min.len(), 5);
        assert!(is_proper(&min, &mlp));
        // removing any one triple breaks properness
        for t in min.iter() {
            let mut smaller = min.clone();
            smaller.remove(t);
            assert!(!is_proper(&smaller, &mlp));
        }
    }

    #[test]
    fn degree_one_monomials_need_no_triples() {
        let mlp = MlpInstance::parse("3 2 unitbox\n2 1\n-1 2\n").unwrap();
        assert!(is_proper(&TripleSet::new(), &mlp));
        assert_eq!(count_variables(&TripleSet::new(), &mlp), 2);
    }

    #[test]
    fn rml_format_round_trip() {
        let ts = five_triple_set();
        let text = ts.write();
        assert_eq!(TripleSet::parse(&text).unwrap(), ts);
        // 1-based groups: triple ({3},{4},{3,4}) prints as `3|4|3,4`
        assert!(text.contains("3|4|3,4"));
        assert!(TripleSet::parse("1|2|1,3\n").is_err());
        assert!(TripleSet::parse("1|1,2|1,2\n").is_err());
    }
}
