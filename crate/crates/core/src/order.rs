//! Linear orders over `0..n`, partial orders on outcome subsets, permutations
//! acting on orders, and rank-agreement scores.
//!
//! A [`LinearOrder`] stores its ranking best-first: position `k` holds the
//! outcome ranked `k`-th. The derived `Ord` is lexicographic on that ranking,
//! which is the canonical order used for enumeration and tie-breaking
//! everywhere in the crate.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A strict total order over outcomes `0..n`, best first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearOrder {
    ranking: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let n = ranking.len();
        if n == 0 {
            return Err(Error::invalid("a linear order needs at least one outcome"));
        }
        let mut seen = vec![false; n];
        for &c in &ranking {
            if c >= n || seen[c] {
                return Err(Error::invalid(format!(
                    "ranking {ranking:?} is not a permutation of 0..{n}"
                )));
            }
            seen[c] = true;
        }
        Ok(LinearOrder { ranking })
    }

    /// `0 > 1 > ... > n-1`, the canonically first order.
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "a linear order needs at least one outcome");
        LinearOrder {
            ranking: (0..n).collect(),
        }
    }

    /// Every order over `0..n` in canonical (lexicographic) order.
    pub fn all(n: usize) -> Vec<LinearOrder> {
        (0..n)
            .permutations(n)
            .map(|ranking| LinearOrder { ranking })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// Inverse of the ranking: `positions()[c]` is the rank of outcome `c`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n()];
        for (k, &c) in self.ranking.iter().enumerate() {
            pos[c] = k;
        }
        pos
    }

    pub fn position(&self, c: usize) -> usize {
        self.ranking
            .iter()
            .position(|&x| x == c)
            .expect("outcome out of range")
    }

    /// True when `a` is ranked above `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        for &c in &self.ranking {
            if c == a {
                return true;
            }
            if c == b {
                return false;
            }
        }
        false
    }

    pub fn reversed(&self) -> LinearOrder {
        let mut ranking = self.ranking.clone();
        ranking.reverse();
        LinearOrder { ranking }
    }

    /// `o ⊙ σ`: outcome `s1` beats `s2` in the result iff `σ⁻¹(s1)` beats
    /// `σ⁻¹(s2)` in `self`. Equivalently, position `k` of the result holds
    /// `σ(self.ranking[k])`.
    pub fn apply(&self, sigma: &Permutation) -> Result<LinearOrder> {
        if sigma.n() != self.n() {
            return Err(Error::invalid(format!(
                "permutation acts on {} outcomes but the order has {}",
                sigma.n(),
                self.n()
            )));
        }
        Ok(LinearOrder {
            ranking: self.ranking.iter().map(|&c| sigma.image(c)).collect(),
        })
    }

    /// The 2-element order on `{c, c2}` read off from `self`.
    pub fn restrict(&self, c: usize, c2: usize) -> Result<PartialOrder> {
        if c == c2 || c >= self.n() || c2 >= self.n() {
            return Err(Error::invalid(format!(
                "cannot restrict an order over {} outcomes to the pair {{{c}, {c2}}}",
                self.n()
            )));
        }
        let subset = if self.prefers(c, c2) {
            vec![c, c2]
        } else {
            vec![c2, c]
        };
        Ok(PartialOrder { subset, n: self.n() })
    }

    /// Number of pairs of `reference` that `self` orders the other way.
    pub fn inversions(&self, reference: &PartialOrder) -> Result<usize> {
        if let Some(&bad) = reference.subset.iter().find(|&&c| c >= self.n()) {
            return Err(Error::invalid(format!(
                "reference mentions outcome {bad} but the order has {} outcomes",
                self.n()
            )));
        }
        let pos = self.positions();
        let s = &reference.subset;
        let mut count = 0;
        for x in 0..s.len() {
            for y in x + 1..s.len() {
                if pos[s[y]] < pos[s[x]] {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// True when `self` agrees with `partial` on every pair of its subset.
    pub fn extends(&self, partial: &PartialOrder) -> bool {
        partial.n == self.n() && matches!(self.inversions(partial), Ok(0))
    }

    /// This order viewed as a partial order over all of its outcomes.
    pub fn as_partial(&self) -> PartialOrder {
        PartialOrder {
            subset: self.ranking.clone(),
            n: self.n(),
        }
    }

    /// Every linear order over `0..n` that extends `partial`, canonically ordered.
    pub fn extensions_of(partial: &PartialOrder) -> Vec<LinearOrder> {
        LinearOrder::all(partial.n)
            .into_iter()
            .filter(|o| o.extends(partial))
            .collect()
    }
}

impl fmt::Display for LinearOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ranking.iter().join(">"))
    }
}

fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    s.split('>')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad outcome `{t}` in order `{s}`")))
        })
        .collect()
}

impl FromStr for LinearOrder {
    type Err = Error;

    /// Parses `"2>0>1"`.
    fn from_str(s: &str) -> Result<Self> {
        LinearOrder::new(parse_index_list(s)?)
    }
}

/// A linear order over a subset `T` of `0..n`, best first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialOrder {
    subset: Vec<usize>,
    n: usize,
}

impl PartialOrder {
    pub fn new(subset: Vec<usize>, n: usize) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::invalid("a partial order needs at least one outcome"));
        }
        let mut seen = vec![false; n];
        for &c in &subset {
            if c >= n || seen[c] {
                return Err(Error::invalid(format!(
                    "{subset:?} is not a list of distinct outcomes below {n}"
                )));
            }
            seen[c] = true;
        }
        Ok(PartialOrder { subset, n })
    }

    pub fn pair(c: usize, c2: usize, n: usize) -> Result<Self> {
        PartialOrder::new(vec![c, c2], n)
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.subset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subset.is_empty()
    }

    pub fn reversed(&self) -> PartialOrder {
        let mut subset = self.subset.clone();
        subset.reverse();
        PartialOrder { subset, n: self.n }
    }

    /// `self ⊕ other` when `self` ends where `other` starts and the rest is disjoint.
    pub fn concat(&self, other: &PartialOrder) -> Option<PartialOrder> {
        if self.n != other.n || self.subset.last() != other.subset.first() {
            return None;
        }
        let mut subset = self.subset.clone();
        subset.extend_from_slice(&other.subset[1..]);
        PartialOrder::new(subset, self.n).ok()
    }

    /// Every partial order on `0..n` over subsets of at least `min_len` outcomes.
    pub fn all(n: usize, min_len: usize) -> Vec<PartialOrder> {
        let mut out = Vec::new();
        for k in min_len.max(1)..=n {
            for subset in (0..n).permutations(k) {
                out.push(PartialOrder { subset, n });
            }
        }
        out
    }
}

impl fmt::Display for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.subset.iter().join(">"))
    }
}

/// A permutation of `0..n` that moves only outcomes of its domain `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    mapping: Vec<usize>,
    domain: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            mapping: (0..n).collect(),
            domain: Vec::new(),
        }
    }

    /// Builds a permutation from its full image table; the domain is the set of moved points.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &x in &mapping {
            if x >= n || seen[x] {
                return Err(Error::invalid(format!("{mapping:?} is not a bijection")));
            }
            seen[x] = true;
        }
        let domain = (0..n).filter(|&x| mapping[x] != x).collect();
        Ok(Permutation { mapping, domain })
    }

    /// The permutation of `domain` sending `domain[j]` to `images[j]`, identity elsewhere.
    pub fn on_subset(n: usize, domain: &[usize], images: &[usize]) -> Result<Self> {
        if domain.len() != images.len() {
            return Err(Error::invalid("domain and images differ in length"));
        }
        let mut sorted_dom = domain.to_vec();
        sorted_dom.sort_unstable();
        let mut sorted_img = images.to_vec();
        sorted_img.sort_unstable();
        if sorted_dom != sorted_img || sorted_dom.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "{images:?} is not a rearrangement of the distinct outcomes {domain:?}"
            )));
        }
        if sorted_dom.last().is_some_and(|&m| m >= n) {
            return Err(Error::invalid(format!("domain {domain:?} exceeds 0..{n}")));
        }
        let mut mapping: Vec<usize> = (0..n).collect();
        for (&x, &y) in domain.iter().zip(images) {
            mapping[x] = y;
        }
        Ok(Permutation {
            mapping,
            domain: sorted_dom,
        })
    }

    /// `σ_(a,b)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::invalid("a transposition needs two distinct outcomes"));
        }
        Permutation::on_subset(n, &[a, b], &[b, a])
    }

    /// All `|T|!` permutations of `domain`, identity first.
    pub fn all_on(n: usize, domain: &[usize]) -> Vec<Permutation> {
        domain
            .iter()
            .copied()
            .permutations(domain.len())
            .map(|images| {
                let mut mapping: Vec<usize> = (0..n).collect();
                for (&x, &y) in domain.iter().zip(&images) {
                    mapping[x] = y;
                }
                let mut sorted = domain.to_vec();
                sorted.sort_unstable();
                Permutation {
                    mapping,
                    domain: sorted,
                }
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.mapping.len()
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn image(&self, x: usize) -> usize {
        self.mapping[x]
    }

    pub fn inverse(&self) -> Permutation {
        let mut mapping = vec![0; self.n()];
        for (x, &y) in self.mapping.iter().enumerate() {
            mapping[y] = x;
        }
        Permutation {
            mapping,
            domain: self.domain.clone(),
        }
    }
}

/// A bounded comparison between a sampled order and a candidate order.
pub fn kendall_score(o: &LinearOrder, other: &LinearOrder) -> Result<f64> {
    if o.n() != other.n() {
        return Err(Error::invalid(format!(
            "orders over {} and {} outcomes",
            o.n(),
            other.n()
        )));
    }
    let n = o.n();
    if n < 2 {
        return Err(Error::invalid("kendall score needs at least two outcomes"));
    }
    let inv = o.inversions(&other.as_partial())?;
    let pairs = n * (n - 1) / 2;
    Ok((pairs - inv) as f64 / pairs as f64)
}

/// 1 when the orders coincide, 0 otherwise.
pub fn exact_match_score(o: &LinearOrder, other: &LinearOrder) -> Result<f64> {
    if o.n() != other.n() {
        return Err(Error::invalid(format!(
            "orders over {} and {} outcomes",
            o.n(),
            other.n()
        )));
    }
    Ok(if o == other { 1.0 } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn lo(s: &str) -> LinearOrder {
        s.parse().unwrap()
    }

    /// Order built directly from the pairwise definition, for cross-checking `apply`.
    fn apply_by_pairs(o: &LinearOrder, sigma: &Permutation) -> LinearOrder {
        let n = o.n();
        let inv = sigma.inverse();
        let mut ranking: Vec<usize> = (0..n).collect();
        ranking.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if o.prefers(inv.image(a), inv.image(b)) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        LinearOrder::new(ranking).unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(lo("2>0>1").ranking(), &[2, 0, 1]);
        assert_eq!(lo("2>0>1").to_string(), "2>0>1");
        assert!("0>0>1".parse::<LinearOrder>().is_err());
        assert!("0>3>1".parse::<LinearOrder>().is_err());
        assert!("a>b".parse::<LinearOrder>().is_err());
    }

    #[test]
    fn apply_permutation_examples() {
        let id = Permutation::identity(3);
        assert_eq!(lo("0>1>2").apply(&id).unwrap(), lo("0>1>2"));

        let t02 = Permutation::transposition(3, 0, 2).unwrap();
        assert_eq!(lo("0>1>2").apply(&t02).unwrap(), lo("2>1>0"));
        assert_eq!(apply_by_pairs(&lo("0>1>2"), &t02), lo("2>1>0"));

        let cycle = Permutation::from_mapping(vec![1, 2, 0]).unwrap();
        assert_eq!(lo("1>0>2").apply(&cycle).unwrap(), lo("2>1>0"));
        assert_eq!(apply_by_pairs(&lo("1>0>2"), &cycle), lo("2>1>0"));
    }

    #[test]
    fn apply_rejects_size_mismatch() {
        let t = Permutation::transposition(4, 0, 1).unwrap();
        assert!(matches!(
            lo("0>1>2").apply(&t),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn restrict_examples() {
        let o = lo("2>0>1");
        assert_eq!(o.restrict(0, 1).unwrap().subset(), &[0, 1]);
        assert_eq!(o.restrict(2, 1).unwrap().subset(), &[2, 1]);
        assert_eq!(o.restrict(1, 2).unwrap().subset(), &[2, 1]);
        assert!(o.restrict(1, 1).is_err());
        assert!(o.restrict(0, 3).is_err());
    }

    #[test]
    fn inversions_examples() {
        let r = PartialOrder::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(lo("0>1>2").inversions(&r).unwrap(), 0);
        assert_eq!(lo("2>1>0").inversions(&r).unwrap(), 3);
        assert_eq!(lo("1>0>2").inversions(&r).unwrap(), 1);
        let wide = PartialOrder::new(vec![0, 3], 4).unwrap();
        assert!(lo("0>1>2").inversions(&wide).is_err());
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(kendall_score(&lo("0>1>2"), &lo("0>1>2")).unwrap(), 1.0);
        assert_eq!(kendall_score(&lo("0>1>2"), &lo("2>1>0")).unwrap(), 0.0);
        let v = kendall_score(&lo("0>1>2"), &lo("1>0>2")).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
        assert!(kendall_score(&lo("0>1"), &lo("0>1>2")).is_err());
    }

    #[test]
    fn exact_match_examples() {
        assert_eq!(exact_match_score(&lo("1>0>2"), &lo("1>0>2")).unwrap(), 1.0);
        assert_eq!(exact_match_score(&lo("1>0>2"), &lo("1>2>0")).unwrap(), 0.0);
        for a in LinearOrder::all(2) {
            for b in LinearOrder::all(2) {
                assert_eq!(
                    exact_match_score(&a, &b).unwrap(),
                    kendall_score(&a, &b).unwrap()
                );
            }
        }
    }

    #[test]
    fn extensions_count() {
        let p = PartialOrder::new(vec![2, 0], 4).unwrap();
        assert_eq!(LinearOrder::extensions_of(&p).len(), 12);
        assert_eq!(LinearOrder::all(4).len(), 24);
        assert!(LinearOrder::all(3).windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn concat_requires_shared_endpoint() {
        let a = PartialOrder::new(vec![0, 1], 4).unwrap();
        let b = PartialOrder::new(vec![1, 3, 2], 4).unwrap();
        assert_eq!(a.concat(&b).unwrap().subset(), &[0, 1, 3, 2]);
        assert!(b.concat(&a).is_none());
        let c = PartialOrder::new(vec![1, 0], 4).unwrap();
        assert!(a.concat(&c).is_none());
    }

    fn order_and_perm() -> impl Strategy<Value = (LinearOrder, Permutation)> {
        (1usize..=6).prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
                .prop_map(|(r, m)| {
                    (
                        LinearOrder::new(r).unwrap(),
                        Permutation::from_mapping(m).unwrap(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn apply_then_inverse_is_identity((o, sigma) in order_and_perm()) {
            let back = o.apply(&sigma).unwrap().apply(&sigma.inverse()).unwrap();
            prop_assert_eq!(back, o.clone());
            prop_assert_eq!(o.apply(&sigma).unwrap(), apply_by_pairs(&o, &sigma));
        }

        #[test]
        fn kendall_matches_inversions((o, sigma) in order_and_perm()) {
            let other = LinearOrder::identity(o.n()).apply(&sigma).unwrap();
            let n = o.n();
            if n >= 2 {
                let k = kendall_score(&o, &other).unwrap();
                let inv = o.inversions(&other.as_partial()).unwrap() as f64;
                let pairs = (n * (n - 1) / 2) as f64;
                prop_assert!((k - (1.0 - inv / pairs)).abs() < 1e-12);
                prop_assert!((k - kendall_score(&other, &o).unwrap()).abs() < 1e-12);
                prop_assert_eq!(kendall_score(&o, &o.reversed()).unwrap(), 0.0);
            }
        }

        #[test]
        fn transposition_reverses_restriction((o, _s) in order_and_perm(), a in 0usize..6, b in 0usize..6) {
            let n = o.n();
            let (a, b) = (a % n, b % n);
            if a != b {
                let t = Permutation::transposition(n, a, b).unwrap();
                let swapped = o.apply(&t).unwrap();
                prop_assert_eq!(
                    swapped.restrict(a, b).unwrap(),
                    o.restrict(a, b).unwrap().reversed()
                );
            }
        }

        #[test]
        fn restrict_stable_under_perms_fixing_pair((o, sigma) in order_and_perm(), a in 0usize..6, b in 0usize..6) {
            let n = o.n();
            let (a, b) = (a % n, b % n);
            if a != b {
                let rest: Vec<usize> = (0..n).filter(|&x| x != a && x != b).collect();
                let images: Vec<usize> = sigma
                    .inverse()
                    .mapping
                    .iter()
                    .copied()
                    .filter(|&x| x != a && x != b)
                    .collect();
                let fix = Permutation::on_subset(n, &rest, &images).unwrap();
                prop_assert_eq!(
                    o.apply(&fix).unwrap().restrict(a, b).unwrap(),
                    o.restrict(a, b).unwrap()
                );
            }
        }

        #[test]
        fn some_adjacent_transposition_removes_one_inversion((o, sigma) in order_and_perm()) {
            let reference = LinearOrder::identity(o.n()).apply(&sigma).unwrap().as_partial();
            let inv = o.inversions(&reference).unwrap();
            if inv > 0 {
                let s = reference.subset();
                let found = s.windows(2).any(|w| {
                    let t = Permutation::transposition(o.n(), w[0], w[1]).unwrap();
                    o.apply(&t).unwrap().inversions(&reference).unwrap() + 1 == inv
                });
                prop_assert!(found);
            }
        }
    }
}
