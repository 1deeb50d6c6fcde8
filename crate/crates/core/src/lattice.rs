//! Boolean lattice combinatorics.
//!
//! A configuration of `n` binary variables is stored as an integer whose
//! bit `j` holds the value of variable `j` (variables are 0-based here;
//! textual forms list `X_1 X_2 ... X_n` from left to right).

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{check_rank, Error, Result};

/// Largest rank accepted by the order operations.
pub const MAX_ORDER_RANK: usize = 20;
/// Largest rank for operations that enumerate the whole configuration space.
pub const MAX_ENUM_RANK: usize = 12;
/// Largest rank for explicit up-set enumeration (Dedekind growth).
pub const MAX_UPSET_RANK: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Config {
    n: u8,
    bits: u32,
}

impl Config {
    pub fn new(n: usize, bits: u32) -> Result<Self> {
        check_rank(n, MAX_ORDER_RANK, "configurations")?;
        if n < 32 && bits >> n != 0 {
            return Err(Error::InvalidConfiguration(format!(
                "bits {bits:#b} exceed rank {n}"
            )));
        }
        Ok(Config { n: n as u8, bits })
    }

    /// Builds a configuration from 0/1 values listed as `X_1, ..., X_n`.
    pub fn from_values(values: &[u8]) -> Result<Self> {
        let mut bits = 0u32;
        for (j, &v) in values.iter().enumerate() {
            match v {
                0 => {}
                1 => bits |= 1 << j,
                _ => {
                    return Err(Error::InvalidConfiguration(format!(
                        "value {v} at position {j}"
                    )))
                }
            }
        }
        Config::new(values.len(), bits)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    /// Value of variable `j` (0-based).
    pub fn get(&self, j: usize) -> bool {
        self.bits >> j & 1 == 1
    }

    pub fn rank(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn meet(&self, other: &Config) -> Config {
        Config { n: self.n, bits: self.bits & other.bits }
    }

    pub fn join(&self, other: &Config) -> Config {
        Config { n: self.n, bits: self.bits | other.bits }
    }
}

impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.n() {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Config({self})")
    }
}

impl std::str::FromStr for Config {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidConfiguration(format!(
                    "unexpected character `{other}` in `{s}`"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Config::from_values(&values)
    }
}

/// Renders configuration index `bits` of rank `n` as `X_1 ... X_n`.
pub fn config_string(n: usize, bits: usize) -> String {
    (0..n).map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Less,
    Greater,
    Equal,
    Incomparable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relation {
    pub order: Order,
    /// True iff the two configurations are comparable with rank difference one.
    pub cover: bool,
}

pub fn order_relation(x: &Config, y: &Config) -> Result<Relation> {
    if x.n != y.n {
        return Err(Error::RankMismatch(x.n(), y.n()));
    }
    let order = if x.bits == y.bits {
        Order::Equal
    } else if x.bits & y.bits == x.bits {
        Order::Less
    } else if x.bits & y.bits == y.bits {
        Order::Greater
    } else {
        Order::Incomparable
    };
    let cover = matches!(order, Order::Less | Order::Greater)
        && (x.bits ^ y.bits).count_ones() == 1;
    Ok(Relation { order, cover })
}

/// Arbitrary event on the configuration space of rank `n`, as a bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EventSet {
    n: usize,
    words: Vec<u64>,
}

impl EventSet {
    pub fn empty(n: usize) -> Result<Self> {
        check_rank(n, MAX_ORDER_RANK, "events")?;
        Ok(EventSet { n, words: vec![0; (1usize << n).div_ceil(64)] })
    }

    pub fn full(n: usize) -> Result<Self> {
        let mut e = EventSet::empty(n)?;
        for i in 0..1usize << n {
            e.insert(i);
        }
        Ok(e)
    }

    pub fn from_indices(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut e = EventSet::empty(n)?;
        for i in members {
            if i >= 1 << n {
                return Err(Error::InvalidConfiguration(format!(
                    "index {i} out of range for rank {n}"
                )));
            }
            e.insert(i);
        }
        Ok(e)
    }

    pub fn from_configs<'a>(n: usize, members: impl IntoIterator<Item = &'a Config>) -> Result<Self> {
        let mut e = EventSet::empty(n)?;
        for c in members {
            if c.n() != n {
                return Err(Error::RankMismatch(n, c.n()));
            }
            e.insert(c.index());
        }
        Ok(e)
    }

    /// The event `{x : predicate(x)}`.
    pub fn from_predicate(n: usize, mut predicate: impl FnMut(usize) -> bool) -> Result<Self> {
        let mut e = EventSet::empty(n)?;
        for i in 0..1usize << n {
            if predicate(i) {
                e.insert(i);
            }
        }
        Ok(e)
    }

    /// Builds an event from a mask over at most 64 configurations.
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_rank(n, MAX_UPSET_RANK, "mask events")?;
        let mut e = EventSet::empty(n)?;
        e.words[0] = mask & full_mask(n);
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Member configuration indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn configs(&self) -> impl Iterator<Item = Config> + '_ {
        let n = self.n as u8;
        self.indices().map(move |i| Config { n, bits: i as u32 })
    }

    pub fn intersection(&self, other: &EventSet) -> Result<EventSet> {
        self.same_rank(other)?;
        Ok(EventSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        })
    }

    pub fn union(&self, other: &EventSet) -> Result<EventSet> {
        self.same_rank(other)?;
        Ok(EventSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        })
    }

    pub fn complement(&self) -> EventSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if let Some(last) = words.last_mut() {
            if self.n < 6 {
                *last &= full_mask(self.n);
            }
        }
        EventSet { n: self.n, words }
    }

    pub fn is_subset(&self, other: &EventSet) -> bool {
        self.n == other.n && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// True iff the event is closed upward (checked over all cover pairs).
    pub fn is_upset(&self) -> bool {
        self.indices()
            .all(|i| (0..self.n).all(|j| i >> j & 1 == 1 || self.contains(i | 1 << j)))
    }

    /// Low word of the bitset, valid for `n <= 6`.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }

    fn same_rank(&self, other: &EventSet) -> Result<()> {
        if self.n != other.n {
            Err(Error::RankMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for EventSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.indices().map(|i| config_string(self.n, i)))
            .finish()
    }
}

/// An upwardly closed event.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UpSet(EventSet);

impl UpSet {
    /// Smallest up-set containing `generators`.
    pub fn closure(event: &EventSet) -> UpSet {
        let mut e = event.clone();
        for j in 0..e.n {
            let members: Vec<usize> = e.indices().collect();
            for i in members {
                e.insert(i | 1 << j);
            }
        }
        UpSet(e)
    }

    pub fn event(&self) -> &EventSet {
        &self.0
    }

    pub fn into_event(self) -> EventSet {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Minimal elements (the generating antichain), in increasing index order.
    pub fn minimal_elements(&self) -> Vec<usize> {
        self.0
            .indices()
            .filter(|&i| (0..self.0.n).all(|j| i >> j & 1 == 0 || !self.0.contains(i & !(1 << j))))
            .collect()
    }
}

impl TryFrom<EventSet> for UpSet {
    type Error = Error;

    fn try_from(e: EventSet) -> Result<Self> {
        if e.is_upset() {
            Ok(UpSet(e))
        } else {
            Err(Error::InvalidArgument("event is not upwardly closed".into()))
        }
    }
}

impl fmt::Debug for UpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UpSet{:?}", self.0)
    }
}

/// Mask with the low `2^n` bits set (`n <= 6`).
pub fn full_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

/// For `n <= 6`: mask of configurations in which variable `j` is 1.
pub fn variable_mask(n: usize, j: usize) -> u64 {
    let mut m = 0u64;
    for i in 0..1usize << n {
        if i >> j & 1 == 1 {
            m |= 1 << i;
        }
    }
    m
}

/// Up-closure of a configuration mask (`n <= 6`).
pub fn up_closure_mask(n: usize, mut mask: u64) -> u64 {
    for j in 0..n {
        let vj = variable_mask(n, j);
        mask |= (mask & !vj) << (1 << j);
    }
    mask
}

/// Minimal elements of an up-set mask (`n <= 6`).
pub fn minimal_mask(n: usize, mask: u64) -> u64 {
    let mut has_pred = 0u64;
    for j in 0..n {
        let vj = variable_mask(n, j);
        has_pred |= ((mask & !vj) << (1 << j)) & vj;
    }
    mask & !has_pred
}

/// Lexicographic order of two sets viewed as increasing index lists.
fn lex_cmp_sets(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let d = (a ^ b).trailing_zeros();
    let above = |m: u64| if d >= 63 { 0 } else { m >> (d + 1) };
    if a >> d & 1 == 1 {
        if above(b) != 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    } else if above(a) != 0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

fn generate_upset_masks(n: usize) -> Vec<u64> {
    // An up-set of B_n splits along the last variable into a pair
    // (lower half, upper half) of up-sets of B_{n-1} with lower ⊆ upper.
    let mut level: Vec<u64> = vec![0, 1];
    for k in 1..=n {
        let half = 1u32 << (k - 1);
        let mut next = Vec::new();
        for &lo in &level {
            for &hi in &level {
                if lo & !hi == 0 {
                    next.push(lo | hi << half);
                }
            }
        }
        level = next;
    }
    level.sort_unstable_by(|&a, &b| {
        a.count_ones()
            .cmp(&b.count_ones())
            .then_with(|| lex_cmp_sets(minimal_mask(n, a), minimal_mask(n, b)))
    });
    level
}

static UPSET_CACHE: [OnceLock<Vec<u64>>; 6] = [
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
    OnceLock::new(),
];

/// All up-sets of `B_n` as configuration masks, in canonical order
/// (member count, then lexicographic generating antichain).
///
/// Ranks up to 5 are cached; rank 6 (7,828,354 up-sets) is regenerated per call.
pub fn upset_masks(n: usize) -> Result<std::borrow::Cow<'static, [u64]>> {
    check_rank(n, MAX_UPSET_RANK, "up-set enumeration")?;
    if n < 6 {
        Ok(std::borrow::Cow::Borrowed(
            UPSET_CACHE[n].get_or_init(|| generate_upset_masks(n)).as_slice(),
        ))
    } else {
        Ok(std::borrow::Cow::Owned(generate_upset_masks(n)))
    }
}

/// Every upwardly closed subset of `B_n` exactly once, including the empty
/// and the full event.
pub fn enumerate_upsets(n: usize) -> Result<impl Iterator<Item = UpSet>> {
    let masks = upset_masks(n)?.into_owned();
    Ok(masks.into_iter().map(move |m| {
        UpSet(EventSet { n, words: vec![m] })
    }))
}

/// The disjoint-occurrence event `A □ B`.
///
/// `ω ∈ A □ B` iff some disjoint index sets `S, T` have every configuration
/// agreeing with `ω` on `S` inside `A`, and likewise `T` for `B`. Cylinder
/// containment is memoized over all partial assignments (3^n states), and
/// since witnesses are closed under enlargement it suffices to test `T = Sᶜ`.
pub fn box_product(a: &EventSet, b: &EventSet) -> Result<EventSet> {
    if a.n != b.n {
        return Err(Error::RankMismatch(a.n, b.n));
    }
    let n = a.n;
    check_rank(n, MAX_ENUM_RANK, "box product")?;
    let size = 1usize << n;
    let full = size - 1;
    let tern: Vec<usize> = (0..size)
        .map(|m| (0..n).filter(|&j| m >> j & 1 == 1).map(|j| 3usize.pow(j as u32)).sum())
        .collect();
    let in_a = cylinder_table(a);
    let in_b = cylinder_table(b);
    let mut out = EventSet::empty(n)?;
    for omega in 0..size {
        let found = subsets_by_size(n).any(|s| {
            let t = full & !s;
            in_a[tern[omega & s] + 2 * tern[t]] && in_b[tern[omega & t] + 2 * tern[s]]
        });
        if found {
            out.insert(omega);
        }
    }
    Ok(out)
}

/// `table[idx]` is true iff every completion of the partial assignment
/// encoded by `idx` lies in `event` (base-3 digits: 0, 1, or 2 = free).
fn cylinder_table(event: &EventSet) -> Vec<bool> {
    let n = event.n;
    let states = 3usize.pow(n as u32);
    let mut table = vec![false; states];
    for idx in 0..states {
        let mut rest = idx;
        let mut bits = 0usize;
        let mut free = None;
        for j in 0..n {
            match rest % 3 {
                1 => bits |= 1 << j,
                2 => {
                    free = Some(j);
                    break;
                }
                _ => {}
            }
            rest /= 3;
        }
        table[idx] = match free {
            None => event.contains(bits),
            Some(j) => {
                let p = 3usize.pow(j as u32);
                table[idx - 2 * p] && table[idx - p]
            }
        };
    }
    table
}

/// Subsets of `{0..n}` ordered by size, then by value.
fn subsets_by_size(n: usize) -> impl Iterator<Item = usize> {
    static ORDERS: OnceLock<Vec<Vec<usize>>> = OnceLock::new();
    let orders = ORDERS.get_or_init(|| {
        (0..=MAX_ENUM_RANK)
            .map(|k| {
                let mut v: Vec<usize> = (0..1usize << k).collect();
                v.sort_by_key(|s| (s.count_ones(), *s));
                v
            })
            .collect()
    });
    orders[n].iter().copied()
}

/// Configuration indices of the sub-lattice spanned by `vars`, i.e. every
/// subset of the variable mask, in increasing order.
pub fn submasks(mask: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(0usize);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
        Some(cur)
    })
}

/// Scatters the low bits of `compact` onto the positions listed in `vars`.
pub fn scatter(compact: usize, vars: &[usize]) -> usize {
    vars.iter()
        .enumerate()
        .filter(|(k, _)| compact >> k & 1 == 1)
        .fold(0, |acc, (_, &v)| acc | 1 << v)
}

/// Gathers the bits of `full` at positions `vars` into a compact index.
pub fn gather(full: usize, vars: &[usize]) -> usize {
    vars.iter()
        .enumerate()
        .filter(|(_, &v)| full >> v & 1 == 1)
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_upset_count(n: usize) -> usize {
        let size = 1usize << n;
        (0u64..1 << size)
            .filter(|&m| {
                let e = EventSet::from_indices(n, (0..size).filter(|&i| m >> i & 1 == 1)).unwrap();
                e.is_upset()
            })
            .count()
    }

    #[test]
    fn upset_counts_match_brute_force_filter() {
        for n in 0..=4 {
            assert_eq!(upset_masks(n).unwrap().len(), brute_upset_count(n), "n={n}");
        }
        assert_eq!(upset_masks(1).unwrap().len(), 3);
        assert_eq!(upset_masks(2).unwrap().len(), 6);
        assert_eq!(upset_masks(0).unwrap().len(), 2);
        assert_eq!(upset_masks(5).unwrap().len(), 7581);
    }

    #[test]
    fn upset_enumeration_rejects_rank_seven() {
        assert!(matches!(upset_masks(7), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn enumerated_upsets_are_closed_distinct_and_ordered() {
        let ups: Vec<UpSet> = enumerate_upsets(3).unwrap().collect();
        assert_eq!(ups.len(), 20);
        assert!(ups.iter().all(|u| u.event().is_upset()));
        let masks: std::collections::HashSet<u64> = ups.iter().map(|u| u.event().mask()).collect();
        assert_eq!(masks.len(), 20);
        assert!(ups.first().unwrap().is_empty());
        assert_eq!(ups.last().unwrap().len(), 8);
        assert!(ups.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn order_relation_examples() {
        let c = |s: &str| s.parse::<Config>().unwrap();
        let r = order_relation(&c("010"), &c("011")).unwrap();
        assert_eq!(r, Relation { order: Order::Less, cover: true });
        let r = order_relation(&c("010"), &c("001")).unwrap();
        assert_eq!(r.order, Order::Incomparable);
        assert!(!r.cover);
        let r = order_relation(&c("001"), &c("111")).unwrap();
        assert_eq!(r, Relation { order: Order::Less, cover: false });
        assert!(order_relation(&c("01"), &c("011")).is_err());
    }

    #[test]
    fn config_text_lists_first_variable_first() {
        let c: Config = "100".parse().unwrap();
        assert!(c.get(0));
        assert_eq!(c.index(), 1);
        assert_eq!(c.to_string(), "100");
        assert_eq!(c.rank(), 1);
    }

    fn brute_box(a: &EventSet, b: &EventSet) -> EventSet {
        let n = a.n();
        let size = 1usize << n;
        let cyl_in = |e: &EventSet, omega: usize, s: usize| {
            (0..size).filter(|&x| (x ^ omega) & s == 0).all(|x| e.contains(x))
        };
        EventSet::from_predicate(n, |omega| {
            (0..size).any(|s| {
                (0..size).any(|t| s & t == 0 && cyl_in(a, omega, s) && cyl_in(b, omega, t))
            })
        })
        .unwrap()
    }

    #[test]
    fn box_product_examples() {
        let x1 = EventSet::from_predicate(2, |i| i & 1 == 1).unwrap();
        let x2 = EventSet::from_predicate(2, |i| i & 2 == 2).unwrap();
        let b = box_product(&x1, &x2).unwrap();
        assert_eq!(b.indices().collect::<Vec<_>>(), vec![3]);

        let full = EventSet::full(3).unwrap();
        assert_eq!(box_product(&full, &full).unwrap(), full);

        let one = EventSet::from_predicate(1, |i| i == 1).unwrap();
        assert!(box_product(&one, &one).unwrap().is_empty());
    }

    #[test]
    fn box_product_matches_brute_force_on_all_small_events() {
        for a_mask in 0u64..16 {
            for b_mask in 0u64..16 {
                let a = EventSet::from_mask(2, a_mask).unwrap();
                let b = EventSet::from_mask(2, b_mask).unwrap();
                assert_eq!(box_product(&a, &b).unwrap(), brute_box(&a, &b));
            }
        }
    }

    #[test]
    fn submask_and_scatter_helpers() {
        assert_eq!(submasks(0b101).collect::<Vec<_>>(), vec![0, 1, 4, 5]);
        assert_eq!(scatter(0b11, &[0, 2]), 0b101);
        assert_eq!(gather(0b101, &[0, 2]), 0b11);
        assert_eq!(up_closure_mask(2, 0b0010), 0b1010);
        assert_eq!(minimal_mask(2, 0b1110), 0b0110);
    }

    proptest::proptest! {
        #[test]
        fn box_product_is_symmetric_and_inside_intersection(a in 0u64..256, b in 0u64..256) {
            let a = EventSet::from_mask(3, a).unwrap();
            let b = EventSet::from_mask(3, b).unwrap();
            let ab = box_product(&a, &b).unwrap();
            proptest::prop_assert_eq!(&ab, &box_product(&b, &a).unwrap());
            proptest::prop_assert!(ab.is_subset(&a.intersection(&b).unwrap()));
            proptest::prop_assert_eq!(ab, brute_box(&a, &b));
        }

        #[test]
        fn disjoint_coordinate_upsets_box_to_intersection(f in 0usize..6, g in 0usize..6) {
            // up-sets of B_2 on variables {0,1}, and on {2,3}
            let ups = upset_masks(2).unwrap();
            let lift = |m: u64, vars: [usize; 2]| EventSet::from_predicate(4, |i| {
                m >> gather(i, &vars) & 1 == 1
            }).unwrap();
            let a = lift(ups[f], [0, 1]);
            let b = lift(ups[g], [2, 3]);
            proptest::prop_assert_eq!(box_product(&a, &b).unwrap(), a.intersection(&b).unwrap());
        }
    }
}
