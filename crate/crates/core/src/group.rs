//! Finite groups stored as multiplication tables.
//!
//! Element `0` is always the identity. Tables are validated on construction
//! and all derived data (inverses, conjugacy classes) is computed eagerly, so
//! a [`GroupTable`] is immutable and cheap to share behind an `Arc`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random;

/// Largest group order accepted (|S₆| = 720).
pub const MAX_ORDER: usize = 720;

/// Exhaustive associativity checks up to this order, sampled above.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;

#[derive(Debug, Clone)]
pub struct GroupTable {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for GroupTable {}

impl GroupTable {
    /// Build a group from a full multiplication table, validating every
    /// group axiom. `labels`, if given, must have one entry per element.
    pub fn from_table(mul: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = mul.len();
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::SizeLimit(format!(
                "group order {order} exceeds desk-scale cap |G| <= {MAX_ORDER}"
            )));
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "labels has {} entries for order {order}",
                    l.len()
                )));
            }
        }
        let mut flat = Vec::with_capacity(order * order);
        for (a, row) in mul.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "mul is not |G|x|G|: row {a} has {} entries",
                    row.len()
                )));
            }
            for &x in row {
                if x >= order {
                    return Err(Error::InvalidGroup(format!(
                        "mul entry {x} in row {a} is not an element index"
                    )));
                }
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat, labels)
    }

    fn from_flat(order: usize, mul: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * order + b];

        for g in 0..order {
            if at(0, g) != g || at(g, 0) != g {
                return Err(Error::InvalidGroup(format!(
                    "mul[0][g] = mul[g][0] = g (index 0 is identity) violated at g={g}"
                )));
            }
        }
        // Latin square: every row and column is a permutation.
        for a in 0..order {
            let mut row_seen = vec![false; order];
            let mut col_seen = vec![false; order];
            for b in 0..order {
                let r = at(a, b);
                let c = at(b, a);
                if row_seen[r] {
                    return Err(Error::InvalidGroup(format!(
                        "every row and column of mul is a permutation of 0..|G|-1 violated in row {a}"
                    )));
                }
                if col_seen[c] {
                    return Err(Error::InvalidGroup(format!(
                        "every row and column of mul is a permutation of 0..|G|-1 violated in column {a}"
                    )));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        let mut inv = vec![0; order];
        for g in 0..order {
            let h = (0..order).find(|&h| at(g, h) == 0).expect("latin row contains 0");
            if at(h, g) != 0 {
                return Err(Error::InvalidGroup(format!(
                    "mul[g][inv[g]] = 0 violated: right inverse of {g} is not a left inverse"
                )));
            }
            inv[g] = h;
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if at(at(a, b), c) != at(a, at(b, c)) {
                return Err(Error::InvalidGroup(format!(
                    "mul[mul[a][b]][c] = mul[a][mul[b][c]] (associativity) violated at ({a},{b},{c})"
                )));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = random::rng(0x5eed_a550c);
            for _ in 0..10 * order * order {
                let a = random::uniform_index(order, &mut rng);
                let b = random::uniform_index(order, &mut rng);
                let c = random::uniform_index(order, &mut rng);
                check(a, b, c)?;
            }
        }

        let (classes, class_of) = compute_classes(order, &mul, &inv);
        Ok(GroupTable { order, mul, inv, labels, classes, class_of })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// `g h g⁻¹`.
    #[inline]
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv[g])
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of element `g`, falling back to its index.
    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member; the class
    /// of the identity is `{0}` and comes first.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) of the class
    /// containing `g`.
    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    /// Whether `k` is normal: `g k g⁻¹ ∈ K` for all `g ∈ G`, `k ∈ K`.
    pub fn is_normal(&self, k: &SubgroupRef) -> Result<bool> {
        if k.elements.iter().any(|&x| x >= self.order) {
            return Err(Error::InvalidSubgroup("element index out of range".into()));
        }
        SubgroupRef::check_closed(self, &k.elements)?;
        let members: BTreeSet<usize> = k.elements.iter().copied().collect();
        Ok(self
            .elements()
            .all(|g| k.elements.iter().all(|&h| members.contains(&self.conjugate(g, h)))))
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> SubgroupRef {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier: Vec<usize> = vec![0];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        SubgroupRef { elements: set.into_iter().collect() }
    }

    pub fn trivial_subgroup(&self) -> SubgroupRef {
        SubgroupRef { elements: vec![0] }
    }

    pub fn whole(&self) -> SubgroupRef {
        SubgroupRef { elements: self.elements().collect() }
    }

    /// Plain JSON form (`order`, `mul`, `labels`).
    pub fn to_json(&self) -> GroupJson {
        GroupJson { order: self.order, mul: self.table(), labels: self.labels.clone() }
    }

    pub fn from_json(j: GroupJson) -> Result<Self> {
        if j.order != j.mul.len() {
            return Err(Error::InvalidGroup(format!(
                "order {} does not match mul with {} rows",
                j.order,
                j.mul.len()
            )));
        }
        Self::from_table(j.mul, j.labels)
    }
}

fn compute_classes(order: usize, mul: &[usize], inv: &[usize]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let at = |a: usize, b: usize| mul[a * order + b];
    let mut class_of = vec![usize::MAX; order];
    let mut classes = Vec::new();
    for h in 0..order {
        if class_of[h] != usize::MAX {
            continue;
        }
        let idx = classes.len();
        let mut orbit: BTreeSet<usize> = BTreeSet::new();
        for g in 0..order {
            orbit.insert(at(at(g, h), inv[g]));
        }
        for &x in &orbit {
            class_of[x] = idx;
        }
        classes.push(orbit.into_iter().collect());
    }
    (classes, class_of)
}

/// Serialized group: `{ "order": n, "mul": [[...]], "labels": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// A subgroup given by its sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupRef {
    elements: Vec<usize>,
}

impl SubgroupRef {
    /// Validate that `elements` contains the identity and is closed under
    /// multiplication and inversion in `group`.
    pub fn new(group: &GroupTable, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.iter().any(|&x| x >= group.order()) {
            return Err(Error::InvalidSubgroup("element index out of range".into()));
        }
        let elements: Vec<usize> = set.into_iter().collect();
        Self::check_closed(group, &elements)?;
        Ok(SubgroupRef { elements })
    }

    fn check_closed(group: &GroupTable, elements: &[usize]) -> Result<()> {
        let members: BTreeSet<usize> = elements.iter().copied().collect();
        if !members.contains(&0) {
            return Err(Error::InvalidSubgroup("contains 0 violated".into()));
        }
        for &a in elements {
            if !members.contains(&group.inv(a)) {
                return Err(Error::InvalidSubgroup(format!("closed under inv violated at {a}")));
            }
            for &b in elements {
                if !members.contains(&group.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!(
                        "closed under mul violated at ({a},{b})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_subset_of(&self, other: &SubgroupRef) -> bool {
        self.elements.iter().all(|&g| other.contains(g))
    }
}

/// Cyclic group `Z_n` with `mul[a][b] = (a + b) mod n`.
pub fn make_cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::SizeLimit(format!("Z_{n} exceeds |G| <= {MAX_ORDER}")));
    }
    let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
    let labels = (0..n).map(|k| k.to_string()).collect();
    GroupTable::from_flat(n, mul, Some(labels))
}

/// Dihedral group `D_n` of order `2n`, realized as the maps
/// `i ↦ ±i + k` on `Z_n`. Element `f·n + k` is `i ↦ (−1)^f i + k`, so
/// indices `0..n` are rotations and `n..2n` reflections.
pub fn make_dihedral(n: usize) -> Result<GroupTable> {
    if n < 2 {
        return Err(Error::InvalidParameter("dihedral group needs n >= 2".into()));
    }
    if 2 * n > MAX_ORDER {
        return Err(Error::SizeLimit(format!("D_{n} exceeds |G| <= {MAX_ORDER}")));
    }
    let order = 2 * n;
    let mut mul = vec![0; order * order];
    for a in 0..order {
        let (f1, k1) = (a / n, a % n);
        for b in 0..order {
            let (f2, k2) = (b / n, b % n);
            let k = if f1 == 0 { (k1 + k2) % n } else { (k1 + n - k2) % n };
            mul[a * order + b] = (f1 ^ f2) * n + k;
        }
    }
    let labels = (0..order)
        .map(|g| if g < n { format!("r{}", g) } else { format!("s{}", g - n) })
        .collect();
    GroupTable::from_flat(order, mul, Some(labels))
}

/// Symmetric group `S_n` (`n <= 6`) with permutations in lexicographic order
/// (identity first) and `mul[a][b] = a ∘ b`.
pub fn make_symmetric(n: usize) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("symmetric group needs n >= 1".into()));
    }
    if n > 6 {
        return Err(Error::SizeLimit(format!("S_{n} exceeds the n <= 6 cap")));
    }
    let perms = permutations(n);
    let index: HashMap<&[u8], usize> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let order = perms.len();
    let mut mul = vec![0; order * order];
    let mut buf = vec![0u8; n];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            for i in 0..n {
                buf[i] = pa[pb[i] as usize];
            }
            mul[a * order + b] = index[buf.as_slice()];
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    GroupTable::from_flat(order, mul, Some(labels))
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Direct product `a × b`; element `(i_a, i_b)` has index `i_a·|b| + i_b`.
pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Result<GroupTable> {
    let (na, nb) = (a.order(), b.order());
    let order = na * nb;
    if order > MAX_ORDER {
        return Err(Error::SizeLimit(format!("product order {order} exceeds |G| <= {MAX_ORDER}")));
    }
    let mut mul = vec![0; order * order];
    for x in 0..order {
        for y in 0..order {
            let ia = a.mul(x / nb, y / nb);
            let ib = b.mul(x % nb, y % nb);
            mul[x * order + y] = ia * nb + ib;
        }
    }
    let labels = (0..order)
        .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
        .collect();
    GroupTable::from_flat(order, mul, Some(labels))
}

/// Build a group from a short name: `cyclic:N`, `dihedral:N`, `symmetric:N`,
/// `klein`, or `A*B` for a direct product of two names.
pub fn from_name(name: &str) -> Result<GroupTable> {
    let name = name.trim();
    if let Some((l, r)) = name.split_once('*') {
        return direct_product(&from_name(l)?, &from_name(r)?);
    }
    if name.eq_ignore_ascii_case("klein") {
        let z2 = make_cyclic(2)?;
        return direct_product(&z2, &z2);
    }
    let (kind, n) = name
        .split_once(':')
        .ok_or_else(|| Error::InvalidParameter(format!("unrecognized group name '{name}'")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("bad group size in '{name}'")))?;
    match kind.trim() {
        "cyclic" | "Z" => make_cyclic(n),
        "dihedral" | "D" => make_dihedral(n),
        "symmetric" | "S" => make_symmetric(n),
        other => Err(Error::InvalidParameter(format!("unknown group family '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force isomorphism search over all bijections fixing the identity.
    fn isomorphic(a: &GroupTable, b: &GroupTable) -> bool {
        if a.order() != b.order() {
            return false;
        }
        let n = a.order();
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[0] = 0;
        used[0] = true;
        fn rec(
            i: usize,
            a: &GroupTable,
            b: &GroupTable,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            let n = a.order();
            if i == n {
                return (0..n).all(|x| (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y])));
            }
            for j in 1..n {
                if !used[j] {
                    used[j] = true;
                    map[i] = j;
                    if rec(i + 1, a, b, map, used) {
                        return true;
                    }
                    used[j] = false;
                }
            }
            false
        }
        if n == 1 {
            return true;
        }
        rec(1, a, b, &mut map, &mut used)
    }

    #[test]
    fn cyclic_examples() {
        let z1 = make_cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        let z3 = make_cyclic(3).unwrap();
        assert_eq!(z3.inv(1), 2);
        let z8 = make_cyclic(8).unwrap();
        assert_eq!(z8.mul(5, 6), 3);
        assert!(matches!(make_cyclic(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn dihedral_examples() {
        let d3 = make_dihedral(3).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(isomorphic(&d3, &make_symmetric(3).unwrap()));
        let d2 = make_dihedral(2).unwrap();
        assert_eq!(d2.order(), 4);
        assert!(d2.is_abelian());
        assert!(d2.elements().all(|g| d2.inv(g) == g));
        let d4 = make_dihedral(4).unwrap();
        assert_eq!(d4.order(), 8);
        assert!((0..8).any(|a| (0..8).any(|b| d4.mul(a, b) != d4.mul(b, a))));
        assert!(matches!(make_dihedral(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn symmetric_examples() {
        assert_eq!(make_symmetric(3).unwrap().order(), 6);
        let s2 = make_symmetric(2).unwrap();
        assert!(isomorphic(&s2, &make_cyclic(2).unwrap()));
        let s4 = make_symmetric(4).unwrap();
        assert_eq!(s4.order(), 24);
        assert_eq!(s4.conjugacy_classes().len(), 5);
        assert!(matches!(make_symmetric(7), Err(Error::SizeLimit(_))));
    }

    #[test]
    fn direct_product_examples() {
        let z2 = make_cyclic(2).unwrap();
        let z3 = make_cyclic(3).unwrap();
        let v4 = direct_product(&z2, &z2).unwrap();
        assert_eq!(v4.order(), 4);
        assert!(v4.elements().all(|g| v4.inv(g) == g));
        let z2z3 = direct_product(&z2, &z3).unwrap();
        assert!(z2z3.is_abelian());
        assert!(isomorphic(&z2z3, &make_cyclic(6).unwrap()));
        let s3 = make_symmetric(3).unwrap();
        let t = direct_product(&make_cyclic(1).unwrap(), &s3).unwrap();
        assert_eq!(t, s3);
    }

    #[test]
    fn class_counts() {
        let z5 = make_cyclic(5).unwrap();
        assert_eq!(z5.conjugacy_classes().len(), 5);
        assert!(z5.conjugacy_classes().iter().all(|c| c.len() == 1));
        let s3 = make_symmetric(3).unwrap();
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(s3.conjugacy_classes()[0], vec![0]);
        assert_eq!(make_dihedral(4).unwrap().conjugacy_classes().len(), 5);
    }

    #[test]
    fn normality() {
        let z6 = make_cyclic(6).unwrap();
        let k = z6.generated_subgroup(&[2]);
        assert!(z6.is_normal(&k).unwrap());
        let d4 = make_dihedral(4).unwrap();
        let rot = SubgroupRef::new(&d4, 0..4).unwrap();
        assert!(d4.is_normal(&rot).unwrap());
        let d3 = make_dihedral(3).unwrap();
        let refl = SubgroupRef::new(&d3, [0, 3]).unwrap();
        assert!(!d3.is_normal(&refl).unwrap());
    }

    #[test]
    fn rejects_non_closed_subgroup() {
        let d3 = make_dihedral(3).unwrap();
        assert!(matches!(SubgroupRef::new(&d3, [0, 1]), Err(Error::InvalidSubgroup(_))));
        assert!(matches!(SubgroupRef::new(&d3, [1]), Err(Error::InvalidSubgroup(_))));
    }

    #[test]
    fn rejects_broken_tables() {
        // identity not at 0
        let bad = vec![vec![1, 0], vec![0, 1]];
        let err = GroupTable::from_table(bad, None).unwrap_err();
        assert!(err.to_string().contains("index 0 is identity"));
        // latin square violated
        let bad = vec![vec![0, 1, 2], vec![1, 1, 0], vec![2, 0, 1]];
        assert!(GroupTable::from_table(bad, None).is_err());
        // latin but not associative: a loop of order 5
        let lp = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = GroupTable::from_table(lp, None).unwrap_err();
        assert!(err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn json_round_trip() {
        let d4 = make_dihedral(4).unwrap();
        let j = serde_json::to_string(&d4.to_json()).unwrap();
        let back = GroupTable::from_json(serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, d4);
        assert_eq!(back.label(5), "s1");
    }

    #[test]
    fn names() {
        assert_eq!(from_name("klein").unwrap().order(), 4);
        assert_eq!(from_name("cyclic:2*symmetric:3").unwrap().order(), 12);
        assert!(from_name("nope:3").is_err());
    }
}
