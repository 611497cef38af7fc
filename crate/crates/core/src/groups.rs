//! Finite groups as explicit multiplication tables.
//!
//! Element `0` is always the identity. Every algorithm downstream is
//! enumeration based, so tables are kept small (order at most 16 for
//! subgroup enumeration).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{input, Error, Result};

pub type Group = Arc<GroupTable>;

pub const MAX_ENUMERATION_ORDER: usize = 16;

pub const NAMED_GROUPS: &[&str] =
    &["C2", "C3", "C4", "C5", "C6", "C7", "C8", "C2xC2", "C2xC2xC2", "S3", "D4", "Q8", "C4xC2"];

#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    name: String,
    order: usize,
    product: Vec<usize>,
    inverse: Vec<usize>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable({}, order {})", self.name, self.order)
    }
}

impl GroupTable {
    /// Validates the group axioms and derives inverses.
    pub fn from_rows(name: impl Into<String>, rows: Vec<Vec<usize>>) -> Result<GroupTable> {
        let name = name.into();
        let n = rows.len();
        if n == 0 {
            return input(format!("group {name}: empty table"));
        }
        let mut product = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return input(format!("group {name}: row {i} has length {}, expected {n}", row.len()));
            }
            for &x in row {
                if x >= n {
                    return input(format!("group {name}: entry {x} out of range in row {i}"));
                }
                product.push(x);
            }
        }
        Self::from_flat(name, n, product)
    }

    fn from_flat(name: String, n: usize, product: Vec<usize>) -> Result<GroupTable> {
        for g in 0..n {
            if product[g] != g || product[g * n] != g {
                return input(format!("group {name}: element 0 is not a two-sided identity at {g}"));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                if product[g * n + h] == 0 {
                    if product[h * n + g] != 0 {
                        return input(format!("group {name}: {h} is a one-sided inverse of {g}"));
                    }
                    inverse[g] = h;
                    break;
                }
            }
            if inverse[g] == usize::MAX {
                return input(format!("group {name}: element {g} has no inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = product[a * n + b];
                for c in 0..n {
                    if product[ab * n + c] != product[a * n + product[b * n + c]] {
                        return input(format!("group {name}: associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(GroupTable { name, order: n, product, inverse })
    }

    pub fn cyclic(n: usize) -> GroupTable {
        assert!(n >= 1);
        let product = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let inverse = (0..n).map(|g| (n - g) % n).collect();
        GroupTable { name: format!("C{n}"), order: n, product, inverse }
    }

    /// Direct product with index `a + |A|·b` for the pair `(a, b)`.
    pub fn direct_product(a: &GroupTable, b: &GroupTable, name: impl Into<String>) -> GroupTable {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut product = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x % na, x / na);
                let (ya, yb) = (y % na, y / na);
                product[x * n + y] = a.mul(xa, ya) + na * b.mul(xb, yb);
            }
        }
        let inverse = (0..n).map(|x| a.inv(x % na) + na * b.inv(x / na)).collect();
        GroupTable { name: name.into(), order: n, product, inverse }
    }

    /// Symmetric group on three letters, permutations listed lexicographically.
    fn symmetric3() -> GroupTable {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let rows = perms.iter().map(|s| perms.iter().map(|t| idx([s[t[0]], s[t[1]], s[t[2]]])).collect()).collect();
        GroupTable::from_rows("S3", rows).expect("S3 table")
    }

    /// Dihedral group of order 8; `r^a s^b` has index `a + 4b`.
    fn dihedral4() -> GroupTable {
        let rows = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (a, b) = (x % 4, x / 4);
                        let (c, d) = (y % 4, y / 4);
                        let rot = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
                        rot + 4 * ((b + d) % 2)
                    })
                    .collect()
            })
            .collect();
        GroupTable::from_rows("D4", rows).expect("D4 table")
    }

    /// Quaternion group; index `2u + s` encodes `±` (s) times unit `u ∈ {1, i, j, k}`.
    fn quaternion() -> GroupTable {
        // unit products: (sign, unit)
        let unit = |u: usize, v: usize| -> (usize, usize) {
            match (u, v) {
                (0, v) => (0, v),
                (u, 0) => (0, u),
                (u, v) if u == v => (1, 0),
                (1, 2) => (0, 3),
                (2, 3) => (0, 1),
                (3, 1) => (0, 2),
                (2, 1) => (1, 3),
                (3, 2) => (1, 1),
                (1, 3) => (1, 2),
                _ => unreachable!(),
            }
        };
        let rows = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (s, w) = unit(x / 2, y / 2);
                        2 * w + ((x % 2 + y % 2 + s) % 2)
                    })
                    .collect()
            })
            .collect();
        GroupTable::from_rows("Q8", rows).expect("Q8 table")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.product.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn product_table(&self) -> &[usize] {
        &self.product
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Vec<usize> {
        self.elements().filter(|&a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn is_subgroup(&self, set: &[usize]) -> bool {
        if set.is_empty() || !set.contains(&0) || set.iter().any(|&x| x >= self.order) {
            return false;
        }
        let members: BTreeSet<usize> = set.iter().copied().collect();
        set.iter().all(|&a| members.contains(&self.inv(a)) && set.iter().all(|&b| members.contains(&self.mul(a, b))))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.order];
        members[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members[y] {
                    members[y] = true;
                    frontier.push(y);
                }
            }
        }
        (0..self.order).filter(|&i| members[i]).collect()
    }

    /// The subgroup `h` as a group in its own right, elements renumbered in
    /// increasing order of their index in `self`.
    pub fn subgroup_table(&self, h: &[usize]) -> Result<GroupTable> {
        let mut sorted = h.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if !self.is_subgroup(&sorted) {
            return input(format!("{:?} is not a subgroup of {}", h, self.name));
        }
        let pos = |x: usize| sorted.binary_search(&x).unwrap();
        let rows = sorted.iter().map(|&a| sorted.iter().map(|&b| pos(self.mul(a, b))).collect()).collect();
        let name = format!("{}{:?}", self.name, sorted);
        GroupTable::from_rows(name, rows)
    }

    /// Rebuilds the table with elements renumbered: new index `i` is old element `order[i]`.
    pub fn relabeled(&self, order: &[usize], name: impl Into<String>) -> Result<GroupTable> {
        let n = self.order;
        if order.len() != n || order[0] != 0 {
            return input("relabeling must be a permutation fixing the identity");
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &x) in order.iter().enumerate() {
            if x >= n || pos[x] != usize::MAX {
                return input("relabeling must be a permutation");
            }
            pos[x] = i;
        }
        let rows = order.iter().map(|&a| order.iter().map(|&b| pos[self.mul(a, b)]).collect()).collect();
        GroupTable::from_rows(name, rows)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson { name: self.name.clone(), order: self.order, product: self.rows() }
    }
}

pub fn make_named_group(name: &str) -> Result<Group> {
    let g = match name {
        "C2" | "C3" | "C4" | "C5" | "C6" | "C7" | "C8" => GroupTable::cyclic(name[1..].parse().expect("digit")),
        "C2xC2" => GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2), name),
        "C2xC2xC2" => {
            let v = GroupTable::direct_product(&GroupTable::cyclic(2), &GroupTable::cyclic(2), "C2xC2");
            GroupTable::direct_product(&v, &GroupTable::cyclic(2), name)
        }
        "C4xC2" => GroupTable::direct_product(&GroupTable::cyclic(4), &GroupTable::cyclic(2), name),
        "S3" => GroupTable::symmetric3(),
        "D4" => GroupTable::dihedral4(),
        "Q8" => GroupTable::quaternion(),
        other => return input(format!("unknown group {other:?}; known: {}", NAMED_GROUPS.join(", "))),
    };
    Ok(Arc::new(g))
}

/// All subgroups, each listed once as a sorted element list, ordered by size
/// then lexicographically.
pub fn enumerate_subgroups(g: &GroupTable) -> Result<Vec<Vec<usize>>> {
    let n = g.order();
    if n > MAX_ENUMERATION_ORDER {
        return input(format!("subgroup enumeration limited to order {MAX_ENUMERATION_ORDER}, got {n}"));
    }
    // Groups of order <= 16 are generated by three elements.
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut record = |h: Vec<usize>| {
        let mask = h.iter().fold(0u32, |m, &x| m | (1 << x));
        if seen.insert(mask) {
            found.push(h);
        }
    };
    record(vec![0]);
    for a in 1..n {
        record(g.closure(&[a]));
        for b in a + 1..n {
            record(g.closure(&[a, b]));
            for c in b + 1..n {
                record(g.closure(&[a, b, c]));
            }
        }
    }
    found.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    Ok(found)
}

pub fn check_homomorphism(f: &[usize], a: &GroupTable, b: &GroupTable) -> bool {
    if f.len() != a.order() || f.iter().any(|&x| x >= b.order()) || f[0] != 0 {
        return false;
    }
    a.elements().all(|x| a.elements().all(|y| f[a.mul(x, y)] == b.mul(f[x], f[y])))
}

/// A surjective homomorphism `Γ → G` with its kernel and a normalized section.
#[derive(Clone, Debug)]
pub struct Surjection {
    pub source: Group,
    pub target: Group,
    pub map: Vec<usize>,
    pub kernel: Vec<usize>,
    pub section: Vec<usize>,
}

pub fn make_surjection(source: Group, target: Group, map: Vec<usize>) -> Result<Surjection> {
    if map.len() != source.order() {
        return input(format!("map has {} entries, source has order {}", map.len(), source.order()));
    }
    if let Some(&bad) = map.iter().find(|&&x| x >= target.order()) {
        return input(format!("map value {bad} outside target of order {}", target.order()));
    }
    if map[0] != 0 {
        return input("map does not send identity to identity");
    }
    for x in source.elements() {
        for y in source.elements() {
            if map[source.mul(x, y)] != target.mul(map[x], map[y]) {
                return input(format!("not a homomorphism at pair ({x},{y})"));
            }
        }
    }
    let mut section = vec![usize::MAX; target.order()];
    for x in source.elements() {
        if section[map[x]] == usize::MAX {
            section[map[x]] = x;
        }
    }
    if let Some(g) = section.iter().position(|&s| s == usize::MAX) {
        return input(format!("map is not onto: {g} has no preimage"));
    }
    let kernel = source.elements().filter(|&x| map[x] == 0).collect();
    Ok(Surjection { source, target, map, kernel, section })
}

impl Surjection {
    pub fn identity(g: Group) -> Surjection {
        let n = g.order();
        make_surjection(g.clone(), g, (0..n).collect()).expect("identity is a surjection")
    }

    #[inline]
    pub fn lift(&self, g: usize) -> usize {
        self.section[g]
    }

    pub fn kernel_position(&self, k: usize) -> Option<usize> {
        self.kernel.binary_search(&k).ok()
    }
}

/// Serialized form of a group: `{"name", "order", "product"}`; inverses are derived on load.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupJson {
    pub name: String,
    pub order: usize,
    pub product: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn load(self) -> Result<Group> {
        if self.product.len() != self.order {
            return Err(Error::Input(format!(
                "group {}: declared order {} but table has {} rows",
                self.name,
                self.order,
                self.product.len()
            )));
        }
        Ok(Arc::new(GroupTable::from_rows(self.name, self.product)?))
    }
}
