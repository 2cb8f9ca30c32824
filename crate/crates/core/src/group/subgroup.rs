use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::GroupTable;
use crate::error::{Error, Result};

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: Arc<GroupTable>,
    elements: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements && self.parent.table() == other.parent.table()
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.elements.serialize(s)
    }
}

impl Subgroup {
    /// Wraps an element set after checking it is a subgroup.
    pub fn new(parent: Arc<GroupTable>, elements: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        for &g in &set {
            parent.check_element(g)?;
        }
        if !set.contains(&parent.identity()) {
            return Err(Error::InvalidArgument("subgroup must contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&parent.inv(a)) {
                return Err(Error::InvalidArgument(format!("not closed under inverse at {a}")));
            }
            for &b in &set {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(Error::InvalidArgument(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(Self { parent, elements: set.into_iter().collect() })
    }

    pub fn whole(parent: &Arc<GroupTable>) -> Self {
        Self { parent: parent.clone(), elements: parent.elements().collect() }
    }

    pub fn trivial(parent: &Arc<GroupTable>) -> Self {
        Self { parent: parent.clone(), elements: vec![parent.identity()] }
    }

    pub fn parent(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    /// Position of `g` in the sorted element list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&g).ok()
    }

    pub fn is_whole(&self) -> bool {
        self.elements.len() == self.parent.order()
    }

    pub fn is_abelian(&self) -> bool {
        let g = &self.parent;
        self.elements
            .iter()
            .all(|&a| self.elements.iter().all(|&b| g.mul(a, b) == g.mul(b, a)))
    }
}

/// Smallest multiplicatively closed set containing `set`.
pub fn semigroup_closure(group: &GroupTable, set: &[usize]) -> Result<Vec<usize>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    for &g in set {
        group.check_element(g)?;
    }
    let mut present = vec![false; group.order()];
    let mut frontier: Vec<usize> = Vec::new();
    for &s in set {
        if !present[s] {
            present[s] = true;
            frontier.push(s);
        }
    }
    let gens: Vec<usize> = frontier.clone();
    while let Some(x) = frontier.pop() {
        for &s in &gens {
            let y = group.mul(x, s);
            if !present[y] {
                present[y] = true;
                frontier.push(y);
            }
        }
    }
    Ok((0..group.order()).filter(|&g| present[g]).collect())
}

/// Smallest subgroup containing `set`; the empty set generates `{e}`.
pub fn subgroup_closure(group: &Arc<GroupTable>, set: &[usize]) -> Result<Subgroup> {
    for &g in set {
        group.check_element(g)?;
    }
    let mut gens: Vec<usize> = set.to_vec();
    gens.extend(set.iter().map(|&g| group.inv(g)));
    gens.push(group.identity());
    let elements = semigroup_closure(group, &gens)?;
    Ok(Subgroup { parent: group.clone(), elements })
}

/// Left cosets `gH`, each sorted, ordered by their minimal element.
pub fn left_cosets(subgroup: &Subgroup) -> Vec<Vec<usize>> {
    let g = subgroup.parent();
    let mut seen = vec![false; g.order()];
    let mut cosets = Vec::new();
    for rep in g.elements() {
        if seen[rep] {
            continue;
        }
        let mut coset: Vec<usize> = subgroup.elements().iter().map(|&h| g.mul(rep, h)).collect();
        coset.sort_unstable();
        for &x in &coset {
            seen[x] = true;
        }
        cosets.push(coset);
    }
    cosets
}

/// Right cosets `Ht`, each sorted, ordered by their minimal element.
pub fn right_cosets(subgroup: &Subgroup) -> Vec<Vec<usize>> {
    let g = subgroup.parent();
    let mut seen = vec![false; g.order()];
    let mut cosets = Vec::new();
    for rep in g.elements() {
        if seen[rep] {
            continue;
        }
        let mut coset: Vec<usize> = subgroup.elements().iter().map(|&h| g.mul(h, rep)).collect();
        coset.sort_unstable();
        for &x in &coset {
            seen[x] = true;
        }
        cosets.push(coset);
    }
    cosets
}

/// All subgroups, sorted by (order, elements).
pub fn all_subgroups(group: &Arc<GroupTable>) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    for g in group.elements() {
        found.insert(subgroup_closure(group, &[g]).expect("valid element").elements);
    }
    // join pairs until nothing new appears
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let before = found.len();
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let mut gens = a.clone();
                gens.extend_from_slice(b);
                found.insert(subgroup_closure(group, &gens).expect("valid elements").elements);
            }
        }
        if found.len() == before {
            break;
        }
    }
    let mut subgroups: Vec<Subgroup> = found
        .into_iter()
        .map(|elements| Subgroup { parent: group.clone(), elements })
        .collect();
    subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements.cmp(&b.elements)));
    subgroups
}

/// Commutator subgroup `[H, H]`.
pub fn derived_subgroup(subgroup: &Subgroup) -> Subgroup {
    let g = subgroup.parent();
    let mut comms = Vec::new();
    for &a in subgroup.elements() {
        for &b in subgroup.elements() {
            let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
            comms.push(c);
        }
    }
    subgroup_closure(g, &comms).expect("valid elements")
}
