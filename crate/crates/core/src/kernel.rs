//! The kernel (minimal ideal) of a transformation semigroup and its Rees
//! coordinates `X × G × Y`.
//!
//! For a semigroup of functions the kernel is the set of elements of minimal
//! rank. Its rows are labelled by the distinct partitions (preimage blocks)
//! and its columns by the distinct ranges; each cell is a group whose identity
//! is the unique idempotent with that partition and range.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::semigroup::SemigroupTable;
use crate::subset::{Layer, SubsetIndex};
use crate::transformation::{compose_unchecked, Partition, Transformation};

#[derive(Debug, Clone)]
pub struct KernelStructure {
    n: usize,
    rank: usize,
    /// Kernel elements in canonical (table) order.
    elements: Vec<Transformation>,
    table_index: Vec<usize>,
    position: HashMap<Transformation, usize>,
    partitions: Vec<Partition>,
    ranges: Vec<Vec<usize>>,
    /// `cells[x][y]`: kernel positions with partition `x` and range `y`.
    cells: Vec<Vec<Vec<usize>>>,
    idempotents: Vec<Vec<usize>>,
    base: usize,
    base_cell: (usize, usize),
    cell_of: Vec<(usize, usize)>,
}

/// Rees coordinates of a kernel element: partition row, position in the base
/// group `G = eKe`, range column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReesCoordinates {
    pub x: usize,
    pub g: usize,
    pub y: usize,
}

/// A maximal subgroup of the kernel with its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalGroup {
    pub elements: Vec<Transformation>,
    /// Position of the identity (the cell's idempotent) in `elements`.
    pub identity: usize,
    /// `table[a][b]` is the position of `elements[a] · elements[b]`.
    pub table: Vec<Vec<usize>>,
}

impl LocalGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Element orders, sorted; enough to tell small groups apart.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut orders: Vec<usize> = (0..self.order())
            .map(|a| {
                let mut k = 1;
                let mut cur = a;
                while cur != self.identity {
                    cur = self.table[cur][a];
                    k += 1;
                }
                k
            })
            .collect();
        orders.sort_unstable();
        orders
    }
}

/// Extracts the kernel of `st` and its Rees structure.
pub fn kernel_of(st: &SemigroupTable) -> Result<KernelStructure> {
    let rank = st.min_rank();
    let table_index: Vec<usize> = (0..st.len()).filter(|&i| st.element(i).rank() == rank).collect();
    let elements: Vec<Transformation> = table_index.iter().map(|&i| st.element(i).clone()).collect();
    let position = elements.iter().enumerate().map(|(p, t)| (t.clone(), p)).collect();

    let partitions: Vec<Partition> =
        elements.iter().map(Transformation::partition).collect::<BTreeSet<_>>().into_iter().collect();
    let ranges: Vec<Vec<usize>> =
        elements.iter().map(Transformation::image).collect::<BTreeSet<_>>().into_iter().collect();

    let mut cells = vec![vec![Vec::new(); ranges.len()]; partitions.len()];
    let mut cell_of = Vec::with_capacity(elements.len());
    for (p, k) in elements.iter().enumerate() {
        let x = partitions.binary_search(&k.partition()).unwrap();
        let y = ranges.binary_search(&k.image()).unwrap();
        cells[x][y].push(p);
        cell_of.push((x, y));
    }

    let mut idempotents = vec![vec![0; ranges.len()]; partitions.len()];
    let group_order = cells[0][0].len();
    for (x, row) in cells.iter().enumerate() {
        for (y, cell) in row.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::EmptyCell { partition: x, range: y });
            }
            let idem: Vec<usize> = cell.iter().copied().filter(|&p| elements[p].is_idempotent()).collect();
            if idem.len() != 1 || cell.len() != group_order {
                return Err(Error::NotCompletelySimple);
            }
            idempotents[x][y] = idem[0];
        }
    }

    let base = (0..elements.len()).find(|&p| elements[p].is_idempotent()).ok_or(Error::NotCompletelySimple)?;
    let base_cell = cell_of[base];

    Ok(KernelStructure {
        n: st.n(),
        rank,
        elements,
        table_index,
        position,
        partitions,
        ranges,
        cells,
        idempotents,
        base,
        base_cell,
        cell_of,
    })
}

impl KernelStructure {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    /// Index in the semigroup table of kernel element `p`.
    pub fn table_index(&self, p: usize) -> usize {
        self.table_index[p]
    }

    /// Kernel position of a transformation, if it lies in the kernel.
    pub fn position(&self, k: &Transformation) -> Option<usize> {
        self.position.get(k).copied()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn ranges(&self) -> &[Vec<usize>] {
        &self.ranges
    }

    pub fn cell(&self, x: usize, y: usize) -> &[usize] {
        &self.cells[x][y]
    }

    /// `(x, y)` labels of kernel element `p`.
    pub fn cell_of(&self, p: usize) -> (usize, usize) {
        self.cell_of[p]
    }

    pub fn idempotent(&self, x: usize, y: usize) -> &Transformation {
        &self.elements[self.idempotents[x][y]]
    }

    /// The base idempotent `e`: first idempotent of the kernel in table order.
    pub fn base(&self) -> &Transformation {
        &self.elements[self.base]
    }

    pub fn base_cell(&self) -> (usize, usize) {
        self.base_cell
    }

    pub fn group_order(&self) -> usize {
        self.cells[0][0].len()
    }

    /// The base group `G = eKe`, in table order.
    pub fn group(&self) -> Vec<&Transformation> {
        let (x, y) = self.base_cell;
        self.cells[x][y].iter().map(|&p| &self.elements[p]).collect()
    }

    /// `E(Ke)`: one idempotent per partition, all with the range of `e`.
    pub fn x_idempotent(&self, x: usize) -> &Transformation {
        self.idempotent(x, self.base_cell.1)
    }

    /// `E(eK)`: one idempotent per range, all with the partition of `e`.
    pub fn y_idempotent(&self, y: usize) -> &Transformation {
        self.idempotent(self.base_cell.0, y)
    }

    fn group_position(&self, t: &Transformation) -> Option<usize> {
        let (x, y) = self.base_cell;
        self.cells[x][y].iter().position(|&p| &self.elements[p] == t)
    }

    /// Recombines Rees coordinates into `x · g · y`.
    pub fn recombine(&self, c: ReesCoordinates) -> Transformation {
        let g = &self.elements[self.cells[self.base_cell.0][self.base_cell.1][c.g]];
        compose_unchecked(&compose_unchecked(self.x_idempotent(c.x), g), self.y_idempotent(c.y))
    }

    pub fn structural_right_group(&self) -> bool {
        self.partitions.len() == 1
    }

    pub fn structural_left_group(&self) -> bool {
        self.ranges.len() == 1
    }

    /// The maximal subgroup at cell `(x, y)`.
    pub fn local_group(&self, x: usize, y: usize) -> Result<LocalGroup> {
        let cell = self
            .cells
            .get(x)
            .and_then(|row| row.get(y))
            .filter(|c| !c.is_empty())
            .ok_or(Error::EmptyCell { partition: x, range: y })?;
        let elements: Vec<Transformation> = cell.iter().map(|&p| self.elements[p].clone()).collect();
        let identity = elements.iter().position(Transformation::is_idempotent).ok_or(Error::NotCompletelySimple)?;
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        let ab = compose_unchecked(a, b);
                        elements.iter().position(|t| *t == ab).ok_or(Error::NotCompletelySimple)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LocalGroup { elements, identity, table })
    }

    /// Level-`ℓ` image of a kernel partition: one block per choice of `ℓ`
    /// original blocks (their cross product), plus the block of collapsed
    /// `ℓ`-sets together with the collapsed state.
    pub fn level_partition(&self, x: usize, level: usize) -> Result<Vec<Vec<LevelLabel>>> {
        level_partition(&self.partitions[x], self.n, level)
    }

    /// Level-`ℓ` image of a range: its `ℓ`-subsets and the collapsed state.
    pub fn level_range(&self, y: usize, level: usize) -> Result<Vec<LevelLabel>> {
        let layer = Layer::new(self.n, level)?;
        let range: u32 = self.ranges[y].iter().fold(0, |m, &i| m | 1 << (i - 1));
        let mut out: Vec<LevelLabel> = (0..layer.len())
            .filter(|&i| layer.masks()[i] & range == layer.masks()[i])
            .map(|i| LevelLabel::Subset(i + 1))
            .collect();
        out.push(LevelLabel::Collapsed);
        Ok(out)
    }

    /// Whether `s·k` and `k·s` stay in the kernel for every `s ∈ S`, `k ∈ K`.
    pub fn verify_ideal(&self, st: &SemigroupTable) -> bool {
        st.elements().iter().all(|s| {
            self.elements.iter().all(|k| {
                self.position.contains_key(&compose_unchecked(s, k))
                    && self.position.contains_key(&compose_unchecked(k, s))
            })
        })
    }
}

/// Label of a state at level `ℓ`: a 1-based subset position or the collapsed
/// state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LevelLabel {
    Subset(usize),
    Collapsed,
}

pub fn level_partition(partition: &Partition, n: usize, level: usize) -> Result<Vec<Vec<LevelLabel>>> {
    let layer = Layer::new(n, level)?;
    let block_masks: Vec<u32> = partition.iter().map(|b| b.iter().fold(0u32, |m, &i| m | 1 << (i - 1))).collect();
    let mut blocks: Vec<Vec<LevelLabel>> = Vec::new();
    for choice in itertools::Itertools::combinations(0..block_masks.len(), level) {
        let mut cross: Vec<u32> = vec![0];
        for &b in &choice {
            let members: Vec<u32> = (0..n as u32).filter(|i| block_masks[b] & (1 << i) != 0).collect();
            cross = cross.iter().flat_map(|&m| members.iter().map(move |&i| m | 1 << i)).collect();
        }
        let mut labels: Vec<LevelLabel> =
            cross.iter().map(|&m| LevelLabel::Subset(layer.index_of(m).unwrap() + 1)).collect();
        labels.sort();
        blocks.push(labels);
    }
    let mut collapsed: Vec<LevelLabel> = (0..layer.len())
        .filter(|&i| block_masks.iter().any(|&b| (layer.masks()[i] & b).count_ones() > 1))
        .map(|i| LevelLabel::Subset(i + 1))
        .collect();
    collapsed.push(LevelLabel::Collapsed);
    blocks.push(collapsed);
    blocks.sort();
    Ok(blocks)
}

/// Rees coordinates of `k`.
pub fn rees_coordinates(ks: &KernelStructure, k: &Transformation) -> Result<ReesCoordinates> {
    let p = ks.position(k).ok_or(Error::NotInKernel)?;
    let (x, y) = ks.cell_of(p);
    let (bx, by) = ks.base_cell;
    let xe = ks.x_idempotent(x);
    let ye = ks.y_idempotent(y);
    for (g, &gp) in ks.cells[bx][by].iter().enumerate() {
        if &compose_unchecked(&compose_unchecked(xe, &ks.elements[gp]), ye) == k {
            return Ok(ReesCoordinates { x, g, y });
        }
    }
    Err(Error::NotCompletelySimple)
}

/// `φ(y, x)`: the product of the `y`-th element of `E(eK)` with the `x`-th
/// element of `E(Ke)`, as a position in `G`.
pub fn sandwich(ks: &KernelStructure, y: usize, x: usize) -> Result<usize> {
    let prod = compose_unchecked(ks.y_idempotent(y), ks.x_idempotent(x));
    ks.group_position(&prod).ok_or(Error::SandwichEscape)
}

/// Product of two positions in `G`.
pub fn group_mul(ks: &KernelStructure, a: usize, b: usize) -> usize {
    let (bx, by) = ks.base_cell;
    let cell = &ks.cells[bx][by];
    let prod = compose_unchecked(&ks.elements[cell[a]], &ks.elements[cell[b]]);
    ks.group_position(&prod).expect("G is closed")
}

/// Helper for tests and reports: subset labels of a level as 1-based lists.
pub fn describe_labels(n: usize, level: usize, labels: &[LevelLabel]) -> Vec<Option<SubsetIndex>> {
    let layer = Layer::new(n, level).expect("valid level");
    labels
        .iter()
        .map(|l| match l {
            LevelLabel::Subset(p) => Some(layer.subset(p - 1)),
            LevelLabel::Collapsed => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{generate_semigroup, ColorSystem, DEFAULT_CAP};

    fn kernel(colors: &[&str]) -> (SemigroupTable, KernelStructure) {
        let cs = ColorSystem::from_digits(colors).unwrap();
        let st = generate_semigroup(&cs, DEFAULT_CAP).unwrap();
        let ks = kernel_of(&st).unwrap();
        (st, ks)
    }

    fn t(s: &str) -> Transformation {
        Transformation::from_digits(s).unwrap()
    }

    #[test]
    fn permutation_kernel_is_the_group() {
        let (st, ks) = kernel(&["2341", "2134"]);
        assert_eq!(ks.rank(), 4);
        assert_eq!(ks.len(), 24);
        assert_eq!(st.len(), 24);
        assert!(ks.structural_right_group() && ks.structural_left_group());
        assert_eq!(ks.base(), &Transformation::identity(4));
    }

    #[test]
    fn constant_kernel_is_trivial_groups() {
        let (_, ks) = kernel(&["1111", "2341"]);
        assert_eq!(ks.rank(), 1);
        assert_eq!(ks.group_order(), 1);
        assert_eq!(ks.ranges().len(), 4);
        assert!(ks.structural_right_group());
        assert!(!ks.structural_left_group());
        let g = ks.local_group(0, 2).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn six_point_example_structure() {
        let (st, ks) = kernel(&["451314", "245631"]);
        assert_eq!(ks.len(), 48);
        assert_eq!(ks.rank(), 3);
        assert_eq!(ks.partitions().len(), 2);
        assert_eq!(ks.ranges().len(), 4);
        assert_eq!(ks.group_order(), 6);
        assert!(ks.verify_ideal(&st));
        assert_eq!(ks.idempotent(0, 2), &t("223636"));
        assert_eq!(ks.idempotent(1, 0), &t("143431"));
        assert!(!ks.structural_right_group());
    }

    #[test]
    fn rees_coordinates_recombine_and_multiply() {
        let (_, ks) = kernel(&["451314", "245631"]);
        let e = ks.base().clone();
        let ce = rees_coordinates(&ks, &e).unwrap();
        assert_eq!(ks.recombine(ce), e);
        assert_eq!((ce.x, ce.y), ks.base_cell());

        let k = t("332626");
        let c = rees_coordinates(&ks, &k).unwrap();
        assert_eq!((c.x, c.y), (0, 2));
        assert_eq!(ks.recombine(c), k);

        let coords: Vec<ReesCoordinates> = ks.elements().iter().map(|k| rees_coordinates(&ks, k).unwrap()).collect();
        let distinct: BTreeSet<_> = coords.iter().map(|c| (c.x, c.g, c.y)).collect();
        assert_eq!(distinct.len(), 48);

        for (a, ca) in ks.elements().iter().zip(&coords) {
            for (b, cb) in ks.elements().iter().zip(&coords) {
                let ab = compose_unchecked(a, b);
                let cab = rees_coordinates(&ks, &ab).unwrap();
                let phi = sandwich(&ks, ca.y, cb.x).unwrap();
                let g = group_mul(&ks, group_mul(&ks, ca.g, phi), cb.g);
                assert_eq!(cab, ReesCoordinates { x: ca.x, g, y: cb.y });
            }
        }
        assert_eq!(rees_coordinates(&ks, &Transformation::identity(6)), Err(Error::NotInKernel));
    }

    #[test]
    fn sandwich_of_base_coordinates_is_identity() {
        let (_, ks) = kernel(&["451314", "245631"]);
        let (bx, by) = ks.base_cell();
        let phi = sandwich(&ks, by, bx).unwrap();
        assert_eq!(ks.group()[phi], ks.base());
        for y in 0..4 {
            for x in 0..2 {
                assert!(sandwich(&ks, y, x).is_ok());
            }
        }
    }

    #[test]
    fn local_group_is_s3() {
        let (_, ks) = kernel(&["451314", "245631"]);
        let g = ks.local_group(0, 2).unwrap();
        let want: BTreeSet<Transformation> =
            ["223636", "663232", "662323", "336262", "332626", "226363"].iter().map(|s| t(s)).collect();
        assert_eq!(g.elements.iter().cloned().collect::<BTreeSet<_>>(), want);
        assert_eq!(g.elements[g.identity], t("223636"));
        assert!(!g.is_abelian());
        assert_eq!(g.order_profile(), vec![1, 2, 2, 2, 3, 3]);
        for x in 0..2 {
            for y in 0..4 {
                let h = ks.local_group(x, y).unwrap();
                assert_eq!(h.order_profile(), g.order_profile());
            }
        }
        assert!(ks.local_group(5, 0).is_err());
    }

    #[test]
    fn level_two_and_three_imaging() {
        use LevelLabel::{Collapsed as X, Subset as S};
        let (_, ks) = kernel(&["451314", "245631"]);
        let sorted = |mut v: Vec<Vec<LevelLabel>>| {
            for b in &mut v {
                b.sort();
            }
            v.sort();
            v
        };
        let p1 = vec![
            vec![S(1), S(11), S(14), X],
            vec![S(2), S(4), S(6), S(8)],
            vec![S(3), S(5), S(7), S(9)],
            vec![S(10), S(12), S(13), S(15)],
        ];
        let p2 = vec![
            vec![S(1), S(3), S(9), S(14)],
            vec![S(2), S(4), S(12), S(15)],
            vec![S(5), S(7), S(11), X],
            vec![S(6), S(8), S(10), S(13)],
        ];
        assert_eq!(ks.level_partition(0, 2).unwrap(), sorted(p1));
        assert_eq!(ks.level_partition(1, 2).unwrap(), sorted(p2));
        assert_eq!(ks.level_range(0, 2).unwrap(), vec![S(2), S(3), S(10), X]);
        assert_eq!(ks.level_range(3, 2).unwrap(), vec![S(8), S(9), S(15), X]);

        let three_p1 = vec![
            [5, 7, 8, 10, 11, 13, 14, 16].iter().map(|&i| S(i)).collect::<Vec<_>>(),
            [1, 2, 3, 4, 6, 9, 12, 15, 17, 18, 19, 20].iter().map(|&i| S(i)).chain([X]).collect(),
        ];
        assert_eq!(ks.level_partition(0, 3).unwrap(), sorted(three_p1));
        assert_eq!(ks.level_range(2, 3).unwrap(), vec![S(13), X]);
    }

    #[test]
    fn level_partition_matches_augmented_action() {
        // the partition of k's augmented level action equals the cross-product description
        let (_, ks) = kernel(&["451314", "245631"]);
        for k in ks.elements() {
            let x = ks.partitions().binary_search(&k.partition()).unwrap();
            for level in 1..=3 {
                let action = crate::hierarchy::level_action(k, level).unwrap();
                let last = action.n();
                let from_action: Vec<Vec<LevelLabel>> = action
                    .partition()
                    .into_iter()
                    .map(|b| {
                        b.into_iter()
                            .map(|i| if i == last { LevelLabel::Collapsed } else { LevelLabel::Subset(i) })
                            .collect()
                    })
                    .collect();
                let mut from_action = from_action;
                from_action.sort();
                assert_eq!(from_action, ks.level_partition(x, level).unwrap());
            }
        }
    }
}
