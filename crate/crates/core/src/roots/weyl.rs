use std::collections::HashMap;

use super::MetaRootSystem;
use crate::error::{Error, Result};
use crate::weight::Weight;

pub const DEFAULT_WEYL_CAP: usize = 1152;

/// Element of W with a reduced word; the word [i1, ..., il] means s_{i1} ⋯ s_{il}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// Row-major action on fundamental-weight coordinates.
    pub mat: Vec<i32>,
    pub rank: usize,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        let mut mat = vec![0; rank * rank];
        for i in 0..rank {
            mat[i * rank + i] = 1;
        }
        WeylElement { word: Vec::new(), mat, rank }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn act(&self, lambda: &Weight) -> Weight {
        let r = self.rank;
        let mut out = *lambda;
        for i in 0..r {
            let mut s = 0;
            for j in 0..r {
                s += self.mat[i * r + j] * lambda.get(j);
            }
            out.set(i, s);
        }
        out
    }

    pub fn from_word(sys: &MetaRootSystem, word: &[usize]) -> Self {
        let mut w = WeylElement::identity(sys.rank);
        for &i in word.iter().rev() {
            w = w.left_mul(sys, i);
        }
        w.word = word.to_vec();
        w
    }

    /// s_i · self.
    pub fn left_mul(&self, sys: &MetaRootSystem, i: usize) -> Self {
        let r = self.rank;
        let mut mat = self.mat.clone();
        let c = sys.cartan();
        for col in 0..r {
            let li = self.mat[i * r + col];
            for row in 0..r {
                mat[row * r + col] = self.mat[row * r + col] - c[row][i] * li;
            }
        }
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.push(i);
        word.extend_from_slice(&self.word);
        WeylElement { word, mat, rank: r }
    }

    pub fn inverse_word(&self) -> Vec<usize> {
        self.word.iter().rev().copied().collect()
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    /// For each non-identity element e: (i, p) with e = s_i · elements[p] and ℓ(e) = ℓ(p) + 1.
    pub parent: Vec<Option<(usize, usize)>>,
    index: HashMap<Vec<i32>, usize>,
}

impl WeylGroup {
    /// Breadth-first enumeration; elements appear in order of length.
    pub fn enumerate(sys: &MetaRootSystem, cap: usize) -> Result<Self> {
        let mut elements = vec![WeylElement::identity(sys.rank)];
        let mut parent = vec![None];
        let mut index = HashMap::new();
        index.insert(elements[0].mat.clone(), 0);
        let mut start = 0;
        while start < elements.len() {
            let end = elements.len();
            for e in start..end {
                for i in 0..sys.rank {
                    let w = elements[e].left_mul(sys, i);
                    if !index.contains_key(&w.mat) {
                        if elements.len() >= cap {
                            return Err(Error::GroupTooLarge { cap });
                        }
                        index.insert(w.mat.clone(), elements.len());
                        elements.push(w);
                        parent.push(Some((i, e)));
                    }
                }
            }
            start = end;
        }
        Ok(WeylGroup { elements, parent, index })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn longest(&self) -> &WeylElement {
        self.elements.last().expect("nonempty group")
    }

    pub fn find(&self, w: &WeylElement) -> Option<&WeylElement> {
        self.index.get(&w.mat).map(|&i| &self.elements[i])
    }

    /// All reduced words of an element, found by descending along left descents.
    pub fn reduced_words(&self, sys: &MetaRootSystem, w: &WeylElement) -> Vec<Vec<usize>> {
        if w.is_empty() {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for i in 0..sys.rank {
            let v = w.left_mul(sys, i);
            if let Some(el) = self.find(&v) {
                if el.len() + 1 == w.len() {
                    for mut tail in self.reduced_words(sys, el) {
                        tail.insert(0, i);
                        out.push(tail);
                    }
                }
            }
        }
        out
    }

    /// Φ(w) = {α > 0 : wα < 0}, as indices into the positive roots.
    pub fn inversion_set(&self, sys: &MetaRootSystem, w: &WeylElement) -> Vec<usize> {
        sys.positive
            .iter()
            .enumerate()
            .filter(|(_, a)| {
                let img = w.act(&a.weight);
                sys.root_by_weight(&img).is_some_and(|(_, pos)| !pos)
            })
            .map(|(i, _)| i)
            .collect()
    }
}

/// Order of s_i s_j.
pub fn braid_order(sys: &MetaRootSystem, i: usize, j: usize) -> usize {
    let c = sys.cartan();
    match c[i][j] * c[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        3 => 6,
        _ => unreachable!("finite type"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::Lattice;

    fn group(t: &str) -> (MetaRootSystem, WeylGroup) {
        let s = MetaRootSystem::from_str_type(t, 1, 1, Lattice::Weight).unwrap();
        let w = s.weyl_group().unwrap();
        (s, w)
    }

    #[test]
    fn sizes_and_lengths() {
        let (_, w) = group("A1");
        assert_eq!(w.len(), 2);
        let (_, w) = group("A2");
        let mut gf = [0; 4];
        for e in &w.elements {
            gf[e.len()] += 1;
        }
        assert_eq!(gf, [1, 2, 2, 1]);
        let (_, w) = group("B2");
        assert_eq!(w.len(), 8);
        assert_eq!(w.longest().len(), 4);
        assert_eq!(group("G2").1.len(), 12);
        assert_eq!(group("A3").1.len(), 24);
        assert_eq!(group("F4").1.len(), 1152);
    }

    #[test]
    fn cap_enforced() {
        let s = MetaRootSystem::from_str_type("B3", 1, 1, Lattice::Weight).unwrap();
        assert!(matches!(WeylGroup::enumerate(&s, 10), Err(Error::GroupTooLarge { cap: 10 })));
    }

    #[test]
    fn length_equals_inversions() {
        for t in ["A2", "B2", "G2", "A3", "C3"] {
            let (s, w) = group(t);
            for e in &w.elements {
                assert_eq!(w.inversion_set(&s, e).len(), e.len());
                assert_eq!(WeylElement::from_word(&s, &e.word).mat, e.mat);
            }
            assert_eq!(w.longest().len(), s.positive.len());
        }
    }

    #[test]
    fn w0_reduced_words() {
        let (s, w) = group("A2");
        let words = w.reduced_words(&s, w.longest());
        assert_eq!(words.len(), 2);
        let (s, w) = group("B2");
        assert_eq!(w.reduced_words(&s, w.longest()).len(), 2);
    }

    #[test]
    fn braid_orders() {
        let (s, _) = group("G2");
        assert_eq!(braid_order(&s, 0, 1), 6);
        let (s, _) = group("B2");
        assert_eq!(braid_order(&s, 0, 1), 4);
    }
}
