//! Subsets of a carrier `{0..n-1}` as fixed-width bitsets.

use fixedbitset::FixedBitSet;

pub type Subset = FixedBitSet;

pub fn empty(n: usize) -> Subset {
    FixedBitSet::with_capacity(n)
}

pub fn full(n: usize) -> Subset {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

pub fn singleton(n: usize, x: usize) -> Subset {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert(x);
    s
}

pub fn from_elements<I: IntoIterator<Item = usize>>(n: usize, elements: I) -> Subset {
    let mut s = FixedBitSet::with_capacity(n);
    for x in elements {
        s.insert(x);
    }
    s
}

pub fn elements(s: &Subset) -> Vec<usize> {
    s.ones().collect()
}

pub fn complement(s: &Subset) -> Subset {
    let mut c = s.clone();
    c.toggle_range(..);
    c
}

/// Image of `s` under `map` inside a carrier of size `m`.
pub fn image(s: &Subset, map: &[usize], m: usize) -> Subset {
    from_elements(m, s.ones().map(|x| map[x]))
}

/// Preimage of `s` under `map` (domain size `map.len()`).
pub fn preimage(s: &Subset, map: &[usize]) -> Subset {
    from_elements(map.len(), (0..map.len()).filter(|&x| s.contains(map[x])))
}

/// `{0,2,4}` style rendering used by the DSL and the reports.
pub fn format(s: &Subset) -> String {
    let parts: Vec<String> = s.ones().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_and_format() {
        let s = from_elements(5, [0, 2]);
        assert_eq!(format(&s), "{0,2}");
        assert_eq!(elements(&complement(&s)), vec![1, 3, 4]);
        assert_eq!(format(&empty(3)), "{}");
        assert_eq!(full(3).count_ones(..), 3);
    }

    #[test]
    fn image_and_preimage() {
        let map = [0, 1, 0, 1];
        let s = from_elements(4, [2, 3]);
        assert_eq!(elements(&image(&s, &map, 2)), vec![0, 1]);
        assert_eq!(elements(&preimage(&singleton(2, 1), &map)), vec![1, 3]);
    }
}
