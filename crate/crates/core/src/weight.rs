use std::fmt;

/// Largest supported coordinate length.
pub const MAX_COORDS: usize = 8;

/// Integer lattice point, stored inline so it can be used as a map key cheaply.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    len: u8,
    c: [i32; MAX_COORDS],
}

impl Weight {
    pub fn new(coords: &[i32]) -> Self {
        assert!(coords.len() <= MAX_COORDS, "too many coordinates");
        let mut c = [0; MAX_COORDS];
        c[..coords.len()].copy_from_slice(coords);
        Weight { len: coords.len() as u8, c }
    }

    pub fn zero(len: usize) -> Self {
        Weight::new(&vec![0; len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut w = Weight::zero(len);
        w.c[i] = 1;
        w
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self) -> &[i32] {
        &self.c[..self.len as usize]
    }

    pub fn get(&self, i: usize) -> i32 {
        self.c[i]
    }

    pub fn set(&mut self, i: usize, v: i32) {
        self.c[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        debug_assert_eq!(self.len, o.len);
        let mut r = *self;
        for i in 0..self.len() {
            r.c[i] += o.c[i];
        }
        r
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        debug_assert_eq!(self.len, o.len);
        let mut r = *self;
        for i in 0..self.len() {
            r.c[i] -= o.c[i];
        }
        r
    }

    pub fn scale(&self, s: i32) -> Weight {
        let mut r = *self;
        for i in 0..self.len() {
            r.c[i] *= s;
        }
        r
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    pub fn sum(&self) -> i32 {
        self.coords().iter().sum()
    }

    pub fn dot(&self, o: &Weight) -> i64 {
        self.coords().iter().zip(o.coords()).map(|(a, b)| *a as i64 * *b as i64).sum()
    }

    pub fn abs_sum(&self) -> i32 {
        self.coords().iter().map(|x| x.abs()).sum()
    }

    pub fn parse(s: &str) -> Option<Weight> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v: Option<Vec<i32>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
        let v = v?;
        (!v.is_empty() && v.len() <= MAX_COORDS).then(|| Weight::new(&v))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Enumerates all integer points of [lo, hi]^len.
pub fn grid(len: usize, lo: i32, hi: i32) -> Vec<Weight> {
    let mut out = vec![Weight::zero(len)];
    for i in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for v in lo..=hi {
                let mut x = *w;
                x.set(i, v);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_parse() {
        let a = Weight::new(&[1, -2, 3]);
        let b = Weight::parse("(0,1,1)").unwrap();
        assert_eq!(a.add(&b), Weight::new(&[1, -1, 4]));
        assert_eq!(a.sub(&a), Weight::zero(3));
        assert_eq!(a.to_string(), "(1,-2,3)");
        assert_eq!(grid(2, -1, 1).len(), 9);
        assert_ne!(Weight::zero(2), Weight::zero(3));
    }
}
