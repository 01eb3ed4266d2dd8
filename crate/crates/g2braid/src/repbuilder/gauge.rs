//! Bookkeeping for the diagonal rescaling freedom of the path basis.
//!
//! Rescaling the edge μ -> λ by f multiplies row μ of every block W(δ, λ)
//! by f and its column by 1/f, on top of factors coming from the edges
//! δ -> μ, which differ between blocks. So two structures are kept: a
//! weighted union-find over (block, row) recording known ratios of the
//! block's row factors, and a plain union-find over edges recording which
//! edge ratios have been chosen. Linking two edges is a free choice only if
//! one side contains no edge already used at a lower level.

use crate::qscalar::Scalar;

pub(crate) struct Gauge<S> {
    ratio_parent: Vec<usize>,
    // c_x = weight[x] * c_parent(x)
    weight: Vec<S>,
    link_parent: Vec<usize>,
    anchored: Vec<bool>,
}

impl<S: Scalar> Gauge<S> {
    pub fn new() -> Self {
        Gauge {
            ratio_parent: Vec::new(),
            weight: Vec::new(),
            link_parent: Vec::new(),
            anchored: Vec::new(),
        }
    }

    pub fn add_ratio_node(&mut self) -> usize {
        let id = self.ratio_parent.len();
        self.ratio_parent.push(id);
        self.weight.push(S::one());
        id
    }

    pub fn add_edge(&mut self, anchored: bool) -> usize {
        let id = self.link_parent.len();
        self.link_parent.push(id);
        self.anchored.push(anchored);
        id
    }

    fn find_ratio(&mut self, x: usize) -> (usize, S) {
        let p = self.ratio_parent[x];
        if p == x {
            return (x, S::one());
        }
        let (root, wp) = self.find_ratio(p);
        let w = self.weight[x].mul(&wp);
        self.ratio_parent[x] = root;
        self.weight[x] = w.clone();
        (root, w)
    }

    fn find_link(&mut self, x: usize) -> usize {
        let p = self.link_parent[x];
        if p == x {
            return x;
        }
        let r = self.find_link(p);
        self.link_parent[x] = r;
        r
    }

    /// Known value of c_x / c_y.
    pub fn ratio(&mut self, x: usize, y: usize) -> Option<S> {
        let (rx, wx) = self.find_ratio(x);
        let (ry, wy) = self.find_ratio(y);
        (rx == ry).then(|| wx.div(&wy).expect("gauge weights are nonzero"))
    }

    /// Whether linking edges x and y would be a free gauge choice.
    pub fn is_free(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find_link(x), self.find_link(y));
        rx != ry && !(self.anchored[rx] && self.anchored[ry])
    }

    pub fn link(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find_link(x), self.find_link(y));
        if rx != ry {
            self.link_parent[rx] = ry;
            self.anchored[ry] = self.anchored[ry] || self.anchored[rx];
        }
    }

    /// Imposes c_x / c_y = r. Returns false if this contradicts a known ratio.
    pub fn set_ratio(&mut self, x: usize, y: usize, r: S) -> bool {
        let (rx, wx) = self.find_ratio(x);
        let (ry, wy) = self.find_ratio(y);
        if rx == ry {
            return wx.div(&wy).expect("nonzero") == r;
        }
        // c_rx = c_x / wx = r c_y / wx = r wy / wx c_ry
        self.ratio_parent[rx] = ry;
        self.weight[rx] = r.mul(&wy).div(&wx).expect("nonzero");
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn ratios_compose_along_chains() {
        let mut g: Gauge<BigRational> = Gauge::new();
        let a = g.add_ratio_node();
        let b = g.add_ratio_node();
        let c = g.add_ratio_node();
        assert!(g.ratio(a, b).is_none());
        assert!(g.set_ratio(a, b, r(2, 1)));
        assert!(g.set_ratio(b, c, r(3, 1)));
        assert_eq!(g.ratio(a, c), Some(r(6, 1)));
        assert_eq!(g.ratio(c, a), Some(r(1, 6)));
        assert!(g.set_ratio(a, c, r(6, 1)));
        assert!(!g.set_ratio(a, c, r(5, 1)));
    }

    #[test]
    fn anchored_components_are_not_free() {
        let mut g: Gauge<BigRational> = Gauge::new();
        let a = g.add_edge(true);
        let b = g.add_edge(true);
        let c = g.add_edge(false);
        assert!(!g.is_free(a, b));
        assert!(g.is_free(a, c));
        g.link(a, c);
        assert!(!g.is_free(c, b));
        assert!(!g.is_free(a, c));
    }
}
