//! CART-style binary decision tree grown by Gini impurity.

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        /// Training-label fraction of class 1 at this leaf.
        p1: f64,
    },
    Split {
        feature: usize,
        /// Rows with value <= threshold go left.
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeModel {
    root: Node,
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    y: &'a [u8],
    max_depth: usize,
    min_leaf: usize,
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

impl Grower<'_> {
    fn leaf(&self, idx: &[usize]) -> Node {
        let pos = idx.iter().filter(|&&i| self.y[i] == 1).count();
        Node::Leaf {
            p1: pos as f64 / idx.len() as f64,
        }
    }

    /// Best (feature, threshold) by weighted child Gini. Candidates are
    /// midpoints between consecutive distinct values; ties keep the first
    /// feature and the lowest threshold.
    fn best_split(&self, idx: &[usize]) -> Option<(usize, f64, f64)> {
        let d = self.x[idx[0]].len();
        let n = idx.len();
        let total_pos = idx.iter().filter(|&&i| self.y[i] == 1).count();
        let mut best: Option<(usize, f64, f64)> = None;
        for feature in 0..d {
            let mut order: Vec<usize> = idx.to_vec();
            order.sort_by(|&a, &b| {
                self.x[a][feature]
                    .total_cmp(&self.x[b][feature])
                    .then(a.cmp(&b))
            });
            let mut left_pos = 0usize;
            for (count, window) in order.windows(2).enumerate() {
                let left_n = count + 1;
                if self.y[window[0]] == 1 {
                    left_pos += 1;
                }
                let (lo, hi) = (self.x[window[0]][feature], self.x[window[1]][feature]);
                if lo == hi {
                    continue;
                }
                let right_n = n - left_n;
                if left_n < self.min_leaf || right_n < self.min_leaf {
                    continue;
                }
                let score = (left_n as f64 * gini(left_pos, left_n)
                    + right_n as f64 * gini(total_pos - left_pos, right_n))
                    / n as f64;
                let threshold = lo + (hi - lo) / 2.0;
                let better = match best {
                    None => true,
                    Some((_, _, s)) => score < s - 1e-12,
                };
                if better {
                    best = Some((feature, threshold, score));
                }
            }
        }
        best
    }

    fn grow(&self, idx: &[usize], depth: usize) -> Node {
        let pos = idx.iter().filter(|&&i| self.y[i] == 1).count();
        if depth >= self.max_depth
            || pos == 0
            || pos == idx.len()
            || idx.len() < 2 * self.min_leaf
        {
            return self.leaf(idx);
        }
        let Some((feature, threshold, score)) = self.best_split(idx) else {
            return self.leaf(idx);
        };
        // A split that cannot beat the parent impurity is not worth taking.
        if score >= gini(pos, idx.len()) - 1e-12 {
            return self.leaf(idx);
        }
        let (left, right): (Vec<usize>, Vec<usize>) = idx
            .iter()
            .partition(|&&i| self.x[i][feature] <= threshold);
        Node::Split {
            feature,
            threshold,
            left: Box::new(self.grow(&left, depth + 1)),
            right: Box::new(self.grow(&right, depth + 1)),
        }
    }
}

pub fn fit_tree(x: &[Vec<f64>], y: &[u8], max_depth: usize, min_leaf: usize) -> TreeModel {
    let grower = Grower {
        x,
        y,
        max_depth,
        min_leaf: min_leaf.max(1),
    };
    let idx: Vec<usize> = (0..x.len()).collect();
    TreeModel {
        root: grower.grow(&idx, 0),
    }
}

impl TreeModel {
    pub fn probability(&self, row: &[f64]) -> f64 {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { p1 } => return *p1,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(node: &Node) -> usize {
            match node {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threshold_data() -> (Vec<Vec<f64>>, Vec<u8>) {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..10 {
            x.push(vec![i as f64]);
            y.push(u8::from(i >= 5));
        }
        (x, y)
    }

    #[test]
    fn single_threshold_recovered() {
        let (x, y) = threshold_data();
        let model = fit_tree(&x, &y, 8, 1);
        assert_eq!(model.depth(), 1);
        for (row, &label) in x.iter().zip(&y) {
            assert_eq!(model.probability(row), f64::from(label));
        }
        // The split sits at the midpoint between 4 and 5.
        assert_eq!(model.probability(&[4.4]), 0.0);
        assert_eq!(model.probability(&[4.6]), 1.0);
    }

    #[test]
    fn pure_data_is_a_leaf() {
        let x = vec![vec![0.0], vec![1.0], vec![2.0]];
        let y = vec![1, 1, 1];
        let model = fit_tree(&x, &y, 8, 1);
        assert_eq!(model.depth(), 0);
        assert_eq!(model.probability(&[100.0]), 1.0);
    }

    #[test]
    fn depth_cap_is_respected() {
        // Alternating labels force deep splits without a cap.
        let x: Vec<Vec<f64>> = (0..32).map(|i| vec![i as f64]).collect();
        let y: Vec<u8> = (0..32).map(|i| (i % 2) as u8).collect();
        let model = fit_tree(&x, &y, 3, 1);
        assert!(model.depth() <= 3);
    }

    #[test]
    fn min_leaf_blocks_tiny_children() {
        let (x, y) = threshold_data();
        let model = fit_tree(&x, &y, 8, 5);
        // Only the 5/5 split keeps both children at >= 5 rows.
        assert_eq!(model.depth(), 1);
        let unbalanced = fit_tree(&x, &y, 8, 6);
        assert_eq!(unbalanced.depth(), 0);
    }

    #[test]
    fn affine_feature_rescaling_preserves_predictions() {
        let (x, y) = threshold_data();
        let scaled: Vec<Vec<f64>> = x.iter().map(|r| vec![3.0 * r[0] - 7.0]).collect();
        let a = fit_tree(&x, &y, 8, 2);
        let b = fit_tree(&scaled, &y, 8, 2);
        for (orig, mapped) in x.iter().zip(&scaled) {
            let pa = u8::from(a.probability(orig) >= 0.5);
            let pb = u8::from(b.probability(mapped) >= 0.5);
            assert_eq!(pa, pb);
        }
    }

    #[test]
    fn split_ties_prefer_first_feature() {
        // Both features split the labels identically; feature 0 must win.
        let x = vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![2.0, 2.0],
            vec![3.0, 3.0],
        ];
        let y = vec![0, 0, 1, 1];
        let model = fit_tree(&x, &y, 8, 1);
        match model.root {
            Node::Split { feature, .. } => assert_eq!(feature, 0),
            Node::Leaf { .. } => panic!("expected a split"),
        }
    }
}
