//! Largest gap, diameter, and the Schneider non-convexity index.
//!
//! On the line the index of a compact set reduces to `G(A) / diam(A)`, where
//! `G(A)` is the longest bounded gap. A single point is convex and gets 0.
//! For axis-aligned products the index is the maximum over axes, and the
//! Minkowski sum of products is the product of axis-wise sums, so nothing
//! here ever materializes an n-dimensional set.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set_core::CompactSet1D;

/// `G(A)`: the smallest `ε ≥ 0` making `A + [0, ε]` convex.
pub fn largest_gap(a: &CompactSet1D) -> Rational {
    a.gaps().max().unwrap_or_else(Rational::zero)
}

/// `c(A) = G(A) / diam(A)`, with `c({x}) = 0`.
pub fn schneider_index(a: &CompactSet1D) -> Rational {
    let diam = a.diam();
    if diam.is_zero() {
        return Rational::zero();
    }
    largest_gap(a) / diam
}

/// Index of the Minkowski sum of `sets`.
pub fn sum_index(sets: &[CompactSet1D]) -> Result<Rational> {
    Ok(schneider_index(&CompactSet1D::sum_all(sets)?))
}

/// Hausdorff distance from `A` to its convex hull, `G(A) / 2`.
pub fn hausdorff_to_hull(a: &CompactSet1D) -> Rational {
    largest_gap(a) / Rational::from_integer(2.into())
}

/// Axis-aligned Cartesian product of nonempty compact sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductSet {
    axes: Vec<CompactSet1D>,
}

impl ProductSet {
    pub fn new(axes: Vec<CompactSet1D>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::EmptyList);
        }
        Ok(Self { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[CompactSet1D] {
        &self.axes
    }

    /// Product of axis measures.
    pub fn volume(&self) -> Rational {
        self.axes.iter().map(CompactSet1D::measure).product()
    }

    /// Minkowski sum, computed axis by axis.
    pub fn minkowski_sum(&self, other: &ProductSet) -> Result<ProductSet> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(ProductSet {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.minkowski_sum(b))
                .collect(),
        })
    }

    pub fn sum_all<'a, I>(sets: I) -> Result<ProductSet>
    where
        I: IntoIterator<Item = &'a ProductSet>,
    {
        let mut it = sets.into_iter();
        let first = it.next().ok_or(Error::EmptyList)?.clone();
        it.try_fold(first, |acc, p| acc.minkowski_sum(p))
    }
}

/// Index of a product set: the largest axis index.
pub fn product_index(p: &ProductSet) -> Rational {
    p.axes
        .iter()
        .map(schneider_index)
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Index of the Minkowski sum of product sets, reduced axis-wise.
pub fn product_sum_index(ps: &[ProductSet]) -> Result<Rational> {
    let first = ps.first().ok_or(Error::EmptyList)?;
    let n = first.dim();
    if let Some(bad) = ps.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.dim(),
        });
    }
    let mut best = Rational::zero();
    for axis in 0..n {
        let column: Vec<CompactSet1D> = ps.iter().map(|p| p.axes[axis].clone()).collect();
        let c = sum_index(&column)?;
        if c > best {
            best = c;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn set(pairs: &[(i64, i64)]) -> CompactSet1D {
        CompactSet1D::from_pairs(pairs.iter().map(|&(a, b)| (int(a), int(b)))).unwrap()
    }

    fn pts(xs: &[i64]) -> CompactSet1D {
        CompactSet1D::points(xs.iter().map(|&x| int(x))).unwrap()
    }

    #[test]
    fn gap_examples() {
        assert_eq!(largest_gap(&set(&[(0, 1), (2, 3)])), int(1));
        assert_eq!(largest_gap(&set(&[(0, 1)])), int(0));
        assert_eq!(largest_gap(&pts(&[0, 1, 2, 10])), int(8));
    }

    #[test]
    fn index_examples() {
        assert_eq!(schneider_index(&set(&[(0, 1), (2, 3)])), rat(1, 3));
        assert_eq!(schneider_index(&pts(&[0, 1])), int(1));
        let balanced =
            CompactSet1D::from_pairs([(int(0), rat(1, 2)), (int(1), rat(3, 2))]).unwrap();
        assert_eq!(schneider_index(&balanced), rat(1, 3));
        assert_eq!(schneider_index(&pts(&[7])), int(0));
    }

    #[test]
    fn sum_index_examples() {
        assert_eq!(sum_index(&[pts(&[0, 1]), pts(&[0, 2])]).unwrap(), rat(1, 3));
        assert_eq!(sum_index(&[set(&[(0, 1)]), set(&[(0, 1)])]).unwrap(), int(0));
        assert_eq!(
            sum_index(&[pts(&[0, 1]), pts(&[0, 1]), pts(&[0, 1])]).unwrap(),
            rat(1, 3)
        );
        assert_eq!(sum_index(&[]), Err(Error::EmptyList));
    }

    #[test]
    fn product_examples() {
        let a = set(&[(0, 1), (2, 3)]);
        let p = ProductSet::new(vec![a.clone(), set(&[(0, 1)])]).unwrap();
        assert_eq!(product_index(&p), rat(1, 3));
        let p = ProductSet::new(vec![pts(&[0, 1]), pts(&[0, 1])]).unwrap();
        assert_eq!(product_index(&p), int(1));
        let p = ProductSet::new(vec![set(&[(0, 1)])]).unwrap();
        assert_eq!(product_index(&p), int(0));
        assert_eq!(ProductSet::new(vec![]), Err(Error::EmptyList));
    }

    #[test]
    fn product_sum_examples() {
        let a = set(&[(0, 1), (2, 3)]);
        let b = set(&[(0, 1)]);
        let a_flat = ProductSet::new(vec![a.clone(), pts(&[0])]).unwrap();
        let b_flat = ProductSet::new(vec![pts(&[0]), b]).unwrap();
        assert_eq!(product_sum_index(&[a_flat.clone(), b_flat]).unwrap(), rat(1, 3));

        // {0,1} + {0,1} = {0,1,2}: gap 1 over diameter 2.
        let two = ProductSet::new(vec![pts(&[0, 1])]).unwrap();
        assert_eq!(product_sum_index(&[two.clone(), two]).unwrap(), rat(1, 2));

        assert_eq!(product_sum_index(std::slice::from_ref(&a_flat)).unwrap(), product_index(&a_flat));
    }

    #[test]
    fn product_dimension_mismatch() {
        let p1 = ProductSet::new(vec![pts(&[0])]).unwrap();
        let p2 = ProductSet::new(vec![pts(&[0]), pts(&[0])]).unwrap();
        assert_eq!(
            product_sum_index(&[p1.clone(), p2.clone()]),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        );
        assert!(p1.minkowski_sum(&p2).is_err());
        assert_eq!(product_sum_index(&[]), Err(Error::EmptyList));
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff_to_hull(&set(&[(0, 1), (2, 3)])), rat(1, 2));
        assert_eq!(hausdorff_to_hull(&set(&[(0, 1)])), int(0));
        assert_eq!(hausdorff_to_hull(&pts(&[0, 4])), int(2));
    }
}
